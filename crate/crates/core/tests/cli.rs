//! Command-line behaviour through the library entry point.

use std::io::Write;

use qlang::cli::{dispatch, EXIT_OK, EXIT_PARSE, EXIT_RUNTIME, EXIT_USAGE};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("qlang").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn run_add() {
    let (code, out, _) = run(&["run", &data("add.qasm"), "--input", "2,3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("output: [5]\n"), "{out}");
    let (code, out, _) = run(&["run", &data("add.qasm"), "--input", "2,3", "--mode", "algebraic", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outputs"][0][0].to_string(), "5");
}

#[test]
fn tzr_fuel_exhaustion_is_a_runtime_error() {
    let (code, _, err) = run(&["run", &data("tzr.qasm"), "--input", "0,4", "--mode", "algebraic", "--fuel", "10"]);
    assert_eq!(code, EXIT_RUNTIME);
    assert!(err.contains("fuel"), "{err}");
    let (code, out, _) = run(&["run", &data("tzr.qasm"), "--input", "0,2,6", "--trace"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("1 2 3 4 2 3 4 6 7 8") || out.contains("[1, 2, 3, 4, 2, 3, 4, 6, 7, 8]"), "{out}");
}

#[test]
fn grammar_commands() {
    let (code, out, _) = run(&["grammar", "prob", &data("coin.g"), "--from", "hh", "--to", "tt", "--mode", "pass"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("absolute: 0.25"), "{out}");
    let (code, out, _) = run(&["grammar", "prob", &data("xy.g"), "--from", "xy", "--to", "xxy", "--positions", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("absolute: 0.75"), "{out}");
    let (code, out, _) = run(&["grammar", "derive", &data("coin.g"), "--from", "hh", "--mode", "pass", "--unordered"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("ht\t0.5"), "{out}");
    let (code, _, _) = run(&["grammar", "prob", &data("coin.g"), "--to", "tt", "--mode", "pass", "--max-steps", "2"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn evolve_and_bit_verify() {
    let (code, out, _) = run(&["evolve", "--hamiltonian", "hop", "--modes", "10", "--oracle"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("oracle max difference"), "{out}");
    let (code, out, _) = run(&["bit", "verify", "--modes", "3"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn superpose_and_sample() {
    let (code, out, _) = run(&[
        "superpose",
        &data("write1.qasm"),
        &data("write2.qasm"),
        &data("write3.qasm"),
        "--samples",
        "300",
        "--seed",
        "1",
        "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object(), "{out}");
    let (code, out, _) = run(&["sample", &data("hop_init.state"), "--count", "10"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\t10"), "{out}");
}

#[test]
fn quantum_c_commands() {
    let (code, out, _) = run(&["qc", "compile", &data("add.qc")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("LOAD 0 ; b\n") && out.contains("ADD 1 ; c\n") && out.contains("STORE 2 ; a\n"), "{out}");
    let (code, out, _) = run(&["qc", "run", &data("pointer.qc"), "--mode", "algebraic"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("output: [99, 99]"), "{out}");
    let (code, out, _) = run(&["qc", "compile", &data("add.qc"), "--emit", "opexpr"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn exit_codes() {
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "LOAD\nFROB 3").unwrap();
    let path = bad.path().to_str().unwrap();
    assert_eq!(run(&["run", path]).0, EXIT_PARSE);
    assert_eq!(run(&["qc", "run", path]).0, EXIT_PARSE);
    assert_eq!(run(&["run", "/nonexistent/file.qasm"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["compile", &data("tzr.qasm"), "--form", "sequential"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["--version"]).0, EXIT_OK);
    let mut sub = tempfile::NamedTempFile::new().unwrap();
    writeln!(sub, "LOAD #1\nSUBTRACT #2\nHALT").unwrap();
    assert_eq!(run(&["run", sub.path().to_str().unwrap()]).0, EXIT_RUNTIME);
}

#[test]
fn binary_exits_with_dispatch_code() {
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_qlang"))
        .args(["run", &data("tzr.qasm"), "--input", "0,4", "--mode", "algebraic"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_RUNTIME));
    let ok = std::process::Command::new(env!("CARGO_BIN_EXE_qlang"))
        .args(["run", &data("add.qasm"), "--input", "2,3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("output: [5]"));
}
