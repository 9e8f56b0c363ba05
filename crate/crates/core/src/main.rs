use std::io;

const STACK_BYTES: usize = 256 << 20;

fn main() {
    let code = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(|| qlang::cli::dispatch(std::env::args_os(), &mut io::stdout(), &mut io::stderr()))
        .expect("spawn main thread")
        .join()
        .unwrap_or(101);
    std::process::exit(code);
}
