use std::io::Write;

fn main() {
    let outcome = chevalley_core::cli::run_args(std::env::args_os());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.output.as_bytes());
    let _ = out.flush();
    std::process::exit(outcome.code);
}
