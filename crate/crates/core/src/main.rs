use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let mut diag = std::io::stderr().lock();
    ExitCode::from(casimir::cli::run(std::env::args_os(), &mut out, &mut diag))
}
