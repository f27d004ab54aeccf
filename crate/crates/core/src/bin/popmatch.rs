use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = popmatch::cli::run(std::env::args_os());
    print!("{}", report.stdout);
    eprint!("{}", report.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(report.exit_code as u8)
}
