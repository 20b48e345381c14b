use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = infcones_cli::run(std::env::args_os());
    if !out.is_empty() {
        let _ = writeln!(std::io::stdout().lock(), "{}", out.trim_end());
    }
    ExitCode::from(code as u8)
}
