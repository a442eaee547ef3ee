use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = modunit_cli::run_args(std::env::args_os());
    print!("{}", outcome.stdout);
    if !outcome.stdout.is_empty() && !outcome.stdout.ends_with('\n') {
        println!();
    }
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr.trim_end());
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
