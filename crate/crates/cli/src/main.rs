use std::io::Write;
use std::process::ExitCode;

use cpcover_cli::CliError;

fn main() -> ExitCode {
    match cpcover_cli::run(std::env::args_os()) {
        Ok(out) | Err(CliError::Help(out)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("cpcover: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
