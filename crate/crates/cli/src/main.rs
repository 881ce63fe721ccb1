use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tempora_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = std::env::var("TEMPORA_TOL").ok();
    let mut stdout = std::io::stdout().lock();
    let code = match run(&cli, tol.as_deref()) {
        Ok(out) => {
            if stdout.write_all(out.stdout.as_bytes()).is_err() {
                return ExitCode::from(4);
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stdout, "{}", e.to_json());
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
