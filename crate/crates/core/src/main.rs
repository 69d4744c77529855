use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use spanprog::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(4);
    }
    if cli.verbose > 0 {
        eprintln!(
            "done in {:.3}s, pass={}",
            start.elapsed().as_secs_f64(),
            outcome.pass
        );
    }
    ExitCode::from(outcome.exit_code() as u8)
}
