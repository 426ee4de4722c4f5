use std::io::{self, Write};
use std::process::ExitCode;

use nnq::catalog::{run, CatalogError};

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(std::env::args_os(), &mut out);
    let _ = out.flush();
    match result {
        Ok(o) if o.passed() => ExitCode::SUCCESS,
        Ok(o) => {
            eprintln!("FAILED: {}", o.failure.unwrap_or_default());
            ExitCode::from(1)
        }
        Err(CatalogError::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
