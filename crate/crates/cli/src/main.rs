use std::process::ExitCode;

use clap::Parser;
use nontwist_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        out.write()?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            for note in &out.notes {
                eprintln!("note: {note}");
            }
            for (path, _) in &out.files {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("nontwist: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
