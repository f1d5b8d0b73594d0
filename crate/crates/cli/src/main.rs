use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tac_cli::{run_text, CliError, EXIT_USAGE};

/// Runs a session file of rings, complexes and commands.
#[derive(Parser, Debug)]
#[command(name = "tac", version, about)]
struct Args {
    /// Session file; reads stdin when absent or `-`.
    session: Option<PathBuf>,
    /// Emit `key=value` blocks instead of the human report.
    #[arg(long)]
    machine: bool,
    /// Print the parsed session back and exit.
    #[arg(long)]
    print: bool,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => text = std::fs::read_to_string(p)?,
        _ => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let text = match read_input(args.session.as_ref()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("tac: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if args.print {
        return match tac_cli::parse_session(&text) {
            Ok(s) => {
                print!("{}", s.to_text());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("tac: {e}");
                ExitCode::from(EXIT_USAGE as u8)
            }
        };
    }
    match run_text(&text) {
        Ok(out) => {
            print!("{}", out.render(args.machine));
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("tac: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
