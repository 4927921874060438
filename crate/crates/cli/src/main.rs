use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ptik::Cli::parse();
    match ptik::run(&cli.command) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.category());
            ExitCode::from(e.exit_code())
        }
    }
}
