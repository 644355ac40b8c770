use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use h2cruise_cli::commands::{self, Cli};
use h2cruise_cli::exit;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("H2CRUISE_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("h2cruise: error kind=usage code={}: {first}", exit::USAGE);
            eprint!("{}", e.render());
            return ExitCode::from(exit::USAGE);
        }
    };

    match commands::run(cli, &mut io::stdout().lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
