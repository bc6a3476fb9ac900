use std::io;
use std::process::ExitCode;

use clap::Parser;
use sghdg::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let code = match run(cli, &mut stdout.lock()) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("sghdg: error: {msg}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
