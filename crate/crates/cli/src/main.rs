use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = abc_chain_cli::Cli::parse();
    match abc_chain_cli::execute(cli) {
        Ok(Some(csv)) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(csv.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abc-chain: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
