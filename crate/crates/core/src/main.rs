use std::process::ExitCode;

use clap::Parser;
use filtsurf::cli::{exit_code, run, Cli, EXIT_FAILURE};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FILTSURF_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAILURE as u8);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
