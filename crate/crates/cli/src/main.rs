use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cvtele_cli::args::Cli;
use cvtele_cli::{ledger, run, thread_count};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match thread_count(std::env::var("CVTELE_THREADS").ok().as_deref()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool is configured once");
    }

    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    if let Some(text) = &outcome.stdout {
        let mut out = std::io::stdout().lock();
        if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
            return ExitCode::FAILURE;
        }
    }
    if let Err(e) = ledger::append(&cli.ledger, &outcome.record) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    if outcome.success {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: verification failed");
        ExitCode::FAILURE
    }
}
