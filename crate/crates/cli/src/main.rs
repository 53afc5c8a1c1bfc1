use clap::Parser;
use ellipcmr_cli::{run, Cli};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("ELLIPCMR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            return ExitCode::from(3);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &report.text),
        None => std::io::stdout().write_all(report.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error[io]: {e}");
        return ExitCode::from(3);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("certificates failed");
        ExitCode::from(1)
    }
}
