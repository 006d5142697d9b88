use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use soliton_spectra::app::run_file;
use soliton_spectra::config::Command;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Profile,
    Spectrum,
    Scan,
    Virial,
    Derrick,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Profile => Command::Profile,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Scan => Command::Scan,
            Cmd::Virial => Command::Virial,
            Cmd::Derrick => Command::Derrick,
            Cmd::Verify => Command::Verify,
        }
    }
}

/// Solitary-wave profiles, linearized spectra and stability diagnostics.
#[derive(Debug, Parser)]
#[command(name = "soliton-spectra", version)]
struct Cli {
    command: Cmd,
    /// JSON run config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output.dir` from the config.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads for scan rows; defaults to the number of CPUs.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(k);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let result = pool.install(|| run_file(cli.command.into(), &cli.config, cli.output_dir.as_deref()));
    match result {
        Ok(out) => {
            print!("{}", out.report);
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            if out.failures > 0 {
                eprintln!("error: {} failed item(s)", out.failures);
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
