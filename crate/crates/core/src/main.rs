use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use collapse_lab::cli::{run, threads_from_env, Overrides};

/// Runs one collapse-model experiment and writes its report.
#[derive(Debug, Parser)]
#[command(name = "collapse-lab", version)]
struct Args {
    /// born, chsh-quantum, chsh-lhv, nosignal, order-invariance,
    /// conservation or collapse-trace.
    experiment: String,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<u64>,
    /// Output file; standard output when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let result = threads_from_env().and_then(|threads| {
        if let Some(n) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| collapse_lab::Error::Internal(e.to_string()))?;
        }
        let overrides = Overrides {
            experiment: Some(args.experiment),
            seed: args.seed,
            runs: args.runs,
            out: args.out,
            format: args.format,
        };
        run(args.config.as_ref(), &overrides)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
