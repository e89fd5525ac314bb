use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use kcdr::harness::{run_experiment, Experiment, ExperimentConfig};
use kcdr::streaming::StreamMode;

/// Run a k-center dimension-reduction experiment.
#[derive(Debug, Parser)]
#[command(name = "kcdr", version)]
struct Cli {
    /// dimred-sweep, streaming-demo, lowerbound-demo or solver-bench
    experiment: Experiment,
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Output base path; writes <out>.csv and <out>.json
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fail instead of falling back to heuristics when oracles are too large
    #[arg(long)]
    exact: bool,
    /// exact-sim or sketch
    #[arg(long)]
    mode: Option<StreamMode>,
    #[arg(long)]
    eps: Option<f64>,
    /// Replaces the configured alphas with a single value
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("{}", Cli::command().render_usage());
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("cannot read {}: {e}", cli.config.display())),
    };
    let mut config: ExperimentConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => return usage_error(format!("bad config: {e}")),
    };
    config.experiment = cli.experiment;
    config.exact |= cli.exact;
    if let Some(m) = cli.mode {
        config.mode = m;
    }
    if let Some(e) = cli.eps {
        config.eps = e;
    }
    if let Some(a) = cli.alpha {
        config.alphas = vec![a];
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(o) = cli.out {
        config.output = Some(o);
    }
    if let Err(e) = config.validate() {
        return usage_error(e);
    }
    let report = match run_experiment(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &config.output {
        Some(out) => match report.write(out) {
            Ok((csv, json)) => eprintln!("wrote {} and {}", csv.display(), json.display()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        None => match report.to_json() {
            Ok(j) => println!("{j}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    }
    let violations = report.violations();
    if violations > 0 {
        eprintln!("{violations} invariant violation(s)");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
