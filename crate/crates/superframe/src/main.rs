use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use superframe::output::{emit_outputs, report_json};
use superframe::runs::{
    config_hash, run_appendix_suite, run_appendix_verification, run_compose, run_invariance, run_sample, RunResult,
    DEFAULT_GROUPS,
};
use superframe::scenario::{parse_scenario, ScenarioConfig};

#[derive(Parser, Debug)]
#[command(name = "superframe", version, about = "Superposed reference frame experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario JSON file.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Directory for report.json, timings.json and field CSVs. Without it the
    /// report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of Born samples.
    #[arg(long, global = true, default_value_t = 100_000)]
    n: u64,
    /// Group for verify-appendix; all catalog defaults when absent.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Random pairs per group for verify-appendix.
    #[arg(long, global = true, default_value_t = 100)]
    trials: u64,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Compose the scenario's chain of superpositions.
    Compose,
    /// Born-sample the first superposition.
    Sample,
    /// Evolve, transform and compare in both orders.
    Invariance,
    /// Check group-algebra convolution on finite groups.
    VerifyAppendix,
    /// Every run the scenario supports, plus verify-appendix.
    All,
}

fn load(cli: &Cli) -> Result<ScenarioConfig> {
    let Some(path) = &cli.scenario else {
        bail!("--scenario is required for this command");
    };
    let mut cfg = parse_scenario(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
        cfg.raw.seed = seed;
    }
    Ok(cfg)
}

fn appendix(cli: &Cli) -> Result<RunResult> {
    let seed = cli.seed.unwrap_or(0);
    Ok(match &cli.group {
        Some(g) => run_appendix_verification(g, cli.trials, seed)?,
        None => run_appendix_suite(&DEFAULT_GROUPS, cli.trials, seed)?,
    })
}

fn run(cli: &Cli) -> Result<RunResult> {
    Ok(match cli.command {
        Command::Compose => run_compose(&load(cli)?)?,
        Command::Sample => run_sample(&load(cli)?, cli.n)?,
        Command::Invariance => run_invariance(&load(cli)?)?,
        Command::VerifyAppendix => appendix(cli)?,
        Command::All => {
            let cfg = load(cli)?;
            let mut all = RunResult::new("all", config_hash(&cfg));
            all.details = serde_json::json!({});
            if cfg.superpositions.len() >= 2 {
                all.absorb("compose", run_compose(&cfg)?);
            }
            all.absorb("sample", run_sample(&cfg, cli.n)?);
            if cfg.fields.is_some() {
                all.absorb("invariance", run_invariance(&cfg)?);
            }
            all.absorb("verify_appendix", appendix(cli)?);
            all
        }
    })
}

/// Usage and configuration problems exit with 2, failed checks with 1.
fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let emitted = match &cli.out {
        Some(dir) => emit_outputs(&result, dir).map(|paths| {
            for p in paths {
                log::info!("wrote {}", p.display());
            }
        }),
        None => {
            print!("{}", report_json(&result));
            Ok(())
        }
    };
    if let Err(e) = emitted.context("writing outputs") {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    for c in result.checks.iter().filter(|c| c.counts()) {
        eprintln!("FAIL {}: {} > {}", c.name, c.value, c.tolerance);
    }
    if result.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
