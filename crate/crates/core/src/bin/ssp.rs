use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ssp_rl::envs::FeaturedMdp;
use ssp_rl::format::{parse_mdp, write_mdp};
use ssp_rl::harness::{
    aggregate, parse_overrides, parse_pairs, run, write_outputs, ExperimentConfig,
};
use ssp_rl::mdp::{auxiliary_certificate, trapping_set, value_iteration};
use ssp_rl::record::CsvTable;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "ssp",
    version,
    about = "Actor-critic and critic-actor learning for stochastic shortest path MDPs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an environment exactly and print V* with a greedy policy.
    Solve {
        /// MDP file; otherwise the environment is taken from --env ... flags.
        #[arg(long)]
        mdp: Option<PathBuf>,
        /// Config overrides, e.g. `--env frozen-lake --objective max`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Run an experiment: `ssp run [CONFIG] [--key value]...`.
    Run {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Merge per-seed CSVs into per-interval mean and standard deviation.
    Aggregate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an MDP file and report whether every policy terminates.
    Validate { path: PathBuf },
    /// Write a built-in environment in the MDP text format (to --output, or
    /// stdout).
    Export {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
}

fn config_from(args: &[String]) -> Result<ExperimentConfig> {
    let (file, rest) = match args.first() {
        Some(first) if !first.starts_with("--") => (Some(first), &args[1..]),
        _ => (None, args),
    };
    let mut pairs = match file {
        Some(path) => {
            parse_pairs(&std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?)?
        }
        None => Vec::new(),
    };
    pairs.extend(parse_overrides(rest)?);
    Ok(ExperimentConfig::from_pairs(pairs)?)
}

fn print_solution(env: &FeaturedMdp, cfg: Option<&ExperimentConfig>) -> Result<()> {
    let objective = cfg.map(|c| c.objective).unwrap_or_default();
    let mdp = &env.mdp;
    let (v, greedy) = value_iteration(mdp, 1e-12, objective)?;
    println!("# objective={objective}");
    println!("state,value,action");
    for &i in mdp.nonterminal_states() {
        let a = greedy.action(i).map(|a| a.to_string()).unwrap_or_default();
        println!("{i},{},{a}", v.get(i));
    }
    let start: f64 = mdp.h0().iter().zip(v.as_slice()).map(|(h, x)| h * x).sum();
    println!("# expected_start_value={start}");
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Solve { mdp, overrides } => match mdp {
            Some(path) => {
                let env = parse_mdp(&std::fs::read_to_string(&path)?)
                    .with_context(|| format!("loading {}", path.display()))?;
                let cfg = if overrides.is_empty() {
                    None
                } else {
                    Some(ExperimentConfig::from_pairs(parse_overrides(&overrides)?)?)
                };
                print_solution(&env, cfg.as_ref())
            }
            None => {
                let cfg = ExperimentConfig::from_pairs(parse_overrides(&overrides)?)?;
                print_solution(&cfg.env.build()?, Some(&cfg))
            }
        },
        Command::Run { args } => {
            let cfg = config_from(&args)?;
            let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("runs"));
            let records = run(&cfg)?;
            for path in write_outputs(&cfg, &records, &dir)? {
                println!("{}", path.display());
            }
            let failed: Vec<String> = cfg
                .seeds
                .iter()
                .zip(&records)
                .filter_map(|(s, r)| r.failure.as_ref().map(|f| format!("seed {s}: {f}")))
                .collect();
            if !failed.is_empty() {
                bail!(
                    "{} of {} seeds failed:\n{}",
                    failed.len(),
                    records.len(),
                    failed.join("\n")
                );
            }
            Ok(())
        }
        Command::Aggregate { inputs, output } => {
            let tables = inputs
                .iter()
                .map(|p| {
                    let text = std::fs::read_to_string(p)
                        .with_context(|| format!("reading {}", p.display()))?;
                    CsvTable::parse(&text).with_context(|| format!("parsing {}", p.display()))
                })
                .collect::<Result<Vec<_>>>()?;
            let out = aggregate(&tables)?;
            match output {
                Some(p) => std::fs::write(&p, out)?,
                None => print!("{out}"),
            }
            Ok(())
        }
        Command::Validate { path } => {
            let env = parse_mdp(&std::fs::read_to_string(&path)?)
                .with_context(|| format!("validating {}", path.display()))?;
            let m = &env.mdp;
            println!(
                "ok: {} states ({} non-terminal), {} actions, terminal {}",
                m.n_states(),
                m.n_nonterminal(),
                m.n_actions(),
                m.terminal()
            );
            if let Some(f) = &env.state_features {
                println!("state features: dimension {}", f.dim());
            }
            if let Some(f) = &env.action_features {
                println!("state-action features: dimension {}", f.dim());
            }
            let trap = trapping_set(m);
            if trap.is_empty() {
                let c = auxiliary_certificate(m, 1e-12)?;
                println!(
                    "every stationary policy terminates; contraction modulus {}",
                    c.beta
                );
            } else {
                println!("warning: some policy can stay forever in states {trap:?}");
            }
            Ok(())
        }
        Command::Export { overrides } => {
            let cfg = ExperimentConfig::from_pairs(parse_overrides(&overrides)?)?;
            let text = write_mdp(&cfg.env.build()?);
            match cfg.output {
                Some(p) => std::fs::write(&p, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}
