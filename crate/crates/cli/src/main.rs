//! `fsdim`: generate sequences, estimate conditional finite-state dimension,
//! run the property suites and validate automaton files.
//!
//! Exit codes: 0 on success, 1 when a validation, cross-check or property
//! suite fails, 2 on usage and configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use fsdim::autocomplexity::{validate_mode, DEFAULT_L_MAX, DEFAULT_M_MAX};
use fsdim::automaton::{read_automaton, Automaton};
use fsdim::bitseq::{generate, write_bits, SequenceSpec};
use fsdim::checks::{run_suite, Suite};
use fsdim::gambler::validate_gambler;
use fsdim::report::{estimate_all, render, RunConfig};
use fsdim::Error;

#[derive(Parser)]
#[command(
    name = "fsdim",
    version,
    about = "Conditional finite-state dimension estimators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Write a bit sequence as ASCII 0/1.
    Gen {
        /// champernowne | zeros | ones | periodic:<bits> | bernoulli:<num>/<den>:<seed> | <path>
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the estimators and write a report.
    Estimate(EstimateArgs),
    /// Run the randomized property suites.
    Check {
        /// Suites to run (default: all).
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Validate an automaton file.
    Validate {
        #[arg(long, alias = "automaton")]
        mode: PathBuf,
        /// Longest condition enumerated for description modes.
        #[arg(long = "Lmax", default_value_t = DEFAULT_L_MAX)]
        l_max: usize,
        /// Longest description enumerated for description modes.
        #[arg(long = "mmax", default_value_t = DEFAULT_M_MAX)]
        m_max: usize,
    },
}

#[derive(Args)]
struct EstimateArgs {
    /// Flat `key = value` config; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    beta_shift: Option<usize>,
    #[arg(long)]
    beta_pad: Option<u8>,
    #[arg(long)]
    n: Option<usize>,
    /// Block sizes, comma-separated.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    /// aligned | sliding
    #[arg(long)]
    mode: Option<String>,
    /// Subset of entropy,auto,apriori,gambler.
    #[arg(long)]
    characterizations: Option<String>,
    /// Gambler automaton file; repeatable.
    #[arg(long)]
    gambler: Vec<PathBuf>,
    /// json | csv
    #[arg(long)]
    format: Option<String>,
    /// Report file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidSpec(_) => Self::Usage(e.into()),
            _ => Self::Check(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Check(e)
    }
}

fn build_config(args: &EstimateArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(Failure::Usage)?;
            RunConfig::from_kv(&text)?
        }
        None => {
            let alpha = args.alpha.as_deref().ok_or_else(|| {
                Failure::Usage(anyhow::anyhow!("--alpha or --config is required"))
            })?;
            RunConfig::new(SequenceSpec::parse(alpha)?)
        }
    };
    let mut set = |key: &str, value: Option<String>| -> Result<(), Failure> {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
        Ok(())
    };
    set("alpha", args.alpha.clone())?;
    set("beta", args.beta.clone())?;
    set("beta-shift", args.beta_shift.map(|v| v.to_string()))?;
    set("beta-pad", args.beta_pad.map(|v| v.to_string()))?;
    set("n", args.n.map(|v| v.to_string()))?;
    set("k", args.k.clone())?;
    set("n-max", args.n_max.map(|v| v.to_string()))?;
    set("burn-in", args.burn_in.map(|v| v.to_string()))?;
    set("mode", args.mode.clone())?;
    set("characterizations", args.characterizations.clone())?;
    set("format", args.format.clone())?;
    set("out", args.out.as_ref().map(|p| p.display().to_string()))?;
    for g in &args.gambler {
        cfg.gambler_specs.push(g.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_output(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn estimate(args: &EstimateArgs) -> Result<(), Failure> {
    let cfg = build_config(args)?;
    let report = estimate_all(&cfg)?;
    write_output(cfg.output.as_ref(), &render(&report))?;
    let failed: Vec<_> = report.cross_checks.iter().filter(|c| !c.holds).collect();
    if failed.is_empty() {
        return Ok(());
    }
    for c in &failed {
        eprintln!(
            "cross-check failed: {} (k = {}, {}): {} > {} + {}",
            c.name, c.k, c.style, c.lhs, c.rhs, c.slack
        );
    }
    Err(Failure::Check(anyhow::anyhow!(
        "{} cross-check(s) failed",
        failed.len()
    )))
}

fn check(suites: &[String], seed: u64, cases: usize) -> Result<(), Failure> {
    let suites: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites
            .iter()
            .map(|s| s.parse().map_err(|e: Error| Failure::Usage(e.into())))
            .collect::<Result<_, _>>()?
    };
    let mut failed = 0;
    for suite in suites {
        let report = run_suite(suite, seed, cases)?;
        println!("{report}");
        failed += usize::from(!report.passed());
    }
    if failed > 0 {
        return Err(Failure::Check(anyhow::anyhow!("{failed} suite(s) failed")));
    }
    Ok(())
}

fn validate(path: &PathBuf, l_max: usize, m_max: usize) -> Result<(), Failure> {
    let automaton = read_automaton(path).map_err(|e| match e {
        Error::Io { .. } => Failure::Usage(e.into()),
        _ => Failure::Check(e.into()),
    })?;
    match &automaton {
        Automaton::Mode(d) => match validate_mode(d, l_max, m_max) {
            Ok(c) => println!(
                "ok: mode with {} vertices, observed valence {c} <= declared {}",
                d.vertices().len(),
                d.declared_valence()
            ),
            Err(Error::ValenceExceeded {
                declared,
                observed,
                b,
                p,
                a_set,
            }) => {
                println!("valence exceeded: declared {declared}, observed {observed}");
                println!(
                    "witness: B = \"{b}\", P = \"{p}\", A in {{{}}}",
                    a_set.join(", ")
                );
                return Err(Failure::Check(anyhow::anyhow!(
                    "mode is not {declared}-valued"
                )));
            }
            Err(e) => return Err(e.into()),
        },
        Automaton::Gambler(g) => {
            validate_gambler(g)?;
            println!(
                "ok: gambler with {} states, look-ahead {}",
                g.num_states(),
                g.lookahead()
            );
        }
        Automaton::Process(m) => {
            m.validate()?;
            println!("ok: process with {} states", m.num_states());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { kind, n, out } => {
            let spec = SequenceSpec::parse(&kind)?;
            let bits = generate(&spec, n)?;
            match out {
                Some(path) => write_bits(&path, &bits)?,
                None => println!("{bits}"),
            }
            Ok(())
        }
        Command::Estimate(args) => estimate(&args),
        Command::Check { suite, seed, cases } => check(&suite, seed, cases),
        Command::Validate { mode, l_max, m_max } => validate(&mode, l_max, m_max),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
