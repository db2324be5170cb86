use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use midsearch::baselines::{
    run_exp3ix_selfplay, run_lucb_g, run_tsallis_inf_selfplay, run_uniform,
};
use midsearch::game::{
    hardness_stats, psne_exact, Entry, GameError, GameMatrix, InstanceFile, SamplingOracle,
};
use midsearch::harness::{
    emit_results, read_csv, render_svg, run_experiment, ExperimentConfig, HarnessError,
};
use midsearch::instances::{
    make_a_hard, make_planted_strict, make_random_strict, AHardParams, InstanceError,
};
use midsearch::midsearch::{find_psne_heuristic, find_psne_with_gap, StageKind, StageRecord};
use midsearch::run::{linear_grid, AlgorithmRun};
use midsearch::seed::OracleSeed;
use midsearch::verify::{meta_find_psne, MetaConfig};
use midsearch::AlgorithmError;

const DEFAULT_DELTA: f64 = 0.1;

/// Identify the pure strategy Nash equilibrium of a noisy zero-sum matrix game.
#[derive(Debug, Parser)]
#[command(name = "midsearch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the size, equilibrium and hardness of an instance.
    Instance {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Write the instance as JSON to this path.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// Run one algorithm once and print its trajectory.
    Run(RunArgs),
    /// Run a multi-trial experiment from a JSON config.
    Bench {
        config: PathBuf,
        /// Override the number of trials in the config.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Render success curves from a results CSV as SVG.
    Plot { csv: PathBuf, out: PathBuf },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InstanceArgs {
    /// Hard dueling instance `d,delta_min,beta`, e.g. `32,0.05,0.1`.
    #[arg(long, value_name = "D,DMIN,BETA")]
    a_hard: Option<String>,
    /// Instance JSON file.
    #[arg(long, visible_alias = "instance", value_name = "PATH")]
    file: Option<PathBuf>,
    /// Uniform random matrix with a strict equilibrium, `n,m,seed`.
    #[arg(long, value_name = "N,M,SEED")]
    random: Option<String>,
    /// Random matrix with a planted strict equilibrium, `n,m,seed`.
    #[arg(long, value_name = "N,M,SEED")]
    planted: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Doubling gap search with verification (fixed confidence).
    Meta,
    /// Elimination search with a known gap guess (fixed confidence).
    Gap,
    /// Fixed-budget elimination search.
    Midsearch,
    Exp3ix,
    Tsallis,
    LucbG,
    Uniform,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    alg: Algorithm,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Sample budget, required by the fixed-budget algorithms.
    #[arg(long)]
    budget: Option<u64>,
    /// Failure probability for meta, gap and lucb-g [default: 0.1].
    #[arg(long)]
    delta: Option<f64>,
    /// Gap guess for `gap`.
    #[arg(long)]
    gap: Option<f64>,
    /// Seed of the observation noise and the algorithm's own randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Checkpoints printed for fixed-budget algorithms.
    #[arg(long, default_value_t = 10)]
    checkpoints: usize,
    /// Print every elimination stage.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug)]
enum CliError {
    User(String),
    Internal(String),
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        CliError::User(e.to_string())
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::CountOverflow => CliError::Internal(e.to_string()),
            e => CliError::User(e.to_string()),
        }
    }
}

impl From<AlgorithmError> for CliError {
    fn from(e: AlgorithmError) -> Self {
        match e {
            AlgorithmError::Game(g) => g.into(),
            e => CliError::User(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        CliError::User(e.to_string())
    }
}

fn parse_triple<A: std::str::FromStr, B: std::str::FromStr, C: std::str::FromStr>(
    flag: &str,
    text: &str,
) -> Result<(A, B, C), CliError> {
    let bad = || {
        CliError::User(format!(
            "--{flag} expects three comma-separated values, got {text:?}"
        ))
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(bad());
    };
    Ok((
        a.parse().map_err(|_| bad())?,
        b.parse().map_err(|_| bad())?,
        c.parse().map_err(|_| bad())?,
    ))
}

impl InstanceArgs {
    fn build(&self) -> Result<GameMatrix, CliError> {
        if let Some(spec) = &self.a_hard {
            let (d, delta_min, beta) = parse_triple("a-hard", spec)?;
            Ok(make_a_hard(AHardParams::new(d, delta_min, beta))?)
        } else if let Some(path) = &self.file {
            Ok(InstanceFile::read(path)?.to_matrix()?)
        } else if let Some(spec) = &self.random {
            let (n, m, seed) = parse_triple("random", spec)?;
            Ok(make_random_strict(n, m, seed)?)
        } else if let Some(spec) = &self.planted {
            let (n, m, seed) = parse_triple("planted", spec)?;
            Ok(make_planted_strict(n, m, seed)?)
        } else {
            Err(CliError::User("no instance given".into()))
        }
    }
}

/// Integers without a fractional part, other values to six decimals (or in
/// scientific notation when tiny).
fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) && r.abs() < 1e15 {
        format!("{r:.0}")
    } else if x.abs() >= 1e-3 {
        let s = format!("{x:.6}");
        s.trim_end_matches('0').to_string()
    } else {
        format!("{x:.4e}")
    }
}

fn cmd_instance(args: &InstanceArgs, emit: Option<&PathBuf>) -> Result<String, CliError> {
    let matrix = args.build()?;
    let mut out = String::new();
    let _ = writeln!(out, "size: {}x{}", matrix.rows(), matrix.cols());
    let _ = writeln!(out, "noise: {}", matrix.noise());
    if !matrix.tags().is_empty() {
        let _ = writeln!(out, "tags: {}", matrix.tags().join(", "));
    }
    if let Some(path) = emit {
        InstanceFile::from(&matrix).write(path)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    match psne_exact(&matrix) {
        None => {
            let _ = writeln!(out, "PSNE: none");
        }
        Some(p) if !p.strict => {
            print!("{out}");
            return Err(CliError::User(format!(
                "PSNE {} is not strict; gaps and H1 are undefined",
                p.entry
            )));
        }
        Some(p) => {
            let h = hardness_stats(&matrix)?;
            let _ = writeln!(out, "PSNE: {}", p.entry);
            match h.dueling_h1 {
                Some(d) => {
                    let _ = writeln!(
                        out,
                        "H1 = {} (dueling hardness; the row and column sum is {})",
                        num(d),
                        num(h.h1)
                    );
                }
                None => {
                    let _ = writeln!(out, "H1 = {}", num(h.h1));
                }
            }
            let _ = writeln!(out, "delta_g = {}", num(h.delta_g));
            let _ = writeln!(out, "delta_min = {}", num(h.delta_min));
        }
    }
    Ok(out)
}

fn stage_line(s: &StageRecord) -> String {
    let kind = match s.kind {
        StageKind::Rows => "rows",
        StageKind::Columns => "columns",
        StageKind::Terminal => "terminal",
    };
    let mut line = format!(
        "  stage {:>2} {:<8} active {}x{}",
        s.index,
        kind,
        s.rows.len(),
        s.cols.len()
    );
    if let Some(p) = s.pivot {
        let side = if s.kind == StageKind::Rows {
            "column"
        } else {
            "row"
        };
        let _ = write!(line, ", pivot {side} {}", p + 1);
    }
    if let Some(e) = s.epsilon {
        let _ = write!(line, ", eps {}", num(e));
    }
    if !s.eliminated.is_empty() {
        let dropped: Vec<String> = s.eliminated.iter().map(|i| (i + 1).to_string()).collect();
        let _ = write!(line, ", dropped [{}]", dropped.join(" "));
    }
    let _ = write!(line, ", samples {}", s.samples);
    line
}

fn trajectory(out: &mut String, run: &AlgorithmRun) {
    let _ = writeln!(out, "{:>14}  guess", "samples");
    for c in &run.checkpoints {
        let guess = match c.guess {
            Some(g) if g.degraded => format!("{} (degraded)", g.entry),
            Some(g) => g.entry.to_string(),
            None => "-".into(),
        };
        let _ = writeln!(out, "{:>14}  {guess}", c.samples);
    }
}

fn cmd_run(args: &RunArgs) -> Result<String, CliError> {
    let matrix = Arc::new(args.instance.build()?);
    let truth = psne_exact(&matrix).map(|p| p.entry);
    let mut oracle = SamplingOracle::new(Arc::clone(&matrix), OracleSeed::new(args.seed, 0));
    let mut out = String::new();
    let name = args
        .alg
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let _ = writeln!(out, "algorithm: {name}");
    let _ = writeln!(out, "seed: {}", args.seed);
    let _ = writeln!(
        out,
        "instance: {}x{}, {}",
        matrix.rows(),
        matrix.cols(),
        matrix.noise()
    );

    let delta = args.delta.unwrap_or(DEFAULT_DELTA);
    let budget = || {
        args.budget
            .ok_or_else(|| CliError::User(format!("--budget is required for {name}")))
    };
    let (guess, degraded): (Option<Entry>, bool) = match args.alg {
        Algorithm::Meta => {
            let outcome = meta_find_psne(&mut oracle, delta, &MetaConfig::default())?;
            for r in &outcome.rounds {
                let _ = writeln!(
                    out,
                    "round {:>2}: gap {}, proposal {}{}, verify {} ({} samples, cap {})",
                    r.round,
                    num(r.gap),
                    r.search.entry,
                    if r.search.degraded { " (degraded)" } else { "" },
                    if r.verify.accepted() {
                        "accepted"
                    } else {
                        "rejected"
                    },
                    r.verify.samples,
                    r.verify.cap
                );
                if args.verbose {
                    for s in &r.search.stages {
                        let _ = writeln!(out, "{}", stage_line(s));
                    }
                }
            }
            (Some(outcome.entry), false)
        }
        Algorithm::Gap => {
            let gap = args
                .gap
                .ok_or_else(|| CliError::User("--gap is required for gap".into()))?;
            let outcome = find_psne_with_gap(&mut oracle, gap, delta)?;
            if args.verbose {
                for s in &outcome.stages {
                    let _ = writeln!(out, "{}", stage_line(s));
                }
            }
            (Some(outcome.entry), outcome.degraded)
        }
        alg => {
            let budget = budget()?;
            let grid = linear_grid(budget, args.checkpoints.max(1));
            let run = match alg {
                Algorithm::Midsearch => {
                    let outcome = find_psne_heuristic(&mut oracle, budget, &grid)?;
                    if args.verbose {
                        for s in &outcome.stages {
                            let _ = writeln!(out, "{}", stage_line(s));
                        }
                    }
                    outcome.run
                }
                Algorithm::Exp3ix => run_exp3ix_selfplay(&mut oracle, budget, &grid)?,
                Algorithm::Tsallis => run_tsallis_inf_selfplay(&mut oracle, budget, &grid)?,
                Algorithm::LucbG => run_lucb_g(&mut oracle, budget, delta, &grid)?,
                _ => run_uniform(&mut oracle, budget, &grid)?,
            };
            trajectory(&mut out, &run);
            (
                run.final_entry(),
                run.final_guess.is_some_and(|g| g.degraded),
            )
        }
    };

    match guess {
        Some(g) if degraded => {
            let _ = writeln!(out, "guess: {g} (degraded: no empirical saddle point)");
        }
        Some(g) => {
            let _ = writeln!(out, "guess: {g}");
        }
        None => {
            let _ = writeln!(out, "guess: none");
        }
    }
    let _ = writeln!(out, "samples used: {}", oracle.total_count());
    match truth {
        Some(t) => {
            let correct = !degraded && guess == Some(t);
            let _ = writeln!(out, "correct: {correct}");
        }
        None => {
            let _ = writeln!(out, "correct: n/a (the instance has no PSNE)");
        }
    }
    Ok(out)
}

fn cmd_bench(path: &PathBuf, trials: Option<u64>) -> Result<String, CliError> {
    let mut config = ExperimentConfig::read(path)?;
    if let Some(t) = trials {
        config.trials = t;
    }
    let output = config.output.clone();
    let seed = config.base_seed;
    let result = run_experiment(config)?;
    emit_results(&result, &output).map_err(|e| match e {
        HarnessError::Io { .. } => CliError::Internal(e.to_string()),
        e => CliError::User(e.to_string()),
    })?;

    let mut out = String::new();
    let _ = writeln!(out, "seed: {seed}");
    let _ = writeln!(
        out,
        "instance: {}x{}, PSNE {}, budget {} samples, {} trials",
        result.n,
        result.m,
        result.psne.map_or("none".to_string(), |e| e.to_string()),
        result.budget,
        result.trials
    );
    let _ = writeln!(
        out,
        "{:<10} {:>9} {:>7} {:>17} {:>14} {:>6}",
        "algorithm", "correct", "rate", "95% CI", "mean samples", "errors"
    );
    for summary in &result.algorithms {
        if let Some(r) = result.final_row(&summary.algorithm) {
            let _ = writeln!(
                out,
                "{:<10} {:>9} {:>7.3} {:>17} {:>14.1} {:>6}",
                r.algorithm,
                format!("{}/{}", r.successes, r.trials),
                r.rate,
                format!("[{:.3}, {:.3}]", r.wilson_lo, r.wilson_hi),
                r.mean_samples_used,
                summary.errors
            );
        }
    }
    for (label, p) in [
        ("csv", &output.csv),
        ("json", &output.json),
        ("svg", &output.svg),
    ] {
        if let Some(p) = p {
            let _ = writeln!(out, "wrote {label}: {}", p.display());
        }
    }
    let _ = writeln!(out, "wall time: {:.1} s", result.wall_time);
    Ok(out)
}

fn cmd_plot(csv: &PathBuf, out: &PathBuf) -> Result<String, CliError> {
    let rows = read_csv(csv)?;
    std::fs::write(out, render_svg(&rows))
        .map_err(|e| CliError::Internal(format!("{}: {e}", out.display())))?;
    Ok(format!("wrote {}\n", out.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = std::panic::catch_unwind(|| match &cli.command {
        Command::Instance { instance, emit } => cmd_instance(instance, emit.as_ref()),
        Command::Run(args) => cmd_run(args),
        Command::Bench { config, trials } => cmd_bench(config, *trials),
        Command::Plot { csv, out } => cmd_plot(csv, out),
    });
    match result {
        Ok(Ok(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Err(CliError::User(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(CliError::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
