//! Command-line front end for the zombie pursuit toolkit.
//!
//! Every subcommand prints machine-first `key=value` lines (plots are for
//! external tooling), starting with the root seed so any run can be
//! replayed exactly.  When `--seed` is absent a seed is drawn from system
//! entropy and printed all the same.  `--workers` caps the thread pool;
//! results never depend on it, only wall time does.
//!
//! Exit codes: 0 success, 2 usage error, 3 runtime error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use zombies::strategy::BUILTIN_NAMES;
use zombies::{
    bracket_zombie_number, capture_field, check_domination, diagonal_survival_experiment,
    estimate_capture_prob, exact_tn, export_field, local_search, parse_strategy,
    r3_return_probability, weight, ExportFormat, Strategy, SurvivorPolicy, TorusPoint,
};

#[derive(Parser)]
#[command(name = "zombies", version, about = "Pursuit on the toroidal grid: exact fields, simulation, search")]
struct Cli {
    /// Root seed for all randomness; drawn from system entropy when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    /// `x,y,p` rows for nonzero cells.
    Csv,
    /// Portable graymap, dark = probable.
    Pgm,
}

#[derive(Subcommand)]
enum Command {
    /// Total field mass t(S) and its scaled forms for one strategy.
    Weight {
        /// Grid side length.
        #[arg(long)]
        n: usize,
        /// Builtin name (see `--strategy help`) or a strategy file path.
        #[arg(long)]
        strategy: String,
        /// Also export the full field here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        /// With `--format pgm`, write the ASCII variant.
        #[arg(long)]
        ascii: bool,
    },
    /// Export the capture-probability field as an image or CSV.
    Heatmap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        strategy: String,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Pgm)]
        format: OutFormat,
        #[arg(long)]
        ascii: bool,
    },
    /// Play many independent games and report the capture frequency.
    Simulate {
        #[arg(long)]
        n: usize,
        /// Number of zombies.
        #[arg(long)]
        k: u64,
        /// Survivor: a strategy source, `flee_nearest`, or `diagonal_forever`.
        #[arg(long, default_value = "stay")]
        policy: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Rounds before the survivor wins by default [default: 10n].
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Bisect for the smallest horde reaching capture frequency 1/2.
    Bracket {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "stay")]
        policy: String,
        #[arg(long, default_value_t = 400)]
        trials: u64,
    },
    /// Return frequency of the lazy drift chain after y/2 steps.
    R3 {
        /// Starting separation (even, at least 2).
        #[arg(long)]
        y: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Survival frequency of the forever-diagonal survivor against a thin horde.
    Lowerbound {
        #[arg(long)]
        n: usize,
        /// Slack factor in the horde size sqrt(n)/omega.
        #[arg(long, conflicts_with = "omega_log")]
        omega: Option<f64>,
        /// Use omega = ln n (the default when --omega is absent).
        #[arg(long)]
        omega_log: bool,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Exact minimum of t over every length-m script, by enumeration.
    ExactTn {
        /// Script length (grid size 4m); capped to keep 5^m tractable.
        #[arg(long)]
        m: usize,
    },
    /// Hill-climb from an initial strategy toward smaller t.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "stay")]
        init: String,
        /// Strategy evaluations allowed after the initial one.
        #[arg(long, default_value_t = 1000)]
        budget: u64,
    },
    /// Fit the growth exponent of t against the grid size.
    Sweep {
        #[arg(long)]
        strategy: String,
        /// Grid sizes, comma-separated; at least three.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Gaps between the column sums and their one-dimensional couplings.
    Domination {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        strategy: String,
    },
    /// Run several boards against one shared horde and coin tape.
    Coupled {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u64,
        /// One board per occurrence; duplicates must finish identically.
        #[arg(long = "strategy", required = true)]
        strategies: Vec<String>,
    },
}

/// `t` values are dyadic and often integral; print them without a
/// spurious `.0` when they are.
fn count(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

fn entropy_seed() -> u64 {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    zombies::rng::mix(nanos ^ u64::from(std::process::id()) << 32)
}

/// A builtin name, else a strategy file; the file must match the grid.
fn resolve_strategy(source: &str, n: usize, seed: u64) -> Result<Strategy> {
    match zombies::builtin(source, n, seed) {
        Ok(s) => Ok(s),
        Err(zombies::Error::UnknownStrategy(_)) if Path::new(source).is_file() => {
            let text = fs::read_to_string(source)
                .with_context(|| format!("cannot read strategy file {source}"))?;
            let s = parse_strategy(&text)
                .with_context(|| format!("bad strategy file {source}"))?;
            if s.n() != n {
                bail!("strategy file {source} is for n={}, not n={n}", s.n());
            }
            Ok(s)
        }
        Err(zombies::Error::UnknownStrategy(name)) => {
            bail!("unknown strategy '{name}' and no such file; builtins: {}", BUILTIN_NAMES.join(", "))
        }
        Err(e) => Err(e.into()),
    }
}

fn resolve_policy(name: &str, n: usize, seed: u64) -> Result<SurvivorPolicy> {
    Ok(match name {
        "flee_nearest" => SurvivorPolicy::FleeNearest,
        "diagonal_forever" => SurvivorPolicy::DiagonalForever,
        source => SurvivorPolicy::Scripted {
            strategy: resolve_strategy(source, n, seed)?,
            anchor: TorusPoint::new(0, 0),
        },
    })
}

fn export_format(format: OutFormat, ascii: bool) -> ExportFormat {
    match (format, ascii) {
        (OutFormat::Csv, _) => ExportFormat::Csv,
        (OutFormat::Pgm, false) => ExportFormat::PgmBinary,
        (OutFormat::Pgm, true) => ExportFormat::PgmAscii,
    }
}

fn run(command: Command, seed: u64) -> Result<()> {
    match command {
        Command::Weight { n, strategy, out, format, ascii } => {
            let s = resolve_strategy(&strategy, n, seed)?;
            let w = weight(&s)?;
            println!("n={n}");
            println!("strategy={strategy}");
            println!("m={}", s.m());
            println!("t={}", count(w.t));
            println!("t_over_n2_8={:?}", w.t_scaled_sq);
            println!("t_over_n32={:?}", w.t_scaled_32);
            if let Some(path) = out {
                let field = capture_field(&s)?;
                let bytes = export_field(&field, export_format(format, ascii));
                fs::write(&path, bytes)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                println!("wrote={}", path.display());
            }
        }
        Command::Heatmap { n, strategy, out, format, ascii } => {
            let s = resolve_strategy(&strategy, n, seed)?;
            let field = capture_field(&s)?;
            let bytes = export_field(&field, export_format(format, ascii));
            fs::write(&out, bytes).with_context(|| format!("cannot write {}", out.display()))?;
            println!("n={n}");
            println!("strategy={strategy}");
            println!("cells={}", field.nonzero_cells().count());
            println!("wrote={}", out.display());
        }
        Command::Simulate { n, k, policy, trials, horizon } => {
            let p = resolve_policy(&policy, n, seed)?;
            let horizon = horizon.unwrap_or(10 * n as u64);
            let est = estimate_capture_prob(n, k, &p, horizon, trials, seed)?;
            println!("n={n}");
            println!("k={k}");
            println!("policy={policy}");
            println!("horizon={horizon}");
            println!("trials={trials}");
            println!("captured_frac={:?}", est.captured_frac);
            println!("ci_halfwidth={:?}", est.ci_halfwidth);
        }
        Command::Bracket { n, policy, trials } => {
            let p = resolve_policy(&policy, n, seed)?;
            let (lo, hi) = bracket_zombie_number(n, &p, trials, seed)?;
            println!("n={n}");
            println!("policy={policy}");
            println!("trials={trials}");
            println!("k_lo={lo}");
            println!("k_hi={hi}");
        }
        Command::R3 { y, trials } => {
            let frac = r3_return_probability(y, trials, seed)?;
            println!("y={y}");
            println!("trials={trials}");
            println!("return_frac={frac:?}");
            println!("sqrt_y_scaled={:?}", (y as f64).sqrt() * frac);
        }
        Command::Lowerbound { n, omega, omega_log: _, trials } => {
            let omega = omega.unwrap_or_else(|| (n as f64).ln());
            let k = ((n as f64).sqrt() / omega).floor() as u64;
            let survival = diagonal_survival_experiment(n, omega, trials, seed)?;
            println!("n={n}");
            println!("omega={omega:?}");
            println!("k={k}");
            println!("horizon={}", 10 * n);
            println!("trials={trials}");
            println!("survival_frac={survival:?}");
        }
        Command::ExactTn { m } => {
            let report = exact_tn(m)?;
            println!("m={m}");
            println!("evaluated={}", report.evaluations);
            println!("t_min={}", count(report.best_t));
            println!("best={}", report.best.move_string());
            let start = report.best.start();
            println!("best_start={},{}", start.x, start.y);
        }
        Command::Search { n, init, budget } => {
            let init_s = resolve_strategy(&init, n, seed)?;
            let report = local_search(n, &init_s, budget, seed)?;
            println!("n={n}");
            println!("init={init}");
            println!("budget={budget}");
            println!("evaluations={}", report.evaluations);
            println!("t={}", count(report.best_t));
            println!("best={}", report.best.move_string());
        }
        Command::Sweep { strategy, sizes } => {
            if sizes.len() < 3 {
                return Err(zombies::Error::TooFewSizes(sizes.len()).into());
            }
            let points = zombies::search::scaling_points(&strategy, &sizes, seed)?;
            println!("strategy={strategy}");
            for (n_i, t_i) in &points {
                println!("t[{n_i}]={}", count(*t_i));
            }
            println!("slope={:?}", zombies::search::fit_log_slope(&points));
        }
        Command::Domination { n, strategy } => {
            let s = resolve_strategy(&strategy, n, seed)?;
            let report = check_domination(&s)?;
            println!("n={n}");
            println!("strategy={strategy}");
            println!("m={}", s.m());
            println!("min_q_minus_w={:?}", report.min_q_minus_w);
            println!("argmin_q_minus_w={},{}", report.argmin_q_minus_w.0, report.argmin_q_minus_w.1);
            println!("q_w_violations={}", report.q_w_violations);
            println!("min_w_minus_z={:?}", report.min_w_minus_z);
            println!("argmin_w_minus_z={},{}", report.argmin_w_minus_z.0, report.argmin_w_minus_z.1);
            println!("w_z_violations={}", report.w_z_violations);
        }
        Command::Coupled { n, k, strategies } => {
            let boards: Vec<Strategy> = strategies
                .iter()
                .map(|s| resolve_strategy(s, n, seed))
                .collect::<Result<_>>()?;
            let report = zombies::coupled_boards_check(n, &boards, k, seed)?;
            println!("n={n}");
            println!("k={k}");
            for (i, (outcome, coins)) in report.outcomes.iter().zip(&report.coins_used).enumerate() {
                let round = outcome
                    .capture_round
                    .map_or_else(|| "none".to_owned(), |r| r.to_string());
                println!("board{i}_strategy={}", strategies[i]);
                println!("board{i}_captured={}", outcome.captured);
                println!("board{i}_round={round}");
                println!("board{i}_coins={coins}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let seed = cli.seed.unwrap_or_else(entropy_seed);
    println!("seed={seed}");
    let result = match cli.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w as usize).build() {
            Ok(pool) => pool.install(|| run(cli.command, seed)),
            Err(e) => Err(e.into()),
        },
        None => run(cli.command, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
