//! Command-line driver: generators, the solver, verification, the exact
//! oracle and the feasibility-bound tables.
//!
//! Exit codes are a scripting contract:
//!   0 success, 1 negative-but-valid answer (invalid cube, conflicts,
//!   unavoidable, infeasible), 2 usage or I/O error, 3 budget exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lcube_core::bounds::{scan_min_t, BoundsParams};
use lcube_core::engine::{solve_parallel, SolveFailure, SolverParams};
use lcube_core::forbidden::conflict_stats;
use lcube_core::oracle::{decide_avoidable, enumerate_avoiders, OracleOutcome, DEFAULT_NODE_BUDGET};
use lcube_core::{conflicts, ForbiddenCube, LatinCube, StructuredCube};

#[derive(Parser)]
#[command(
    name = "lcube",
    version,
    about = "Latin cubes avoiding per-cell forbidden symbol sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Boolean Latin cube of order 2^t.
    GenBoolean {
        #[arg(long)]
        t: u32,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random forbidden-set instance under (m,m,m,m) caps.
    GenForbidden {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Fraction of the m*n^3 cap to fill, in [0, 1].
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the unavoidable two-corner construction of even order n.
    GenUnavoidable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a Latin cube avoiding a forbidden-set instance.
    Solve {
        #[arg(long)]
        forbidden: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Permutation samples per restart.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        /// Fail restarts whose sampled permutation misses any threshold.
        #[arg(long)]
        strict: bool,
        /// Concurrent restarts per wave; 1 reproduces the sequential run.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        out: PathBuf,
        /// Run log file; stderr when omitted.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Check cube validity and, with an instance, count conflicts.
    Verify {
        #[arg(long)]
        cube: PathBuf,
        #[arg(long)]
        forbidden: Option<PathBuf>,
    },
    /// Decide avoidability exactly by backtracking (small orders).
    Oracle {
        #[arg(long)]
        forbidden: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Enumerate up to this many avoiders (order <= 4) instead of
        /// deciding.
        #[arg(long)]
        enumerate: Option<usize>,
        /// Write the first witness here when one exists.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the two feasibility inequalities over t = 1..=t_max.
    Bounds {
        #[arg(long)]
        t_max: u32,
        #[command(flatten)]
        params: BoundsArgs,
    },
    /// Conflict statistics of a structured cube against an instance.
    Stats {
        #[arg(long)]
        cube: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
    },
}

#[derive(Args)]
struct ThresholdArgs {
    /// Allowed-3-cube threshold as a fraction of n.
    #[arg(long, default_value_t = 0.5, conflicts_with = "paper_constants")]
    alpha: f64,
    /// Per-line conflict threshold as a fraction of n.
    #[arg(long, default_value_t = 0.25, conflicts_with = "paper_constants")]
    kappa: f64,
    /// Line overload threshold as a fraction of n.
    #[arg(long, default_value_t = 0.5, conflicts_with = "paper_constants")]
    epsilon: f64,
    /// Block overload threshold as a fraction of n^2.
    #[arg(long, default_value_t = 0.5, conflicts_with = "paper_constants")]
    theta: f64,
    /// Use the published constants instead of the desk-scale defaults.
    #[arg(long)]
    paper_constants: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 0.9, conflicts_with = "paper_constants")]
    alpha: f64,
    #[arg(long, default_value_t = 1e-9, conflicts_with = "paper_constants")]
    gamma: f64,
    #[arg(long, default_value_t = 1e-6, conflicts_with = "paper_constants")]
    kappa: f64,
    #[arg(long, default_value_t = 0.03125, conflicts_with = "paper_constants")]
    epsilon: f64,
    #[arg(long, default_value_t = 0.00048828125, conflicts_with = "paper_constants")]
    theta: f64,
    /// Use the published constants.
    #[arg(long)]
    paper_constants: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), String> {
    match path {
        Some(path) => fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// One seed drives all randomness; a missing seed is generated and printed
/// so the run stays reproducible.
fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(seed) => seed,
        None => {
            let seed: u64 = rand::random();
            eprintln!("seed={seed}");
            seed
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::GenBoolean { t, out } => {
            let cube = LatinCube::boolean(t).map_err(|e| e.to_string())?;
            write_output(out.as_deref(), &cube.to_text())?;
            Ok(0)
        }
        Command::GenForbidden {
            n,
            m,
            density,
            seed,
            out,
        } => {
            let seed = resolve_seed(seed);
            let a = ForbiddenCube::random(n, m, density, seed).map_err(|e| e.to_string())?;
            write_output(out.as_deref(), &a.to_text())?;
            Ok(0)
        }
        Command::GenUnavoidable { n, out } => {
            let a = ForbiddenCube::unavoidable_half(n).map_err(|e| e.to_string())?;
            write_output(out.as_deref(), &a.to_text())?;
            Ok(0)
        }
        Command::Solve {
            forbidden,
            seed,
            samples,
            restarts,
            thresholds,
            strict,
            parallel,
            out,
            log,
        } => {
            let a = ForbiddenCube::from_text(&read_file(&forbidden)?)
                .map_err(|e| format!("{}: {e}", forbidden.display()))?;
            let seed = resolve_seed(seed);
            let mut params = SolverParams {
                permutation_samples: samples,
                max_restarts: restarts,
                seed,
                strict_thresholds: strict,
                ..SolverParams::default()
            };
            if thresholds.paper_constants {
                params = params.with_paper_constants();
            } else {
                params.alpha = thresholds.alpha;
                params.kappa = thresholds.kappa;
                params.epsilon = thresholds.epsilon;
                params.theta = thresholds.theta;
            }
            let write_log = |text: &str| -> Result<(), String> {
                match log.as_deref() {
                    Some(path) => fs::write(path, text)
                        .map_err(|e| format!("cannot write {}: {e}", path.display())),
                    None => {
                        eprint!("{text}");
                        Ok(())
                    }
                }
            };
            match solve_parallel(&a, &params, parallel) {
                Ok(solution) => {
                    fs::write(&out, solution.cube.to_text())
                        .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
                    write_log(&solution.log.to_string())?;
                    println!(
                        "solved seed={seed} restarts={} conflicts_covered={}",
                        solution.restarts_used,
                        solution.plan.len()
                    );
                    Ok(0)
                }
                Err(SolveFailure::Invalid(e)) => Err(e.to_string()),
                Err(SolveFailure::BudgetExhausted { log: run_log }) => {
                    write_log(&run_log.to_string())?;
                    println!("budget-exhausted seed={seed} restarts={restarts}");
                    Ok(3)
                }
            }
        }
        Command::Verify { cube, forbidden } => {
            let parsed = LatinCube::from_text(&read_file(&cube)?)
                .map_err(|e| format!("{}: {e}", cube.display()))?;
            let report = parsed.validate();
            for violation in report.violations().iter().take(8) {
                eprintln!("violated: {violation}");
            }
            match forbidden {
                Some(path) => {
                    let a = ForbiddenCube::from_text(&read_file(&path)?)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    let found = conflicts(&parsed, &a).map_err(|e| e.to_string())?;
                    println!(
                        "valid={} conflicts={}",
                        if report.is_ok() { "yes" } else { "no" },
                        found.len()
                    );
                    Ok(if report.is_ok() && found.is_empty() { 0 } else { 1 })
                }
                None => {
                    println!("valid={}", if report.is_ok() { "yes" } else { "no" });
                    Ok(if report.is_ok() { 0 } else { 1 })
                }
            }
        }
        Command::Oracle {
            forbidden,
            budget,
            enumerate,
            out,
        } => {
            let a = ForbiddenCube::from_text(&read_file(&forbidden)?)
                .map_err(|e| format!("{}: {e}", forbidden.display()))?;
            if let Some(limit) = enumerate {
                let witnesses = enumerate_avoiders(&a, limit).map_err(|e| e.to_string())?;
                println!("avoiders={}", witnesses.len());
                if let Some(first) = witnesses.first() {
                    if let Some(path) = out.as_deref() {
                        fs::write(path, first.to_text())
                            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    }
                }
                return Ok(if witnesses.is_empty() { 1 } else { 0 });
            }
            match decide_avoidable(&a, budget) {
                OracleOutcome::Avoidable(witness) => {
                    println!("result=avoidable");
                    if let Some(path) = out.as_deref() {
                        fs::write(path, witness.to_text())
                            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    }
                    Ok(0)
                }
                OracleOutcome::Unavoidable => {
                    println!("result=unavoidable");
                    Ok(1)
                }
                OracleOutcome::BudgetExceeded { nodes } => {
                    println!("result=budget-exceeded nodes={nodes}");
                    Ok(3)
                }
            }
        }
        Command::Bounds { t_max, params } => {
            let bounds_params = if params.paper_constants {
                BoundsParams::paper()
            } else {
                BoundsParams::from_f64(
                    params.alpha,
                    params.gamma,
                    params.kappa,
                    params.epsilon,
                    params.theta,
                )
                .map_err(|e| e.to_string())?
            };
            let outcome = scan_min_t(&bounds_params, t_max).map_err(|e| e.to_string())?;
            let mut stdout = std::io::stdout().lock();
            for row in &outcome.rows {
                writeln!(
                    stdout,
                    "t={} lemma1_log={:.6} lemma2_margin={:.6} feasible={}",
                    row.t,
                    row.lemma1_log,
                    row.lemma2_margin,
                    if row.feasible { "yes" } else { "no" }
                )
                .map_err(|e| e.to_string())?;
            }
            Ok(if outcome.min_feasible_t.is_some() { 0 } else { 1 })
        }
        Command::Stats { cube, forbidden } => {
            let parsed = LatinCube::from_text(&read_file(&cube)?)
                .map_err(|e| format!("{}: {e}", cube.display()))?;
            let structured = StructuredCube::from_cube(&parsed)
                .map_err(|e| format!("{}: {e}", cube.display()))?;
            let a = ForbiddenCube::from_text(&read_file(&forbidden)?)
                .map_err(|e| format!("{}: {e}", forbidden.display()))?;
            let report = conflict_stats(&structured, &a).map_err(|e| e.to_string())?;
            println!("{report}");
            Ok(0)
        }
    }
}
