//! krank: build partition tables, query exact rank/crank counts, evaluate
//! the log-domain estimators, run sweep files, and run the verification
//! suite. Exact quantities print as decimal integers; log-domain
//! quantities print as `s*exp(L)`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use krank_core::{
    csv_to_string, dyson_sech_estimate, hat_p, load_or_build, main_term_asymptotic, n_k_exact,
    parry_rhoades_estimate, parse_sweep_spec, run_sweep, run_verify, write_csv, KRankQuery,
    PartitionTable, SignedLogReal, SweepKind, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "krank",
    version,
    about = "Exact and asymptotic partition rank/crank statistics"
)]
struct Cli {
    /// Cap the worker thread count (default: machine parallelism).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a p(n) table and cache it on disk.
    Table {
        /// Largest n to tabulate.
        #[arg(long)]
        n: u64,
        /// Cache file to write.
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
    },
    /// Print p(n) as an exact decimal integer.
    Pn {
        #[arg(long)]
        n: u64,
        /// Table cache to reuse; built and saved there if absent.
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
    },
    /// Print N_k(m, n) as an exact decimal integer.
    Nkrank {
        /// Family index: 1 = crank, 2 = rank, k >= 3 higher families.
        #[arg(long)]
        k: u32,
        /// Statistic value; negative m uses the m -> -m symmetry.
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
    },
    /// Print a named estimate as s*exp(L).
    Estimate {
        /// One of: dyson, parry, main-term, hat-p.
        name: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
    },
    /// Run a sweep file and write its CSV report.
    Sweep {
        /// Flat key=value sweep description.
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
        /// Write the CSV here, overriding the sweep file's `out`.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
    },
    /// Run every acceptance criterion and print one verdict per line.
    Verify {
        /// Table ceiling.
        #[arg(long, default_value_t = krank_core::config::DEFAULT_TABLE_N)]
        n: u64,
        /// Cap the ceiling at 10^4 for CI budgets.
        #[arg(long)]
        quick: bool,
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("krank: cannot configure {threads} threads: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("krank: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Table { n, cache } => {
            let t0 = Instant::now();
            let table = PartitionTable::build(n)?;
            let mut note = format!(
                "built table through n = {n} in {:.2}s",
                t0.elapsed().as_secs_f64()
            );
            if let Some(path) = cache {
                table.save(&path)?;
                note.push_str(&format!("; cached at {}", path.display()));
            }
            println!("{note}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Pn { n, cache } => {
            let table = load_or_build(n, cache.as_deref())?;
            println!("{}", table.p_at(n as i64)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Nkrank { k, m, n, cache } => {
            let table = load_or_build(n, cache.as_deref())?;
            let value = n_k_exact(&table, &KRankQuery::new(k, m, n)?)?;
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate {
            name,
            k,
            m,
            n,
            cache,
        } => {
            let exact_p = |cache: Option<PathBuf>| -> Result<SignedLogReal> {
                let table = load_or_build(n, cache.as_deref())?;
                Ok(SignedLogReal::from_biguint(table.p_at(n as i64)?))
            };
            let value = match name.as_str() {
                "dyson" => dyson_sech_estimate(m, n, &exact_p(cache)?)?,
                "parry" => parry_rhoades_estimate(k, m, n, &exact_p(cache)?)?,
                "main-term" => main_term_asymptotic(k, m, n)?,
                "hat-p" => hat_p(n)?,
                other => {
                    bail!("unknown estimator `{other}` (expected dyson, parry, main-term, or hat-p)")
                }
            };
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { spec, out, cache } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let mut sweep = parse_sweep_spec(&text)?;
            if let Some(path) = out {
                sweep.out = Some(path);
            }
            let top = sweep.n_grid.iter().max().copied().unwrap_or(0);
            let needed = match sweep.kind {
                SweepKind::DprzRatio => top + 1,
                _ => top,
            };
            let table = load_or_build(needed, cache.as_deref())?;
            let rows = run_sweep(&sweep, &table)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            match &sweep.out {
                Some(path) => {
                    write_csv(&rows, path)?;
                    println!(
                        "wrote {} rows to {} ({failed} failed thresholds)",
                        rows.len(),
                        path.display()
                    );
                }
                None => print!("{}", csv_to_string(&rows)),
            }
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Verify { n, quick, cache } => {
            let t0 = Instant::now();
            let outcome = run_verify(&VerifyOptions {
                max_n: n,
                cache,
                quick,
            })?;
            for report in &outcome.reports {
                println!("{report}");
            }
            let passed = outcome.reports.iter().filter(|r| r.pass).count();
            println!(
                "verify: {passed} of {} criteria pass at n = {} in {:.1}s",
                outcome.reports.len(),
                outcome.limit,
                t0.elapsed().as_secs_f64()
            );
            Ok(if outcome.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
