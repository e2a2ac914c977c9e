use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use rstre::env::{gen_environment, SparseEnvironment};
use rstre::er::{clusters_at, component_stats};
use rstre::experiments::verify::{verify_suite, Level};
use rstre::experiments::{
    emit_report, fit_exponent_on, read_csv, run_sweep_to_file, sample_tree, write_csv, BetaRule,
    FitColumn, RecordFilter, RunStatus, SamplerKind, SweepConfig,
};
use rstre::walk::{check_conditions_with, ConditionThresholds};
use rstre::weights::log_weight_view;
use rstre::{Error, Result};

#[derive(Parser)]
#[command(name = "rstre", version, about = "Random spanning trees in random environment on K_n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the disorder of K_n to a file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw one spanning tree.
    Sample {
        #[arg(long, default_value = "wilson")]
        sampler: String,
        /// A number, a preset (low, boundary, high, ...) or `c,a,b`.
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = rstre::samplers::DEFAULT_EXACT_CAP)]
        exact_cap: usize,
    },
    /// Run a configured sweep and write its CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the diameter exponent from a sweep CSV.
    Fit {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "")]
        filter: String,
        #[arg(long, default_value = "diam")]
        column: String,
        /// Also write `<label>.dat` tables, one per `label=filter`.
        #[arg(long = "regime")]
        regimes: Vec<String>,
        #[arg(long, default_value = ".")]
        report_dir: PathBuf,
    },
    /// Component statistics of the p-open subgraph.
    ErStats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        /// Components reported per seed, largest first.
        #[arg(long, default_value_t = 3)]
        top: usize,
    },
    /// Balanced, mixing and escaping conditions of the weighted walk.
    WalkStats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9.0)]
        d_max: f64,
        #[arg(long, default_value_t = 16.0)]
        theta_max: f64,
    },
    /// Run the verification suite and print a JSON report.
    Verify {
        #[arg(long, default_value = "fast")]
        level: String,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::InternalInvariant(e.to_string()))?;
    println!("{s}");
    Ok(())
}

#[derive(Serialize)]
struct ErRow {
    seed: u64,
    rank: usize,
    size: usize,
    excess: i64,
    diameter: u32,
    diameter_exact: bool,
    longest_path: u32,
    longest_path_exact: bool,
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Gen { n, seed, out } => {
            let env = gen_environment(n, seed)?;
            let mut w = output(out.as_deref())?;
            env.write_text(&mut w)?;
            w.flush()?;
        }
        Cmd::Sample {
            sampler,
            beta,
            n,
            seed,
            out,
            exact_cap,
        } => {
            let kind: SamplerKind = sampler.parse()?;
            let beta = beta.parse::<BetaRule>()?.eval(n)?;
            let cfg = SweepConfig {
                exact_cap,
                ..SweepConfig::default()
            };
            let s = sample_tree(n, seed, kind, beta, &cfg)?;
            let mut w = output(out.as_deref())?;
            s.tree.write_text(&mut w)?;
            w.flush()?;
            eprintln!("n={n} beta={beta} sampler={kind} diameter={}", s.tree.diameter());
        }
        Cmd::Sweep { config, threads, out } => {
            let mut cfg = SweepConfig::parse(&std::fs::read_to_string(&config)?)?;
            if let Some(t) = threads {
                cfg.threads = t;
            }
            if out.is_some() {
                cfg.out = out;
            }
            let recs = run_sweep_to_file(&cfg)?;
            if cfg.out.is_none() {
                let mut w = output(None)?;
                write_csv(&recs, &mut w)?;
                w.flush()?;
            }
            let bad = recs.iter().filter(|r| r.status != RunStatus::Ok).count();
            eprintln!("{} rows, {bad} not ok", recs.len());
        }
        Cmd::Fit {
            csv,
            filter,
            column,
            regimes,
            report_dir,
        } => {
            let recs = read_csv(File::open(&csv)?)?;
            let filter: RecordFilter = filter.parse()?;
            let fit = fit_exponent_on(&recs, &filter, column.parse::<FitColumn>()?)?;
            print_json(&fit)?;
            if !regimes.is_empty() {
                let regimes = regimes
                    .iter()
                    .map(|r| {
                        let (label, f) = r
                            .split_once('=')
                            .ok_or_else(|| Error::InvalidParameter(format!("regime '{r}' is not label=filter")))?;
                        Ok((label.to_string(), f.parse()?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                for p in emit_report(&recs, &regimes, &report_dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
        }
        Cmd::ErStats {
            n,
            p,
            seeds,
            first_seed,
            top,
        } => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for seed in first_seed..first_seed + seeds {
                let env = SparseEnvironment::generate(n, seed, p)?;
                let dec = clusters_at(&env, p)?;
                for rank in 0..top.min(dec.len()) {
                    let s = component_stats(&dec, rank)?;
                    w.serialize(ErRow {
                        seed,
                        rank,
                        size: s.size,
                        excess: s.excess,
                        diameter: s.diameter,
                        diameter_exact: s.diameter_exact,
                        longest_path: s.longest_path,
                        longest_path_exact: s.longest_path_exact,
                    })
                        .map_err(|e| Error::InternalInvariant(e.to_string()))?;
                }
            }
            w.flush()?;
        }
        Cmd::WalkStats {
            n,
            beta,
            alpha,
            seed,
            d_max,
            theta_max,
        } => {
            let beta = beta.parse::<BetaRule>()?.eval(n)?;
            let g = log_weight_view(&gen_environment(n, seed)?, beta)?;
            let report = check_conditions_with(&g, alpha, ConditionThresholds { d_max, theta_max })?;
            print_json(&report)?;
        }
        Cmd::Verify { level } => {
            let report = verify_suite(level.parse::<Level>()?)?;
            for c in &report.checks {
                eprintln!("{}", c.summary());
            }
            print_json(&report)?;
            return Ok(report.exit_code());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
