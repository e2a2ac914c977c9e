//! A small configured sweep, its CSV, an exponent fit and plot tables.

use rstre::experiments::{emit_report, fit_exponent, run_sweep, write_csv, RecordFilter, SweepConfig};

fn main() -> rstre::Result<()> {
    let cfg = SweepConfig::parse(
        "master_seed = 1\n\
         n_list = 100, 200, 400, 800\n\
         beta = low\n\
         sampler = wilson\n\
         replicates = 12\n\
         p0 = critical:1\n",
    )?;
    let recs = run_sweep(&cfg)?;
    let mut csv = Vec::new();
    write_csv(&recs[..3], &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));

    let fit = fit_exponent(&recs, &RecordFilter::default())?;
    println!("slope {:.3} +- {:.3} over n in [{}, {}]", fit.slope, fit.stderr, fit.n_min, fit.n_max);

    let dir = std::env::temp_dir();
    let regimes = vec![("low_small".to_string(), "n<=200".parse()?), ("low_large".to_string(), "n>200".parse()?)];
    for p in emit_report(&recs, &regimes, &dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
