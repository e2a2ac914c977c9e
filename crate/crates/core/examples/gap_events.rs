//! Subtrees of p-clusters in a high-disorder sample avoid edges above q.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rstre::env::gen_environment;
use rstre::er::gap_violations;
use rstre::samplers::sequential_exact_sample_capped;
use rstre::weights::log_weight_view;

fn main() -> rstre::Result<()> {
    let n = 120;
    let nf = n as f64;
    let beta = nf * nf.ln().powi(2);
    let (p, q) = (1.0 / nf, 1.0 / nf + 6.0 * nf.ln() / beta);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(0);
    for seed in 0..5 {
        let env = gen_environment(n, seed)?;
        let t = sequential_exact_sample_capped(&log_weight_view(&env, beta)?, n, &mut rng)?;
        println!("seed {seed}: {} violating clusters", gap_violations(&t, &env, p, q)?);
    }
    Ok(())
}
