//! The sequential exact sampler at high disorder, and the probability it
//! assigns to a given tree.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rstre::env::gen_environment;
use rstre::oracle::gibbs_log_prob;
use rstre::samplers::{mst_kruskal, sequential_exact_sample, sequential_tree_log_prob};
use rstre::weights::log_weight_view;

fn main() -> rstre::Result<()> {
    let n = 40;
    let nf = n as f64;
    let env = gen_environment(n, 5)?;
    let g = log_weight_view(&env, nf.powf(4.0 / 3.0) * nf.ln())?;
    let mst = mst_kruskal(&env)?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(9);
    for _ in 0..5 {
        let t = sequential_exact_sample(&g, &mut rng)?;
        let shared = rstre::tree::edge_overlap(&t, &mst)?;
        println!("diameter {:>2}, {shared}/{} edges shared with the MST", t.diameter(), n - 1);
    }
    println!(
        "log P(MST): chained {:.9}, Gibbs {:.9}",
        sequential_tree_log_prob(&g, &mst)?,
        gibbs_log_prob(&g, &mst)?
    );
    Ok(())
}
