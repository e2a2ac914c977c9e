//! Exhaustive Gibbs law on a small weighted K_n.

use rstre::env::gen_environment;
use rstre::samplers::enumerate_spanning_trees;
use rstre::weights::log_weight_view;

fn main() -> rstre::Result<()> {
    let env = gen_environment(5, 11)?;
    for beta in [0.0, 5.0, 50.0] {
        let d = enumerate_spanning_trees(&log_weight_view(&env, beta)?)?;
        let top = d.probabilities.iter().cloned().fold(0.0, f64::max);
        println!("beta={beta:>4}: {} trees, log Z = {:.4}, largest probability {top:.4}", d.len(), d.log_z);
    }
    Ok(())
}
