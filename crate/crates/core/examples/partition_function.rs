//! Matrix-tree quantities: log Z, effective resistances and edge marginals.

use rstre::env::gen_environment;
use rstre::oracle::{edge_inclusion_prob, effective_resistance, log_partition_function};
use rstre::weights::{log_weight_view, LogWeightGraph};

fn main() -> rstre::Result<()> {
    let k10 = LogWeightGraph::unit_complete(10)?;
    // Cayley: 10^8 trees
    println!("log Z(K_10) = {:.6} (ln 1e8 = {:.6})", log_partition_function(&k10)?.value(), 1e8f64.ln());

    let env = gen_environment(12, 7)?;
    for beta in [0.0, 10.0, 1e4] {
        let g = log_weight_view(&env, beta)?;
        let r = effective_resistance(&g, 0, 1)?;
        let total: f64 = (0..g.edge_count()).map(|e| edge_inclusion_prob(&g, e)).sum::<rstre::Result<f64>>()?;
        println!(
            "beta={beta:>7}: log Z = {:>12.4}, R(0,1) = {}, sum P(e in T) = {total:.10}",
            log_partition_function(&g)?.value(),
            r.r_eff
        );
    }
    Ok(())
}
