//! Minimum spanning trees: dense, sparse (large n) and the beta -> infinity
//! limit of a weighted graph.

use rstre::env::{gen_environment, SparseEnvironment};
use rstre::samplers::{max_weight_spanning_tree, mst_kruskal, mst_sparse};
use rstre::weights::log_weight_view;

fn main() -> rstre::Result<()> {
    let env = gen_environment(300, 3)?;
    let t = mst_kruskal(&env)?;
    let same = max_weight_spanning_tree(&log_weight_view(&env, 1.0)?)?;
    assert_eq!(t.edge_pairs(), same.edge_pairs());
    println!("n=300 MST diameter {}", t.diameter());

    for n in [10_000usize, 40_000] {
        let nf = n as f64;
        let mut sparse = SparseEnvironment::generate(n, 1, nf.ln() / nf)?;
        let t = mst_sparse(&mut sparse)?;
        println!(
            "n={n}: diameter {} (n^(1/3) = {:.1}), revealed {} edges up to p = {:.2e}",
            t.diameter(),
            nf.cbrt(),
            sparse.edge_len(),
            sparse.p_max()
        );
    }
    Ok(())
}
