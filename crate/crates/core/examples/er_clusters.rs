//! Clusters of the p-open subgraph: sizes, excess, diameters, kernels and
//! longest paths.

use rstre::env::SparseEnvironment;
use rstre::er::{clusters_at, component_stats, kernel_graph, two_core};

fn main() -> rstre::Result<()> {
    let n = 100_000;
    let nf = n as f64;
    let env = SparseEnvironment::generate(n, 4, 1.2 / nf)?;
    for (label, p) in [("critical", 1.0 / nf), ("supercritical", (1.0 + nf.powf(-0.25)) / nf)] {
        let dec = clusters_at(&env, p)?;
        println!("{label}: {} clusters", dec.len());
        for k in 0..3 {
            let s = component_stats(&dec, k)?;
            println!(
                "  #{k}: size {:>6} excess {:>3} diameter {:>4}{} longest path {:>4}{}",
                s.size,
                s.excess,
                s.diameter,
                if s.diameter_exact { "" } else { "+" },
                s.longest_path,
                if s.longest_path_exact { "" } else { "+" }
            );
        }
        let core = two_core(&dec.component_graph(0)?);
        if core.vertices.is_empty() {
            println!("  giant is a tree");
        } else if let Some(k) = kernel_graph(&core.graph) {
            println!("  giant 2-core {} vertices, kernel {} vertices / {} edges", core.vertices.len(), k.vertices.len(), k.edges.len());
        }
    }
    Ok(())
}
