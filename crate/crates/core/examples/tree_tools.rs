//! Tree utilities: overlap of independent samples, minimal subtrees and the
//! text format.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rstre::er::minimal_subtree;
use rstre::samplers::wilson_sample;
use rstre::tree::{edge_overlap, SpanningTree};
use rstre::weights::LogWeightGraph;

fn main() -> rstre::Result<()> {
    let n = 300;
    let g = LogWeightGraph::unit_complete(n)?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(4);
    let reps = 50;
    let mut total = 0;
    for _ in 0..reps {
        total += edge_overlap(&wilson_sample(&g, 0, &mut rng)?, &wilson_sample(&g, 0, &mut rng)?)?;
    }
    let nf = n as f64;
    println!("mean overlap {:.3}, expected 2(n-1)/n = {:.3}", total as f64 / reps as f64, 2.0 * (nf - 1.0) / nf);

    let t = wilson_sample(&g, 0, &mut rng)?;
    let sub = minimal_subtree(&t, &[3, 17, 101])?;
    println!("tree diameter {}, subtree on 3 vertices: {} vertices, diameter {}", t.diameter(), sub.vertices.len(), sub.diameter());

    let mut buf = Vec::new();
    t.write_text(&mut buf)?;
    assert_eq!(SpanningTree::read_text(&buf[..])?.edge_pairs(), t.edge_pairs());
    Ok(())
}
