//! Wilson's algorithm on log-weighted graphs.

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::tree::SpanningTree;
use crate::weights::LogWeightGraph;

/// Chronological loop erasure of a vertex sequence.
pub fn loop_erase(path: &[usize]) -> Result<Vec<usize>> {
    if path.is_empty() {
        return Err(Error::invalid("loop_erase needs a nonempty path"));
    }
    let mut out: Vec<usize> = Vec::with_capacity(path.len());
    let mut pos = std::collections::HashMap::new();
    for &v in path {
        if let Some(&i) = pos.get(&v) {
            for w in out.drain(i + 1..) {
                pos.remove(&w);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    Ok(out)
}

/// Index of the largest `logits[i] + G_i` with i.i.d. standard Gumbel `G_i`,
/// i.e. a draw with probability proportional to `exp(logits[i])`.
pub fn gumbel_argmax<R: Rng + ?Sized>(logits: &[f64], rng: &mut R) -> Option<usize> {
    let mut best = f64::NEG_INFINITY;
    let mut arg = None;
    for (i, &l) in logits.iter().enumerate() {
        let e: f64 = rng.sample(Exp1);
        let key = l - e.ln();
        if key > best {
            best = key;
            arg = Some(i);
        }
    }
    arg
}

/// `10^4 · n · ln n` steps.
pub fn default_step_budget(n: usize) -> u64 {
    let n = n.max(2) as f64;
    (1e4 * n * n.ln()).ceil() as u64
}

#[derive(Clone, Debug)]
pub struct WilsonRun {
    pub tree: SpanningTree,
    /// Jump-chain steps taken by all walks.
    pub steps: u64,
}

#[inline]
fn jump<R: Rng + ?Sized>(g: &LogWeightGraph, u: usize, rng: &mut R) -> usize {
    let lw = g.log_weights();
    let mut best = f64::NEG_INFINITY;
    let mut arg = usize::MAX;
    g.for_each_neighbor(u, |v, e| {
        let x: f64 = rng.sample(Exp1);
        let key = lw[e] - x.ln();
        if key > best {
            best = key;
            arg = v;
        }
    });
    arg
}

/// Samples from the weighted spanning-tree measure with the default budget.
pub fn wilson_sample<R: Rng + ?Sized>(
    g: &LogWeightGraph,
    root: usize,
    rng: &mut R,
) -> Result<SpanningTree> {
    Ok(wilson_run(g, root, default_step_budget(g.n()), rng)?.tree)
}

/// Wilson's algorithm with the non-lazy jump chain and an explicit step budget.
pub fn wilson_run<R: Rng + ?Sized>(
    g: &LogWeightGraph,
    root: usize,
    budget: u64,
    rng: &mut R,
) -> Result<WilsonRun> {
    let n = g.n();
    if root >= n {
        return Err(Error::invalid(format!("root {root} out of range for n={n}")));
    }
    g.require_connected()?;
    let mut in_tree = vec![false; n];
    let mut next = vec![u32::MAX; n];
    in_tree[root] = true;
    let mut attached = 1usize;
    let mut steps = 0u64;
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            if steps >= budget {
                return Err(Error::BudgetExceeded {
                    steps,
                    budget,
                    in_tree: attached,
                    n,
                });
            }
            let v = jump(g, u, rng);
            next[u] = v as u32;
            u = v;
            steps += 1;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            attached += 1;
            u = next[u] as usize;
        }
    }
    next[root] = root as u32;
    let tree = SpanningTree::from_parent(root, next)?;
    Ok(WilsonRun { tree, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    #[test]
    fn loop_erase_examples() {
        assert_eq!(loop_erase(&[0, 1, 0, 2]).unwrap(), vec![0, 2]);
        assert_eq!(loop_erase(&[0, 1, 2, 1, 3]).unwrap(), vec![0, 1, 3]);
        assert_eq!(loop_erase(&[4]).unwrap(), vec![4]);
        assert_eq!(loop_erase(&[1, 2, 3, 1]).unwrap(), vec![1]);
        assert!(loop_erase(&[]).is_err());
    }

    #[test]
    fn path_graph_gives_its_only_tree() {
        let g = LogWeightGraph::from_edges(3, &[(0, 1), (1, 2)], &[0.0, -3.0]).unwrap();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
        for root in 0..3 {
            let t = wilson_sample(&g, root, &mut rng).unwrap();
            assert_eq!(t.edge_pairs(), vec![(0, 1), (1, 2)]);
        }
    }

    #[test]
    fn gumbel_argmax_frequencies() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(2);
        let logits = [0.0, 2f64.ln(), f64::NEG_INFINITY, 1e300f64.ln()];
        let mut counts = [0usize; 4];
        for _ in 0..40_000 {
            counts[gumbel_argmax(&logits[..2], &mut rng).unwrap()] += 1;
        }
        let frac = counts[1] as f64 / 40_000.0;
        assert!((frac - 2.0 / 3.0).abs() < 0.01, "{frac}");
        assert_eq!(gumbel_argmax(&logits[2..], &mut rng), Some(1));
        assert_eq!(gumbel_argmax(&[], &mut rng), None);
    }

    #[test]
    fn budget_is_enforced() {
        let g = LogWeightGraph::unit_complete(50).unwrap();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        match wilson_run(&g, 0, 10, &mut rng) {
            Err(Error::BudgetExceeded { steps, budget, n, .. }) => {
                assert_eq!((steps, budget, n), (10, 10, 50));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = LogWeightGraph::from_edges(4, &[(0, 1), (2, 3)], &[0.0, 0.0]).unwrap();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(4);
        assert!(wilson_sample(&g, 0, &mut rng).is_err());
    }
}
