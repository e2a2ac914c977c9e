//! Exhaustive enumeration of the spanning trees of small graphs.

use crate::error::{Error, Result};
use crate::oracle::log_partition_function;
use crate::tree::SpanningTree;
use crate::weights::LogWeightGraph;

pub const ENUMERATION_MAX_N: usize = 8;

/// Every spanning tree of a graph with its log-weight and probability.
#[derive(Clone, Debug)]
pub struct TreeDistribution {
    pub trees: Vec<SpanningTree>,
    pub log_weights: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub log_z: f64,
}

impl TreeDistribution {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Position of `t` in the enumeration.
    pub fn index_of(&self, t: &SpanningTree) -> Option<usize> {
        let key = t.edge_pairs();
        self.trees.iter().position(|s| s.edge_pairs() == key)
    }
}

/// Union-find with undo, for backtracking.
struct UndoSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<Option<(usize, usize)>>,
}

impl UndoSets {
    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push(Some((a, b)));
        true
    }

    fn undo(&mut self) {
        if let Some(Some((a, b))) = self.history.pop() {
            self.parent[b] = b;
            self.size[a] -= self.size[b];
        }
    }
}

/// All spanning trees of `g` (`n ≤ 8`), normalized by log-sum-exp.
pub fn enumerate_spanning_trees(g: &LogWeightGraph) -> Result<TreeDistribution> {
    let n = g.n();
    if n > ENUMERATION_MAX_N {
        return Err(Error::SizeCap {
            what: "enumeration vertex count",
            got: n,
            cap: ENUMERATION_MAX_N,
        });
    }
    let edges = g.edges();
    let mut sets = UndoSets {
        parent: (0..n).collect(),
        size: vec![1; n],
        history: Vec::new(),
    };
    let mut chosen = Vec::with_capacity(n);
    let mut found: Vec<Vec<usize>> = Vec::new();
    recurse(&edges, 0, n - 1, &mut sets, &mut chosen, &mut found);

    let mut trees = Vec::with_capacity(found.len());
    let mut log_weights = Vec::with_capacity(found.len());
    for pick in &found {
        let pairs: Vec<(usize, usize)> = pick.iter().map(|&i| (edges[i].1, edges[i].2)).collect();
        trees.push(SpanningTree::from_edges(n, &pairs, 0)?);
        log_weights.push(crate::oracle::neumaier_sum(pick.iter().map(|&i| g.log_w(edges[i].0))));
    }

    let unit = g.with_log_weights(vec![0.0; g.edge_count()])?;
    let expected = log_partition_function(&unit)?.value().exp().round();
    if (expected - trees.len() as f64).abs() > 0.5 {
        return Err(Error::InternalInvariant(format!(
            "enumerated {} trees, matrix-tree count {expected}",
            trees.len()
        )));
    }
    if trees.is_empty() {
        return Ok(TreeDistribution {
            trees,
            log_weights,
            probabilities: Vec::new(),
            log_z: f64::NEG_INFINITY,
        });
    }
    let max = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = log_weights.iter().map(|&l| (l - max).exp()).sum();
    let log_z = max + sum.ln();
    let probabilities = log_weights.iter().map(|&l| (l - log_z).exp()).collect();
    Ok(TreeDistribution {
        trees,
        log_weights,
        probabilities,
        log_z,
    })
}

fn recurse(
    edges: &[(usize, usize, usize)],
    from: usize,
    need: usize,
    sets: &mut UndoSets,
    chosen: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == need {
        found.push(chosen.clone());
        return;
    }
    if edges.len() - from < need - chosen.len() {
        return;
    }
    for i in from..edges.len() {
        if edges.len() - i < need - chosen.len() {
            break;
        }
        let (_, u, v) = edges[i];
        if sets.union(u, v) {
            chosen.push(i);
            recurse(edges, i + 1, need, sets, chosen, found);
            chosen.pop();
            sets.undo();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_counts() {
        for n in 2..=7 {
            let g = LogWeightGraph::unit_complete(n).unwrap();
            let d = enumerate_spanning_trees(&g).unwrap();
            assert_eq!(d.len(), n.pow(n as u32 - 2));
            let s: f64 = d.probabilities.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let k4 = enumerate_spanning_trees(&LogWeightGraph::unit_complete(4).unwrap()).unwrap();
        assert!(k4.probabilities.iter().all(|&p| (p - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn triangle_112() {
        let g = LogWeightGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], &[0.0, 0.0, 2f64.ln()]).unwrap();
        let d = enumerate_spanning_trees(&g).unwrap();
        let mut p = d.probabilities.clone();
        p.sort_by(f64::total_cmp);
        assert!((p[0] - 0.2).abs() < 1e-15 && (p[1] - 0.4).abs() < 1e-15 && (p[2] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn size_cap_and_disconnected() {
        let g = LogWeightGraph::unit_complete(9).unwrap();
        assert!(matches!(enumerate_spanning_trees(&g), Err(Error::SizeCap { .. })));
        let g = LogWeightGraph::from_edges(4, &[(0, 1), (2, 3)], &[0.0, 0.0]).unwrap();
        assert!(enumerate_spanning_trees(&g).unwrap().is_empty());
    }
}
