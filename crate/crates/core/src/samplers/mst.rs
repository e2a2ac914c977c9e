//! Minimum spanning trees of the disorder.

use crate::dsu::DisjointSets;
use crate::env::{edge_id_ordered, Disorder, Environment, OpenEdge, SparseEnvironment};
use crate::error::{Error, Result};
use crate::tree::SpanningTree;
use crate::weights::LogWeightGraph;

/// The spanning tree minimizing `Σ ω_e`, ties broken by edge id.
///
/// Runs Prim's algorithm in `O(n²)` on the dense environment; under the strict
/// order `(ω, id)` the minimum spanning tree is unique, so this is the tree
/// Kruskal's algorithm returns.
pub fn mst_kruskal(env: &Environment) -> Result<SpanningTree> {
    let n = env.n();
    if n < 2 {
        return Err(Error::invalid("environment needs n >= 2"));
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, u64::MAX); n];
    let mut link = vec![0u32; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut u = 0;
    in_tree[0] = true;
    for _ in 1..n {
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let (a, b) = (u.min(v), u.max(v));
            let id = edge_id_ordered(a, b, n);
            let key = (env.values()[id as usize], id);
            if key.0 < best[v].0 || (key.0 == best[v].0 && key.1 < best[v].1) {
                best[v] = key;
                link[v] = u as u32;
            }
        }
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v]
                && (next == usize::MAX
                    || best[v].0 < best[next].0
                    || (best[v].0 == best[next].0 && best[v].1 < best[next].1))
            {
                next = v;
            }
        }
        in_tree[next] = true;
        edges.push((next, link[next] as usize));
        u = next;
    }
    SpanningTree::from_edges(n, &edges, 0)
}

/// Kruskal over light edges; `None` if they do not connect all `n` vertices.
pub fn mst_of_open_edges(n: usize, open: &[OpenEdge]) -> Result<Option<SpanningTree>> {
    if n < 2 {
        return Err(Error::invalid("need n >= 2"));
    }
    let mut sorted: Vec<(f64, u64, u32, u32)> = open
        .iter()
        .map(|e| (e.omega, edge_id_ordered(e.u as usize, e.v as usize, n), e.u, e.v))
        .collect();
    sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut dsu = DisjointSets::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for &(_, _, u, v) in &sorted {
        if dsu.union(u as usize, v as usize) {
            edges.push((u as usize, v as usize));
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    if edges.len() + 1 < n {
        return Ok(None);
    }
    SpanningTree::from_edges(n, &edges, 0).map(Some)
}

/// MST of a sparse environment, raising its reveal threshold by half again
/// until the light edges connect.
pub fn mst_sparse(env: &mut SparseEnvironment) -> Result<SpanningTree> {
    let n = env.n();
    let mut p = env.p_max();
    loop {
        if let Some(t) = mst_of_open_edges(n, &env.open_edges(p)?)? {
            return Ok(t);
        }
        if p >= 1.0 {
            return Err(Error::InternalInvariant("complete graph reported disconnected".into()));
        }
        p = (p * 1.5).min(1.0);
        env.extend_to(p)?;
    }
}

/// Spanning tree maximizing `Σ ℓ_e` (the `β → ∞` limit), ties by edge index.
pub fn max_weight_spanning_tree(g: &LogWeightGraph) -> Result<SpanningTree> {
    g.require_connected()?;
    let lw = g.log_weights();
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| lw[b].total_cmp(&lw[a]).then(a.cmp(&b)));
    let mut dsu = DisjointSets::new(g.n());
    let mut edges = Vec::with_capacity(g.n() - 1);
    for e in order {
        let (u, v) = g.endpoints(e);
        if dsu.union(u, v) {
            edges.push((u, v));
        }
    }
    SpanningTree::from_edges(g.n(), &edges, 0)
}
