//! The coupling between the disorder and Erdős–Rényi graphs: the `p`-open
//! subgraph keeps exactly the edges with `ω_e ≤ p`.

mod paths;
mod subtree;

pub use paths::{
    dfs_longest_path, excess, kernel_graph, longest_path, two_core, Kernel, KernelEdge,
    LongestPath, Subgraph, LONGEST_PATH_DFS_MAX, LONGEST_PATH_EXPANSIONS,
    LONGEST_PATH_MAX_EXCESS,
};
pub use subtree::{minimal_subtree, SubTree};

use serde::Serialize;

use crate::dsu::DisjointSets;
use crate::env::{Disorder, Environment, OpenEdge};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::SpanningTree;

/// Components up to this size get an all-pairs BFS diameter.
pub const EXACT_DIAMETER_MAX: usize = 5000;

/// Connected components of the `p`-open subgraph.
#[derive(Clone, Debug)]
pub struct ClusterDecomposition {
    p: f64,
    n: usize,
    /// Rank of the component holding each vertex.
    rank_of: Vec<u32>,
    /// Components ordered by size (descending), then smallest vertex.
    components: Vec<Vec<u32>>,
    edge_counts: Vec<usize>,
    open: Vec<OpenEdge>,
}

/// Components of the `p`-open subgraph of `env`.
pub fn clusters_at(env: &dyn Disorder, p: f64) -> Result<ClusterDecomposition> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("threshold must lie in [0, 1], got {p}")));
    }
    let n = env.vertex_count();
    let open = env.open_edges(p)?;
    let mut dsu = DisjointSets::new(n);
    for e in &open {
        dsu.union(e.u as usize, e.v as usize);
    }
    let mut by_root: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n {
        by_root[dsu.find(v)].push(v as u32);
    }
    let mut components: Vec<Vec<u32>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut rank_of = vec![0u32; n];
    for (r, c) in components.iter().enumerate() {
        for &v in c {
            rank_of[v as usize] = r as u32;
        }
    }
    let mut edge_counts = vec![0; components.len()];
    for e in &open {
        edge_counts[rank_of[e.u as usize] as usize] += 1;
    }
    Ok(ClusterDecomposition {
        p,
        n,
        rank_of,
        components,
        edge_counts,
        open,
    })
}

impl ClusterDecomposition {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Vertices of the component of rank `k` (0 is the largest), ascending.
    pub fn component(&self, k: usize) -> &[u32] {
        &self.components[k]
    }

    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn largest(&self) -> &[u32] {
        &self.components[0]
    }

    pub fn rank_of(&self, v: usize) -> usize {
        self.rank_of[v] as usize
    }

    pub fn edge_count(&self, k: usize) -> usize {
        self.edge_counts[k]
    }

    pub fn open_edges(&self) -> &[OpenEdge] {
        &self.open
    }

    /// Whether every component of `self` lies inside one component of `coarser`.
    pub fn refines(&self, coarser: &ClusterDecomposition) -> bool {
        self.n == coarser.n
            && self.components.iter().all(|c| {
                let r = coarser.rank_of[c[0] as usize];
                c.iter().all(|&v| coarser.rank_of[v as usize] == r)
            })
    }

    /// The component of rank `k` as a graph on local labels `0..size`, in
    /// the order of [`component`](Self::component).
    pub fn component_graph(&self, k: usize) -> Result<Graph> {
        let comp = self.components.get(k).ok_or_else(|| {
            Error::invalid(format!("component rank {k} out of range ({} components)", self.len()))
        })?;
        let mut local = std::collections::HashMap::with_capacity(comp.len());
        for (i, &v) in comp.iter().enumerate() {
            local.insert(v, i);
        }
        let mut g = Graph::new(comp.len());
        for e in &self.open {
            if self.rank_of[e.u as usize] as usize == k {
                g.add_edge(local[&e.u], local[&e.v]);
            }
        }
        Ok(g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStats {
    pub size: usize,
    /// `|E| − |V|`; −1 for trees.
    pub excess: i64,
    pub diameter: u32,
    /// False when the diameter is a double-sweep lower bound.
    pub diameter_exact: bool,
    pub longest_path: u32,
    pub longest_path_exact: bool,
}

/// Structural statistics of a connected graph.
pub fn graph_stats(g: &Graph) -> ComponentStats {
    let exc = excess(g);
    let (diameter, diameter_exact) = if exc < 0 {
        (g.double_sweep(0), true)
    } else if g.vertex_count() <= EXACT_DIAMETER_MAX {
        (g.all_pairs_diameter(), true)
    } else {
        (g.double_sweep(0), false)
    };
    let lp = longest_path(g);
    ComponentStats {
        size: g.vertex_count(),
        excess: exc,
        diameter,
        diameter_exact,
        longest_path: lp.length,
        longest_path_exact: lp.exact,
    }
}

/// Statistics of the component of rank `k`.
pub fn component_stats(dec: &ClusterDecomposition, k: usize) -> Result<ComponentStats> {
    Ok(graph_stats(&dec.component_graph(k)?))
}

/// Longest path over all components of the subgraph induced by `keep`.
fn max_longest_path(n: usize, open: &[OpenEdge], keep: &[bool]) -> LongestPath {
    let sub = Graph::from_edges(
        n,
        open.iter()
            .filter(|e| keep[e.u as usize] && keep[e.v as usize])
            .map(|e| (e.u as usize, e.v as usize)),
    );
    let mut best = LongestPath { length: 0, exact: true };
    for comp in sub.components() {
        if comp.len() < 2 || !keep[comp[0] as usize] {
            continue;
        }
        let lp = longest_path(&sub.induced(&comp));
        best.length = best.length.max(lp.length);
        best.exact &= lp.exact;
    }
    best
}

/// The sequences `g_i = (5/4)^{i/2} g_0` and `p_i = (1 + g_i ε)/n`.
#[derive(Clone, Debug, Serialize)]
pub struct PSchedule {
    pub n: usize,
    pub eps: f64,
    pub g0: f64,
    /// Indices `0..=m+2`.
    pub g: Vec<f64>,
    pub p: Vec<f64>,
    /// First index with `g_m ε ≥ 1/ln n`.
    pub m: usize,
}

pub fn p_schedule(n: usize, eps: f64, g0: f64) -> Result<PSchedule> {
    if n < 3 {
        return Err(Error::invalid(format!("schedule needs n >= 3, got {n}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(g0 >= 1.0) || !g0.is_finite() {
        return Err(Error::invalid(format!("g0 must be >= 1, got {g0}")));
    }
    let target = 1.0 / (n as f64).ln();
    let g_at = |i: usize| 1.25f64.powf(i as f64 / 2.0) * g0;
    let mut m = 0;
    while g_at(m) * eps < target {
        m += 1;
    }
    let g: Vec<f64> = (0..=m + 2).map(g_at).collect();
    let p = g.iter().map(|gi| (1.0 + gi * eps) / n as f64).collect();
    Ok(PSchedule { n, eps, g0, g, p, m })
}

/// The events A(i), B(i), C(i) of a well-behaved schedule step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WellBehaved {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    /// Set when a longest path entering a verdict is only a lower bound.
    pub approximate: bool,
}

impl WellBehaved {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c
    }
}

pub fn well_behaved_flags(env: &dyn Disorder, sched: &PSchedule, i: usize) -> Result<WellBehaved> {
    if i > sched.m {
        return Err(Error::invalid(format!("index {i} exceeds m = {}", sched.m)));
    }
    let n = env.vertex_count();
    if n != sched.n {
        return Err(Error::invalid("schedule and environment sizes differ"));
    }
    let nf = n as f64;
    let n13 = nf.cbrt();
    let ge = sched.g[i] * sched.eps;

    let di = clusters_at(env, sched.p[i])?;
    let c1 = di.largest();
    let lp1 = longest_path(&di.component_graph(0)?);
    let a = c1.len() as f64 >= 1.5 * ge * nf && (lp1.length as f64) <= (ge * n13).powi(4) * n13;

    let next = clusters_at(env, sched.p[i + 1])?;
    let r = next.rank_of(c1[0] as usize);
    let c = r == 0 && c1.iter().all(|&v| next.rank_of(v as usize) == 0);

    let mut keep = vec![true; n];
    for &v in c1 {
        keep[v as usize] = false;
    }
    let open2 = env.open_edges(sched.p[i + 2])?;
    let lp2 = max_longest_path(n, &open2, &keep);
    let b = (lp2.length as f64) <= n13 / (ge * n13).sqrt();

    Ok(WellBehaved {
        a,
        b,
        c,
        approximate: !lp1.exact || !lp2.exact,
    })
}

/// Number of `p`-clusters whose minimal subtree in `t` uses an edge with
/// `ω_e > q`.
pub fn gap_violations(t: &SpanningTree, env: &Environment, p: f64, q: f64) -> Result<usize> {
    if !(p < q) {
        return Err(Error::invalid(format!("need p < q, got p={p}, q={q}")));
    }
    if t.n() != env.n() {
        return Err(Error::invalid("tree and environment sizes differ"));
    }
    let dec = clusters_at(env, p)?;
    let mut count = 0;
    for comp in dec.components() {
        if comp.len() < 2 {
            break;
        }
        let sub = minimal_subtree(t, comp)?;
        if sub
            .edges
            .iter()
            .any(|&(u, v)| env.omega(u as usize, v as usize) > q)
        {
            count += 1;
        }
    }
    Ok(count)
}
