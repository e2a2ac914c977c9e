//! Longest simple paths, 2-cores and kernels of sparse components.
//!
//! A connected graph splits into its 2-core and pendant trees hanging off
//! core vertices. The core in turn is a kernel multigraph (vertices of core
//! degree at least three) whose edges are chains of degree-two vertices.
//! When the excess is small the kernel is tiny, and a longest path is found
//! by enumerating simple kernel paths and attaching the best chain segments
//! and pendant heights at either end.

use crate::graph::Graph;

/// Longest-path searches give up after this many DFS expansions.
pub const LONGEST_PATH_EXPANSIONS: u64 = 20_000_000;
/// Components up to this size get an exhaustive DFS.
pub const LONGEST_PATH_DFS_MAX: usize = 40;
/// Components up to this excess use the kernel enumeration.
pub const LONGEST_PATH_MAX_EXCESS: i64 = 10;

/// Length of a longest simple path and whether it is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LongestPath {
    pub length: u32,
    pub exact: bool,
}

/// A vertex subset with its induced graph, relabelled `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    /// Original labels of the local vertices, ascending.
    pub vertices: Vec<u32>,
    pub graph: Graph,
}

/// A suppressed chain of degree-two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelEdge {
    pub a: u32,
    pub b: u32,
    /// Number of core edges along the chain.
    pub length: u32,
    /// Interior core vertices from `a` towards `b`.
    pub interior: Vec<u32>,
}

/// Kernel multigraph: kernel vertices are indices into `vertices`, which
/// holds labels of the input core graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub vertices: Vec<u32>,
    pub edges: Vec<KernelEdge>,
}

impl Kernel {
    pub fn degree(&self, k: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.a as usize == k) as usize + (e.b as usize == k) as usize)
            .sum()
    }

    pub fn mean_label(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        self.edges.iter().map(|e| e.length as f64).sum::<f64>() / self.edges.len() as f64
    }
}

/// `|E| − |V|`.
pub fn excess(g: &Graph) -> i64 {
    g.edge_count() as i64 - g.vertex_count() as i64
}

struct Peel {
    in_core: Vec<bool>,
    /// Height of the pendant tree hanging at each vertex.
    height: Vec<u32>,
    /// Longest path lying inside pendant trees.
    within: u32,
}

fn peel(g: &Graph) -> Peel {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut in_core = vec![true; n];
    let mut best = vec![(0u32, 0u32); n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut within = 0;
    while let Some(u) = stack.pop() {
        if !in_core[u] {
            continue;
        }
        in_core[u] = false;
        let (b1, b2) = best[u];
        within = within.max(b1 + b2);
        for &p in g.neighbors(u) {
            let p = p as usize;
            if !in_core[p] {
                continue;
            }
            let h = b1 + 1;
            let e = &mut best[p];
            if h > e.0 {
                *e = (h, e.0);
            } else if h > e.1 {
                e.1 = h;
            }
            deg[p] -= 1;
            if deg[p] == 1 {
                stack.push(p);
            }
        }
    }
    for v in 0..n {
        if in_core[v] {
            within = within.max(best[v].0 + best[v].1);
        }
    }
    Peel {
        in_core,
        height: best.iter().map(|b| b.0).collect(),
        within,
    }
}

/// The 2-core: strips degree-one vertices until none remain. Empty for trees.
pub fn two_core(g: &Graph) -> Subgraph {
    let p = peel(g);
    let vertices: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| p.in_core[v as usize])
        .collect();
    let graph = g.induced(&vertices);
    Subgraph { vertices, graph }
}

/// Suppresses degree-two vertices of a 2-core. A component that is a bare
/// cycle becomes its lowest vertex with a self-loop labelled by the cycle
/// length. Returns `None` if some vertex has degree below two.
pub fn kernel_graph(core: &Graph) -> Option<Kernel> {
    let n = core.vertex_count();
    if (0..n).any(|v| core.degree(v) < 2) {
        return None;
    }
    let mut kidx = vec![u32::MAX; n];
    let mut vertices = Vec::new();
    for v in 0..n {
        if core.degree(v) >= 3 {
            kidx[v] = vertices.len() as u32;
            vertices.push(v as u32);
        }
    }
    let mut used = vec![false; n];
    let mut edges = Vec::new();
    for &x in &vertices.clone() {
        let x = x as usize;
        for &c in core.neighbors(x) {
            let c = c as usize;
            if kidx[c] != u32::MAX {
                if x < c {
                    edges.push(KernelEdge {
                        a: kidx[x],
                        b: kidx[c],
                        length: 1,
                        interior: Vec::new(),
                    });
                }
                continue;
            }
            if used[c] {
                continue;
            }
            let (interior, end) = walk_chain(core, x, c, &mut used);
            edges.push(KernelEdge {
                a: kidx[x],
                b: kidx[end],
                length: interior.len() as u32 + 1,
                interior,
            });
        }
    }
    for v in 0..n {
        if !used[v] && kidx[v] == u32::MAX {
            // bare cycle through v, the lowest unvisited vertex on it
            let k = vertices.len() as u32;
            vertices.push(v as u32);
            kidx[v] = k;
            used[v] = true;
            let start = core.neighbors(v)[0] as usize;
            let (interior, _) = walk_chain(core, v, start, &mut used);
            edges.push(KernelEdge {
                a: k,
                b: k,
                length: interior.len() as u32 + 1,
                interior,
            });
        }
    }
    Some(Kernel { vertices, edges })
}

/// Follows degree-two vertices from `first` (a neighbour of `from`) until a
/// vertex that is a kernel vertex or already used.
fn walk_chain(core: &Graph, from: usize, first: usize, used: &mut [bool]) -> (Vec<u32>, usize) {
    let mut interior = Vec::new();
    let (mut prev, mut cur) = (from, first);
    while core.degree(cur) == 2 && !used[cur] {
        used[cur] = true;
        interior.push(cur as u32);
        let nb = core.neighbors(cur);
        let next = if nb[0] as usize != prev { nb[0] } else { nb[1] } as usize;
        prev = cur;
        cur = next;
    }
    (interior, cur)
}

/// Longest simple path of a connected graph.
pub fn longest_path(g: &Graph) -> LongestPath {
    let n = g.vertex_count();
    if n <= 1 {
        return LongestPath { length: 0, exact: true };
    }
    let exc = excess(g);
    if exc < 0 {
        return LongestPath {
            length: g.double_sweep(0),
            exact: true,
        };
    }
    if exc <= LONGEST_PATH_MAX_EXCESS {
        if let Some(len) = kernel_longest_path(g) {
            return LongestPath { length: len, exact: true };
        }
    }
    if n <= LONGEST_PATH_DFS_MAX {
        let (len, complete) = dfs_longest_path(g, LONGEST_PATH_EXPANSIONS);
        return LongestPath {
            length: len,
            exact: complete,
        };
    }
    LongestPath {
        length: g.double_sweep(0),
        exact: false,
    }
}

/// Exhaustive DFS over simple paths; `false` if the expansion cap was hit.
pub fn dfs_longest_path(g: &Graph, cap: u64) -> (u32, bool) {
    let n = g.vertex_count();
    let mut best = 0;
    let mut visited = vec![false; n];
    let mut expansions = 0u64;
    fn go(
        g: &Graph,
        u: usize,
        len: u32,
        visited: &mut [bool],
        best: &mut u32,
        expansions: &mut u64,
        cap: u64,
    ) -> bool {
        *expansions += 1;
        if *expansions > cap {
            return false;
        }
        *best = (*best).max(len);
        if *best as usize + 1 == visited.len() {
            return true;
        }
        visited[u] = true;
        for &v in g.neighbors(u) {
            if !visited[v as usize] && !go(g, v as usize, len + 1, visited, best, expansions, cap) {
                visited[u] = false;
                return false;
            }
        }
        visited[u] = false;
        true
    }
    for s in 0..n {
        if !go(g, s, 0, &mut visited, &mut best, &mut expansions, cap) {
            return (best, false);
        }
    }
    (best, true)
}

/// `max_{i<j} a_i + b_j`, or `None` for fewer than two entries.
fn best_ordered_pair(a: impl Fn(usize) -> i64, b: impl Fn(usize) -> i64, len: usize) -> Option<i64> {
    let mut best_a = i64::MIN;
    let mut best = None;
    for j in 0..len {
        if j > 0 {
            let cand = best_a + b(j);
            best = Some(best.map_or(cand, |x: i64| x.max(cand)));
        }
        best_a = best_a.max(a(j));
    }
    best
}

struct Chain {
    a: usize,
    b: usize,
    length: i64,
    /// Best `h_i + dist(i, a)` over interior `i`, then towards `b`.
    exit_a: Option<i64>,
    exit_b: Option<i64>,
    /// Best interior start near `a` and interior end near `b`, disjoint.
    split: Option<i64>,
}

fn kernel_longest_path(g: &Graph) -> Option<u32> {
    let p = peel(g);
    let core = two_core(g);
    let kernel = kernel_graph(&core.graph)?;
    let hcore: Vec<i64> = core
        .vertices
        .iter()
        .map(|&v| p.height[v as usize] as i64)
        .collect();
    let mut best = p.within as i64;
    let k = kernel.vertices.len();
    let mut chains = Vec::with_capacity(kernel.edges.len());
    for e in &kernel.edges {
        let mut h = Vec::with_capacity(e.interior.len() + 2);
        h.push(hcore[kernel.vertices[e.a as usize] as usize]);
        h.extend(e.interior.iter().map(|&c| hcore[c as usize]));
        h.push(hcore[kernel.vertices[e.b as usize] as usize]);
        let len = e.length as i64;
        let m = h.len();
        if e.a == e.b {
            // cycle through the kernel vertex: positions 0..len, with len == 0
            let cyc = &h[..m - 1];
            let cl = cyc.len();
            if let Some(x) = best_ordered_pair(|i| cyc[i] - i as i64, |j| cyc[j] + j as i64, cl) {
                best = best.max(x);
            }
            if let Some(x) = best_ordered_pair(|i| cyc[i] + i as i64, |j| cyc[j] - j as i64 + len, cl) {
                best = best.max(x);
            }
        } else if let Some(x) = best_ordered_pair(|i| h[i] - i as i64, |j| h[j] + j as i64, m) {
            best = best.max(x);
        }
        let interior = 1..m - 1;
        let exit_a = interior.clone().map(|i| h[i] + i as i64).max();
        let exit_b = interior.clone().map(|i| h[i] + len - i as i64).max();
        let (exit_a, exit_b) = if e.a == e.b {
            let both = interior
                .clone()
                .map(|i| h[i] + (i as i64).max(len - i as i64))
                .max();
            (both, both)
        } else {
            (exit_a, exit_b)
        };
        let split = if e.a != e.b && m >= 4 {
            best_ordered_pair(
                |i| if i == 0 { i64::MIN / 4 } else { h[i] + i as i64 },
                |j| if j == m - 1 { i64::MIN / 4 } else { h[j] + len - j as i64 },
                m - 1,
            )
            .filter(|&x| x >= 0)
        } else {
            None
        };
        chains.push(Chain {
            a: e.a as usize,
            b: e.b as usize,
            length: len,
            exit_a,
            exit_b,
            split,
        });
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (ci, c) in chains.iter().enumerate() {
        incident[c.a].push(ci);
        if c.b != c.a {
            incident[c.b].push(ci);
        }
    }
    let kheight: Vec<i64> = kernel
        .vertices
        .iter()
        .map(|&v| hcore[v as usize])
        .collect();
    let mut search = KernelSearch {
        chains: &chains,
        incident: &incident,
        kheight: &kheight,
        visited: vec![false; k],
        used: vec![false; chains.len()],
        best,
        expansions: 0,
    };
    for v0 in 0..k {
        let mut starts: Vec<(i64, Option<usize>)> = vec![(kheight[v0], None)];
        for &ci in &incident[v0] {
            if let Some(x) = chains[ci].exit(v0) {
                starts.push((x, Some(ci)));
            }
        }
        for (val, chain) in starts {
            if let Some(ci) = chain {
                search.used[ci] = true;
            }
            search.dfs(v0, val, None, chain.is_none())?;
            if let Some(ci) = chain {
                search.used[ci] = false;
            }
        }
        for &ci in &incident[v0] {
            let c = &chains[ci];
            if let (Some(split), true) = (c.split, c.a == v0) {
                search.used[ci] = true;
                search.dfs(v0, split, Some(c.b), false)?;
                search.used[ci] = false;
            }
        }
    }
    Some(search.best.max(0) as u32)
}

impl Chain {
    fn exit(&self, v: usize) -> Option<i64> {
        if self.a == v {
            self.exit_a
        } else {
            self.exit_b
        }
    }
}

struct KernelSearch<'a> {
    chains: &'a [Chain],
    incident: &'a [Vec<usize>],
    kheight: &'a [i64],
    visited: Vec<bool>,
    used: Vec<bool>,
    best: i64,
    expansions: u64,
}

impl KernelSearch<'_> {
    /// Extends a simple kernel path ending at `v` with value `acc`. With
    /// `target` set, only closing at the target counts (split chains).
    /// `pendant_start` marks the first call when the path began in the
    /// pendant tree of `v`, which then cannot also end there.
    fn dfs(&mut self, v: usize, acc: i64, target: Option<usize>, pendant_start: bool) -> Option<()> {
        self.expansions += 1;
        if self.expansions > LONGEST_PATH_EXPANSIONS {
            return None;
        }
        match target {
            Some(t) if t == v => {
                self.best = self.best.max(acc);
                return Some(());
            }
            Some(_) => {}
            None => {
                if !pendant_start {
                    self.best = self.best.max(acc + self.kheight[v]);
                }
                for &ci in &self.incident[v] {
                    if !self.used[ci] {
                        if let Some(x) = self.chains[ci].exit(v) {
                            self.best = self.best.max(acc + x);
                        }
                    }
                }
            }
        }
        self.visited[v] = true;
        for &ci in &self.incident[v] {
            let c = &self.chains[ci];
            if self.used[ci] || c.a == c.b {
                continue;
            }
            let w = if c.a == v { c.b } else { c.a };
            if self.visited[w] {
                continue;
            }
            self.used[ci] = true;
            let r = self.dfs(w, acc + c.length, target, false);
            self.used[ci] = false;
            if r.is_none() {
                self.visited[v] = false;
                return None;
            }
        }
        self.visited[v] = false;
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(k: usize) -> Graph {
        Graph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    #[test]
    fn examples() {
        let path = Graph::from_edges(8, (0..7).map(|i| (i, i + 1)));
        assert_eq!(longest_path(&path), LongestPath { length: 7, exact: true });
        assert_eq!(longest_path(&cycle(6)).length, 5);
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i)));
        assert_eq!(longest_path(&star), LongestPath { length: 2, exact: true });
    }

    #[test]
    fn two_core_examples() {
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i)));
        assert!(two_core(&star).vertices.is_empty());
        assert_eq!(two_core(&cycle(5)).vertices, vec![0, 1, 2, 3, 4]);
        let mut g = cycle(4);
        let mut tail = Graph::new(7);
        for &(u, v) in g.edges() {
            tail.add_edge(u as usize, v as usize);
        }
        tail.add_edge(2, 4);
        tail.add_edge(4, 5);
        tail.add_edge(5, 6);
        g = tail;
        assert_eq!(two_core(&g).vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn kernel_examples() {
        // theta graph: 0 and 1 joined by paths of length 2, 3, 4
        let g = Graph::from_edges(
            8,
            [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 7), (7, 1)],
        );
        let k = kernel_graph(&g).unwrap();
        assert_eq!(k.vertices, vec![0, 1]);
        let mut labels: Vec<u32> = k.edges.iter().map(|e| e.length).collect();
        labels.sort_unstable();
        assert_eq!(labels, vec![2, 3, 4]);
        assert!(k.edges.iter().all(|e| e.a != e.b));
        let c = kernel_graph(&cycle(9)).unwrap();
        assert_eq!(c.vertices, vec![0]);
        assert_eq!(c.edges.len(), 1);
        assert_eq!((c.edges[0].a, c.edges[0].b, c.edges[0].length), (0, 0, 9));
        assert!(kernel_graph(&Graph::from_edges(2, [(0, 1)])).is_none());
    }

    fn random_sparse(n: usize, extra: usize, seed: u64) -> Graph {
        let mut x = seed;
        let mut next = || {
            x = crate::env::splitmix64(x);
            x
        };
        let mut edges = std::collections::BTreeSet::new();
        for v in 1..n {
            let u = (next() % v as u64) as usize;
            edges.insert((u, v));
        }
        for _ in 0..extra {
            let u = (next() % n as u64) as usize;
            let v = (next() % n as u64) as usize;
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        Graph::from_edges(n, edges)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn kernel_method_matches_dfs(n in 2usize..18, extra in 0usize..8, seed in any::<u64>()) {
            let g = random_sparse(n, extra, seed);
            let (want, done) = dfs_longest_path(&g, u64::MAX);
            prop_assert!(done);
            prop_assert_eq!(longest_path(&g).length, want);
            if excess(&g) >= 0 {
                prop_assert_eq!(kernel_longest_path(&g), Some(want));
            }
        }

        #[test]
        fn kernel_has_no_degree_two(n in 3usize..40, extra in 1usize..10, seed in any::<u64>()) {
            let g = random_sparse(n, extra, seed);
            let core = two_core(&g);
            prop_assert!((0..core.graph.vertex_count()).all(|v| core.graph.degree(v) >= 2));
            if let Some(k) = kernel_graph(&core.graph) {
                let total: u32 = k.edges.iter().map(|e| e.length).sum();
                prop_assert_eq!(total as usize, core.graph.edge_count());
                for v in 0..k.vertices.len() {
                    let d = k.degree(v);
                    let bare = k.edges.iter().any(|e| e.a as usize == v && e.b as usize == v) && d == 2;
                    prop_assert!(d >= 3 || bare);
                }
            }
        }
    }
}
