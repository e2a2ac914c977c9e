//! Small unweighted adjacency-list graphs used for structural statistics.

use std::collections::VecDeque;

/// Undirected multigraph on vertices `0..n` (parallel edges and loops allowed).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.edges.push((u as u32, v as u32));
        self.adj[u].push(v as u32);
        if u != v {
            self.adj[v].push(u as u32);
        } else {
            self.adj[u].push(u as u32);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adj[u]
    }

    /// Degree counting a loop twice.
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// BFS distances from `src`; `u32::MAX` marks unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src as u32);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize] + 1;
            for &v in &self.adj[u as usize] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = d;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Farthest reachable vertex from `src` and its distance.
    pub fn farthest(&self, src: usize) -> (usize, u32) {
        let dist = self.bfs(src);
        let mut best = (src, 0);
        for (v, &d) in dist.iter().enumerate() {
            if d != u32::MAX && d > best.1 {
                best = (v, d);
            }
        }
        best
    }

    /// Double-sweep BFS from `start`'s component. Exact on trees, a lower
    /// bound on the diameter otherwise.
    pub fn double_sweep(&self, start: usize) -> u32 {
        if self.adj.is_empty() {
            return 0;
        }
        let (a, _) = self.farthest(start);
        self.farthest(a).1
    }

    /// Exact diameter of a connected graph by BFS from every vertex.
    pub fn all_pairs_diameter(&self) -> u32 {
        (0..self.adj.len())
            .map(|s| self.farthest(s).1)
            .max()
            .unwrap_or(0)
    }

    /// Connected components as lists of vertices, each sorted.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s as u32];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        comp.push(v);
                        stack.push(v as usize);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.bfs(0).iter().all(|&d| d != u32::MAX)
    }

    /// Subgraph induced by `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[u32]) -> Graph {
        let mut local = vec![u32::MAX; self.adj.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut g = Graph::new(vertices.len());
        for &(u, v) in &self.edges {
            let (a, b) = (local[u as usize], local[v as usize]);
            if a != u32::MAX && b != u32::MAX {
                g.add_edge(a as usize, b as usize);
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(k: usize) -> Graph {
        Graph::from_edges(k, (0..k - 1).map(|i| (i, i + 1)))
    }

    #[test]
    fn double_sweep_on_path_and_cycle() {
        assert_eq!(path(8).double_sweep(3), 7);
        let cyc = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        assert_eq!(cyc.all_pairs_diameter(), 3);
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        let h = g.induced(&[3, 4, 0]);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edges(), &[(0, 1)]);
    }
}
