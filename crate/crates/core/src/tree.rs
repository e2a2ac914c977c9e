//! Spanning trees stored as rooted parent maps.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::dsu::DisjointSets;
use crate::env::edge_id_ordered;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A spanning tree of a graph on `0..n`, rooted at `root`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    n: usize,
    root: usize,
    parent: Vec<u32>,
}

impl SpanningTree {
    /// Builds a tree from its edge list; fails unless the edges form a
    /// spanning tree of `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        if n == 0 || root >= n {
            return Err(Error::invalid(format!("bad tree size {n} or root {root}")));
        }
        if edges.len() + 1 != n {
            return Err(Error::invalid(format!(
                "a spanning tree on {n} vertices has {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut dsu = DisjointSets::new(n);
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::invalid(format!("bad tree edge ({u}, {v})")));
            }
            if !dsu.union(u, v) {
                return Err(Error::invalid(format!("edge ({u}, {v}) closes a cycle")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        let mut parent = vec![u32::MAX; n];
        parent[root] = root as u32;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if parent[v as usize] == u32::MAX {
                    parent[v as usize] = u as u32;
                    queue.push_back(v as usize);
                }
            }
        }
        Ok(Self { n, root, parent })
    }

    /// Builds a tree from a parent map (`parent[root] == root`).
    pub fn from_parent(root: usize, parent: Vec<u32>) -> Result<Self> {
        let n = parent.len();
        if root >= n || parent[root] as usize != root {
            return Err(Error::invalid("root must be its own parent"));
        }
        let edges: Vec<(usize, usize)> = (0..n)
            .filter(|&v| v != root)
            .map(|v| (v, parent[v] as usize))
            .collect();
        let t = Self::from_edges(n, &edges, root)?;
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self) -> &[u32] {
        &self.parent
    }

    /// Tree edges as `(child, parent)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n)
            .filter(move |&v| v != self.root)
            .map(move |v| (v, self.parent[v] as usize))
    }

    /// Tree edges as `(min, max)` pairs, sorted.
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .edges()
            .map(|(a, b)| (a.min(b) as u32, a.max(b) as u32))
            .collect();
        out.sort_unstable();
        out
    }

    /// Canonical `K_n` edge ids of the tree edges, sorted.
    pub fn edge_ids(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .edges()
            .map(|(a, b)| edge_id_ordered(a.min(b), a.max(b), self.n))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        u != v
            && u < self.n
            && v < self.n
            && (self.parent[u] as usize == v && u != self.root
                || self.parent[v] as usize == u && v != self.root)
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges())
    }

    /// Diameter by double-sweep BFS (exact on trees).
    pub fn diameter(&self) -> usize {
        self.to_graph().double_sweep(self.root) as usize
    }

    fn depths(&self) -> Vec<u32> {
        let mut depth = vec![u32::MAX; self.n];
        depth[self.root] = 0;
        for v in 0..self.n {
            let mut chain = Vec::new();
            let mut cur = v;
            while depth[cur] == u32::MAX {
                chain.push(cur);
                cur = self.parent[cur] as usize;
            }
            let mut d = depth[cur];
            for &c in chain.iter().rev() {
                d += 1;
                depth[c] = d;
            }
        }
        depth
    }

    /// Vertex sequence of the tree path from `u` to `v`.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let depth = self.depths();
        let (mut a, mut b) = (u, v);
        let mut left = vec![a];
        let mut right = vec![b];
        while depth[a] > depth[b] {
            a = self.parent[a] as usize;
            left.push(a);
        }
        while depth[b] > depth[a] {
            b = self.parent[b] as usize;
            right.push(b);
        }
        while a != b {
            a = self.parent[a] as usize;
            b = self.parent[b] as usize;
            left.push(a);
            right.push(b);
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.path(u, v).len() - 1
    }

    /// Writes the `rstre-tree v1` text format.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "rstre-tree v1 n={} root={}", self.n, self.root)?;
        for (c, p) in self.edges() {
            writeln!(w, "{c} {p}")?;
        }
        Ok(())
    }

    /// Reads the `rstre-tree v1` text format.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))??;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("rstre-tree") || parts.next() != Some("v1") {
            return Err(Error::parse(1, format!("bad header {header:?}")));
        }
        let (mut n, mut root) = (None, None);
        for kv in parts {
            match kv.split_once('=') {
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                Some(("root", v)) => root = v.parse::<usize>().ok(),
                _ => return Err(Error::parse(1, format!("unexpected field {kv:?}"))),
            }
        }
        let (n, root) = n
            .zip(root)
            .ok_or_else(|| Error::parse(1, "header needs n= and root="))?;
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(c)), Some(Ok(p)), None) => edges.push((c, p)),
                _ => return Err(Error::parse(i + 2, format!("expected `child parent`: {line:?}"))),
            }
        }
        Self::from_edges(n, &edges, root)
    }
}

/// Number of shared edges of two spanning trees on the same vertex set.
pub fn edge_overlap(t1: &SpanningTree, t2: &SpanningTree) -> Result<usize> {
    if t1.n() != t2.n() {
        return Err(Error::invalid(format!(
            "trees on {} and {} vertices",
            t1.n(),
            t2.n()
        )));
    }
    let a = t1.edge_ids();
    let b = t2.edge_ids();
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_tree(n: usize, seed: u64) -> SpanningTree {
        // random recursive tree
        let mut x = seed;
        let edges: Vec<(usize, usize)> = (1..n)
            .map(|v| {
                x = crate::env::splitmix64(x.wrapping_add(v as u64));
                (v, (x % v as u64) as usize)
            })
            .collect();
        SpanningTree::from_edges(n, &edges, 0).unwrap()
    }

    #[test]
    fn rejects_non_trees() {
        assert!(SpanningTree::from_edges(3, &[(0, 1)], 0).is_err());
        assert!(SpanningTree::from_edges(4, &[(0, 1), (1, 2), (2, 0)], 0).is_err());
        assert!(SpanningTree::from_edges(3, &[(0, 1), (1, 1)], 0).is_err());
    }

    #[test]
    fn path_and_distance() {
        let t = SpanningTree::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], 2).unwrap();
        assert_eq!(t.path(0, 4), vec![0, 1, 2, 3, 4]);
        assert_eq!(t.path(4, 3), vec![4, 3]);
        assert_eq!(t.distance(0, 3), 3);
        assert_eq!(t.diameter(), 4);
        assert!(t.contains_edge(3, 2));
        assert!(!t.contains_edge(0, 2));
    }

    #[test]
    fn overlap_examples() {
        let star = SpanningTree::from_edges(4, &[(0, 1), (0, 2), (0, 3)], 0).unwrap();
        let path = SpanningTree::from_edges(4, &[(1, 0), (1, 2), (2, 3)], 0).unwrap();
        assert_eq!(edge_overlap(&star, &star).unwrap(), 3);
        assert_eq!(edge_overlap(&star, &path).unwrap(), 1);
        let other = SpanningTree::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], 0).unwrap();
        assert!(edge_overlap(&star, &other).is_err());
    }

    #[test]
    fn text_format_round_trips() {
        let t = random_tree(30, 5);
        let mut buf = Vec::new();
        t.write_text(&mut buf).unwrap();
        assert!(buf.starts_with(b"rstre-tree v1 n=30 root=0\n"));
        assert_eq!(SpanningTree::read_text(&buf[..]).unwrap(), t);
        assert!(SpanningTree::read_text(&b"rstre-tree v1 n=3 root=0\n1 0\n"[..]).is_err());
    }

    proptest! {
        #[test]
        fn double_sweep_equals_all_pairs(n in 2usize..200, seed in any::<u64>()) {
            let t = random_tree(n, seed);
            prop_assert_eq!(t.diameter() as u32, t.to_graph().all_pairs_diameter());
        }

        #[test]
        fn path_length_is_bfs_distance(n in 2usize..60, seed in any::<u64>(), a in 0usize..60, b in 0usize..60) {
            let t = random_tree(n, seed);
            let (a, b) = (a % n, b % n);
            let d = t.to_graph().bfs(a)[b] as usize;
            prop_assert_eq!(t.distance(a, b), d);
        }
    }
}
