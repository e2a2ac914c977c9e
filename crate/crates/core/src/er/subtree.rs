//! Minimal subtrees spanned by vertex sets.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::SpanningTree;

/// A subtree of a spanning tree, in the tree's vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubTree {
    /// Ascending.
    pub vertices: Vec<u32>,
    /// `(min, max)` pairs, ascending.
    pub edges: Vec<(u32, u32)>,
}

impl SubTree {
    pub fn diameter(&self) -> usize {
        if self.edges.is_empty() {
            return 0;
        }
        let g = Graph::from_edges(
            self.vertices.len(),
            self.edges.iter().map(|&(u, v)| {
                (
                    self.vertices.binary_search(&u).unwrap(),
                    self.vertices.binary_search(&v).unwrap(),
                )
            }),
        );
        g.double_sweep(0) as usize
    }

    pub fn contains_edge(&self, u: u32, v: u32) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

/// Union of the tree paths between all pairs of `a`: leaves outside `a` are
/// pruned until every leaf lies in `a`.
pub fn minimal_subtree(t: &SpanningTree, a: &[u32]) -> Result<SubTree> {
    let n = t.n();
    if a.is_empty() {
        return Err(Error::invalid("minimal subtree of an empty set"));
    }
    let mut keep_mark = vec![false; n];
    for &v in a {
        if v as usize >= n {
            return Err(Error::invalid(format!("vertex {v} out of range for n={n}")));
        }
        keep_mark[v as usize] = true;
    }
    let mut deg = vec![0u32; n];
    let mut adj = vec![Vec::new(); n];
    for (c, p) in t.edges() {
        deg[c] += 1;
        deg[p] += 1;
        adj[c].push(p as u32);
        adj[p].push(c as u32);
    }
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1 && !keep_mark[v]).collect();
    while let Some(u) = stack.pop() {
        if !alive[u] {
            continue;
        }
        alive[u] = false;
        for &w in &adj[u] {
            let w = w as usize;
            if alive[w] {
                deg[w] -= 1;
                if deg[w] <= 1 && !keep_mark[w] {
                    stack.push(w);
                }
            }
        }
    }
    let vertices: Vec<u32> = (0..n as u32).filter(|&v| alive[v as usize]).collect();
    let mut edges: Vec<(u32, u32)> = t
        .edges()
        .filter(|&(c, p)| alive[c] && alive[p])
        .map(|(c, p)| (c.min(p) as u32, c.max(p) as u32))
        .collect();
    edges.sort_unstable();
    Ok(SubTree { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path5() -> SpanningTree {
        SpanningTree::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], 0).unwrap()
    }

    #[test]
    fn examples() {
        let t = path5();
        let s = minimal_subtree(&t, &[1, 3]).unwrap();
        assert_eq!(s.vertices, vec![1, 2, 3]);
        assert_eq!(s.edges, vec![(1, 2), (2, 3)]);
        assert_eq!(s.diameter(), 2);
        let all = minimal_subtree(&t, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(all.edges, t.edge_pairs());
        let one = minimal_subtree(&t, &[2]).unwrap();
        assert_eq!((one.vertices, one.edges.len()), (vec![2], 0));
        assert!(minimal_subtree(&t, &[]).is_err());
        assert!(minimal_subtree(&t, &[9]).is_err());
    }
}
