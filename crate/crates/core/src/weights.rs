//! Log-domain conductance views.
//!
//! Conductances `w(e) = exp(−β·ω_e)` underflow for the disorder strengths of
//! interest, so every consumer works with `ℓ_e = log w(e)` and nothing here
//! exponentiates.

use crate::env::{decode_edge, edge_count, edge_id_ordered, Environment};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Topology {
    /// `K_n`; edge index is the canonical edge id.
    Complete,
    /// A simple graph with an explicit edge list.
    Explicit {
        edges: Vec<(u32, u32)>,
        adj: Vec<Vec<(u32, u32)>>,
    },
}

/// A simple undirected graph with per-edge log-conductances.
#[derive(Clone, Debug)]
pub struct LogWeightGraph {
    n: usize,
    topology: Topology,
    log_w: Vec<f64>,
    beta: Option<f64>,
}

/// `ℓ_e = −β·ω_e` on `K_n`.
pub fn log_weight_view(env: &Environment, beta: f64) -> Result<LogWeightGraph> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::invalid(format!("beta must be finite and >= 0, got {beta}")));
    }
    let log_w = env.values().iter().map(|&w| -beta * w).collect();
    Ok(LogWeightGraph {
        n: env.n(),
        topology: Topology::Complete,
        log_w,
        beta: Some(beta),
    })
}

impl LogWeightGraph {
    /// `K_n` with all conductances equal to one.
    pub fn unit_complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("graph needs n >= 2, got {n}")));
        }
        Ok(Self {
            n,
            topology: Topology::Complete,
            log_w: vec![0.0; edge_count(n) as usize],
            beta: Some(0.0),
        })
    }

    /// An explicit simple graph. Self-loops, repeated pairs and non-finite
    /// log-weights are rejected; connectivity is not required here.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], log_w: &[f64]) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("graph needs at least one vertex"));
        }
        if edges.len() != log_w.len() {
            return Err(Error::invalid(format!(
                "{} edges but {} log-weights",
                edges.len(),
                log_w.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        let mut list = Vec::with_capacity(edges.len());
        for (i, (&(u, v), &l)) in edges.iter().zip(log_w).enumerate() {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            if !l.is_finite() {
                return Err(Error::invalid(format!("log-weight {l} on edge ({u}, {v})")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::invalid(format!("repeated edge ({u}, {v})")));
            }
            list.push((u as u32, v as u32));
            adj[u].push((v as u32, i as u32));
            adj[v].push((u as u32, i as u32));
        }
        Ok(Self {
            n,
            topology: Topology::Explicit { edges: list, adj },
            log_w: log_w.to_vec(),
            beta: None,
        })
    }

    /// An explicit graph with conductances given directly (must be positive).
    pub fn from_conductances(n: usize, edges: &[(usize, usize)], w: &[f64]) -> Result<Self> {
        if let Some(x) = w.iter().find(|x| !(**x > 0.0)) {
            return Err(Error::invalid(format!("conductance {x} is not positive")));
        }
        let log_w: Vec<f64> = w.iter().map(|x| x.ln()).collect();
        Self::from_edges(n, edges, &log_w)
    }

    /// The subgraph of `env` on the given edges, with `ℓ_e = −β·ω_e`.
    pub fn from_env_edges(env: &Environment, edges: &[(usize, usize)], beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::invalid(format!("beta must be finite and >= 0, got {beta}")));
        }
        let log_w: Vec<f64> = edges.iter().map(|&(u, v)| -beta * env.omega(u, v)).collect();
        let mut g = Self::from_edges(env.n(), edges, &log_w)?;
        g.beta = Some(beta);
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.topology, Topology::Complete)
    }

    pub fn edge_count(&self) -> usize {
        self.log_w.len()
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }

    pub fn log_w(&self, e: usize) -> f64 {
        self.log_w[e]
    }

    /// Endpoints `(u, v)` of edge index `e`, `u < v` for complete graphs.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        match &self.topology {
            Topology::Complete => decode_edge(e as u64, self.n as u64),
            Topology::Explicit { edges, .. } => {
                let (u, v) = edges[e];
                (u as usize, v as usize)
            }
        }
    }

    /// Edge index joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        match &self.topology {
            Topology::Complete => Some(edge_id_ordered(u.min(v), u.max(v), self.n) as usize),
            Topology::Explicit { adj, .. } => adj[u]
                .iter()
                .find(|(x, _)| *x as usize == v)
                .map(|&(_, e)| e as usize),
        }
    }

    /// Calls `f(v, edge_index)` for every neighbor `v` of `u`.
    #[inline]
    pub fn for_each_neighbor(&self, u: usize, mut f: impl FnMut(usize, usize)) {
        match &self.topology {
            Topology::Complete => {
                let n = self.n;
                // ids for v < u are scattered; for v > u they are contiguous
                for v in 0..u {
                    f(v, edge_id_ordered(v, u, n) as usize);
                }
                if u + 1 < n {
                    let start = edge_id_ordered(u, u + 1, n) as usize;
                    for (k, v) in ((u + 1)..n).enumerate() {
                        f(v, start + k);
                    }
                }
            }
            Topology::Explicit { adj, .. } => {
                for &(v, e) in &adj[u] {
                    f(v as usize, e as usize);
                }
            }
        }
    }

    pub fn degree(&self, u: usize) -> usize {
        match &self.topology {
            Topology::Complete => self.n - 1,
            Topology::Explicit { adj, .. } => adj[u].len(),
        }
    }

    /// All edges as `(index, u, v)`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        match &self.topology {
            Topology::Complete => {
                let mut out = Vec::with_capacity(self.log_w.len());
                let mut id = 0;
                for u in 0..self.n {
                    for v in (u + 1)..self.n {
                        out.push((id, u, v));
                        id += 1;
                    }
                }
                out
            }
            Topology::Explicit { edges, .. } => edges
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| (i, u as usize, v as usize))
                .collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        if self.is_complete() {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            self.for_each_neighbor(u, |v, _| {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            });
        }
        count == self.n
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::invalid("graph is not connected"))
        }
    }

    /// The same graph with new log-weights.
    pub fn with_log_weights(&self, log_w: Vec<f64>) -> Result<Self> {
        if log_w.len() != self.log_w.len() {
            return Err(Error::invalid("log-weight length mismatch"));
        }
        if let Some(l) = log_w.iter().find(|l| !l.is_finite()) {
            return Err(Error::invalid(format!("log-weight {l} is not finite")));
        }
        Ok(Self {
            n: self.n,
            topology: self.topology.clone(),
            log_w,
            beta: None,
        })
    }

    /// Every log-weight shifted by `c`: all conductances scaled by `e^c`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        self.with_log_weights(self.log_w.iter().map(|l| l + c).collect())
    }
}
