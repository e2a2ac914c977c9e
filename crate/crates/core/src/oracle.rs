//! Exact electrical quantities of weighted graphs in extended range.
//!
//! Everything reduces to star-mesh (Kron) elimination of a conductance
//! matrix: removing vertex `j` with total conductance `W_j` adds
//! `C_ij·C_jk / W_j` between each pair of its neighbours. The update only
//! adds non-negative terms, and `det` of the reduced Laplacian is the
//! product of the pivots `W_j`.

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::tree::SpanningTree;
use crate::weights::LogWeightGraph;
use crate::xfloat::XFloat;

/// Largest vertex count accepted by the dense routines.
pub const ORACLE_MAX_N: usize = 256;

/// Outcome of the matrix-tree computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogPartition {
    Finite(f64),
    /// No spanning tree exists; `Z = 0`.
    Disconnected,
}

impl LogPartition {
    /// `log Z`, with `-inf` for a disconnected graph.
    pub fn value(self) -> f64 {
        match self {
            LogPartition::Finite(x) => x,
            LogPartition::Disconnected => f64::NEG_INFINITY,
        }
    }

    pub fn is_disconnected(self) -> bool {
        matches!(self, LogPartition::Disconnected)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ResistanceReport {
    pub r_eff: XFloat,
    /// Set when the a-priori relative error bound of the elimination
    /// exceeds `1e-9`.
    pub condition_flag: bool,
}

/// Dense symmetric conductance matrix; the diagonal is unused.
#[derive(Clone, Debug)]
pub(crate) struct Network {
    k: usize,
    c: Vec<XFloat>,
}

impl Network {
    pub(crate) fn new(k: usize) -> Self {
        Self {
            k,
            c: vec![XFloat::ZERO; k * k],
        }
    }

    pub(crate) fn from_graph(g: &LogWeightGraph) -> Self {
        let mut net = Network::new(g.n());
        for (e, u, v) in g.edges() {
            net.add(u, v, XFloat::exp_of(g.log_w(e)));
        }
        net
    }

    #[inline]
    pub(crate) fn add(&mut self, i: usize, j: usize, w: XFloat) {
        if i != j {
            self.c[i * self.k + j] += w;
            self.c[j * self.k + i] += w;
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> XFloat {
        self.c[i * self.k + j]
    }

    /// Star-mesh eliminates `j` among the vertices `alive` (which must not
    /// contain `j`) and returns the pivot `W_j`.
    fn eliminate(&mut self, j: usize, alive: &[usize]) -> XFloat {
        let k = self.k;
        let mut w = XFloat::ZERO;
        for &m in alive {
            w += self.c[j * k + m];
        }
        if w.is_zero() {
            return w;
        }
        let inv = w.recip();
        let row: Vec<(usize, XFloat)> = alive
            .iter()
            .map(|&m| (m, self.c[j * k + m]))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        for (a, &(i, ci)) in row.iter().enumerate() {
            let f = ci * inv;
            for &(m, cm) in &row[a + 1..] {
                let add = f * cm;
                self.c[i * k + m] += add;
                self.c[m * k + i] += add;
            }
        }
        w
    }

    /// `ln det` of the Laplacian with vertex `k-1` grounded.
    pub(crate) fn log_det_reduced(mut self) -> Result<LogPartition> {
        let k = self.k;
        if k <= 1 {
            return Ok(LogPartition::Finite(0.0));
        }
        let mut alive: Vec<usize> = (1..k).collect();
        let mut total = 0.0;
        // eliminating from the front keeps the ground vertex k-1 last
        for j in 0..k - 1 {
            alive.retain(|&m| m != j);
            let w = self.eliminate(j, &alive);
            if w.is_zero() {
                return Ok(LogPartition::Disconnected);
            }
            if !w.is_finite() {
                return Err(Error::NumericRange("pivot outside extended range".into()));
            }
            total += w.ln();
        }
        Ok(LogPartition::Finite(total))
    }

    /// Effective conductance between `a` and `b`; zero when they are in
    /// different components.
    pub(crate) fn effective_conductance(mut self, a: usize, b: usize) -> XFloat {
        let mut alive: Vec<usize> = (0..self.k).filter(|&m| m != a && m != b).collect();
        alive.extend([a, b]);
        while alive.len() > 2 {
            let j = alive.remove(0);
            self.eliminate(j, &alive);
        }
        self.get(a, b)
    }

    /// Relative error bound of a full elimination, counting one rounding per
    /// accumulated term.
    fn error_bound(&self) -> f64 {
        4.0 * (self.k as f64).powi(2) * f64::EPSILON
    }
}

fn check_cap(g: &LogWeightGraph) -> Result<()> {
    if g.n() > ORACLE_MAX_N {
        return Err(Error::SizeCap {
            what: "oracle vertex count",
            got: g.n(),
            cap: ORACLE_MAX_N,
        });
    }
    Ok(())
}

/// `log Z` where `Z = Σ_T Π_{e∈T} exp(ℓ_e)` by the matrix-tree theorem.
pub fn log_partition_function(g: &LogWeightGraph) -> Result<LogPartition> {
    check_cap(g)?;
    Network::from_graph(g).log_det_reduced()
}

/// Effective resistance between distinct vertices of a connected graph.
pub fn effective_resistance(g: &LogWeightGraph, a: usize, b: usize) -> Result<ResistanceReport> {
    check_cap(g)?;
    if a == b || a >= g.n() || b >= g.n() {
        return Err(Error::invalid(format!("need distinct vertices below {}, got {a} and {b}", g.n())));
    }
    let net = Network::from_graph(g);
    let bound = net.error_bound();
    let c = net.effective_conductance(a, b);
    if c.is_zero() {
        return Err(Error::invalid(format!("vertices {a} and {b} are not connected")));
    }
    let r_eff = c.recip();
    if !r_eff.is_finite() {
        return Err(Error::NumericRange("resistance outside extended range".into()));
    }
    Ok(ResistanceReport {
        r_eff,
        condition_flag: bound > 1e-9,
    })
}

/// `P(e ∈ T) = w(e)·R_eff(e)` under the weighted spanning-tree measure.
pub fn edge_inclusion_prob(g: &LogWeightGraph, e: usize) -> Result<f64> {
    if e >= g.edge_count() {
        return Err(Error::invalid(format!("edge index {e} out of range")));
    }
    let (u, v) = g.endpoints(e);
    let r = effective_resistance(g, u, v)?.r_eff;
    let p = (XFloat::exp_of(g.log_w(e)) * r).to_f64();
    if !p.is_finite() {
        return Err(Error::NumericRange(format!("inclusion probability of edge {e}")));
    }
    Ok(p.min(1.0))
}

/// `H(T, ω) = Σ_{e∈T} ω_e`, summed with compensation.
pub fn tree_hamiltonian(env: &Environment, t: &SpanningTree) -> Result<f64> {
    if t.n() != env.n() {
        return Err(Error::invalid(format!(
            "tree on {} vertices, environment on {}",
            t.n(),
            env.n()
        )));
    }
    Ok(neumaier_sum(t.edges().map(|(u, v)| env.omega(u, v))))
}

/// `Σ_{e∈T} ℓ_e`; fails if a tree edge is missing from `g`.
pub fn tree_log_weight(g: &LogWeightGraph, t: &SpanningTree) -> Result<f64> {
    if t.n() != g.n() {
        return Err(Error::invalid(format!("tree on {} vertices, graph on {}", t.n(), g.n())));
    }
    let mut terms = Vec::with_capacity(t.n());
    for (u, v) in t.edges() {
        let e = g
            .edge_between(u, v)
            .ok_or_else(|| Error::invalid(format!("tree edge ({u}, {v}) is not in the graph")))?;
        terms.push(g.log_w(e));
    }
    Ok(neumaier_sum(terms))
}

/// `log P(T) = Σ_{e∈T} ℓ_e − log Z`.
pub fn gibbs_log_prob(g: &LogWeightGraph, t: &SpanningTree) -> Result<f64> {
    let lw = tree_log_weight(g, t)?;
    match log_partition_function(g)? {
        LogPartition::Finite(z) => Ok(lw - z),
        LogPartition::Disconnected => Err(Error::InternalInvariant(
            "graph containing a spanning tree reported disconnected".into(),
        )),
    }
}

pub(crate) fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::gen_environment;
    use crate::weights::log_weight_view;

    fn triangle_112() -> LogWeightGraph {
        LogWeightGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], &[0.0, 0.0, 2f64.ln()]).unwrap()
    }

    #[test]
    fn cayley_and_triangle() {
        let k4 = LogWeightGraph::unit_complete(4).unwrap();
        let z = log_partition_function(&k4).unwrap().value();
        assert!((z - 16f64.ln()).abs() < 1e-12);
        let z = log_partition_function(&triangle_112()).unwrap().value();
        assert!((z - 5f64.ln()).abs() < 1e-12);
        for n in 2..40 {
            let kn = LogWeightGraph::unit_complete(n).unwrap();
            let z = log_partition_function(&kn).unwrap().value();
            let cayley = (n as f64 - 2.0) * (n as f64).ln();
            assert!((z - cayley).abs() < 1e-10 * cayley.max(1.0), "n={n}");
        }
    }

    #[test]
    fn disconnected_is_tagged() {
        let g = LogWeightGraph::from_edges(4, &[(0, 1), (2, 3)], &[0.0, 0.0]).unwrap();
        assert_eq!(log_partition_function(&g).unwrap(), LogPartition::Disconnected);
        assert!(effective_resistance(&g, 0, 2).is_err());
        assert!(log_partition_function(&g).unwrap().value().is_infinite());
    }

    #[test]
    fn resistance_examples() {
        let k3 = LogWeightGraph::unit_complete(3).unwrap();
        let r = effective_resistance(&k3, 0, 1).unwrap();
        assert!((r.r_eff.to_f64() - 2.0 / 3.0).abs() < 1e-14);
        assert!(!r.condition_flag);
        for n in 2..30 {
            let kn = LogWeightGraph::unit_complete(n).unwrap();
            let r = effective_resistance(&kn, 0, n - 1).unwrap().r_eff.to_f64();
            assert!((r - 2.0 / n as f64).abs() < 1e-13);
        }
        let path = LogWeightGraph::from_conductances(3, &[(0, 1), (1, 2)], &[1.0 / 3.0, 0.25]).unwrap();
        let r = effective_resistance(&path, 0, 2).unwrap().r_eff.to_f64();
        assert!((r - 7.0).abs() < 1e-13);
        assert!(effective_resistance(&k3, 1, 1).is_err());
    }

    #[test]
    fn inclusion_examples() {
        let k3 = LogWeightGraph::unit_complete(3).unwrap();
        assert!((edge_inclusion_prob(&k3, 0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        let k4 = LogWeightGraph::unit_complete(4).unwrap();
        for e in 0..6 {
            assert!((edge_inclusion_prob(&k4, e).unwrap() - 0.5).abs() < 1e-14);
        }
        let t = triangle_112();
        assert!((edge_inclusion_prob(&t, 0).unwrap() - 0.6).abs() < 1e-14);
        assert!((edge_inclusion_prob(&t, 2).unwrap() - 0.8).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_and_gibbs() {
        let env = Environment::from_values(3, 0, vec![0.2, 0.9, 0.5]).unwrap();
        // edge ids: (0,1)=0, (0,2)=1, (1,2)=2
        let t = SpanningTree::from_edges(3, &[(0, 1), (1, 2)], 0).unwrap();
        assert!((tree_hamiltonian(&env, &t).unwrap() - 0.7).abs() < 1e-15);
        let g = log_weight_view(&env, 7.0).unwrap();
        let lp = gibbs_log_prob(&g, &t).unwrap();
        let z: f64 = [0.7f64, 1.1, 1.4].iter().map(|h| (-7.0 * h).exp()).sum();
        assert!((lp - ((-7.0f64 * 0.7).exp() / z).ln()).abs() < 1e-12);

        let k4 = LogWeightGraph::unit_complete(4).unwrap();
        let star = SpanningTree::from_edges(4, &[(0, 1), (0, 2), (0, 3)], 0).unwrap();
        assert!((gibbs_log_prob(&k4, &star).unwrap() - (1.0f64 / 16.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn shift_moves_log_z_by_n_minus_one() {
        let env = gen_environment(9, 4).unwrap();
        let g = log_weight_view(&env, 50.0).unwrap();
        let z0 = log_partition_function(&g).unwrap().value();
        let z1 = log_partition_function(&g.shifted(3.5).unwrap()).unwrap().value();
        assert!((z1 - z0 - 3.5 * 8.0).abs() < 1e-9);
    }

    #[test]
    fn extreme_beta_stays_in_range() {
        let env = gen_environment(12, 1).unwrap();
        let g = log_weight_view(&env, 1e7).unwrap();
        let z = log_partition_function(&g).unwrap().value();
        assert!(z.is_finite() && z < -1e5);
        let p: f64 = (0..g.edge_count()).map(|e| edge_inclusion_prob(&g, e).unwrap()).sum();
        assert!((p - 11.0).abs() < 1e-8);
    }

    #[test]
    fn size_cap() {
        let g = LogWeightGraph::unit_complete(ORACLE_MAX_N + 1).unwrap();
        assert!(matches!(log_partition_function(&g), Err(Error::SizeCap { .. })));
    }
}
