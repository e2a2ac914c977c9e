//! The lazy random walk on a weighted graph: stationary law, bottleneck
//! ratios, spectrum, mixing time and the escaping sum.
//!
//! The lazy kernel `q = (I + P)/2` is reversible, so
//! `S = Π^{1/2} q Π^{-1/2}` with `S_uv = ½ exp(ℓ_uv − (L_u + L_v)/2)` is
//! symmetric (`L_u` the log vertex weight) and carries the whole spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::er::ClusterDecomposition;
use crate::error::{Error, Result};
use crate::samplers::gumbel_argmax;
use crate::weights::LogWeightGraph;

pub const WALK_MAX_N: usize = 512;
pub const BOTTLENECK_EXACT_MAX_N: usize = 20;

fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// `L_u = log Σ_v w(u, v)`.
pub fn log_vertex_weights(g: &LogWeightGraph) -> Vec<f64> {
    let lw = g.log_weights();
    (0..g.n())
        .map(|u| {
            let mut row = Vec::with_capacity(g.degree(u));
            g.for_each_neighbor(u, |_, e| row.push(lw[e]));
            log_sum_exp(row)
        })
        .collect()
}

/// `π(v) = w(v) / Σ_u w(u)`.
pub fn stationary_distribution(g: &LogWeightGraph) -> Result<Vec<f64>> {
    g.require_connected()?;
    let lv = log_vertex_weights(g);
    let total = log_sum_exp(lv.iter().cloned());
    let pi: Vec<f64> = lv.iter().map(|&l| (l - total).exp()).collect();
    let s: f64 = pi.iter().sum();
    Ok(pi.into_iter().map(|p| p / s).collect())
}

/// Pairwise weights `exp(ℓ − max ℓ)` as a dense matrix.
fn scaled_weights(g: &LogWeightGraph) -> DMatrix<f64> {
    let lw = g.log_weights();
    let max = lw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w = DMatrix::zeros(g.n(), g.n());
    for (e, u, v) in g.edges() {
        let x = (lw[e] - max).exp();
        w[(u, v)] = x;
        w[(v, u)] = x;
    }
    w
}

/// `Φ(S) = Σ_{cut} w / (2 Σ_{v∈S} w(v))`.
pub fn bottleneck_of_set(g: &LogWeightGraph, s: &[usize]) -> Result<f64> {
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in s {
        if v >= n {
            return Err(Error::invalid(format!("vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let k = inside.iter().filter(|&&b| b).count();
    if k == 0 || k == n {
        return Err(Error::invalid("bottleneck set must be nonempty and proper"));
    }
    let lw = g.log_weights();
    let mut cut = Vec::new();
    let mut vol = Vec::new();
    for (v, _) in inside.iter().enumerate().filter(|(_, &b)| b) {
        g.for_each_neighbor(v, |u, e| {
            vol.push(lw[e]);
            if !inside[u] {
                cut.push(lw[e]);
            }
        });
    }
    let lc = log_sum_exp(cut);
    let lv = log_sum_exp(vol);
    Ok(0.5 * (lc - lv).exp())
}

/// Bottleneck ratio with a minimizing set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BottleneckCut {
    pub phi: f64,
    pub set: Vec<usize>,
}

/// Exhaustive minimum of `Φ(S)` over `0 < π(S) ≤ 1/2` for `n ≤ 20`.
pub fn bottleneck_exact(g: &LogWeightGraph) -> Result<BottleneckCut> {
    let n = g.n();
    if n > BOTTLENECK_EXACT_MAX_N {
        return Err(Error::SizeCap {
            what: "exhaustive bottleneck vertex count",
            got: n,
            cap: BOTTLENECK_EXACT_MAX_N,
        });
    }
    g.require_connected()?;
    let w = scaled_weights(g);
    let deg: Vec<f64> = (0..n).map(|v| w.row(v).sum()).collect();
    let total: f64 = deg.iter().sum();
    let slack = 1e-12 * total * n as f64;
    let exact = |mask: u32| -> (f64, f64) {
        let mut cut = 0.0;
        let mut vol = 0.0;
        for v in (0..n).filter(|&v| mask >> v & 1 == 1) {
            vol += deg[v];
            for u in (0..n).filter(|&u| mask >> u & 1 == 0) {
                cut += w[(v, u)];
            }
        }
        (cut, vol)
    };
    // Gray code walk with incremental cut and volume; exact recomputation
    // only when the running values could beat the current best.
    let mut inner = vec![0.0f64; n];
    let (mut cut, mut vol) = (0.0f64, 0.0f64);
    let mut mask = 0u32;
    let mut best = BottleneckCut {
        phi: f64::INFINITY,
        set: Vec::new(),
    };
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        if mask >> v & 1 == 0 {
            cut += deg[v] - 2.0 * inner[v];
            vol += deg[v];
            for u in 0..n {
                inner[u] += w[(u, v)];
            }
        } else {
            cut -= deg[v] - 2.0 * inner[v];
            vol -= deg[v];
            for u in 0..n {
                inner[u] -= w[(u, v)];
            }
        }
        mask ^= 1 << v;
        if vol > 0.5 * total + slack {
            continue;
        }
        if (cut - slack) / (2.0 * (vol + slack)) > best.phi {
            continue;
        }
        let (c, vl) = exact(mask);
        if vl > 0.5 * total {
            continue;
        }
        let phi = c / (2.0 * vl);
        if phi < best.phi {
            best = BottleneckCut {
                phi,
                set: (0..n).filter(|&u| mask >> u & 1 == 1).collect(),
            };
        }
    }
    Ok(best)
}

/// Spectral data of the lazy chain.
#[derive(Clone, Debug)]
pub struct ChainSpectrum {
    pub pi: Vec<f64>,
    /// Descending, clamped to `[0, 1]`.
    pub eigenvalues: Vec<f64>,
    /// `γ* = 1 − max_{k≥2} |λ_k|`.
    pub gap: f64,
    /// Orthonormal eigenvectors of `S`, column `k` for `eigenvalues[k]`.
    pub vectors: DMatrix<f64>,
}

fn check_walk_cap(g: &LogWeightGraph) -> Result<()> {
    if g.n() > WALK_MAX_N {
        return Err(Error::SizeCap {
            what: "walk statistics vertex count",
            got: g.n(),
            cap: WALK_MAX_N,
        });
    }
    Ok(())
}

/// The symmetrized lazy kernel `S`.
pub fn symmetric_kernel(g: &LogWeightGraph) -> DMatrix<f64> {
    let lv = log_vertex_weights(g);
    let lw = g.log_weights();
    let n = g.n();
    let mut s = DMatrix::zeros(n, n);
    for u in 0..n {
        s[(u, u)] = 0.5;
    }
    for (e, u, v) in g.edges() {
        let x = 0.5 * (lw[e] - 0.5 * (lv[u] + lv[v])).exp();
        s[(u, v)] = x;
        s[(v, u)] = x;
    }
    s
}

pub fn chain_spectrum(g: &LogWeightGraph) -> Result<ChainSpectrum> {
    check_walk_cap(g)?;
    let pi = stationary_distribution(g)?;
    let eig = SymmetricEigen::new(symmetric_kernel(g));
    let n = g.n();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = idx
        .iter()
        .map(|&k| eig.eigenvalues[k].clamp(0.0, 1.0))
        .collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    let second = eigenvalues.get(1).copied().unwrap_or(0.0);
    Ok(ChainSpectrum {
        pi,
        gap: 1.0 - second,
        eigenvalues,
        vectors,
    })
}

impl ChainSpectrum {
    pub fn n(&self) -> usize {
        self.pi.len()
    }

    /// `q_t(v, v)` for every `v`.
    pub fn return_probabilities(&self, t: u64) -> Vec<f64> {
        let n = self.n();
        let pow: Vec<f64> = self.eigenvalues.iter().map(|&l| pow_u64(l, t)).collect();
        (0..n)
            .map(|v| (0..n).map(|k| pow[k] * self.vectors[(v, k)].powi(2)).sum())
            .collect()
    }

    /// `max_{u,v} |q_t(u,v)/π(v) − 1|`, attained on the diagonal.
    pub fn deviation(&self, t: u64) -> f64 {
        let n = self.n();
        let pow: Vec<f64> = self.eigenvalues.iter().map(|&l| pow_u64(l, t)).collect();
        (0..n)
            .map(|v| {
                let s: f64 = (1..n).map(|k| pow[k] * self.vectors[(v, k)].powi(2)).sum();
                s / self.pi[v]
            })
            .fold(0.0, f64::max)
    }

    /// The full `t`-step kernel `q_t`.
    pub fn transition_power(&self, t: u64) -> DMatrix<f64> {
        let n = self.n();
        let pow = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.eigenvalues.iter().map(|&l| pow_u64(l, t)),
        ));
        let m = &self.vectors * pow * self.vectors.transpose();
        DMatrix::from_fn(n, n, |u, v| m[(u, v)] * (self.pi[v] / self.pi[u]).sqrt())
    }

    /// Smallest `t` with `deviation(t) ≤ 1/2`.
    pub fn mixing_time(&self) -> Result<u64> {
        if self.deviation(0) <= 0.5 {
            return Ok(0);
        }
        let mut hi = 1u64;
        while self.deviation(hi) > 0.5 {
            if hi >= 1 << 62 {
                return Err(Error::NumericRange("mixing time beyond 2^62 steps".into()));
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.deviation(mid) <= 0.5 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// `Σ_{t=0}^{t_end} (t+1) max_v q_t(v, v)`.
    pub fn escaping_sum(&self, t_end: u64) -> f64 {
        (0..=t_end)
            .map(|t| {
                let m = self.return_probabilities(t).into_iter().fold(0.0, f64::max);
                (t + 1) as f64 * m
            })
            .sum()
    }

    /// `φ_2 / √π`, the vector whose level sets give sweep cuts.
    pub fn fiedler(&self) -> Vec<f64> {
        (0..self.n())
            .map(|v| {
                if self.n() > 1 {
                    self.vectors[(v, 1)] / self.pi[v].sqrt()
                } else {
                    0.0
                }
            })
            .collect()
    }
}

fn pow_u64(x: f64, t: u64) -> f64 {
    if t <= i32::MAX as u64 {
        x.powi(t as i32)
    } else {
        x.powf(t as f64)
    }
}

pub fn mixing_time(g: &LogWeightGraph) -> Result<u64> {
    chain_spectrum(g)?.mixing_time()
}

/// Escaping sum up to the mixing time.
pub fn escaping_sum(g: &LogWeightGraph) -> Result<f64> {
    let spec = chain_spectrum(g)?;
    let t = spec.mixing_time()?;
    escaping_cost_check(g.n(), t)?;
    Ok(spec.escaping_sum(t))
}

fn escaping_cost_check(n: usize, t: u64) -> Result<()> {
    let cost = (t as f64 + 1.0) * (n as f64).powi(2);
    if cost > 2e10 {
        return Err(Error::SizeCap {
            what: "escaping sum length (steps)",
            got: t.min(usize::MAX as u64) as usize,
            cap: (2e10 / (n as f64).powi(2)) as usize,
        });
    }
    Ok(())
}

/// Certified bracket on the bottleneck ratio.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BottleneckBracket {
    /// `γ*/2`.
    pub lower: f64,
    /// Best candidate cut.
    pub upper: f64,
    pub upper_set: Vec<usize>,
}

/// `γ*/2 ≤ Φ ≤ min Φ(S)` over singletons, `candidates`, and sweep cuts of
/// the second eigenvector. Sets with `π(S) > 1/2` are replaced by their
/// complement.
pub fn bottleneck_bounds(g: &LogWeightGraph, candidates: &[Vec<usize>]) -> Result<BottleneckBracket> {
    let spec = chain_spectrum(g)?;
    let n = g.n();
    let mut best = (f64::INFINITY, Vec::new());
    let mut consider = |set: Vec<usize>| -> Result<()> {
        let mass: f64 = set.iter().map(|&v| spec.pi[v]).sum();
        let set = if mass > 0.5 {
            let mut inside = vec![false; n];
            for &v in &set {
                inside[v] = true;
            }
            (0..n).filter(|&v| !inside[v]).collect()
        } else {
            set
        };
        if set.is_empty() || set.len() == n {
            return Ok(());
        }
        let phi = bottleneck_of_set(g, &set)?;
        if phi < best.0 {
            best = (phi, set);
        }
        Ok(())
    };
    for v in 0..n {
        consider(vec![v])?;
    }
    for c in candidates {
        consider(c.clone())?;
    }
    let f = spec.fiedler();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
    for k in 1..n {
        consider(order[..k].to_vec())?;
    }
    Ok(BottleneckBracket {
        lower: spec.gap / 2.0,
        upper: best.0,
        upper_set: best.1,
    })
}

/// Verdict thresholds for [`check_conditions_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionThresholds {
    pub d_max: f64,
    pub theta_max: f64,
}

impl Default for ConditionThresholds {
    fn default() -> Self {
        Self {
            d_max: 9.0,
            theta_max: 16.0,
        }
    }
}

/// Balanced / mixing / escaping report for one weighted graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub n: usize,
    pub alpha: f64,
    /// `π_max / π_min`.
    pub d: f64,
    pub tmix: u64,
    /// `n^{1/2 − α}`.
    pub mixing_bound: f64,
    /// `log_n(n^{1/2} / tmix)`: the largest α the mixing condition allows.
    pub alpha_slack: f64,
    pub theta: f64,
    pub gap: f64,
    pub balanced: bool,
    pub mixing: bool,
    pub escaping: bool,
    pub verdict: bool,
    pub thresholds: ConditionThresholds,
}

pub fn check_conditions(g: &LogWeightGraph, alpha: f64) -> Result<ConditionReport> {
    check_conditions_with(g, alpha, ConditionThresholds::default())
}

pub fn check_conditions_with(
    g: &LogWeightGraph,
    alpha: f64,
    thresholds: ConditionThresholds,
) -> Result<ConditionReport> {
    if !alpha.is_finite() {
        return Err(Error::invalid("alpha must be finite"));
    }
    let spec = chain_spectrum(g)?;
    let n = g.n();
    let nf = n as f64;
    let lv = log_vertex_weights(g);
    let (lo, hi) = lv
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let d = (hi - lo).exp();
    let tmix = spec.mixing_time()?;
    escaping_cost_check(n, tmix)?;
    let theta = spec.escaping_sum(tmix);
    let mixing_bound = nf.powf(0.5 - alpha);
    let alpha_slack = 0.5 - (tmix.max(1) as f64).ln() / nf.ln();
    let balanced = d <= thresholds.d_max;
    let mixing = tmix as f64 <= mixing_bound;
    let escaping = theta <= thresholds.theta_max;
    Ok(ConditionReport {
        n,
        alpha,
        d,
        tmix,
        mixing_bound,
        alpha_slack,
        theta,
        gap: spec.gap,
        balanced,
        mixing,
        escaping,
        verdict: balanced && mixing && escaping,
        thresholds,
    })
}

/// Jump-chain excursion from a vertex until it enters the largest cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WalkToGiantStats {
    /// Distinct vertices visited, including the start.
    pub ran: usize,
    /// Distinct `p`-clusters entered, including the start's and the giant.
    pub clusters_visited: usize,
    /// Jump steps; twice this is the expected lazy step count.
    pub steps: u64,
    pub hit: bool,
}

/// Runs the jump chain of `g` from `v0` until it reaches the largest cluster
/// of `dec` or `budget` steps elapse.
pub fn run_to_giant<R: Rng + ?Sized>(
    g: &LogWeightGraph,
    dec: &ClusterDecomposition,
    v0: usize,
    budget: u64,
    rng: &mut R,
) -> Result<WalkToGiantStats> {
    let n = g.n();
    if dec.n() != n || v0 >= n {
        return Err(Error::invalid("walk start or decomposition does not match the graph"));
    }
    let mut seen = std::collections::HashSet::new();
    let mut clusters = std::collections::HashSet::new();
    seen.insert(v0);
    clusters.insert(dec.rank_of(v0));
    let mut u = v0;
    let mut steps = 0;
    let lw = g.log_weights();
    let mut nbrs = Vec::new();
    let mut logits = Vec::new();
    while dec.rank_of(u) != 0 {
        if steps >= budget {
            return Ok(WalkToGiantStats {
                ran: seen.len(),
                clusters_visited: clusters.len(),
                steps,
                hit: false,
            });
        }
        nbrs.clear();
        logits.clear();
        g.for_each_neighbor(u, |v, e| {
            nbrs.push(v);
            logits.push(lw[e]);
        });
        let k = gumbel_argmax(&logits, rng)
            .ok_or_else(|| Error::invalid(format!("vertex {u} has no neighbours")))?;
        u = nbrs[k];
        steps += 1;
        seen.insert(u);
        clusters.insert(dec.rank_of(u));
    }
    Ok(WalkToGiantStats {
        ran: seen.len(),
        clusters_visited: clusters.len(),
        steps,
        hit: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::gen_environment;
    use crate::weights::log_weight_view;

    fn two_triangles() -> LogWeightGraph {
        LogWeightGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
            &[0.0; 7],
        )
        .unwrap()
    }

    #[test]
    fn stationary_examples() {
        let k5 = LogWeightGraph::unit_complete(5).unwrap();
        assert!(stationary_distribution(&k5).unwrap().iter().all(|&p| (p - 0.2).abs() < 1e-15));
        let k2 = LogWeightGraph::unit_complete(2).unwrap();
        assert_eq!(stationary_distribution(&k2).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn bottleneck_examples() {
        let k4 = LogWeightGraph::unit_complete(4).unwrap();
        assert!((bottleneck_of_set(&k4, &[2]).unwrap() - 0.5).abs() < 1e-15);
        assert!((bottleneck_of_set(&k4, &[0, 3]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(bottleneck_of_set(&k4, &[]).is_err());
        assert!(bottleneck_of_set(&k4, &[0, 1, 2, 3]).is_err());
        assert!((bottleneck_exact(&k4).unwrap().phi - 1.0 / 3.0).abs() < 1e-15);
        let tt = bottleneck_exact(&two_triangles()).unwrap();
        assert!((tt.phi - 1.0 / 14.0).abs() < 1e-15);
        assert!(tt.set == vec![0, 1, 2] || tt.set == vec![3, 4, 5]);
        let big = LogWeightGraph::unit_complete(21).unwrap();
        assert!(matches!(bottleneck_exact(&big), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn spectrum_examples() {
        let k2 = LogWeightGraph::unit_complete(2).unwrap();
        let s = chain_spectrum(&k2).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-15 && s.eigenvalues[1].abs() < 1e-15);
        assert_eq!(s.mixing_time().unwrap(), 1);
        for n in [3usize, 10, 40] {
            let s = chain_spectrum(&LogWeightGraph::unit_complete(n).unwrap()).unwrap();
            let want = 0.5 - 0.5 / (n as f64 - 1.0);
            assert!((s.eigenvalues[1] - want).abs() < 1e-12);
            assert!(s.eigenvalues.iter().all(|&l| l >= 0.0));
        }
    }

    #[test]
    fn unit_complete_mixing_closed_form() {
        // deviation(t) = (n − 1)·λ^t with λ = 1/2 − 1/(2(n − 1))
        for n in [4usize, 16, 64, 256] {
            let g = LogWeightGraph::unit_complete(n).unwrap();
            let lam = 0.5 - 0.5 / (n as f64 - 1.0);
            let want = (1..).find(|&t| (n as f64 - 1.0) * lam.powi(t) <= 0.5).unwrap() as u64;
            assert_eq!(mixing_time(&g).unwrap(), want, "n={n}");
        }
    }

    #[test]
    fn bracket_contains_exact() {
        for seed in 0..10 {
            let env = gen_environment(9, seed).unwrap();
            let g = log_weight_view(&env, 6.0).unwrap();
            let exact = bottleneck_exact(&g).unwrap();
            let b = bottleneck_bounds(&g, &[]).unwrap();
            assert!(b.lower <= exact.phi * (1.0 + 1e-12) && exact.phi <= b.upper * (1.0 + 1e-12));
            let with = bottleneck_bounds(&g, std::slice::from_ref(&exact.set)).unwrap();
            assert!((with.upper - exact.phi).abs() <= 1e-12 * exact.phi);
        }
    }

    #[test]
    fn conditions_scale_invariant() {
        let env = gen_environment(30, 5).unwrap();
        let g = log_weight_view(&env, 4.0).unwrap();
        let r1 = check_conditions(&g, 0.1).unwrap();
        let r2 = check_conditions(&g.shifted(-50.0).unwrap(), 0.1).unwrap();
        assert!((r1.d - r2.d).abs() < 1e-9 * r1.d);
        assert_eq!(r1.tmix, r2.tmix);
        assert!(r1.theta >= 1.0 && r1.d >= 1.0);
        let json = serde_json::to_string(&r1).unwrap();
        assert!(json.contains("\"tmix\""));
    }

    fn brute_lazy_kernel(g: &LogWeightGraph) -> DMatrix<f64> {
        let w = scaled_weights(g);
        let n = g.n();
        DMatrix::from_fn(n, n, |u, v| {
            let p = w[(u, v)] / w.row(u).sum();
            0.5 * p + if u == v { 0.5 } else { 0.0 }
        })
    }

    #[test]
    fn matches_matrix_powers() {
        for seed in 0..5 {
            let env = gen_environment(12, seed).unwrap();
            let g = log_weight_view(&env, 3.0).unwrap();
            let spec = chain_spectrum(&g).unwrap();
            let q = brute_lazy_kernel(&g);
            let pi = &spec.pi;
            let mut qt: DMatrix<f64> = DMatrix::identity(12, 12);
            let mut brute_tmix = None;
            for t in 0..200u64 {
                let dev: f64 = (0..12)
                    .flat_map(|u| (0..12usize).map(move |v| (u, v)))
                    .map(|(u, v)| (qt[(u, v)] / pi[v] - 1.0).abs())
                    .fold(0.0f64, f64::max);
                assert!((dev - spec.deviation(t)).abs() < 1e-9 * dev.max(1.0), "t={t}");
                let tp = spec.transition_power(t);
                assert!((&tp - &qt).amax() < 1e-12);
                if brute_tmix.is_none() && dev <= 0.5 {
                    brute_tmix = Some(t);
                }
                qt = &qt * &q;
            }
            assert_eq!(Some(spec.mixing_time().unwrap()), brute_tmix);
        }
    }

    #[test]
    fn walk_reaches_giant() {
        use rand::SeedableRng;
        let env = gen_environment(200, 3).unwrap();
        let g = log_weight_view(&env, 20.0).unwrap();
        let dec = crate::er::clusters_at(&env, 1.5 / 200.0).unwrap();
        let mut rng = rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64(1);
        for v0 in 0..20 {
            let s = run_to_giant(&g, &dec, v0, 1_000_000, &mut rng).unwrap();
            assert!(s.hit && s.ran >= 1 && s.clusters_visited >= 1);
            if dec.rank_of(v0) == 0 {
                assert_eq!((s.steps, s.ran, s.clusters_visited), (0, 1, 1));
            }
        }
        let s = run_to_giant(&g, &dec, 5, 0, &mut rng).unwrap();
        assert!(s.hit == (dec.rank_of(5) == 0));
    }

    #[test]
    fn unit_complete_escaping_and_conditions() {
        for n in [16usize, 64, 256] {
            let g = LogWeightGraph::unit_complete(n).unwrap();
            let nf = n as f64;
            let lam = 0.5 - 0.5 / (nf - 1.0);
            let spec = chain_spectrum(&g).unwrap();
            let t = spec.mixing_time().unwrap();
            let want: f64 = (0..=t)
                .map(|s| (s + 1) as f64 * (1.0 / nf + (nf - 1.0) / nf * lam.powi(s as i32)))
                .sum();
            assert!((spec.escaping_sum(t) - want).abs() < 1e-9 * want);
        }
        let r = check_conditions(&LogWeightGraph::unit_complete(256).unwrap(), 0.25).unwrap();
        assert_eq!(r.tmix, 9);
        assert!((r.d - 1.0).abs() < 1e-12 && r.balanced && r.escaping);
        assert!(!r.mixing && !r.verdict);
        assert!(r.alpha_slack < 0.25);
    }
}
