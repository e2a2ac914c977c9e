//! One function per regime or identity check, plus the `fast` and `full`
//! bundles behind `verify_suite`.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use super::{fit_exponent, run_sweep, write_csv, BetaRule, RecordFilter, SamplerKind, SweepConfig};
use crate::env::{gen_environment, SparseEnvironment};
use crate::er::{clusters_at, gap_violations, minimal_subtree};
use crate::error::{Error, Result};
use crate::oracle::{edge_inclusion_prob, effective_resistance};
use crate::samplers::{
    enumerate_spanning_trees, loop_erase, mst_kruskal, sequential_exact_sample_capped,
    sequential_tree_log_prob, wilson_sample,
};
use crate::tree::SpanningTree;
use crate::walk::{bottleneck_exact, chain_spectrum, log_vertex_weights, stationary_distribution};
use crate::weights::{log_weight_view, LogWeightGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            o => Err(Error::invalid(format!("unknown level '{o}' (fast | full)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
    pub note: String,
}

impl CheckResult {
    fn new(id: &str) -> Self {
        Self {
            id: id.to_string(),
            passed: true,
            metrics: BTreeMap::new(),
            note: String::new(),
        }
    }

    fn metric(&mut self, k: &str, v: f64) -> &mut Self {
        self.metrics.insert(k.to_string(), v);
        self
    }

    fn require(&mut self, ok: bool, what: &str) {
        if !ok {
            self.passed = false;
            if !self.note.is_empty() {
                self.note.push_str("; ");
            }
            self.note.push_str(what);
        }
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        let m: Vec<String> = self
            .metrics
            .iter()
            .map(|(k, v)| {
                if v.fract() == 0.0 && v.abs() < 1e15 {
                    format!("{k}={v}")
                } else if v.abs() < 1e-3 {
                    format!("{k}={v:.3e}")
                } else {
                    format!("{k}={v:.4}")
                }
            })
            .collect();
        let mut s = format!("{} {} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, m.join(" "));
        if !self.note.is_empty() {
            s.push_str(&format!(" ({})", self.note));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// A connected graph on `n` vertices: a random recursive tree plus each
/// remaining pair with probability `q`.
pub fn random_connected_edges<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut present = vec![false; n * n];
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (u, v) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
        present[u * n + v] = true;
        edges.push((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u * n + v] && rng.random::<f64>() < q {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn tree_key(t: &SpanningTree) -> Vec<(u32, u32)> {
    t.edge_pairs()
}

/// Wilson frequencies against the enumerated law on weighted `K_5`, and the
/// chained exact-sampler probabilities against the same enumeration.
pub fn check_exact_distribution(instances: usize, samples: usize, betas: &[f64], tv_tol: f64, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("exact-distribution");
    let mut r = rng(seed);
    let (mut tv_max, mut rel_max) = (0.0f64, 0.0f64);
    for i in 0..instances {
        let env = gen_environment(5, seed.wrapping_add(i as u64))?;
        for &beta in betas {
            let g = log_weight_view(&env, beta)?;
            let dist = enumerate_spanning_trees(&g)?;
            let index: HashMap<Vec<(u32, u32)>, usize> =
                dist.trees.iter().enumerate().map(|(k, t)| (tree_key(t), k)).collect();
            let mut counts = vec![0usize; dist.len()];
            for _ in 0..samples {
                let t = wilson_sample(&g, 0, &mut r)?;
                let k = *index
                    .get(&tree_key(&t))
                    .ok_or_else(|| Error::InternalInvariant("sampled tree missing from enumeration".into()))?;
                counts[k] += 1;
            }
            let tv = 0.5
                * counts
                    .iter()
                    .zip(&dist.probabilities)
                    .map(|(&k, &p)| (k as f64 / samples as f64 - p).abs())
                    .sum::<f64>();
            tv_max = tv_max.max(tv);
            for (t, &p) in dist.trees.iter().zip(&dist.probabilities) {
                let q = sequential_tree_log_prob(&g, t)?.exp();
                rel_max = rel_max.max(((q - p) / p).abs());
            }
        }
    }
    c.metric("tv_max", tv_max).metric("tv_tol", tv_tol).metric("prob_rel_err_max", rel_max);
    c.require(tv_max <= tv_tol, "Wilson TV above tolerance");
    c.require(rel_max <= 1e-9, "exact-sampler probabilities off");
    Ok(c)
}

/// `Σ_e P(e∈T) = n − 1` on random weighted graphs, and `w·R_eff` against
/// enumerated marginals where enumeration is feasible.
pub fn check_kirchhoff(graphs: usize, n_max: usize, beta_max: f64, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("kirchhoff-foster");
    let mut r = rng(seed);
    let (mut sum_err, mut marg_err) = (0.0f64, 0.0f64);
    let mut enumerated = 0usize;
    for _ in 0..graphs {
        let n = r.random_range(3..=n_max);
        let edges = random_connected_edges(n, 0.5, &mut r);
        let beta = if r.random::<bool>() { beta_max } else { r.random::<f64>() * beta_max };
        let lw: Vec<f64> = edges.iter().map(|_| -beta * r.random::<f64>()).collect();
        let g = LogWeightGraph::from_edges(n, &edges, &lw)?;
        let probs: Vec<f64> = (0..edges.len()).map(|e| edge_inclusion_prob(&g, e)).collect::<Result<_>>()?;
        sum_err = sum_err.max((probs.iter().sum::<f64>() - (n - 1) as f64).abs());
        if n <= crate::samplers::ENUMERATION_MAX_N {
            enumerated += 1;
            let dist = enumerate_spanning_trees(&g)?;
            for (e, &(u, v)) in edges.iter().enumerate() {
                let p: f64 = dist
                    .trees
                    .iter()
                    .zip(&dist.probabilities)
                    .filter(|(t, _)| t.contains_edge(u, v))
                    .map(|(_, &p)| p)
                    .sum();
                if p > 0.0 {
                    marg_err = marg_err.max(((probs[e] - p) / p).abs());
                }
            }
        }
    }
    c.metric("sum_rule_err_max", sum_err)
        .metric("marginal_rel_err_max", marg_err)
        .metric("enumerated_graphs", enumerated as f64);
    c.require(sum_err <= 1e-8, "sum rule violated");
    c.require(marg_err <= 1e-9, "marginals disagree with enumeration");
    Ok(c)
}

fn slope_check(id: &str, cfg: &SweepConfig, lo: f64, hi: f64) -> Result<CheckResult> {
    let mut c = CheckResult::new(id);
    let recs = run_sweep(cfg)?;
    let fit = fit_exponent(&recs, &RecordFilter::default())?;
    let failed = recs.iter().filter(|r| r.status != super::RunStatus::Ok).count();
    c.metric("slope", fit.slope)
        .metric("stderr", fit.stderr)
        .metric("window_lo", lo)
        .metric("window_hi", hi)
        .metric("failed_rows", failed as f64);
    for m in &fit.means {
        c.metric(&format!("mean_diam_n{}", m.n), m.mean);
    }
    c.require((lo..=hi).contains(&fit.slope), "slope outside window");
    Ok(c)
}

/// Wilson at `β = n/(8 ln n)`: fitted diameter exponent in `[0.42, 0.58]`.
pub fn check_low_disorder(n_list: &[usize], replicates: usize, seed: u64) -> Result<CheckResult> {
    let cfg = SweepConfig {
        master_seed: seed,
        n_list: n_list.to_vec(),
        beta_rule: BetaRule::low(0.125),
        sampler: SamplerKind::Wilson,
        replicates,
        ..SweepConfig::default()
    };
    slope_check("low-disorder-slope", &cfg, 0.42, 0.58)
}

/// MST diameter exponent in `[0.27, 0.40]`.
pub fn check_mst_slope(n_list: &[usize], replicates: usize, seed: u64) -> Result<CheckResult> {
    let cfg = SweepConfig {
        master_seed: seed,
        n_list: n_list.to_vec(),
        beta_rule: BetaRule::Power { c: 0.0, a: 0.0, b: 0.0 },
        sampler: SamplerKind::Mst,
        replicates,
        ..SweepConfig::default()
    };
    slope_check("high-disorder-mst-slope", &cfg, 0.27, 0.40)
}

/// Exact sampler at `β = n^{4/3} ln n` against the MST of the same
/// environments: ratio of mean diameters within `[1/1.5, 1.5]`.
pub fn check_exact_vs_mst(n_list: &[usize], draws: usize, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("high-disorder-exact-vs-mst");
    let mut r = rng(seed);
    for &n in n_list {
        let beta = BetaRule::high().eval(n)?;
        let (mut de, mut dm) = (0.0, 0.0);
        for k in 0..draws {
            let env = gen_environment(n, seed ^ ((n as u64) << 32) ^ k as u64)?;
            let g = log_weight_view(&env, beta)?;
            de += sequential_exact_sample_capped(&g, n.max(1), &mut r)?.diameter() as f64;
            dm += mst_kruskal(&env)?.diameter() as f64;
        }
        let ratio = de / dm;
        c.metric(&format!("mean_exact_n{n}"), de / draws as f64)
            .metric(&format!("mean_mst_n{n}"), dm / draws as f64)
            .metric(&format!("ratio_n{n}"), ratio);
        c.require((1.0 / 1.5..=1.5).contains(&ratio), &format!("ratio off at n={n}"));
    }
    Ok(c)
}

/// At `β = c·m²·n·ln n` (`m = n(n−1)/2`) the exact sampler returns the MST
/// in at least 99% of draws.
pub fn check_collapse(n_list: &[usize], draws: usize, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("collapse-to-mst");
    let mut r = rng(seed);
    for &n in n_list {
        let beta = BetaRule::Collapse { c: 10.0 }.eval(n)?;
        let mut hits = 0;
        for k in 0..draws {
            let env = gen_environment(n, seed ^ ((n as u64) << 32) ^ k as u64)?;
            let g = log_weight_view(&env, beta)?;
            let t = sequential_exact_sample_capped(&g, n, &mut r)?;
            if t.edge_pairs() == mst_kruskal(&env)?.edge_pairs() {
                hits += 1;
            }
        }
        let frac = hits as f64 / draws as f64;
        c.metric(&format!("mst_fraction_n{n}"), frac);
        c.require(frac >= 0.99, &format!("collapse fraction low at n={n}"));
    }
    Ok(c)
}

/// Giant size at `p = (1+ε)/n`, `ε = n^{-1/4}`, in `[1.5εn, 2.5εn]` for 95%
/// of seeds; diameter of the largest `1/n`-cluster in `[n^{1/3}/A, A·n^{1/3}]`
/// for 90% of seeds.
pub fn check_er_laws(n: usize, seeds: usize, a: f64, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("er-component-laws");
    let nf = n as f64;
    let eps = nf.powf(-0.25);
    let p = (1.0 + eps) / nf;
    let n13 = nf.cbrt();
    let (mut size_ok, mut diam_ok) = (0usize, 0usize);
    let mut spreads = Vec::with_capacity(seeds);
    for k in 0..seeds {
        let env = SparseEnvironment::generate(n, seed.wrapping_add(k as u64), p)?;
        let giant = clusters_at(&env, p)?.largest().len() as f64;
        if (1.5 * eps * nf..=2.5 * eps * nf).contains(&giant) {
            size_ok += 1;
        }
        let crit = clusters_at(&env, 1.0 / nf)?;
        let d = crit.component_graph(0)?.all_pairs_diameter() as f64;
        if d >= n13 / a && d <= a * n13 {
            diam_ok += 1;
        }
        spreads.push(if d > 0.0 { (d / n13).max(n13 / d) } else { f64::INFINITY });
    }
    spreads.sort_by(f64::total_cmp);
    let need = (0.9 * seeds as f64).ceil() as usize;
    let calibrated = spreads[need.max(1) - 1];
    let (fs, fd) = (size_ok as f64 / seeds as f64, diam_ok as f64 / seeds as f64);
    c.metric("size_band_fraction", fs)
        .metric("diameter_band_fraction", fd)
        .metric("a_pinned", a)
        .metric("a_calibrated", calibrated);
    c.require(fs >= 0.95, "giant size band");
    c.require(fd >= 0.90, "critical diameter band");
    Ok(c)
}

/// `1/(3n) ≤ π(v) ≤ 3/n` at `β = n/(72 ln n)` in all but one of 50 seeds
/// (scaled), and `D > 9` at `β = n^{1.2}` in 90% of seeds.
pub fn check_concentration(n: usize, seeds: usize, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("concentration-and-breakdown");
    let nf = n as f64;
    let (mut band_ok, mut broken) = (0usize, 0usize);
    let mut worst_lo = f64::INFINITY;
    let mut worst_hi = 0.0f64;
    for k in 0..seeds {
        let env = gen_environment(n, seed.wrapping_add(k as u64))?;
        let pi = stationary_distribution(&log_weight_view(&env, nf / (72.0 * nf.ln()))?)?;
        let lo = pi.iter().cloned().fold(f64::INFINITY, f64::min) * nf;
        let hi = pi.iter().cloned().fold(0.0, f64::max) * nf;
        worst_lo = worst_lo.min(lo);
        worst_hi = worst_hi.max(hi);
        if lo >= 1.0 / 3.0 && hi <= 3.0 {
            band_ok += 1;
        }
        let lv = log_vertex_weights(&log_weight_view(&env, nf.powf(1.2))?);
        let spread = lv.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - lv.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > 9f64.ln() {
            broken += 1;
        }
    }
    let need_band = seeds - seeds.div_ceil(50);
    c.metric("band_seeds", band_ok as f64)
        .metric("band_needed", need_band as f64)
        .metric("min_n_pi", worst_lo)
        .metric("max_n_pi", worst_hi)
        .metric("breakdown_fraction", broken as f64 / seeds as f64);
    c.require(band_ok >= need_band, "stationary band");
    c.require(broken as f64 >= 0.9 * seeds as f64, "breakdown not observed");
    Ok(c)
}

/// No cluster at `p = 1/n` whose subtree in an exact sample at
/// `β = n(ln n)²` uses an edge above `q = p + 6 ln n/β`.
pub fn check_gap_events(n: usize, seeds: usize, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("gap-events");
    let nf = n as f64;
    let beta = nf * nf.ln().powi(2);
    let p = 1.0 / nf;
    let q = p + 6.0 * nf.ln() / beta;
    let mut r = rng(seed);
    let mut total = 0usize;
    for k in 0..seeds {
        let env = gen_environment(n, seed.wrapping_add(k as u64))?;
        let t = sequential_exact_sample_capped(&log_weight_view(&env, beta)?, n, &mut r)?;
        total += gap_violations(&t, &env, p, q)?;
    }
    c.metric("violations", total as f64).metric("q_minus_p", q - p);
    c.require(total == 0, "gap violations observed");
    Ok(c)
}

/// Random connected weighted graph for spectral checks.
pub fn random_weighted_graph<R: Rng + ?Sized>(n_max: usize, rng: &mut R) -> Result<LogWeightGraph> {
    let n = rng.random_range(2..=n_max);
    let q = rng.random_range(0.1..1.0);
    let edges = random_connected_edges(n, q, rng);
    let spread = rng.random_range(0.0..6.0);
    let lw: Vec<f64> = edges.iter().map(|_| -spread * rng.random::<f64>()).collect();
    LogWeightGraph::from_edges(n, &edges, &lw)
}

/// Mixing time by repeated multiplication of the lazy kernel.
pub fn brute_mixing_time(g: &LogWeightGraph, t_max: u64) -> Option<u64> {
    let n = g.n();
    let lw = g.log_weights();
    let mut w = DMatrix::<f64>::zeros(n, n);
    for (e, u, v) in g.edges() {
        w[(u, v)] = lw[e].exp();
        w[(v, u)] = lw[e].exp();
    }
    let deg: Vec<f64> = (0..n).map(|u| w.row(u).sum()).collect();
    let total: f64 = deg.iter().sum();
    let q = DMatrix::from_fn(n, n, |u, v| 0.5 * w[(u, v)] / deg[u] + if u == v { 0.5 } else { 0.0 });
    let mut qt = DMatrix::<f64>::identity(n, n);
    for t in 0..=t_max {
        let dev = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .map(|(u, v)| (qt[(u, v)] * total / deg[v] - 1.0).abs())
            .fold(0.0f64, f64::max);
        if dev <= 0.5 {
            return Some(t);
        }
        qt = &qt * &q;
    }
    None
}

/// `Φ²/2 ≤ γ* ≤ 2Φ` with exhaustive `Φ`, and spectral mixing time against a
/// matrix-power scan.
pub fn check_spectral(instances: usize, n_max: usize, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("spectral-sandwich-and-mixing");
    let mut r = rng(seed);
    let (mut sandwich_bad, mut mix_bad) = (0usize, 0usize);
    let mut worst_ratio = 0.0f64;
    for _ in 0..instances {
        let g = random_weighted_graph(n_max, &mut r)?;
        let spec = chain_spectrum(&g)?;
        let phi = bottleneck_exact(&g)?.phi;
        let gap = spec.gap;
        let tol = 1e-9;
        if gap < phi * phi / 2.0 * (1.0 - tol) || gap > 2.0 * phi * (1.0 + tol) {
            sandwich_bad += 1;
        }
        worst_ratio = worst_ratio.max(gap / (2.0 * phi));
        let t = spec.mixing_time()?;
        if brute_mixing_time(&g, t + 1) != Some(t) {
            mix_bad += 1;
        }
    }
    c.metric("sandwich_violations", sandwich_bad as f64)
        .metric("mixing_mismatches", mix_bad as f64)
        .metric("max_gap_over_2phi", worst_ratio);
    c.require(sandwich_bad == 0, "Cheeger sandwich violated");
    c.require(mix_bad == 0, "mixing time disagrees with matrix powers");
    Ok(c)
}

/// Structural properties: loop erasure, cluster refinement, minimal
/// subtrees, the edit bound, Rayleigh monotonicity, the series law and
/// thread-count independence of the sweep CSV.
pub fn check_properties(tree_pairs: usize, seed: u64) -> Result<CheckResult> {
    let mut c = CheckResult::new("property-suite");
    let mut r = rng(seed);

    let mut le_bad = 0usize;
    for _ in 0..2000 {
        let k = r.random_range(1..12);
        let len = r.random_range(1..60);
        let path: Vec<usize> = (0..len).map(|_| r.random_range(0..k)).collect();
        let once = loop_erase(&path)?;
        let mut seen = std::collections::HashSet::new();
        let simple = once.iter().all(|v| seen.insert(*v));
        if loop_erase(&once)? != once || !simple || once[0] != path[0] || once.last() != path.last() {
            le_bad += 1;
        }
    }
    c.metric("loop_erasure_failures", le_bad as f64);
    c.require(le_bad == 0, "loop erasure");

    let mut refine_bad = 0usize;
    for k in 0..20 {
        let env = gen_environment(60, seed.wrapping_add(k))?;
        let mut ps: Vec<f64> = (0..6).map(|_| r.random_range(0.0..0.08)).collect();
        ps.sort_by(f64::total_cmp);
        let decs: Vec<_> = ps.iter().map(|&p| clusters_at(&env, p)).collect::<Result<_>>()?;
        refine_bad += decs.windows(2).filter(|w| !w[0].refines(&w[1])).count();
    }
    c.metric("refinement_failures", refine_bad as f64);
    c.require(refine_bad == 0, "cluster refinement");

    let mut sub_bad = 0usize;
    for k in 0..300 {
        let n = r.random_range(2..50);
        let env = gen_environment(n, seed.wrapping_add(1000 + k))?;
        let t = wilson_sample(&log_weight_view(&env, 2.0)?, 0, &mut r)?;
        let mut a: Vec<u32> = (0..n as u32).filter(|_| r.random::<f64>() < 0.2).collect();
        if a.is_empty() {
            a.push(0);
        }
        let mut b = a.clone();
        b.extend((0..n as u32).filter(|_| r.random::<f64>() < 0.2));
        b.sort_unstable();
        b.dedup();
        let sa = minimal_subtree(&t, &a)?;
        let sb = minimal_subtree(&t, &b)?;
        let again = minimal_subtree(&t, &sa.vertices)?;
        let mono = sa.vertices.iter().all(|v| sb.vertices.binary_search(v).is_ok())
            && sa.edges.iter().all(|&(u, v)| sb.contains_edge(u, v));
        if !mono || again != sa {
            sub_bad += 1;
        }
    }
    c.metric("subtree_failures", sub_bad as f64);
    c.require(sub_bad == 0, "minimal subtree monotonicity or idempotence");

    let mut edit_bad = 0usize;
    let mut k_max = 0usize;
    for i in 0..tree_pairs {
        let n = r.random_range(2..=64);
        let edges = random_connected_edges(n, r.random_range(0.05..0.6), &mut r);
        let lw: Vec<f64> = edges.iter().map(|_| -3.0 * r.random::<f64>()).collect();
        let g = LogWeightGraph::from_edges(n, &edges, &lw)?;
        let t1 = wilson_sample(&g, 0, &mut r)?;
        let t2 = if i % 2 == 0 {
            wilson_sample(&g, r.random_range(0..n), &mut r)?
        } else {
            // a few random exchanges inside the same graph
            let mut cur: Vec<(usize, usize)> = t1.edges().map(|(a, b)| (a.min(b), a.max(b))).collect();
            for _ in 0..r.random_range(1..4) {
                let &(u, v) = edges.choose(&mut r).unwrap();
                let t = SpanningTree::from_edges(n, &cur, 0)?;
                if t.contains_edge(u, v) {
                    continue;
                }
                let path = t.path(u, v);
                let j = r.random_range(0..path.len() - 1);
                let (a, b) = (path[j].min(path[j + 1]), path[j].max(path[j + 1]));
                cur.retain(|&e| e != (a, b));
                cur.push((u, v));
            }
            SpanningTree::from_edges(n, &cur, 0)?
        };
        let k = n - 1 - crate::tree::edge_overlap(&t1, &t2)?;
        k_max = k_max.max(k);
        let (d1, d2) = (t1.diameter() as f64, t2.diameter() as f64);
        let kf = k as f64;
        if !(d2 / (kf + 1.0) - 1.0 <= d1 && d1 <= (kf + 1.0) * d2 + kf) {
            edit_bad += 1;
        }
    }
    c.metric("edit_bound_failures", edit_bad as f64)
        .metric("edit_pairs", tree_pairs as f64)
        .metric("edit_k_max", k_max as f64);
    c.require(edit_bad == 0, "edit bound");

    let mut rayleigh_bad = 0usize;
    let mut series_err = 0.0f64;
    for _ in 0..100 {
        let n = r.random_range(3..12);
        let edges = random_connected_edges(n, 0.4, &mut r);
        let lw: Vec<f64> = edges.iter().map(|_| -4.0 * r.random::<f64>()).collect();
        let g = LogWeightGraph::from_edges(n, &edges, &lw)?;
        let e = r.random_range(0..edges.len());
        let mut lw2 = lw.clone();
        lw2[e] += r.random_range(0.0..3.0);
        let g2 = g.with_log_weights(lw2)?;
        for a in 0..n {
            for b in a + 1..n {
                let r1 = effective_resistance(&g, a, b)?.r_eff.to_f64();
                let r2 = effective_resistance(&g2, a, b)?.r_eff.to_f64();
                if r2 > r1 * (1.0 + 1e-12) {
                    rayleigh_bad += 1;
                }
            }
        }

        // series law: a new vertex between u and v against one edge u–v
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|p| !edges.contains(p))
            .collect();
        let Some(&(u, v)) = missing.choose(&mut r) else {
            continue;
        };
        let (w1, w2) = (r.random_range(0.1..3.0f64), r.random_range(0.1..3.0f64));
        let mut e1 = edges.clone();
        e1.push((u, n));
        e1.push((v, n));
        let mut l1 = lw.clone();
        l1.push(w1.ln());
        l1.push(w2.ln());
        let mut e2 = edges.clone();
        e2.push((u, v));
        let mut l2 = lw.clone();
        l2.push((w1 * w2 / (w1 + w2)).ln());
        let g1 = LogWeightGraph::from_edges(n + 1, &e1, &l1)?;
        let g2 = LogWeightGraph::from_edges(n, &e2, &l2)?;
        for a in 0..n {
            for b in a + 1..n {
                let x = effective_resistance(&g1, a, b)?.r_eff.to_f64();
                let y = effective_resistance(&g2, a, b)?.r_eff.to_f64();
                series_err = series_err.max(((x - y) / y).abs());
            }
        }
    }
    c.metric("rayleigh_failures", rayleigh_bad as f64)
        .metric("series_rel_err_max", series_err);
    c.require(rayleigh_bad == 0, "Rayleigh monotonicity");
    c.require(series_err <= 1e-9, "series law");

    let identical = csv_thread_independence(seed)?;
    c.metric("csv_identical", if identical { 1.0 } else { 0.0 });
    c.require(identical, "CSV differs between thread counts");
    Ok(c)
}

/// Runs the same small sweep on 1 and 8 workers and compares CSV bytes.
pub fn csv_thread_independence(seed: u64) -> Result<bool> {
    let mut out = Vec::new();
    for threads in [1usize, 8] {
        let mut bytes = Vec::new();
        for (sampler, beta) in [
            (SamplerKind::Wilson, BetaRule::low(0.125)),
            (SamplerKind::Exact, BetaRule::high()),
            (SamplerKind::Mst, BetaRule::Power { c: 0.0, a: 0.0, b: 0.0 }),
        ] {
            let cfg = SweepConfig {
                master_seed: seed,
                n_list: vec![10, 30, 60],
                beta_rule: beta,
                sampler,
                replicates: 6,
                p0_rule: super::P0Rule::Critical { g0: 1.0 },
                overlap: true,
                threads,
                ..SweepConfig::default()
            };
            write_csv(&run_sweep(&cfg)?, &mut bytes)?;
        }
        out.push(bytes);
    }
    Ok(out[0] == out[1])
}

/// Runs the checks of `level`. `fast` covers the identity checks at reduced
/// sizes (Wilson TV tolerance scaled by `√(10^5/samples)`); `full` runs
/// every regime check at its stated size.
pub fn verify_suite(level: Level) -> Result<VerifyReport> {
    let seed = 20_240_601;
    let mut checks = Vec::new();
    match level {
        Level::Fast => {
            let samples = 20_000;
            let tol = 0.02 * (1e5 / samples as f64).sqrt();
            checks.push(check_exact_distribution(3, samples, &[0.0, 1.0, 5.0], tol, seed)?);
            checks.push(check_kirchhoff(20, 12, 1e3, seed)?);
            checks.push(check_collapse(&[8, 16], 100, seed)?);
            checks.push(check_spectral(100, 10, seed)?);
            checks.push(check_properties(500, seed)?);
        }
        Level::Full => {
            checks.push(check_exact_distribution(20, 100_000, &[0.0, 1.0, 5.0], 0.02, seed)?);
            checks.push(check_kirchhoff(100, 12, 1e3, seed)?);
            checks.push(check_low_disorder(&[250, 500, 1000, 2000, 4000], 100, seed)?);
            checks.push(check_mst_slope(&[4000, 8000, 16000, 32000, 64000], 40, seed)?);
            checks.push(check_exact_vs_mst(&[32, 64, 96], 100, seed)?);
            checks.push(check_collapse(&[8, 16, 32], 1000, seed)?);
            checks.push(check_er_laws(100_000, 200, 4.0, seed)?);
            checks.push(check_concentration(2000, 50, seed)?);
            checks.push(check_gap_events(200, 100, seed)?);
            checks.push(check_spectral(1000, 16, seed)?);
            checks.push(check_properties(10_000, seed)?);
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { level, passed, checks })
}
