//! Exact sequential sampling by deletion and contraction.
//!
//! Edges are visited strongest first. With `C'` the effective conductance
//! between the endpoints in the current multigraph without the edge,
//! `P(in) = w/(w + C')` and `P(out) = C'/(w + C')`, both free of
//! subtraction. Cheap brackets on `C'` decide most coins without a solve:
//! the weaker of the two endpoint degrees bounds it above and the parallel
//! edges plus all two-hop paths bound it below.

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::Network;
use crate::tree::SpanningTree;
use crate::weights::LogWeightGraph;
use crate::xfloat::XFloat;

pub const DEFAULT_EXACT_CAP: usize = 128;

/// Relative slack applied to the brackets before trusting them.
const SLACK: f64 = 1e-10;

struct Contraction<'a> {
    g: &'a LogWeightGraph,
    order: Vec<usize>,
    rank: Vec<usize>,
    w: Vec<XFloat>,
    label: Vec<u32>,
    members: Vec<Vec<u32>>,
    row_a: Vec<XFloat>,
    row_b: Vec<XFloat>,
    touched: Vec<u32>,
}

struct Bracket {
    lo: XFloat,
    hi: XFloat,
}

impl<'a> Contraction<'a> {
    fn new(g: &'a LogWeightGraph) -> Self {
        let m = g.edge_count();
        let lw = g.log_weights();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| lw[b].total_cmp(&lw[a]).then(a.cmp(&b)));
        let mut rank = vec![0; m];
        for (i, &e) in order.iter().enumerate() {
            rank[e] = i;
        }
        let n = g.n();
        Self {
            g,
            order,
            rank,
            w: lw.iter().map(|&l| XFloat::exp_of(l)).collect(),
            label: (0..n as u32).collect(),
            members: (0..n as u32).map(|v| vec![v]).collect(),
            row_a: vec![XFloat::ZERO; n],
            row_b: vec![XFloat::ZERO; n],
            touched: Vec::new(),
        }
    }

    fn contract(&mut self, a: u32, b: u32) {
        let (big, small) = if self.members[a as usize].len() >= self.members[b as usize].len() {
            (a, b)
        } else {
            (b, a)
        };
        let moved = std::mem::take(&mut self.members[small as usize]);
        for &x in &moved {
            self.label[x as usize] = big;
        }
        self.members[big as usize].extend(moved);
    }

    /// Bracket on the effective conductance between supervertices `a` and
    /// `b` using only edges ranked after `t`.
    fn bracket(&mut self, t: usize, a: u32, b: u32) -> Bracket {
        let mut deg_a = XFloat::ZERO;
        let mut deg_b = XFloat::ZERO;
        let mut parallel = XFloat::ZERO;
        for (side, sv) in [(0, a), (1, b)] {
            for i in 0..self.members[sv as usize].len() {
                let x = self.members[sv as usize][i] as usize;
                let (label, rank, w) = (&self.label, &self.rank, &self.w);
                let (row, deg) = if side == 0 {
                    (&mut self.row_a, &mut deg_a)
                } else {
                    (&mut self.row_b, &mut deg_b)
                };
                let touched = &mut self.touched;
                self.g.for_each_neighbor(x, |y, f| {
                    if rank[f] <= t {
                        return;
                    }
                    let ly = label[y];
                    if ly == sv {
                        return;
                    }
                    *deg += w[f];
                    if ly == a || ly == b {
                        if side == 0 {
                            parallel += w[f];
                        }
                    } else {
                        if row[ly as usize].is_zero() {
                            touched.push(ly);
                        }
                        row[ly as usize] += w[f];
                    }
                });
            }
        }
        let mut lo = parallel;
        // a label shared by both rows is listed twice; the reset skips the repeat
        for &c in &self.touched {
            let (x, y) = (self.row_a[c as usize], self.row_b[c as usize]);
            if !x.is_zero() && !y.is_zero() {
                lo += x * y / (x + y);
            }
            self.row_a[c as usize] = XFloat::ZERO;
            self.row_b[c as usize] = XFloat::ZERO;
        }
        self.touched.clear();
        let hi = if deg_a < deg_b { deg_a } else { deg_b };
        Bracket { lo, hi }
    }

    /// Exact effective conductance between `a` and `b` over edges ranked
    /// after `t`.
    fn conductance(&self, t: usize, a: u32, b: u32) -> XFloat {
        let n = self.g.n();
        let mut index = vec![u32::MAX; n];
        let mut k = 0;
        for (s, m) in self.members.iter().enumerate() {
            if !m.is_empty() {
                index[s] = k;
                k += 1;
            }
        }
        let mut net = Network::new(k as usize);
        for &f in &self.order[t + 1..] {
            let (u, v) = self.g.endpoints(f);
            let (lu, lv) = (self.label[u], self.label[v]);
            if lu != lv {
                net.add(index[lu as usize] as usize, index[lv as usize] as usize, self.w[f]);
            }
        }
        net.effective_conductance(index[a as usize] as usize, index[b as usize] as usize)
    }
}

/// Uniform on (0, 1) with the full exponent range near zero.
fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> XFloat {
    let mut exp = 0i64;
    loop {
        let word = rng.next_u64();
        if word == 0 {
            exp -= 64;
            continue;
        }
        let lz = word.leading_zeros();
        let mut m = word << lz;
        if lz > 0 {
            m |= rng.next_u64() >> (64 - lz);
        }
        let sig = ((m >> 11) as f64 + 0.5) * f64::powi(2.0, -52);
        return XFloat::ldexp(sig, exp - lz as i64 - 1);
    }
}

/// A coin with `P(heads) = w/(w + C)` resolved lazily against a bracket on `C`.
struct Coin {
    /// `true`: compare `u` against `P(in)`; `false`: against `P(out)`.
    low_half: bool,
    u: XFloat,
}

impl Coin {
    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let low_half = rng.random::<bool>();
        let u = uniform_open(rng) * XFloat::from_f64(0.5);
        Coin { low_half, u }
    }

    fn decide(&self, w: XFloat, c: XFloat) -> bool {
        let total = w + c;
        if self.low_half {
            self.u < w / total
        } else {
            // u' = 1 - u lies in (1/2, 1); include iff u' < P(in) iff u > P(out)
            self.u > c / total
        }
    }

    /// `Some(decision)` when every `C` in the bracket yields the same answer.
    fn decide_bracket(&self, w: XFloat, b: &Bracket) -> Option<bool> {
        let lo = b.lo * XFloat::from_f64(1.0 - SLACK);
        let hi = b.hi * XFloat::from_f64(1.0 + SLACK);
        let with_lo = self.decide(w, lo);
        let with_hi = self.decide(w, hi);
        (with_lo == with_hi).then_some(with_lo)
    }
}

/// Exact sample with the default vertex cap.
pub fn sequential_exact_sample<R: Rng + ?Sized>(
    g: &LogWeightGraph,
    rng: &mut R,
) -> Result<SpanningTree> {
    sequential_exact_sample_capped(g, DEFAULT_EXACT_CAP, rng)
}

fn check(g: &LogWeightGraph, cap: usize) -> Result<()> {
    if g.n() > cap {
        return Err(Error::SizeCap {
            what: "exact sampler vertex count",
            got: g.n(),
            cap,
        });
    }
    g.require_connected()
}

/// Exact sample from the weighted spanning-tree measure for `n ≤ cap`.
pub fn sequential_exact_sample_capped<R: Rng + ?Sized>(
    g: &LogWeightGraph,
    cap: usize,
    rng: &mut R,
) -> Result<SpanningTree> {
    check(g, cap)?;
    let n = g.n();
    let mut st = Contraction::new(g);
    let mut edges = Vec::with_capacity(n - 1);
    for t in 0..st.order.len() {
        if edges.len() + 1 == n {
            break;
        }
        let e = st.order[t];
        let (u, v) = g.endpoints(e);
        let (a, b) = (st.label[u], st.label[v]);
        if a == b {
            continue;
        }
        let w = st.w[e];
        let coin = Coin::draw(rng);
        let bracket = st.bracket(t, a, b);
        let include = match coin.decide_bracket(w, &bracket) {
            Some(d) => d,
            None => coin.decide(w, st.conductance(t, a, b)),
        };
        if include {
            edges.push((u, v));
            st.contract(a, b);
        }
    }
    if edges.len() + 1 != n {
        return Err(Error::InternalInvariant(format!(
            "exact sampler produced {} edges for n={n}",
            edges.len()
        )));
    }
    SpanningTree::from_edges(n, &edges, 0)
}

/// `log P(T)` obtained by chaining the coin probabilities of the exact
/// sampler along the path that produces `t`.
pub fn sequential_tree_log_prob(g: &LogWeightGraph, t: &SpanningTree) -> Result<f64> {
    check(g, DEFAULT_EXACT_CAP)?;
    if t.n() != g.n() {
        return Err(Error::invalid("tree and graph sizes differ"));
    }
    let mut st = Contraction::new(g);
    let mut total = 0.0;
    for i in 0..st.order.len() {
        let e = st.order[i];
        let (u, v) = g.endpoints(e);
        let (a, b) = (st.label[u], st.label[v]);
        if a == b {
            continue;
        }
        let w = st.w[e];
        let c = st.conductance(i, a, b);
        let sum = w + c;
        if t.contains_edge(u, v) {
            total += (w / sum).ln();
            st.contract(a, b);
        } else {
            if c.is_zero() {
                return Ok(f64::NEG_INFINITY);
            }
            total += (c / sum).ln();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Environment;
    use crate::weights::log_weight_view;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn triangle_112() -> LogWeightGraph {
        LogWeightGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], &[0.0, 0.0, 2f64.ln()]).unwrap()
    }

    #[test]
    fn triangle_probabilities() {
        let g = triangle_112();
        let light = SpanningTree::from_edges(3, &[(0, 1), (1, 2)], 0).unwrap();
        let heavy = SpanningTree::from_edges(3, &[(0, 1), (0, 2)], 0).unwrap();
        let lp = sequential_tree_log_prob(&g, &light).unwrap();
        let hp = sequential_tree_log_prob(&g, &heavy).unwrap();
        assert!((lp.exp() - 0.2).abs() < 1e-14);
        assert!((hp.exp() - 0.4).abs() < 1e-14);

        let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
        let draws = 50_000;
        let hits = (0..draws)
            .filter(|_| sequential_exact_sample(&g, &mut rng).unwrap() == light)
            .count();
        let f = hits as f64 / draws as f64;
        assert!((f - 0.2).abs() < 0.01, "{f}");
    }

    #[test]
    fn tree_input_is_deterministic() {
        let g = LogWeightGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)], &[0.0, -5.0, -900.0]).unwrap();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(8);
        for _ in 0..20 {
            let t = sequential_exact_sample(&g, &mut rng).unwrap();
            assert_eq!(t.edge_pairs(), vec![(0, 1), (1, 2), (1, 3)]);
            assert_eq!(sequential_tree_log_prob(&g, &t).unwrap(), 0.0);
        }
    }

    #[test]
    fn high_beta_triangle_is_nearly_deterministic() {
        let env = Environment::from_values(3, 0, vec![0.2, 0.9, 0.5]).unwrap();
        let g = log_weight_view(&env, 100.0).unwrap();
        let best = SpanningTree::from_edges(3, &[(0, 1), (1, 2)], 0).unwrap();
        let other = SpanningTree::from_edges(3, &[(0, 1), (0, 2)], 0).unwrap();
        let eps = 1.0 - sequential_tree_log_prob(&g, &best).unwrap().exp();
        assert!(eps < 1e-17);
        let lo = sequential_tree_log_prob(&g, &other).unwrap();
        assert!((lo - (-40.0)).abs() < 1e-9, "{lo}");
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(9);
        for _ in 0..1000 {
            assert_eq!(sequential_exact_sample(&g, &mut rng).unwrap(), best);
        }
    }

    #[test]
    fn uniform_open_is_uniform() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(10);
        let xs: Vec<f64> = (0..20_000).map(|_| uniform_open(&mut rng).to_f64()).collect();
        assert!(xs.iter().all(|&x| x > 0.0 && x < 1.0));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.5).abs() < 0.01);
        let below = xs.iter().filter(|&&x| x < 0.25).count() as f64 / xs.len() as f64;
        assert!((below - 0.25).abs() < 0.01);
    }

    #[test]
    fn cap_is_enforced() {
        let g = LogWeightGraph::unit_complete(10).unwrap();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
        assert!(matches!(
            sequential_exact_sample_capped(&g, 9, &mut rng),
            Err(Error::SizeCap { .. })
        ));
    }
}
