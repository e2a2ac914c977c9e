//! Disorder generation and canonical edge indexing on the complete graph.
//!
//! The dense [`Environment`] draws one uniform per unordered pair of `K_n`
//! from a counter-mode SplitMix64 stream: the value for edge id `e` is the
//! top 53 bits of `splitmix64_mix(mix(seed) + (e + 1) * GOLDEN_GAMMA)`,
//! scaled to `[0, 1)`. Any single value can therefore be regenerated
//! without materializing the others.
//!
//! The [`SparseEnvironment`] realizes the same law restricted to the light
//! edges `{ω_e ≤ p_max}` by geometric skipping over edge ids, driven by a
//! Xoshiro256++ stream keyed by the seed. It is a different stream from the
//! dense one; the two are equal in law, not bit-for-bit.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The disorder value of edge `id` in the dense stream keyed by `seed`.
#[inline]
pub fn omega_at(seed: u64, id: EdgeId) -> f64 {
    let base = splitmix64(seed);
    unit_f64(splitmix64(
        base.wrapping_add(id.0.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
    ))
}

/// Canonical index of an unordered pair `{u, v}` of `K_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u64);

/// Number of unordered pairs of `K_n`.
pub fn edge_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

#[inline]
fn row_start(u: u64, n: u64) -> u64 {
    u * n - u * (u + 1) / 2
}

/// Unchecked canonical id for `u < v < n`.
#[inline]
pub(crate) fn edge_id_ordered(u: usize, v: usize, n: usize) -> u64 {
    debug_assert!(u < v && v < n);
    row_start(u as u64, n as u64) + (v - u - 1) as u64
}

/// `id = u·n − u(u+1)/2 + (v−u−1)` for `u < v`, symmetric in its arguments.
pub fn canonical_edge_id(u: usize, v: usize, n: usize) -> Result<EdgeId> {
    if u >= n || v >= n {
        return Err(Error::invalid(format!(
            "vertex out of range: ({u}, {v}) with n = {n}"
        )));
    }
    if u == v {
        return Err(Error::invalid(format!("self-pair ({u}, {v})")));
    }
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    Ok(EdgeId(edge_id_ordered(a, b, n)))
}

/// Inverse of [`canonical_edge_id`]: returns `(u, v)` with `u < v`.
pub fn edge_endpoints(id: EdgeId, n: usize) -> Result<(usize, usize)> {
    let m = edge_count(n);
    if id.0 >= m {
        return Err(Error::invalid(format!(
            "edge id {} out of range for n = {n}",
            id.0
        )));
    }
    Ok(decode_edge(id.0, n as u64))
}

#[inline]
pub(crate) fn decode_edge(id: u64, n: u64) -> (usize, usize) {
    let b = (2 * n - 1) as f64;
    let disc = (b * b - 8.0 * id as f64).max(0.0);
    let mut u = ((b - disc.sqrt()) / 2.0).floor().max(0.0) as u64;
    u = u.min(n - 2);
    while u > 0 && row_start(u, n) > id {
        u -= 1;
    }
    while u + 1 < n - 1 && row_start(u + 1, n) <= id {
        u += 1;
    }
    let v = id - row_start(u, n) + u + 1;
    (u as usize, v as usize)
}

/// An edge of the coupled Erdős–Rényi graph, `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpenEdge {
    pub u: u32,
    pub v: u32,
    pub omega: f64,
}

/// Read access to a realized disorder on `K_n`, restricted to light edges.
pub trait Disorder: Sync {
    fn vertex_count(&self) -> usize;

    /// All edges with `ω_e ≤ p`, ordered by canonical edge id.
    fn open_edges(&self, p: f64) -> Result<Vec<OpenEdge>>;
}

/// i.i.d. uniform disorder on every edge of `K_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    n: usize,
    seed: u64,
    omega: Vec<f64>,
}

/// Draws `n(n−1)/2` uniforms for `K_n` from the stream keyed by `seed`.
pub fn gen_environment(n: usize, seed: u64) -> Result<Environment> {
    if n < 2 {
        return Err(Error::invalid(format!("environment needs n >= 2, got {n}")));
    }
    let m = edge_count(n);
    let omega = (0..m).map(|e| omega_at(seed, EdgeId(e))).collect();
    Ok(Environment { n, seed, omega })
}

impl Environment {
    /// Builds an environment from explicit values in canonical order.
    pub fn from_values(n: usize, seed: u64, omega: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("environment needs n >= 2, got {n}")));
        }
        if omega.len() as u64 != edge_count(n) {
            return Err(Error::invalid(format!(
                "expected {} disorder values for n = {n}, got {}",
                edge_count(n),
                omega.len()
            )));
        }
        if let Some(x) = omega.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::invalid(format!("disorder value {x} outside [0, 1]")));
        }
        Ok(Self { n, seed, omega })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Disorder values indexed by canonical edge id.
    pub fn values(&self) -> &[f64] {
        &self.omega
    }

    pub fn omega(&self, u: usize, v: usize) -> f64 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.omega[edge_id_ordered(a, b, self.n) as usize]
    }

    pub fn omega_by_id(&self, id: EdgeId) -> f64 {
        self.omega[id.0 as usize]
    }

    /// Applies `f` to every value. Used to check ordering invariance.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values(self.n, self.seed, self.omega.iter().map(|&x| f(x)).collect())
    }

    /// Writes the `rstre-env v1` text format.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "rstre-env v1 n={} seed={}", self.n, self.seed)?;
        let mut line = String::with_capacity(32);
        for &x in &self.omega {
            line.clear();
            write!(line, "{x:.16e}").expect("string write");
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// Reads the `rstre-env v1` text format.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))??;
        let (n, seed) = parse_env_header(&header)?;
        let m = edge_count(n) as usize;
        let mut omega = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let x: f64 = t
                .parse()
                .map_err(|_| Error::parse(i + 2, format!("not a number: {t:?}")))?;
            omega.push(x);
        }
        Self::from_values(n, seed, omega)
    }
}

fn parse_env_header(header: &str) -> Result<(usize, u64)> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some("rstre-env") || parts.next() != Some("v1") {
        return Err(Error::parse(1, format!("bad header {header:?}")));
    }
    let mut n = None;
    let mut seed = None;
    for kv in parts {
        match kv.split_once('=') {
            Some(("n", v)) => n = v.parse().ok(),
            Some(("seed", v)) => seed = v.parse().ok(),
            _ => return Err(Error::parse(1, format!("unexpected field {kv:?}"))),
        }
    }
    match (n, seed) {
        (Some(n), Some(seed)) => Ok((n, seed)),
        _ => Err(Error::parse(1, "header needs n= and seed=")),
    }
}

impl Disorder for Environment {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn open_edges(&self, p: f64) -> Result<Vec<OpenEdge>> {
        let mut out = Vec::new();
        let mut id = 0usize;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let w = self.omega[id];
                if w <= p {
                    out.push(OpenEdge {
                        u: u as u32,
                        v: v as u32,
                        omega: w,
                    });
                }
                id += 1;
            }
        }
        Ok(out)
    }
}

/// The disorder of `K_n` revealed only on edges with `ω_e ≤ p_max`.
///
/// Conditional on being revealed, each value is uniform on its layer, so every
/// threshold query `p ≤ p_max` sees exactly the law of the dense coupling.
#[derive(Clone, Debug)]
pub struct SparseEnvironment {
    n: usize,
    seed: u64,
    p_max: f64,
    edges: Vec<(u64, OpenEdge)>,
    rng: Xoshiro256PlusPlus,
}

impl SparseEnvironment {
    pub fn generate(n: usize, seed: u64, p_max: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("environment needs n >= 2, got {n}")));
        }
        if !(0.0..=1.0).contains(&p_max) {
            return Err(Error::invalid(format!("p_max = {p_max} outside [0, 1]")));
        }
        let mut env = Self {
            n,
            seed,
            p_max: 0.0,
            edges: Vec::new(),
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        };
        env.extend_to(p_max)?;
        Ok(env)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn edge_len(&self) -> usize {
        self.edges.len()
    }

    /// Reveals the layer `p_max < ω_e ≤ p` on previously hidden edges.
    pub fn extend_to(&mut self, p: f64) -> Result<()> {
        if p > 1.0 || p.is_nan() {
            return Err(Error::invalid(format!("threshold {p} outside [0, 1]")));
        }
        if p <= self.p_max {
            return Ok(());
        }
        let lo = self.p_max;
        let q = if lo >= 1.0 { 1.0 } else { (p - lo) / (1.0 - lo) };
        let m = edge_count(self.n);
        let present: HashSet<u64> = self.edges.iter().map(|(id, _)| *id).collect();
        let mut added = Vec::new();
        let n64 = self.n as u64;
        let log1mq = (-q).ln_1p();
        let mut pos: u64 = 0;
        let mut first = true;
        loop {
            let skip = if q >= 1.0 {
                0
            } else {
                let u: f64 = 1.0 - self.rng.random::<f64>();
                let s = (u.ln() / log1mq).floor();
                if s >= (m - pos) as f64 {
                    break;
                }
                s as u64
            };
            let id = if first { skip } else { pos + 1 + skip };
            first = false;
            if id >= m {
                break;
            }
            pos = id;
            let x = lo + (p - lo) * (1.0 - self.rng.random::<f64>());
            if present.contains(&id) {
                continue;
            }
            let (u, v) = decode_edge(id, n64);
            added.push((
                id,
                OpenEdge {
                    u: u as u32,
                    v: v as u32,
                    omega: x.min(p),
                },
            ));
            if id + 1 >= m {
                break;
            }
        }
        self.edges.extend(added);
        self.edges.sort_unstable_by_key(|(id, _)| *id);
        self.p_max = p;
        Ok(())
    }
}

impl Disorder for SparseEnvironment {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn open_edges(&self, p: f64) -> Result<Vec<OpenEdge>> {
        if p > self.p_max {
            return Err(Error::invalid(format!(
                "threshold {p} above revealed range {}",
                self.p_max
            )));
        }
        Ok(self
            .edges
            .iter()
            .filter(|(_, e)| e.omega <= p)
            .map(|(_, e)| *e)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_ids_match_examples() {
        assert_eq!(canonical_edge_id(0, 1, 4).unwrap(), EdgeId(0));
        assert_eq!(canonical_edge_id(2, 3, 4).unwrap(), EdgeId(5));
        assert_eq!(
            canonical_edge_id(3, 1, 5).unwrap(),
            canonical_edge_id(1, 3, 5).unwrap()
        );
        assert!(canonical_edge_id(2, 2, 5).is_err());
        assert!(canonical_edge_id(0, 5, 5).is_err());
    }

    #[test]
    fn edge_ids_round_trip_exhaustively() {
        for n in 2..=64 {
            let mut expected = 0u64;
            for u in 0..n {
                for v in (u + 1)..n {
                    let id = canonical_edge_id(u, v, n).unwrap();
                    assert_eq!(id.0, expected);
                    assert_eq!(edge_endpoints(id, n).unwrap(), (u, v));
                    expected += 1;
                }
            }
            assert_eq!(expected, edge_count(n));
        }
    }

    #[test]
    fn decode_large_ids() {
        let n = 100_000usize;
        for &(u, v) in &[(0, 1), (0, n - 1), (n / 2, n / 2 + 1), (n - 2, n - 1), (777, 99_999)] {
            let id = edge_id_ordered(u, v, n);
            assert_eq!(decode_edge(id, n as u64), (u, v));
        }
    }

    #[test]
    fn environment_shape_and_determinism() {
        assert!(gen_environment(1, 7).is_err());
        let e2 = gen_environment(2, 11).unwrap();
        assert_eq!(e2.values().len(), 1);
        assert!((0.0..=1.0).contains(&e2.values()[0]));

        let a = gen_environment(5, 42).unwrap();
        let b = gen_environment(5, 42).unwrap();
        assert_eq!(a.values().len(), 10);
        assert_eq!(
            a.values().iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.values().iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert_ne!(a.values(), gen_environment(5, 43).unwrap().values());
    }

    #[test]
    fn environment_mean_is_near_half() {
        let env = gen_environment(100, 2024).unwrap();
        let mean = env.values().iter().sum::<f64>() / env.values().len() as f64;
        assert!((mean - 0.5).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn text_format_round_trips() {
        let env = gen_environment(9, 3).unwrap();
        let mut buf = Vec::new();
        env.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("rstre-env v1 n=9 seed=3\n"));
        let back = Environment::read_text(&buf[..]).unwrap();
        assert_eq!(back, env);
        for (a, b) in back.values().iter().zip(env.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn text_format_rejects_garbage() {
        assert!(Environment::read_text(&b"nope\n"[..]).is_err());
        assert!(Environment::read_text(&b"rstre-env v1 n=3 seed=1\n0.5\n0.5\n"[..]).is_err());
        assert!(Environment::read_text(&b"rstre-env v1 n=2 seed=1\n1.5\n"[..]).is_err());
    }

    #[test]
    fn dense_open_edges_respect_threshold() {
        let env = gen_environment(30, 5).unwrap();
        let open = env.open_edges(0.1).unwrap();
        let brute = env.values().iter().filter(|&&x| x <= 0.1).count();
        assert_eq!(open.len(), brute);
        assert!(open.iter().all(|e| e.u < e.v && env.omega(e.u as usize, e.v as usize) == e.omega));
    }

    #[test]
    fn sparse_environment_has_expected_density() {
        let n = 20_000;
        let p = 3.0 / n as f64;
        let env = SparseEnvironment::generate(n, 9, p).unwrap();
        let expect = edge_count(n) as f64 * p;
        let got = env.edge_len() as f64;
        assert!((got - expect).abs() < 5.0 * expect.sqrt(), "{got} vs {expect}");
        let open = env.open_edges(p).unwrap();
        assert!(open.iter().all(|e| e.omega <= p && e.u < e.v));
        let half = env.open_edges(p / 2.0).unwrap().len() as f64;
        assert!((half - expect / 2.0).abs() < 5.0 * (expect / 2.0).sqrt());
        assert!(env.open_edges(2.0 * p).is_err());
    }

    #[test]
    fn sparse_extension_adds_a_disjoint_layer() {
        let n = 5_000;
        let p = 2.0 / n as f64;
        let mut env = SparseEnvironment::generate(n, 1, p).unwrap();
        let before = env.open_edges(p).unwrap();
        env.extend_to(2.0 * p).unwrap();
        assert_eq!(env.open_edges(p).unwrap(), before);
        let all = env.open_edges(2.0 * p).unwrap();
        let mut ids: Vec<u64> = all
            .iter()
            .map(|e| edge_id_ordered(e.u as usize, e.v as usize, n))
            .collect();
        let len = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), len);
        let expect = edge_count(n) as f64 * 2.0 * p;
        assert!((len as f64 - expect).abs() < 5.0 * expect.sqrt());
    }

    #[test]
    fn sparse_full_range_reveals_everything() {
        let env = SparseEnvironment::generate(12, 4, 1.0).unwrap();
        assert_eq!(env.edge_len() as u64, edge_count(12));
    }
}
