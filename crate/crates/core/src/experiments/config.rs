use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Wilson,
    Exact,
    Mst,
}

impl FromStr for SamplerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "wilson" => Ok(Self::Wilson),
            "exact" => Ok(Self::Exact),
            "mst" => Ok(Self::Mst),
            o => Err(Error::invalid(format!("unknown sampler '{o}' (wilson | exact | mst)"))),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Wilson => "wilson",
            Self::Exact => "exact",
            Self::Mst => "mst",
        })
    }
}

/// `β(n)`.
///
/// Text forms: `zero`, `low[:c]` (`c·n/ln n`, default `c = 1/8`), `boundary`
/// (`n`), `intermediate:γ` (`n^{1+γ}`), `high` (`n^{4/3} ln n`),
/// `collapse[:c]` (`c·m²·n·ln n` with `m = n(n−1)/2`, default `c = 10`),
/// a constant, or `c,a,b` for `c·n^a·(ln n)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BetaRule {
    Power { c: f64, a: f64, b: f64 },
    Collapse { c: f64 },
}

impl BetaRule {
    pub fn low(c: f64) -> Self {
        BetaRule::Power { c, a: 1.0, b: -1.0 }
    }

    pub fn high() -> Self {
        BetaRule::Power {
            c: 1.0,
            a: 4.0 / 3.0,
            b: 1.0,
        }
    }

    pub fn eval(&self, n: usize) -> Result<f64> {
        let nf = n as f64;
        let v = match *self {
            BetaRule::Power { c, a, b } => {
                if c == 0.0 {
                    0.0
                } else {
                    c * nf.powf(a) * nf.ln().powf(b)
                }
            }
            BetaRule::Collapse { c } => {
                let m = nf * (nf - 1.0) / 2.0;
                c * m * m * nf * nf.ln()
            }
        };
        if !v.is_finite() || v < 0.0 {
            return Err(Error::invalid(format!("beta rule gives {v} at n={n}")));
        }
        Ok(v)
    }
}

impl FromStr for BetaRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(parse_f64(a)?)),
            None => (s, None),
        };
        let rule = match (head, arg) {
            ("zero", None) => BetaRule::Power { c: 0.0, a: 0.0, b: 0.0 },
            ("low", c) => BetaRule::low(c.unwrap_or(0.125)),
            ("boundary", None) => BetaRule::Power { c: 1.0, a: 1.0, b: 0.0 },
            ("intermediate", Some(g)) => BetaRule::Power {
                c: 1.0,
                a: 1.0 + g,
                b: 0.0,
            },
            ("high", None) => BetaRule::high(),
            ("collapse", c) => BetaRule::Collapse { c: c.unwrap_or(10.0) },
            _ if !s.contains(',') => BetaRule::Power {
                c: parse_f64(s)?,
                a: 0.0,
                b: 0.0,
            },
            _ => {
                let (c, a, b) = parse_triple(s)?;
                BetaRule::Power { c, a, b }
            }
        };
        Ok(rule)
    }
}

/// Threshold `p_0(n)` for the subtree spanned by the largest `p_0`-cluster.
///
/// Text forms: `none`, `critical:g0` (`(1 + g0·n^{-1/3})/n`), or `c,a,b`
/// for `c·n^a·(ln n)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum P0Rule {
    None,
    Critical { g0: f64 },
    Power { c: f64, a: f64, b: f64 },
}

impl P0Rule {
    pub fn eval(&self, n: usize) -> Result<Option<f64>> {
        let nf = n as f64;
        let p = match *self {
            P0Rule::None => return Ok(None),
            P0Rule::Critical { g0 } => (1.0 + g0 * nf.powf(-1.0 / 3.0)) / nf,
            P0Rule::Power { c, a, b } => c * nf.powf(a) * nf.ln().powf(b),
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("p0 rule gives {p} at n={n}")));
        }
        Ok(Some(p))
    }
}

impl FromStr for P0Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "none" {
            return Ok(P0Rule::None);
        }
        if let Some(g) = s.strip_prefix("critical:") {
            return Ok(P0Rule::Critical { g0: parse_f64(g)? });
        }
        let (c, a, b) = parse_triple(s)?;
        Ok(P0Rule::Power { c, a, b })
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        return Ok(parse_f64(a)? / parse_f64(b)?);
    }
    s.parse()
        .map_err(|_| Error::invalid(format!("not a number: '{s}'")))
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("expected a preset or 'c,a,b', got '{s}'")));
    }
    Ok((parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?))
}

/// A sweep over `n_list × replicates`.
///
/// The file form is flat `key = value` lines; `#` starts a comment. Keys:
/// `master_seed`, `n_list` (comma separated), `beta`, `sampler`, `replicates`,
/// `p0`, `out`, `budget_scale`, `exact_cap`, `overlap`, `timing`, `threads`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub master_seed: u64,
    pub n_list: Vec<usize>,
    pub beta_rule: BetaRule,
    pub sampler: SamplerKind,
    pub replicates: usize,
    pub p0_rule: P0Rule,
    pub out: Option<PathBuf>,
    /// Multiplies the default Wilson step budget `10^4 n ln n`.
    pub budget_scale: f64,
    pub exact_cap: usize,
    /// Draw a second independent tree per replicate and record the overlap.
    pub overlap: bool,
    /// Record wall time; off by default so the CSV is reproducible.
    pub timing: bool,
    /// Worker count, `0` for one per core.
    pub threads: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            master_seed: 0,
            n_list: Vec::new(),
            beta_rule: BetaRule::Power { c: 0.0, a: 0.0, b: 0.0 },
            sampler: SamplerKind::Wilson,
            replicates: 1,
            p0_rule: P0Rule::None,
            out: None,
            budget_scale: 1.0,
            exact_cap: crate::samplers::DEFAULT_EXACT_CAP,
            overlap: false,
            timing: false,
            threads: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::invalid("n_list is empty"));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(Error::invalid(format!("n_list contains {n} < 2")));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        if !(self.budget_scale > 0.0 && self.budget_scale.is_finite()) {
            return Err(Error::invalid("budget_scale must be positive"));
        }
        for &n in &self.n_list {
            self.beta_rule.eval(n)?;
            self.p0_rule.eval(n)?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "expected key = value"))?;
            let v = v.trim();
            let at = |e: Error| Error::parse(i + 1, e.to_string());
            let int = |v: &str| -> Result<u64> {
                v.parse()
                    .map_err(|_| Error::parse(i + 1, format!("not an integer: '{v}'")))
            };
            let flag = |v: &str| -> Result<bool> {
                v.parse()
                    .map_err(|_| Error::parse(i + 1, format!("expected true or false: '{v}'")))
            };
            match k.trim() {
                "master_seed" => cfg.master_seed = int(v)?,
                "n_list" => {
                    cfg.n_list = v
                        .split(',')
                        .map(|s| int(s.trim()).map(|x| x as usize))
                        .collect::<Result<_>>()?
                }
                "beta" => cfg.beta_rule = v.parse().map_err(at)?,
                "sampler" => cfg.sampler = v.parse().map_err(at)?,
                "replicates" => cfg.replicates = int(v)? as usize,
                "p0" => cfg.p0_rule = v.parse().map_err(at)?,
                "out" => cfg.out = Some(PathBuf::from(v)),
                "budget_scale" => cfg.budget_scale = parse_f64(v).map_err(at)?,
                "exact_cap" => cfg.exact_cap = int(v)? as usize,
                "overlap" => cfg.overlap = flag(v)?,
                "timing" => cfg.timing = flag(v)?,
                "threads" => cfg.threads = int(v)? as usize,
                other => return Err(Error::parse(i + 1, format!("unknown key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
