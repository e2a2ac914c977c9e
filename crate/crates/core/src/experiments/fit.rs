use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::{ExperimentRecord, RunStatus};
use crate::error::{Error, Result};

/// Minimum successful replicates per `n` for a fit.
pub const FIT_MIN_REPLICATES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
struct Clause {
    field: String,
    op: Op,
    value: String,
}

/// Conjunction of `field op value` clauses separated by commas, e.g.
/// `sampler=wilson,n>=500`. Fields: `n`, `beta`, `seed`, `sampler`,
/// `status`, `run_id`. An empty filter keeps everything.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecordFilter {
    clauses: Vec<Clause>,
}

impl FromStr for RecordFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut clauses = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (field, op, value) = ["<=", ">=", "!=", "==", "=", "<", ">"]
                .iter()
                .find_map(|tok| {
                    part.split_once(tok).map(|(f, v)| {
                        let op = match *tok {
                            "<=" => Op::Le,
                            ">=" => Op::Ge,
                            "!=" => Op::Ne,
                            "<" => Op::Lt,
                            ">" => Op::Gt,
                            _ => Op::Eq,
                        };
                        (f.trim().to_string(), op, v.trim().to_string())
                    })
                })
                .ok_or_else(|| Error::invalid(format!("bad filter clause '{part}'")))?;
            let numeric = matches!(field.as_str(), "n" | "beta" | "seed");
            let textual = matches!(field.as_str(), "sampler" | "status" | "run_id");
            if !numeric && !textual {
                return Err(Error::invalid(format!("unknown filter field '{field}'")));
            }
            if numeric && value.parse::<f64>().is_err() {
                return Err(Error::invalid(format!("'{value}' is not a number")));
            }
            if textual && !matches!(op, Op::Eq | Op::Ne) {
                return Err(Error::invalid(format!("'{field}' supports only = and !=")));
            }
            clauses.push(Clause { field, op, value });
        }
        Ok(RecordFilter { clauses })
    }
}

impl RecordFilter {
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn matches(&self, r: &ExperimentRecord) -> bool {
        self.clauses.iter().all(|c| {
            let num = match c.field.as_str() {
                "n" => Some(r.n as f64),
                "beta" => Some(r.beta),
                "seed" => Some(r.seed as f64),
                _ => None,
            };
            match num {
                Some(x) => {
                    let v: f64 = c.value.parse().unwrap_or(f64::NAN);
                    match c.op {
                        Op::Eq => x == v,
                        Op::Ne => x != v,
                        Op::Lt => x < v,
                        Op::Le => x <= v,
                        Op::Gt => x > v,
                        Op::Ge => x >= v,
                    }
                }
                None => {
                    let s = match c.field.as_str() {
                        "sampler" => r.sampler.to_string(),
                        "status" => r.status.as_str().to_string(),
                        _ => r.run_id.clone(),
                    };
                    (s == c.value) == (c.op == Op::Eq)
                }
            }
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum FitColumn {
    #[default]
    Diam,
    DiamC1p0,
}

impl FromStr for FitColumn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diam" => Ok(Self::Diam),
            "diam_c1p0" => Ok(Self::DiamC1p0),
            o => Err(Error::invalid(format!("unknown column '{o}'"))),
        }
    }
}

impl FitColumn {
    fn get(self, r: &ExperimentRecord) -> Option<usize> {
        match self {
            Self::Diam => r.diam,
            Self::DiamC1p0 => r.diam_c1p0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellMean {
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
}

/// Least squares of `ln mean` on `ln n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub means: Vec<CellMean>,
}

fn cell_means(records: &[ExperimentRecord], filter: &RecordFilter, col: FitColumn) -> Vec<CellMean> {
    let mut cells: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| filter.matches(r)) {
        let v = (r.status == RunStatus::Ok).then(|| col.get(r)).flatten();
        let cell = cells.entry(r.n).or_default();
        if let Some(d) = v {
            cell.push(d as f64);
        }
    }
    cells
        .into_iter()
        .map(|(n, xs)| {
            let k = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / k;
            let var = if xs.len() > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
            } else {
                0.0
            };
            CellMean {
                n,
                count: xs.len(),
                mean,
                sd: var.sqrt(),
            }
        })
        .collect()
}

pub fn fit_exponent(records: &[ExperimentRecord], filter: &RecordFilter) -> Result<FitResult> {
    fit_exponent_on(records, filter, FitColumn::Diam)
}

pub fn fit_exponent_on(
    records: &[ExperimentRecord],
    filter: &RecordFilter,
    col: FitColumn,
) -> Result<FitResult> {
    let means = cell_means(records, filter, col);
    let deficient: Vec<String> = means
        .iter()
        .filter(|c| c.count < FIT_MIN_REPLICATES)
        .map(|c| format!("n={} has {} successful replicates", c.n, c.count))
        .collect();
    if !deficient.is_empty() || means.len() < 3 {
        let mut msg = format!(
            "need >= 3 values of n with >= {FIT_MIN_REPLICATES} successful replicates each, found {} values of n",
            means.len()
        );
        if !deficient.is_empty() {
            msg.push_str("; ");
            msg.push_str(&deficient.join("; "));
        }
        return Err(Error::InsufficientData(msg));
    }
    if means.iter().any(|c| c.mean <= 0.0) {
        return Err(Error::InsufficientData("a cell has mean 0".into()));
    }
    let xs: Vec<f64> = means.iter().map(|c| (c.n as f64).ln()).collect();
    let ys: Vec<f64> = means.iter().map(|c| c.mean.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (rss / (k - 2.0) / sxx).sqrt();
    Ok(FitResult {
        slope,
        intercept,
        stderr,
        n_min: means[0].n,
        n_max: means[means.len() - 1].n,
        means,
    })
}

/// Writes `<dir>/<label>.dat` for each regime with columns `n mean lo hi
/// count`, where `lo, hi = mean ∓ 1.96·sd/√count`.
pub fn emit_report(
    records: &[ExperimentRecord],
    regimes: &[(String, RecordFilter)],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    if regimes.is_empty() {
        return Err(Error::invalid("no regimes requested"));
    }
    let mut out = Vec::new();
    for (label, filter) in regimes {
        if label.is_empty() || label.contains(['/', '\\']) {
            return Err(Error::invalid(format!("bad regime label '{label}'")));
        }
        let means: Vec<CellMean> = cell_means(records, filter, FitColumn::Diam)
            .into_iter()
            .filter(|c| c.count > 0)
            .collect();
        if means.is_empty() {
            return Err(Error::InsufficientData(format!(
                "regime '{label}' selects no successful records"
            )));
        }
        let path = dir.join(format!("{label}.dat"));
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(f, "# n mean lo hi count")?;
        for c in &means {
            let h = 1.96 * c.sd / (c.count as f64).sqrt();
            writeln!(f, "{} {} {} {} {}", c.n, c.mean, c.mean - h, c.mean + h, c.count)?;
        }
        f.flush()?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::SamplerKind;

    fn synthetic(f: impl Fn(usize) -> f64, reps: usize) -> Vec<ExperimentRecord> {
        synthetic_on(&[100, 400, 1600, 6400], f, reps)
    }

    fn synthetic_on(ns: &[usize], f: impl Fn(usize) -> f64, reps: usize) -> Vec<ExperimentRecord> {
        let mut out = Vec::new();
        for &n in ns {
            for r in 0..reps {
                out.push(ExperimentRecord {
                    run_id: format!("n{n}-r{r}"),
                    n,
                    beta: 0.0,
                    seed: r as u64,
                    sampler: SamplerKind::Mst,
                    diam: Some(f(n).round() as usize),
                    diam_c1p0: None,
                    overlap: None,
                    steps: None,
                    wall_ms: 0,
                    status: RunStatus::Ok,
                });
            }
        }
        out
    }

    #[test]
    fn synthetic_slopes() {
        let recs = synthetic(|n| 2.0 * (n as f64).sqrt(), 10);
        let f = fit_exponent(&recs, &RecordFilter::default()).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12 && f.stderr < 1e-12);
        assert!((f.intercept - 2f64.ln()).abs() < 1e-12);
        let recs = synthetic_on(&[125, 1000, 8000, 64000], |n| 7.0 * (n as f64).cbrt(), 10);
        let f = fit_exponent(&recs, &RecordFilter::default()).unwrap();
        assert!((f.slope - 1.0 / 3.0).abs() < 1e-12 && f.stderr < 1e-12);
    }

    #[test]
    fn deficient_cells_are_listed() {
        let mut recs = synthetic(|n| n as f64, 10);
        for r in recs.iter_mut().filter(|r| r.n == 400).take(5) {
            r.status = RunStatus::Budget;
            r.diam = None;
        }
        match fit_exponent(&recs, &RecordFilter::default()) {
            Err(Error::InsufficientData(m)) => assert!(m.contains("n=400 has 5")),
            other => panic!("{other:?}"),
        }
        let filt: RecordFilter = "n>=1600".parse().unwrap();
        assert!(fit_exponent(&recs, &filt).is_err());
    }

    #[test]
    fn filters() {
        let recs = synthetic(|n| n as f64, 2);
        let f: RecordFilter = "sampler=mst, n<1600, status!=budget".parse().unwrap();
        assert_eq!(recs.iter().filter(|r| f.matches(r)).count(), 4);
        let f: RecordFilter = "sampler=wilson".parse().unwrap();
        assert_eq!(recs.iter().filter(|r| f.matches(r)).count(), 0);
        assert!("colour=red".parse::<RecordFilter>().is_err());
        assert!("n>big".parse::<RecordFilter>().is_err());
        assert!("sampler<mst".parse::<RecordFilter>().is_err());
    }

    #[test]
    fn report_files() {
        let dir = tempfile::tempdir().unwrap();
        let recs = synthetic(|n| n as f64, 3);
        let regimes = vec![
            ("small".to_string(), "n<1000".parse().unwrap()),
            ("large".to_string(), "n>=1000".parse().unwrap()),
        ];
        let paths = emit_report(&recs, &regimes, dir.path()).unwrap();
        assert_eq!(paths, vec![dir.path().join("small.dat"), dir.path().join("large.dat")]);
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        assert_eq!(text.lines().next(), Some("# n mean lo hi count"));
        assert_eq!(text.lines().nth(1), Some("100 100 100 100 3"));
        let none = vec![("none".to_string(), "sampler=exact".parse().unwrap())];
        assert!(emit_report(&recs, &none, dir.path()).is_err());
        assert!(emit_report(&recs, &[], dir.path()).is_err());
    }
}
