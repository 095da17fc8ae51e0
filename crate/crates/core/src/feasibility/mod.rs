//! Exact rational feasibility of hypothesized t-vectors.
//!
//! Variables are `t_k` for the allowed multiplicities `k`. Constraints: the
//! combinatorial identity, Hirzebruch's inequality (scaled by 4 to clear the
//! `3/4`), the supersolvable bound `t_2 >= 2n - m(s - m) - 2`, and
//! `t_m >= 1`. Every answer is checked by exact re-substitution before it is
//! returned.

pub mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arrangement::{choose2, TVector};
use crate::scalar::format_fraction;
use simplex::{LpResult, Row, Sense};

pub const MAX_M: u64 = 1000;
pub const MAX_S: u64 = 1_000_000;
pub const MAX_SCAN_LEN: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("empty s range {0}..={1}")]
    EmptyRange(u64, u64),
    #[error("solver answer for s = {0} failed exact verification")]
    Unverified(u64),
    #[error("bad problem document: {0}")]
    Schema(String),
}

/// Which constraint families to impose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Apply {
    pub identity: bool,
    pub hirzebruch: bool,
    pub at: bool,
}

impl Default for Apply {
    fn default() -> Self {
        Apply { identity: true, hirzebruch: true, at: true }
    }
}

/// A family of problems over a range of `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub m: u64,
    pub allowed: BTreeSet<u64>,
    pub force_t2_zero: bool,
    pub apply: Apply,
}

impl ProblemSpec {
    /// `allowed = None` means every multiplicity in `2..=m`.
    pub fn new(
        m: u64,
        allowed: Option<BTreeSet<u64>>,
        force_t2_zero: bool,
        apply: Apply,
    ) -> Result<Self, FeasibilityError> {
        if !(3..=MAX_M).contains(&m) {
            return Err(FeasibilityError::Invalid(format!("m must lie in 3..={MAX_M}, got {m}")));
        }
        let allowed = allowed.unwrap_or_else(|| (2..=m).collect());
        if let Some(k) = allowed.iter().find(|&&k| k < 2 || k > m) {
            return Err(FeasibilityError::Invalid(format!("multiplicity {k} outside 2..={m}")));
        }
        if !allowed.contains(&m) {
            return Err(FeasibilityError::Invalid(format!("allowed multiplicities must contain m = {m}")));
        }
        Ok(ProblemSpec { m, allowed, force_t2_zero, apply })
    }

    pub fn at(&self, s: u64) -> Result<FeasibilityProblem, FeasibilityError> {
        if !(2..=MAX_S).contains(&s) {
            return Err(FeasibilityError::Invalid(format!("s must lie in 2..={MAX_S}, got {s}")));
        }
        Ok(FeasibilityProblem { spec: self.clone(), s })
    }

    /// The multiplicities that carry a variable.
    pub fn variables(&self) -> Vec<u64> {
        self.allowed.iter().copied().filter(|&k| !(self.force_t2_zero && k == 2)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityProblem {
    pub spec: ProblemSpec,
    pub s: u64,
}

fn q(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

impl FeasibilityProblem {
    /// Named constraint rows over the variables of [`ProblemSpec::variables`].
    pub fn rows(&self) -> Vec<(&'static str, Row)> {
        let vars = self.spec.variables();
        let (m, s) = (self.spec.m as i64, self.s as i64);
        let coeffs = |f: &dyn Fn(i64) -> i64| vars.iter().map(|&k| BigInt::from(f(k as i64))).collect();
        let mut rows = Vec::with_capacity(4);
        if self.spec.apply.identity {
            rows.push((
                "identity",
                Row { coeffs: coeffs(&|k| k * (k - 1) / 2), sense: Sense::Eq, rhs: choose2(self.s) },
            ));
        }
        if self.spec.apply.hirzebruch {
            rows.push((
                "hirzebruch",
                Row {
                    coeffs: coeffs(&|k| match k {
                        2 => 4,
                        3 => 3,
                        _ => 4 * (4 - k).min(0),
                    }),
                    sense: Sense::Ge,
                    rhs: BigInt::from(4 * s),
                },
            ));
        }
        if self.spec.apply.at {
            rows.push((
                "at",
                Row {
                    coeffs: coeffs(&|k| if k == 2 { -1 } else { -2 }),
                    sense: Sense::Ge,
                    rhs: BigInt::from(-m * (s - m) - 2),
                },
            ));
        }
        rows.push((
            "t_m_positive",
            Row { coeffs: coeffs(&|k| i64::from(k == m)), sense: Sense::Ge, rhs: BigInt::one() },
        ));
        rows
    }

    /// Whether an actual t-vector satisfies every imposed constraint.
    pub fn satisfied_by(&self, t: &TVector) -> bool {
        let vars = self.spec.variables();
        if t.iter().any(|(k, _)| !vars.contains(&k)) {
            return false;
        }
        let x: Vec<BigRational> = vars.iter().map(|&k| q(t.get(k))).collect();
        let rows: Vec<Row> = self.rows().into_iter().map(|(_, r)| r).collect();
        simplex::satisfies(&rows, &x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Feasible {
        witness: BTreeMap<u64, BigRational>,
    },
    /// Multipliers per named constraint; they combine the constraints into
    /// `0 >= positive`.
    Infeasible {
        certificate: Vec<(&'static str, BigRational)>,
    },
}

impl Outcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible { .. })
    }
}

pub fn solve(problem: &FeasibilityProblem) -> Result<Outcome, FeasibilityError> {
    let vars = problem.spec.variables();
    let (names, rows): (Vec<&'static str>, Vec<Row>) = problem.rows().into_iter().unzip();
    match simplex::phase_one(&rows, vars.len()) {
        LpResult::Feasible(x) => {
            if !simplex::satisfies(&rows, &x) {
                return Err(FeasibilityError::Unverified(problem.s));
            }
            let witness = vars.into_iter().zip(x).collect();
            Ok(Outcome::Feasible { witness })
        }
        LpResult::Infeasible(y) => {
            if !simplex::verify_farkas(&rows, vars.len(), &y) {
                return Err(FeasibilityError::Unverified(problem.s));
            }
            let certificate = names.into_iter().zip(y).collect();
            Ok(Outcome::Infeasible { certificate })
        }
    }
}

/// Re-check a certificate against the problem it claims to refute.
pub fn verify_certificate(problem: &FeasibilityProblem, certificate: &[(&str, BigRational)]) -> bool {
    let named = problem.rows();
    if named.len() != certificate.len() || named.iter().zip(certificate).any(|((a, _), (b, _))| a != b) {
        return false;
    }
    let rows: Vec<Row> = named.into_iter().map(|(_, r)| r).collect();
    let y: Vec<BigRational> = certificate.iter().map(|(_, v)| v.clone()).collect();
    simplex::verify_farkas(&rows, problem.spec.variables().len(), &y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub spec: ProblemSpec,
    pub outcomes: Vec<(u64, Outcome)>,
}

impl ScanReport {
    pub fn feasible_set(&self) -> Vec<u64> {
        self.outcomes.iter().filter(|(_, o)| o.is_feasible()).map(|(s, _)| *s).collect()
    }

    /// The feasible set as maximal runs `(lo, hi)`.
    pub fn feasible_runs(&self) -> Vec<(u64, u64)> {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for s in self.feasible_set() {
            match runs.last_mut() {
                Some((_, hi)) if *hi + 1 == s => *hi = s,
                _ => runs.push((s, s)),
            }
        }
        runs
    }

    pub fn to_json(&self, detail: bool) -> Value {
        let outcomes: Vec<Value> = self
            .outcomes
            .iter()
            .map(|(s, o)| {
                let mut obj = Map::new();
                obj.insert("s".into(), json!(s));
                match o {
                    Outcome::Feasible { witness } => {
                        obj.insert("status".into(), json!("feasible"));
                        if detail {
                            let w: Map<String, Value> = witness
                                .iter()
                                .map(|(k, v)| (k.to_string(), json!(format_fraction(v))))
                                .collect();
                            obj.insert("witness".into(), Value::Object(w));
                        }
                    }
                    Outcome::Infeasible { certificate } => {
                        obj.insert("status".into(), json!("infeasible"));
                        if detail {
                            let c: Map<String, Value> = certificate
                                .iter()
                                .map(|(n, v)| (n.to_string(), json!(format_fraction(v))))
                                .collect();
                            obj.insert("certificate".into(), Value::Object(c));
                        }
                    }
                }
                Value::Object(obj)
            })
            .collect();
        json!({
            "m": self.spec.m,
            "allowed": self.spec.allowed,
            "t2_zero": self.spec.force_t2_zero,
            "feasible": self.feasible_runs().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "outcomes": outcomes,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["s", "status"]).expect("in-memory write");
        for (s, o) in &self.outcomes {
            let status = if o.is_feasible() { "feasible" } else { "infeasible" };
            w.write_record([s.to_string().as_str(), status]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// Solve every `s` in `lo..=hi` in parallel; results are in ascending `s`.
pub fn scan(spec: &ProblemSpec, lo: u64, hi: u64) -> Result<ScanReport, FeasibilityError> {
    if lo > hi {
        return Err(FeasibilityError::EmptyRange(lo, hi));
    }
    if hi - lo >= MAX_SCAN_LEN {
        return Err(FeasibilityError::Invalid(format!("scan longer than {MAX_SCAN_LEN} values")));
    }
    let problems = (lo..=hi).map(|s| spec.at(s)).collect::<Result<Vec<_>, _>>()?;
    let outcomes = problems.par_iter().map(|p| solve(p).map(|o| (p.s, o))).collect::<Result<Vec<_>, _>>()?;
    Ok(ScanReport { spec: spec.clone(), outcomes })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    m: u64,
    #[serde(default)]
    allowed: Option<BTreeSet<u64>>,
    #[serde(default)]
    t2_zero: bool,
    s: [u64; 2],
    #[serde(default)]
    apply: Apply,
}

/// Parse `{"m": 5, "allowed": [3,4,5], "t2_zero": true, "s": [6, 60]}`.
pub fn parse_problem(text: &str) -> Result<(ProblemSpec, u64, u64), FeasibilityError> {
    if text.len() > crate::arrangement::MAX_DOCUMENT_BYTES {
        return Err(FeasibilityError::Schema("document too large".into()));
    }
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|e| FeasibilityError::Schema(e.to_string()))?;
    let spec = ProblemSpec::new(file.m, file.allowed, file.t2_zero, file.apply)?;
    let [lo, hi] = file.s;
    if lo > hi {
        return Err(FeasibilityError::EmptyRange(lo, hi));
    }
    spec.at(lo)?;
    spec.at(hi)?;
    Ok((spec, lo, hi))
}

/// The value a certificate's combination bounds from below, for display.
pub fn certificate_bound(problem: &FeasibilityProblem, certificate: &[(&str, BigRational)]) -> BigRational {
    problem
        .rows()
        .iter()
        .zip(certificate)
        .fold(BigRational::zero(), |acc, ((_, r), (_, y))| acc + BigRational::from_integer(r.rhs.clone()) * y)
}
