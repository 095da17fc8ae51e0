//! Line arrangements, their crossing points and t-vectors.

mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::projective::{self, GeometryError, ProjLine, ProjPoint};
use crate::scalar::{FieldDescriptor, FieldError};

pub use io::{load, parse_document, save, Document, LoadOptions, MAX_DOCUMENT_BYTES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("lines {0} and {1} coincide")]
    DuplicateLine(usize, usize),
    #[error("an arrangement needs at least 2 lines, got {0}")]
    TooFewLines(usize),
    #[error("line {index} lives in {found}, expected {expected}")]
    MixedFields { index: usize, expected: FieldDescriptor, found: FieldDescriptor },
    #[error("combinatorial identity violated: sum C(k,2) t_k = {lhs} but C(s,2) = {rhs}")]
    IdentityViolated { lhs: BigInt, rhs: BigInt },
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A finite set of distinct lines, indexed by position.
#[derive(Clone, Debug)]
pub struct Arrangement {
    field: FieldDescriptor,
    lines: Vec<ProjLine>,
    index: HashMap<ProjLine, usize>,
}

impl Arrangement {
    /// Validate and wrap a list of lines. Duplicates are rejected, not merged.
    pub fn new(field: FieldDescriptor, lines: Vec<ProjLine>) -> Result<Self, ArrangementError> {
        if lines.len() < 2 {
            return Err(ArrangementError::TooFewLines(lines.len()));
        }
        let mut index = HashMap::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            if line.field() != field {
                return Err(ArrangementError::MixedFields { index: i, expected: field, found: line.field() });
            }
            if let Some(j) = index.insert(line.clone(), i) {
                return Err(ArrangementError::DuplicateLine(j, i));
            }
        }
        Ok(Arrangement { field, lines, index })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn position(&self, line: &ProjLine) -> Option<usize> {
        self.index.get(line).copied()
    }

    pub fn contains(&self, line: &ProjLine) -> bool {
        self.index.contains_key(line)
    }

    /// True iff every line is defined over the reals. Errors in positive
    /// characteristic.
    pub fn is_real(&self) -> Result<bool, ArrangementError> {
        for line in &self.lines {
            if !projective::is_real_line(line)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of the lines through `p`.
    pub fn lines_through(&self, p: &ProjPoint) -> Result<Vec<usize>, ArrangementError> {
        let mut out = Vec::new();
        for (i, line) in self.lines.iter().enumerate() {
            if projective::incident(p, line)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Enumerate all crossing points by grouping the pairwise meets exactly.
    pub fn crossing_summary(&self) -> Result<CrossingSummary, ArrangementError> {
        let mut groups: BTreeMap<ProjPoint, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let p = projective::meet(&self.lines[i], &self.lines[j])?;
                let set = groups.entry(p).or_default();
                set.insert(i);
                set.insert(j);
            }
        }
        let crossings: Vec<Crossing> = groups
            .into_iter()
            .map(|(point, lines)| Crossing { point, lines: lines.into_iter().collect() })
            .collect();
        let summary = CrossingSummary::from_crossings(self.lines.len() as u64, crossings);
        let (lhs, rhs) = summary.t.identity_sides(summary.s);
        assert_eq!(lhs, rhs, "pairwise meets must partition the line pairs");
        Ok(summary)
    }
}

/// Counts `t_k` of crossing points by multiplicity `k`; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TVector(BTreeMap<u64, u64>);

impl TVector {
    pub fn new() -> Self {
        TVector::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        let mut t = TVector::new();
        for (k, c) in pairs {
            t.add(k, c);
        }
        t
    }

    pub fn get(&self, k: u64) -> u64 {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn add(&mut self, k: u64, count: u64) {
        if count > 0 {
            *self.0.entry(k).or_insert(0) += count;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    /// Number of crossing points `n`.
    pub fn crossings(&self) -> u64 {
        self.0.values().sum()
    }

    /// Largest multiplicity `m` with `t_m > 0`.
    pub fn max_multiplicity(&self) -> u64 {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    /// Both sides of `sum_k C(k,2) t_k = C(s,2)`.
    pub fn identity_sides(&self, s: u64) -> (BigInt, BigInt) {
        let lhs = self.iter().map(|(k, c)| choose2(k) * BigInt::from(c)).sum();
        (lhs, choose2(s))
    }

    pub fn is_pencil(&self, s: u64) -> bool {
        self.get(s) == 1
    }

    /// Exactly `s-1` lines concurrent. For `s = 3` every non-pencil qualifies.
    pub fn is_near_pencil(&self, s: u64) -> bool {
        s >= 3 && !self.is_pencil(s) && self.get(s - 1) >= 1
    }

    pub fn is_trivial(&self, s: u64) -> bool {
        self.is_pencil(s) || self.is_near_pencil(s)
    }
}

impl fmt::Display for TVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn choose2(k: u64) -> BigInt {
    let k = BigInt::from(k);
    if k < BigInt::from(2) {
        return BigInt::from(0);
    }
    &k * (&k - 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub point: ProjPoint,
    /// Sorted indices of the incident lines.
    pub lines: Vec<usize>,
}

impl Crossing {
    pub fn multiplicity(&self) -> u64 {
        self.lines.len() as u64
    }
}

/// All crossing points of an arrangement, sorted by canonical coordinates.
#[derive(Clone, Debug)]
pub struct CrossingSummary {
    pub s: u64,
    pub crossings: Vec<Crossing>,
    pub t: TVector,
}

impl CrossingSummary {
    fn from_crossings(s: u64, crossings: Vec<Crossing>) -> Self {
        let mut t = TVector::new();
        for c in &crossings {
            t.add(c.multiplicity(), 1);
        }
        CrossingSummary { s, crossings, t }
    }

    pub fn n(&self) -> u64 {
        self.crossings.len() as u64
    }

    pub fn m(&self) -> u64 {
        self.t.max_multiplicity()
    }

    pub fn find(&self, p: &ProjPoint) -> Option<&Crossing> {
        self.crossings.binary_search_by(|c| c.point.cmp(p)).ok().map(|i| &self.crossings[i])
    }

    pub fn to_record(&self, label: impl Into<String>) -> TVectorRecord {
        TVectorRecord { label: label.into(), s: self.s, t: self.t.clone(), real: None, supersolvable: None }
    }
}

/// A t-vector without coordinates, optionally annotated with facts that
/// cannot be derived from the counts alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TVectorRecord {
    pub label: String,
    pub s: u64,
    pub t: TVector,
    pub real: Option<bool>,
    pub supersolvable: Option<bool>,
}

impl TVectorRecord {
    /// Structural validation: `s >= 2` and every multiplicity in `2..=s`.
    pub fn validate(&self) -> Result<(), ArrangementError> {
        if self.s < 2 {
            return Err(ArrangementError::InvalidRecord(format!("s must be at least 2, got {}", self.s)));
        }
        if let Some((k, _)) = self.t.iter().find(|&(k, _)| k < 2 || k > self.s) {
            return Err(ArrangementError::InvalidRecord(format!("multiplicity {k} outside 2..={}", self.s)));
        }
        Ok(())
    }

    pub fn check_identity(&self) -> Result<(), ArrangementError> {
        let (lhs, rhs) = self.t.identity_sides(self.s);
        if lhs == rhs {
            Ok(())
        } else {
            Err(ArrangementError::IdentityViolated { lhs, rhs })
        }
    }
}
