//! Bundled corpus manifest and the `verify-paper` suite run over it.
//!
//! The manifest is `manifest.json` in the corpus directory:
//! `{"entries": [{"family": "grid(3,2)"}, {"path": "records/klein.json",
//! "kind": "record", "real": false}, ...]}`. Paths are relative to the
//! corpus directory. The `real` and `supersolvable` flags are only allowed
//! on records, where they override the record's own annotations.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Component, Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{t_json, Analysis};
use crate::arrangement::{self, Document, LoadOptions, TVector, TVectorRecord};
use crate::audit::{audit_classified, audit_record, AuditReport, COUNTEREXAMPLE_CHECKS};
use crate::feasibility::{self, Apply, Outcome, ProblemSpec};
use crate::generators::{self, expected_profile, FamilySpec};
use crate::scalar::format_fraction;
use crate::structure::Status;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus directory {0} does not exist")]
    MissingDir(String),
    #[error("manifest {path}: {message}")]
    Manifest { path: String, message: String },
    #[error("manifest lists no entries")]
    Empty,
    #[error("manifest entry {index}: {message}")]
    Entry { index: usize, message: String },
    #[error("{id}: {message}")]
    Subject { id: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Arrangement,
    Record,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Family(FamilySpec),
    File { path: PathBuf, kind: EntryKind, real: Option<bool>, supersolvable: Option<bool> },
}

impl Entry {
    /// Stable identifier used for ordering and in reports.
    pub fn id(&self) -> String {
        match self {
            Entry::Family(spec) => spec.to_string(),
            Entry::File { path, .. } => path.to_string_lossy().replace('\\', "/"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    family: Option<String>,
    path: Option<String>,
    kind: Option<EntryKind>,
    real: Option<bool>,
    supersolvable: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub dir: PathBuf,
    pub entries: Vec<Entry>,
}

impl Corpus {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let dir = dir.as_ref();
        if !dir.is_dir() {
            return Err(CorpusError::MissingDir(dir.display().to_string()));
        }
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| CorpusError::Manifest {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_manifest(dir, &text).map_err(|e| match e {
            CorpusError::Manifest { message, .. } => {
                CorpusError::Manifest { path: path.display().to_string(), message }
            }
            other => other,
        })
    }

    pub fn from_manifest(dir: impl AsRef<Path>, text: &str) -> Result<Self, CorpusError> {
        let dir = dir.as_ref();
        if text.len() > arrangement::MAX_DOCUMENT_BYTES {
            return Err(CorpusError::Manifest {
                path: MANIFEST_FILE.into(),
                message: "manifest too large".into(),
            });
        }
        let raw: RawManifest = serde_json::from_str(text)
            .map_err(|e| CorpusError::Manifest { path: MANIFEST_FILE.into(), message: e.to_string() })?;
        if raw.entries.is_empty() {
            return Err(CorpusError::Empty);
        }
        let mut entries = Vec::with_capacity(raw.entries.len());
        let mut ids = BTreeSet::new();
        for (index, e) in raw.entries.into_iter().enumerate() {
            let bad = |message: String| CorpusError::Entry { index, message };
            let entry = match (e.family, e.path) {
                (Some(family), None) => {
                    if e.kind.is_some() || e.real.is_some() || e.supersolvable.is_some() {
                        return Err(bad("family entries take no kind or flags".into()));
                    }
                    let spec: FamilySpec = family.parse().map_err(|err| bad(format!("{err}")))?;
                    spec.validate().map_err(|err| bad(format!("{err}")))?;
                    Entry::Family(spec)
                }
                (None, Some(path)) => {
                    let kind = e.kind.ok_or_else(|| bad("file entries need a kind".into()))?;
                    if kind == EntryKind::Arrangement && (e.real.is_some() || e.supersolvable.is_some()) {
                        return Err(bad("flags are only allowed on records".into()));
                    }
                    let rel = PathBuf::from(&path);
                    if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
                        return Err(bad(format!(
                            "path {path:?} must be relative and stay inside the corpus"
                        )));
                    }
                    if !dir.join(&rel).is_file() {
                        return Err(bad(format!("{path} does not exist")));
                    }
                    Entry::File { path: rel, kind, real: e.real, supersolvable: e.supersolvable }
                }
                _ => return Err(bad("exactly one of family or path is required".into())),
            };
            if !ids.insert(entry.id()) {
                return Err(bad(format!("duplicate entry {}", entry.id())));
            }
            entries.push(entry);
        }
        Ok(Corpus { dir: dir.to_path_buf(), entries })
    }
}

/// One evaluated corpus entry.
#[derive(Clone, Debug)]
pub enum Subject {
    Arrangement { id: String, spec: Option<FamilySpec>, analysis: Box<Analysis>, audit: AuditReport },
    Record { id: String, record: TVectorRecord, audit: AuditReport },
}

impl Subject {
    pub fn id(&self) -> &str {
        match self {
            Subject::Arrangement { id, .. } | Subject::Record { id, .. } => id,
        }
    }

    pub fn audit(&self) -> &AuditReport {
        match self {
            Subject::Arrangement { audit, .. } | Subject::Record { audit, .. } => audit,
        }
    }

    fn to_json(&self) -> Value {
        let audit = self.audit();
        let failed: Vec<&str> = audit.checks.iter().filter(|c| c.failed()).map(|c| c.name).collect();
        match self {
            Subject::Arrangement { id, analysis, .. } => {
                let c = &analysis.classification;
                json!({
                    "id": id,
                    "kind": "arrangement",
                    "field": analysis.arrangement.field().to_string(),
                    "s": analysis.summary.s,
                    "t": t_json(&analysis.summary.t),
                    "real": analysis.real,
                    "verdict": c.verdict,
                    "modular": c.modular_multiplicities(),
                    "failed_checks": failed,
                })
            }
            Subject::Record { id, record, .. } => json!({
                "id": id,
                "kind": "record",
                "s": record.s,
                "t": t_json(&record.t),
                "real": record.real,
                "supersolvable": record.supersolvable,
                "failed_checks": failed,
            }),
        }
    }
}

fn subject_error(id: &str, e: impl std::fmt::Display) -> CorpusError {
    CorpusError::Subject { id: id.to_string(), message: e.to_string() }
}

fn evaluate_arrangement(
    id: String,
    spec: Option<FamilySpec>,
    arr: arrangement::Arrangement,
) -> Result<Subject, CorpusError> {
    let analysis = Analysis::new(arr, id.clone()).map_err(|e| subject_error(&id, e))?;
    let audit = audit_classified(&analysis.arrangement, &analysis.summary, &analysis.classification, &id)
        .map_err(|e| subject_error(&id, e))?;
    Ok(Subject::Arrangement { id, spec, analysis: Box::new(analysis), audit })
}

pub fn evaluate(dir: &Path, entry: &Entry) -> Result<Subject, CorpusError> {
    let id = entry.id();
    match entry {
        Entry::Family(spec) => {
            let arr = generators::generate(spec).map_err(|e| subject_error(&id, e))?;
            evaluate_arrangement(id, Some(spec.clone()), arr)
        }
        Entry::File { path, kind, real, supersolvable } => {
            // Records are loaded unchecked so that an inconsistent record
            // surfaces as a failed identity check rather than a load error.
            let opts = LoadOptions { allow_unchecked: true };
            let doc = arrangement::load(dir.join(path), opts).map_err(|e| subject_error(&id, e))?;
            match (doc, kind) {
                (Document::Arrangement(arr), EntryKind::Arrangement) => evaluate_arrangement(id, None, arr),
                (Document::Record(mut record), EntryKind::Record) => {
                    record.real = real.or(record.real);
                    record.supersolvable = supersolvable.or(record.supersolvable);
                    let audit = audit_record(&record);
                    Ok(Subject::Record { id, record, audit })
                }
                _ => Err(subject_error(&id, "document does not match the declared kind")),
            }
        }
    }
}

/// Families every bundled corpus must contain.
pub fn required_families() -> Vec<FamilySpec> {
    use FamilySpec::*;
    let mut out = Vec::new();
    out.extend((2..=8).map(|s| Pencil { s }));
    out.extend((3..=8).map(|s| NearPencil { s }));
    out.extend((1..=5).map(|n| Fermat { n }));
    for n in 1..=5 {
        for eps in [2, 3] {
            out.push(FermatPlusAxes { n, eps });
        }
    }
    for a in 2..=7 {
        for diagonals in 0..=2 {
            let g = Grid { a, diagonals };
            if g.validate().is_ok() {
                out.push(g);
            }
        }
    }
    out.extend([2, 3, 5].map(|p| FinitePlane { p }));
    out.extend([4, 6, 8].map(|n| PolygonPlusInfinity { n }));
    for base in [TriangleCase1, Grid { a: 3, diagonals: 0 }] {
        out.push(Cone { base: Box::new(base), seed: 1 });
    }
    out
}

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub failures: Vec<String>,
    pub detail: Value,
}

impl CriterionResult {
    fn new(id: u8, name: &'static str) -> Self {
        CriterionResult { id, name, failures: Vec::new(), detail: json!({}) }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "pass": self.passed(),
            "failures": self.failures,
            "detail": self.detail,
        })
    }
}

/// A conjecture failure on consistent input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub subject: String,
    pub check: &'static str,
    pub s: u64,
    pub t: TVector,
    pub lhs: String,
    pub rhs: String,
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        json!({
            "subject": self.subject,
            "check": self.check,
            "s": self.s,
            "t": t_json(&self.t),
            "lhs": self.lhs,
            "rhs": self.rhs,
        })
    }
}

pub fn counterexamples(subject: &str, s: u64, t: &TVector, audit: &AuditReport) -> Vec<Counterexample> {
    audit
        .counterexample_failures()
        .into_iter()
        .map(|c| {
            let (l, r) = c.sides.as_ref().expect("failed checks are applicable");
            Counterexample {
                subject: subject.to_string(),
                check: c.name,
                s,
                t: t.clone(),
                lhs: format_fraction(l),
                rhs: format_fraction(r),
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct VerifySummary {
    pub subjects: Vec<Subject>,
    pub laws: Vec<String>,
    pub criteria: Vec<CriterionResult>,
    pub counterexamples: Vec<Counterexample>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.laws.is_empty() && self.criteria.iter().all(CriterionResult::passed)
    }

    /// 0 when everything passes, 3 when the only failures are conjecture
    /// counterexamples, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            return 0;
        }
        let only_conjectures = self.laws.is_empty()
            && !self.counterexamples.is_empty()
            && self.criteria.iter().all(|c| c.passed() || c.id == 10);
        if only_conjectures {
            3
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.passed(),
            "exit_code": self.exit_code(),
            "laws": {"pass": self.laws.is_empty(), "failures": self.laws},
            "criteria": self.criteria.iter().map(CriterionResult::to_json).collect::<Vec<_>>(),
            "counterexamples": self.counterexamples.iter().map(Counterexample::to_json).collect::<Vec<_>>(),
            "subjects": self.subjects.iter().map(Subject::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            let mark = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{mark}] {:>2} {}\n", c.id, c.name));
            for f in &c.failures {
                out.push_str(&format!("       {f}\n"));
            }
        }
        let mark = if self.laws.is_empty() { "PASS" } else { "FAIL" };
        out.push_str(&format!("[{mark}]    laws ({} subjects)\n", self.subjects.len()));
        for f in &self.laws {
            out.push_str(&format!("       {f}\n"));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["criterion", "name", "pass", "failures"]).expect("in-memory write");
        for c in &self.criteria {
            w.write_record([
                c.id.to_string(),
                c.name.to_string(),
                c.passed().to_string(),
                c.failures.join("; "),
            ])
            .expect("in-memory write");
        }
        w.write_record([
            "laws".to_string(),
            "laws".to_string(),
            self.laws.is_empty().to_string(),
            self.laws.join("; "),
        ])
        .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

fn arrangements(
    subjects: &[Subject],
) -> impl Iterator<Item = (&str, Option<&FamilySpec>, &Analysis, &AuditReport)> {
    subjects.iter().filter_map(|s| match s {
        Subject::Arrangement { id, spec, analysis, audit } => {
            Some((id.as_str(), spec.as_ref(), analysis.as_ref(), audit))
        }
        Subject::Record { .. } => None,
    })
}

fn sides_text(audit: &AuditReport, name: &str) -> Option<(String, String)> {
    audit.get(name).and_then(|c| c.sides.as_ref()).map(|(l, r)| (format_fraction(l), format_fraction(r)))
}

fn holds(audit: &AuditReport, name: &str) -> bool {
    audit.get(name).and_then(|c| c.holds()) == Some(true)
}

fn criterion_identity(subjects: &[Subject]) -> CriterionResult {
    let mut c = CriterionResult::new(1, "identity_law");
    let present: BTreeSet<String> =
        arrangements(subjects).filter_map(|(_, spec, _, _)| spec.map(ToString::to_string)).collect();
    for spec in required_families() {
        let id = spec.to_string();
        c.require(present.contains(&id), || format!("corpus is missing {id}"));
    }
    let mut checked = 0;
    for (id, _, _, audit) in arrangements(subjects) {
        checked += 1;
        c.require(holds(audit, "identity"), || {
            let (l, r) = sides_text(audit, "identity").unwrap_or_default();
            format!("{id}: identity {l} != {r}")
        });
    }
    c.detail = json!({"arrangements": checked});
    c
}

fn criterion_records(subjects: &[Subject]) -> CriterionResult {
    let mut c = CriterionResult::new(2, "klein_wiman_records");
    let by_label: BTreeMap<&str, &AuditReport> = subjects
        .iter()
        .filter_map(|s| match s {
            Subject::Record { record, audit, .. } => Some((record.label.as_str(), audit)),
            Subject::Arrangement { .. } => None,
        })
        .collect();
    let expect = [
        ("klein", "identity", ("210", "210"), true),
        ("klein", "hirzebruch", ("21", "21"), true),
        ("wiman", "identity", ("990", "990"), true),
        ("wiman", "hirzebruch", ("90", "81"), true),
        ("klein_deleted", "identity", ("190", "190"), true),
        ("klein_deleted", "dm_complex", ("4", "10"), false),
    ];
    let mut detail = serde_json::Map::new();
    for (label, check, (l, r), should_hold) in expect {
        let key = format!("{label}.{check}");
        let Some(audit) = by_label.get(label) else {
            c.failures.push(format!("no record labelled {label}"));
            continue;
        };
        let got = sides_text(audit, check);
        let verdict = audit.get(check).and_then(|x| x.holds());
        detail.insert(key.clone(), json!({"sides": got.clone().map(|(a, b)| vec![a, b]), "holds": verdict}));
        let ok = got.as_ref().is_some_and(|(a, b)| a == l && b == r) && verdict == Some(should_hold);
        c.require(ok, || {
            format!("{key}: expected {l} vs {r} (holds {should_hold}), got {got:?} {verdict:?}")
        });
    }
    c.detail = Value::Object(detail);
    c
}

fn generate_analysis(spec: &str) -> Result<Analysis, String> {
    let spec: FamilySpec = spec.parse().map_err(|e| format!("{e}"))?;
    let arr = generators::generate(&spec).map_err(|e| format!("{e}"))?;
    Analysis::new(arr, spec.to_string()).map_err(|e| format!("{e}"))
}

fn criterion_fermat_plus_axes() -> CriterionResult {
    let mut c = CriterionResult::new(3, "fermat_plus_axes_2_3");
    let a = match generate_analysis("fermat_plus_axes(2,3)") {
        Ok(a) => a,
        Err(e) => {
            c.failures.push(e);
            return c;
        }
    };
    let cl = &a.classification;
    let t = &a.summary.t;
    c.require(*t == TVector::from_pairs([(2, 6), (3, 4), (4, 3)]), || {
        format!("t-vector {}", crate::analysis::t_text(t))
    });
    c.require(cl.is_supersolvable(), || "not supersolvable".into());
    c.require(cl.modular_multiplicities() == vec![4, 4, 4], || {
        format!("modular multiplicities {:?}", cl.modular_multiplicities())
    });
    let unexpected = a.summary.s > 2 * a.summary.m();
    c.require(unexpected && a.summary.s == 9 && a.summary.m() == 4, || {
        format!("unexpected criterion {} > {}", a.summary.s, 2 * a.summary.m())
    });
    c.detail = json!({
        "t": t_json(t),
        "modular": cl.modular_multiplicities(),
        "unexpected_curve": [a.summary.s, 2 * a.summary.m()],
    });
    c
}

fn criterion_grid() -> CriterionResult {
    let mut c = CriterionResult::new(4, "grid_table");
    let mut detail = serde_json::Map::new();
    let mut check =
        |spec: &str, t: TVector, modular: Option<Vec<u64>>, c: &mut CriterionResult| match generate_analysis(
            spec,
        ) {
            Ok(a) => {
                let got = a.classification.modular_multiplicities();
                detail.insert(spec.into(), json!({"t": t_json(&a.summary.t), "modular": got}));
                c.require(a.summary.t == t, || {
                    format!("{spec}: t-vector {}", crate::analysis::t_text(&a.summary.t))
                });
                if let Some(m) = modular {
                    c.require(got == m, || format!("{spec}: modular multiplicities {got:?}"));
                }
            }
            Err(e) => c.failures.push(format!("{spec}: {e}")),
        };
    for a in 2..=7u64 {
        // a lines per direction meet in a^2 double points; the two pencils
        // through the points at infinity have a+1 lines each.
        check(
            &format!("grid({a},0)"),
            TVector::from_pairs([(2, a * a), (a + 1, 2)]),
            Some(vec![a + 1, a + 1]),
            &mut c,
        );
    }
    check("grid(3,1)", TVector::from_pairs([(2, 7), (3, 3), (4, 2)]), None, &mut c);
    check("grid(3,2)", TVector::from_pairs([(2, 6), (3, 4), (4, 3)]), Some(vec![4, 4, 4]), &mut c);
    check("grid(5,2)", TVector::from_pairs([(2, 18), (3, 8), (4, 1), (6, 2)]), None, &mut c);
    let spec = FamilySpec::Grid { a: 5, diagonals: 2 };
    match expected_profile(&spec) {
        Ok(p) => {
            c.require(p.record.t.get(2) == 18, || format!("grid(5,2) profile t2 {}", p.record.t.get(2)));
            c.require(p.record.check_identity().is_ok(), || "grid(5,2) profile violates identity".into());
            c.require(p.published_t2 == Some(16) && !p.notes.is_empty(), || {
                "grid(5,2) profile does not flag the published t2".into()
            });
            detail
                .insert("grid(5,2).notes".into(), json!({"published_t2": p.published_t2, "notes": p.notes}));
        }
        Err(e) => c.failures.push(format!("grid(5,2) profile: {e}")),
    }
    c.detail = Value::Object(detail);
    c
}

fn scan_detail(
    c: &mut CriterionResult,
    m: u64,
    allowed: Option<&[u64]>,
    lo: u64,
    hi: u64,
) -> Option<feasibility::ScanReport> {
    let allowed = allowed.map(|a| a.iter().copied().collect());
    let spec = match ProblemSpec::new(m, allowed, true, Apply::default()) {
        Ok(s) => s,
        Err(e) => {
            c.failures.push(format!("m={m}: {e}"));
            return None;
        }
    };
    match feasibility::scan(&spec, lo, hi) {
        Ok(r) => Some(r),
        Err(e) => {
            c.failures.push(format!("m={m}: {e}"));
            None
        }
    }
}

fn criterion_small_m() -> CriterionResult {
    let mut c = CriterionResult::new(5, "lp_m3_m4_infeasible");
    let mut detail = serde_json::Map::new();
    for (m, allowed) in [(3u64, &[3u64][..]), (4, &[3, 4][..])] {
        let Some(report) = scan_detail(&mut c, m, Some(allowed), 3, 200) else {
            continue;
        };
        let mut verified = 0;
        for (s, o) in &report.outcomes {
            match o {
                Outcome::Feasible { .. } => c.failures.push(format!("m={m}: s={s} is feasible")),
                Outcome::Infeasible { certificate } => {
                    let problem = report.spec.at(*s).expect("scanned values are in range");
                    if feasibility::verify_certificate(&problem, certificate) {
                        verified += 1;
                    } else {
                        c.failures.push(format!("m={m}: certificate for s={s} does not verify"));
                    }
                }
            }
        }
        detail.insert(format!("m={m}"), json!({"range": [3, 200], "verified_certificates": verified}));
    }
    c.detail = Value::Object(detail);
    c
}

fn criterion_remark() -> CriterionResult {
    let mut c = CriterionResult::new(6, "lp_remark_containment");
    let mut detail = serde_json::Map::new();
    for (m, lo, hi, bound) in [(5u64, 6u64, 60u64, (10u64, 13u64)), (100, 101, 7500, (103, 7412))] {
        let Some(report) = scan_detail(&mut c, m, None, lo, hi) else {
            continue;
        };
        let set = report.feasible_set();
        let outside: Vec<u64> = set.iter().copied().filter(|s| *s < bound.0 || *s > bound.1).collect();
        c.require(outside.is_empty(), || {
            format!("m={m}: feasible values outside {}..{}: {outside:?}", bound.0, bound.1)
        });
        detail.insert(
            format!("m={m}"),
            json!({
                "range": [lo, hi],
                "bound": [bound.0, bound.1],
                "feasible_runs": report.feasible_runs().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            }),
        );
    }
    c.detail = Value::Object(detail);
    c
}

fn criterion_modular_bound(subjects: &[Subject]) -> CriterionResult {
    let mut c = CriterionResult::new(7, "modular_point_bound");
    let mut checked = 0;
    for (id, spec, a, _) in arrangements(subjects) {
        let cl = &a.classification;
        let count = cl.modular_points.len();
        let char_zero = a.arrangement.field().characteristic() == 0;
        if char_zero && cl.is_supersolvable() && !cl.trivial {
            checked += 1;
            c.require((1..=4).contains(&count), || format!("{id}: {count} modular points"));
        }
        let expected = match spec {
            Some(FamilySpec::FermatPlusAxes { n: 1, eps: 3 }) => Some(4),
            Some(FamilySpec::FermatPlusAxes { eps: 3, .. }) => Some(3),
            Some(FamilySpec::Grid { diagonals: 0, .. }) => Some(2),
            Some(FamilySpec::Cone { .. }) => Some(1),
            _ => None,
        };
        if let Some(e) = expected {
            c.require(count == e, || format!("{id}: expected {e} modular points, found {count}"));
        }
    }
    c.detail = json!({"supersolvable_nontrivial": checked});
    c
}

fn criterion_lemmas(subjects: &[Subject]) -> CriterionResult {
    let mut c = CriterionResult::new(8, "structural_lemmas");
    let mut fano_skipped = false;
    for (id, spec, a, _) in arrangements(subjects) {
        let cl = &a.classification;
        let status = |name: &str| a.lemma(name).map(|l| l.status);
        for l in a.lemmas.iter().filter(|l| l.status == Status::Fail) {
            c.failures.push(format!("{id}: {} failed: {}", l.name, l.detail));
        }
        if cl.is_supersolvable() {
            c.require(status("high_multiplicity_modular") == Some(Status::Pass), || {
                format!("{id}: high-multiplicity lemma did not pass")
            });
        }
        let char_zero = a.arrangement.field().characteristic() == 0;
        let homogeneous_ge3 = cl.homogeneous.is_some_and(|m| m >= 3);
        if char_zero && homogeneous_ge3 && cl.is_supersolvable() {
            c.require(status("no_three_collinear_modular") == Some(Status::Pass), || {
                format!("{id}: no-three-collinear check did not pass")
            });
        }
        if !cl.trivial {
            c.require(status("min_crossing_bound") == Some(Status::Pass), || {
                format!("{id}: n >= 2m did not pass")
            });
        }
        if spec == Some(&FamilySpec::FinitePlane { p: 2 }) {
            fano_skipped = status("no_three_collinear_modular") == Some(Status::Skipped);
        }
    }
    c.require(fano_skipped, || "finite_plane(2): no-three-collinear check was not skipped".into());
    c
}

fn criterion_real_t2(subjects: &[Subject]) -> CriterionResult {
    let mut c = CriterionResult::new(9, "real_t2_theorem");
    let mut checked = 0;
    for (id, _, a, audit) in arrangements(subjects) {
        let cl = &a.classification;
        if a.real == Some(true) && cl.is_supersolvable() && !cl.is_pencil() {
            checked += 1;
            let s = a.summary.s;
            let m = a.summary.m();
            let t2 = a.summary.t.get(2);
            // max{s-m, m} >= s/2 always; it is stated for completeness.
            let chain = t2 >= (s - m).max(m) && 2 * (s - m).max(m) >= s;
            c.require(chain && holds(audit, "real_t2_theorem"), || {
                format!("{id}: t2 = {t2} below max(s-m, m) with s = {s}, m = {m}")
            });
            c.require(holds(audit, "real_t2_witness"), || {
                let (l, r) = sides_text(audit, "real_t2_witness").unwrap_or_default();
                format!("{id}: only {l} of {r} lines missing a modular point carry a double point")
            });
        }
    }
    c.detail = json!({"real_supersolvable_non_pencil": checked});
    c
}

fn criterion_conjectures(subjects: &[Subject], found: &[Counterexample]) -> CriterionResult {
    let mut c = CriterionResult::new(10, "conjecture_predicates");
    let mut checked = 0;
    for s in subjects {
        if COUNTEREXAMPLE_CHECKS.iter().any(|n| s.audit().get(n).is_some_and(|x| x.applicable())) {
            checked += 1;
        }
    }
    for w in found {
        c.failures.push(format!("{}: {} fails ({} vs {})", w.subject, w.check, w.lhs, w.rhs));
    }
    c.detail = json!({"applicable_subjects": checked});
    c
}

type ConeOutcome = Result<(u32, Analysis), String>;

fn criterion_cone() -> CriterionResult {
    let mut c = CriterionResult::new(11, "cone_construction");
    let base = match generators::generate(&FamilySpec::Grid { a: 3, diagonals: 0 }) {
        Ok(b) => b,
        Err(e) => {
            c.failures.push(format!("grid(3,0): {e}"));
            return c;
        }
    };
    let base_summary = base.crossing_summary().expect("generated arrangements are valid");
    let (s0, n0) = (base_summary.s, base_summary.n());
    let seeds: Vec<u64> = (1..=20).collect();
    let results: Vec<(u64, ConeOutcome)> = seeds
        .par_iter()
        .map(|&seed| {
            let r = generators::cone(&base, seed).map_err(|e| e.to_string()).and_then(|cone| {
                let id = format!("cone(grid(3,0),seed={seed})");
                Analysis::new(cone.arrangement, id).map(|a| (cone.attempts, a)).map_err(|e| e.to_string())
            });
            (seed, r)
        })
        .collect();
    let mut attempts = serde_json::Map::new();
    for (seed, r) in results {
        let (tries, a) = match r {
            Ok(x) => x,
            Err(e) => {
                c.failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        attempts.insert(seed.to_string(), json!(tries));
        let count = a.classification.modular_points.len();
        c.require(count == 1, || format!("seed {seed}: {count} modular points"));
        c.require(a.summary.s == s0 + n0, || format!("seed {seed}: s = {} != {s0} + {n0}", a.summary.s));
        let t = &a.summary.t;
        let top = t.max_multiplicity().max(base_summary.t.max_multiplicity() + 1);
        for k in 3..=top {
            let apex = u64::from(k + 1 == n0);
            let lifted = t.get(k + 1).checked_sub(apex);
            c.require(lifted == Some(base_summary.t.get(k)), || {
                format!("seed {seed}: t_{} does not match base t_{k}", k + 1)
            });
        }
    }
    c.detail = json!({"base": "grid(3,0)", "attempts": attempts});
    c
}

/// Run every check over the corpus. Fails only on input errors; check
/// failures are reported in the summary.
pub fn verify(corpus: &Corpus) -> Result<VerifySummary, CorpusError> {
    let mut subjects =
        corpus.entries.par_iter().map(|e| evaluate(&corpus.dir, e)).collect::<Result<Vec<_>, _>>()?;
    subjects.sort_by(|a, b| a.id().cmp(b.id()));

    let mut laws = Vec::new();
    let mut found = Vec::new();
    for s in &subjects {
        let audit = s.audit();
        for f in audit.law_failures() {
            let (l, r) = f.sides.as_ref().expect("failed checks are applicable");
            laws.push(format!(
                "{}: {} fails ({} vs {})",
                s.id(),
                f.name,
                format_fraction(l),
                format_fraction(r)
            ));
        }
        if audit.law_failures().is_empty() {
            let (st, t) = match s {
                Subject::Arrangement { analysis, .. } => (analysis.summary.s, &analysis.summary.t),
                Subject::Record { record, .. } => (record.s, &record.t),
            };
            found.extend(counterexamples(s.id(), st, t, audit));
        }
    }

    let ((c5, c6), (c3, c4, c11)) = rayon::join(
        || (criterion_small_m(), criterion_remark()),
        || (criterion_fermat_plus_axes(), criterion_grid(), criterion_cone()),
    );
    let criteria = vec![
        criterion_identity(&subjects),
        criterion_records(&subjects),
        c3,
        c4,
        c5,
        c6,
        criterion_modular_bound(&subjects),
        criterion_lemmas(&subjects),
        criterion_real_t2(&subjects),
        criterion_conjectures(&subjects, &found),
        c11,
    ];
    Ok(VerifySummary { subjects, laws, criteria, counterexamples: found })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(text: &str) -> Result<Corpus, CorpusError> {
        Corpus::from_manifest(std::env::temp_dir(), text)
    }

    #[test]
    fn rejects_empty_and_malformed_manifests() {
        assert!(matches!(manifest(r#"{"entries": []}"#), Err(CorpusError::Empty)));
        assert!(matches!(manifest("[]"), Err(CorpusError::Manifest { .. })));
        assert!(matches!(
            manifest(r#"{"entries": [{"family": "grid(3,0)", "real": true}]}"#),
            Err(CorpusError::Entry { index: 0, .. })
        ));
        assert!(matches!(
            manifest(r#"{"entries": [{"path": "../x.json", "kind": "record"}]}"#),
            Err(CorpusError::Entry { .. })
        ));
        assert!(matches!(
            manifest(r#"{"entries": [{"family": "pencil(3)"}, {"family": "pencil(3)"}]}"#),
            Err(CorpusError::Entry { index: 1, .. })
        ));
    }

    #[test]
    fn missing_directory() {
        assert!(matches!(Corpus::load("/nonexistent/corpus/dir"), Err(CorpusError::MissingDir(_))));
    }

    #[test]
    fn required_families_cover_legal_grids() {
        let ids: Vec<String> = required_families().iter().map(ToString::to_string).collect();
        assert!(ids.contains(&"grid(7,2)".to_string()));
        assert!(!ids.contains(&"grid(6,2)".to_string()));
        assert_eq!(ids.len(), 7 + 6 + 5 + 10 + 15 + 3 + 3 + 2);
    }

    #[test]
    fn fixed_criteria_pass() {
        for c in [criterion_fermat_plus_axes(), criterion_grid(), criterion_cone()] {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
    }

    #[test]
    fn record_override_flags() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("r.json"),
            r#"{"label": "r", "s": 3, "t": {"2": 3}, "supersolvable": false}"#,
        )
        .unwrap();
        let corpus = Corpus::from_manifest(
            dir.path(),
            r#"{"entries": [{"path": "r.json", "kind": "record", "supersolvable": true}]}"#,
        )
        .unwrap();
        let Subject::Record { record, .. } = evaluate(dir.path(), &corpus.entries[0]).unwrap() else {
            panic!("expected a record");
        };
        assert_eq!(record.supersolvable, Some(true));
    }
}
