//! Identities, inequalities, conjecture predicates and the unexpected-curve
//! criterion, evaluated exactly on arrangements or bare t-vector records.
//!
//! Every check is three-valued: inapplicable (its hypotheses are not met or
//! not known), holds, or fails. Inapplicable checks carry no sides.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::{Arrangement, CrossingSummary, TVector, TVectorRecord};
use crate::scalar::format_fraction;
use crate::structure::{classify, Classification, StructureError};

/// How a failed check should be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// A proved statement: failure means the input is inconsistent.
    Law,
    /// An open conjecture: failure on valid input is a potential counterexample.
    Conjecture,
    /// An open question: failures are expected and informative.
    Question,
    /// A yes/no characterization; both outcomes are legitimate.
    Criterion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    fn eval(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub kind: CheckKind,
    pub relation: Relation,
    /// `Some((lhs, rhs))` iff the check is applicable.
    pub sides: Option<(BigRational, BigRational)>,
}

impl Check {
    fn new(
        name: &'static str,
        kind: CheckKind,
        relation: Relation,
        applicable: bool,
        sides: impl FnOnce() -> (BigRational, BigRational),
    ) -> Self {
        Check { name, kind, relation, sides: applicable.then(sides) }
    }

    pub fn applicable(&self) -> bool {
        self.sides.is_some()
    }

    pub fn holds(&self) -> Option<bool> {
        self.sides.as_ref().map(|(l, r)| self.relation.eval(l, r))
    }

    pub fn failed(&self) -> bool {
        self.holds() == Some(false)
    }

    pub fn to_json(&self) -> Value {
        let side = |f: fn(&(BigRational, BigRational)) -> &BigRational| {
            self.sides.as_ref().map_or(Value::Null, |s| Value::from(format_fraction(f(s))))
        };
        json!({
            "name": self.name,
            "kind": self.kind,
            "relation": self.relation,
            "applicable": self.applicable(),
            "lhs": side(|s| &s.0),
            "rhs": side(|s| &s.1),
            "holds": self.holds(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

/// Checks whose failure on valid input is a counterexample candidate.
pub const COUNTEREXAMPLE_CHECKS: [&str; 2] = ["conj1", "conj2"];

impl AuditReport {
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn law_failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.failed() && (c.kind == CheckKind::Law || c.name == "dm_real"))
            .collect()
    }

    pub fn counterexample_failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.failed() && COUNTEREXAMPLE_CHECKS.contains(&c.name)).collect()
    }

    /// 0 when nothing binding fails, 1 when a proved statement fails (the
    /// input is inconsistent), 3 when a conjecture fails on consistent input.
    pub fn exit_code(&self) -> i32 {
        if !self.law_failures().is_empty() {
            1
        } else if !self.counterexample_failures().is_empty() {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "subject": self.subject,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["subject", "name", "kind", "relation", "applicable", "lhs", "rhs", "holds"])
            .expect("in-memory write");
        for c in &self.checks {
            let (lhs, rhs) = c
                .sides
                .as_ref()
                .map_or((String::new(), String::new()), |(l, r)| (format_fraction(l), format_fraction(r)));
            let kind = serde_json::to_value(c.kind).expect("serializable");
            w.write_record([
                self.subject.as_str(),
                c.name,
                kind.as_str().unwrap_or_default(),
                c.relation.symbol(),
                &c.applicable().to_string(),
                &lhs,
                &rhs,
                &c.holds().map_or(String::new(), |h| h.to_string()),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.subject);
        for c in &self.checks {
            let verdict = match c.holds() {
                None => "n/a".to_string(),
                Some(h) => {
                    let (l, r) = c.sides.as_ref().expect("applicable");
                    format!(
                        "{} {} {} {}",
                        match (h, c.kind) {
                            (true, CheckKind::Criterion) => "yes",
                            (false, CheckKind::Criterion) => "no",
                            (true, _) => "holds",
                            (false, _) => "FAILS",
                        },
                        format_fraction(l),
                        c.relation.symbol(),
                        format_fraction(r)
                    )
                }
            };
            out.push_str(&format!("  {:<18} {:<10} {}\n", c.name, kind_label(c.kind), verdict));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn kind_label(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::Law => "law",
        CheckKind::Conjecture => "conjecture",
        CheckKind::Question => "question",
        CheckKind::Criterion => "criterion",
    }
}

/// What is known about a subject, independent of where it came from.
struct Facts<'a> {
    s: u64,
    t: &'a TVector,
    char_zero: bool,
    real: Option<bool>,
    supersolvable: Option<bool>,
    /// Modular multiplicities, when coordinates are available.
    modular: Option<Vec<u64>>,
    /// Lines missing a modular point that carry a double point, out of all
    /// such (point, line) pairs.
    double_point_witness: Option<(u64, u64)>,
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn run_checks(f: &Facts) -> Vec<Check> {
    use CheckKind::*;
    use Relation::*;

    let s = f.s;
    let t = f.t;
    let t2 = int(t.get(2));
    let n = t.crossings();
    let m = t.max_multiplicity();
    let pencil = t.is_pencil(s);
    let trivial = t.is_trivial(s);
    let real = f.real == Some(true);
    let ss = f.supersolvable == Some(true);

    let identity = Check::new("identity", Law, Eq, true, || {
        let (l, r) = t.identity_sides(s);
        (BigRational::from_integer(l), BigRational::from_integer(r))
    });
    let hirzebruch = Check::new("hirzebruch", Law, Ge, f.char_zero && !trivial, || {
        let lhs = &t2 + BigRational::new(3.into(), 4.into()) * int(t.get(3));
        let excess: u64 = t.iter().filter(|&(k, _)| k > 4).map(|(k, c)| (k - 4) * c).sum();
        (lhs, int(s + excess))
    });
    let melchior = Check::new("melchior", Law, Ge, real && !pencil, || {
        let excess: u64 = t.iter().filter(|&(k, _)| k >= 3).map(|(k, c)| (k - 3) * c).sum();
        (t2.clone(), int(3 + excess))
    });
    let at = Check::new("at", Law, Ge, ss && f.char_zero, || {
        let rhs = BigInt::from(2 * n) - BigInt::from(m) * BigInt::from(s - m) - 2;
        (t2.clone(), BigRational::from_integer(rhs))
    });
    let real_theorem =
        Check::new("real_t2_theorem", Law, Ge, real && ss && !pencil, || (t2.clone(), int((s - m).max(m))));
    let witness_applicable = real && ss && !pencil && f.double_point_witness.is_some();
    let real_witness = Check::new("real_t2_witness", Law, Eq, witness_applicable, || {
        let (hit, total) = f.double_point_witness.expect("gated");
        (int(hit), int(total))
    });
    let conj1 = Check::new("conj1", Conjecture, Gt, f.char_zero && ss && !trivial, || (t2.clone(), int(0)));
    let conj2 = Check::new("conj2", Conjecture, Ge, f.char_zero && ss && !pencil, || {
        (t2.clone(), BigRational::new(s.into(), 2.into()))
    });
    let dm_real = Check::new("dm_real", Conjecture, Ge, real && !pencil, || (t2.clone(), int(s / 2)));
    let dm_complex =
        Check::new("dm_complex", Question, Ge, f.char_zero && !pencil, || (t2.clone(), int(s / 2)));
    let ques_over_c = Check::new("ques_over_c", Question, Ge, f.char_zero && ss && !pencil, || {
        let bound = match &f.modular {
            Some(mods) => mods.iter().map(|&k| (s - k).max(k)).max().unwrap_or(m),
            None => (s - m).max(m),
        };
        (t2.clone(), int(bound))
    });
    let unexpected = Check::new("unexpected_curve", Criterion, Gt, ss, || (int(s), int(2 * m)));

    vec![
        identity,
        hirzebruch,
        melchior,
        at,
        real_theorem,
        real_witness,
        conj1,
        conj2,
        dm_real,
        dm_complex,
        ques_over_c,
        unexpected,
    ]
}

/// Audit a bare record. Records are taken to describe complex arrangements;
/// realness and supersolvability come only from the record's annotations.
pub fn audit_record(record: &TVectorRecord) -> AuditReport {
    let facts = Facts {
        s: record.s,
        t: &record.t,
        char_zero: true,
        real: record.real,
        supersolvable: record.supersolvable,
        modular: None,
        double_point_witness: None,
    };
    let mut notes = vec!["record audited as a complex arrangement in characteristic 0".to_string()];
    if record.real.is_none() {
        notes.push("realness unknown: real-only checks are inapplicable".into());
    }
    if record.supersolvable.is_none() {
        notes.push("supersolvability unknown: supersolvable-only checks are inapplicable".into());
    }
    if record.supersolvable == Some(true) {
        notes.push(format!("unexpected-curve criterion: dual point count {}", record.s));
    }
    AuditReport { subject: record.label.clone(), checks: run_checks(&facts), notes }
}

fn double_point_witness(summary: &CrossingSummary, class: &Classification) -> (u64, u64) {
    let mut has_double = vec![false; summary.s as usize];
    for c in summary.crossings.iter().filter(|c| c.multiplicity() == 2) {
        for &i in &c.lines {
            has_double[i] = true;
        }
    }
    let (mut hit, mut total) = (0, 0);
    for mp in &class.modular_points {
        let through = &summary.find(&mp.point).expect("modular points are crossings").lines;
        for (i, &double) in has_double.iter().enumerate() {
            if through.binary_search(&i).is_err() {
                total += 1;
                hit += u64::from(double);
            }
        }
    }
    (hit, total)
}

pub fn audit_classified(
    arr: &Arrangement,
    summary: &CrossingSummary,
    class: &Classification,
    subject: impl Into<String>,
) -> Result<AuditReport, StructureError> {
    let char_zero = arr.field().characteristic() == 0;
    let real = if char_zero { Some(arr.is_real()?) } else { None };
    let facts = Facts {
        s: summary.s,
        t: &summary.t,
        char_zero,
        real,
        supersolvable: Some(class.is_supersolvable()),
        modular: Some(class.modular_multiplicities()),
        double_point_witness: Some(double_point_witness(summary, class)),
    };
    let mut notes = Vec::new();
    if !char_zero {
        notes.push(format!(
            "characteristic {}: complex-only checks are inapplicable",
            arr.field().characteristic()
        ));
    }
    if class.is_supersolvable() {
        notes.push(format!("unexpected-curve criterion: dual point count {}", summary.s));
    }
    Ok(AuditReport { subject: subject.into(), checks: run_checks(&facts), notes })
}

pub fn audit_arrangement(
    arr: &Arrangement,
    subject: impl Into<String>,
) -> Result<AuditReport, StructureError> {
    let summary = arr.crossing_summary()?;
    let class = classify(arr, &summary)?;
    audit_classified(arr, &summary, &class, subject)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    fn record(label: &str, s: u64, t: &[(u64, u64)]) -> TVectorRecord {
        TVectorRecord {
            label: label.into(),
            s,
            t: TVector::from_pairs(t.iter().copied()),
            real: None,
            supersolvable: None,
        }
    }

    fn sides(r: &AuditReport, name: &str) -> (String, String) {
        let (l, rr) = r.get(name).unwrap().sides.clone().unwrap();
        (format_fraction(&l), format_fraction(&rr))
    }

    fn family(text: &str) -> AuditReport {
        let spec: FamilySpec = text.parse().unwrap();
        audit_arrangement(&generate(&spec).unwrap(), text).unwrap()
    }

    #[test]
    fn klein_record() {
        let r = audit_record(&record("klein", 21, &[(3, 28), (4, 21)]));
        assert_eq!(sides(&r, "identity"), ("210".into(), "210".into()));
        assert_eq!(sides(&r, "hirzebruch"), ("21".into(), "21".into()));
        assert_eq!(r.get("hirzebruch").unwrap().holds(), Some(true));
        assert!(!r.get("melchior").unwrap().applicable());
        assert!(!r.get("conj1").unwrap().applicable());
        assert_eq!(r.get("dm_complex").unwrap().holds(), Some(false));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn wiman_record() {
        let r = audit_record(&record("wiman", 45, &[(3, 120), (4, 45), (5, 36)]));
        assert_eq!(sides(&r, "identity"), ("990".into(), "990".into()));
        assert_eq!(sides(&r, "hirzebruch"), ("90".into(), "81".into()));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn corrupted_record_fails_identity() {
        let r = audit_record(&record("bad", 21, &[(3, 28), (4, 20)]));
        assert_eq!(sides(&r, "identity"), ("204".into(), "210".into()));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn deleted_klein_fails_dirac_motzkin_bound() {
        let r = audit_record(&record("klein_deleted", 20, &[(2, 4), (3, 28), (4, 17)]));
        assert_eq!(sides(&r, "identity"), ("190".into(), "190".into()));
        assert_eq!(sides(&r, "dm_complex"), ("4".into(), "10".into()));
        assert_eq!(r.get("dm_complex").unwrap().holds(), Some(false));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn gates_follow_annotations() {
        let mut rec = record("np", 6, &[(2, 5), (5, 1)]);
        let r = audit_record(&rec);
        assert!(!r.get("hirzebruch").unwrap().applicable());
        assert!(!r.get("melchior").unwrap().applicable());
        rec.real = Some(true);
        rec.supersolvable = Some(true);
        let r = audit_record(&rec);
        assert_eq!(r.get("melchior").unwrap().holds(), Some(true));
        assert_eq!(r.get("dm_real").unwrap().holds(), Some(true));
        assert_eq!(r.get("at").unwrap().holds(), Some(true));
        assert!(!r.get("real_t2_witness").unwrap().applicable());
        for c in &r.checks {
            assert_eq!(c.applicable(), c.holds().is_some());
        }
    }

    #[test]
    fn counterexample_exit_code() {
        let mut rec = record("hypothetical", 11, &[(2, 4), (3, 12), (6, 1)]);
        rec.supersolvable = Some(true);
        let r = audit_record(&rec);
        assert!(r.law_failures().is_empty());
        assert!(r.get("conj2").unwrap().failed());
        assert_eq!(r.exit_code(), 3);

        // a law failure marks the input inconsistent, so it wins over conjectures
        let mut rec = record("fermat3_claimed_ss", 9, &[(3, 12)]);
        rec.supersolvable = Some(true);
        let r = audit_record(&rec);
        assert!(r.get("at").unwrap().failed());
        assert!(r.get("conj1").unwrap().failed());
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn grid_three_without_diagonals() {
        let r = family("grid(3,0)");
        assert_eq!(sides(&r, "melchior"), ("9".into(), "5".into()));
        assert_eq!(sides(&r, "at"), ("9".into(), "8".into()));
        assert_eq!(sides(&r, "real_t2_theorem"), ("9".into(), "4".into()));
        let w = r.get("real_t2_witness").unwrap();
        assert_eq!(w.holds(), Some(true));
        assert_eq!(sides(&r, "unexpected_curve"), ("7".into(), "8".into()));
        assert_eq!(r.get("unexpected_curve").unwrap().holds(), Some(false));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn fermat_plus_axes_two() {
        let r = family("fermat_plus_axes(2,3)");
        assert_eq!(sides(&r, "at"), ("6".into(), "4".into()));
        assert_eq!(sides(&r, "conj2"), ("6".into(), "9/2".into()));
        assert_eq!(sides(&r, "unexpected_curve"), ("9".into(), "8".into()));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn tic_tac_toe_real_theorem() {
        let r = family("grid(3,2)");
        assert_eq!(sides(&r, "real_t2_theorem"), ("6".into(), "5".into()));
        assert_eq!(r.get("real_t2_witness").unwrap().holds(), Some(true));
    }

    #[test]
    fn fermat_three_is_complex_only() {
        let r = family("fermat(3)");
        assert!(!r.get("melchior").unwrap().applicable());
        assert!(!r.get("conj1").unwrap().applicable());
        assert_eq!(r.get("hirzebruch").unwrap().holds(), Some(true));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn near_pencil_and_pencil() {
        let r = family("near_pencil(6)");
        assert!(!r.get("hirzebruch").unwrap().applicable());
        for name in ["melchior", "dm_real", "at"] {
            assert_eq!(r.get(name).unwrap().holds(), Some(true), "{name}");
        }
        assert_eq!(r.exit_code(), 0);
        let r = family("pencil(5)");
        assert_eq!(sides(&r, "at"), ("0".into(), "0".into()));
        assert!(!r.get("melchior").unwrap().applicable());
    }

    #[test]
    fn finite_plane_skips_complex_checks() {
        let r = family("finite_plane(2)");
        for name in ["hirzebruch", "melchior", "at", "conj1", "conj2", "dm_complex"] {
            assert!(!r.get(name).unwrap().applicable(), "{name}");
        }
        assert_eq!(r.get("identity").unwrap().holds(), Some(true));
    }

    #[test]
    fn csv_and_json_shapes() {
        let r = audit_record(&record("klein", 21, &[(3, 28), (4, 21)]));
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), r.checks.len() + 1);
        assert!(csv.lines().nth(1).unwrap().starts_with("klein,identity,law,=,true,210,210,true"));
        let j = r.to_json();
        assert_eq!(j["checks"][2]["holds"], Value::Null);
        assert_eq!(j["checks"][0]["relation"], "=");
    }
}
