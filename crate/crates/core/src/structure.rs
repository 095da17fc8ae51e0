//! Modular points, supersolvability and the structural lemmas about them.
//!
//! A crossing point `p` is modular when the line through `p` and any other
//! crossing point is a line of the arrangement. Modularity is always decided
//! from that definition: every join is formed and looked up in the arrangement.

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, CrossingSummary};
use crate::projective::{self, GeometryError, ProjLine, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("{0} is not a crossing point of the arrangement")]
    NotACrossing(Box<ProjPoint>),
    #[error("the arrangement is not supersolvable")]
    NotSupersolvable,
    #[error("precondition unmet: {0}")]
    Precondition(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pencil,
    NearPencil,
    SupersolvableNontrivial,
    NotSupersolvable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPoint {
    pub point: ProjPoint,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Sorted by canonical coordinates.
    pub modular_points: Vec<ModularPoint>,
    /// The common multiplicity when all modular points share one.
    pub homogeneous: Option<u64>,
    pub trivial: bool,
}

impl Classification {
    pub fn is_supersolvable(&self) -> bool {
        !self.modular_points.is_empty()
    }

    pub fn is_pencil(&self) -> bool {
        self.verdict == Verdict::Pencil
    }

    pub fn modular_multiplicities(&self) -> Vec<u64> {
        self.modular_points.iter().map(|m| m.multiplicity).collect()
    }
}

pub fn is_modular(
    arr: &Arrangement,
    summary: &CrossingSummary,
    p: &ProjPoint,
) -> Result<bool, StructureError> {
    if summary.find(p).is_none() {
        return Err(StructureError::NotACrossing(Box::new(p.clone())));
    }
    for q in &summary.crossings {
        if &q.point == p {
            continue;
        }
        if !arr.contains(&projective::join(p, &q.point)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn modular_points(
    arr: &Arrangement,
    summary: &CrossingSummary,
) -> Result<Vec<ModularPoint>, StructureError> {
    let mut out = Vec::new();
    for c in &summary.crossings {
        if is_modular(arr, summary, &c.point)? {
            out.push(ModularPoint { point: c.point.clone(), multiplicity: c.multiplicity() });
        }
    }
    Ok(out)
}

pub fn classify(arr: &Arrangement, summary: &CrossingSummary) -> Result<Classification, StructureError> {
    let modular = modular_points(arr, summary)?;
    let s = summary.s;
    let verdict = if summary.n() == 1 {
        Verdict::Pencil
    } else if summary.t.is_near_pencil(s) {
        Verdict::NearPencil
    } else if !modular.is_empty() {
        Verdict::SupersolvableNontrivial
    } else {
        Verdict::NotSupersolvable
    };
    let homogeneous = match modular.first() {
        Some(first) if modular.iter().all(|m| m.multiplicity == first.multiplicity) => {
            Some(first.multiplicity)
        }
        _ => None,
    };
    let class = Classification {
        verdict,
        modular_points: modular,
        homogeneous,
        trivial: matches!(verdict, Verdict::Pencil | Verdict::NearPencil),
    };
    debug_assert!(
        check_mixed_multiplicity(summary, &class).status != Status::Fail,
        "mixed-multiplicity law violated"
    );
    Ok(class)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of an executable structural lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl LemmaReport {
    fn new(name: &'static str, status: Status, detail: impl Into<String>) -> Self {
        LemmaReport { name, status, detail: detail.into() }
    }

    fn verdict(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self::new(name, status, detail)
    }
}

/// Every crossing at least as heavy as some modular point is itself modular.
pub fn check_lemma_high_mult_modular(
    summary: &CrossingSummary,
    class: &Classification,
) -> Result<LemmaReport, StructureError> {
    const NAME: &str = "high_multiplicity_modular";
    let Some(lightest) = class.modular_points.iter().map(|m| m.multiplicity).min() else {
        return Err(StructureError::NotSupersolvable);
    };
    let violations: Vec<String> = summary
        .crossings
        .iter()
        .filter(|c| c.multiplicity() >= lightest)
        .filter(|c| !class.modular_points.iter().any(|m| m.point == c.point))
        .map(|c| format!("{} (multiplicity {})", c.point, c.multiplicity()))
        .collect();
    Ok(LemmaReport::verdict(
        NAME,
        violations.is_empty(),
        if violations.is_empty() {
            format!("all crossings of multiplicity >= {lightest} are modular")
        } else {
            format!("non-modular: {}", violations.join(", "))
        },
    ))
}

/// No line contains three modular points (characteristic 0, homogeneous, `m >= 3`).
pub fn check_no_three_collinear_modular(
    arr: &Arrangement,
    class: &Classification,
) -> Result<LemmaReport, StructureError> {
    const NAME: &str = "no_three_collinear_modular";
    if arr.field().characteristic() != 0 {
        return Ok(LemmaReport::new(
            NAME,
            Status::Skipped,
            format!("characteristic {}", arr.field().characteristic()),
        ));
    }
    match class.homogeneous {
        Some(m) if m >= 3 => {}
        _ => {
            return Err(StructureError::Precondition(
                "needs a homogeneous supersolvable arrangement with m >= 3".into(),
            ))
        }
    }
    let pts: Vec<&ProjPoint> = class.modular_points.iter().map(|m| &m.point).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let ij = projective::join(pts[i], pts[j])?;
            for k in j + 1..pts.len() {
                if projective::join(pts[i], pts[k])? == ij {
                    return Ok(LemmaReport::verdict(
                        NAME,
                        false,
                        format!("{} {} {} are collinear", pts[i], pts[j], pts[k]),
                    ));
                }
            }
        }
    }
    Ok(LemmaReport::verdict(NAME, true, format!("{} modular points, no three collinear", pts.len())))
}

/// `n >= 2m` unless the arrangement is a pencil or near pencil.
pub fn check_min_crossing_bound(summary: &CrossingSummary) -> LemmaReport {
    const NAME: &str = "min_crossing_bound";
    let (n, m) = (summary.n(), summary.m());
    if summary.t.is_trivial(summary.s) {
        return LemmaReport::new(NAME, Status::Skipped, "pencil or near pencil");
    }
    LemmaReport::verdict(NAME, n >= 2 * m, format!("n = {n}, 2m = {}", 2 * m))
}

/// A modular point of multiplicity `m` next to a heavier crossing of
/// multiplicity `k` forces `s = m + k - 1`, and then either a near pencil
/// (`m = 2`) or exactly two modular points.
pub fn check_mixed_multiplicity(summary: &CrossingSummary, class: &Classification) -> LemmaReport {
    const NAME: &str = "mixed_multiplicity";
    let Some(lightest) = class.modular_points.iter().map(|m| m.multiplicity).min() else {
        return LemmaReport::new(NAME, Status::Skipped, "not supersolvable");
    };
    let heaviest = summary.m();
    if heaviest <= lightest {
        return LemmaReport::new(NAME, Status::Skipped, "no heavier crossing");
    }
    let lines_ok = summary.s == lightest + heaviest - 1;
    let shape_ok =
        if lightest == 2 { class.verdict == Verdict::NearPencil } else { class.modular_points.len() == 2 };
    LemmaReport::verdict(
        NAME,
        lines_ok && shape_ok,
        format!(
            "m = {lightest}, heavier = {heaviest}, s = {}, modular points = {}",
            summary.s,
            class.modular_points.len()
        ),
    )
}

/// Between 1 and 4 modular points for nontrivial homogeneous supersolvable
/// arrangements with `m >= 3` in characteristic 0.
pub fn check_modular_count_bound(arr: &Arrangement, class: &Classification) -> LemmaReport {
    const NAME: &str = "modular_count_bound";
    let applicable = arr.field().characteristic() == 0
        && class.verdict == Verdict::SupersolvableNontrivial
        && class.homogeneous.is_some_and(|m| m >= 3);
    if !applicable {
        return LemmaReport::new(NAME, Status::Skipped, "hypotheses not met");
    }
    let count = class.modular_points.len();
    LemmaReport::verdict(NAME, (1..=4).contains(&count), format!("{count} modular points"))
}

/// Remove the lines through the modular point `p`, then add back the joins
/// from `p` to every crossing of what remains.
pub fn recover_from_modular_point(arr: &Arrangement, p: &ProjPoint) -> Result<Arrangement, StructureError> {
    let through = arr.lines_through(p)?;
    let rest: Vec<ProjLine> = arr
        .lines()
        .iter()
        .enumerate()
        .filter(|(i, _)| !through.contains(i))
        .map(|(_, l)| l.clone())
        .collect();
    let mut lines = rest.clone();
    if rest.len() >= 2 {
        let base = Arrangement::new(arr.field(), rest)?;
        for c in base.crossing_summary()?.crossings {
            let l = projective::join(p, &c.point)?;
            if !lines.contains(&l) {
                lines.push(l);
            }
        }
    }
    Ok(Arrangement::new(arr.field(), lines)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDescriptor;

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn arr(lines: &[[i64; 3]]) -> Arrangement {
        let lines = lines.iter().map(|c| ProjLine::from_ints(Q, *c).unwrap()).collect();
        Arrangement::new(Q, lines).unwrap()
    }

    fn analyze(a: &Arrangement) -> (CrossingSummary, Classification) {
        let cs = a.crossing_summary().unwrap();
        let class = classify(a, &cs).unwrap();
        (cs, class)
    }

    fn six_lines() -> Arrangement {
        arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [1, 0, -1], [0, 1, -1]])
    }

    #[test]
    fn near_pencil_big_point_is_modular() {
        let a = arr(&[[0, 1, 0], [1, 0, 0], [1, -1, 0], [1, -2, 0], [0, 0, 1]]);
        let (cs, class) = analyze(&a);
        let big = ProjPoint::from_ints(Q, [0, 0, 1]).unwrap();
        assert!(is_modular(&a, &cs, &big).unwrap());
        assert_eq!(class.verdict, Verdict::NearPencil);
        assert_eq!(class.modular_points.len(), 5);
    }

    #[test]
    fn non_crossing_is_rejected() {
        let a = six_lines();
        let cs = a.crossing_summary().unwrap();
        let p = ProjPoint::from_ints(Q, [3, 5, 7]).unwrap();
        assert!(matches!(is_modular(&a, &cs, &p), Err(StructureError::NotACrossing(_))));
    }

    #[test]
    fn four_modular_points_of_the_six_line_example() {
        let (_, class) = analyze(&six_lines());
        assert_eq!(class.verdict, Verdict::SupersolvableNontrivial);
        assert_eq!(class.modular_multiplicities(), vec![3, 3, 3, 3]);
        assert_eq!(class.homogeneous, Some(3));
    }

    #[test]
    fn pencil_and_triangle_verdicts() {
        let (_, class) = analyze(&arr(&[[0, 1, 0], [1, 0, 0], [1, -1, 0], [1, -2, 0]]));
        assert_eq!(class.verdict, Verdict::Pencil);
        assert!(class.trivial);
        let (_, class) = analyze(&arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert_eq!(class.verdict, Verdict::NearPencil);
        assert_eq!(class.modular_multiplicities(), vec![2, 2, 2]);
        let (_, class) = analyze(&arr(&[[1, 0, 0], [0, 1, 0]]));
        assert_eq!(class.verdict, Verdict::Pencil);
    }

    #[test]
    fn lemma_checks_on_six_lines() {
        let a = six_lines();
        let (cs, class) = analyze(&a);
        assert_eq!(check_lemma_high_mult_modular(&cs, &class).unwrap().status, Status::Pass);
        assert_eq!(check_no_three_collinear_modular(&a, &class).unwrap().status, Status::Pass);
        assert_eq!(check_min_crossing_bound(&cs).status, Status::Pass);
        assert_eq!(check_modular_count_bound(&a, &class).status, Status::Pass);
        assert_eq!(check_mixed_multiplicity(&cs, &class).status, Status::Skipped);
    }

    #[test]
    fn lemma_requires_supersolvable() {
        // four general lines: six double points, none modular
        let a = arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]);
        let (cs, class) = analyze(&a);
        assert_eq!(class.verdict, Verdict::NotSupersolvable);
        assert_eq!(check_lemma_high_mult_modular(&cs, &class).unwrap_err(), StructureError::NotSupersolvable);
        assert!(check_no_three_collinear_modular(&a, &class).is_err());
    }

    #[test]
    fn collinear_modular_points_fail_the_check() {
        // a near pencil has collinear modular points of multiplicity 2; feed it
        // through with a forged homogeneous m to exercise the failure path
        let a = arr(&[[0, 1, 0], [1, 0, 0], [1, -1, 0], [1, -2, 0], [0, 0, 1]]);
        let (_, mut class) = analyze(&a);
        class.homogeneous = Some(3);
        let r = check_no_three_collinear_modular(&a, &class).unwrap();
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn mixed_multiplicity_law() {
        // two points: multiplicity 3 and 4 sharing the line x = 0, s = 3 + 4 - 1
        let a = arr(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 0, -1], [1, 0, -2]]);
        let (cs, class) = analyze(&a);
        assert_eq!(cs.m(), 4);
        assert_eq!(class.modular_multiplicities(), vec![3, 4]);
        assert_eq!(check_mixed_multiplicity(&cs, &class).status, Status::Pass);
    }

    #[test]
    fn min_crossing_bound_skips_trivial() {
        let (cs, _) = analyze(&arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert_eq!(check_min_crossing_bound(&cs).status, Status::Skipped);
    }

    #[test]
    fn recovery_keeps_lines_through_the_point() {
        let a = six_lines();
        let p = ProjPoint::from_ints(Q, [0, 0, 1]).unwrap();
        let b = recover_from_modular_point(&a, &p).unwrap();
        for l in b.lines() {
            assert!(a.contains(l));
        }
        let cs = b.crossing_summary().unwrap();
        assert!(is_modular(&b, &cs, &p).unwrap());
    }
}
