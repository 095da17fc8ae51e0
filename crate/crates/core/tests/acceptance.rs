//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the lines always print.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use linea::analysis::Analysis;
use linea::arrangement::TVector;
use linea::audit::audit_arrangement;
use linea::corpus::{verify, Corpus, CriterionResult, Subject, VerifySummary};
use linea::feasibility::{scan, verify_certificate, Apply, Outcome, ProblemSpec};
use linea::generators::{cone, expected_profile, generate, FamilySpec};

type Outcome12 = Result<String, String>;
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome12 + 'a>);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn analysis(spec: &str) -> Analysis {
    let spec: FamilySpec = spec.parse().unwrap();
    Analysis::new(generate(&spec).unwrap(), spec.to_string()).unwrap()
}

fn criterion(summary: &VerifySummary, id: u8) -> &CriterionResult {
    summary.criteria.iter().find(|c| c.id == id).expect("criterion present")
}

fn from_summary(summary: &VerifySummary, id: u8) -> Outcome12 {
    let c = criterion(summary, id);
    if c.passed() {
        Ok(c.name.to_string())
    } else {
        Err(c.failures.join("; "))
    }
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1(summary: &VerifySummary) -> Outcome12 {
    from_summary(summary, 1)?;
    let mut n = 0;
    for s in &summary.subjects {
        if let Subject::Arrangement { id, analysis, .. } = s {
            let (l, r) = analysis.summary.t.identity_sides(analysis.summary.s);
            ensure(l == r, format!("{id}: {l} != {r}"))?;
            n += 1;
        }
    }
    Ok(format!("identity exact on {n} arrangements"))
}

fn c2(summary: &VerifySummary) -> Outcome12 {
    from_summary(summary, 2)?;
    Ok("210=210, 990=990, 21=21, 90>=81, 190=190, 4<10".into())
}

fn c3() -> Outcome12 {
    let a = analysis("fermat_plus_axes(2,3)");
    ensure(a.summary.t == TVector::from_pairs([(2, 6), (3, 4), (4, 3)]), "t-vector mismatch")?;
    ensure(a.classification.is_supersolvable(), "not supersolvable")?;
    ensure(
        a.classification.modular_multiplicities() == vec![4, 4, 4],
        format!("modular {:?}", a.classification.modular_multiplicities()),
    )?;
    let report = audit_arrangement(&a.arrangement, "fpa").unwrap();
    ensure(
        report.get("unexpected_curve").and_then(|c| c.holds()) == Some(true),
        "unexpected criterion false",
    )?;
    Ok("t = {2:6, 3:4, 4:3}, 3 modular points of multiplicity 4, 9 > 8".into())
}

fn c4() -> Outcome12 {
    for a in 2..=7u64 {
        let x = analysis(&format!("grid({a},0)"));
        ensure(x.summary.t.get(2) == a * a, format!("grid({a},0) t2"))?;
        ensure(
            x.classification.modular_multiplicities() == vec![a + 1, a + 1],
            format!("grid({a},0) modular"),
        )?;
    }
    let g31 = analysis("grid(3,1)");
    ensure(g31.summary.t == TVector::from_pairs([(2, 7), (3, 3), (4, 2)]), "grid(3,1)")?;
    let g32 = analysis("grid(3,2)");
    ensure(g32.summary.t == TVector::from_pairs([(2, 6), (3, 4), (4, 3)]), "grid(3,2)")?;
    ensure(g32.classification.modular_points.len() == 3, "grid(3,2) modular")?;
    let g52 = analysis("grid(5,2)");
    ensure(g52.summary.t.get(2) == 18, "grid(5,2) t2")?;
    let profile = expected_profile(&FamilySpec::Grid { a: 5, diagonals: 2 }).unwrap();
    ensure(profile.published_t2 == Some(16) && !profile.notes.is_empty(), "erratum not flagged")?;
    Ok("grid(a,0), grid(3,1), grid(3,2) exact; grid(5,2) t2 = 18, published 16 flagged".into())
}

fn spec(m: u64, allowed: Option<&[u64]>) -> ProblemSpec {
    ProblemSpec::new(m, allowed.map(|a| a.iter().copied().collect()), true, Apply::default()).unwrap()
}

fn c5() -> Outcome12 {
    let mut certs = 0;
    for (m, allowed) in [(3, &[3u64][..]), (4, &[3, 4][..])] {
        let sp = spec(m, Some(allowed));
        let report = scan(&sp, 3, 200).map_err(|e| e.to_string())?;
        for (s, o) in &report.outcomes {
            match o {
                Outcome::Feasible { .. } => return Err(format!("m={m} s={s} feasible")),
                Outcome::Infeasible { certificate } => {
                    ensure(
                        verify_certificate(&sp.at(*s).unwrap(), certificate),
                        format!("m={m} s={s} certificate"),
                    )?;
                    certs += 1;
                }
            }
        }
    }
    Ok(format!("all infeasible on [3,200], {certs} certificates verified"))
}

fn c6() -> Outcome12 {
    let small = scan(&spec(5, None), 6, 60).map_err(|e| e.to_string())?;
    ensure(
        small.feasible_set().iter().all(|s| (10..=13).contains(s)),
        format!("m=5 runs {:?}", small.feasible_runs()),
    )?;
    let start = Instant::now();
    let big = scan(&spec(100, None), 101, 7500).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        big.feasible_set().iter().all(|s| (103..=7412).contains(s)),
        format!("m=100 runs {:?}", big.feasible_runs()),
    )?;
    ensure(elapsed < Duration::from_secs(60), format!("m=100 took {elapsed:?}"))?;
    Ok(format!(
        "m=5 feasible {:?}; m=100 feasible {:?} in {:.1}s",
        small.feasible_runs(),
        big.feasible_runs(),
        elapsed.as_secs_f64()
    ))
}

fn c7(summary: &VerifySummary) -> Outcome12 {
    from_summary(summary, 7)?;
    ensure(analysis("fermat_plus_axes(1,3)").classification.modular_points.len() == 4, "fpa(1,3)")?;
    for n in 2..=5 {
        let a = analysis(&format!("fermat_plus_axes({n},3)"));
        ensure(a.classification.modular_points.len() == 3, format!("fpa({n},3)"))?;
    }
    Ok("1..4 modular points; 4, 3, 2, 1 attained as expected".into())
}

fn c8(summary: &VerifySummary) -> Outcome12 {
    from_summary(summary, 8)?;
    Ok("lemma checks pass; finite_plane(2) skipped".into())
}

fn c9(summary: &VerifySummary) -> Outcome12 {
    from_summary(summary, 9)?;
    let c = criterion(summary, 9);
    Ok(format!("theorem and witness hold, {}", c.detail))
}

fn c10(summary: &VerifySummary) -> Outcome12 {
    from_summary(summary, 10)?;
    ensure(summary.counterexamples.is_empty(), "counterexamples found")?;
    Ok(format!("no counterexamples, {}", criterion(summary, 10).detail))
}

fn c11() -> Outcome12 {
    let base = generate(&FamilySpec::Grid { a: 3, diagonals: 0 }).unwrap();
    let b = base.crossing_summary().unwrap();
    let mut max_attempts = 0;
    for seed in 1..=20 {
        let c = cone(&base, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        max_attempts = max_attempts.max(c.attempts);
        let a = Analysis::new(c.arrangement, "cone").unwrap();
        ensure(a.classification.modular_points.len() == 1, format!("seed {seed} modular"))?;
        ensure(a.summary.s == b.s + b.n(), format!("seed {seed} s"))?;
        for k in 3..=b.s {
            let apex = u64::from(k + 1 == b.n());
            ensure(a.summary.t.get(k + 1) == b.t.get(k) + apex, format!("seed {seed} t_{}", k + 1))?;
        }
    }
    Ok(format!("seeds 1..20 pass, at most {max_attempts} apex draws"))
}

fn c12() -> Outcome12 {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_linea"))
            .arg("verify-paper")
            .arg(corpus_dir())
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), format!("exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, "outputs differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = Corpus::load(corpus_dir()).expect("bundled corpus loads");
    let summary = verify(&corpus).expect("bundled corpus evaluates");
    let checks: Vec<Check> = vec![
        ("identity law over the corpus", Box::new(|| c1(&summary))),
        ("Klein/Wiman/deleted-Klein records", Box::new(|| c2(&summary))),
        ("fermat_plus_axes(2,3)", Box::new(c3)),
        ("grid family table", Box::new(c4)),
        ("m=3,4 infeasible with certificates", Box::new(c5)),
        ("LP containment for m=5 and m=100", Box::new(c6)),
        ("modular point bound", Box::new(|| c7(&summary))),
        ("structural lemma suite", Box::new(|| c8(&summary))),
        ("real t2 theorem", Box::new(|| c9(&summary))),
        ("conjecture predicates", Box::new(|| c10(&summary))),
        ("cone construction", Box::new(c11)),
        ("determinism", Box::new(c12)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        checks.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
