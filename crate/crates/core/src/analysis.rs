//! One-shot summary of an arrangement or record for reporting.

use serde_json::{json, Map, Value};

use crate::arrangement::{Arrangement, CrossingSummary, TVector, TVectorRecord};
use crate::structure::{
    check_lemma_high_mult_modular, check_min_crossing_bound, check_mixed_multiplicity,
    check_modular_count_bound, check_no_three_collinear_modular, classify, Classification, LemmaReport,
    Status, StructureError,
};

/// Everything `analyze` reports about an arrangement.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub subject: String,
    pub arrangement: Arrangement,
    pub summary: CrossingSummary,
    pub classification: Classification,
    /// `None` in positive characteristic.
    pub real: Option<bool>,
    pub lemmas: Vec<LemmaReport>,
}

impl Analysis {
    pub fn new(arrangement: Arrangement, subject: impl Into<String>) -> Result<Self, StructureError> {
        let summary = arrangement.crossing_summary()?;
        let classification = classify(&arrangement, &summary)?;
        let real =
            if arrangement.field().characteristic() == 0 { Some(arrangement.is_real()?) } else { None };
        let mut lemmas = Vec::new();
        if classification.is_supersolvable() {
            lemmas.push(check_lemma_high_mult_modular(&summary, &classification)?);
        }
        match check_no_three_collinear_modular(&arrangement, &classification) {
            Ok(r) => lemmas.push(r),
            Err(StructureError::Precondition(msg)) => lemmas.push(LemmaReport {
                name: "no_three_collinear_modular",
                status: Status::Skipped,
                detail: msg,
            }),
            Err(e) => return Err(e),
        }
        lemmas.push(check_min_crossing_bound(&summary));
        lemmas.push(check_mixed_multiplicity(&summary, &classification));
        lemmas.push(check_modular_count_bound(&arrangement, &classification));
        Ok(Analysis { subject: subject.into(), arrangement, summary, classification, real, lemmas })
    }

    pub fn lemma(&self, name: &str) -> Option<&LemmaReport> {
        self.lemmas.iter().find(|l| l.name == name)
    }

    pub fn to_json(&self) -> Value {
        let modular: Vec<Value> = self
            .classification
            .modular_points
            .iter()
            .map(|m| {
                json!({
                    "point": m.point.coords().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                    "multiplicity": m.multiplicity,
                })
            })
            .collect();
        json!({
            "subject": self.subject,
            "field": self.arrangement.field().to_string(),
            "s": self.summary.s,
            "t": t_json(&self.summary.t),
            "n": self.summary.n(),
            "m": self.summary.m(),
            "real": self.real,
            "verdict": self.classification.verdict,
            "supersolvable": self.classification.is_supersolvable(),
            "homogeneous": self.classification.homogeneous,
            "modular_points": modular,
            "lemmas": self.lemmas,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["subject", "key", "value"]).expect("in-memory write");
        let Value::Object(obj) = self.to_json() else { unreachable!() };
        for (k, v) in obj {
            if k == "subject" {
                continue;
            }
            let text = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            w.write_record([self.subject.as_str(), &k, &text]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_text(&self) -> String {
        let c = &self.classification;
        let mut out = format!(
            "{}\n  field {}  s = {}  n = {}  m = {}\n  t = {}\n",
            self.subject,
            self.arrangement.field(),
            self.summary.s,
            self.summary.n(),
            self.summary.m(),
            t_text(&self.summary.t)
        );
        let real = match self.real {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n/a",
        };
        let verdict = serde_json::to_value(c.verdict).expect("serializable");
        out.push_str(&format!("  real {real}  verdict {}\n", verdict.as_str().unwrap_or_default()));
        out.push_str(&format!("  modular points: {}\n", c.modular_points.len()));
        for m in &c.modular_points {
            out.push_str(&format!("    {} (multiplicity {})\n", m.point, m.multiplicity));
        }
        for l in &self.lemmas {
            let status = serde_json::to_value(l.status).expect("serializable");
            out.push_str(&format!(
                "  {:<28} {}: {}\n",
                l.name,
                status.as_str().unwrap_or_default(),
                l.detail
            ));
        }
        out
    }

    /// Bipartite line/crossing incidence graph in Graphviz syntax.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph incidence {\n");
        for i in 0..self.arrangement.len() {
            out.push_str(&format!("  L{i} [shape=box];\n"));
        }
        for (j, c) in self.summary.crossings.iter().enumerate() {
            out.push_str(&format!("  P{j} [label=\"{}\"];\n", c.multiplicity()));
            for i in &c.lines {
                out.push_str(&format!("  L{i} -- P{j};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn t_json(t: &TVector) -> Value {
    Value::Object(t.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<Map<_, _>>())
}

pub fn t_text(t: &TVector) -> String {
    let parts: Vec<String> = t.iter().map(|(k, v)| format!("t{k}={v}")).collect();
    parts.join(" ")
}

/// Summary of a record, which has no coordinates to classify.
pub fn record_json(r: &TVectorRecord) -> Value {
    json!({
        "subject": r.label,
        "s": r.s,
        "t": t_json(&r.t),
        "n": r.t.crossings(),
        "m": r.t.max_multiplicity(),
        "real": r.real,
        "supersolvable": r.supersolvable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::generate;
    use crate::structure::Verdict;

    fn analyze(spec: &str) -> Analysis {
        Analysis::new(generate(&spec.parse().unwrap()).unwrap(), spec).unwrap()
    }

    #[test]
    fn fermat_plus_axes_two() {
        let a = analyze("fermat_plus_axes(2,3)");
        let j = a.to_json();
        assert_eq!(j["t"], json!({"2": 6, "3": 4, "4": 3}));
        assert_eq!(j["supersolvable"], json!(true));
        assert_eq!(j["modular_points"].as_array().unwrap().len(), 3);
        assert_eq!(j["real"], json!(true));
    }

    #[test]
    fn fano_plane() {
        let a = analyze("finite_plane(2)");
        assert_eq!(a.classification.modular_points.len(), 7);
        assert_eq!(a.real, None);
        assert_eq!(a.lemma("no_three_collinear_modular").unwrap().status, Status::Skipped);
    }

    #[test]
    fn fermat_three() {
        let a = analyze("fermat(3)");
        assert_eq!(a.classification.verdict, Verdict::NotSupersolvable);
        assert_eq!(a.summary.t.get(2), 0);
        assert!(a.lemma("high_multiplicity_modular").is_none());
    }

    #[test]
    fn renderings() {
        let a = analyze("triangle_case1");
        assert!(a.to_text().contains("t2=4 t3=2"));
        assert!(a.to_csv().starts_with("subject,key,value\n"));
        let dot = a.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 4 * 2 + 2 * 3);
    }
}
