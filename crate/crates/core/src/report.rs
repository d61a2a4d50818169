//! Check reports: a flat list of named pass/fail records with witnesses.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

/// Anchor strings naming the result each check instantiates.
pub mod anchors {
    pub const DUAL_GROUP: &str = "def:dual-group";
    pub const LOCALLY_FINITE_DUAL: &str = "prop:ablf";
    pub const PROFINITE_DUAL: &str = "prop:abprf";
    pub const ABELIAN_REFLEXIVITY: &str = "cor:abtref";
    pub const LOCALLY_CONSTANT: &str = "lem:holloco";
    pub const CHARACTER_COMBINATION: &str = "lem:lincom";
    pub const TENSOR_OF_FUNCTIONS: &str = "lem:prfOO";
    pub const HOPF_AXIOMS: &str = "prop:OGHopf";
    pub const LOCALLY_FINITE_HOPF: &str = "thm:lf";
    pub const PROFINITE_HOPF: &str = "thm:prf";
    pub const ENVELOPE_LOCALLY_FINITE: &str = "thm:lf/envelope";
    pub const ENVELOPE_FUNCTIONS: &str = "prop:OGAM";
    pub const ENVELOPE_CONVOLUTION: &str = "prop:OGprAM";
    pub const DOUBLE_DUAL: &str = "sec:double-dual";
    pub const SPECTRUM: &str = "rem:functsp";
    pub const SMITH_FORM: &str = "substrate:snf";
    pub const CYCLOTOMIC: &str = "substrate:cyclotomic";
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub anchor: String,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, anchor: &str, passed: bool) -> Self {
        CheckRecord {
            check: check.into(),
            level: None,
            passed,
            witness: None,
            anchor: anchor.to_string(),
        }
    }

    pub fn at_level(mut self, level: usize) -> Self {
        self.level = Some(level);
        self
    }

    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        self.witness = witness;
        self
    }

    /// Pass iff `witness` is `None`; the witness is recorded otherwise.
    pub fn from_witness(check: impl Into<String>, anchor: &str, witness: Option<String>) -> Self {
        CheckRecord::new(check, anchor, witness.is_none()).with_witness(witness)
    }
}

/// One node of a reflexivity diagram.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DiagramNode {
    pub id: String,
    pub description: String,
}

/// One labelled edge of a reflexivity diagram with its verification status.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DiagramEdge {
    pub from: String,
    pub to: String,
    pub label: String,
    pub verified: bool,
    /// Why the envelope at the target node acts as the identity.
    pub envelope_certificate: String,
}

/// The four-corner diagram `H → H' → H^• → (H^•)' → H`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ReflexivityDiagram {
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Report {
    pub subject: String,
    pub records: Vec<CheckRecord>,
    pub diagram: Option<ReflexivityDiagram>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            records: Vec::new(),
            diagram: None,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(records);
    }

    /// Appends the records of `other`.
    pub fn merge(&mut self, other: Report) {
        self.records.extend(other.records);
        if self.diagram.is_none() {
            self.diagram = other.diagram;
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.records.iter().all(|r| r.passed) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    /// Records of a given check name.
    pub fn records_named<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a CheckRecord> {
        self.records.iter().filter(move |r| r.check == check)
    }
}

impl Serialize for Report {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let len = if self.diagram.is_some() { 4 } else { 3 };
        let mut st = s.serialize_struct("Report", len)?;
        st.serialize_field("subject", &self.subject)?;
        st.serialize_field("records", &self.records)?;
        if let Some(d) = &self.diagram {
            st.serialize_field("diagram", d)?;
        }
        st.serialize_field("verdict", &self.verdict())?;
        st.end()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for r in &self.records {
            let level = r.level.map(|l| format!(" [level {l}]")).unwrap_or_default();
            let status = if r.passed { "PASS" } else { "FAIL" };
            write!(f, "  {status} {}{level} ({})", r.check, r.anchor)?;
            if let Some(w) = &r.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        if let Some(d) = &self.diagram {
            writeln!(f, "  diagram:")?;
            for e in &d.edges {
                let status = if e.verified { "ok" } else { "BROKEN" };
                writeln!(f, "    {} --{}--> {} [{status}] {}", e.from, e.label, e.to, e.envelope_certificate)?;
            }
        }
        write!(f, "verdict: {}", self.verdict())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_tracks_records() {
        let mut r = Report::new("x");
        assert_eq!(r.verdict(), Verdict::Pass);
        r.push(CheckRecord::new("a", anchors::HOPF_AXIOMS, true));
        assert!(r.passed());
        r.push(CheckRecord::from_witness("b", anchors::HOPF_AXIOMS, Some("i=1".into())).at_level(2));
        assert_eq!(r.verdict(), Verdict::Fail);
        assert_eq!(r.failures().count(), 1);
    }
}
