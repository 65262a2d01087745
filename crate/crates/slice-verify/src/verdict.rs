use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::ReportOnly => "report",
        })
    }
}

/// Enough data to rerun the failing trial and see both sides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub roots: Vec<String>,
    pub trial: Option<usize>,
    pub assignment: BTreeMap<String, String>,
    pub expected: String,
    pub actual: String,
}

impl Counterexample {
    pub fn new(roots: Vec<String>, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        Counterexample { roots, expected: expected.into(), actual: actual.into(), ..Default::default() }
    }

    pub fn at_trial(mut self, trial: usize) -> Self {
        self.trial = Some(trial);
        self
    }

    pub fn with_assignment(mut self, a: BTreeMap<String, String>) -> Self {
        self.assignment = a;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub l: usize,
    pub lprime: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check_id: String,
    pub params: Params,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    /// Free-form summary, e.g. the number of mismatches of a report-only probe.
    pub note: Option<String>,
}

impl Verdict {
    pub fn pass(check_id: &str, params: Params) -> Self {
        Verdict { check_id: check_id.into(), params, status: Status::Pass, counterexample: None, note: None }
    }

    pub fn fail(check_id: &str, params: Params, cx: Counterexample) -> Self {
        Verdict { check_id: check_id.into(), params, status: Status::Fail, counterexample: Some(cx), note: None }
    }

    pub fn report(check_id: &str, params: Params, note: impl Into<String>) -> Self {
        Verdict {
            check_id: check_id.into(),
            params,
            status: Status::ReportOnly,
            counterexample: None,
            note: Some(note.into()),
        }
    }

    pub fn from_result(check_id: &str, params: Params, r: Result<(), Counterexample>) -> Self {
        match r {
            Ok(()) => Verdict::pass(check_id, params),
            Err(cx) => Verdict::fail(check_id, params, cx),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    fn sort_key(&self) -> (String, usize, usize) {
        (self.check_id.clone(), self.params.l, self.params.lprime)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<6} {} (l={}, l'={})", self.status, self.check_id, self.params.l, self.params.lprime)?;
        if let Some(n) = &self.note {
            write!(f, ": {n}")?;
        }
        if let Some(cx) = &self.counterexample {
            write!(f, " [roots {:?}", cx.roots)?;
            if let Some(t) = cx.trial {
                write!(f, ", trial {t}")?;
            }
            write!(f, "; expected {}, got {}]", cx.expected, cx.actual)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckTiming {
    pub check_id: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
    pub timings: Vec<CheckTiming>,
}

impl Report {
    pub fn extend(&mut self, mut verdicts: Vec<Verdict>, check_id: &str, seconds: f64) {
        self.verdicts.append(&mut verdicts);
        self.timings.push(CheckTiming { check_id: check_id.into(), seconds });
    }

    pub fn sort(&mut self) {
        self.verdicts.sort_by_key(|v| v.sort_key());
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.is_fail())
    }

    pub fn has_failures(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn count(&self, status: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == status).count()
    }

    /// The verdict list alone, which is reproducible byte for byte.
    pub fn verdicts_json(&self) -> String {
        serde_json::to_string_pretty(&self.verdicts).expect("verdicts serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
