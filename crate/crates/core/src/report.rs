//! Structured outcome of one verification run.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceKind {
    /// `|computed - reference| ≤ value`
    Absolute,
    /// `|computed - reference| ≤ value · |reference|`
    Relative,
    /// `computed ≤ reference + value`
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub kind: ToleranceKind,
    pub value: f64,
}

impl Tolerance {
    pub fn absolute(value: f64) -> Self {
        Tolerance { kind: ToleranceKind::Absolute, value }
    }

    pub fn relative(value: f64) -> Self {
        Tolerance { kind: ToleranceKind::Relative, value }
    }

    pub fn upper_bound(value: f64) -> Self {
        Tolerance { kind: ToleranceKind::UpperBound, value }
    }

    pub fn accepts(&self, computed: f64, reference: f64) -> bool {
        if !computed.is_finite() || !reference.is_finite() {
            return false;
        }
        match self.kind {
            ToleranceKind::Absolute => (computed - reference).abs() <= self.value,
            ToleranceKind::Relative => (computed - reference).abs() <= self.value * reference.abs(),
            ToleranceKind::UpperBound => computed <= reference + self.value,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The computation could not decide the claim at the requested accuracy.
    Inconclusive,
}

/// A reference value and where it comes from (closed form, independent oracle, ...).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reference {
    pub value: f64,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub claim: String,
    pub inputs: BTreeMap<String, Value>,
    pub computed: BTreeMap<String, f64>,
    pub reference: BTreeMap<String, Reference>,
    pub tolerance: Tolerance,
    pub verdict: Verdict,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Report {
    pub fn new(claim: impl Into<String>, tolerance: Tolerance) -> Self {
        Report {
            claim: claim.into(),
            inputs: BTreeMap::new(),
            computed: BTreeMap::new(),
            reference: BTreeMap::new(),
            tolerance,
            verdict: Verdict::Pass,
            pass: true,
            failed: Vec::new(),
            note: None,
            runtime_ms: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    /// Echoes any serializable input.
    pub fn input_serialized(&mut self, key: &str, value: &impl Serialize) -> &mut Self {
        let value = serde_json::to_value(value).unwrap_or_else(|e| Value::String(format!("unserializable: {e}")));
        self.inputs.insert(key.to_string(), value);
        self
    }

    /// Records a value with no reference attached.
    pub fn record(&mut self, key: &str, value: f64) -> &mut Self {
        self.computed.insert(key.to_string(), value);
        self
    }

    /// Records `computed` against `reference` and updates the verdict.
    pub fn compare(&mut self, key: &str, computed: f64, reference: f64, source: &str) -> &mut Self {
        self.computed.insert(key.to_string(), computed);
        self.reference.insert(key.to_string(), Reference { value: reference, source: source.to_string() });
        if !self.tolerance.accepts(computed, reference) {
            self.failed.push(key.to_string());
            if self.verdict == Verdict::Pass {
                self.set_verdict(Verdict::Fail);
            }
        }
        self
    }

    /// Records a boolean requirement as a 0/1 comparison against 1.
    pub fn require(&mut self, key: &str, holds: bool) -> &mut Self {
        self.computed.insert(key.to_string(), if holds { 1.0 } else { 0.0 });
        self.reference.insert(key.to_string(), Reference { value: 1.0, source: "requirement".to_string() });
        if !holds {
            self.failed.push(key.to_string());
            if self.verdict == Verdict::Pass {
                self.set_verdict(Verdict::Fail);
            }
        }
        self
    }

    pub fn mark_inconclusive(&mut self, why: impl Into<String>) -> &mut Self {
        if self.verdict != Verdict::Fail {
            self.set_verdict(Verdict::Inconclusive);
        }
        self.note = Some(why.into());
        self
    }

    pub fn with_note(&mut self, note: impl Into<String>) -> &mut Self {
        self.note = Some(note.into());
        self
    }

    fn set_verdict(&mut self, v: Verdict) {
        self.verdict = v;
        self.pass = v == Verdict::Pass;
    }

    /// One JSON object on a single line. Timings are omitted unless requested,
    /// so repeated runs give identical bytes.
    pub fn to_json_line(&self, timings: bool) -> String {
        let mut copy = self.clone();
        if !timings {
            copy.runtime_ms = None;
        }
        serde_json::to_string(&copy).expect("report serialization cannot fail")
    }

    pub fn summary_line(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        let mut line = format!("{verdict} {}", self.claim);
        let shown: Vec<String> = self
            .reference
            .iter()
            .filter(|(_, r)| r.source != "requirement")
            .take(4)
            .map(|(k, r)| format!("{k}={:.6e} (ref {:.6e})", self.computed[k], r.value))
            .collect();
        if !shown.is_empty() {
            line.push_str(&format!(": {}", shown.join(", ")));
        }
        if !self.failed.is_empty() {
            line.push_str(&format!(" (failed: {})", self.failed.join(", ")));
        }
        if let Some(note) = &self.note {
            line.push_str(&format!(" [{note}]"));
        }
        line
    }
}
