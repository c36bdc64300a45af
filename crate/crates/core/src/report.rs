use serde::{Deserialize, Serialize};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    #[serde(rename = "ref")]
    pub reference: String,
    pub violation: f64,
    /// Interior-contract radius the violation was measured on (0 for symbolic checks).
    pub radius: u32,
    pub pass: bool,
}

/// Ordered list of check outcomes. Serializes as `[{check, ref, violation, radius, pass}]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerificationReport {
    entries: Vec<CheckResult>,
    #[serde(skip)]
    tolerance: f64,
}

impl VerificationReport {
    pub fn new(tolerance: f64) -> Self {
        VerificationReport {
            entries: Vec::new(),
            tolerance,
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Records a check; it passes iff `violation ≤ tolerance`. NaN never passes.
    pub fn record(
        &mut self,
        check: impl Into<String>,
        reference: impl Into<String>,
        violation: f64,
        radius: u32,
    ) -> bool {
        let pass = violation <= self.tolerance;
        self.entries.push(CheckResult {
            check: check.into(),
            reference: reference.into(),
            violation,
            radius,
            pass,
        });
        pass
    }

    /// Records a check whose outcome is decided elsewhere (e.g. "violation must be positive").
    pub fn record_with(
        &mut self,
        check: impl Into<String>,
        reference: impl Into<String>,
        violation: f64,
        radius: u32,
        pass: bool,
    ) {
        self.entries.push(CheckResult {
            check: check.into(),
            reference: reference.into(),
            violation,
            radius,
            pass,
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    /// Appends `other` with every check name prefixed by `prefix`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: VerificationReport) {
        self.entries.extend(other.entries.into_iter().map(|mut e| {
            e.check = format!("{prefix}{}", e.check);
            e
        }));
    }

    pub fn entries(&self) -> &[CheckResult] {
        &self.entries
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn find(&self, check: &str) -> Option<&CheckResult> {
        self.entries.iter().find(|e| e.check == check)
    }

    /// Entries whose name starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckResult> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.check.starts_with(prefix))
    }

    pub fn max_violation(&self) -> f64 {
        self.entries.iter().map(|e| e.violation).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
