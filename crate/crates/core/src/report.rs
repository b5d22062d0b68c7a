//! Structured verdicts of verification runs.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
        })
    }
}

/// How exhaustive the verification was.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Constant coefficients: checking basis combinations is a proof.
    ExactBasis,
    /// Polynomial coefficients: identities checked over the function field
    /// on basis sections plus random polynomial multiples.
    SampledPolynomial,
}

/// One named sub-condition of a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub regime: Regime,
    pub conditions: Vec<Condition>,
    pub witnesses: Vec<String>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            verdict: Verdict::Pass,
            regime: Regime::ExactBasis,
            conditions: Vec::new(),
            witnesses: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    /// Records a sub-condition; a failing one turns the verdict to FAIL and
    /// stores `witness` (evaluated lazily).
    pub fn condition(&mut self, name: impl Into<String>, holds: bool, witness: impl FnOnce() -> String) -> bool {
        let name = name.into();
        if !holds {
            self.verdict = Verdict::Fail;
            self.witnesses.push(format!("{name}: {}", witness()));
        }
        self.conditions.push(Condition { name, holds });
        holds
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        let w = w.into();
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(witness.into());
    }

    /// Marks the check vacuous unless it has already failed.
    pub fn vacuous(&mut self, reason: impl Into<String>) {
        if self.verdict != Verdict::Fail {
            self.verdict = Verdict::Vacuous;
        }
        self.notes.push(reason.into());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Weakens the regime when a sub-check was only sampled.
    pub fn merge_regime(&mut self, regime: Regime) {
        if regime == Regime::SampledPolynomial {
            self.regime = Regime::SampledPolynomial;
        }
    }

    /// Folds a sub-report in as a single condition.
    pub fn absorb(&mut self, sub: &CheckReport) -> bool {
        self.merge_regime(sub.regime);
        for w in &sub.warnings {
            self.warn(w.clone());
        }
        let holds = sub.verdict != Verdict::Fail;
        self.conditions.push(Condition {
            name: sub.check.clone(),
            holds,
        });
        if !holds {
            self.verdict = Verdict::Fail;
            for w in &sub.witnesses {
                self.witnesses.push(format!("{}: {w}", sub.check));
            }
        }
        holds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<32} {}", self.check, self.verdict)?;
        for w in &self.witnesses {
            write!(f, "\n    witness: {w}")?;
        }
        for w in &self.warnings {
            write!(f, "\n    warning: {w}")?;
        }
        Ok(())
    }
}
