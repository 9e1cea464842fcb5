use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// A value stated by the theory being checked.
    Paper,
    /// A textbook fact.
    Trivial,
    /// Computed independently (closed formula or a second engine path).
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub provenance: Provenance,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub claims: Vec<Claim>,
    pub elapsed_ms: u64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        VerificationReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            claims: Vec::new(),
            elapsed_ms: 0,
            pass: true,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    /// Records a claim that passes when the displayed values agree.
    pub fn claim(
        &mut self,
        name: impl Into<String>,
        expected: impl Display,
        actual: impl Display,
        provenance: Provenance,
    ) -> bool {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let pass = expected == actual;
        self.push(name.into(), expected, actual, provenance, pass)
    }

    /// Records a claim whose expected value is `true`.
    pub fn check(&mut self, name: impl Into<String>, holds: bool, provenance: Provenance) -> bool {
        self.claim(name, true, holds, provenance)
    }

    fn push(
        &mut self,
        name: String,
        expected: String,
        actual: String,
        provenance: Provenance,
        pass: bool,
    ) -> bool {
        self.claims.push(Claim {
            name,
            expected,
            actual,
            provenance,
            pass,
        });
        self.pass &= pass;
        pass
    }

    pub fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_millis() as u64;
        self.pass = self.claims.iter().all(|c| c.pass);
        self
    }

    /// One line per claim, marked ✓ or ✗.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} [{}]\n",
            self.check,
            if self.pass { "pass" } else { "FAIL" }
        );
        for c in &self.claims {
            let mark = if c.pass { '✓' } else { '✗' };
            if c.expected == c.actual {
                out.push_str(&format!("  {mark} {}: {}\n", c.name, c.actual));
            } else {
                out.push_str(&format!(
                    "  {mark} {}: expected {}, got {}\n",
                    c.name, c.expected, c.actual
                ));
            }
        }
        out.push_str(&format!("  ({} ms)\n", self.elapsed_ms));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = VerificationReport::new("demo");
        r.param("p", 61);
        r.claim("order", 60, 60, Provenance::Paper);
        r.check("primitive", false, Provenance::Derived);
        let r = r.finish(Instant::now());
        assert!(!r.pass);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"provenance\":\"PAPER\""));
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(r
            .to_text()
            .contains("✗ primitive: expected true, got false"));
    }
}
