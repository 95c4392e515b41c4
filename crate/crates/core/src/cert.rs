//! Certificates: named lists of pass/fail clauses with residuals and
//! tolerances, plus the manifest embedded in every emitted artifact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Serializes non-finite residuals as `null`.
mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub clause: String,
    pub pass: bool,
    #[serde(with = "finite_or_null")]
    pub residual: f64,
    pub tolerance: f64,
    pub probe_count: usize,
    /// Informational clauses are reported but do not decide the verdict.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Clause {
    /// A clause passing when `residual <= tolerance`.
    pub fn bounded(name: impl Into<String>, residual: f64, tolerance: f64, probe_count: usize) -> Clause {
        Clause {
            clause: name.into(),
            pass: residual <= tolerance,
            residual,
            tolerance,
            probe_count,
            informational: false,
            note: None,
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool, residual: f64, tolerance: f64, probe_count: usize) -> Clause {
        Clause {
            clause: name.into(),
            pass,
            residual,
            tolerance,
            probe_count,
            informational: false,
            note: None,
        }
    }

    pub fn info(name: impl Into<String>, note: impl Into<String>) -> Clause {
        Clause {
            clause: name.into(),
            pass: true,
            residual: 0.0,
            tolerance: 0.0,
            probe_count: 0,
            informational: true,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Clause {
        self.note = Some(note.into());
        self
    }

    pub fn informational(mut self) -> Clause {
        self.informational = true;
        self
    }
}

/// How the probe tables of a certificate were drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub seed: u64,
    pub basis_members: usize,
    pub random_combinations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    /// False when a precondition failed; clauses are still computed.
    pub applicable: bool,
    pub clauses: Vec<Clause>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<ProbeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl Certificate {
    pub fn new(name: impl Into<String>) -> Certificate {
        Certificate {
            name: name.into(),
            applicable: true,
            clauses: Vec::new(),
            probes: None,
            manifest: None,
        }
    }

    pub fn push(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }

    /// Appends another certificate's clauses, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Certificate) {
        self.applicable &= other.applicable;
        for mut c in other.clauses {
            c.clause = format!("{prefix}.{}", c.clause);
            self.clauses.push(c);
        }
        if self.probes.is_none() {
            self.probes = other.probes;
        }
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.clause == name)
    }

    /// Applicable and every decisive clause passes.
    pub fn passes(&self) -> bool {
        self.applicable && self.failing().next().is_none()
    }

    pub fn failing(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.informational && !c.pass)
    }

    /// Fixed-width text table, one clause per line.
    pub fn render_table(&self) -> String {
        let width = self.clauses.iter().map(|c| c.clause.len()).max().unwrap_or(6).max(6);
        let mut out = format!(
            "{} ({})\n{:<width$}  {:<6}  {:>12}  {:>10}  {:>6}\n",
            self.name,
            if self.applicable { "applicable" } else { "not applicable" },
            "clause",
            "status",
            "residual",
            "tolerance",
            "probes",
        );
        for c in &self.clauses {
            let status = match (c.informational, c.pass) {
                (true, _) => "info",
                (false, true) => "pass",
                (false, false) => "FAIL",
            };
            out.push_str(&format!(
                "{:<width$}  {:<6}  {:>12.3e}  {:>10.1e}  {:>6}\n",
                c.clause, status, c.residual, c.tolerance, c.probe_count
            ));
        }
        out
    }
}

/// Command, parameters, seed, version, and tolerances of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub tool_version: String,
    pub tolerances: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, seed: u64) -> RunManifest {
        RunManifest {
            command: command.into(),
            parameters: BTreeMap::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_ignores_informational_clauses() {
        let mut c = Certificate::new("t");
        c.push(Clause::bounded("a", 1e-13, 1e-12, 3));
        c.push(Clause::info("b", "out of scope"));
        assert!(c.passes());
        c.push(Clause::bounded("c", 0.5, 1e-12, 3));
        assert!(!c.passes());
        assert_eq!(c.failing().count(), 1);
        c.clauses.pop();
        c.applicable = false;
        assert!(!c.passes());
    }

    #[test]
    fn infinite_residual_round_trips_as_null() {
        let c = Clause::bounded("x", f64::INFINITY, 1.0, 0);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"residual\":null"));
        let back: Clause = serde_json::from_str(&s).unwrap();
        assert_eq!(back.residual, f64::INFINITY);
        assert!(!back.pass);
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut outer = Certificate::new("outer");
        let mut inner = Certificate::new("inner");
        inner.push(Clause::bounded("norm", 0.0, 1e-10, 0));
        outer.absorb("gce", inner);
        assert!(outer.clause("gce.norm").is_some());
    }
}
