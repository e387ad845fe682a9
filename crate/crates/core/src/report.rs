//! Report structures shared by the verification suites and the CLI. A
//! report serializes to one JSON document per run; the canonical payload
//! (what must be byte-identical across reruns at a fixed seed) excludes
//! wall time.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        })
    }
}

#[derive(Clone, Serialize)]
pub struct Entry {
    pub check_id: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    pub measured: Value,
    pub status: Status,
}

impl Entry {
    #[allow(clippy::new_ret_no_self)]
    pub fn new(check_id: impl Into<String>, inputs: &[&str]) -> EntryBuilder {
        EntryBuilder {
            check_id: check_id.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            expected: None,
        }
    }
}

pub struct EntryBuilder {
    check_id: String,
    inputs: Vec<String>,
    expected: Option<Value>,
}

impl EntryBuilder {
    pub fn expected(mut self, v: Value) -> Self {
        self.expected = Some(v);
        self
    }

    /// Finish with an explicit status.
    pub fn status(self, measured: Value, status: Status) -> Entry {
        Entry {
            check_id: self.check_id,
            inputs: self.inputs,
            expected: self.expected,
            measured,
            status,
        }
    }

    /// Finish with pass/fail decided by the caller's predicate result.
    pub fn judged(self, measured: Value, ok: bool) -> Entry {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.status(measured, status)
    }

    pub fn info(self, measured: Value) -> Entry {
        self.status(measured, Status::Info)
    }
}

/// Tolerances pinned for a run; serialized into every report.
#[derive(Clone, Serialize)]
pub struct Tolerances {
    pub membership: f64,
    pub closure_residual: f64,
    pub basis_independence: f64,
    pub positivity: f64,
    pub snake: f64,
    pub dagger: f64,
    pub leak_floor: f64,
    pub noise_ceiling: f64,
}

impl Tolerances {
    pub fn with_membership(tol: f64) -> Self {
        Tolerances {
            membership: tol,
            closure_residual: 1e-8,
            basis_independence: 1e-10,
            positivity: 1e-10,
            snake: 1e-9,
            dagger: 1e-11,
            leak_floor: 1e-3,
            noise_ceiling: 1e-8,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::with_membership(crate::DEFAULT_TOL)
    }
}

#[derive(Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub entries: Vec<Entry>,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Seconds; excluded from the canonical payload.
    pub wall_time: f64,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64, tolerances: Tolerances) -> Self {
        Report { suite: suite.into(), entries: Vec::new(), seed, tolerances, wall_time: 0.0 }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, es: Vec<Entry>) {
        self.entries.extend(es);
    }

    pub fn fail_count(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn all_pass(&self) -> bool {
        self.fail_count() == 0
    }

    /// Full JSON document, wall time included (serialized last).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Deterministic payload: identical bytes for identical seed/tol runs.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.wall_time = 0.0;
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# suite: {}\n\n", self.suite));
        s.push_str(&format!(
            "seed {} · membership tol {:.1e} · {} entries · {} fail\n\n",
            self.seed,
            self.tolerances.membership,
            self.entries.len(),
            self.fail_count()
        ));
        s.push_str("| check | inputs | expected | measured | status |\n");
        s.push_str("|---|---|---|---|---|\n");
        for e in &self.entries {
            let expected = e
                .expected
                .as_ref()
                .map(compact)
                .unwrap_or_else(|| "—".to_string());
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                e.check_id,
                e.inputs.join(", "),
                expected,
                compact(&e.measured),
                e.status
            ));
        }
        s
    }
}

fn compact(v: &Value) -> String {
    let s = serde_json::to_string(v).unwrap_or_default();
    // Markdown cells must not contain pipes.
    s.replace('|', "\\|")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_payload_ignores_wall_time_and_is_stable() {
        let mut r1 = Report::new("demo", 7, Tolerances::default());
        r1.push(
            Entry::new("dim", &["R2", "R2"])
                .expected(json!(10))
                .judged(json!({"dim": 10, "residual": 1.0e-12}), true),
        );
        r1.wall_time = 1.25;
        let mut r2 = r1.clone();
        r2.wall_time = 99.0;
        assert_eq!(r1.canonical_json(), r2.canonical_json());
        assert_ne!(r1.to_json(), r2.to_json());
        assert!(r1.all_pass());
        // wall_time serializes after the stable fields
        let j = r1.to_json();
        assert!(j.rfind("wall_time").unwrap() > j.rfind("tolerances").unwrap());
    }

    #[test]
    fn markdown_table_lists_entries_with_status() {
        let mut r = Report::new("demo", 0, Tolerances::default());
        r.push(Entry::new("a", &["X"]).judged(json!(1), true));
        r.push(Entry::new("b", &["Y"]).judged(json!(2), false));
        r.push(Entry::new("c", &["Z"]).info(json!("observed")));
        let md = r.to_markdown();
        assert!(md.contains("| a | X | — | 1 | pass |"));
        assert!(md.contains("| b | Y | — | 2 | fail |"));
        assert!(md.contains("| c | Z | — | \"observed\" | info |"));
        assert_eq!(r.fail_count(), 1);
    }
}
