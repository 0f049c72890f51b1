use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub canonical_hash: String,
}

/// Feeds formatted text straight into a SHA-256 state, so large
/// rational functions never have to be materialized as strings.
struct HashWriter(Sha256);

impl fmt::Write for HashWriter {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        self.0.update(s.as_bytes());
        Ok(())
    }
}

impl Check {
    /// `payload` is the computed object the check is about; it enters the
    /// hash together with name, status and detail.
    pub fn with_status(
        name: impl Into<String>,
        status: Status,
        detail: impl Into<String>,
        payload: impl fmt::Display,
    ) -> Check {
        let name = name.into();
        let detail = detail.into();
        let mut h = HashWriter(Sha256::new());
        write!(h, "{name}\n{status}\n{detail}\n{payload}").expect("hashing cannot fail");
        Check {
            name,
            status,
            detail,
            canonical_hash: hex::encode(h.0.finalize()),
        }
    }

    pub fn new(
        name: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
        payload: impl fmt::Display,
    ) -> Check {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check::with_status(name, status, detail, payload)
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(
        command: &str,
        params: BTreeMap<String, Value>,
        mut checks: Vec<Check>,
        elapsed_ms: u64,
    ) -> Report {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            command: command.to_string(),
            params,
            checks,
            elapsed_ms,
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{}  {}  {}", c.status, c.name, c.detail);
        }
        let _ = writeln!(
            out,
            "{}: {} passed, {} failed, {} skipped in {} ms",
            self.command,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped),
            self.elapsed_ms
        );
        out
    }
}

/// Builds the `params` map from `(key, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
