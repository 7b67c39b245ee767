//! Uniform result type for every verifier.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Partial,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Partial => "partial",
        })
    }
}

/// A nonzero residual together with where it was found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub location: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub residuals: Vec<Residual>,
    /// Computed quantities worth echoing (dimensions, scalars, counts).
    pub details: BTreeMap<String, serde_json::Value>,
    pub config: BTreeMap<String, String>,
    /// Wall time; excluded from serialized output so reports stay reproducible.
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

/// Residual lists are capped so a badly broken input does not produce a
/// gigantic report; the count is kept in `details`.
pub const MAX_RESIDUALS: usize = 32;

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            residuals: Vec::new(),
            details: BTreeMap::new(),
            config: BTreeMap::new(),
            elapsed: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record a nonzero residual; the report becomes a failure.
    pub fn residual(&mut self, location: impl Into<String>, value: impl Into<String>) {
        self.status = Status::Fail;
        let n = self
            .details
            .get("residual_count")
            .and_then(|v| v.as_u64())
            .unwrap_or(0)
            + 1;
        self.details.insert("residual_count".into(), n.into());
        if self.residuals.len() < MAX_RESIDUALS {
            self.residuals.push(Residual {
                location: location.into(),
                value: value.into(),
            });
        }
    }

    /// Mark as partial unless already failed.
    pub fn partial(&mut self, why: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Partial;
        }
        self.details
            .insert("partial_reason".into(), why.into().into());
    }

    pub fn detail(&mut self, key: impl Into<String>, v: impl Into<serde_json::Value>) -> &mut Self {
        self.details.insert(key.into(), v.into());
        self
    }

    pub fn config(&mut self, key: impl Into<String>, v: impl fmt::Display) -> &mut Self {
        self.config.insert(key.into(), v.to_string());
        self
    }

    /// Fold a sub-check into this report, prefixing its residual locations.
    pub fn absorb(&mut self, sub: &CheckReport) {
        for r in &sub.residuals {
            self.residual(format!("{}: {}", sub.name, r.location), r.value.clone());
        }
        if sub.status == Status::Fail && sub.residuals.is_empty() {
            self.status = Status::Fail;
        }
        if sub.status == Status::Partial {
            self.partial(format!("{} is partial", sub.name));
        }
    }

    pub fn timed<T>(mut self, f: impl FnOnce(&mut Self) -> T) -> (Self, T) {
        let start = std::time::Instant::now();
        let out = f(&mut self);
        self.elapsed = Some(start.elapsed());
        (self, out)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, self.status)?;
        for (k, v) in &self.details {
            writeln!(f, "  {k} = {v}")?;
        }
        for r in &self.residuals {
            writeln!(f, "  residual at {}: {}", r.location, r.value)?;
        }
        Ok(())
    }
}
