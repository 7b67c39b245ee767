use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use qcv_core::{CheckReport, Status};
use serde::Serialize;

use crate::params::Mode;

/// Bumped whenever a field of the JSON report changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    command: &'a str,
    status: Status,
    config: &'a BTreeMap<String, String>,
    reports: &'a [CheckReport],
}

/// The reports of one invocation.
pub struct Outcome {
    config: BTreeMap<String, String>,
    reports: Vec<CheckReport>,
    cap: u32,
}

impl Outcome {
    pub fn new(mode: &Mode, cap: u32) -> Self {
        let (q, t) = mode.describe();
        let mut config = BTreeMap::new();
        config.insert("q".into(), q);
        config.insert("t".into(), t);
        Self {
            config,
            reports: Vec::new(),
            cap,
        }
    }

    pub fn config(&mut self, key: &str, v: impl Display) {
        self.config.insert(key.into(), v.to_string());
    }

    /// Clamp a requested degree to `QCV_MAX_DEGREE`, echoing both.
    pub fn cap_degree(&mut self, d: u32) -> u32 {
        let used = d.min(self.cap);
        if used != d {
            self.config("degree_requested", d);
            self.config("max_degree", self.cap);
        }
        self.config("degree", used);
        used
    }

    /// Run one check and record it with its wall time.
    pub fn check(&mut self, f: impl FnOnce() -> CheckReport) {
        let start = Instant::now();
        let mut rep = f();
        rep.elapsed = Some(start.elapsed());
        self.reports.push(rep);
    }

    /// Record a report computed elsewhere, with its wall time.
    pub fn record(&mut self, mut rep: CheckReport, elapsed: std::time::Duration) {
        rep.elapsed = Some(elapsed);
        self.reports.push(rep);
    }

    /// A check that could not be carried out counts as failed.
    pub fn failed(&mut self, name: &str, err: impl Display) {
        let mut rep = CheckReport::new(name);
        rep.residual("error", err.to_string());
        self.reports.push(rep);
    }

    pub fn status(&self) -> Status {
        if self.reports.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else if self.reports.iter().any(|r| r.status == Status::Partial)
            || self.reports.is_empty()
        {
            Status::Partial
        } else {
            Status::Pass
        }
    }

    pub fn to_json(&self, command: &str) -> String {
        let doc = Document {
            schema_version: SCHEMA_VERSION,
            command,
            status: self.status(),
            config: &self.config,
            reports: &self.reports,
        };
        serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self, command: &str) -> String {
        let mut s = format!("qcv {command}: {}\n", self.status());
        for (k, v) in &self.config {
            s.push_str(&format!("  {k} = {v}\n"));
        }
        for r in &self.reports {
            s.push_str(&r.to_string());
        }
        s
    }

    /// Print, optionally write JSON, and map the status to the exit code.
    pub fn finish(
        self,
        command: &str,
        json: Option<&Path>,
        timing: bool,
    ) -> Result<ExitCode, String> {
        print!("{}", self.to_text(command));
        if timing {
            for r in &self.reports {
                if let Some(e) = r.elapsed {
                    eprintln!("{}: {} ms", r.name, e.as_millis());
                }
            }
        }
        if let Some(path) = json {
            std::fs::write(path, self.to_json(command))
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        Ok(if self.status() == Status::Pass {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        })
    }
}
