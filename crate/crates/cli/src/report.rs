//! Check records, the run report and its two renderings.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Hypotheses did not hold, so nothing was claimed.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The statement being checked.
    pub anchor: String,
    pub hypotheses: bool,
    pub verdict: Verdict,
    pub witness: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, hypotheses: bool, holds: bool, witness: impl Serialize) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            hypotheses,
            verdict: match (hypotheses, holds) {
                (false, _) => Verdict::Vacuous,
                (true, true) => Verdict::Pass,
                (true, false) => Verdict::Fail,
            },
            witness: serde_json::to_value(witness).expect("witness serializes"),
        }
    }

    /// A check whose hypotheses always hold.
    pub fn plain(name: impl Into<String>, anchor: impl Into<String>, holds: bool, witness: impl Serialize) -> Self {
        Check::new(name, anchor, true, holds, witness)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.verdict != Verdict::Fail);
        Report { config, checks, pass }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Human => self.render_human(),
        }
    }

    fn render_human(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}  seed: {}", self.config.command.name(), self.config.seed).unwrap();
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Vacuous => "----",
            };
            writeln!(s, "{tag} {}: {}", c.name, c.anchor).unwrap();
            if c.verdict != Verdict::Vacuous && !c.witness.is_null() {
                writeln!(s, "     {}", c.witness).unwrap();
            }
        }
        writeln!(s, "{}", if self.pass { "overall: pass" } else { "overall: FAIL" }).unwrap();
        s
    }
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
