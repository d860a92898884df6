//! Run reports: a human-readable section and a flat `key = value` summary.

use std::fmt::Write as _;
use std::time::Duration;

use fracbilevel::expr::BilevelProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Supported,
    Violated,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Supported => "SUPPORTED",
            Status::Violated => "VIOLATED",
            Status::Skipped => "SKIPPED",
        }
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Supported)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub key: String,
    pub status: Status,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub command: String,
    pub problem: String,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
    pub assumptions: Vec<(String, String)>,
    pub resolutions: Vec<(String, f64)>,
    /// Extra machine-readable values, in insertion order.
    pub values: Vec<(String, String)>,
    pub certificates: Vec<String>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub timings: Vec<(String, Duration)>,
    pub error: Option<String>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        Self { command: command.to_string(), seed, ..Self::default() }
    }

    pub fn verdict(&mut self, key: impl Into<String>, status: Status, reason: impl Into<String>) {
        self.verdicts.push(Verdict { key: key.into(), status, reason: reason.into() });
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.push((key.into(), value.to_string()));
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn time(&mut self, step: &str, d: Duration) {
        self.timings.push((step.to_string(), d));
    }

    /// Records the problem name, grid resolutions and the unverified assumption flags.
    pub fn describe_problem(&mut self, prob: &BilevelProblem) {
        self.problem = prob.name.clone();
        for (name, boxes) in [("x", &prob.x_box), ("y", &prob.y_box), ("theta", &prob.theta)] {
            for (i, iv) in boxes.iter().enumerate() {
                let key = if boxes.len() == 1 { name.to_string() } else { format!("{name}{}", i + 1) };
                self.resolutions.push((key, iv.step));
            }
        }
        let flag = |v: Option<bool>| match v {
            Some(true) => "asserted true, not verified".to_string(),
            Some(false) => "asserted false".to_string(),
            None => "not asserted, not verified".to_string(),
        };
        self.assumptions.push(("pos_xi_closed".into(), flag(prob.assertions.pos_xi_closed)));
        self.assumptions.push(("star_shaped".into(), flag(prob.assertions.star_shaped)));
        self.assumptions.push((
            "continuity_cone".into(),
            if prob.cone.is_some() { "declared".into() } else { "not declared, full space used".into() },
        ));
        self.assumptions.push(("theta".into(), if prob.theta_declared { "declared".into() } else { "default y box +/- 1".into() }));
    }

    pub fn all_ok(&self) -> bool {
        self.verdicts.iter().all(|v| v.status.is_ok() || v.status == Status::Skipped)
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {} :: {} ==", self.command, if self.problem.is_empty() { "-" } else { &self.problem });
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        for v in &self.verdicts {
            let _ = writeln!(s, "[{:<9}] {}: {}", v.status.label(), v.key, v.reason);
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                let _ = writeln!(s, "{n}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        if !self.assumptions.is_empty() {
            let _ = writeln!(s, "\nassumptions:");
            for (k, v) in &self.assumptions {
                let _ = writeln!(s, "  {k}: {v}");
            }
        }
        if !self.resolutions.is_empty() {
            let grid: Vec<String> = self.resolutions.iter().map(|(k, v)| format!("{k} {v}")).collect();
            let _ = writeln!(s, "grid steps: {}", grid.join(", "));
        }
        for c in &self.certificates {
            let _ = write!(s, "\n{c}");
        }
        if !self.timings.is_empty() {
            let t: Vec<String> = self.timings.iter().map(|(k, d)| format!("{k} {:.3} s", d.as_secs_f64())).collect();
            let _ = writeln!(s, "\ntiming: {}", t.join(", "));
        }
        let _ = writeln!(s, "seed: {}", self.seed);
        s
    }

    /// Deterministic summary; contains no timing.
    pub fn machine(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: &str| {
            let _ = writeln!(s, "{k} = {}", v.replace('\n', " "));
        };
        kv("command", &self.command);
        kv("problem", &self.problem);
        kv("seed", &self.seed.to_string());
        kv("exit_code", &self.exit_code.to_string());
        if let Some(e) = &self.error {
            kv("error", e);
        }
        for (k, v) in &self.resolutions {
            kv(&format!("grid.{k}.step"), &v.to_string());
        }
        for (k, v) in &self.assumptions {
            kv(&format!("assumption.{k}"), v);
        }
        for v in &self.verdicts {
            kv(&format!("verdict.{}", v.key), v.status.label());
            kv(&format!("verdict.{}.reason", v.key), &v.reason);
        }
        for (k, v) in &self.values {
            kv(k, v);
        }
        for (i, w) in self.warnings.iter().enumerate() {
            kv(&format!("warning.{}", i + 1), w);
        }
        s
    }
}
