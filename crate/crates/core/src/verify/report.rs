//! Check records and report rendering (JSON and CSV).

use serde::Serialize;

use crate::error::{Error, Result};

/// Final state of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to the parameters; does not count as a failure.
    Skipped,
}

/// One row of a report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// Name of the identity or property being checked.
    pub anchor: String,
    pub params: String,
    pub lhs_mag: f64,
    pub rhs_mag: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub cancellation: f64,
    pub pass: bool,
    pub millis: u64,
    pub status: Status,
    pub note: String,
}

/// A full verification run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub precision: u32,
    pub tolerance: f64,
    pub checks: Vec<CheckRecord>,
}

/// Output format of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Input(format!("unknown format '{s}' (json or csv)"))),
        }
    }
}

impl Report {
    /// Assembles a report with checks sorted by id.
    pub fn new(precision: u32, tolerance: f64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Self { precision, tolerance, checks }
    }

    /// Number of checks with the given status.
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// Whether no check failed.
    pub fn all_passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// The checks that failed.
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        format!(
            "{} checks: {} passed, {} failed, {} skipped",
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Flat CSV with one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,anchor,params,lhs_mag,rhs_mag,residual,tolerance,cancellation,pass,millis,status,note\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skipped => "skipped",
            };
            let row = [
                csv_field(&c.check_id),
                csv_field(&c.anchor),
                csv_field(&c.params),
                format!("{:e}", c.lhs_mag),
                format!("{:e}", c.rhs_mag),
                format!("{:e}", c.residual),
                format!("{:e}", c.tolerance),
                format!("{:e}", c.cancellation),
                c.pass.to_string(),
                c.millis.to_string(),
                status.to_string(),
                csv_field(&c.note),
            ];
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Quotes a CSV field when it contains a delimiter, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, status: Status) -> CheckRecord {
        CheckRecord {
            check_id: id.into(),
            anchor: "x".into(),
            params: "q=0.5, a=0.3".into(),
            lhs_mag: 1.0,
            rhs_mag: 1.0,
            residual: 0.0,
            tolerance: 1e-25,
            cancellation: 1.0,
            pass: status == Status::Pass,
            millis: 0,
            status,
            note: String::new(),
        }
    }

    #[test]
    fn sorted_and_counted() {
        let r = Report::new(40, 1e-25, vec![rec("b", Status::Pass), rec("a", Status::Skipped), rec("c", Status::Fail)]);
        assert_eq!(r.checks[0].check_id, "a");
        assert!(!r.all_passed());
        assert_eq!(r.summary(), "3 checks: 1 passed, 1 failed, 1 skipped");
    }

    #[test]
    fn json_has_required_fields_and_csv_quotes() {
        let r = Report::new(40, 1e-25, vec![rec("a", Status::Pass)]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let c = &v["checks"][0];
        for k in ["check_id", "anchor", "params", "lhs_mag", "rhs_mag", "residual", "cancellation", "pass", "millis"] {
            assert!(!c[k].is_null(), "missing {k}");
        }
        assert!(r.to_csv().lines().nth(1).unwrap().contains("\"q=0.5, a=0.3\""));
    }
}
