//! Identity suites, their configuration and the report they produce.
//!
//! Every suite expands into independent [`Check`]s: a closure comparing a
//! summation-side quantity with an independently evaluated closed form (or
//! with zero). Checks run on a worker pool and the report is sorted by id,
//! so output is deterministic for a given configuration.

pub mod config;
pub mod report;
mod suites;

use std::time::Instant;

use rayon::prelude::*;
use rug::Complex;

use crate::error::{Error, Result};
use crate::scalar::abs_f64;

pub use config::{parse_suite_list, ParamSpec, SuiteConfig, SuiteName, DEFAULT_CONFIG};
pub use report::{CheckRecord, Format, Report, Status};

/// Result of evaluating one check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub lhs_mag: f64,
    pub rhs_mag: f64,
    pub residual: f64,
    pub cancellation: f64,
    pub note: String,
    /// Reason the check does not apply, if any.
    pub skipped: Option<String>,
}

impl Outcome {
    /// `|lhs − rhs| / max(|lhs|, |rhs|, scale)`.
    pub fn compare(lhs: &Complex, rhs: &Complex, scale: f64) -> Self {
        let (l, r) = (abs_f64(lhs), abs_f64(rhs));
        let diff = abs_f64(&Complex::with_val(lhs.prec().0.max(rhs.prec().0), lhs - rhs));
        let denom = l.max(r).max(scale);
        let residual = if denom == 0.0 { 0.0 } else { diff / denom };
        Self::from_residual(residual, l, r)
    }

    /// A quantity that must vanish, judged against the magnitude of its summands.
    pub fn vanishes(value: &Complex, scale: f64) -> Self {
        let v = abs_f64(value);
        let residual = if scale > 0.0 { v / scale } else { v };
        Self { cancellation: if v > 0.0 { scale / v } else { f64::INFINITY }, ..Self::from_residual(residual, v, 0.0) }
    }

    /// A precomputed residual.
    pub fn from_residual(residual: f64, lhs_mag: f64, rhs_mag: f64) -> Self {
        Self { lhs_mag, rhs_mag, residual, cancellation: 1.0, note: String::new(), skipped: None }
    }

    /// The worst of several outcomes (largest residual), keeping its magnitudes.
    pub fn worst(items: impl IntoIterator<Item = Outcome>) -> Self {
        items
            .into_iter()
            .fold(None::<Outcome>, |acc, o| match acc {
                Some(a) if !(o.residual > a.residual) => Some(Outcome { cancellation: a.cancellation.max(o.cancellation), ..a }),
                Some(a) => Some(Outcome { cancellation: a.cancellation.max(o.cancellation), ..o }),
                None => Some(o),
            })
            .unwrap_or_else(|| Self::from_residual(0.0, 0.0, 0.0))
    }

    /// A check that does not apply to the parameters.
    pub fn skipped(reason: impl Into<String>) -> Self {
        Self { skipped: Some(reason.into()), ..Self::from_residual(0.0, 0.0, 0.0) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn with_cancellation(mut self, c: f64) -> Self {
        self.cancellation = self.cancellation.max(c);
        self
    }
}

type Job = Box<dyn Fn() -> Result<Outcome> + Send + Sync>;

/// One executable check.
pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub params: String,
    pub tolerance: f64,
    job: Job,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: &'static str, params: impl Into<String>, tolerance: f64, job: impl Fn() -> Result<Outcome> + Send + Sync + 'static) -> Self {
        Self { id: id.into(), anchor, params: params.into(), tolerance, job: Box::new(job) }
    }

    /// Runs the check and records the outcome.
    pub fn run(&self) -> CheckRecord {
        let start = Instant::now();
        let out = (self.job)();
        let millis = start.elapsed().as_millis() as u64;
        let base = |status: Status, o: &Outcome, note: String| CheckRecord {
            check_id: self.id.clone(),
            anchor: self.anchor.to_string(),
            params: self.params.clone(),
            lhs_mag: o.lhs_mag,
            rhs_mag: o.rhs_mag,
            residual: o.residual,
            tolerance: self.tolerance,
            cancellation: o.cancellation,
            pass: status != Status::Fail,
            millis,
            status,
            note,
        };
        match out {
            Ok(o) => match &o.skipped {
                Some(reason) => base(Status::Skipped, &o, reason.clone()),
                None => {
                    let ok = o.residual.is_finite() && o.residual <= self.tolerance;
                    base(if ok { Status::Pass } else { Status::Fail }, &o, o.note.clone())
                }
            },
            Err(e) => {
                let o = Outcome::from_residual(f64::INFINITY, f64::NAN, f64::NAN);
                base(Status::Fail, &o, e.to_string())
            }
        }
    }
}

/// Expands the configured suites into checks.
pub fn build_checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let mut checks = Vec::new();
    for suite in &cfg.suites {
        checks.extend(suites::build(*suite, cfg)?);
    }
    let mut ids: Vec<&str> = checks.iter().map(|c| c.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Input(format!("duplicate check id {}", w[0])));
    }
    Ok(checks)
}

/// Runs the configured suites on `jobs` worker threads (0 = all cores).
pub fn run(cfg: &SuiteConfig, jobs: usize) -> Result<Report> {
    let checks = build_checks(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Error::Input(format!("worker pool: {e}")))?;
    let records = pool.install(|| checks.par_iter().map(Check::run).collect::<Vec<_>>());
    Ok(Report::new(cfg.precision, cfg.tolerance, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn outcome_residuals() {
        let o = Outcome::compare(&cx(64, 1.0), &cx(64, 1.0 + 1e-12), 0.0);
        assert!((o.residual - 1e-12).abs() < 1e-15);
        let v = Outcome::vanishes(&cx(64, 1e-30), 1.0);
        assert_eq!(v.residual, 1e-30);
        let w = Outcome::worst([Outcome::from_residual(1e-3, 1.0, 1.0), Outcome::from_residual(1e-2, 2.0, 2.0)]);
        assert_eq!(w.residual, 1e-2);
    }

    #[test]
    fn errors_fail_and_skips_pass() {
        let c = Check::new("x", "a", "p", 1e-20, || Err(Error::Domain("boom".into())));
        let r = c.run();
        assert_eq!(r.status, Status::Fail);
        assert!(r.note.contains("boom"));
        let s = Check::new("y", "a", "p", 1e-20, || Ok(Outcome::skipped("n/a"))).run();
        assert_eq!(s.status, Status::Skipped);
        assert!(s.pass);
    }
}
