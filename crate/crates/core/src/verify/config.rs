//! Suite configuration: a flat `key = value` text format with repeated
//! `param-set NAME` blocks.
//!
//! ```text
//! precision = 40
//! tolerance = 1e-25
//! suites = lemma21, meixner-poly
//!
//! param-set case-ii
//! q = 0.5
//! a = 0.3
//! b = 0.2
//! t_plus = 1
//! t_minus = -1
//! c = 0.02
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::meixner::Params;
use crate::scalar::Precision;

/// The built-in default configuration.
pub const DEFAULT_CONFIG: &str = include_str!("../../../../configs/default.cfg");

/// The identity suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    QseriesIdentities,
    Lemma21,
    FiniteFamily,
    MeixnerPoly,
    MeixnerFunction,
    Spectral,
    Section5,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::QseriesIdentities,
        SuiteName::Lemma21,
        SuiteName::FiniteFamily,
        SuiteName::MeixnerPoly,
        SuiteName::MeixnerFunction,
        SuiteName::Spectral,
        SuiteName::Section5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::QseriesIdentities => "qseries-identities",
            SuiteName::Lemma21 => "lemma21",
            SuiteName::FiniteFamily => "finite-family",
            SuiteName::MeixnerPoly => "meixner-poly",
            SuiteName::MeixnerFunction => "meixner-function",
            SuiteName::Spectral => "spectral",
            SuiteName::Section5 => "section5",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s.trim())
            .ok_or_else(|| Error::Input(format!("unknown suite '{}'", s.trim())))
    }
}

/// Parses a comma-separated suite list.
pub fn parse_suite_list(s: &str) -> Result<Vec<SuiteName>> {
    let mut out: Vec<SuiteName> = s.split(',').filter(|x| !x.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Input("empty suite list".into()));
    }
    Ok(out)
}

/// One named parameter set, kept as text so it can be re-parsed at any precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: String,
    pub q: String,
    pub a: String,
    pub b: String,
    pub t_plus: String,
    pub t_minus: String,
    /// Lemma parameter `c`; the lemma suite skips the `c ≠ 0` variants without it.
    pub c: Option<String>,
}

impl ParamSpec {
    /// Builds the validated parameter bundle at the given precision (with `c` attached).
    pub fn build(&self, precision: Precision) -> Result<Params> {
        let p = Params::parse(&self.q, &self.a, &self.b, &self.t_plus, &self.t_minus, precision)?;
        match &self.c {
            Some(c) => {
                let cv = crate::scalar::parse_complex(p.bits(), c)?;
                Ok(p.with_c(cv))
            }
            None => Ok(p),
        }
    }

    /// Compact `key=value` rendering for reports.
    pub fn describe(&self) -> String {
        let mut s = format!("{}: q={} a={} b={} t+={} t-={}", self.name, self.q, self.a, self.b, self.t_plus, self.t_minus);
        if let Some(c) = &self.c {
            s.push_str(&format!(" c={c}"));
        }
        s
    }
}

/// Everything a suite run needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub params: Vec<ParamSpec>,
    pub suites: Vec<SuiteName>,
    pub tolerance: f64,
    pub precision: u32,
    /// Seed of the random instances.
    pub seed: u64,
    /// Number of random instances per battery check.
    pub random_instances: usize,
    /// Second anchor `t` at which Gram matrices are recomputed.
    pub alt_t: String,
    /// Highest polynomial degree in Gram matrices of `m_n`.
    pub gram_n: u64,
    /// Highest degree in the finite family.
    pub finite_n: u64,
    /// `c = ab q^{finite_c_power}` in the finite family.
    pub finite_c_power: i64,
    /// Spectral points `−q^n`, `0 ≤ n < spectral_n`.
    pub spectral_n: i64,
    /// Spectral points `q^k/(abt)`, `|k| ≤ spectral_k`.
    pub spectral_k: i64,
    /// Highest index of the indefinite families.
    pub section5_n: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            params: Vec::new(),
            suites: SuiteName::ALL.to_vec(),
            tolerance: 1e-25,
            precision: 40,
            seed: 20_240_521,
            random_instances: 100,
            alt_t: "0.7".into(),
            gram_n: 6,
            finite_n: 4,
            finite_c_power: 8,
            spectral_n: 6,
            spectral_k: 3,
            section5_n: 2,
        }
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Input(format!("line {line}: invalid value '{v}' for '{key}'")))
}

impl SuiteConfig {
    /// The built-in configuration.
    pub fn default_config() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("built-in configuration is valid")
    }

    /// Parses and validates a configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SuiteConfig::default();
        let mut current: Option<(usize, String, Vec<(usize, String, String)>)> = None;
        let mut blocks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix("param-set") {
                let name = name.trim();
                if name.is_empty() {
                    return Err(Error::Input(format!("line {line_no}: param-set needs a name")));
                }
                if let Some(b) = current.take() {
                    blocks.push(b);
                }
                current = Some((line_no, name.to_string(), Vec::new()));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim().replace('-', "_"), v.trim().to_string()))
                .ok_or_else(|| Error::Input(format!("line {line_no}: expected 'key = value'")))?;
            if value.is_empty() {
                return Err(Error::Input(format!("line {line_no}: empty value for '{key}'")));
            }
            match &mut current {
                Some((_, _, entries)) => entries.push((line_no, key, value)),
                None => cfg.set_global(line_no, &key, &value)?,
            }
        }
        if let Some(b) = current.take() {
            blocks.push(b);
        }
        for (line_no, name, entries) in blocks {
            cfg.params.push(param_block(line_no, name, entries)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set_global(&mut self, line: usize, key: &str, v: &str) -> Result<()> {
        match key {
            "precision" => self.precision = parse_num(line, key, v)?,
            "tolerance" | "tol" => self.tolerance = parse_num(line, key, v)?,
            "suites" => self.suites = parse_suite_list(v)?,
            "seed" => self.seed = parse_num(line, key, v)?,
            "random_instances" => self.random_instances = parse_num(line, key, v)?,
            "alt_t" => self.alt_t = v.to_string(),
            "gram_n" => self.gram_n = parse_num(line, key, v)?,
            "finite_n" => self.finite_n = parse_num(line, key, v)?,
            "finite_c_power" => self.finite_c_power = parse_num(line, key, v)?,
            "spectral_n" => self.spectral_n = parse_num(line, key, v)?,
            "spectral_k" => self.spectral_k = parse_num(line, key, v)?,
            "section5_n" => self.section5_n = parse_num(line, key, v)?,
            _ => return Err(Error::Input(format!("line {line}: unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Checks ranges and that every parameter set is valid at the configured precision.
    pub fn validate(&self) -> Result<()> {
        let precision = Precision::new(self.precision)?;
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Input("tolerance must be positive".into()));
        }
        let floor = 10f64.powi(-(self.precision as i32 - 8));
        if self.tolerance < floor {
            return Err(Error::Input(format!("tolerance {:e} is below 10^-(precision-8) = {floor:e}", self.tolerance)));
        }
        if self.params.is_empty() {
            return Err(Error::Input("no param-set blocks".into()));
        }
        if self.spectral_n < 1 || self.spectral_k < 0 || self.section5_n < 0 {
            return Err(Error::Input("spectral window sizes must be non-negative".into()));
        }
        crate::scalar::parse_real(64, &self.alt_t)?;
        let mut names: Vec<&str> = self.params.iter().map(|p| p.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("duplicate param-set names".into()));
        }
        for p in &self.params {
            p.build(precision).map_err(|e| Error::Input(format!("param-set {}: {e}", p.name)))?;
        }
        Ok(())
    }

    /// The working precision.
    pub fn precision(&self) -> Precision {
        Precision::new(self.precision).expect("validated precision")
    }
}

fn param_block(line: usize, name: String, entries: Vec<(usize, String, String)>) -> Result<ParamSpec> {
    let mut fields: [Option<String>; 6] = Default::default();
    const KEYS: [&str; 6] = ["q", "a", "b", "t_plus", "t_minus", "c"];
    for (l, key, value) in entries {
        let idx = KEYS.iter().position(|k| *k == key).ok_or_else(|| Error::Input(format!("line {l}: unknown parameter '{key}'")))?;
        if fields[idx].replace(value).is_some() {
            return Err(Error::Input(format!("line {l}: '{key}' given twice")));
        }
    }
    let [q, a, b, tp, tm, c] = fields;
    let need = |v: Option<String>, k: &str| v.ok_or_else(|| Error::Input(format!("param-set {name} (line {line}): missing '{k}'")));
    Ok(ParamSpec {
        q: need(q, "q")?,
        a: need(a, "a")?,
        b: need(b, "b")?,
        t_plus: tp.unwrap_or_else(|| "1".into()),
        t_minus: tm.unwrap_or_else(|| "-1".into()),
        c,
        name,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_parses() {
        let cfg = SuiteConfig::default_config();
        assert_eq!(cfg.suites.len(), 7);
        assert!(cfg.params.len() >= 5);
        assert_eq!(cfg.precision, 40);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let base = "param-set x\nq = 0.5\na = 0.3\nb = 0.2\n";
        assert!(SuiteConfig::parse(base).is_ok());
        for bad in [
            "precision = forty\n",
            "suites = lemma21, nope\n",
            "what = 1\n",
            "tolerance = 1e-40\n",
            "param-set\nq=0.5\n",
            "param-set y\nq = 0.5\na = 0.3\n",
            "param-set y\nq = 0.5\na = 4\nb = 0.2\nt_minus = -0.7\n",
        ] {
            let text = format!("{bad}{base}");
            assert!(SuiteConfig::parse(&text).is_err(), "accepted: {bad:?}");
        }
        assert!(SuiteConfig::parse("precision = 40\n").is_err());
    }

    #[test]
    fn dashes_and_comments_are_accepted() {
        let cfg = SuiteConfig::parse("gram-n = 3 # small\nparam-set x\nq = 0.5\na = 0.3\nb = 0.2\nt-plus = 0.7\n").unwrap();
        assert_eq!(cfg.gram_n, 3);
        assert_eq!(cfg.params[0].t_plus, "0.7");
    }
}
