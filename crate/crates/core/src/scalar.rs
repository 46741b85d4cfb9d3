//! Configurable-precision complex scalars with explicit power-of-q scaling.
//!
//! All arithmetic is carried out on MPFR/MPC values supplied by `rug`.  A
//! [`ScaledValue`] splits a magnitude into a normalized mantissa and an
//! integer exponent of the context base `q`, which keeps factors such as
//! `q^{k(k-1)/2}` readable and lets callers reason about orders of magnitude
//! in the natural unit of the lattice.

use std::cmp::Ordering;
use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::QContext;

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 64;

/// Largest admissible magnitude of a q-exponent.
pub const MAX_QEXP: i64 = 1_000_000;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Number of significant decimal digits requested for a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    /// Smallest supported precision.
    pub const MIN_DIGITS: u32 = 15;
    /// Precision used when nothing else is requested.
    pub const DEFAULT_DIGITS: u32 = 40;

    /// Creates a precision of `digits` significant decimal digits.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Input(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        if digits > 100_000 {
            return Err(Error::Input(format!("precision of {digits} digits is unreasonably large")));
        }
        Ok(Self { digits })
    }

    /// The requested number of decimal digits.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Working precision in bits, including guard bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// `10^{-digits}`, the nominal relative accuracy.
    pub fn epsilon(&self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { digits: Self::DEFAULT_DIGITS }
    }
}

/// Builds a complex number from a real `f64` at `bits` precision.
pub fn cx(bits: u32, re: f64) -> Complex {
    Complex::with_val(bits, (re, 0.0))
}

/// Builds a complex number from a real MPFR value.
pub fn cx_real(bits: u32, re: &Float) -> Complex {
    Complex::with_val(bits, (re, 0))
}

/// Parses a real or complex literal such as `0.3`, `-1e-2`, `0.3+0.4i` or `-2i`.
pub fn parse_complex(bits: u32, text: &str) -> Result<Complex> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Input("empty number".into()));
    }
    let parse_real = |part: &str| -> Result<Float> {
        let parsed = Float::parse(part).map_err(|e| Error::Input(format!("cannot parse '{part}': {e}")))?;
        Ok(Float::with_val(bits, parsed))
    };
    if let Some(body) = s.strip_suffix(['i', 'j']) {
        // Locate the sign separating real and imaginary parts (not an exponent sign).
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let ch = bytes[idx] as char;
            if (ch == '+' || ch == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        let (re, im) = match split {
            Some(idx) => (parse_real(&body[..idx])?, &body[idx..]),
            None => (Float::with_val(bits, 0), body),
        };
        let im = match im {
            "" | "+" => Float::with_val(bits, 1),
            "-" => Float::with_val(bits, -1),
            other => parse_real(other)?,
        };
        Ok(Complex::with_val(bits, (re, im)))
    } else {
        Ok(Complex::with_val(bits, (parse_real(&s)?, 0)))
    }
}

/// Parses a real literal.
pub fn parse_real(bits: u32, text: &str) -> Result<Float> {
    let z = parse_complex(bits, text)?;
    if !z.imag().is_zero() {
        return Err(Error::Input(format!("expected a real number, got '{text}'")));
    }
    Ok(z.real().clone())
}

/// `|z|` as an `f64` (saturating to `0` or `inf` outside the `f64` range).
pub fn abs_f64(z: &Complex) -> f64 {
    let r = Float::with_val(64, z.abs_ref());
    r.to_f64()
}

/// `log10 |z|`, valid far outside the `f64` range; `-inf` for zero.
pub fn log10_abs(z: &Complex) -> f64 {
    let r = Float::with_val(64, z.abs_ref());
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = r.to_f64_exp();
    m.log10() + f64::from(e) * std::f64::consts::LOG10_2
}

/// Relative distance `|a - b| / max(|a|, |b|, scale)`; zero when all vanish.
pub fn rel_diff(a: &Complex, b: &Complex, scale: f64) -> f64 {
    let prec = a.prec().0.max(b.prec().0);
    let d = abs_f64(&Complex::with_val(prec, a - b));
    let den = abs_f64(a).max(abs_f64(b)).max(scale);
    if den == 0.0 {
        if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        d / den
    }
}

/// Whether `z` is real up to a relative tolerance.
pub fn is_real(z: &Complex, rel_tol: f64) -> bool {
    let im = Float::with_val(64, z.imag().abs_ref()).to_f64();
    im <= rel_tol * abs_f64(z)
}

/// A complex number stored as `mantissa · q^qexp` with `|mantissa| ∈ [1, 1/q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledValue {
    mantissa: Complex,
    qexp: i64,
}

impl ScaledValue {
    /// Exact zero.
    pub fn zero(ctx: &QContext) -> Self {
        Self { mantissa: Complex::new(ctx.bits()), qexp: 0 }
    }

    /// Exact one.
    pub fn one(ctx: &QContext) -> Self {
        Self { mantissa: cx(ctx.bits(), 1.0), qexp: 0 }
    }

    /// `q^k`.
    pub fn qpow(ctx: &QContext, k: i64) -> Result<Self> {
        check_range(k)?;
        Ok(Self { mantissa: cx(ctx.bits(), 1.0), qexp: k })
    }

    /// Normalizes an arbitrary complex value.
    pub fn from_complex(ctx: &QContext, z: Complex) -> Result<Self> {
        Self::normalize(ctx, z, 0)
    }

    /// Normalizes `z · q^qexp`.
    pub fn normalize(ctx: &QContext, z: Complex, qexp: i64) -> Result<Self> {
        let bits = ctx.bits();
        let mut z = Complex::with_val(bits, z);
        if z.is_zero() {
            return Ok(Self::zero(ctx));
        }
        if !(z.real().is_finite() && z.imag().is_finite()) {
            return Err(Error::Domain("non-finite value cannot be normalized".into()));
        }
        let ln_q = ctx.ln_q_f64();
        let mag = Float::with_val(64, z.abs_ref());
        let (m, e) = mag.to_f64_exp();
        let ln_mag = m.ln() + f64::from(e) * std::f64::consts::LN_2;
        let shift = (ln_mag / ln_q).ceil();
        if !shift.is_finite() || shift.abs() > 2.0 * MAX_QEXP as f64 {
            return Err(Error::Range(shift as i64));
        }
        let mut shift = shift as i64;
        z *= ctx.qpow(-shift);
        let one = Float::with_val(bits, 1);
        let inv_q = Float::with_val(bits, 1 / ctx.q());
        for _ in 0..8 {
            let a = Float::with_val(bits, z.abs_ref());
            if a < one {
                z /= ctx.q();
                shift -= 1;
            } else if a >= inv_q {
                z *= ctx.q();
                shift += 1;
            } else {
                break;
            }
        }
        let total = qexp.checked_add(shift).ok_or(Error::Range(i64::MAX))?;
        check_range(total)?;
        Ok(Self { mantissa: z, qexp: total })
    }

    /// The normalized mantissa.
    pub fn mantissa(&self) -> &Complex {
        &self.mantissa
    }

    /// The power of `q` carried by the value.
    pub fn qexp(&self) -> i64 {
        self.qexp
    }

    /// Whether the value is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// The plain complex value `mantissa · q^qexp`.
    pub fn value(&self, ctx: &QContext) -> Complex {
        if self.qexp == 0 {
            return Complex::with_val(ctx.bits(), &self.mantissa);
        }
        Complex::with_val(ctx.bits(), &self.mantissa * ctx.qpow(self.qexp))
    }

    /// `log10 |value|`.
    pub fn log10_abs(&self, ctx: &QContext) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        log10_abs(&self.mantissa) + self.qexp as f64 * ctx.ln_q_f64() / std::f64::consts::LN_10
    }

    /// `|value|` as `f64`.
    pub fn abs_f64(&self, ctx: &QContext) -> f64 {
        10f64.powf(self.log10_abs(ctx))
    }

    /// Whether the value is real to relative tolerance `rel_tol`.
    pub fn is_real(&self, rel_tol: f64) -> bool {
        is_real(&self.mantissa, rel_tol)
    }

    /// Exact-exponent arithmetic on two scaled values.
    pub fn arith(&self, other: &Self, op: ArithOp, ctx: &QContext) -> Result<Self> {
        let bits = ctx.bits();
        match op {
            ArithOp::Mul => {
                if self.is_zero() || other.is_zero() {
                    return Ok(Self::zero(ctx));
                }
                let m = Complex::with_val(bits, &self.mantissa * &other.mantissa);
                Self::normalize(ctx, m, self.qexp.checked_add(other.qexp).ok_or(Error::Range(i64::MAX))?)
            }
            ArithOp::Div => {
                if other.is_zero() {
                    return Err(Error::Domain("division by exact zero".into()));
                }
                if self.is_zero() {
                    return Ok(Self::zero(ctx));
                }
                let m = Complex::with_val(bits, &self.mantissa / &other.mantissa);
                Self::normalize(ctx, m, self.qexp.checked_sub(other.qexp).ok_or(Error::Range(i64::MIN))?)
            }
            ArithOp::Add | ArithOp::Sub => {
                let neg = op == ArithOp::Sub;
                if other.is_zero() {
                    return Ok(self.clone());
                }
                if self.is_zero() {
                    let mut m = Complex::with_val(bits, &other.mantissa);
                    if neg {
                        m = -m;
                    }
                    return Ok(Self { mantissa: m, qexp: other.qexp });
                }
                // The smaller exponent carries the larger magnitude.
                let (base, rest, swap) = if self.qexp <= other.qexp { (self, other, false) } else { (other, self, true) };
                let gap = rest.qexp - base.qexp;
                let mut shifted = Complex::with_val(bits, &rest.mantissa);
                if gap > 0 {
                    if gap as f64 * -ctx.ln_q_f64() > f64::from(bits) * std::f64::consts::LN_2 + 10.0 {
                        shifted = Complex::new(bits);
                    } else {
                        shifted *= ctx.qpow(gap);
                    }
                }
                let m = match (neg, swap) {
                    (false, _) => Complex::with_val(bits, &base.mantissa + &shifted),
                    (true, false) => Complex::with_val(bits, &base.mantissa - &shifted),
                    (true, true) => Complex::with_val(bits, &shifted - &base.mantissa),
                };
                Self::normalize(ctx, m, base.qexp)
            }
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &Self, ctx: &QContext) -> Result<Self> {
        self.arith(other, ArithOp::Add, ctx)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self, ctx: &QContext) -> Result<Self> {
        self.arith(other, ArithOp::Sub, ctx)
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self, ctx: &QContext) -> Result<Self> {
        self.arith(other, ArithOp::Mul, ctx)
    }

    /// `self / other`.
    pub fn div(&self, other: &Self, ctx: &QContext) -> Result<Self> {
        self.arith(other, ArithOp::Div, ctx)
    }

    /// Formats the value with `digits` significant decimal digits.
    pub fn to_string_digits(&self, ctx: &QContext, digits: usize) -> String {
        format_complex(&self.value(ctx), digits)
    }
}

/// Binary arithmetic operation selector for [`ScaledValue::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn check_range(k: i64) -> Result<()> {
    if k.abs() > MAX_QEXP {
        Err(Error::Range(k))
    } else {
        Ok(())
    }
}

/// Formats a complex number as `re`, `re+imi` or `re-imi`.
pub fn format_complex(z: &Complex, digits: usize) -> String {
    let fmt_real = |f: &Float| -> String {
        if f.is_zero() {
            "0".to_string()
        } else {
            f.to_string_radix(10, Some(digits))
        }
    };
    if z.imag().is_zero() {
        fmt_real(z.real())
    } else {
        let im = z.imag();
        let sign = if im.is_sign_negative() { '-' } else { '+' };
        let im_abs = Float::with_val(im.prec(), im.abs_ref());
        format!("{}{}{}i", fmt_real(z.real()), sign, fmt_real(&im_abs))
    }
}

/// Ratio `max |partial| / |final|` used to detect catastrophic cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CancellationMetric(pub f64);

impl CancellationMetric {
    /// No cancellation.
    pub const NONE: Self = Self(1.0);

    /// Metric for a sequence of partial sums (the last entry is the final value).
    pub fn from_partials(ctx: &QContext, partials: &[ScaledValue]) -> Result<Self> {
        let last = partials.last().ok_or_else(|| Error::Input("empty partial-sum sequence".into()))?;
        let max = partials
            .iter()
            .map(|p| p.log10_abs(ctx))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self::from_log10(max, last.log10_abs(ctx)))
    }

    /// Metric from `log10` magnitudes of the largest partial sum and the final sum.
    pub fn from_log10(max_partial: f64, final_value: f64) -> Self {
        if max_partial == f64::NEG_INFINITY {
            return Self::NONE;
        }
        if final_value == f64::NEG_INFINITY {
            return Self(f64::INFINITY);
        }
        Self(10f64.powf((max_partial - final_value).max(0.0)))
    }

    /// Metric from plain magnitudes.
    pub fn from_magnitudes(max_partial: f64, final_value: f64) -> Self {
        if max_partial == 0.0 {
            Self::NONE
        } else if final_value == 0.0 {
            Self(f64::INFINITY)
        } else {
            Self((max_partial / final_value).max(1.0))
        }
    }

    /// Number of decimal digits lost to cancellation.
    pub fn digits_lost(&self) -> f64 {
        self.0.log10().max(0.0)
    }

    /// Whether a caller working at `digits` precision must escalate to meet `tol`.
    pub fn requires_escalation(&self, digits: u32, tol: f64) -> bool {
        self.0 * 10f64.powi(-(digits as i32)) > tol
    }

    /// Combines two metrics by taking the worse one.
    pub fn max(self, other: Self) -> Self {
        match self.0.partial_cmp(&other.0) {
            Some(Ordering::Less) => other,
            _ => self,
        }
    }
}

impl fmt::Display for CancellationMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3e}", self.0)
    }
}

/// `x^k` for an integer `k`, exact in exponent handling.
pub fn powi(z: &Complex, k: i64) -> Complex {
    let prec = z.prec().0;
    if k >= 0 {
        Complex::with_val(prec, z.pow(k as u64))
    } else {
        let inv = Complex::with_val(prec, 1 / z);
        Complex::with_val(prec, inv.pow((-k) as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext {
        QContext::new(0.5, Precision::default()).unwrap()
    }

    #[test]
    fn precision_bits_include_guard() {
        let p = Precision::new(40).unwrap();
        assert_eq!(p.bits(), 133 + GUARD_BITS);
        assert!(Precision::new(10).is_err());
    }

    #[test]
    fn normalization_invariant() {
        let c = ctx();
        for v in [1.0, 0.5, 1024.0, 3.0e-30, -7.25, 1.999] {
            let s = ScaledValue::from_complex(&c, cx(c.bits(), v)).unwrap();
            let m = abs_f64(s.mantissa());
            assert!((1.0..2.0).contains(&m), "mantissa {m} for {v}");
            assert!(rel_diff(&s.value(&c), &cx(c.bits(), v), 0.0) < 1e-50);
        }
    }

    #[test]
    fn exponent_arithmetic() {
        let c = ctx();
        let a = ScaledValue::qpow(&c, 3).unwrap();
        let b = ScaledValue::qpow(&c, -5).unwrap();
        let p = a.mul(&b, &c).unwrap();
        assert_eq!(p.qexp(), -2);
        let one = ScaledValue::one(&c);
        let d = one.div(&ScaledValue::qpow(&c, 10).unwrap(), &c).unwrap();
        assert_eq!(d.value(&c), cx(c.bits(), 1024.0));
        let z = ScaledValue::zero(&c);
        assert_eq!(a.add(&z, &c).unwrap(), a);
        assert!(one.div(&z, &c).is_err());
    }

    #[test]
    fn subtraction_with_cancellation() {
        let c = ctx();
        let x = ScaledValue::from_complex(&c, cx(c.bits(), 1.5)).unwrap();
        let y = ScaledValue::from_complex(&c, cx(c.bits(), 1.25)).unwrap();
        let d = x.sub(&y, &c).unwrap();
        assert_eq!(d.value(&c), cx(c.bits(), 0.25));
        let e = y.sub(&x, &c).unwrap();
        assert_eq!(e.value(&c), cx(c.bits(), -0.25));
    }

    #[test]
    fn range_error_beyond_limit() {
        let c = ctx();
        assert!(ScaledValue::qpow(&c, MAX_QEXP + 1).is_err());
        let big = ScaledValue::qpow(&c, MAX_QEXP).unwrap();
        assert!(big.mul(&ScaledValue::qpow(&c, 5).unwrap(), &c).is_err());
    }

    #[test]
    fn cancellation_metric_cases() {
        let c = ctx();
        let mk = |v: f64| ScaledValue::from_complex(&c, cx(c.bits(), v)).unwrap();
        let eps = 1e-12;
        let m = CancellationMetric::from_partials(&c, &[mk(1.0), mk(1.0 + eps), mk(eps)]).unwrap();
        assert!((m.0 * eps - 1.0).abs() < 1e-6);
        let m = CancellationMetric::from_partials(&c, &[mk(0.5), mk(0.75), mk(0.875)]).unwrap();
        assert!((m.0 - 1.0).abs() < 1e-12);
        let m = CancellationMetric::from_partials(&c, &[mk(3.0), mk(3.0), mk(3.0)]).unwrap();
        assert_eq!(m.0, 1.0);
        let m = CancellationMetric::from_partials(&c, &[mk(1.0), ScaledValue::zero(&c)]).unwrap();
        assert!(m.0.is_infinite());
    }

    #[test]
    fn parse_literals() {
        let z = parse_complex(128, "0.3+0.4i").unwrap();
        assert!((z.real().to_f64() - 0.3).abs() < 1e-15 && (z.imag().to_f64() - 0.4).abs() < 1e-15);
        let z = parse_complex(128, "-2.5e-1-3i").unwrap();
        assert_eq!(z.real().to_f64(), -0.25);
        assert_eq!(z.imag().to_f64(), -3.0);
        let z = parse_complex(128, "-i").unwrap();
        assert_eq!(z.imag().to_f64(), -1.0);
        assert!(parse_complex(128, "abc").is_err());
        assert!(parse_real(128, "1+i").is_err());
    }
}
