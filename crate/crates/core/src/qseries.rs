//! q-shifted factorials, Jacobi θ-functions and basic hypergeometric series.
//!
//! The plain-`Complex` functions (`*_cx`) are the workhorses used by the
//! higher layers; the [`ScaledValue`] wrappers form the public value API.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::scalar::{cx, CancellationMetric, Precision, ScaledValue, GUARD_BITS};

/// Immutable evaluation context: the base `q ∈ (0,1)` and the working precision.
#[derive(Debug, Clone)]
pub struct QContext {
    q: Float,
    precision: Precision,
    bits: u32,
    ln_q: f64,
}

impl QContext {
    /// Context for a base given as an `f64` (taken as an exact binary value).
    pub fn new(q: f64, precision: Precision) -> Result<Self> {
        Self::from_float(Float::with_val(53, q), precision)
    }

    /// Context for a base given as a decimal literal, rounded once at working precision.
    pub fn parse(q: &str, precision: Precision) -> Result<Self> {
        let v = crate::scalar::parse_real(precision.bits(), q)?;
        Self::from_float(v, precision)
    }

    /// Context for a base given as an MPFR value (taken as exact).
    pub fn from_float(q: Float, precision: Precision) -> Result<Self> {
        if !(q > 0 && q < 1) {
            return Err(Error::Input(format!("q must lie in (0,1), got {}", q.to_f64())));
        }
        let bits = precision.bits();
        let ln_q = q.to_f64().ln();
        let q = Float::with_val(bits.max(q.prec()), q);
        Ok(Self { q, precision, bits, ln_q })
    }

    /// Same base, different working precision (the stored base is promoted exactly).
    pub fn with_bits(&self, bits: u32) -> Self {
        Self { q: Float::with_val(bits.max(self.q.prec()), &self.q), precision: self.precision, bits, ln_q: self.ln_q }
    }

    /// Same base with `extra` additional bits.
    pub fn escalated(&self, extra: u32) -> Self {
        self.with_bits(self.bits + extra)
    }

    /// Same base at a new decimal precision.
    pub fn with_precision(&self, precision: Precision) -> Self {
        let mut c = self.with_bits(precision.bits());
        c.precision = precision;
        c
    }

    /// The base `q`.
    pub fn q(&self) -> &Float {
        &self.q
    }

    /// The base `q` as a complex number at working precision.
    pub fn q_cx(&self) -> Complex {
        Complex::with_val(self.bits, (&self.q, 0))
    }

    /// Requested decimal precision.
    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Working precision in bits.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `ln q` as an `f64`.
    pub fn ln_q_f64(&self) -> f64 {
        self.ln_q
    }

    /// `q^k` at working precision.
    pub fn qpow(&self, k: i64) -> Float {
        let k32 = i32::try_from(k).expect("q-exponent out of i32 range");
        Float::with_val(self.bits, (&self.q).pow(k32))
    }

    /// `q^k` as a complex number.
    pub fn qpow_cx(&self, k: i64) -> Complex {
        Complex::with_val(self.bits, (self.qpow(k), 0))
    }

    /// Default relative accuracy target: the working precision minus half the guard bits.
    pub fn target_tol(&self) -> f64 {
        2f64.powi(-((self.bits - GUARD_BITS / 2) as i32))
    }

    /// Tolerance used for exact lattice-membership tests.
    pub fn lattice_tol_log2(&self) -> i32 {
        -((self.bits as i32) - 24)
    }

    /// A real value as a complex at working precision.
    pub fn real(&self, v: f64) -> Complex {
        cx(self.bits, v)
    }

    /// Promotes a complex value to working precision.
    pub fn cx(&self, z: &Complex) -> Complex {
        Complex::with_val(self.bits, z)
    }
}

/// If `x = q^j` for an integer `j` (within rounding), returns `j`.
pub fn q_lattice_index(ctx: &QContext, x: &Complex) -> Option<i64> {
    if x.real().is_zero() || !x.real().is_finite() || x.real().is_sign_negative() {
        return None;
    }
    let re = x.real();
    let tol_log2 = ctx.lattice_tol_log2();
    let im = Float::with_val(64, x.imag().abs_ref());
    if !im.is_zero() {
        let rel = Float::with_val(64, &im / re);
        if rel.get_exp().map_or(false, |e| e > tol_log2) {
            return None;
        }
    }
    let (m, e) = Float::with_val(64, re).to_f64_exp();
    let ln_x = m.ln() + f64::from(e) * std::f64::consts::LN_2;
    let jf = (ln_x / ctx.ln_q_f64()).round();
    if !jf.is_finite() || jf.abs() > 1.0e7 {
        return None;
    }
    let j = jf as i64;
    let target = ctx.qpow(j);
    let diff = Float::with_val(ctx.bits(), re - &target);
    if diff.is_zero() {
        return Some(j);
    }
    let rel = Float::with_val(64, &diff / &target);
    match rel.get_exp() {
        Some(e) if e <= tol_log2 => Some(j),
        _ => None,
    }
}

/// If `x = q^{-n}` for `n ≥ 0`, returns `n`.
pub fn q_neg_index(ctx: &QContext, x: &Complex) -> Option<u64> {
    q_lattice_index(ctx, x).and_then(|j| if j <= 0 { Some((-j) as u64) } else { None })
}

/// `(x;q)_n` for `n ≥ 0` as a plain complex number.
pub fn qpoch_cx(ctx: &QContext, x: &Complex, n: u64) -> Complex {
    let bits = ctx.bits();
    if n == 0 {
        return cx(bits, 1.0);
    }
    if let Some(j) = q_neg_index(ctx, x) {
        if j < n {
            return Complex::new(bits);
        }
    }
    let mut term = Complex::with_val(bits, x);
    if x.imag().is_zero() {
        let mut prod = Float::with_val(bits, 1);
        let mut t = Float::with_val(bits, x.real());
        for _ in 0..n {
            prod *= Float::with_val(bits, 1 - &t);
            t *= ctx.q();
        }
        return Complex::with_val(bits, (prod, 0));
    }
    let mut prod = cx(bits, 1.0);
    for _ in 0..n {
        prod *= Complex::with_val(bits, 1 - &term);
        term *= ctx.q();
    }
    prod
}

/// `(x;q)_n` for any integer `n`, using `(x;q)_{-n} = 1/(xq^{-n};q)_n`.
pub fn qpoch_int_cx(ctx: &QContext, x: &Complex, n: i64) -> Result<Complex> {
    if n >= 0 {
        return Ok(qpoch_cx(ctx, x, n as u64));
    }
    let shifted = Complex::with_val(ctx.bits(), x * ctx.qpow(n));
    let den = qpoch_cx(ctx, &shifted, (-n) as u64);
    if den.is_zero() {
        return Err(Error::Pole(format!("(x;q)_{n} has a vanishing denominator")));
    }
    Ok(Complex::with_val(ctx.bits(), 1 / den))
}

/// `(x;q)_∞` as a plain complex number.
pub fn qpoch_inf_cx(ctx: &QContext, x: &Complex) -> Complex {
    let bits = ctx.bits();
    if x.is_zero() {
        return cx(bits, 1.0);
    }
    if q_neg_index(ctx, x).is_some() {
        return Complex::new(bits);
    }
    // Stop once |x q^k| drops below 2^{-bits-8} (1-q): the remaining tail factor is 1 to working precision.
    let stop_log2 = -(bits as i32) - 8 + (1.0 - ctx.q().to_f64()).log2().floor() as i32;
    if x.imag().is_zero() {
        let mut prod = Float::with_val(bits, 1);
        let mut t = Float::with_val(bits, x.real());
        loop {
            prod *= Float::with_val(bits, 1 - &t);
            t *= ctx.q();
            if t.is_zero() || t.get_exp().map_or(true, |e| e < stop_log2) {
                break;
            }
        }
        return Complex::with_val(bits, (prod, 0));
    }
    let mut prod = cx(bits, 1.0);
    let mut t = Complex::with_val(bits, x);
    loop {
        prod *= Complex::with_val(bits, 1 - &t);
        t *= ctx.q();
        let mag = Float::with_val(32, t.abs_ref());
        if mag.is_zero() || mag.get_exp().map_or(true, |e| e < stop_log2) {
            break;
        }
    }
    prod
}

/// Product `∏ (x_i;q)_∞`.
pub fn qpoch_inf_prod_cx(ctx: &QContext, xs: &[Complex]) -> Complex {
    let mut p = cx(ctx.bits(), 1.0);
    for x in xs {
        p *= qpoch_inf_cx(ctx, x);
    }
    p
}

/// `θ(x) = (x, q/x;q)_∞` as a plain complex number.
pub fn theta_cx(ctx: &QContext, x: &Complex) -> Result<Complex> {
    if x.is_zero() {
        return Err(Error::Domain("theta(0) is undefined".into()));
    }
    let qx = Complex::with_val(ctx.bits(), ctx.q() / x);
    Ok(Complex::with_val(ctx.bits(), qpoch_inf_cx(ctx, x) * qpoch_inf_cx(ctx, &qx)))
}

/// Product `∏ θ(x_i)`.
pub fn theta_prod_cx(ctx: &QContext, xs: &[Complex]) -> Result<Complex> {
    let mut p = cx(ctx.bits(), 1.0);
    for x in xs {
        p *= theta_cx(ctx, x)?;
    }
    Ok(p)
}

/// `(x;q)_n` as a scaled value.
pub fn qpoch_finite(ctx: &QContext, x: &Complex, n: u64) -> Result<ScaledValue> {
    ScaledValue::from_complex(ctx, qpoch_cx(ctx, x, n))
}

/// `(x;q)_∞` as a scaled value.
pub fn qpoch_infinite(ctx: &QContext, x: &Complex) -> Result<ScaledValue> {
    ScaledValue::from_complex(ctx, qpoch_inf_cx(ctx, x))
}

/// `θ(x)` as a scaled value.
pub fn theta(ctx: &QContext, x: &Complex) -> Result<ScaledValue> {
    ScaledValue::from_complex(ctx, theta_cx(ctx, x)?)
}

/// `θ(x_1, …, x_m)`; the empty product is `1`.
pub fn theta_product(ctx: &QContext, xs: &[Complex]) -> Result<ScaledValue> {
    ScaledValue::from_complex(ctx, theta_prod_cx(ctx, xs)?)
}

/// `(x_1, …, x_m;q)_n`, with `n = None` meaning `n = ∞`.
pub fn qpoch_product(ctx: &QContext, xs: &[Complex], n: Option<u64>) -> Result<ScaledValue> {
    let p = match n {
        Some(n) => xs.iter().fold(cx(ctx.bits(), 1.0), |acc, x| acc * qpoch_cx(ctx, x, n)),
        None => qpoch_inf_prod_cx(ctx, xs),
    };
    ScaledValue::from_complex(ctx, p)
}

/// Parameters of a basic hypergeometric series `rφs(upper; lower; q, z)`.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub upper: Vec<Complex>,
    pub lower: Vec<Complex>,
    pub z: Complex,
}

impl SeriesSpec {
    /// Creates a series specification.
    pub fn new(upper: Vec<Complex>, lower: Vec<Complex>, z: Complex) -> Self {
        Self { upper, lower, z }
    }
}

/// Truncation and conditioning diagnostics for a summed series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    /// Bound on the neglected tail relative to the sum (0 for terminating series).
    pub tail_bound: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Whether the series terminated on an upper parameter in `q^{-ℕ}`.
    pub terminating: bool,
    /// `max |partial sum| / |sum|`.
    pub cancellation: CancellationMetric,
    /// Precision (bits) of the final summation pass.
    pub bits_used: u32,
}

const MAX_TERMS: usize = 200_000;
const SMALL_RUN: usize = 5;

/// Sums `rφs` with certified truncation and returns a scaled value.
pub fn rphis(ctx: &QContext, spec: &SeriesSpec, tol: f64) -> Result<(ScaledValue, ErrorEstimate)> {
    let (v, e) = rphis_cx(ctx, spec, tol)?;
    Ok((ScaledValue::from_complex(ctx, v)?, e))
}

/// Sums `rφs` with certified truncation.
pub fn rphis_cx(ctx: &QContext, spec: &SeriesSpec, tol: f64) -> Result<(Complex, ErrorEstimate)> {
    rphis_regularized_cx(ctx, spec, &[], tol)
}

/// Sums `∏_{i∈reg} (lower_i;q)_∞ · rφs(...)` term by term, so lower parameters
/// listed in `reg` may lie in `q^{-ℕ}`.
pub fn rphis_regularized(ctx: &QContext, spec: &SeriesSpec, reg: &[usize], tol: f64) -> Result<(ScaledValue, ErrorEstimate)> {
    let (v, e) = rphis_regularized_cx(ctx, spec, reg, tol)?;
    Ok((ScaledValue::from_complex(ctx, v)?, e))
}

/// Plain-complex version of [`rphis_regularized`].
///
/// When the cancellation metric shows that more than half of the guard bits
/// were lost, the sum is recomputed once at a precision raised by the number
/// of lost bits (input parameters are treated as exact).
pub fn rphis_regularized_cx(ctx: &QContext, spec: &SeriesSpec, reg: &[usize], tol: f64) -> Result<(Complex, ErrorEstimate)> {
    let tol = tol.max(2f64.powi(-(ctx.bits() as i32)));
    let (mut value, mut est) = sum_series(ctx, spec, reg, tol)?;
    let mut work = ctx.clone();
    for _ in 0..2 {
        let lost = est.cancellation.0.log2();
        if !lost.is_finite() || lost <= f64::from(GUARD_BITS / 2) {
            break;
        }
        let needed = ctx.bits() + lost.ceil() as u32 + 16;
        if work.bits() >= needed {
            break;
        }
        work = ctx.with_bits(needed);
        let promoted = SeriesSpec {
            upper: spec.upper.iter().map(|u| work.cx(u)).collect(),
            lower: spec.lower.iter().map(|l| work.cx(l)).collect(),
            z: work.cx(&spec.z),
        };
        let (v, e) = sum_series(&work, &promoted, reg, tol)?;
        value = v;
        est = e;
    }
    Ok((Complex::with_val(ctx.bits(), value), est))
}

fn log2_abs(z: &Complex) -> f64 {
    let m = Float::with_val(32, z.abs_ref());
    if m.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (f, e) = m.to_f64_exp();
    f.log2() + f64::from(e)
}

fn sum_series(ctx: &QContext, spec: &SeriesSpec, reg: &[usize], tol: f64) -> Result<(Complex, ErrorEstimate)> {
    let bits = ctx.bits();
    let r = spec.upper.len() as i64;
    let s = spec.lower.len() as i64;
    let sign_pow = 1 + s - r;
    for &i in reg {
        if i >= spec.lower.len() {
            return Err(Error::Input(format!("regularized index {i} out of range")));
        }
    }
    let is_reg = |i: usize| reg.contains(&i);

    // Termination index from upper parameters in q^{-N}.
    let n_term: Option<u64> = spec.upper.iter().filter_map(|u| q_neg_index(ctx, u)).min();
    // First index where regularized factors stop vanishing.
    let mut k0: u64 = 0;
    for (i, l) in spec.lower.iter().enumerate() {
        if let Some(j) = q_neg_index(ctx, l) {
            if is_reg(i) {
                k0 = k0.max(j + 1);
            } else if n_term.map_or(true, |n| n > j) {
                return Err(Error::Domain(format!(
                    "lower parameter {i} lies in q^(-N) (q^-{j}) and the series does not terminate before it"
                )));
            }
        }
    }
    let reg_factor = |k: u64| -> Complex {
        let mut p = cx(bits, 1.0);
        for &i in reg {
            let shifted = Complex::with_val(bits, &spec.lower[i] * ctx.qpow(k as i64));
            p *= qpoch_inf_cx(ctx, &shifted);
        }
        p
    };
    if let Some(n) = n_term {
        if n < k0 {
            return Ok((
                Complex::new(bits),
                ErrorEstimate { tail_bound: 0.0, terms: 0, terminating: true, cancellation: CancellationMetric::NONE, bits_used: bits },
            ));
        }
    } else {
        if sign_pow < 0 {
            return Err(Error::Convergence(format!("{r}phi{s} with r > s+1 diverges unless it terminates")));
        }
        if sign_pow == 0 && log2_abs(&spec.z) >= -1e-12 {
            return Err(Error::Convergence(format!("{r}phi{s} requires |z| < 1 (|z| = {})", crate::scalar::abs_f64(&spec.z))));
        }
    }

    // Initial term at k0.
    let mut term = if k0 == 0 {
        reg_factor(0)
    } else {
        let k0i = k0 as i64;
        let mut t = cx(bits, 1.0);
        for u in &spec.upper {
            t *= qpoch_cx(ctx, u, k0);
        }
        let mut den = qpoch_cx(ctx, &ctx.q_cx(), k0);
        for (i, l) in spec.lower.iter().enumerate() {
            if !is_reg(i) {
                den *= qpoch_cx(ctx, l, k0);
            }
        }
        t /= den;
        t *= crate::scalar::powi(&spec.z, k0i);
        if sign_pow != 0 {
            let e = k0i * (k0i - 1) / 2 * sign_pow;
            t *= ctx.qpow(e);
            if (k0i * sign_pow) % 2 != 0 {
                t = -t;
            }
        }
        t * reg_factor(k0)
    };

    let mut sum = Complex::with_val(bits, &term);
    let mut max_log2 = log2_abs(&sum);
    let mut qk = ctx.qpow(k0 as i64);
    let mut k = k0;
    let mut terms = 1usize;
    let mut small_run = 0usize;
    let mut prev_log2 = log2_abs(&term);
    let tol_log2 = tol.log2();
    let mut tail_bound = 0.0;
    let terminating = n_term.is_some();
    let one = Float::with_val(bits, 1);
    loop {
        if let Some(n) = n_term {
            if k >= n {
                break;
            }
        }
        if term.is_zero() {
            break;
        }
        // ratio T_{k+1}/T_k
        let mut num = Complex::with_val(bits, &spec.z);
        for u in &spec.upper {
            num *= Complex::with_val(bits, 1 - Complex::with_val(bits, u * &qk));
        }
        let qk1 = Float::with_val(bits, &qk * ctx.q());
        let mut den = Complex::with_val(bits, (Float::with_val(bits, &one - &qk1), 0));
        for l in spec.lower.iter() {
            den *= Complex::with_val(bits, 1 - Complex::with_val(bits, l * &qk));
        }
        if sign_pow != 0 {
            let p = Float::with_val(bits, (&qk).pow(sign_pow as i32));
            num *= p;
            if sign_pow % 2 != 0 {
                num = -num;
            }
        }
        if den.is_zero() {
            return Err(Error::Domain("vanishing denominator inside series".into()));
        }
        term *= num;
        term /= den;
        sum += &term;
        qk = qk1;
        k += 1;
        terms += 1;
        let t_log2 = log2_abs(&term);
        let s_log2 = log2_abs(&sum);
        if s_log2 > max_log2 {
            max_log2 = s_log2;
        }
        if !terminating {
            if t_log2 < s_log2 + tol_log2 || term.is_zero() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            let ratio_log2 = t_log2 - prev_log2;
            if term.is_zero() {
                break;
            }
            if small_run >= SMALL_RUN && ratio_log2 < 0.0 {
                let rho = 2f64.powf(ratio_log2);
                tail_bound = 2f64.powf(t_log2 - s_log2) * rho / (1.0 - rho);
                break;
            }
            if terms > MAX_TERMS {
                return Err(Error::Convergence(format!("series not converged after {MAX_TERMS} terms")));
            }
        }
        prev_log2 = t_log2;
    }
    let final_log2 = log2_abs(&sum);
    let cancellation = if final_log2 == f64::NEG_INFINITY {
        if max_log2 == f64::NEG_INFINITY {
            CancellationMetric::NONE
        } else {
            CancellationMetric(f64::INFINITY)
        }
    } else {
        CancellationMetric(2f64.powf((max_log2 - final_log2).max(0.0)))
    };
    Ok((sum, ErrorEstimate { tail_bound, terms, terminating, cancellation, bits_used: bits }))
}
