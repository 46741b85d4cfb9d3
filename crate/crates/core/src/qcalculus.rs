//! Jackson q-integrals, the q-derivative and exact lattice bookkeeping.
//!
//! Integrands receive a [`QPoint`], which carries the ray anchor and the
//! integer exponent in addition to the numeric abscissa, so lattice-aware
//! integrands can evaluate from exact exponents rather than from floats.

use std::cmp::Ordering;

use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::{q_lattice_index, QContext};
use crate::scalar::{abs_f64, ScaledValue};

/// A point `anchor · q^k` on a q-geometric ray.
#[derive(Debug, Clone)]
pub struct QPoint {
    pub anchor: Complex,
    pub k: i64,
    pub x: Complex,
}

impl QPoint {
    fn new(ctx: &QContext, anchor: &Complex, k: i64) -> Self {
        let x = Complex::with_val(ctx.bits(), anchor * ctx.qpow(k));
        Self { anchor: anchor.clone(), k, x }
    }
}

/// Outcome of a Jackson q-integral.
#[derive(Debug, Clone)]
pub struct QIntegralResult {
    /// The integral.
    pub value: ScaledValue,
    /// Certified bound on the neglected tails (absolute).
    pub tail_error: f64,
    /// Number of lattice points summed.
    pub terms_used: usize,
    /// `Σ|terms| / |sum|`, the cancellation suffered by the summation.
    pub cancellation: f64,
    /// `(1-q) Σ |f(x) x|`, the natural magnitude scale of the integral.
    pub abs_scale: f64,
    raw: Complex,
}

impl QIntegralResult {
    /// The integral as a plain complex number.
    pub fn complex(&self) -> &Complex {
        &self.raw
    }

    fn from_parts(ctx: &QContext, raw: Complex, tail_error: f64, terms_used: usize, abs_scale: f64) -> Result<Self> {
        let mag = abs_f64(&raw);
        let cancellation = if abs_scale == 0.0 {
            1.0
        } else if mag == 0.0 {
            f64::INFINITY
        } else {
            (abs_scale / mag).max(1.0)
        };
        Ok(Self { value: ScaledValue::from_complex(ctx, raw.clone())?, tail_error, terms_used, cancellation, abs_scale, raw })
    }

    fn combine(ctx: &QContext, a: &Self, b: &Self, sign: i32) -> Result<Self> {
        let raw = if sign >= 0 {
            Complex::with_val(ctx.bits(), &a.raw + &b.raw)
        } else {
            Complex::with_val(ctx.bits(), &a.raw - &b.raw)
        };
        Self::from_parts(ctx, raw, a.tail_error + b.tail_error, a.terms_used + b.terms_used, a.abs_scale + b.abs_scale)
    }
}

/// Partial sum of `f(αq^k) αq^k` along one direction of a ray.
struct RaySum {
    sum: Complex,
    abs_sum: f64,
    tail: f64,
    terms: usize,
}

const MIN_POS: i64 = 32;
const MIN_NEG: i64 = 8;
const MAX_TERMS: i64 = 20_000;
const SMALL_RUN: usize = 5;

/// Sums `f(αq^k)αq^k` for `k = start, start+dir, …` until the tail is certified.
fn ray_sum<F>(ctx: &QContext, f: &F, anchor: &Complex, start: i64, dir: i64, min_terms: i64, tol: f64) -> Result<RaySum>
where
    F: Fn(&QPoint) -> Result<Complex>,
{
    let bits = ctx.bits();
    let mut sum = Complex::new(bits);
    let mut abs_sum = 0.0f64;
    let mut small_run = 0usize;
    let mut prev = f64::NAN;
    let mut growth_run = 0usize;
    let mut k = start;
    let mut n = 0i64;
    loop {
        let p = QPoint::new(ctx, anchor, k);
        let v = f(&p)?;
        let term = Complex::with_val(bits, v * &p.x);
        let mag = abs_f64(&term);
        if !mag.is_finite() {
            return Err(Error::Convergence(format!("non-finite integrand term at k = {k}")));
        }
        sum += &term;
        abs_sum += mag;
        n += 1;
        if mag <= tol * abs_sum * 0.25 {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if prev.is_finite() && mag > prev && mag > tol * abs_sum {
            growth_run += 1;
        } else {
            growth_run = 0;
        }
        if growth_run > 64 {
            return Err(Error::Convergence(format!("integrand terms grow along the ray (k = {k})")));
        }
        if n >= min_terms && small_run >= SMALL_RUN {
            let tail = if mag == 0.0 {
                0.0
            } else if prev > 0.0 && mag < prev {
                let rho = mag / prev;
                mag * rho / (1.0 - rho)
            } else {
                f64::INFINITY
            };
            if tail <= tol * abs_sum * 0.25 || (mag == 0.0 && prev == 0.0) {
                let bound = if tail.is_finite() { tail } else { 0.0 };
                let omq = Float::with_val(bits, 1 - ctx.q());
                let w = omq.to_f64();
                return Ok(RaySum { sum: Complex::with_val(bits, &sum * &omq), abs_sum: abs_sum * w, tail: bound * w, terms: n as usize });
            }
        }
        if n > MAX_TERMS {
            return Err(Error::Convergence(format!("q-integral not converged after {MAX_TERMS} terms")));
        }
        prev = mag;
        k += dir;
    }
}

/// `∫_0^α f(x) d_qx = (1-q) Σ_{k≥0} f(αq^k) αq^k`.
pub fn qint_zero_to<F>(ctx: &QContext, f: F, alpha: &Complex, tol: f64) -> Result<QIntegralResult>
where
    F: Fn(&QPoint) -> Result<Complex>,
{
    if alpha.is_zero() {
        return Err(Error::Domain("q-integral endpoint must be nonzero".into()));
    }
    let s = ray_sum(ctx, &f, alpha, 0, 1, MIN_POS, tol)?;
    QIntegralResult::from_parts(ctx, s.sum, s.tail, s.terms, s.abs_sum)
}

/// `∫_0^{∞(α)} f(x) d_qx = (1-q) Σ_{k∈ℤ} f(αq^k) αq^k`.
///
/// The window starts at `k ∈ [-8, 32]` and each side is extended until its
/// certified tail is below `tol/4` of the accumulated magnitude.
pub fn qint_bilateral<F>(ctx: &QContext, f: F, alpha: &Complex, tol: f64) -> Result<QIntegralResult>
where
    F: Fn(&QPoint) -> Result<Complex>,
{
    if alpha.is_zero() {
        return Err(Error::Domain("q-integral anchor must be nonzero".into()));
    }
    let pos = ray_sum(ctx, &f, alpha, 0, 1, MIN_POS, tol)?;
    let neg = ray_sum(ctx, &f, alpha, -1, -1, MIN_NEG, tol)?;
    let raw = Complex::with_val(ctx.bits(), &pos.sum + &neg.sum);
    QIntegralResult::from_parts(ctx, raw, pos.tail + neg.tail, pos.terms + neg.terms, pos.abs_sum + neg.abs_sum)
}

/// Finite-sum convention `∫_{βq^l}^{β} f(x) d_qx = (1-q) Σ_{k=0}^{l-1} f(βq^k) βq^k`;
/// negative `l` reverses the orientation.
pub fn qint_finite<F>(ctx: &QContext, f: F, beta: &Complex, l: i64) -> Result<QIntegralResult>
where
    F: Fn(&QPoint) -> Result<Complex>,
{
    let bits = ctx.bits();
    let (lo, hi, sign) = if l >= 0 { (0, l, 1) } else { (l, 0, -1) };
    let mut sum = Complex::new(bits);
    let mut abs_sum = 0.0;
    for k in lo..hi {
        let p = QPoint::new(ctx, beta, k);
        let term = Complex::with_val(bits, f(&p)? * &p.x);
        abs_sum += abs_f64(&term);
        sum += term;
    }
    let one_minus_q = Float::with_val(bits, 1 - ctx.q());
    sum *= &one_minus_q;
    if sign < 0 {
        sum = -sum;
    }
    QIntegralResult::from_parts(ctx, sum, 0.0, (hi - lo) as usize, abs_sum * one_minus_q.to_f64())
}

/// `∫_α^β f(x) d_qx = ∫_0^β − ∫_0^α`, summed as a finite sum when `α/β ∈ q^ℤ`.
pub fn qint_between<F>(ctx: &QContext, f: F, alpha: &Complex, beta: &Complex, tol: f64) -> Result<QIntegralResult>
where
    F: Fn(&QPoint) -> Result<Complex>,
{
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::Domain("q-integral endpoints must be nonzero".into()));
    }
    let ratio = Complex::with_val(ctx.bits(), alpha / beta);
    if let Some(l) = q_lattice_index(ctx, &ratio) {
        return qint_finite(ctx, f, beta, l);
    }
    let b = qint_zero_to(ctx, &f, beta, tol)?;
    let a = qint_zero_to(ctx, &f, alpha, tol)?;
    QIntegralResult::combine(ctx, &b, &a, -1)
}

/// `∫_β^{∞(α)} f(x) d_qx = ∫_0^{∞(α)} − ∫_0^β`.
pub fn qint_to_inf<F>(ctx: &QContext, f: F, beta: &Complex, alpha: &Complex, tol: f64) -> Result<QIntegralResult>
where
    F: Fn(&QPoint) -> Result<Complex>,
{
    let full = qint_bilateral(ctx, &f, alpha, tol)?;
    let head = qint_zero_to(ctx, &f, beta, tol)?;
    QIntegralResult::combine(ctx, &full, &head, -1)
}

/// `∫_{∞(β)}^{∞(α)} f(x) d_qx = ∫_0^{∞(α)} − ∫_0^{∞(β)}`.
pub fn qint_inf_to_inf<F>(ctx: &QContext, f: F, beta: &Complex, alpha: &Complex, tol: f64) -> Result<QIntegralResult>
where
    F: Fn(&QPoint) -> Result<Complex>,
{
    let a = qint_bilateral(ctx, &f, alpha, tol)?;
    let b = qint_bilateral(ctx, &f, beta, tol)?;
    QIntegralResult::combine(ctx, &a, &b, -1)
}

/// `D_q f(x) = (f(x) − f(qx)) / ((1−q)x)`.
pub fn qderiv<F>(ctx: &QContext, f: F, x: &Complex) -> Result<ScaledValue>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    ScaledValue::from_complex(ctx, qderiv_cx(ctx, f, x)?)
}

/// Plain-complex version of [`qderiv`].
pub fn qderiv_cx<F>(ctx: &QContext, f: F, x: &Complex) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    if x.is_zero() {
        return Err(Error::Domain("q-derivative at x = 0".into()));
    }
    let qx = Complex::with_val(ctx.bits(), x * ctx.q());
    let num = Complex::with_val(ctx.bits(), f(x)? - f(&qx)?);
    let den = Complex::with_val(ctx.bits(), x * Float::with_val(ctx.bits(), 1 - ctx.q()));
    Ok(Complex::with_val(ctx.bits(), num / den))
}

/// Branch of the lattice `−q^ℕ ∪ t₊q^ℤ ∪ t₋q^ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    /// `−q^k`, `k ≥ 0`.
    Neg,
    /// `t₊ q^k`, `k ∈ ℤ`.
    Plus,
    /// `t₋ q^k`, `k ∈ ℤ`.
    Minus,
}

/// The anchors `t₊ > 0` and `t₋ < 0` of the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchors {
    pub t_plus: Float,
    pub t_minus: Float,
}

impl Anchors {
    /// Validates `t₊ > 0 > t₋`.
    pub fn new(t_plus: Float, t_minus: Float) -> Result<Self> {
        if !(t_plus > 0) {
            return Err(Error::Input("t_plus must be positive".into()));
        }
        if !(t_minus < 0) {
            return Err(Error::Input("t_minus must be negative".into()));
        }
        Ok(Self { t_plus, t_minus })
    }

    /// The anchor value of a branch.
    pub fn anchor(&self, branch: Branch) -> Float {
        match branch {
            Branch::Neg => Float::with_val(self.t_plus.prec(), -1),
            Branch::Plus => self.t_plus.clone(),
            Branch::Minus => self.t_minus.clone(),
        }
    }
}

/// An exact point `anchor · q^k` of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticePoint {
    pub branch: Branch,
    pub k: i64,
}

impl LatticePoint {
    /// `−q^k` with `k ≥ 0`.
    pub fn neg(k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::Domain(format!("negative branch needs k >= 0, got {k}")));
        }
        Ok(Self { branch: Branch::Neg, k })
    }

    /// `t₊ q^k`.
    pub fn plus(k: i64) -> Self {
        Self { branch: Branch::Plus, k }
    }

    /// `t₋ q^k`.
    pub fn minus(k: i64) -> Self {
        Self { branch: Branch::Minus, k }
    }

    /// The point multiplied by `q^d`, if it stays on the lattice.
    pub fn shift(&self, d: i64) -> Option<Self> {
        let k = self.k + d;
        if self.branch == Branch::Neg && k < 0 {
            None
        } else {
            Some(Self { branch: self.branch, k })
        }
    }

    /// `qx`.
    pub fn times_q(&self) -> Self {
        Self { branch: self.branch, k: self.k + 1 }
    }

    /// `x/q`, if on the lattice.
    pub fn over_q(&self) -> Option<Self> {
        self.shift(-1)
    }

    /// The real value of the point.
    pub fn real_value(&self, ctx: &QContext, anchors: &Anchors) -> Float {
        Float::with_val(ctx.bits(), anchors.anchor(self.branch) * ctx.qpow(self.k))
    }

    /// The value of the point as a complex number.
    pub fn value(&self, ctx: &QContext, anchors: &Anchors) -> Complex {
        Complex::with_val(ctx.bits(), (self.real_value(ctx, anchors), 0))
    }

    /// Compares two points by real value.
    pub fn cmp_value(&self, other: &Self, ctx: &QContext, anchors: &Anchors) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.real_value(ctx, anchors)
            .partial_cmp(&other.real_value(ctx, anchors))
            .unwrap_or(Ordering::Equal)
    }
}

/// A function defined on lattice points.
pub trait LatticeFunction {
    /// Evaluates the function at a lattice point.
    fn eval_at(&self, p: &LatticePoint) -> Result<Complex>;
}

impl<F> LatticeFunction for F
where
    F: Fn(&LatticePoint) -> Result<Complex>,
{
    fn eval_at(&self, p: &LatticePoint) -> Result<Complex> {
        self(p)
    }
}

/// One-sided limits at the origin of a lattice function and of its q-derivative.
#[derive(Debug, Clone)]
pub struct BoundaryLimits {
    pub f0_plus: Complex,
    pub f0_minus: Complex,
    pub fprime0_plus: Complex,
    pub fprime0_minus: Complex,
    /// Whether all four sequences passed the geometric-convergence certificate.
    pub converged: bool,
    /// Largest `k` used.
    pub k_used: i64,
}

/// Default truncation depth for [`boundary_limits`].
pub const DEFAULT_K_MAX: i64 = 80;

/// Tracks the geometric-convergence certificate of a sequence.
struct LimitTracker {
    values: Vec<Complex>,
    diffs: Vec<f64>,
}

impl LimitTracker {
    fn new() -> Self {
        Self { values: Vec::new(), diffs: Vec::new() }
    }

    fn push(&mut self, v: Complex) {
        if let Some(prev) = self.values.last() {
            let d = abs_f64(&Complex::with_val(v.prec().0, &v - prev));
            self.diffs.push(d);
        }
        self.values.push(v);
    }

    fn scale(&self) -> f64 {
        self.values.last().map_or(0.0, abs_f64).max(1.0)
    }

    /// Differences have dropped to rounding level.
    fn settled(&self, floor: f64) -> bool {
        let n = self.diffs.len();
        n >= 3 && self.diffs[n - 3..].iter().all(|d| *d <= floor * self.scale())
    }

    /// The last three differences shrink at least by `ratio` each.
    fn certified(&self, floor: f64, ratio: f64) -> bool {
        if self.settled(floor) {
            return true;
        }
        let n = self.diffs.len();
        if n < 3 {
            return false;
        }
        let t = &self.diffs[n - 3..];
        t[1] <= ratio * t[0] && t[2] <= ratio * t[1]
    }

    /// Aitken-extrapolated limit (the last iterate when extrapolation is not meaningful).
    fn limit(&self, floor: f64) -> Complex {
        let n = self.values.len();
        let last = self.values.last().cloned().unwrap_or_else(|| Complex::new(64));
        if n < 3 || self.settled(floor) {
            return last;
        }
        let prec = last.prec().0;
        let (s0, s1, s2) = (&self.values[n - 3], &self.values[n - 2], &self.values[n - 1]);
        let d1 = Complex::with_val(prec, s1 - s0);
        let d2 = Complex::with_val(prec, s2 - s1);
        let den = Complex::with_val(prec, &d2 - &d1);
        if den.is_zero() {
            return last;
        }
        let corr = Complex::with_val(prec, Complex::with_val(prec, &d2 * &d2) / den);
        Complex::with_val(prec, s2 - corr)
    }
}

/// Limits `f(0^±)` and `f'(0^±)` from the positive branch `t₊q^k` and the
/// negative branch (`−q^k` or `t₋q^k`), using `k = 0..k_max`.
///
/// Convergence is certified when the last three successive differences of
/// every sequence shrink by a factor of at least `min(2, 1/q)^{1/2}`; the returned
/// values are Aitken-extrapolated from the last three iterates.
pub fn boundary_limits<L: LatticeFunction + ?Sized>(
    ctx: &QContext,
    anchors: &Anchors,
    f: &L,
    negative: Branch,
    k_max: i64,
) -> Result<BoundaryLimits> {
    let floor = 2f64.powi(-(ctx.bits() as i32) + 16);
    // The sequences converge like q^k; the square root leaves room for the
    // rounding noise of the late difference quotients.
    let ratio = ctx.q().to_f64().max(0.5).sqrt();
    let mut tracks = [LimitTracker::new(), LimitTracker::new(), LimitTracker::new(), LimitTracker::new()];
    let one_minus_q = Float::with_val(ctx.bits(), 1 - ctx.q());
    let mut k_used = 0;
    let mut cache: [Option<Complex>; 2] = [None, None];
    for k in 0..=k_max {
        for (side, branch) in [(0usize, Branch::Plus), (1usize, negative)].into_iter() {
            let p = LatticePoint { branch, k };
            let fx = match cache[side].take() {
                Some(v) => v,
                None => f.eval_at(&p)?,
            };
            let fqx = f.eval_at(&p.times_q())?;
            let x = p.value(ctx, anchors);
            let num = Complex::with_val(ctx.bits(), &fx - &fqx);
            let d = Complex::with_val(ctx.bits(), num / Complex::with_val(ctx.bits(), x * &one_minus_q));
            tracks[side].push(fx);
            tracks[2 + side].push(d);
            cache[side] = Some(fqx);
        }
        k_used = k;
        if tracks.iter().all(|t| t.settled(floor)) {
            break;
        }
    }
    let converged = tracks.iter().all(|t| t.certified(floor, ratio));
    Ok(BoundaryLimits {
        f0_plus: tracks[0].limit(floor),
        f0_minus: tracks[1].limit(floor),
        fprime0_plus: tracks[2].limit(floor),
        fprime0_minus: tracks[3].limit(floor),
        converged,
        k_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cx, rel_diff, Precision};

    fn ctx() -> QContext {
        QContext::new(0.5, Precision::default()).unwrap()
    }

    #[test]
    fn geometric_examples() {
        let q = ctx();
        let one = q.real(1.0);
        let r = qint_zero_to(&q, |_p: &QPoint| Ok(q.real(1.0)), &one, 1e-45).unwrap();
        assert!(rel_diff(r.complex(), &one, 0.0) < 1e-44);
        let r = qint_zero_to(&q, |p: &QPoint| Ok(p.x.clone()), &one, 1e-45).unwrap();
        assert!(rel_diff(r.complex(), &cx(q.bits(), 2.0 / 3.0), 0.0) < 1e-15);
        let exact = Complex::with_val(q.bits(), Float::with_val(q.bits(), 2) / 3);
        assert!(rel_diff(r.complex(), &exact, 0.0) < 1e-44);
    }

    #[test]
    fn bilateral_periodicity() {
        let q = ctx();
        let a = q.real(0.7);
        let qa = q.real(0.35);
        // f ≡ 1: the terms f(x)x grow without bound along the negative direction.
        assert!(qint_bilateral(&q, |_p: &QPoint| Ok(q.real(1.0)), &a, 1e-45).is_err());
        let g = |p: &QPoint| -> Result<Complex> {
            let x2 = Complex::with_val(q.bits(), &p.x * &p.x);
            Ok(Complex::with_val(q.bits(), 1 / (1 + Complex::with_val(q.bits(), &x2 * &x2))))
        };
        let r1 = qint_bilateral(&q, g, &a, 1e-40).unwrap();
        let r2 = qint_bilateral(&q, g, &qa, 1e-40).unwrap();
        assert!(rel_diff(r1.complex(), r2.complex(), 0.0) < 1e-38);
    }

    #[test]
    fn finite_sum_convention() {
        let q = ctx();
        let beta = q.real(0.8);
        let f = |p: &QPoint| Ok(Complex::with_val(q.bits(), &p.x * &p.x) + 1);
        assert!(qint_finite(&q, f, &beta, 0).unwrap().complex().is_zero());
        let a = qint_finite(&q, f, &beta, 3).unwrap();
        let b = qint_finite(&q, f, &Complex::with_val(q.bits(), &beta * q.qpow(3)), 4).unwrap();
        let c = qint_finite(&q, f, &beta, 7).unwrap();
        let s = Complex::with_val(q.bits(), a.complex() + b.complex());
        assert!(rel_diff(&s, c.complex(), 0.0) < 1e-55);
        // Through the generic entry point as well.
        let alpha = Complex::with_val(q.bits(), &beta * q.qpow(7));
        let d = qint_between(&q, f, &alpha, &beta, 1e-40).unwrap();
        assert!(rel_diff(d.complex(), c.complex(), 0.0) < 1e-55);
        let e = qint_between(&q, f, &beta, &alpha, 1e-40).unwrap();
        assert!(rel_diff(&Complex::with_val(q.bits(), -e.complex()), c.complex(), 0.0) < 1e-55);
    }

    #[test]
    fn between_off_lattice_is_difference() {
        let q = ctx();
        let f = |p: &QPoint| Ok(Complex::with_val(q.bits(), &p.x + 2));
        let (a, b) = (q.real(0.3), q.real(0.9));
        let r = qint_between(&q, f, &a, &b, 1e-45).unwrap();
        // ∫_a^b (x+2) d_qx = [x^2/(1+q) + 2x]_a^b for the Jackson integral.
        let prim = |x: f64| x * x / 1.5 + 2.0 * x;
        assert!((r.complex().real().to_f64() - (prim(0.9) - prim(0.3))).abs() < 1e-14);
    }

    #[test]
    fn derivative_examples() {
        let q = ctx();
        let x = q.real(0.7);
        assert!(qderiv_cx(&q, |_z: &Complex| Ok(q.real(3.0)), &x).unwrap().is_zero());
        assert_eq!(qderiv_cx(&q, |z: &Complex| Ok(z.clone()), &x).unwrap(), q.real(1.0));
        let d = qderiv_cx(&q, |z: &Complex| Ok(Complex::with_val(q.bits(), z * z)), &x).unwrap();
        let expect = Complex::with_val(q.bits(), &x * Float::with_val(q.bits(), 1.5));
        assert!(rel_diff(&d, &expect, 0.0) < 1e-50);
        assert!(qderiv_cx(&q, |z: &Complex| Ok(z.clone()), &q.real(0.0)).is_err());
    }

    #[test]
    fn lattice_points() {
        let q = ctx();
        let an = Anchors::new(Float::with_val(q.bits(), 1), Float::with_val(q.bits(), -0.7)).unwrap();
        assert!(LatticePoint::neg(-1).is_err());
        let p = LatticePoint::neg(0).unwrap();
        assert!(p.over_q().is_none());
        assert_eq!(LatticePoint::plus(3).value(&q, &an), q.real(0.125));
        assert_eq!(LatticePoint::neg(1).unwrap().cmp_value(&LatticePoint::plus(-5), &q, &an), Ordering::Less);
        assert_eq!(LatticePoint::minus(0).cmp_value(&LatticePoint::neg(0).unwrap(), &q, &an), Ordering::Greater);
        assert!(Anchors::new(Float::with_val(64, -1), Float::with_val(64, -1)).is_err());
    }

    #[test]
    fn boundary_limits_simple_functions() {
        let q = ctx();
        let an = Anchors::new(Float::with_val(q.bits(), 1), Float::with_val(q.bits(), -1)).unwrap();
        let constant = |_p: &LatticePoint| Ok(q.real(2.5));
        let b = boundary_limits(&q, &an, &constant, Branch::Neg, DEFAULT_K_MAX).unwrap();
        assert!(b.converged);
        assert_eq!(b.f0_plus, q.real(2.5));
        assert!(b.fprime0_minus.is_zero());
        let ident = |p: &LatticePoint| Ok(p.value(&q, &an));
        let b = boundary_limits(&q, &an, &ident, Branch::Neg, DEFAULT_K_MAX).unwrap();
        assert!(b.converged);
        assert!(abs_f64(&b.f0_plus) < 1e-20 && abs_f64(&b.f0_minus) < 1e-20);
        assert_eq!(b.fprime0_plus, q.real(1.0));
        assert_eq!(b.fprime0_minus, q.real(1.0));
    }
}
