//! The q-Meixner functions `φ_γ`, the second solution `ψ_γ`, the asymptotic
//! solutions `Φ_γ^±` and `Φ_γ^†`, each with several series representations.
//!
//! Every route returns an [`Evaluation`] carrying the cancellation it
//! suffered. When more than half of the guard bits were lost the whole route
//! is recomputed at a higher precision from the exact inputs.

use rug::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{div, inv, mul, mulf, neg, prod, sub};
use crate::qcalculus::{Branch, LatticePoint};
use crate::qseries::{q_lattice_index, rphis_regularized_cx, ErrorEstimate, SeriesSpec};
use crate::scalar::{abs_f64, powi, ScaledValue, GUARD_BITS};

use super::params::{Origin, SpectralPoint};
use super::poly::poly_m_est;
use super::weight::{checked_div, pinf, th};
use super::Params;

/// A point at which a function is evaluated: an exact lattice point or a free value.
#[derive(Debug, Clone)]
pub enum Point {
    Lattice(LatticePoint),
    Value(Complex),
}

impl From<LatticePoint> for Point {
    fn from(x: LatticePoint) -> Self {
        Point::Lattice(x)
    }
}

impl Point {
    /// The numerical value at the working precision of `p`.
    pub fn value(&self, p: &Params) -> Complex {
        match self {
            Point::Lattice(x) => p.point(x),
            Point::Value(z) => Complex::with_val(p.bits().max(z.prec().0), z),
        }
    }

    /// `k` if the point is `−q^k` with `k ≥ 0`.
    pub fn neg_index(&self, p: &Params) -> Option<u64> {
        match self {
            Point::Lattice(LatticePoint { branch: Branch::Neg, k }) => Some(*k as u64),
            Point::Lattice(LatticePoint { branch: Branch::Minus, k }) if p.t_minus_is_minus_one() && *k >= 0 => Some(*k as u64),
            Point::Lattice(_) => None,
            Point::Value(z) => neg_q_index(p, z),
        }
    }

    /// Whether the point lies on `t q^ℤ` for the anchor of `side`.
    pub fn on_side(&self, p: &Params, side: Side) -> bool {
        match (self, side) {
            (Point::Lattice(x), Side::Plus) => x.branch == Branch::Plus,
            (Point::Lattice(x), Side::Minus) => x.branch == Branch::Minus || (x.branch == Branch::Neg && p.t_minus_is_minus_one()),
            (Point::Value(z), s) => q_lattice_index(p.ctx(), &div(z, &p.anchor(s.branch()))).is_some(),
        }
    }
}

/// If `z = −q^n` with `n ≥ 0`, returns `n`.
pub(crate) fn neg_q_index(p: &Params, z: &Complex) -> Option<u64> {
    q_lattice_index(p.ctx(), &neg(z)).and_then(|j| u64::try_from(j).ok())
}

/// Which anchor an asymptotic solution is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    /// The lattice branch of this anchor.
    pub fn branch(self) -> Branch {
        match self {
            Side::Plus => Branch::Plus,
            Side::Minus => Branch::Minus,
        }
    }

    /// The side whose branch carries a lattice point (`−q^ℕ` counts as the minus side).
    pub fn of(x: &LatticePoint) -> Side {
        match x.branch {
            Branch::Plus => Side::Plus,
            Branch::Minus | Branch::Neg => Side::Minus,
        }
    }
}

/// Series representations of `φ_γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiRoute {
    /// `₂φ₂(−1/x, −1/γ; a, b; q, abγx)`, entire.
    Definition,
    /// Heine transform `(−ax)_∞/(a)_∞ ₂φ₁(−1/x, −bγ; b; q, −ax)`, `|ax| < 1`.
    Heine,
    /// `(abγx, −1/γ)_∞/(a,b)_∞ ₂φ₁(−aγ, −bγ; abγx; q, −1/γ)`, `|γ| > 1`.
    HeineGamma,
    /// Jackson transform `(abγx)_∞/(a)_∞ ₂φ₂(−bγ, −bx; b, abγx; q, a)`.
    JacksonA,
    /// `γ = −q^n`: the polynomial `m_n(x)`.
    Polynomial,
    /// `x = −q^k`: the polynomial `m_k(γ)` by duality.
    DualPolynomial,
    /// Pick the best-conditioned valid route.
    Auto,
}

impl PhiRoute {
    /// All explicit routes.
    pub const ALL: [PhiRoute; 6] =
        [PhiRoute::Definition, PhiRoute::Heine, PhiRoute::HeineGamma, PhiRoute::JacksonA, PhiRoute::Polynomial, PhiRoute::DualPolynomial];
}

/// Series representations of `ψ_γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiRoute {
    /// Regularized `₂φ₂(−aγ, −ax; aqγx, aq/b; q, q²/b)`.
    Definition,
    /// Regularized `₂φ₁(−aγ, −qγ; aqγx; q, −q/bγ)`, `|bγ| > q`.
    Alternative,
    Auto,
}

impl PsiRoute {
    pub const ALL: [PsiRoute; 2] = [PsiRoute::Definition, PsiRoute::Alternative];
}

/// Representations of `Φ_γ^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BigPhiRoute {
    /// `(a,b;q)_∞ φ_γ − c_±(γ) ψ_γ`, valid on the whole lattice.
    Combo,
    /// `₂φ₁` series in `1/x`, native branch only, `|γ| > 1`.
    Series2phi1,
    /// Regularized `₂φ₂` series in `1/x`, native branch only.
    Series2phi2,
    /// `γ = −q^{1+n}/a`: terminating `₂φ₁`, native branch only.
    Terminating,
    Auto,
}

impl BigPhiRoute {
    pub const ALL: [BigPhiRoute; 4] = [BigPhiRoute::Combo, BigPhiRoute::Series2phi1, BigPhiRoute::Series2phi2, BigPhiRoute::Terminating];
}

/// A function value with its numerical diagnostics.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Complex,
    /// Name of the route that produced the value.
    pub route: &'static str,
    /// `max |partial| / |value|` over the summations and combinations involved.
    pub cancellation: f64,
    /// Precision (bits) of the final pass.
    pub bits_used: u32,
}

impl Evaluation {
    fn new(value: Complex, route: &'static str, cancellation: f64, bits: u32) -> Self {
        Self { value, route, cancellation, bits_used: bits }
    }

    fn from_series(prefactor: &Complex, series: (Complex, ErrorEstimate), route: &'static str) -> Self {
        let (s, est) = series;
        Self::new(mul(prefactor, &s), route, est.cancellation.0, est.bits_used)
    }

    /// The value as a [`ScaledValue`].
    pub fn scaled(&self, p: &Params) -> Result<ScaledValue> {
        ScaledValue::from_complex(p.ctx(), p.ctx().cx(&self.value))
    }
}

/// Runs `f` at the working precision and, if it lost more than half the guard
/// bits, once more at a precision raised by the number of lost bits.
pub(crate) fn escalate<F>(p: &Params, f: F) -> Result<Evaluation>
where
    F: Fn(&Params) -> Result<Evaluation>,
{
    let e = f(p)?;
    // Bits already added by an inner escalation count against the loss.
    let lost = e.cancellation.log2() - f64::from(e.bits_used.saturating_sub(p.bits()));
    if !lost.is_finite() || lost <= f64::from(GUARD_BITS / 2) {
        return Ok(e);
    }
    let hp = p.at_bits(p.bits() + lost.ceil() as u32 + 16);
    let mut e2 = f(&hp)?;
    e2.value = Complex::with_val(p.bits(), &e2.value);
    Ok(e2)
}

fn series(p: &Params, upper: Vec<Complex>, lower: Vec<Complex>, z: Complex, reg: &[usize]) -> Result<(Complex, ErrorEstimate)> {
    let ctx = p.ctx();
    rphis_regularized_cx(ctx, &SeriesSpec::new(upper, lower, z), reg, ctx.target_tol())
}

fn nonzero(z: &Complex, what: &str) -> Result<Complex> {
    if z.is_zero() {
        return Err(Error::Domain(format!("{what} must be nonzero")));
    }
    Ok(inv(z))
}

fn invalid(route: &str, why: &str) -> Error {
    Error::Domain(format!("route {route} not valid here: {why}"))
}

// ---------------------------------------------------------------------------
// φ_γ

/// `φ_γ(x;a,b;q)` by the requested route.
pub fn phi(p: &Params, gamma: &SpectralPoint, x: &Point, route: PhiRoute) -> Result<Evaluation> {
    let route = if route == PhiRoute::Auto { phi_plan(p, gamma, x) } else { route };
    escalate(p, |p| phi_route(p, gamma, x, route))
}

/// `φ_γ(x)` as a plain complex number (automatic route).
pub fn phi_cx(p: &Params, gamma: &SpectralPoint, x: &Point) -> Result<Complex> {
    Ok(phi(p, gamma, x, PhiRoute::Auto)?.value)
}

/// Evaluates every valid route, for cross-checking.
pub fn phi_all_routes(p: &Params, gamma: &SpectralPoint, x: &Point) -> Vec<(PhiRoute, Evaluation)> {
    PhiRoute::ALL.iter().filter_map(|&r| phi(p, gamma, x, r).ok().map(|e| (r, e))).collect()
}

fn phi_plan(p: &Params, gamma: &SpectralPoint, x: &Point) -> PhiRoute {
    let g = gamma.value(p);
    if matches!(gamma.origin(), Origin::NegQN { .. }) || neg_q_index(p, &g).is_some() {
        return PhiRoute::Polynomial;
    }
    if x.neg_index(p).is_some() {
        return PhiRoute::DualPolynomial;
    }
    if matches!(gamma.origin(), Origin::PosLattice { .. }) {
        return PhiRoute::JacksonA;
    }
    if abs_f64(&mul(&p.a(), &x.value(p))) < 0.5 {
        PhiRoute::Heine
    } else {
        PhiRoute::JacksonA
    }
}

fn phi_route(p: &Params, gamma: &SpectralPoint, x: &Point, route: PhiRoute) -> Result<Evaluation> {
    let (a, b) = (p.a(), p.b());
    let g = gamma.value(p);
    let xv = x.value(p);
    let bits = p.bits();
    match route {
        PhiRoute::Definition => {
            let (ix, ig) = (nonzero(&xv, "x")?, nonzero(&g, "gamma")?);
            let z = prod(bits, &[&a, &b, &g, &xv]);
            let s = series(p, vec![neg(&ix), neg(&ig)], vec![a, b], z, &[])?;
            Ok(Evaluation::from_series(&p.ctx().real(1.0), s, "definition"))
        }
        PhiRoute::Heine => {
            let ax = mul(&a, &xv);
            if abs_f64(&ax) >= 1.0 {
                return Err(invalid("heine", "|ax| >= 1"));
            }
            let ix = nonzero(&xv, "x")?;
            let pre = checked_div(&pinf(p, &[neg(&ax)]), &pinf(p, &[a.clone()]), "(a;q)_inf")?;
            let s = series(p, vec![neg(&ix), neg(&mul(&b, &g))], vec![b], neg(&ax), &[])?;
            Ok(Evaluation::from_series(&pre, s, "heine"))
        }
        PhiRoute::HeineGamma => {
            if abs_f64(&g) <= 1.0 {
                return Err(invalid("heine_gamma", "|gamma| <= 1"));
            }
            let ig = inv(&g);
            let abgx = prod(bits, &[&a, &b, &g, &xv]);
            let pre = checked_div(&pinf(p, &[neg(&ig)]), &pinf(p, &[a.clone(), b.clone()]), "(a,b;q)_inf")?;
            let s = series(p, vec![neg(&mul(&a, &g)), neg(&mul(&b, &g))], vec![abgx], neg(&ig), &[0])?;
            Ok(Evaluation::from_series(&pre, s, "heine_gamma"))
        }
        PhiRoute::JacksonA => {
            let abgx = prod(bits, &[&a, &b, &g, &xv]);
            let pre = checked_div(&p.ctx().real(1.0), &pinf(p, &[a.clone()]), "(a;q)_inf")?;
            let s = series(p, vec![neg(&mul(&b, &g)), neg(&mul(&b, &xv))], vec![b, abgx], a, &[1])?;
            Ok(Evaluation::from_series(&pre, s, "jackson_a"))
        }
        PhiRoute::Polynomial => {
            let n = match gamma.origin() {
                Origin::NegQN { n } => *n as u64,
                _ => neg_q_index(p, &g).ok_or_else(|| invalid("polynomial", "gamma is not -q^n"))?,
            };
            let (v, est) = poly_m_est(p, n, &xv)?;
            Ok(Evaluation::new(v, "polynomial", est.cancellation.0, est.bits_used))
        }
        PhiRoute::DualPolynomial => {
            let k = x.neg_index(p).ok_or_else(|| invalid("dual_polynomial", "x is not -q^k"))?;
            let (v, est) = poly_m_est(p, k, &g)?;
            Ok(Evaluation::new(v, "dual_polynomial", est.cancellation.0, est.bits_used))
        }
        PhiRoute::Auto => phi_route(p, gamma, x, phi_plan(p, gamma, x)),
    }
}

// ---------------------------------------------------------------------------
// ψ_γ

/// Checks the pole set of `ψ_γ(x)`, naming the offending family.
fn psi_poles(p: &Params, g: &Complex, x: &Complex) -> Result<()> {
    let ctx = p.ctx();
    let q = ctx.q_cx();
    if q_lattice_index(ctx, &neg(&mul(&q, x))).is_some_and(|j| j <= 0) {
        return Err(Error::Pole("psi: x lies in -q^(-N-1)".into()));
    }
    if q_lattice_index(ctx, &neg(&mul(&q, g))).is_some_and(|j| j <= 0) {
        return Err(Error::Pole("psi: gamma lies in -q^(-N-1)".into()));
    }
    if q_lattice_index(ctx, &neg(&div(&q, &mul(&p.b(), g)))).is_some_and(|j| j <= 0) {
        return Err(Error::Pole("psi: gamma lies in -q^(1+N)/b".into()));
    }
    Ok(())
}

/// `ψ_γ(x;a,b;q)` by the requested route.
pub fn psi(p: &Params, gamma: &SpectralPoint, x: &Point, route: PsiRoute) -> Result<Evaluation> {
    let route = if route == PsiRoute::Auto { psi_plan(p, gamma) } else { route };
    escalate(p, |p| psi_route(p, &gamma.value(p), &x.value(p), route))
}

/// `ψ_γ(x)` as a plain complex number (automatic route).
pub fn psi_cx(p: &Params, gamma: &SpectralPoint, x: &Point) -> Result<Complex> {
    Ok(psi(p, gamma, x, PsiRoute::Auto)?.value)
}

/// Evaluates every valid route, for cross-checking.
pub fn psi_all_routes(p: &Params, gamma: &SpectralPoint, x: &Point) -> Vec<(PsiRoute, Evaluation)> {
    PsiRoute::ALL.iter().filter_map(|&r| psi(p, gamma, x, r).ok().map(|e| (r, e))).collect()
}

fn psi_plan(p: &Params, gamma: &SpectralPoint) -> PsiRoute {
    let g = gamma.value(p);
    if g.is_zero() {
        return PsiRoute::Definition;
    }
    let z = div(&p.ctx().q_cx(), &mul(&p.b(), &g));
    if abs_f64(&z) < 0.5 {
        PsiRoute::Alternative
    } else {
        PsiRoute::Definition
    }
}

fn psi_route(p: &Params, g: &Complex, x: &Complex, route: PsiRoute) -> Result<Evaluation> {
    let ctx = p.ctx();
    let bits = p.bits();
    let (a, b) = (p.a(), p.b());
    let q = ctx.q_cx();
    nonzero(g, "gamma")?;
    psi_poles(p, g, x)?;
    let aqgx = prod(bits, &[&a, &q, g, x]);
    let common_num = pinf(p, &[neg(&mul(&b, x))]);
    match route {
        PsiRoute::Definition | PsiRoute::Auto => {
            let den = pinf(p, &[neg(&mul(&q, x)), neg(&div(&q, &mul(&b, g))), neg(&mul(&q, g))]);
            let pre = checked_div(&common_num, &den, "psi")?;
            let z = div(&mulf(&q, ctx.q()), &b);
            let s = series(p, vec![neg(&mul(&a, g)), neg(&mul(&a, x))], vec![aqgx, div(&mul(&a, &q), &b)], z, &[0, 1])?;
            Ok(Evaluation::from_series(&pre, s, "definition"))
        }
        PsiRoute::Alternative => {
            let z = neg(&div(&q, &mul(&b, g)));
            if abs_f64(&z) >= 1.0 {
                return Err(invalid("psi alternative", "|q/(b gamma)| >= 1"));
            }
            let den = pinf(p, &[neg(&mul(&q, x)), neg(&mul(&q, g))]);
            let pre = checked_div(&common_num, &den, "psi")?;
            let s = series(p, vec![neg(&mul(&a, g)), neg(&mul(&q, g))], vec![aqgx], z, &[0])?;
            Ok(Evaluation::from_series(&pre, s, "alternative"))
        }
    }
}

// ---------------------------------------------------------------------------
// Φ_γ^±

/// `c_±(γ) = e_γ(t_±) = θ(−qt_±, −qγ, abt_±γ) / θ(aqt_±γ, −bt_±)`.
pub fn c_coeff(p: &Params, gamma: &Complex, side: Side) -> Result<Complex> {
    e_gamma(p, gamma, &p.anchor(side.branch()))
}

/// Whether γ is within `10^{−digits/2}` of `−q^{−1−j}` (where the combination is 0·∞).
fn near_combo_singularity(p: &Params, g: &Complex) -> bool {
    let ctx = p.ctx();
    let mqg = neg(&mul(&ctx.q_cx(), g));
    let mag = abs_f64(&mqg);
    if mag < 1.0 - 1e-9 || !(mag.is_finite()) {
        return false;
    }
    let j = (mag.ln() / -ctx.ln_q_f64()).round() as i64;
    let target = ctx.qpow_cx(-j);
    let rel = abs_f64(&sub(&mqg, &target)) / abs_f64(&target);
    rel < 10f64.powf(-(f64::from(ctx.precision().digits()) / 2.0))
}

/// `Φ_γ^±(x;a,b;q)` by the requested route.
pub fn big_phi(p: &Params, gamma: &SpectralPoint, side: Side, x: &Point, route: BigPhiRoute) -> Result<Evaluation> {
    let route = if route == BigPhiRoute::Auto { big_phi_plan(p, gamma, side, x)? } else { route };
    escalate(p, |p| big_phi_route(p, gamma, side, x, route))
}

/// `Φ_γ^±(x)` as a plain complex number (automatic route).
pub fn big_phi_cx(p: &Params, gamma: &SpectralPoint, side: Side, x: &Point) -> Result<Complex> {
    Ok(big_phi(p, gamma, side, x, BigPhiRoute::Auto)?.value)
}

/// Evaluates every valid route, for cross-checking.
pub fn big_phi_all_routes(p: &Params, gamma: &SpectralPoint, side: Side, x: &Point) -> Vec<(BigPhiRoute, Evaluation)> {
    BigPhiRoute::ALL.iter().filter_map(|&r| big_phi(p, gamma, side, x, r).ok().map(|e| (r, e))).collect()
}

fn is_a_terminating(p: &Params, gamma: &SpectralPoint) -> Option<u64> {
    match gamma.origin() {
        Origin::ATerminating { n } if *n >= 0 => Some(*n as u64),
        _ => {
            let j = q_lattice_index(p.ctx(), &neg(&mul(&p.a(), &gamma.value(p))))?;
            u64::try_from(j - 1).ok()
        }
    }
}

fn big_phi_plan(p: &Params, gamma: &SpectralPoint, side: Side, x: &Point) -> Result<BigPhiRoute> {
    let g = gamma.value(p);
    let native = x.on_side(p, side);
    // The terminating form divides by (a/b;q)_∞.
    if native && p.genericity().b_over_a && is_a_terminating(p, gamma).is_some() {
        return Ok(BigPhiRoute::Terminating);
    }
    let combo_ok = !near_combo_singularity(p, &g);
    if native {
        // The series in 1/x are well conditioned once |q/(bγx)| is moderate.
        let z = div(&p.ctx().q_cx(), &prod(p.bits(), &[&p.b(), &g, &x.value(p)]));
        // At a pole of ψ the combination is unavailable as well.
        if abs_f64(&z) <= 2.0 || !combo_ok || psi_poles(p, &g, &x.value(p)).is_err() {
            let r = if abs_f64(&g) > 1.0 { BigPhiRoute::Series2phi1 } else { BigPhiRoute::Series2phi2 };
            return Ok(r);
        }
    }
    if combo_ok {
        Ok(BigPhiRoute::Combo)
    } else {
        Err(Error::Domain("gamma is at -q^(-N-1), where only the series representations apply, and x is off their branch".into()))
    }
}

fn big_phi_route(p: &Params, gamma: &SpectralPoint, side: Side, x: &Point, route: BigPhiRoute) -> Result<Evaluation> {
    let ctx = p.ctx();
    let bits = p.bits();
    let (a, b) = (p.a(), p.b());
    let q = ctx.q_cx();
    let g = gamma.value(p);
    let xv = x.value(p);
    let series_guard = |name: &str| -> Result<()> {
        if x.on_side(p, side) {
            Ok(())
        } else {
            Err(invalid(name, "x is not on the branch of the chosen anchor"))
        }
    };
    match route {
        BigPhiRoute::Combo | BigPhiRoute::Auto => {
            if near_combo_singularity(p, &g) {
                return Err(invalid("combo", "gamma at -q^(-N-1): the combination is 0*inf"));
            }
            let f = phi(p, gamma, x, PhiRoute::Auto)?;
            let ab_inf = pinf(p, &[a.clone(), b.clone()]);
            let t1 = mul(&ab_inf, &f.value);
            let c = c_coeff(p, &g, side)?;
            let t2 = if c.is_zero() {
                // c(γ) = 0 at a pole of ψ is a 0·∞ limit the combination cannot resolve.
                if psi_poles(p, &g, &xv).is_err() {
                    return Err(invalid("combo", "c(gamma) = 0 at a pole of psi"));
                }
                ctx.real(0.0)
            } else {
                mul(&c, &psi(p, gamma, x, PsiRoute::Auto)?.value)
            };
            let v = sub(&t1, &t2);
            let mag = abs_f64(&v);
            let big = abs_f64(&t1).max(abs_f64(&t2));
            let canc = if mag == 0.0 { if big == 0.0 { 1.0 } else { f64::INFINITY } } else { (big / mag).max(1.0) };
            Ok(Evaluation::new(v, "combo", canc, bits))
        }
        BigPhiRoute::Series2phi1 => {
            series_guard("series_2phi1")?;
            if abs_f64(&g) <= 1.0 {
                return Err(invalid("series_2phi1", "|gamma| <= 1"));
            }
            let (ix, ig) = (nonzero(&xv, "x")?, inv(&g));
            let agx = prod(bits, &[&a, &g, &xv]);
            let q2 = mulf(&q, ctx.q());
            let low = div(&q2, &prod(bits, &[&a, &b, &g, &xv]));
            let num = mul(&pinf(p, &[neg(&mul(&a, &xv)), neg(&mul(&a, &g)), neg(&ig)]), &th(p, &[b.clone()])?);
            let den = mul(&pinf(p, &[neg(&div(&mul(&q, &ix), &b)), neg(&div(&q, &mul(&b, &g)))]), &th(p, &[agx])?);
            let pre = checked_div(&num, &den, "(-q/bx, -q/b gamma)_inf theta(a gamma x)")?;
            let s = series(p, vec![neg(&div(&mul(&q, &ix), &a)), neg(&div(&mul(&q, &ix), &b))], vec![low], neg(&ig), &[0])?;
            Ok(Evaluation::from_series(&pre, s, "series_2phi1"))
        }
        BigPhiRoute::Series2phi2 => {
            series_guard("series_2phi2")?;
            let ix = nonzero(&xv, "x")?;
            nonzero(&g, "gamma")?;
            let agx = prod(bits, &[&a, &g, &xv]);
            let q2 = mulf(&q, ctx.q());
            let l1 = div(&q2, &prod(bits, &[&a, &b, &g, &xv]));
            let l2 = div(&q, &agx);
            let num = mul(&pinf(p, &[neg(&mul(&a, &xv)), neg(&mul(&a, &g))]), &th(p, &[b.clone()])?);
            let den = mul(&pinf(p, &[neg(&div(&mul(&q, &ix), &b)), neg(&div(&q, &mul(&b, &g)))]), &th(p, &[agx])?);
            let pre = checked_div(&num, &den, "(-q/bx, -q/b gamma)_inf theta(a gamma x)")?;
            let z = div(&q, &prod(bits, &[&b, &g, &xv]));
            let s = series(p, vec![neg(&div(&mul(&q, &ix), &a)), neg(&div(&q, &mul(&a, &g)))], vec![l1, l2], z, &[0, 1])?;
            Ok(Evaluation::from_series(&pre, s, "series_2phi2"))
        }
        BigPhiRoute::Terminating => {
            series_guard("terminating")?;
            let n = is_a_terminating(p, gamma).ok_or_else(|| invalid("terminating", "gamma is not -q^(1+n)/a"))?;
            if !p.genericity().b_over_a {
                return Err(invalid("terminating", "b/a is in q^Z"));
            }
            let ni = n as i64;
            let num = mul(&pinf(p, &[neg(&mul(&a, &xv)), ctx.qpow_cx(ni + 1)]), &th(p, &[b.clone()])?);
            let den = pinf(p, &[neg(&mul(&q, &xv)), div(&a, &b)]);
            let pre = checked_div(&num, &den, "(-qx, a/b)_inf")?;
            let s = series(
                p,
                vec![ctx.qpow_cx(-ni), neg(&mul(&b, &xv))],
                vec![div(&mul(&q, &b), &a)],
                div(&ctx.qpow_cx(ni + 2), &a),
                &[],
            )?;
            Ok(Evaluation::from_series(&pre, s, "terminating"))
        }
    }
}

/// `Φ_γ^†(x;a,b;q) = Φ_γ(x;b,a;q)`.
pub fn phi_dagger(p: &Params, gamma: &SpectralPoint, side: Side, x: &Point, route: BigPhiRoute) -> Result<Evaluation> {
    big_phi(&p.swapped(), &gamma.swapped_ab(), side, x, route)
}

/// `K(x) = θ(−bx, −bγ, a, aγx) / θ(−ax, −aγ, b, bγx)`, with `Φ^† = K Φ` on each branch.
pub fn k_factor(p: &Params, gamma: &Complex, x: &Complex) -> Result<Complex> {
    let bits = p.bits();
    let (a, b) = (p.a(), p.b());
    let num = th(p, &[neg(&mul(&b, x)), neg(&mul(&b, gamma)), a.clone(), prod(bits, &[&a, gamma, x])])?;
    let den = th(p, &[neg(&mul(&a, x)), neg(&mul(&a, gamma)), b.clone(), prod(bits, &[&b, gamma, x])])?;
    checked_div(&num, &den, "K(x)")
}

/// `e_γ(x) = θ(−qγ, −qx, abγx) / θ(aqγx, −bx)`, the q-periodic factor relating
/// the two asymptotic series.
pub(crate) fn e_gamma(p: &Params, gamma: &Complex, x: &Complex) -> Result<Complex> {
    let bits = p.bits();
    let q = p.ctx().q_cx();
    let num = th(p, &[neg(&mul(&q, gamma)), neg(&mul(&q, x)), prod(bits, &[&p.ab(), gamma, x])])?;
    let den = th(p, &[prod(bits, &[&p.a(), &q, gamma, x]), neg(&mul(&p.b(), x))])?;
    checked_div(&num, &den, "e_gamma")
}

/// Leading term of `Φ_γ(tq^k)` as `k → −∞`:
/// `(−γ)^k (−aγ;q)_∞ θ(b, −at) / ((−q/bγ;q)_∞ θ(atγ))`.
pub fn big_phi_asymptotic(p: &Params, gamma: &Complex, side: Side, k: i64) -> Result<Complex> {
    let bits = p.bits();
    let (a, b) = (p.a(), p.b());
    let t = p.anchor(side.branch());
    let q = p.ctx().q_cx();
    let num = mul(&pinf(p, &[neg(&mul(&a, gamma))]), &th(p, &[b.clone(), neg(&mul(&a, &t))])?);
    let den = mul(&pinf(p, &[neg(&div(&q, &mul(&b, gamma)))]), &th(p, &[prod(bits, &[&a, &t, gamma])])?);
    Ok(mul(&powi(&neg(gamma), k), &checked_div(&num, &den, "asymptotic prefactor")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cx, rel_diff, Precision};

    fn params() -> Params {
        Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap()
    }

    fn gv(p: &Params, v: f64) -> SpectralPoint {
        SpectralPoint::generic(cx(p.bits(), v))
    }

    fn val(p: &Params, v: f64) -> Point {
        Point::Value(cx(p.bits(), v))
    }

    #[test]
    fn phi_at_minus_one_is_one() {
        let p = params();
        for g in [2.0, -0.37, 5.5] {
            let v = phi(&p, &gv(&p, g), &LatticePoint::neg(0).unwrap().into(), PhiRoute::Definition).unwrap();
            assert!(rel_diff(&v.value, &p.ctx().real(1.0), 0.0) < 1e-55);
        }
    }

    #[test]
    fn phi_routes_agree() {
        let p = params();
        let gamma = gv(&p, 3.7);
        let x = Point::Lattice(LatticePoint::plus(2));
        let all = phi_all_routes(&p, &gamma, &x);
        assert!(all.len() >= 4);
        for (r, e) in &all {
            assert!(rel_diff(&e.value, &all[0].1.value, 0.0) < 1e-45, "{r:?}");
        }
    }

    #[test]
    fn phi_is_self_dual_and_symmetric() {
        let p = params();
        let (g, x) = (2.3, 0.8);
        let l = phi(&p, &gv(&p, g), &val(&p, x), PhiRoute::Definition).unwrap().value;
        let r = phi(&p, &gv(&p, x), &val(&p, g), PhiRoute::Definition).unwrap().value;
        assert!(rel_diff(&l, &r, 0.0) < 1e-50);
        let s = phi(&p.swapped(), &gv(&p, g), &val(&p, x), PhiRoute::Definition).unwrap().value;
        assert!(rel_diff(&l, &s, 0.0) < 1e-50);
    }

    #[test]
    fn phi_reduces_to_polynomial() {
        let p = params();
        let x = val(&p, 1.5);
        let poly = phi(&p, &SpectralPoint::neg_qn(2), &x, PhiRoute::Polynomial).unwrap().value;
        let def = phi(&p, &SpectralPoint::neg_qn(2), &x, PhiRoute::Definition).unwrap().value;
        assert!(rel_diff(&poly, &def, 0.0) < 1e-50);
    }

    #[test]
    fn psi_routes_and_near_duality() {
        let p = params();
        let x = Point::Lattice(LatticePoint::plus(3));
        for g in [cx(p.bits(), 3.7), Complex::with_val(p.bits(), (3.0, 2.0))] {
            let all = psi_all_routes(&p, &SpectralPoint::generic(g), &x);
            assert_eq!(all.len(), 2);
            assert!(rel_diff(&all[0].1.value, &all[1].1.value, 0.0) < 1e-45);
        }
        let (g, xv) = (cx(p.bits(), 1.3), cx(p.bits(), 0.7));
        let lhs = psi(&p, &SpectralPoint::generic(xv.clone()), &Point::Value(g.clone()), PsiRoute::Definition).unwrap().value;
        let ratio = div(&th(&p, &[neg(&mul(&p.b(), &xv))]).unwrap(), &th(&p, &[neg(&mul(&p.b(), &g))]).unwrap());
        let rhs = psi(&p, &SpectralPoint::generic(g), &Point::Value(xv), PsiRoute::Definition).unwrap().value;
        assert!(rel_diff(&mul(&ratio, &lhs), &rhs, 0.0) < 1e-45);
    }

    #[test]
    fn psi_reports_poles() {
        let p = params();
        let x = Point::Lattice(LatticePoint::plus(1));
        let g = SpectralPoint::generic(neg(&p.qpow(-2)));
        assert!(matches!(psi(&p, &g, &x, PsiRoute::Definition), Err(Error::Pole(_))));
        let g = SpectralPoint::b_terminating(1);
        assert!(matches!(psi(&p, &g, &x, PsiRoute::Definition), Err(Error::Pole(_))));
    }

    #[test]
    fn big_phi_routes_agree() {
        let p = params();
        let gamma = gv(&p, 3.7);
        let x = Point::Lattice(LatticePoint::plus(2));
        let all = big_phi_all_routes(&p, &gamma, Side::Plus, &x);
        assert_eq!(all.len(), 3);
        for (r, e) in &all {
            assert!(rel_diff(&e.value, &all[0].1.value, 0.0) < 1e-40, "{r:?}");
        }
    }

    #[test]
    fn terminating_big_phi_matches_series() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-0.7", Precision::default()).unwrap();
        let gamma = SpectralPoint::a_terminating(1);
        for x in [LatticePoint::plus(2), LatticePoint::minus(-1)] {
            let side = Side::of(&x);
            let t = big_phi(&p, &gamma, side, &x.into(), BigPhiRoute::Terminating).unwrap().value;
            let s = big_phi(&p, &gamma, side, &x.into(), BigPhiRoute::Series2phi2).unwrap().value;
            let c = big_phi(&p, &gamma, side, &x.into(), BigPhiRoute::Combo).unwrap().value;
            assert!(rel_diff(&t, &s, 0.0) < 1e-45);
            assert!(rel_diff(&t, &c, 0.0) < 1e-40);
        }
    }

    #[test]
    fn big_phi_vanishes_on_the_cancelled_family() {
        let p = params();
        let gamma = SpectralPoint::generic(neg(&div(&p.qpow(-1), &p.a())));
        for k in [-2, 0, 3] {
            let v = big_phi(&p, &gamma, Side::Plus, &LatticePoint::plus(k).into(), BigPhiRoute::Series2phi1).unwrap().value;
            assert!(abs_f64(&v) < 1e-50);
        }
    }

    #[test]
    fn dagger_is_k_times_big_phi() {
        let p = params();
        let g = cx(p.bits(), 2.9);
        let gamma = SpectralPoint::generic(g.clone());
        for k in [0, 2] {
            let x = LatticePoint::plus(k);
            let xv = p.point(&x);
            let d = phi_dagger(&p, &gamma, Side::Plus, &x.into(), BigPhiRoute::Auto).unwrap().value;
            let f = big_phi(&p, &gamma, Side::Plus, &x.into(), BigPhiRoute::Auto).unwrap().value;
            assert!(rel_diff(&d, &mul(&k_factor(&p, &g, &xv).unwrap(), &f), 0.0) < 1e-40);
        }
        let k0 = k_factor(&p, &g, &p.t_plus()).unwrap();
        let k3 = k_factor(&p, &g, &p.point(&LatticePoint::plus(3))).unwrap();
        assert!(rel_diff(&k0, &k3, 0.0) < 1e-50);
    }

    #[test]
    fn e_gamma_is_q_periodic() {
        let p = params();
        let g = cx(p.bits(), 1.7);
        let e0 = e_gamma(&p, &g, &p.point(&LatticePoint::plus(0))).unwrap();
        let e2 = e_gamma(&p, &g, &p.point(&LatticePoint::plus(2))).unwrap();
        assert!(rel_diff(&e0, &e2, 0.0) < 1e-50);
    }

    #[test]
    fn big_phi_asymptotics() {
        let p = params();
        let g = cx(p.bits(), 2.3);
        let gamma = SpectralPoint::generic(g.clone());
        let mut prev = f64::INFINITY;
        for k in [-15, -25] {
            let v = big_phi(&p, &gamma, Side::Plus, &LatticePoint::plus(k).into(), BigPhiRoute::Auto).unwrap().value;
            let lead = big_phi_asymptotic(&p, &g, Side::Plus, k).unwrap();
            let r = rel_diff(&v, &lead, 0.0);
            assert!(r < prev);
            prev = r;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn escalation_recomputes_from_exact_inputs() {
        let p = params();
        // A large x drives heavy cancellation in the definition route.
        let x = val(&p, 3000.0);
        let gamma = gv(&p, 0.9);
        let d = phi(&p, &gamma, &x, PhiRoute::Definition).unwrap();
        let hp = p.at_bits(p.bits() + 300);
        let reference = phi(&hp, &gamma, &x, PhiRoute::JacksonA).unwrap();
        assert!(rel_diff(&d.value, &reference.value, 0.0) < 1e-45);
    }
}
