//! Weighted inner products on the lattice, as Jackson q-integrals.

use std::collections::HashMap;
use std::sync::RwLock;

use rug::Complex;

use crate::error::Result;
use crate::ops::{conj, mul, sub};
use crate::qcalculus::{qint_bilateral, qint_zero_to, LatticeFunction, LatticePoint, QIntegralResult, QPoint};
use crate::scalar::abs_f64;

use super::functions::Point;
use super::grid::Family;
use super::weight::weight_cx;
use super::Params;

/// Value of an inner product together with the magnitudes needed to judge it.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    pub value: Complex,
    /// `(1−q) Σ |f g w x|` over all summed points.
    pub scale: f64,
    /// Certified bound on the neglected tails.
    pub tail: f64,
    /// Number of lattice points summed.
    pub terms: usize,
}

impl InnerProduct {
    fn from_parts(p: &Params, plus: &QIntegralResult, other: &QIntegralResult) -> Self {
        Self {
            value: sub(plus.complex(), other.complex()),
            scale: plus.abs_scale + other.abs_scale,
            tail: plus.tail_error + other.tail_error,
            terms: plus.terms_used + other.terms_used,
        }
        .at_bits(p.bits())
    }

    fn at_bits(mut self, bits: u32) -> Self {
        self.value = Complex::with_val(bits, &self.value);
        self
    }

    /// `|value| / scale`, the size of the result relative to its summands.
    pub fn relative_size(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            abs_f64(&self.value) / self.scale
        }
    }
}

/// `⟨f,g⟩ = ∫_{−1}^{∞(t₊)} f(x) ḡ(x) w(x) d_qx` on `−q^ℕ ∪ t₊q^ℤ`.
pub fn inner_single<F, G>(p: &Params, f: &F, g: &G) -> Result<InnerProduct>
where
    F: LatticeFunction + ?Sized,
    G: LatticeFunction + ?Sized,
{
    let ctx = p.ctx();
    let tol = ctx.target_tol();
    let integrand = |x: LatticePoint| -> Result<Complex> {
        Ok(mul(&mul(&f.eval_at(&x)?, &conj(&g.eval_at(&x)?)), &weight_cx(p, &p.point(&x))?))
    };
    let plus = qint_bilateral(ctx, |pt: &QPoint| integrand(LatticePoint::plus(pt.k)), &p.t_plus(), tol)?;
    let neg = qint_zero_to(ctx, |pt: &QPoint| integrand(LatticePoint::neg(pt.k)?), &p.point(&LatticePoint::neg(0)?), tol)?;
    Ok(InnerProduct::from_parts(p, &plus, &neg))
}

/// `(f,g) = ∫_{∞(t₋)}^{∞(t₊)} f(x) g(x) w(x) d_qx`, the bilinear form on `t₋q^ℤ ∪ t₊q^ℤ`.
pub fn inner_two_anchor<F, G>(p: &Params, f: &F, g: &G) -> Result<InnerProduct>
where
    F: LatticeFunction + ?Sized,
    G: LatticeFunction + ?Sized,
{
    let ctx = p.ctx();
    let tol = ctx.target_tol();
    let integrand =
        |x: LatticePoint| -> Result<Complex> { Ok(mul(&mul(&f.eval_at(&x)?, &g.eval_at(&x)?), &weight_cx(p, &p.point(&x))?)) };
    let plus = qint_bilateral(ctx, |pt: &QPoint| integrand(LatticePoint::plus(pt.k)), &p.t_plus(), tol)?;
    let minus = qint_bilateral(ctx, |pt: &QPoint| integrand(LatticePoint::minus(pt.k)), &p.t_minus(), tol)?;
    Ok(InnerProduct::from_parts(p, &plus, &minus))
}

/// A family evaluated lazily and memoised per lattice point, so Gram matrices
/// evaluate each function once per point.
#[derive(Debug)]
pub struct CachedFamily {
    family: Family,
    params: Params,
    cache: RwLock<HashMap<LatticePoint, Complex>>,
}

impl CachedFamily {
    pub fn new(p: &Params, family: Family) -> Self {
        Self { family, params: p.clone(), cache: RwLock::new(HashMap::new()) }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }
}

impl LatticeFunction for CachedFamily {
    fn eval_at(&self, x: &LatticePoint) -> Result<Complex> {
        if let Some(v) = self.cache.read().expect("cache lock").get(x) {
            return Ok(v.clone());
        }
        let v = self.family.eval(&self.params, &Point::Lattice(*x))?.value;
        self.cache.write().expect("cache lock").insert(*x, v.clone());
        Ok(v)
    }
}
