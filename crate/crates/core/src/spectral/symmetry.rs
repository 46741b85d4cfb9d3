//! The truncated inner product and the symmetry defect of `L`.

use rug::Complex;

use crate::error::Result;
use crate::meixner::weight::weight_cx;
use crate::meixner::Params;
use crate::ops::{add, conj, mul, sub};
use crate::qcalculus::{qint_finite, LatticeFunction, LatticePoint, QPoint};
use crate::scalar::abs_f64;

use super::casorati::casorati;
use super::operator::OperatorL;

/// `⟨f,g⟩_{l;m,n} = ∫_{−1}^{−q^{l+1}} f ḡ w d_qx + ∫_{t₊q^{m+1}}^{t₊q^n} f ḡ w d_qx`,
/// both as finite Jackson sums. Returns the value and the sum of absolute terms.
pub fn truncated_inner_product<F, G>(p: &Params, f: &F, g: &G, l: i64, m: i64, n: i64) -> Result<(Complex, f64)>
where
    F: LatticeFunction + ?Sized,
    G: LatticeFunction + ?Sized,
{
    let ctx = p.ctx();
    let integrand = |x: LatticePoint| -> Result<Complex> {
        let xv = p.point(&x);
        Ok(mul(&mul(&f.eval_at(&x)?, &conj(&g.eval_at(&x)?)), &weight_cx(p, &xv)?))
    };
    // ∫_β^{βq^L} = −∫_{βq^L}^β with β = −1, L = l+1.
    let neg_part = qint_finite(ctx, |pt: &QPoint| integrand(LatticePoint::neg(pt.k)?), &p.point(&LatticePoint::neg(0)?), l + 1)?;
    // ∫_β^{βq^L} with β = t₊q^{m+1}, L = n−m−1.
    let beta = LatticePoint::plus(m + 1);
    let pos_part = qint_finite(ctx, |pt: &QPoint| integrand(LatticePoint::plus(m + 1 + pt.k)), &p.point(&beta), n - m - 1)?;
    let value = sub(&Complex::new(p.bits()), &add(neg_part.complex(), pos_part.complex()));
    Ok((value, neg_part.abs_scale + pos_part.abs_scale))
}

/// The pieces of the identity `⟨Lf,g⟩ − ⟨f,Lg⟩ = D(f,ḡ)(−q^l) + D(f,ḡ)(tq^{n−1}) − D(f,ḡ)(tq^m)`.
#[derive(Debug, Clone)]
pub struct SymmetryDefect {
    /// `⟨Lf,g⟩ − ⟨f,Lg⟩`.
    pub lhs: Complex,
    /// The three boundary terms combined.
    pub rhs: Complex,
    /// `D(f,ḡ)(tq^m)`, the term that vanishes as `m → −∞`.
    pub lower_boundary: Complex,
    /// `lhs − rhs`.
    pub defect: Complex,
    /// Largest magnitude entering the comparison.
    pub scale: f64,
}

/// Evaluates both sides of the truncated symmetry identity.
pub fn symmetry_defect<F, G>(op: &OperatorL, f: &F, g: &G, l: i64, m: i64, n: i64) -> Result<SymmetryDefect>
where
    F: LatticeFunction + ?Sized,
    G: LatticeFunction + ?Sized,
{
    let p = op.params();
    let lf = |x: &LatticePoint| op.apply(f, x);
    let lg = |x: &LatticePoint| op.apply(g, x);
    let (a, sa) = truncated_inner_product(p, &lf, g, l, m, n)?;
    let (b, sb) = truncated_inner_product(p, f, &lg, l, m, n)?;
    let lhs = sub(&a, &b);
    let gbar = |x: &LatticePoint| g.eval_at(x).map(|v| conj(&v));
    let d_neg = casorati(p, f, &gbar, &LatticePoint::neg(l)?)?;
    let d_top = casorati(p, f, &gbar, &LatticePoint::plus(n - 1))?;
    let lower_boundary = casorati(p, f, &gbar, &LatticePoint::plus(m))?;
    let rhs = sub(&add(&d_neg, &d_top), &lower_boundary);
    let defect = sub(&lhs, &rhs);
    let scale = [sa, sb, abs_f64(&d_neg), abs_f64(&d_top), abs_f64(&lower_boundary)].into_iter().fold(0.0, f64::max);
    Ok(SymmetryDefect { lhs, rhs, lower_boundary, defect, scale })
}
