//! The second-order q-difference operator `L`.

use rug::Complex;

use crate::error::{Error, Result};
use crate::meixner::weight::recip;
use crate::meixner::Params;
use crate::ops::{add, mul, mulf, sub};
use crate::qcalculus::{Branch, LatticeFunction, LatticePoint};

/// `(Lf)(x) = A(x)[f(qx) − f(x)] + B(x)[f(x/q) − f(x)]` with
/// `A(x) = (a + 1/x)(b + 1/x)` and `B(x) = (q/x)(1 + 1/x)`.
#[derive(Debug, Clone)]
pub struct OperatorL {
    params: Params,
}

impl OperatorL {
    pub fn new(params: &Params) -> Self {
        Self { params: params.clone() }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `A(x) = (a + 1/x)(b + 1/x)`.
    pub fn coeff_a(&self, x: &Complex) -> Result<Complex> {
        let ix = recip(x)?;
        Ok(mul(&add(&self.params.a(), &ix), &add(&self.params.b(), &ix)))
    }

    /// `B(x) = (q/x)(1 + 1/x)`.
    pub fn coeff_b(&self, x: &Complex) -> Result<Complex> {
        let ctx = self.params.ctx();
        let ix = recip(x)?;
        Ok(mul(&mulf(&ix, ctx.q()), &add(&ctx.real(1.0), &ix)))
    }

    /// `(Lf)(x)` at a lattice point; at `x = −1` the coefficient `B` vanishes
    /// and `f(x/q)` is not needed.
    pub fn apply<L: LatticeFunction + ?Sized>(&self, f: &L, x: &LatticePoint) -> Result<Complex> {
        let p = &self.params;
        let xv = p.point(x);
        let fx = f.eval_at(x)?;
        let fqx = f.eval_at(&x.times_q())?;
        let mut out = mul(&self.coeff_a(&xv)?, &sub(&fqx, &fx));
        let at_minus_one = x.k == 0 && (x.branch == Branch::Neg || (x.branch == Branch::Minus && p.t_minus_is_minus_one()));
        if !at_minus_one {
            let xq = x.over_q().ok_or_else(|| Error::Window("x/q is not a lattice point".into()))?;
            let fxq = f.eval_at(&xq)?;
            out = add(&out, &mul(&self.coeff_b(&xv)?, &sub(&fxq, &fx)));
        }
        Ok(out)
    }

    /// `(Lf)(x)` for a function of a free complex variable.
    pub fn apply_fn<F>(&self, f: F, x: &Complex) -> Result<Complex>
    where
        F: Fn(&Complex) -> Result<Complex>,
    {
        let ctx = self.params.ctx();
        let fx = f(x)?;
        let fqx = f(&mulf(x, ctx.q()))?;
        let mut out = mul(&self.coeff_a(x)?, &sub(&fqx, &fx));
        let b = self.coeff_b(x)?;
        if !b.is_zero() {
            let fxq = f(&mulf(x, &ctx.qpow(-1)))?;
            out = add(&out, &mul(&b, &sub(&fxq, &fx)));
        }
        Ok(out)
    }

    /// `|(Lf)(x) − μ f(x)| / max(1, |f(x)|)`.
    pub fn eigen_residual<L: LatticeFunction + ?Sized>(&self, f: &L, x: &LatticePoint, mu: &Complex) -> Result<f64> {
        let lf = self.apply(f, x)?;
        let fx = f.eval_at(x)?;
        let r = crate::scalar::abs_f64(&sub(&lf, &mul(mu, &fx)));
        Ok(r / crate::scalar::abs_f64(&fx).max(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meixner::{mu, Family, SpectralPoint};
    use crate::scalar::{abs_f64, Precision};

    #[test]
    fn constants_are_annihilated_and_coefficients_real() {
        let p = Params::parse("0.5", "0.3+0.4i", "0.3-0.4i", "1", "-1", Precision::default()).unwrap();
        let op = OperatorL::new(&p);
        let one = |_: &LatticePoint| -> Result<Complex> { Ok(p.ctx().real(1.0)) };
        for x in [LatticePoint::plus(-2), LatticePoint::neg(0).unwrap(), LatticePoint::neg(3).unwrap()] {
            assert!(op.apply(&one, &x).unwrap().is_zero());
            let xv = p.point(&x);
            assert!(abs_f64(&Complex::with_val(64, op.coeff_a(&xv).unwrap().imag())) < 1e-50);
        }
    }

    #[test]
    fn phi_is_an_eigenfunction() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap();
        let op = OperatorL::new(&p);
        let g = SpectralPoint::generic(p.ctx().real(2.1));
        let fam = Family::Phi(g.clone());
        let f = |x: &LatticePoint| fam.at(&p, x);
        let m = mu(&p, &g.value(&p));
        for x in [LatticePoint::plus(3), LatticePoint::neg(0).unwrap(), LatticePoint::neg(2).unwrap()] {
            assert!(op.eigen_residual(&f, &x, &m).unwrap() < 1e-45);
        }
    }
}
