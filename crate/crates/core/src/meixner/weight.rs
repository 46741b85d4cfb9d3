//! The weight function and its relatives on the lattice.

use rug::Complex;

use crate::error::{Error, Result};
use crate::ops::{div, inv, mul, mulf, neg, prod};
use crate::qcalculus::LatticePoint;
use crate::qseries::{qpoch_inf_cx, theta_prod_cx};
use crate::scalar::{powi, ScaledValue};

use super::Params;

/// `num / den`, reporting a pole when `den` vanishes.
pub(crate) fn checked_div(num: &Complex, den: &Complex, what: &str) -> Result<Complex> {
    if den.is_zero() {
        return Err(Error::Pole(format!("{what}: vanishing denominator")));
    }
    Ok(div(num, den))
}

/// `(x_1,…,x_m;q)_∞` at the working precision of `p`.
pub(crate) fn pinf(p: &Params, xs: &[Complex]) -> Complex {
    let ctx = p.ctx();
    xs.iter().fold(ctx.real(1.0), |acc, x| mul(&acc, &qpoch_inf_cx(ctx, x)))
}

/// `θ(x_1,…,x_m)` at the working precision of `p`.
pub(crate) fn th(p: &Params, xs: &[Complex]) -> Result<Complex> {
    theta_prod_cx(p.ctx(), xs)
}

/// `w(x) = (−qx;q)_∞ / (−ax, −bx;q)_∞`.
pub fn weight_cx(p: &Params, x: &Complex) -> Result<Complex> {
    let qx = mulf(x, p.ctx().q());
    let num = pinf(p, &[neg(&qx)]);
    let den = pinf(p, &[neg(&mul(&p.a(), x)), neg(&mul(&p.b(), x))]);
    checked_div(&num, &den, "weight")
}

/// The weight at an exact lattice point.
pub fn weight_w(p: &Params, x: &LatticePoint) -> Result<ScaledValue> {
    ScaledValue::from_complex(p.ctx(), weight_cx(p, &p.point(x))?)
}

/// `w_c(x) = (−qx, −cx;q)_∞ / (−ax, −bx;q)_∞` (requires the parameter `c`).
pub fn weight_c_cx(p: &Params, x: &Complex) -> Result<Complex> {
    let c = p.c().ok_or_else(|| Error::Input("parameter c is not set".into()))?;
    let w = weight_cx(p, x)?;
    Ok(mul(&w, &pinf(p, &[neg(&mul(&c, x))])))
}

/// `v(x) = (1−q)/x · (−qx;q)_∞ / (−aqx, −bqx;q)_∞`, the Casorati weight.
pub fn v_weight_cx(p: &Params, x: &Complex) -> Result<Complex> {
    let ctx = p.ctx();
    let qx = mulf(x, ctx.q());
    let num = pinf(p, &[neg(&qx)]);
    let den = mul(&pinf(p, &[neg(&mul(&p.a(), &qx)), neg(&mul(&p.b(), &qx))]), x);
    let omq = Complex::with_val(ctx.bits(), ctx.real(1.0) - ctx.q_cx());
    Ok(mul(&omq, &checked_div(&num, &den, "v(x)")?))
}

/// `u(x) = (1−q) x v(x)`.
pub fn u_weight_cx(p: &Params, x: &Complex) -> Result<Complex> {
    let ctx = p.ctx();
    let omq = Complex::with_val(ctx.bits(), ctx.real(1.0) - ctx.q_cx());
    Ok(prod(ctx.bits(), &[&omq, x, &v_weight_cx(p, x)?]))
}

/// Leading behaviour of `w(tq^k)` as `k → −∞`:
/// `θ(−tq)/θ(−at, −bt) · (abt/q)^k q^{k(k−1)/2}`.
pub fn weight_asymptotic(p: &Params, t: &Complex, k: i64) -> Result<Complex> {
    let ctx = p.ctx();
    let tq = mulf(t, ctx.q());
    let num = th(p, &[neg(&tq)])?;
    let den = th(p, &[neg(&mul(&p.a(), t)), neg(&mul(&p.b(), t))])?;
    let base = div(&mul(&p.ab(), t), &ctx.q_cx());
    let gauss = ctx.qpow(k * (k - 1) / 2);
    Ok(mulf(&mul(&checked_div(&num, &den, "weight asymptotic")?, &powi(&base, k)), &gauss))
}

/// `1/x` with a domain check.
pub(crate) fn recip(x: &Complex) -> Result<Complex> {
    if x.is_zero() {
        return Err(Error::Domain("division by zero argument".into()));
    }
    Ok(inv(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rel_diff, Precision};

    fn params() -> Params {
        Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap()
    }

    #[test]
    fn weight_at_minus_one() {
        let p = params();
        let ctx = p.ctx();
        let w = weight_cx(&p, &ctx.real(-1.0)).unwrap();
        // Oracle: (q;q)_∞/((a;q)_∞ (b;q)_∞) by an explicit long product.
        let mut expect = ctx.real(1.0);
        for k in 0..400 {
            let qk = ctx.qpow(k);
            let f = Complex::with_val(ctx.bits(), (1 - Complex::with_val(ctx.bits(), ctx.q() * &qk)) / ((1 - Complex::with_val(ctx.bits(), p.a() * &qk)) * (1 - Complex::with_val(ctx.bits(), p.b() * &qk))));
            expect *= f;
        }
        assert!(rel_diff(&w, &expect, 0.0) < 1e-50);
    }

    #[test]
    fn weight_tends_to_one_at_zero() {
        let p = params();
        let w = weight_w(&p, &LatticePoint::plus(120)).unwrap().value(p.ctx());
        assert!(rel_diff(&w, &p.ctx().real(1.0), 0.0) < 1e-30);
    }

    #[test]
    fn weight_growth_matches_asymptotic() {
        let p = params();
        let t = p.t_plus();
        let mut prev = f64::INFINITY;
        for k in [-20, -30] {
            let w = weight_w(&p, &LatticePoint::plus(k)).unwrap().value(p.ctx());
            let asy = weight_asymptotic(&p, &t, k).unwrap();
            let r = rel_diff(&w, &asy, 0.0);
            assert!(r < prev);
            prev = r;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn weight_positive_on_grid_for_positive_cases() {
        for (a, b) in [("0.3", "0.2"), ("0.3+0.4i", "0.3-0.4i"), ("-0.7", "-0.7"), ("2.5", "3")] {
            let p = Params::parse("0.5", a, b, "1", "-1", Precision::default()).unwrap();
            assert!(p.positivity().is_positive());
            for k in -15..30 {
                let w = weight_cx(&p, &p.point(&LatticePoint::plus(k))).unwrap();
                assert!(*w.real() > 0, "w(q^{k}) not positive for a={a}");
                assert!(w.imag().clone().abs() <= w.real().clone() * 1e-40);
            }
            for k in 0..30 {
                let w = weight_cx(&p, &p.point(&LatticePoint::neg(k).unwrap())).unwrap();
                assert!(*w.real() > 0, "w(-q^{k}) not positive for a={a}");
            }
        }
    }
}
