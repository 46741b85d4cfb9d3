//! The polynomial families: `m_n`, the finite family `P_n`, and the classical `M_n`.

use rug::Complex;

use crate::error::{Error, Result};
use crate::ops::{div, mul, mulf, neg};
use crate::qseries::{qpoch_cx, rphis_cx, ErrorEstimate, QContext, SeriesSpec};
use crate::scalar::powi;

use super::weight::checked_div;
use super::Params;

/// `m_n(x;a,b;q) = ₂φ₁(q^{−n}, −bx; b; q, aq^n) / (a;q)_n`.
pub fn poly_m(p: &Params, n: u64, x: &Complex) -> Result<Complex> {
    Ok(poly_m_est(p, n, x)?.0)
}

/// [`poly_m`] together with the summation diagnostics.
pub(crate) fn poly_m_est(p: &Params, n: u64, x: &Complex) -> Result<(Complex, ErrorEstimate)> {
    let ctx = p.ctx();
    let ni = n as i64;
    let (a, b) = (p.a(), p.b());
    let den = qpoch_cx(ctx, &a, n);
    if den.is_zero() {
        return Err(Error::Domain(format!("(a;q)_{n} = 0")));
    }
    let spec = SeriesSpec::new(vec![ctx.qpow_cx(-ni), neg(&mul(&b, x))], vec![b], mulf(&a, &ctx.qpow(ni)));
    let (s, est) = rphis_cx(ctx, &spec, ctx.target_tol())?;
    Ok((div(&s, &den), est))
}

/// The classical q-Meixner polynomial `M_n(x;b,c;q) = ₂φ₁(q^{−n}, x; bq; q, −q^{n+1}/c)`.
pub fn poly_qmeixner(ctx: &QContext, n: u64, x: &Complex, b: &Complex, c: &Complex) -> Result<Complex> {
    let ni = n as i64;
    if c.is_zero() {
        return Err(Error::Domain("M_n needs c != 0".into()));
    }
    let z = neg(&div(&ctx.qpow_cx(ni + 1), c));
    let spec = SeriesSpec::new(vec![ctx.qpow_cx(-ni), ctx.cx(x)], vec![mulf(b, ctx.q())], z);
    Ok(rphis_cx(ctx, &spec, ctx.target_tol())?.0)
}

/// `P_n(x;a,b,c;q) = b^{−n} (b, qb/c;q)_n ₃φ₂(q^{−n}, abq^n/c, −bx; b, qb/c; q, q)`.
pub fn poly_p(p: &Params, n: u64, x: &Complex) -> Result<Complex> {
    let ctx = p.ctx();
    let ni = n as i64;
    let c = p.c().ok_or_else(|| Error::Input("parameter c is not set".into()))?;
    let (a, b) = (p.a(), p.b());
    let qb_c = div(&mulf(&b, ctx.q()), &c);
    let pre_poch = mul(&qpoch_cx(ctx, &b, n), &qpoch_cx(ctx, &qb_c, n));
    if pre_poch.is_zero() {
        return Err(Error::Domain(format!("(b, qb/c;q)_{n} = 0")));
    }
    let spec = SeriesSpec::new(
        vec![ctx.qpow_cx(-ni), mulf(&div(&mul(&a, &b), &c), &ctx.qpow(ni)), neg(&mul(&b, x))],
        vec![b.clone(), qb_c],
        ctx.q_cx(),
    );
    let (s, _) = rphis_cx(ctx, &spec, ctx.target_tol())?;
    Ok(mul(&checked_div(&pre_poch, &powi(&b, ni), "b^n")?, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rel_diff, Precision};

    fn params() -> Params {
        Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap()
    }

    /// Independent oracle: explicit double loop over the terminating sum.
    fn m_direct(p: &Params, n: u64, x: &Complex) -> Complex {
        let ctx = p.ctx();
        let mut s = ctx.real(0.0);
        for k in 0..=n {
            let num = mul(&qpoch_cx(ctx, &ctx.qpow_cx(-(n as i64)), k), &qpoch_cx(ctx, &neg(&mul(&p.b(), x)), k));
            let den = mul(&qpoch_cx(ctx, &ctx.q_cx(), k), &qpoch_cx(ctx, &p.b(), k));
            let z = powi(&mulf(&p.a(), &ctx.qpow(n as i64)), k as i64);
            s = Complex::with_val(ctx.bits(), &s + mul(&div(&num, &den), &z));
        }
        div(&s, &qpoch_cx(ctx, &p.a(), n))
    }

    #[test]
    fn m_zero_is_one_and_matches_direct_sum() {
        let p = params();
        let x = p.ctx().real(0.7);
        assert!(rel_diff(&poly_m(&p, 0, &x).unwrap(), &p.ctx().real(1.0), 0.0) < 1e-55);
        for n in 1..6 {
            assert!(rel_diff(&poly_m(&p, n, &x).unwrap(), &m_direct(&p, n, &x), 0.0) < 1e-50);
        }
    }

    #[test]
    fn m_is_symmetric_in_a_and_b() {
        let p = params();
        let x = p.ctx().real(0.7);
        let l = poly_m(&p, 3, &x).unwrap();
        let r = poly_m(&p.swapped(), 3, &x).unwrap();
        assert!(rel_diff(&l, &r, 0.0) < 1e-50);
    }

    #[test]
    fn m_links_to_classical_family() {
        let p = params();
        let ctx = p.ctx();
        for (n, xv) in [(2u64, 1.5), (3, 2.0)] {
            let x = ctx.real(xv);
            let (a, b) = (p.a(), p.b());
            let arg = neg(&mul(&b, &x));
            let bq = div(&b, &ctx.q_cx());
            let c = neg(&div(&ctx.q_cx(), &a));
            let mm = div(&poly_qmeixner(ctx, n, &arg, &bq, &c).unwrap(), &qpoch_cx(ctx, &a, n));
            assert!(rel_diff(&poly_m(&p, n, &x).unwrap(), &mm, 0.0) < 1e-50);
        }
    }

    #[test]
    fn p_is_symmetric_and_starts_at_one() {
        let p = params();
        let p = p.clone().with_c(mul(&p.ab(), &p.ctx().qpow_cx(8)));
        let x = p.ctx().real(0.7);
        assert!(rel_diff(&poly_p(&p, 0, &x).unwrap(), &p.ctx().real(1.0), 0.0) < 1e-55);
        for n in 1..4 {
            let l = poly_p(&p, n, &x).unwrap();
            let r = poly_p(&p.swapped(), n, &x).unwrap();
            assert!(rel_diff(&l, &r, 0.0) < 1e-45, "n = {n}");
        }
    }

    #[test]
    fn classical_family_at_x_one_is_one() {
        // The upper parameter x = 1 kills every term beyond k = 0.
        let ctx = QContext::new(0.5, Precision::default()).unwrap();
        let v = poly_qmeixner(&ctx, 4, &ctx.real(1.0), &ctx.real(0.3), &ctx.real(0.7)).unwrap();
        assert!(rel_diff(&v, &ctx.real(1.0), 0.0) < 1e-55);
    }
}
