//! Closed-form evaluations of q-integrals and norms.
//!
//! These are the right-hand sides that the summation side of each
//! orthogonality relation is compared against.

use rug::Complex;

use crate::error::{Error, Result};
use crate::ops::{div, mul, mulf, neg, prod};
use crate::qseries::{qpoch_cx, qpoch_int_cx};
use crate::scalar::powi;

use super::weight::{checked_div, pinf, th};
use super::Params;

fn one_minus_q(p: &Params) -> Complex {
    let ctx = p.ctx();
    Complex::with_val(ctx.bits(), ctx.real(1.0) - ctx.q_cx())
}

fn require_c(p: &Params) -> Result<Complex> {
    p.c().ok_or_else(|| Error::Input("parameter c is not set".into()))
}

/// The two-anchor integral with `c = 0`:
/// `∫_{∞(t₋)}^{∞(t₊)} w(x) d_qx = (1−q)t₊ (q;q)_∞/(a,b;q)_∞ · θ(abt₋t₊, t₋/t₊, a, b)/θ(−at₊, −at₋, −bt₊, −bt₋)`.
pub fn integral_two_anchor(p: &Params) -> Result<Complex> {
    integral_two_anchor_c(p, &p.ctx().real(0.0))
}

/// The bilateral sum with the extra parameter `c` (needs `|c/ab| < 1`):
/// `∫_{∞(t₋)}^{∞(t₊)} w_c(x) d_qx`.
pub fn integral_two_anchor_c(p: &Params, c: &Complex) -> Result<Complex> {
    let ctx = p.ctx();
    let (a, b, tp, tm) = (p.a(), p.b(), p.t_plus(), p.t_minus());
    let ab = p.ab();
    let q = ctx.q_cx();
    let num_p = pinf(p, &[q, div(c, &a), div(c, &b)]);
    let den_p = pinf(p, &[a.clone(), b.clone(), div(c, &ab)]);
    let num_t = th(p, &[prod(ctx.bits(), &[&ab, &tm, &tp]), div(&tm, &tp), a.clone(), b.clone()])?;
    let den_t = th(p, &[neg(&mul(&a, &tp)), neg(&mul(&a, &tm)), neg(&mul(&b, &tp)), neg(&mul(&b, &tm))])?;
    let pre = prod(ctx.bits(), &[&one_minus_q(p), &tp]);
    let r = checked_div(&mul(&num_p, &num_t), &mul(&den_p, &den_t), "two-anchor integral")?;
    Ok(mul(&pre, &r))
}

/// [`integral_two_anchor_c`] with the parameter `c` of the bundle.
pub fn integral_two_anchor_own_c(p: &Params) -> Result<Complex> {
    integral_two_anchor_c(p, &require_c(p)?)
}

/// `I(a,b;t) = ∫_{−1}^{∞(t)} w(x) d_qx = (1−q) t (q;q)_∞/(a,b;q)_∞ · θ(−abt, −1/t)/θ(−at, −bt)` with `t = t₊`.
pub fn integral_i(p: &Params) -> Result<Complex> {
    let ctx = p.ctx();
    let (a, b, t) = (p.a(), p.b(), p.t_plus());
    let num = mul(&pinf(p, &[ctx.q_cx()]), &th(p, &[neg(&mul(&p.ab(), &t)), neg(&super::weight::recip(&t)?)])?);
    let den = mul(&pinf(p, &[a.clone(), b.clone()]), &th(p, &[neg(&mul(&a, &t)), neg(&mul(&b, &t))])?);
    Ok(prod(ctx.bits(), &[&one_minus_q(p), &t, &checked_div(&num, &den, "I(a,b;t)")?]))
}

/// The single-anchor reduction with parameter `c`: `I(a,b;t) (c/a, c/b;q)_∞/(c/ab;q)_∞`.
pub fn integral_i_c(p: &Params) -> Result<Complex> {
    let c = require_c(p)?;
    let (a, b) = (p.a(), p.b());
    let f = checked_div(&pinf(p, &[div(&c, &a), div(&c, &b)]), &pinf(p, &[div(&c, &p.ab())]), "c/ab")?;
    Ok(mul(&integral_i(p)?, &f))
}

/// Squared norm factor of `m_n`: `h_n(a,b) = q^{−n}(q;q)_n / (a,b;q)_n`.
pub fn h_n(p: &Params, n: u64) -> Result<Complex> {
    let ctx = p.ctx();
    let num = mulf(&qpoch_cx(ctx, &ctx.q_cx(), n), &ctx.qpow(-(n as i64)));
    let den = mul(&qpoch_cx(ctx, &p.a(), n), &qpoch_cx(ctx, &p.b(), n));
    checked_div(&num, &den, "h_n")
}

/// Squared norm factor of `P_n`:
/// `H_n = (−c)^{−n} q^{n(n+1)/2} (q, a, b, aq/c, bq/c;q)_n (abq^n/c;q)_n / (abq/c;q)_{2n}`.
pub fn big_h_n(p: &Params, n: u64) -> Result<Complex> {
    let ctx = p.ctx();
    let c = require_c(p)?;
    let (a, b) = (p.a(), p.b());
    let q = ctx.q_cx();
    let ni = n as i64;
    let mut num = ctx.real(1.0);
    for x in [q.clone(), a.clone(), b.clone(), div(&mul(&a, &q), &c), div(&mul(&b, &q), &c), mulf(&div(&p.ab(), &c), &ctx.qpow(ni))] {
        num = mul(&num, &qpoch_cx(ctx, &x, n));
    }
    let den = qpoch_cx(ctx, &mulf(&div(&p.ab(), &c), ctx.q()), 2 * n);
    let pre = mulf(&powi(&neg(&c), -ni), &ctx.qpow(ni * (ni + 1) / 2));
    Ok(mul(&pre, &checked_div(&num, &den, "H_n")?))
}

/// Indefinite squared norm of the terminating family `Φ_{−q^{1+n}/a}`:
/// `(1−q) q^{−n} (q²/a;q)_n/(q, qb/a;q)_n · (q;q)³_∞ θ(b)² θ(qbt₋t₊, t₋/t₊, q²/a)
///  / ((q²/a, a/b;q)_∞ θ(−qt₋, −qt₊, −bt₋, −bt₊))`.
pub fn phi_terminating_norm(p: &Params, n: u64) -> Result<Complex> {
    let ctx = p.ctx();
    let bits = ctx.bits();
    let (a, b, tp, tm) = (p.a(), p.b(), p.t_plus(), p.t_minus());
    let q = ctx.q_cx();
    let q2a = div(&mulf(&q, ctx.q()), &a);
    let ni = n as i64;
    let fin = checked_div(
        &qpoch_cx(ctx, &q2a, n),
        &mul(&qpoch_cx(ctx, &q, n), &qpoch_cx(ctx, &div(&mul(&q, &b), &a), n)),
        "terminating norm",
    )?;
    let q3 = powi(&pinf(p, &[q.clone()]), 3);
    let thb = th(p, &[b.clone()])?;
    let num = prod(bits, &[&q3, &thb, &thb, &th(p, &[prod(bits, &[&q, &b, &tm, &tp]), div(&tm, &tp), q2a.clone()])?]);
    let den = mul(
        &pinf(p, &[q2a, div(&a, &b)]),
        &th(p, &[neg(&mul(&q, &tm)), neg(&mul(&q, &tp)), neg(&mul(&b, &tm)), neg(&mul(&b, &tp))])?,
    );
    let pre = mulf(&mul(&one_minus_q(p), &fin), &ctx.qpow(-ni));
    Ok(mul(&pre, &checked_div(&num, &den, "terminating norm")?))
}

/// Indefinite squared norm of `Φ_{γ_n}`, `γ_n = −q^n/(abt₋t₊)`, for any integer `n`:
/// `(1−q) t₊ b q^{−n} (q/abt₋t₊;q)_n / (1/at₋t₊, 1/bt₋t₊;q)_n · (q;q)²_∞ (abt₋t₊, 1/bt₋t₊;q)_∞/(aqt₋t₊;q)_∞
///  · θ(b)² θ(bt₋t₊, t₋/t₊)/θ(−bt₋, −bt₊)²`.
pub fn phi_gamma_n_norm(p: &Params, n: i64) -> Result<Complex> {
    let ctx = p.ctx();
    let bits = ctx.bits();
    let (a, b, tp, tm) = (p.a(), p.b(), p.t_plus(), p.t_minus());
    let q = ctx.q_cx();
    let s = mul(&tm, &tp);
    let abs_ = mul(&p.ab(), &s);
    let one = ctx.real(1.0);
    let inv_as = div(&one, &mul(&a, &s));
    let inv_bs = div(&one, &mul(&b, &s));
    let fin_num = qpoch_int_cx(ctx, &div(&q, &abs_), n)?;
    let fin_den = mul(&qpoch_int_cx(ctx, &inv_as, n)?, &qpoch_int_cx(ctx, &inv_bs, n)?);
    let fin = checked_div(&fin_num, &fin_den, "gamma_n norm")?;
    let qq = pinf(p, &[q.clone()]);
    let inf = checked_div(&prod(bits, &[&qq, &qq, &pinf(p, &[abs_.clone(), inv_bs])]), &pinf(p, &[prod(bits, &[&a, &q, &s])]), "gamma_n norm")?;
    let thb = th(p, &[b.clone()])?;
    let thd = th(p, &[neg(&mul(&b, &tm)), neg(&mul(&b, &tp))])?;
    let thetas = checked_div(&prod(bits, &[&thb, &thb, &th(p, &[mul(&b, &s), div(&tm, &tp)])?]), &mul(&thd, &thd), "gamma_n norm")?;
    let pre = mulf(&prod(bits, &[&one_minus_q(p), &tp, &b]), &ctx.qpow(-n));
    Ok(prod(bits, &[&pre, &fin, &inf, &thetas]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rel_diff, Precision};

    #[test]
    fn c_zero_and_single_anchor_reductions_agree() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap();
        let i0 = integral_two_anchor(&p).unwrap();
        let i = integral_i(&p).unwrap();
        assert!(rel_diff(&i0, &i, 0.0) < 1e-50);
        let pc = p.clone().with_c(p.ctx().real(0.02));
        let ic = integral_two_anchor_own_c(&pc).unwrap();
        let ic1 = integral_i_c(&pc).unwrap();
        assert!(rel_diff(&ic, &ic1, 0.0) < 1e-50);
    }

    #[test]
    fn zero_degree_norms_are_one() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-0.7", Precision::default()).unwrap();
        let p = p.clone().with_c(mul(&p.ab(), &p.ctx().qpow_cx(8)));
        assert!(rel_diff(&big_h_n(&p, 0).unwrap(), &p.ctx().real(1.0), 0.0) < 1e-55);
        assert!(rel_diff(&h_n(&p, 0).unwrap(), &p.ctx().real(1.0), 0.0) < 1e-55);
    }
}
