//! The bilateral ₂ψ₂ evaluation of the weight integral and its special cases.
//!
//! The summation side is the Jackson q-integral of `w_c(x) = w(x) (−cx;q)_∞`,
//! evaluated with the same lattice integrators as the inner products; the
//! closed side is the θ/Pochhammer product.

use rug::Complex;

use crate::error::Result;
use crate::meixner::closed::{integral_i, integral_i_c, integral_two_anchor_own_c, integral_two_anchor, integral_two_anchor_c};
use crate::meixner::{inner_single, inner_two_anchor, Params};
use crate::ops::{mulf, neg};
use crate::qcalculus::LatticePoint;
use crate::qseries::qpoch_inf_cx;
use crate::scalar::abs_f64;

use super::super::config::{SuiteConfig, SuiteName};
use super::super::{Check, Outcome};
use super::{Set, Tol};

const SUITE: SuiteName = SuiteName::Lemma21;

pub(super) fn checks(cfg: &SuiteConfig, set: &Set) -> Vec<Check> {
    let tol = Tol::Strict.of(cfg);
    let mk = |name: &str, anchor: &'static str, tol: f64, f: fn(&Params) -> Result<Outcome>| {
        let p = set.params.clone();
        Check::new(set.id(SUITE, name), anchor, set.label(), tol, move || f(&p))
    };
    vec![
        mk("two-anchor-c", "2psi2 evaluation of the two-anchor weight integral", tol, two_anchor_c),
        mk("two-anchor-c0", "two-anchor weight integral with c = 0", tol, two_anchor_c0),
        mk("single-anchor-c", "single-anchor weight integral (t- = -1 reduction)", tol, single_anchor_c),
        mk("single-anchor-c0", "single-anchor weight integral with c = 0", tol, single_anchor_c0),
        mk("t-periodicity", "q-periodicity of the closed form in t+ and t-", Tol::Identity.of(cfg), periodicity),
        mk("c-limit", "c -> 0 limit of the general evaluation", tol, c_limit),
    ]
}

/// `(−cx;q)_∞` as a lattice function.
fn c_factor<'a>(p: &'a Params, c: &'a Complex) -> impl Fn(&LatticePoint) -> Result<Complex> + 'a {
    move |x: &LatticePoint| Ok(qpoch_inf_cx(p.ctx(), &neg(&crate::ops::mul(c, &p.point(x)))))
}

fn one(p: &Params) -> impl Fn(&LatticePoint) -> Result<Complex> + '_ {
    move |_: &LatticePoint| Ok(p.ctx().real(1.0))
}

/// The `c`-dependent checks need `c` set and `|c/ab| < 1`.
fn gate_c(p: &Params) -> std::result::Result<Complex, Outcome> {
    let Some(c) = p.c() else {
        return Err(Outcome::skipped("parameter c is not configured"));
    };
    if abs_f64(&crate::ops::div(&c, &p.ab())) >= 1.0 {
        return Err(Outcome::skipped("|c/ab| >= 1: the integral diverges"));
    }
    Ok(c)
}

fn judged(value: &crate::meixner::InnerProduct, closed: &Complex) -> Outcome {
    Outcome::compare(&value.value, closed, 0.0).with_cancellation(value.scale / abs_f64(&value.value).max(f64::MIN_POSITIVE))
}

fn two_anchor_c(p: &Params) -> Result<Outcome> {
    let c = match gate_c(p) {
        Ok(c) => c,
        Err(o) => return Ok(o),
    };
    let v = inner_two_anchor(p, &c_factor(p, &c), &one(p))?;
    Ok(judged(&v, &integral_two_anchor_own_c(p)?))
}

fn two_anchor_c0(p: &Params) -> Result<Outcome> {
    let v = inner_two_anchor(p, &one(p), &one(p))?;
    Ok(judged(&v, &integral_two_anchor(p)?))
}

fn single_anchor_c(p: &Params) -> Result<Outcome> {
    let c = match gate_c(p) {
        Ok(c) => c,
        Err(o) => return Ok(o),
    };
    let v = inner_single(p, &c_factor(p, &c), &one(p))?;
    Ok(judged(&v, &integral_i_c(p)?))
}

fn single_anchor_c0(p: &Params) -> Result<Outcome> {
    let v = inner_single(p, &one(p), &one(p))?;
    Ok(judged(&v, &integral_i(p)?))
}

/// The closed form at `t₊` and `qt₊`, and at `t₋` and `qt₋`, for `c = 0` and the configured `c`.
fn periodicity(p: &Params) -> Result<Outcome> {
    let q = p.ctx().q().clone();
    let tp = p.with_t_plus(mulf(&p.t_plus(), &q).real().clone())?;
    let tm = p.with_t_minus(mulf(&p.t_minus(), &q).real().clone())?;
    let mut out = Vec::new();
    let base = integral_two_anchor(p)?;
    out.push(Outcome::compare(&base, &integral_two_anchor(&tp)?, 0.0));
    out.push(Outcome::compare(&base, &integral_two_anchor(&tm)?, 0.0));
    out.push(Outcome::compare(&integral_i(p)?, &integral_i(&tp)?, 0.0));
    if let Ok(c) = gate_c(p) {
        let base_c = integral_two_anchor_c(p, &c)?;
        out.push(Outcome::compare(&base_c, &integral_two_anchor_c(&tp, &c)?, 0.0));
        out.push(Outcome::compare(&base_c, &integral_two_anchor_c(&tm, &c)?, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// The general evaluation at `c = ab q^J`, with `q^J` below the working
/// tolerance, against the `c = 0` formula.
fn c_limit(p: &Params) -> Result<Outcome> {
    let ctx = p.ctx();
    let j = (ctx.target_tol().ln() / ctx.ln_q_f64()).ceil() as i64;
    let c = mulf(&p.ab(), &ctx.qpow(j));
    Ok(Outcome::compare(&integral_two_anchor_c(p, &c)?, &integral_two_anchor(p)?, 0.0).with_note(format!("c = ab q^{j}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Precision;

    #[test]
    fn example_set_passes_all_variants() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap().with_c(crate::scalar::cx(197, 0.02));
        for f in [two_anchor_c, two_anchor_c0, single_anchor_c, single_anchor_c0, c_limit] {
            let o = f(&p).unwrap();
            assert!(o.skipped.is_none());
            assert!(o.residual < 1e-25, "{}", o.residual);
        }
        assert!(periodicity(&p).unwrap().residual < 1e-30);
    }

    #[test]
    fn divergent_c_is_skipped() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap().with_c(crate::scalar::cx(197, 0.1));
        assert!(two_anchor_c(&p).unwrap().skipped.is_some());
    }
}
