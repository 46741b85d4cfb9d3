//! Identities of the q-series primitives: θ-function relations, classical
//! summation and transformation formulas, and elementary Jackson integrals.

use crate::error::Result;
use crate::ops::{div, mul, mulf, neg, sub};
use crate::qcalculus::{qint_zero_to, QPoint};
use crate::qseries::{qpoch_cx, qpoch_inf_cx, rphis_cx, theta_cx, QContext, SeriesSpec};
use crate::scalar::powi;

use super::super::config::{SuiteConfig, SuiteName};
use super::super::{Check, Outcome};
use super::{random_annulus, rng_for, Set, Tol};

const SUITE: SuiteName = SuiteName::QseriesIdentities;

/// One group of checks per distinct `q` among the parameter sets.
pub(super) fn checks(cfg: &SuiteConfig, sets: &[Set]) -> Vec<Check> {
    let mut qs: Vec<String> = sets.iter().map(|s| s.spec.q.clone()).collect();
    qs.sort();
    qs.dedup();
    let mut out = Vec::new();
    for q in qs {
        let ctx = match QContext::parse(&q, cfg.precision()) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let label = format!("q={q}");
        let id = |name: &str| format!("{SUITE}/q={q}/{name}");
        let mk = |name: &str, anchor: &'static str, tol: Tol, f: fn(&QContext, &mut rand_chacha::ChaCha8Rng) -> Result<Outcome>| {
            let ctx = ctx.clone();
            let mut rng = rng_for(cfg, &id(name));
            let seed_rng = rand::Rng::gen::<u64>(&mut rng);
            Check::new(id(name), anchor, label.clone(), tol.of(cfg), move || {
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed_rng);
                f(&ctx, &mut rng)
            })
        };
        out.push(mk("theta-product", "theta product identity", Tol::Identity, theta_product));
        out.push(mk("theta-relations", "theta inversion and shift relations", Tol::Identity, theta_relations));
        out.push(mk("q-binomial", "q-binomial theorem", Tol::Identity, q_binomial));
        out.push(mk("q-gauss", "q-Gauss summation", Tol::Identity, q_gauss));
        out.push(mk("q-vandermonde", "q-Vandermonde summation", Tol::Identity, q_vandermonde));
        out.push(mk("one-phi-one", "1phi1 summation", Tol::Identity, one_phi_one));
        out.push(mk("heine", "Heine transformation", Tol::Identity, heine));
        out.push(mk("jackson-moments", "Jackson integral of monomials", Tol::Identity, jackson_moments));
    }
    out
}

/// `θ(xq^k) = (−x)^{−k} q^{−k(k−1)/2} θ(x)` for 50 random `q < |x| < 1`, `|k| ≤ 10`.
fn theta_product(ctx: &QContext, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let q = ctx.q().to_f64();
    let mut worst = Vec::new();
    for _ in 0..50 {
        let x = random_annulus(rng, ctx.bits(), q, 1.0);
        let tx = theta_cx(ctx, &x)?;
        for k in -10..=10i64 {
            let lhs = theta_cx(ctx, &mulf(&x, &ctx.qpow(k)))?;
            let rhs = mulf(&mul(&powi(&neg(&x), -k), &tx), &ctx.qpow(-k * (k - 1) / 2));
            worst.push(Outcome::compare(&lhs, &rhs, 0.0));
        }
    }
    Ok(Outcome::worst(worst).with_note("50 points x 21 shifts"))
}

/// `θ(x) = θ(q/x) = −x θ(qx) = −x θ(1/x)`.
fn theta_relations(ctx: &QContext, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Vec::new();
    for _ in 0..20 {
        let x = random_annulus(rng, ctx.bits(), 0.2, 3.0);
        let t = theta_cx(ctx, &x)?;
        let one = ctx.real(1.0);
        worst.push(Outcome::compare(&t, &theta_cx(ctx, &div(&ctx.q_cx(), &x))?, 0.0));
        worst.push(Outcome::compare(&t, &neg(&mul(&x, &theta_cx(ctx, &mul(&ctx.q_cx(), &x))?)), 0.0));
        worst.push(Outcome::compare(&t, &neg(&mul(&x, &theta_cx(ctx, &div(&one, &x))?)), 0.0));
    }
    Ok(Outcome::worst(worst))
}

/// `₁φ₀(a; −; q, z) = (az;q)_∞/(z;q)_∞` for `|z| < 1`.
fn q_binomial(ctx: &QContext, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Vec::new();
    for _ in 0..10 {
        let a = random_annulus(rng, ctx.bits(), 0.1, 2.0);
        let z = random_annulus(rng, ctx.bits(), 0.05, 0.8);
        let (lhs, est) = rphis_cx(ctx, &SeriesSpec::new(vec![a.clone()], vec![], z.clone()), ctx.target_tol())?;
        let rhs = div(&qpoch_inf_cx(ctx, &mul(&a, &z)), &qpoch_inf_cx(ctx, &z));
        worst.push(Outcome::compare(&lhs, &rhs, 0.0).with_cancellation(est.cancellation.0));
    }
    Ok(Outcome::worst(worst))
}

/// `₂φ₁(a, b; c; q, c/ab) = (c/a, c/b;q)_∞ / (c, c/ab;q)_∞` for `|c/ab| < 1`.
fn q_gauss(ctx: &QContext, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Vec::new();
    for _ in 0..10 {
        let a = random_annulus(rng, ctx.bits(), 1.2, 3.0);
        let b = random_annulus(rng, ctx.bits(), 1.2, 3.0);
        let c = random_annulus(rng, ctx.bits(), 0.1, 0.9);
        let z = div(&c, &mul(&a, &b));
        let (lhs, est) = rphis_cx(ctx, &SeriesSpec::new(vec![a.clone(), b.clone()], vec![c.clone()], z.clone()), ctx.target_tol())?;
        let rhs = div(
            &mul(&qpoch_inf_cx(ctx, &div(&c, &a)), &qpoch_inf_cx(ctx, &div(&c, &b))),
            &mul(&qpoch_inf_cx(ctx, &c), &qpoch_inf_cx(ctx, &z)),
        );
        worst.push(Outcome::compare(&lhs, &rhs, 0.0).with_cancellation(est.cancellation.0));
    }
    Ok(Outcome::worst(worst))
}

/// `₂φ₁(q^{−n}, b; c; q, q) = (c/b;q)_n b^n / (c;q)_n`.
fn q_vandermonde(ctx: &QContext, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Vec::new();
    for n in 0..8u64 {
        let b = random_annulus(rng, ctx.bits(), 0.2, 2.0);
        let c = random_annulus(rng, ctx.bits(), 0.2, 2.0);
        let spec = SeriesSpec::new(vec![ctx.qpow_cx(-(n as i64)), b.clone()], vec![c.clone()], ctx.q_cx());
        let (lhs, est) = rphis_cx(ctx, &spec, ctx.target_tol())?;
        let rhs = div(&mul(&qpoch_cx(ctx, &div(&c, &b), n), &powi(&b, n as i64)), &qpoch_cx(ctx, &c, n));
        worst.push(Outcome::compare(&lhs, &rhs, 0.0).with_cancellation(est.cancellation.0));
    }
    Ok(Outcome::worst(worst))
}

/// `₁φ₁(a; c; q, c/a) = (c/a;q)_∞ / (c;q)_∞`.
fn one_phi_one(ctx: &QContext, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Vec::new();
    for _ in 0..10 {
        let a = random_annulus(rng, ctx.bits(), 0.2, 3.0);
        let c = random_annulus(rng, ctx.bits(), 0.2, 3.0);
        let z = div(&c, &a);
        let (lhs, est) = rphis_cx(ctx, &SeriesSpec::new(vec![a.clone()], vec![c.clone()], z.clone()), ctx.target_tol())?;
        let rhs = div(&qpoch_inf_cx(ctx, &z), &qpoch_inf_cx(ctx, &c));
        worst.push(Outcome::compare(&lhs, &rhs, 0.0).with_cancellation(est.cancellation.0));
    }
    Ok(Outcome::worst(worst))
}

/// `₂φ₁(a, b; c; q, z) = (b, az;q)_∞/(c, z;q)_∞ · ₂φ₁(c/b, z; az; q, b)` for `|z|, |b| < 1`.
fn heine(ctx: &QContext, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Vec::new();
    let tol = ctx.target_tol();
    for _ in 0..10 {
        let a = random_annulus(rng, ctx.bits(), 0.2, 2.0);
        let b = random_annulus(rng, ctx.bits(), 0.1, 0.8);
        let c = random_annulus(rng, ctx.bits(), 0.2, 2.0);
        let z = random_annulus(rng, ctx.bits(), 0.1, 0.8);
        let az = mul(&a, &z);
        let (lhs, e1) = rphis_cx(ctx, &SeriesSpec::new(vec![a.clone(), b.clone()], vec![c.clone()], z.clone()), tol)?;
        let (s, e2) = rphis_cx(ctx, &SeriesSpec::new(vec![div(&c, &b), z.clone()], vec![az.clone()], b.clone()), tol)?;
        let pre = div(&mul(&qpoch_inf_cx(ctx, &b), &qpoch_inf_cx(ctx, &az)), &mul(&qpoch_inf_cx(ctx, &c), &qpoch_inf_cx(ctx, &z)));
        worst.push(Outcome::compare(&lhs, &mul(&pre, &s), 0.0).with_cancellation(e1.cancellation.0.max(e2.cancellation.0)));
    }
    Ok(Outcome::worst(worst))
}

/// `∫_0^1 x^n d_qx = (1−q)/(1−q^{n+1})`.
fn jackson_moments(ctx: &QContext, _rng: &mut rand_chacha::ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Vec::new();
    for n in 0..6i64 {
        let r = qint_zero_to(ctx, |p: &QPoint| Ok(powi(&p.x, n)), &ctx.real(1.0), ctx.target_tol())?;
        let one = ctx.real(1.0);
        let expect = div(&sub(&one, &ctx.q_cx()), &sub(&one, &ctx.qpow_cx(n + 1)));
        worst.push(Outcome::compare(r.complex(), &expect, 0.0));
    }
    Ok(Outcome::worst(worst))
}

#[cfg(test)]
pub(crate) fn context_for_tests() -> (QContext, SuiteConfig) {
    let cfg = SuiteConfig::default();
    (QContext::parse("0.5", cfg.precision()).unwrap(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn identities_hold() {
        let (ctx, cfg) = context_for_tests();
        for f in [theta_product, theta_relations, q_binomial, q_gauss, q_vandermonde, one_phi_one, heine, jackson_moments] {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
            let o = f(&ctx, &mut rng).unwrap();
            assert!(o.residual < Tol::Identity.of(&cfg), "residual {:e}", o.residual);
        }
    }
}
