//! The polynomials `m_n`: orthogonality at two values of `t₊` (the
//! indeterminacy witness), the link with the classical q-Meixner
//! polynomials, the reduction of `φ_{−q^n}` and positivity of the weight.

use std::sync::Arc;

use rug::Float;

use crate::error::Result;
use crate::meixner::closed::h_n;
use crate::meixner::{classify_positivity, phi, poly_m, poly_qmeixner, weight_cx, CachedFamily, Family, Params, PhiRoute, Point, SpectralPoint};
use crate::ops::{div, mul, neg};
use crate::qcalculus::LatticePoint;
use crate::qseries::qpoch_cx;
use crate::scalar::{abs_f64, parse_real};

use super::super::config::{SuiteConfig, SuiteName};
use super::super::{Check, Outcome};
use super::{gram_outcome, random_annulus, rng_for, Form, Set, Tol};

const SUITE: SuiteName = SuiteName::MeixnerPoly;

pub(super) fn checks(cfg: &SuiteConfig, set: &Set) -> Vec<Check> {
    let mut out = Vec::new();
    let base = set.params.clone();
    let mut variants = vec![(set.spec.t_plus.clone(), Ok(base.clone()))];
    if cfg.alt_t != set.spec.t_plus {
        let alt = parse_real(base.bits(), &cfg.alt_t).and_then(|t: Float| base.with_t_plus(t)).map(Arc::new);
        variants.push((cfg.alt_t.clone(), alt));
    }
    for (t, params) in variants {
        let label = format!("{} [t+={t}]", set.label());
        let params = match params {
            Ok(p) => p,
            Err(e) => {
                let msg = e.to_string();
                out.push(Check::new(set.id(SUITE, &format!("gram[t={t}]")), "m_n orthogonality", label, 0.0, move || {
                    Err(crate::error::Error::Input(msg.clone()))
                }));
                continue;
            }
        };
        let form = Form::for_params(&params);
        let fams: Vec<Arc<CachedFamily>> = (0..=cfg.gram_n).map(|n| Arc::new(CachedFamily::new(&params, Family::M(n)))).collect();
        for n in 0..=cfg.gram_n {
            for m in n..=cfg.gram_n {
                let (p, f, g) = (params.clone(), fams[n as usize].clone(), fams[m as usize].clone());
                let (anchor, tol) = if n == m {
                    ("m_n norm h_n I", Tol::Norm.of(cfg))
                } else {
                    ("m_n orthogonality", Tol::Strict.of(cfg))
                };
                out.push(Check::new(set.id(SUITE, &format!("gram[t={t}]/{n}-{m}")), anchor, format!("{label}, {}", form.label()), tol, move || {
                    let v = form.apply(&p, f.as_ref(), g.as_ref())?;
                    if n == m {
                        Ok(gram_outcome(&v, Some(&mul(&h_n(&p, n)?, &form.mass(&p)?))))
                    } else {
                        Ok(gram_outcome(&v, None))
                    }
                }));
            }
        }
    }

    let (p, n_max) = (base.clone(), cfg.gram_n);
    let seed = rng_seed(cfg, &set.id(SUITE, "qmeixner-link"));
    out.push(Check::new(set.id(SUITE, "qmeixner-link"), "link between m_n and the q-Meixner polynomials", set.label(), Tol::Identity.of(cfg), move || {
        qmeixner_link(&p, n_max, seed)
    }));
    let (p, n_max) = (base.clone(), cfg.gram_n);
    let seed = rng_seed(cfg, &set.id(SUITE, "phi-reduction"));
    out.push(Check::new(set.id(SUITE, "phi-reduction"), "phi at gamma = -q^n reduces to m_n", set.label(), Tol::Identity.of(cfg), move || {
        phi_reduction(&p, n_max, seed)
    }));
    let p = base.clone();
    out.push(Check::new(set.id(SUITE, "weight-positivity"), "positivity of the weight under the parameter conditions", set.label(), Tol::Identity.of(cfg), move || {
        positivity(&p)
    }));
    out
}

fn rng_seed(cfg: &SuiteConfig, id: &str) -> u64 {
    rand::Rng::gen(&mut rng_for(cfg, id))
}

fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `m_n(x;a,b) (a;q)_n = M_n(−bx; b/q, −q/a)` at 10 random points per degree.
fn qmeixner_link(p: &Params, n_max: u64, seed: u64) -> Result<Outcome> {
    let ctx = p.ctx();
    let mut rng = seeded(seed);
    let (a, b) = (p.a(), p.b());
    let bq = div(&b, &ctx.q_cx());
    let cq = neg(&div(&ctx.q_cx(), &a));
    let mut out = Vec::new();
    for n in 0..=n_max {
        for _ in 0..10 {
            let x = random_annulus(&mut rng, p.bits(), 0.1, 5.0);
            let lhs = mul(&poly_m(p, n, &x)?, &qpoch_cx(ctx, &a, n));
            let rhs = poly_qmeixner(ctx, n, &neg(&mul(&b, &x)), &bq, &cq)?;
            out.push(Outcome::compare(&lhs, &rhs, 0.0));
        }
    }
    Ok(Outcome::worst(out))
}

/// `φ_{−q^n}(x) = m_n(x)`, with `φ` summed from its defining series.
fn phi_reduction(p: &Params, n_max: u64, seed: u64) -> Result<Outcome> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    for n in 0..=n_max {
        for _ in 0..5 {
            let x = random_annulus(&mut rng, p.bits(), 0.1, 5.0);
            let lhs = phi(p, &SpectralPoint::neg_qn(n as i64), &Point::Value(x.clone()), PhiRoute::Definition)?.value;
            out.push(Outcome::compare(&lhs, &poly_m(p, n, &x)?, 0.0));
        }
    }
    Ok(Outcome::worst(out))
}

/// The weight is real and positive at every lattice point of a wide window
/// whenever the parameters satisfy one of the positivity conditions; the
/// residual is the largest relative imaginary part.
fn positivity(p: &Params) -> Result<Outcome> {
    let class = classify_positivity(p);
    if !class.is_positive() {
        return Ok(Outcome::skipped("parameters satisfy none of the positivity conditions"));
    }
    if !p.t_minus_is_minus_one() {
        return Ok(Outcome::skipped("positivity is asserted for t- = -1 only"));
    }
    let mut points: Vec<LatticePoint> = (-40..=40).map(LatticePoint::plus).collect();
    for k in 0..=40 {
        points.push(LatticePoint::neg(k)?);
    }
    let mut worst_imag = 0.0f64;
    for x in &points {
        let w = weight_cx(p, &p.point(x))?;
        let (re, im) = (w.real().to_f64(), w.imag().to_f64());
        if re.is_nan() || *w.real() <= 0 {
            return Ok(Outcome::from_residual(f64::INFINITY, abs_f64(&w), 0.0).with_note(format!("w <= 0 at {x:?}")));
        }
        worst_imag = worst_imag.max(im.abs() / re);
    }
    Ok(Outcome::from_residual(worst_imag, 1.0, 1.0).with_note(format!("{}; residual is max |Im w|/Re w", class.label())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Precision;

    #[test]
    fn link_reduction_and_positivity() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap();
        assert!(qmeixner_link(&p, 3, 7).unwrap().residual < 1e-35);
        assert!(phi_reduction(&p, 3, 7).unwrap().residual < 1e-35);
        let o = positivity(&p).unwrap();
        assert!(o.skipped.is_none() && o.residual < 1e-40);
    }
}
