//! Orthogonality of the finite family `P_n` for the weight `w_c`, which has
//! only finitely many moments.
//!
//! The suite uses its own `c = ab q^J` (configurable `J`), so that exactly the
//! pairs with `n + m < J` are admissible; the others are reported as skipped.

use std::sync::Arc;

use rug::Complex;

use crate::error::Result;
use crate::meixner::closed::{big_h_n, integral_two_anchor_c};
use crate::meixner::{CachedFamily, Family, Params};
use crate::ops::{div, mul, mulf, neg};
use crate::qcalculus::{LatticeFunction, LatticePoint};
use crate::qseries::qpoch_inf_cx;
use crate::scalar::abs_f64;

use super::super::config::{SuiteConfig, SuiteName};
use super::super::{Check, Outcome};
use super::{gram_outcome, Form, Set, Tol};

const SUITE: SuiteName = SuiteName::FiniteFamily;

/// `P_n(x) (−cx;q)_∞`, so that the two-anchor product with `P_m` integrates against `w_c`.
struct WithC {
    poly: Arc<CachedFamily>,
    params: Arc<Params>,
    c: Complex,
}

impl LatticeFunction for WithC {
    fn eval_at(&self, x: &LatticePoint) -> Result<Complex> {
        let p = &self.params;
        let f = qpoch_inf_cx(p.ctx(), &neg(&mul(&self.c, &p.point(x))));
        Ok(mul(&self.poly.eval_at(x)?, &f))
    }
}

pub(super) fn checks(cfg: &SuiteConfig, set: &Set) -> Vec<Check> {
    let base = &set.params;
    let c = mulf(&base.ab(), &base.ctx().qpow(cfg.finite_c_power));
    let p = Arc::new((**base).clone().with_c(c.clone()));
    let polys: Vec<Arc<CachedFamily>> = (0..=cfg.finite_n).map(|n| Arc::new(CachedFamily::new(&p, Family::P(n)))).collect();
    let label = format!("{}, c=ab*q^{}", set.label(), cfg.finite_c_power);
    let mut out = Vec::new();
    for n in 0..=cfg.finite_n {
        for m in n..=cfg.finite_n {
            let (p, c) = (p.clone(), c.clone());
            let f = WithC { poly: polys[n as usize].clone(), params: p.clone(), c: c.clone() };
            let g = polys[m as usize].clone();
            let (anchor, tol) = if n == m {
                ("finite-family norm H_n I(a,b,c;t-,t+)", Tol::Norm.of(cfg))
            } else {
                ("finite-family orthogonality", Tol::Strict.of(cfg))
            };
            out.push(Check::new(set.id(SUITE, &format!("gram/{n}-{m}")), anchor, label.clone(), tol, move || {
                gram_entry(&p, &c, n, m, &f, g.as_ref())
            }));
        }
    }
    out
}

/// Whether `|c/ab| < q^{n+m}`, with a relative margin so that the boundary
/// pair is rejected despite rounding.
fn admissible(p: &Params, c: &Complex, n: u64, m: u64) -> bool {
    let ratio = abs_f64(&div(c, &p.ab()));
    let bound = p.ctx().qpow((n + m) as i64).to_f64();
    ratio < bound * (1.0 - 1e-9)
}

fn gram_entry(p: &Params, c: &Complex, n: u64, m: u64, f: &WithC, g: &CachedFamily) -> Result<Outcome> {
    if !admissible(p, c, n, m) {
        return Ok(Outcome::skipped(format!("|c/ab| >= q^{}: moment of order {} diverges", n + m, n + m)));
    }
    let v = Form::TwoAnchor.apply(p, f, g)?;
    if n == m {
        let expect = mul(&big_h_n(p, n)?, &integral_two_anchor_c(p, c)?);
        Ok(gram_outcome(&v, Some(&expect)))
    } else {
        Ok(gram_outcome(&v, None))
    }
}
