//! The q-Meixner functions: eigenvalue equations, the duality and symmetry
//! battery, agreement of all series representations, and the structural
//! properties of `Φ_γ^±` and `Φ_γ^†`.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rug::Complex;

use crate::error::Result;
use crate::meixner::weight::pinf;
use crate::meixner::{
    big_phi, big_phi_all_routes, big_phi_asymptotic, k_factor, mu, phi, phi_all_routes, phi_dagger, poly_m, poly_p, psi, psi_all_routes,
    BigPhiRoute, Family, Params, PhiRoute, Point, PsiRoute, Side, SpectralPoint,
};
use crate::ops::{div, mul, mulf, neg, sub};
use crate::qcalculus::{qderiv_cx, LatticePoint};
use crate::qseries::theta_cx;
use crate::scalar::{abs_f64, parse_complex};
use crate::spectral::OperatorL;

use super::super::config::{SuiteConfig, SuiteName};
use super::super::{Check, Outcome};
use super::{random_annulus, rng_for, Set, Tol, GENERIC_GAMMAS};

const SUITE: SuiteName = SuiteName::MeixnerFunction;

/// Inputs shared by the checks of one parameter set.
struct Job {
    p: Arc<Params>,
    seed: u64,
    instances: usize,
}

impl Job {
    fn rng(&self) -> ChaCha8Rng {
        rand::SeedableRng::seed_from_u64(self.seed)
    }
}

pub(super) fn checks(cfg: &SuiteConfig, set: &Set) -> Vec<Check> {
    let mk_tol = |name: &str, anchor: &'static str, tol: f64, f: fn(&Job) -> Result<Outcome>| {
        let id = set.id(SUITE, name);
        let job = Job { p: set.params.clone(), seed: rand::Rng::gen(&mut rng_for(cfg, &id)), instances: cfg.random_instances };
        Check::new(id, anchor, set.label(), tol, move || f(&job))
    };
    let mk = |name: &str, anchor: &'static str, tol: Tol, f: fn(&Job) -> Result<Outcome>| mk_tol(name, anchor, tol.of(cfg), f);
    vec![
        mk("eigen/phi", "eigenvalue equation for phi", Tol::Pointwise, |j| eigen(j, Which::Phi)),
        mk("eigen/psi", "eigenvalue equation for psi", Tol::Pointwise, |j| eigen(j, Which::Psi)),
        mk("eigen/Phi+", "eigenvalue equation for Phi+", Tol::Pointwise, |j| eigen(j, Which::BigPhi(Side::Plus))),
        mk("eigen/Phi-", "eigenvalue equation for Phi-", Tol::Pointwise, |j| eigen(j, Which::BigPhi(Side::Minus))),
        mk("duality/phi", "self-duality of phi in x and gamma", Tol::Pointwise, phi_duality),
        mk("duality/psi", "near self-duality of psi", Tol::Pointwise, psi_duality),
        mk("ab-symmetry/m_n", "a <-> b symmetry of m_n", Tol::Pointwise, symmetry_m),
        mk("ab-symmetry/P_n", "a <-> b symmetry of P_n", Tol::Pointwise, symmetry_p),
        mk("ab-symmetry/phi", "a <-> b symmetry of phi", Tol::Pointwise, symmetry_phi),
        mk("routes/phi", "agreement of the series representations of phi", Tol::Pointwise, routes_phi),
        mk("routes/psi", "agreement of the representations of psi", Tol::Pointwise, routes_psi),
        mk("routes/Phi", "agreement of the representations of Phi", Tol::Pointwise, routes_big_phi),
        mk("Phi-terminating", "terminating series of Phi at gamma = -q^(1+n)/a", Tol::Pointwise, terminating),
        mk("Phi-vanishing", "Phi vanishes on the t+ lattice for gamma in -q^(-N)/a", Tol::Pointwise, vanishing),
        mk_tol("Phi-asymptotics", "leading asymptotic term of Phi", asymptotic_bound(&set.params), asymptotics),
        mk("Phi-dagger", "Phi-dagger is a q-periodic multiple of Phi", Tol::Pointwise, dagger),
        mk("qderiv-ladder", "q-derivative of phi shifts the parameters", Tol::Pointwise, ladder),
    ]
}

#[derive(Clone, Copy)]
enum Which {
    Phi,
    Psi,
    BigPhi(Side),
}

/// Ten lattice points on which the eigenvalue equation is tested.
fn eigen_points(p: &Params, which: Which) -> Result<Vec<LatticePoint>> {
    Ok(match which {
        Which::BigPhi(Side::Plus) => (-5..5).map(LatticePoint::plus).collect(),
        Which::BigPhi(Side::Minus) => (-5..5).map(LatticePoint::minus).collect(),
        Which::Phi | Which::Psi => {
            let mut v: Vec<LatticePoint> = (-3..4).map(LatticePoint::plus).collect();
            if p.t_minus_is_minus_one() {
                // ψ has a pole at −1/q, which the equation at x = −1 would multiply by B(−1) = 0.
                let first = if matches!(which, Which::Psi) { 1 } else { 0 };
                for k in first..first + 3 {
                    v.push(LatticePoint::neg(k)?);
                }
            } else {
                v.extend((-1..2).map(LatticePoint::minus));
            }
            v
        }
    })
}

fn eigen(job: &Job, which: Which) -> Result<Outcome> {
    let p = &job.p;
    let op = OperatorL::new(p);
    let mut worst = Vec::new();
    for g in GENERIC_GAMMAS {
        let gamma = SpectralPoint::generic(parse_complex(p.bits(), g)?);
        let fam = match which {
            Which::Phi => Family::Phi(gamma.clone()),
            Which::Psi => Family::Psi(gamma.clone()),
            Which::BigPhi(s) => Family::BigPhi(gamma.clone(), Some(s)),
        };
        let f = |x: &LatticePoint| fam.at(p, x);
        let m = mu(p, &gamma.value(p));
        for x in eigen_points(p, which)? {
            let r = op.eigen_residual(&f, &x, &m)?;
            worst.push(Outcome::from_residual(r, 0.0, 0.0).with_note(format!("gamma={g}, x={x:?}")));
        }
    }
    Ok(Outcome::worst(worst))
}

fn random_pair(rng: &mut ChaCha8Rng, p: &Params) -> (Complex, Complex) {
    (random_annulus(rng, p.bits(), 0.2, 3.0), random_annulus(rng, p.bits(), 0.2, 3.0))
}

/// `φ_γ(x) = φ_x(γ)` on random complex pairs.
fn phi_duality(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let mut out = Vec::new();
    for _ in 0..job.instances {
        let (g, x) = random_pair(&mut rng, p);
        let lhs = phi(p, &SpectralPoint::generic(g.clone()), &Point::Value(x.clone()), PhiRoute::Auto)?;
        let rhs = phi(p, &SpectralPoint::generic(x), &Point::Value(g), PhiRoute::Auto)?;
        out.push(Outcome::compare(&lhs.value, &rhs.value, 0.0).with_cancellation(lhs.cancellation.max(rhs.cancellation)));
    }
    Ok(Outcome::worst(out))
}

/// `θ(−bx)/θ(−bγ) ψ_x(γ) = ψ_γ(x)` on random complex pairs.
fn psi_duality(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let ctx = p.ctx();
    let b = p.b();
    let mut out = Vec::new();
    for _ in 0..job.instances {
        let (g, x) = random_pair(&mut rng, p);
        let lhs = psi(p, &SpectralPoint::generic(x.clone()), &Point::Value(g.clone()), PsiRoute::Auto)?.value;
        let ratio = div(&theta_cx(ctx, &neg(&mul(&b, &x)))?, &theta_cx(ctx, &neg(&mul(&b, &g)))?);
        let rhs = psi(p, &SpectralPoint::generic(g), &Point::Value(x), PsiRoute::Auto)?.value;
        out.push(Outcome::compare(&mul(&ratio, &lhs), &rhs, 0.0));
    }
    Ok(Outcome::worst(out))
}

fn symmetry_m(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let sw = p.swapped();
    let mut out = Vec::new();
    for i in 0..job.instances {
        let n = (i % 7) as u64;
        let x = random_annulus(&mut rng, p.bits(), 0.1, 5.0);
        out.push(Outcome::compare(&poly_m(p, n, &x)?, &poly_m(&sw, n, &x)?, 0.0));
    }
    Ok(Outcome::worst(out))
}

fn symmetry_p(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    if p.c().is_none() {
        return Ok(Outcome::skipped("parameter c is not configured"));
    }
    let sw = p.swapped();
    let mut out = Vec::new();
    for i in 0..job.instances {
        let n = (i % 5) as u64;
        let x = random_annulus(&mut rng, p.bits(), 0.1, 5.0);
        out.push(Outcome::compare(&poly_p(p, n, &x)?, &poly_p(&sw, n, &x)?, 0.0));
    }
    Ok(Outcome::worst(out))
}

fn symmetry_phi(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let sw = p.swapped();
    let mut out = Vec::new();
    for _ in 0..job.instances {
        let (g, x) = random_pair(&mut rng, p);
        let (g, x) = (SpectralPoint::generic(g), Point::Value(x));
        let lhs = phi(p, &g, &x, PhiRoute::Auto)?;
        let rhs = phi(&sw, &g, &x, PhiRoute::Auto)?;
        out.push(Outcome::compare(&lhs.value, &rhs.value, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// Every valid route against the first one; at least two routes must apply.
fn agreement<R: std::fmt::Debug>(routes: &[(R, crate::meixner::Evaluation)]) -> Result<Vec<Outcome>> {
    if routes.len() < 2 {
        return Err(crate::error::Error::Domain(format!("fewer than two valid routes: {:?}", routes.iter().map(|r| &r.0).collect::<Vec<_>>())));
    }
    let (r0, e0) = &routes[0];
    Ok(routes[1..]
        .iter()
        .map(|(r, e)| Outcome::compare(&e0.value, &e.value, 0.0).with_cancellation(e.cancellation.max(e0.cancellation)).with_note(format!("{r0:?} vs {r:?}")))
        .collect())
}

/// A random pair kept 10% away from the convergence radii `|ax| = 1` and
/// `|γ| = 1` of the ₂φ₁ routes, where their convergence becomes arbitrarily slow.
fn random_pair_off_radii(rng: &mut ChaCha8Rng, p: &Params) -> (Complex, Complex) {
    let a = abs_f64(&p.a());
    let near = |r: f64| (0.9..1.1).contains(&r);
    loop {
        let (g, x) = random_pair(rng, p);
        if !near(abs_f64(&g)) && !near(a * abs_f64(&x)) {
            return (g, x);
        }
    }
}

fn routes_phi(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let mut out = Vec::new();
    for _ in 0..job.instances {
        let (g, x) = random_pair_off_radii(&mut rng, p);
        out.extend(agreement(&phi_all_routes(p, &SpectralPoint::generic(g), &Point::Value(x)))?);
    }
    Ok(Outcome::worst(out))
}

/// ψ at `|q/bγ| < 1`, where both representations apply.
fn routes_psi(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let qb = abs_f64(&div(&p.ctx().q_cx(), &p.b()));
    let mut out = Vec::new();
    for _ in 0..job.instances {
        let g = random_annulus(&mut rng, p.bits(), 1.2 * qb, 1.2 * qb + 3.0);
        let x = random_annulus(&mut rng, p.bits(), 0.2, 3.0);
        out.extend(agreement(&psi_all_routes(p, &SpectralPoint::generic(g), &Point::Value(x)))?);
    }
    Ok(Outcome::worst(out))
}

/// Φ^± on its own branch at `|γ| > 1`, where the combination and both series apply.
fn routes_big_phi(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let mut out = Vec::new();
    for i in 0..job.instances {
        let g = SpectralPoint::generic(random_annulus(&mut rng, p.bits(), 1.2, 4.0));
        let side = if i % 2 == 0 { Side::Plus } else { Side::Minus };
        let k = rand::Rng::gen_range(&mut rng, -6..=6);
        let x = Point::Lattice(match side {
            Side::Plus => LatticePoint::plus(k),
            Side::Minus => LatticePoint::minus(k),
        });
        let routes: Vec<_> = big_phi_all_routes(p, &g, side, &x).into_iter().filter(|(r, _)| *r != BigPhiRoute::Terminating).collect();
        out.extend(agreement(&routes)?);
    }
    Ok(Outcome::worst(out))
}

/// At `γ = −q^{1+n}/a` the terminating ₂φ₁ equals the general combination.
fn terminating(job: &Job) -> Result<Outcome> {
    let p = &job.p;
    let mut out = Vec::new();
    if !p.genericity().b_over_a {
        return Ok(Outcome::skipped("b/a in q^Z: the terminating form has (a/b;q)_inf in its denominator"));
    }
    for n in 0..4 {
        let g = SpectralPoint::a_terminating(n);
        for k in -4..4 {
            let x = Point::Lattice(LatticePoint::plus(k));
            let t = big_phi(p, &g, Side::Plus, &x, BigPhiRoute::Terminating)?;
            let c = big_phi(p, &g, Side::Plus, &x, BigPhiRoute::Combo)?;
            // Zeros of the terminating sum are judged against the size of the reference's terms.
            let scale = c.cancellation * abs_f64(&c.value);
            out.push(Outcome::compare(&t.value, &c.value, scale).with_cancellation(c.cancellation));
        }
    }
    Ok(Outcome::worst(out))
}

/// For `γ ∈ −q^{−ℕ}/a` the combination `(a,b;q)_∞ φ − c₊ ψ` cancels on `t₊q^ℤ`;
/// the residual is judged against the size of the two terms.
fn vanishing(job: &Job) -> Result<Outcome> {
    let p = &job.p;
    let ab_inf = pinf(p, &[p.a(), p.b()]);
    let mut out = Vec::new();
    for j in 0..3 {
        let g = SpectralPoint::a_terminating(-1 - j);
        for k in [-2, 0, 3] {
            let x = Point::Lattice(LatticePoint::plus(k));
            let v = big_phi(p, &g, Side::Plus, &x, BigPhiRoute::Combo)?.value;
            let scale = abs_f64(&mul(&ab_inf, &phi(p, &g, &x, PhiRoute::Auto)?.value));
            out.push(Outcome::vanishes(&v, scale).with_note(format!("gamma={}", g.label())));
        }
    }
    Ok(Outcome::worst(out))
}

/// Tolerance of the asymptotic check: the deviation from the leading term
/// must contract at least at half the rate `q` per step in `k`.
fn asymptotic_bound(_p: &Params) -> f64 {
    2.0
}

/// `Φ_γ(tq^k)` divided by its leading term tends to 1 with an `O(q^{−k})`
/// correction. The residual is `d(−25) / (q^{10} d(−15))`, the observed
/// contraction of the deviation `d(k)` relative to the rate `q`.
fn asymptotics(job: &Job) -> Result<Outcome> {
    let p = &job.p;
    let q10 = p.ctx().qpow(10).to_f64();
    let mut out = Vec::new();
    for g in ["2.7+0.4i", "-3.1+1.2i", "0.8-0.5i"] {
        let g = SpectralPoint::generic(parse_complex(p.bits(), g)?);
        for side in [Side::Plus, Side::Minus] {
            let dev = |k: i64| -> Result<f64> {
                let x = match side {
                    Side::Plus => LatticePoint::plus(k),
                    Side::Minus => LatticePoint::minus(k),
                };
                let v = big_phi(p, &g, side, &Point::Lattice(x), BigPhiRoute::Auto)?.value;
                let lead = big_phi_asymptotic(p, &g.value(p), side, k)?;
                Ok(abs_f64(&sub(&div(&v, &lead), &p.ctx().real(1.0))))
            };
            let (d15, d25) = (dev(-15)?, dev(-25)?);
            let residual = if d25 == 0.0 { 0.0 } else { d25 / (q10 * d15) };
            out.push(Outcome::from_residual(residual, d15, d25).with_note(format!("deviation {d15:e} at k=-15, {d25:e} at k=-25")));
        }
    }
    Ok(Outcome::worst(out))
}

/// `Φ^† = K Φ` on both branches, with `K` q-periodic.
fn dagger(job: &Job) -> Result<Outcome> {
    let p = &job.p;
    let mut out = Vec::new();
    for g in ["1.9+0.3i", "-2.4-0.8i", "0.6+0.7i"] {
        let gv = parse_complex(p.bits(), g)?;
        let sg = SpectralPoint::generic(gv.clone());
        for side in [Side::Plus, Side::Minus] {
            let t = p.anchor(side.branch());
            let k0 = k_factor(p, &gv, &t)?;
            for k in -3..4 {
                let x = match side {
                    Side::Plus => LatticePoint::plus(k),
                    Side::Minus => LatticePoint::minus(k),
                };
                let xv = p.point(&x);
                out.push(Outcome::compare(&k_factor(p, &gv, &xv)?, &k0, 0.0).with_note("K periodicity"));
                let pt = Point::Lattice(x);
                let d = phi_dagger(p, &sg, side, &pt, BigPhiRoute::Auto)?.value;
                let f = big_phi(p, &sg, side, &pt, BigPhiRoute::Auto)?.value;
                out.push(Outcome::compare(&d, &mul(&k0, &f), 0.0));
            }
        }
    }
    Ok(Outcome::worst(out))
}

/// `D_q φ_γ(x) = −ab(1+γ)/((1−q)(1−a)(1−b)) φ_{γ/q}(x; aq, bq)`.
fn ladder(job: &Job) -> Result<Outcome> {
    let (p, mut rng) = (&job.p, job.rng());
    let ctx = p.ctx();
    let q = ctx.q();
    let (a, b) = (p.a(), p.b());
    let shifted = Params::new(ctx.clone(), mulf(&a, q), mulf(&b, q), p.t_plus().real().clone(), p.t_minus().real().clone())?;
    let one = ctx.real(1.0);
    let den = mul(&mul(&sub(&one, &ctx.q_cx()), &sub(&one, &a)), &sub(&one, &b));
    let mut out = Vec::new();
    for _ in 0..job.instances.min(20) {
        let (g, x) = random_pair(&mut rng, p);
        let sg = SpectralPoint::generic(g.clone());
        let lhs = qderiv_cx(ctx, |y: &Complex| Ok(phi(p, &sg, &Point::Value(y.clone()), PhiRoute::Auto)?.value), &x)?;
        let pre = div(&neg(&mul(&p.ab(), &Complex::with_val(p.bits(), &g + 1))), &den);
        let gq = div(&g, &ctx.q_cx());
        let rhs = mul(&pre, &phi(&shifted, &SpectralPoint::generic(gq), &Point::Value(x), PhiRoute::Auto)?.value);
        out.push(Outcome::compare(&lhs, &rhs, 0.0));
    }
    Ok(Outcome::worst(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cx, Precision};

    fn job(a: &str, b: &str, tm: &str) -> Job {
        let p = Params::parse("0.5", a, b, "1", tm, Precision::default()).unwrap().with_c(cx(197, 0.02));
        Job { p: Arc::new(p), seed: 3, instances: 10 }
    }

    #[test]
    fn battery_passes_on_a_real_and_a_complex_set() {
        for j in [job("0.3", "0.2", "-1"), job("0.3+0.4i", "0.3-0.4i", "-0.7")] {
            let fs: [(&str, fn(&Job) -> Result<Outcome>); 13] = [
                ("phi_duality", phi_duality),
                ("psi_duality", psi_duality),
                ("symmetry_m", symmetry_m),
                ("symmetry_p", symmetry_p),
                ("symmetry_phi", symmetry_phi),
                ("routes_phi", routes_phi),
                ("routes_psi", routes_psi),
                ("routes_big_phi", routes_big_phi),
                ("terminating", terminating),
                ("vanishing", vanishing),
                ("asymptotics", asymptotics),
                ("dagger", dagger),
                ("ladder", ladder),
            ];
            for (name, f) in fs {
                let o = f(&j).unwrap_or_else(|e| panic!("{name}: {e}"));
                let tol = if name == "asymptotics" { asymptotic_bound(&j.p) } else { 1e-30 };
                assert!(o.residual < tol, "{name}: {} {}", o.residual, o.note);
            }
            for w in [Which::Phi, Which::Psi, Which::BigPhi(Side::Plus), Which::BigPhi(Side::Minus)] {
                let o = eigen(&j, w).unwrap();
                assert!(o.residual < 1e-30, "{} {}", o.residual, o.note);
            }
        }
    }
}
