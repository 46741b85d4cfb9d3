//! Spectral analysis of `L` on the single-anchor space: orthogonality of the
//! full eigenfunction basis, Casorati determinants, the truncated symmetry
//! identity, residues of `1/D`, the dual norms `H_γ`, the resolvent and the
//! location of the spectrum.

use std::sync::Arc;

use rug::Complex;

use crate::error::Result;
use crate::meixner::closed::{h_n, integral_i};
use crate::meixner::weight::{pinf, th, weight_cx};
use crate::meixner::{CachedFamily, Family, Params, Side, SpectralPoint};
use crate::ops::{conj, div, mul, mulf, neg, prod};
use crate::qcalculus::{boundary_limits, qint_between, Branch, LatticePoint, QPoint, DEFAULT_K_MAX};
use crate::qseries::{qpoch_cx, qpoch_inf_cx, rphis_cx, SeriesSpec};
use crate::scalar::{abs_f64, parse_complex, powi};
use crate::spectral::{
    casorati, casorati_closed_phi_phi, casorati_closed_pm, casorati_pm_two_term, k_t, norm_h, residue_inv_d, resolvent_check, compare_spectrum,
    symmetry_defect, CasoratiPair, KernelMode, OperatorL, ScanOptions, ZeroClass,
};

use super::super::config::{SuiteConfig, SuiteName};
use super::super::{Check, Outcome};
use super::{gram_outcome, Set, Tol, GENERIC_GAMMAS};

const SUITE: SuiteName = SuiteName::Spectral;

/// Truncation of the symmetry identity, `(l; m, n)`.
const TRUNCATION: (i64, i64, i64) = (12, -12, 12);
/// Index `m` at which the lower boundary term must have decayed.
const DECAY_M: i64 = -25;

/// The spectral points of the Gram matrix: `−q^n` for `0 ≤ n < N` and `q^k/(abt)` for `|k| ≤ K`.
fn spectral_points(cfg: &SuiteConfig) -> Vec<SpectralPoint> {
    let mut pts: Vec<SpectralPoint> = (0..cfg.spectral_n).map(SpectralPoint::neg_qn).collect();
    pts.extend((-cfg.spectral_k..=cfg.spectral_k).map(SpectralPoint::pos_lattice));
    pts
}

/// A compact tag for check ids: `n3` for `−q^3`, `k-1` for `q^{−1}/(abt)`.
fn tag(g: &SpectralPoint) -> String {
    match g.origin() {
        crate::meixner::Origin::NegQN { n } => format!("n{n}"),
        crate::meixner::Origin::PosLattice { k } => format!("k{k}"),
        _ => g.label(),
    }
}

fn generic(p: &Params, i: usize) -> Result<SpectralPoint> {
    Ok(SpectralPoint::generic(parse_complex(p.bits(), GENERIC_GAMMAS[i])?))
}

pub(super) fn checks(cfg: &SuiteConfig, set: &Set) -> Vec<Check> {
    let mut out = Vec::new();
    let base = set.params.clone();
    let label = set.label();
    let mk = |out: &mut Vec<Check>, name: String, anchor: &'static str, tol: Tol, job: Box<dyn Fn(&Params) -> Result<Outcome> + Send + Sync>| {
        let p = base.clone();
        out.push(Check::new(set.id(SUITE, &name), anchor, label.clone(), tol.of(cfg), move || job(&p)));
    };

    // Cross Gram matrix of the eigenfunction basis.
    let pts = spectral_points(cfg);
    let fams: Vec<Arc<CachedFamily>> = pts.iter().map(|g| Arc::new(CachedFamily::new(&base, Family::Phi(g.clone())))).collect();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let (f, g, gi) = (fams[i].clone(), fams[j].clone(), pts[i].clone());
            let name = format!("orthogonality/{}-{}", tag(&pts[i]), tag(&pts[j]));
            if i == j {
                mk(&mut out, name, "norm H_gamma I(a,b;t) of the eigenfunction basis", Tol::SpectralNorm, Box::new(move |p| {
                    let v = crate::meixner::inner_single(p, f.as_ref(), g.as_ref())?;
                    Ok(gram_outcome(&v, Some(&mul(&norm_h(p, &gi)?, &integral_i(p)?))))
                }));
            } else {
                mk(&mut out, name, "orthogonality of the eigenfunction basis", Tol::Norm, Box::new(move |p| {
                    let v = crate::meixner::inner_single(p, f.as_ref(), g.as_ref())?;
                    Ok(gram_outcome(&v, None))
                }));
            }
        }
    }
    let k = cfg.spectral_k;
    mk(&mut out, "diagonal-closed-form".into(), "direct evaluation of the diagonal on the positive ray", Tol::Identity, Box::new(move |p| diagonal_closed_form(p, k)));
    mk(&mut out, "small-gamma-vanishing".into(), "vanishing of I_m(gamma) for |gamma| below the spectral point", Tol::Norm, Box::new(small_gamma_vanishing));
    mk(&mut out, "direct/finite-case".into(), "finite q-integral behind the direct orthogonality proof", Tol::Strict, Box::new(finite_case));
    mk(&mut out, "direct/two-phi-two".into(), "q-integral of phi against a truncating factor as a 2phi2", Tol::Strict, Box::new(two_phi_two));

    // Casorati determinants.
    for i in 0..GENERIC_GAMMAS.len() {
        mk(&mut out, format!("casorati/phi-Phi/{i}"), "closed form and constancy of D(phi, Phi+)", Tol::Norm, Box::new(move |p| casorati_phi_phi(p, &generic(p, i)?)));
        mk(&mut out, format!("casorati/Phi+-Phi-/{i}"), "closed form and constancy of D(Phi+, Phi-)", Tol::Norm, Box::new(move |p| casorati_pm(p, &generic(p, i)?)));
    }

    // Truncated symmetry identity and the decay of its lower boundary term.
    mk(&mut out, "symmetry-defect".into(), "truncated symmetry identity of L", Tol::Strict, Box::new(symmetry));
    mk(&mut out, "boundary-decay".into(), "vanishing of D(f, conj g)(tq^m) as m -> -infinity", Tol::Decay, Box::new(boundary_decay));
    mk(&mut out, "boundary-conditions".into(), "continuity of f and D_q f at the origin for the eigenfunctions", Tol::Strict, Box::new(boundary_conditions));

    // Residues and dual norms.
    let residue_points = [
        SpectralPoint::neg_qn(0),
        SpectralPoint::neg_qn(1),
        SpectralPoint::neg_qn(2),
        SpectralPoint::pos_lattice(-1),
        SpectralPoint::pos_lattice(0),
        SpectralPoint::pos_lattice(1),
    ];
    for g in residue_points {
        let name = format!("residue/{}", tag(&g));
        mk(&mut out, name, "residue of 1/D equals the weight", Tol::Residue, Box::new(move |p| {
            let r = residue_inv_d(p, &g)?;
            Ok(Outcome::compare(&r.numeric, &r.closed, 0.0).with_note(format!("richardson spread {:.1e}", r.richardson_spread)))
        }));
    }
    let n = cfg.spectral_n;
    mk(&mut out, "norm-h/polynomial".into(), "H at -q^n equals h_n", Tol::Identity, Box::new(move |p| norm_h_polynomial(p, n)));
    mk(&mut out, "norm-h/self-duality".into(), "H_gamma |gamma| w(gamma) is independent of gamma", Tol::Identity, Box::new(self_duality));

    // Resolvent and spectrum.
    mk(&mut out, "resolvent".into(), "the Green kernel inverts L - mu", Tol::Strict, Box::new(resolvent));
    mk(&mut out, "spectrum-scan".into(), "zeros of D are exactly the predicted spectrum", Tol::Strict, Box::new(spectrum_scan));
    out
}

/// `(1/(1−q)) H_λ I(a,b;t)` at `λ = q^{1−m}/(abt)` against
/// `((q;q)_∞/(a,b;q)_∞)² θ(−tq^m) (−abtq^{m−1};q)_∞ / (−atq^m, −btq^m;q)_∞`.
fn diagonal_closed_form(p: &Params, k: i64) -> Result<Outcome> {
    let ctx = p.ctx();
    let bits = p.bits();
    let omq = Complex::with_val(bits, ctx.real(1.0) - ctx.q_cx());
    let (a, b, t) = (p.a(), p.b(), p.t_plus());
    let ratio = div(&pinf(p, &[ctx.q_cx()]), &pinf(p, &[a.clone(), b.clone()]));
    let mut out = Vec::new();
    for m in (1 - k)..=(1 + k) {
        let lambda = SpectralPoint::pos_lattice(1 - m);
        let lhs = div(&mul(&norm_h(p, &lambda)?, &integral_i(p)?), &omq);
        let tm = mul(&t, &p.qpow(m));
        let num = prod(bits, &[&ratio, &ratio, &th(p, &[neg(&tm)])?, &pinf(p, &[neg(&div(&mul(&p.ab(), &tm), &ctx.q_cx()))])]);
        let rhs = div(&num, &pinf(p, &[neg(&mul(&a, &tm)), neg(&mul(&b, &tm))]));
        out.push(Outcome::compare(&lhs, &rhs, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// `∫ φ_γ φ_λ w d_qx = 0` (bilinear) for generic `γ` with `|γ| < |λ|`, `λ = q^{1−m}/(abt)`.
fn small_gamma_vanishing(p: &Params) -> Result<Outcome> {
    let mut out = Vec::new();
    for (m, scale) in [(0i64, 0.3), (1, 0.5), (2, 0.8)] {
        let lambda = SpectralPoint::pos_lattice(1 - m);
        let lv = lambda.value(p);
        let rot = Complex::with_val(p.bits(), (0.6f64.cos() * scale, 0.6f64.sin() * scale));
        let gamma = SpectralPoint::generic(mul(&lv, &rot));
        let fg = Family::Phi(gamma);
        let fl = Family::Phi(lambda);
        let f = |x: &LatticePoint| fg.at(p, x);
        let g = |x: &LatticePoint| fl.at(p, x).map(|v| conj(&v));
        let v = crate::meixner::inner_single(p, &f, &g)?;
        out.push(gram_outcome(&v, None));
    }
    Ok(Outcome::worst(out))
}

/// The prefactor `(q, −abtq^m;q)_∞ θ(−tq^{m−n}) / (a, bq^n, −atq^{m−n}, −btq^m;q)_∞`.
fn direct_prefactor(p: &Params, n: i64, m: i64) -> Result<Complex> {
    let ctx = p.ctx();
    let (a, b, t) = (p.a(), p.b(), p.t_plus());
    let tmn = mul(&t, &p.qpow(m - n));
    let tm = mul(&t, &p.qpow(m));
    let num = mul(&pinf(p, &[ctx.q_cx(), neg(&mul(&p.ab(), &tm))]), &th(p, &[neg(&tmn)])?);
    let den = pinf(p, &[a.clone(), mul(&b, &p.qpow(n)), neg(&mul(&a, &tmn)), neg(&mul(&b, &tm))]);
    Ok(div(&num, &den))
}

/// `(1/(1−q)) ∫_{−q^k}^{tq^{m−n}} (−q^{1−k}x, q^{n−m+1}x/t;q)_∞ / (−ax, −bq^nx;q)_∞ d_qx`
/// against its θ/Pochhammer evaluation.
fn finite_case(p: &Params) -> Result<Outcome> {
    let ctx = p.ctx();
    let bits = p.bits();
    let (a, b, t) = (p.a(), p.b(), p.t_plus());
    let omq = Complex::with_val(bits, ctx.real(1.0) - ctx.q_cx());
    let mut out = Vec::new();
    for k in 0..=2i64 {
        for n in 0..=2i64 {
            for m in -1..=1i64 {
                let bqn = mul(&b, &p.qpow(n));
                let shift = div(&p.qpow(n - m + 1), &t);
                let integrand = |pt: &QPoint| -> Result<Complex> {
                    let x = &pt.x;
                    let num = mul(&qpoch_inf_cx(ctx, &neg(&mul(&p.qpow(1 - k), x))), &qpoch_inf_cx(ctx, &mul(&shift, x)));
                    let den = mul(&qpoch_inf_cx(ctx, &neg(&mul(&a, x))), &qpoch_inf_cx(ctx, &neg(&mul(&bqn, x))));
                    Ok(div(&num, &den))
                };
                let lo = neg(&p.qpow(k));
                let hi = mul(&t, &p.qpow(m - n));
                let r = qint_between(ctx, integrand, &lo, &hi, ctx.target_tol())?;
                let lhs = div(r.complex(), &omq);
                let ku = k as u64;
                let tm = mul(&t, &p.qpow(m));
                let fin = div(&mul(&qpoch_cx(ctx, &a, ku), &qpoch_cx(ctx, &bqn, ku)), &qpoch_cx(ctx, &neg(&mul(&p.ab(), &tm)), ku));
                let rhs = prod(bits, &[&direct_prefactor(p, n, m)?, &fin, &powi(&hi, k), &p.qpow(-k * (k - 1) / 2)]);
                out.push(Outcome::compare(&lhs, &rhs, 0.0).with_cancellation(r.cancellation));
            }
        }
    }
    Ok(Outcome::worst(out))
}

/// `(1/(1−q)) ∫_{−1}^{∞(t)} φ_γ(x) (−bx;q)_n (q^{1+n−m}x/t;q)_∞ w(x) d_qx`
/// against the prefactor times `₂φ₂(−1/γ, bq^n; b, −abtq^m; q, abγtq^{m−n})`.
///
/// The truncating factor vanishes at `tq^k` for `k < m − n`, matching the
/// upper limit `tq^{m−n}` of the finite integral it is assembled from.
fn two_phi_two(p: &Params) -> Result<Outcome> {
    let ctx = p.ctx();
    let bits = p.bits();
    let (b, t) = (p.b(), p.t_plus());
    let omq = Complex::with_val(bits, ctx.real(1.0) - ctx.q_cx());
    let one = |_: &LatticePoint| Ok(ctx.real(1.0));
    let mut out = Vec::new();
    for i in [0usize, 2] {
        let gamma = generic(p, i)?;
        let g = gamma.value(p);
        let fam = Family::Phi(gamma);
        for n in 0..=2i64 {
            for m in -1..=1i64 {
                let shift = div(&p.qpow(1 + n - m), &t);
                let f = |x: &LatticePoint| -> Result<Complex> {
                    let xv = p.point(x);
                    let trunc = qpoch_inf_cx(ctx, &mul(&shift, &xv));
                    if trunc.is_zero() {
                        return Ok(trunc);
                    }
                    Ok(prod(bits, &[&fam.at(p, x)?, &qpoch_cx(ctx, &neg(&mul(&b, &xv)), n as u64), &trunc]))
                };
                let v = crate::meixner::inner_single(p, &f, &one)?;
                let lhs = div(&v.value, &omq);
                let tm = mul(&t, &p.qpow(m));
                let z = prod(bits, &[&p.ab(), &g, &t, &p.qpow(m - n)]);
                let spec = SeriesSpec::new(
                    vec![neg(&div(&ctx.real(1.0), &g)), mul(&b, &p.qpow(n))],
                    vec![b.clone(), neg(&mul(&p.ab(), &tm))],
                    z,
                );
                let (s, est) = rphis_cx(ctx, &spec, ctx.target_tol())?;
                let rhs = mul(&direct_prefactor(p, n, m)?, &s);
                out.push(Outcome::compare(&lhs, &rhs, 0.0).with_cancellation(est.cancellation.0.max(v.scale / abs_f64(&v.value).max(f64::MIN_POSITIVE))));
            }
        }
    }
    Ok(Outcome::worst(out))
}

/// Pointwise `D(Φ_γ^+, φ_γ)` at `t, tq, tq², −q, −q²` (both defining forms)
/// against the closed form; constancy is implied by agreement at every point.
fn casorati_phi_phi(p: &Params, gamma: &SpectralPoint) -> Result<Outcome> {
    let big = Family::BigPhi(gamma.clone(), Some(Side::Plus));
    let small = Family::Phi(gamma.clone());
    let f = |x: &LatticePoint| big.at(p, x);
    let g = |x: &LatticePoint| small.at(p, x);
    let closed = casorati_closed_phi_phi(p, &gamma.value(p))?;
    let points = [LatticePoint::plus(0), LatticePoint::plus(1), LatticePoint::plus(2), LatticePoint::neg(1)?, LatticePoint::neg(2)?];
    pointwise_vs_closed(p, &f, &g, &points, &closed)
}

/// Pointwise `D(Φ_γ^+, Φ_γ^−)` on both anchors against the closed form and
/// the two-term form; needs a second anchor `t₋ ∉ −q^ℤ`.
fn casorati_pm(p: &Params, gamma: &SpectralPoint) -> Result<Outcome> {
    if p.t_minus_is_minus_one() {
        return Ok(Outcome::skipped("D(Phi+, Phi-) needs t- outside -q^Z"));
    }
    let fp = Family::BigPhi(gamma.clone(), Some(Side::Plus));
    let fm = Family::BigPhi(gamma.clone(), Some(Side::Minus));
    let f = |x: &LatticePoint| fp.at(p, x);
    let g = |x: &LatticePoint| fm.at(p, x);
    let gv = gamma.value(p);
    let closed = casorati_closed_pm(p, &gv)?;
    let two = casorati_pm_two_term(p, &gv)?;
    let points = [LatticePoint::plus(0), LatticePoint::plus(1), LatticePoint::plus(3), LatticePoint::minus(0), LatticePoint::minus(2)];
    let o = pointwise_vs_closed(p, &f, &g, &points, &closed)?;
    Ok(Outcome::worst([o, Outcome::compare(&two, &closed, 0.0)]))
}

fn pointwise_vs_closed<F, G>(p: &Params, f: &F, g: &G, points: &[LatticePoint], closed: &Complex) -> Result<Outcome>
where
    F: Fn(&LatticePoint) -> Result<Complex>,
    G: Fn(&LatticePoint) -> Result<Complex>,
{
    let mut out = Vec::new();
    for x in points {
        let d = CasoratiPair::new(p, f, g).at(x)?;
        out.push(Outcome::compare(&d.v_form, closed, 0.0));
        out.push(Outcome::compare(&d.u_form, closed, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// `⟨Lf,g⟩ − ⟨f,Lg⟩` against the three boundary terms for `f, g ∈ {φ_γ, φ_λ}`.
fn symmetry(p: &Params) -> Result<Outcome> {
    let op = OperatorL::new(p);
    let fams = [Family::Phi(generic(p, 2)?), Family::Phi(generic(p, 0)?)];
    let (l, m, n) = TRUNCATION;
    let mut out = Vec::new();
    for fa in &fams {
        for fb in &fams {
            let f = |x: &LatticePoint| fa.at(p, x);
            let g = |x: &LatticePoint| fb.at(p, x);
            let s = symmetry_defect(&op, &f, &g, l, m, n)?;
            out.push(Outcome::vanishes(&s.defect, s.scale));
        }
    }
    Ok(Outcome::worst(out).with_note(format!("(l; m, n) = ({l}; {m}, {n})")))
}

/// `|D(f, ḡ)(tq^m)|` at `m = −25` for square-summable eigenfunctions, one from each part of the spectrum.
fn boundary_decay(p: &Params) -> Result<Outcome> {
    let pairs = [
        (SpectralPoint::neg_qn(1), SpectralPoint::pos_lattice(0)),
        (SpectralPoint::pos_lattice(1), SpectralPoint::pos_lattice(-1)),
        (SpectralPoint::neg_qn(0), SpectralPoint::neg_qn(2)),
    ];
    let mut out = Vec::new();
    for (a, b) in pairs {
        let (fa, fb) = (Family::Phi(a), Family::Phi(b));
        let f = |x: &LatticePoint| fa.at(p, x);
        let gbar = |x: &LatticePoint| fb.at(p, x).map(|v| conj(&v));
        let d = casorati(p, &f, &gbar, &LatticePoint::plus(DECAY_M))?;
        let early = casorati(p, &f, &gbar, &LatticePoint::plus(DECAY_M / 2))?;
        let v = abs_f64(&d);
        out.push(Outcome::from_residual(v, v, abs_f64(&early)).with_note(format!("|D| at m={}: {:.2e}", DECAY_M / 2, abs_f64(&early))));
    }
    Ok(Outcome::worst(out))
}

/// `f(0⁻) = f(0⁺)` and `D_qf(0⁻) = D_qf(0⁺)` for eigenfunctions on both parts of the spectrum.
fn boundary_conditions(p: &Params) -> Result<Outcome> {
    let mut out = Vec::new();
    for g in [SpectralPoint::neg_qn(2), SpectralPoint::pos_lattice(0), SpectralPoint::pos_lattice(2)] {
        let fam = Family::Phi(g);
        let f = |x: &LatticePoint| fam.at(p, x);
        let lim = boundary_limits(p.ctx(), p.anchors(), &f, Branch::Neg, DEFAULT_K_MAX)?;
        if !lim.converged {
            return Ok(Outcome::from_residual(f64::INFINITY, 0.0, 0.0).with_note("boundary limits did not converge"));
        }
        out.push(Outcome::compare(&lim.f0_plus, &lim.f0_minus, 0.0));
        out.push(Outcome::compare(&lim.fprime0_plus, &lim.fprime0_minus, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// `H_{−1} = 1` and `H_{−q^n} = h_n` for `0 ≤ n < N`.
fn norm_h_polynomial(p: &Params, n_max: i64) -> Result<Outcome> {
    let mut out = Vec::new();
    for n in 0..n_max.max(1) {
        out.push(Outcome::compare(&norm_h(p, &SpectralPoint::neg_qn(n))?, &h_n(p, n as u64)?, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// `H_γ K_t |γ| w(γ)` at four spectral points, compared with its value at `γ = −1`.
fn self_duality(p: &Params) -> Result<Outcome> {
    let kt = k_t(p)?;
    let value = |g: &SpectralPoint| -> Result<Complex> {
        let gv = g.value(p);
        let absg = rug::Float::with_val(p.bits(), gv.abs_ref());
        Ok(mul(&norm_h(p, g)?, &mulf(&mul(&kt, &weight_cx(p, &gv)?), &absg)))
    };
    let first = value(&SpectralPoint::neg_qn(0))?;
    let mut out = Vec::new();
    for g in [SpectralPoint::neg_qn(3), SpectralPoint::pos_lattice(0), SpectralPoint::pos_lattice(2)] {
        out.push(Outcome::compare(&value(&g)?, &first, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// `(L − μ(γ)) R_γ f = f` for a finitely supported `f` at a generic `γ`.
fn resolvent(p: &Params) -> Result<Outcome> {
    let bits = p.bits();
    let f = vec![
        (LatticePoint::plus(0), Complex::with_val(bits, 1)),
        (LatticePoint::plus(2), Complex::with_val(bits, (0.5, -0.25))),
        (LatticePoint::neg(1)?, Complex::with_val(bits, (-0.3, 0.2))),
    ];
    let mut probes: Vec<LatticePoint> = (-2..=4).map(LatticePoint::plus).collect();
    for k in 0..=3 {
        probes.push(LatticePoint::neg(k)?);
    }
    let mut out = Vec::new();
    for i in [2usize, 4] {
        let r = resolvent_check(p, &generic(p, i)?, &f, &probes, KernelMode::SingleAnchor)?;
        out.push(Outcome::from_residual(r.max_defect / r.scale, r.max_defect, r.scale));
    }
    Ok(Outcome::worst(out))
}

/// Zeros of `D` along both real rays: every zero found must be explained, and
/// every predicted spectral point inside the scan range must be found.
/// The residual is the number of discrepancies.
fn spectrum_scan(p: &Params) -> Result<Outcome> {
    let cmp = compare_spectrum(p, &ScanOptions::default())?;
    let mut issues: Vec<String> = cmp.zeros.iter().filter(|z| z.class == ZeroClass::Unexplained).map(|z| format!("unexplained zero at {:.6e}", z.gamma)).collect();
    issues.extend(cmp.missed.iter().map(|l| format!("missed zero at {l}")));
    issues.extend(cmp.notes.iter().cloned());
    let residual = (cmp.discrepancies() + cmp.notes.len()) as f64;
    let note = if issues.is_empty() { format!("{} zeros, all explained", cmp.zeros.len()) } else { issues.join("; ") };
    Ok(Outcome::from_residual(residual, cmp.zeros.len() as f64, 0.0).with_note(note))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Precision;

    fn params() -> Params {
        Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap()
    }

    #[test]
    fn direct_identities_and_determinants() {
        let p = params();
        let checks: [(&str, fn(&Params) -> Result<Outcome>, f64); 5] = [
            ("finite-case", finite_case, 1e-25),
            ("two-phi-two", two_phi_two, 1e-25),
            ("self-duality", self_duality, 1e-30),
            ("resolvent", resolvent, 1e-25),
            ("scan", spectrum_scan, 0.5),
        ];
        for (name, f, tol) in checks {
            let o = f(&p).unwrap();
            assert!(o.residual < tol, "{name}: {:e} {}", o.residual, o.note);
        }
        let o = casorati_phi_phi(&p, &generic(&p, 2).unwrap()).unwrap();
        assert!(o.residual < 1e-22, "{:e}", o.residual);
    }
}
