//! Residues of `1/D(γ)` and the dual norm constants `H_γ`.

use rug::Complex;

use crate::error::{Error, Result};
use crate::meixner::weight::{checked_div, pinf, th, weight_cx};
use crate::meixner::{Params, SpectralPoint};
use crate::ops::{div, mul, mulf, neg, sub};
use crate::scalar::abs_f64;

use super::casorati::casorati_closed_phi_phi;

/// `K_t = (a,b)²_∞ θ(−at, −bt) / ((1−q)(q)²_∞ θ(−t, −abt))` with `t = t₊`.
pub fn k_t(p: &Params) -> Result<Complex> {
    let ctx = p.ctx();
    let (a, b, t) = (p.a(), p.b(), p.t_plus());
    let ab_inf = pinf(p, &[a.clone(), b.clone()]);
    let q_inf = pinf(p, &[ctx.q_cx()]);
    let num = mul(&mul(&ab_inf, &ab_inf), &th(p, &[neg(&mul(&a, &t)), neg(&mul(&b, &t))])?);
    let omq = Complex::with_val(p.bits(), ctx.real(1.0) - ctx.q_cx());
    let den = mul(&mul(&omq, &mul(&q_inf, &q_inf)), &th(p, &[neg(&t), neg(&mul(&p.ab(), &t))])?);
    checked_div(&num, &den, "K_t")
}

/// `H_γ = (q, −aγ, −bγ)_∞ / (|γ| (a, b, −qγ)_∞)`.
pub fn norm_h(p: &Params, gamma: &SpectralPoint) -> Result<Complex> {
    let ctx = p.ctx();
    let g = gamma.value(p);
    let num = pinf(p, &[ctx.q_cx(), neg(&mul(&p.a(), &g)), neg(&mul(&p.b(), &g))]);
    let den = pinf(p, &[p.a(), p.b(), neg(&mul(&ctx.q_cx(), &g))]);
    let absg = rug::Float::with_val(p.bits(), g.abs_ref());
    checked_div(&num, &mulf(&den, &absg), "H_gamma")
}

/// Numerical and closed-form residues of `1/D` at a zero of the determinant.
#[derive(Debug, Clone)]
pub struct Residue {
    /// `1/D′(γ₀)` from Richardson-combined central differences.
    pub numeric: Complex,
    /// `K_t |γ₀| w(γ₀) / (ab (a,b)_∞)`.
    pub closed: Complex,
    /// Difference between the two central-difference estimates relative to their value.
    pub richardson_spread: f64,
}

/// The closed-form residue `K_t |γ| w(γ) / (ab (a,b)_∞)`.
pub fn residue_closed(p: &Params, gamma: &SpectralPoint) -> Result<Complex> {
    let g = gamma.value(p);
    let absg = rug::Float::with_val(p.bits(), g.abs_ref());
    let num = mulf(&mul(&k_t(p)?, &weight_cx(p, &g)?), &absg);
    let den = mul(&p.ab(), &pinf(p, &[p.a(), p.b()]));
    checked_div(&num, &den, "residue")
}

/// Exponent `j` with `q^j ≈ 10^{−digits/4}`, the base step of the difference quotients.
pub fn residue_step_exponent(p: &Params) -> i64 {
    let digits = f64::from(p.ctx().precision().digits());
    (digits / 4.0 * std::f64::consts::LN_10 / -p.ctx().ln_q_f64()).ceil() as i64
}

/// Residue of `1/D(γ)` at `γ₀`, numerically and in closed form.
///
/// The derivative of the closed-form determinant is taken by central
/// differences with steps `h = q^j|γ₀|` and `q^{j+2}|γ₀|`, combined by one
/// Richardson step (the error of each is even in `h`).
pub fn residue_inv_d(p: &Params, gamma: &SpectralPoint) -> Result<Residue> {
    let g0 = gamma.value(p);
    let absg = abs_f64(&g0);
    let j = residue_step_exponent(p);
    let central = |jj: i64| -> Result<(Complex, f64)> {
        let h = mulf(&p.qpow(jj), &rug::Float::with_val(p.bits(), absg));
        let hf = abs_f64(&h);
        let plus = casorati_closed_phi_phi(p, &Complex::with_val(p.bits(), &g0 + &h))?;
        let minus = casorati_closed_phi_phi(p, &sub(&g0, &h))?;
        Ok((div(&sub(&plus, &minus), &mul(&h, &Complex::with_val(p.bits(), 2))), hf))
    };
    let (d1, h1) = central(j)?;
    let (d2, h2) = central(j + 2)?;
    let r2 = (h2 / h1).powi(2);
    let rf = rug::Float::with_val(p.bits(), r2);
    let extrap = div(&sub(&d2, &mulf(&d1, &rf)), &Complex::with_val(p.bits(), 1 - rf));
    let mag = abs_f64(&extrap);
    let spread = abs_f64(&sub(&d1, &d2)) / mag;
    if mag == 0.0 || !spread.is_finite() || spread > 0.5 {
        return Err(Error::Degeneracy(format!("D has no simple zero at {}", gamma.label())));
    }
    let numeric = div(&Complex::with_val(p.bits(), 1), &extrap);
    Ok(Residue { numeric, closed: residue_closed(p, gamma)?, richardson_spread: spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meixner::closed::h_n;
    use crate::scalar::{rel_diff, Precision};

    fn params() -> Params {
        Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap()
    }

    #[test]
    fn h_at_minus_one_is_one_and_matches_polynomial_norms() {
        let p = params();
        assert!(rel_diff(&norm_h(&p, &SpectralPoint::neg_qn(0)).unwrap(), &p.ctx().real(1.0), 0.0) < 1e-55);
        for n in 1..4 {
            let hg = norm_h(&p, &SpectralPoint::neg_qn(n as i64)).unwrap();
            assert!(rel_diff(&hg, &h_n(&p, n).unwrap(), 0.0) < 1e-50, "n = {n}");
        }
    }

    #[test]
    fn residues_match_on_both_rays() {
        let p = params();
        for g in [SpectralPoint::neg_qn(0), SpectralPoint::neg_qn(2), SpectralPoint::pos_lattice(1), SpectralPoint::pos_lattice(-1)] {
            let r = residue_inv_d(&p, &g).unwrap();
            assert!(rel_diff(&r.numeric, &r.closed, 0.0) < 1e-15, "{}: {:e}", g.label(), rel_diff(&r.numeric, &r.closed, 0.0));
        }
    }

    #[test]
    fn non_zero_is_rejected() {
        let p = params();
        let g = SpectralPoint::generic(p.ctx().real(1.7));
        // Not a zero: the difference quotient is fine but the closed form is not a residue.
        let r = residue_inv_d(&p, &g).unwrap();
        assert!(rel_diff(&r.numeric, &r.closed, 0.0) > 1e-3);
    }

    #[test]
    fn norm_is_dual_to_weight() {
        // H_γ · K_t |γ| w(γ) is the same constant at every spectral point.
        let p = params();
        let kt = k_t(&p).unwrap();
        let prods: Vec<Complex> = [SpectralPoint::neg_qn(0), SpectralPoint::neg_qn(3), SpectralPoint::pos_lattice(0), SpectralPoint::pos_lattice(2)]
            .iter()
            .map(|g| {
                let gv = g.value(&p);
                let absg = rug::Float::with_val(p.bits(), gv.abs_ref());
                mul(&norm_h(&p, g).unwrap(), &mulf(&mul(&kt, &weight_cx(&p, &gv).unwrap()), &absg))
            })
            .collect();
        for v in &prods[1..] {
            assert!(rel_diff(v, &prods[0], 0.0) < 1e-45);
        }
    }
}
