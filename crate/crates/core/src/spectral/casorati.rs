//! Casorati determinants and their closed forms.

use rug::Complex;

use crate::error::Result;
use crate::meixner::weight::{checked_div, pinf, th, u_weight_cx, v_weight_cx};
use crate::meixner::Params;
use crate::ops::{div, mul, mulf, neg, prod, sub};
use crate::qcalculus::{LatticeFunction, LatticePoint};

/// Both defining forms of `D(f,g)(x)`.
#[derive(Debug, Clone)]
pub struct CasoratiValue {
    /// `(f(x)g(qx) − f(qx)g(x)) v(x)`.
    pub v_form: Complex,
    /// `(D_q f · g − f · D_q g)(x) u(x)`.
    pub u_form: Complex,
}

/// Two lattice functions sharing a parameter set.
pub struct CasoratiPair<'a, F: ?Sized, G: ?Sized> {
    pub params: &'a Params,
    pub f: &'a F,
    pub g: &'a G,
}

impl<'a, F: LatticeFunction + ?Sized, G: LatticeFunction + ?Sized> CasoratiPair<'a, F, G> {
    pub fn new(params: &'a Params, f: &'a F, g: &'a G) -> Self {
        Self { params, f, g }
    }

    /// `D(f,g)(x)` in both forms; needs `f` and `g` at `x` and `qx`.
    pub fn at(&self, x: &LatticePoint) -> Result<CasoratiValue> {
        let xq = x.times_q();
        casorati_values(
            self.params,
            &self.params.point(x),
            [&self.f.eval_at(x)?, &self.f.eval_at(&xq)?],
            [&self.g.eval_at(x)?, &self.g.eval_at(&xq)?],
        )
    }
}

/// `D(f,g)(x)` (v-form) for two lattice functions.
pub fn casorati<F, G>(p: &Params, f: &F, g: &G, x: &LatticePoint) -> Result<Complex>
where
    F: LatticeFunction + ?Sized,
    G: LatticeFunction + ?Sized,
{
    Ok(CasoratiPair::new(p, f, g).at(x)?.v_form)
}

/// Both forms from the values `[f(x), f(qx)]` and `[g(x), g(qx)]`.
pub fn casorati_values(p: &Params, x: &Complex, f: [&Complex; 2], g: [&Complex; 2]) -> Result<CasoratiValue> {
    let ctx = p.ctx();
    let bits = p.bits();
    let v = v_weight_cx(p, x)?;
    let v_form = mul(&sub(&mul(f[0], g[1]), &mul(f[1], g[0])), &v);
    let omq = Complex::with_val(bits, ctx.real(1.0) - ctx.q_cx());
    let h = mul(&omq, x);
    let dq_f = checked_div(&sub(f[0], f[1]), &h, "q-derivative")?;
    let dq_g = checked_div(&sub(g[0], g[1]), &h, "q-derivative")?;
    let u_form = mul(&sub(&mul(&dq_f, g[0]), &mul(f[0], &dq_g)), &u_weight_cx(p, x)?);
    Ok(CasoratiValue { v_form, u_form })
}

/// Closed form of `D(Φ_γ^+, φ_γ)` on `t₊q^ℤ`:
/// `−(1−q)/t · (q/b, −1/γ, −aγ)_∞ θ(−qt, abtγ) / ((a, −q/bγ)_∞ θ(aqtγ, −bqt))`.
pub fn casorati_closed_phi_phi(p: &Params, gamma: &Complex) -> Result<Complex> {
    let ctx = p.ctx();
    let bits = p.bits();
    let (a, b, t) = (p.a(), p.b(), p.t_plus());
    let q = ctx.q_cx();
    let num = mul(
        &pinf(p, &[div(&q, &b), neg(&div(&ctx.real(1.0), gamma)), neg(&mul(&a, gamma))]),
        &th(p, &[neg(&mul(&q, &t)), prod(bits, &[&p.ab(), &t, gamma])])?,
    );
    let den = mul(
        &pinf(p, &[a.clone(), neg(&div(&q, &mul(&b, gamma)))]),
        &th(p, &[prod(bits, &[&a, &q, &t, gamma]), neg(&prod(bits, &[&b, &q, &t]))])?,
    );
    let omq = Complex::with_val(bits, ctx.real(1.0) - &q);
    Ok(neg(&mul(&div(&omq, &t), &checked_div(&num, &den, "D(gamma)")?)))
}

/// Closed form of `D(Φ_γ^+, Φ_γ^−)`:
/// `−qbt₊(1−q) (−1/γ, −aγ)_∞ θ(b, −abqt₊t₋γ, −aγ, b/q, t₋/t₊)
///  / ((−q/bγ)_∞ θ(aqt₋γ, aqt₊γ, −bt₋, −bt₊))`.
pub fn casorati_closed_pm(p: &Params, gamma: &Complex) -> Result<Complex> {
    let ctx = p.ctx();
    let bits = p.bits();
    let (a, b, tp, tm) = (p.a(), p.b(), p.t_plus(), p.t_minus());
    let q = ctx.q_cx();
    let num = mul(
        &pinf(p, &[neg(&div(&ctx.real(1.0), gamma)), neg(&mul(&a, gamma))]),
        &th(
            p,
            &[
                b.clone(),
                neg(&prod(bits, &[&p.ab(), &q, &tp, &tm, gamma])),
                neg(&mul(&a, gamma)),
                div(&b, &q),
                div(&tm, &tp),
            ],
        )?,
    );
    let den = mul(
        &pinf(p, &[neg(&div(&q, &mul(&b, gamma)))]),
        &th(p, &[prod(bits, &[&a, &q, &tm, gamma]), prod(bits, &[&a, &q, &tp, gamma]), neg(&mul(&b, &tm)), neg(&mul(&b, &tp))])?,
    );
    let omq = Complex::with_val(bits, ctx.real(1.0) - &q);
    let pre = neg(&prod(bits, &[&q, &b, &tp, &omq]));
    Ok(mul(&pre, &checked_div(&num, &den, "D(Phi+, Phi-)")?))
}

/// `D(Φ⁺, Φ⁻)` before the θ-function identity is applied: the difference of
/// the two single-anchor constants,
/// `(1−q)(−1/γ,−aγ)_∞ θ(b)/(−q/bγ)_∞ · Σ_± ±t_∓^{−1} θ(−qt_∓, abt_∓γ)/θ(aqt_∓γ, −bqt_∓)`.
pub fn casorati_pm_two_term(p: &Params, gamma: &Complex) -> Result<Complex> {
    let ctx = p.ctx();
    let bits = p.bits();
    let (a, b) = (p.a(), p.b());
    let q = ctx.q_cx();
    let term = |t: &Complex| -> Result<Complex> {
        let num = th(p, &[neg(&mul(&q, t)), prod(bits, &[&p.ab(), t, gamma])])?;
        let den = th(p, &[prod(bits, &[&a, &q, t, gamma]), neg(&prod(bits, &[&b, &q, t]))])?;
        Ok(div(&checked_div(&num, &den, "two-term determinant")?, t))
    };
    let omq = Complex::with_val(bits, ctx.real(1.0) - &q);
    let pre = mul(
        &mulf(&pinf(p, &[neg(&div(&ctx.real(1.0), gamma)), neg(&mul(&a, gamma))]), omq.real()),
        &th(p, &[b.clone()])?,
    );
    let pre = checked_div(&pre, &pinf(p, &[neg(&div(&q, &mul(&b, gamma)))]), "two-term determinant")?;
    Ok(mul(&pre, &sub(&term(&p.t_minus())?, &term(&p.t_plus())?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meixner::{Family, Side, SpectralPoint};
    use crate::scalar::{abs_f64, cx, rel_diff, Precision};

    fn params() -> Params {
        Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap()
    }

    #[test]
    fn antisymmetry_and_two_forms() {
        let p = params();
        let g = SpectralPoint::generic(cx(p.bits(), 1.7));
        let f1 = Family::Phi(g.clone());
        let f2 = Family::BigPhi(g, Some(Side::Plus));
        let f = |x: &LatticePoint| f1.at(&p, x);
        let h = |x: &LatticePoint| f2.at(&p, x);
        let x = LatticePoint::plus(2);
        let fg = CasoratiPair::new(&p, &f, &h).at(&x).unwrap();
        let gf = CasoratiPair::new(&p, &h, &f).at(&x).unwrap();
        let ff = CasoratiPair::new(&p, &f, &f).at(&x).unwrap();
        assert!(ff.v_form.is_zero());
        assert!(rel_diff(&fg.v_form, &neg(&gf.v_form), 0.0) < 1e-55);
        assert!(rel_diff(&fg.v_form, &fg.u_form, 0.0) < 1e-50);
    }

    #[test]
    fn pointwise_determinant_matches_closed_form_and_is_constant() {
        let p = params();
        let g = SpectralPoint::generic(cx(p.bits(), 1.7));
        let closed = casorati_closed_phi_phi(&p, &g.value(&p)).unwrap();
        let big = Family::BigPhi(g.clone(), Some(Side::Plus));
        let small = Family::Phi(g);
        let f = |x: &LatticePoint| big.at(&p, x);
        let h = |x: &LatticePoint| small.at(&p, x);
        for k in [-3, 0, 1, 2, 5] {
            let d = casorati(&p, &f, &h, &LatticePoint::plus(k)).unwrap();
            assert!(rel_diff(&d, &closed, 0.0) < 1e-40, "k = {k}");
        }
    }

    #[test]
    fn closed_form_vanishes_on_the_positive_spectrum() {
        let p = params();
        let g = SpectralPoint::pos_lattice(1).value(&p);
        assert!(casorati_closed_phi_phi(&p, &g).unwrap().is_zero());
    }

    #[test]
    fn two_anchor_determinant_matches_pointwise_and_two_term_form() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-0.7", Precision::default()).unwrap();
        for gv in [1.7, -2.3] {
            let g = SpectralPoint::generic(cx(p.bits(), gv));
            let closed = casorati_closed_pm(&p, &g.value(&p)).unwrap();
            let two = casorati_pm_two_term(&p, &g.value(&p)).unwrap();
            assert!(rel_diff(&closed, &two, 0.0) < 1e-45, "gamma = {gv}");
            let fp = Family::BigPhi(g.clone(), Some(Side::Plus));
            let fm = Family::BigPhi(g, Some(Side::Minus));
            let f = |x: &LatticePoint| fp.at(&p, x);
            let h = |x: &LatticePoint| fm.at(&p, x);
            for x in [LatticePoint::plus(1), LatticePoint::minus(-2), LatticePoint::minus(3)] {
                let d = casorati(&p, &f, &h, &x).unwrap();
                assert!(rel_diff(&d, &closed, 0.0) < 1e-35, "gamma = {gv}, x = {x:?}");
            }
        }
    }

    #[test]
    fn two_anchor_determinant_vanishes_at_gamma_n() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-0.7", Precision::default()).unwrap();
        let g = SpectralPoint::indef_lattice(1).value(&p);
        assert!(abs_f64(&casorati_closed_pm(&p, &g).unwrap()) == 0.0);
    }
}
