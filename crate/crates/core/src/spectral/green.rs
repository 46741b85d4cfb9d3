//! The Green kernel and the resolvent it defines.

use std::cmp::Ordering;

use rug::Complex;

use crate::error::{Error, Result};
use crate::meixner::weight::weight_cx;
use crate::meixner::{mu, Family, Params, Side, SpectralPoint};
use crate::ops::{add, div, mul, mulf, sub};
use crate::qcalculus::{Branch, LatticePoint};
use crate::scalar::abs_f64;

use super::casorati::{casorati_closed_phi_phi, casorati_closed_pm};
use super::operator::OperatorL;

/// Which pair of solutions builds the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    /// `φ_γ(min) Φ_γ^+(max) / D(Φ^+, φ)` on `−q^ℕ ∪ t₊q^ℤ`.
    SingleAnchor,
    /// `Φ_γ^−(min) Φ_γ^+(max) / D(Φ^+, Φ^−)` on `t₋q^ℤ ∪ t₊q^ℤ`.
    TwoAnchor,
}

/// The determinant normalising the kernel; a vanishing value is a pole.
pub fn kernel_determinant(p: &Params, gamma: &Complex, mode: KernelMode) -> Result<Complex> {
    let d = match mode {
        KernelMode::SingleAnchor => casorati_closed_phi_phi(p, gamma)?,
        KernelMode::TwoAnchor => casorati_closed_pm(p, gamma)?,
    };
    if d.is_zero() {
        return Err(Error::Pole(format!("Green kernel: gamma = {} is a zero of the determinant", crate::scalar::format_complex(gamma, 12))));
    }
    Ok(d)
}

/// The two solutions `(left, right)` whose product builds the kernel.
fn kernel_factors(gamma: &SpectralPoint, mode: KernelMode) -> (Family, Family) {
    let right = Family::BigPhi(gamma.clone(), Some(Side::Plus));
    let left = match mode {
        KernelMode::SingleAnchor => Family::Phi(gamma.clone()),
        KernelMode::TwoAnchor => Family::BigPhi(gamma.clone(), Some(Side::Minus)),
    };
    (left, right)
}

fn check_branch(x: &LatticePoint, mode: KernelMode) -> Result<()> {
    let ok = match mode {
        KernelMode::SingleAnchor => x.branch != Branch::Minus,
        KernelMode::TwoAnchor => x.branch != Branch::Neg,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("point {x:?} is not on the lattice of this kernel")))
    }
}

/// `K_γ(x, y)`: the left solution at the smaller point times the right
/// solution at the larger point, divided by the determinant.
pub fn green_kernel(p: &Params, gamma: &SpectralPoint, x: &LatticePoint, y: &LatticePoint, mode: KernelMode) -> Result<Complex> {
    check_branch(x, mode)?;
    check_branch(y, mode)?;
    let g = gamma.value(p);
    let d = kernel_determinant(p, &g, mode)?;
    let (lo, hi) = match x.cmp_value(y, p.ctx(), p.anchors()) {
        Ordering::Greater => (y, x),
        _ => (x, y),
    };
    let (left, right) = kernel_factors(gamma, mode);
    Ok(div(&mul(&left.at(p, lo)?, &right.at(p, hi)?), &d))
}

/// `(1−q)|x| w(x)`: the Jackson measure of a single lattice point.
pub fn point_mass(p: &Params, x: &LatticePoint) -> Result<Complex> {
    let ctx = p.ctx();
    let xv = p.point(x);
    let omq = rug::Float::with_val(p.bits(), 1 - ctx.q());
    let absx = rug::Float::with_val(p.bits(), xv.abs_ref()).abs();
    Ok(mulf(&mulf(&weight_cx(p, &xv)?, &omq), &absx))
}

/// `(R f)(y) = ⟨f, conj K_γ(·, y)⟩ = Σ_x f(x) K_γ(x, y) w(x) (1−q)|x|`
/// for a finitely supported `f`.
pub fn resolvent_apply(p: &Params, gamma: &SpectralPoint, f: &[(LatticePoint, Complex)], y: &LatticePoint, mode: KernelMode) -> Result<Complex> {
    let mut acc = Complex::new(p.bits());
    for (x, fx) in f {
        let k = green_kernel(p, gamma, x, y, mode)?;
        acc = add(&acc, &mul(&mul(fx, &k), &point_mass(p, x)?));
    }
    Ok(acc)
}

/// Outcome of a resolvent check at a set of points.
#[derive(Debug, Clone)]
pub struct ResolventCheck {
    /// Largest `|((L − μ) R f)(y) − f(y)|` over the probe points.
    pub max_defect: f64,
    /// Largest `|f(y)|` and `|L R f(y)|` seen (the comparison scale).
    pub scale: f64,
}

/// Applies `L − μ(γ)` to `R f` at each probe point and compares with `f`.
pub fn resolvent_check(
    p: &Params,
    gamma: &SpectralPoint,
    f: &[(LatticePoint, Complex)],
    probes: &[LatticePoint],
    mode: KernelMode,
) -> Result<ResolventCheck> {
    let op = OperatorL::new(p);
    let m = mu(p, &gamma.value(p));
    let rf = |y: &LatticePoint| resolvent_apply(p, gamma, f, y, mode);
    let mut max_defect: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for y in probes {
        let lrf = op.apply(&rf, y)?;
        let shifted = sub(&lrf, &mul(&m, &rf(y)?));
        let fy = f.iter().find(|(x, _)| x == y).map(|(_, v)| v.clone()).unwrap_or_else(|| Complex::new(p.bits()));
        max_defect = max_defect.max(abs_f64(&sub(&shifted, &fy)));
        scale = scale.max(abs_f64(&lrf)).max(abs_f64(&fy));
    }
    Ok(ResolventCheck { max_defect, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cx, rel_diff, Precision};

    fn params() -> Params {
        Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap()
    }

    fn nonreal_gamma(p: &Params) -> SpectralPoint {
        SpectralPoint::generic(crate::scalar::parse_complex(p.bits(), "1.3+0.8i").unwrap())
    }

    #[test]
    fn kernel_is_symmetric() {
        let p = params();
        let g = nonreal_gamma(&p);
        let x = LatticePoint::neg(2).unwrap();
        let y = LatticePoint::plus(1);
        let a = green_kernel(&p, &g, &x, &y, KernelMode::SingleAnchor).unwrap();
        let b = green_kernel(&p, &g, &y, &x, KernelMode::SingleAnchor).unwrap();
        assert!(rel_diff(&a, &b, 0.0) < 1e-55);
    }

    #[test]
    fn kernel_poles_are_reported() {
        let p = params();
        for g in [SpectralPoint::neg_qn(1), SpectralPoint::pos_lattice(2)] {
            let r = green_kernel(&p, &g, &LatticePoint::plus(0), &LatticePoint::plus(1), KernelMode::SingleAnchor);
            assert!(matches!(r, Err(Error::Pole(_))));
        }
    }

    #[test]
    fn resolvent_inverts_l_minus_mu() {
        let p = params();
        let g = nonreal_gamma(&p);
        let f = vec![
            (LatticePoint::neg(1).unwrap(), cx(p.bits(), 1.0)),
            (LatticePoint::plus(0), cx(p.bits(), -0.5)),
            (LatticePoint::plus(2), cx(p.bits(), 2.0)),
        ];
        let probes: Vec<_> = [LatticePoint::neg(0).unwrap(), LatticePoint::neg(1).unwrap(), LatticePoint::neg(3).unwrap()]
            .into_iter()
            .chain((-2..=3).map(LatticePoint::plus))
            .collect();
        let r = resolvent_check(&p, &g, &f, &probes, KernelMode::SingleAnchor).unwrap();
        assert!(r.max_defect < 1e-40 * r.scale, "defect {} scale {}", r.max_defect, r.scale);
    }

    #[test]
    fn kernel_decays_in_the_weighted_norm() {
        let p = params();
        let g = nonreal_gamma(&p);
        let x = LatticePoint::plus(0);
        let term = |k: i64| {
            let y = LatticePoint::plus(k);
            let kv = green_kernel(&p, &g, &x, &y, KernelMode::SingleAnchor).unwrap();
            abs_f64(&kv).powi(2) * abs_f64(&point_mass(&p, &y).unwrap())
        };
        assert!(term(-20) < 1e-6 * term(-5));
        assert!(term(-30) < 1e-6 * term(-20));
    }
}
