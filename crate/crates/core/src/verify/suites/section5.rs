//! Orthogonality under the indefinite bilinear form on `t₋q^ℤ ∪ t₊q^ℤ`:
//! the terminating families `Φ_{−q^{1+n}/a}` and `Φ^†_{−q^{1+n}/b}`, the
//! functions `Φ_{γ_n}` with `γ_n = −q^n/(abt₋t₊)`, their mutual
//! orthogonality with `m_k`, and the two-anchor resolvent.
//!
//! Every check is skipped for parameter sets with `t₋ = −1`, where the
//! second anchor coincides with the lattice `−q^ℤ` of the single-anchor space.

use std::sync::Arc;

use rug::Complex;

use crate::error::Result;
use crate::meixner::closed::{phi_gamma_n_norm, phi_terminating_norm};
use crate::meixner::{inner_two_anchor, mu, CachedFamily, Family, Params, Side, SpectralPoint};
use crate::ops::{div, mul, mulf, sub};
use crate::qcalculus::LatticePoint;
use crate::scalar::{abs_f64, parse_complex};
use crate::spectral::{casorati_closed_pm, compare_spectrum, green_kernel, residue_step_exponent, resolvent_check, KernelMode, ScanOptions, ZeroClass};

use super::super::config::{SuiteConfig, SuiteName};
use super::super::{Check, Outcome};
use super::{gram_outcome, Set, Tol, GENERIC_GAMMAS};

const SUITE: SuiteName = SuiteName::Section5;

/// Indices `n` of the functions `Φ_{γ_n}`.
const GAMMA_N: [i64; 3] = [-1, 0, 1];

/// A member of one of the four families of the indefinite form.
#[derive(Debug, Clone)]
enum Member {
    /// `m_k`.
    Poly(u64),
    /// `Φ_{−q^{1+n}/a}`.
    ATerm(u64),
    /// `Φ^†_{−q^{1+n}/b}`.
    BTerm(u64),
    /// `Φ_{γ_n}`.
    GammaN(i64),
}

impl Member {
    fn family(&self) -> Family {
        match *self {
            Member::Poly(k) => Family::M(k),
            Member::ATerm(n) => Family::BigPhi(SpectralPoint::a_terminating(n as i64), Some(Side::Plus)),
            Member::BTerm(n) => Family::PhiDagger(SpectralPoint::b_terminating(n as i64), Some(Side::Plus)),
            // Φ⁺ = Φ⁻ at γ_n, so each anchor uses the series native to it; the
            // other side's series would amplify a solution whose coefficient vanishes.
            Member::GammaN(n) => Family::BigPhi(SpectralPoint::indef_lattice(n), None),
        }
    }

    fn tag(&self) -> String {
        match self {
            Member::Poly(k) => format!("m{k}"),
            Member::ATerm(n) => format!("a{n}"),
            Member::BTerm(n) => format!("b{n}"),
            Member::GammaN(n) => format!("g{n}"),
        }
    }

    /// Which family the member belongs to; members of one family share a closed-form norm.
    fn kind(&self) -> u8 {
        match self {
            Member::Poly(_) => 0,
            Member::ATerm(_) => 1,
            Member::BTerm(_) => 2,
            Member::GammaN(_) => 3,
        }
    }

    /// The closed-form squared norm, for the families this suite owns.
    fn norm(&self, p: &Params) -> Option<Result<Complex>> {
        match *self {
            Member::Poly(_) => None,
            Member::ATerm(n) => Some(phi_terminating_norm(p, n)),
            Member::BTerm(n) => Some(phi_terminating_norm(&p.swapped(), n)),
            Member::GammaN(n) => Some(phi_gamma_n_norm(p, n)),
        }
    }
}

fn applies(p: &Params) -> Option<Outcome> {
    p.t_minus_is_minus_one().then(|| Outcome::skipped("the indefinite form needs a second anchor t- outside -q^Z"))
}

pub(super) fn checks(cfg: &SuiteConfig, set: &Set) -> Vec<Check> {
    let mut out = Vec::new();
    let base = set.params.clone();
    let label = set.label();
    if base.t_minus_is_minus_one() {
        out.push(Check::new(set.id(SUITE, "all"), "indefinite form", label, 0.0, move || Ok(applies(&base).expect("t- = -1"))));
        return out;
    }
    let n_max = cfg.section5_n.max(0) as u64;
    let mut members: Vec<Member> = (0..=n_max).map(Member::Poly).collect();
    members.extend((0..=n_max).map(Member::ATerm));
    members.extend((0..=n_max).map(Member::BTerm));
    members.extend(GAMMA_N.into_iter().map(Member::GammaN));
    let fams: Vec<Arc<CachedFamily>> = members.iter().map(|m| Arc::new(CachedFamily::new(&base, m.family()))).collect();

    for i in 0..members.len() {
        for j in i..members.len() {
            let (mi, mj) = (&members[i], &members[j]);
            // The polynomial block belongs to the meixner-poly suite.
            if mi.kind() == 0 && mj.kind() == 0 {
                continue;
            }
            let (f, g, p, member) = (fams[i].clone(), fams[j].clone(), base.clone(), mi.clone());
            let (anchor, tol): (&'static str, Tol) = match (i == j, mi.kind() == mj.kind()) {
                (true, _) => match mi {
                    Member::GammaN(_) => ("norm of Phi at gamma_n", Tol::SpectralNorm),
                    Member::BTerm(_) => ("norm of the terminating Phi-dagger family", Tol::SpectralNorm),
                    _ => ("norm of the terminating Phi family", Tol::SpectralNorm),
                },
                (false, true) => ("orthogonality within a family", Tol::Norm),
                (false, false) => ("orthogonality across families", Tol::Norm),
            };
            let diagonal = i == j;
            out.push(Check::new(set.id(SUITE, &format!("gram/{}-{}", mi.tag(), mj.tag())), anchor, label.clone(), tol.of(cfg), move || {
                if let Some(o) = applies(&p) {
                    return Ok(o);
                }
                let v = inner_two_anchor(&p, f.as_ref(), g.as_ref())?;
                if diagonal {
                    let expect = member.norm(&p).expect("diagonal of an owned family")?;
                    Ok(gram_outcome(&v, Some(&expect)))
                } else {
                    Ok(gram_outcome(&v, None))
                }
            }));
        }
    }

    let mk = |name: &str, anchor: &'static str, tol: Tol, f: fn(&Params) -> Result<Outcome>| {
        let p = base.clone();
        Check::new(set.id(SUITE, name), anchor, label.clone(), tol.of(cfg), move || match applies(&p) {
            Some(o) => Ok(o),
            None => f(&p),
        })
    };
    out.push(mk("plus-equals-minus", "Phi+ = Phi- at the zeros of D(Phi+, Phi-)", Tol::Pointwise, plus_equals_minus));
    out.push(mk("norm-residue", "norm of Phi at gamma_n from the residue of 1/D", Tol::Residue, norm_residue));
    out.push(mk("resolvent", "the two-anchor Green kernel inverts L - mu", Tol::Strict, resolvent));
    out.push(mk("spectrum-scan", "zeros of D(Phi+, Phi-) lie in the singular set", Tol::Strict, spectrum_scan));
    out.push(mk("resolvent-eigenfunction", "the resolvent acts on Phi at gamma_n by 1/(mu_n - mu)", Tol::Norm, resolvent_on_eigenfunction));
    out
}

/// The zeros of `D(Φ⁺, Φ⁻)` on the real rays: the residual counts unexplained and missed zeros.
fn spectrum_scan(p: &Params) -> Result<Outcome> {
    let cmp = compare_spectrum(p, &ScanOptions { mode: KernelMode::TwoAnchor, ..ScanOptions::default() })?;
    let mut issues: Vec<String> = cmp.zeros.iter().filter(|z| z.class == ZeroClass::Unexplained).map(|z| format!("unexplained zero at {:.6e}", z.gamma)).collect();
    issues.extend(cmp.missed.iter().map(|l| format!("missed zero at {l}")));
    issues.extend(cmp.notes.iter().cloned());
    let note = if issues.is_empty() { format!("{} zeros, all explained", cmp.zeros.len()) } else { issues.join("; ") };
    Ok(Outcome::from_residual(issues.len() as f64, cmp.zeros.len() as f64, 0.0).with_note(note))
}

/// `Φ^+_{γ_n} = Φ^−_{γ_n}` at points of both anchors.
fn plus_equals_minus(p: &Params) -> Result<Outcome> {
    let mut out = Vec::new();
    for n in GAMMA_N {
        let g = SpectralPoint::indef_lattice(n);
        let (fp, fm) = (Family::BigPhi(g.clone(), Some(Side::Plus)), Family::BigPhi(g, Some(Side::Minus)));
        for x in [LatticePoint::plus(-1), LatticePoint::plus(2), LatticePoint::minus(-1), LatticePoint::minus(2)] {
            let (a, b) = (fp.at(p, &x)?, fm.at(p, &x)?);
            out.push(Outcome::compare(&a, &b, 0.0));
        }
    }
    Ok(Outcome::worst(out))
}

/// `(Φ_{γ_n}, Φ_{γ_n}) = D′(γ_n)/ab`, with `D′` from two central differences combined by one Richardson step.
fn norm_residue(p: &Params) -> Result<Outcome> {
    let j = residue_step_exponent(p);
    let mut out = Vec::new();
    for n in GAMMA_N {
        let g0 = SpectralPoint::indef_lattice(n).value(p);
        let absg = rug::Float::with_val(p.bits(), g0.abs_ref());
        let central = |jj: i64| -> Result<(Complex, f64)> {
            let h = mulf(&p.qpow(jj), &absg);
            let plus = casorati_closed_pm(p, &Complex::with_val(p.bits(), &g0 + &h))?;
            let minus = casorati_closed_pm(p, &sub(&g0, &h))?;
            Ok((div(&sub(&plus, &minus), &mul(&h, &Complex::with_val(p.bits(), 2))), abs_f64(&h)))
        };
        let (d1, h1) = central(j)?;
        let (d2, h2) = central(j + 2)?;
        let r2 = rug::Float::with_val(p.bits(), (h2 / h1).powi(2));
        let extrap = div(&sub(&d2, &mulf(&d1, &r2)), &Complex::with_val(p.bits(), 1 - r2));
        out.push(Outcome::compare(&div(&extrap, &p.ab()), &phi_gamma_n_norm(p, n)?, 0.0));
    }
    Ok(Outcome::worst(out))
}

/// `(L − μ(γ)) R_γ f = f` for a finitely supported `f` on both anchors.
fn resolvent(p: &Params) -> Result<Outcome> {
    let bits = p.bits();
    let f = vec![
        (LatticePoint::plus(0), Complex::with_val(bits, 1)),
        (LatticePoint::plus(2), Complex::with_val(bits, (0.5, -0.25))),
        (LatticePoint::minus(1), Complex::with_val(bits, (-0.3, 0.2))),
    ];
    let mut probes: Vec<LatticePoint> = (-2..=3).map(LatticePoint::plus).collect();
    probes.extend((-1..=2).map(LatticePoint::minus));
    let mut out = Vec::new();
    for i in [2usize, 4] {
        let g = SpectralPoint::generic(parse_complex(bits, GENERIC_GAMMAS[i])?);
        let r = resolvent_check(p, &g, &f, &probes, KernelMode::TwoAnchor)?;
        out.push(Outcome::from_residual(r.max_defect / r.scale, r.max_defect, r.scale));
    }
    Ok(Outcome::worst(out))
}

/// `(Φ_{γ_n}, K_γ(·, y)) (μ(γ_n) − μ(γ)) = Φ_{γ_n}(y)` at a generic `γ` and points of both anchors.
fn resolvent_on_eigenfunction(p: &Params) -> Result<Outcome> {
    let gamma = SpectralPoint::generic(parse_complex(p.bits(), GENERIC_GAMMAS[2])?);
    let mu_g = mu(p, &gamma.value(p));
    let mut out = Vec::new();
    for n in [0i64, 1] {
        let gn = SpectralPoint::indef_lattice(n);
        let fam = CachedFamily::new(p, Member::GammaN(n).family());
        let shift = sub(&mu(p, &gn.value(p)), &mu_g);
        for y in [LatticePoint::plus(1), LatticePoint::minus(0)] {
            let kernel = |x: &LatticePoint| green_kernel(p, &gamma, x, &y, KernelMode::TwoAnchor);
            let r = inner_two_anchor(p, &fam, &kernel)?;
            out.push(Outcome::compare(&mul(&r.value, &shift), &crate::qcalculus::LatticeFunction::eval_at(&fam, &y)?, 0.0));
        }
    }
    Ok(Outcome::worst(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Precision;

    #[test]
    fn single_anchor_sets_are_skipped() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap();
        assert!(applies(&p).is_some());
    }

    #[test]
    fn indefinite_identities() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-0.7", Precision::default()).unwrap();
        for (name, f, tol) in [
            ("plus-equals-minus", plus_equals_minus as fn(&Params) -> Result<Outcome>, 1e-28),
            ("norm-residue", norm_residue, 1e-15),
            ("resolvent", resolvent, 1e-25),
            ("resolvent-eigenfunction", resolvent_on_eigenfunction, 1e-22),
        ] {
            let o = f(&p).unwrap();
            assert!(o.residual < tol, "{name}: {:e}", o.residual);
        }
    }
}
