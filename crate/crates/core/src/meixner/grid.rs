//! Function families tabulated over a truncated lattice window.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::Complex;

use crate::error::{Error, Result};
use crate::qcalculus::{Branch, LatticeFunction, LatticePoint};

use super::functions::{big_phi, phi, phi_dagger, psi, BigPhiRoute, Evaluation, PhiRoute, Point, PsiRoute, Side};
use super::params::SpectralPoint;
use super::poly::{poly_m, poly_p};
use super::Params;

/// A named function family.
#[derive(Debug, Clone)]
pub enum Family {
    /// The polynomial `m_n`.
    M(u64),
    /// The finite-family polynomial `P_n` (needs `c`).
    P(u64),
    /// `φ_γ`.
    Phi(SpectralPoint),
    /// `ψ_γ`.
    Psi(SpectralPoint),
    /// `Φ_γ^±`; `None` selects the side of each point's own branch.
    BigPhi(SpectralPoint, Option<Side>),
    /// `Φ_γ^†`; `None` selects the side of each point's own branch.
    PhiDagger(SpectralPoint, Option<Side>),
}

impl Family {
    /// Evaluates the family at one point.
    pub fn eval(&self, p: &Params, x: &Point) -> Result<Evaluation> {
        let side_of = |s: &Option<Side>| -> Result<Side> {
            match (s, x) {
                (Some(s), _) => Ok(*s),
                (None, Point::Lattice(l)) => Ok(Side::of(l)),
                (None, Point::Value(_)) => Err(Error::Input("a side must be given for a free point".into())),
            }
        };
        match self {
            Family::M(n) => plain(p, poly_m(p, *n, &x.value(p))?, "polynomial"),
            Family::P(n) => plain(p, poly_p(p, *n, &x.value(p))?, "polynomial"),
            Family::Phi(g) => phi(p, g, x, PhiRoute::Auto),
            Family::Psi(g) => psi(p, g, x, PsiRoute::Auto),
            Family::BigPhi(g, s) => big_phi(p, g, side_of(s)?, x, BigPhiRoute::Auto),
            Family::PhiDagger(g, s) => phi_dagger(p, g, side_of(s)?, x, BigPhiRoute::Auto),
        }
    }

    /// Evaluates the family at a lattice point, returning just the value.
    pub fn at(&self, p: &Params, x: &LatticePoint) -> Result<Complex> {
        Ok(self.eval(p, &Point::Lattice(*x))?.value)
    }

    /// Short label for reports.
    pub fn label(&self) -> String {
        let side = |s: &Option<Side>| match s {
            Some(Side::Plus) => "+",
            Some(Side::Minus) => "-",
            None => "",
        };
        match self {
            Family::M(n) => format!("m_{n}"),
            Family::P(n) => format!("P_{n}"),
            Family::Phi(g) => format!("phi[{}]", g.label()),
            Family::Psi(g) => format!("psi[{}]", g.label()),
            Family::BigPhi(g, s) => format!("Phi{}[{}]", side(s), g.label()),
            Family::PhiDagger(g, s) => format!("Phidag{}[{}]", side(s), g.label()),
        }
    }
}

fn plain(p: &Params, v: Complex, route: &'static str) -> Result<Evaluation> {
    Ok(Evaluation { value: v, route, cancellation: 1.0, bits_used: p.bits() })
}

/// Branch-indexed inclusive ranges of `k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Window {
    pub neg: Option<(i64, i64)>,
    pub plus: Option<(i64, i64)>,
    pub minus: Option<(i64, i64)>,
}

impl Window {
    /// `−q^k, k ∈ [0, n_neg]` together with `t₊q^k, k ∈ [m, n]`.
    pub fn single_anchor(n_neg: i64, m: i64, n: i64) -> Self {
        Self { neg: Some((0, n_neg)), plus: Some((m, n)), minus: None }
    }

    /// `t₋q^k` and `t₊q^k`, both over `k ∈ [m, n]`.
    pub fn two_anchor(m: i64, n: i64) -> Self {
        Self { neg: None, plus: Some((m, n)), minus: Some((m, n)) }
    }

    /// Whether `x` lies in the window.
    pub fn contains(&self, x: &LatticePoint) -> bool {
        let r = match x.branch {
            Branch::Neg => self.neg,
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        };
        r.is_some_and(|(lo, hi)| lo <= x.k && x.k <= hi)
    }

    /// All points of the window, in a fixed order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for (branch, r) in [(Branch::Neg, self.neg), (Branch::Minus, self.minus), (Branch::Plus, self.plus)] {
            if let Some((lo, hi)) = r {
                out.extend((lo..=hi).map(|k| LatticePoint { branch, k }));
            }
        }
        out
    }
}

/// Values of a family over a window, with per-point diagnostics.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub family: Family,
    pub params: Params,
    pub window: Window,
    values: BTreeMap<LatticePoint, Evaluation>,
}

impl GridFunction {
    /// Evaluates the family at every window point (in parallel, deterministic merge).
    pub fn build(p: &Params, family: Family, window: Window) -> Result<Self> {
        let pts = window.points();
        let evals: Vec<Result<(LatticePoint, Evaluation)>> =
            pts.par_iter().map(|x| family.eval(p, &Point::Lattice(*x)).map(|e| (*x, e))).collect();
        let mut values = BTreeMap::new();
        for r in evals {
            let (x, e) = r?;
            values.insert(x, e);
        }
        Ok(Self { family, params: p.clone(), window, values })
    }

    /// The stored value at `x`.
    pub fn get(&self, x: &LatticePoint) -> Result<&Complex> {
        self.values
            .get(x)
            .map(|e| &e.value)
            .ok_or_else(|| Error::Window(format!("{} not tabulated at {:?} q^{}", self.family.label(), x.branch, x.k)))
    }

    /// Full diagnostics at `x`.
    pub fn evaluation(&self, x: &LatticePoint) -> Option<&Evaluation> {
        self.values.get(x)
    }

    /// Iterates over the stored points in order.
    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Evaluation)> {
        self.values.iter()
    }

    /// Largest cancellation ratio over the window.
    pub fn worst_cancellation(&self) -> f64 {
        self.values.values().map(|e| e.cancellation).fold(1.0, f64::max)
    }
}

impl LatticeFunction for GridFunction {
    fn eval_at(&self, x: &LatticePoint) -> Result<Complex> {
        self.get(x).cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rel_diff, Precision};

    #[test]
    fn grid_matches_pointwise_and_rejects_outside() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap();
        let fam = Family::Phi(SpectralPoint::generic(p.ctx().real(2.1)));
        let g = GridFunction::build(&p, fam.clone(), Window::single_anchor(3, -3, 3)).unwrap();
        assert_eq!(g.iter().count(), 4 + 7);
        for x in [LatticePoint::plus(-3), LatticePoint::neg(2).unwrap()] {
            assert!(rel_diff(g.get(&x).unwrap(), &fam.at(&p, &x).unwrap(), 0.0) < 1e-55);
        }
        assert!(matches!(g.get(&LatticePoint::plus(4)), Err(Error::Window(_))));
    }
}
