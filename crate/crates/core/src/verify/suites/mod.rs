//! Expansion of each named suite into checks.

mod finite;
mod functions;
mod lemma;
mod poly;
mod qseries;
mod section5;
mod spectral;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Complex;

use crate::error::Result;
use crate::meixner::closed::{integral_i, integral_two_anchor};
use crate::meixner::{inner_single, inner_two_anchor, InnerProduct, Params};
use crate::qcalculus::LatticeFunction;

use super::config::{ParamSpec, SuiteConfig, SuiteName};
use super::{Check, Outcome};

/// Builds the checks of one suite.
pub(super) fn build(suite: SuiteName, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let sets = sets(cfg)?;
    Ok(match suite {
        SuiteName::QseriesIdentities => qseries::checks(cfg, &sets),
        SuiteName::Lemma21 => sets.iter().flat_map(|s| lemma::checks(cfg, s)).collect(),
        SuiteName::FiniteFamily => sets.iter().flat_map(|s| finite::checks(cfg, s)).collect(),
        SuiteName::MeixnerPoly => sets.iter().flat_map(|s| poly::checks(cfg, s)).collect(),
        SuiteName::MeixnerFunction => sets.iter().flat_map(|s| functions::checks(cfg, s)).collect(),
        SuiteName::Spectral => sets.iter().flat_map(|s| spectral::checks(cfg, s)).collect(),
        SuiteName::Section5 => sets.iter().flat_map(|s| section5::checks(cfg, s)).collect(),
    })
}

/// A parameter set built at the configured precision.
#[derive(Clone)]
pub(super) struct Set {
    pub spec: ParamSpec,
    pub params: Arc<Params>,
}

impl Set {
    /// `suite/set/name` check id.
    pub fn id(&self, suite: SuiteName, name: &str) -> String {
        format!("{suite}/{}/{name}", self.spec.name)
    }

    pub fn label(&self) -> String {
        self.spec.describe()
    }
}

fn sets(cfg: &SuiteConfig) -> Result<Vec<Set>> {
    cfg.params.iter().map(|spec| Ok(Set { spec: spec.clone(), params: Arc::new(spec.build(cfg.precision())?) })).collect()
}

/// Spectral parameters away from every special family, used wherever a
/// generic `γ` is needed.
pub(super) const GENERIC_GAMMAS: [&str; 5] = ["0.37+0.21i", "-0.45+0.6i", "1.7-0.3i", "-2.1-0.7i", "3.2i"];

/// Tolerance classes, as multiples of the configured tolerance.
#[derive(Debug, Clone, Copy)]
pub(super) enum Tol {
    /// Exact algebraic identities evaluated pointwise (`tol · 10⁻⁵`).
    Identity,
    /// Eigenvalue equations and the duality battery (`tol · 10⁻³`).
    Pointwise,
    /// Off-diagonals and directly summed identities (`tol`).
    Strict,
    /// Norms of polynomial families and determinants (`tol · 10³`).
    Norm,
    /// Norms of transcendental families (`tol · 10⁵`).
    SpectralNorm,
    /// Decay of boundary terms (`tol · 10⁵`, absolute).
    Decay,
    /// Residues by numerical differentiation (`tol · 10¹⁰`).
    Residue,
}

impl Tol {
    pub fn of(self, cfg: &SuiteConfig) -> f64 {
        cfg.tolerance
            * match self {
                Tol::Identity => 1e-5,
                Tol::Pointwise => 1e-3,
                Tol::Strict => 1.0,
                Tol::Norm => 1e3,
                Tol::SpectralNorm | Tol::Decay => 1e5,
                Tol::Residue => 1e10,
            }
    }
}

/// Deterministic generator for a named check.
pub(super) fn rng_for(cfg: &SuiteConfig, id: &str) -> ChaCha8Rng {
    let h = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    ChaCha8Rng::seed_from_u64(cfg.seed ^ h)
}

/// A random complex number with modulus in `[r_lo, r_hi]`.
pub(super) fn random_annulus(rng: &mut ChaCha8Rng, bits: u32, r_lo: f64, r_hi: f64) -> Complex {
    let r = rng.gen_range(r_lo..r_hi);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex::with_val(bits, (r * phi.cos(), r * phi.sin()))
}

/// Gram-type comparison: the diagonal is compared with `expected`, an
/// off-diagonal entry with zero relative to the summands.
pub(super) fn gram_outcome(value: &InnerProduct, expected: Option<&Complex>) -> Outcome {
    match expected {
        Some(e) => Outcome::compare(&value.value, e, 0.0).with_cancellation(value.scale / crate::scalar::abs_f64(&value.value).max(f64::MIN_POSITIVE)),
        None => Outcome::vanishes(&value.value, value.scale),
    }
}

/// The inner product a Gram matrix is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Form {
    /// Sesquilinear, on `−q^ℕ ∪ t₊q^ℤ`, normalised by `I(a,b;t)`.
    Single,
    /// Bilinear, on `t₋q^ℤ ∪ t₊q^ℤ`, normalised by `I(a,b;t₋,t₊)`.
    TwoAnchor,
}

impl Form {
    /// The single-anchor form when `t₋ = −1`, the two-anchor form otherwise.
    pub fn for_params(p: &Params) -> Self {
        if p.t_minus_is_minus_one() {
            Form::Single
        } else {
            Form::TwoAnchor
        }
    }

    pub fn apply<F, G>(self, p: &Params, f: &F, g: &G) -> Result<InnerProduct>
    where
        F: LatticeFunction + ?Sized,
        G: LatticeFunction + ?Sized,
    {
        match self {
            Form::Single => inner_single(p, f, g),
            Form::TwoAnchor => inner_two_anchor(p, f, g),
        }
    }

    /// The total mass of the weight in this form.
    pub fn mass(self, p: &Params) -> Result<Complex> {
        match self {
            Form::Single => integral_i(p),
            Form::TwoAnchor => integral_two_anchor(p),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Form::Single => "single-anchor",
            Form::TwoAnchor => "two-anchor",
        }
    }
}
