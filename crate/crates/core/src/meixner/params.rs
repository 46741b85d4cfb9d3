//! Validated parameter bundles, positivity classification and spectral points.

use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{div, mul, mulf, neg, real};
use crate::qcalculus::{Anchors, Branch, LatticePoint};
use crate::qseries::{q_lattice_index, QContext};
use crate::scalar::{format_complex, parse_complex, parse_real, Precision};

/// Which positivity regime of the weight applies (with `t₋ = −1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Positivity {
    /// `a = b̄` with `a` non-real.
    CaseI,
    /// `0 < a, b < 1`.
    CaseII,
    /// `q^{k₀} < a, b < q^{k₀−1}` for some `k₀ ≤ 0`.
    CaseIII { k0: i64 },
    /// `q^{k₀} < −at, −bt < q^{k₀−1}` for some `k₀ ∈ ℤ`.
    CaseIV { k0: i64 },
    /// None of the above.
    None,
}

impl Positivity {
    /// Whether the weight is a positive measure on `−q^ℕ ∪ tq^ℤ`.
    pub fn is_positive(&self) -> bool {
        !matches!(self, Positivity::None)
    }

    /// Short label.
    pub fn label(&self) -> String {
        match self {
            Positivity::CaseI => "i".into(),
            Positivity::CaseII => "ii".into(),
            Positivity::CaseIII { k0 } => format!("iii(k0={k0})"),
            Positivity::CaseIV { k0 } => format!("iv(k0={k0})"),
            Positivity::None => "none".into(),
        }
    }
}

/// Genericity of the parameters (`true` means the quantity avoids `q^ℤ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Genericity {
    pub a: bool,
    pub b: bool,
    pub b_over_a: bool,
    pub ab_tm_tp: bool,
    pub a_tm_tp: bool,
    pub b_tm_tp: bool,
}

impl Genericity {
    /// Requirements of the indefinite (two-anchor) theory; returns the first violated flag.
    pub fn check_indefinite(&self) -> std::result::Result<(), &'static str> {
        let flags = [
            (self.a, "a in q^Z"),
            (self.b, "b in q^Z"),
            (self.b_over_a, "b/a in q^Z"),
            (self.ab_tm_tp, "a b t- t+ in q^Z"),
            (self.a_tm_tp, "a t- t+ in q^Z"),
            (self.b_tm_tp, "b t- t+ in q^Z"),
        ];
        match flags.iter().find(|(ok, _)| !ok) {
            Some((_, name)) => Err(name),
            None => Ok(()),
        }
    }
}

/// The parameter bundle `(q, a, b, c, t₊, t₋)`.
#[derive(Debug, Clone)]
pub struct Params {
    ctx: QContext,
    a: Complex,
    b: Complex,
    c: Option<Complex>,
    anchors: Anchors,
    positivity: Positivity,
    genericity: Genericity,
}

fn in_q_lattice(ctx: &QContext, z: &Complex) -> bool {
    q_lattice_index(ctx, z).is_some()
}

impl Params {
    /// Validates and classifies a parameter bundle; all inputs are taken as exact.
    pub fn new(ctx: QContext, a: Complex, b: Complex, t_plus: Float, t_minus: Float) -> Result<Self> {
        let bits = ctx.bits();
        let a = Complex::with_val(bits.max(a.prec().0), a);
        let b = Complex::with_val(bits.max(b.prec().0), b);
        if a.is_zero() || b.is_zero() {
            return Err(Error::Input("a and b must be nonzero".into()));
        }
        let anchors = Anchors::new(t_plus, t_minus)?;
        let tp = real(bits, &anchors.t_plus);
        let tm = real(bits, &anchors.t_minus);
        for (name, v) in [("a", &a), ("b", &b)] {
            if crate::qseries::q_neg_index(&ctx, v).is_some() {
                return Err(Error::Domain(format!("{name} lies in q^(-N): the weight has a pole on -q^N")));
            }
            for (tn, t) in [("t_plus", &tp), ("t_minus", &tm)] {
                if in_q_lattice(&ctx, &neg(&mul(v, t))) {
                    return Err(Error::Domain(format!("-{name}*{tn} lies in q^Z: the weight has a pole on the lattice")));
                }
            }
        }
        let tmtp = mul(&tm, &tp);
        let genericity = Genericity {
            a: !in_q_lattice(&ctx, &a),
            b: !in_q_lattice(&ctx, &b),
            b_over_a: !in_q_lattice(&ctx, &div(&b, &a)),
            ab_tm_tp: !in_q_lattice(&ctx, &mul(&mul(&a, &b), &tmtp)),
            a_tm_tp: !in_q_lattice(&ctx, &mul(&a, &tmtp)),
            b_tm_tp: !in_q_lattice(&ctx, &mul(&b, &tmtp)),
        };
        let mut p = Self { ctx, a, b, c: None, anchors, positivity: Positivity::None, genericity };
        p.positivity = classify_positivity(&p);
        Ok(p)
    }

    /// Parses decimal/complex literals at the requested precision.
    pub fn parse(q: &str, a: &str, b: &str, t_plus: &str, t_minus: &str, precision: Precision) -> Result<Self> {
        let ctx = QContext::parse(q, precision)?;
        let bits = ctx.bits();
        Self::new(ctx, parse_complex(bits, a)?, parse_complex(bits, b)?, parse_real(bits, t_plus)?, parse_real(bits, t_minus)?)
    }

    /// Adds the extra parameter `c` of the finite polynomial family.
    pub fn with_c(mut self, c: Complex) -> Self {
        self.c = Some(Complex::with_val(self.ctx.bits().max(c.prec().0), c));
        self
    }

    /// Same parameters with a different `t₊`.
    pub fn with_t_plus(&self, t_plus: Float) -> Result<Self> {
        let p = Self::new(self.ctx.clone(), self.a.clone(), self.b.clone(), t_plus, self.anchors.t_minus.clone())?;
        Ok(match &self.c {
            Some(c) => p.with_c(c.clone()),
            None => p,
        })
    }

    /// Same parameters with a different `t₋`.
    pub fn with_t_minus(&self, t_minus: Float) -> Result<Self> {
        let p = Self::new(self.ctx.clone(), self.a.clone(), self.b.clone(), self.anchors.t_plus.clone(), t_minus)?;
        Ok(match &self.c {
            Some(c) => p.with_c(c.clone()),
            None => p,
        })
    }

    /// Parameters with `a` and `b` interchanged.
    pub fn swapped(&self) -> Self {
        let mut p = self.clone();
        std::mem::swap(&mut p.a, &mut p.b);
        p.genericity = Genericity { a: self.genericity.b, b: self.genericity.a, b_over_a: self.genericity.b_over_a, a_tm_tp: self.genericity.b_tm_tp, b_tm_tp: self.genericity.a_tm_tp, ..self.genericity };
        p.positivity = classify_positivity(&p);
        p
    }

    /// The same parameters evaluated at a different working precision (values promoted exactly).
    pub fn at_bits(&self, bits: u32) -> Self {
        let ctx = self.ctx.with_bits(bits);
        let up = |z: &Complex| Complex::with_val(bits.max(z.prec().0), z);
        let upf = |f: &Float| Float::with_val(bits.max(f.prec()), f);
        Self {
            ctx,
            a: up(&self.a),
            b: up(&self.b),
            c: self.c.as_ref().map(up),
            anchors: Anchors { t_plus: upf(&self.anchors.t_plus), t_minus: upf(&self.anchors.t_minus) },
            positivity: self.positivity,
            genericity: self.genericity,
        }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn bits(&self) -> u32 {
        self.ctx.bits()
    }

    pub fn a(&self) -> Complex {
        Complex::with_val(self.bits(), &self.a)
    }

    pub fn b(&self) -> Complex {
        Complex::with_val(self.bits(), &self.b)
    }

    pub fn c(&self) -> Option<Complex> {
        self.c.as_ref().map(|c| Complex::with_val(self.bits(), c))
    }

    pub fn t_plus(&self) -> Complex {
        real(self.bits(), &self.anchors.t_plus)
    }

    pub fn t_minus(&self) -> Complex {
        real(self.bits(), &self.anchors.t_minus)
    }

    /// The anchor `t` of a branch (`−1` for the negative branch).
    pub fn anchor(&self, branch: Branch) -> Complex {
        real(self.bits(), &self.anchors.anchor(branch))
    }

    pub fn anchors(&self) -> &Anchors {
        &self.anchors
    }

    pub fn positivity(&self) -> Positivity {
        self.positivity
    }

    pub fn genericity(&self) -> Genericity {
        self.genericity
    }

    /// Whether `t₋ = −1` (the single-anchor setting).
    pub fn t_minus_is_minus_one(&self) -> bool {
        self.anchors.t_minus == -1
    }

    /// Numerical value of a lattice point.
    pub fn point(&self, x: &LatticePoint) -> Complex {
        x.value(&self.ctx, &self.anchors)
    }

    /// `ab`.
    pub fn ab(&self) -> Complex {
        mul(&self.a, &self.b)
    }

    /// `q^k` as a complex number.
    pub fn qpow(&self, k: i64) -> Complex {
        self.ctx.qpow_cx(k)
    }

    /// `z · q^k`.
    pub fn shift(&self, z: &Complex, k: i64) -> Complex {
        mulf(z, &self.ctx.qpow(k))
    }

    /// Compact human-readable description.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "q={} a={} b={} t+={} t-={}",
            self.ctx.q().to_f64(),
            format_complex(&self.a, 8),
            format_complex(&self.b, 8),
            self.anchors.t_plus.to_f64(),
            self.anchors.t_minus.to_f64()
        );
        if let Some(c) = &self.c {
            s.push_str(&format!(" c={}", format_complex(c, 8)));
        }
        s
    }
}

/// Determines which positivity case holds (requires `t₋ = −1`, else `None`).
pub fn classify_positivity(p: &Params) -> Positivity {
    if !p.t_minus_is_minus_one() {
        return Positivity::None;
    }
    let (a, b) = (&p.a, &p.b);
    let a_real = a.imag().is_zero();
    let b_real = b.imag().is_zero();
    if !a_real {
        let conj = Complex::with_val(p.bits(), b.conj_ref());
        return if crate::scalar::rel_diff(a, &conj, 0.0) < 2f64.powi(-(p.bits() as i32) + 8) {
            Positivity::CaseI
        } else {
            Positivity::None
        };
    }
    if !b_real {
        return Positivity::None;
    }
    let (ar, br) = (a.real().clone(), b.real().clone());
    if ar > 0 && ar < 1 && br > 0 && br < 1 {
        return Positivity::CaseII;
    }
    let ctx = &p.ctx;
    // Index k with q^k < v < q^{k-1}, if v > 0 and not on the lattice.
    let bracket = |v: &Float| -> Option<i64> {
        if !(*v > 0) {
            return None;
        }
        let k = (v.to_f64().ln() / ctx.ln_q_f64()).floor() as i64 + 1;
        for cand in [k - 1, k, k + 1] {
            if ctx.qpow(cand) < *v && *v < ctx.qpow(cand - 1) {
                return Some(cand);
            }
        }
        None
    };
    if let (Some(ka), Some(kb)) = (bracket(&ar), bracket(&br)) {
        if ka == kb && ka <= 0 {
            return Positivity::CaseIII { k0: ka };
        }
    }
    let t = &p.anchors.t_plus;
    let mat = -Float::with_val(p.bits(), &ar * t);
    let mbt = -Float::with_val(p.bits(), &br * t);
    if let (Some(ka), Some(kb)) = (bracket(&mat), bracket(&mbt)) {
        if ka == kb {
            return Positivity::CaseIV { k0: ka };
        }
    }
    Positivity::None
}

/// How a spectral parameter was produced; points with a lattice origin are
/// recomputed exactly at whatever precision they are used.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// `γ = −q^n`, `n ≥ 0`.
    NegQN { n: i64 },
    /// `γ = q^k / (a b t₊)`.
    PosLattice { k: i64 },
    /// `γ = −q^n / (a b t₋ t₊)`.
    IndefLattice { n: i64 },
    /// `γ = −q^{1+n} / a`.
    ATerminating { n: i64 },
    /// `γ = −q^{1+n} / b`.
    BTerminating { n: i64 },
    /// Any other value.
    Generic,
}

/// A spectral parameter γ with its symbolic origin.
#[derive(Debug, Clone)]
pub struct SpectralPoint {
    origin: Origin,
    generic: Option<Complex>,
}

impl SpectralPoint {
    /// `γ = −q^n`.
    pub fn neg_qn(n: i64) -> Self {
        assert!(n >= 0, "neg_qn requires n >= 0");
        Self { origin: Origin::NegQN { n }, generic: None }
    }

    /// `γ = q^k/(abt₊)`.
    pub fn pos_lattice(k: i64) -> Self {
        Self { origin: Origin::PosLattice { k }, generic: None }
    }

    /// `γ_n = −q^n/(abt₋t₊)`.
    pub fn indef_lattice(n: i64) -> Self {
        Self { origin: Origin::IndefLattice { n }, generic: None }
    }

    /// `γ = −q^{1+n}/a`.
    pub fn a_terminating(n: i64) -> Self {
        Self { origin: Origin::ATerminating { n }, generic: None }
    }

    /// `γ = −q^{1+n}/b`.
    pub fn b_terminating(n: i64) -> Self {
        Self { origin: Origin::BTerminating { n }, generic: None }
    }

    /// An arbitrary value.
    pub fn generic(gamma: Complex) -> Self {
        Self { origin: Origin::Generic, generic: Some(gamma) }
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// The value of γ for the given parameters, at their working precision.
    pub fn value(&self, p: &Params) -> Complex {
        let bits = p.bits();
        match self.origin {
            Origin::NegQN { n } => neg(&p.qpow(n)),
            Origin::PosLattice { k } => div(&p.qpow(k), &mul(&p.ab(), &p.t_plus())),
            Origin::IndefLattice { n } => neg(&div(&p.qpow(n), &mul(&p.ab(), &mul(&p.t_minus(), &p.t_plus())))),
            Origin::ATerminating { n } => neg(&div(&p.qpow(1 + n), &p.a())),
            Origin::BTerminating { n } => neg(&div(&p.qpow(1 + n), &p.b())),
            Origin::Generic => Complex::with_val(bits, self.generic.as_ref().expect("generic value")),
        }
    }

    /// The same point with the roles of `a` and `b` exchanged.
    pub fn swapped_ab(&self) -> Self {
        let origin = match self.origin {
            Origin::ATerminating { n } => Origin::BTerminating { n },
            Origin::BTerminating { n } => Origin::ATerminating { n },
            ref o => o.clone(),
        };
        Self { origin, generic: self.generic.clone() }
    }

    /// Human-readable label.
    pub fn label(&self) -> String {
        match &self.origin {
            Origin::NegQN { n } => format!("-q^{n}"),
            Origin::PosLattice { k } => format!("q^{k}/(abt)"),
            Origin::IndefLattice { n } => format!("-q^{n}/(ab t- t+)"),
            Origin::ATerminating { n } => format!("-q^{}/a", n + 1),
            Origin::BTerminating { n } => format!("-q^{}/b", n + 1),
            Origin::Generic => format_complex(self.generic.as_ref().expect("generic value"), 12),
        }
    }
}

/// `μ(γ) = −ab(1+γ)`.
pub fn mu(p: &Params, gamma: &Complex) -> Complex {
    neg(&mul(&p.ab(), &Complex::with_val(p.bits(), gamma + 1)))
}

/// The inverse of [`mu`]: `γ_μ = −(μ/ab + 1)`.
pub fn gamma_of_mu(p: &Params, mu_val: &Complex) -> Complex {
    neg(&Complex::with_val(p.bits(), div(mu_val, &p.ab()) + 1))
}
