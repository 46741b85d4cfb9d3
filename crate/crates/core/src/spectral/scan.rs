//! Locating the zeros of the determinant along q-geometric rays.

use rayon::prelude::*;
use rug::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::meixner::functions::neg_q_index;
use crate::meixner::{Params, SpectralPoint};
use crate::ops::{div, mul, neg};
use crate::qseries::q_lattice_index;
use crate::scalar::abs_f64;

use super::casorati::{casorati_closed_phi_phi, casorati_closed_pm};
use super::green::KernelMode;

/// Where a located zero sits relative to the predicted singular set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroClass {
    /// `γ = −q^n`, `n ≥ 0`.
    NegQN { n: i64 },
    /// `γ = q^k/(abt₊)`.
    PosLattice { k: i64 },
    /// `γ = −q^n/(abt₋t₊)`.
    IndefLattice { n: i64 },
    /// `γ = −q^{1+n}/a`, `n ≥ 0`: the terminating eigenfunctions of the
    /// two-anchor space (on the single-anchor space these are not zeros).
    ATerminating { n: i64 },
    /// `γ = −q^{−n}/a`, where the zero of `D` is cancelled by a vanishing
    /// solution and the kernel stays finite.
    Cancelled { n: i64 },
    /// Not on any predicted ray.
    Unexplained,
}

/// A zero of `D(γ)` found by the scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanZero {
    /// The sign of the ray, `γ = sign · q^u`.
    pub sign: i8,
    /// The log-q coordinate `u`.
    pub u: f64,
    /// `γ` as a float.
    pub gamma: f64,
    /// `|D|` at the refined point relative to its size on the scan grid.
    pub relative_depth: f64,
    pub class: ZeroClass,
}

/// Scan settings: `u` runs over `[u_min, u_max]` in steps of `1/per_unit`.
#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub u_min: f64,
    pub u_max: f64,
    pub per_unit: u32,
    pub mode: KernelMode,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { u_min: -6.0, u_max: 10.0, per_unit: 16, mode: KernelMode::SingleAnchor }
    }
}

/// `D(sign · q^u)` for real `u`.
fn det_at(p: &Params, sign: i8, u: f64, mode: KernelMode) -> Result<Complex> {
    let ctx = p.ctx();
    let mag = rug::Float::with_val(p.bits(), ctx.q().clone().ln() * u).exp();
    let g = Complex::with_val(p.bits(), (mag * i32::from(sign), 0));
    match mode {
        KernelMode::SingleAnchor => casorati_closed_phi_phi(p, &g),
        KernelMode::TwoAnchor => casorati_closed_pm(p, &g),
    }
}

/// `log|D|`, with exact zeros and poles mapped to `∓∞`.
fn log_abs_det(p: &Params, sign: i8, u: f64, mode: KernelMode) -> f64 {
    match det_at(p, sign, u, mode) {
        Ok(d) if d.is_zero() => f64::NEG_INFINITY,
        Ok(d) => crate::scalar::log10_abs(&d),
        Err(_) => f64::INFINITY,
    }
}

/// Classifies `γ` against the predicted zero set, snapping with the lattice tolerance.
pub fn classify_zero(p: &Params, gamma: &Complex, mode: KernelMode) -> ZeroClass {
    let ctx = p.ctx();
    if let Some(n) = neg_q_index(p, gamma) {
        return ZeroClass::NegQN { n: n as i64 };
    }
    match mode {
        KernelMode::SingleAnchor => {
            if let Some(k) = q_lattice_index(ctx, &mul(gamma, &mul(&p.ab(), &p.t_plus()))) {
                return ZeroClass::PosLattice { k };
            }
        }
        KernelMode::TwoAnchor => {
            let s = neg(&mul(gamma, &mul(&p.ab(), &mul(&p.t_plus(), &p.t_minus()))));
            if let Some(n) = q_lattice_index(ctx, &s) {
                return ZeroClass::IndefLattice { n };
            }
        }
    }
    if let Some(j) = q_lattice_index(ctx, &neg(&mul(gamma, &p.a()))) {
        if j <= 0 {
            return ZeroClass::Cancelled { n: -j };
        }
        if mode == KernelMode::TwoAnchor {
            return ZeroClass::ATerminating { n: j - 1 };
        }
    }
    ZeroClass::Unexplained
}

/// Scans both real rays `γ = ±q^u` for zeros of the determinant.
///
/// Local minima of `log|D|` on the grid are refined by golden-section search
/// in `u`; a minimum counts as a zero when it is at least `digits/3` decades
/// below its grid neighbours. The refined value is then snapped to the lattice.
pub fn scan_zeros(p: &Params, opts: &ScanOptions) -> Result<Vec<ScanZero>> {
    if opts.per_unit == 0 || !(opts.u_max > opts.u_min) {
        return Err(Error::Input("scan range is empty".into()));
    }
    let steps = ((opts.u_max - opts.u_min) * f64::from(opts.per_unit)).round() as usize;
    let du = 1.0 / f64::from(opts.per_unit);
    let depth = f64::from(p.ctx().precision().digits()) / 3.0;
    let mut out = Vec::new();
    for sign in [-1i8, 1] {
        let grid: Vec<f64> = (0..=steps)
            .into_par_iter()
            .map(|i| log_abs_det(p, sign, opts.u_min + i as f64 * du, opts.mode))
            .collect();
        for i in 1..steps {
            let (l, c, r) = (grid[i - 1], grid[i], grid[i + 1]);
            if !(c <= l && c < r) && c != f64::NEG_INFINITY {
                continue;
            }
            let u_c = opts.u_min + i as f64 * du;
            let (u, val) = if c == f64::NEG_INFINITY { (u_c, c) } else { golden_min(|u| log_abs_det(p, sign, u, opts.mode), u_c - du, u_c + du) };
            let neighbour = l.min(r);
            if !(val < neighbour - depth) {
                continue;
            }
            let mag = p.ctx().q().to_f64().powf(u);
            let gamma = Complex::with_val(p.bits(), (rug::Float::with_val(p.bits(), p.ctx().q().clone().ln() * u).exp() * i32::from(sign), 0));
            let class = classify_zero(p, &snap(p, &gamma), opts.mode);
            out.push(ScanZero { sign, u, gamma: f64::from(sign) * mag, relative_depth: val - neighbour, class });
        }
    }
    out.dedup_by(|a, b| a.sign == b.sign && (a.u - b.u).abs() < 0.5 / f64::from(opts.per_unit));
    Ok(out)
}

/// The scan compared with the predicted singular set.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumComparison {
    pub zeros: Vec<ScanZero>,
    /// Labels of predicted zeros inside the window that the scan did not find.
    pub missed: Vec<String>,
    /// Reasons the comparison is incomplete (e.g. a ray off the real axis).
    pub notes: Vec<String>,
}

impl SpectrumComparison {
    /// Number of unexplained or missed zeros.
    pub fn discrepancies(&self) -> usize {
        self.zeros.iter().filter(|z| z.class == ZeroClass::Unexplained).count() + self.missed.len()
    }
}

/// Scans for zeros and checks that each predicted real zero inside the window
/// (half a unit of `u` away from its ends) is found, and that every found zero
/// is explained.
///
/// The predicted set is `−q^ℕ ∪ q^ℤ/(abt₊)` for the single-anchor determinant
/// and `−q^ℕ ∪ (−q/a)q^ℕ ∪ −q^ℤ/(abt₋t₊)` for the two-anchor one. The points
/// `(−q/b)q^ℕ` are poles of the kernel but not zeros of the two-anchor `D`
/// (which has a pole there itself), so the scan cannot see them.
pub fn compare_spectrum(p: &Params, opts: &ScanOptions) -> Result<SpectrumComparison> {
    let zeros = scan_zeros(p, opts)?;
    let ctx = p.ctx();
    let inside = |g: &Complex| -> bool {
        let u = abs_f64(g).ln() / ctx.ln_q_f64();
        u > opts.u_min + 0.5 && u < opts.u_max - 0.5
    };
    let real = |z: &Complex| z.imag().to_f64().abs() <= 1e-30 * abs_f64(z);
    let mut predicted: Vec<(SpectralPoint, ZeroClass)> = Vec::new();
    let mut notes = Vec::new();
    match opts.mode {
        KernelMode::SingleAnchor => {
            predicted.extend((0..64).map(|n| (SpectralPoint::neg_qn(n), ZeroClass::NegQN { n })));
            if real(&mul(&p.ab(), &p.t_plus())) {
                predicted.extend((-64..=64).map(|k| (SpectralPoint::pos_lattice(k), ZeroClass::PosLattice { k })));
            } else {
                notes.push("abt is not real: the positive spectrum is off the scanned rays".into());
            }
        }
        KernelMode::TwoAnchor => {
            predicted.extend((0..64).map(|n| (SpectralPoint::neg_qn(n), ZeroClass::NegQN { n })));
            predicted.extend((0..64).map(|n| (SpectralPoint::a_terminating(n), ZeroClass::ATerminating { n })));
            if real(&mul(&p.ab(), &mul(&p.t_plus(), &p.t_minus()))) {
                predicted.extend((-64..=64).map(|n| (SpectralPoint::indef_lattice(n), ZeroClass::IndefLattice { n })));
            } else {
                notes.push("ab t- t+ is not real: the spectrum is off the scanned rays".into());
            }
        }
    }
    let missed = predicted
        .into_iter()
        .filter(|(g, class)| {
            let gv = g.value(p);
            gv.imag().is_zero() && inside(&gv) && !zeros.iter().any(|z| &z.class == class)
        })
        .map(|(g, _)| g.label())
        .collect();
    Ok(SpectrumComparison { zeros, missed, notes })
}

/// Rounds `γ` to the nearest point of the predicted rays when it is within
/// `10^{−digits/4}` relative distance (the golden-section search only resolves
/// a minimum to about the square root of the working precision).
fn snap(p: &Params, gamma: &Complex) -> Complex {
    let ctx = p.ctx();
    let tol = 10f64.powf(-f64::from(ctx.precision().digits()) / 4.0);
    let candidates = [
        ctx.real(-1.0),
        div(&ctx.real(1.0), &mul(&p.ab(), &p.t_plus())),
        neg(&div(&ctx.real(1.0), &mul(&p.ab(), &mul(&p.t_plus(), &p.t_minus())))),
        neg(&div(&ctx.real(1.0), &p.a())),
    ];
    for base in candidates {
        let ratio = div(gamma, &base);
        let re = ratio.real().to_f64();
        if re <= 0.0 || abs_f64(&Complex::with_val(53, ratio.imag())) > tol * re {
            continue;
        }
        let j = (re.ln() / ctx.ln_q_f64()).round() as i64;
        let exact = mul(&base, &ctx.qpow_cx(j));
        if abs_f64(&crate::ops::sub(gamma, &exact)) <= tol * abs_f64(&exact) {
            return exact;
        }
    }
    gamma.clone()
}

/// Golden-section minimisation of `f` on `[a, b]`.
fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc == f64::NEG_INFINITY {
            return (c, fc);
        }
        if fd == f64::NEG_INFINITY {
            return (d, fd);
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Precision;

    #[test]
    fn zeros_lie_on_the_predicted_rays() {
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap();
        let zeros = scan_zeros(&p, &ScanOptions::default()).unwrap();
        assert!(zeros.iter().all(|z| z.class != ZeroClass::Unexplained), "{zeros:?}");
        // Every −q^n with 0 ≤ n ≤ 9 and every q^k/(ab) inside the window is found.
        for n in 0..=9 {
            assert!(zeros.iter().any(|z| z.class == ZeroClass::NegQN { n }), "missing -q^{n}");
        }
        let shift = (1.0f64 / 0.06).ln() / 0.5f64.ln();
        for k in -3..=3 {
            let u = k as f64 + shift;
            if u > -5.5 && u < 9.5 {
                assert!(zeros.iter().any(|z| z.class == ZeroClass::PosLattice { k }), "missing q^{k}/(ab)");
            }
        }
    }
}
