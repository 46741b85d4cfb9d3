//! Property tests: algebraic invariants of the kernels on random inputs.
//!
//! Each property compares two independently computed sides (a product
//! against a series, a function against its transform, an integral against
//! its closed form).

use proptest::prelude::*;
use qmeixner::meixner::{phi, poly_m, Params, PhiRoute, Point, SpectralPoint};
use qmeixner::qcalculus::qint_zero_to;
use qmeixner::qseries::{q_lattice_index, qpoch_cx, qpoch_inf_cx, rphis_cx, theta_cx, SeriesSpec};
use qmeixner::scalar::{format_complex, parse_complex, rel_diff};
use qmeixner::{Precision, QContext};
use rug::ops::Pow;
use rug::Complex;

fn ctx(q: f64) -> QContext {
    QContext::new(q, Precision::default()).unwrap()
}

fn z(ctx: &QContext, re: f64, im: f64) -> Complex {
    Complex::with_val(ctx.bits(), (re, im))
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    /// `(x;q)_∞ = (x;q)_n (xq^n;q)_∞`.
    #[test]
    fn pochhammer_splits(q in 0.1f64..0.9, re in -3.0f64..3.0, im in -3.0f64..3.0, n in 0u64..40) {
        let c = ctx(q);
        let x = z(&c, re, im);
        let lhs = qpoch_inf_cx(&c, &x);
        let xq = Complex::with_val(c.bits(), &x * c.qpow(n as i64));
        let rhs = Complex::with_val(c.bits(), qpoch_cx(&c, &x, n) * qpoch_inf_cx(&c, &xq));
        let scale = rug::Float::with_val(53, lhs.abs_ref()).to_f64().max(1e-300);
        prop_assert!(rel_diff(&lhs, &rhs, scale) < 1e-35);
    }

    /// `θ(x) = −x θ(qx) = θ(q/x)`.
    #[test]
    fn theta_is_quasi_periodic(q in 0.1f64..0.9, r in 0.2f64..4.0, arg in 0.0f64..6.28) {
        let c = ctx(q);
        let x = z(&c, r * arg.cos(), r * arg.sin());
        let t = theta_cx(&c, &x).unwrap();
        let qx = Complex::with_val(c.bits(), &x * c.q());
        let shifted = Complex::with_val(c.bits(), -(x.clone() * theta_cx(&c, &qx).unwrap()));
        let inverted = theta_cx(&c, &Complex::with_val(c.bits(), c.q() / x.clone())).unwrap();
        prop_assert!(rel_diff(&t, &shifted, 0.0) < 1e-35);
        prop_assert!(rel_diff(&t, &inverted, 0.0) < 1e-35);
    }

    /// q-binomial theorem: `₁φ₀(a;−;q,z) = (az;q)_∞/(z;q)_∞` for `|z| < 1`.
    #[test]
    fn q_binomial_theorem(q in 0.1f64..0.8, a in -2.0f64..2.0, zr in -0.7f64..0.7, zi in -0.7f64..0.7) {
        prop_assume!(zr * zr + zi * zi < 0.5);
        let c = ctx(q);
        let (a, x) = (z(&c, a, 0.0), z(&c, zr, zi));
        let (series, _) = rphis_cx(&c, &SeriesSpec::new(vec![a.clone()], vec![], x.clone()), c.target_tol()).unwrap();
        let ax = Complex::with_val(c.bits(), &a * &x);
        let closed = Complex::with_val(c.bits(), qpoch_inf_cx(&c, &ax) / qpoch_inf_cx(&c, &x));
        prop_assert!(rel_diff(&series, &closed, 0.0) < 1e-33);
    }

    /// `∫_0^1 x^n d_qx = (1−q)/(1−q^{n+1})`.
    #[test]
    fn jackson_moments(q in 0.1f64..0.9, n in 0i32..12) {
        let c = ctx(q);
        let one = z(&c, 1.0, 0.0);
        let r = qint_zero_to(&c, |p| Ok(Complex::with_val(c.bits(), Pow::pow(p.x.clone(), n))), &one, c.target_tol()).unwrap();
        let qf = c.q().clone();
        let closed = Complex::with_val(c.bits(), (1 - qf.clone()) / (1 - Pow::pow(qf, n + 1)));
        prop_assert!(rel_diff(r.complex(), &closed, 0.0) < 1e-35);
    }

    /// `q_lattice_index(q^k) = k`, and points off the lattice are rejected.
    #[test]
    fn lattice_index_round_trip(q in 0.1f64..0.9, k in -60i64..60) {
        let c = ctx(q);
        prop_assert_eq!(q_lattice_index(&c, &c.qpow_cx(k)), Some(k));
        // Half a lattice step away from q^k.
        let off = Complex::with_val(c.bits(), c.qpow_cx(k) * c.q().clone().sqrt());
        prop_assert!(q_lattice_index(&c, &off).is_none());
    }

    /// `m_n(x;a,b) = m_n(x;b,a)`.
    #[test]
    fn polynomials_are_symmetric(a in 0.05f64..0.9, b in 0.05f64..0.9, x in -5.0f64..5.0, n in 0u64..8) {
        prop_assume!((a - b).abs() > 1e-3);
        let p = Params::parse("0.5", &a.to_string(), &b.to_string(), "1", "-1", Precision::default()).unwrap();
        let xv = Complex::with_val(p.bits(), (x, 0.0));
        let lhs = poly_m(&p, n, &xv).unwrap();
        let rhs = poly_m(&p.swapped(), n, &xv).unwrap();
        prop_assert!(rel_diff(&lhs, &rhs, 1.0) < 1e-33);
    }

    /// `φ_γ(x) = φ_x(γ)`, each side summed from its defining series.
    #[test]
    fn phi_is_self_dual(g in -3.0f64..3.0, x in -3.0f64..3.0) {
        prop_assume!(g.abs() > 0.05 && x.abs() > 0.05);
        let p = Params::parse("0.5", "0.3", "0.2", "1", "-1", Precision::default()).unwrap();
        let (gv, xv) = (Complex::with_val(p.bits(), (g, 0.0)), Complex::with_val(p.bits(), (x, 0.0)));
        let lhs = phi(&p, &SpectralPoint::generic(gv.clone()), &Point::Value(xv.clone()), PhiRoute::Definition).unwrap().value;
        let rhs = phi(&p, &SpectralPoint::generic(xv), &Point::Value(gv), PhiRoute::Definition).unwrap().value;
        prop_assert!(rel_diff(&lhs, &rhs, 1.0) < 1e-30);
    }

    /// Complex literals survive a format/parse round trip at working precision.
    #[test]
    fn complex_literals_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let bits = Precision::default().bits();
        let v = Complex::with_val(bits, (re, im));
        let back = parse_complex(bits, &format_complex(&v, 50)).unwrap();
        prop_assert!(rel_diff(&v, &back, 0.0) < 1e-45);
    }
}
