//! Terse helpers for owned MPC arithmetic at the larger operand precision.

use rug::{Complex, Float};

#[inline]
fn prec2(a: &Complex, b: &Complex) -> u32 {
    a.prec().0.max(b.prec().0)
}

#[inline]
pub(crate) fn mul(a: &Complex, b: &Complex) -> Complex {
    Complex::with_val(prec2(a, b), a * b)
}

#[inline]
pub(crate) fn div(a: &Complex, b: &Complex) -> Complex {
    Complex::with_val(prec2(a, b), a / b)
}

#[inline]
pub(crate) fn add(a: &Complex, b: &Complex) -> Complex {
    Complex::with_val(prec2(a, b), a + b)
}

#[inline]
pub(crate) fn sub(a: &Complex, b: &Complex) -> Complex {
    Complex::with_val(prec2(a, b), a - b)
}

#[inline]
pub(crate) fn neg(a: &Complex) -> Complex {
    Complex::with_val(a.prec().0, -a)
}

#[inline]
pub(crate) fn inv(a: &Complex) -> Complex {
    Complex::with_val(a.prec().0, 1 / a)
}

#[inline]
pub(crate) fn mulf(a: &Complex, f: &Float) -> Complex {
    Complex::with_val(a.prec().0, a * f)
}

#[inline]
pub(crate) fn real(bits: u32, f: &Float) -> Complex {
    Complex::with_val(bits, (f, 0))
}

/// Product of a list of values.
pub(crate) fn prod(bits: u32, xs: &[&Complex]) -> Complex {
    let mut p = Complex::with_val(bits, (1, 0));
    for x in xs {
        p *= *x;
    }
    p
}

/// Complex conjugate.
#[inline]
pub(crate) fn conj(a: &Complex) -> Complex {
    Complex::with_val(a.prec().0, a.conj_ref())
}
