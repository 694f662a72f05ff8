//! Exact Gaussian-rational scalars.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A Gaussian rational `re + im·i` with exact rational parts.
pub type Scalar = Complex<BigRational>;

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The real scalar `numer / denom`.
pub fn real(numer: i64, denom: i64) -> Scalar {
    Complex::new(rational(numer, denom), BigRational::zero())
}

pub fn from_int(n: i64) -> Scalar {
    real(n, 1)
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// The imaginary unit.
pub fn imag_unit() -> Scalar {
    Complex::new(BigRational::zero(), BigRational::one())
}

/// True when the scalar is `0` or `1`.
pub fn is_zero_or_one(s: &Scalar) -> bool {
    s.is_zero() || s.is_one()
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a scalar in the literal syntax accepted by the element parser.
pub fn format_scalar(s: &Scalar) -> String {
    match (s.re.is_zero(), s.im.is_zero()) {
        (_, true) => fmt_rational(&s.re),
        (true, false) => format!("({}i)", fmt_rational(&s.im)),
        (false, false) => {
            let sign = if s.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}i)", fmt_rational(&s.re), sign, fmt_rational(&s.im.abs()))
        }
    }
}
