//! Exact scalars: rationals and Gaussian rationals `a + b i`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Gaussian rational `re + im*i`.
pub type Coeff = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn coeff(re: Rational, im: Rational) -> Coeff {
    Complex::new(re, im)
}

pub fn real(re: Rational) -> Coeff {
    Complex::new(re, Rational::zero())
}

pub fn c_int(n: i64) -> Coeff {
    real(int(n))
}

pub fn c_rat(n: i64, d: i64) -> Coeff {
    real(rat(n, d))
}

pub fn imag_unit() -> Coeff {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn is_real(c: &Coeff) -> bool {
    c.im.is_zero()
}

pub fn is_imaginary(c: &Coeff) -> bool {
    c.re.is_zero()
}

/// Total order used for pivot selection: |re| first, then |im|.
pub fn magnitude_cmp(a: &Coeff, b: &Coeff) -> Ordering {
    a.re.abs()
        .cmp(&b.re.abs())
        .then_with(|| a.im.abs().cmp(&b.im.abs()))
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact square root in Q(i), if one exists.
pub fn gaussian_sqrt(c: &Coeff) -> Option<Coeff> {
    if c.is_zero() {
        return Some(Coeff::zero());
    }
    let modulus = rational_sqrt(&(&c.re * &c.re + &c.im * &c.im))?;
    let two = int(2);
    // x^2 = (re + |c|)/2, y^2 = (|c| - re)/2
    let x = rational_sqrt(&((&modulus + &c.re) / &two))?;
    let y_abs = rational_sqrt(&((&modulus - &c.re) / &two))?;
    let candidate = |y: Rational| Complex::new(x.clone(), y);
    for y in [y_abs.clone(), -y_abs] {
        let s = candidate(y);
        if &(&s * &s) == c {
            return Some(s);
        }
    }
    None
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a coefficient in the polynomial grammar (`3/4`, `-i`, `(1 + 2*i)`).
pub fn fmt_coeff(c: &Coeff) -> String {
    if c.im.is_zero() {
        return fmt_rational(&c.re);
    }
    let im_part = |r: &Rational| -> String {
        if r.is_one() {
            "i".to_string()
        } else if (-r).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", fmt_rational(r))
        }
    };
    if c.re.is_zero() {
        return im_part(&c.im);
    }
    let sign = if c.im.is_negative() { "-" } else { "+" };
    format!("({} {} {})", fmt_rational(&c.re), sign, im_part(&c.im.abs()))
}

pub struct CoeffDisplay<'a>(pub &'a Coeff);

impl fmt::Display for CoeffDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_coeff(self.0))
    }
}

pub(crate) mod serde_rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }
}

pub(crate) mod serde_coeff {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(c: &Coeff, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_coeff(c))
    }
}
