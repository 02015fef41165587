//! Scalar types: exact rationals, Gaussian rationals and complex doubles.
//!
//! Rationals are kept in lowest terms by `num_rational` after every
//! operation; Gaussian rationals are complex numbers with rational real and
//! imaginary parts, which is enough for every fixture in this crate.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar.
pub type Rat = num_rational::BigRational;

/// Gaussian rational: complex number with exact rational components.
pub type GaussRat = Complex<Rat>;

/// Double-precision complex scalar for the float paths.
pub type C64 = num_complex::Complex64;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Real Gaussian rational.
pub fn gauss_real(re: Rat) -> GaussRat {
    GaussRat::new(re, Rat::zero())
}

/// Gaussian rational from integer components.
pub fn gauss_int(re: i64, im: i64) -> GaussRat {
    GaussRat::new(rat_int(re), rat_int(im))
}

/// Squared modulus |z|^2, an exact nonnegative rational.
pub fn gauss_norm_sqr(z: &GaussRat) -> Rat {
    &z.re * &z.re + &z.im * &z.im
}

pub fn gauss_conj(z: &GaussRat) -> GaussRat {
    GaussRat::new(z.re.clone(), -z.im.clone())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn gauss_to_c64(z: &GaussRat) -> C64 {
    C64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

/// Nearest rational on the grid with denominator `scale` (e.g. 10^12).
pub fn round_to_grid(x: f64, scale: i64) -> Rat {
    let scaled = x * scale as f64;
    // f64 mantissa holds scaled values of the magnitudes seen here exactly
    // enough; fall back to 0 for non-finite input.
    if !scaled.is_finite() {
        return Rat::zero();
    }
    let n = BigInt::from(scaled.round() as i128);
    Rat::new(n, BigInt::from(scale))
}

/// Serialize a rational as `"p/q"` with `q > 0` and `gcd(|p|, q) = 1`.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"p/q"` (or a bare integer `"p"`).
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = numer
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {numer:?}")))?;
    let d: BigInt = denom
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {denom:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    if d.is_negative() {
        return Err(Error::Parse(format!(
            "denominator must be positive in {s:?}"
        )));
    }
    Ok(Rat::new(n, d))
}
