//! Exact rational scalars used for partition geometry.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::ToPrimitive;
use num::{One, Zero};

/// Arbitrary-precision rational. All breakpoints, tags and Cantor endpoints
/// are `Rat`s; drift at deep construction levels would corrupt tag placement.
pub type Rat = BigRational;

/// `n / d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// `num/den` display form; integers drop the denominator.
pub fn frac_string(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `3^-k` and friends: `base^-k` as an exact rational, `base ≥ 1`, `k ≥ 0`.
pub fn inv_pow(base: u32, k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(base).pow(k))
}

/// Midpoint of two rationals.
pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / rat_int(2)
}

pub fn is_zero(q: &Rat) -> bool {
    q.is_zero()
}
