//! Exact rational arithmetic.
//!
//! Every numeric quantity in this crate is a [`Rational`]: an
//! arbitrary-precision fraction kept in canonical form (positive
//! denominator, coprime numerator and denominator). `num-rational`
//! normalizes after every arithmetic operation, which keeps integer
//! growth bounded and makes equality exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact fraction with arbitrary-precision integer parts.
pub type Rational = num_rational::BigRational;

/// Builds `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^{-k}`.
pub fn pow2_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Renders a rational as `p/q` (plain `p` when `q == 1`); never decimal.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Decimal approximation for display alongside the exact value.
pub fn approx_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Exact conversion can overflow f64 for huge parts; scale both down together.
    let bits = num.bits().max(den.bits());
    if bits <= 52 {
        bigint_to_f64(num) / bigint_to_f64(den)
    } else {
        let shift = bits - 52;
        bigint_to_f64(&(num >> shift)) / bigint_to_f64(&(den >> shift))
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let (sign, digits) = x.to_u64_digits();
    let mut value = 0.0f64;
    for d in digits.iter().rev() {
        value = value * 18446744073709551616.0 + *d as f64;
    }
    if sign == num_bigint::Sign::Minus {
        -value
    } else {
        value
    }
}

/// Sum of a slice of rationals.
pub fn rational_sum<'a, I: IntoIterator<Item = &'a Rational>>(items: I) -> Rational {
    items.into_iter().fold(Rational::zero(), |acc, r| acc + r)
}

/// True when `r` is a probability weight: `0 <= r <= 1`.
pub fn is_probability_weight(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}
