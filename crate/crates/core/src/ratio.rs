//! Exact rational helpers shared by the gambler and process modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for stakes, capitals and probabilities.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// `2^e` for non-negative `e`.
pub fn pow2(e: usize) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

/// `2^-e`.
pub fn pow2_neg(e: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << e)
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Formats as `num/den` (always with a denominator, reduced).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn in_unit_interval(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().map(|v| (v as f64).log2()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// `log2(q)` for `q ≥ 0`; `-∞` for zero. Accurate for arbitrarily large
/// numerators and denominators.
pub fn log2(q: &Rational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    log2_biguint(n) - log2_biguint(d)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| 2f64.powf(log2(q)))
}
