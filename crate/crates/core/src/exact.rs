//! Exact-arithmetic helpers shared across modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact probability.
pub type ExactProb = BigRational;

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Natural log of a positive big integer, accurate to f64 precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Converts an exact rational into the nearest f64 without overflowing on
/// large numerators or denominators.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    sign * (ln_biguint(num) - ln_biguint(den)).exp()
}

/// Parses "a/b" or "a" into an exact rational.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a fraction: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exact integer accumulator that stays on i128 until a checked operation
/// overflows, then continues in `BigInt`.
#[derive(Debug, Clone)]
pub enum Acc {
    Small(i128),
    Big(BigInt),
}

impl Default for Acc {
    fn default() -> Self {
        Acc::Small(0)
    }
}

impl Acc {
    /// Adds `weight * product(factors)`.
    pub fn add_weighted(&mut self, weight: &BigUint, weight_small: Option<i128>, factors: &[i128]) {
        let small_term = weight_small.and_then(|w| {
            factors
                .iter()
                .try_fold(w, |acc, &f| acc.checked_mul(f))
        });
        if let (Acc::Small(s), Some(t)) = (&mut *self, small_term) {
            if let Some(v) = s.checked_add(t) {
                *s = v;
                return;
            }
        }
        let term = match small_term {
            Some(t) => BigInt::from(t),
            None => {
                let mut term = BigInt::from_biguint(Sign::Plus, weight.clone());
                for &f in factors {
                    term *= f;
                }
                term
            }
        };
        let cur = match self {
            Acc::Small(s) => BigInt::from(*s),
            Acc::Big(b) => std::mem::take(b),
        };
        *self = Acc::Big(cur + term);
    }

    pub fn into_bigint(self) -> BigInt {
        match self {
            Acc::Small(s) => BigInt::from(s),
            Acc::Big(b) => b,
        }
    }
}

/// Exact quotient `num / den`, failing when the division leaves a remainder.
pub fn exact_div(num: &BigInt, den: &BigInt, what: &'static str) -> Result<BigInt> {
    let (q, r) = num_integer::Integer::div_rem(num, den);
    if !r.is_zero() {
        return Err(Error::InexactDivision(what));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_large_integers() {
        let f = factorial(30);
        assert!((ln_biguint(&f) - ln_factorial(30)).abs() < 1e-9);
        assert!((ln_biguint(&BigUint::from(7u32)) - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn accumulator_promotes_on_overflow() {
        let mut acc = Acc::default();
        let w = BigUint::from(u64::MAX);
        acc.add_weighted(&w, Some(u64::MAX as i128), &[i64::MAX as i128, 4]);
        acc.add_weighted(&w, Some(u64::MAX as i128), &[-(i64::MAX as i128), 4]);
        assert!(acc.into_bigint().is_zero());
    }

    #[test]
    fn fractions_parse_and_convert() {
        let r = parse_fraction("5/16").unwrap();
        assert_eq!(r.to_string(), "5/16");
        assert_eq!(rational_to_f64(&r), 0.3125);
        assert!(parse_fraction("1/0").is_err());
        assert_eq!(parse_fraction("3").unwrap(), BigRational::from_integer(3.into()));
    }
}
