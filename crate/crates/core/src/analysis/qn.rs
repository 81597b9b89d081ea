//! The generating polynomial q_n(z) = sum over S_n of z^t(pi).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational_to_f64;
use crate::partitions::{class_size, enumerate_partitions, perm_stats};

/// Guard on the envelope prefactor sqrt(2 pi n).
pub const QN_GUARD: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QnPolynomial {
    pub n: usize,
    /// coefficients[j] = #{pi : t(pi) = j}
    #[serde(serialize_with = "ser_coeffs")]
    pub coefficients: Vec<BigUint>,
}

fn ser_coeffs<S: serde::Serializer>(c: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|x| x.to_string()))
}

impl QnPolynomial {
    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + BigRational::from_integer(BigInt::from(c.clone())))
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + rational_to_f64(&BigRational::from_integer(BigInt::from(c.clone()))))
    }

    pub fn to_string_poly(&self) -> String {
        let mut terms = Vec::new();
        for (j, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = if c.is_one() && j > 0 { String::new() } else { c.to_string() };
            terms.push(match j {
                0 => coeff,
                1 => format!("{coeff}z"),
                _ => format!("{coeff}z^{j}"),
            });
        }
        terms.join(" + ")
    }
}

/// Coefficients from class sizes grouped by t = support - nontrivial cycles.
pub fn qn_polynomial(n: usize) -> Result<QnPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("q_n needs n >= 1".into()));
    }
    let mut coefficients = vec![BigUint::zero(); n];
    for c in enumerate_partitions(n) {
        coefficients[perm_stats(&c).transposition_length] += class_size(&c);
    }
    Ok(QnPolynomial { n, coefficients })
}

/// Unsigned Stirling numbers of the first kind c(n, k) for k = 0..=n, from
/// c(n+1, k) = n c(n, k) + c(n, k-1).
pub fn cycle_count_recurrence(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 0..n {
        let mut next = vec![BigUint::zero(); m + 2];
        for (k, c) in row.iter().enumerate() {
            next[k] += c * BigUint::from(m);
            next[k + 1] += c;
        }
        row = next;
    }
    row
}

#[derive(Debug, Clone, Serialize)]
pub struct QnBoundReport {
    pub n: usize,
    pub z: String,
    pub z_f64: f64,
    pub qn: f64,
    /// sqrt(2 pi n) e^-n (1 - zn)^(-1/z)
    pub envelope: f64,
    pub ratio: f64,
    pub guard: f64,
    pub passes: bool,
}

/// Compares q_n(z) with the Poisson envelope; passes when the ratio is at
/// most `QN_GUARD` (relative slack 1e-9).
pub fn qn_bound_check(n: usize, z: &BigRational) -> Result<QnBoundReport> {
    let q = qn_polynomial(n)?;
    let zero = BigRational::zero();
    let limit = BigRational::new(BigInt::one(), BigInt::from(n));
    if *z <= zero || *z >= limit {
        return Err(Error::InvalidArgument(format!("z = {z} is outside (0, 1/{n})")));
    }
    let zf = rational_to_f64(z);
    let qn = rational_to_f64(&q.eval(z));
    let nf = n as f64;
    let ln_env = 0.5 * (2.0 * std::f64::consts::PI * nf).ln() - nf - (1.0 - zf * nf).ln() / zf;
    let ratio = (qn.ln() - ln_env).exp();
    Ok(QnBoundReport {
        n,
        z: z.to_string(),
        z_f64: zf,
        qn,
        envelope: ln_env.exp(),
        ratio,
        guard: QN_GUARD,
        passes: ratio <= QN_GUARD * (1.0 + 1e-9),
    })
}

/// Rational stand-in for n^(-3/2), exact in its f64 representation.
pub fn z_three_halves(n: usize) -> BigRational {
    BigRational::from_float((n as f64).powf(-1.5)).expect("finite")
}

pub fn z_squared(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n * n))
}
