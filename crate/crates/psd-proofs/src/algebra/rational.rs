//! Exact rational arithmetic helpers on top of `num-rational`.
//!
//! `BigRational` already maintains the invariants the LP machinery needs
//! (positive denominator, reduced form); this module adds the transcript
//! encoding and powers of two for the perturbation weights.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// 2^exp as an exact rational; `exp` may be negative.
pub fn pow2_rat(exp: i64) -> BigRational {
    let mag = BigInt::one() << exp.unsigned_abs() as usize;
    if exp >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// ceil(log2(v)) for v >= 1, with log of 1 being 0.
pub fn ceil_log2(v: &BigInt) -> u64 {
    assert!(v.is_positive(), "ceil_log2 needs a positive value");
    let bits = v.bits();
    let is_pow2 = {
        let (_, bytes) = v.to_bytes_be();
        let mut ones = 0u32;
        for b in &bytes {
            ones += b.count_ones();
        }
        ones == 1
    };
    if is_pow2 {
        bits - 1
    } else {
        bits
    }
}

/// Transcript encoding: `n` when integral, `n/d` otherwise.
pub fn format_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the transcript encoding; rejects zero denominators.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::parse(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.parse().map_err(|_| bad())?;
            let d: BigInt = den.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn parse_rat_vec(s: &str) -> Result<Vec<BigRational>> {
    s.split_whitespace().map(parse_rat).collect()
}

pub fn format_rat_vec(v: &[BigRational]) -> String {
    v.iter().map(format_rat).collect::<Vec<_>>().join(" ")
}

/// Exact dot product.
pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    assert_eq!(a.len(), b.len());
    let mut acc = BigRational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}
