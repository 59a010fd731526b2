//! Exact arithmetic over the ℚ-span of `{1, π}`.
//!
//! Every angle and imaginary part in the crate is a [`PiLinear`]. Ordering is
//! decided exactly: `q0 + q1·π` can only vanish when both parts vanish, so
//! refining a π enclosure always terminates.

mod congruence;
mod pi;
mod pilinear;

pub use congruence::{ext_gcd, integral_affine, mod_inverse, solve_linear_congruence, Residue};
pub use pi::{pi_bounds, pi_interval};
pub use pilinear::{Enclosure, ParsePiLinearError, PiLinear};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `2^k` as a rational, for any sign of `k`.
pub fn pow2(k: i64) -> BigRational {
    let p = BigInt::one() << (k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Canonical text for a rational: `n` or `n/d`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Nearest `f64` to a rational; saturates to ±inf outside the f64 range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// 2-adic valuation of a nonzero integer.
pub fn two_adic(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

/// Serialize a rational as its canonical text, e.g. `"-3/8"`.
pub mod ser_rat {
    use num_rational::BigRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_rational(q))
    }

    pub fn serialize_opt<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => serialize(q, s),
            None => s.serialize_none(),
        }
    }
}
