//! Rigorous dyadic enclosures of π.
//!
//! Machin's formula `π = 16·atan(1/5) − 4·atan(1/239)` evaluated in fixed
//! point. Every series term is an exact floor of `2^p / ((2k+1)·x^(2k+1))`,
//! so each term is off by less than one unit and the alternating tail is
//! bounded by the first omitted term.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

struct Cached {
    bits: u32,
    lo: BigInt,
    hi: BigInt,
}

static CACHE: OnceLock<Mutex<Cached>> = OnceLock::new();

/// Returns `(sum, max_error)` in units of `2^-bits`.
fn atan_inv(x: u32, bits: u32) -> (BigInt, BigInt) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits as usize).div_floor(&x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = power.div_floor(&x2);
        k += 1;
    }
    (sum, BigInt::from(k + 1))
}

fn compute(bits: u32) -> Cached {
    let guard = bits + 16;
    let (a, ea) = atan_inv(5, guard);
    let (b, eb) = atan_inv(239, guard);
    let mid: BigInt = a * 16 - b * 4;
    let err: BigInt = ea * 16 + eb * 4;
    let lo = (&mid - &err) >> 16usize;
    let hi_num = &mid + &err;
    let hi = -((-hi_num) >> 16usize);
    Cached { bits, lo, hi }
}

/// Integers `(lo, hi)` with `lo / 2^bits < π < hi / 2^bits`, `hi - lo` small.
pub fn pi_bounds(bits: u32) -> (BigInt, BigInt) {
    let cache = CACHE.get_or_init(|| Mutex::new(compute(256)));
    let mut c = cache.lock().unwrap_or_else(|e| e.into_inner());
    if c.bits < bits {
        *c = compute(bits.max(c.bits * 2));
    }
    let shift = (c.bits - bits) as usize;
    let lo = &c.lo >> shift;
    let hi = -((-&c.hi) >> shift);
    (lo, hi)
}

/// Rational interval `[lo, hi]` enclosing π with width below `2^(4 - bits)`.
pub fn pi_interval(bits: u32) -> (BigRational, BigRational) {
    let (lo, hi) = pi_bounds(bits);
    let den = BigInt::one() << bits as usize;
    (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn encloses_known_digits() {
        let (lo, hi) = pi_interval(64);
        assert!(lo.to_f64().unwrap() <= std::f64::consts::PI);
        assert!(hi.to_f64().unwrap() >= std::f64::consts::PI);
        // 3.14159265358979323846264338327950288...
        let dec = BigRational::new(
            "314159265358979323846264338327950288".parse().unwrap(),
            BigInt::from(10).pow(35),
        );
        let (lo, hi) = pi_interval(200);
        assert!(lo < dec + BigRational::new(BigInt::one(), BigInt::from(10).pow(34)));
        assert!(
            hi > BigRational::new(
                "314159265358979323846264338327950288".parse().unwrap(),
                BigInt::from(10).pow(35),
            )
        );
        assert!(&hi - &lo < BigRational::new(BigInt::one(), BigInt::one() << 190usize));
    }

    #[test]
    fn refinement_is_nested() {
        let (a, b) = pi_interval(40);
        let (c, d) = pi_interval(900);
        assert!(a <= c && d <= b);
    }
}
