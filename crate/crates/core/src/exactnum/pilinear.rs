use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{fmt_rational, parse_rational, pi_interval, rational_to_f64};

/// The exact real number `q0 + q1·π`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PiLinear {
    q0: BigRational,
    q1: BigRational,
}

/// A rational interval known to contain a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))))
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }
}

impl PiLinear {
    pub fn new(q0: BigRational, q1: BigRational) -> Self {
        PiLinear { q0, q1 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pi() -> Self {
        Self::pi_multiple(BigRational::one())
    }

    pub fn rational(q0: BigRational) -> Self {
        PiLinear {
            q0,
            q1: BigRational::zero(),
        }
    }

    pub fn pi_multiple(q1: BigRational) -> Self {
        PiLinear {
            q0: BigRational::zero(),
            q1,
        }
    }

    /// `(n0/d0) + (n1/d1)·π` from machine integers.
    pub fn from_ratios(n0: i64, d0: i64, n1: i64, d1: i64) -> Self {
        PiLinear {
            q0: BigRational::new(n0.into(), d0.into()),
            q1: BigRational::new(n1.into(), d1.into()),
        }
    }

    pub fn q0(&self) -> &BigRational {
        &self.q0
    }

    pub fn q1(&self) -> &BigRational {
        &self.q1
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q1.is_zero()
    }

    /// True when the value is `q1·π` with `q1` rational.
    pub fn is_pi_multiple(&self) -> bool {
        self.q0.is_zero()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        PiLinear {
            q0: &self.q0 * r,
            q1: &self.q1 * r,
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let r = BigRational::from_integer(k.clone());
        self.scale(&r)
    }

    /// `2^k · self`, exact in both components.
    pub fn scale_pow2(&self, k: i64) -> Self {
        self.scale(&super::pow2(k))
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `Some(r)` with `self = r·other` when such a rational exists.
    pub fn ratio(&self, other: &PiLinear) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        if &self.q0 * &other.q1 != &self.q1 * &other.q0 {
            return None;
        }
        Some(if !other.q1.is_zero() {
            &self.q1 / &other.q1
        } else {
            &self.q0 / &other.q0
        })
    }

    /// Rational interval containing the value, refined with a `bits`-bit π.
    pub fn enclosure(&self, bits: u32) -> Enclosure {
        if self.q1.is_zero() {
            return Enclosure {
                lo: self.q0.clone(),
                hi: self.q0.clone(),
            };
        }
        let (plo, phi) = pi_interval(bits);
        let (a, b) = (&self.q1 * plo, &self.q1 * phi);
        let (lo, hi) = if self.q1.is_positive() {
            (a, b)
        } else {
            (b, a)
        };
        Enclosure {
            lo: &self.q0 + lo,
            hi: &self.q0 + hi,
        }
    }

    /// Interval of width at most `10^-digits` containing the value.
    pub fn to_float(&self, digits: u32) -> Enclosure {
        let target = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits));
        let mag = rational_to_f64(&self.q1.abs()).max(1.0).log2().ceil() as u32;
        let mut bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + mag + 8;
        loop {
            let e = self.enclosure(bits);
            if e.width() <= target {
                return e;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.q0.is_zero() {
            return rational_to_f64(&self.q1) * std::f64::consts::PI;
        }
        if self.q1.is_zero() {
            return rational_to_f64(&self.q0);
        }
        self.enclosure(80).midpoint_f64()
    }

    /// Sign of the value.
    pub fn signum(&self) -> Ordering {
        let s0 = self.q0.cmp(&BigRational::zero());
        let s1 = self.q1.cmp(&BigRational::zero());
        if s1 == Ordering::Equal {
            return s0;
        }
        if s0 == Ordering::Equal || s0 == s1 {
            return s1;
        }
        // Opposite signs: decide q0 + q1·π against zero.
        if let (Some(a), Some(b)) = (self.q0.to_f64(), self.q1.to_f64()) {
            let v = a + b * std::f64::consts::PI;
            let scale = a.abs() + 4.0 * b.abs();
            if v.is_finite() && scale.is_finite() && v.abs() > 1e-12 * scale {
                return if v > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        let zero = BigRational::zero();
        let mut bits = 128;
        loop {
            let e = self.enclosure(bits);
            if e.lo > zero {
                return Ordering::Greater;
            }
            if e.hi < zero {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// `floor(self / d)` for `d > 0`, exact.
    pub fn floor_div(&self, d: &PiLinear) -> BigInt {
        debug_assert_eq!(d.signum(), Ordering::Greater);
        if let Some(r) = self.ratio(d) {
            return r.floor().to_integer();
        }
        if self.is_zero() {
            return BigInt::zero();
        }
        // The quotient is irrational, so refinement separates it from every integer.
        let mut bits = 96;
        loop {
            let a = self.enclosure(bits);
            let b = d.enclosure(bits);
            if b.lo.is_positive() {
                let cands = [&a.lo / &b.lo, &a.lo / &b.hi, &a.hi / &b.lo, &a.hi / &b.hi];
                let lo = cands.iter().min().unwrap().floor().to_integer();
                let hi = cands.iter().max().unwrap().floor().to_integer();
                if lo == hi {
                    return lo;
                }
            }
            bits *= 2;
        }
    }

    /// `ceil(self / d)` for `d > 0`.
    pub fn ceil_div(&self, d: &PiLinear) -> BigInt {
        -(-self.clone()).floor_div(d)
    }

    /// Representative in `(−π, π]` of the class modulo `2π`.
    pub fn reduce_mod_2pi(&self) -> PiLinear {
        let two_pi = Self::pi_multiple(BigRational::from_integer(2.into()));
        let m = (Self::pi() - self.clone()).floor_div(&two_pi);
        self + &two_pi.scale_int(&m)
    }

    /// Representative in `[0, 2π)` of the class modulo `2π`.
    pub fn reduce_0_2pi(&self) -> PiLinear {
        let two_pi = Self::pi_multiple(BigRational::from_integer(2.into()));
        let m = self.floor_div(&two_pi);
        self - &two_pi.scale_int(&m)
    }

    /// Exact order of the two real values.
    pub fn compare(&self, other: &PiLinear) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum()
    }

    pub fn min_of(a: &PiLinear, b: &PiLinear) -> PiLinear {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &PiLinear, b: &PiLinear) -> PiLinear {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl PartialOrd for PiLinear {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PiLinear {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl Add<&PiLinear> for &PiLinear {
    type Output = PiLinear;
    fn add(self, rhs: &PiLinear) -> PiLinear {
        PiLinear {
            q0: &self.q0 + &rhs.q0,
            q1: &self.q1 + &rhs.q1,
        }
    }
}

impl Add for PiLinear {
    type Output = PiLinear;
    fn add(self, rhs: PiLinear) -> PiLinear {
        &self + &rhs
    }
}

impl Sub<&PiLinear> for &PiLinear {
    type Output = PiLinear;
    fn sub(self, rhs: &PiLinear) -> PiLinear {
        PiLinear {
            q0: &self.q0 - &rhs.q0,
            q1: &self.q1 - &rhs.q1,
        }
    }
}

impl Sub for PiLinear {
    type Output = PiLinear;
    fn sub(self, rhs: PiLinear) -> PiLinear {
        &self - &rhs
    }
}

impl Neg for PiLinear {
    type Output = PiLinear;
    fn neg(self) -> PiLinear {
        PiLinear {
            q0: -self.q0,
            q1: -self.q1,
        }
    }
}

impl Neg for &PiLinear {
    type Output = PiLinear;
    fn neg(self) -> PiLinear {
        -self.clone()
    }
}

impl Mul<&BigRational> for &PiLinear {
    type Output = PiLinear;
    fn mul(self, rhs: &BigRational) -> PiLinear {
        self.scale(rhs)
    }
}

impl fmt::Display for PiLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi_term = |q: &BigRational| format!("{}*pi", fmt_rational(q));
        match (self.q0.is_zero(), self.q1.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.q0)),
            (true, false) => write!(f, "{}", pi_term(&self.q1)),
            (false, false) => {
                if self.q1.is_negative() {
                    write!(
                        f,
                        "{} - {}",
                        fmt_rational(&self.q0),
                        pi_term(&-self.q1.clone())
                    )
                } else {
                    write!(f, "{} + {}", fmt_rational(&self.q0), pi_term(&self.q1))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number literal `{text}` at offset {offset}: {reason}")]
pub struct ParsePiLinearError {
    pub text: String,
    pub offset: usize,
    pub reason: &'static str,
}

impl FromStr for PiLinear {
    type Err = ParsePiLinearError;

    /// Accepts sums of terms such as `1/3 + 5/8*pi`, `-pi`, `pi/2`, `2*pi - 1`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |offset, reason| ParsePiLinearError {
            text: text.to_string(),
            offset,
            reason,
        };
        let bytes = text.as_bytes();
        let mut i = 0;
        let mut acc = PiLinear::zero();
        let mut first = true;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        let read_num = |i: &mut usize| -> Option<BigRational> {
            let start = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            if *i == start {
                return None;
            }
            let mut end = *i;
            if *i < bytes.len() && bytes[*i] == b'/' {
                let save = *i;
                *i += 1;
                let ds = *i;
                while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                    *i += 1;
                }
                if *i == ds {
                    *i = save;
                } else {
                    end = *i;
                }
            }
            parse_rational(&text[start..end])
        };
        loop {
            skip_ws(&mut i);
            if i >= bytes.len() {
                if first {
                    return Err(err(i, "empty literal"));
                }
                return Err(err(i, "dangling operator"));
            }
            let mut negative = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                negative = bytes[i] == b'-';
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(err(i, "expected `+` or `-`"));
            }
            // Optional leading unary minus after a binary operator, e.g. `1 + -2*pi`.
            if i < bytes.len() && bytes[i] == b'-' {
                negative = !negative;
                i += 1;
                skip_ws(&mut i);
            }
            let coeff;
            let mut is_pi = false;
            if text[i..].starts_with("pi") {
                coeff = BigRational::one();
                is_pi = true;
                i += 2;
            } else {
                let Some(c) = read_num(&mut i) else {
                    return Err(err(i, "expected a number or `pi`"));
                };
                coeff = c;
                skip_ws(&mut i);
                if i < bytes.len() && bytes[i] == b'*' {
                    i += 1;
                    skip_ws(&mut i);
                    if !text[i..].starts_with("pi") {
                        return Err(err(i, "expected `pi` after `*`"));
                    }
                    is_pi = true;
                    i += 2;
                }
            }
            let mut coeff = coeff;
            if is_pi {
                skip_ws(&mut i);
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    skip_ws(&mut i);
                    let ds = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let d: BigInt = text[ds..i]
                        .parse()
                        .map_err(|_| err(ds, "expected divisor"))?;
                    if d.is_zero() {
                        return Err(err(ds, "division by zero"));
                    }
                    coeff /= BigRational::from_integer(d);
                }
            }
            if negative {
                coeff = -coeff;
            }
            if is_pi {
                acc.q1 += coeff;
            } else {
                acc.q0 += coeff;
            }
            first = false;
            skip_ws(&mut i);
            if i >= bytes.len() {
                return Ok(acc);
            }
        }
    }
}

impl Serialize for PiLinear {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PiLinear {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn p(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(p("pi").compare(&p("355/113")), Ordering::Less);
        assert_eq!(p("2 + 3*pi").compare(&p("2 + 3*pi")), Ordering::Equal);
        assert_eq!(p("1").compare(&p("0")), Ordering::Greater);
        // 22/7 > π, 333/106 < π.
        assert!(p("pi") < p("22/7"));
        assert!(p("pi") > p("333/106"));
    }

    #[test]
    fn scale_pow2_examples() {
        assert_eq!(p("2*pi").scale_pow2(-1), p("pi"));
        assert_eq!(p("3").scale_pow2(2), p("12"));
        assert_eq!(p("1/3 + 5*pi").scale_pow2(-3), p("1/24 + 5/8*pi"));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(p("5*pi").reduce_mod_2pi(), p("pi"));
        assert_eq!(p("0").reduce_mod_2pi(), p("0"));
        assert_eq!(p("1 + 2*pi").reduce_mod_2pi(), p("1"));
        assert_eq!(p("-pi").reduce_mod_2pi(), p("pi"));
        assert_eq!(p("-3*pi").reduce_mod_2pi(), p("pi"));
        assert_eq!(p("7/2*pi").reduce_mod_2pi(), p("-1/2*pi"));
        // 4 − π ≈ 0.858
        assert_eq!(p("4 + pi").reduce_mod_2pi(), p("4 - pi"));
        assert_eq!(p("3*pi").reduce_0_2pi(), p("pi"));
        assert_eq!(p("-1/2*pi").reduce_0_2pi(), p("3/2*pi"));
    }

    #[test]
    fn to_float_examples() {
        let e = p("pi").to_float(5);
        assert!(e.lo >= rat(314159, 100000) && e.hi <= rat(314160, 100000));
        let e = p("1/2").to_float(3);
        assert_eq!(e.lo, rat(1, 2));
        assert_eq!(e.hi, rat(1, 2));
        let e = p("-1 + pi").to_float(2);
        assert!(e.width() <= rat(1, 100));
        assert!(e.lo > rat(213, 100) && e.hi < rat(215, 100));
    }

    #[test]
    fn floor_div_exact_and_irrational() {
        let two_pi = p("2*pi");
        assert_eq!(p("4*pi").floor_div(&two_pi), BigInt::from(2));
        assert_eq!(p("-4*pi").floor_div(&two_pi), BigInt::from(-2));
        assert_eq!(p("7").floor_div(&two_pi), BigInt::from(1));
        assert_eq!(p("-7").floor_div(&two_pi), BigInt::from(-2));
        assert_eq!(p("7").ceil_div(&two_pi), BigInt::from(2));
    }

    #[test]
    fn render_and_parse() {
        for s in ["1/3 + 5/8*pi", "0", "-1*pi", "2 - 1/2*pi", "7/9"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("pi/2"), p("1/2*pi"));
        assert_eq!(p("-pi + 1"), p("1 - 1*pi"));
        assert_eq!(p("1 + -2*pi"), p("1 - 2*pi"));
        assert!("".parse::<PiLinear>().is_err());
        assert!("1 +".parse::<PiLinear>().is_err());
        assert!("2*p".parse::<PiLinear>().is_err());
        assert!("1/0".parse::<PiLinear>().is_err());
    }

    #[test]
    fn enormous_pi_coefficients_reduce_exactly() {
        // 2^60·π + π/3 ≡ π/3.
        let big = PiLinear::pi_multiple(crate::exactnum::pow2(60) + rat(1, 3));
        assert_eq!(big.reduce_mod_2pi(), p("1/3*pi"));
    }
}
