use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The integers `k ≡ r (mod m)`, with `m ≥ 1` and `0 ≤ r < m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    pub r: BigInt,
    pub m: BigInt,
}

impl Residue {
    pub fn all() -> Self {
        Residue {
            r: BigInt::zero(),
            m: BigInt::one(),
        }
    }

    pub fn odd() -> Self {
        Residue {
            r: BigInt::one(),
            m: BigInt::from(2),
        }
    }

    pub fn new(r: BigInt, m: BigInt) -> Self {
        let r = r.mod_floor(&m);
        Residue { r, m }
    }

    pub fn contains(&self, k: &BigInt) -> bool {
        k.mod_floor(&self.m) == self.r
    }

    /// Chinese remaindering for possibly non-coprime moduli.
    pub fn intersect(&self, other: &Residue) -> Option<Residue> {
        let g = self.m.gcd(&other.m);
        let diff = &other.r - &self.r;
        if !diff.is_multiple_of(&g) {
            return None;
        }
        let m2 = &other.m / &g;
        let inv = mod_inverse(&(&self.m / &g), &m2).expect("coprime after dividing by gcd");
        let t = ((&diff / &g) * inv).mod_floor(&m2);
        let l = &self.m * &m2;
        Some(Residue::new(&self.r + &self.m * t, l))
    }
}

/// `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let (g, x, _) = ext_gcd(&a.mod_floor(m), m);
    g.is_one().then(|| x.mod_floor(m))
}

/// Solutions of `a·k ≡ b (mod m)` for `m ≥ 1`.
pub fn solve_linear_congruence(a: &BigInt, b: &BigInt, m: &BigInt) -> Option<Residue> {
    let g = a.gcd(m);
    if g.is_zero() {
        // a = 0 and m = 0 cannot happen with m ≥ 1.
        return None;
    }
    if !b.is_multiple_of(&g) {
        return None;
    }
    let m2 = m / &g;
    let inv = mod_inverse(&(a / &g), &m2)?;
    Some(Residue::new((b / &g) * inv, m2))
}

/// Integers `k` with `a0 + a1·k ∈ ℤ`.
pub fn integral_affine(a0: &BigRational, a1: &BigRational) -> Option<Residue> {
    if a1.is_zero() {
        return a0.is_integer().then(Residue::all);
    }
    let d = a0.denom().lcm(a1.denom());
    let a = (a1 * BigRational::from_integer(d.clone())).to_integer();
    let b = -(a0 * BigRational::from_integer(d.clone())).to_integer();
    solve_linear_congruence(&a, &b, &d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn crt_and_congruences() {
        let x = Residue::new(b(2), b(6))
            .intersect(&Residue::new(b(5), b(9)))
            .unwrap();
        assert_eq!(x, Residue::new(b(14), b(18)));
        assert!(Residue::new(b(1), b(4))
            .intersect(&Residue::new(b(0), b(2)))
            .is_none());
        assert_eq!(
            solve_linear_congruence(&b(4), &b(2), &b(6)),
            Some(Residue::new(b(2), b(3)))
        );
        assert_eq!(solve_linear_congruence(&b(4), &b(1), &b(6)), None);
    }

    #[test]
    fn affine_integrality() {
        // 1/3 + k/3 integral iff k ≡ 2 mod 3.
        assert_eq!(
            integral_affine(&rat(1, 3), &rat(1, 3)),
            Some(Residue::new(b(2), b(3)))
        );
        assert_eq!(integral_affine(&rat(1, 2), &rat(0, 1)), None);
        assert_eq!(
            integral_affine(&rat(3, 1), &rat(0, 1)),
            Some(Residue::all())
        );
        for k in -20..20 {
            let v = rat(1, 6) + rat(5, 4) * rat(k, 1);
            let r = integral_affine(&rat(1, 6), &rat(5, 4));
            assert_eq!(
                v.is_integer(),
                r.as_ref().is_some_and(|r| r.contains(&b(k)))
            );
        }
    }
}
