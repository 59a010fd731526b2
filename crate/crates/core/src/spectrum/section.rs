use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::SpectrumSet;
use crate::exactnum::{integral_affine, pow2, two_adic, PiLinear, Residue};

/// One piece of a vertical section `S_t ⊂ ℝ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SectionPart {
    Point(PiLinear),
    Interval {
        lo: PiLinear,
        hi: PiLinear,
    },
    /// `base + k·step`, `k ∈ ℤ`, with `step > 0`.
    Lattice {
        base: PiLinear,
        step: PiLinear,
    },
    Line,
}

/// A closed subset of ℝ given as a finite union of [`SectionPart`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SectionSet {
    parts: Vec<SectionPart>,
}

impl SectionSet {
    pub fn new(parts: Vec<SectionPart>) -> Self {
        let mut seen = HashSet::new();
        let parts = parts
            .into_iter()
            .filter(|p| seen.insert(p.clone()))
            .collect();
        SectionSet { parts }
    }

    pub fn parts(&self) -> &[SectionPart] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, u: &PiLinear) -> bool {
        self.parts.iter().any(|p| match p {
            SectionPart::Point(a) => a == u,
            SectionPart::Interval { lo, hi } => lo <= u && u <= hi,
            SectionPart::Lattice { base, step } => {
                (u - base).ratio(step).is_some_and(|r| r.is_integer())
            }
            SectionPart::Line => true,
        })
    }
}

/// One piece of a difference set `S − S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DifferencePart {
    Point(PiLinear),
    Interval {
        lo: PiLinear,
        hi: PiLinear,
    },
    /// `offset + k·step`.
    Lattice {
        offset: PiLinear,
        step: PiLinear,
    },
    /// `[lo, hi] + step·ℤ`.
    PeriodicInterval {
        lo: PiLinear,
        hi: PiLinear,
        step: PiLinear,
    },
    /// `offset + step1·ℤ + step2·ℤ` with `step1`, `step2` independent over ℚ.
    DoubleLattice {
        offset: PiLinear,
        step1: PiLinear,
        step2: PiLinear,
    },
    Line,
}

/// `S − S` for a [`SectionSet`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DifferenceSet {
    parts: Vec<DifferencePart>,
}

impl DifferenceSet {
    pub fn parts(&self) -> &[DifferencePart] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, u: &PiLinear) -> bool {
        self.parts.iter().any(|p| p.contains(u))
    }
}

fn canonical_offset(offset: &PiLinear, step: &PiLinear) -> PiLinear {
    offset - &step.scale_int(&offset.floor_div(step))
}

fn lattice(offset: PiLinear, step: PiLinear) -> DifferencePart {
    DifferencePart::Lattice {
        offset: canonical_offset(&offset, &step),
        step,
    }
}

fn periodic(lo: PiLinear, hi: PiLinear, step: PiLinear) -> DifferencePart {
    if &hi - &lo >= step {
        return DifferencePart::Line;
    }
    let m = lo.floor_div(&step);
    let shift = step.scale_int(&m);
    DifferencePart::PeriodicInterval {
        lo: &lo - &shift,
        hi: &hi - &shift,
        step,
    }
}

/// Generator of `s1·ℤ + s2·ℤ` when the steps are commensurable.
fn lattice_sum_step(s1: &PiLinear, s2: &PiLinear) -> Option<PiLinear> {
    let r = s1.ratio(s2)?;
    let q = BigRational::from_integer(r.denom().clone());
    Some(s2.scale(&q.recip()))
}

fn part_difference(a: &SectionPart, b: &SectionPart) -> DifferencePart {
    use SectionPart as S;
    match (a, b) {
        (S::Line, _) | (_, S::Line) => DifferencePart::Line,
        (S::Point(x), S::Point(y)) => DifferencePart::Point(x - y),
        (S::Point(x), S::Interval { lo, hi }) => DifferencePart::Interval {
            lo: x - hi,
            hi: x - lo,
        },
        (S::Interval { lo, hi }, S::Point(y)) => DifferencePart::Interval {
            lo: lo - y,
            hi: hi - y,
        },
        (S::Interval { lo: l1, hi: h1 }, S::Interval { lo: l2, hi: h2 }) => {
            DifferencePart::Interval {
                lo: l1 - h2,
                hi: h1 - l2,
            }
        }
        (S::Lattice { base, step }, S::Point(y)) => lattice(base - y, step.clone()),
        (S::Point(x), S::Lattice { base, step }) => lattice(x - base, step.clone()),
        (S::Lattice { base, step }, S::Interval { lo, hi }) => {
            periodic(base - hi, base - lo, step.clone())
        }
        (S::Interval { lo, hi }, S::Lattice { base, step }) => {
            periodic(lo - base, hi - base, step.clone())
        }
        (S::Lattice { base: b1, step: s1 }, S::Lattice { base: b2, step: s2 }) => {
            match lattice_sum_step(s1, s2) {
                Some(g) => lattice(b1 - b2, g),
                None => DifferencePart::DoubleLattice {
                    offset: b1 - b2,
                    step1: s1.clone(),
                    step2: s2.clone(),
                },
            }
        }
    }
}

/// `S − S` as a union of pairwise part differences.
pub fn section_difference(s: &SectionSet) -> DifferenceSet {
    let mut seen = HashSet::new();
    let mut parts = Vec::new();
    for a in &s.parts {
        for b in &s.parts {
            let d = part_difference(a, b);
            if seen.insert(d.clone()) {
                parts.push(d);
            }
        }
    }
    if parts.contains(&DifferencePart::Line) {
        parts = vec![DifferencePart::Line];
    }
    DifferenceSet { parts }
}

fn two_pow_pi(n: u32) -> PiLinear {
    PiLinear::pi_multiple(pow2(n as i64))
}

fn is_odd_integer(r: &BigRational) -> bool {
    r.is_integer() && r.to_integer().is_odd()
}

/// True when some integer `m` puts `c + m·t` inside `[lo, hi]`, for `t > 0`.
fn progression_meets_interval(c: &PiLinear, t: &PiLinear, lo: &PiLinear, hi: &PiLinear) -> bool {
    (lo - c).ceil_div(t) <= (hi - c).floor_div(t)
}

fn odd_in(res: Option<Residue>) -> bool {
    res.and_then(|r| r.intersect(&Residue::odd())).is_some()
}

/// `(j1, j2)` solving `j1·s1 + j2·s2 = v` over ℚ for independent `s1`, `s2`.
fn solve2(
    s1: &PiLinear,
    s2: &PiLinear,
    v0: &BigRational,
    v1: &BigRational,
) -> (BigRational, BigRational) {
    let det = s1.q0() * s2.q1() - s2.q0() * s1.q1();
    let j1 = (v0 * s2.q1() - s2.q0() * v1) / &det;
    let j2 = (s1.q0() * v1 - v0 * s1.q1()) / &det;
    (j1, j2)
}

impl DifferencePart {
    pub fn contains(&self, u: &PiLinear) -> bool {
        match self {
            DifferencePart::Point(c) => c == u,
            DifferencePart::Interval { lo, hi } => lo <= u && u <= hi,
            DifferencePart::Lattice { offset, step } => {
                (u - offset).ratio(step).is_some_and(|r| r.is_integer())
            }
            DifferencePart::PeriodicInterval { lo, hi, step } => {
                let m = (u - lo).floor_div(step);
                &(u - &step.scale_int(&m)) <= hi
            }
            DifferencePart::DoubleLattice {
                offset,
                step1,
                step2,
            } => {
                let v = u - offset;
                let (j1, j2) = solve2(step1, step2, v.q0(), v.q1());
                j1.is_integer() && j2.is_integer()
            }
            DifferencePart::Line => true,
        }
    }

    /// Whether some odd `k` has `2ⁿkπ` in this part.
    pub fn star(&self, n: u32) -> bool {
        let d = two_pow_pi(n);
        let two_n = pow2(n as i64);
        match self {
            DifferencePart::Point(c) => c.ratio(&d).is_some_and(|r| is_odd_integer(&r)),
            DifferencePart::Interval { lo, hi } => {
                let kmin = lo.ceil_div(&d);
                let kmax = hi.floor_div(&d);
                kmax > kmin || (kmax == kmin && kmin.is_odd())
            }
            DifferencePart::Lattice { offset, step } => lattice_star(offset, step, &two_n),
            DifferencePart::PeriodicInterval { lo, hi, step } => {
                if hi == lo {
                    return lattice_star(lo, step, &two_n);
                }
                if !step.is_pi_multiple() {
                    // Odd multiples of 2ⁿπ are dense modulo an irrational-ratio step.
                    return true;
                }
                let r = &two_n / step.q1();
                let q = BigRational::from_integer(r.denom().clone());
                let fine = step.scale(&q.recip());
                if r.denom().is_odd() {
                    progression_meets_interval(&PiLinear::zero(), &fine, lo, hi)
                } else {
                    progression_meets_interval(&fine, &fine.scale_int(&BigInt::from(2)), lo, hi)
                }
            }
            DifferencePart::DoubleLattice {
                offset,
                step1,
                step2,
            } => {
                // j(k) = u + k·v with u from −offset and v from (0, 2ⁿ).
                let (u1, u2) = solve2(step1, step2, &-offset.q0(), &-offset.q1());
                let (v1, v2) = solve2(step1, step2, &BigRational::zero(), &two_n);
                let r1 = integral_affine(&u1, &v1);
                let r2 = integral_affine(&u2, &v2);
                match (r1, r2) {
                    (Some(a), Some(b)) => odd_in(a.intersect(&b)),
                    _ => false,
                }
            }
            DifferencePart::Line => true,
        }
    }

    /// A level from which [`star`](Self::star) no longer changes with `n`.
    pub fn stabilization_index(&self) -> u32 {
        let v2_num = |q: &BigRational| two_adic(q.numer()) as u32;
        match self {
            DifferencePart::Point(c) => {
                if c.is_pi_multiple() && !c.q1().is_zero() && c.q1().is_integer() {
                    v2_num(c.q1()) + 1
                } else {
                    0
                }
            }
            DifferencePart::Interval { lo, hi } => {
                let m = PiLinear::max_of(&lo.abs(), &hi.abs());
                let q = m.floor_div(&PiLinear::pi());
                q.bits() as u32
            }
            DifferencePart::Lattice { offset, step } => lattice_index(offset, step),
            DifferencePart::PeriodicInterval { lo, hi, step } => {
                if hi == lo {
                    lattice_index(lo, step)
                } else if step.is_pi_multiple() {
                    v2_num(step.q1()) + 1
                } else {
                    0
                }
            }
            DifferencePart::DoubleLattice { step1, step2, .. } => {
                let (v1, v2) = solve2(step1, step2, &BigRational::zero(), &BigRational::one());
                let d = |q: &BigRational| two_adic(q.denom()) as u32;
                d(&v1).max(d(&v2))
            }
            DifferencePart::Line => 0,
        }
    }
}

/// Odd `k` with `k·2ⁿπ ∈ c + s·ℤ`.
fn lattice_star(c: &PiLinear, s: &PiLinear, two_n: &BigRational) -> bool {
    if s.is_pi_multiple() {
        if !c.is_pi_multiple() {
            return false;
        }
        // j = (k·2ⁿ − c1)/s1 must be an integer.
        let a0 = -(c.q1() / s.q1());
        let a1 = two_n / s.q1();
        odd_in(integral_affine(&a0, &a1))
    } else {
        let j = -(c.q0() / s.q0());
        if !j.is_integer() {
            return false;
        }
        let k = (c.q1() + &j * s.q1()) / two_n;
        is_odd_integer(&k)
    }
}

fn lattice_index(c: &PiLinear, s: &PiLinear) -> u32 {
    if s.is_pi_multiple() {
        let m = c.q1().denom().lcm(s.q1().denom());
        let b = (s.q1() * BigRational::from_integer(m)).to_integer();
        two_adic(&b) as u32 + 1
    } else {
        let j = -(c.q0() / s.q0());
        let k = c.q1() + &j * s.q1();
        if j.is_integer() && k.is_integer() && !k.is_zero() {
            two_adic(&k.to_integer()) as u32 + 1
        } else {
            0
        }
    }
}

/// Whether an odd `k` has `2ⁿkπ ∈ S − S`.
pub fn star_holds(diff: &DifferenceSet, n: u32) -> bool {
    diff.parts.iter().any(|p| p.star(n))
}

/// Condition (★) for the section of `z` at real part `t`.
pub fn star_condition(z: &SpectrumSet, t: &BigRational, n: u32) -> bool {
    star_holds(&section_difference(&z.vertical_section(t)), n)
}

impl DifferenceSet {
    /// Level from which [`star_holds`] is constant in `n`.
    pub fn stabilization_index(&self) -> u32 {
        self.parts
            .iter()
            .map(DifferencePart::stabilization_index)
            .max()
            .unwrap_or(0)
    }

    pub fn is_bounded(&self) -> bool {
        self.parts.iter().all(|p| {
            matches!(
                p,
                DifferencePart::Point(_) | DifferencePart::Interval { .. }
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    fn lat(base: &str, step: &str) -> SectionSet {
        SectionSet::new(vec![SectionPart::Lattice {
            base: pl(base),
            step: pl(step),
        }])
    }

    /// Odd k in [-bound, bound] with k·2ⁿπ in S − S, testing membership pairwise.
    fn brute_star(s: &SectionSet, n: u32, bound: i64) -> bool {
        let d = section_difference(s);
        (-bound..=bound)
            .filter(|k| k % 2 != 0)
            .any(|k| d.contains(&two_pow_pi(n).scale_int(&BigInt::from(k))))
    }

    #[test]
    fn difference_examples() {
        let d = section_difference(&lat("0", "2*pi"));
        assert_eq!(
            d.parts(),
            &[DifferencePart::Lattice {
                offset: pl("0"),
                step: pl("2*pi")
            }]
        );
        let i = SectionSet::new(vec![SectionPart::Interval {
            lo: pl("-pi"),
            hi: pl("pi"),
        }]);
        assert_eq!(
            section_difference(&i).parts(),
            &[DifferencePart::Interval {
                lo: pl("-2*pi"),
                hi: pl("2*pi")
            }]
        );
        assert!(section_difference(&SectionSet::default()).is_empty());
    }

    #[test]
    fn star_examples() {
        let s = lat("0", "2*pi");
        let d = section_difference(&s);
        assert!(!star_holds(&d, 0));
        assert!(star_holds(&d, 1));
        assert!(star_holds(&d, 5));
        let i = section_difference(&SectionSet::new(vec![SectionPart::Interval {
            lo: pl("-pi"),
            hi: pl("pi"),
        }]));
        assert_eq!(
            (0..5).map(|n| star_holds(&i, n)).collect::<Vec<_>>(),
            [true, true, false, false, false]
        );
        let line = section_difference(&SectionSet::new(vec![SectionPart::Line]));
        assert!(star_holds(&line, 17));
    }

    #[test]
    fn star_matches_brute_force_on_mixed_sections() {
        let sections = [
            SectionSet::new(vec![
                SectionPart::Point(pl("0")),
                SectionPart::Point(pl("12*pi")),
            ]),
            SectionSet::new(vec![
                SectionPart::Point(pl("1")),
                SectionPart::Lattice {
                    base: pl("1 + pi"),
                    step: pl("4*pi"),
                },
            ]),
            SectionSet::new(vec![
                SectionPart::Lattice {
                    base: pl("0"),
                    step: pl("3*pi"),
                },
                SectionPart::Lattice {
                    base: pl("1/2"),
                    step: pl("5/2*pi"),
                },
            ]),
            SectionSet::new(vec![
                SectionPart::Interval {
                    lo: pl("0"),
                    hi: pl("1/10"),
                },
                SectionPart::Lattice {
                    base: pl("pi"),
                    step: pl("6*pi"),
                },
            ]),
            SectionSet::new(vec![SectionPart::Lattice {
                base: pl("0"),
                step: pl("1 + pi"),
            }]),
        ];
        for s in &sections {
            for n in 0..6 {
                assert_eq!(
                    star_holds(&section_difference(s), n),
                    brute_star(s, n, 40),
                    "{s:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn stabilization_is_respected() {
        let sections = [
            lat("0", "2*pi"),
            lat("1/3*pi", "6*pi"),
            SectionSet::new(vec![
                SectionPart::Point(pl("0")),
                SectionPart::Point(pl("24*pi")),
            ]),
            SectionSet::new(vec![
                SectionPart::Interval {
                    lo: pl("0"),
                    hi: pl("1/3*pi"),
                },
                SectionPart::Lattice {
                    base: pl("0"),
                    step: pl("10*pi"),
                },
            ]),
        ];
        for s in &sections {
            let d = section_difference(s);
            let i = d.stabilization_index();
            let tail = star_holds(&d, i);
            for n in i..i + 12 {
                assert_eq!(star_holds(&d, n), tail, "{s:?}");
            }
        }
    }
}
