//! Exact subsets of the circle `ℝ / 2πℤ`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{ext_gcd, int, PiLinear};

pub(crate) fn two_pi() -> PiLinear {
    PiLinear::pi_multiple(int(2))
}

/// `{start + 2πk/count : k ∈ ℤ}`, a coset of the `count`-th roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coset {
    /// Canonical representative in `[0, 2π/count)`.
    pub start: PiLinear,
    pub count: BigInt,
}

impl Coset {
    pub fn new(start: PiLinear, count: BigInt) -> Self {
        assert!(count.is_positive(), "coset count must be positive");
        let step = Self::step_for(&count);
        let start = &start - &step.scale_int(&start.floor_div(&step));
        Coset { start, count }
    }

    pub fn point(angle: PiLinear) -> Self {
        Coset::new(angle, BigInt::one())
    }

    fn step_for(count: &BigInt) -> PiLinear {
        PiLinear::pi_multiple(BigRational::new(BigInt::from(2), count.clone()))
    }

    pub fn step(&self) -> PiLinear {
        Self::step_for(&self.count)
    }

    pub fn contains(&self, theta: &PiLinear) -> bool {
        (theta - &self.start)
            .ratio(&self.step())
            .is_some_and(|r| r.is_integer())
    }

    /// Orbit of `base + k·step` modulo `2π`; `None` when the orbit is dense.
    pub fn orbit(base: &PiLinear, step: &PiLinear) -> Option<Coset> {
        let r = step.ratio(&two_pi())?;
        Some(Coset::new(base.clone(), r.denom().clone()))
    }

    pub fn intersect(&self, other: &Coset) -> Option<Coset> {
        let g = self.count.gcd(&other.count);
        let l = self.count.lcm(&other.count);
        let d = &other.start - &self.start;
        let r = d
            .ratio(&two_pi())
            .or_else(|| d.is_zero().then(BigRational::zero))?;
        let m = r * BigRational::from_integer(l.clone());
        if !m.is_integer() {
            return None;
        }
        let m = m.to_integer();
        let (_, x, _) = ext_gcd(&(&other.count / &g), &(&self.count / &g));
        let a = m * x;
        Some(Coset::new(&self.start + &self.step().scale_int(&a), g))
    }

    pub fn rotate(&self, phi: &PiLinear) -> Coset {
        Coset::new(&self.start + phi, self.count.clone())
    }

    pub fn power(&self, s: &BigInt) -> Coset {
        let g = self.count.gcd(s);
        Coset::new(self.start.scale_int(s), &self.count / g)
    }

    /// Point of the coset at least `from`, nearest to it counterclockwise.
    fn first_at_or_after(&self, from: &PiLinear) -> PiLinear {
        let step = self.step();
        let k = (from - &self.start).ceil_div(&step);
        &self.start + &step.scale_int(&k)
    }

    /// Point of the coset whose reduced angle has the largest magnitude.
    pub fn farthest_from_zero(&self) -> PiLinear {
        let step = self.step();
        let k = (PiLinear::pi() - self.start.clone()).floor_div(&step);
        let below = &self.start + &step.scale_int(&k);
        let above = &below + &step;
        let pi = PiLinear::pi();
        if (&pi - &below) <= (&above - &pi) {
            below.reduce_mod_2pi()
        } else {
            above.reduce_mod_2pi()
        }
    }
}

/// Closed arc `[start, start + width]` with `0 ≤ width < 2π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arc {
    pub start: PiLinear,
    pub width: PiLinear,
}

impl Arc {
    pub fn end(&self) -> PiLinear {
        (&self.start + &self.width).reduce_mod_2pi()
    }

    pub fn contains(&self, theta: &PiLinear) -> bool {
        (theta - &self.start).reduce_0_2pi() <= self.width
    }

    fn intersect(&self, other: &Arc) -> Vec<Arc> {
        let tp = two_pi();
        let s = (&other.start - &self.start).reduce_0_2pi();
        let mut out = Vec::new();
        if s <= self.width {
            let hi = PiLinear::min_of(&(&s + &other.width), &self.width);
            out.push(Arc {
                start: (&self.start + &s).reduce_mod_2pi(),
                width: &hi - &s,
            });
        }
        let wrapped = &(&s + &other.width) - &tp;
        if wrapped.signum() != Ordering::Less {
            let hi = PiLinear::min_of(&wrapped, &self.width);
            let piece = Arc {
                start: self.start.clone(),
                width: hi,
            };
            if !out.contains(&piece) {
                out.push(piece);
            }
        }
        out
    }
}

/// Union of arcs, or the whole circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arcs {
    Full,
    List(Vec<Arc>),
}

/// `coset ∩ arcs`, either factor possibly trivial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AngleSet {
    pub coset: Option<Coset>,
    pub arcs: Arcs,
}

/// Cap on explicit point enumeration.
pub const POINT_CAP: u64 = 1 << 20;

impl AngleSet {
    pub fn empty() -> Self {
        AngleSet {
            coset: None,
            arcs: Arcs::List(Vec::new()),
        }
    }

    pub fn full() -> Self {
        AngleSet {
            coset: None,
            arcs: Arcs::Full,
        }
    }

    pub fn point(theta: PiLinear) -> Self {
        AngleSet {
            coset: Some(Coset::point(theta)),
            arcs: Arcs::Full,
        }
    }

    pub fn coset(c: Coset) -> Self {
        AngleSet {
            coset: Some(c),
            arcs: Arcs::Full,
        }
    }

    /// Arc from `start` of the given width; a width of `2π` or more is the circle.
    pub fn arc(start: PiLinear, width: PiLinear) -> Self {
        if width >= two_pi() {
            return Self::full();
        }
        AngleSet {
            coset: None,
            arcs: Arcs::List(vec![Arc {
                start: start.reduce_mod_2pi(),
                width,
            }]),
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        match (&self.coset, &self.arcs) {
            (_, Arcs::List(l)) if l.is_empty() => Self::empty(),
            (None, Arcs::List(l)) if l.len() == 1 && l[0].width.is_zero() => {
                Self::point(l[0].start.clone())
            }
            (Some(c), Arcs::List(l)) if c.count.is_one() => {
                if l.iter().any(|a| a.contains(&c.start)) {
                    AngleSet {
                        coset: self.coset,
                        arcs: Arcs::Full,
                    }
                } else {
                    Self::empty()
                }
            }
            (Some(c), Arcs::List(l)) => {
                let arcs: Vec<Arc> = l
                    .iter()
                    .filter(|a| arc_meets_coset(a, c))
                    .cloned()
                    .collect();
                if arcs.is_empty() {
                    Self::empty()
                } else {
                    AngleSet {
                        coset: self.coset,
                        arcs: Arcs::List(arcs),
                    }
                }
            }
            _ => self,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.arcs, Arcs::List(l) if l.is_empty())
    }

    pub fn is_full(&self) -> bool {
        self.coset.is_none() && self.arcs == Arcs::Full
    }

    pub fn contains(&self, theta: &PiLinear) -> bool {
        let in_coset = self.coset.as_ref().is_none_or(|c| c.contains(theta));
        let in_arcs = match &self.arcs {
            Arcs::Full => true,
            Arcs::List(l) => l.iter().any(|a| a.contains(theta)),
        };
        in_coset && in_arcs
    }

    pub fn intersect(&self, other: &AngleSet) -> AngleSet {
        let coset = match (&self.coset, &other.coset) {
            (Some(a), Some(b)) => match a.intersect(b) {
                Some(c) => Some(c),
                None => return Self::empty(),
            },
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        let arcs = match (&self.arcs, &other.arcs) {
            (Arcs::Full, x) | (x, Arcs::Full) => x.clone(),
            (Arcs::List(a), Arcs::List(b)) => {
                let mut out: Vec<Arc> = Vec::new();
                for x in a {
                    for y in b {
                        for piece in x.intersect(y) {
                            if !out.contains(&piece) {
                                out.push(piece);
                            }
                        }
                    }
                }
                Arcs::List(out)
            }
        };
        AngleSet { coset, arcs }.normalized()
    }

    pub fn rotate(&self, phi: &PiLinear) -> AngleSet {
        let coset = self.coset.as_ref().map(|c| c.rotate(phi));
        let arcs = match &self.arcs {
            Arcs::Full => Arcs::Full,
            Arcs::List(l) => Arcs::List(
                l.iter()
                    .map(|a| Arc {
                        start: (&a.start + phi).reduce_mod_2pi(),
                        width: a.width.clone(),
                    })
                    .collect(),
            ),
        };
        AngleSet { coset, arcs }
    }

    /// Image under `θ ↦ s·θ`. Exact unless both a coset and proper arcs are
    /// present, in which case the result contains the image.
    pub fn power(&self, s: &BigInt) -> AngleSet {
        let coset = self.coset.as_ref().map(|c| c.power(s));
        let arcs = match &self.arcs {
            Arcs::Full => Arcs::Full,
            Arcs::List(l) => {
                let tp = two_pi();
                let mut out = Vec::new();
                let mut full = false;
                for a in l {
                    let w = a.width.scale_int(s);
                    if w >= tp {
                        full = true;
                        break;
                    }
                    out.push(Arc {
                        start: a.start.scale_int(s).reduce_mod_2pi(),
                        width: w,
                    });
                }
                if full {
                    Arcs::Full
                } else {
                    Arcs::List(out)
                }
            }
        };
        AngleSet { coset, arcs }.normalized()
    }

    /// Number of points when the set is finite.
    pub fn point_count(&self) -> Option<BigInt> {
        let c = self.coset.as_ref()?;
        match &self.arcs {
            Arcs::Full => Some(c.count.clone()),
            Arcs::List(l) => Some(l.iter().map(|a| arc_coset_count(a, c)).sum()),
        }
    }

    /// Explicit points of a finite set, in increasing order from the
    /// representative, reduced to `(−π, π]`.
    pub fn points(&self) -> Result<Vec<PiLinear>> {
        let c = self.coset.as_ref().ok_or_else(|| Error::TooManyPoints {
            count: "continuum".into(),
            cap: POINT_CAP,
        })?;
        let count = self.point_count().expect("coset present");
        if count > BigInt::from(POINT_CAP) {
            return Err(Error::TooManyPoints {
                count: count.to_string(),
                cap: POINT_CAP,
            });
        }
        let step = c.step();
        let mut out = Vec::new();
        match &self.arcs {
            Arcs::Full => {
                let n = c.count.to_u64().expect("checked against cap");
                for k in 0..n {
                    out.push((&c.start + &step.scale_int(&BigInt::from(k))).reduce_mod_2pi());
                }
            }
            Arcs::List(l) => {
                for a in l {
                    let first = c.first_at_or_after(&a.start);
                    let n = arc_coset_count(a, c).to_u64().expect("checked against cap");
                    for k in 0..n {
                        let p = (&first + &step.scale_int(&BigInt::from(k))).reduce_mod_2pi();
                        if !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// A member whose reduced angle has the largest magnitude, i.e. the
    /// member closest to `π`. `None` for the empty set.
    pub fn farthest_from_zero(&self) -> Option<PiLinear> {
        let pi = PiLinear::pi();
        let mut cands = Vec::new();
        match (&self.coset, &self.arcs) {
            (_, Arcs::List(l)) if l.is_empty() => return None,
            (None, Arcs::Full) => return Some(pi),
            (Some(c), Arcs::Full) => return Some(c.farthest_from_zero()),
            (None, Arcs::List(l)) => {
                for a in l {
                    if a.contains(&pi) {
                        return Some(pi);
                    }
                    cands.push(a.start.clone());
                    cands.push(a.end());
                }
            }
            (Some(c), Arcs::List(l)) => {
                let best = c.farthest_from_zero();
                if l.iter().any(|a| a.contains(&best)) {
                    return Some(best);
                }
                for a in l {
                    let first = c.first_at_or_after(&a.start);
                    let n = arc_coset_count(a, c);
                    if n.is_zero() {
                        continue;
                    }
                    let last = &first + &c.step().scale_int(&(n - 1));
                    cands.push(first.reduce_mod_2pi());
                    cands.push(last.reduce_mod_2pi());
                }
            }
        }
        cands.into_iter().max_by(|a, b| a.abs().cmp(&b.abs()))
    }

    /// Float member nearest to `target` (radians); used for numerical sups.
    pub fn nearest_f64(&self, target: f64) -> Option<f64> {
        use std::f64::consts::PI;
        let wrap = |x: f64| {
            let r = (x + PI).rem_euclid(2.0 * PI) - PI;
            if r <= -PI {
                r + 2.0 * PI
            } else {
                r
            }
        };
        let dist = |a: f64| wrap(a - target).abs();
        let mut cands: Vec<f64> = Vec::new();
        let coset_near = |c: &Coset| {
            let s = c.start.to_f64();
            let step = c.step().to_f64();
            let k = ((target - s) / step).round();
            [k - 1.0, k, k + 1.0].map(|j| wrap(s + j * step))
        };
        match (&self.coset, &self.arcs) {
            (_, Arcs::List(l)) if l.is_empty() => return None,
            (None, Arcs::Full) => return Some(target),
            (Some(c), Arcs::Full) => cands.extend(coset_near(c)),
            (None, Arcs::List(l)) => {
                for a in l {
                    let s = a.start.to_f64();
                    let w = a.width.to_f64();
                    if (target - s).rem_euclid(2.0 * PI) <= w {
                        return Some(target);
                    }
                    cands.push(wrap(s));
                    cands.push(wrap(s + w));
                }
            }
            (Some(c), Arcs::List(l)) => {
                for p in coset_near(c) {
                    if l.iter()
                        .any(|a| (p - a.start.to_f64()).rem_euclid(2.0 * PI) <= a.width.to_f64())
                    {
                        cands.push(p);
                    }
                }
                for a in l {
                    let n = arc_coset_count(a, c);
                    if n.is_zero() {
                        continue;
                    }
                    let first = c.first_at_or_after(&a.start);
                    cands.push(wrap(first.to_f64()));
                    cands.push(wrap((&first + &c.step().scale_int(&(n - 1))).to_f64()));
                }
            }
        }
        cands
            .into_iter()
            .min_by(|a, b| dist(*a).total_cmp(&dist(*b)))
    }
}

fn arc_coset_count(a: &Arc, c: &Coset) -> BigInt {
    let step = c.step();
    let first = c.first_at_or_after(&a.start);
    let offset = &first - &a.start;
    if offset > a.width {
        return BigInt::zero();
    }
    (&a.width - &offset).floor_div(&step) + 1
}

fn arc_meets_coset(a: &Arc, c: &Coset) -> bool {
    let first = c.first_at_or_after(&a.start);
    &first - &a.start <= a.width
}

impl fmt::Display for AngleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs = |f: &mut fmt::Formatter<'_>, l: &[Arc]| -> fmt::Result {
            for (i, a) in l.iter().enumerate() {
                if i > 0 {
                    write!(f, " ∪ ")?;
                }
                write!(f, "[{}, {}]", a.start, &a.start + &a.width)?;
            }
            Ok(())
        };
        match (&self.coset, &self.arcs) {
            (_, Arcs::List(l)) if l.is_empty() => write!(f, "∅"),
            (None, Arcs::Full) => write!(f, "all angles"),
            (Some(c), Arcs::Full) if c.count.is_one() => write!(f, "{}", c.start.reduce_mod_2pi()),
            (Some(c), Arcs::Full) => write!(f, "{} + 2πk/{}", c.start, c.count),
            (None, Arcs::List(l)) => arcs(f, l),
            (Some(c), Arcs::List(l)) => {
                write!(f, "({} + 2πk/{}) ∩ ", c.start, c.count)?;
                arcs(f, l)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    #[test]
    fn coset_intersection_matches_enumeration() {
        let cases = [
            ("0", 8, "1/4*pi", 12),
            ("1/3*pi", 6, "0", 4),
            ("0", 5, "1/2", 3),
            ("1/6*pi", 9, "1/2*pi", 6),
        ];
        for (s1, c1, s2, c2) in cases {
            let a = Coset::new(pl(s1), c1.into());
            let b = Coset::new(pl(s2), c2.into());
            let pa = AngleSet::coset(a.clone()).points().unwrap();
            let common: Vec<_> = pa.iter().filter(|p| b.contains(p)).cloned().collect();
            match a.intersect(&b) {
                Some(c) => {
                    let mut pc = AngleSet::coset(c).points().unwrap();
                    let mut common = common.clone();
                    pc.sort();
                    common.sort();
                    assert_eq!(pc, common);
                }
                None => assert!(common.is_empty(), "{s1} {c1} {s2} {c2}"),
            }
        }
    }

    #[test]
    fn arcs_intersect_with_wraparound() {
        let a = AngleSet::arc(pl("3/4*pi"), pl("1/2*pi"));
        let b = AngleSet::arc(pl("-pi"), pl("1/2*pi"));
        let c = a.intersect(&b);
        assert!(c.contains(&pl("pi")) && c.contains(&pl("-3/4*pi")));
        assert!(!c.contains(&pl("3/4*pi")));
        let d = AngleSet::arc(pl("-1/4*pi"), pl("1/2*pi"));
        assert!(d.intersect(&d.rotate(&PiLinear::pi())).is_empty());
        let half = AngleSet::arc(pl("-1/2*pi"), pl("pi"));
        let anti = half.intersect(&half.rotate(&PiLinear::pi()));
        assert_eq!(
            anti.points().unwrap_err(),
            Error::TooManyPoints {
                count: "continuum".into(),
                cap: POINT_CAP
            }
        );
        assert!(anti.contains(&pl("1/2*pi")) && anti.contains(&pl("-1/2*pi")));
    }

    #[test]
    fn coset_in_arc_counts() {
        let s = AngleSet::coset(Coset::new(pl("0"), 16.into()))
            .intersect(&AngleSet::arc(pl("-1/4*pi"), pl("1/2*pi")));
        assert_eq!(s.point_count(), Some(5.into()));
        assert_eq!(s.farthest_from_zero().unwrap().abs(), pl("1/4*pi"));
        assert_eq!(
            AngleSet::coset(Coset::new(pl("1/3*pi"), 3.into())).farthest_from_zero(),
            Some(pl("pi"))
        );
    }

    #[test]
    fn powers() {
        let c = AngleSet::coset(Coset::new(pl("0"), 16.into()));
        assert_eq!(
            c.power(&8.into()),
            AngleSet::coset(Coset::new(pl("0"), 2.into()))
        );
        assert!(AngleSet::arc(pl("-1/2*pi"), pl("pi"))
            .power(&2.into())
            .is_full());
        assert_eq!(
            AngleSet::arc(pl("-1/4*pi"), pl("1/2*pi")).power(&2.into()),
            AngleSet::arc(pl("-1/2*pi"), pl("pi"))
        );
    }
}
