use std::collections::BTreeSet;

use num_rational::BigRational;
use serde::Serialize;

use super::section::{section_difference, star_holds, DifferenceSet};
use super::{Primitive, SpectrumSet};
use crate::exactnum::int;

/// `M_t = {n ≥ 0 : (★) holds}` with its symbolically decided tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MSet {
    #[serde(with = "crate::exactnum::ser_rat")]
    pub t: BigRational,
    pub n_max: u32,
    /// Members up to `n_max`.
    pub members: BTreeSet<u32>,
    /// For every `n ≥ tail_from`, membership equals `tail_holds`.
    pub tail_from: u32,
    pub tail_holds: bool,
}

impl MSet {
    pub fn from_difference(t: BigRational, diff: &DifferenceSet, n_max: u32) -> Self {
        let members = (0..=n_max).filter(|&n| star_holds(diff, n)).collect();
        let tail_from = diff.stabilization_index();
        let tail_holds = star_holds(diff, tail_from);
        MSet {
            t,
            n_max,
            members,
            tail_from,
            tail_holds,
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.tail_holds
    }

    /// Membership for any `n`, exact beyond `n_max`.
    pub fn contains(&self, n: u32) -> bool {
        if n <= self.n_max {
            self.members.contains(&n)
        } else {
            self.tail_holds
        }
    }

    /// Every element when finite. Members between `n_max` and the tail are
    /// included by recomputation, so the answer is exact.
    pub fn finite_elements(&self, diff: &DifferenceSet) -> Option<BTreeSet<u32>> {
        if self.tail_holds {
            return None;
        }
        let mut all = self.members.clone();
        all.extend((self.n_max + 1..self.tail_from).filter(|&n| star_holds(diff, n)));
        Some(all)
    }
}

pub fn m_set(z: &SpectrumSet, t: &BigRational, n_max: u32) -> MSet {
    let diff = section_difference(&z.vertical_section(t));
    MSet::from_difference(t.clone(), &diff, n_max)
}

/// Real parts at which every distinct vertical section of `z` occurs: the
/// critical values of the primitives and midpoints between consecutive ones.
pub fn representative_sections(z: &SpectrumSet) -> Vec<BigRational> {
    let mut crit = BTreeSet::new();
    for p in z.primitives() {
        let (lo, hi) = p.re_range();
        crit.insert(lo);
        crit.insert(hi);
    }
    let crit: Vec<BigRational> = crit.into_iter().collect();
    let mut out = Vec::with_capacity(2 * crit.len());
    for (i, c) in crit.iter().enumerate() {
        out.push(c.clone());
        if let Some(next) = crit.get(i + 1) {
            let mid = (c + next) / int(2);
            let covered = z.primitives().iter().any(|p| {
                matches!(p, Primitive::Rect { re_lo, re_hi, .. } if re_lo <= &mid && &mid <= re_hi)
            });
            if covered {
                out.push(mid);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum H2Verdict {
    /// `∪ M_t` is finite and equals `union`.
    Holds { union: BTreeSet<u32> },
    /// `M_t` is infinite at the witness section.
    Fails {
        #[serde(with = "crate::exactnum::ser_rat")]
        witness_t: BigRational,
        tail_from: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Report {
    pub verdict: H2Verdict,
    pub sections: Vec<MSet>,
}

impl H2Report {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, H2Verdict::Holds { .. })
    }
}

pub fn h2_check(z: &SpectrumSet, n_max: u32) -> H2Report {
    let mut sections = Vec::new();
    let mut union = BTreeSet::new();
    let mut failure = None;
    for t in representative_sections(z) {
        let diff = section_difference(&z.vertical_section(&t));
        let m = MSet::from_difference(t.clone(), &diff, n_max);
        match m.finite_elements(&diff) {
            Some(all) => union.extend(all),
            None => {
                if failure.is_none() {
                    failure = Some(H2Verdict::Fails {
                        witness_t: t,
                        tail_from: m.tail_from,
                    });
                }
            }
        }
        sections.push(m);
    }
    let verdict = failure.unwrap_or(H2Verdict::Holds { union });
    H2Report { verdict, sections }
}

impl SpectrumSet {
    /// True when `t` lies in the closed range of real parts.
    pub fn spans(&self, t: &BigRational) -> bool {
        let b = self.eta_zeta();
        b.eta.as_ref().is_none_or(|e| e <= t) && t <= &b.zeta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, PiLinear};

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    fn roots() -> SpectrumSet {
        SpectrumSet::new(vec![Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("2*pi"),
        }])
        .unwrap()
    }

    fn rectangle() -> SpectrumSet {
        SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(-1),
            re_hi: int(0),
            im_lo: pl("-pi"),
            im_hi: pl("pi"),
        }])
        .unwrap()
    }

    #[test]
    fn m_set_examples() {
        let m = m_set(&roots(), &int(0), 10);
        assert_eq!(m.members, (1..=10).collect());
        assert!(m.tail_holds);
        let r = m_set(&rectangle(), &rat(-1, 2), 10);
        assert_eq!(r.members, [0, 1].into_iter().collect());
        assert!(!r.tail_holds);
        let line = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        let l = m_set(&line, &int(0), 5);
        assert_eq!(l.members, (0..=5).collect());
        assert!(l.tail_holds && l.contains(1000));
    }

    #[test]
    fn h2_examples() {
        let r = h2_check(&rectangle(), 12);
        assert_eq!(
            r.verdict,
            H2Verdict::Holds {
                union: [0, 1].into_iter().collect()
            }
        );
        assert!(
            matches!(h2_check(&roots(), 12).verdict, H2Verdict::Fails { witness_t, .. } if witness_t == int(0))
        );
        let line = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        assert!(!h2_check(&line, 3).holds());
    }

    #[test]
    fn representatives_cover_rect_interiors() {
        let z = SpectrumSet::new(vec![
            Primitive::Rect {
                re_lo: int(-2),
                re_hi: int(0),
                im_lo: pl("0"),
                im_hi: pl("1"),
            },
            Primitive::Point {
                re: int(-1),
                im: pl("pi"),
            },
            Primitive::Point {
                re: int(3),
                im: pl("0"),
            },
        ])
        .unwrap();
        assert_eq!(
            representative_sections(&z),
            vec![int(-2), rat(-3, 2), int(-1), rat(-1, 2), int(0), int(3)]
        );
    }
}
