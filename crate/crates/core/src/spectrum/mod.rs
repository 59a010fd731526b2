//! Symbolic closed sets `Z ⊂ ℂ` and their vertical-section combinatorics.

mod closedness;
mod mset;
mod section;

pub use closedness::{h1_check, H1Verdict};
pub use mset::{h2_check, m_set, representative_sections, H2Report, H2Verdict, MSet};
pub use section::{
    section_difference, star_condition, star_holds, DifferencePart, DifferenceSet, SectionPart,
    SectionSet,
};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, pow2, PiLinear};

/// How the exponents `n_j` of the prime family are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NSeq {
    /// `n_j = 2j` for the prime `j`.
    Double,
    /// `n_j = j`.
    Linear,
    /// `n_j = 2i` for the `i`-th prime of the family (1-based).
    DoubleIndex,
    /// Explicit strictly increasing values, one per prime.
    Explicit(Vec<u32>),
}

impl NSeq {
    pub fn name(&self) -> String {
        match self {
            NSeq::Double => "double".into(),
            NSeq::Linear => "linear".into(),
            NSeq::DoubleIndex => "doubleindex".into(),
            NSeq::Explicit(v) => {
                let items: Vec<String> = v.iter().map(|n| n.to_string()).collect();
                format!("[{}]", items.join(","))
            }
        }
    }
}

/// Points `iα_j`, `iβ_j` for the first `truncation` primes `j ≥ 3`, where
/// `α_j = π/j + 2^(n_j+1)π` and `β_j = π/j + 3·2^(n_j)π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeFamily {
    pub nseq: NSeq,
    pub truncation: usize,
}

/// Odd primes in increasing order.
pub fn odd_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 3u64;
    while out.len() < count {
        if (3..)
            .step_by(2)
            .take_while(|d| d * d <= c)
            .all(|d| !c.is_multiple_of(d))
        {
            out.push(c);
        }
        c += 2;
    }
    out
}

impl PrimeFamily {
    pub fn new(nseq: NSeq, truncation: usize) -> Result<Self> {
        let fam = PrimeFamily { nseq, truncation };
        fam.validate()?;
        Ok(fam)
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidPrimitive {
            primitive: "primefamily",
            reason,
        };
        if self.truncation == 0 {
            return Err(bad("J must be positive".into()));
        }
        if let NSeq::Explicit(v) = &self.nseq {
            if v.len() < self.truncation {
                return Err(bad(format!(
                    "nseq lists {} values but J = {}",
                    v.len(),
                    self.truncation
                )));
            }
            if v.first() == Some(&0) || v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("nseq must be strictly increasing and positive".into()));
            }
        }
        Ok(())
    }

    pub fn primes(&self) -> Vec<u64> {
        odd_primes(self.truncation)
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.primes()
            .iter()
            .enumerate()
            .map(|(i, &p)| match &self.nseq {
                NSeq::Double => 2 * p as u32,
                NSeq::Linear => p as u32,
                NSeq::DoubleIndex => 2 * (i as u32 + 1),
                NSeq::Explicit(v) => v[i],
            })
            .collect()
    }

    /// `(j, n_j, α_j, β_j)` for each retained prime.
    pub fn members(&self) -> Vec<(u64, u32, PiLinear, PiLinear)> {
        self.primes()
            .into_iter()
            .zip(self.exponents())
            .map(|(j, n)| {
                let inv = BigRational::new(BigInt::one(), BigInt::from(j));
                let alpha = PiLinear::pi_multiple(&inv + pow2(n as i64 + 1));
                let beta = PiLinear::pi_multiple(
                    &inv + pow2(n as i64) * BigRational::from_integer(3.into()),
                );
                (j, n, alpha, beta)
            })
            .collect()
    }

    /// Imaginary parts of all retained points.
    pub fn imaginary_parts(&self) -> Vec<PiLinear> {
        self.members()
            .into_iter()
            .flat_map(|(_, _, a, b)| [a, b])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Primitive {
    Point {
        #[serde(with = "crate::exactnum::ser_rat")]
        re: BigRational,
        im: PiLinear,
    },
    /// `re + i[im_lo, im_hi]`.
    VSegment {
        #[serde(with = "crate::exactnum::ser_rat")]
        re: BigRational,
        im_lo: PiLinear,
        im_hi: PiLinear,
    },
    /// `re + i(base + k·step)`, `k ∈ ℤ`.
    ILattice {
        #[serde(with = "crate::exactnum::ser_rat")]
        re: BigRational,
        base: PiLinear,
        step: PiLinear,
    },
    /// `re + iℝ`.
    VLine {
        #[serde(with = "crate::exactnum::ser_rat")]
        re: BigRational,
    },
    Rect {
        #[serde(with = "crate::exactnum::ser_rat")]
        re_lo: BigRational,
        #[serde(with = "crate::exactnum::ser_rat")]
        re_hi: BigRational,
        im_lo: PiLinear,
        im_hi: PiLinear,
    },
    PrimeFamily(PrimeFamily),
}

impl Primitive {
    pub fn validate(&self) -> Result<()> {
        let bad = |primitive, reason: &str| {
            Err(Error::InvalidPrimitive {
                primitive,
                reason: reason.to_string(),
            })
        };
        match self {
            Primitive::VSegment { im_lo, im_hi, .. } if im_lo > im_hi => {
                bad("vsegment", "im_lo > im_hi")
            }
            Primitive::ILattice { step, .. } if step <= &PiLinear::zero() => {
                bad("ilattice", "step must be positive")
            }
            Primitive::Rect { re_lo, re_hi, .. } if re_lo > re_hi => bad("rect", "re_lo > re_hi"),
            Primitive::Rect { im_lo, im_hi, .. } if im_lo > im_hi => bad("rect", "im_lo > im_hi"),
            Primitive::PrimeFamily(f) => f.validate(),
            _ => Ok(()),
        }
    }

    /// Range of real parts.
    pub fn re_range(&self) -> (BigRational, BigRational) {
        match self {
            Primitive::Point { re, .. }
            | Primitive::VSegment { re, .. }
            | Primitive::ILattice { re, .. }
            | Primitive::VLine { re } => (re.clone(), re.clone()),
            Primitive::Rect { re_lo, re_hi, .. } => (re_lo.clone(), re_hi.clone()),
            Primitive::PrimeFamily(_) => (BigRational::zero(), BigRational::zero()),
        }
    }

    /// `max |Im|` over the primitive, `None` when unbounded in the imaginary direction.
    pub fn im_bound(&self) -> Option<PiLinear> {
        match self {
            Primitive::Point { im, .. } => Some(im.abs()),
            Primitive::VSegment { im_lo, im_hi, .. } | Primitive::Rect { im_lo, im_hi, .. } => {
                Some(PiLinear::max_of(&im_lo.abs(), &im_hi.abs()))
            }
            Primitive::ILattice { .. } | Primitive::VLine { .. } => None,
            Primitive::PrimeFamily(f) => f.imaginary_parts().into_iter().map(|u| u.abs()).max(),
        }
    }

    /// True when the primitive is a bounded subset of ℂ.
    pub fn is_bounded(&self) -> bool {
        matches!(
            self,
            Primitive::Point { .. } | Primitive::VSegment { .. } | Primitive::Rect { .. }
        )
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = fmt_rational;
        match self {
            Primitive::Point { re, im } => write!(f, "point re={} im={}", r(re), im),
            Primitive::VSegment { re, im_lo, im_hi } => {
                write!(f, "vsegment re={} im=[{},{}]", r(re), im_lo, im_hi)
            }
            Primitive::ILattice { re, base, step } => {
                write!(f, "ilattice re={} base={} step={}", r(re), base, step)
            }
            Primitive::VLine { re } => write!(f, "vline re={}", r(re)),
            Primitive::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            } => {
                write!(
                    f,
                    "rect re=[{},{}] im=[{},{}]",
                    r(re_lo),
                    r(re_hi),
                    im_lo,
                    im_hi
                )
            }
            Primitive::PrimeFamily(p) => {
                write!(f, "primefamily nseq={} J={}", p.nseq.name(), p.truncation)
            }
        }
    }
}

/// A closed set `Z ⊂ ℂ` with bounded-above real parts, as a finite union.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpectrumSet {
    primitives: Vec<Primitive>,
}

/// Extremes of the real parts over `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// `None` stands for `−∞`; no primitive currently produces it.
    #[serde(serialize_with = "crate::exactnum::ser_rat::serialize_opt")]
    pub eta: Option<BigRational>,
    #[serde(with = "crate::exactnum::ser_rat")]
    pub zeta: BigRational,
}

impl SpectrumSet {
    pub fn new(primitives: Vec<Primitive>) -> Result<Self> {
        if primitives.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for p in &primitives {
            p.validate()?;
        }
        Ok(SpectrumSet { primitives })
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn prime_family(&self) -> Option<&PrimeFamily> {
        self.primitives.iter().find_map(|p| match p {
            Primitive::PrimeFamily(f) => Some(f),
            _ => None,
        })
    }

    /// True when every primitive is bounded, i.e. `Z` is compact.
    pub fn is_bounded(&self) -> bool {
        self.primitives.iter().all(Primitive::is_bounded)
    }

    pub fn eta_zeta(&self) -> Bounds {
        let mut ranges = self.primitives.iter().map(Primitive::re_range);
        let (mut lo, mut hi) = ranges.next().expect("nonempty by construction");
        for (a, b) in ranges {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        Bounds {
            eta: Some(lo),
            zeta: hi,
        }
    }

    /// `S_t = {u ∈ ℝ : t + iu ∈ Z}`.
    pub fn vertical_section(&self, t: &BigRational) -> SectionSet {
        let mut parts = Vec::new();
        for p in &self.primitives {
            match p {
                Primitive::Point { re, im } if re == t => {
                    parts.push(SectionPart::Point(im.clone()))
                }
                Primitive::VSegment { re, im_lo, im_hi } if re == t => {
                    parts.push(SectionPart::Interval {
                        lo: im_lo.clone(),
                        hi: im_hi.clone(),
                    })
                }
                Primitive::ILattice { re, base, step } if re == t => {
                    parts.push(SectionPart::Lattice {
                        base: base.clone(),
                        step: step.clone(),
                    })
                }
                Primitive::VLine { re } if re == t => parts.push(SectionPart::Line),
                Primitive::Rect {
                    re_lo,
                    re_hi,
                    im_lo,
                    im_hi,
                } if re_lo <= t && t <= re_hi => parts.push(SectionPart::Interval {
                    lo: im_lo.clone(),
                    hi: im_hi.clone(),
                }),
                Primitive::PrimeFamily(f) if t.is_zero() => {
                    parts.extend(f.imaginary_parts().into_iter().map(SectionPart::Point))
                }
                _ => {}
            }
        }
        SectionSet::new(parts)
    }
}

impl fmt::Display for SpectrumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.primitives.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    pub(crate) fn rectangle() -> SpectrumSet {
        SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(-1),
            re_hi: int(0),
            im_lo: pl("-pi"),
            im_hi: pl("pi"),
        }])
        .unwrap()
    }

    #[test]
    fn eta_zeta_examples() {
        let b = rectangle().eta_zeta();
        assert_eq!((b.eta.unwrap(), b.zeta), (int(-1), int(0)));
        let line = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        assert_eq!(line.eta_zeta().zeta, int(0));
        let lat = SpectrumSet::new(vec![Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("2*pi"),
        }])
        .unwrap();
        assert_eq!(lat.eta_zeta().eta, Some(int(0)));
        assert_eq!(SpectrumSet::new(vec![]), Err(Error::EmptySpectrum));
    }

    #[test]
    fn validation_rejects_reversed_bounds() {
        let r = SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(0),
            re_hi: int(-1),
            im_lo: pl("0"),
            im_hi: pl("1"),
        }]);
        assert!(
            matches!(r, Err(Error::InvalidPrimitive { reason, .. }) if reason == "re_lo > re_hi")
        );
        let l = Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("-pi"),
        };
        assert!(l.validate().is_err());
    }

    #[test]
    fn sections() {
        let r = rectangle();
        assert_eq!(
            r.vertical_section(&rat(-1, 2)).parts(),
            &[SectionPart::Interval {
                lo: pl("-pi"),
                hi: pl("pi")
            }]
        );
        assert!(r.vertical_section(&int(1)).is_empty());
    }

    #[test]
    fn prime_family_members() {
        let f = PrimeFamily::new(NSeq::Double, 3).unwrap();
        assert_eq!(f.primes(), vec![3, 5, 7]);
        assert_eq!(f.exponents(), vec![6, 10, 14]);
        let (_, _, a, b) = &f.members()[0];
        assert_eq!(a, &pl("1/3*pi + 128*pi"));
        assert_eq!(b, &pl("1/3*pi + 192*pi"));
        assert_eq!(odd_primes(8), vec![3, 5, 7, 11, 13, 17, 19, 23]);
        assert!(PrimeFamily::new(NSeq::Explicit(vec![3, 2]), 2).is_err());
    }
}
