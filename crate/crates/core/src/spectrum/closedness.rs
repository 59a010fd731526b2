use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{Primitive, SpectrumSet};
use crate::exactnum::{pow2, rat, PiLinear};
use crate::levels::{primitive_components, Component, LevelPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum H1Verdict {
    Closed,
    /// `witness` is a limit point of `exp(2⁻ⁿZ)` outside it.
    NotClosed {
        witness: LevelPoint,
    },
    Unknown,
}

/// Closedness of `exp(2⁻ⁿZ)`.
///
/// Bounded primitives and vertical lines have closed images. A lattice whose
/// step is not a rational multiple of `π` has a dense angle orbit, and the
/// prime family accumulates at `1`; either is reported with a missing limit
/// point unless the rest of `Z` covers it.
pub fn h1_check(z: &SpectrumSet, n: u32) -> H1Verdict {
    let prims = z.primitives();
    let covered_by_others = |skip: usize, p: &LevelPoint| {
        prims
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .flat_map(|(_, q)| image_components(q, n))
            .any(|c| c.contains(p))
    };
    let mut unknown = false;
    for (i, p) in prims.iter().enumerate() {
        match p {
            Primitive::ILattice { re, base, step } if !step.is_pi_multiple() => {
                let s = pow2(-(n as i64));
                let m = re * &s;
                let circle_covered =
                    prims
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .any(|(_, q)| {
                            image_components(q, n)
                                .iter()
                                .any(|c| c.angles.is_full() && c.log_lo <= m && m <= c.log_hi)
                        });
                if circle_covered {
                    continue;
                }
                // base·2⁻ⁿ + rπ is not in the orbit unless r is an even integer.
                let found = [
                    rat(1, 1),
                    rat(1, 2),
                    rat(3, 2),
                    rat(1, 3),
                    rat(5, 3),
                    rat(1, 5),
                    rat(7, 5),
                ]
                .into_iter()
                .map(|r| LevelPoint::new(m.clone(), base.scale(&s) + PiLinear::pi_multiple(r)))
                .find(|w| !covered_by_others(i, w));
                match found {
                    Some(witness) => return H1Verdict::NotClosed { witness },
                    None => unknown = true,
                }
            }
            Primitive::PrimeFamily(_) => {
                let w = LevelPoint::one();
                let hit = image_components(p, n).iter().any(|c| c.contains(&w));
                if !hit && !covered_by_others(i, &w) {
                    return H1Verdict::NotClosed { witness: w };
                }
            }
            _ => {}
        }
    }
    if unknown {
        H1Verdict::Unknown
    } else {
        H1Verdict::Closed
    }
}

/// Components of `exp(2⁻ⁿP)` itself (without closure points).
fn image_components(p: &Primitive, n: u32) -> Vec<Component> {
    match p {
        Primitive::PrimeFamily(f) => f
            .imaginary_parts()
            .iter()
            .map(|im| Component::point(&LevelPoint::exp_scaled(&BigRational::zero(), im, n)))
            .collect(),
        // The dense orbit itself is not closed; its points never equal the
        // witnesses, so its closure is not counted as coverage.
        Primitive::ILattice { step, .. } if !step.is_pi_multiple() => Vec::new(),
        _ => primitive_components(p, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::spectrum::{NSeq, PrimeFamily};

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let rect = SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(-1),
            re_hi: int(0),
            im_lo: pl("-pi"),
            im_hi: pl("pi"),
        }])
        .unwrap();
        assert_eq!(h1_check(&rect, 5), H1Verdict::Closed);
        let roots = SpectrumSet::new(vec![Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("2*pi"),
        }])
        .unwrap();
        assert_eq!(h1_check(&roots, 3), H1Verdict::Closed);
        let fam = SpectrumSet::new(vec![Primitive::PrimeFamily(
            PrimeFamily::new(NSeq::Double, 8).unwrap(),
        )])
        .unwrap();
        assert_eq!(
            h1_check(&fam, 4),
            H1Verdict::NotClosed {
                witness: LevelPoint::one()
            }
        );
        let with_one = SpectrumSet::new(vec![
            Primitive::PrimeFamily(PrimeFamily::new(NSeq::Double, 2).unwrap()),
            Primitive::Point {
                re: int(0),
                im: pl("0"),
            },
        ])
        .unwrap();
        assert_eq!(h1_check(&with_one, 4), H1Verdict::Closed);
    }

    #[test]
    fn dense_lattice_is_not_closed() {
        let z = SpectrumSet::new(vec![Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("1"),
        }])
        .unwrap();
        assert!(matches!(h1_check(&z, 0), H1Verdict::NotClosed { .. }));
        let covered = SpectrumSet::new(vec![
            Primitive::ILattice {
                re: int(0),
                base: pl("0"),
                step: pl("1"),
            },
            Primitive::VLine { re: int(0) },
        ])
        .unwrap();
        assert_eq!(h1_check(&covered, 0), H1Verdict::Closed);
    }
}
