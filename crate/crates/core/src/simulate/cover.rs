use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::exactnum::{rational_to_f64, PiLinear};
use crate::levels::{
    dist_one_sq_f64, eventual_image, sup_dist_one, AngleSet, Arc, Arcs, Component,
};
use crate::spectrum::SpectrumSet;
use crate::threads::{start_candidates, LevelCache, Tail, Thread};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverParams {
    #[serde(with = "crate::exactnum::ser_rat")]
    pub epsilon: BigRational,
    /// First index allowed in the cover.
    pub n0: usize,
    /// Last index considered.
    pub search_bound: usize,
    /// Extra levels for eventual images.
    pub k: u32,
    /// Largest cover size tried.
    pub max_size: usize,
    /// Bisection depth for multi-index covers.
    pub subdivision: u32,
}

impl CoverParams {
    pub fn new(epsilon: BigRational) -> Self {
        CoverParams {
            epsilon,
            n0: 1,
            search_bound: 40,
            k: 2,
            max_size: 3,
            subdivision: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CoverOutcome {
    /// `min_i |1 − π_(L_i)(ξ)^(S_i)| < ε` for every `ξ`.
    Found {
        indices: Vec<usize>,
        /// Upper bound of the sup for single-index covers.
        sup: Option<f64>,
    },
    /// `ξ` with `|1 − π_(L_n)(ξ)^(S_n)| ≥ ε` for every index in range.
    Refuted {
        thread: Thread,
        indices_checked: (usize, usize),
    },
    Exhausted,
}

/// Indices searched for covers of size at least two.
const MULTI_WINDOW: usize = 12;

fn exponent(l_top: u32, l: u32, s: u64) -> BigInt {
    BigInt::from(s) << (l_top - l) as usize
}

/// Upper bound for `sup |1 − z^e|` over a component.
fn sup_power(c: &Component, e: &BigInt) -> f64 {
    sup_dist_one(&[c.power(e)]).map_or(0.0, |s| s.hi)
}

fn halves(c: &Component) -> Vec<Component> {
    let mut out = Vec::new();
    let angle_pieces: Vec<AngleSet> = match &c.angles.arcs {
        Arcs::Full => {
            let pi = PiLinear::pi();
            vec![
                AngleSet::arc(-pi.clone(), pi.clone()),
                AngleSet::arc(PiLinear::zero(), pi),
            ]
        }
        Arcs::List(l) => l
            .iter()
            .flat_map(|a: &Arc| {
                if a.width.is_zero() {
                    vec![AngleSet::arc(a.start.clone(), a.width.clone())]
                } else {
                    let h = a.width.scale(&crate::exactnum::rat(1, 2));
                    vec![
                        AngleSet::arc(a.start.clone(), h.clone()),
                        AngleSet::arc(&a.start + &h, h),
                    ]
                }
            })
            .collect(),
    };
    let mods = if c.log_lo == c.log_hi {
        vec![(c.log_lo.clone(), c.log_hi.clone())]
    } else {
        let mid = (&c.log_lo + &c.log_hi) / BigRational::from_integer(2.into());
        vec![(c.log_lo.clone(), mid.clone()), (mid, c.log_hi.clone())]
    };
    for a in &angle_pieces {
        let angles = match &c.angles.coset {
            Some(k) => AngleSet::coset(k.clone()).intersect(a),
            None => a.clone(),
        };
        for (lo, hi) in &mods {
            let piece = Component {
                log_lo: lo.clone(),
                log_hi: hi.clone(),
                angles: angles.clone(),
            };
            if !piece.is_empty() {
                out.push(piece);
            }
        }
    }
    out
}

fn covered(c: &Component, exps: &[BigInt], eps: f64, depth: u32) -> bool {
    if exps.iter().any(|e| sup_power(c, e) < eps) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let parts = halves(c);
    if parts.len() == 1 && parts[0] == *c {
        return false;
    }
    parts.iter().all(|p| covered(p, exps, eps, depth - 1))
}

/// Thread whose values at the levels `L_n` stay `ε` away from `1` after powering.
fn refute(
    z: &SpectrumSet,
    l_seq: &[u32],
    s_seq: &[u64],
    range: (usize, usize),
    eps_sq: &BigRational,
) -> Option<Thread> {
    let (lo, hi) = range;
    let l_min = l_seq[lo..=hi].iter().copied().min()?;
    let l_max = l_seq[lo..=hi].iter().copied().max()?;
    let cache = LevelCache::new(z, l_max);
    let eps = rational_to_f64(eps_sq);
    let far = |p: &crate::levels::LevelPoint, level: u32| {
        (lo..=hi).filter(|&i| l_seq[i] == level).all(|i| {
            let w = p.pow(&BigInt::from(s_seq[i]));
            dist_one_sq_f64(rational_to_f64(&w.log_mod), w.angle.to_f64()) * (1.0 - 1e-12) >= eps
        })
    };
    fn dfs(
        cache: &LevelCache,
        far: &dyn Fn(&crate::levels::LevelPoint, u32) -> bool,
        level: u32,
        top: u32,
        p: &crate::levels::LevelPoint,
        path: &mut Vec<bool>,
        budget: &mut u64,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if !far(p, level) {
            return false;
        }
        if level == top {
            return true;
        }
        for b in [false, true] {
            let q = p.sqrt(b);
            if cache.get(level + 1).contains(&q) {
                path.push(b);
                if dfs(cache, far, level + 1, top, &q, path, budget) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut budget = 200_000u64;
    for start in start_candidates(&cache, l_min, &BigRational::from_integer(0.into())) {
        let mut path = Vec::new();
        if dfs(&cache, &far, l_min, l_max, &start, &mut path, &mut budget) {
            return Some(Thread::new(l_min, start, path, Tail::Finite));
        }
    }
    None
}

/// Finite index sets `n₁ < … < n_k` with `min_i |1 − π_(L_(n_i))(ξ)^(S_(n_i))| < ε` on `X`.
///
/// Single indices are decided by the exact sup over the eventual image.
/// Larger covers are checked on bisected cells of the top level set, which
/// contains every `π_(L_top)(ξ)`.
pub fn quasi_uniform_cover(
    z: &SpectrumSet,
    l_seq: &[u32],
    s_seq: &[u64],
    params: &CoverParams,
) -> CoverOutcome {
    let hi = params
        .search_bound
        .min(l_seq.len().min(s_seq.len()).saturating_sub(1));
    let lo = params.n0;
    if lo > hi {
        return CoverOutcome::Exhausted;
    }
    let eps = rational_to_f64(&params.epsilon);
    for i in lo..=hi {
        let img = eventual_image(z, l_seq[i], params.k);
        let e = BigInt::from(s_seq[i]);
        let sup = img
            .components
            .iter()
            .map(|c| sup_power(c, &e))
            .fold(0.0, f64::max);
        if sup < eps * (1.0 - 1e-12) {
            return CoverOutcome::Found {
                indices: vec![i],
                sup: Some(sup),
            };
        }
    }
    let eps_sq = &params.epsilon * &params.epsilon;
    if let Some(thread) = refute(z, l_seq, s_seq, (lo, hi), &eps_sq) {
        return CoverOutcome::Refuted {
            thread,
            indices_checked: (lo, hi),
        };
    }
    let idx: Vec<usize> = (lo..=hi.min(lo + MULTI_WINDOW - 1)).collect();
    for size in 2..=params.max_size {
        for combo in combinations(&idx, size) {
            let top = combo.iter().map(|&i| l_seq[i]).max().expect("nonempty");
            let exps: Vec<BigInt> = combo
                .iter()
                .map(|&i| exponent(top, l_seq[i], s_seq[i]))
                .collect();
            let img = eventual_image(z, top, params.k);
            if img
                .components
                .iter()
                .all(|c| covered(c, &exps, eps * (1.0 - 1e-12), params.subdivision))
            {
                return CoverOutcome::Found {
                    indices: combo,
                    sup: None,
                };
            }
        }
    }
    CoverOutcome::Exhausted
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::spectrum::Primitive;

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    fn seqs() -> (Vec<u32>, Vec<u64>) {
        ((0..=40).collect(), vec![1; 41])
    }

    #[test]
    fn rectangle_single_index() {
        let z = SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(-1),
            re_hi: int(0),
            im_lo: pl("-pi"),
            im_hi: pl("pi"),
        }])
        .unwrap();
        let (l, s) = seqs();
        for eps in [rat(1, 10), rat(1, 100), rat(1, 1000)] {
            match quasi_uniform_cover(&z, &l, &s, &CoverParams::new(eps.clone())) {
                CoverOutcome::Found { indices, sup } => {
                    assert_eq!(indices.len(), 1);
                    assert!(sup.unwrap() < rational_to_f64(&eps));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn line_and_roots_are_refuted() {
        let (l, s) = seqs();
        let line = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        let roots = SpectrumSet::new(vec![Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("2*pi"),
        }])
        .unwrap();
        for z in [line, roots] {
            let mut p = CoverParams::new(rat(1, 2));
            p.search_bound = 20;
            assert!(matches!(
                quasi_uniform_cover(&z, &l, &s, &p),
                CoverOutcome::Refuted { .. }
            ));
        }
    }

    #[test]
    fn pair_cover_when_no_single_index_works() {
        // z² kills −1 and z³ kills e^(2πi/3); neither exponent alone does.
        let z = SpectrumSet::new(vec![
            Primitive::Point {
                re: int(0),
                im: pl("pi"),
            },
            Primitive::Point {
                re: int(0),
                im: pl("2/3*pi"),
            },
        ])
        .unwrap();
        let mut p = CoverParams::new(rat(1, 10));
        p.n0 = 0;
        assert_eq!(
            quasi_uniform_cover(&z, &[0, 0], &[2, 3], &p),
            CoverOutcome::Found {
                indices: vec![0, 1],
                sup: None
            }
        );
    }
}
