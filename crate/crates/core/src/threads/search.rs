use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{LevelCache, Tail, Thread};
use crate::exactnum::{int, pow2, rat, rational_to_f64, two_adic, PiLinear};
use crate::exec::Exec;
use crate::levels::{dist_one_sq_f64, primitive_components, LevelPoint, FLOAT_SLACK};
use crate::spectrum::{Primitive, SpectrumSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchParams {
    /// Number of root-taking steps after the start level.
    pub depth: u32,
    #[serde(with = "crate::exactnum::ser_rat")]
    pub delta: BigRational,
    pub start_levels: Vec<u32>,
    /// Maximum DFS nodes per start candidate.
    pub node_budget: u64,
    pub exec: Exec,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            depth: 30,
            delta: rat(7, 5),
            start_levels: (1..=4).collect(),
            node_budget: 100_000,
            exec: Exec::default(),
        }
    }
}

/// Proof that a witness extends to a full thread staying `δ` away from `1`.
///
/// From `from_level` on, the circle carrying the endpoint is root-closed in
/// the level sets, and the root with `|θ| ∈ [5π/8, 3π/4]` keeps the angle in
/// the band `[π/2, 3π/4]`, where `|1 − z|² ≥ 1 + min(|z|², 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub from_level: u32,
    /// Index of the primitive whose level circles are root-closed.
    pub primitive: usize,
    /// Lower bound for `|1 − π_n(ξ)|²` at every later level.
    pub dist_sq_floor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub thread: Thread,
    #[serde(with = "crate::exactnum::ser_rat")]
    pub delta: BigRational,
    pub start_level: u32,
    pub end_level: u32,
    /// `min |1 − π_n(ξ)|` over the explicit levels.
    pub min_dist: f64,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum SearchOutcome {
    Found { witness: Witness, nodes: u64 },
    NotFound { nodes: u64, budget_exhausted: bool },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn certified(&self) -> Option<&Witness> {
        self.witness().filter(|w| w.certificate.is_some())
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. } | SearchOutcome::NotFound { nodes, .. } => *nodes,
        }
    }
}

/// Whether `|1 − p| ≥ δ`, exactly on the unit circle when `|θ| ≥ π/2`.
pub fn dist_at_least(p: &LevelPoint, delta_sq: &BigRational) -> bool {
    if !delta_sq.is_positive() {
        return true;
    }
    // |1 − z|² = 1 + r² − 2r·cos θ ≥ 1 + r² once cos θ ≤ 0.
    if p.angle.abs() >= PiLinear::pi().scale(&rat(1, 2))
        && !p.log_mod.is_negative()
        && delta_sq <= &int(2)
    {
        return true;
    }
    let v = dist_one_sq_f64(rational_to_f64(&p.log_mod), p.angle.to_f64());
    v * (1.0 - FLOAT_SLACK) >= rational_to_f64(delta_sq) * (1.0 + FLOAT_SLACK)
}

fn in_band(theta: &PiLinear) -> bool {
    let a = theta.abs();
    let pi = PiLinear::pi();
    a >= pi.scale(&rat(1, 2)) && a <= pi.scale(&rat(3, 4))
}

/// Index of a primitive whose circle through `p` is root-closed from `level`.
fn root_closed_primitive(z: &SpectrumSet, level: u32, p: &LevelPoint) -> Option<usize> {
    let s = pow2(-(level as i64));
    z.primitives().iter().position(|prim| match prim {
        Primitive::VLine { re } => re * &s == p.log_mod,
        Primitive::ILattice { re, step, .. } => {
            if re * &s != p.log_mod {
                return false;
            }
            if !step.q0().is_zero() {
                return true;
            }
            let half = step.q1() * rat(1, 2);
            level as u64 >= two_adic(half.numer())
                && primitive_components(prim, level)
                    .iter()
                    .any(|c| c.contains(p))
        }
        _ => false,
    })
}

fn certify(
    z: &SpectrumSet,
    level: u32,
    p: &LevelPoint,
    delta_sq: &BigRational,
) -> Option<Certificate> {
    if !in_band(&p.angle) {
        return None;
    }
    let primitive = root_closed_primitive(z, level, p)?;
    let m = rational_to_f64(&p.log_mod);
    let floor = 1.0 + (2.0 * m).exp().min(1.0);
    let exact = !p.log_mod.is_negative() && delta_sq <= &int(2);
    if !exact && rational_to_f64(delta_sq) * (1.0 + FLOAT_SLACK) > floor * (1.0 - FLOAT_SLACK) {
        return None;
    }
    Some(Certificate {
        from_level: level,
        primitive,
        dist_sq_floor: floor,
    })
}

struct Dfs<'a> {
    z: &'a SpectrumSet,
    cache: &'a LevelCache,
    delta_sq: &'a BigRational,
    end: u32,
    budget: u64,
    nodes: u64,
    path: Vec<bool>,
    first: Option<(Vec<bool>, LevelPoint)>,
}

impl Dfs<'_> {
    /// Returns a certified endpoint; remembers the first uncertified one.
    fn run(&mut self, level: u32, p: &LevelPoint) -> Option<(LevelPoint, Certificate)> {
        self.nodes += 1;
        if level == self.end {
            if let Some(c) = certify(self.z, level, p, self.delta_sq) {
                return Some((p.clone(), c));
            }
            if self.first.is_none() {
                self.first = Some((self.path.clone(), p.clone()));
            }
            return None;
        }
        let next = self.cache.get(level + 1);
        let mut kids: Vec<(bool, LevelPoint)> = [false, true]
            .into_iter()
            .map(|b| (b, p.sqrt(b)))
            .filter(|(_, q)| next.contains(q) && dist_at_least(q, self.delta_sq))
            .collect();
        // Stable sort keeps the principal root first on ties.
        kids.sort_by_key(|k| std::cmp::Reverse(k.1.angle.abs()));
        for (b, q) in kids {
            if self.nodes >= self.budget {
                return None;
            }
            self.path.push(b);
            if let Some(found) = self.run(level + 1, &q) {
                return Some(found);
            }
            self.path.pop();
        }
        None
    }
}

struct Attempt {
    certified: Option<(Vec<bool>, Certificate)>,
    uncertified: Option<Vec<bool>>,
    nodes: u64,
    exhausted: bool,
}

/// Depth-first search for a branch path from `start` that stays `δ` away from `1`.
fn attempt(
    z: &SpectrumSet,
    cache: &LevelCache,
    start_level: u32,
    start: &LevelPoint,
    end: u32,
    delta_sq: &BigRational,
    budget: u64,
) -> Attempt {
    let mut dfs = Dfs {
        z,
        cache,
        delta_sq,
        end,
        budget,
        nodes: 0,
        path: Vec::new(),
        first: None,
    };
    let found = dfs.run(start_level, start);
    Attempt {
        certified: found.map(|(_, c)| (dfs.path.clone(), c)),
        uncertified: dfs.first.map(|(b, _)| b),
        nodes: dfs.nodes,
        exhausted: dfs.nodes >= budget,
    }
}

/// Points of `X_s` tried as thread bases, best candidates first.
pub(crate) fn start_candidates(
    cache: &LevelCache,
    level: u32,
    delta_sq: &BigRational,
) -> Vec<LevelPoint> {
    let pi = PiLinear::pi();
    let fixed: Vec<PiLinear> = [(1, 1), (2, 3), (-2, 3), (3, 4), (-3, 4), (1, 2), (-1, 2)]
        .iter()
        .map(|&(a, b)| pi.scale(&rat(a, b)))
        .collect();
    let mut out: Vec<LevelPoint> = Vec::new();
    for c in &cache.get(level).components {
        let mut angles = Vec::new();
        if let Some(t) = c.angles.farthest_from_zero() {
            angles.push(t);
        }
        angles.extend(fixed.iter().filter(|t| c.angles.contains(t)).cloned());
        let mut mods = vec![c.log_hi.clone(), c.log_lo.clone()];
        if c.log_lo.is_negative() && c.log_hi.is_positive() {
            mods.push(BigRational::zero());
        }
        for t in &angles {
            for m in &mods {
                let p = LevelPoint::new(m.clone(), t.clone());
                if dist_at_least(&p, delta_sq) && !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// DFS from a given base; returns the first explicit path found, certified or not.
pub fn search_thread(
    z: &SpectrumSet,
    start_level: u32,
    start: &LevelPoint,
    depth: u32,
    delta: &BigRational,
    node_budget: u64,
) -> Option<Witness> {
    let end = start_level + depth;
    let cache = LevelCache::new(z, end);
    if !cache.get(start_level).contains(start) {
        return None;
    }
    let delta_sq = delta * delta;
    let a = attempt(z, &cache, start_level, start, end, &delta_sq, node_budget);
    witness_from(&cache, start_level, start, end, delta, a)
}

fn witness_from(
    cache: &LevelCache,
    start_level: u32,
    start: &LevelPoint,
    end: u32,
    delta: &BigRational,
    a: Attempt,
) -> Option<Witness> {
    let (bits, certificate) = match (a.certified, a.uncertified) {
        (Some((b, c)), _) => (b, Some(c)),
        (None, Some(b)) => (b, None),
        (None, None) => return None,
    };
    let thread = Thread::new(start_level, start.clone(), bits, Tail::Finite);
    let min_dist = (start_level..=end)
        .map(|n| {
            let p = thread.point_at(n).expect("within depth");
            debug_assert!(cache.get(n).contains(&p));
            dist_one_sq_f64(rational_to_f64(&p.log_mod), p.angle.to_f64()).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    Some(Witness {
        thread,
        delta: delta.clone(),
        start_level,
        end_level: end,
        min_dist,
        certificate,
    })
}

/// Search for a thread with `|1 − π_n(ξ)| ≥ δ` at every level from its base.
///
/// Certified witnesses are preferred; an uncertified one is only reported
/// when no start candidate yields a certificate.
pub fn adversarial_search(z: &SpectrumSet, params: &SearchParams) -> SearchOutcome {
    let top = params.start_levels.iter().max().copied().unwrap_or(0) + params.depth;
    let cache = LevelCache::new(z, top);
    let delta_sq = &params.delta * &params.delta;
    let tasks: Vec<(u32, LevelPoint)> = params
        .start_levels
        .iter()
        .flat_map(|&s| {
            start_candidates(&cache, s, &delta_sq)
                .into_iter()
                .map(move |p| (s, p))
        })
        .collect();
    let attempts = params.exec.map(&tasks, |(s, p)| {
        attempt(
            z,
            &cache,
            *s,
            p,
            s + params.depth,
            &delta_sq,
            params.node_budget,
        )
    });
    let nodes = attempts.iter().map(|a| a.nodes).sum();
    let exhausted = attempts.iter().any(|a| a.exhausted);
    let pick = attempts
        .iter()
        .position(|a| a.certified.is_some())
        .or_else(|| attempts.iter().position(|a| a.uncertified.is_some()));
    let Some(i) = pick else {
        return SearchOutcome::NotFound {
            nodes,
            budget_exhausted: exhausted,
        };
    };
    let (s, p) = &tasks[i];
    let a = attempts.into_iter().nth(i).expect("index in range");
    let witness = witness_from(&cache, *s, p, s + params.depth, &params.delta, a)
        .expect("picked attempt has a path");
    SearchOutcome::Found { witness, nodes }
}
