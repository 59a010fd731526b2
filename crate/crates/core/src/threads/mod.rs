//! Points of the inverse limit encoded by a base point and square-root branches.

mod rate;
mod search;

pub(crate) use search::start_candidates;

pub use rate::{rate_constant, rows_csv, thread_rows, RateReport, RateRow};
pub use search::{
    adversarial_search, dist_at_least, search_thread, Certificate, SearchOutcome, SearchParams,
    Witness,
};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::levels::{level_set, LevelPoint, LevelSet};
use crate::spectrum::SpectrumSet;

/// Branch rule after the explicit bits run out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// Principal square roots forever.
    Principal,
    /// Nothing is represented past the last bit.
    Finite,
}

/// `ξ` with `π_(n₀)(ξ) = base` and `π_(n+1)(ξ)` the root selected by `bits`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Thread {
    pub base_level: u32,
    pub base: LevelPoint,
    /// `bits[i]` is `ε_(n₀+i+1)`; `true` takes the negated root.
    pub bits: Vec<bool>,
    pub tail: Tail,
}

impl Thread {
    pub fn new(base_level: u32, base: LevelPoint, bits: Vec<bool>, tail: Tail) -> Self {
        Thread {
            base_level,
            base,
            bits,
            tail,
        }
    }

    pub fn principal(base_level: u32, base: LevelPoint) -> Self {
        Thread::new(base_level, base, Vec::new(), Tail::Principal)
    }

    /// Last represented level, `None` when unbounded.
    pub fn depth(&self) -> Option<u32> {
        match self.tail {
            Tail::Principal => None,
            Tail::Finite => Some(self.base_level + self.bits.len() as u32),
        }
    }

    /// Level after which every branch is principal.
    pub fn principal_from(&self) -> Option<u32> {
        (self.tail == Tail::Principal).then(|| {
            let last = self.bits.iter().rposition(|&b| b).map_or(0, |i| i + 1);
            self.base_level + last as u32
        })
    }

    /// `π_n(ξ)` without membership checks.
    pub fn point_at(&self, n: u32) -> Result<LevelPoint> {
        if n < self.base_level {
            return Err(Error::BelowBase {
                requested: n,
                base: self.base_level,
            });
        }
        if let Some(d) = self.depth() {
            if n > d {
                return Err(Error::DepthExceeded {
                    requested: n,
                    depth: d,
                });
            }
        }
        let steps = (n - self.base_level) as usize;
        let mut p = self.base.clone();
        for &b in self.bits.iter().take(steps) {
            p = p.sqrt(b);
        }
        if steps > self.bits.len() {
            // Principal roots halve the reduced angle and the log-modulus.
            let k = (steps - self.bits.len()) as i64;
            let s = crate::exactnum::pow2(-k);
            p = LevelPoint::new(&p.log_mod * &s, p.angle.scale(&s));
        }
        Ok(p)
    }

    /// Points at levels `from..=to`.
    pub fn points(&self, from: u32, to: u32) -> Result<Vec<LevelPoint>> {
        (from..=to).map(|n| self.point_at(n)).collect()
    }

    pub fn with_bit(&self, bit: bool) -> Thread {
        let mut t = self.clone();
        t.bits.push(bit);
        t
    }
}

impl fmt::Display for Thread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        let tail = match self.tail {
            Tail::Principal => "0...",
            Tail::Finite => "",
        };
        write!(
            f,
            "level {} base {} bits {}{}",
            self.base_level, self.base, bits, tail
        )
    }
}

/// Level sets `X_0 … X_max`, built once.
pub struct LevelCache {
    levels: Vec<LevelSet>,
}

impl LevelCache {
    pub fn new(z: &SpectrumSet, max: u32) -> Self {
        LevelCache {
            levels: (0..=max).map(|n| level_set(z, n)).collect(),
        }
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn get(&self, n: u32) -> &LevelSet {
        &self.levels[n as usize]
    }
}

/// `π_n(ξ)`, checking membership in every level from the base up to `n`.
pub fn evaluate(z: &SpectrumSet, th: &Thread, n: u32) -> Result<LevelPoint> {
    let pts = th.points(th.base_level, n)?;
    for (i, p) in pts.iter().enumerate() {
        let level = th.base_level + i as u32;
        if !level_set(z, level).contains(p) {
            return Err(Error::InfeasibleThread {
                level,
                point: p.to_string(),
            });
        }
    }
    Ok(pts.into_iter().last().expect("at least the base level"))
}

/// Branches `ε` whose root of `p` lies in `X_(n+1)`.
pub fn feasible_branches(z: &SpectrumSet, n: u32, p: &LevelPoint) -> Result<Vec<bool>> {
    if !level_set(z, n).contains(p) {
        return Err(Error::NotInLevelSet {
            level: n,
            point: p.to_string(),
        });
    }
    let next = level_set(z, n + 1);
    Ok([false, true]
        .into_iter()
        .filter(|&b| next.contains(&p.sqrt(b)))
        .collect())
}
