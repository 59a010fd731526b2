//! Finite diagonal model of the semigroup over a few points of the inverse limit.

mod cover;
mod residual;

pub use cover::{quasi_uniform_cover, CoverOutcome, CoverParams};
pub use residual::{joint_spectrum_residual, sample_spectrum, ResidualReport};

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{pow2, rational_to_f64};
use crate::levels::{dist_one_sq_f64, LevelPoint};
use crate::spectrum::SpectrumSet;
use crate::threads::{evaluate, start_candidates, LevelCache, Thread};

/// `k / 2^m`, stored with `k` odd unless `m = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicTime {
    k: u64,
    m: u32,
}

impl DyadicTime {
    pub fn new(k: u64, m: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "dyadic time must be positive".into(),
            ));
        }
        if m > 63 {
            return Err(Error::InvalidParameter(format!("exponent {m} exceeds 63")));
        }
        let tz = k.trailing_zeros().min(m);
        Ok(DyadicTime {
            k: k >> tz,
            m: m - tz,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn value(&self) -> BigRational {
        BigRational::from_integer(self.k.into()) * pow2(-(self.m as i64))
    }

    pub fn checked_add(&self, other: &DyadicTime) -> Option<DyadicTime> {
        let m = self.m.max(other.m);
        let a = self.k.checked_shl(m - self.m)?;
        let b = other.k.checked_shl(m - other.m)?;
        DyadicTime::new(a.checked_add(b)?, m).ok()
    }
}

impl fmt::Display for DyadicTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "{}", self.k)
        } else {
            write!(f, "{}/{}", self.k, 1u64 << self.m)
        }
    }
}

impl std::str::FromStr for DyadicTime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("not a dyadic time: {s}"));
        let (k, d) = match s.trim().split_once('/') {
            Some((k, d)) => (k.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let k: u64 = k.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        if !d.is_power_of_two() {
            return Err(bad());
        }
        DyadicTime::new(k, d.trailing_zeros())
    }
}

/// `t = Σ 2^(−ℓᵢ) = 2^(−L)·S` with `ℓ₁ < … < ℓ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// `ℓ₁`; nonpositive when `t ≥ 1`.
    pub f: i64,
    pub l: u32,
    pub s: u64,
    pub exponents: Vec<i64>,
}

pub fn dyadic_decompose(t: &DyadicTime, cap: u64) -> Result<Decomposition> {
    if t.value() >= BigRational::from_integer(cap.into()) {
        return Err(Error::TimeCap {
            t: t.to_string(),
            cap,
        });
    }
    let m = t.m as i64;
    let mut exponents: Vec<i64> = (0..64)
        .filter(|b| t.k >> b & 1 == 1)
        .map(|b| m - b as i64)
        .collect();
    exponents.sort_unstable();
    Ok(Decomposition {
        f: exponents[0],
        l: t.m,
        s: t.k,
        exponents,
    })
}

/// `π_n(ξ)` for any `n ≥ 0`, squaring down below the base level.
fn thread_point(th: &Thread, n: u32) -> Result<LevelPoint> {
    if n >= th.base_level {
        return th.point_at(n);
    }
    Ok(th
        .base
        .pow(&(BigInt::from(1) << (th.base_level - n) as usize)))
}

/// `⊕ π(ξ_k) I_d` on `K` blocks of dimension `d`.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalModel {
    pub spectrum: SpectrumSet,
    pub threads: Vec<Thread>,
    pub block_dim: usize,
    pub level_cap: u32,
}

impl DiagonalModel {
    pub fn new(
        spectrum: SpectrumSet,
        threads: Vec<Thread>,
        block_dim: usize,
        level_cap: u32,
    ) -> Result<Self> {
        if threads.is_empty() {
            return Err(Error::InvalidParameter(
                "a model needs at least one thread".into(),
            ));
        }
        if block_dim == 0 {
            return Err(Error::InvalidParameter(
                "block dimension must be positive".into(),
            ));
        }
        for th in &threads {
            evaluate(&spectrum, th, level_cap)?;
        }
        Ok(DiagonalModel {
            spectrum,
            threads,
            block_dim,
            level_cap,
        })
    }

    /// Exact `π_L(ξ_k)^S` for each block.
    pub fn factors(&self, t: &DyadicTime) -> Result<Vec<LevelPoint>> {
        let d = dyadic_decompose(t, u64::MAX)?;
        if d.l > self.level_cap {
            return Err(Error::LevelCap {
                level: d.l,
                cap: self.level_cap,
            });
        }
        let s = BigInt::from(d.s);
        self.threads
            .iter()
            .map(|th| Ok(thread_point(th, d.l)?.pow(&s)))
            .collect()
    }

    pub fn apply(&self, t: &DyadicTime, v: &TestVector) -> Result<TestVector> {
        if v.blocks.len() != self.threads.len() {
            return Err(Error::InvalidParameter(format!(
                "vector has {} blocks, model has {}",
                v.blocks.len(),
                self.threads.len()
            )));
        }
        let factors = self.factors(t)?;
        let blocks = v
            .blocks
            .iter()
            .zip(&factors)
            .map(|(b, f)| {
                let c = f.to_complex();
                b.iter().map(|x| x * c).collect()
            })
            .collect();
        Ok(TestVector { blocks })
    }

    /// `max_k |π_n(ξ_k)| ≤ e^(2⁻ⁿζ)`, decided on log-moduli.
    pub fn norm_bound_check(&self, n: u32) -> Result<NormCheck> {
        if n > self.level_cap {
            return Err(Error::LevelCap {
                level: n,
                cap: self.level_cap,
            });
        }
        let bound = &self.spectrum.eta_zeta().zeta * pow2(-(n as i64));
        let mut max_log = None::<BigRational>;
        for th in &self.threads {
            let p = thread_point(th, n)?;
            if max_log.as_ref().is_none_or(|m| &p.log_mod > m) {
                max_log = Some(p.log_mod);
            }
        }
        let max_log = max_log.expect("model has threads");
        Ok(NormCheck {
            holds: max_log <= bound,
            max_modulus: rational_to_f64(&max_log).exp(),
            bound: rational_to_f64(&bound).exp(),
        })
    }

    /// `(t, block, |1 − π_L(ξ_k)^S|)` rows.
    pub fn trace(&self, times: &[DyadicTime]) -> Result<Vec<TraceRow>> {
        let mut rows = Vec::new();
        for t in times {
            for (block, f) in self.factors(t)?.iter().enumerate() {
                let dist = dist_one_sq_f64(rational_to_f64(&f.log_mod), f.angle.to_f64()).sqrt();
                rows.push(TraceRow { t: *t, block, dist });
            }
        }
        Ok(rows)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormCheck {
    pub holds: bool,
    pub max_modulus: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: DyadicTime,
    pub block: usize,
    pub dist: f64,
}

pub fn trace_csv(rows: &[TraceRow], digits: usize) -> String {
    let mut s = String::from("t,block,dist\n");
    for r in rows {
        s.push_str(&format!("{},{},{:.*e}\n", r.t, r.block, digits, r.dist));
    }
    s
}

/// Up to `count` threads from level 0, extended to `level_cap` by taking
/// the principal root when it is feasible and the other root otherwise.
pub fn sample_threads(z: &SpectrumSet, count: usize, level_cap: u32) -> Vec<Thread> {
    let cache = LevelCache::new(z, level_cap);
    let mut out = Vec::new();
    'starts: for p in start_candidates(&cache, 0, &BigRational::zero()) {
        if out.len() == count {
            break;
        }
        let mut bits = Vec::new();
        let mut q = p.clone();
        for n in 0..level_cap {
            let next = cache.get(n + 1);
            match [false, true]
                .into_iter()
                .find(|&b| next.contains(&q.sqrt(b)))
            {
                Some(b) => {
                    bits.push(b);
                    q = q.sqrt(b);
                }
                None => continue 'starts,
            }
        }
        out.push(Thread::new(0, p, bits, crate::threads::Tail::Finite));
    }
    out
}

/// A vector of `⊕ℋ_k` truncated to `K` blocks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestVector {
    pub blocks: Vec<Vec<Complex64>>,
}

impl TestVector {
    pub fn weights(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|x| x.norm_sqr()).sum())
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.weights().iter().sum::<f64>().sqrt()
    }
}
