//! Inverse limits and `lim¹` for towers `ℤ^r ← ℤ^r ← …` with diagonal maps.
//!
//! For towers of countable abelian groups `lim¹` vanishes exactly when the
//! Mittag-Leffler condition holds; that standard fact is used, not proved.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "entries", rename_all = "lowercase")]
pub enum TowerMaps {
    /// Every map is `diag(d₁, …, d_r)`.
    Constant(Vec<i64>),
    /// The maps cycle through the listed diagonals.
    Periodic(Vec<Vec<i64>>),
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tower {
    pub rank: usize,
    pub maps: TowerMaps,
}

impl Tower {
    pub fn new(maps: TowerMaps) -> Result<Self> {
        let rank = match &maps {
            TowerMaps::Constant(d) => d.len(),
            TowerMaps::Periodic(p) => {
                let first = p
                    .first()
                    .ok_or_else(|| Error::InvalidTower("empty period".into()))?;
                if let Some(i) = p.iter().position(|d| d.len() != first.len()) {
                    return Err(Error::InvalidTower(format!(
                        "diagonal {i} has length {}, expected {}",
                        p[i].len(),
                        first.len()
                    )));
                }
                first.len()
            }
            TowerMaps::Zero => 0,
        };
        Ok(Tower { rank, maps })
    }

    /// Periodic maps given as full matrices; only diagonal ones are accepted.
    pub fn from_matrices(period: &[Vec<Vec<i64>>]) -> Result<Self> {
        let diagonals = period
            .iter()
            .enumerate()
            .map(|(index, m)| {
                let r = m.len();
                let square = m.iter().all(|row| row.len() == r);
                if !square {
                    return Err(Error::InvalidTower(format!("map {index} is not square")));
                }
                let off_diagonal = (0..r).any(|i| (0..r).any(|j| i != j && m[i][j] != 0));
                if off_diagonal {
                    return Err(Error::NonDiagonal { index });
                }
                Ok((0..r).map(|i| m[i][i]).collect())
            })
            .collect::<Result<Vec<Vec<i64>>>>()?;
        Tower::new(TowerMaps::Periodic(diagonals))
    }

    /// Entries of component `i` over one period.
    pub fn component(&self, i: usize) -> Vec<i64> {
        match &self.maps {
            TowerMaps::Constant(d) => vec![d[i]],
            TowerMaps::Periodic(p) => p.iter().map(|d| d[i]).collect(),
            TowerMaps::Zero => Vec::new(),
        }
    }

    /// Diagonal of the map `G_(n+1) → G_n`.
    pub fn map_at(&self, n: usize) -> Vec<i64> {
        match &self.maps {
            TowerMaps::Constant(d) => d.clone(),
            TowerMaps::Periodic(p) => p[n % p.len()].clone(),
            TowerMaps::Zero => Vec::new(),
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |d: &[i64]| d.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        match &self.maps {
            TowerMaps::Constant(d) => write!(f, "tower constant=[{}]", list(d)),
            TowerMaps::Periodic(p) => {
                let parts: Vec<String> = p.iter().map(|d| format!("[{}]", list(d))).collect();
                write!(f, "tower periodic=[{}]", parts.join(","))
            }
            TowerMaps::Zero => write!(f, "tower zero"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseLimit {
    /// `lim` is free abelian of this rank.
    pub rank: usize,
    /// Components contributing a copy of `ℤ`.
    pub surviving: Vec<usize>,
}

/// A component survives when its maps are all `±1`; otherwise every thread
/// must be divisible by unbounded products, or is killed by a zero map.
pub fn inverse_limit(t: &Tower) -> InverseLimit {
    let surviving: Vec<usize> = (0..t.rank)
        .filter(|&i| t.component(i).iter().all(|d| d.abs() == 1))
        .collect();
    InverseLimit {
        rank: surviving.len(),
        surviving,
    }
}

/// Mittag-Leffler: image chains of each component stabilize.
pub fn lim1_vanishes(t: &Tower) -> bool {
    (0..t.rank).all(|i| {
        let c = t.component(i);
        c.iter().all(|d| d.abs() == 1) || c.contains(&0)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "middle", rename_all = "snake_case")]
pub enum MiddleGroup {
    Zero,
    IsomorphicToLim { rank: usize },
    Undetermined,
}

/// Middle term of `0 → lim¹ → E → lim → 0`.
pub fn milnor_middle_bounds(lim1_zero: bool, lim_rank: usize) -> MiddleGroup {
    match (lim1_zero, lim_rank) {
        (true, 0) => MiddleGroup::Zero,
        (true, rank) => MiddleGroup::IsomorphicToLim { rank },
        (false, _) => MiddleGroup::Undetermined,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub tower: Tower,
    pub limit: InverseLimit,
    pub lim1_vanishes: bool,
    pub middle: MiddleGroup,
}

pub fn analyze(t: &Tower) -> TowerReport {
    let limit = inverse_limit(t);
    let lim1 = lim1_vanishes(t);
    let middle = milnor_middle_bounds(lim1, limit.rank);
    TowerReport {
        tower: t.clone(),
        limit,
        lim1_vanishes: lim1,
        middle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(d: &[i64]) -> Tower {
        Tower::new(TowerMaps::Constant(d.to_vec())).unwrap()
    }

    #[test]
    fn limits() {
        assert_eq!(inverse_limit(&constant(&[2])).rank, 0);
        assert_eq!(inverse_limit(&constant(&[1])).rank, 1);
        assert_eq!(inverse_limit(&constant(&[2, 1])).surviving, vec![1]);
        assert!(lim1_vanishes(&Tower::new(TowerMaps::Zero).unwrap()));
        assert!(!lim1_vanishes(&constant(&[2])));
        assert!(lim1_vanishes(&constant(&[-1])));
        assert!(lim1_vanishes(&constant(&[0, 1])));
    }

    #[test]
    fn middle_terms() {
        assert_eq!(milnor_middle_bounds(true, 0), MiddleGroup::Zero);
        assert_eq!(
            milnor_middle_bounds(true, 1),
            MiddleGroup::IsomorphicToLim { rank: 1 }
        );
        assert_eq!(milnor_middle_bounds(false, 0), MiddleGroup::Undetermined);
    }

    #[test]
    fn matrices() {
        let t = Tower::from_matrices(&[vec![vec![2, 0], vec![0, -1]]]).unwrap();
        assert_eq!(t.map_at(3), vec![2, -1]);
        assert_eq!(
            Tower::from_matrices(&[vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![0, 1]]]),
            Err(Error::NonDiagonal { index: 1 })
        );
    }
}
