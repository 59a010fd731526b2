use num_complex::Complex64;
use serde::Serialize;

use super::{Component, LevelPoint};
use crate::exactnum::rational_to_f64;

/// Relative slack applied to floating evaluations of transcendental values.
pub const FLOAT_SLACK: f64 = 1e-12;

/// `|1 − e^(m + iθ)|²`, written to stay accurate when both are tiny.
pub fn dist_one_sq_f64(m: f64, theta: f64) -> f64 {
    let a = m.exp_m1();
    let s = (theta / 2.0).sin();
    a * a + 4.0 * m.exp() * s * s
}

/// Supremum of `|1 − z|` with the point attaining it and a float enclosure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub argmax: LevelPoint,
}

impl SupEstimate {
    fn at(p: LevelPoint) -> Self {
        let v = dist_one_sq_f64(rational_to_f64(&p.log_mod), p.angle.to_f64()).sqrt();
        SupEstimate {
            value: v,
            lo: v * (1.0 - FLOAT_SLACK),
            hi: v * (1.0 + FLOAT_SLACK) + f64::MIN_POSITIVE,
            argmax: p,
        }
    }
}

/// Exact location of `sup |1 − z|` over a union of components.
///
/// For a fixed angle `|1 − re^(iθ)|²` is convex in `r`, and for a fixed
/// modulus it increases with `|θ|`, so the supremum sits at a modulus
/// endpoint and at the member angle closest to `π`.
pub fn sup_dist_one(components: &[Component]) -> Option<SupEstimate> {
    let mut best: Option<SupEstimate> = None;
    for c in components {
        let Some(theta) = c.angles.farthest_from_zero() else {
            continue;
        };
        for m in [&c.log_lo, &c.log_hi] {
            let e = SupEstimate::at(LevelPoint::new(m.clone(), theta.clone()));
            if best.as_ref().is_none_or(|b| e.value > b.value) {
                best = Some(e);
            }
        }
    }
    best
}

/// Numerical `sup |λ − z|` over a union of components.
pub fn sup_dist(components: &[Component], lambda: Complex64) -> Option<f64> {
    let target = (-lambda).arg();
    let mut best: Option<f64> = None;
    for c in components {
        let Some(theta) = c.angles.nearest_f64(if lambda == Complex64::new(0.0, 0.0) {
            0.0
        } else {
            target
        }) else {
            continue;
        };
        for m in [&c.log_lo, &c.log_hi] {
            let z = Complex64::from_polar(rational_to_f64(m).exp(), theta);
            let d = (lambda - z).norm();
            best = Some(best.map_or(d, |b| b.max(d)));
        }
    }
    best
}
