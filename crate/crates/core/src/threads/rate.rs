use num_rational::BigRational;
use serde::Serialize;

use super::{evaluate, Tail, Thread};
use crate::error::{Error, Result};
use crate::exactnum::{rational_to_f64, PiLinear};
use crate::levels::{dist_one_sq_f64, FLOAT_SLACK};
use crate::spectrum::SpectrumSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRow {
    pub n: u32,
    /// Enclosure of `|1 − π_n(ξ)|`.
    pub dist_lo: f64,
    pub dist_hi: f64,
    pub angle: PiLinear,
    #[serde(with = "crate::exactnum::ser_rat")]
    pub log_mod: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    /// Level from which every branch is principal.
    pub principal_from: u32,
    /// `2^(n₀)·|w₀|·e^(max(Re w₀, 0))` with `w₀` the principal log at `n₀`.
    pub tail_constant: f64,
    /// Smallest `C` with `|1 − π_n(ξ)| ≤ C·2⁻ⁿ` on the table and the tail.
    pub constant: f64,
    /// Every tabulated level obeys the bound.
    pub dominated: bool,
    pub rows: Vec<RateRow>,
}

impl RateReport {
    pub fn csv(&self, digits: usize) -> String {
        rows_csv(&self.rows, digits)
    }
}

/// CSV with columns `n,dist_lo,dist_hi,angle,log_mod`.
pub fn rows_csv(rows: &[RateRow], digits: usize) -> String {
    let mut s = String::from("n,dist_lo,dist_hi,angle,log_mod\n");
    for r in rows {
        s.push_str(&format!(
            "{},{:.*e},{:.*e},{},{}\n",
            r.n,
            digits,
            r.dist_lo,
            digits,
            r.dist_hi,
            r.angle,
            crate::exactnum::fmt_rational(&r.log_mod)
        ));
    }
    s
}

/// Table rows for levels `from..=to` of a thread.
pub fn thread_rows(th: &Thread, from: u32, to: u32) -> Result<Vec<RateRow>> {
    (from..=to)
        .map(|n| {
            let p = th.point_at(n)?;
            let d = dist_one_sq_f64(rational_to_f64(&p.log_mod), p.angle.to_f64()).sqrt();
            Ok(RateRow {
                n,
                dist_lo: d * (1.0 - FLOAT_SLACK),
                dist_hi: d * (1.0 + FLOAT_SLACK),
                angle: p.angle,
                log_mod: p.log_mod,
            })
        })
        .collect()
}

/// Rate `|1 − π_n(ξ)| = O(2⁻ⁿ)` for a thread with a principal tail.
pub fn rate_constant(z: &SpectrumSet, th: &Thread, n_max: u32) -> Result<RateReport> {
    if th.tail != Tail::Principal {
        return Err(Error::NonPrincipalTail);
    }
    let n0 = th.principal_from().expect("principal tail");
    let top = n_max.max(n0);
    evaluate(z, th, top)?;
    let w0 = th.point_at(n0)?;
    let m0 = rational_to_f64(&w0.log_mod);
    let t0 = w0.angle.to_f64();
    let tail_constant =
        2f64.powi(n0 as i32) * m0.hypot(t0) * m0.max(0.0).exp() * (1.0 + FLOAT_SLACK);

    let rows = thread_rows(th, th.base_level, top)?;
    let constant = rows
        .iter()
        .filter(|r| r.n < n0)
        .map(|r| 2f64.powi(r.n as i32) * r.dist_hi)
        .fold(tail_constant, f64::max);
    let dominated = rows
        .iter()
        .all(|r| r.dist_lo * 2f64.powi(r.n as i32) <= constant * (1.0 + FLOAT_SLACK));
    Ok(RateReport {
        principal_from: n0,
        tail_constant,
        constant,
        dominated,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::levels::LevelPoint;
    use crate::spectrum::Primitive;

    #[test]
    fn principal_thread_on_a_line() {
        let z = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        let th = Thread::new(
            0,
            LevelPoint::new(int(0), PiLinear::pi()),
            vec![true, false],
            Tail::Principal,
        );
        let r = rate_constant(&z, &th, 40).unwrap();
        assert_eq!(r.principal_from, 1);
        assert!(r.dominated);
        // π₁ = −i, so w₁ = −iπ/2 and C_tail = π.
        assert!((r.tail_constant - std::f64::consts::PI).abs() < 1e-9);
        let last = r.rows.last().unwrap();
        assert!(last.dist_hi * 2f64.powi(40) <= r.constant * (1.0 + 1e-9));
    }

    #[test]
    fn finite_tail_is_rejected() {
        let z = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        let th = Thread::new(0, LevelPoint::one(), vec![], Tail::Finite);
        assert_eq!(rate_constant(&z, &th, 5), Err(Error::NonPrincipalTail));
    }
}
