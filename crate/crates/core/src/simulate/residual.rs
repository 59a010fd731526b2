use num_complex::Complex64;
use serde::Serialize;

use crate::exactnum::{rational_to_f64, PiLinear};
use crate::exec::Exec;
use crate::levels::{level_set, sup_dist};
use crate::spectrum::{Primitive, SpectrumSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `inf_z Σ 2⁻ⁿ φ_n(z) / ‖φ_n‖_∞` over the sample.
    pub residual: f64,
    pub argmin: (f64, f64),
    /// Same sum with `‖φ_n‖_∞` replaced by `(|λ_n| + e^(2⁻ⁿζ))²`.
    pub residual_coarse: f64,
    /// `sup_(z ∈ X_n) |λ_n − z|²` per level.
    pub normalizers: Vec<f64>,
    pub coarse_normalizers: Vec<f64>,
    /// The coarse normalizers dominate the exact ones.
    pub coarse_bound_holds: bool,
    /// `|λ_(n+1)² − λ_n|` per level.
    pub consistency: Vec<f64>,
    pub samples: usize,
}

fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 || lo == hi {
        return vec![(lo + hi) / 2.0];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn symmetric(half: usize, step: f64) -> impl Iterator<Item = f64> {
    let h = half as i64;
    (-h..=h).map(move |k| k as f64 * step)
}

fn odd_at_least(x: usize) -> usize {
    x.max(1) | 1
}

/// About `density` points per primitive. Every grid has an odd count, so
/// midpoints and `0` are hit.
pub fn sample_spectrum(z: &SpectrumSet, density: usize) -> Vec<Complex64> {
    let c = odd_at_least(density);
    let side = odd_at_least((density as f64).sqrt().ceil() as usize);
    let half = density / 2;
    let f = |p: &PiLinear| p.to_f64();
    let mut out = Vec::new();
    for p in z.primitives() {
        match p {
            Primitive::Point { re, im } => out.push(Complex64::new(rational_to_f64(re), f(im))),
            Primitive::VSegment { re, im_lo, im_hi } => {
                let x = rational_to_f64(re);
                out.extend(
                    grid(f(im_lo), f(im_hi), c)
                        .into_iter()
                        .map(|y| Complex64::new(x, y)),
                );
            }
            Primitive::ILattice { re, base, step } => {
                let x = rational_to_f64(re);
                let (b, s) = (f(base), f(step));
                out.extend(symmetric(half, s).map(|k| Complex64::new(x, b + k)));
            }
            Primitive::VLine { re } => {
                let x = rational_to_f64(re);
                out.extend(
                    symmetric(half, std::f64::consts::FRAC_PI_2).map(|y| Complex64::new(x, y)),
                );
            }
            Primitive::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            } => {
                for x in grid(rational_to_f64(re_lo), rational_to_f64(re_hi), side) {
                    out.extend(
                        grid(f(im_lo), f(im_hi), side)
                            .into_iter()
                            .map(|y| Complex64::new(x, y)),
                    );
                }
            }
            Primitive::PrimeFamily(fam) => {
                out.extend(
                    fam.imaginary_parts()
                        .iter()
                        .map(|u| Complex64::new(0.0, f(u))),
                );
            }
        }
    }
    out
}

/// How far `λ₀, …, λ_N` is from being the image of a single point of `Z`.
pub fn joint_spectrum_residual(
    z: &SpectrumSet,
    lambda: &[Complex64],
    density: usize,
    exec: Exec,
) -> ResidualReport {
    let zeta = rational_to_f64(&z.eta_zeta().zeta);
    let normalizers: Vec<f64> = lambda
        .iter()
        .enumerate()
        .map(|(n, l)| sup_dist(&level_set(z, n as u32).components, *l).map_or(0.0, |d| d * d))
        .collect();
    let coarse_normalizers: Vec<f64> = lambda
        .iter()
        .enumerate()
        .map(|(n, l)| (l.norm() + (zeta / 2f64.powi(n as i32)).exp()).powi(2))
        .collect();
    let coarse_bound_holds = normalizers
        .iter()
        .zip(&coarse_normalizers)
        .all(|(a, b)| *a <= b * (1.0 + 1e-12));
    let consistency = lambda
        .windows(2)
        .map(|w| (w[1] * w[1] - w[0]).norm())
        .collect();

    let samples = sample_spectrum(z, density);
    let term = |z: &Complex64, norms: &[f64]| -> f64 {
        lambda
            .iter()
            .zip(norms)
            .enumerate()
            .map(|(n, (l, norm))| {
                if *norm == 0.0 {
                    return 0.0;
                }
                let w = (z / 2f64.powi(n as i32)).exp();
                (l - w).norm_sqr() / norm / 2f64.powi(n as i32)
            })
            .sum()
    };
    let values = exec.map(&samples, |s| {
        (term(s, &normalizers), term(s, &coarse_normalizers))
    });
    let mut best = (f64::INFINITY, (f64::NAN, f64::NAN));
    let mut coarse = f64::INFINITY;
    for (s, (v, c)) in samples.iter().zip(&values) {
        if *v < best.0 {
            best = (*v, (s.re, s.im));
        }
        coarse = coarse.min(*c);
    }
    ResidualReport {
        residual: best.0,
        argmin: best.1,
        residual_coarse: coarse,
        normalizers,
        coarse_normalizers,
        coarse_bound_holds,
        consistency,
        samples: samples.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn rect() -> SpectrumSet {
        SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(-1),
            re_hi: int(0),
            im_lo: "-pi".parse().unwrap(),
            im_hi: "pi".parse().unwrap(),
        }])
        .unwrap()
    }

    #[test]
    fn one_is_attained_at_zero() {
        let lam = vec![Complex64::new(1.0, 0.0); 6];
        let r = joint_spectrum_residual(&rect(), &lam, 100, Exec::Sequential);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.argmin, (0.0, 0.0));
        assert!(r.coarse_bound_holds);
        assert!(r.consistency.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn far_values_are_bounded_below() {
        let r =
            joint_spectrum_residual(&rect(), &[Complex64::new(5.0, 0.0)], 100, Exec::Sequential);
        // |5 − z| ≥ 4 on X₀ and sup |5 − z| = 6.
        assert!(r.residual >= 16.0 / 36.0 - 1e-9);
        let r = joint_spectrum_residual(
            &rect(),
            &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            100,
            Exec::Sequential,
        );
        assert!(r.residual > 0.1);
        assert_eq!(r.consistency, vec![0.0]);
    }
}
