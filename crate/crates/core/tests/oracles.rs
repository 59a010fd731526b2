mod common;

use common::{example, pl};
use dyadic_core::classify::classify;
use dyadic_core::config::{builtin, BUILTIN_NAMES};
use dyadic_core::exactnum::{int, pow2, rat, PiLinear};
use dyadic_core::exec::Exec;
use dyadic_core::levels::{level_set, LevelPoint};
use dyadic_core::spectrum::{m_set, star_condition, Primitive, SpectrumSet};
use dyadic_core::threads::{rate_constant, Thread};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rect(re: (i64, i64), im: (&str, &str)) -> SpectrumSet {
    SpectrumSet::new(vec![Primitive::Rect {
        re_lo: int(re.0),
        re_hi: int(re.1),
        im_lo: pl(im.0),
        im_hi: pl(im.1),
    }])
    .unwrap()
}

/// `max |1 − exp(2⁻ⁿz)|` over a grid on the rectangle.
fn sampled_sup(re: (f64, f64), im: (f64, f64), n: u32, steps: usize) -> f64 {
    let s = 2f64.powi(-(n as i32));
    let mut best = 0f64;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = re.0 + (re.1 - re.0) * i as f64 / steps as f64;
            let y = im.0 + (im.1 - im.0) * j as f64 / steps as f64;
            best = best.max((Complex64::new(1.0, 0.0) - Complex64::new(s * x, s * y).exp()).norm());
        }
    }
    best
}

#[test]
fn exact_sup_dominates_dense_sampling() {
    let pi = std::f64::consts::PI;
    let cases = [
        ((-1, 0), ("-pi", "pi")),
        ((-2, 1), ("-1/3*pi", "5/4*pi")),
        ((0, 2), ("1/2", "3*pi")),
        ((-3, -1), ("-7*pi", "-6*pi")),
    ];
    for (re, im) in cases {
        let z = rect(re, im);
        let imf = (pl(im.0).to_f64(), pl(im.1).to_f64());
        for n in 0..8 {
            let exact = level_set(&z, n).sup_dist_one().unwrap();
            let sampled = sampled_sup((re.0 as f64, re.1 as f64), imf, n, 400);
            assert!(
                exact.hi >= sampled,
                "{re:?} {im:?} n={n}: {} < {sampled}",
                exact.hi
            );
            // The grid spacing bounds how far below the sup a sample can be.
            let slack = 2.0 * 2f64.powi(-(n as i32)) * ((re.1 - re.0) as f64 + (imf.1 - imf.0))
                / 400.0
                * (2.0 + pi);
            assert!(exact.value <= sampled + slack, "{re:?} {im:?} n={n}");
        }
    }
}

/// `S_t − S_t ∋ 2ⁿkπ` for odd `k`, by enumerating pairs of pieces and odd `k`.
fn star_brute(pieces: &[(PiLinear, PiLinear)], n: u32) -> bool {
    let step = PiLinear::pi_multiple(pow2(n as i64));
    for (a, b) in pieces {
        for (c, d) in pieces {
            let (lo, hi) = (a - d, b - c);
            for k in (-41i64..=41).step_by(2) {
                let v = step.scale_int(&BigInt::from(k));
                if lo <= v && v <= hi {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn star_matches_pairwise_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r = |rng: &mut ChaCha8Rng| {
        PiLinear::new(
            rat(rng.gen_range(-6..=6), 2),
            rat(rng.gen_range(-48..=48), 4),
        )
    };
    for _ in 0..300 {
        let mut pieces = Vec::new();
        let mut prims = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let (u, v) = (r(&mut rng), r(&mut rng));
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            if rng.gen_bool(0.3) {
                prims.push(Primitive::Point {
                    re: int(0),
                    im: lo.clone(),
                });
                pieces.push((lo.clone(), lo));
            } else {
                prims.push(Primitive::VSegment {
                    re: int(0),
                    im_lo: lo.clone(),
                    im_hi: hi.clone(),
                });
                pieces.push((lo, hi));
            }
        }
        let z = SpectrumSet::new(prims).unwrap();
        for n in 0..=4 {
            assert_eq!(
                star_condition(&z, &int(0), n),
                star_brute(&pieces, n),
                "{z} at {n}"
            );
        }
        // Differences are bounded by 12 + 24π, so M_0 ⊆ {0..4}.
        assert!(!m_set(&z, &int(0), 8).tail_holds);
    }
}

#[test]
fn lattice_star_matches_enumeration() {
    // S = b + sℤ with rational multiples of π: S − S = sℤ, so (★) at n asks
    // for odd k with 2ⁿk ∈ (s/π)ℤ.
    for sn in 1..=12i64 {
        for sd in 1..=8i64 {
            let z = SpectrumSet::new(vec![Primitive::ILattice {
                re: int(0),
                base: pl("1/3*pi"),
                step: PiLinear::pi_multiple(rat(sn, sd)),
            }])
            .unwrap();
            for n in 0..10u32 {
                let s = rat(sn, sd);
                let brute = (-51i64..=51)
                    .step_by(2)
                    .any(|k| (rat(k << n, 1) / &s).is_integer());
                assert_eq!(
                    star_condition(&z, &int(0), n),
                    brute,
                    "step {sn}/{sd}π at {n}"
                );
            }
        }
    }
}

#[test]
fn modes_agree_on_every_example() {
    for name in BUILTIN_NAMES {
        let c = builtin(name).unwrap();
        let z = c.spectrum().unwrap();
        let a = classify(z, &c.settings.classify_params(Exec::Sequential));
        let b = classify(z, &c.settings.classify_params(Exec::Parallel));
        assert_eq!(a.verdict, b.verdict, "{name}");
        assert_eq!(a.evidence, b.evidence, "{name}");
    }
}

#[test]
fn rate_constant_bounds_every_level() {
    let z = example("solenoid");
    for (num, den) in [(1, 1), (3, 4), (-5, 2), (7, 8)] {
        let base = LevelPoint::exp_scaled(&int(0), &PiLinear::pi_multiple(rat(num, den)), 0);
        let th = Thread::principal(0, base);
        let r = rate_constant(&z, &th, 40).unwrap();
        for row in &r.rows {
            assert!(
                row.dist_hi * 2f64.powi(row.n as i32) <= r.constant * (1.0 + 1e-9),
                "{num}/{den} at {}",
                row.n
            );
            let p = th.point_at(row.n).unwrap().to_complex();
            let d = (Complex64::new(1.0, 0.0) - p).norm();
            assert!(row.dist_lo <= d + 1e-12 && d <= row.dist_hi + 1e-12);
        }
        // 2ⁿ|1 − e^(2⁻ⁿiθ)| → |θ| for the reduced angle θ of the base.
        let theta = th.point_at(0).unwrap().angle.to_f64().abs();
        let last = r.rows.last().unwrap();
        assert!((last.dist_hi * 2f64.powi(last.n as i32) - theta).abs() < 1e-6);
        assert!(r.constant >= theta - 1e-9);
    }
}
