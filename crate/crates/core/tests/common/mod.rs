#![allow(dead_code)]

use dyadic_core::config::builtin;
use dyadic_core::exactnum::{rat, PiLinear};
use dyadic_core::spectrum::{Primitive, SpectrumSet};
use rand::Rng;

pub fn example(name: &str) -> SpectrumSet {
    builtin(name).unwrap().spectrum.unwrap()
}

pub fn pl(s: &str) -> PiLinear {
    s.parse().unwrap()
}

fn small_rat(rng: &mut impl Rng) -> num_rational::BigRational {
    let d = [1, 2, 3, 4][rng.gen_range(0..4)];
    rat(rng.gen_range(-4..=4), d)
}

fn pi_mult(rng: &mut impl Rng, max: i64) -> PiLinear {
    let d = [1, 2, 3, 4, 8][rng.gen_range(0..5)];
    PiLinear::pi_multiple(rat(rng.gen_range(-max * d..=max * d), d))
}

fn ordered(a: PiLinear, b: PiLinear) -> (PiLinear, PiLinear) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A primitive from the config grammar with small exact parameters.
pub fn random_primitive(rng: &mut impl Rng) -> Primitive {
    match rng.gen_range(0..6) {
        0 => Primitive::Point {
            re: small_rat(rng),
            im: pi_mult(rng, 8),
        },
        1 => {
            let (im_lo, im_hi) = ordered(pi_mult(rng, 8), pi_mult(rng, 8));
            Primitive::VSegment {
                re: small_rat(rng),
                im_lo,
                im_hi,
            }
        }
        2 => {
            let step = loop {
                let s = pi_mult(rng, 4).abs();
                if !s.is_zero() {
                    break s;
                }
            };
            Primitive::ILattice {
                re: small_rat(rng),
                base: pi_mult(rng, 2),
                step,
            }
        }
        3 => Primitive::ILattice {
            re: small_rat(rng),
            base: PiLinear::zero(),
            step: PiLinear::rational(rat(rng.gen_range(1..=6), 2)),
        },
        4 => Primitive::VLine { re: small_rat(rng) },
        _ => {
            let (a, b) = (small_rat(rng), small_rat(rng));
            let (re_lo, re_hi) = if a <= b { (a, b) } else { (b, a) };
            let (im_lo, im_hi) = ordered(pi_mult(rng, 4), pi_mult(rng, 4));
            Primitive::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            }
        }
    }
}

pub fn random_spectrum(rng: &mut impl Rng) -> SpectrumSet {
    let count = rng.gen_range(1..=3);
    SpectrumSet::new((0..count).map(|_| random_primitive(rng)).collect()).unwrap()
}
