//! Level sets `X_n = cl(exp(2⁻ⁿZ))`, their circle sections and antipodal sets.

mod angles;
mod distance;

pub use angles::{AngleSet, Arc, Arcs, Coset, POINT_CAP};
pub use distance::{dist_one_sq_f64, sup_dist, sup_dist_one, SupEstimate, FLOAT_SLACK};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, pow2, PiLinear};
use crate::spectrum::{h1_check, H1Verdict, Primitive, SectionPart, SpectrumSet};

/// A point `e^(log_mod) · e^(i·angle)` of some level set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LevelPoint {
    #[serde(with = "crate::exactnum::ser_rat")]
    pub log_mod: BigRational,
    /// Reduced to `(−π, π]`.
    pub angle: PiLinear,
}

impl LevelPoint {
    pub fn new(log_mod: BigRational, angle: PiLinear) -> Self {
        LevelPoint {
            log_mod,
            angle: angle.reduce_mod_2pi(),
        }
    }

    pub fn one() -> Self {
        LevelPoint {
            log_mod: BigRational::zero(),
            angle: PiLinear::zero(),
        }
    }

    /// `exp(2⁻ⁿ·(re + i·im))`.
    pub fn exp_scaled(re: &BigRational, im: &PiLinear, n: u32) -> Self {
        let s = pow2(-(n as i64));
        LevelPoint::new(re * &s, im.scale(&s))
    }

    /// Square root; `negated` selects the root opposite to the principal one.
    pub fn sqrt(&self, negated: bool) -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut angle = self.angle.scale(&half);
        if negated {
            angle = angle + PiLinear::pi();
        }
        LevelPoint::new(&self.log_mod * &half, angle)
    }

    pub fn pow(&self, s: &BigInt) -> Self {
        let r = BigRational::from_integer(s.clone());
        LevelPoint::new(&self.log_mod * &r, self.angle.scale(&r))
    }

    pub fn mul(&self, other: &LevelPoint) -> Self {
        LevelPoint::new(&self.log_mod + &other.log_mod, &self.angle + &other.angle)
    }

    pub fn negate(&self) -> Self {
        LevelPoint::new(self.log_mod.clone(), &self.angle + &PiLinear::pi())
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let r = crate::exactnum::rational_to_f64(&self.log_mod).exp();
        num_complex::Complex64::from_polar(r, self.angle.to_f64())
    }
}

impl fmt::Display for LevelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exp({}) * exp(i*({}))",
            fmt_rational(&self.log_mod),
            self.angle
        )
    }
}

/// Points with log-modulus in `[log_lo, log_hi]` and angle in `angles`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    #[serde(with = "crate::exactnum::ser_rat")]
    pub log_lo: BigRational,
    #[serde(with = "crate::exactnum::ser_rat")]
    pub log_hi: BigRational,
    pub angles: AngleSet,
}

impl Component {
    pub fn on_circle(log_mod: BigRational, angles: AngleSet) -> Self {
        Component {
            log_lo: log_mod.clone(),
            log_hi: log_mod,
            angles,
        }
    }

    pub fn point(p: &LevelPoint) -> Self {
        Self::on_circle(p.log_mod.clone(), AngleSet::point(p.angle.clone()))
    }

    pub fn kind(&self) -> &'static str {
        let finite_count = self.angles.point_count();
        match (self.log_lo == self.log_hi, finite_count) {
            (_, _) if self.angles.is_empty() => "empty",
            (true, Some(c)) if c.is_one() => "point",
            (true, Some(_)) if self.angles.arcs == Arcs::Full => "orbit",
            (true, Some(_)) => "partial_orbit",
            (true, None) if self.angles.is_full() => "circle",
            (true, None) => "arc",
            (false, _) if self.angles.is_full() => "annulus",
            (false, _) => "sector",
        }
    }

    pub fn is_empty(&self) -> bool {
        self.log_lo > self.log_hi || self.angles.is_empty()
    }

    pub fn contains(&self, p: &LevelPoint) -> bool {
        self.log_lo <= p.log_mod && p.log_mod <= self.log_hi && self.angles.contains(&p.angle)
    }

    pub fn intersect(&self, other: &Component) -> Component {
        let lo = (&self.log_lo).max(&other.log_lo).clone();
        let hi = (&self.log_hi).min(&other.log_hi).clone();
        if lo > hi {
            return Component::on_circle(lo, AngleSet::empty());
        }
        Component {
            log_lo: lo,
            log_hi: hi,
            angles: self.angles.intersect(&other.angles),
        }
    }

    pub fn negate(&self) -> Component {
        Component {
            angles: self.angles.rotate(&PiLinear::pi()),
            ..self.clone()
        }
    }

    pub fn power(&self, s: &BigInt) -> Component {
        let r = BigRational::from_integer(s.clone());
        Component {
            log_lo: &self.log_lo * &r,
            log_hi: &self.log_hi * &r,
            angles: self.angles.power(s),
        }
    }

    pub fn points(&self) -> Result<Vec<LevelPoint>> {
        if self.log_lo != self.log_hi {
            return Err(Error::TooManyPoints {
                count: "continuum".into(),
                cap: POINT_CAP,
            });
        }
        Ok(self
            .angles
            .points()?
            .into_iter()
            .map(|a| LevelPoint::new(self.log_lo.clone(), a))
            .collect())
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log_lo == self.log_hi {
            write!(
                f,
                "{} log|z|={} arg z in {}",
                self.kind(),
                fmt_rational(&self.log_lo),
                self.angles
            )
        } else {
            write!(
                f,
                "{} log|z| in [{}, {}] arg z in {}",
                self.kind(),
                fmt_rational(&self.log_lo),
                fmt_rational(&self.log_hi),
                self.angles
            )
        }
    }
}

/// Exact description of `X_n` as a finite union of components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSet {
    pub level: u32,
    pub components: Vec<Component>,
}

/// Angles `2⁻ⁿ·(base + k·step)`, or the full circle for a dense orbit.
fn lattice_angles(base: &PiLinear, step: &PiLinear, n: u32) -> AngleSet {
    let s = pow2(-(n as i64));
    match Coset::orbit(&base.scale(&s), &step.scale(&s)) {
        Some(c) => AngleSet::coset(c),
        None => AngleSet::full(),
    }
}

fn segment_angles(lo: &PiLinear, hi: &PiLinear, n: u32) -> AngleSet {
    let s = pow2(-(n as i64));
    AngleSet::arc(lo.scale(&s), (hi - lo).scale(&s))
}

/// Components of `cl(exp(2⁻ⁿP))` for a single primitive.
pub fn primitive_components(p: &Primitive, n: u32) -> Vec<Component> {
    let s = pow2(-(n as i64));
    match p {
        Primitive::Point { re, im } => vec![Component::point(&LevelPoint::exp_scaled(re, im, n))],
        Primitive::VSegment { re, im_lo, im_hi } => {
            vec![Component::on_circle(
                re * &s,
                segment_angles(im_lo, im_hi, n),
            )]
        }
        Primitive::ILattice { re, base, step } => {
            vec![Component::on_circle(re * &s, lattice_angles(base, step, n))]
        }
        Primitive::VLine { re } => vec![Component::on_circle(re * &s, AngleSet::full())],
        Primitive::Rect {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        } => vec![Component {
            log_lo: re_lo * &s,
            log_hi: re_hi * &s,
            angles: segment_angles(im_lo, im_hi, n),
        }],
        Primitive::PrimeFamily(f) => {
            let mut out: Vec<Component> = f
                .imaginary_parts()
                .iter()
                .map(|im| Component::point(&LevelPoint::exp_scaled(&BigRational::zero(), im, n)))
                .collect();
            // Angles 2⁻ⁿα_j accumulate at 0 for the untruncated family.
            out.push(Component::point(&LevelPoint::one()));
            out
        }
    }
}

fn push_unique(out: &mut Vec<Component>, c: Component) {
    if !c.is_empty() && !out.contains(&c) {
        out.push(c);
    }
}

pub fn level_set(z: &SpectrumSet, n: u32) -> LevelSet {
    let mut components = Vec::new();
    for p in z.primitives() {
        for c in primitive_components(p, n) {
            push_unique(&mut components, c);
        }
    }
    LevelSet {
        level: n,
        components,
    }
}

impl LevelSet {
    pub fn contains(&self, p: &LevelPoint) -> bool {
        self.components.iter().any(|c| c.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// All points, when the set is finite and small enough to list.
    pub fn points(&self) -> Result<Vec<LevelPoint>> {
        let mut out = Vec::new();
        for c in &self.components {
            for p in c.points()? {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    /// Image under `z ↦ z^s`.
    pub fn power(&self, s: &BigInt, level: u32) -> LevelSet {
        let mut components = Vec::new();
        for c in &self.components {
            push_unique(&mut components, c.power(s));
        }
        LevelSet { level, components }
    }

    pub fn sup_dist_one(&self) -> Option<SupEstimate> {
        sup_dist_one(&self.components)
    }
}

/// `𝖠(B) = {z ∈ B : −z ∈ B}` for a union of components.
pub fn antipodal_components(components: &[Component]) -> Vec<Component> {
    let negs: Vec<Component> = components.iter().map(Component::negate).collect();
    let mut out = Vec::new();
    for a in components {
        for b in &negs {
            push_unique(&mut out, a.intersect(b));
        }
    }
    out
}

pub fn antipodal_set(l: &LevelSet) -> LevelSet {
    LevelSet {
        level: l.level,
        components: antipodal_components(&l.components),
    }
}

pub fn membership(l: &LevelSet, p: &LevelPoint) -> bool {
    l.contains(p)
}

/// `exp(2⁻ⁿ·i·S_t)` on the circle of log-modulus `2⁻ⁿt`.
pub fn scaled_section(z: &SpectrumSet, n: u32, t: &BigRational) -> Vec<Component> {
    let m = t * pow2(-(n as i64));
    let mut out = Vec::new();
    let pos = |u: &PiLinear| AngleSet::point(u.scale(&pow2(-(n as i64))));
    for part in z.vertical_section(t).parts() {
        let angles = match part {
            SectionPart::Point(u) => pos(u),
            SectionPart::Interval { lo, hi } => segment_angles(lo, hi, n),
            SectionPart::Lattice { base, step } => lattice_angles(base, step, n),
            SectionPart::Line => AngleSet::full(),
        };
        push_unique(&mut out, Component::on_circle(m.clone(), angles));
    }
    out
}

/// `𝒞_n(t) = X_n ∩ {|z| = e^(2⁻ⁿt)}`.
///
/// When `h1_check` reports `exp(2⁻ⁿZ)` closed, the result is compared against
/// `exp(2⁻ⁿ·i·S_t)` and a mismatch is returned as [`Error::Consistency`].
pub fn circle_section(z: &SpectrumSet, n: u32, t: &BigRational) -> Result<Vec<Component>> {
    let l = level_set(z, n);
    let got = restrict_to_circle(&l, &(t * pow2(-(n as i64))));
    if matches!(h1_check(z, n), H1Verdict::Closed) {
        let want = scaled_section(z, n, t);
        let same = got.len() == want.len() && got.iter().all(|c| want.contains(c));
        if !same {
            return Err(Error::Consistency {
                level: n,
                t: fmt_rational(t),
                detail: format!(
                    "level set gives {} components, section gives {}",
                    got.len(),
                    want.len()
                ),
            });
        }
    }
    Ok(got)
}

/// Components of `l` restricted to log-modulus `m`.
pub fn restrict_to_circle(l: &LevelSet, m: &BigRational) -> Vec<Component> {
    let mut out = Vec::new();
    for c in &l.components {
        if &c.log_lo <= m && m <= &c.log_hi {
            push_unique(&mut out, Component::on_circle(m.clone(), c.angles.clone()));
        }
    }
    out
}

/// `f_n ∘ … ∘ f_(n+K−1)` applied to `X_(n+K)`, with `f(z) = z²`.
pub fn eventual_image(z: &SpectrumSet, n: u32, k: u32) -> LevelSet {
    let top = level_set(z, n + k);
    let s = BigInt::one() << (k as usize);
    top.power(&s, n)
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "X_{}:", self.level)?;
        for c in &self.components {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::spectrum::{NSeq, PrimeFamily};

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    fn roots() -> SpectrumSet {
        SpectrumSet::new(vec![Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("2*pi"),
        }])
        .unwrap()
    }

    fn rectangle() -> SpectrumSet {
        SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(-1),
            re_hi: int(0),
            im_lo: pl("-pi"),
            im_hi: pl("pi"),
        }])
        .unwrap()
    }

    #[test]
    fn roots_level_sets() {
        let l = level_set(&roots(), 2);
        let mut pts = l.points().unwrap();
        pts.sort_by(|a, b| a.angle.cmp(&b.angle));
        let angles: Vec<PiLinear> = pts.into_iter().map(|p| p.angle).collect();
        assert_eq!(angles, vec![pl("-1/2*pi"), pl("0"), pl("1/2*pi"), pl("pi")]);
        let a = antipodal_set(&level_set(&roots(), 1));
        assert_eq!(a.points().unwrap().len(), 2);
    }

    #[test]
    fn rectangle_levels() {
        let l0 = level_set(&rectangle(), 0);
        assert_eq!(l0.components[0].kind(), "annulus");
        let l2 = level_set(&rectangle(), 2);
        assert!(!l2.contains(&LevelPoint::new(int(0), pl("pi"))));
        assert!(l2.contains(&LevelPoint::new(
            BigRational::new((-1).into(), 8.into()),
            pl("1/4*pi")
        )));
        assert!(antipodal_set(&l2).is_empty());
        assert!(!antipodal_set(&level_set(&rectangle(), 1)).is_empty());
    }

    #[test]
    fn circle_sections() {
        let c = circle_section(&rectangle(), 1, &int(0)).unwrap();
        assert_eq!(
            c,
            vec![Component::on_circle(
                int(0),
                AngleSet::arc(pl("-1/2*pi"), pl("pi"))
            )]
        );
        let r = circle_section(&roots(), 0, &int(0)).unwrap();
        assert_eq!(r[0].points().unwrap(), vec![LevelPoint::one()]);
        assert!(circle_section(&rectangle(), 3, &int(2)).unwrap().is_empty());
    }

    #[test]
    fn eventual_images_match_levels() {
        let line = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        assert!(eventual_image(&line, 0, 5).components[0].angles.is_full());
        assert_eq!(eventual_image(&roots(), 1, 3), level_set(&roots(), 1));
        assert_eq!(
            eventual_image(&rectangle(), 0, 2),
            level_set(&rectangle(), 0)
        );
    }

    #[test]
    fn prime_family_antipodes_at_exponents() {
        let f = PrimeFamily::new(NSeq::Double, 2).unwrap();
        let z = SpectrumSet::new(vec![Primitive::PrimeFamily(f.clone())]).unwrap();
        for n in 0..16 {
            let a = antipodal_set(&level_set(&z, n));
            let expect = f.exponents().contains(&n);
            assert_eq!(!a.is_empty(), expect, "level {n}");
        }
    }
}
