//! Continuity class of the dyadic semigroup induced by the zero extension.

use std::fmt;

use serde::Serialize;

use crate::exactnum::{pow2, rational_to_f64, PiLinear};
use crate::levels::{antipodal_set, eventual_image, level_set, FLOAT_SLACK};
use crate::spectrum::{
    h1_check, h2_check, m_set, representative_sections, H1Verdict, H2Report, SpectrumSet,
};
use crate::threads::{adversarial_search, feasible_branches, SearchOutcome, SearchParams, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    UniformlyContinuous,
    StronglyContinuousNotUniform,
    NotStronglyContinuous,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyParams {
    pub n_max: u32,
    /// Extra levels used for eventual images.
    pub k: u32,
    pub search: SearchParams,
    /// `u_(n_max)` must fall below this for a uniform bound.
    pub tolerance: f64,
    /// Largest tail ratio `u_(n+1)/u_n` accepted as the `2⁻ⁿ` rate.
    pub max_ratio: f64,
    pub ext_zero_assumed: bool,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            n_max: 24,
            k: 2,
            search: SearchParams::default(),
            tolerance: 1e-3,
            max_ratio: 0.6,
            ext_zero_assumed: false,
        }
    }
}

/// `sup_ξ |1 − π_n(ξ)| ≤ C·2⁻ⁿ` for every `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformRateBound {
    /// `sup |w| · e^(max(ζ, 0))` over `w ∈ Z`, valid at every level.
    pub constant: f64,
    /// `max 2ⁿ·u_n` over the computed range, from upper enclosures.
    pub observed: f64,
    pub n_range: (u32, u32),
    /// `u_n` for `n` in `n_range`.
    pub u: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntipodalLevels {
    /// Levels `n ≤ n_max` whose eventual image contains an antipodal pair.
    pub levels: Vec<u32>,
    /// Antipodes occur at infinitely many levels, by a symbolic argument.
    pub persistent: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Evidence {
    UniformRateBound(UniformRateBound),
    AntipodalLevels(AntipodalLevels),
    WitnessThread {
        witness: Witness,
        certified: bool,
    },
    /// Every thread is principal from `principal_from` on, so `π_n(ξ) → 1`.
    PointwiseCertificate {
        principal_from: u32,
    },
    MtData(H2Report),
    H1Data {
        verdicts: Vec<(u32, H1Verdict)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    pub parameters: ClassifyParams,
    pub ext_zero_assumed: bool,
    /// `exp(2⁻ⁿZ)` is closed at the last computed level.
    pub h1_holds: bool,
    pub h2_holds: bool,
    pub hypotheses_met: bool,
    pub note: String,
}

impl ClassificationReport {
    pub fn summary(&self) -> String {
        let mut s = format!("verdict: {}\n", self.verdict);
        s.push_str(&format!(
            "H1: {}  H2: {}  Ext(X)=0 assumed: {}\n",
            yes_no(self.h1_holds),
            yes_no(self.h2_holds),
            yes_no(self.ext_zero_assumed)
        ));
        for e in &self.evidence {
            s.push_str(&format!("- {}\n", describe(e)));
        }
        s.push_str(&self.note);
        s.push('\n');
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn describe(e: &Evidence) -> String {
    match e {
        Evidence::UniformRateBound(b) => format!(
            "uniform bound u_n <= {:.6}*2^-n (observed max 2^n u_n = {:.6}, n in {}..={})",
            b.constant, b.observed, b.n_range.0, b.n_range.1
        ),
        Evidence::AntipodalLevels(a) => format!(
            "antipodal levels {:?}{}",
            a.levels,
            if a.persistent { " (persistent)" } else { "" }
        ),
        Evidence::WitnessThread { witness, certified } => format!(
            "witness thread from level {} to {} with min |1 - pi_n| = {:.6}{}",
            witness.start_level,
            witness.end_level,
            witness.min_dist,
            if *certified {
                " (certified for all levels)"
            } else {
                " (finite depth only)"
            }
        ),
        Evidence::PointwiseCertificate { principal_from } => {
            format!("every thread is principal from level {principal_from}")
        }
        Evidence::MtData(h) => format!(
            "M_t over {} sections, H2 {}",
            h.sections.len(),
            yes_no(h.holds())
        ),
        Evidence::H1Data { verdicts } => {
            let closed = verdicts
                .iter()
                .filter(|(_, v)| *v == H1Verdict::Closed)
                .count();
            format!("H1 closed at {closed} of {} levels", verdicts.len())
        }
    }
}

/// `sup |w|` over a bounded `Z`, rounded up.
fn modulus_bound(z: &SpectrumSet) -> Option<f64> {
    let mut best: f64 = 0.0;
    for p in z.primitives() {
        if !p.is_bounded() {
            return None;
        }
        let (lo, hi) = p.re_range();
        let re = rational_to_f64(&lo).abs().max(rational_to_f64(&hi).abs());
        let im = p.im_bound()?.to_f64();
        best = best.max(re.hypot(im));
    }
    Some(best * (1.0 + FLOAT_SLACK))
}

pub fn check_uniform(z: &SpectrumSet, params: &ClassifyParams) -> Option<UniformRateBound> {
    let r = modulus_bound(z)?;
    let zeta = rational_to_f64(&z.eta_zeta().zeta);
    let constant = r * zeta.max(0.0).exp() * (1.0 + FLOAT_SLACK);
    let n_max = params.n_max;
    let sups: Vec<(f64, f64)> = (0..=n_max)
        .map(|n| {
            eventual_image(z, n, params.k)
                .sup_dist_one()
                .map_or((0.0, 0.0), |s| (s.value, s.hi))
        })
        .collect();
    let u: Vec<f64> = sups.iter().map(|s| s.0).collect();
    let observed = sups
        .iter()
        .enumerate()
        .map(|(n, s)| s.1 * 2f64.powi(n as i32))
        .fold(0.0, f64::max);
    let tail_start = (n_max / 2) as usize;
    let decreasing = u[tail_start..]
        .windows(2)
        .all(|w| w[0] == 0.0 || w[1] <= params.max_ratio * w[0]);
    let small = u[n_max as usize] < params.tolerance;
    (decreasing && small && observed <= constant).then_some(UniformRateBound {
        constant,
        observed,
        n_range: (0, n_max),
        u,
    })
}

pub fn check_not_uniform(z: &SpectrumSet, params: &ClassifyParams) -> AntipodalLevels {
    let levels: Vec<u32> = (0..=params.n_max)
        .filter(|&n| !antipodal_set(&eventual_image(z, n, params.k)).is_empty())
        .collect();
    let mut reason = None;
    if z.prime_family().is_some() {
        reason = Some("the untruncated family has antipodal pairs at every level n_j".to_string());
    } else if let Some(t) = representative_sections(z)
        .into_iter()
        .find(|t| m_set(z, t, params.n_max).tail_holds)
    {
        let set = m_set(z, &t, params.n_max);
        reason = Some(format!(
            "M_t is infinite at t = {} (every n >= {})",
            crate::exactnum::fmt_rational(&t),
            set.tail_from
        ));
    }
    AntipodalLevels {
        levels,
        persistent: reason.is_some(),
        reason,
    }
}

pub fn check_not_strong(z: &SpectrumSet, params: &SearchParams) -> SearchOutcome {
    adversarial_search(z, params)
}

/// Level beyond which every feasible branch is principal, for spectra of
/// bounded imaginary part.
///
/// Once `2⁻ⁿ·sup|Im Z| < π/2`, every angle of `X_n` is below `π/2` in
/// magnitude while a non-principal root has angle above `π/2`.
pub fn pointwise_certificate(z: &SpectrumSet) -> Option<u32> {
    let mut m = PiLinear::zero();
    for p in z.primitives() {
        m = PiLinear::max_of(&m, &p.im_bound()?);
    }
    let quarter_turn = PiLinear::pi().scale(&crate::exactnum::rat(1, 2));
    let n = (0..4096u32).find(|&n| m.scale(&pow2(-(n as i64))) < quarter_turn)?;
    // Replay the argument on the finitely many points when they can be listed.
    if let Ok(points) = level_set(z, n).points() {
        for p in &points {
            if feasible_branches(z, n, p).ok()? != [false] {
                return None;
            }
        }
    }
    Some(n)
}

pub fn classify(z: &SpectrumSet, params: &ClassifyParams) -> ClassificationReport {
    let mut evidence = Vec::new();
    let h1: Vec<(u32, H1Verdict)> = (0..=params.n_max).map(|n| (n, h1_check(z, n))).collect();
    let h1_holds = h1.last().is_some_and(|(_, v)| *v == H1Verdict::Closed);
    let h2 = h2_check(z, params.n_max);
    let h2_holds = h2.holds();

    let search = check_not_strong(z, &params.search);
    let mut verdict = None;
    if let Some(w) = search.witness() {
        let certified = w.certificate.is_some();
        evidence.push(Evidence::WitnessThread {
            witness: w.clone(),
            certified,
        });
        if certified {
            verdict = Some(Verdict::NotStronglyContinuous);
        }
    }
    if verdict.is_none() {
        if let Some(b) = check_uniform(z, params) {
            evidence.push(Evidence::UniformRateBound(b));
            verdict = Some(Verdict::UniformlyContinuous);
        }
    }
    let antipodes = check_not_uniform(z, params);
    let persistent = antipodes.persistent;
    evidence.push(Evidence::AntipodalLevels(antipodes));
    if verdict.is_none() && persistent {
        if let Some(n) = pointwise_certificate(z) {
            evidence.push(Evidence::PointwiseCertificate { principal_from: n });
            verdict = Some(Verdict::StronglyContinuousNotUniform);
        }
    }
    evidence.push(Evidence::MtData(h2));
    evidence.push(Evidence::H1Data { verdicts: h1 });

    ClassificationReport {
        verdict: verdict.unwrap_or(Verdict::Inconclusive),
        evidence,
        parameters: params.clone(),
        ext_zero_assumed: params.ext_zero_assumed,
        h1_holds,
        h2_holds,
        hypotheses_met: h1_holds && h2_holds && params.ext_zero_assumed,
        note: "The verdict concerns the semigroup induced by the zero extension only.".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::exec::Exec;
    use crate::spectrum::{NSeq, PrimeFamily, Primitive};

    fn pl(s: &str) -> PiLinear {
        s.parse().unwrap()
    }

    fn params() -> ClassifyParams {
        let mut p = ClassifyParams::default();
        p.search.exec = Exec::Sequential;
        p.search.depth = 20;
        p
    }

    #[test]
    fn canonical_verdicts() {
        let roots = SpectrumSet::new(vec![Primitive::ILattice {
            re: int(0),
            base: pl("0"),
            step: pl("2*pi"),
        }])
        .unwrap();
        let line = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        let rect = SpectrumSet::new(vec![Primitive::Rect {
            re_lo: int(-1),
            re_hi: int(0),
            im_lo: pl("-pi"),
            im_hi: pl("pi"),
        }])
        .unwrap();
        let family = SpectrumSet::new(vec![Primitive::PrimeFamily(
            PrimeFamily::new(NSeq::Double, 8).unwrap(),
        )])
        .unwrap();
        assert_eq!(
            classify(&roots, &params()).verdict,
            Verdict::NotStronglyContinuous
        );
        assert_eq!(
            classify(&line, &params()).verdict,
            Verdict::NotStronglyContinuous
        );
        let r = classify(&rect, &params());
        assert_eq!(r.verdict, Verdict::UniformlyContinuous);
        assert!(r.h1_holds && r.h2_holds);
        let f = classify(&family, &params());
        assert_eq!(f.verdict, Verdict::StronglyContinuousNotUniform);
        assert_eq!(pointwise_certificate(&family), Some(49));
    }

    #[test]
    fn unbounded_spectra_have_no_uniform_bound() {
        let line = SpectrumSet::new(vec![Primitive::VLine { re: int(0) }]).unwrap();
        assert!(check_uniform(&line, &params()).is_none());
        let a = check_not_uniform(&line, &params());
        assert!(a.persistent);
        assert_eq!(a.levels, (0..=24).collect::<Vec<_>>());
    }

    #[test]
    fn family_antipodes_sit_at_exponents() {
        let family = SpectrumSet::new(vec![Primitive::PrimeFamily(
            PrimeFamily::new(NSeq::Double, 8).unwrap(),
        )])
        .unwrap();
        let a = check_not_uniform(&family, &params());
        assert_eq!(a.levels, vec![6, 10, 14, 22]);
    }
}
