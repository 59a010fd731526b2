//! Continuity of dyadic semigroups over inverse limits `X = lim← cl(exp(2⁻ⁿZ))`.
//!
//! A spectrum `Z ⊂ ℂ` is described by a finite union of [`spectrum::Primitive`]s
//! with parameters of the form `q₀ + q₁π` ([`exactnum::PiLinear`]), so level
//! sets, antipodal pairs and the condition `(★)` are decided exactly.
//! [`classify::classify`] combines those pieces into one of three verdicts:
//!
//! ```
//! use dyadic_core::classify::{classify, Verdict};
//! use dyadic_core::config::builtin;
//! use dyadic_core::exec::Exec;
//!
//! let cfg = builtin("rectangle").unwrap();
//! let report = classify(cfg.spectrum().unwrap(), &cfg.settings.classify_params(Exec::default()));
//! assert_eq!(report.verdict, Verdict::UniformlyContinuous);
//! ```
//!
//! With the `parallel` feature (on by default) independent work items run on
//! rayon; [`exec::Exec::Sequential`] or building without the feature keeps
//! everything on the calling thread. Results do not depend on the mode.

pub mod classify;
pub mod config;
pub mod error;
pub mod exactnum;
pub mod exec;
pub mod levels;
pub mod simulate;
pub mod spectrum;
pub mod threads;
pub mod towers;

pub use error::{Error, Result};
