use anyhow::{bail, Context, Result};
use dyadic_core::classify::{classify, Evidence, Verdict};
use dyadic_core::config::Config;
use dyadic_core::exactnum::{fmt_rational, parse_rational};
use dyadic_core::levels::{antipodal_set, level_set};
use dyadic_core::simulate::{
    dyadic_decompose, joint_spectrum_residual, quasi_uniform_cover, sample_threads, trace_csv,
    CoverParams, DiagonalModel, DyadicTime,
};
use dyadic_core::spectrum::{h2_check, m_set, representative_sections};
use dyadic_core::threads::{rows_csv, thread_rows};
use dyadic_core::towers::analyze;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::{Command, Options};

fn emit<T: Serialize>(opts: &Options, value: &T, text: String) -> Result<()> {
    if opts.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{text}");
    }
    Ok(())
}

/// Writes to `--csv`, or to stdout after a text report when `emit_csv` is set.
fn write_csv(opts: &Options, config: &Config, csv: Option<String>) -> Result<()> {
    match (&opts.csv, csv) {
        (Some(path), Some(body)) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?
        }
        (Some(_), None) => bail!("this command has no CSV table"),
        (None, Some(body)) if config.settings.emit_csv && !opts.json => print!("{body}"),
        _ => {}
    }
    Ok(())
}

pub fn dispatch(command: &Command, config: &Config, opts: &Options) -> Result<u8> {
    let digits = config.settings.float_digits;
    match command {
        Command::Classify => {
            let z = config.spectrum()?;
            let report = classify(z, &config.settings.classify_params(opts.exec));
            emit(opts, &report, report.summary())?;
            let rows = report.evidence.iter().find_map(|e| match e {
                Evidence::WitnessThread { witness, .. } => {
                    thread_rows(&witness.thread, witness.start_level, witness.end_level).ok()
                }
                _ => None,
            });
            write_csv(
                opts,
                config,
                Some(rows_csv(&rows.unwrap_or_default(), digits)),
            )?;
            Ok(if report.verdict == Verdict::Inconclusive {
                2
            } else {
                0
            })
        }
        Command::Levels { n, points } => {
            let z = config.spectrum()?;
            let l = level_set(z, *n);
            let mut text = l.to_string();
            let listed = if *points { Some(l.points()?) } else { None };
            if let Some(ps) = &listed {
                for p in ps {
                    text.push_str(&format!("  {p}\n"));
                }
            }
            emit(opts, &json!({ "level_set": l, "points": listed }), text)?;
            write_csv(opts, config, None)?;
            Ok(0)
        }
        Command::Antipodes => {
            let z = config.spectrum()?;
            let mut rows = Vec::new();
            let mut text = String::new();
            for n in 0..=config.settings.n_max {
                let a = antipodal_set(&level_set(z, n));
                if !a.is_empty() {
                    text.push_str(&format!("antipodal part of {a}"));
                    rows.push(a);
                }
            }
            if rows.is_empty() {
                text.push_str(&format!(
                    "no antipodal pairs at levels 0..={}\n",
                    config.settings.n_max
                ));
            }
            let csv = {
                let mut s = String::from("n,components\n");
                for a in &rows {
                    s.push_str(&format!("{},{}\n", a.level, a.components.len()));
                }
                s
            };
            emit(opts, &rows, text)?;
            write_csv(opts, config, Some(csv))?;
            Ok(0)
        }
        Command::Mt { t } => {
            let z = config.spectrum()?;
            let n_max = config.settings.n_max;
            let ts = match t {
                Some(s) => vec![parse_rational(s).with_context(|| format!("not a rational: {s}"))?],
                None => representative_sections(z),
            };
            let sets: Vec<_> = ts.iter().map(|t| m_set(z, t, n_max)).collect();
            let h2 = h2_check(z, n_max);
            let mut text = String::new();
            for m in &sets {
                let members: Vec<String> = m.members.iter().map(u32::to_string).collect();
                text.push_str(&format!(
                    "M_{} = {{{}}}{}\n",
                    fmt_rational(&m.t),
                    members.join(","),
                    if m.tail_holds {
                        format!(" and every n >= {}", m.tail_from)
                    } else {
                        String::new()
                    }
                ));
            }
            text.push_str(&format!(
                "H2: {}\n",
                if h2.holds() { "holds" } else { "fails" }
            ));
            emit(opts, &json!({ "sections": sets, "h2": h2 }), text)?;
            write_csv(opts, config, None)?;
            Ok(0)
        }
        Command::Simulate {
            times,
            lambda,
            threads,
            level_cap,
            density,
        } => {
            let z = config.spectrum()?;
            let ths = sample_threads(z, *threads, *level_cap);
            let model = DiagonalModel::new(z.clone(), ths, 1, *level_cap)?;
            let times: Vec<DyadicTime> = times
                .iter()
                .map(|s| s.parse())
                .collect::<dyadic_core::Result<_>>()?;
            let decompositions: Vec<_> = times
                .iter()
                .map(|t| dyadic_decompose(t, 1 << 20))
                .collect::<dyadic_core::Result<_>>()?;
            let norms: Vec<_> = (0..=(*level_cap).min(10))
                .map(|n| model.norm_bound_check(n))
                .collect::<dyadic_core::Result<_>>()?;
            let n_max = config.settings.n_max;
            let l_seq: Vec<u32> = (0..=n_max).collect();
            let s_seq = vec![1u64; l_seq.len()];
            let covers: Vec<_> = config
                .settings
                .epsilon
                .iter()
                .map(|e| {
                    let mut p = CoverParams::new(e.clone());
                    p.search_bound = n_max as usize;
                    (fmt_rational(e), quasi_uniform_cover(z, &l_seq, &s_seq, &p))
                })
                .collect();
            let lam = if lambda.is_empty() {
                vec![Complex64::new(1.0, 0.0); 6]
            } else {
                lambda
                    .iter()
                    .map(|s| parse_complex(s))
                    .collect::<Result<_>>()?
            };
            let residual = joint_spectrum_residual(z, &lam, *density, opts.exec);
            let trace = model.trace(&times)?;

            let mut text = format!(
                "model: {} threads up to level {}\n",
                model.threads.len(),
                level_cap
            );
            for (t, d) in times.iter().zip(&decompositions) {
                text.push_str(&format!("t = {t}: F = {}, L = {}, S = {}\n", d.f, d.l, d.s));
            }
            let all_norms = norms.iter().all(|c| c.holds);
            text.push_str(&format!(
                "norm bound |pi_n| <= exp(2^-n zeta): {}\n",
                if all_norms { "holds" } else { "FAILS" }
            ));
            for (e, c) in &covers {
                text.push_str(&format!("cover eps = {e}: {}\n", describe_cover(c)));
            }
            text.push_str(&format!(
                "residual = {:.*e} (coarse {:.*e}) over {} samples\n",
                digits, residual.residual, digits, residual.residual_coarse, residual.samples
            ));
            emit(
                opts,
                &json!({
                    "decompositions": decompositions,
                    "norm_checks": norms,
                    "covers": covers,
                    "residual": residual,
                    "trace": trace,
                }),
                text,
            )?;
            write_csv(opts, config, Some(trace_csv(&trace, digits)))?;
            Ok(0)
        }
        Command::Towers => {
            let Some(t) = &config.tower else {
                bail!("the config has no `tower` line");
            };
            let r = analyze(t);
            let text = format!(
                "{}\nlim: rank {} (components {:?})\nlim^1 vanishes: {}\nmiddle term: {:?}\n",
                r.tower, r.limit.rank, r.limit.surviving, r.lim1_vanishes, r.middle
            );
            emit(opts, &r, text)?;
            write_csv(opts, config, None)?;
            Ok(0)
        }
        Command::Examples { .. } => unreachable!("handled before dispatch"),
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    let f = |x: &str| {
        x.trim()
            .parse::<f64>()
            .with_context(|| format!("not a number: {x}"))
    };
    Ok(Complex64::new(f(re)?, f(im)?))
}

fn describe_cover(c: &dyadic_core::simulate::CoverOutcome) -> String {
    use dyadic_core::simulate::CoverOutcome::*;
    match c {
        Found { indices, .. } => format!("found indices {indices:?}"),
        Refuted {
            indices_checked, ..
        } => {
            format!(
                "refuted by a thread on indices {}..={}",
                indices_checked.0, indices_checked.1
            )
        }
        Exhausted => "not found within the search bound".into(),
    }
}
