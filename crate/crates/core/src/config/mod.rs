//! Line-oriented text format for spectra, settings and towers.
//!
//! ```text
//! # comment
//! rect re=[-1,0] im=[-1*pi,1*pi]
//! n_max = 30
//! tower constant=[2]
//! ```

mod builtins;

pub use builtins::{builtin, BUILTIN_NAMES};

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::classify::ClassifyParams;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, parse_rational, rat, PiLinear};
use crate::exec::Exec;
use crate::spectrum::{NSeq, PrimeFamily, Primitive, SpectrumSet};
use crate::threads::SearchParams;
use crate::towers::{Tower, TowerMaps};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub n_max: u32,
    pub k: u32,
    pub search_depth: u32,
    pub node_budget: u64,
    #[serde(with = "crate::exactnum::ser_rat")]
    pub delta: BigRational,
    #[serde(serialize_with = "ser_rat_list")]
    pub epsilon: Vec<BigRational>,
    #[serde(with = "crate::exactnum::ser_rat")]
    pub tolerance: BigRational,
    pub float_digits: usize,
    pub ext_zero: bool,
    pub emit_csv: bool,
}

fn ser_rat_list<S: serde::Serializer>(
    v: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rational))
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            n_max: 24,
            k: 2,
            search_depth: 30,
            node_budget: 100_000,
            delta: rat(7, 5),
            epsilon: vec![rat(1, 10), rat(1, 100), rat(1, 1000)],
            tolerance: rat(1, 1000),
            float_digits: 12,
            ext_zero: false,
            emit_csv: false,
        }
    }
}

impl Settings {
    pub fn classify_params(&self, exec: Exec) -> ClassifyParams {
        ClassifyParams {
            n_max: self.n_max,
            k: self.k,
            search: SearchParams {
                depth: self.search_depth,
                delta: self.delta.clone(),
                node_budget: self.node_budget,
                exec,
                ..SearchParams::default()
            },
            tolerance: crate::exactnum::rational_to_f64(&self.tolerance),
            ext_zero_assumed: self.ext_zero,
            ..ClassifyParams::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub spectrum: Option<SpectrumSet>,
    pub settings: Settings,
    pub tower: Option<Tower>,
}

impl Config {
    pub fn spectrum(&self) -> Result<&SpectrumSet> {
        self.spectrum.as_ref().ok_or(Error::EmptySpectrum)
    }
}

const KEYS: &[&str] = &[
    "n_max",
    "k",
    "search_depth",
    "node_budget",
    "delta",
    "epsilon",
    "tolerance",
    "float_digits",
    "ext_zero",
    "emit_csv",
];

/// Canonical text; `parse_config(&render(c))` returns `c`.
pub fn render(c: &Config) -> String {
    c.to_string()
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(z) = &self.spectrum {
            writeln!(f, "{z}")?;
        }
        let s = &self.settings;
        let eps: Vec<String> = s.epsilon.iter().map(fmt_rational).collect();
        writeln!(f, "n_max = {}", s.n_max)?;
        writeln!(f, "k = {}", s.k)?;
        writeln!(f, "search_depth = {}", s.search_depth)?;
        writeln!(f, "node_budget = {}", s.node_budget)?;
        writeln!(f, "delta = {}", fmt_rational(&s.delta))?;
        writeln!(f, "epsilon = {}", eps.join(", "))?;
        writeln!(f, "tolerance = {}", fmt_rational(&s.tolerance))?;
        writeln!(f, "float_digits = {}", s.float_digits)?;
        writeln!(f, "ext_zero = {}", s.ext_zero)?;
        writeln!(f, "emit_csv = {}", s.emit_csv)?;
        if let Some(t) = &self.tower {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn syntax(&self, byte: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.no,
            column: self.text[..byte.min(self.text.len())].chars().count() + 1,
            message: message.into(),
        }
    }

    fn semantic(&self, message: impl Into<String>) -> Error {
        Error::Semantic {
            line: self.no,
            message: message.into(),
        }
    }
}

/// `key=value` fields after the leading keyword, with byte offsets of values.
fn fields<'a>(line: &Line<'a>, start: usize) -> Result<Vec<(&'a str, usize, &'a str)>> {
    let text = line.text;
    let bytes = text.as_bytes();
    let mut keys = Vec::new();
    let mut depth = 0i32;
    let mut i = start;
    while i < bytes.len() {
        match bytes[i] {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'=' if depth == 0 => {
                let mut k = i;
                while k > start && (bytes[k - 1].is_ascii_alphanumeric() || bytes[k - 1] == b'_') {
                    k -= 1;
                }
                if k == i || (k > start && !bytes[k - 1].is_ascii_whitespace()) {
                    return Err(line.syntax(i, "expected `key=value`"));
                }
                keys.push((k, i));
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(line.syntax(text.len(), "unbalanced brackets"));
    }
    if keys.is_empty() {
        let rest = text[start..].trim();
        if !rest.is_empty() {
            return Err(line.syntax(
                start + text[start..].find(rest).unwrap_or(0),
                "expected `key=value`",
            ));
        }
    } else if !text[start..keys[0].0].trim().is_empty() {
        return Err(line.syntax(start, "expected `key=value`"));
    }
    let mut out = Vec::new();
    for (n, &(k, eq)) in keys.iter().enumerate() {
        let end = keys.get(n + 1).map_or(text.len(), |next| next.0);
        let raw = &text[eq + 1..end];
        let lead = raw.len() - raw.trim_start().len();
        out.push((&text[k..eq], eq + 1 + lead, raw.trim()));
    }
    Ok(out)
}

fn parse_rat(line: &Line, at: usize, v: &str) -> Result<BigRational> {
    parse_rational(v).ok_or_else(|| line.syntax(at, format!("expected a rational, found `{v}`")))
}

fn parse_pl(line: &Line, at: usize, v: &str) -> Result<PiLinear> {
    v.parse::<PiLinear>()
        .map_err(|e| line.syntax(at + e.offset, format!("invalid number `{v}`: {}", e.reason)))
}

/// Top-level items of `[a,b,…]` with their byte offsets.
fn bracket_items<'a>(line: &Line, at: usize, v: &'a str) -> Result<Vec<(usize, &'a str)>> {
    let inner = v
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| line.syntax(at, format!("expected `[…]`, found `{v}`")))?;
    let mut out = Vec::new();
    let mut depth = 0;
    let mut begin = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((begin, &inner[begin..i]));
                begin = i + 1;
            }
            _ => {}
        }
    }
    if !inner.trim().is_empty() {
        out.push((begin, &inner[begin..]));
    }
    Ok(out
        .into_iter()
        .map(|(b, s)| {
            let lead = s.len() - s.trim_start().len();
            (at + 1 + b + lead, s.trim())
        })
        .collect())
}

fn pair<T>(
    line: &Line,
    at: usize,
    v: &str,
    f: impl Fn(&Line, usize, &str) -> Result<T>,
) -> Result<(T, T)> {
    let items = bracket_items(line, at, v)?;
    if items.len() != 2 {
        return Err(line.syntax(at, format!("expected two bounds, found {}", items.len())));
    }
    Ok((
        f(line, items[0].0, items[0].1)?,
        f(line, items[1].0, items[1].1)?,
    ))
}

fn int_list(line: &Line, at: usize, v: &str) -> Result<Vec<i64>> {
    bracket_items(line, at, v)?
        .into_iter()
        .map(|(a, s)| {
            s.parse()
                .map_err(|_| line.syntax(a, format!("expected an integer, found `{s}`")))
        })
        .collect()
}

struct Fields<'a> {
    items: Vec<(&'a str, usize, &'a str)>,
}

impl<'a> Fields<'a> {
    fn take(&mut self, line: &Line, key: &str) -> Result<(usize, &'a str)> {
        let pos = self
            .items
            .iter()
            .position(|(k, _, _)| *k == key)
            .ok_or_else(|| line.syntax(line.text.len(), format!("missing `{key}=`")))?;
        let (_, at, v) = self.items.remove(pos);
        if self.items.iter().any(|(k, _, _)| *k == key) {
            return Err(line.syntax(at, format!("duplicate `{key}=`")));
        }
        Ok((at, v))
    }

    fn finish(self, line: &Line) -> Result<()> {
        match self.items.first() {
            Some((k, at, _)) => Err(line.syntax(at - k.len() - 1, format!("unknown field `{k}`"))),
            None => Ok(()),
        }
    }
}

fn parse_nseq(line: &Line, at: usize, v: &str) -> Result<NSeq> {
    match v {
        "double" => Ok(NSeq::Double),
        "linear" => Ok(NSeq::Linear),
        "doubleindex" => Ok(NSeq::DoubleIndex),
        _ if v.starts_with('[') => {
            let xs = int_list(line, at, v)?;
            xs.into_iter()
                .map(|x| {
                    u32::try_from(x).map_err(|_| line.syntax(at, "nseq values must be nonnegative"))
                })
                .collect::<Result<Vec<u32>>>()
                .map(NSeq::Explicit)
        }
        _ => Err(line.syntax(at, format!("unknown nseq `{v}`"))),
    }
}

fn parse_primitive(line: &Line, kw: &str, start: usize) -> Result<Primitive> {
    let mut f = Fields {
        items: fields(line, start)?,
    };
    let p = match kw {
        "point" => {
            let (a, re) = f.take(line, "re")?;
            let (b, im) = f.take(line, "im")?;
            Primitive::Point {
                re: parse_rat(line, a, re)?,
                im: parse_pl(line, b, im)?,
            }
        }
        "vsegment" => {
            let (a, re) = f.take(line, "re")?;
            let (b, im) = f.take(line, "im")?;
            let (im_lo, im_hi) = pair(line, b, im, parse_pl)?;
            Primitive::VSegment {
                re: parse_rat(line, a, re)?,
                im_lo,
                im_hi,
            }
        }
        "ilattice" => {
            let (a, re) = f.take(line, "re")?;
            let (b, base) = f.take(line, "base")?;
            let (c, step) = f.take(line, "step")?;
            Primitive::ILattice {
                re: parse_rat(line, a, re)?,
                base: parse_pl(line, b, base)?,
                step: parse_pl(line, c, step)?,
            }
        }
        "vline" => {
            let (a, re) = f.take(line, "re")?;
            Primitive::VLine {
                re: parse_rat(line, a, re)?,
            }
        }
        "rect" => {
            let (a, re) = f.take(line, "re")?;
            let (b, im) = f.take(line, "im")?;
            let (re_lo, re_hi) = pair(line, a, re, parse_rat)?;
            let (im_lo, im_hi) = pair(line, b, im, parse_pl)?;
            Primitive::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            }
        }
        "primefamily" => {
            let (a, n) = f.take(line, "nseq")?;
            let (b, j) = f.take(line, "J")?;
            let nseq = parse_nseq(line, a, n)?;
            let truncation = j
                .parse()
                .map_err(|_| line.syntax(b, format!("expected a count, found `{j}`")))?;
            Primitive::PrimeFamily(PrimeFamily { nseq, truncation })
        }
        _ => unreachable!("caller checks the keyword"),
    };
    f.finish(line)?;
    p.validate().map_err(|e| match e {
        Error::InvalidPrimitive { reason, .. } => line.semantic(reason),
        other => line.semantic(other.to_string()),
    })?;
    Ok(p)
}

fn parse_tower(line: &Line, start: usize) -> Result<Tower> {
    let rest = line.text[start..].trim();
    if rest == "zero" {
        return Tower::new(TowerMaps::Zero).map_err(|e| line.semantic(e.to_string()));
    }
    let mut f = Fields {
        items: fields(line, start)?,
    };
    let kind = f.items.first().map(|(k, _, _)| *k).unwrap_or("");
    let tower = match kind {
        "constant" => {
            let (a, v) = f.take(line, "constant")?;
            Tower::new(TowerMaps::Constant(int_list(line, a, v)?))
        }
        "periodic" => {
            let (a, v) = f.take(line, "periodic")?;
            let diags = bracket_items(line, a, v)?
                .into_iter()
                .map(|(b, s)| int_list(line, b, s))
                .collect::<Result<Vec<_>>>()?;
            Tower::new(TowerMaps::Periodic(diags))
        }
        "matrices" => {
            let (a, v) = f.take(line, "matrices")?;
            let mats = bracket_items(line, a, v)?
                .into_iter()
                .map(|(b, s)| {
                    bracket_items(line, b, s)?
                        .into_iter()
                        .map(|(c, r)| int_list(line, c, r))
                        .collect()
                })
                .collect::<Result<Vec<Vec<Vec<i64>>>>>()?;
            Tower::from_matrices(&mats)
        }
        _ => {
            return Err(line.syntax(
                start,
                "expected `zero`, `constant=`, `periodic=` or `matrices=`",
            ))
        }
    };
    f.finish(line)?;
    tower.map_err(|e| line.semantic(e.to_string()))
}

fn parse_setting(line: &Line, s: &mut Settings, key: &str, at: usize, v: &str) -> Result<()> {
    let uint = |v: &str| -> Result<u64> {
        v.parse::<u64>()
            .map_err(|_| line.syntax(at, format!("expected a nonnegative integer, found `{v}`")))
    };
    let depth = |v: &str| -> Result<u32> {
        let n = uint(v)?;
        if n == 0 || n > u32::MAX as u64 {
            return Err(line.semantic(format!("`{key}` must be at least 1")));
        }
        Ok(n as u32)
    };
    let positive = |at: usize, v: &str| -> Result<BigRational> {
        let q = parse_rat(line, at, v)?;
        if !q.is_positive() {
            return Err(line.semantic(format!("`{key}` must be a positive rational")));
        }
        Ok(q)
    };
    let boolean = |v: &str| match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(line.syntax(at, format!("expected `true` or `false`, found `{v}`"))),
    };
    match key {
        "n_max" => s.n_max = depth(v)?,
        "k" => s.k = depth(v)?,
        "search_depth" => s.search_depth = depth(v)?,
        "node_budget" => s.node_budget = depth(v)? as u64,
        "delta" => s.delta = positive(at, v)?,
        "tolerance" => s.tolerance = positive(at, v)?,
        "float_digits" => s.float_digits = depth(v)? as usize,
        "ext_zero" => s.ext_zero = boolean(v)?,
        "emit_csv" => s.emit_csv = boolean(v)?,
        "epsilon" => {
            let mut out = Vec::new();
            let mut off = 0;
            for item in v.split(',') {
                let lead = item.len() - item.trim_start().len();
                out.push(positive(at + off + lead, item.trim())?);
                off += item.len() + 1;
            }
            s.epsilon = out;
        }
        _ => unreachable!("caller checks the key"),
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<Config> {
    let mut prims = Vec::new();
    let mut settings = Settings::default();
    let mut tower = None;
    let mut seen = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let line = Line {
            no: i + 1,
            text: body,
        };
        let trimmed = body.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let start = body.len() - trimmed.len();
        let kw_len = trimmed
            .find(|c: char| c.is_whitespace() || c == '=')
            .unwrap_or(trimmed.len());
        let kw = &trimmed[..kw_len];
        let after = start + kw_len;
        match kw {
            "point" | "vsegment" | "ilattice" | "vline" | "rect" | "primefamily" => {
                prims.push(parse_primitive(&line, kw, after)?);
            }
            "tower" => {
                if tower.is_some() {
                    return Err(line.semantic("only one tower per config"));
                }
                tower = Some(parse_tower(&line, after)?);
            }
            _ if KEYS.contains(&kw) => {
                let rest = &body[after..];
                let Some(eq) = rest.find('=') else {
                    return Err(line.syntax(after, format!("expected `{kw} = value`")));
                };
                if !rest[..eq].trim().is_empty() {
                    return Err(line.syntax(after, format!("expected `{kw} = value`")));
                }
                if seen.contains(&kw) {
                    return Err(line.semantic(format!("`{kw}` set twice")));
                }
                seen.push(kw);
                let v = &rest[eq + 1..];
                let lead = v.len() - v.trim_start().len();
                let v = v.trim();
                if v.is_empty() {
                    return Err(line.syntax(body.len(), format!("missing value for `{kw}`")));
                }
                parse_setting(&line, &mut settings, kw, after + eq + 1 + lead, v)?;
            }
            _ => return Err(line.syntax(start, format!("unknown keyword `{kw}`"))),
        }
    }
    let spectrum = if prims.is_empty() {
        None
    } else {
        Some(SpectrumSet::new(prims)?)
    };
    Ok(Config {
        spectrum,
        settings,
        tower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn rectangle_line() {
        let c = parse_config("rect re=[-1,0] im=[-1*pi,1*pi]\n").unwrap();
        assert_eq!(
            c.spectrum.unwrap().primitives(),
            &[Primitive::Rect {
                re_lo: int(-1),
                re_hi: int(0),
                im_lo: -PiLinear::pi(),
                im_hi: PiLinear::pi()
            }]
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_config("rect re=[0,-1] im=[-pi,pi]"),
            Err(Error::Semantic {
                line: 1,
                message: "re_lo > re_hi".into()
            })
        );
        assert_eq!(
            parse_config("vline re=0\nvline re=1/x"),
            Err(Error::Syntax {
                line: 2,
                column: 10,
                message: "expected a rational, found `1/x`".into()
            })
        );
        assert!(matches!(
            parse_config("vline re=0 foo=1"),
            Err(Error::Syntax {
                line: 1,
                column: 12,
                ..
            })
        ));
        assert!(matches!(
            parse_config("n_max = 0"),
            Err(Error::Semantic { .. })
        ));
        assert!(matches!(
            parse_config("color = red"),
            Err(Error::Syntax { column: 1, .. })
        ));
    }

    #[test]
    fn pilinear_with_spaces_and_round_trip() {
        let text = "ilattice re=-1/2 base=1/3 + 1/4*pi step=2*pi\nprimefamily nseq=[3,5,9] J=3\nepsilon = 1/2, 1/8\next_zero = true\ntower periodic=[[2,1],[1,-1]]\n";
        let c = parse_config(text).unwrap();
        let again = parse_config(&render(&c)).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.settings.epsilon, vec![rat(1, 2), rat(1, 8)]);
    }

    #[test]
    fn towers() {
        assert_eq!(parse_config("tower zero").unwrap().tower.unwrap().rank, 0);
        assert!(matches!(
            parse_config("tower matrices=[[[1,1],[0,1]]]"),
            Err(Error::Semantic { line: 1, .. })
        ));
    }
}
