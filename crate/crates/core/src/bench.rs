//! The bench-description language.
//!
//! One directive per line, `#` starts a comment, blank lines are ignored:
//!
//! ```text
//! modes <int>
//! source alpha=<angle> mode=<int>
//! bs <i> <j>
//! pbs <i> <j>
//! phase <i> <angle>
//! hwp <i> <degrees>
//! qbs <i> <j>
//! detect <name> mode=<int> pol=<H|V|any>
//! postselect pol=<H|V>
//! ```
//!
//! `<angle>` is radians, written either as a decimal literal or as `pi`,
//! `<num>*pi`, `pi/<num>` or `<num>*pi/<num>`, with an optional leading `-`.
//! `<degrees>` is a decimal literal. `modes` must come before any line that
//! names a mode; everything else may appear in any order.
//!
//! Elements keep their file order, which is also the order the photon meets
//! them.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::elements::{compose, Element};
use crate::error::{Error, ParseError, Result};
use crate::measurement::{DetectorSpec, PolFilter};
use crate::state::{source_state, Polarization, PureState};

/// Upper bound on `modes`; unitaries are dense `2d x 2d` matrices.
pub const MAX_MODES: usize = 64;

/// Largest denominator tried when printing an angle as a multiple of pi.
const MAX_PI_DENOMINATOR: u32 = 360;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Source {
    /// Polarization mixing angle in radians: `sinα|H⟩ + cosα|V⟩`.
    pub alpha: f64,
    pub mode: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchCircuit {
    pub modes: usize,
    pub source: Source,
    pub elements: Vec<Element>,
    pub detectors: Vec<DetectorSpec>,
    pub postselect: Option<Polarization>,
}

impl BenchCircuit {
    pub fn new(modes: usize, source: Source) -> Self {
        BenchCircuit {
            modes,
            source,
            elements: Vec::new(),
            detectors: Vec::new(),
            postselect: None,
        }
    }

    pub fn element(mut self, e: Element) -> Self {
        self.elements.push(e);
        self
    }

    pub fn detector(mut self, name: &str, mode: usize, pol: PolFilter) -> Self {
        self.detectors.push(DetectorSpec::new(name, mode, pol));
        self
    }

    pub fn postselect(mut self, pol: Polarization) -> Self {
        self.postselect = Some(pol);
        self
    }

    pub fn detector_named(&self, name: &str) -> Option<&DetectorSpec> {
        self.detectors.iter().find(|d| d.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes < 2 || self.modes > MAX_MODES {
            return Err(Error::InvalidDimension(self.modes));
        }
        if self.source.mode >= self.modes {
            return Err(Error::InvalidMode {
                mode: self.source.mode,
                modes: self.modes,
            });
        }
        if !self.source.alpha.is_finite() {
            return Err(Error::InvalidElement("source alpha must be finite".into()));
        }
        for e in &self.elements {
            e.validate(self.modes)?;
        }
        let mut seen = HashSet::new();
        for d in &self.detectors {
            if d.mode >= self.modes {
                return Err(Error::InvalidMode {
                    mode: d.mode,
                    modes: self.modes,
                });
            }
            if !valid_detector_name(&d.name) {
                return Err(Error::InvalidElement(format!("bad detector name {:?}", d.name)));
            }
            if !seen.insert(d.name.as_str()) {
                return Err(Error::InvalidElement(format!("duplicate detector {}", d.name)));
            }
        }
        Ok(())
    }

    /// The photon's state after the last element, before any detection.
    pub fn final_state(&self) -> Result<PureState> {
        self.validate()?;
        let input = source_state(self.source.alpha, self.source.mode, self.modes)?;
        input.apply(&compose(&self.elements, self.modes)?)
    }
}

fn valid_detector_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(['=', '#']) && !name.chars().any(char::is_whitespace)
}

/// Parse a decimal literal, rejecting `inf`/`nan` spellings.
fn parse_decimal(tok: &str) -> std::result::Result<f64, String> {
    let ok_chars = !tok.is_empty()
        && tok.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
        && tok.chars().any(|c| c.is_ascii_digit());
    match tok.parse::<f64>() {
        Ok(x) if ok_chars && x.is_finite() => Ok(x),
        _ => Err(format!("malformed number {tok:?}")),
    }
}

fn pi_multiple(num: f64, den: f64) -> f64 {
    num * PI / den
}

pub fn parse_angle(tok: &str) -> std::result::Result<f64, String> {
    let (sign, body) = match tok.strip_prefix('-') {
        Some(rest) if rest.contains("pi") => (-1.0, rest),
        _ => (1.0, tok),
    };
    if !body.contains("pi") {
        return parse_decimal(tok);
    }
    let bad = || format!("malformed angle {tok:?}");
    let (num, rest) = match body.split_once('*') {
        Some((n, rest)) => (parse_decimal(n).map_err(|_| bad())?, rest),
        None => (1.0, body),
    };
    let den = match rest.strip_prefix("pi") {
        Some("") => 1.0,
        Some(tail) => match tail.strip_prefix('/') {
            Some(d) => parse_decimal(d).map_err(|_| bad())?,
            None => return Err(bad()),
        },
        None => return Err(bad()),
    };
    if den == 0.0 {
        return Err(format!("zero denominator in {tok:?}"));
    }
    let value = sign * pi_multiple(num, den);
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

/// Shortest `pi` expression that parses back to exactly `x`, else a
/// 17-significant-digit decimal.
pub fn format_angle(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sign = if x < 0.0 { "-" } else { "" };
    let mag = x.abs();
    for q in 1..=MAX_PI_DENOMINATOR {
        let p = (mag / PI * q as f64).round();
        if !(1.0..=1e6).contains(&p) {
            continue;
        }
        if pi_multiple(p, q as f64).to_bits() != mag.to_bits() {
            continue;
        }
        let p = p as u64;
        return match (p, q) {
            (1, 1) => format!("{sign}pi"),
            (_, 1) => format!("{sign}{p}*pi"),
            (1, _) => format!("{sign}pi/{q}"),
            _ => format!("{sign}{p}*pi/{q}"),
        };
    }
    format!("{x:.16e}")
}

fn parse_index(tok: &str) -> std::result::Result<usize, String> {
    tok.parse::<usize>()
        .map_err(|_| format!("malformed integer {tok:?}"))
}

fn parse_pol(tok: &str, allow_any: bool) -> std::result::Result<PolFilter, String> {
    match tok {
        "H" => Ok(PolFilter::H),
        "V" => Ok(PolFilter::V),
        "any" if allow_any => Ok(PolFilter::Any),
        _ => Err(format!(
            "bad polarization {tok:?} (expected H, V{})",
            if allow_any { " or any" } else { "" }
        )),
    }
}

/// Split `key=value` arguments and insist on exactly `keys`, in any order.
fn keyed<'a>(args: &[&'a str], keys: &[&str]) -> std::result::Result<Vec<&'a str>, String> {
    let mut out: Vec<Option<&str>> = vec![None; keys.len()];
    for arg in args {
        let (k, v) = arg
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {arg:?}"))?;
        let slot = keys
            .iter()
            .position(|want| *want == k)
            .ok_or_else(|| format!("unexpected argument {k:?}"))?;
        if out[slot].replace(v).is_some() {
            return Err(format!("argument {k:?} given twice"));
        }
    }
    keys.iter()
        .zip(out)
        .map(|(k, v)| v.ok_or_else(|| format!("missing argument {k}=")))
        .collect()
}

fn arity(keyword: &str, args: &[&str], n: usize) -> std::result::Result<(), String> {
    if args.len() != n {
        return Err(format!("{keyword} takes {n} argument(s), got {}", args.len()));
    }
    Ok(())
}

struct Parser {
    modes: Option<usize>,
    source: Option<Source>,
    elements: Vec<Element>,
    detectors: Vec<DetectorSpec>,
    postselect: Option<Polarization>,
}

impl Parser {
    fn need_modes(&self) -> std::result::Result<usize, String> {
        self.modes
            .ok_or_else(|| "`modes` must be declared before any line that names a mode".to_string())
    }

    fn mode(&self, tok: &str) -> std::result::Result<usize, String> {
        let modes = self.need_modes()?;
        let m = parse_index(tok)?;
        if m >= modes {
            return Err(format!("mode {m} out of range (modes {modes})"));
        }
        Ok(m)
    }

    fn two_modes(&self, keyword: &str, args: &[&str]) -> std::result::Result<(usize, usize), String> {
        arity(keyword, args, 2)?;
        let (i, j) = (self.mode(args[0])?, self.mode(args[1])?);
        if i == j {
            return Err(format!("{keyword} needs two distinct modes, got {i} {j}"));
        }
        Ok((i, j))
    }

    fn line(&mut self, keyword: &str, args: &[&str]) -> std::result::Result<(), String> {
        match keyword {
            "modes" => {
                arity(keyword, args, 1)?;
                if self.modes.is_some() {
                    return Err("`modes` declared twice".into());
                }
                let d = parse_index(args[0])?;
                if !(2..=MAX_MODES).contains(&d) {
                    return Err(format!("modes must be between 2 and {MAX_MODES}, got {d}"));
                }
                self.modes = Some(d);
            }
            "source" => {
                let v = keyed(args, &["alpha", "mode"])?;
                let alpha = parse_angle(v[0])?;
                let mode = self.mode(v[1])?;
                if self.source.is_some() {
                    return Err("`source` declared twice".into());
                }
                self.source = Some(Source { alpha, mode });
            }
            "bs" => {
                let (i, j) = self.two_modes(keyword, args)?;
                self.elements.push(Element::Bs(i, j));
            }
            "pbs" => {
                let (i, j) = self.two_modes(keyword, args)?;
                self.elements.push(Element::Pbs(i, j));
            }
            "qbs" => {
                let (i, j) = self.two_modes(keyword, args)?;
                self.elements.push(Element::Qbs(i, j));
            }
            "phase" => {
                arity(keyword, args, 2)?;
                let i = self.mode(args[0])?;
                self.elements.push(Element::Phase(i, parse_angle(args[1])?));
            }
            "hwp" => {
                arity(keyword, args, 2)?;
                let i = self.mode(args[0])?;
                self.elements.push(Element::Hwp(i, parse_decimal(args[1])?));
            }
            "detect" => {
                let (name, rest) = args
                    .split_first()
                    .ok_or_else(|| "detect needs a name".to_string())?;
                if !valid_detector_name(name) {
                    return Err(format!("bad detector name {name:?}"));
                }
                let v = keyed(rest, &["mode", "pol"])?;
                let mode = self.mode(v[0])?;
                let pol = parse_pol(v[1], true)?;
                if self.detectors.iter().any(|d| d.name == *name) {
                    return Err(format!("duplicate detector name {name:?}"));
                }
                self.detectors.push(DetectorSpec::new(*name, mode, pol));
            }
            "postselect" => {
                let v = keyed(args, &["pol"])?;
                let pol = parse_pol(v[0], false)?
                    .polarization()
                    .expect("any is rejected above");
                if self.postselect.is_some() {
                    return Err("`postselect` declared twice".into());
                }
                self.postselect = Some(pol);
            }
            other => return Err(format!("unknown keyword {other:?}")),
        }
        Ok(())
    }
}

pub fn parse_bench(text: &str) -> std::result::Result<BenchCircuit, ParseError> {
    let mut p = Parser {
        modes: None,
        source: None,
        elements: Vec::new(),
        detectors: Vec::new(),
        postselect: None,
    };
    let mut last_line = 1;
    for (n, raw) in text.split('\n').enumerate() {
        let lineno = n + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw);
        let content = content.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((keyword, args)) = tokens.split_first() else {
            continue;
        };
        last_line = lineno;
        p.line(keyword, args)
            .map_err(|reason| ParseError::new(lineno, reason))?;
    }
    let modes = p
        .modes
        .ok_or_else(|| ParseError::new(last_line, "missing `modes` directive"))?;
    let source = p
        .source
        .ok_or_else(|| ParseError::new(last_line, "missing `source` directive"))?;
    Ok(BenchCircuit {
        modes,
        source,
        elements: p.elements,
        detectors: p.detectors,
        postselect: p.postselect,
    })
}

/// Canonical text: `modes`, `source`, elements, detectors, then `postselect`.
pub fn serialize(circuit: &BenchCircuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "modes {}", circuit.modes);
    let _ = writeln!(
        out,
        "source alpha={} mode={}",
        format_angle(circuit.source.alpha),
        circuit.source.mode
    );
    for e in &circuit.elements {
        let _ = match *e {
            Element::Bs(i, j) | Element::Pbs(i, j) | Element::Qbs(i, j) => {
                writeln!(out, "{} {i} {j}", e.keyword())
            }
            Element::Phase(i, theta) => writeln!(out, "phase {i} {}", format_angle(theta)),
            Element::Hwp(i, deg) => writeln!(out, "hwp {i} {deg}"),
        };
    }
    for d in &circuit.detectors {
        let _ = writeln!(out, "detect {} mode={} pol={}", d.name, d.mode, d.pol);
    }
    if let Some(pol) = circuit.postselect {
        let _ = writeln!(out, "postselect pol={pol}");
    }
    out
}
