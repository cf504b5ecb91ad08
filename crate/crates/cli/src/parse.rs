//! Number, fraction and grid parsing for command-line flags.

use std::fmt;

/// A flag value that could not be parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

const MAX_DENOMINATOR: u32 = 20;

/// Parses a real number written as a decimal (`0.75`, `1e-3`) or a fraction
/// (`2/3`).
///
/// A decimal with four or more fractional digits that is exactly the rounded
/// form of a fraction `p/q` with `q ≤ 20` (e.g. `0.6667`, `0.1818`) is
/// replaced by that fraction, so that typed approximations of `2/3` or `1/α`
/// hit the exact special cases.
pub fn parse_real(s: &str) -> Result<f64, ParseError> {
    let s = s.trim();
    let bad = || ParseError(format!("cannot parse {s:?} as a number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| bad())?;
        let q: f64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0.0 {
            return Err(ParseError(format!("zero denominator in {s:?}")));
        }
        return Ok(p / q);
    }
    let v: f64 = s.parse().map_err(|_| bad())?;
    if !v.is_finite() {
        return Err(ParseError(format!("{s:?} is not finite")));
    }
    Ok(snap_rounded_fraction(s, v).unwrap_or(v))
}

fn snap_rounded_fraction(literal: &str, v: f64) -> Option<f64> {
    if literal.contains(['e', 'E']) {
        return None;
    }
    let digits = literal.split_once('.')?.1.len();
    if digits < 4 {
        return None;
    }
    let shown = format!("{v:.digits$}");
    for q in 2..=MAX_DENOMINATOR {
        let p = (v * q as f64).round();
        let f = p / q as f64;
        if f != v && format!("{f:.digits$}") == shown {
            return Some(f);
        }
    }
    None
}

/// Parses a grid: a comma-separated list of reals, or `a:b:n` for `n`
/// geometrically spaced points from `a` to `b` (both positive).
pub fn parse_grid(s: &str) -> Result<Vec<f64>, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseError("empty grid".into()));
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [_] => s.split(',').map(parse_real).collect(),
        [a, b, n] => {
            let (a, b) = (parse_real(a)?, parse_real(b)?);
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| ParseError(format!("bad point count in {s:?}")))?;
            if !(a > 0.0 && b > 0.0) || n == 0 {
                return Err(ParseError(format!(
                    "geometric grid {s:?} needs positive ends and at least one point"
                )));
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            let r = (b / a).ln() / (n - 1) as f64;
            Ok((0..n)
                .map(|i| match i {
                    0 => a,
                    i if i == n - 1 => b,
                    i => a * (r * i as f64).exp(),
                })
                .collect())
        }
        _ => Err(ParseError(format!(
            "grid {s:?} is neither a comma list nor a:b:n"
        ))),
    }
}
