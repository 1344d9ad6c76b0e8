//! Parsers for region, indicator and point arguments.

use std::path::Path;

use boundary_core::geometry::{Arc, ArcUnion, BoundaryPoint, DiscPoint};
use boundary_core::harmonic::BoundaryIndicator;
use boundary_core::regions::{
    make_attached_example, make_explicit, make_interleaved_region, make_prop2b_region, make_prop2c_region,
    make_radial_region, make_stolz_region, ApproachRegion,
};

use crate::CliError;

fn invalid(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Invalid { field: field.to_string(), reason: reason.into() }
}

fn num(field: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| invalid(field, format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(invalid(field, format!("`{s}` is not finite")));
    }
    Ok(v)
}

/// Built-in regions: `prop2b`, `prop2c`, `stolz:B`, `radial`, `attached`,
/// `interleaved`, `explicit:PATH`, each optionally followed by `@ANGLE` for the
/// base point (default 0).
pub fn parse_region(spec: &str) -> Result<ApproachRegion, CliError> {
    let (name, angle) = match spec.rsplit_once('@') {
        Some((n, a)) => (n, num("region", a)?),
        None => (spec, 0.0),
    };
    let w = BoundaryPoint::new(angle);
    let region = match name.trim() {
        "prop2b" => make_prop2b_region(w),
        "prop2c" => make_prop2c_region(w),
        "radial" => make_radial_region(w),
        "attached" => make_attached_example(w),
        "interleaved" => make_interleaved_region(w),
        other => {
            if let Some(b) = other.strip_prefix("stolz:") {
                let b: u32 = b.parse().map_err(|_| invalid("region", format!("bad Stolz aperture `{b}`")))?;
                make_stolz_region(b, w)
            } else if let Some(path) = other.strip_prefix("explicit:") {
                let pts = read_points_file(Path::new(path), "region")?;
                if pts.is_empty() {
                    return Err(invalid("region", format!("{path} holds no points")));
                }
                make_explicit(pts, w)
            } else {
                return Err(invalid("region", format!("unknown region `{other}`")));
            }
        }
    };
    Ok(region)
}

fn parse_point(field: &str, s: &str) -> Result<DiscPoint, CliError> {
    let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
    let [x, y] = parts[..] else {
        return Err(invalid(field, format!("expected `x,y`, got `{s}`")));
    };
    DiscPoint::new(num(field, x)?, num(field, y)?).map_err(|e| invalid(field, e.to_string()))
}

/// One point per line as `x,y` or `x y`; `#` starts a comment.
pub fn read_points_file(path: &Path, field: &str) -> Result<Vec<DiscPoint>, CliError> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_point(field, l))
        .collect()
}

/// `x,y;x,y;...` or `file:PATH`.
pub fn parse_points(spec: &str) -> Result<Vec<DiscPoint>, CliError> {
    if let Some(path) = spec.strip_prefix("file:") {
        return read_points_file(Path::new(path), "points");
    }
    spec.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_point("points", s)).collect()
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct IndicatorFile {
    terms: Vec<TermFile>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    #[serde(default = "one")]
    coeff: f64,
    arcs: Vec<(f64, f64)>,
}

fn one() -> f64 {
    1.0
}

fn term(coeff: f64, arcs: &[(f64, f64)]) -> Result<(f64, ArcUnion), CliError> {
    if !coeff.is_finite() {
        return Err(invalid("indicator", format!("coefficient {coeff} is not finite")));
    }
    let list = arcs
        .iter()
        .map(|&(s, l)| Arc::new(s, l).map_err(|e| invalid("indicator", e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((coeff, ArcUnion::normalize(&list)))
}

/// Terms separated by `;`, each `COEFF*START:LEN+START:LEN...` (coefficient
/// defaults to 1), or `file:PATH` holding
/// `{"terms": [{"coeff": c, "arcs": [[start, len], ...]}, ...]}`.
pub fn parse_indicator(spec: &str) -> Result<BoundaryIndicator, CliError> {
    let mut f = BoundaryIndicator::new();
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let file: IndicatorFile = serde_json::from_str(&text).map_err(|e| invalid("indicator", e.to_string()))?;
        for t in &file.terms {
            let (c, u) = term(t.coeff, &t.arcs)?;
            f.add(c, u);
        }
        if f.terms.is_empty() {
            return Err(invalid("indicator", "no terms"));
        }
        return Ok(f);
    }
    for t in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (coeff, arcs) = match t.split_once('*') {
            Some((c, rest)) => (num("indicator", c)?, rest),
            None => (1.0, t),
        };
        let mut list = Vec::new();
        for a in arcs.split('+') {
            let (s, l) = a.split_once(':').ok_or_else(|| invalid("indicator", format!("expected START:LEN, got `{a}`")))?;
            list.push((num("indicator", s)?, num("indicator", l)?));
        }
        let (c, u) = term(coeff, &list)?;
        f.add(c, u);
    }
    if f.terms.is_empty() {
        return Err(invalid("indicator", "no terms"));
    }
    Ok(f)
}

/// Comma-separated list of numbers.
pub fn parse_list(field: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(|p| num(field, p)).collect()
}
