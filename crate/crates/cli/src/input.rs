use std::fs;
use std::io::Read;
use std::path::Path;

use slicereg::maps::{caratheodory_extremal, koebe};
use slicereg::quat::{Quaternion, UnitImaginary};
use slicereg::series::{TruncatedSeries, DEFAULT_DEGREE};
use slicereg::verify::LaurentTail;

use crate::error::CliError;

/// Names resolved without a file.
pub const BUILTINS: [&str; 5] = ["koebe", "caratheodory-extremal", "identity", "half-identity", "geometric"];

#[derive(Debug, Clone)]
pub struct Operand {
    pub name: String,
    pub series: TruncatedSeries,
}

pub fn builtin(name: &str, degree: usize) -> Option<TruncatedSeries> {
    let one = Quaternion::ONE;
    Some(match name {
        "koebe" => koebe(degree),
        "caratheodory-extremal" => caratheodory_extremal(0.0, UnitImaginary::I, degree),
        "identity" => TruncatedSeries::identity(degree),
        "half-identity" => TruncatedSeries::monomial(1, one.scale(0.5), degree),
        "geometric" => TruncatedSeries::from_fn(degree, |n| if n == 0 { Quaternion::ZERO } else { one }),
        _ => return None,
    })
}

fn read_text(spec: &str) -> Result<(String, String), CliError> {
    if spec == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(("stdin".into(), s));
    }
    if spec.trim_start().starts_with('{') {
        return Ok(("inline".into(), spec.to_string()));
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {spec}: {e}")))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| spec.to_string());
    Ok((name, text))
}

fn load_file(spec: &str) -> Result<Operand, CliError> {
    let (name, text) = read_text(spec)?;
    let series = serde_json::from_str(&text).map_err(|e| CliError::input(format!("malformed series {name}: {e}")))?;
    Ok(Operand { name, series })
}

/// Resolves operands in order. Built-ins take the explicit degree, else the
/// largest degree among the file operands, else the default.
pub fn resolve_all(specs: &[&str], degree: Option<usize>) -> Result<Vec<Operand>, CliError> {
    let mut loaded: Vec<Option<Operand>> = Vec::with_capacity(specs.len());
    for spec in specs {
        loaded.push(if BUILTINS.contains(spec) { None } else { Some(load_file(spec)?) });
    }
    let fallback = degree
        .or_else(|| loaded.iter().flatten().map(|o| o.series.degree()).max())
        .unwrap_or(DEFAULT_DEGREE);
    if fallback == 0 {
        return Err(CliError::input("degree must be at least 1"));
    }
    specs
        .iter()
        .zip(loaded)
        .map(|(spec, op)| match op {
            Some(op) => Ok(op),
            None => Ok(Operand { name: spec.to_string(), series: builtin(spec, fallback).expect("listed built-in") }),
        })
        .collect()
}

pub fn resolve(spec: &str, degree: Option<usize>) -> Result<Operand, CliError> {
    Ok(resolve_all(&[spec], degree)?.remove(0))
}

pub fn load_tail(spec: &str) -> Result<(String, LaurentTail), CliError> {
    let (name, text) = read_text(spec)?;
    let tail = serde_json::from_str(&text).map_err(|e| CliError::input(format!("malformed tail {name}: {e}")))?;
    Ok((name, tail))
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(CliError::input(format!("expected {n} comma-separated numbers for {what}, got `{s}`"))),
    }
}

pub fn parse_quaternion(s: &str) -> Result<Quaternion, CliError> {
    let v = parse_floats(s, 4, "a quaternion")?;
    Ok(Quaternion::new(v[0], v[1], v[2], v[3]))
}

/// `i`, `j`, `k` with an optional sign, or `x,y,z` normalized.
pub fn parse_unit(s: &str) -> Result<UnitImaginary, CliError> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) if !rest.contains(',') => (true, rest),
        _ => (false, s),
    };
    let u = match body.to_ascii_lowercase().as_str() {
        "i" => UnitImaginary::I,
        "j" => UnitImaginary::J,
        "k" => UnitImaginary::K,
        _ => {
            let v = parse_floats(s, 3, "a unit imaginary")?;
            return UnitImaginary::normalized(v[0], v[1], v[2])
                .map_err(|_| CliError::input(format!("unit `{s}` has zero length")));
        }
    };
    Ok(if neg { -u } else { u })
}

pub fn parse_unit_or_i(s: Option<&str>) -> Result<UnitImaginary, CliError> {
    s.map(parse_unit).transpose().map(|u| u.unwrap_or(UnitImaginary::I))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_parse() {
        assert_eq!(parse_unit("J").unwrap(), UnitImaginary::J);
        assert_eq!(parse_unit("-k").unwrap(), -UnitImaginary::K);
        let u = parse_unit("1,1,0").unwrap();
        assert!((u.components()[0] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(parse_unit("0,0,0").is_err());
        assert!(parse_unit("x").is_err());
    }

    #[test]
    fn builtins_follow_file_degree() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.json");
        fs::write(&path, serde_json::to_string(&koebe(7)).unwrap()).unwrap();
        let p = path.to_str().unwrap();
        let ops = resolve_all(&[p, "identity"], None).unwrap();
        assert_eq!(ops[0].name, "k");
        assert_eq!(ops[1].series.degree(), 7);
        assert_eq!(resolve_all(&[p, "identity"], Some(3)).unwrap()[1].series.degree(), 3);
        assert_eq!(resolve("geometric", None).unwrap().series.degree(), DEFAULT_DEGREE);
    }

    #[test]
    fn inline_and_malformed() {
        let op = resolve(r#"{"degree":1,"coeffs":[[0,0,0,0],[1,0,0,0]]}"#, None).unwrap();
        assert_eq!(op.name, "inline");
        assert!(matches!(resolve(r#"{"degree":3,"coeffs":[]}"#, None), Err(CliError::Input(_))));
        assert!(matches!(resolve("/nonexistent/f.json", None), Err(CliError::Input(_))));
    }
}
