//! Parsing and validation of command-line values.

use std::fmt;

use bessel_struve::funcspace::{FunctionDescriptor, SmoothCompactFunction};
use bessel_struve::kernel::Order;
use bessel_struve::paley_wiener::GridAxis;
use bessel_struve::transforms::{DiracCombination, DiracTerm};
use num_complex::Complex64;
use serde::Deserialize;

/// A usage problem; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

pub fn order(alpha: f64) -> Result<Order, UsageError> {
    Order::new(alpha).or_else(|_| usage("alpha must exceed -1/2"))
}

pub fn nodes(n: usize) -> Result<usize, UsageError> {
    if n < 8 {
        return usage(format!("nodes must be at least 8 (got {n})"));
    }
    Ok(n)
}

pub fn tol(t: f64) -> Result<f64, UsageError> {
    if !(t > 0.0) || !t.is_finite() {
        return usage(format!("tol must be positive (got {t})"));
    }
    Ok(t)
}

/// `min:max:steps`; `min_steps` is 1 for point grids and 2 for scans.
pub fn grid(s: &str, min_steps: usize) -> Result<GridAxis, UsageError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return usage(format!("grid '{s}' is not min:max:steps"));
    };
    let lo: f64 = lo.trim().parse().or_else(|_| usage(format!("bad grid minimum '{lo}'")))?;
    let hi: f64 = hi.trim().parse().or_else(|_| usage(format!("bad grid maximum '{hi}'")))?;
    let steps: usize = steps.trim().parse().or_else(|_| usage(format!("bad grid step count '{steps}'")))?;
    if steps < min_steps {
        return usage(format!("grid '{s}' needs at least {min_steps} steps"));
    }
    GridAxis::new(lo, hi, steps).map_err(|e| UsageError(e.to_string()))
}

/// Complex numbers written as `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn complex(s: &str) -> Result<Complex64, UsageError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || UsageError(format!("cannot parse complex number '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not a leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiracTermSpec {
    #[serde(default = "one")]
    weight_re: f64,
    #[serde(default)]
    weight_im: f64,
    location: f64,
    #[serde(default)]
    order: usize,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiracSpec {
    #[allow(dead_code)]
    kind: String,
    terms: Vec<DiracTermSpec>,
    b: Option<f64>,
}

/// What `--function` names.
pub enum Source {
    Function(SmoothCompactFunction),
    Dirac(DiracCombination),
}

/// A JSON descriptor, inline or as `@path`.
pub fn source(arg: &str) -> Result<Source, UsageError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).or_else(|e| usage(format!("cannot read '{path}': {e}")))?,
        None => arg.to_string(),
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).or_else(|e| usage(format!("function descriptor is not JSON: {e}")))?;
    if value.get("kind").and_then(|k| k.as_str()) == Some("dirac") {
        let spec: DiracSpec = serde_json::from_value(value).or_else(|e| usage(format!("bad dirac descriptor: {e}")))?;
        let terms: Vec<DiracTerm> = spec
            .terms
            .iter()
            .map(|t| DiracTerm {
                weight: Complex64::new(t.weight_re, t.weight_im),
                location: t.location,
                derivative_order: t.order,
            })
            .collect();
        let b = spec
            .b
            .unwrap_or_else(|| terms.iter().map(|t| t.location.abs()).fold(f64::MIN_POSITIVE, f64::max));
        let t = DiracCombination::new(terms, b).map_err(|e| UsageError(e.to_string()))?;
        return Ok(Source::Dirac(t));
    }
    let d: FunctionDescriptor =
        serde_json::from_value(value).or_else(|e| usage(format!("bad function descriptor: {e}")))?;
    let f = d.build().map_err(|e| UsageError(e.to_string()))?;
    Ok(Source::Function(f))
}
