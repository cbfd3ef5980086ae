//! Shared, lazily built quadrature rules.
//!
//! Rules are keyed by size and the bit patterns of both exponents. The map is
//! behind an `RwLock`; once a rule exists every reader gets the same `Arc`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::Result;
use crate::numerics::{gauss_jacobi, QuadratureRule, MAX_NODES};

type Key = (usize, u64, u64);

fn cache() -> &'static RwLock<HashMap<Key, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Rule on (0, 1) for the weight (1 − t)^hi · t^lo.
pub fn jacobi(n: usize, hi: f64, lo: f64) -> Result<Arc<QuadratureRule>> {
    let key = (n, hi.to_bits(), lo.to_bits());
    if let Some(rule) = cache().read().unwrap().get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_jacobi(n, hi, lo)?);
    let mut guard = cache().write().unwrap();
    Ok(Arc::clone(guard.entry(key).or_insert(rule)))
}

/// Plain Legendre rule on (0, 1).
pub fn legendre(n: usize) -> Result<Arc<QuadratureRule>> {
    jacobi(n, 0.0, 0.0)
}

/// Node count that resolves e^{iωt} on a unit interval, never below `base`.
pub fn nodes_for_frequency(base: usize, omega: f64) -> usize {
    let needed = (0.5 * omega.abs()).ceil() as usize + 32;
    base.max(needed).min(MAX_NODES)
}

/// Nodes t_i and folded weights c_i = a_α w_i (1+t_i)^{α−1/2} so that
/// Σ c_i φ(t_i) ≈ a_α ∫₀¹ (1−t²)^{α−1/2} φ(t) dt.
#[derive(Debug)]
pub struct FoldedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type FoldedKey = (usize, u64);

fn folded_cache() -> &'static RwLock<HashMap<FoldedKey, Arc<FoldedRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<FoldedKey, Arc<FoldedRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The normalised intertwining weight on (0, 1) for order `alpha`.
pub fn intertwining(n: usize, alpha: f64) -> Result<Arc<FoldedRule>> {
    let key = (n, alpha.to_bits());
    if let Some(rule) = folded_cache().read().unwrap().get(&key) {
        return Ok(Arc::clone(rule));
    }
    let exponent = alpha - 0.5;
    let base = jacobi(n, exponent, 0.0)?;
    let norm = crate::kernel::normalizer(alpha);
    let folded = Arc::new(FoldedRule {
        nodes: base.nodes().to_vec(),
        weights: base
            .pairs()
            .map(|(t, w)| norm * w * (1.0 + t).powf(exponent))
            .collect(),
    });
    let mut guard = folded_cache().write().unwrap();
    Ok(Arc::clone(guard.entry(key).or_insert(folded)))
}

/// Nodes and weights for ∫_lo^hi (y − lo)^le (hi − y)^re h(y) dy ≈ Σ w_i h(y_i).
///
/// When lo is small against the interval length, factors such as
/// (y + lo)^s vary on the scale of lo near the left end; the interval is
/// then cut at lo + lo·2^j so each piece sees a smooth integrand.
pub fn graded(lo: f64, hi: f64, le: f64, re: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let len = hi - lo;
    if len <= 0.0 {
        return Ok(Vec::new());
    }
    if lo <= 0.0 || lo >= len / 8.0 {
        let rule = jacobi(n, re, le)?;
        let scale = len.powf(le + re + 1.0);
        return Ok(rule.pairs().map(|(t, w)| (lo + len * t, w * scale)).collect());
    }
    let mut out = Vec::new();
    // first piece [lo, 2lo]: singular factor in the weight, the other explicit
    let first = jacobi(n, 0.0, le)?;
    let scale = lo.powf(le + 1.0);
    out.extend(first.pairs().map(|(t, w)| {
        let y = lo + lo * t;
        (y, w * scale * (hi - y).powf(re))
    }));
    let mid = legendre((n / 2).max(16))?;
    let mut d = lo;
    while 2.0 * d <= len / 4.0 {
        let (a, b) = (lo + d, lo + 2.0 * d);
        out.extend(mid.pairs().map(|(t, w)| {
            let y = a + (b - a) * t;
            (y, w * (b - a) * (y - lo).powf(le) * (hi - y).powf(re))
        }));
        d *= 2.0;
    }
    let start = lo + d;
    let last = jacobi(n, re, 0.0)?;
    let tail = hi - start;
    let scale = tail.powf(re + 1.0);
    out.extend(last.pairs().map(|(t, w)| {
        let y = start + tail * t;
        (y, w * scale * (y - lo).powf(le))
    }));
    Ok(out)
}

/// Nodes and weights for ∫_0^a h(y) dy after y = a s⁴, which turns
/// terms like y^{2α+1} at the origin into s^{8α+7}. An edge factor (a − y)^re, re > −1,
/// goes into the Jacobi weight (h keeps it).
pub fn origin_graded(a: f64, re: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let rule = jacobi(n, re, 0.0)?;
    Ok(rule
        .pairs()
        .map(|(s, w)| {
            let s2 = s * s;
            let y = a * s2 * s2;
            // a − y = a (1−s)(1+s)(1+s²); only (1−s)^re is in the weight
            (y, w * 4.0 * a * s2 * s * (1.0 - s).powf(-re))
        })
        .collect())
}
