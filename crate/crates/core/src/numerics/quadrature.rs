//! Gauss-Legendre and Gauss-Jacobi rules built by Golub-Welsch.
//!
//! The Jacobi matrix of the weight is diagonalised by implicit QL, keeping
//! only the first row of the eigenvector matrix. Nodes are then polished with
//! one Newton step on the orthonormal recurrence and the weights are taken
//! from the Christoffel function, which is noticeably more accurate than the
//! squared eigenvector components for large `n`.

use num_complex::Complex64;

use super::gamma::{beta, gamma_unchecked};
use crate::error::{Error, Result};

pub const MAX_NODES: usize = 512;

/// Interpolatory Gauss rule on `(lo, hi)` for the weight `(hi−t)^hi_exponent · (t−lo)^lo_exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    lo: f64,
    hi: f64,
    hi_exponent: f64,
    lo_exponent: f64,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Exponent of the factor `(hi − t)` absorbed into the weights.
    pub fn hi_exponent(&self) -> f64 {
        self.hi_exponent
    }

    /// Exponent of the factor `(t − lo)` absorbed into the weights.
    pub fn lo_exponent(&self) -> f64 {
        self.lo_exponent
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_lo^hi (hi−t)^β (t−lo)^γ dt, the total mass the weights must carry.
    pub fn weight_mass(&self) -> f64 {
        (self.hi - self.lo).powf(self.hi_exponent + self.lo_exponent + 1.0)
            * beta(self.hi_exponent + 1.0, self.lo_exponent + 1.0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.pairs().map(|(t, w)| w * f(t)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.pairs().map(|(t, w)| f(t) * w).sum()
    }

    /// The same rule mapped affinely onto `(lo, hi)`.
    pub fn rescaled(&self, lo: f64, hi: f64) -> QuadratureRule {
        let old = self.hi - self.lo;
        let new = hi - lo;
        let ratio = new / old;
        let scale = ratio.powf(self.hi_exponent + self.lo_exponent + 1.0);
        QuadratureRule {
            nodes: self.nodes.iter().map(|t| lo + (t - self.lo) * ratio).collect(),
            weights: self.weights.iter().map(|w| w * scale).collect(),
            lo,
            hi,
            hi_exponent: self.hi_exponent,
            lo_exponent: self.lo_exponent,
        }
    }
}

/// n-point Gauss-Legendre rule on (−1, 1).
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    check_size(n)?;
    let (nodes, weights) = golub_welsch(n, 0.0, 0.0)?;
    Ok(QuadratureRule {
        nodes,
        weights,
        lo: -1.0,
        hi: 1.0,
        hi_exponent: 0.0,
        lo_exponent: 0.0,
    })
}

/// n-point rule on (0, 1) for the weight (1 − t)^beta.
pub fn gauss_jacobi_left(n: usize, beta: f64) -> Result<QuadratureRule> {
    gauss_jacobi(n, beta, 0.0)
}

/// n-point rule on (0, 1) for the weight (1 − t)^beta · t^gamma.
pub fn gauss_jacobi(n: usize, beta: f64, gamma: f64) -> Result<QuadratureRule> {
    check_size(n)?;
    for e in [beta, gamma] {
        if !(e > -1.0) || !e.is_finite() {
            return Err(Error::InvalidExponent(e));
        }
    }
    let (x, w) = golub_welsch(n, beta, gamma)?;
    // x ∈ (−1,1) ↦ t = (1+x)/2; (1−x)^β(1+x)^γ dx = 2^{β+γ+1} (1−t)^β t^γ dt
    let scale = 0.5f64.powf(beta + gamma + 1.0);
    Ok(QuadratureRule {
        nodes: x.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: w.iter().map(|w| w * scale).collect(),
        lo: 0.0,
        hi: 1.0,
        hi_exponent: beta,
        lo_exponent: gamma,
    })
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_NODES {
        return Err(Error::RuleSize { n, max: MAX_NODES });
    }
    Ok(())
}

/// Recurrence coefficients (diagonal, squared off-diagonal) of the monic
/// Jacobi polynomials for (1−x)^a (1+x)^b, plus the zeroth moment.
fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let ab = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut off2 = Vec::with_capacity(n + 1);
    off2.push(0.0);
    diag.push((b - a) / (ab + 2.0));
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag.push((b * b - a * a) / (s * (s + 2.0)));
    }
    for k in 1..=n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let v = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off2.push(v);
    }
    let mu0 = 2f64.powf(ab + 1.0) * gamma_unchecked(a + 1.0) * gamma_unchecked(b + 1.0)
        / gamma_unchecked(ab + 2.0);
    (diag, off2, mu0)
}

fn golub_welsch(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (diag, off2, mu0) = jacobi_recurrence(n, a, b);
    let mut d = diag.clone();
    let mut e: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { off2[i + 1].sqrt() } else { 0.0 })
        .collect();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    implicit_ql(&mut d, &mut e, &mut z)?;

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let mut nodes: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let mut weights: Vec<f64> = idx.iter().map(|&i| mu0 * z[i] * z[i]).collect();

    let sqrt_off: Vec<f64> = off2.iter().map(|v| v.sqrt()).collect();
    for (x, w) in nodes.iter_mut().zip(weights.iter_mut()) {
        let (pn, dpn, _) = orthonormal_eval(*x, &diag, &sqrt_off, mu0);
        if dpn != 0.0 {
            let step = pn / dpn;
            if step.abs() < 1e-8 {
                *x -= step;
            }
        }
        let (_, _, christoffel) = orthonormal_eval(*x, &diag, &sqrt_off, mu0);
        if christoffel.is_finite() && christoffel > 0.0 {
            *w = 1.0 / christoffel;
        }
    }
    Ok((nodes, weights))
}

/// Returns (p_n(x), p_n'(x), Σ_{k<n} p_k(x)²) for the orthonormal family.
fn orthonormal_eval(x: f64, diag: &[f64], sqrt_off: &[f64], mu0: f64) -> (f64, f64, f64) {
    let n = diag.len();
    let mut p_prev = 0.0;
    let mut dp_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut dp = 0.0;
    let mut sum = p * p;
    for k in 0..n {
        let p_next = ((x - diag[k]) * p - sqrt_off[k] * p_prev) / sqrt_off[k + 1];
        let dp_next = (p + (x - diag[k]) * dp - sqrt_off[k] * dp_prev) / sqrt_off[k + 1];
        p_prev = p;
        dp_prev = dp;
        p = p_next;
        dp = dp_next;
        if k + 1 < n {
            sum += p * p;
        }
    }
    (p, dp, sum)
}

/// Implicit QL on a symmetric tridiagonal matrix (diagonal `d`, sub-diagonal
/// `e` with `e[n-1] = 0`), rotating only the vector `z`.
fn implicit_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
