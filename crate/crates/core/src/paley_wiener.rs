//! Complex-plane scans of transforms, growth envelopes, and the identities
//! tying the transform to Fourier data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::TestFunction;
use crate::intertwine::weyl_derivative_scaled;
use crate::kernel::Order;
use crate::numerics::factorial;
use crate::par::{self, Execution};
use crate::rules;
use crate::transforms::{
    bs_transform, bs_transform_derivative, bs_transform_dirac, fourier_moment, DiracCombination, SpectrumSample,
    TransformRoute,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest R·a (and B·a) accepted by [`complex_scan`].
pub const SCAN_WINDOW: f64 = 60.0;
/// Step of the parameter grids for the exponential types a and b.
pub const TYPE_STEP: f64 = 0.05;
/// Largest polynomial order tried by the Schwartz envelope fit.
pub const MAX_POLY_ORDER: usize = 12;
/// Shells closer to the origin than this are ignored by the fits.
pub const FIT_MIN_RADIUS: f64 = 5.0;

/// `steps` equally spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !min.is_finite() || !max.is_finite() || min > max {
            return Err(Error::Invalid(format!("bad grid {min}:{max}:{steps}")));
        }
        if steps == 1 && min != max {
            return Err(Error::Invalid("a one-point grid needs min == max".into()));
        }
        Ok(GridAxis { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + h * i as f64 })
            .collect()
    }

    pub fn extent(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

/// Rectangle of spectral points, ordered with Re z outer and Im z inner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub re: GridAxis,
    pub im: GridAxis,
}

impl ScanGrid {
    pub fn square(half_width: f64, steps: usize) -> Result<Self> {
        let axis = GridAxis::new(-half_width, half_width, steps)?;
        Ok(ScanGrid { re: axis, im: axis })
    }

    pub fn points(&self) -> Vec<Complex64> {
        let ims = self.im.values();
        self.re
            .values()
            .into_iter()
            .flat_map(|x| ims.iter().map(move |&y| Complex64::new(x, y)))
            .collect()
    }
}

/// What a scan transforms.
#[derive(Clone, Copy)]
pub enum ScanSource<'a> {
    Function(&'a dyn TestFunction),
    Dirac(&'a DiracCombination),
}

impl ScanSource<'_> {
    pub fn support_radius(&self) -> f64 {
        match self {
            ScanSource::Function(f) => f.support_radius(),
            ScanSource::Dirac(t) => t.support_bound(),
        }
    }

    pub fn transform(&self, order: &Order, z: Complex64, nodes: usize) -> Result<Complex64> {
        match self {
            ScanSource::Function(f) => bs_transform(*f, order, z, nodes),
            ScanSource::Dirac(t) => bs_transform_dirac(t, order, z, nodes),
        }
    }
}

fn check_window(grid: &ScanGrid, a: f64) -> Result<()> {
    for extent in [grid.re.extent(), grid.im.extent()] {
        let product = extent * a;
        if product > SCAN_WINDOW {
            return Err(Error::Window {
                product,
                limit: SCAN_WINDOW,
            });
        }
    }
    Ok(())
}

/// The transform on every point of the rectangle.
pub fn complex_scan(
    source: ScanSource<'_>,
    order: &Order,
    grid: &ScanGrid,
    nodes: usize,
    exec: Execution,
) -> Result<SpectrumSample> {
    let a = source.support_radius();
    check_window(grid, a)?;
    let points = grid.points();
    let values = par::try_map(&points, exec, |&z| source.transform(order, z, nodes))?;
    Ok(SpectrumSample {
        points,
        values,
        order: *order,
        input: String::new(),
        route: TransformRoute::Direct,
        support_radius: a,
    })
}

/// max |∂F/∂z̄| / max(|∇F|, |F|) over the points, with centred differences of step δ.
pub fn cauchy_riemann_residual<E>(eval: E, points: &[Complex64], delta: f64, exec: Execution) -> Result<f64>
where
    E: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let ratios = par::try_map(points, exec, |&z| -> Result<f64> {
        let dx = (eval(z + delta)? - eval(z - delta)?) / (2.0 * delta);
        let dy = (eval(z + I * delta)? - eval(z - I * delta)?) / (2.0 * delta);
        let dbar = (dx + I * dy).norm() * 0.5;
        // at critical points the gradient vanishes; |F| keeps the ratio meaningful there
        let scale = dx.norm().max(dy.norm()).max(eval(z)?.norm());
        Ok(if scale == 0.0 { dbar } else { dbar / scale })
    })?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    ExpType,
    PolyExp,
}

/// A bound |F(z)| ≤ C e^{a|z|} (exp_type) or C (1+|z|²)^{m/2} e^{b|Im z|} (poly_exp).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub kind: EnvelopeKind,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// max over samples of log|F| − log(bound); ≤ 0 when the bound majorizes.
    pub residual: f64,
    /// Same as `residual` with e^{b·Im z} in place of e^{b|Im z|} (poly_exp only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_residual: Option<f64>,
}

/// (r, log max |F|) over annuli of |z| in [FIT_MIN_RADIUS, min(R, B)].
fn shell_maxima(samples: &SpectrumSample) -> Result<Vec<(f64, f64)>> {
    if samples.len() < 100 {
        return Err(Error::Invalid(format!("envelope fits need >= 100 samples (got {})", samples.len())));
    }
    let rmax = samples.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rmax < 10.0 {
        return Err(Error::Invalid(format!("envelope fits need max |z| >= 10 (got {rmax})")));
    }
    if samples.values.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return Err(Error::Degenerate);
    }
    let re_ext = samples.points.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let im_ext = samples.points.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let limit = re_ext.min(im_ext);
    let spacing = |coord: fn(&Complex64) -> f64| {
        let mut v: Vec<f64> = samples.points.iter().map(coord).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    };
    let h = spacing(|z| z.re).max(spacing(|z| z.im)).max(0.5);
    // two grid steps per shell smooths the maxima; coarse grids fall back to one
    let width = if (limit - FIT_MIN_RADIUS) / (2.0 * h) >= 8.0 { 2.0 * h } else { h };
    let count = ((limit - FIT_MIN_RADIUS) / width).floor() as usize;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; count];
    for (z, v) in samples.iter() {
        let r = z.norm();
        let m = v.norm();
        if r < FIT_MIN_RADIUS || m == 0.0 {
            continue;
        }
        let idx = ((r - FIT_MIN_RADIUS) / width) as usize;
        if idx >= count {
            continue;
        }
        let slot = &mut best[idx];
        if slot.is_none_or(|(_, l)| m.ln() > l) {
            *slot = Some((r, m.ln()));
        }
    }
    let shells: Vec<(f64, f64)> = best.into_iter().flatten().collect();
    if shells.len() < 4 {
        return Err(Error::Invalid("too few populated shells for an envelope fit".into()));
    }
    Ok(shells)
}

/// Least squares for L ≈ c + s·r + q·ln r (+ t/r when `inverse`); returns (c, s, q).
fn fit_log_envelope(shells: &[(f64, f64)], inverse: bool) -> Result<(f64, f64, f64)> {
    if inverse {
        let x = least_squares::<4>(shells, |r| [1.0, r, r.ln(), 1.0 / r])?;
        Ok((x[0], x[1], x[2]))
    } else {
        let x = least_squares::<3>(shells, |r| [1.0, r, r.ln()])?;
        Ok((x[0], x[1], x[2]))
    }
}

fn least_squares<const N: usize>(shells: &[(f64, f64)], basis: impl Fn(f64) -> [f64; N]) -> Result<[f64; N]> {
    if shells.len() <= N {
        return Err(Error::Invalid("too few populated shells for an envelope fit".into()));
    }
    let mut ata = [[0.0f64; N]; N];
    let mut atb = [0.0f64; N];
    for &(r, l) in shells {
        let row = basis(r);
        for i in 0..N {
            for j in 0..N {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * l;
        }
    }
    solve(ata, atb).ok_or(Error::Degenerate)
}

fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn snap(v: f64) -> f64 {
    ((v / TYPE_STEP).round() / TYPE_STEP.recip().round()).max(0.0)
}

/// Exponential type from the slope of the shell maxima of log|F|, fitted as
/// c + a r − p ln r (+ t/r given eight or more shells) so the algebraic
/// prefactor does not bias a. The type is
/// snapped to the 0.05 grid and C is the smallest constant that majorizes
/// every sample.
pub fn fit_exponential_type(samples: &SpectrumSample) -> Result<EnvelopeFit> {
    let shells = shell_maxima(samples)?;
    let (_, slope, _) = fit_log_envelope(&shells, shells.len() >= 8)?;
    let a = snap(slope).min(2.0 * samples.support_radius);
    let log_c = samples
        .iter()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(z, v)| v.norm().ln() - a * z.norm())
        .fold(f64::NEG_INFINITY, f64::max);
    let residual = samples
        .iter()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(z, v)| v.norm().ln() - log_c - a * z.norm())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EnvelopeFit {
        kind: EnvelopeKind::ExpType,
        c: log_c.exp(),
        a: Some(a),
        m: None,
        b: None,
        residual,
        literal_residual: None,
    })
}

/// Polynomial-exponential envelope: m = the smallest integer at or above the
/// fitted log-power (less a 0.25 allowance for fitting noise), b snapped to
/// the 0.05 grid.
pub fn fit_poly_exp(samples: &SpectrumSample) -> Result<EnvelopeFit> {
    let shells = shell_maxima(samples)?;
    let (_, slope, power) = fit_log_envelope(&shells, false)?;
    let m_float = (power - 0.25).ceil().max(0.0);
    if m_float > MAX_POLY_ORDER as f64 {
        return Err(Error::EnvelopeCap(MAX_POLY_ORDER));
    }
    let m = m_float as usize;
    let b = snap(slope);
    let log_bound = |z: Complex64, im: f64| 0.5 * m as f64 * (1.0 + z.norm_sqr()).ln() + b * im;
    let nonzero = || samples.iter().filter(|(_, v)| v.norm() > 0.0);
    let log_c = nonzero()
        .map(|(z, v)| v.norm().ln() - log_bound(z, z.im.abs()))
        .fold(f64::NEG_INFINITY, f64::max);
    let residual = nonzero()
        .map(|(z, v)| v.norm().ln() - log_c - log_bound(z, z.im.abs()))
        .fold(f64::NEG_INFINITY, f64::max);
    let literal = nonzero()
        .map(|(z, v)| v.norm().ln() - log_c - log_bound(z, z.im))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EnvelopeFit {
        kind: EnvelopeKind::PolyExp,
        c: log_c.exp(),
        a: None,
        m: Some(m),
        b: Some(b),
        residual,
        literal_residual: Some(literal),
    })
}

/// Scan a Dirac combination and fit the polynomial-exponential envelope.
pub fn schwartz_envelope_check(
    t: &DiracCombination,
    order: &Order,
    grid: &ScanGrid,
    nodes: usize,
    exec: Execution,
) -> Result<EnvelopeFit> {
    let samples = complex_scan(ScanSource::Dirac(t), order, grid, nodes, exec)?;
    fit_poly_exp(&samples)
}

/// Σ_{n≥k} wⁿ/n! divided by x^k, with w = −izx.
fn exp_tail_over_power(z: Complex64, x: f64, k: usize) -> Complex64 {
    let w = -I * z * x;
    let lead = (-I * z).powu(k as u32);
    if w.norm() < 4.0 {
        // (−iz)^k Σ_j w^j/(j+k)!
        let mut term = Complex64::new(1.0 / factorial(k), 0.0);
        let mut sum = term;
        for j in 1..80 {
            term = term * w / (j + k) as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        return lead * sum;
    }
    let mut head = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..k {
        head += term;
        term = term * w / (n + 1) as f64;
    }
    (w.exp() - head) / x.powi(k as i32)
}

/// ((iz)^k F_BS^α(f)(z), ∫ (W_α f)^{(k)}(x) Σ_{n≥k} (−izx)ⁿ/n! dx).
///
/// The right side is integrated as [x^k (W_α f)^{(k)}] · [tail / x^k] on each
/// half-line; both factors stay bounded at the origin.
pub fn finite_part_identity<F: TestFunction + ?Sized>(
    f: &F,
    order: &Order,
    k: usize,
    z: Complex64,
    nodes: usize,
) -> Result<(Complex64, Complex64)> {
    if k == 0 || k > 4 {
        return Err(Error::Invalid(format!("finite-part identity needs 1 <= k <= 4 (got {k})")));
    }
    let a = f.support_radius();
    if !a.is_finite() {
        return Err(Error::Invalid("finite-part identity needs a compactly supported input".into()));
    }
    let lhs = (I * z).powu(k as u32) * bs_transform(f, order, z, nodes)?;
    let e = f.edge_exponent();
    let edge = if e > 0.0 { e + order.alpha() + 0.5 - k as f64 } else { 0.0 };
    let re = if edge > 0.0 && edge.fract() != 0.0 { edge } else { 0.0 };
    let n = rules::nodes_for_frequency(nodes, 4.0 * z.norm() * a);
    let rule = rules::origin_graded(a, re, n)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for &(y, w) in rule.iter() {
        for x in [y, -y] {
            let scaled = weyl_derivative_scaled(f, order, x, k, nodes)?;
            if scaled != 0.0 {
                rhs += exp_tail_over_power(z, x, k) * (w * scaled);
            }
        }
    }
    Ok((lhs, rhs))
}

/// (F^{1/2}_BS(f)(z), (h′(z) − h′(0))/z) with h = F(−f); h′ is the moment
/// transform ∫ ix f(x) e^{−izx} dx, never a difference quotient.
pub fn lambda_half_check<F: TestFunction + ?Sized>(f: &F, z: Complex64, nodes: usize) -> Result<(Complex64, Complex64)> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("lambda_half_check"));
    }
    let half = Order::new(0.5)?;
    let lhs = bs_transform(f, &half, z, nodes)?;
    let h1z = -fourier_moment(f, 1, z, nodes)?;
    let h10 = -fourier_moment(f, 1, Complex64::new(0.0, 0.0), nodes)?;
    Ok((lhs, (h1z - h10) / z))
}

/// (F^α_BS(f)(z), α (h′(z) − h′(0))/z) with h = F^{α−1}_BS(−2f); h′ is the
/// first-moment transform of the Weyl image of order α − 1.
pub fn order_recurrence_check<F: TestFunction + ?Sized>(
    f: &F,
    order: &Order,
    z: Complex64,
    nodes: usize,
) -> Result<(Complex64, Complex64)> {
    let alpha = order.alpha();
    if alpha <= 0.5 {
        return Err(Error::Invalid(format!("order recurrence needs alpha > 1/2 (got {alpha})")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("order_recurrence_check"));
    }
    let lower = Order::new(alpha - 1.0)?;
    let lhs = bs_transform(f, order, z, nodes)?;
    let h1z = -2.0 * bs_transform_derivative(f, &lower, z, 1, nodes)?;
    let h10 = -2.0 * bs_transform_derivative(f, &lower, Complex64::new(0.0, 0.0), 1, nodes)?;
    Ok((lhs, (h1z - h10) * alpha / z))
}
