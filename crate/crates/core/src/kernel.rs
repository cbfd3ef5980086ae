//! Normalised Bessel and Struve series, the Bessel-Struve kernel
//! S_λ^α(x) = j_α(iλx) − i h_α(iλx), its x-derivatives, and the operator
//! ℓ_α u = u″ + (2α+1)/x · (u′(x) − u′(0)).
//!
//! The kernel depends on λ and x only through the product w = λx. Two
//! independent evaluation routes exist: the power series and the integral
//! a_α ∫₀¹ (1−t²)^{α−1/2} e^{wt} dt with a_α = 2Γ(α+1)/(√π Γ(α+1/2)).
//! The series sums terms of size up to e^{|w|} to produce a value of size
//! about e^{Re w}, so [`kernel`] only uses it when that ratio is small and
//! otherwise falls back to the integral with enough nodes to resolve the
//! oscillation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gamma_unchecked, richardson_derivative, Derivative, DEFAULT_NODES};
use crate::rules;

/// Largest |z| accepted by the series routes.
pub const SERIES_WINDOW: f64 = 60.0;
/// Largest digit-loss exponent |w| − Re w for which [`kernel`] trusts the series.
const SERIES_LOSS_LIMIT: f64 = 8.0;
const SERIES_MAX_TERMS: usize = 300;
const SERIES_REL_STOP: f64 = 1e-17;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The order α > −1/2 split as α = k + r, with r = 1/2 exactly on the
/// half-integer branch and r ∈ (−1/2, 1/2) otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Order {
    alpha: f64,
    k: usize,
    r: f64,
    half_integer: bool,
}

impl Order {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > -0.5) || !alpha.is_finite() {
            return Err(Error::InvalidOrder(alpha));
        }
        let shifted = alpha - 0.5;
        if shifted >= 0.0 && shifted == shifted.floor() {
            return Ok(Order {
                alpha,
                k: shifted as usize,
                r: 0.5,
                half_integer: true,
            });
        }
        let k = alpha.round().max(0.0);
        Ok(Order {
            alpha,
            k: k as usize,
            r: alpha - k,
            half_integer: false,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn is_half_integer(&self) -> bool {
        self.half_integer
    }

    /// 2Γ(α+1) / (√π Γ(α+1/2)), the constant normalising the intertwining weight.
    pub fn normalizer(&self) -> f64 {
        normalizer(self.alpha)
    }

    /// Exponent 2α+1 of the density |x|^{2α+1} of μ_α.
    pub fn measure_exponent(&self) -> f64 {
        2.0 * self.alpha + 1.0
    }
}

pub(crate) fn normalizer(alpha: f64) -> f64 {
    2.0 * gamma_unchecked(alpha + 1.0) / (PI.sqrt() * gamma_unchecked(alpha + 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Series,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub order: Order,
    pub lambda: Complex64,
    pub x: Complex64,
    pub value: Complex64,
    pub route: Route,
    pub est_error: f64,
}

struct SeriesSum {
    value: Complex64,
    abs_sum: f64,
}

/// Σ t_n with t_0 given and t_n = t_{n−1} · ratio(n); stops on the relative
/// term threshold once the terms have started to shrink.
fn sum_series(first: Complex64, ratio: impl Fn(usize) -> Complex64) -> SeriesSum {
    let mut term = first;
    let mut value = first;
    let mut abs_sum = first.norm();
    for n in 1..SERIES_MAX_TERMS {
        let q = ratio(n);
        term *= q;
        value += term;
        abs_sum += term.norm();
        if q.norm() < 1.0 && term.norm() <= SERIES_REL_STOP * value.norm() {
            break;
        }
        if term.norm() == 0.0 {
            break;
        }
    }
    SeriesSum { value, abs_sum }
}

fn check_window(z: Complex64) -> Result<()> {
    let m = z.norm();
    if m > SERIES_WINDOW || !m.is_finite() {
        return Err(Error::PrecisionLoss(m));
    }
    Ok(())
}

fn bessel_series(alpha: f64, z: Complex64) -> SeriesSum {
    let q = -(z * z) / 4.0;
    sum_series(ONE, |n| q / (n as f64 * (n as f64 + alpha)))
}

fn struve_series(alpha: f64, z: Complex64) -> SeriesSum {
    let q = -(z * z) / 4.0;
    let first = z / 2.0 * gamma_unchecked(alpha + 1.0) / (gamma_unchecked(1.5) * gamma_unchecked(alpha + 1.5));
    sum_series(first, |n| q / ((n as f64 + 0.5) * (n as f64 + alpha + 0.5)))
}

/// j_α(z) = Γ(α+1) Σ (−1)^n (z/2)^{2n} / (n! Γ(n+α+1)).
pub fn bessel_j_norm(order: &Order, z: Complex64) -> Result<Complex64> {
    check_window(z)?;
    Ok(bessel_series(order.alpha, z).value)
}

/// h_α(z) = Γ(α+1) Σ (−1)^n (z/2)^{2n+1} / (Γ(n+3/2) Γ(n+α+3/2)).
pub fn struve_h_norm(order: &Order, z: Complex64) -> Result<Complex64> {
    check_window(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    Ok(struve_series(order.alpha, z).value)
}

fn series_value(alpha: f64, w: Complex64) -> (Complex64, f64) {
    let z = I * w;
    let j = bessel_series(alpha, z);
    let h = struve_series(alpha, z);
    let est = 4.0 * f64::EPSILON * (j.abs_sum + h.abs_sum);
    (j.value - I * h.value, est)
}

fn is_trivial(lambda: Complex64, x: Complex64) -> bool {
    lambda == Complex64::new(0.0, 0.0) || x == Complex64::new(0.0, 0.0)
}

/// Kernel by the series route.
pub fn kernel_series(order: &Order, lambda: Complex64, x: Complex64) -> Result<KernelPoint> {
    let mut point = KernelPoint {
        order: *order,
        lambda,
        x,
        value: ONE,
        route: Route::Series,
        est_error: 0.0,
    };
    if is_trivial(lambda, x) {
        return Ok(point);
    }
    let w = lambda * x;
    check_window(w)?;
    let (value, est) = series_value(order.alpha, w);
    point.value = value;
    point.est_error = est;
    Ok(point)
}

fn integral_value(order: &Order, w: Complex64, nodes: usize) -> Result<Complex64> {
    let rule = rules::intertwining(nodes, order.alpha)?;
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &c)| (w * t).exp() * c)
        .sum())
}

/// Kernel by the integral route with an explicit node count; the error
/// estimate is the change from the half-size rule.
pub fn kernel_integral(order: &Order, lambda: Complex64, x: Complex64, nodes: usize) -> Result<KernelPoint> {
    if nodes < 8 {
        return Err(Error::Invalid(format!("integral route needs at least 8 nodes (got {nodes})")));
    }
    let mut point = KernelPoint {
        order: *order,
        lambda,
        x,
        value: ONE,
        route: Route::Integral,
        est_error: 0.0,
    };
    if is_trivial(lambda, x) {
        return Ok(point);
    }
    let w = lambda * x;
    let full = integral_value(order, w, nodes)?;
    let half = integral_value(order, w, nodes / 2)?;
    point.value = full;
    point.est_error = (full - half).norm();
    Ok(point)
}

fn series_is_safe(w: Complex64) -> bool {
    let m = w.norm();
    m <= SERIES_WINDOW && m - w.re <= SERIES_LOSS_LIMIT
}

/// S_λ^α(x) by whichever route is accurate for w = λx.
pub fn kernel(order: &Order, lambda: Complex64, x: Complex64) -> Result<KernelPoint> {
    if is_trivial(lambda, x) || series_is_safe(lambda * x) {
        return kernel_series(order, lambda, x);
    }
    let w = lambda * x;
    let n = rules::nodes_for_frequency(DEFAULT_NODES, w.norm());
    kernel_integral(order, lambda, x, n)
}

/// The kernel as a function of the product w = λx, without bookkeeping.
pub(crate) fn kernel_of_product(order: &Order, w: Complex64) -> Complex64 {
    if w == Complex64::new(0.0, 0.0) {
        return ONE;
    }
    if series_is_safe(w) {
        return series_value(order.alpha, w).0;
    }
    let n = rules::nodes_for_frequency(DEFAULT_NODES, w.norm());
    integral_value(order, w, n).expect("folded rule sizes are always valid")
}

/// Largest derivative order accepted by [`kernel_derivative`].
pub const MAX_KERNEL_DERIVATIVE: usize = 12;

/// dⁿ/dxⁿ S_λ^α(x) = a_α λⁿ ∫₀¹ (1−t²)^{α−1/2} tⁿ e^{λxt} dt.
pub fn kernel_derivative(order: &Order, lambda: Complex64, x: f64, n: usize, nodes: usize) -> Result<Complex64> {
    if n > MAX_KERNEL_DERIVATIVE {
        return Err(Error::DerivativeOrder {
            requested: n,
            available: MAX_KERNEL_DERIVATIVE,
        });
    }
    if n == 0 && is_trivial(lambda, Complex64::new(x, 0.0)) {
        return Ok(ONE);
    }
    let w = lambda * x;
    let size = rules::nodes_for_frequency(nodes.max(8), w.norm());
    let rule = rules::intertwining(size, order.alpha)?;
    let sum: Complex64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &c)| (w * t).exp() * (c * t.powi(n as i32)))
        .sum();
    Ok(sum * lambda.powu(n as u32))
}

/// ℓ_α f(x) from caller-supplied derivatives `f(t, n)` (n ∈ {1, 2}).
pub fn apply_bessel_struve_op<F>(f: F, order: &Order, x: f64) -> Result<Complex64>
where
    F: Fn(f64, usize) -> Complex64,
{
    if x == 0.0 {
        return Err(Error::Domain("the Bessel-Struve operator"));
    }
    let drift = (f(x, 1) - f(0.0, 1)) * (order.measure_exponent() / x);
    Ok(f(x, 2) + drift)
}

/// ℓ_α f(x) with every derivative taken by Richardson extrapolation; the
/// error indicator is the sum of the three indicators, scaled like the result.
pub fn apply_bessel_struve_op_numeric<F>(f: F, order: &Order, x: f64, h0: f64) -> Result<Derivative<f64>>
where
    F: Fn(f64) -> f64,
{
    if x == 0.0 {
        return Err(Error::Domain("the Bessel-Struve operator"));
    }
    let d2 = richardson_derivative(&f, x, 2, h0);
    let d1 = richardson_derivative(&f, x, 1, h0);
    let d10 = richardson_derivative(&f, 0.0, 1, h0);
    let c = order.measure_exponent() / x;
    Ok(Derivative {
        value: d2.value + c * (d1.value - d10.value),
        error: d2.error + c.abs() * (d1.error + d10.error),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn order_decomposition() {
        let o = Order::new(1.5).unwrap();
        assert!(o.is_half_integer());
        assert_eq!((o.k(), o.r()), (1, 0.5));
        let o = Order::new(0.3).unwrap();
        assert!(!o.is_half_integer());
        assert_eq!(o.k(), 0);
        assert!((o.r() - 0.3).abs() < 1e-15);
        let o = Order::new(1.7).unwrap();
        assert_eq!(o.k(), 2);
        assert!((o.r() + 0.3).abs() < 1e-14);
        let o = Order::new(-0.3).unwrap();
        assert_eq!((o.k(), o.r()), (0, -0.3));
        assert_eq!(Order::new(-0.5), Err(Error::InvalidOrder(-0.5)));
        assert!(Order::new(f64::NAN).is_err());
    }

    #[test]
    fn normalizer_at_half_is_one() {
        assert!((Order::new(0.5).unwrap().normalizer() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_special_values() {
        let half = Order::new(0.5).unwrap();
        for &a in &[-0.3, 0.0, 2.5] {
            let o = Order::new(a).unwrap();
            assert_eq!(bessel_j_norm(&o, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
            assert_eq!(struve_h_norm(&o, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        }
        assert!(bessel_j_norm(&half, c(PI, 0.0)).unwrap().norm() < 1e-13);
        assert!((bessel_j_norm(&half, c(1.0, 0.0)).unwrap() - c(1f64.sin(), 0.0)).norm() < 1e-15);
        assert!((struve_h_norm(&half, c(1.0, 0.0)).unwrap() - c(1.0 - 1f64.cos(), 0.0)).norm() < 1e-15);
        let z = PI / 2.0;
        assert!((struve_h_norm(&half, c(z, 0.0)).unwrap() - c(2.0 / PI, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn window_enforced() {
        let o = Order::new(1.0).unwrap();
        assert!(matches!(bessel_j_norm(&o, c(61.0, 0.0)), Err(Error::PrecisionLoss(_))));
        assert!(matches!(kernel_series(&o, c(10.0, 0.0), c(7.0, 0.0)), Err(Error::PrecisionLoss(_))));
        // the routed kernel has no window
        assert!(kernel(&o, c(0.0, 10.0), c(7.0, 0.0)).is_ok());
    }

    #[test]
    fn kernel_examples_at_half() {
        let o = Order::new(0.5).unwrap();
        let e1 = std::f64::consts::E - 1.0;
        let s = kernel_series(&o, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((s.value - c(e1, 0.0)).norm() < 1e-15);
        let s = kernel_series(&o, c(0.0, -2.0), c(1.0, 0.0)).unwrap();
        let expect = c(0.454_648_713_412_840_9, -0.708_073_418_273_571_2);
        assert!((s.value - expect).norm() < 1e-15);
        let s = kernel_integral(&o, c(1.0, 0.0), c(1.0, 0.0), 64).unwrap();
        assert!((s.value - c(e1, 0.0)).norm() < 1e-14);
        assert_eq!(s.route, Route::Integral);
    }

    #[test]
    fn trivial_points_short_circuit() {
        let o = Order::new(0.8).unwrap();
        for p in [
            kernel_series(&o, c(3.0, 1.0), c(0.0, 0.0)).unwrap(),
            kernel_integral(&o, c(0.0, 0.0), c(2.0, 0.0), 16).unwrap(),
        ] {
            assert_eq!(p.value, c(1.0, 0.0));
            assert_eq!(p.est_error, 0.0);
        }
    }

    #[test]
    fn integral_normalisation() {
        for &a in &[-0.4, 0.0, 0.3, 1.7, 4.0] {
            let o = Order::new(a).unwrap();
            let rule = rules::intertwining(64, a).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-13, "alpha {a}: {total}");
            let _ = o;
        }
    }

    #[test]
    fn routes_agree_off_axis() {
        let o = Order::new(1.3).unwrap();
        let s = kernel_series(&o, c(2.0, 1.0), c(0.7, 0.0)).unwrap();
        let q = kernel_integral(&o, c(2.0, 1.0), c(0.7, 0.0), 64).unwrap();
        assert!((s.value - q.value).norm() <= 1e-10);
    }

    #[test]
    fn derivative_at_origin() {
        for &a in &[-0.2, 0.5, 2.0] {
            let o = Order::new(a).unwrap();
            let lam = c(1.3, -0.4);
            let got = kernel_derivative(&o, lam, 0.0, 1, 64).unwrap();
            let expect = lam * (gamma_unchecked(a + 1.0) / (PI.sqrt() * gamma_unchecked(a + 1.5)));
            assert!((got - expect).norm() < 1e-13, "alpha {a}: {got} vs {expect}");
        }
        let o = Order::new(0.5).unwrap();
        assert!(kernel_derivative(&o, c(1.0, 0.0), 0.0, 13, 64).is_err());
    }

    #[test]
    fn operator_on_quadratic_and_constant() {
        for &a in &[-0.2, 0.5, 3.0] {
            let o = Order::new(a).unwrap();
            let quad = |t: f64, n: usize| c(if n == 1 { 2.0 * t } else { 2.0 }, 0.0);
            let v = apply_bessel_struve_op(quad, &o, 1.0).unwrap();
            assert!((v - c(4.0 * a + 4.0, 0.0)).norm() < 1e-14);
            let v = apply_bessel_struve_op(|_, _| c(0.0, 0.0), &o, 0.5).unwrap();
            assert_eq!(v, c(0.0, 0.0));
        }
        let o = Order::new(0.5).unwrap();
        assert!(matches!(apply_bessel_struve_op(|_, _| c(0.0, 0.0), &o, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn numeric_operator_on_quadratic() {
        let o = Order::new(0.25).unwrap();
        let d = apply_bessel_struve_op_numeric(|t| t * t, &o, 1.0, 0.1).unwrap();
        assert!((d.value - 5.0).abs() < 1e-9);
    }

    #[test]
    fn eigenfunction_relation() {
        let o = Order::new(0.8).unwrap();
        let lam = c(1.5, 0.0);
        let f = |t: f64, n: usize| kernel_derivative(&o, lam, t, n, 64).unwrap();
        let x = 0.6;
        let lhs = apply_bessel_struve_op(f, &o, x).unwrap();
        let s = kernel(&o, lam, c(x, 0.0)).unwrap().value;
        assert!((lhs - lam * lam * s).norm() / (lam * lam * s).norm() < 1e-7);
    }

    #[test]
    fn decay_at_half_integer() {
        let o = Order::new(0.5).unwrap();
        let v = kernel(&o, c(0.0, -100.0), c(1.0, 0.0)).unwrap();
        assert!(v.value.norm() <= 0.02 + 1e-12);
    }
}
