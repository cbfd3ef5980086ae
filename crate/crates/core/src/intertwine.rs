//! The intertwining operator χ_α and its inverse, the Weyl integral W_α and
//! its inverse V_α, and the iterated operator (d/dx²)^p = ((1/2x) d/dx)^p.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::{HalfLineSmoothFunction, SmoothFunction, TestFunction, WeightedMeasure};
use crate::kernel::Order;
use crate::numerics::{binomial, factorial, falling_factorial, gamma};
use crate::rules;

/// Largest p accepted by the (d/dx²)^p expansions.
pub const MAX_DX2_POWER: usize = 12;

/// (d/dx²)^p f(x) = Σ_{i} γ_i x^{i−2p} f^{(i)}(x), with γ_0 = 0 for p ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Dx2Expansion {
    pub p: usize,
    /// γ_0, …, γ_p
    pub coefficients: Vec<f64>,
}

impl Dx2Expansion {
    /// Applies the expansion at x ≠ 0 given the derivatives f^{(i)}(x).
    pub fn apply<D: Fn(usize) -> f64>(&self, x: f64, derivative: D) -> f64 {
        let p = self.p as i32;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, g)| **g != 0.0)
            .map(|(i, g)| g * x.powi(i as i32 - 2 * p) * derivative(i))
            .sum()
    }
}

/// β_i^p in (d/dx²)^p (x^m g) = Σ_{i=0}^{p} β_i^p x^{m−2p+i} g^{(i)}.
pub fn coefficients_beta(p: usize, m: i32) -> Result<Vec<f64>> {
    if p > MAX_DX2_POWER {
        return Err(Error::Invalid(format!("(d/dx²)^p needs p <= {MAX_DX2_POWER} (got {p})")));
    }
    let mut beta = vec![1.0];
    for q in 0..p {
        let shift = (m - 2 * q as i32) as f64;
        let mut next = vec![0.0; q + 2];
        next[0] = 0.5 * beta[0] * shift;
        for i in 1..=q {
            next[i] = 0.5 * (shift + i as f64) * beta[i] + 0.5 * beta[i - 1];
        }
        next[q + 1] = 0.5 * beta[q];
        beta = next;
    }
    Ok(beta)
}

pub fn dx2_coefficients(p: usize) -> Result<Dx2Expansion> {
    Ok(Dx2Expansion {
        p,
        coefficients: coefficients_beta(p, 0)?,
    })
}

fn check_order<F: TestFunction + ?Sized>(f: &F, needed: usize) -> Result<()> {
    let available = f.max_derivative_order();
    if needed > available {
        return Err(Error::DerivativeOrder {
            requested: needed,
            available,
        });
    }
    Ok(())
}

fn finite_radius<F: TestFunction + ?Sized>(f: &F) -> Result<f64> {
    let a = f.support_radius();
    if !a.is_finite() {
        return Err(Error::Invalid("operator needs a compactly supported input".into()));
    }
    Ok(a)
}

/// Edge exponent of the k-th derivative when it is worth a Jacobi weight;
/// integer exponents leave a polynomial factor that Gauss rules already
/// integrate well.
fn edge_weight(e: f64, k: usize) -> f64 {
    let x = e - k as f64;
    if e > 0.0 && x > -1.0 && x.fract() != 0.0 {
        x
    } else {
        0.0
    }
}

/// χ_α f(x) = a_α ∫₀¹ (1−t²)^{α−1/2} f(xt) dt.
pub fn chi<F: TestFunction + ?Sized>(f: &F, order: &Order, x: f64, nodes: usize) -> Result<f64> {
    chi_derivative(f, order, x, 0, nodes)
}

/// (χ_α f)^{(n)}(x) = a_α ∫₀¹ (1−t²)^{α−1/2} tⁿ f^{(n)}(xt) dt.
pub fn chi_derivative<F: TestFunction + ?Sized>(f: &F, order: &Order, x: f64, n: usize, nodes: usize) -> Result<f64> {
    check_order(f, n)?;
    let rule = rules::intertwining(nodes, order.alpha())?;
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| w * t.powi(n as i32) * f.eval(x * t, n))
        .sum())
}

pub fn chi_complex<G: Fn(f64) -> Complex64>(g: G, order: &Order, x: f64, nodes: usize) -> Result<Complex64> {
    let rule = rules::intertwining(nodes, order.alpha())?;
    Ok(rule.nodes.iter().zip(&rule.weights).map(|(&t, &w)| g(x * t) * w).sum())
}

/// χ_α f as a smooth function on ℝ with the same derivative budget as f.
pub fn chi_image<F>(f: F, order: Order, nodes: usize) -> SmoothFunction
where
    F: TestFunction + 'static,
{
    let max = f.max_derivative_order();
    SmoothFunction::new(max, move |x, n| chi_derivative(&f, &order, x, n, nodes).unwrap_or(f64::NAN))
}

/// χ_α⁻¹ f(x) for x ≠ 0.
///
/// Half-integer α = k + 1/2:
///   c x (d/dx²)^{k+1}(x^{2k+1} f) with c = 2^{2k+1} k!/(2k+1)!.
/// Otherwise, α = k + r:
///   c' x (d/dx²)^{k+1} ∫₀^x (x²−t²)^{−r−1/2} |t|^{2α+1} f(t) dt,
///   c' = 2√π / (Γ(α+1) Γ(1/2−r)); with t = xu the integral is x^{2k+1} H(x),
///   H(x) = ∫₀¹ (1−u²)^{−r−1/2} u^{2α+1} f(xu) du, differentiated under the sign.
pub fn chi_inverse<F: TestFunction + ?Sized>(f: &F, order: &Order, x: f64, nodes: usize) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("chi_inverse"));
    }
    let k = order.k();
    check_order(f, k + 1)?;
    let beta = coefficients_beta(k + 1, 2 * k as i32 + 1)?;
    if order.is_half_integer() {
        let c = 2f64.powi(2 * k as i32 + 1) * factorial(k) / factorial(2 * k + 1);
        let s: f64 = beta
            .iter()
            .enumerate()
            .map(|(i, b)| b * x.powi(i as i32) * f.eval(x, i))
            .sum();
        return Ok(c * s);
    }
    let (alpha, r) = (order.alpha(), order.r());
    let c = 2.0 * PI.sqrt() / (gamma(alpha + 1.0)? * gamma(0.5 - r)?);
    let e = -r - 0.5;
    let gamma_exp = 2.0 * alpha + 1.0;
    // f(xu) vanishes for u > a/|x|; stop there instead of integrating across the support edge
    let a = f.support_radius();
    let cut = if a.is_finite() && x.abs() > a { a / x.abs() } else { 1.0 };
    let (rule, full) = if cut < 1.0 {
        (rules::jacobi(nodes, 0.0, gamma_exp)?, false)
    } else {
        (rules::jacobi(nodes, e, gamma_exp)?, true)
    };
    let scale = cut.powf(gamma_exp + 1.0);
    let mut s = 0.0;
    for (i, b) in beta.iter().enumerate() {
        if *b == 0.0 {
            continue;
        }
        let h: f64 = rule
            .pairs()
            .map(|(t, w)| {
                let u = cut * t;
                let kernel = if full { (1.0 + u).powf(e) } else { (1.0 - u * u).powf(e) };
                w * kernel * u.powi(i as i32) * f.eval(x * u, i)
            })
            .sum();
        s += b * x.powi(i as i32) * h * scale;
    }
    Ok(c * s)
}

/// yⁿ (W_α f)^{(n)}(y) for y ≠ 0:
///   a_α Σ_k C(n,k) (2α+1)_{↓(n−k)} sgn(y)^k ∫_{|y|}^a (x²−y²)^{α−1/2} x^{k+1} f^{(k)}(sgn(y) x) dx.
/// The scaled form stays bounded as y → 0.
pub fn weyl_derivative_scaled<F: TestFunction + ?Sized>(
    f: &F,
    order: &Order,
    y: f64,
    n: usize,
    nodes: usize,
) -> Result<f64> {
    if y == 0.0 {
        return Err(Error::Domain("weyl"));
    }
    check_order(f, n)?;
    let a = finite_radius(f)?;
    let ay = y.abs();
    if ay >= a {
        return Ok(0.0);
    }
    let sign = y.signum();
    let alpha = order.alpha();
    let le = alpha - 0.5;
    let e = f.edge_exponent();
    let mut total = 0.0;
    for k in 0..=n {
        let coef = binomial(n, k) * falling_factorial(2.0 * alpha + 1.0, n - k) * sign.powi(k as i32);
        if coef == 0.0 {
            continue;
        }
        let re = edge_weight(e, k);
        let rule = rules::graded(ay, a, le, re, nodes)?;
        let integral: f64 = rule
            .iter()
            .map(|&(x, w)| {
                let edge = if re != 0.0 { (a - x).powf(-re) } else { 1.0 };
                w * (x + ay).powf(le) * x.powi(k as i32 + 1) * f.eval(sign * x, k) * edge
            })
            .sum();
        total += coef * integral;
    }
    Ok(order.normalizer() * total)
}

/// W_α f(y) = a_α ∫_{|y|}^a (x²−y²)^{α−1/2} x f(sgn(y) x) dx, zero for |y| ≥ a.
pub fn weyl<F: TestFunction + ?Sized>(f: &F, order: &Order, y: f64, nodes: usize) -> Result<f64> {
    weyl_derivative_scaled(f, order, y, 0, nodes)
}

/// (W_α f)^{(n)}(y).
pub fn weyl_derivative<F: TestFunction + ?Sized>(f: &F, order: &Order, y: f64, n: usize, nodes: usize) -> Result<f64> {
    Ok(weyl_derivative_scaled(f, order, y, n, nodes)? / y.powi(n as i32))
}

/// W_α f as a function on ℝ*, carrying the edge exponent e_f + α + 1/2.
pub fn weyl_image<F>(f: F, order: Order, nodes: usize) -> Result<HalfLineSmoothFunction>
where
    F: TestFunction + 'static,
{
    let a = finite_radius(&f)?;
    let max = f.max_derivative_order();
    let e = f.edge_exponent();
    let image = HalfLineSmoothFunction::new(a, max, move |y, n| {
        weyl_derivative(&f, &order, y, n, nodes).unwrap_or(f64::NAN)
    });
    Ok(if e > 0.0 {
        image.with_edge_exponent(e + order.alpha() + 0.5)
    } else {
        image
    })
}

/// V_α g(x) for x ≠ 0, the inverse of W_α.
///
/// Half-integer α = k + 1/2: (−1)^{k+1} c (d/dx²)^{k+1} g(x), c = 2^{2k+1} k!/(2k+1)!.
/// Otherwise: c₁ ∫_{|x|}^a (y²−x²)^{−r−1/2} [(d/dy²)^{k+1} g](sgn(x) y) y dy,
/// c₁ = (−1)^{k+1} 2√π / (Γ(α+1) Γ(1/2−r)).
pub fn v_alpha<G: TestFunction + ?Sized>(g: &G, order: &Order, x: f64, nodes: usize) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("v_alpha"));
    }
    let k = order.k();
    let p = k + 1;
    check_order(g, p)?;
    let sign_p = if p % 2 == 0 { 1.0 } else { -1.0 };
    let dx2 = dx2_coefficients(p)?;
    if order.is_half_integer() {
        let c = 2f64.powi(2 * k as i32 + 1) * factorial(k) / factorial(2 * k + 1);
        return Ok(sign_p * c * dx2.apply(x, |i| g.eval(x, i)));
    }
    let a = finite_radius(g)?;
    let ax = x.abs();
    if ax >= a {
        return Ok(0.0);
    }
    let (alpha, r) = (order.alpha(), order.r());
    let c1 = sign_p * 2.0 * PI.sqrt() / (gamma(alpha + 1.0)? * gamma(0.5 - r)?);
    let le = -r - 0.5;
    let re = edge_weight(g.edge_exponent(), p);
    let sign = x.signum();
    let rule = rules::graded(ax, a, le, re, nodes)?;
    let integral: f64 = rule
        .iter()
        .map(|&(y, w)| {
            let z = sign * y;
            let edge = if re != 0.0 { (a - y).powf(-re) } else { 1.0 };
            w * (y + ax).powf(le) * y * dx2.apply(z, |i| g.eval(z, i)) * edge
        })
        .sum();
    Ok(c1 * integral)
}

/// ∫_{−a}^{a} φ(y) dy for φ with an algebraic kink at 0 and edge exponent `edge` at ±a.
/// Keeps the first error raised inside a quadrature closure.
#[derive(Default)]
struct FirstError(RefCell<Option<Error>>);

impl FirstError {
    fn value(&self, r: Result<f64>) -> f64 {
        r.unwrap_or_else(|e| {
            self.0.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    }

    fn finish<T>(self, v: T) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

fn integrate_kinked<P: FnMut(f64) -> f64>(a: f64, edge: f64, nodes: usize, phi: P) -> Result<f64> {
    integrate_kinked_split(a, edge, a, nodes, phi)
}

/// As `integrate_kinked`, with an extra break at ±b (0 < b < a) where φ is
/// only finitely smooth.
fn integrate_kinked_split<P: FnMut(f64) -> f64>(a: f64, edge: f64, b: f64, nodes: usize, mut phi: P) -> Result<f64> {
    let re = edge_weight(edge, 0);
    if b >= a {
        let rule = rules::origin_graded(a, re, nodes)?;
        return Ok(rule.iter().map(|&(y, w)| w * (phi(y) + phi(-y))).sum());
    }
    let inner = rules::origin_graded(b, 0.0, nodes)?;
    let outer = rules::graded(b, a, 0.0, re, nodes)?;
    let mut total = 0.0;
    for &(y, w) in inner.iter() {
        total += w * (phi(y) + phi(-y));
    }
    for &(y, w) in outer.iter() {
        let edge = if re != 0.0 { (a - y).powf(-re) } else { 1.0 };
        total += w * edge * (phi(y) + phi(-y));
    }
    Ok(total)
}

/// (∫ χ_α f · g dμ_α, ∫ f · W_α g dy): the transposition identity behind χ*.
pub fn chi_star_pairing<F, G>(f: &F, g: &G, order: &Order, nodes: usize) -> Result<(f64, f64)>
where
    F: TestFunction + ?Sized,
    G: TestFunction + ?Sized,
{
    let a = finite_radius(g)?;
    let measure = WeightedMeasure::new(*order);
    let chi_rule = rules::intertwining(nodes, order.alpha())?;
    let chi_at = |x: f64| -> f64 {
        chi_rule
            .nodes
            .iter()
            .zip(&chi_rule.weights)
            .map(|(&t, &w)| w * f.eval(x * t, 0))
            .sum()
    };
    let lhs = measure.integrate(a, nodes, |x| chi_at(x) * g.eval(x, 0))?;
    let edge = g.edge_exponent() + if g.edge_exponent() > 0.0 { order.alpha() + 0.5 } else { 0.0 };
    let err = FirstError::default();
    let rhs = integrate_kinked(a, edge, nodes, |y| f.eval(y, 0) * err.value(weyl(g, order, y, nodes)))?;
    err.finish((lhs, rhs))
}

/// (∫ V_α f · g dμ_α, ∫ f · χ_α⁻¹ g dy) for f in the W-image and g compactly supported.
pub fn v_duality_pairing<F, G>(f: &F, g: &G, order: &Order, nodes: usize) -> Result<(f64, f64)>
where
    F: TestFunction + ?Sized,
    G: TestFunction + ?Sized,
{
    let af = finite_radius(f)?;
    let ag = finite_radius(g)?;
    let measure = WeightedMeasure::new(*order);
    let err = FirstError::default();
    let lhs = measure.integrate(af.min(ag), nodes, |x| err.value(v_alpha(f, order, x, nodes)) * g.eval(x, 0))?;
    let rhs = integrate_kinked_split(af, f.edge_exponent(), ag, nodes, |y| {
        f.eval(y, 0) * err.value(chi_inverse(g, order, y, nodes))
    })?;
    err.finish((lhs, rhs))
}

/// C in ‖W_α f‖₁ ≤ C ‖f‖_{1,α}: a_α ∫₁^∞ (t²−1)^{α−1/2} t^{−2α−1} dt, which is
/// a_α · ½ ∫₀¹ s^{−1/2} (1−s)^{α−1/2} ds after s = t^{−2}.
pub fn boundedness_constant(order: &Order, nodes: usize) -> Result<f64> {
    let rule = rules::jacobi(nodes, order.alpha() - 0.5, -0.5)?;
    Ok(order.normalizer() * 0.5 * rule.weight_mass())
}

/// ∫ |W_α f(y)| dy.
pub fn weyl_l1_norm<F: TestFunction + ?Sized>(f: &F, order: &Order, nodes: usize) -> Result<f64> {
    let a = finite_radius(f)?;
    let edge = f.edge_exponent() + if f.edge_exponent() > 0.0 { order.alpha() + 0.5 } else { 0.0 };
    let err = FirstError::default();
    let v = integrate_kinked(a, edge, nodes, |y| err.value(weyl(f, order, y, nodes)).abs())?;
    err.finish(v)
}
