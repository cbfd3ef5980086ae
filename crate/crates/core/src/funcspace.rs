//! Compactly supported test functions with derivative access, functions
//! defined on ℝ* (the images of the Weyl transform), and the measure
//! dμ_α = |x|^{2α+1} dx.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Order;
use crate::numerics::{binomial, falling_factorial};
use crate::rules;

/// Anything the operators can consume: a real function with support in
/// [−a, a] whose derivatives up to `max_derivative_order` are trusted.
pub trait TestFunction: Send + Sync {
    fn support_radius(&self) -> f64;
    fn max_derivative_order(&self) -> usize;
    /// n-th derivative at x. Callers never ask for x outside the support.
    fn eval(&self, x: f64, n: usize) -> f64;
    /// Exponent e such that the function behaves like (a − |x|)^e near the
    /// support edge. Quadratures absorb it into a Jacobi weight; 0 means
    /// "no known algebraic edge behaviour".
    fn edge_exponent(&self) -> f64 {
        0.0
    }
}

pub type Evaluator = Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothnessClass {
    PolyBump { m: u32 },
    ExpBump,
    Custom,
}

#[derive(Clone)]
enum Shape {
    PolyBump(u32),
    ExpBump,
    Custom(Evaluator),
}

/// Member of D_a(ℝ) (or a finitely smooth stand-in for one).
#[derive(Clone)]
pub struct SmoothCompactFunction {
    radius: f64,
    max_order: usize,
    shape: Shape,
}

impl fmt::Debug for SmoothCompactFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothCompactFunction")
            .field("radius", &self.radius)
            .field("max_order", &self.max_order)
            .field("class", &self.class())
            .finish()
    }
}

/// Highest derivative order exposed for the exponential bump.
pub const EXP_BUMP_MAX_ORDER: usize = 8;

/// (1 − (x/a)²)^m on [−a, a], zero outside.
pub fn make_poly_bump(a: f64, m: u32) -> Result<SmoothCompactFunction> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Invalid(format!("support radius must be positive (got {a})")));
    }
    if m < 2 {
        return Err(Error::Invalid(format!("poly bump needs m >= 2 (got {m})")));
    }
    Ok(SmoothCompactFunction {
        radius: a,
        max_order: m as usize - 1,
        shape: Shape::PolyBump(m),
    })
}

/// exp(−1/(1 − (x/a)²)) on (−a, a), zero outside.
pub fn make_exp_bump(a: f64) -> Result<SmoothCompactFunction> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Invalid(format!("support radius must be positive (got {a})")));
    }
    Ok(SmoothCompactFunction {
        radius: a,
        max_order: EXP_BUMP_MAX_ORDER,
        shape: Shape::ExpBump,
    })
}

impl SmoothCompactFunction {
    /// Wraps an arbitrary evaluator; values outside [−a, a] are forced to zero.
    pub fn custom<F>(a: f64, max_order: usize, f: F) -> Self
    where
        F: Fn(f64, usize) -> f64 + Send + Sync + 'static,
    {
        SmoothCompactFunction {
            radius: a,
            max_order,
            shape: Shape::Custom(Arc::new(f)),
        }
    }

    pub fn zero(a: f64) -> Self {
        Self::custom(a, usize::MAX, |_, _| 0.0)
    }

    pub fn class(&self) -> SmoothnessClass {
        match self.shape {
            Shape::PolyBump(m) => SmoothnessClass::PolyBump { m },
            Shape::ExpBump => SmoothnessClass::ExpBump,
            Shape::Custom(_) => SmoothnessClass::Custom,
        }
    }

    pub fn descriptor(&self) -> Option<FunctionDescriptor> {
        match self.shape {
            Shape::PolyBump(m) => Some(FunctionDescriptor::PolyBump { a: self.radius, m }),
            Shape::ExpBump => Some(FunctionDescriptor::ExpBump { a: self.radius }),
            Shape::Custom(_) => None,
        }
    }

    /// c · f
    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.clone();
        Self::custom(self.radius, self.max_order, move |x, n| c * inner.eval(x, n))
    }

    /// x ↦ f(−x)
    pub fn reflected(&self) -> Self {
        let inner = self.clone();
        Self::custom(self.radius, self.max_order, move |x, n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s * inner.eval(-x, n)
        })
    }

    /// x ↦ x f(x)
    pub fn times_x(&self) -> Self {
        let inner = self.clone();
        Self::custom(self.radius, self.max_order, move |x, n| {
            let lead = x * inner.eval(x, n);
            if n == 0 {
                lead
            } else {
                lead + n as f64 * inner.eval(x, n - 1)
            }
        })
    }

    fn eval_inside(&self, x: f64, n: usize) -> f64 {
        match &self.shape {
            Shape::PolyBump(m) => poly_bump_derivative(self.radius, *m, x, n),
            Shape::ExpBump => exp_bump_derivative(self.radius, x, n),
            Shape::Custom(f) => f(x, n),
        }
    }
}

impl TestFunction for SmoothCompactFunction {
    fn support_radius(&self) -> f64 {
        self.radius
    }

    fn max_derivative_order(&self) -> usize {
        self.max_order
    }

    fn eval(&self, x: f64, n: usize) -> f64 {
        if x.abs() > self.radius {
            return 0.0;
        }
        self.eval_inside(x, n)
    }

    fn edge_exponent(&self) -> f64 {
        match self.shape {
            Shape::PolyBump(m) => m as f64,
            _ => 0.0,
        }
    }
}

/// Smooth function on all of ℝ (no support restriction), e.g. x ↦ e^{cx}.
#[derive(Clone)]
pub struct SmoothFunction {
    max_order: usize,
    evaluator: Evaluator,
}

impl fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction").field("max_order", &self.max_order).finish()
    }
}

impl SmoothFunction {
    pub fn new<F>(max_order: usize, f: F) -> Self
    where
        F: Fn(f64, usize) -> f64 + Send + Sync + 'static,
    {
        SmoothFunction {
            max_order,
            evaluator: Arc::new(f),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(usize::MAX, move |_, n| if n == 0 { c } else { 0.0 })
    }

    /// x ↦ e^{cx}
    pub fn exp(c: f64) -> Self {
        Self::new(usize::MAX, move |x, n| c.powi(n as i32) * (c * x).exp())
    }
}

impl TestFunction for SmoothFunction {
    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn max_derivative_order(&self) -> usize {
        self.max_order
    }

    fn eval(&self, x: f64, n: usize) -> f64 {
        (self.evaluator)(x, n)
    }
}

/// Leibniz on (1 − s)^m (1 + s)^m with s = x/a; no cancellation near the edge.
fn poly_bump_derivative(a: f64, m: u32, x: f64, n: usize) -> f64 {
    let s = x / a;
    let m_f = m as f64;
    let (left, right) = (1.0 - s, 1.0 + s);
    let mut acc = 0.0;
    for k in 0..=n {
        let j = n - k;
        let dl = falling_factorial(m_f, k);
        let dr = falling_factorial(m_f, j);
        if dl == 0.0 || dr == 0.0 {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += binomial(n, k) * sign * dl * left.powi(m as i32 - k as i32) * dr * right.powi(m as i32 - j as i32);
    }
    acc / a.powi(n as i32)
}

/// Derivatives of exp(L(x)), L = −1/(1−s²), via f^{(n)} = Σ C(n−1,k) f^{(k)} L^{(n−k)}.
fn exp_bump_derivative(a: f64, x: f64, n: usize) -> f64 {
    let s = x / a;
    let gap = 1.0 - s * s;
    if gap <= 0.0 {
        return 0.0;
    }
    let f0 = (-1.0 / gap).exp();
    if f0 == 0.0 {
        return 0.0;
    }
    if n == 0 {
        return f0;
    }
    // L = −½[(1−s)^{−1} + (1+s)^{−1}];  L^{(j)} = −½ j!/a^j [(1−s)^{−j−1} + (−1)^j (1+s)^{−j−1}]
    let l_deriv = |j: usize| -> f64 {
        let jf = crate::numerics::factorial(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        -0.5 * jf / a.powi(j as i32)
            * ((1.0 - s).powi(-(j as i32) - 1) + sign * (1.0 + s).powi(-(j as i32) - 1))
    };
    let mut derivs = vec![f0];
    for order in 1..=n {
        let mut acc = 0.0;
        for k in 0..order {
            acc += binomial(order - 1, k) * derivs[k] * l_deriv(order - k);
        }
        derivs.push(acc);
    }
    derivs[n]
}

/// JSON form used by the command line: `{"kind":"poly_bump","a":1.0,"m":2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionDescriptor {
    PolyBump { a: f64, m: u32 },
    ExpBump { a: f64 },
}

impl FunctionDescriptor {
    pub fn build(&self) -> Result<SmoothCompactFunction> {
        match *self {
            FunctionDescriptor::PolyBump { a, m } => make_poly_bump(a, m),
            FunctionDescriptor::ExpBump { a } => make_exp_bump(a),
        }
    }
}

/// Estimate of lim y^n f^{(n)}(y) as y → 0 from one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedLimit {
    pub order: usize,
    pub value: f64,
    /// Largest pairwise difference over the tail of the dyadic sequence.
    pub spread: f64,
    pub converged: bool,
}

fn dyadic_limit(order: usize, v: &[f64], tol: f64) -> OneSidedLimit {
    let d: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let last = *v.last().unwrap();
    let floor = 1e-3 * tol * last.abs().max(1.0);
    let aitken = |i: usize| {
        // triple v[i], v[i+1], v[i+2]
        let den = d[i + 1] - d[i];
        if d[i + 1].abs() <= floor || den == 0.0 {
            v[i + 2]
        } else {
            v[i + 2] - d[i + 1] * d[i + 1] / den
        }
    };
    let m = v.len() - 2;
    let estimates: Vec<f64> = (m - 4..m).map(aitken).collect();
    let value = *estimates.last().unwrap();
    let hi = estimates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = estimates.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    let contracting = d[d.len() - 5..]
        .windows(2)
        .all(|w| w[1].abs() <= floor || w[1].abs() < 0.999 * w[0].abs());
    OneSidedLimit {
        order,
        value,
        spread,
        converged: value.is_finite() && contracting && spread <= tol * value.abs().max(1.0),
    }
}

/// Tolerance of the dyadic Cauchy test for one-sided limits.
pub const K0_TOLERANCE: f64 = 1e-6;

/// Smooth function on ℝ* with support in [−a, a], e.g. W_α f for f ∈ D_a.
#[derive(Clone)]
pub struct HalfLineSmoothFunction {
    radius: f64,
    max_order: usize,
    edge: f64,
    evaluator: Evaluator,
}

impl fmt::Debug for HalfLineSmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfLineSmoothFunction")
            .field("radius", &self.radius)
            .field("max_order", &self.max_order)
            .field("edge_exponent", &self.edge)
            .finish()
    }
}

impl HalfLineSmoothFunction {
    pub fn new<F>(a: f64, max_order: usize, f: F) -> Self
    where
        F: Fn(f64, usize) -> f64 + Send + Sync + 'static,
    {
        HalfLineSmoothFunction {
            radius: a,
            max_order,
            edge: 0.0,
            evaluator: Arc::new(f),
        }
    }

    pub fn with_edge_exponent(mut self, e: f64) -> Self {
        self.edge = e;
        self
    }

    /// Limits of y^n f^{(n)}(y) for y → 0⁻ and y → 0⁺ from samples at
    /// y = ±2^{−j}, j = 10..=20. Each consecutive triple gives an Aitken
    /// estimate; the limit is converged when the dyadic differences contract
    /// and the last four estimates agree to `tol` (relative above one).
    pub fn origin_limits(&self, n: usize, tol: f64) -> (OneSidedLimit, OneSidedLimit) {
        let side = |sign: f64| {
            let v: Vec<f64> = (10..=20)
                .map(|j| {
                    let y = sign * 0.5f64.powi(j);
                    y.powi(n as i32) * (self.evaluator)(y, n)
                })
                .collect();
            dyadic_limit(n, &v, tol)
        };
        (side(-1.0), side(1.0))
    }

    /// The numerical K₀ test: one-sided limits exist for every trusted order.
    pub fn is_k0(&self, tol: f64) -> bool {
        (0..=self.max_order.min(12)).all(|n| {
            let (l, r) = self.origin_limits(n, tol);
            l.converged && r.converged
        })
    }
}

impl TestFunction for HalfLineSmoothFunction {
    fn support_radius(&self) -> f64 {
        self.radius
    }

    fn max_derivative_order(&self) -> usize {
        self.max_order
    }

    fn eval(&self, x: f64, n: usize) -> f64 {
        if x.abs() >= self.radius {
            return 0.0;
        }
        (self.evaluator)(x, n)
    }

    fn edge_exponent(&self) -> f64 {
        self.edge
    }
}

/// dμ_α(x) = |x|^{2α+1} dx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedMeasure {
    pub order: Order,
}

impl WeightedMeasure {
    pub fn new(order: Order) -> Self {
        WeightedMeasure { order }
    }

    pub fn density(&self, x: f64) -> f64 {
        x.abs().powf(self.order.measure_exponent())
    }

    /// ∫_{−a}^{a} φ(x) dμ_α(x) for φ smooth on each closed half-line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, nodes: usize, phi: F) -> Result<f64> {
        let gamma = self.order.measure_exponent();
        let rule = rules::jacobi(nodes, 0.0, gamma)?;
        let scale = a.powf(gamma + 1.0);
        Ok(rule.pairs().map(|(t, w)| w * (phi(a * t) + phi(-a * t))).sum::<f64>() * scale)
    }
}

/// ‖f‖_{1,α} = ∫ |f(x)| |x|^{2α+1} dx.
pub fn weighted_l1_norm<F: TestFunction + ?Sized>(f: &F, order: &Order, nodes: usize) -> Result<f64> {
    if nodes < 16 {
        return Err(Error::Invalid(format!("weighted norm needs at least 16 nodes (got {nodes})")));
    }
    WeightedMeasure::new(*order).integrate(f.support_radius(), nodes, |x| f.eval(x, 0).abs())
}
