//! The Bessel-Struve transform, the Fourier and Hankel transforms, the
//! factorisation through the Weyl integral, and transforms of finite Dirac
//! combinations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::TestFunction;
use crate::intertwine::weyl;
use crate::kernel::{kernel_derivative, kernel_of_product, Order, MAX_KERNEL_DERIVATIVE};
use crate::par::{self, Execution};
use crate::rules;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest |z|·b accepted for Dirac combinations.
pub const DIRAC_WINDOW: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformRoute {
    Direct,
    Factored,
}

/// Transform values on a list of spectral points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub order: Order,
    /// Short text naming the input, e.g. its JSON descriptor.
    pub input: String,
    pub route: TransformRoute,
    /// Support radius of the input (a for functions, b for Dirac combinations).
    pub support_radius: f64,
}

impl SpectrumSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.points.iter().copied().zip(self.values.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracTerm {
    pub weight: Complex64,
    pub location: f64,
    pub derivative_order: usize,
}

/// Σ_j w_j δ^{(m_j)}_{x_j} with every x_j in [−b, b].
#[derive(Debug, Clone, PartialEq)]
pub struct DiracCombination {
    terms: Vec<DiracTerm>,
    support_bound: f64,
}

impl DiracCombination {
    pub fn new(terms: Vec<DiracTerm>, support_bound: f64) -> Result<Self> {
        if !(support_bound > 0.0) || !support_bound.is_finite() {
            return Err(Error::Invalid(format!("support bound must be positive (got {support_bound})")));
        }
        for t in &terms {
            if !(t.location.abs() <= support_bound) {
                return Err(Error::Invalid(format!(
                    "location {} lies outside [-{support_bound}, {support_bound}]",
                    t.location
                )));
            }
            if t.derivative_order > MAX_KERNEL_DERIVATIVE {
                return Err(Error::DerivativeOrder {
                    requested: t.derivative_order,
                    available: MAX_KERNEL_DERIVATIVE,
                });
            }
        }
        Ok(DiracCombination { terms, support_bound })
    }

    /// δ^{(m)}_{x₀} with unit weight; the support bound is max(|x₀|, 1e−300).
    pub fn single(location: f64, derivative_order: usize) -> Result<Self> {
        Self::new(
            vec![DiracTerm {
                weight: Complex64::new(1.0, 0.0),
                location,
                derivative_order,
            }],
            location.abs().max(f64::MIN_POSITIVE),
        )
    }

    pub fn terms(&self) -> &[DiracTerm] {
        &self.terms
    }

    pub fn support_bound(&self) -> f64 {
        self.support_bound
    }
}

fn nonzero_radius<F: TestFunction + ?Sized>(f: &F) -> Result<f64> {
    let a = f.support_radius();
    if !a.is_finite() || !(a > 0.0) {
        return Err(Error::Invalid("transform needs a compactly supported input".into()));
    }
    Ok(a)
}

/// F_BS^α(f)(z) = ∫ f(x) S_{−iz}^α(x) |x|^{2α+1} dx.
///
/// Each half-line uses a Jacobi rule carrying x^{2α+1}; the node count grows
/// with |z|·a so the oscillation stays resolved.
pub fn bs_transform<F: TestFunction + ?Sized>(f: &F, order: &Order, z: Complex64, nodes: usize) -> Result<Complex64> {
    let a = nonzero_radius(f)?;
    let gamma = order.measure_exponent();
    let n = rules::nodes_for_frequency(nodes, z.norm() * a);
    let rule = rules::jacobi(n, 0.0, gamma)?;
    let scale = a.powf(gamma + 1.0);
    let mut sum = ZERO;
    for (t, w) in rule.pairs() {
        let x = a * t;
        let p = f.eval(x, 0);
        let m = f.eval(-x, 0);
        if p != 0.0 {
            sum += kernel_of_product(order, -I * z * x) * (w * p);
        }
        if m != 0.0 {
            sum += kernel_of_product(order, I * z * x) * (w * m);
        }
    }
    Ok(sum * scale)
}

/// Sum over a quadrature of the half-lines [0, a] and [−a, 0] after y = a s⁴,
/// so corners like |y|^{2α+1} at the origin do not slow convergence.
fn kinked_fourier<P: FnMut(f64) -> f64>(a: f64, edge: f64, z: Complex64, moment: usize, nodes: usize, mut phi: P) -> Result<Complex64> {
    let re = if edge > 0.0 && edge.fract() != 0.0 { edge } else { 0.0 };
    // the quartic map speeds the phase up by up to four near y = a
    let n = rules::nodes_for_frequency(nodes, 4.0 * z.norm() * a);
    let rule = rules::origin_graded(a, re, n)?;
    let mut sum = ZERO;
    for &(y, w) in rule.iter() {
        for s in [1.0, -1.0] {
            let x = s * y;
            let v = phi(x);
            if v == 0.0 {
                continue;
            }
            let factor = (-I * x).powu(moment as u32);
            sum += (-I * z * x).exp() * factor * (w * v);
        }
    }
    Ok(sum)
}

/// F(g)(z) = ∫ g(x) e^{−izx} dx, split at 0.
pub fn fourier<G: TestFunction + ?Sized>(g: &G, z: Complex64, nodes: usize) -> Result<Complex64> {
    fourier_moment(g, 0, z, nodes)
}

/// F((−ix)ⁿ g)(z), the n-th derivative of F(g) at z.
pub fn fourier_moment<G: TestFunction + ?Sized>(g: &G, n: usize, z: Complex64, nodes: usize) -> Result<Complex64> {
    let a = nonzero_radius(g)?;
    kinked_fourier(a, g.edge_exponent(), z, n, nodes, |x| g.eval(x, 0))
}

/// F((−iy)^moment W_α f)(z), evaluating the Weyl image at the Fourier nodes.
fn weyl_moment<F: TestFunction + ?Sized>(f: &F, order: &Order, z: Complex64, moment: usize, nodes: usize) -> Result<Complex64> {
    let a = nonzero_radius(f)?;
    let e = f.edge_exponent();
    let edge = if e > 0.0 { e + order.alpha() + 0.5 } else { 0.0 };
    let mut err = None;
    let v = kinked_fourier(a, edge, z, moment, nodes, |y| match weyl(f, order, y, nodes) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    match err {
        Some(e) => Err(e),
        None => v,
    }
}

/// F(W_α f)(z), equal to F_BS^α(f)(z).
pub fn bs_transform_factored<F: TestFunction + ?Sized>(f: &F, order: &Order, z: Complex64, nodes: usize) -> Result<Complex64> {
    weyl_moment(f, order, z, 0, nodes)
}

/// n-th derivative of F_BS^α(f) at z, as F((−it)ⁿ W_α f)(z).
pub fn bs_transform_derivative<F: TestFunction + ?Sized>(
    f: &F,
    order: &Order,
    z: Complex64,
    n: usize,
    nodes: usize,
) -> Result<Complex64> {
    weyl_moment(f, order, z, n, nodes)
}

/// H_α(f)(λ) = ∫₀^a f(t) j_α(λt) t^{2α+1} dt for even f.
pub fn hankel<F: TestFunction + ?Sized>(f: &F, order: &Order, lambda: f64, nodes: usize) -> Result<f64> {
    let a = nonzero_radius(f)?;
    let worst = (1..=16)
        .map(|i| {
            let x = a * i as f64 / 17.0;
            (f.eval(x, 0) - f.eval(-x, 0)).abs()
        })
        .fold(0.0, f64::max);
    if worst > 1e-12 {
        return Err(Error::NotEven(worst));
    }
    let gamma = order.measure_exponent();
    let n = rules::nodes_for_frequency(nodes, lambda.abs() * a);
    let rule = rules::jacobi(n, 0.0, gamma)?;
    let scale = a.powf(gamma + 1.0);
    // j_α(λt) is the real part of S_{−iλ}(t)
    let w0 = Complex64::new(0.0, -lambda);
    Ok(rule
        .pairs()
        .map(|(t, w)| w * f.eval(a * t, 0) * kernel_of_product(order, w0 * (a * t)).re)
        .sum::<f64>()
        * scale)
}

/// (∫ F_BS(f) g dμ_α, ∫ F_BS(g) f dμ_α) over real λ.
pub fn duality_check<F, G>(f: &F, g: &G, order: &Order, nodes: usize) -> Result<(Complex64, Complex64)>
where
    F: TestFunction + ?Sized,
    G: TestFunction + ?Sized,
{
    let side = |inner: &dyn Fn(f64) -> Result<Complex64>, outer: &dyn TestFunction| -> Result<Complex64> {
        let b = outer.support_radius();
        let gamma = order.measure_exponent();
        let rule = rules::jacobi(nodes, 0.0, gamma)?;
        let scale = b.powf(gamma + 1.0);
        let mut sum = ZERO;
        for (t, w) in rule.pairs() {
            for x in [b * t, -b * t] {
                let v = outer.eval(x, 0);
                if v != 0.0 {
                    sum += inner(x)? * (w * v);
                }
            }
        }
        Ok(sum * scale)
    };
    nonzero_radius(f)?;
    nonzero_radius(g)?;
    let lhs = side(&|x| bs_transform(f, order, Complex64::new(x, 0.0), nodes), &FnRef(g))?;
    let rhs = side(&|x| bs_transform(g, order, Complex64::new(x, 0.0), nodes), &FnRef(f))?;
    Ok((lhs, rhs))
}

/// Borrowed view so `?Sized` inputs can be used as trait objects.
struct FnRef<'a, T: ?Sized>(&'a T);

impl<T: TestFunction + ?Sized> TestFunction for FnRef<'_, T> {
    fn support_radius(&self) -> f64 {
        self.0.support_radius()
    }
    fn max_derivative_order(&self) -> usize {
        self.0.max_derivative_order()
    }
    fn eval(&self, x: f64, n: usize) -> f64 {
        self.0.eval(x, n)
    }
    fn edge_exponent(&self) -> f64 {
        self.0.edge_exponent()
    }
}

/// ⟨T, S_{−iz}⟩ = Σ_j w_j (−1)^{m_j} ∂^{m_j} S_{−iz}(x_j).
pub fn bs_transform_dirac(t: &DiracCombination, order: &Order, z: Complex64, nodes: usize) -> Result<Complex64> {
    let product = z.norm() * t.support_bound;
    if product > DIRAC_WINDOW {
        return Err(Error::Window {
            product,
            limit: DIRAC_WINDOW,
        });
    }
    let lambda = -I * z;
    let mut sum = ZERO;
    for term in &t.terms {
        let d = kernel_derivative(order, lambda, term.location, term.derivative_order, nodes)?;
        let sign = if term.derivative_order % 2 == 0 { 1.0 } else { -1.0 };
        sum += term.weight * d * sign;
    }
    Ok(sum)
}

/// F_BS^α(f) on a list of points, in input order.
pub fn spectrum<F: TestFunction + ?Sized>(
    f: &F,
    order: &Order,
    points: &[Complex64],
    route: TransformRoute,
    nodes: usize,
    exec: Execution,
) -> Result<SpectrumSample> {
    let a = nonzero_radius(f)?;
    let values = par::try_map(points, exec, |&z| match route {
        TransformRoute::Direct => bs_transform(f, order, z, nodes),
        TransformRoute::Factored => bs_transform_factored(f, order, z, nodes),
    })?;
    Ok(SpectrumSample {
        points: points.to_vec(),
        values,
        order: *order,
        input: String::new(),
        route,
        support_radius: a,
    })
}
