//! Property suites: each property reports its worst measured residual
//! against a fixed tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{make_poly_bump, weighted_l1_norm, SmoothCompactFunction, TestFunction};
use crate::intertwine::{v_alpha, v_duality_pairing, weyl, weyl_derivative, weyl_image};
use crate::kernel::{apply_bessel_struve_op, kernel, kernel_derivative, kernel_integral, kernel_series, Order};
use crate::numerics::richardson_derivative_complex;
use crate::paley_wiener::{
    cauchy_riemann_residual, complex_scan, finite_part_identity, fit_exponential_type, lambda_half_check,
    order_recurrence_check, schwartz_envelope_check, ScanGrid, ScanSource,
};
use crate::par::Execution;
use crate::transforms::{
    bs_transform, bs_transform_derivative, bs_transform_dirac, bs_transform_factored, duality_check, hankel,
    DiracCombination, DiracTerm,
};

const NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Kernel,
    Intertwine,
    Transforms,
    PaleyWiener,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kernel" => Ok(Suite::Kernel),
            "intertwine" => Ok(Suite::Intertwine),
            "transforms" => Ok(Suite::Transforms),
            "paley-wiener" => Ok(Suite::PaleyWiener),
            "all" => Ok(Suite::All),
            other => Err(Error::Invalid(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub suite: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

type Check = fn(Execution) -> Result<f64>;

struct Property {
    name: &'static str,
    tolerance: f64,
    check: Check,
}

const fn prop(name: &'static str, tolerance: f64, check: Check) -> Property {
    Property { name, tolerance, check }
}

/// Run a suite. `tol` replaces every property's own tolerance when given.
pub fn run_suite(suite: Suite, tol: Option<f64>, exec: Execution) -> Vec<PropertyResult> {
    let groups: &[(&str, &[Property])] = match suite {
        Suite::Kernel => &[("kernel", KERNEL)],
        Suite::Intertwine => &[("intertwine", INTERTWINE)],
        Suite::Transforms => &[("transforms", TRANSFORMS)],
        Suite::PaleyWiener => &[("paley-wiener", PALEY_WIENER)],
        Suite::All => &[
            ("kernel", KERNEL),
            ("intertwine", INTERTWINE),
            ("transforms", TRANSFORMS),
            ("paley-wiener", PALEY_WIENER),
        ],
    };
    let mut out = Vec::new();
    for (suite_name, props) in groups {
        for p in props.iter() {
            let tolerance = tol.unwrap_or(p.tolerance);
            let (residual, error) = match (p.check)(exec) {
                Ok(r) => (r, None),
                Err(e) => (f64::INFINITY, Some(e.to_string())),
            };
            out.push(PropertyResult {
                name: p.name.to_string(),
                suite: suite_name.to_string(),
                residual,
                tolerance,
                pass: error.is_none() && residual <= tolerance,
                error,
            });
        }
    }
    out
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ord(alpha: f64) -> Result<Order> {
    Order::new(alpha)
}

/// Deterministic points in [0, 1) from the golden-ratio sequence.
fn quasi_random(n: usize, seed: f64) -> impl Iterator<Item = f64> {
    const PHI: f64 = 0.618_033_988_749_894_9;
    (1..=n).map(move |i| (seed + PHI * i as f64).fract())
}

fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut w: f64 = 0.0;
    for r in it {
        let r = r?;
        if r.is_nan() {
            return Ok(f64::NAN);
        }
        w = w.max(r);
    }
    Ok(w)
}

fn pair_residual((l, r): (Complex64, Complex64)) -> f64 {
    (l - r).norm() / (1.0 + l.norm())
}

const KERNEL: &[Property] = &[
    prop("route_consistency", 1e-10, route_consistency),
    prop("symmetry", 1e-10, symmetry),
    prop("reflection", 1e-12, reflection),
    prop("boundedness", 1e-12, kernel_boundedness),
    prop("decay_half", 1e-12, kernel_decay),
    prop("closed_form_half", 1e-12, closed_form_half),
    prop("eigenfunction_residual", 1e-7, eigenfunction_residual),
];

fn route_consistency(_: Execution) -> Result<f64> {
    let lambdas = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(1.0, 1.0)];
    let mut items = Vec::new();
    for alpha in [-0.3, 0.0, 0.5, 1.0, 1.5, 2.5] {
        let o = ord(alpha)?;
        for &l in &lambdas {
            for i in 0..25 {
                let x = c(-3.0 + 0.25 * i as f64, 0.0);
                let s = kernel_series(&o, l, x)?.value;
                let q = kernel_integral(&o, l, x, NODES)?.value;
                items.push(Ok((s - q).norm()));
            }
        }
    }
    worst(items)
}

fn complex_grid() -> Vec<Complex64> {
    let axis = [-1.5, -0.7, 0.0, 0.8, 1.6];
    axis.iter().flat_map(|&x| axis.iter().map(move |&y| c(x, y))).collect()
}

fn symmetry(_: Execution) -> Result<f64> {
    let grid = complex_grid();
    let mut items = Vec::new();
    for alpha in [-0.3, 0.5, 1.7] {
        let o = ord(alpha)?;
        for &l in &grid {
            for &z in &grid {
                let a = kernel(&o, -Complex64::i() * l, z)?.value;
                let b = kernel(&o, -Complex64::i() * z, l)?.value;
                items.push(Ok((a - b).norm()));
            }
        }
    }
    worst(items)
}

fn reflection(_: Execution) -> Result<f64> {
    let grid = complex_grid();
    let mut items = Vec::new();
    for alpha in [-0.3, 0.5, 1.7] {
        let o = ord(alpha)?;
        for &l in &grid {
            for &z in &grid {
                let a = kernel(&o, -l, z)?.value;
                let b = kernel(&o, l, -z)?.value;
                items.push(Ok((a - b).norm()));
            }
        }
    }
    worst(items)
}

fn kernel_boundedness(_: Execution) -> Result<f64> {
    let mut items = Vec::new();
    for (i, (u, v)) in quasi_random(100, 0.1).zip(quasi_random(100, 0.37)).enumerate() {
        let o = ord(-0.45 + 3.0 * ((i as f64 * 0.754_877_666).fract()))?;
        let lambda = 12.0 * (2.0 * u - 1.0);
        let x = 2.5 * (2.0 * v - 1.0);
        let s = kernel(&o, c(0.0, lambda), c(x, 0.0))?.value;
        items.push(Ok((s.norm() - 1.0).max(0.0)));
    }
    worst(items)
}

fn kernel_decay(_: Execution) -> Result<f64> {
    let v = kernel(&ord(0.5)?, c(0.0, -100.0), c(1.0, 0.0))?.value.norm();
    Ok((v - 0.02).max(0.0))
}

fn closed_form_half(_: Execution) -> Result<f64> {
    let o = ord(0.5)?;
    let mut items = Vec::new();
    for (u, v) in quasi_random(50, 0.2).zip(quasi_random(50, 0.9)) {
        let lambda = c(4.0 * (2.0 * u - 1.0), 6.0 * (2.0 * v - 1.0));
        let x = 2.0 * (u + v) - 2.0 + 0.013;
        let w = lambda * x;
        let exact = (w.exp() - 1.0) / w;
        items.push(Ok((kernel(&o, lambda, c(x, 0.0))?.value - exact).norm()));
    }
    worst(items)
}

fn eigenfunction_residual(_: Execution) -> Result<f64> {
    let mut items = Vec::new();
    let lambdas = [c(1.5, 0.0), c(-0.7, 0.0), c(0.0, 2.0), c(1.0, -1.0), c(3.0, 0.5)];
    for alpha in [-0.3, 0.8, 2.5] {
        let o = ord(alpha)?;
        for &lam in &lambdas {
            for x in [-1.7, -0.4, 0.6, 2.2] {
                let f = |t: f64, n: usize| kernel_derivative(&o, lam, t, n, NODES).unwrap_or(c(f64::NAN, 0.0));
                let lhs = apply_bessel_struve_op(f, &o, x)?;
                let s = kernel(&o, lam, c(x, 0.0))?.value;
                items.push(Ok((lhs - lam * lam * s).norm() / (1.0 + lam.norm_sqr())));
            }
        }
    }
    worst(items)
}

const INTERTWINE: &[Property] = &[
    prop("weyl_closed_form_half", 1e-11, weyl_closed_form),
    prop("v_weyl_round_trip", 1e-6, v_weyl_round_trip),
    prop("weyl_derivative_recurrence", 1e-7, weyl_recurrence),
    prop("v_duality", 1e-7, v_duality),
    prop("weyl_origin_limits", 1e-5, weyl_origin_limits),
];

fn weyl_closed_form(_: Execution) -> Result<f64> {
    let f = make_poly_bump(1.0, 2)?;
    let o = ord(0.5)?;
    worst((1..=20).flat_map(|i| {
        let y = i as f64 / 21.0;
        [y, -y]
    }).map(|y| Ok((weyl(&f, &o, y, NODES)? - (1.0 - y * y).powi(3) / 6.0).abs())))
}

fn v_weyl_round_trip(exec: Execution) -> Result<f64> {
    let cases: Vec<(f64, f64, u32)> = [0.5, 1.5, 2.5, 0.3, 1.2]
        .iter()
        .flat_map(|&alpha| [(alpha, 1.0, 4u32), (alpha, 2.0, 5)])
        .collect();
    let errs = crate::par::try_map(&cases, exec, |&(alpha, a, m)| -> Result<f64> {
        let o = ord(alpha)?;
        let f = make_poly_bump(a, m)?;
        let g = weyl_image(f.clone(), o, NODES)?;
        worst([-0.8, -0.5, -0.2, 0.2, 0.5, 0.8].iter().map(|&s| {
            let x = s * a;
            Ok((v_alpha(&g, &o, x, NODES)? - f.eval(x, 0)).abs())
        }))
    })?;
    worst(errs.into_iter().map(Ok))
}

fn weyl_recurrence(_: Execution) -> Result<f64> {
    let f = make_poly_bump(1.0, 3)?;
    let mut items = Vec::new();
    for alpha in [1.5, 2.5] {
        let (o, lower) = (ord(alpha)?, ord(alpha - 1.0)?);
        for i in 0..20 {
            let y = -0.95 + 0.1 * i as f64;
            let lhs = weyl_derivative(&f, &o, y, 1, NODES)?;
            let rhs = -2.0 * alpha * y * weyl(&f, &lower, y, NODES)?;
            items.push(Ok((lhs - rhs).abs()));
        }
    }
    worst(items)
}

fn v_duality(_: Execution) -> Result<f64> {
    let mut items = Vec::new();
    for alpha in [0.5, 1.5, 0.3, -0.3] {
        let o = ord(alpha)?;
        let f = weyl_image(make_poly_bump(2.0, 5)?, o, NODES)?;
        let g = make_poly_bump(1.5, 4)?;
        let (l, r) = v_duality_pairing(&f, &g, &o, NODES)?;
        items.push(Ok((l - r).abs()));
    }
    worst(items)
}

fn weyl_origin_limits(_: Execution) -> Result<f64> {
    let mut items = Vec::new();
    for alpha in [-0.3, 0.3, 0.5, 1.2] {
        let g = weyl_image(make_poly_bump(1.0, 4)?, ord(alpha)?, NODES)?;
        for n in 0..=3 {
            let (l, r) = g.origin_limits(n, 1e-5);
            // a non-converged one-sided limit counts as a failure of size 1
            items.push(Ok(if l.converged && r.converged { l.spread.max(r.spread) } else { 1.0 }));
        }
    }
    worst(items)
}

const TRANSFORMS: &[Property] = &[
    prop("factorization", 1e-8, factorization),
    prop("sup_norm_bound", 1e-10, sup_norm_bound),
    prop("hankel_factor_two", 1e-9, hankel_factor_two),
    prop("duality", 1e-8, transform_duality),
    prop("derivative_transforms", 1e-6, derivative_transforms),
    prop("decay", 1e-12, transform_decay),
    prop("dirac_linearity", 1e-13, dirac_linearity),
];

fn acceptance_bumps() -> Result<[SmoothCompactFunction; 2]> {
    Ok([make_poly_bump(1.0, 4)?, make_poly_bump(2.0, 3)?])
}

fn factorization(exec: Execution) -> Result<f64> {
    let bumps = acceptance_bumps()?;
    let mut cases = Vec::new();
    for alpha in [0.3, 0.5, 1.5] {
        for b in 0..2 {
            for lambda in [0.5, 1.0, 2.0, 5.0] {
                cases.push((alpha, b, lambda));
            }
        }
    }
    let errs = crate::par::try_map(&cases, exec, |&(alpha, b, lambda)| -> Result<f64> {
        let o = ord(alpha)?;
        let z = c(lambda, 0.0);
        Ok((bs_transform(&bumps[b], &o, z, NODES)? - bs_transform_factored(&bumps[b], &o, z, NODES)?).norm())
    })?;
    worst(errs.into_iter().map(Ok))
}

fn sup_norm_bound(exec: Execution) -> Result<f64> {
    let bumps = acceptance_bumps()?;
    let mut items = Vec::new();
    for alpha in [-0.3, 0.5, 1.5] {
        let o = ord(alpha)?;
        for f in &bumps {
            let norm = weighted_l1_norm(f, &o, NODES)?;
            let lambdas: Vec<f64> = (0..200).map(|i| -25.0 + 0.25 * i as f64).collect();
            let vals = crate::par::try_map(&lambdas, exec, |&l| bs_transform(f, &o, c(l, 0.0), NODES).map(|v| v.norm()))?;
            let sup = vals.into_iter().fold(0.0, f64::max);
            items.push(Ok((sup - norm).max(0.0)));
        }
    }
    worst(items)
}

fn hankel_factor_two(_: Execution) -> Result<f64> {
    let bumps = acceptance_bumps()?;
    let mut items = Vec::new();
    for alpha in [0.3, 1.5] {
        let o = ord(alpha)?;
        for f in &bumps {
            for i in 0..20 {
                let l = 0.37 + 0.9 * i as f64;
                let h = hankel(f, &o, l, NODES)?;
                items.push(Ok((bs_transform(f, &o, c(l, 0.0), NODES)? - 2.0 * h).norm()));
            }
        }
    }
    worst(items)
}

fn transform_duality(_: Execution) -> Result<f64> {
    let pairs = [
        (make_poly_bump(1.0, 4)?, make_poly_bump(1.5, 3)?),
        (make_poly_bump(2.0, 3)?, make_poly_bump(0.7, 5)?),
        (make_poly_bump(1.0, 4)?.times_x(), make_poly_bump(1.2, 4)?),
    ];
    let mut items = Vec::new();
    for alpha in [0.3, 0.5, 1.5] {
        let o = ord(alpha)?;
        for (f, g) in &pairs {
            items.push(duality_check(f, g, &o, NODES).map(pair_residual));
        }
    }
    worst(items)
}

fn derivative_transforms(_: Execution) -> Result<f64> {
    let f = make_poly_bump(1.0, 4)?;
    let mut items = Vec::new();
    for alpha in [0.3, 1.5] {
        let o = ord(alpha)?;
        for n in 1..=2 {
            for l in [0.4, 1.7, 4.0] {
                let analytic = bs_transform_derivative(&f, &o, c(l, 0.0), n, NODES)?;
                let numeric = richardson_derivative_complex(
                    |t| bs_transform(&f, &o, c(t, 0.0), NODES).unwrap_or(c(f64::NAN, 0.0)),
                    l,
                    n,
                    0.2,
                );
                items.push(Ok((analytic - numeric.value).norm()));
            }
        }
    }
    worst(items)
}

fn transform_decay(_: Execution) -> Result<f64> {
    let f = make_poly_bump(1.0, 4)?;
    let o = ord(0.5)?;
    let bound = 0.1 * weighted_l1_norm(&f, &o, NODES)?;
    let v: Vec<f64> = [50.0, 100.0, 200.0]
        .iter()
        .map(|&l| bs_transform(&f, &o, c(l, 0.0), NODES).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    Ok((v[0] - bound).max(v[1] - v[0]).max(v[2] - v[1]).max(0.0))
}

fn dirac_linearity(_: Execution) -> Result<f64> {
    let terms = [
        DiracTerm { weight: c(0.7, -0.2), location: 0.3, derivative_order: 0 },
        DiracTerm { weight: c(-1.1, 0.0), location: -0.8, derivative_order: 1 },
        DiracTerm { weight: c(0.0, 2.0), location: 0.5, derivative_order: 2 },
    ];
    let sum = DiracCombination::new(terms.to_vec(), 1.0)?;
    let mut items = Vec::new();
    for alpha in [0.3, 0.5, 1.5] {
        let o = ord(alpha)?;
        for z in [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0)] {
            let whole = bs_transform_dirac(&sum, &o, z, NODES)?;
            let mut parts = c(0.0, 0.0);
            for t in &terms {
                let single = DiracCombination::new(
                    vec![DiracTerm { weight: c(1.0, 0.0), ..*t }],
                    1.0,
                )?;
                parts += t.weight * bs_transform_dirac(&single, &o, z, NODES)?;
            }
            items.push(Ok((whole - parts).norm() / (1.0 + whole.norm())));
        }
    }
    worst(items)
}

const PALEY_WIENER: &[Property] = &[
    prop("lambda_half_identity", 1e-9, lambda_half),
    prop("order_recurrence", 1e-6, order_recurrence),
    prop("finite_part_identity", 1e-6, finite_part),
    prop("exponential_type_band", 1e-12, exponential_type_band),
    prop("schwartz_envelope", 1e-12, schwartz_envelope),
    prop("cauchy_riemann", 1e-5, cauchy_riemann),
];

fn spectral_points() -> Vec<Complex64> {
    quasi_random(10, 0.3)
        .zip(quasi_random(10, 0.71))
        .map(|(u, v)| c(8.0 * (2.0 * u - 1.0), 5.0 * (2.0 * v - 1.0)))
        .collect()
}

fn lambda_half(_: Execution) -> Result<f64> {
    let bumps = [make_poly_bump(1.0, 2)?, make_poly_bump(2.0, 3)?.times_x()];
    let mut items = Vec::new();
    for f in &bumps {
        for z in spectral_points() {
            items.push(lambda_half_check(f, z, NODES).map(pair_residual));
        }
    }
    worst(items)
}

fn order_recurrence(_: Execution) -> Result<f64> {
    let f = make_poly_bump(1.0, 4)?;
    let o = ord(1.5)?;
    worst(spectral_points().into_iter().map(|z| order_recurrence_check(&f, &o, z, NODES).map(pair_residual)))
}

fn finite_part(_: Execution) -> Result<f64> {
    let f = make_poly_bump(1.0, 4)?;
    let mut items = Vec::new();
    for alpha in [0.5, 1.5] {
        let o = ord(alpha)?;
        for k in 1..=2 {
            for z in spectral_points() {
                items.push(finite_part_identity(&f, &o, k, z, NODES).map(pair_residual));
            }
        }
    }
    worst(items)
}

/// Grid used for the exponential-type fit of a bump with support radius `a`.
pub fn type_scan_grid(a: f64) -> Result<ScanGrid> {
    if a < 1.0 {
        ScanGrid::square(40.0, 41)
    } else {
        ScanGrid::square(20.0, 41)
    }
}

fn exponential_type_band(exec: Execution) -> Result<f64> {
    let o = ord(0.5)?;
    let mut items = Vec::new();
    for (a, m) in [(0.5, 3), (1.0, 2), (2.0, 3)] {
        let f = make_poly_bump(a, m)?;
        let s = complex_scan(ScanSource::Function(&f), &o, &type_scan_grid(a)?, NODES, exec)?;
        let fit = fit_exponential_type(&s)?;
        let t = fit.a.unwrap_or(f64::NAN);
        // distance outside [0.85a, 1.10a], relative to a
        items.push(Ok(((0.85 * a - t).max(t - 1.10 * a).max(0.0)) / a));
    }
    worst(items)
}

fn schwartz_envelope(exec: Execution) -> Result<f64> {
    let grid = ScanGrid::square(20.0, 41)?;
    let o = ord(0.5)?;
    let fit = |loc, m| schwartz_envelope_check(&DiracCombination::single(loc, m)?, &o, &grid, NODES, exec);
    let d0 = fit(0.0, 0)?;
    let d1 = fit(0.0, 1)?;
    let d9 = fit(0.9, 0)?;
    let mismatch = |m: Option<usize>, want: usize| (m.unwrap_or(usize::MAX).abs_diff(want)) as f64;
    let b = d9.b.unwrap_or(f64::NAN);
    Ok(mismatch(d0.m, 0)
        .max(d0.b.unwrap_or(f64::NAN).abs())
        .max(mismatch(d1.m, 1))
        .max(d1.b.unwrap_or(f64::NAN).abs())
        .max((0.8 - b).max(b - 1.0).max(0.0))
        .max(d9.m.map_or(f64::NAN, |m| m.saturating_sub(1) as f64)))
}

fn cauchy_riemann(exec: Execution) -> Result<f64> {
    let f = make_poly_bump(1.0, 4)?;
    let points = ScanGrid::square(10.0, 7)?.points();
    let mut items = Vec::new();
    for alpha in [0.3, 1.5] {
        let o = ord(alpha)?;
        items.push(cauchy_riemann_residual(|z| bs_transform(&f, &o, z, NODES), &points, 1e-3, exec));
    }
    worst(items)
}
