//! Independent reference computations for the integration tests.
//! Nothing here shares code with the library's quadrature.
#![allow(dead_code)]

use num_complex::Complex64;

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Endpoint
/// singularities of algebraic type are handled without special treatment.
/// `f` receives the point and its distances to a and to b, computed without
/// cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mut h = 0.5f64;
    let mut prev = f64::NAN;
    for _level in 0..12 {
        let mut sum = 0.0;
        let kmax = (7.0 / h) as i64;
        for k in -kmax..=kmax {
            let t = k as f64 * h;
            let u = std::f64::consts::FRAC_PI_2 * t.sinh();
            let w = std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
            // distance from the nearer endpoint: half·(1 − tanh|u|) = half·2/(e^{2|u|}+1)
            let near = half * 2.0 / ((2.0 * u.abs()).exp() + 1.0);
            if near == 0.0 || w == 0.0 {
                continue;
            }
            let far = 2.0 * half - near;
            let (dl, dr) = if u < 0.0 { (near, far) } else { (far, near) };
            let x = if u < 0.0 { a + dl } else { b - dr };
            let v = f(x, dl, dr);
            if v.is_finite() {
                sum += w * v;
            }
        }
        let est = sum * h * half;
        if (est - prev).abs() <= tol * est.abs().max(1.0) {
            return est;
        }
        prev = est;
        h *= 0.5;
    }
    prev
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    tanh_sinh(|x, _, _| f(x), a, b, 1e-14)
}

pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64) -> Complex64 {
    Complex64::new(integrate(|x| f(x).re, a, b), integrate(|x| f(x).im, a, b))
}

/// Γ(x) for x > 0 by Stirling with shift; independent of the library's Lanczos.
pub fn gamma_ref(x: f64) -> f64 {
    let mut shift = 1.0;
    let mut z = x;
    while z < 20.0 {
        shift *= z;
        z += 1.0;
    }
    let series = 1.0 + 1.0 / (12.0 * z) + 1.0 / (288.0 * z * z) - 139.0 / (51840.0 * z.powi(3))
        - 571.0 / (2488320.0 * z.powi(4))
        + 163879.0 / (209018880.0 * z.powi(5));
    (2.0 * std::f64::consts::PI / z).sqrt() * (z / std::f64::consts::E).powf(z) * series / shift
}

/// 2Γ(α+1)/(√π Γ(α+1/2)) via the reference gamma.
pub fn normalizer_ref(alpha: f64) -> f64 {
    2.0 * gamma_ref(alpha + 1.0) / (std::f64::consts::PI.sqrt() * gamma_ref(alpha + 0.5))
}

/// (1 − (x/a)²)^m and its derivatives by expanding the polynomial.
pub fn poly_bump_ref(a: f64, m: u32, x: f64, n: usize) -> f64 {
    if x.abs() > a {
        return 0.0;
    }
    let mut acc = 0.0;
    for j in 0..=m as usize {
        let power = 2 * j;
        if power < n {
            continue;
        }
        let mut c = binom(m as usize, j) * if j % 2 == 0 { 1.0 } else { -1.0 } / a.powi(power as i32);
        for q in 0..n {
            c *= (power - q) as f64;
        }
        acc += c * x.powi((power - n) as i32);
    }
    acc
}

pub fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// W_α of a poly bump from the defining integral, by tanh-sinh.
pub fn weyl_ref(alpha: f64, a: f64, m: u32, y: f64) -> f64 {
    let ay = y.abs();
    if ay >= a {
        return 0.0;
    }
    let s = y.signum();
    normalizer_ref(alpha)
        * tanh_sinh(
            |x, dl, _| dl.powf(alpha - 0.5) * (x + ay).powf(alpha - 0.5) * x * poly_bump_ref(a, m, s * x, 0),
            ay,
            a,
            1e-14,
        )
}

/// χ_α f(x) from the defining integral.
pub fn chi_ref<F: Fn(f64) -> f64>(alpha: f64, f: F, x: f64) -> f64 {
    normalizer_ref(alpha)
        * tanh_sinh(
            |t, _, dr| dr.powf(alpha - 0.5) * (1.0 + t).powf(alpha - 0.5) * f(x * t),
            0.0,
            1.0,
            1e-14,
        )
}

/// S^α of the product w = λx from a_α ∫₀¹ (1−t²)^{α−1/2} e^{wt} dt, by tanh-sinh.
pub fn kernel_ref(alpha: f64, w: Complex64) -> Complex64 {
    let weight = |t: f64, dr: f64| dr.powf(alpha - 0.5) * (1.0 + t).powf(alpha - 0.5);
    let re = tanh_sinh(|t, _, dr| weight(t, dr) * (w * t).exp().re, 0.0, 1.0, 1e-14);
    let im = tanh_sinh(|t, _, dr| weight(t, dr) * (w * t).exp().im, 0.0, 1.0, 1e-14);
    Complex64::new(re, im) * normalizer_ref(alpha)
}

/// ∫ f(x) S_{−iz}(x) |x|^{2α+1} dx for a poly bump, with the kernel from [`kernel_ref`].
pub fn bs_transform_ref(alpha: f64, a: f64, m: u32, z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let g = |x: f64| kernel_ref(alpha, -i * z * x) * (poly_bump_ref(a, m, x, 0) * x.abs().powf(2.0 * alpha + 1.0));
    integrate_complex(g, -a, 0.0) + integrate_complex(g, 0.0, a)
}
