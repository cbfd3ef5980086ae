use num_complex::Complex64;

use super::gamma::binomial;

/// Derivative estimate together with the spread between the last two
/// extrapolation levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative<T> {
    pub value: T,
    pub error: f64,
}

fn central_difference<F: Fn(f64) -> Complex64>(f: &F, x: f64, order: usize, h: f64) -> Complex64 {
    // stencil x + (order/2 − k) h, k = 0..=order
    let half = order as f64 / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=order {
        let c = binomial(order, k) * if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += f(x + (half - k as f64) * h) * c;
    }
    acc / h.powi(order as i32)
}

/// Central differences at steps h, h/2, h/4 with two Richardson levels
/// (the error expansion is even in h).
pub fn richardson_derivative_complex<F: Fn(f64) -> Complex64>(
    f: F,
    x: f64,
    order: usize,
    h0: f64,
) -> Derivative<Complex64> {
    assert!((1..=6).contains(&order), "derivative order must be in 1..=6");
    assert!(h0 > 0.0, "step must be positive");
    // keep the widest stencil inside [x − 2h0, x + 2h0]
    let h = h0 * (4.0 / order.max(2) as f64).min(1.0);
    let d0 = central_difference(&f, x, order, h);
    let d1 = central_difference(&f, x, order, h / 2.0);
    let d2 = central_difference(&f, x, order, h / 4.0);
    let r10 = (d1 * 4.0 - d0) / 3.0;
    let r11 = (d2 * 4.0 - d1) / 3.0;
    let r2 = (r11 * 16.0 - r10) / 15.0;
    Derivative {
        value: r2,
        error: (r2 - r11).norm(),
    }
}

pub fn richardson_derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: usize, h0: f64) -> Derivative<f64> {
    let d = richardson_derivative_complex(|t| Complex64::new(f(t), 0.0), x, order, h0);
    Derivative {
        value: d.value.re,
        error: d.error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_first_derivative() {
        for &x in &[-3.0, 0.0, 0.7, 12.0] {
            let d = richardson_derivative(|t| t, x, 1, 0.1);
            assert!((d.value - 1.0).abs() < 1e-12);
            assert!(d.error < 1e-12);
        }
    }

    #[test]
    fn cubic_second_derivative() {
        let d = richardson_derivative(|t| t * t * t, 1.0, 2, 0.1);
        assert!((d.value - 6.0).abs() < 1e-8);
    }

    #[test]
    fn exp_third_derivative() {
        let d = richardson_derivative(f64::exp, 0.0, 3, 0.1);
        assert!((d.value - 1.0).abs() < 1e-7, "{}", d.value);
    }

    #[test]
    fn higher_orders_of_sine() {
        // sin^{(n)}(x) = sin(x + nπ/2)
        let x = 0.4;
        for n in 1..=6 {
            let d = richardson_derivative(f64::sin, x, n, 0.2);
            let exact = (x + n as f64 * std::f64::consts::FRAC_PI_2).sin();
            assert!((d.value - exact).abs() < 1e-4, "n={n}: {} vs {exact}", d.value);
        }
    }
}
