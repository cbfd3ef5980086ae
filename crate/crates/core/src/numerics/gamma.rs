//! Gamma function and the handful of combinatorial helpers built on it.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (caller passes x - 1)
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Γ(x) for real `x` away from the poles at 0, −1, −2, …
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x == x.floor() && x <= 23.0 {
        // exact for small integers
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// ln|Γ(x)| for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Euler beta function B(a, b) for a, b > 0.
pub fn beta(a: f64, b: f64) -> f64 {
    if a + b < 150.0 {
        gamma_unchecked(a) * gamma_unchecked(b) / gamma_unchecked(a + b)
    } else {
        (ln_gamma(a).unwrap() + ln_gamma(b).unwrap() - ln_gamma(a + b).unwrap()).exp()
    }
}

/// Falling factorial s (s−1) ⋯ (s−j+1); equals Γ(s+1)/Γ(s+1−j) without the poles.
pub fn falling_factorial(s: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (s - i as f64))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!((gamma(0.5).unwrap() - 1.772_453_850_905_516).abs() < 1e-14);
        assert!((gamma(2.5).unwrap() - 1.329_340_388_179_137).abs() < 1e-14);
        assert_eq!(gamma(6.0).unwrap(), 120.0);
    }

    #[test]
    fn poles_rejected() {
        assert_eq!(gamma(0.0), Err(Error::Pole(0.0)));
        assert_eq!(gamma(-3.0), Err(Error::Pole(-3.0)));
        assert!(gamma(-2.5).is_ok());
    }

    #[test]
    fn recurrence_on_grid() {
        for i in 1..=100 {
            let x = 0.1 * i as f64;
            let g1 = gamma(x + 1.0).unwrap();
            let g0 = gamma(x).unwrap();
            assert!(((g1 - x * g0) / g1).abs() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn accuracy_against_factorials_and_half_integers() {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        for n in 0..40usize {
            let x = n as f64 + 0.5;
            let exact = factorial(2 * n) * PI.sqrt() / (4f64.powi(n as i32) * factorial(n));
            let got = gamma(x).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-13, "x = {x}");
        }
        for n in 1..50usize {
            let exact = factorial(n - 1);
            let got = gamma(n as f64).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-13);
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.3, 1.7, 12.4, 49.0] {
            let a = ln_gamma(x).unwrap();
            let b = gamma(x).unwrap().ln();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn helpers() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(falling_factorial(3.0, 4), 0.0);
        assert_eq!(falling_factorial(2.6, 2), 2.6 * 1.6);
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-16);
    }
}
