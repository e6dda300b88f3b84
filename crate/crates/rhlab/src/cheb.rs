//! Chebyshev interpolation on [-1, 1] at first-kind points.
//!
//! First-kind nodes are interior to the interval, which lets densities live on
//! open arcs without ever evaluating at contour endpoints or vertices.

use num_complex::Complex64;
use std::f64::consts::PI;

/// First-kind Chebyshev points, ascending: t_j = -cos(π(2j+1)/(2n)).
pub fn nodes(n: usize) -> Vec<f64> {
    assert!(n >= 1);
    (0..n).map(|j| -(PI * (2 * j + 1) as f64 / (2 * n) as f64).cos()).collect()
}

/// Values at `nodes(n)` → Chebyshev coefficients (exact discrete transform).
pub fn vals_to_coeffs(vals: &[Complex64]) -> Vec<Complex64> {
    let n = vals.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    // a_k = (2-δ_{k0})/n Σ_j f(t_j) T_k(t_j), with t_j = -cos(θ_j), θ_j = π(2j+1)/(2n),
    // so T_k(t_j) = cos(k(π - θ_j)).
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in vals.iter().enumerate() {
            let theta = PI - PI * (2 * j + 1) as f64 / (2 * n) as f64;
            acc += v * (k as f64 * theta).cos();
        }
        let scale = if k == 0 { 1.0 / n as f64 } else { 2.0 / n as f64 };
        coeffs[k] = acc * scale;
    }
    coeffs
}

/// Chebyshev coefficients → values at `nodes(n)`.
pub fn coeffs_to_vals(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let ts = nodes(n);
    ts.iter().map(|&t| clenshaw(coeffs, Complex64::new(t, 0.0))).collect()
}

/// Evaluate Σ a_k T_k(z) by Clenshaw recurrence (z may be complex).
pub fn clenshaw(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    let two_z = z * 2.0;
    for &a in coeffs.iter().rev() {
        let tmp = b1;
        b1 = a + two_z * b1 - b2;
        b2 = tmp;
    }
    b1 - z * b2
}

/// ∫_{-1}^{1} T_k(t) dt.
#[inline]
pub fn t_integral(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        2.0 / (1.0 - (k as f64) * (k as f64))
    }
}

/// ∫_{-1}^{1} Σ a_k T_k dt.
pub fn integrate(coeffs: &[Complex64]) -> Complex64 {
    coeffs.iter().enumerate().map(|(k, &a)| a * t_integral(k)).sum()
}

/// Coefficients of the derivative of Σ a_k T_k.
pub fn differentiate(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    // d_{k-1} = d_{k+1} + 2k a_k, halve d_0 at the end
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for k in (1..n).rev() {
        let dkp1 = if k + 1 < n { d[k + 1] } else { Complex64::new(0.0, 0.0) };
        d[k - 1] = dkp1 + coeffs[k] * (2.0 * k as f64);
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}
