//! Gauss–Legendre quadrature and composite panels.

use std::f64::consts::PI;

/// Legendre P_n(t) and P_n'(t) by the three-term recurrence.
fn legendre_with_deriv(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-angle initial guess, then Newton
        let mut t = -(PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_with_deriv(n, t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, t);
        nodes[i] = t;
        weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (nodes, weights)
}

/// Nodes/weights for ∫_a^b via an affine map of `gauss_legendre(n)`.
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        t.iter().map(|&ti| mid + half * ti).collect(),
        w.iter().map(|&wi| wi * half).collect(),
    )
}

/// Composite Gauss–Legendre over the panels [breaks[i], breaks[i+1]].
pub fn panel_rule(breaks: &[f64], n_per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for pair in breaks.windows(2) {
        let (x, w) = gauss_legendre_on(pair[0], pair[1], n_per_panel);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

/// Integrate a real function with composite GL and one refinement check.
/// Returns (value, estimated error).
pub fn integrate_checked(f: impl Fn(f64) -> f64, breaks: &[f64], n: usize) -> (f64, f64) {
    let coarse: f64 = {
        let (x, w) = panel_rule(breaks, n);
        x.iter().zip(&w).map(|(&xi, &wi)| wi * f(xi)).sum()
    };
    let fine: f64 = {
        let (x, w) = panel_rule(breaks, 2 * n);
        x.iter().zip(&w).map(|(&xi, &wi)| wi * f(xi)).sum()
    };
    (fine, (fine - coarse).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree 15 is exact for n = 8
        let val: f64 = x.iter().zip(&w).map(|(&t, &wi)| wi * t.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn panels_integrate_gaussian() {
        let breaks: Vec<f64> = (0..=16).map(|i| -8.0 + i as f64).collect();
        let (x, w) = panel_rule(&breaks, 20);
        let val: f64 = x.iter().zip(&w).map(|(&t, &wi)| wi * (-t * t).exp()).sum();
        assert!((val - PI.sqrt()).abs() < 1e-13);
    }
}
