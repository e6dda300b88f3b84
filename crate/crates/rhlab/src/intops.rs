//! Integrable operators: kernels K(z,z') = Σ f_i(z) g_i(z') / (z - z'),
//! their resolvents through an associated Riemann–Hilbert problem, and an
//! independent Nyström oracle.
//!
//! For a zero-sum kernel (Σ f_i g_i ≡ 0) the resolvent (1-K)⁻¹ = 1 + L is
//! again integrable, with components read off the solution of the normalized
//! RHP with jump `v = I - 2πi f gᵀ`:
//!
//! ```text
//!   F = m± f,        G = (m±⁻¹)ᵀ g,
//! ```
//!
//! where the two side choices agree identically because (v - I) annihilates
//! f and (v⁻¹ - I)ᵀ annihilates g (both are rank-one with zero trace).  The
//! jump does not approach the identity at the endpoints of an interval
//! support, which produces logarithmic densities there; the solver meets them
//! with dyadically graded panels toward the endpoints.

use num_complex::Complex64;
use std::sync::Arc as SArc;
use thiserror::Error;

use crate::c64;
use crate::cheb;
use crate::contour::{Arc, Contour};
use crate::linalg::CMat;
use crate::quad;
use crate::rhsolver::{solve_normalized, JumpField, Mat2, RhSolution, SolveError, SolverConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum IntopsError {
    #[error("kernel diagonal undefined: components do not satisfy Σ f_i g_i = 0")]
    DiagonalUndefined,
    #[error("derivative samplers are required for the diagonal limit")]
    MissingDerivatives,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Shared sampler of one kernel component.
pub type Component = SArc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Support of an integrable kernel.
#[derive(Clone, Copy, Debug)]
pub enum Support {
    Interval(f64, f64),
    Circle { radius: f64 },
}

/// A kernel Σ f_i(z) g_i(z') / (z - z') with two components.
pub struct IntegrableKernel {
    pub support: Support,
    pub f: [Component; 2],
    pub g: [Component; 2],
    /// d f_i / dz, used for the diagonal limit Σ f_i'(z) g_i(z).
    pub df: Option<[Component; 2]>,
    pub zero_sum: bool,
}

/// Build a kernel, sampling Σ f_i g_i on the support to set the zero-sum flag.
pub fn make_kernel(
    support: Support,
    f: [Component; 2],
    g: [Component; 2],
    df: Option<[Component; 2]>,
) -> IntegrableKernel {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for j in 0..64 {
        let z = match support {
            Support::Interval(a, b) => c64(a + (b - a) * (j as f64 + 0.5) / 64.0, 0.0),
            Support::Circle { radius } => Complex64::from_polar(radius, TWO_PI * j as f64 / 64.0),
        };
        let s = f[0](z) * g[0](z) + f[1](z) * g[1](z);
        worst = worst.max(s.norm());
        scale = scale.max(f[0](z).norm() * g[0](z).norm() + f[1](z).norm() * g[1](z).norm());
    }
    let zero_sum = worst <= 1e-12 * scale.max(1.0);
    IntegrableKernel { support, f, g, df, zero_sum }
}

/// The sine kernel sin(x(z-z'))/(π(z-z')) on an interval.
pub fn sine_kernel(x: f64, a: f64, b: f64) -> IntegrableKernel {
    let scale = (c64(0.0, TWO_PI)).inv() * 2.0; // 1/(iπ)
    make_kernel(
        Support::Interval(a, b),
        [
            SArc::new(move |z: Complex64| (c64(0.0, x) * z).exp()),
            SArc::new(move |z: Complex64| (-c64(0.0, x) * z).exp()),
        ],
        [
            SArc::new(move |z: Complex64| (-c64(0.0, x) * z).exp() * scale * 0.5),
            SArc::new(move |z: Complex64| -((c64(0.0, x) * z).exp()) * scale * 0.5),
        ],
        Some([
            SArc::new(move |z: Complex64| c64(0.0, x) * (c64(0.0, x) * z).exp()),
            SArc::new(move |z: Complex64| -c64(0.0, x) * (-c64(0.0, x) * z).exp()),
        ]),
    )
}

impl IntegrableKernel {
    /// K(z, z'), with the diagonal defined by the zero-sum limit.
    pub fn eval(&self, z: Complex64, zp: Complex64) -> Result<Complex64, IntopsError> {
        if (z - zp).norm() > 1e-12 {
            let num = self.f[0](z) * self.g[0](zp) + self.f[1](z) * self.g[1](zp);
            return Ok(num / (z - zp));
        }
        if !self.zero_sum {
            return Err(IntopsError::DiagonalUndefined);
        }
        let df = self.df.as_ref().ok_or(IntopsError::MissingDerivatives)?;
        Ok(df[0](z) * self.g[0](z) + df[1](z) * self.g[1](z))
    }

    /// Jump matrix v = I - 2πi f gᵀ of the associated RHP.
    pub fn jump_matrix(&self, z: Complex64) -> Mat2 {
        let two_pi_i = c64(0.0, TWO_PI);
        let (f1, f2) = (self.f[0](z), self.f[1](z));
        let (g1, g2) = (self.g[0](z), self.g[1](z));
        Mat2::new(
            ONE - two_pi_i * f1 * g1,
            -two_pi_i * f1 * g2,
            -two_pi_i * f2 * g1,
            ONE - two_pi_i * f2 * g2,
        )
    }
}

// ---------------------------------------------------------------------------
// RHP resolvent
// ---------------------------------------------------------------------------

/// Dyadically graded panels of [a, b] toward both endpoints.
pub fn graded_interval_contour(a: f64, b: f64, levels: usize, n_inner: usize) -> (Contour, Vec<usize>) {
    let len = b - a;
    let mut pts = vec![0.0f64];
    for j in (1..=levels).rev() {
        pts.push(0.5f64.powi(j as i32 + 1));
    }
    pts.push(0.5);
    let mut breaks: Vec<f64> = pts.iter().map(|&u| a + u * len).collect();
    let right: Vec<f64> = pts.iter().rev().skip(1).map(|&u| b - u * len).collect();
    breaks.extend(right);
    let arcs: Vec<Arc> = breaks.windows(2).map(|w| Arc::segment(c64(w[0], 0.0), c64(w[1], 0.0))).collect();
    let ns = vec![n_inner; arcs.len()];
    (Contour::new(arcs).expect("graded panels are admissible"), ns)
}

/// Resolvent components of (1-K)⁻¹ = 1 + L read off the RHP solution.
pub struct Resolvent {
    pub sol: RhSolution,
    kernel: IntegrableKernel,
    /// per-panel Chebyshev coefficients of the four entries of m₊
    panel_coeffs: Vec<[Vec<Complex64>; 4]>,
    /// worst disagreement between the two side choices of F and G
    pub side_agreement: f64,
}

/// Solve the associated RHP and package the resolvent kernel
/// L(z,z') = Σ F_i(z) G_i(z') / (z - z').
pub fn resolvent_via_rhp(kernel: IntegrableKernel, levels: usize, n_inner: usize) -> Result<Resolvent, IntopsError> {
    if !kernel.zero_sum {
        return Err(IntopsError::DiagonalUndefined);
    }
    let (contour, ns) = match kernel.support {
        Support::Interval(a, b) => graded_interval_contour(a, b, levels, n_inner),
        Support::Circle { radius } => {
            let c = Contour::new(vec![Arc::circle(ZERO, radius, true)]).unwrap();
            (c, vec![n_inner])
        }
    };
    let f_cl = [kernel.f[0].clone(), kernel.f[1].clone()];
    let g_cl = [kernel.g[0].clone(), kernel.g[1].clone()];
    let jump = JumpField::new(contour, move |_, z| {
        let two_pi_i = c64(0.0, TWO_PI);
        let (a1, a2) = (f_cl[0](z), f_cl[1](z));
        let (b1, b2) = (g_cl[0](z), g_cl[1](z));
        Mat2::new(
            ONE - two_pi_i * a1 * b1,
            -two_pi_i * a1 * b2,
            -two_pi_i * a2 * b1,
            ONE - two_pi_i * a2 * b2,
        )
    });
    // endpoint panels carry logarithmic densities, so the global residual is
    // not the acceptance metric here; the resolvent comparisons downstream are
    let cfg = SolverConfig { residual_tol: f64::INFINITY, cond_limit: 1e13 };
    let sol = solve_normalized(&jump, &ns, &cfg)?;

    let mut panel_coeffs = Vec::new();
    let mut offset = 0usize;
    for &n in &sol.ops.disc.ns {
        let mut entry: [Vec<Complex64>; 4] = [vec![], vec![], vec![], vec![]];
        for (e, slot) in entry.iter_mut().enumerate() {
            let vals: Vec<Complex64> = (0..n).map(|j| sol.m_plus[offset + j].0[e]).collect();
            *slot = cheb::vals_to_coeffs(&vals);
        }
        panel_coeffs.push(entry);
        offset += n;
    }

    let mut side_agreement = 0.0f64;
    for (g, (mp, mm)) in sol.m_plus.iter().zip(&sol.m_minus).enumerate() {
        let z = node_of(&sol, g);
        let fv = [kernel.f[0](z), kernel.f[1](z)];
        let gv = [kernel.g[0](z), kernel.g[1](z)];
        let f_plus = apply(mp, fv);
        let f_minus = apply(mm, fv);
        let g_plus = apply_inv_t(mp, gv);
        let g_minus = apply_inv_t(mm, gv);
        for i in 0..2 {
            side_agreement = side_agreement.max((f_plus[i] - f_minus[i]).norm());
            side_agreement = side_agreement.max((g_plus[i] - g_minus[i]).norm());
        }
    }
    Ok(Resolvent { sol, kernel, panel_coeffs, side_agreement })
}

fn node_of(sol: &RhSolution, g: usize) -> Complex64 {
    let mut idx = g;
    for (a, &n) in sol.ops.disc.ns.iter().enumerate() {
        if idx < n {
            return sol.ops.disc.nodes[a][idx];
        }
        idx -= n;
    }
    unreachable!()
}

fn apply(m: &Mat2, v: [Complex64; 2]) -> [Complex64; 2] {
    [m.at(0, 0) * v[0] + m.at(0, 1) * v[1], m.at(1, 0) * v[0] + m.at(1, 1) * v[1]]
}

fn apply_inv_t(m: &Mat2, v: [Complex64; 2]) -> [Complex64; 2] {
    let inv = m.inv();
    [inv.at(0, 0) * v[0] + inv.at(1, 0) * v[1], inv.at(0, 1) * v[0] + inv.at(1, 1) * v[1]]
}

impl Resolvent {
    /// m₊ at a point of the support, by panelwise spectral interpolation.
    fn m_at(&self, z: Complex64) -> Mat2 {
        let disc = &self.sol.ops.disc;
        for (a, arc) in disc.contour.arcs.iter().enumerate() {
            if let Some(m) = arc.mobius() {
                let t = m.inverse(z);
                if t.im.abs() < 1e-9 && (-1.0 - 1e-12..=1.0 + 1e-12).contains(&t.re) {
                    let c = &self.panel_coeffs[a];
                    return Mat2([
                        cheb::clenshaw(&c[0], t),
                        cheb::clenshaw(&c[1], t),
                        cheb::clenshaw(&c[2], t),
                        cheb::clenshaw(&c[3], t),
                    ]);
                }
            } else {
                let (center, radius, _) = arc.circle_data().unwrap();
                if ((z - center).norm() - radius).abs() < 1e-9 * radius {
                    let n = disc.ns[a];
                    let modes = crate::cauchy::laurent_modes(n);
                    let nodes = &disc.nodes[a];
                    let u = (z - center) / radius;
                    let mut out = [ZERO; 4];
                    for (e, o) in out.iter_mut().enumerate() {
                        let vals: Vec<Complex64> = (0..n).map(|j| self.sol.m_plus[j].0[e]).collect();
                        let mut acc = ZERO;
                        for (idx, &k) in modes.iter().enumerate() {
                            let mut coeff = ZERO;
                            for (j, &zj) in nodes.iter().enumerate() {
                                coeff += vals[j] * ((zj - center) / radius).powi(-(k as i32));
                            }
                            acc += coeff / n as f64 * u.powi(k as i32);
                            let _ = idx;
                        }
                        *o = acc;
                    }
                    return Mat2(out);
                }
            }
        }
        panic!("evaluation point {z} is not on the kernel support");
    }

    /// Resolvent components F(z) = m₊ f and G(z) = (m₊⁻¹)ᵀ g.
    pub fn components(&self, z: Complex64) -> ([Complex64; 2], [Complex64; 2]) {
        let m = self.m_at(z);
        let fv = [self.kernel.f[0](z), self.kernel.f[1](z)];
        let gv = [self.kernel.g[0](z), self.kernel.g[1](z)];
        (apply(&m, fv), apply_inv_t(&m, gv))
    }

    /// L(z, z') off the diagonal.
    pub fn eval(&self, z: Complex64, zp: Complex64) -> Complex64 {
        let (fz, _) = self.components(z);
        let (_, gzp) = self.components(zp);
        (fz[0] * gzp[0] + fz[1] * gzp[1]) / (z - zp)
    }

    /// Diagonal L(z, z) by the zero-sum limit, with F' from centered
    /// differences of the interpolant.
    pub fn eval_diag(&self, z: Complex64) -> Complex64 {
        let h = 1e-5;
        let (fp, _) = self.components(z + h);
        let (fm, _) = self.components(z - h);
        let (_, gz) = self.components(z);
        let df = [(fp[0] - fm[0]) / (2.0 * h), (fp[1] - fm[1]) / (2.0 * h)];
        df[0] * gz[0] + df[1] * gz[1]
    }

    /// Worst |Σ F_i G_i| over the collocation nodes (zero-sum inheritance).
    pub fn zero_sum_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for g in 0..self.sol.m_plus.len() {
            let z = node_of(&self.sol, g);
            let (f, gg) = self.components(z);
            worst = worst.max((f[0] * gg[0] + f[1] * gg[1]).norm());
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// Nyström oracle
// ---------------------------------------------------------------------------

/// Dense Nyström discretization: nodes, weights, kernel matrix, resolvent
/// kernel values and the Fredholm determinant det(1 - W^{1/2} K W^{1/2}).
pub struct Nystrom {
    /// Parameter values (abscissae on an interval, angles on a circle).
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kernel: CMat,
    pub resolvent: CMat,
    pub det: f64,
}

pub fn nystrom_oracle(kernel: &IntegrableKernel, m: usize) -> Result<Nystrom, IntopsError> {
    let (nodes, weights) = match kernel.support {
        Support::Interval(a, b) => quad::gauss_legendre_on(a, b, m),
        Support::Circle { radius } => {
            let nodes: Vec<f64> = (0..m).map(|j| TWO_PI * j as f64 / m as f64).collect();
            let w = vec![TWO_PI * radius / m as f64; m];
            (nodes, w)
        }
    };
    let point = |s: f64| match kernel.support {
        Support::Interval(..) => c64(s, 0.0),
        Support::Circle { radius } => Complex64::from_polar(radius, s),
    };
    let mut k = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            k[(i, j)] = kernel.eval(point(nodes[i]), point(nodes[j]))?;
        }
    }
    let mut sym = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            sym[(i, j)] = -k[(i, j)] * (weights[i].sqrt() * weights[j].sqrt());
        }
        sym[(i, i)] += ONE;
    }
    let det = sym.lu().map_err(|_| IntopsError::DiagonalUndefined)?.det().re;
    let mut a = CMat::zeros(m, m);
    for j in 0..m {
        for i in 0..m {
            a[(i, j)] = -k[(i, j)] * weights[j];
        }
        a[(j, j)] += ONE;
    }
    let lua = a.lu().map_err(|_| IntopsError::DiagonalUndefined)?;
    let mut resolvent = CMat::zeros(m, m);
    for j in 0..m {
        let mut col: Vec<Complex64> = (0..m).map(|i| k[(i, j)]).collect();
        lua.solve_in_place(&mut col);
        for i in 0..m {
            resolvent[(i, j)] = col[i];
        }
    }
    Ok(Nystrom { nodes, weights, kernel: k, resolvent, det })
}
