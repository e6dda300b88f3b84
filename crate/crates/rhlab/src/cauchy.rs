//! Cauchy transforms Cf, their boundary values C±f, and the Hilbert transform
//! on composed contours, with spectral accuracy per arc family.
//!
//! The workhorse is the segment kernel: Cauchy moments of Chebyshev
//! polynomials on [-1, 1] satisfy a three-term recurrence whose homogeneous
//! solutions grow like powers of the Bernstein-ellipse radius E(z).  Near the
//! cut (E ≈ 1, including boundary values) the forward recurrence is stable and
//! is used directly; away from the cut the moments are summed by a geometric
//! series in 1/E.  Circular arcs and truncated rays reduce to the segment
//! kernel through their Möbius parametrization, because
//!
//! ```text
//!   M'(t) / (M(t) - M(σ)) = 1/(t - σ) - 1/(t - σ∞),   σ∞ = M⁻¹(∞),
//! ```
//!
//! so the Cauchy transform along an arc is a difference of two segment
//! transforms.  Full circles use Laurent modes, on which C⁺ and -C⁻ act as
//! the analytic and coanalytic projections.
//!
//! Throughout, `C⁻` is *defined* as `C⁺ - Id`, which makes the Plemelj
//! identity `C⁺f - C⁻f = f` hold to machine precision at the nodes.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use thiserror::Error;

use crate::cheb;
use crate::contour::{Arc, BasisKind, Contour};
use crate::linalg::CMat;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error)]
pub enum CauchyError {
    #[error("evaluation point ({:.6}, {:.6}) is within {dist:.3e} of the contour; use the boundary-value routines", z.0, z.1)]
    PointOnContour { z: (f64, f64), dist: f64 },
    #[error("arc {0} has no boundary-value rule for its basis")]
    UnsupportedBasis(usize),
    #[error("uniform grid too coarse: spectral tail mass {tail:.3e} of total exceeds {limit:.1e}")]
    GridTooCoarse { tail: f64, limit: f64 },
}

/// Which non-tangential boundary value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

// ---------------------------------------------------------------------------
// Segment moments
// ---------------------------------------------------------------------------

/// Cauchy moments of the Chebyshev basis on [-1, 1]:
/// `M_k(σ) = (1/2πi) ∫ T_k(s)/(s-σ) ds` for k < n, σ off the cut.
pub fn seg_moments(n: usize, sigma: Complex64) -> Vec<Complex64> {
    assert!(n >= 1);
    let inv_2pii = Complex64::new(0.0, -0.5 / PI);
    let d = (sigma - 1.0).sqrt() * (sigma + 1.0).sqrt();
    let (wp, wm) = (sigma + d, sigma - d);
    let w_big = if wp.norm() >= wm.norm() { wp } else { wm };
    let e = w_big.norm();
    if 2.0 * (n as f64) * e.ln() <= 11.5 {
        // near the cut: forward recurrence, error growth E^{2n} ≤ 1e5 ulps
        let m0 = inv_2pii * ((sigma - 1.0) / (sigma + 1.0)).ln();
        forward_recurrence(n, sigma, m0)
    } else {
        rho_series(n, w_big)
    }
}

/// On-cut boundary moments `M_k^±(x)` for x in (-1, 1).
pub fn seg_moments_boundary(n: usize, x: f64, side: Side) -> Vec<Complex64> {
    assert!(n >= 1 && x.abs() < 1.0);
    let inv_2pii = Complex64::new(0.0, -0.5 / PI);
    let half = match side {
        Side::Plus => 0.5,
        Side::Minus => -0.5,
    };
    // on the cut the homogeneous solutions are unimodular, so the forward
    // recurrence is unconditionally stable
    let m0 = inv_2pii * ((1.0 - x) / (1.0 + x)).ln() + Complex64::new(half, 0.0);
    forward_recurrence(n, Complex64::new(x, 0.0), m0)
}

fn forward_recurrence(n: usize, sigma: Complex64, m0: Complex64) -> Vec<Complex64> {
    let inv_pii = Complex64::new(0.0, -1.0 / PI);
    let mut m = Vec::with_capacity(n);
    m.push(m0);
    if n == 1 {
        return m;
    }
    // M_1 = (1/πi) + σ M_0
    m.push(inv_pii + sigma * m0);
    for k in 1..(n - 1) {
        // M_{k+1} = 2σ M_k + 2 A_k - M_{k-1},  A_k = (1/2πi) ∫ T_k
        let a2 = inv_pii * cheb::t_integral(k);
        let next = sigma * 2.0 * m[k] + a2 - m[k - 1];
        m.push(next);
    }
    m
}

/// Far-field moment evaluation via
/// `1/(σ-s) = (1/√(σ²-1)) [1 + 2 Σ_{j≥1} ρ^j T_j(s)]`, ρ = 1/w_big.
fn rho_series(n: usize, w_big: Complex64) -> Vec<Complex64> {
    let sigma = (w_big + w_big.inv()) * 0.5;
    let rho = w_big.inv();
    let sqrt_d = w_big - sigma; // branch of √(σ²-1) with ρ = σ - √(σ²-1)
    let j_max = ((-41.5 / rho.norm().ln()).ceil() as usize).max(4);
    let kk = n + j_max;
    // s1_k = Σ_{j≥1} ρ^j c_{k+j}, accumulated as s1_k = ρ (c_{k+1} + s1_{k+1})
    let mut s1 = vec![ZERO; n];
    let mut acc = ZERO;
    for k in (0..kk).rev() {
        acc = rho * (Complex64::new(cheb::t_integral(k + 1), 0.0) + acc);
        if k < n {
            s1[k] = acc;
        }
    }
    let t_sum = {
        // T = Σ_{m≥1} ρ^m c_m
        let mut acc = ZERO;
        for m in (0..kk).rev() {
            acc = rho * (Complex64::new(cheb::t_integral(m + 1), 0.0) + acc);
        }
        acc
    };
    let scale = -Complex64::new(0.0, -0.5 / PI) / sqrt_d; // -(1/2πi)/√(σ²-1)
    let mut m = Vec::with_capacity(n);
    let mut u_k = ZERO; // Σ_{j=1}^k ρ^j c_{k-j}
    let mut rho_k = ONE;
    for k in 0..n {
        if k > 0 {
            u_k = rho * (Complex64::new(cheb::t_integral(k - 1), 0.0) + u_k);
            rho_k *= rho;
        }
        let s2 = u_k + rho_k * t_sum;
        m.push(scale * (Complex64::new(cheb::t_integral(k), 0.0) + s1[k] + s2));
    }
    m
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

/// Spectral representation of a (possibly matrix-valued) function on a
/// contour: per-arc node values, `comps` components per node.
#[derive(Clone, Debug)]
pub struct Density {
    pub comps: usize,
    pub blocks: Vec<DensityBlock>,
}

#[derive(Clone, Debug)]
pub struct DensityBlock {
    pub n: usize,
    /// len n * comps, index (node, comp) = node * comps + comp
    pub values: Vec<Complex64>,
}

impl Density {
    pub fn zeros(ns: &[usize], comps: usize) -> Self {
        Density {
            comps,
            blocks: ns.iter().map(|&n| DensityBlock { n, values: vec![ZERO; n * comps] }).collect(),
        }
    }

    /// Sample a scalar function arc-by-arc at the discretization nodes.
    pub fn sample_scalar(disc: &Discretization, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let mut d = Density::zeros(&disc.ns, 1);
        for (a, block) in d.blocks.iter_mut().enumerate() {
            for (j, &z) in disc.nodes[a].iter().enumerate() {
                block.values[j] = f(a, z);
            }
        }
        d
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Density {
        let mut out = self.clone();
        for b in &mut out.blocks {
            for v in &mut b.values {
                *v = f(*v);
            }
        }
        out
    }

    pub fn binary(&self, other: &Density, f: impl Fn(Complex64, Complex64) -> Complex64) -> Density {
        assert_eq!(self.comps, other.comps);
        let mut out = self.clone();
        for (b, ob) in out.blocks.iter_mut().zip(&other.blocks) {
            for (v, w) in b.values.iter_mut().zip(&ob.values) {
                *v = f(*v, *w);
            }
        }
        out
    }

    pub fn sup_norm(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.values.iter().map(|v| v.norm())).fold(0.0, f64::max)
    }

    pub fn component_values(&self, arc: usize, comp: usize) -> Vec<Complex64> {
        let b = &self.blocks[arc];
        (0..b.n).map(|j| b.values[j * self.comps + comp]).collect()
    }

    /// Basis coefficients of one scalar component on one arc.
    pub fn coeffs(&self, disc: &Discretization, arc: usize, comp: usize) -> Vec<Complex64> {
        let vals = self.component_values(arc, comp);
        match disc.contour.arcs[arc].basis_kind() {
            BasisKind::MappedChebyshev => cheb::vals_to_coeffs(&vals),
            BasisKind::Laurent => laurent_coeffs(&disc.contour.arcs[arc], &vals),
        }
    }
}

/// Laurent mode indices for an n-point circle discretization,
/// k in [-(n-1)/2, n/2].
pub fn laurent_modes(n: usize) -> Vec<i64> {
    let kmin = -((n as i64 - 1) / 2);
    (0..n as i64).map(|j| kmin + j).collect()
}

fn laurent_coeffs(arc: &Arc, vals: &[Complex64]) -> Vec<Complex64> {
    let (center, radius, _) = arc.circle_data().expect("laurent basis requires a circle");
    let n = vals.len();
    let nodes = arc.nodes(n);
    laurent_modes(n)
        .iter()
        .map(|&k| {
            let mut acc = ZERO;
            for (j, &v) in vals.iter().enumerate() {
                let u = (nodes[j] - center) / radius;
                acc += v * u.powi(-(k as i32));
            }
            acc / n as f64
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Discretization and Cauchy operator matrices
// ---------------------------------------------------------------------------

/// A contour with chosen per-arc node counts.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub contour: Contour,
    pub ns: Vec<usize>,
    pub nodes: Vec<Vec<Complex64>>,
    pub arc_lengths: Vec<f64>,
}

impl Discretization {
    pub fn new(contour: Contour, ns: Vec<usize>) -> Self {
        assert_eq!(contour.n_arcs(), ns.len());
        let nodes = contour.arcs.iter().zip(&ns).map(|(a, &n)| a.nodes(n)).collect();
        let arc_lengths = contour.arcs.iter().map(|a| a.length()).collect();
        Discretization { contour, ns, nodes, arc_lengths }
    }

    pub fn uniform(contour: Contour, n: usize) -> Self {
        let ns = vec![n; contour.n_arcs()];
        Discretization::new(contour, ns)
    }

    pub fn total_nodes(&self) -> usize {
        self.ns.iter().sum()
    }

    /// Stacked node list in arc order.
    pub fn all_nodes(&self) -> Vec<Complex64> {
        self.nodes.iter().flatten().cloned().collect()
    }
}

/// Precomputed Cauchy-transform matrices for one discretization.
///
/// `cplus[i][j]` maps node values on arc j to C⁺ values at the nodes of
/// arc i; for i ≠ j the point is off arc j, where the two boundary values
/// coincide with the plain off-contour evaluation.
pub struct CauchyOps {
    pub disc: Discretization,
    cplus: Vec<Vec<CMat>>,
}

impl CauchyOps {
    pub fn new(disc: Discretization) -> Self {
        use rayon::prelude::*;
        let na = disc.contour.n_arcs();
        let blocks: Vec<CMat> = (0..na * na)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / na, idx % na);
                if i == j {
                    boundary_matrix(&disc.contour.arcs[j], disc.ns[j], Side::Plus)
                } else {
                    eval_matrix(&disc.contour.arcs[j], disc.ns[j], &disc.nodes[i])
                }
            })
            .collect();
        let mut iter = blocks.into_iter();
        let cplus = (0..na).map(|_| (0..na).map(|_| iter.next().unwrap()).collect()).collect();
        CauchyOps { disc, cplus }
    }

    /// The (target, source) block of C± as a dense matrix on node values.
    pub fn block(&self, target: usize, source: usize, side: Side) -> CMat {
        let mut b = self.cplus[target][source].clone();
        if side == Side::Minus && target == source {
            for k in 0..b.n_rows.min(b.n_cols) {
                b[(k, k)] -= ONE;
            }
        }
        b
    }

    /// Boundary values C±f of a density at the contour nodes.
    pub fn boundary(&self, density: &Density, side: Side) -> Density {
        let na = self.disc.contour.n_arcs();
        let comps = density.comps;
        let mut out = Density::zeros(&self.disc.ns, comps);
        for c in 0..comps {
            for i in 0..na {
                let mut acc = vec![ZERO; self.disc.ns[i]];
                for j in 0..na {
                    let vals = density.component_values(j, c);
                    let contrib = self.cplus[i][j].matvec(&vals);
                    for (a, b) in acc.iter_mut().zip(&contrib) {
                        *a += b;
                    }
                }
                if side == Side::Minus {
                    let own = density.component_values(i, c);
                    for (a, b) in acc.iter_mut().zip(&own) {
                        *a -= b;
                    }
                }
                for (j, v) in acc.into_iter().enumerate() {
                    out.blocks[i].values[j * comps + c] = v;
                }
            }
        }
        out
    }

    /// Hilbert transform Hf = -i (C⁺f + C⁻f).
    pub fn hilbert(&self, density: &Density) -> Density {
        let plus = self.boundary(density, Side::Plus);
        let minus = self.boundary(density, Side::Minus);
        plus.binary(&minus, |p, m| Complex64::new(0.0, -1.0) * (p + m))
    }

    /// Cauchy transform at a point off the contour.
    pub fn eval_off(&self, density: &Density, z: Complex64) -> Result<Vec<Complex64>, CauchyError> {
        let min_len = self.disc.arc_lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        let dist = self.disc.contour.distance_to(z);
        if dist < 1e-8 * min_len {
            return Err(CauchyError::PointOnContour { z: (z.re, z.im), dist });
        }
        Ok(self.eval_unchecked(density, z))
    }

    /// Off-contour evaluation without the proximity guard (used internally
    /// where points legitimately approach other arcs near vertices).
    pub fn eval_unchecked(&self, density: &Density, z: Complex64) -> Vec<Complex64> {
        let comps = density.comps;
        let mut out = vec![ZERO; comps];
        for (j, arc) in self.disc.contour.arcs.iter().enumerate() {
            let row = eval_row(arc, self.disc.ns[j], z);
            for c in 0..comps {
                let vals = density.component_values(j, c);
                let mut acc = ZERO;
                for (r, v) in row.iter().zip(&vals) {
                    acc += r * v;
                }
                out[c] += acc;
            }
        }
        out
    }

    /// ∫_Σ f(ζ) dζ per component.
    pub fn integrate_dz(&self, density: &Density) -> Vec<Complex64> {
        let comps = density.comps;
        let mut out = vec![ZERO; comps];
        for (j, arc) in self.disc.contour.arcs.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                let coeffs = density.coeffs(&self.disc, j, c);
                *o += integrate_arc_dz(arc, &coeffs);
            }
        }
        out
    }
}

/// C± matrix (node values → boundary values) on a single arc.
pub fn boundary_matrix(arc: &Arc, n: usize, side: Side) -> CMat {
    match arc.basis_kind() {
        BasisKind::MappedChebyshev => {
            let m = arc.mobius().unwrap();
            let v2c = vals_to_coeffs_matrix(n);
            // Möbius pole correction: subtract the segment transform at σ∞
            let correction: Option<Vec<Complex64>> =
                if m.is_affine() { None } else { Some(seg_moments(n, m.pole())) };
            let mut mm = CMat::zeros(n, n);
            for (i, &t) in cheb::nodes(n).iter().enumerate() {
                let row = seg_moments_boundary(n, t, side);
                for k in 0..n {
                    let corr = correction.as_ref().map_or(ZERO, |c| c[k]);
                    mm[(i, k)] = row[k] - corr;
                }
            }
            matmul(&mm, v2c.as_ref())
        }
        BasisKind::Laurent => {
            let (center, radius, ccw) = arc.circle_data().unwrap();
            let nodes = arc.nodes(n);
            let modes = laurent_modes(n);
            let mut p = CMat::zeros(n, n);
            for (i, &zi) in nodes.iter().enumerate() {
                let ui = (zi - center) / radius;
                for (kidx, &k) in modes.iter().enumerate() {
                    // the + side of a ccw circle is the inside, where the
                    // analytic (k ≥ 0) modes survive; a cw circle swaps sides
                    let keep = match (ccw, side) {
                        (true, Side::Plus) | (false, Side::Minus) => k >= 0,
                        (true, Side::Minus) | (false, Side::Plus) => k < 0,
                    };
                    if keep {
                        let sign = match side {
                            Side::Plus => 1.0,
                            Side::Minus => -1.0,
                        };
                        p[(i, kidx)] = ui.powi(k as i32) * sign;
                    }
                }
            }
            let dft = laurent_coeffs_matrix(arc, n);
            matmul(&p, &dft)
        }
    }
}

/// One boundary row at an arbitrary on-arc parameter t ∈ (-1, 1) (or circle
/// angle fraction): node values on the arc → C± value at that point.  Used
/// to validate solutions at points between the collocation nodes.
pub fn boundary_row(arc: &Arc, n: usize, t: f64, side: Side) -> Vec<Complex64> {
    match arc.basis_kind() {
        BasisKind::MappedChebyshev => {
            let m = arc.mobius().unwrap();
            let mut moms = seg_moments_boundary(n, t, side);
            if !m.is_affine() {
                let corr = seg_moments(n, m.pole());
                for (a, b) in moms.iter_mut().zip(&corr) {
                    *a -= b;
                }
            }
            let v2c = vals_to_coeffs_matrix(n);
            let mut row = vec![ZERO; n];
            for k in 0..n {
                let mk = moms[k];
                for (j, r) in row.iter_mut().enumerate() {
                    *r += mk * v2c[(k, j)];
                }
            }
            row
        }
        BasisKind::Laurent => {
            let (center, radius, ccw) = arc.circle_data().unwrap();
            // t is the angle fraction in [0, 1)
            let th = 2.0 * PI * t * if ccw { 1.0 } else { -1.0 };
            let u = center + Complex64::from_polar(radius, th);
            let u = (u - center) / radius;
            let modes = laurent_modes(n);
            let mut mode_row = vec![ZERO; n];
            for (kidx, &k) in modes.iter().enumerate() {
                let keep = match (ccw, side) {
                    (true, Side::Plus) | (false, Side::Minus) => k >= 0,
                    (true, Side::Minus) | (false, Side::Plus) => k < 0,
                };
                if keep {
                    let sign = match side {
                        Side::Plus => 1.0,
                        Side::Minus => -1.0,
                    };
                    mode_row[kidx] = u.powi(k as i32) * sign;
                }
            }
            let dft = laurent_coeffs_matrix(arc, n);
            let mut row = vec![ZERO; n];
            for k in 0..n {
                let mk = mode_row[k];
                if mk == ZERO {
                    continue;
                }
                for (j, r) in row.iter_mut().enumerate() {
                    *r += mk * dft[(k, j)];
                }
            }
            row
        }
    }
}

/// On-arc point for the staggered parameter convention of [`boundary_row`].
pub fn staggered_point(arc: &Arc, t: f64) -> Complex64 {
    match arc.basis_kind() {
        BasisKind::MappedChebyshev => arc.mobius().unwrap().apply(Complex64::new(t, 0.0)),
        BasisKind::Laurent => {
            let (center, radius, ccw) = arc.circle_data().unwrap();
            let th = 2.0 * PI * t * if ccw { 1.0 } else { -1.0 };
            center + Complex64::from_polar(radius, th)
        }
    }
}

/// Staggered validation parameters interleaving the collocation nodes.
pub fn staggered_params(arc: &Arc, n: usize) -> Vec<f64> {
    match arc.basis_kind() {
        BasisKind::MappedChebyshev => cheb::nodes(n + 1),
        BasisKind::Laurent => (0..n).map(|j| (j as f64 + 0.5) / n as f64).collect(),
    }
}

/// Row-evaluation matrix: node values on the arc → C values at external points.
pub fn eval_matrix(arc: &Arc, n: usize, points: &[Complex64]) -> CMat {
    let mut out = CMat::zeros(points.len(), n);
    for (i, &z) in points.iter().enumerate() {
        let row = eval_row(arc, n, z);
        for (k, &v) in row.iter().enumerate() {
            out[(i, k)] = v;
        }
    }
    out
}

/// One evaluation row: node values on the arc → C value at z (z off this arc).
pub fn eval_row(arc: &Arc, n: usize, z: Complex64) -> Vec<Complex64> {
    match arc.basis_kind() {
        BasisKind::MappedChebyshev => {
            let m = arc.mobius().unwrap();
            let sigma = m.inverse(z);
            let mut moms = seg_moments(n, sigma);
            if !m.is_affine() {
                let corr = seg_moments(n, m.pole());
                for (a, b) in moms.iter_mut().zip(&corr) {
                    *a -= b;
                }
            }
            let v2c = vals_to_coeffs_matrix(n);
            let mut row = vec![ZERO; n];
            for k in 0..n {
                let mk = moms[k];
                for (j, r) in row.iter_mut().enumerate() {
                    *r += mk * v2c[(k, j)];
                }
            }
            row
        }
        BasisKind::Laurent => {
            let (center, radius, ccw) = arc.circle_data().unwrap();
            let u = (z - center) / radius;
            let inside = u.norm() < 1.0;
            let modes = laurent_modes(n);
            let mut mode_row = vec![ZERO; n];
            for (kidx, &k) in modes.iter().enumerate() {
                let val = match (inside, k >= 0) {
                    (true, true) => u.powi(k as i32),
                    (false, false) => -u.powi(k as i32),
                    _ => ZERO,
                };
                mode_row[kidx] = if ccw { val } else { -val };
            }
            let dft = laurent_coeffs_matrix(arc, n);
            let mut row = vec![ZERO; n];
            for k in 0..n {
                let mk = mode_row[k];
                if mk == ZERO {
                    continue;
                }
                for (j, r) in row.iter_mut().enumerate() {
                    *r += mk * dft[(k, j)];
                }
            }
            row
        }
    }
}

fn vals_to_coeffs_matrix(n: usize) -> std::sync::Arc<CMat> {
    use std::collections::HashMap;
    use std::sync::{Arc as SArc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, SArc<CMat>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&n) {
        return m.clone();
    }
    // a_k = (2-δ_{k0})/n Σ_j f(t_j) cos(k θ̃_j) at first-kind nodes
    let mut m = CMat::zeros(n, n);
    for j in 0..n {
        let theta = PI - PI * (2 * j + 1) as f64 / (2 * n) as f64;
        for k in 0..n {
            let scale = if k == 0 { 1.0 / n as f64 } else { 2.0 / n as f64 };
            m[(k, j)] = Complex64::new(scale * (k as f64 * theta).cos(), 0.0);
        }
    }
    let m = SArc::new(m);
    cache.lock().unwrap().insert(n, m.clone());
    m
}

fn laurent_coeffs_matrix(arc: &Arc, n: usize) -> CMat {
    let (center, radius, _) = arc.circle_data().unwrap();
    let nodes = arc.nodes(n);
    let modes = laurent_modes(n);
    let mut m = CMat::zeros(n, n);
    for (j, &zj) in nodes.iter().enumerate() {
        let u = (zj - center) / radius;
        for (kidx, &k) in modes.iter().enumerate() {
            m[(kidx, j)] = u.powi(-(k as i32)) / n as f64;
        }
    }
    m
}

pub(crate) fn matmul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.n_cols, b.n_rows);
    let mut out = CMat::zeros(a.n_rows, b.n_cols);
    for j in 0..b.n_cols {
        for k in 0..a.n_cols {
            let bkj = b[(k, j)];
            if bkj == ZERO {
                continue;
            }
            for i in 0..a.n_rows {
                out[(i, j)] += a[(i, k)] * bkj;
            }
        }
    }
    out
}

/// ∫ f dζ over one arc from the coefficient representation.
fn integrate_arc_dz(arc: &Arc, coeffs: &[Complex64]) -> Complex64 {
    match arc.basis_kind() {
        BasisKind::MappedChebyshev => {
            let m = arc.mobius().unwrap();
            if m.is_affine() {
                cheb::integrate(coeffs) * m.a
            } else {
                let (ts, ws) = crate::quad::gauss_legendre(coeffs.len() + 12);
                ts.iter()
                    .zip(&ws)
                    .map(|(&t, &w)| {
                        let tc = Complex64::new(t, 0.0);
                        cheb::clenshaw(coeffs, tc) * m.deriv(tc) * w
                    })
                    .sum()
            }
        }
        BasisKind::Laurent => {
            let (_, radius, ccw) = arc.circle_data().unwrap();
            let modes = laurent_modes(coeffs.len());
            let a_m1 = modes
                .iter()
                .position(|&k| k == -1)
                .map_or(ZERO, |idx| coeffs[idx]);
            let sign = if ccw { 1.0 } else { -1.0 };
            Complex64::new(0.0, 2.0 * PI * radius * sign) * a_m1
        }
    }
}

// ---------------------------------------------------------------------------
// Fourier projection on a uniform real grid
// ---------------------------------------------------------------------------

/// C⁺f on a uniform grid by discrete Fourier transform: zero the negative
/// frequencies and halve the zero (and Nyquist) mode.
pub fn line_fourier_projection(samples: &[Complex64]) -> Result<Vec<Complex64>, CauchyError> {
    let n = samples.len();
    assert!(n >= 8, "need at least 8 samples");
    let mut buf: Vec<Complex64> = samples.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    // top-octave spectral mass must be negligible or the grid is too coarse
    let mass: f64 = buf.iter().map(|v| v.norm_sqr()).sum();
    let tail: f64 = (0..n)
        .filter(|&j| {
            let k = if j <= n / 2 { j as f64 } else { (n - j) as f64 };
            k > n as f64 / 4.0
        })
        .map(|j| buf[j].norm_sqr())
        .sum();
    let limit = 1e-8;
    if mass > 0.0 && tail / mass > limit {
        return Err(CauchyError::GridTooCoarse { tail: tail / mass, limit });
    }
    for (j, v) in buf.iter_mut().enumerate() {
        // bin j holds frequency j for 2j < n and j - n for 2j > n
        let w = if j == 0 {
            0.5
        } else if 2 * j < n {
            1.0
        } else if 2 * j == n {
            0.5
        } else {
            0.0
        };
        *v *= w;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    Ok(buf.into_iter().map(|v| v / n as f64).collect())
}

// ---------------------------------------------------------------------------
// Rotated-ray operator norm
// ---------------------------------------------------------------------------

/// Numerical estimate of the L²(0,∞) → L²(0,∞) norm of
/// `C_θ f(r) = (1/2πi) ∫₀^∞ f(s)/(s - e^{iθ} r) ds`.
///
/// The sharp constant is `c_θ = γ^γ (1-γ)^{1-γ}`, `γ = θ/2π`; a finite
/// section over a log-spaced grid approaches it from below.
pub fn ray_pair_norm_estimate(theta: f64, decades: u32, panels_per_decade: usize, n_per_panel: usize) -> f64 {
    let mut breaks = Vec::new();
    let lo = -(decades as f64) / 2.0;
    let total_panels = decades as usize * panels_per_decade;
    for p in 0..=total_panels {
        breaks.push(10f64.powf(lo + p as f64 * (decades as f64) / total_panels as f64));
    }
    let (xs, ws) = crate::quad::panel_rule(&breaks, n_per_panel);
    let m = xs.len();
    let zhat = Complex64::from_polar(1.0, theta);
    let mut a = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let k = Complex64::new(0.0, -0.5 / PI) / (xs[j] - zhat * xs[i]);
            a[(i, j)] = k * (ws[i].sqrt() * ws[j].sqrt());
        }
    }
    crate::linalg::spectral_norm_est(&a, 120)
}

/// The sharp ray-pair constant c_θ = γ^γ (1-γ)^{1-γ}, γ = θ/2π.
pub fn ray_pair_constant(theta: f64) -> f64 {
    let gamma = theta / (2.0 * PI);
    gamma.powf(gamma) * (1.0 - gamma).powf(1.0 - gamma)
}
