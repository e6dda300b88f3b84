//! The normalized Riemann–Hilbert solver.
//!
//! Given a jump matrix `v` on an oriented contour with a pointwise
//! factorization `v = (v⁻)⁻¹ v⁺`, the normalized RHP `m₊ = m₋ v`, `m → I` is
//! equivalent to the singular integral equation `(1 - C_ω)μ = I` with
//!
//! ```text
//!   C_ω h = C⁺(h ω⁻) + C⁻(h ω⁺),    ω⁺ = v⁺ - I,  ω⁻ = I - v⁻,
//! ```
//!
//! interpreted through `μ = I + ν`, `(1 - C_ω)ν = C⁺ω⁻ + C⁻ω⁺`.  The solver
//! assembles `C_ω` densely in the collocation basis, factors `1 - C_ω` with
//! partial pivoting, and packages boundary values `m± = μ v±`, the off-contour
//! evaluator `m(z) = I + C(μ(ω⁺+ω⁻))(z)`, the residue `m₁`, and diagnostics.
//!
//! All jump matrices here are 2×2, the size every worked instance in this
//! crate uses; the scalar case is solved in closed form by
//! [`solve_scalar_closed_form`] instead.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::cauchy::{CauchyError, CauchyOps, Density, Discretization, Side};
use crate::cheb;
use crate::contour::{BasisKind, Contour};
use crate::linalg::{cond_1_est, CLu, CMat};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("jump matrix fails invertibility at node {node} of arc {arc} (|det v| = {det:.3e})")]
    SingularJump { arc: usize, node: usize, det: f64 },
    #[error("factorization inconsistent with v at node {node} of arc {arc} (error {err:.3e})")]
    BadFactorization { arc: usize, node: usize, err: f64 },
    #[error("linear system nearly singular (condition estimate {cond:.3e})")]
    NearSingularSystem { cond: f64 },
    #[error("jump residual {residual:.3e} exceeds tolerance {tol:.1e} (solution attached)")]
    ResidualAboveTolerance { residual: f64, tol: f64, solution: Box<RhSolution> },
    #[error("scalar jump winds around the origin {0} times; no single-valued logarithm exists")]
    NonzeroWinding(i64),
    #[error(transparent)]
    Cauchy(#[from] CauchyError),
}

// ---------------------------------------------------------------------------
// 2×2 complex matrices
// ---------------------------------------------------------------------------

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub const fn identity() -> Self {
        Mat2([ONE, ZERO, ZERO, ONE])
    }

    pub const fn zero() -> Self {
        Mat2([ZERO; 4])
    }

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Mat2([a, ZERO, ZERO, d])
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.0[2 * i + j]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn inv(&self) -> Mat2 {
        let d = self.det();
        Mat2([self.0[3] / d, -self.0[1] / d, -self.0[2] / d, self.0[0] / d])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2([
            self.0[0] * o.0[0] + self.0[1] * o.0[2],
            self.0[0] * o.0[1] + self.0[1] * o.0[3],
            self.0[2] * o.0[0] + self.0[3] * o.0[2],
            self.0[2] * o.0[1] + self.0[3] * o.0[3],
        ])
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2], self.0[3] - o.0[3]])
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        Mat2([self.0[0] * s, self.0[1] * s, self.0[2] * s, self.0[3] * s])
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2([self.0[0], self.0[2], self.0[1], self.0[3]])
    }

    /// Matrix sup norm (largest entry modulus).
    pub fn norm_sup(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// Jump fields
// ---------------------------------------------------------------------------

type Sampler = Box<dyn Fn(usize, Complex64) -> Mat2 + Send + Sync>;

/// A matrix jump on a contour together with a pointwise factorization
/// `v = (v⁻)⁻¹ v⁺`.
pub struct JumpField {
    pub contour: Contour,
    v: Sampler,
    vplus: Option<Sampler>,
    vminus: Option<Sampler>,
}

impl JumpField {
    /// Jump with the default factorization v⁺ = v, v⁻ = I.
    pub fn new(contour: Contour, v: impl Fn(usize, Complex64) -> Mat2 + Send + Sync + 'static) -> Self {
        JumpField { contour, v: Box::new(v), vplus: None, vminus: None }
    }

    /// Override the factorization.
    pub fn with_factorization(
        mut self,
        vminus: impl Fn(usize, Complex64) -> Mat2 + Send + Sync + 'static,
        vplus: impl Fn(usize, Complex64) -> Mat2 + Send + Sync + 'static,
    ) -> Self {
        self.vminus = Some(Box::new(vminus));
        self.vplus = Some(Box::new(vplus));
        self
    }

    pub fn v(&self, arc: usize, z: Complex64) -> Mat2 {
        (self.v)(arc, z)
    }

    pub fn vplus(&self, arc: usize, z: Complex64) -> Mat2 {
        match &self.vplus {
            Some(f) => f(arc, z),
            None => self.v(arc, z),
        }
    }

    pub fn vminus(&self, arc: usize, z: Complex64) -> Mat2 {
        match &self.vminus {
            Some(f) => f(arc, z),
            None => Mat2::identity(),
        }
    }

    /// Check invertibility and factorization consistency at the nodes.
    pub fn validate(&self, disc: &Discretization) -> Result<JumpCheck, SolveError> {
        let mut unit_det = true;
        for (a, nodes) in disc.nodes.iter().enumerate() {
            for (j, &z) in nodes.iter().enumerate() {
                let v = self.v(a, z);
                let det = v.det();
                if det.norm() < 1e-12 || !det.norm().is_finite() {
                    return Err(SolveError::SingularJump { arc: a, node: j, det: det.norm() });
                }
                let consistency = v.mul(&v.inv()).sub(&Mat2::identity()).norm_sup();
                if consistency > 1e-12 {
                    return Err(SolveError::SingularJump { arc: a, node: j, det: det.norm() });
                }
                let fact = self.vminus(a, z).inv().mul(&self.vplus(a, z)).sub(&v).norm_sup();
                if fact > 1e-12 * v.norm_sup().max(1.0) {
                    return Err(SolveError::BadFactorization { arc: a, node: j, err: fact });
                }
                if (det - ONE).norm() > 1e-10 {
                    unit_det = false;
                }
            }
        }
        Ok(JumpCheck { unit_determinant: unit_det })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct JumpCheck {
    /// det v ≡ 1 at all nodes; for 2×2 jumps this certifies uniqueness of the
    /// normalized L² solution.
    pub unit_determinant: bool,
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

struct OmegaField {
    v: Vec<Mat2>,
    vp: Vec<Mat2>,
    vm: Vec<Mat2>,
    wp: Vec<Mat2>,
    wm: Vec<Mat2>,
}

fn sample_omegas(jump: &JumpField, disc: &Discretization) -> OmegaField {
    let mut v = Vec::new();
    let mut vp = Vec::new();
    let mut vm = Vec::new();
    let mut wp = Vec::new();
    let mut wm = Vec::new();
    let eye = Mat2::identity();
    for (a, nodes) in disc.nodes.iter().enumerate() {
        for &z in nodes {
            let vv = jump.v(a, z);
            let vpp = jump.vplus(a, z);
            let vmm = jump.vminus(a, z);
            v.push(vv);
            vp.push(vpp);
            vm.push(vmm);
            wp.push(vpp.sub(&eye));
            wm.push(eye.sub(&vmm));
        }
    }
    OmegaField { v, vp, vm, wp, wm }
}

/// Dense matrix of `C_ω h = C⁺(h ω⁻) + C⁻(h ω⁺)` acting on one row of h.
///
/// Unknown ordering: index = 2 * (global node) + column.  The same matrix
/// serves both rows of a 2×2 density because right multiplication mixes
/// columns only.
pub fn assemble_cw(jump: &JumpField, ops: &CauchyOps) -> Result<CMat, SolveError> {
    jump.validate(&ops.disc)?;
    let om = sample_omegas(jump, &ops.disc);
    Ok(assemble_cw_from_omegas(ops, &om))
}

fn assemble_cw_from_omegas(ops: &CauchyOps, om: &OmegaField) -> CMat {
    let disc = &ops.disc;
    let na = disc.contour.n_arcs();
    let n_total = disc.total_nodes();
    let dim = 2 * n_total;
    let mut a = CMat::zeros(dim, dim);
    let offsets: Vec<usize> = disc
        .ns
        .iter()
        .scan(0usize, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    for ti in 0..na {
        for si in 0..na {
            let bp = ops.block(ti, si, Side::Plus);
            let bm = ops.block(ti, si, Side::Minus);
            for yj in 0..disc.ns[si] {
                let y_glob = offsets[si] + yj;
                let wmm = &om.wm[y_glob];
                let wpp = &om.wp[y_glob];
                for xi in 0..disc.ns[ti] {
                    let x_glob = offsets[ti] + xi;
                    let cp = bp[(xi, yj)];
                    let cm = bm[(xi, yj)];
                    for alpha in 0..2 {
                        for beta in 0..2 {
                            a[(2 * x_glob + beta, 2 * y_glob + alpha)] +=
                                cp * wmm.at(alpha, beta) + cm * wpp.at(alpha, beta);
                        }
                    }
                }
            }
        }
    }
    a
}

/// L²(Σ)-weighted spectral-norm estimate of C_ω.  Node weights are Fejér
/// quadrature weights times |dζ/dt|, so the matrix norm approximates the
/// operator norm on L²(Σ, |dζ|).
pub fn cw_norm_estimate(jump: &JumpField, ns: &[usize]) -> Result<f64, SolveError> {
    let disc = Discretization::new(jump.contour.clone(), ns.to_vec());
    let ops = CauchyOps::new(disc);
    let a = assemble_cw(jump, &ops)?;
    let w = node_l2_weights(&ops.disc);
    let dim = a.n_rows;
    let mut b = CMat::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            let wi = w[i / 2].sqrt();
            let wj = w[j / 2].sqrt();
            b[(i, j)] = a[(i, j)] * (wi / wj);
        }
    }
    Ok(crate::linalg::spectral_norm_est(&b, 80))
}

/// Fejér-1 quadrature weights times |dζ/dt| per node (arc-length measure).
pub fn node_l2_weights(disc: &Discretization) -> Vec<f64> {
    let mut out = Vec::with_capacity(disc.total_nodes());
    for (a, arc) in disc.contour.arcs.iter().enumerate() {
        let n = disc.ns[a];
        match arc.basis_kind() {
            BasisKind::Laurent => {
                let len = arc.length() / n as f64;
                out.extend(std::iter::repeat(len).take(n));
            }
            BasisKind::MappedChebyshev => {
                let ts = cheb::nodes(n);
                for (j, &t) in ts.iter().enumerate() {
                    // Fejér-1 weight at the j-th first-kind node
                    let theta = PI * (2.0 * (n - 1 - j) as f64 + 1.0) / (2.0 * n as f64);
                    let mut s = 0.0;
                    for m in 1..=(n / 2) {
                        s += (2.0 * m as f64 * theta).cos() / (4.0 * (m * m) as f64 - 1.0);
                    }
                    let wj = (2.0 / n as f64) * (1.0 - 2.0 * s);
                    out.push(wj * arc.tangent(t).norm());
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Normalized solve
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Acceptance threshold for the sup-norm jump residual.
    pub residual_tol: f64,
    /// Condition-estimate ceiling before the solve is declared near singular.
    pub cond_limit: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { residual_tol: 1e-8, cond_limit: 1e12 }
    }
}

/// A solved normalized RHP.
pub struct RhSolution {
    pub ops: CauchyOps,
    /// μ = I + ν at the nodes.
    pub mu: Vec<Mat2>,
    /// h = μ(ω⁺ + ω⁻), the density whose Cauchy transform extends m - I.
    pub h: Density,
    pub m_plus: Vec<Mat2>,
    pub m_minus: Vec<Mat2>,
    pub v_nodes: Vec<Mat2>,
    /// Residue in m(z) = I + m₁/z + O(z⁻²).
    pub m1: Mat2,
    pub jump_residual: f64,
    pub cond_estimate: f64,
    pub unit_determinant: bool,
}

impl std::fmt::Debug for RhSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RhSolution")
            .field("nodes", &self.mu.len())
            .field("jump_residual", &self.jump_residual)
            .field("cond_estimate", &self.cond_estimate)
            .finish()
    }
}

impl RhSolution {
    /// Evaluate m(z) off the contour.
    pub fn eval(&self, z: Complex64) -> Result<Mat2, CauchyError> {
        let vals = self.ops.eval_off(&self.h, z)?;
        Ok(Mat2([ONE + vals[0], vals[1], vals[2], ONE + vals[3]]))
    }

    /// Evaluate without the contour-proximity guard.
    pub fn eval_unchecked(&self, z: Complex64) -> Mat2 {
        let vals = self.ops.eval_unchecked(&self.h, z);
        Mat2([ONE + vals[0], vals[1], vals[2], ONE + vals[3]])
    }
}

/// The solution's jump residual.
pub fn jump_residual(sol: &RhSolution) -> f64 {
    sol.jump_residual
}

/// Sup of ‖m₊(x) - m₋(x) v(x)‖ over validation points interleaving the
/// collocation nodes, with m± = I + C±(h) rebuilt from the density.
///
/// At the nodes themselves this quantity vanishes identically — the solved
/// linear system plus the exact discrete Plemelj identity make it algebraic —
/// so the jump condition is tested between the nodes, where v is freshly
/// sampled but the density is only interpolated.  Under-resolved oscillatory
/// jumps show up here as O(1) residuals.
fn staggered_jump_residual(jump: &JumpField, ops: &CauchyOps, h: &Density) -> f64 {
    use crate::cauchy::{boundary_row, eval_row, staggered_params, staggered_point};
    let disc = &ops.disc;
    let na = disc.contour.n_arcs();
    let eye = Mat2::identity();
    let mut worst = 0.0f64;
    for i in 0..na {
        let arc_i = &disc.contour.arcs[i];
        for &t in &staggered_params(arc_i, disc.ns[i]) {
            let z = staggered_point(arc_i, t);
            let mut mp = eye;
            let mut mm = eye;
            for j in 0..na {
                let contrib = |row: &[Complex64]| -> Mat2 {
                    let mut acc = Mat2::zero();
                    for c in 0..4 {
                        let vals = h.component_values(j, c);
                        let mut s = ZERO;
                        for (r, v) in row.iter().zip(&vals) {
                            s += r * v;
                        }
                        acc.0[c] = s;
                    }
                    acc
                };
                if i == j {
                    let rp = boundary_row(arc_i, disc.ns[j], t, Side::Plus);
                    let rm = boundary_row(arc_i, disc.ns[j], t, Side::Minus);
                    mp = mp.add(&contrib(&rp));
                    mm = mm.add(&contrib(&rm));
                } else {
                    let r = eval_row(&disc.contour.arcs[j], disc.ns[j], z);
                    let c = contrib(&r);
                    mp = mp.add(&c);
                    mm = mm.add(&c);
                }
            }
            let v = jump.v(i, z);
            worst = worst.max(mp.sub(&mm.mul(&v)).norm_sup());
        }
    }
    worst
}

fn density_from_mats(ns: &[usize], mats: &[Mat2]) -> Density {
    let mut d = Density::zeros(ns, 4);
    let mut g = 0usize;
    for block in &mut d.blocks {
        for j in 0..block.n {
            for c in 0..4 {
                block.values[j * 4 + c] = mats[g].0[c];
            }
            g += 1;
        }
    }
    d
}

fn mats_from_density(d: &Density) -> Vec<Mat2> {
    let mut out = Vec::new();
    for block in &d.blocks {
        for j in 0..block.n {
            out.push(Mat2([
                block.values[j * 4],
                block.values[j * 4 + 1],
                block.values[j * 4 + 2],
                block.values[j * 4 + 3],
            ]));
        }
    }
    out
}

fn build_one_minus_cw(ops: &CauchyOps, om: &OmegaField) -> CMat {
    let cw = assemble_cw_from_omegas(ops, om);
    let dim = cw.n_rows;
    let mut a = CMat::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            a[(i, j)] = -cw[(i, j)];
        }
        a[(j, j)] += ONE;
    }
    a
}

fn solve_rows(lu: &CLu, rhs: &[Mat2], n_total: usize) -> Vec<Mat2> {
    let dim = 2 * n_total;
    let mut out = vec![Mat2::zero(); n_total];
    for row in 0..2 {
        let mut b: Vec<Complex64> = Vec::with_capacity(dim);
        for m in rhs {
            b.push(m.at(row, 0));
            b.push(m.at(row, 1));
        }
        lu.solve_in_place(&mut b);
        for (g, out_g) in out.iter_mut().enumerate() {
            out_g.0[2 * row] = b[2 * g];
            out_g.0[2 * row + 1] = b[2 * g + 1];
        }
    }
    out
}

/// Solve the normalized RHP `(Σ, v)` with per-arc node counts `ns`.
pub fn solve_normalized(jump: &JumpField, ns: &[usize], config: &SolverConfig) -> Result<RhSolution, SolveError> {
    let disc = Discretization::new(jump.contour.clone(), ns.to_vec());
    let check = jump.validate(&disc)?;
    let ops = CauchyOps::new(disc);
    let om = sample_omegas(jump, &ops.disc);
    let n_total = ops.disc.total_nodes();

    let a = build_one_minus_cw(&ops, &om);
    let lu = a.clone().lu().map_err(|_| SolveError::NearSingularSystem { cond: f64::INFINITY })?;
    let cond = cond_1_est(&a, &lu);
    if cond > config.cond_limit {
        return Err(SolveError::NearSingularSystem { cond });
    }

    // RHS = C_ω I = C⁺ω⁻ + C⁻ω⁺
    let rhs_p = ops.boundary(&density_from_mats(&ops.disc.ns, &om.wm), Side::Plus);
    let rhs_m = ops.boundary(&density_from_mats(&ops.disc.ns, &om.wp), Side::Minus);
    let rhs = mats_from_density(&rhs_p.binary(&rhs_m, |p, m| p + m));

    let nu = solve_rows(&lu, &rhs, n_total);
    let mu: Vec<Mat2> = nu.iter().map(|n| n.add(&Mat2::identity())).collect();
    let m_plus: Vec<Mat2> = mu.iter().zip(&om.vp).map(|(m, v)| m.mul(v)).collect();
    let m_minus: Vec<Mat2> = mu.iter().zip(&om.vm).map(|(m, v)| m.mul(v)).collect();

    let h_mats: Vec<Mat2> = mu
        .iter()
        .zip(om.wp.iter().zip(&om.wm))
        .map(|(m, (p, q))| m.mul(&p.add(q)))
        .collect();
    let h = density_from_mats(&ops.disc.ns, &h_mats);

    let residual = staggered_jump_residual(jump, &ops, &h);
    let ints = ops.integrate_dz(&h);
    let scale = Complex64::new(0.0, 0.5 / PI); // -(1/2πi) = i/2π
    let m1 = Mat2([ints[0] * scale, ints[1] * scale, ints[2] * scale, ints[3] * scale]);

    let sol = RhSolution {
        ops,
        mu,
        h,
        m_plus,
        m_minus,
        v_nodes: om.v,
        m1,
        jump_residual: residual,
        cond_estimate: cond,
        unit_determinant: check.unit_determinant,
    };
    if residual > config.residual_tol {
        return Err(SolveError::ResidualAboveTolerance {
            residual,
            tol: config.residual_tol,
            solution: Box::new(sol),
        });
    }
    Ok(sol)
}

/// Apply `(1 - C_ω)⁻¹` to a 2×2 matrix density f.  The solution μ satisfies
/// the boundary identity `C±(μ(ω⁺+ω⁻)) + f = μ v±` at the nodes; the maximal
/// violation over both sides is returned with the density.
pub fn apply_resolvent(jump: &JumpField, ns: &[usize], f: &Density) -> Result<(Density, f64), SolveError> {
    assert_eq!(f.comps, 4, "matrix densities carry four components");
    let disc = Discretization::new(jump.contour.clone(), ns.to_vec());
    jump.validate(&disc)?;
    let ops = CauchyOps::new(disc);
    let om = sample_omegas(jump, &ops.disc);
    let n_total = ops.disc.total_nodes();
    let a = build_one_minus_cw(&ops, &om);
    let lu = a.clone().lu().map_err(|_| SolveError::NearSingularSystem { cond: f64::INFINITY })?;
    let cond = cond_1_est(&a, &lu);
    if cond > 1e12 {
        return Err(SolveError::NearSingularSystem { cond });
    }
    let f_mats = mats_from_density(f);
    let mu = solve_rows(&lu, &f_mats, n_total);

    let h_mats: Vec<Mat2> = mu
        .iter()
        .zip(om.wp.iter().zip(&om.wm))
        .map(|(m, (p, q))| m.mul(&p.add(q)))
        .collect();
    let h = density_from_mats(&ops.disc.ns, &h_mats);
    let hp = mats_from_density(&ops.boundary(&h, Side::Plus));
    let hm = mats_from_density(&ops.boundary(&h, Side::Minus));
    let mut id_err = 0.0f64;
    for g in 0..n_total {
        let lhs_p = hp[g].add(&f_mats[g]);
        let lhs_m = hm[g].add(&f_mats[g]);
        id_err = id_err.max(lhs_p.sub(&mu[g].mul(&om.vp[g])).norm_sup());
        id_err = id_err.max(lhs_m.sub(&mu[g].mul(&om.vm[g])).norm_sup());
    }
    Ok((density_from_mats(&ops.disc.ns, &mu), id_err))
}

// ---------------------------------------------------------------------------
// Scalar closed form
// ---------------------------------------------------------------------------

/// Scalar RHP solution by the explicit formula m = exp(C log v).
pub struct ScalarRhp {
    ops: CauchyOps,
    logv: Density,
    pub m_plus: Vec<Complex64>,
    pub m_minus: Vec<Complex64>,
    pub jump_residual: f64,
}

impl std::fmt::Debug for ScalarRhp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarRhp")
            .field("nodes", &self.m_plus.len())
            .field("jump_residual", &self.jump_residual)
            .finish()
    }
}

impl ScalarRhp {
    pub fn eval(&self, z: Complex64) -> Result<Complex64, CauchyError> {
        Ok(self.ops.eval_off(&self.logv, z)?[0].exp())
    }

    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.ops.eval_unchecked(&self.logv, z)[0].exp()
    }
}

/// Solve a scalar normalized RHP in closed form, unwrapping the logarithm
/// along each arc.  Fails with [`SolveError::NonzeroWinding`] when the jump
/// winds around zero along a closed arc (the topological obstruction).
pub fn solve_scalar_closed_form(
    contour: &Contour,
    v: impl Fn(usize, Complex64) -> Complex64,
    ns: &[usize],
) -> Result<ScalarRhp, SolveError> {
    let disc = Discretization::new(contour.clone(), ns.to_vec());
    for (a, arc) in contour.arcs.iter().enumerate() {
        if matches!(arc.basis_kind(), BasisKind::Laurent) {
            let fine = 16 * disc.ns[a].max(8);
            let mut prev = ONE;
            let mut total = 0.0f64;
            for j in 0..=fine {
                let t = -1.0 + 2.0 * j as f64 / fine as f64;
                let val = v(a, arc.point(t));
                if j > 0 {
                    total += (val / prev).arg();
                }
                prev = val;
            }
            let winding = (total / (2.0 * PI)).round() as i64;
            if winding != 0 {
                return Err(SolveError::NonzeroWinding(winding));
            }
        }
    }
    let mut logv = Density::zeros(&disc.ns, 1);
    for (a, _arc) in contour.arcs.iter().enumerate() {
        let n = disc.ns[a];
        let mut prev_arg = 0.0f64;
        for j in 0..n {
            let z = disc.nodes[a][j];
            let val = v(a, z);
            let mut arg = val.arg();
            if j > 0 {
                while arg - prev_arg > PI {
                    arg -= 2.0 * PI;
                }
                while arg - prev_arg < -PI {
                    arg += 2.0 * PI;
                }
            }
            prev_arg = arg;
            logv.blocks[a].values[j] = Complex64::new(val.norm().ln(), arg);
        }
    }
    let ops = CauchyOps::new(disc);
    let lp = ops.boundary(&logv, Side::Plus);
    let lm = ops.boundary(&logv, Side::Minus);
    let m_plus: Vec<Complex64> = lp.blocks.iter().flat_map(|b| b.values.iter().map(|v| v.exp())).collect();
    let m_minus: Vec<Complex64> = lm.blocks.iter().flat_map(|b| b.values.iter().map(|v| v.exp())).collect();
    // validate the jump between the nodes, where it is not algebraic
    let mut residual = 0.0f64;
    {
        use crate::cauchy::{boundary_row, eval_row, staggered_params, staggered_point};
        let disc = &ops.disc;
        for (a, arc) in contour.arcs.iter().enumerate() {
            for &t in &staggered_params(arc, disc.ns[a]) {
                let z = staggered_point(arc, t);
                let mut acc_p = ZERO;
                let mut acc_m = ZERO;
                for j in 0..contour.n_arcs() {
                    let vals = logv.component_values(j, 0);
                    let dot = |row: &[Complex64]| -> Complex64 {
                        row.iter().zip(&vals).map(|(r, v)| r * v).sum()
                    };
                    if j == a {
                        acc_p += dot(&boundary_row(arc, disc.ns[j], t, Side::Plus));
                        acc_m += dot(&boundary_row(arc, disc.ns[j], t, Side::Minus));
                    } else {
                        let c = dot(&eval_row(&contour.arcs[j], disc.ns[j], z));
                        acc_p += c;
                        acc_m += c;
                    }
                }
                residual = residual.max((acc_p.exp() - acc_m.exp() * v(a, z)).norm());
            }
        }
    }
    Ok(ScalarRhp { ops, logv, m_plus, m_minus, jump_residual: residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::cauchy::laurent_modes;
    use crate::contour::Arc;

    fn unit_circle() -> Contour {
        Contour::new(vec![Arc::circle(c64(0.0, 0.0), 1.0, true)]).unwrap()
    }

    #[test]
    fn identity_jump_gives_identity_solution() {
        let jump = JumpField::new(unit_circle(), |_, _| Mat2::identity());
        let sol = solve_normalized(&jump, &[16], &SolverConfig::default()).unwrap();
        assert!(sol.m1.norm_sup() < 1e-14);
        assert!(sol.jump_residual < 1e-14);
        let m = sol.eval(c64(0.3, 0.2)).unwrap();
        assert!(m.sub(&Mat2::identity()).norm_sup() < 1e-14);

        let ops = CauchyOps::new(Discretization::uniform(unit_circle(), 8));
        let cw = assemble_cw(&jump, &ops).unwrap();
        let mut max = 0.0f64;
        for i in 0..cw.n_rows {
            for j in 0..cw.n_cols {
                max = max.max(cw[(i, j)].norm());
            }
        }
        assert!(max < 1e-15, "identity jump must give the zero operator");
    }

    #[test]
    fn constant_diagonal_jump_on_circle() {
        let c = 2.0;
        let jump = JumpField::new(unit_circle(), move |_, _| Mat2::diag(c64(c, 0.0), c64(1.0 / c, 0.0)));
        let sol = solve_normalized(&jump, &[24], &SolverConfig::default()).unwrap();
        assert!(sol.jump_residual < 1e-13, "residual {:.2e}", sol.jump_residual);
        assert!(sol.unit_determinant);
        let inside = sol.eval(c64(0.2, -0.1)).unwrap();
        assert!(inside.sub(&Mat2::diag(c64(2.0, 0.0), c64(0.5, 0.0))).norm_sup() < 1e-12);
        let outside = sol.eval(c64(3.0, 1.0)).unwrap();
        assert!(outside.sub(&Mat2::identity()).norm_sup() < 1e-12);

        // matches the scalar closed form entrywise
        let scal = solve_scalar_closed_form(&unit_circle(), |_, _| c64(c, 0.0), &[24]).unwrap();
        assert!((scal.eval(c64(0.2, -0.1)).unwrap() - inside.at(0, 0)).norm() < 1e-12);
        assert!((scal.eval(c64(3.0, 1.0)).unwrap() - ONE).norm() < 1e-12);
        assert!(scal.jump_residual < 1e-12);
    }

    #[test]
    fn scalar_winding_obstruction() {
        let err = solve_scalar_closed_form(&unit_circle(), |_, z| z, &[16]).unwrap_err();
        match err {
            SolveError::NonzeroWinding(w) => assert_eq!(w, 1),
            other => panic!("expected winding error, got {other}"),
        }
        let scal = solve_scalar_closed_form(&unit_circle(), |_, _| ONE, &[16]).unwrap();
        assert!((scal.eval(c64(0.0, 0.5)).unwrap() - ONE).norm() < 1e-14);
    }

    #[test]
    fn laurent_mode_action_matches_brute_force() {
        // v = diag(φ, 1/φ), v⁺ = v, v⁻ = I: C_ω h = C⁻(h(v-I)) acts mode-wise
        let phi = |z: Complex64| ONE + c64(0.25, 0.0) * z + c64(0.1, 0.0) / z;
        let contour = unit_circle();
        let n = 8;
        let ops = CauchyOps::new(Discretization::uniform(contour.clone(), n));
        let jump = JumpField::new(contour, move |_, z| Mat2::diag(phi(z), phi(z).inv()));
        let cw = assemble_cw(&jump, &ops).unwrap();

        let nodes = ops.disc.nodes[0].clone();
        let modes = laurent_modes(n);
        let project_minus = |vals: &[Complex64]| -> Vec<Complex64> {
            let coeffs: Vec<Complex64> = modes
                .iter()
                .map(|&k| {
                    let mut acc = ZERO;
                    for (j, &z) in nodes.iter().enumerate() {
                        acc += vals[j] * z.powi(-(k as i32));
                    }
                    acc / n as f64
                })
                .collect();
            nodes
                .iter()
                .map(|&z| {
                    let mut acc = ZERO;
                    for (idx, &k) in modes.iter().enumerate() {
                        if k < 0 {
                            acc -= coeffs[idx] * z.powi(k as i32);
                        }
                    }
                    acc
                })
                .collect()
        };
        for src in 0..n {
            for alpha in 0..2 {
                let mut hv = vec![Mat2::zero(); n];
                // unit density (row 0, column alpha) at node src, times (v - I)
                let z = nodes[src];
                let mut unit = Mat2::zero();
                unit.0[alpha] = ONE;
                hv[src] = unit.mul(&Mat2::diag(phi(z) - ONE, phi(z).inv() - ONE));
                let want0 = project_minus(&hv.iter().map(|m| m.at(0, 0)).collect::<Vec<_>>());
                let want1 = project_minus(&hv.iter().map(|m| m.at(0, 1)).collect::<Vec<_>>());
                for tgt in 0..n {
                    for beta in 0..2 {
                        let got = cw[(2 * tgt + beta, 2 * src + alpha)];
                        let want = if beta == 0 { want0[tgt] } else { want1[tgt] };
                        assert!((got - want).norm() < 1e-12, "src={src} a={alpha} tgt={tgt} b={beta}");
                    }
                }
            }
        }
    }

    #[test]
    fn factorization_independence() {
        let phi = |z: Complex64| (c64(0.3, 0.0) * (z + z.inv())).exp();
        let contour = unit_circle();
        let j1 = JumpField::new(contour.clone(), move |_, z| Mat2::diag(phi(z), phi(z).inv()));
        let j2 = JumpField::new(contour.clone(), move |_, z| Mat2::diag(phi(z), phi(z).inv()))
            .with_factorization(
                move |_, z| {
                    let s = phi(z).sqrt();
                    Mat2::diag(s.inv(), s)
                },
                move |_, z| {
                    let s = phi(z).sqrt();
                    Mat2::diag(s, s.inv())
                },
            );
        let cfg = SolverConfig::default();
        let s1 = solve_normalized(&j1, &[48], &cfg).unwrap();
        let s2 = solve_normalized(&j2, &[48], &cfg).unwrap();
        let mut err = 0.0f64;
        for (a, b) in s1.m_plus.iter().zip(&s2.m_plus) {
            err = err.max(a.sub(b).norm_sup());
        }
        for (a, b) in s1.m_minus.iter().zip(&s2.m_minus) {
            err = err.max(a.sub(b).norm_sup());
        }
        assert!(err < 1e-8, "factorization dependence {err:.2e}");

        let scal = solve_scalar_closed_form(&unit_circle(), |_, z| phi(z), &[48]).unwrap();
        for &z in &[c64(0.4, 0.1), c64(2.0, -1.0)] {
            let m = s1.eval(z).unwrap();
            let alpha = scal.eval(z).unwrap();
            assert!((m.at(0, 0) - alpha).norm() < 1e-10);
            assert!((m.at(1, 1) - alpha.inv()).norm() < 1e-10);
            assert!(m.at(0, 1).norm() < 1e-12);
            assert!((m.det() - ONE).norm() < 1e-8, "det m = 1 probe");
        }
    }

    #[test]
    fn resolvent_matches_dense_inverse_and_identity() {
        let vfun = |z: Complex64| {
            Mat2::new(
                ONE + c64(0.12, 0.0) * z,
                c64(0.2, 0.05) * z.inv(),
                c64(-0.15, 0.1),
                ONE + c64(0.08, 0.0) * z.inv(),
            )
        };
        let contour = unit_circle();
        let jump = JumpField::new(contour.clone(), move |_, z| vfun(z));
        let n = 16;
        let ops = CauchyOps::new(Discretization::uniform(contour.clone(), n));
        let cw = assemble_cw(&jump, &ops).unwrap();

        let mut f = Density::zeros(&[n], 4);
        for j in 0..n {
            for c in 0..4 {
                let t = (j * 7 + c * 3) as f64;
                f.blocks[0].values[j * 4 + c] = c64((t * 0.31).sin(), (t * 0.17).cos() * 0.5);
            }
        }
        let (mu, id_err) = apply_resolvent(&jump, &[n], &f).unwrap();
        assert!(id_err < 1e-10, "boundary identity violation {id_err:.2e}");

        // dense brute-force inverse of the stacked system, row by row
        let dim = 2 * n;
        let mut a = CMat::zeros(dim, dim);
        for j in 0..dim {
            for i in 0..dim {
                a[(i, j)] = -cw[(i, j)];
            }
            a[(j, j)] += ONE;
        }
        let lu = a.lu().unwrap();
        for row in 0..2 {
            let mut b = Vec::with_capacity(dim);
            for j in 0..n {
                b.push(f.blocks[0].values[j * 4 + 2 * row]);
                b.push(f.blocks[0].values[j * 4 + 2 * row + 1]);
            }
            lu.solve_in_place(&mut b);
            for j in 0..n {
                for col in 0..2 {
                    let want = b[2 * j + col];
                    let got = mu.blocks[0].values[j * 4 + 2 * row + col];
                    assert!((got - want).norm() < 1e-10);
                }
            }
        }

        // v = I: the resolvent is the identity map
        let id_jump = JumpField::new(unit_circle(), |_, _| Mat2::identity());
        let (same, _) = apply_resolvent(&id_jump, &[n], &f).unwrap();
        assert!(same.binary(&f, |a, b| a - b).sup_norm() < 1e-14);
    }

    #[test]
    fn far_field_expansion_and_plemelj_consistency() {
        let phi = |z: Complex64| (c64(0.3, 0.0) * (z + z.inv())).exp();
        let jump = JumpField::new(unit_circle(), move |_, z| Mat2::diag(phi(z), phi(z).inv()));
        let sol = solve_normalized(&jump, &[48], &SolverConfig::default()).unwrap();

        // m₊ - m₋ = μ(ω⁺+ω⁻) at the nodes
        let hp = sol.ops.boundary(&sol.h, Side::Plus);
        let hm = sol.ops.boundary(&sol.h, Side::Minus);
        let diff = hp.binary(&hm, |p, m| p - m);
        let mut g = 0;
        let mut err = 0.0f64;
        for block in &diff.blocks {
            for j in 0..block.n {
                let d = Mat2([
                    block.values[j * 4],
                    block.values[j * 4 + 1],
                    block.values[j * 4 + 2],
                    block.values[j * 4 + 3],
                ]);
                err = err.max(d.sub(&sol.m_plus[g].sub(&sol.m_minus[g])).norm_sup());
                g += 1;
            }
        }
        assert!(err < 1e-10, "plemelj consistency {err:.2e}");

        // ‖z(m(z)-I) - m₁‖ decays in the far field
        let r10 = {
            let z = c64(10.0, 3.0);
            sol.eval(z).unwrap().sub(&Mat2::identity()).scale(z).sub(&sol.m1).norm_sup()
        };
        let r100 = {
            let z = c64(100.0, 30.0);
            sol.eval(z).unwrap().sub(&Mat2::identity()).scale(z).sub(&sol.m1).norm_sup()
        };
        assert!(r100 < 0.3 * r10, "far-field decay {r10:.2e} -> {r100:.2e}");
    }

    #[test]
    fn singular_jump_is_rejected() {
        let jump = JumpField::new(unit_circle(), |_, _| Mat2::new(ONE, ONE, ONE, ONE));
        let err = solve_normalized(&jump, &[8], &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::SingularJump { .. }));
    }
}
