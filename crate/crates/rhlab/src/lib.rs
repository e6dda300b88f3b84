//! Numerical Riemann–Hilbert problems.
//!
//! A Riemann–Hilbert problem (RHP) asks for a matrix function `m(z)`, analytic
//! off an oriented contour `Σ`, whose boundary values satisfy `m₊ = m₋ v` for a
//! given jump matrix `v`, normalized by `m(z) → I` at infinity.  This crate
//! solves normalized RHPs by reducing them to the singular integral equation
//! `(1 − C_ω)μ = I` on the contour, discretized with spectrally accurate
//! per-arc bases (Chebyshev on segments and rays, Laurent modes on circles).
//!
//! On top of the solver sit five worked applications:
//!
//! * [`airy`] — the Airy function by contour quadrature and its asymptotic series,
//! * [`painleve2`] — the six-ray RHP for Painlevé II, Ablowitz–Segur connection
//!   formulas, the Hastings–McLeod solution and the Tracy–Widom distribution,
//! * [`scattering`] — direct and inverse scattering for the ZS–AKNS system,
//!   with MKdV and defocusing NLS reconstructions and a split-step oracle,
//! * [`orthopoly`] — the Fokas–Its–Kitaev RHP for orthogonal polynomials,
//! * [`toeplitz`] — Toeplitz determinants, integrable operators ([`intops`]) and
//!   the Szegő strong limit theorem, including one worked lens deformation.
//!
//! The `rhlab` binary exposes the applications as CLI subcommands emitting CSV
//! plus a JSON run manifest; see the book under `book/` for a guided tour.

pub mod airy;
pub mod cauchy;
pub mod cheb;
pub mod contour;
pub mod intops;
pub mod linalg;
pub mod manifest;
pub mod ode;
pub mod orthopoly;
pub mod painleve2;
pub mod quad;
pub mod rhsolver;
pub mod scattering;
pub mod toeplitz;

mod special;

mod guide;

pub use num_complex::Complex64;

/// Convenience constructor for `Complex64`.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
