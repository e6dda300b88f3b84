//! Oriented composed curves: finite unions of arcs meeting only at endpoints.
//!
//! Every non-circle arc is stored as the Möbius image of the reference
//! interval [-1, 1]; a Möbius map sends the interval to a straight segment or
//! a circular arc, and its conformality is what lets the Cauchy machinery in
//! [`crate::cauchy`] reduce all arc families to one segment kernel.  Full
//! circles keep their own Laurent-basis representation.  Rays are always
//! stored truncated at a finite radius; the solver layers choose the radius so
//! the jump data is indistinguishable from the identity beyond it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::quad;

/// Absolute distance below which endpoints are considered the same vertex.
pub const VERTEX_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ContourError {
    #[error("arcs {i} and {j} intersect at an interior point near {at:?}")]
    OverlappingArcs { i: usize, j: usize, at: (f64, f64) },
    #[error("arc {i} is degenerate (coincident endpoints)")]
    DegenerateArc { i: usize },
    #[error("invalid arc spec: {0}")]
    BadSpec(String),
}

/// Möbius map M(t) = (a t + b) / (c t + d).
#[derive(Clone, Copy, Debug)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn affine(half_span: Complex64, mid: Complex64) -> Self {
        Mobius { a: half_span, b: mid, c: Complex64::new(0.0, 0.0), d: Complex64::new(1.0, 0.0) }
    }

    /// Möbius map taking (-1, 0, 1) to (z1, z2, z3).
    pub fn through(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        let denom = z1 - z3;
        let c = (z1 + z3 - z2 * 2.0) / denom;
        let a = z2 - z1 + z1 * c;
        Mobius { a, b: z2, c, d: Complex64::new(1.0, 0.0) }
    }

    #[inline]
    pub fn apply(&self, t: Complex64) -> Complex64 {
        (self.a * t + self.b) / (self.c * t + self.d)
    }

    #[inline]
    pub fn inverse(&self, z: Complex64) -> Complex64 {
        (self.d * z - self.b) / (-self.c * z + self.a)
    }

    #[inline]
    pub fn deriv(&self, t: Complex64) -> Complex64 {
        let den = self.c * t + self.d;
        (self.a * self.d - self.b * self.c) / (den * den)
    }

    pub fn is_affine(&self) -> bool {
        self.c.norm() == 0.0
    }

    /// Preimage of infinity, -d/c (only meaningful when not affine).
    pub fn pole(&self) -> Complex64 {
        -self.d / self.c
    }
}

/// Geometric primitive underlying an arc, used by the intersection checks.
#[derive(Clone, Copy, Debug)]
pub enum Primitive {
    Line { from: Complex64, to: Complex64 },
    /// Circular arc traversed from `theta0` by `sweep` radians (signed).
    CircleArc { center: Complex64, radius: f64, theta0: f64, sweep: f64 },
}

/// Spectral basis family attached to an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// Chebyshev in the Möbius parameter (segments, truncated rays, circular arcs).
    MappedChebyshev,
    /// Laurent modes on a full circle.
    Laurent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    Segment,
    Ray,
    CircularArc,
    Circle,
}

/// One oriented arc of a composed curve.
#[derive(Clone, Debug)]
pub struct Arc {
    pub kind: ArcKind,
    geom: Geom,
}

#[derive(Clone, Debug)]
enum Geom {
    Mapped(Mobius),
    Circle { center: Complex64, radius: f64, ccw: bool },
}

impl Arc {
    pub fn segment(from: Complex64, to: Complex64) -> Self {
        Arc { kind: ArcKind::Segment, geom: Geom::Mapped(Mobius::affine((to - from) * 0.5, (to + from) * 0.5)) }
    }

    /// Truncated ray from `base` in direction `angle`, radii in [r0, rmax].
    pub fn ray(base: Complex64, angle: f64, r0: f64, rmax: f64) -> Self {
        let dir = Complex64::from_polar(1.0, angle);
        let from = base + dir * r0;
        let to = base + dir * rmax;
        Arc { kind: ArcKind::Ray, geom: Geom::Mapped(Mobius::affine((to - from) * 0.5, (to + from) * 0.5)) }
    }

    /// Circular arc on |z - center| = radius from angle `from_angle` to
    /// `to_angle`, traversed in the direction of increasing angle when
    /// `to_angle > from_angle` and decreasing otherwise.
    pub fn circular_arc(center: Complex64, radius: f64, from_angle: f64, to_angle: f64) -> Self {
        let zt = |th: f64| center + Complex64::from_polar(radius, th);
        let mid = 0.5 * (from_angle + to_angle);
        Arc {
            kind: ArcKind::CircularArc,
            geom: Geom::Mapped(Mobius::through(zt(from_angle), zt(mid), zt(to_angle))),
        }
    }

    pub fn circle(center: Complex64, radius: f64, ccw: bool) -> Self {
        Arc { kind: ArcKind::Circle, geom: Geom::Circle { center, radius, ccw } }
    }

    pub fn basis_kind(&self) -> BasisKind {
        match self.geom {
            Geom::Mapped(_) => BasisKind::MappedChebyshev,
            Geom::Circle { .. } => BasisKind::Laurent,
        }
    }

    pub fn mobius(&self) -> Option<&Mobius> {
        match &self.geom {
            Geom::Mapped(m) => Some(m),
            _ => None,
        }
    }

    pub fn circle_data(&self) -> Option<(Complex64, f64, bool)> {
        match self.geom {
            Geom::Circle { center, radius, ccw } => Some((center, radius, ccw)),
            _ => None,
        }
    }

    /// Point on the arc for reference parameter t ∈ [-1, 1].
    pub fn point(&self, t: f64) -> Complex64 {
        match &self.geom {
            Geom::Mapped(m) => m.apply(Complex64::new(t, 0.0)),
            Geom::Circle { center, radius, ccw } => {
                let th = PI * (t + 1.0) * if *ccw { 1.0 } else { -1.0 };
                center + Complex64::from_polar(*radius, th)
            }
        }
    }

    /// dζ/dt at reference parameter t.
    pub fn tangent(&self, t: f64) -> Complex64 {
        match &self.geom {
            Geom::Mapped(m) => m.deriv(Complex64::new(t, 0.0)),
            Geom::Circle { radius, ccw, .. } => {
                let sign = if *ccw { 1.0 } else { -1.0 };
                let th = PI * (t + 1.0) * sign;
                Complex64::new(0.0, sign * PI * radius) * Complex64::from_polar(1.0, th)
            }
        }
    }

    /// Endpoints (start, end); a full circle has none.
    pub fn endpoints(&self) -> Option<(Complex64, Complex64)> {
        match self.geom {
            Geom::Mapped(_) => Some((self.point(-1.0), self.point(1.0))),
            Geom::Circle { .. } => None,
        }
    }

    /// Interior collocation nodes following the arc's basis convention.
    pub fn nodes(&self, n: usize) -> Vec<Complex64> {
        assert!(n >= 1);
        match &self.geom {
            Geom::Mapped(m) => crate::cheb::nodes(n)
                .iter()
                .map(|&t| m.apply(Complex64::new(t, 0.0)))
                .collect(),
            Geom::Circle { center, radius, ccw } => (0..n)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / n as f64 * if *ccw { 1.0 } else { -1.0 };
                    center + Complex64::from_polar(*radius, th)
                })
                .collect(),
        }
    }

    /// Arc length, by quadrature of |dζ/dt|.
    pub fn length(&self) -> f64 {
        match &self.geom {
            Geom::Circle { radius, .. } => 2.0 * PI * radius,
            Geom::Mapped(_) => {
                let (ts, ws) = quad::gauss_legendre(48);
                ts.iter().zip(&ws).map(|(&t, &w)| w * self.tangent(t).norm()).sum()
            }
        }
    }

    /// Arc length between reference parameters.
    pub fn length_between(&self, t0: f64, t1: f64) -> f64 {
        let (ts, ws) = quad::gauss_legendre_on(t0, t1, 48);
        ts.iter().zip(&ws).map(|(&t, &w)| w * self.tangent(t).norm()).sum()
    }

    /// Distance from `z` to the arc (coarse sampling plus local refinement).
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match &self.geom {
            Geom::Circle { center, radius, .. } => ((z - center).norm() - radius).abs(),
            Geom::Mapped(_) => {
                let mut best = f64::INFINITY;
                let mut tbest = 0.0;
                let n = 128;
                for j in 0..=n {
                    let t = -1.0 + 2.0 * j as f64 / n as f64;
                    let d = (self.point(t) - z).norm();
                    if d < best {
                        best = d;
                        tbest = t;
                    }
                }
                // golden-section refinement around the best sample
                let (mut lo, mut hi) = ((tbest - 2.0 / n as f64).max(-1.0), (tbest + 2.0 / n as f64).min(1.0));
                for _ in 0..60 {
                    let m1 = lo + 0.381966 * (hi - lo);
                    let m2 = hi - 0.381966 * (hi - lo);
                    if (self.point(m1) - z).norm() < (self.point(m2) - z).norm() {
                        hi = m2;
                    } else {
                        lo = m1;
                    }
                }
                best.min((self.point(0.5 * (lo + hi)) - z).norm())
            }
        }
    }

    /// The underlying geometric primitive (used for intersection tests).
    pub fn primitive(&self) -> Primitive {
        match &self.geom {
            Geom::Circle { center, radius, ccw } => Primitive::CircleArc {
                center: *center,
                radius: *radius,
                theta0: 0.0,
                sweep: if *ccw { 2.0 * PI } else { -2.0 * PI },
            },
            Geom::Mapped(m) => {
                if m.is_affine() {
                    Primitive::Line { from: self.point(-1.0), to: self.point(1.0) }
                } else {
                    // three points determine the circle
                    let (p, q, r) = (self.point(-1.0), self.point(0.0), self.point(1.0));
                    let (center, radius) = circumcircle(p, q, r);
                    let th0 = (p - center).arg();
                    let th1 = (q - center).arg();
                    let th2 = (r - center).arg();
                    // choose the sweep passing through q
                    let mut sweep = wrap_angle(th2 - th0);
                    let mid = wrap_angle(th1 - th0);
                    if !(0.0..=sweep.abs()).contains(&(mid * sweep.signum())) {
                        sweep = if sweep > 0.0 { sweep - 2.0 * PI } else { sweep + 2.0 * PI };
                    }
                    Primitive::CircleArc { center, radius, theta0: th0, sweep }
                }
            }
        }
    }
}

fn wrap_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    if x < -PI {
        x += 2.0 * PI;
    }
    x
}

fn circumcircle(p: Complex64, q: Complex64, r: Complex64) -> (Complex64, f64) {
    // perpendicular bisector intersection, via the standard determinant form
    let (ax, ay) = (p.re, p.im);
    let (bx, by) = (q.re, q.im);
    let (cx, cy) = (r.re, r.im);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    let ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
    let uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
    let center = Complex64::new(ux, uy);
    (center, (p - center).norm())
}

/// A vertex of the composed curve with its incident arc ends.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub point: Complex64,
    /// (arc index, +1 if the arc starts here / -1 if it ends here)
    pub incident: Vec<(usize, i8)>,
}

/// An oriented composed curve.
#[derive(Clone, Debug)]
pub struct Contour {
    pub arcs: Vec<Arc>,
    pub vertices: Vec<Vertex>,
}

impl Contour {
    /// Assemble a contour, checking arc admissibility and building the vertex table.
    pub fn new(arcs: Vec<Arc>) -> Result<Self, ContourError> {
        for (i, arc) in arcs.iter().enumerate() {
            if let Some((a, b)) = arc.endpoints() {
                if (a - b).norm() < VERTEX_TOL {
                    return Err(ContourError::DegenerateArc { i });
                }
            }
        }
        check_no_interior_intersections(&arcs)?;
        let vertices = build_vertices(&arcs);
        Ok(Contour { arcs, vertices })
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        self.arcs.iter().map(|a| a.length()).sum()
    }

    /// A radius scale for the contour (max |z| over sampled points).
    pub fn radius(&self) -> f64 {
        self.arcs
            .iter()
            .flat_map(|a| (0..=16).map(move |j| a.point(-1.0 + j as f64 / 8.0).norm()))
            .fold(0.0, f64::max)
    }

    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.arcs.iter().map(|a| a.distance_to(z)).fold(f64::INFINITY, f64::min)
    }
}

fn build_vertices(arcs: &[Arc]) -> Vec<Vertex> {
    let mut vertices: Vec<Vertex> = Vec::new();
    let add = |point: Complex64, item: (usize, i8), vertices: &mut Vec<Vertex>| {
        for v in vertices.iter_mut() {
            if (v.point - point).norm() < VERTEX_TOL {
                v.incident.push(item);
                return;
            }
        }
        vertices.push(Vertex { point, incident: vec![item] });
    };
    for (i, arc) in arcs.iter().enumerate() {
        if let Some((a, b)) = arc.endpoints() {
            add(a, (i, 1), &mut vertices);
            add(b, (i, -1), &mut vertices);
        }
    }
    // only points where at least two arc-ends meet are vertices of the curve
    vertices.retain(|v| v.incident.len() >= 2);
    vertices
}

fn check_no_interior_intersections(arcs: &[Arc]) -> Result<(), ContourError> {
    let prims: Vec<Primitive> = arcs.iter().map(|a| a.primitive()).collect();
    for i in 0..arcs.len() {
        for j in (i + 1)..arcs.len() {
            if let Some(pt) = interior_intersection(&prims[i], &prims[j], &arcs[i], &arcs[j]) {
                return Err(ContourError::OverlappingArcs { i, j, at: (pt.re, pt.im) });
            }
        }
    }
    Ok(())
}

/// True when `p` lies in the interior of the arc (not within tolerance of an endpoint).
fn is_interior_point(arc: &Arc, p: Complex64) -> bool {
    if arc.distance_to(p) > 1e-9 {
        return false;
    }
    match arc.endpoints() {
        None => true,
        Some((a, b)) => {
            let scale = (b - a).norm().max(1.0);
            (p - a).norm() > 1e-9 * scale && (p - b).norm() > 1e-9 * scale
        }
    }
}

fn interior_intersection(pi: &Primitive, pj: &Primitive, ai: &Arc, aj: &Arc) -> Option<Complex64> {
    let candidates = primitive_intersections(pi, pj);
    candidates.into_iter().find(|&p| is_interior_point(ai, p) && is_interior_point(aj, p))
}

fn primitive_intersections(p: &Primitive, q: &Primitive) -> Vec<Complex64> {
    match (p, q) {
        (Primitive::Line { from: a, to: b }, Primitive::Line { from: c, to: d }) => {
            let r = b - a;
            let s = d - c;
            let denom = r.re * s.im - r.im * s.re;
            let diff = c - a;
            if denom.abs() < 1e-15 * (r.norm() * s.norm()).max(1e-300) {
                // parallel: collinear overlap check via projections
                let cross = diff.re * r.im - diff.im * r.re;
                if cross.abs() > 1e-12 * r.norm().max(1.0) {
                    return vec![];
                }
                let dot = |u: Complex64, v: Complex64| u.re * v.re + u.im * v.im;
                let t0 = dot(diff, r) / r.norm_sqr();
                let t1 = dot(d - a, r) / r.norm_sqr();
                let (lo, hi) = (t0.min(t1), t0.max(t1));
                let ov_lo = lo.max(0.0);
                let ov_hi = hi.min(1.0);
                if ov_hi - ov_lo > 1e-9 {
                    return vec![a + r * (0.5 * (ov_lo + ov_hi))];
                }
                return vec![];
            }
            let t = (diff.re * s.im - diff.im * s.re) / denom;
            vec![a + r * t]
        }
        (Primitive::Line { from, to }, Primitive::CircleArc { center, radius, .. })
        | (Primitive::CircleArc { center, radius, .. }, Primitive::Line { from, to }) => {
            let d = to - from;
            let f = from - center;
            let a2 = d.norm_sqr();
            let b2 = 2.0 * (f.re * d.re + f.im * d.im);
            let c2 = f.norm_sqr() - radius * radius;
            let disc = b2 * b2 - 4.0 * a2 * c2;
            if disc < 0.0 {
                return vec![];
            }
            let sq = disc.sqrt();
            [(-b2 + sq) / (2.0 * a2), (-b2 - sq) / (2.0 * a2)]
                .iter()
                .map(|&t| from + d * t)
                .collect()
        }
        (
            Primitive::CircleArc { center: c1, radius: r1, .. },
            Primitive::CircleArc { center: c2, radius: r2, .. },
        ) => {
            let d = (c2 - c1).norm();
            if d < 1e-14 {
                // concentric: overlapping only if radii equal; midpoint probe
                if (r1 - r2).abs() < 1e-12 {
                    return vec![c1 + Complex64::new(*r1, 0.0), c1 - Complex64::new(*r1, 0.0), c1 + Complex64::new(0.0, *r1)];
                }
                return vec![];
            }
            let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
            let h2 = r1 * r1 - a * a;
            if h2 < 0.0 {
                return vec![];
            }
            let h = h2.max(0.0).sqrt();
            let u = (c2 - c1) / d;
            let m = c1 + u * a;
            let perp = Complex64::new(-u.im, u.re);
            vec![m + perp * h, m - perp * h]
        }
    }
}

/// Declarative arc description, the JSON schema consumed by the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcSpec {
    Segment { from: [f64; 2], to: [f64; 2] },
    Ray {
        #[serde(default)]
        base: [f64; 2],
        angle: f64,
        rmax: f64,
        #[serde(default)]
        rmin: f64,
    },
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "default_orientation")]
        orientation: String,
    },
    CircularArc { center: [f64; 2], radius: f64, from_angle: f64, to_angle: f64 },
}

fn default_orientation() -> String {
    "ccw".to_string()
}

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Build a contour from declarative arc specs.
pub fn build_contour(specs: &[ArcSpec]) -> Result<Contour, ContourError> {
    let mut arcs = Vec::with_capacity(specs.len());
    for s in specs {
        arcs.push(match s {
            ArcSpec::Segment { from, to } => Arc::segment(cx(*from), cx(*to)),
            ArcSpec::Ray { base, angle, rmax, rmin } => {
                if *rmax <= *rmin {
                    return Err(ContourError::BadSpec(format!("ray needs rmax > rmin, got {rmin}..{rmax}")));
                }
                Arc::ray(cx(*base), *angle, *rmin, *rmax)
            }
            ArcSpec::Circle { center, radius, orientation } => match orientation.as_str() {
                "ccw" => Arc::circle(cx(*center), *radius, true),
                "cw" => Arc::circle(cx(*center), *radius, false),
                other => return Err(ContourError::BadSpec(format!("orientation must be ccw or cw, got {other}"))),
            },
            ArcSpec::CircularArc { center, radius, from_angle, to_angle } => {
                Arc::circular_arc(cx(*center), *radius, *from_angle, *to_angle)
            }
        });
    }
    Contour::new(arcs)
}

/// Per-arc interior collocation nodes.
pub fn collocation_nodes(arc: &Arc, n: usize) -> Vec<Complex64> {
    assert!(n >= 2, "need at least two nodes");
    arc.nodes(n)
}

/// Result of the Carleson-constant probe.
#[derive(Clone, Copy, Debug)]
pub struct CarlesonEstimate {
    pub lambda: f64,
    pub at_point: Complex64,
    pub at_radius: f64,
}

/// Lower estimate of λ_Σ = sup_{z,r} length(Σ ∩ D_r(z)) / r over a finite
/// probe grid of centers on Σ and the given radii.
pub fn carleson_constant(contour: &Contour, radii: &[f64], probe_points: usize) -> CarlesonEstimate {
    let mut best = CarlesonEstimate { lambda: 0.0, at_point: Complex64::new(0.0, 0.0), at_radius: 1.0 };
    let r_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    // fine polylines; a chord counts only when it lies entirely inside the
    // probe disk, which keeps the estimate a lower bound for λ_Σ
    let polylines: Vec<Vec<(Complex64, Complex64, f64)>> = contour
        .arcs
        .iter()
        .map(|arc| {
            let samples_per_arc = ((48.0 * arc.length() / r_min).ceil() as usize).clamp(32, 8192);
            (0..samples_per_arc)
                .map(|k| {
                    let t0 = -1.0 + 2.0 * k as f64 / samples_per_arc as f64;
                    let t1 = -1.0 + 2.0 * (k + 1) as f64 / samples_per_arc as f64;
                    let (p0, p1) = (arc.point(t0), arc.point(t1));
                    (p0, p1, (p1 - p0).norm())
                })
                .collect()
        })
        .collect();
    // probe parameters are nested under doubling of probe_points, so the
    // estimate is monotone nondecreasing as the grid is refined
    for arc in &contour.arcs {
        for k in 0..probe_points {
            let t = -1.0 + 2.0 * k as f64 / probe_points as f64 + 1e-9;
            let z = arc.point(t);
            for &r in radii {
                let mut len = 0.0;
                for poly in &polylines {
                    for &(p0, p1, dl) in poly {
                        if (p0 - z).norm() <= r && (p1 - z).norm() <= r {
                            len += dl;
                        }
                    }
                }
                if len / r > best.lambda {
                    best = CarlesonEstimate { lambda: len / r, at_point: z, at_radius: r };
                }
            }
        }
    }
    best
}
