//! Closed space curves: analytic piecewise-smooth curves, polygonal loops,
//! sampling, closure checks, and separation measurement.

use crate::error::{Error, Result};
use nalgebra::{Rotation3, Vector3};

pub type Vec3 = Vector3<f64>;

/// Absolute endpoint/piece-gap tolerance for treating a curve as closed.
pub const CLOSURE_TOLERANCE: f64 = 1e-9;

/// One smooth piece of a parametric curve, defined on a parameter interval.
#[derive(Debug, Clone)]
pub enum Piece {
    /// p(t) = start + (t - t0) * velocity
    Line {
        start: Vec3,
        velocity: Vec3,
        interval: (f64, f64),
    },
    /// p(t) = center + radius * (cos(rate*t + phase) * axis_u + sin(rate*t + phase) * axis_v)
    Arc {
        center: Vec3,
        radius: f64,
        axis_u: Vec3,
        axis_v: Vec3,
        rate: f64,
        phase: f64,
        interval: (f64, f64),
    },
}

impl Piece {
    pub fn interval(&self) -> (f64, f64) {
        match self {
            Piece::Line { interval, .. } | Piece::Arc { interval, .. } => *interval,
        }
    }

    pub fn position(&self, t: f64) -> Vec3 {
        match self {
            Piece::Line {
                start,
                velocity,
                interval,
            } => start + (t - interval.0) * velocity,
            Piece::Arc {
                center,
                radius,
                axis_u,
                axis_v,
                rate,
                phase,
                ..
            } => {
                let a = rate * t + phase;
                center + *radius * (a.cos() * axis_u + a.sin() * axis_v)
            }
        }
    }

    pub fn tangent(&self, t: f64) -> Vec3 {
        match self {
            Piece::Line { velocity, .. } => *velocity,
            Piece::Arc {
                radius,
                axis_u,
                axis_v,
                rate,
                phase,
                ..
            } => {
                let a = rate * t + phase;
                *radius * *rate * (-a.sin() * axis_u + a.cos() * axis_v)
            }
        }
    }

    fn transformed(&self, rot: &Rotation3<f64>, shift: Vec3) -> Piece {
        match self {
            Piece::Line {
                start,
                velocity,
                interval,
            } => Piece::Line {
                start: rot * start + shift,
                velocity: rot * velocity,
                interval: *interval,
            },
            Piece::Arc {
                center,
                radius,
                axis_u,
                axis_v,
                rate,
                phase,
                interval,
            } => Piece::Arc {
                center: rot * center + shift,
                radius: *radius,
                axis_u: rot * axis_u,
                axis_v: rot * axis_v,
                rate: *rate,
                phase: *phase,
                interval: *interval,
            },
        }
    }
}

/// A piecewise-smooth curve in 3-space with analytic position and tangent.
///
/// Pieces are ordered, their parameter intervals are contiguous, and the
/// curve produced by [`ParametricCurve::new`] is closed within
/// [`CLOSURE_TOLERANCE`]. Values are immutable after construction.
#[derive(Debug, Clone)]
pub struct ParametricCurve {
    pieces: Vec<Piece>,
}

impl ParametricCurve {
    /// Builds a closed curve, validating piece contiguity, endpoint closure,
    /// and agreement of the analytic tangent with finite differences.
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let curve = Self::open(pieces)?;
        let gap = (curve.position(curve.domain().1) - curve.position(curve.domain().0)).norm();
        if gap > CLOSURE_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "curve is not closed: endpoint gap {gap:.3e} exceeds {CLOSURE_TOLERANCE:.0e}"
            )));
        }
        Ok(curve)
    }

    /// Builds a curve without requiring closure. [`closure_check`] reports
    /// whether such a curve closes up.
    pub fn open(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("curve needs at least one piece".into()));
        }
        for piece in &pieces {
            let (a, b) = piece.interval();
            if !(a < b) {
                return Err(Error::InvalidArgument(format!(
                    "piece interval [{a}, {b}] is empty or reversed"
                )));
            }
        }
        for pair in pieces.windows(2) {
            let (_, b0) = pair[0].interval();
            let (a1, _) = pair[1].interval();
            if b0 != a1 {
                return Err(Error::InvalidArgument(format!(
                    "piece intervals are not contiguous: {b0} followed by {a1}"
                )));
            }
            let gap = (pair[1].position(a1) - pair[0].position(b0)).norm();
            if gap > CLOSURE_TOLERANCE {
                return Err(Error::InvalidArgument(format!(
                    "pieces disagree at shared parameter {a1}: gap {gap:.3e}"
                )));
            }
        }
        let curve = Self { pieces };
        curve.check_tangent_consistency()?;
        Ok(curve)
    }

    /// Central finite differences of the position must match the analytic
    /// tangent to 1e-6 relative error at interior probe points.
    fn check_tangent_consistency(&self) -> Result<()> {
        for piece in &self.pieces {
            let (a, b) = piece.interval();
            let len = b - a;
            let h = 1e-6 * len;
            for k in 1..=5 {
                let t = a + len * (k as f64) / 6.0;
                let fd = (piece.position(t + h) - piece.position(t - h)) / (2.0 * h);
                let an = piece.tangent(t);
                let scale = an.norm().max(1e-12);
                if (fd - an).norm() / scale > 1e-6 {
                    return Err(Error::InvalidArgument(format!(
                        "tangent disagrees with finite differences at t = {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Total parameter interval covered by the pieces.
    pub fn domain(&self) -> (f64, f64) {
        (
            self.pieces.first().unwrap().interval().0,
            self.pieces.last().unwrap().interval().1,
        )
    }

    fn piece_at(&self, t: f64) -> &Piece {
        // linear scan; curves here have few pieces
        for piece in &self.pieces {
            if t <= piece.interval().1 {
                return piece;
            }
        }
        self.pieces.last().unwrap()
    }

    pub fn position(&self, t: f64) -> Vec3 {
        self.piece_at(t).position(t)
    }

    pub fn tangent(&self, t: f64) -> Vec3 {
        self.piece_at(t).tangent(t)
    }

    /// Polygonizes the curve at `n` parameter values spaced uniformly over
    /// the domain, which allocates vertices to pieces proportionally to
    /// their interval lengths. Every vertex lies exactly on the curve.
    pub fn sample(&self, n: usize) -> Result<PolygonalCurve> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "polygonization needs n >= 3 vertices, got {n}"
            )));
        }
        let (a, b) = self.domain();
        let vertices = (0..n)
            .map(|k| self.position(a + (b - a) * (k as f64) / (n as f64)))
            .collect();
        PolygonalCurve::new(vertices)
    }

    /// Same curve traversed in the opposite direction.
    pub fn reversed(&self) -> ParametricCurve {
        let (dom_a, dom_b) = self.domain();
        let total = dom_a + dom_b;
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|piece| {
                let (a, b) = piece.interval();
                let interval = (total - b, total - a);
                match piece {
                    Piece::Line { velocity, .. } => Piece::Line {
                        start: piece.position(b),
                        velocity: -velocity,
                        interval,
                    },
                    Piece::Arc {
                        center,
                        radius,
                        axis_u,
                        axis_v,
                        rate,
                        phase,
                        ..
                    } => Piece::Arc {
                        center: *center,
                        radius: *radius,
                        axis_u: *axis_u,
                        axis_v: *axis_v,
                        rate: -rate,
                        phase: phase + rate * total,
                        interval,
                    },
                }
            })
            .collect();
        ParametricCurve { pieces }
    }

    /// Piecewise-linear curve through a polygon's vertices, one piece per
    /// segment, parametrized by segment index on [0, n].
    pub fn from_polygon(poly: &PolygonalCurve) -> ParametricCurve {
        let verts = poly.vertices();
        let n = verts.len();
        let pieces = (0..n)
            .map(|i| Piece::Line {
                start: verts[i],
                velocity: verts[(i + 1) % n] - verts[i],
                interval: (i as f64, (i + 1) as f64),
            })
            .collect();
        ParametricCurve { pieces }
    }

    pub fn transformed(&self, rot: &Rotation3<f64>, shift: Vec3) -> ParametricCurve {
        ParametricCurve {
            pieces: self.pieces.iter().map(|p| p.transformed(rot, shift)).collect(),
        }
    }
}

/// Builds a circle from center, radius, plane normal, and phase offset,
/// parametrized over [0, 2pi]. The in-plane frame is chosen
/// deterministically from the normal so equal inputs give equal curves.
pub fn circle(center: Vec3, radius: f64, normal: Vec3, phase: f64) -> Result<ParametricCurve> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("circle radius must be positive, got {radius}")));
    }
    if normal.norm() == 0.0 {
        return Err(Error::InvalidArgument("circle normal must be nonzero".into()));
    }
    let n = normal.normalize();
    let (axis_u, axis_v) = plane_frame(n);
    ParametricCurve::new(vec![Piece::Arc {
        center,
        radius,
        axis_u,
        axis_v,
        rate: 1.0,
        phase,
        interval: (0.0, std::f64::consts::TAU),
    }])
}

/// Deterministic right-handed in-plane frame (u, v) with u x v = normal.
pub(crate) fn plane_frame(unit_normal: Vec3) -> (Vec3, Vec3) {
    let candidates = [Vec3::x(), Vec3::y(), Vec3::z()];
    let reference = candidates
        .iter()
        .min_by(|a, b| {
            a.dot(&unit_normal)
                .abs()
                .partial_cmp(&b.dot(&unit_normal).abs())
                .unwrap()
        })
        .unwrap();
    let u = (reference - reference.dot(&unit_normal) * unit_normal).normalize();
    let v = unit_normal.cross(&u);
    (u, v)
}

/// A closed loop of straight segments; the last vertex connects to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalCurve {
    vertices: Vec<Vec3>,
}

impl PolygonalCurve {
    pub fn new(vertices: Vec<Vec3>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            let seg = vertices[(i + 1) % n] - vertices[i];
            if seg.norm_squared() == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "zero-length segment between vertices {i} and {}",
                    (i + 1) % n
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    /// Segment count equals vertex count for a closed loop.
    pub fn segment_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn segment(&self, i: usize) -> (Vec3, Vec3) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    pub fn reversed(&self) -> PolygonalCurve {
        let mut vertices = self.vertices.clone();
        vertices[1..].reverse();
        PolygonalCurve { vertices }
    }

    pub fn transformed(&self, rot: &Rotation3<f64>, shift: Vec3) -> PolygonalCurve {
        PolygonalCurve {
            vertices: self.vertices.iter().map(|v| rot * v + shift).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> PolygonalCurve {
        PolygonalCurve {
            vertices: self.vertices.iter().map(|v| factor * v).collect(),
        }
    }

    /// Diameter of the axis-aligned bounding box.
    pub fn bbox_diameter(&self) -> f64 {
        bbox_diameter(&self.vertices)
    }
}

pub(crate) fn bbox_diameter(points: &[Vec3]) -> f64 {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (hi - lo).norm()
}

/// Either curve representation; linking operations accept both.
#[derive(Debug, Clone)]
pub enum Curve {
    Parametric(ParametricCurve),
    Polygonal(PolygonalCurve),
}

impl Curve {
    /// Gap-based closure test: endpoint gap and inter-piece gaps within `tol`.
    /// Polygonal loops are closed by construction.
    pub fn closure_check(&self, tol: f64) -> bool {
        match self {
            Curve::Polygonal(_) => true,
            Curve::Parametric(c) => {
                let (a, b) = c.domain();
                if (c.position(b) - c.position(a)).norm() > tol {
                    return false;
                }
                c.pieces().windows(2).all(|pair| {
                    let t = pair[1].interval().0;
                    (pair[1].position(t) - pair[0].position(t)).norm() <= tol
                })
            }
        }
    }

    /// Polygon with `n` vertices for parametric curves; polygonal curves are
    /// returned as-is (their vertices are already the intended geometry).
    pub fn polygonize(&self, n: usize) -> Result<PolygonalCurve> {
        match self {
            Curve::Parametric(c) => c.sample(n),
            Curve::Polygonal(p) => Ok(p.clone()),
        }
    }

    /// Exact polygon when the curve is polygonal or piecewise-linear.
    pub fn as_exact_polygon(&self) -> Option<PolygonalCurve> {
        match self {
            Curve::Polygonal(p) => Some(p.clone()),
            Curve::Parametric(c) => {
                let mut vertices = Vec::with_capacity(c.pieces().len());
                for piece in c.pieces() {
                    match piece {
                        Piece::Line { start, .. } => vertices.push(*start),
                        Piece::Arc { .. } => return None,
                    }
                }
                PolygonalCurve::new(vertices).ok()
            }
        }
    }

    pub(crate) fn to_parametric(&self) -> ParametricCurve {
        match self {
            Curve::Parametric(c) => c.clone(),
            Curve::Polygonal(p) => ParametricCurve::from_polygon(p),
        }
    }

    pub fn reversed(&self) -> Curve {
        match self {
            Curve::Parametric(c) => Curve::Parametric(c.reversed()),
            Curve::Polygonal(p) => Curve::Polygonal(p.reversed()),
        }
    }

    pub fn transformed(&self, rot: &Rotation3<f64>, shift: Vec3) -> Curve {
        match self {
            Curve::Parametric(c) => Curve::Parametric(c.transformed(rot, shift)),
            Curve::Polygonal(p) => Curve::Polygonal(p.transformed(rot, shift)),
        }
    }
}

/// A pair of disjoint closed curves, the subject of a linking computation.
#[derive(Debug, Clone)]
pub struct CurvePair {
    pub first: Curve,
    pub second: Curve,
    pub label: Option<String>,
}

impl CurvePair {
    pub fn new(first: Curve, second: Curve) -> Self {
        Self {
            first,
            second,
            label: None,
        }
    }

    pub fn labeled(first: Curve, second: Curve, label: impl Into<String>) -> Self {
        Self {
            first,
            second,
            label: Some(label.into()),
        }
    }

    pub fn min_separation(&self) -> f64 {
        min_separation(&self.first, &self.second)
    }
}

/// Minimum distance between two segments [p1,p2] and [q1,q2].
pub fn segment_distance(p1: Vec3, p2: Vec3, q1: Vec3, q2: Vec3) -> f64 {
    // closest points of two segments, clamped to [0,1] x [0,1]
    let d1 = p2 - p1;
    let d2 = q2 - q1;
    let r = p1 - q1;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let (mut s, mut t);
    if a == 0.0 && e == 0.0 {
        return r.norm();
    }
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            s = if denom != 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
        }
    }
    ((p1 + s * d1) - (q1 + t * d2)).norm()
}

/// Lower bound on pointwise distance between two curves.
///
/// Exact segment-segment minimum when both inputs are polygons; otherwise a
/// dense parameter scan refined by windowed zoom around the best cell.
pub fn min_separation(a: &Curve, b: &Curve) -> f64 {
    if let (Curve::Polygonal(pa), Curve::Polygonal(pb)) = (a, b) {
        let mut best = f64::INFINITY;
        for (p1, p2) in pa.segments() {
            for (q1, q2) in pb.segments() {
                best = best.min(segment_distance(p1, p2, q1, q2));
            }
        }
        return best;
    }
    let ca = a.to_parametric();
    let cb = b.to_parametric();
    min_separation_parametric(&ca, &cb)
}

fn min_separation_parametric(ca: &ParametricCurve, cb: &ParametricCurve) -> f64 {
    let samples = |c: &ParametricCurve| (64 * c.pieces().len()).clamp(512, 4096);
    let (ma, mb) = (samples(ca), samples(cb));
    let (a0, a1) = ca.domain();
    let (b0, b1) = cb.domain();
    let pa: Vec<Vec3> = (0..ma)
        .map(|i| ca.position(a0 + (a1 - a0) * i as f64 / ma as f64))
        .collect();
    let pb: Vec<Vec3> = (0..mb)
        .map(|j| cb.position(b0 + (b1 - b0) * j as f64 / mb as f64))
        .collect();
    let mut best = f64::INFINITY;
    let (mut ti, mut sj) = (0usize, 0usize);
    for (i, p) in pa.iter().enumerate() {
        for (j, q) in pb.iter().enumerate() {
            let d = (p - q).norm_squared();
            if d < best {
                best = d;
                ti = i;
                sj = j;
            }
        }
    }
    // zoom refinement around the best coarse cell
    let mut t_center = a0 + (a1 - a0) * ti as f64 / ma as f64;
    let mut s_center = b0 + (b1 - b0) * sj as f64 / mb as f64;
    let mut t_half = (a1 - a0) / ma as f64;
    let mut s_half = (b1 - b0) / mb as f64;
    const GRID: usize = 16;
    for _ in 0..48 {
        let (mut bt, mut bs) = (t_center, s_center);
        for i in 0..=GRID {
            let t = (t_center - t_half + 2.0 * t_half * i as f64 / GRID as f64).clamp(a0, a1);
            let p = ca.position(t);
            for j in 0..=GRID {
                let s = (s_center - s_half + 2.0 * s_half * j as f64 / GRID as f64).clamp(b0, b1);
                let d = (p - cb.position(s)).norm_squared();
                if d < best {
                    best = d;
                    bt = t;
                    bs = s;
                }
            }
        }
        t_center = bt;
        s_center = bs;
        t_half *= 0.3;
        s_half *= 0.3;
        if t_half < 1e-14 * (a1 - a0) && s_half < 1e-14 * (b1 - b0) {
            break;
        }
    }
    best.sqrt()
}

/// Identifiers for the built-in example curve pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExampleId {
    /// Unit circle and its copy shifted one unit out of plane: linking 0.
    FramingZero,
    /// Unit circle threaded once by a circle of radius `epsilon` centered on
    /// it: linking +1 for every epsilon in (0, 1].
    FramingOne { epsilon: f64 },
    /// Two interlocking rectangular loops traversed so they link -2.
    FramingNegTwo,
}

/// Builds one of the example pairs with its exact parametrization.
pub fn example_pair(id: ExampleId) -> Result<CurvePair> {
    match id {
        ExampleId::FramingZero => {
            let tau = std::f64::consts::TAU;
            let base = Piece::Arc {
                center: Vec3::zeros(),
                radius: 1.0,
                axis_u: Vec3::x(),
                axis_v: Vec3::y(),
                rate: 1.0,
                phase: 0.0,
                interval: (0.0, tau),
            };
            let lifted = Piece::Arc {
                center: Vec3::z(),
                radius: 1.0,
                axis_u: Vec3::x(),
                axis_v: Vec3::y(),
                rate: 1.0,
                phase: 0.0,
                interval: (0.0, tau),
            };
            Ok(CurvePair::labeled(
                Curve::Parametric(ParametricCurve::new(vec![base])?),
                Curve::Parametric(ParametricCurve::new(vec![lifted])?),
                "framing_zero",
            ))
        }
        ExampleId::FramingOne { epsilon } => {
            if !(epsilon > 0.0 && epsilon <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "epsilon must lie in (0, 1], got {epsilon}"
                )));
            }
            let pi = std::f64::consts::PI;
            // (sin(eps t), cos(eps t), 0) over t in [-pi/eps, pi/eps]
            let big = Piece::Arc {
                center: Vec3::zeros(),
                radius: 1.0,
                axis_u: Vec3::y(),
                axis_v: Vec3::x(),
                rate: epsilon,
                phase: 0.0,
                interval: (-pi / epsilon, pi / epsilon),
            };
            // (0, eps cos(s) + 1, eps sin(s)) over s in [-pi, pi]
            let small = Piece::Arc {
                center: Vec3::y(),
                radius: epsilon,
                axis_u: Vec3::y(),
                axis_v: Vec3::z(),
                rate: 1.0,
                phase: 0.0,
                interval: (-pi, pi),
            };
            Ok(CurvePair::labeled(
                Curve::Parametric(ParametricCurve::new(vec![big])?),
                Curve::Parametric(ParametricCurve::new(vec![small])?),
                "framing_one",
            ))
        }
        ExampleId::FramingNegTwo => {
            let first = ParametricCurve::new(vec![
                line_piece(Vec3::new(-1.0, -2.0, -1.0), Vec3::new(0.0, 1.0, 0.5), 0.0, 4.0),
                line_piece(Vec3::new(-1.0, 2.0, 1.0), Vec3::new(1.0, 0.0, -1.0), 4.0, 6.0),
                line_piece(Vec3::new(1.0, 2.0, -1.0), Vec3::new(0.0, -1.0, 0.5), 6.0, 10.0),
                line_piece(Vec3::new(1.0, -2.0, 1.0), Vec3::new(-1.0, 0.0, -1.0), 10.0, 12.0),
            ])?;
            // Traversed opposite to the first loop's sense so the pair links -2.
            let second = ParametricCurve::new(vec![
                line_piece(Vec3::new(2.0, 1.0, 1.0), Vec3::new(0.0, -1.0, -1.0), 0.0, 2.0),
                line_piece(Vec3::new(2.0, -1.0, -1.0), Vec3::new(-1.0, 0.0, 0.5), 2.0, 6.0),
                line_piece(Vec3::new(-2.0, -1.0, 1.0), Vec3::new(0.0, 1.0, -1.0), 6.0, 8.0),
                line_piece(Vec3::new(-2.0, 1.0, -1.0), Vec3::new(1.0, 0.0, 0.5), 8.0, 12.0),
            ])?;
            Ok(CurvePair::labeled(
                Curve::Parametric(first),
                Curve::Parametric(second),
                "framing_neg_two",
            ))
        }
    }
}

fn line_piece(start: Vec3, velocity: Vec3, a: f64, b: f64) -> Piece {
    Piece::Line {
        start,
        velocity,
        interval: (a, b),
    }
}
