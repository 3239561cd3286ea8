//! Framed curves (ribbons): a base curve plus a closed unit normal field
//! and an offset. The framing number is the linking number of the base
//! curve with its push-off along the field. Twists inserted into the field
//! change the framing by exactly the twist count, wherever they are placed.

use crate::curve::{min_separation, Curve, CurvePair, ParametricCurve, PolygonalCurve, Vec3};
use crate::error::{Error, Result};
use crate::quadrature::{link_numeric, LinkEstimate, QuadratureConfig};
use nalgebra::Rotation3;
use std::sync::Arc;

/// Vertex count used when a ribbon has to be polygonized for linking.
pub const DEFAULT_RIBBON_SAMPLES: usize = 256;

/// How a twist's rotation angle is distributed over the parameter domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwistProfile {
    /// Angle grows linearly over the whole domain.
    Uniform,
    /// Angle ramps from 0 to the full turn inside a smoothstep window.
    Window { center: f64, width: f64 },
}

/// Normal field along a base curve.
#[derive(Clone)]
pub enum NormalField {
    /// Constant unit vector (the field of a planar blackboard framing).
    Constant(Vec3),
    /// An inner field rotated about the base tangent by a whole number of
    /// turns over the domain.
    Twisted {
        inner: Box<NormalField>,
        turns: i64,
        profile: TwistProfile,
    },
    /// Arbitrary user-supplied field; validated at ribbon construction.
    Custom(Arc<dyn Fn(f64) -> Vec3 + Send + Sync>),
}

impl std::fmt::Debug for NormalField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormalField::Constant(v) => write!(f, "Constant({v:?})"),
            NormalField::Twisted { inner, turns, profile } => f
                .debug_struct("Twisted")
                .field("inner", inner)
                .field("turns", turns)
                .field("profile", profile)
                .finish(),
            NormalField::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

fn rodrigues(v: Vec3, unit_axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + unit_axis.cross(&v) * s + unit_axis * unit_axis.dot(&v) * (1.0 - c)
}

impl NormalField {
    fn eval(&self, base: &ParametricCurve, t: f64) -> Vec3 {
        match self {
            NormalField::Constant(v) => *v,
            NormalField::Twisted {
                inner,
                turns,
                profile,
            } => {
                let n0 = inner.eval(base, t);
                let (a, b) = base.domain();
                let fraction = match profile {
                    TwistProfile::Uniform => (t - a) / (b - a),
                    TwistProfile::Window { center, width } => {
                        smoothstep((t - (center - width / 2.0)) / width)
                    }
                };
                let angle = std::f64::consts::TAU * (*turns as f64) * fraction;
                let axis = base.tangent(t).normalize();
                rodrigues(n0, axis, angle)
            }
            NormalField::Custom(f) => f(t),
        }
    }

    fn validate_windows(&self, domain: (f64, f64)) -> Result<()> {
        if let NormalField::Twisted { inner, profile, .. } = self {
            if let TwistProfile::Window { center, width } = profile {
                if !(*width > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "twist window width must be positive, got {width}"
                    )));
                }
                let (lo, hi) = (center - width / 2.0, center + width / 2.0);
                if lo < domain.0 || hi > domain.1 {
                    return Err(Error::InvalidArgument(format!(
                        "twist window [{lo}, {hi}] exceeds the domain [{}, {}]",
                        domain.0, domain.1
                    )));
                }
            }
            inner.validate_windows(domain)?;
        }
        Ok(())
    }
}

/// A base curve, a closed unit normal field along it, and the push-off
/// distance. The ribbon's two edges are the base and the push-off.
#[derive(Debug, Clone)]
pub struct FramedCurve {
    base: ParametricCurve,
    normal: NormalField,
    offset: f64,
}

impl FramedCurve {
    /// Builds and validates a ribbon: unit normals, a field that closes up
    /// (whole turns only), nowhere parallel to the tangent, and a push-off
    /// disjoint from the base.
    pub fn new(base: ParametricCurve, normal: NormalField, offset: f64) -> Result<Self> {
        if !(offset > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "offset must be positive, got {offset}"
            )));
        }
        normal.validate_windows(base.domain())?;
        let ribbon = Self {
            base,
            normal,
            offset,
        };
        ribbon.validate_field()?;
        Ok(ribbon)
    }

    /// Field probe validation at 257 parameters including both endpoints.
    fn validate_field(&self) -> Result<()> {
        let (a, b) = self.base.domain();
        const PROBES: usize = 256;
        for k in 0..=PROBES {
            let t = a + (b - a) * k as f64 / PROBES as f64;
            let n = self.normal.eval(&self.base, t);
            if (n.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "normal field is not unit length at t = {t} (|n| = {})",
                    n.norm()
                )));
            }
            let tangent = self.base.tangent(t).normalize();
            if n.dot(&tangent).abs() > 1.0 - 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "normal field is parallel to the tangent at t = {t}"
                )));
            }
        }
        let gap = (self.normal.eval(&self.base, b) - self.normal.eval(&self.base, a)).norm();
        if gap > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "normal field does not close up: endpoint gap {gap:.3e} (only whole twists close)"
            )));
        }
        let base_poly = self.base_polygon(DEFAULT_RIBBON_SAMPLES)?;
        let push_poly = self.push_off_polygon(DEFAULT_RIBBON_SAMPLES)?;
        let sep = min_separation(
            &Curve::Polygonal(base_poly),
            &Curve::Polygonal(push_poly),
        );
        if sep < crate::quadrature::SEPARATION_FLOOR {
            return Err(Error::InvalidArgument(format!(
                "degenerate ribbon: push-off touches the base (separation {sep:.3e})"
            )));
        }
        Ok(())
    }

    /// Ribbon from a user-supplied normal function.
    pub fn with_normal_fn<F>(base: ParametricCurve, normal: F, offset: f64) -> Result<Self>
    where
        F: Fn(f64) -> Vec3 + Send + Sync + 'static,
    {
        Self::new(base, NormalField::Custom(Arc::new(normal)), offset)
    }

    pub fn base(&self) -> &ParametricCurve {
        &self.base
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn normal_at(&self, t: f64) -> Vec3 {
        self.normal.eval(&self.base, t)
    }

    pub fn push_off_point(&self, t: f64) -> Vec3 {
        self.base.position(t) + self.offset * self.normal_at(t)
    }

    pub fn base_polygon(&self, samples: usize) -> Result<PolygonalCurve> {
        self.base.sample(samples)
    }

    /// Push-off sampled at the same parameters as [`base_polygon`].
    pub fn push_off_polygon(&self, samples: usize) -> Result<PolygonalCurve> {
        if samples < 3 {
            return Err(Error::InvalidArgument(format!(
                "polygonization needs at least 3 samples, got {samples}"
            )));
        }
        let (a, b) = self.base.domain();
        PolygonalCurve::new(
            (0..samples)
                .map(|k| self.push_off_point(a + (b - a) * k as f64 / samples as f64))
                .collect(),
        )
    }

    /// Adds `n` whole twists spread uniformly over the domain. Negative `n`
    /// twists the other way; framing changes by exactly `n`.
    pub fn add_twists(&self, n: i64) -> FramedCurve {
        if n == 0 {
            return self.clone();
        }
        FramedCurve {
            base: self.base.clone(),
            normal: NormalField::Twisted {
                inner: Box::new(self.normal.clone()),
                turns: n,
                profile: TwistProfile::Uniform,
            },
            offset: self.offset,
        }
    }

    /// Adds `n` whole twists concentrated in a smoothstep window inside the
    /// domain; the framing change is the same as for uniform placement.
    pub fn add_twists_windowed(&self, n: i64, center: f64, width: f64) -> Result<FramedCurve> {
        let field = NormalField::Twisted {
            inner: Box::new(self.normal.clone()),
            turns: n,
            profile: TwistProfile::Window { center, width },
        };
        field.validate_windows(self.base.domain())?;
        Ok(FramedCurve {
            base: self.base.clone(),
            normal: field,
            offset: self.offset,
        })
    }

    /// Linking number of the base with its push-off.
    ///
    /// Constant fields translate the base analytically and use quadrature;
    /// twisted and custom fields polygonize both edges at
    /// [`DEFAULT_RIBBON_SAMPLES`] vertices and use the exact method.
    pub fn framing_number(&self, cfg: &QuadratureConfig) -> Result<LinkEstimate> {
        let estimate = match &self.normal {
            NormalField::Constant(n) => {
                let pushed = self
                    .base
                    .transformed(&Rotation3::identity(), self.offset * n);
                let pair = CurvePair::new(
                    Curve::Parametric(self.base.clone()),
                    Curve::Parametric(pushed),
                );
                link_numeric(&pair, cfg)?
            }
            _ => {
                let base = self.base_polygon(DEFAULT_RIBBON_SAMPLES)?;
                let push = self.push_off_polygon(DEFAULT_RIBBON_SAMPLES)?;
                crate::exact::link_exact(&base, &push)?
            }
        };
        if !estimate.confident {
            return Err(Error::Convergence {
                message: "framing number estimate is not confident".into(),
                best: estimate,
            });
        }
        Ok(estimate)
    }

    /// Framing with `n` twists concentrated in a window, checked against the
    /// uniform placement; both give the same integer.
    pub fn twist_placement_invariance(
        &self,
        n: i64,
        center: f64,
        width: f64,
        cfg: &QuadratureConfig,
    ) -> Result<LinkEstimate> {
        let windowed = self.add_twists_windowed(n, center, width)?.framing_number(cfg)?;
        let uniform = self.add_twists(n).framing_number(cfg)?;
        if windowed.rounded != uniform.rounded {
            return Err(Error::Convergence {
                message: format!(
                    "twist placement changed the framing integer: window {} vs uniform {}",
                    windowed.rounded, uniform.rounded
                ),
                best: windowed,
            });
        }
        Ok(windowed)
    }
}

/// Constant-field framing for a planar base curve: the field is the plane's
/// unit normal, oriented right-handed with respect to the traversal.
pub fn blackboard_framing(base: &ParametricCurve, offset: f64) -> Result<FramedCurve> {
    let normal = plane_normal(base)?;
    FramedCurve::new(base.clone(), NormalField::Constant(normal), offset)
}

/// Default push-off distance: a tenth of the bounding-box diameter.
pub fn default_offset(base: &ParametricCurve) -> f64 {
    let (a, b) = base.domain();
    let points: Vec<Vec3> = (0..128)
        .map(|k| base.position(a + (b - a) * k as f64 / 128.0))
        .collect();
    0.1 * crate::curve::bbox_diameter(&points)
}

fn plane_normal(base: &ParametricCurve) -> Result<Vec3> {
    let (a, b) = base.domain();
    let span = b - a;
    let p0 = base.position(a);
    // pick two more probes giving a well-conditioned normal
    let mut normal = None;
    for (f1, f2) in [(1.0 / 3.0, 2.0 / 3.0), (0.2, 0.45), (0.55, 0.85)] {
        let p1 = base.position(a + span * f1);
        let p2 = base.position(a + span * f2);
        let n = (p1 - p0).cross(&(p2 - p0));
        let scale = (p1 - p0).norm() * (p2 - p0).norm();
        if scale > 0.0 && n.norm() > 1e-6 * scale {
            normal = Some(n.normalize());
            break;
        }
    }
    let normal = normal.ok_or_else(|| {
        Error::InvalidArgument("could not determine a plane: probe points are collinear".into())
    })?;
    for k in 0..=256 {
        let t = a + span * k as f64 / 256.0;
        let dev = (base.position(t) - p0).dot(&normal).abs();
        if dev > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "base curve is not planar: deviation {dev:.3e} at t = {t}"
            )));
        }
    }
    Ok(normal)
}
