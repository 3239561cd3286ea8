//! Exact linking number of two disjoint polygons.
//!
//! Each ordered segment pair contributes the Gauss kernel integrated over
//! the two segments. That integral equals (up to sign) the solid angle of
//! the spherical quadrilateral spanned by the four normalized endpoint
//! differences, and the solid angle has a branch-safe closed form using
//! two-argument arctangents only. Summing all pairs and dividing by 4pi
//! gives the linking number exactly, up to floating-point rounding.

use crate::curve::{segment_distance, PolygonalCurve, Vec3};
use crate::error::{Error, Result};
use crate::quadrature::{LinkEstimate, LinkMethod};

/// Separation below which a segment pair is refused outright.
pub const SINGULAR_SEPARATION: f64 = 1e-12;
/// Separation below which a pair is computed but flagged as near-singular.
pub const NEAR_SINGULAR_SEPARATION: f64 = 1e-6;
/// Error bound reported when any pair was near-singular.
pub const NEAR_SINGULAR_BOUND: f64 = 1e-4;

/// Signed contribution of one segment pair to 4pi times the linking number.
#[derive(Debug, Clone, Copy)]
pub struct SegmentPairContribution {
    /// Signed solid angle, in (-4pi, 4pi).
    pub value: f64,
    /// Indices (i, j) of the segments in the two polygons.
    pub pair: (usize, usize),
}

/// Signed solid angle of the spherical triangle with unit vertices a, b, c.
///
/// Two-argument arctangent form: branch-safe for any triangle contained in
/// an open hemisphere, which holds for all triangles arising here.
fn triangle_solid_angle(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let num = a.dot(&b.cross(&c));
    let den = 1.0 + a.dot(&b) + b.dot(&c) + c.dot(&a);
    2.0 * num.atan2(den)
}

/// Gauss kernel integrated over the segments [p1,p2] x [q1,q2].
///
/// The result is the signed solid angle swept by the normalized difference
/// vector, so its magnitude is below 2pi for any disjoint pair.
pub fn segment_pair_link(p1: Vec3, p2: Vec3, q1: Vec3, q2: Vec3) -> Result<f64> {
    if (p2 - p1).norm_squared() == 0.0 || (q2 - q1).norm_squared() == 0.0 {
        return Err(Error::InvalidArgument("zero-length segment".into()));
    }
    let dist = segment_distance(p1, p2, q1, q2);
    if dist < SINGULAR_SEPARATION {
        return Err(Error::Singularity(format!(
            "segments intersect or pass within {SINGULAR_SEPARATION:.0e} (distance {dist:.3e})"
        )));
    }
    let v1 = (p1 - q1).normalize();
    let v2 = (p2 - q1).normalize();
    let v3 = (p2 - q2).normalize();
    let v4 = (p1 - q2).normalize();
    // Gauss map orientation: the image quadrilateral's signed area is the
    // negative of the kernel integral.
    let omega = triangle_solid_angle(v1, v2, v3) + triangle_solid_angle(v1, v3, v4);
    Ok(-omega)
}

fn contributions(
    p: &PolygonalCurve,
    q: &PolygonalCurve,
) -> Result<(Vec<SegmentPairContribution>, bool)> {
    let mut out = Vec::with_capacity(p.segment_count() * q.segment_count());
    let mut near_singular = false;
    for i in 0..p.segment_count() {
        let (p1, p2) = p.segment(i);
        for j in 0..q.segment_count() {
            let (q1, q2) = q.segment(j);
            let dist = segment_distance(p1, p2, q1, q2);
            if dist < SINGULAR_SEPARATION {
                return Err(Error::Singularity(format!(
                    "polygons touch at segment pair ({i}, {j}): distance {dist:.3e}"
                )));
            }
            near_singular |= dist < NEAR_SINGULAR_SEPARATION;
            let value = segment_pair_link(p1, p2, q1, q2)?;
            debug_assert!(value.abs() < 4.0 * std::f64::consts::PI);
            out.push(SegmentPairContribution {
                value,
                pair: (i, j),
            });
        }
    }
    Ok((out, near_singular))
}

/// Linking number of two disjoint polygons, exact up to rounding.
pub fn link_exact(p: &PolygonalCurve, q: &PolygonalCurve) -> Result<LinkEstimate> {
    let (contribs, near_singular) = contributions(p, q)?;
    // fixed row-major order with compensated summation
    let mut sum = 0.0;
    let mut comp = 0.0;
    for c in &contribs {
        let y = c.value - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let value = sum / (4.0 * std::f64::consts::PI);
    let abs_error_bound = if near_singular {
        NEAR_SINGULAR_BOUND
    } else {
        contribs.len() as f64 * 1e-12
    };
    let rounded = value.round() as i64;
    Ok(LinkEstimate {
        value,
        abs_error_bound,
        method: LinkMethod::ExactPolygonal,
        rounded,
        confident: (value - rounded as f64).abs() < 1e-6,
    })
}

/// Contributions sharing a value within the tolerance, in ascending order.
#[derive(Debug, Clone)]
pub struct ContributionClass {
    /// Representative value (the first member's).
    pub value: f64,
    pub members: Vec<(usize, usize)>,
}

/// Segment-pair contributions grouped into equal-value classes.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub classes: Vec<ContributionClass>,
    /// Sum of all contributions (4pi times the linking number).
    pub total: f64,
}

impl SymmetryReport {
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.members.len()).collect()
    }
}

/// Groups the segment-pair contributions by value (tolerance 1e-9).
/// Symmetric polygon pairs collapse to a few classes; generic pairs may
/// produce one class per pair.
pub fn symmetry_report(p: &PolygonalCurve, q: &PolygonalCurve) -> Result<SymmetryReport> {
    let (mut contribs, _) = contributions(p, q)?;
    let total = contribs.iter().map(|c| c.value).sum();
    contribs.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    let mut classes: Vec<ContributionClass> = Vec::new();
    for c in contribs {
        match classes.last_mut() {
            Some(class) if (c.value - class.value).abs() <= 1e-9 => {
                class.members.push(c.pair);
            }
            _ => classes.push(ContributionClass {
                value: c.value,
                members: vec![c.pair],
            }),
        }
    }
    Ok(SymmetryReport { classes, total })
}
