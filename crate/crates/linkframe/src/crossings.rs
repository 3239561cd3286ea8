//! Combinatorial linking number: project both polygons along a generic
//! direction, find every crossing between the two projected loops, and sum
//! crossing signs. Half that sum is the linking number.
//!
//! Crossing sign convention: with a right-handed frame (e1, e2, d) and the
//! viewer on the +d side, a crossing counts the sign of the 2D cross
//! product of the projected tangents, over strand first. This matches the
//! sign of the Gauss-integral methods.

use crate::curve::{bbox_diameter, PolygonalCurve, Vec3};
use crate::error::{Error, Result};
use crate::quadrature::{LinkEstimate, LinkMethod};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the deterministic retry directions.
const RETRY_SEED: u64 = 0x4C49_4E4B;
/// Retry budget for degenerate projections.
const MAX_ATTEMPTS: usize = 32;
/// Genericity tolerance, scaled by the projected bounding-box diameter.
const GENERICITY_TOL: f64 = 1e-9;

/// One transversal crossing between the projections of the two polygons.
#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    /// True when the over strand belongs to the first polygon.
    pub over_first: bool,
    /// Segment index of the over strand in its polygon.
    pub over_segment: usize,
    /// Segment index of the under strand in the other polygon.
    pub under_segment: usize,
    pub sign: i8,
    pub projected_point: [f64; 2],
}

#[derive(Clone, Copy)]
struct Projected {
    xy: [f64; 2],
    depth: f64,
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn point_segment_distance2(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = sub2(b, a);
    let ap = sub2(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let closest = [a[0] + t * ab[0], a[1] + t * ab[1]];
    let d = sub2(p, closest);
    (d[0] * d[0] + d[1] * d[1]).sqrt()
}

fn project(poly: &PolygonalCurve, e1: Vec3, e2: Vec3, dir: Vec3) -> Vec<Projected> {
    poly.vertices()
        .iter()
        .map(|v| Projected {
            xy: [v.dot(&e1), v.dot(&e2)],
            depth: v.dot(&dir),
        })
        .collect()
}

/// All transversal crossings between the projections of `p` and `q` along
/// `direction`. Fails with a degeneracy error naming the offending feature
/// pair when the projection is not generic.
pub fn signed_crossings(
    p: &PolygonalCurve,
    q: &PolygonalCurve,
    direction: Vec3,
) -> Result<Vec<Crossing>> {
    if direction.norm_squared() == 0.0 {
        return Err(Error::InvalidArgument("projection direction must be nonzero".into()));
    }
    let dir = direction.normalize();
    let (e1, e2) = crate::curve::plane_frame(dir);

    let pp = project(p, e1, e2, dir);
    let pq = project(q, e1, e2, dir);
    let all_xy: Vec<Vec3> = pp
        .iter()
        .chain(pq.iter())
        .map(|v| Vec3::new(v.xy[0], v.xy[1], 0.0))
        .collect();
    let scale = bbox_diameter(&all_xy).max(f64::MIN_POSITIVE);
    let tol = GENERICITY_TOL * scale;

    let np = pp.len();
    let nq = pq.len();

    // genericity: no projected vertex of one polygon on a segment of the other
    for (vi, v) in pp.iter().enumerate() {
        for j in 0..nq {
            let (a, b) = (pq[j], pq[(j + 1) % nq]);
            if point_segment_distance2(v.xy, a.xy, b.xy) < tol {
                return Err(Error::Degenerate(format!(
                    "projected vertex {vi} of the first polygon lies on segment {j} of the second"
                )));
            }
        }
    }
    for (vj, v) in pq.iter().enumerate() {
        for i in 0..np {
            let (a, b) = (pp[i], pp[(i + 1) % np]);
            if point_segment_distance2(v.xy, a.xy, b.xy) < tol {
                return Err(Error::Degenerate(format!(
                    "projected vertex {vj} of the second polygon lies on segment {i} of the first"
                )));
            }
        }
    }

    let mut crossings = Vec::new();
    for i in 0..np {
        let (a1, a2) = (pp[i], pp[(i + 1) % np]);
        let r = sub2(a2.xy, a1.xy);
        let rlen = (r[0] * r[0] + r[1] * r[1]).sqrt();
        // an edge seen end-on collapses to a point; its potential contacts
        // are already covered by the vertex-on-segment pass
        if rlen == 0.0 {
            continue;
        }
        for j in 0..nq {
            let (b1, b2) = (pq[j], pq[(j + 1) % nq]);
            let s = sub2(b2.xy, b1.xy);
            let slen = (s[0] * s[0] + s[1] * s[1]).sqrt();
            if slen == 0.0 {
                continue;
            }
            let denom = cross2(r, s);
            if denom.abs() < 1e-9 * rlen * slen {
                // parallel: overlapping lines are degenerate, separated ones harmless
                let line_dist = cross2(sub2(b1.xy, a1.xy), [r[0] / rlen, r[1] / rlen]).abs();
                if line_dist < tol
                    && point_segment_distance2(b1.xy, a1.xy, a2.xy) < tol + slen
                    && point_segment_distance2(a1.xy, b1.xy, b2.xy) < tol + rlen
                {
                    return Err(Error::Degenerate(format!(
                        "projected segments {i} (first) and {j} (second) are parallel and overlap"
                    )));
                }
                continue;
            }
            let qa = sub2(b1.xy, a1.xy);
            let t = cross2(qa, s) / denom;
            let u = cross2(qa, r) / denom;
            if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&u) {
                continue;
            }
            let depth_p = a1.depth + t * (a2.depth - a1.depth);
            let depth_q = b1.depth + u * (b2.depth - b1.depth);
            if (depth_p - depth_q).abs() < tol {
                return Err(Error::Degenerate(format!(
                    "segments {i} (first) and {j} (second) cross at equal depth"
                )));
            }
            let point = [a1.xy[0] + t * r[0], a1.xy[1] + t * r[1]];
            let first_over = depth_p > depth_q;
            let signed_area = if first_over {
                cross2(r, s)
            } else {
                cross2(s, r)
            };
            let (over_segment, under_segment) = if first_over { (i, j) } else { (j, i) };
            crossings.push(Crossing {
                over_first: first_over,
                over_segment,
                under_segment,
                sign: if signed_area > 0.0 { 1 } else { -1 },
                projected_point: point,
            });
        }
    }
    Ok(crossings)
}

/// Linking number as half the signed crossing sum, retrying with seeded
/// pseudo-random directions when a projection is degenerate.
pub fn link_by_crossings(p: &PolygonalCurve, q: &PolygonalCurve) -> Result<LinkEstimate> {
    let sep = crate::curve::min_separation(
        &crate::curve::Curve::Polygonal(p.clone()),
        &crate::curve::Curve::Polygonal(q.clone()),
    );
    if sep < crate::quadrature::SEPARATION_FLOOR {
        return Err(Error::Singularity(format!(
            "polygons touch: minimum separation {sep:.3e}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RETRY_SEED);
    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        let direction = random_unit(&mut rng);
        match signed_crossings(p, q, direction) {
            Ok(crossings) => {
                let sum: i64 = crossings.iter().map(|c| c.sign as i64).sum();
                if sum.rem_euclid(2) != 0 {
                    // a tangency slipped past the tolerance; try another direction
                    last_err = Some(Error::Degenerate(format!(
                        "odd signed crossing sum {sum} along {direction:?}"
                    )));
                    continue;
                }
                let value = sum as f64 / 2.0;
                return Ok(LinkEstimate {
                    value,
                    abs_error_bound: 0.0,
                    method: LinkMethod::CrossingOracle,
                    rounded: sum / 2,
                    confident: true,
                });
            }
            Err(e @ Error::Degenerate(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::Degenerate("no generic projection found".into())
    }))
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}
