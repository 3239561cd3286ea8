//! Numerical evaluation of the Gauss linking double integral
//!
//!   lk(A, B) = (1/4pi) oint_A oint_B (dx x dy) . (x - y) / |x - y|^3
//!
//! by tensor-product Gauss-Legendre panels with refinement by panel
//! doubling. The integrand is smooth for disjoint closed curves, so panel
//! doubling provides a cheap a-posteriori error signal.

use crate::curve::{CurvePair, ParametricCurve, Vec3};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Hard floor on curve separation before a computation is refused.
pub const SEPARATION_FLOOR: f64 = 1e-12;

/// Controls for the panel quadrature.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct QuadratureConfig {
    /// Initial panel count per smooth piece (scaled up for pieces whose
    /// parameter interval exceeds 2pi, so panel density tracks domain length).
    pub panels_per_piece: usize,
    /// Gauss-Legendre order per panel.
    pub nodes_per_panel: usize,
    /// Refinement stops once the successive-difference bound drops below this.
    pub target_abs_error: f64,
    /// Maximum number of panel doublings after the initial level.
    pub max_refinements: usize,
    /// Budget on integrand evaluations (node pairs) per refinement level.
    pub max_node_pairs: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels_per_piece: 8,
            nodes_per_panel: 8,
            target_abs_error: 1e-6,
            max_refinements: 6,
            max_node_pairs: 10_000_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels_per_piece == 0 {
            return Err(Error::InvalidArgument("panels_per_piece must be positive".into()));
        }
        if self.nodes_per_panel < 2 {
            return Err(Error::InvalidArgument(format!(
                "nodes_per_panel must be at least 2, got {}",
                self.nodes_per_panel
            )));
        }
        if !(self.target_abs_error > 0.0 && self.target_abs_error < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "target_abs_error must lie in (0, 0.5) so integer rounding is meaningful, got {}",
                self.target_abs_error
            )));
        }
        if self.max_refinements == 0 {
            return Err(Error::InvalidArgument("max_refinements must be positive".into()));
        }
        Ok(())
    }
}

/// Which computation produced a linking estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkMethod {
    Quadrature,
    ExactPolygonal,
    CrossingOracle,
}

/// A real-valued linking estimate with an error bound and the rounded
/// integer it certifies.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinkEstimate {
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: LinkMethod,
    pub rounded: i64,
    pub confident: bool,
}

impl LinkEstimate {
    /// Rounds to the nearest integer; confident when value and bound together
    /// pin that integer (|value - rounded| + bound < 1/2).
    pub fn from_value(value: f64, abs_error_bound: f64, method: LinkMethod) -> Self {
        let rounded = value.round() as i64;
        let confident = (value - rounded as f64).abs() + abs_error_bound < 0.5;
        Self {
            value,
            abs_error_bound,
            method,
            rounded,
            confident,
        }
    }
}

/// The raw Gauss kernel (dx x dy) . (x - y) / |x - y|^3.
///
/// Sign convention: integrating this kernel over a pair of curves that wind
/// around each other once (first through second, right-handed) gives +4pi.
pub fn linking_integrand(x: Vec3, dx: Vec3, y: Vec3, dy: Vec3) -> Result<f64> {
    let w = x - y;
    let r2 = w.norm_squared();
    if r2 == 0.0 {
        return Err(Error::Singularity(
            "linking integrand evaluated at coincident points".into(),
        ));
    }
    Ok(kernel(x, dx, y, dy))
}

#[inline]
pub(crate) fn kernel(x: Vec3, dx: Vec3, y: Vec3, dy: Vec3) -> f64 {
    let w = x - y;
    let r2 = w.norm_squared();
    dx.cross(&dy).dot(&w) / (r2 * r2.sqrt())
}

/// Integrand of the full linking integral, 1/(4pi) included, at parameters
/// (t, s) of the pair's two curves.
pub fn pair_integrand(pair: &CurvePair, t: f64, s: f64) -> Result<f64> {
    let a = pair.first.to_parametric();
    let b = pair.second.to_parametric();
    let v = linking_integrand(a.position(t), a.tangent(t), b.position(s), b.tangent(s))?;
    Ok(v / (4.0 * std::f64::consts::PI))
}

/// One refinement level of the panel quadrature.
#[derive(Debug, Clone, Copy)]
pub struct RefineStep {
    pub level: usize,
    pub value: f64,
    pub node_pairs: usize,
    /// Successive-difference bound, absent at the initial level.
    pub error_bound: Option<f64>,
}

/// Estimate plus its refinement history.
#[derive(Debug, Clone)]
pub struct QuadratureRun {
    pub estimate: LinkEstimate,
    pub steps: Vec<RefineStep>,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence; plenty accurate for the orders used here.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = vec![(0.0f64, 0.0f64); n];
    let half = n.div_ceil(2);
    for k in 0..half {
        let mut z = if n % 2 == 1 && k == half - 1 {
            0.0
        } else {
            (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos()
        };
        let mut dp = 0.0;
        for _ in 0..64 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() <= 1e-15 {
                let (p2, d2) = legendre_with_derivative(n, z);
                dp = d2;
                z -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule[n - 1 - k] = (z, w);
        rule[k] = (-z, w);
    }
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 1..n {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

struct CurveNodes {
    pos: Vec<Vec3>,
    /// Tangent scaled by the quadrature weight.
    wtan: Vec<Vec3>,
}

fn curve_nodes(curve: &ParametricCurve, cfg: &QuadratureConfig, level: usize) -> CurveNodes {
    let rule = gauss_legendre(cfg.nodes_per_panel);
    let mut pos = Vec::new();
    let mut wtan = Vec::new();
    for piece in curve.pieces() {
        let (a, b) = piece.interval();
        let len = b - a;
        // panel density proportional to interval length, in units of 2pi
        let scale = ((len / TAU).ceil() as usize).max(1);
        let panels = cfg.panels_per_piece * scale * (1 << level);
        let width = len / panels as f64;
        for p in 0..panels {
            let lo = a + width * p as f64;
            let mid = lo + 0.5 * width;
            for &(node, weight) in &rule {
                let t = mid + 0.5 * width * node;
                pos.push(piece.position(t));
                wtan.push(piece.tangent(t) * (weight * 0.5 * width));
            }
        }
    }
    CurveNodes { pos, wtan }
}

/// Double sum over all node pairs; rows are evaluated in parallel but
/// combined in index order with compensated summation, so the result does
/// not depend on thread scheduling.
fn level_value(a: &CurveNodes, b: &CurveNodes) -> f64 {
    let row_sums: Vec<f64> = (0..a.pos.len())
        .into_par_iter()
        .map(|i| {
            let x = a.pos[i];
            let dx = a.wtan[i];
            let mut acc = 0.0;
            for j in 0..b.pos.len() {
                acc += kernel(x, dx, b.pos[j], b.wtan[j]);
            }
            acc
        })
        .collect();
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in row_sums {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum / (4.0 * std::f64::consts::PI)
}

fn node_pairs_at(curve_a: &ParametricCurve, curve_b: &ParametricCurve, cfg: &QuadratureConfig, level: usize) -> usize {
    let count = |c: &ParametricCurve| -> usize {
        c.pieces()
            .iter()
            .map(|p| {
                let (a, b) = p.interval();
                let scale = (((b - a) / TAU).ceil() as usize).max(1);
                cfg.panels_per_piece * scale * (1 << level) * cfg.nodes_per_panel
            })
            .sum()
    };
    count(curve_a).saturating_mul(count(curve_b))
}

/// Runs the refinement loop and returns the estimate with its history.
pub fn link_numeric_trace(pair: &CurvePair, cfg: &QuadratureConfig) -> Result<QuadratureRun> {
    cfg.validate()?;
    let sep = pair.min_separation();
    if sep < SEPARATION_FLOOR {
        return Err(Error::Singularity(format!(
            "curves touch: minimum separation {sep:.3e} is below {SEPARATION_FLOOR:.0e}"
        )));
    }
    let ca = pair.first.to_parametric();
    let cb = pair.second.to_parametric();

    let mut steps: Vec<RefineStep> = Vec::new();
    let mut previous: Option<f64> = None;
    for level in 0..=cfg.max_refinements {
        let pairs = node_pairs_at(&ca, &cb, cfg, level);
        if pairs > cfg.max_node_pairs {
            return match steps.last() {
                Some(last) => {
                    let bound = last.error_bound.unwrap_or(f64::INFINITY);
                    Err(Error::Convergence {
                        message: format!(
                            "node budget exhausted at level {level} ({pairs} node pairs > {})",
                            cfg.max_node_pairs
                        ),
                        best: LinkEstimate::from_value(last.value, bound, LinkMethod::Quadrature),
                    })
                }
                None => Err(Error::InvalidArgument(format!(
                    "initial subdivision needs {pairs} node pairs, above the budget {}",
                    cfg.max_node_pairs
                ))),
            };
        }
        let na = curve_nodes(&ca, cfg, level);
        let nb = curve_nodes(&cb, cfg, level);
        let value = level_value(&na, &nb);
        // the successive-difference signal saturates at summation round-off;
        // never claim a bound below that floor
        let error_bound = previous.map(|prev| (2.0 * (value - prev).abs()).max(1e-15));
        steps.push(RefineStep {
            level,
            value,
            node_pairs: pairs,
            error_bound,
        });
        if let Some(bound) = error_bound {
            if bound <= cfg.target_abs_error {
                return Ok(QuadratureRun {
                    estimate: LinkEstimate::from_value(value, bound, LinkMethod::Quadrature),
                    steps,
                });
            }
        }
        previous = Some(value);
    }
    let last = steps.last().unwrap();
    Err(Error::Convergence {
        message: format!(
            "target error {} not reached after {} refinements (last bound {:?})",
            cfg.target_abs_error, cfg.max_refinements, last.error_bound
        ),
        best: LinkEstimate::from_value(
            last.value,
            last.error_bound.unwrap_or(f64::INFINITY),
            LinkMethod::Quadrature,
        ),
    })
}

/// Gauss-integral linking number of a disjoint pair of closed curves.
pub fn link_numeric(pair: &CurvePair, cfg: &QuadratureConfig) -> Result<LinkEstimate> {
    link_numeric_trace(pair, cfg).map(|run| run.estimate)
}

/// One estimate per epsilon for the threaded-circle pair; the linking number
/// does not depend on the parametrization, so all rounded values agree.
pub fn epsilon_sweep(eps_list: &[f64], cfg: &QuadratureConfig) -> Result<Vec<LinkEstimate>> {
    eps_list
        .iter()
        .map(|&epsilon| {
            let pair = crate::curve::example_pair(crate::curve::ExampleId::FramingOne { epsilon })?;
            link_numeric(&pair, cfg)
        })
        .collect()
}
