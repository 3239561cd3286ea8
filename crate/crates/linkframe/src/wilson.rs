//! Wilson-loop expectation value of an abelian Chern-Simons theory at
//! level k for a framed loop: the unit phase exp(2 pi i lk / k).

use crate::curve::CurvePair;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use serde::{Deserialize, Serialize};

/// Unit-modulus phase attached to a framed loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonValue {
    pub re: f64,
    pub im: f64,
    pub level_k: i64,
    pub lk: i64,
}

/// exp(2 pi i lk / k) as a (cos, sin) pair.
///
/// The integer phase fraction is reduced exactly before any trigonometry,
/// so the value is periodic in lk modulo k with no precision loss, and
/// half-period phases come out as exactly (-1, 0).
pub fn wilson_expectation(lk: i64, k: i64) -> Result<WilsonValue> {
    if k == 0 {
        return Err(Error::InvalidArgument("level zero undefined".into()));
    }
    let modulus = k.abs();
    // reduce to the signed representative in (-modulus/2, modulus/2]
    let mut m = lk.rem_euclid(modulus);
    if 2 * m > modulus {
        m -= modulus;
    }
    let (re, im) = if m == 0 {
        (1.0, 0.0)
    } else if 2 * m == modulus {
        (-1.0, 0.0)
    } else {
        let angle = std::f64::consts::TAU * (m as f64) / (k as f64);
        (angle.cos(), angle.sin())
    };
    Ok(WilsonValue {
        re,
        im,
        level_k: k,
        lk,
    })
}

/// Composes the best available linking computation with
/// [`wilson_expectation`] on the rounded integer.
pub fn wilson_from_curves(pair: &CurvePair, k: i64, cfg: &QuadratureConfig) -> Result<WilsonValue> {
    let estimate = match (pair.first.as_exact_polygon(), pair.second.as_exact_polygon()) {
        (Some(a), Some(b)) => crate::exact::link_exact(&a, &b)?,
        _ => crate::quadrature::link_numeric(pair, cfg)?,
    };
    if !estimate.confident {
        return Err(Error::Convergence {
            message: "linking estimate is not confident enough for a Wilson phase".into(),
            best: estimate,
        });
    }
    wilson_expectation(estimate.rounded, k)
}
