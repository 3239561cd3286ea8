//! File formats: JSON schemas for curves, curve pairs, and framed curves,
//! polyline export as CSV and OBJ, and the machine-readable run report.
//!
//! All numeric output uses the shortest representation that parses back to
//! the same value, so reports and geometry files round-trip losslessly.

use crate::curve::{circle, example_pair, Curve, CurvePair, ExampleId, ParametricCurve, Piece,
                   PolygonalCurve, Vec3};
use crate::error::{Error, Result};
use crate::framing::{blackboard_framing, default_offset, FramedCurve};
use crate::wilson::WilsonValue;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// JSON description of a single closed curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CurveSpec {
    Circle {
        center: [f64; 3],
        radius: f64,
        normal: [f64; 3],
        #[serde(default)]
        phase: f64,
    },
    Polygon {
        vertices: Vec<[f64; 3]>,
    },
    /// One of the built-in example pairs; in curve position this denotes the
    /// pair's first curve.
    #[serde(rename = "paper_example")]
    Example {
        id: ExampleName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
    },
    Piecewise {
        pieces: Vec<PieceSpec>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceSpec {
    Line {
        from: [f64; 3],
        to: [f64; 3],
        t: [f64; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleName {
    FramingZero,
    FramingOne,
    FramingNegTwo,
}

impl ExampleName {
    /// Resolves the name plus an optional epsilon (default 1) to an id.
    pub fn to_id(self, epsilon: Option<f64>) -> ExampleId {
        match self {
            ExampleName::FramingZero => ExampleId::FramingZero,
            ExampleName::FramingOne => ExampleId::FramingOne {
                epsilon: epsilon.unwrap_or(1.0),
            },
            ExampleName::FramingNegTwo => ExampleId::FramingNegTwo,
        }
    }
}

impl std::str::FromStr for ExampleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "framing_zero" => Ok(ExampleName::FramingZero),
            "framing_one" => Ok(ExampleName::FramingOne),
            "framing_neg_two" => Ok(ExampleName::FramingNegTwo),
            other => Err(Error::InvalidArgument(format!(
                "unknown example '{other}' (expected framing_zero, framing_one, or framing_neg_two)"
            ))),
        }
    }
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

impl CurveSpec {
    pub fn build(&self) -> Result<Curve> {
        match self {
            CurveSpec::Circle {
                center,
                radius,
                normal,
                phase,
            } => Ok(Curve::Parametric(circle(
                vec3(*center),
                *radius,
                vec3(*normal),
                *phase,
            )?)),
            CurveSpec::Polygon { vertices } => Ok(Curve::Polygonal(PolygonalCurve::new(
                vertices.iter().copied().map(vec3).collect(),
            )?)),
            CurveSpec::Example { id, epsilon } => {
                Ok(example_pair(id.to_id(*epsilon))?.first)
            }
            CurveSpec::Piecewise { pieces } => {
                let built = pieces
                    .iter()
                    .map(|p| match p {
                        PieceSpec::Line { from, to, t } => {
                            let (a, b) = (t[0], t[1]);
                            if !(b > a) {
                                return Err(Error::InvalidArgument(format!(
                                    "piece interval [{a}, {b}] is empty or reversed"
                                )));
                            }
                            Ok(Piece::Line {
                                start: vec3(*from),
                                velocity: (vec3(*to) - vec3(*from)) / (b - a),
                                interval: (a, b),
                            })
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Curve::Parametric(ParametricCurve::new(built)?))
            }
        }
    }
}

/// JSON description of a pair of curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairSpec {
    pub first: CurveSpec,
    pub second: CurveSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl PairSpec {
    pub fn build(&self) -> Result<CurvePair> {
        let mut pair = CurvePair::new(self.first.build()?, self.second.build()?);
        pair.label = self.label.clone();
        Ok(pair)
    }
}

/// JSON description of a framed curve (ribbon).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FramedSpec {
    pub base: CurveSpec,
    pub framing: FramingSpec,
    /// Push-off distance; defaults to a tenth of the base bounding box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FramingSpec {
    Blackboard,
    Twists {
        n: i64,
        #[serde(default)]
        profile: ProfileName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    #[default]
    Uniform,
    Window,
}

impl FramedSpec {
    pub fn build(&self) -> Result<FramedCurve> {
        let base = match self.base.build()? {
            Curve::Parametric(c) => c,
            Curve::Polygonal(p) => ParametricCurve::from_polygon(&p),
        };
        let offset = self.offset.unwrap_or_else(|| default_offset(&base));
        let ribbon = blackboard_framing(&base, offset)?;
        match &self.framing {
            FramingSpec::Blackboard => Ok(ribbon),
            FramingSpec::Twists {
                n,
                profile,
                center,
                width,
            } => match profile {
                ProfileName::Uniform => Ok(ribbon.add_twists(*n)),
                ProfileName::Window => {
                    let center = center.ok_or_else(|| {
                        Error::InvalidArgument("window profile needs a center".into())
                    })?;
                    let width = width.ok_or_else(|| {
                        Error::InvalidArgument("window profile needs a width".into())
                    })?;
                    ribbon.add_twists_windowed(*n, center, width)
                }
            },
        }
    }
}

pub fn parse_curve(json: &str) -> Result<Curve> {
    serde_json::from_str::<CurveSpec>(json)?.build()
}

pub fn parse_pair(json: &str) -> Result<CurvePair> {
    serde_json::from_str::<PairSpec>(json)?.build()
}

pub fn parse_framed(json: &str) -> Result<FramedCurve> {
    serde_json::from_str::<FramedSpec>(json)?.build()
}

pub fn load_curve(path: &Path) -> Result<Curve> {
    parse_curve(&std::fs::read_to_string(path)?)
}

pub fn load_pair(path: &Path) -> Result<CurvePair> {
    parse_pair(&std::fs::read_to_string(path)?)
}

pub fn load_framed(path: &Path) -> Result<FramedCurve> {
    parse_framed(&std::fs::read_to_string(path)?)
}

/// CSV polyline: one `x,y,z` row per vertex, first vertex repeated at the
/// end to close the loop. Multiple polylines are separated by a blank line.
pub fn export_csv(polylines: &[PolygonalCurve]) -> String {
    let mut out = String::new();
    for (i, poly) in polylines.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for v in poly.vertices().iter().chain(poly.vertices().first()) {
            out.push_str(&format!("{},{},{}\n", v.x, v.y, v.z));
        }
    }
    out
}

/// OBJ polylines: `v` records for every vertex and one closed `l` record
/// per polyline (1-based indices, first index repeated to close).
pub fn export_obj(polylines: &[PolygonalCurve]) -> String {
    let mut out = String::new();
    let mut offset = 1usize;
    for poly in polylines {
        for v in poly.vertices() {
            out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
        }
        out.push('l');
        for i in 0..poly.vertices().len() {
            out.push_str(&format!(" {}", offset + i));
        }
        out.push_str(&format!(" {offset}\n"));
        offset += poly.vertices().len();
    }
    out
}

/// Echo of the knobs that produced a report; feeding these back reproduces
/// the identical report (minus wall time).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub panels_per_piece: usize,
    pub nodes_per_panel: usize,
    pub target_abs_error: f64,
    pub max_refinements: usize,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
}

/// One machine-readable result line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub input_label: String,
    pub method: String,
    pub value: f64,
    pub rounded: i64,
    pub confident: bool,
    pub abs_error_bound: f64,
    pub wall_time_ms: f64,
    pub config: ConfigEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilson: Option<WilsonValue>,
}
