//! Linking numbers of closed space curves, three independent ways, plus
//! ribbon framing and abelian Wilson-loop phases.
//!
//! The linking number of two disjoint closed curves is computed by
//!
//! * [`quadrature::link_numeric`] — tensor-product Gauss-Legendre panels on
//!   the Gauss double integral, refined until an a-posteriori error bound
//!   meets the target;
//! * [`exact::link_exact`] — a closed form for polygon pairs that sums one
//!   signed solid angle per segment pair, exact up to rounding;
//! * [`crossings::link_by_crossings`] — half the signed crossing sum in a
//!   generic planar projection, an integer with no error term.
//!
//! The three methods share one sign convention, fixed so that a pair of
//! loops winding positively around each other links +1.
//!
//! [`framing`] models ribbons (a curve, a unit normal field, an offset) and
//! computes their framing number as the linking of the two edges;
//! [`wilson`] turns integer linking numbers into level-k Wilson phases;
//! [`formats`] defines the JSON/CSV/OBJ interchange used by the `linkframe`
//! command-line tool.

// negated float comparisons in validators are deliberate: NaN must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod crossings;
pub mod curve;
pub mod error;
pub mod exact;
pub mod formats;
pub mod framing;
pub mod quadrature;
pub mod wilson;

pub use curve::{Curve, CurvePair, ExampleId, ParametricCurve, PolygonalCurve, Vec3};
pub use error::{Error, Result};
pub use framing::FramedCurve;
pub use quadrature::{LinkEstimate, LinkMethod, QuadratureConfig};
pub use wilson::WilsonValue;
