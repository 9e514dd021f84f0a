//! Closed-set scenes in the plane and distance-function identities.
//!
//! A [`Scene`] is a finite union of closed primitives; its distance is the
//! minimum of the primitive distances. Graphs of DC functions are measured
//! through refined polylines whose chord error is below a tolerance.

mod curve;
mod gallery;
mod identities;
mod interval;
mod primitive;
mod scene;
mod truncated;

pub use curve::{refine_breakpoints, ArcPiece, ChunkedPolyline, GraphCurve, GRAPH_TOL};
pub use gallery::{gallery, gallery_names, nowhere_dense_envelopes, Envelopes, GalleryParams, GalleryScene, GALLERY};
pub use identities::{asplund_support, boundary_identity_check, boundary_triple, tube_identity_check};
pub use interval::{Interval1DSet, LocalFiniteness};
pub use primitive::{Primitive, PrimitiveSpec, RegionSet};
pub use scene::{scene_distance, Item, ItemSpec, Scene, SceneSpec};
pub use truncated::{truncated_graph_distance, TruncatedGraph, TruncatedRegion};

use crate::dc::DcError;
use crate::geom::Point;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SetError {
    #[error("scene has no primitives")]
    EmptyScene,
    #[error("malformed primitive: {0}")]
    Malformed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("reach condition violated: {0}")]
    ReachViolated(String),
    #[error("identity inapplicable: {0}")]
    Inapplicable(String),
    #[error("region values disagree at ({}, {}): {a} vs {b}", .at.x, .at.y)]
    Inconsistent { at: Point, a: f64, b: f64 },
    #[error("unknown gallery scene '{0}'")]
    UnknownScene(String),
    #[error("intervals not sorted and disjoint at index {0}")]
    Unsorted(usize),
    #[error(transparent)]
    Dc(#[from] DcError),
}
