//! Concave compensators and finite-resolution DC certificates for the
//! distance to the graph of a DC function.

mod certificate;
mod kofu;

pub use certificate::{
    build_certificate, CertManifest, CoverFn, CoverMatch, DCCertificate, Eta, GridRow, Projection, Xi,
    CERT_RADIUS, COVER_TOL, MIN_RESOLUTION,
};
pub use kofu::{kofu, kofu_for_angle, KofuPair};

use crate::dc::DcError;
use crate::geom::{GeomError, Point};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertError {
    #[error("resolution too coarse: {0} fails")]
    ResolutionTooCoarse(String),
    #[error("wedge half-angle {0} outside (0, pi/2)")]
    Domain(f64),
    #[error("point ({}, {}) outside the certified neighborhood", .0.x, .0.y)]
    OutsideNeighborhood(Point),
    #[error("projection of ({}, {}) lands on boundary segment {segment}", .point.x, .point.y)]
    ProjectionOnBoundary { point: Point, segment: usize },
    #[error("no cover function matches at ({}, {}); best mismatch {best}", .point.x, .point.y)]
    CoverViolation { point: Point, best: f64 },
    #[error(transparent)]
    Dc(#[from] DcError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
