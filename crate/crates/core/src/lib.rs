//! Explicit DC (difference-of-convex) decompositions of distance functions
//! to graphs of DC functions in the plane, plus sampled verification of
//! convexity, semiconcavity and distance-function identities.
//!
//! Module map:
//! - [`dc`]: convex and DC functions of one variable, interpolation, algebra.
//! - [`geom`]: planar points, segment/polyline distance, vertex wedges.
//! - [`compensator`]: wedge compensators and finite-resolution certificates.
//! - [`sets`]: closed-set scenes, distance identities, gallery sets.
//! - [`verify`]: seeded sampling checks and derivative estimates.
//! - [`battery`]: the named verification suites run by the CLI.

pub mod dc;
pub mod geom;
pub mod compensator;
pub mod sets;
pub mod verify;
pub mod battery;
