//! Concave wedge compensators.
//!
//! For a closed wedge `V` with vertex `v`, bisector `u` and half-angle `β`,
//! `φ(w) = |w| - ⟨w, u⟩` (frame coordinates) is convex on `V` with gradient
//! norm `2 sin(θ/2) <= 2 sin(β/2)`, strictly below `K = √2 tan β`. Its
//! extension is the infimal convolution
//!
//! ```text
//! φ̃(z) = inf_{w ∈ V} φ(w) + K |z - w|
//! ```
//!
//! which is convex, `K`-Lipschitz and equal to `φ` on `V`. Since `|∇φ| < K`
//! in the interior, for `z ∉ V` the infimum sits on one of the two boundary
//! rays, where `φ(t e) = t (1 - cos β)` and the one-dimensional problem has
//! a closed form. The compensator is `ψ = -φ̃`, with `A(z) = ⟨z - v, u⟩`, so
//! that `|z - v| + ψ(z) = A(z)` on `V`.

use super::CertError;
use crate::geom::{Point, Wedge};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KofuPair {
    wedge: Wedge,
    lipschitz: f64,
    tan_half: f64,
    /// `(cos β, sin β)`: upper boundary ray in the frame.
    ray: Point,
    /// `1 - cos β`, the slope of `φ` along a boundary ray.
    ray_slope: f64,
    /// `c / √(1 - c²)` with `c = ray_slope / K`.
    shift: f64,
    /// `K √(1 - c²)`.
    normal_rate: f64,
}

/// Builds the compensator pair for `w`. Wedges are validated on
/// construction (half-angle in `(0, π/2)`), so this cannot fail.
pub fn kofu(wedge: Wedge) -> KofuPair {
    let beta = wedge.half_angle();
    let (s, c) = beta.sin_cos();
    let tan_half = beta.tan();
    let lipschitz = std::f64::consts::SQRT_2 * tan_half;
    // 1 - cos β computed without cancellation
    let ray_slope = 2.0 * (0.5 * beta).sin().powi(2);
    let ratio = ray_slope / lipschitz;
    let root = (1.0 - ratio * ratio).sqrt();
    KofuPair {
        wedge,
        lipschitz,
        tan_half,
        ray: Point::new(c, s),
        ray_slope,
        shift: ratio / root,
        normal_rate: lipschitz * root,
    }
}

/// Compensator for the wedge of full angle `alpha` at `vertex` opening along
/// `bisector`.
pub fn kofu_for_angle(vertex: Point, bisector: Point, alpha: f64) -> Result<KofuPair, CertError> {
    let half = 0.5 * alpha;
    if !(half > 0.0 && half < FRAC_PI_2) {
        return Err(CertError::Domain(half));
    }
    Ok(kofu(Wedge::new(vertex, bisector, half)?))
}

impl KofuPair {
    pub fn wedge(&self) -> &Wedge {
        &self.wedge
    }

    /// `K = √2 tan β`.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `φ` at frame coordinates inside the wedge, as `y² / (|w| + x)`.
    pub fn phi_frame(w: Point) -> f64 {
        let r = w.norm();
        if r == 0.0 {
            0.0
        } else {
            w.y * w.y / (r + w.x)
        }
    }

    fn in_frame_wedge(&self, w: Point) -> bool {
        w.x >= 0.0 && w.y.abs() <= w.x * self.tan_half
    }

    /// `φ̃` at frame coordinates.
    pub fn extension_frame(&self, w: Point) -> f64 {
        if self.in_frame_wedge(w) {
            return Self::phi_frame(w);
        }
        // the nearer boundary ray is the one on the side of w
        let e = Point::new(self.ray.x, self.ray.y.copysign(w.y));
        let p = w.dot(e);
        let q = e.cross(w).abs();
        let t = p - q * self.shift;
        if t >= 0.0 {
            self.ray_slope * p + self.normal_rate * q
        } else {
            self.lipschitz * w.norm()
        }
    }

    pub fn extension(&self, z: Point) -> f64 {
        self.extension_frame(self.wedge.to_frame(z))
    }

    pub fn psi(&self, z: Point) -> f64 {
        -self.extension(z)
    }

    pub fn affine(&self, z: Point) -> f64 {
        (z - self.wedge.vertex()).dot(self.wedge.bisector())
    }
}
