use crate::geom::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Convex sampling region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    Disk { center: Point, radius: f64 },
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
}

impl Region {
    pub fn disk(center: Point, radius: f64) -> Self {
        Region::Disk { center, radius }
    }

    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Region::Rect { x0, x1, y0, y1 }
    }

    pub fn contains(&self, z: Point) -> bool {
        match *self {
            Region::Disk { center, radius } => z.dist(center) <= radius,
            Region::Rect { x0, x1, y0, y1 } => (x0..=x1).contains(&z.x) && (y0..=y1).contains(&z.y),
        }
    }

    /// A length scale of the region.
    pub fn diameter(&self) -> f64 {
        match *self {
            Region::Disk { radius, .. } => 2.0 * radius,
            Region::Rect { x0, x1, y0, y1 } => (x1 - x0).hypot(y1 - y0),
        }
    }

    /// Image of `(u, v) ∈ [0, 1)²`; area-preserving for disks.
    pub fn map_unit(&self, u: f64, v: f64) -> Point {
        match *self {
            Region::Disk { center, radius } => {
                let r = radius * u.sqrt();
                let (s, c) = (TAU * v).sin_cos();
                center + Point::new(r * c, r * s)
            }
            Region::Rect { x0, x1, y0, y1 } => Point::new(x0 + (x1 - x0) * u, y0 + (y1 - y0) * v),
        }
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Halton points in bases 2 and 3 with a seeded Cranley-Patterson shift,
/// plus a seeded stream for auxiliary draws.
#[derive(Debug, Clone)]
pub struct Sampler {
    seed: u64,
    shift: [f64; 2],
    index: u64,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = [rng.gen::<f64>(), rng.gen::<f64>()];
        Sampler { seed, shift, index: 1, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_unit(&mut self) -> [f64; 2] {
        let i = self.index;
        self.index += 1;
        [
            (radical_inverse(i, 2) + self.shift[0]).fract(),
            (radical_inverse(i, 3) + self.shift[1]).fract(),
        ]
    }

    pub fn point(&mut self, region: &Region) -> Point {
        let [u, v] = self.next_unit();
        region.map_unit(u, v)
    }

    pub fn points(&mut self, region: &Region, count: usize) -> Vec<Point> {
        (0..count).map(|_| self.point(region)).collect()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn unit_vector(&mut self) -> Point {
        let (s, c) = (TAU * self.uniform()).sin_cos();
        Point::new(c, s)
    }

    /// A point near `p` inside `region`, at distance below `scale`.
    pub fn near(&mut self, p: Point, scale: f64, region: &Region) -> Point {
        for _ in 0..64 {
            let q = p + self.unit_vector() * (scale * self.uniform());
            if region.contains(q) {
                return q;
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_in_region() {
        let r = Region::disk(Point::new(0.0, 1.0), 0.1);
        let a = Sampler::new(3).points(&r, 500);
        let b = Sampler::new(3).points(&r, 500);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| r.contains(*p)));
        assert_ne!(a, Sampler::new(4).points(&r, 500));
    }

    #[test]
    fn halton_fills_quadrants() {
        let r = Region::rect(0.0, 1.0, 0.0, 1.0);
        let pts = Sampler::new(0).points(&r, 400);
        for (qx, qy) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)] {
            let count = pts
                .iter()
                .filter(|p| p.x >= qx && p.x < qx + 0.5 && p.y >= qy && p.y < qy + 0.5)
                .count();
            assert!((95..=105).contains(&count), "{count}");
        }
    }
}
