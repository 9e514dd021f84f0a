//! Continuous functions glued from DC pieces.

use std::sync::Arc;

use super::{Convex1D, DCFunction1D, DcError, Side};

const GLUE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Glued {
    breaks: Vec<f64>,
    pieces: Vec<DCFunction1D>,
    half_c: f64,
    /// `(t_j, c_j)` at interior junctions.
    knots: Vec<(f64, f64)>,
}

impl Glued {
    fn piece(&self, x: f64, side: Side) -> &DCFunction1D {
        let m = self.pieces.len();
        let i = match side {
            Side::Plus => self.breaks[1..m].partition_point(|&t| t <= x),
            Side::Minus => self.breaks[1..m].partition_point(|&t| t < x),
        };
        &self.pieces[i]
    }

    fn correction(&self, x: f64) -> f64 {
        self.half_c * x * x + self.knots.iter().map(|(t, c)| c * (x - t).abs()).sum::<f64>()
    }

    fn correction_slope(&self, x: f64, side: Side) -> f64 {
        let s: f64 = self
            .knots
            .iter()
            .map(|&(t, c)| {
                let sg = if x > t {
                    1.0
                } else if x < t {
                    -1.0
                } else {
                    side.sign()
                };
                c * sg
            })
            .sum();
        2.0 * self.half_c * x + s
    }
}

/// `f + (C/2) x² + Σ c_j |x - t_j|`.
#[derive(Debug, Clone)]
struct GluedConvex(Arc<Glued>);

/// `(C/2) x² + Σ c_j |x - t_j|`.
#[derive(Debug, Clone)]
struct GluedCompensation(Arc<Glued>);

impl Convex1D for GluedConvex {
    fn domain(&self) -> (f64, f64) {
        (self.0.breaks[0], *self.0.breaks.last().unwrap())
    }
    fn eval(&self, x: f64) -> f64 {
        self.0.piece(x, Side::Plus).value(x) + self.0.correction(x)
    }
    fn derivative(&self, x: f64, side: Side) -> f64 {
        self.0.piece(x, side).derivative(x, side) + self.0.correction_slope(x, side)
    }
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        let g = &self.0;
        let mut k: Vec<f64> = g.breaks.iter().copied().filter(|t| a < *t && *t < b).collect();
        for (i, p) in g.pieces.iter().enumerate() {
            k.extend(p.kinks(a.max(g.breaks[i]), b.min(g.breaks[i + 1])));
        }
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }
}

impl Convex1D for GluedCompensation {
    fn eval(&self, x: f64) -> f64 {
        self.0.correction(x)
    }
    fn derivative(&self, x: f64, side: Side) -> f64 {
        self.0.correction_slope(x, side)
    }
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        self.0.knots.iter().map(|k| k.0).filter(|t| a < *t && *t < b).collect()
    }
}

/// The continuous function equal to `pieces[k]` on `[breaks[k], breaks[k+1]]`.
///
/// Each piece must satisfy `f_k'' >= -curvature` on its interval. The split
/// adds `(C/2) x²` and, at every junction where the slope drops by `J`, a
/// kink `(J/2) |x - t|`, to both parts.
pub fn pieced(breaks: Vec<f64>, pieces: Vec<DCFunction1D>, curvature: f64) -> Result<DCFunction1D, DcError> {
    if pieces.is_empty() || breaks.len() != pieces.len() + 1 {
        return Err(DcError::Malformed("need one more break than pieces".into()));
    }
    if let Some(i) = breaks.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(DcError::Malformed(format!("breaks not increasing at {i}")));
    }
    if !(curvature >= 0.0 && curvature.is_finite()) {
        return Err(DcError::Malformed("curvature bound must be finite and >= 0".into()));
    }
    let mut knots = Vec::new();
    for j in 1..pieces.len() {
        let t = breaks[j];
        let (l, r) = (&pieces[j - 1], &pieces[j]);
        let (vl, vr) = (l.value(t), r.value(t));
        if (vl - vr).abs() > GLUE_TOL * (1.0 + vl.abs()) {
            return Err(DcError::Malformed(format!("pieces disagree at {t}: {vl} vs {vr}")));
        }
        let jump = r.derivative(t, Side::Plus) - l.derivative(t, Side::Minus);
        knots.push((t, 0.5 * (-jump).max(0.0)));
    }
    let glued = Arc::new(Glued { breaks: breaks.clone(), pieces, half_c: 0.5 * curvature, knots });
    let inner = breaks[1..breaks.len() - 1].to_vec();
    Ok(DCFunction1D::new(Arc::new(GluedConvex(glued.clone())), Arc::new(GluedCompensation(glued)))
        .with_curvature_bound(Arc::new(move |a: f64, b: f64| {
            if inner.iter().any(|t| a < *t && *t < b) {
                f64::INFINITY
            } else {
                curvature
            }
        }))
        .with_label("pieced"))
}
