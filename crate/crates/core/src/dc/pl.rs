//! Piecewise-linear functions on a compact interval.

use super::{Convex1D, DcError, Side};

/// Relative slack for slope monotonicity on float inputs.
pub const CONVEXITY_SLACK: f64 = 1e-12;

/// Continuous piecewise-linear function given by breakpoints and values.
///
/// Breakpoints are strictly increasing; the function is affine between
/// consecutive breakpoints and undefined outside `[x_0, x_n]` (use
/// [`PiecewiseLinear1D::eval_extended`] for the affine continuation).
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear1D {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear1D {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, DcError> {
        if xs.len() != ys.len() {
            return Err(DcError::Malformed(format!(
                "{} breakpoints but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(DcError::Malformed("need at least two breakpoints".into()));
        }
        for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(DcError::NonFinite { x, index: Some(i) });
            }
        }
        if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(DcError::Malformed(format!(
                "breakpoints not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { xs, ys })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn segments(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Slope of segment `i`, i.e. on `[x_i, x_{i+1}]`.
    pub fn slope(&self, i: usize) -> f64 {
        (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
    }

    pub fn slopes(&self) -> Vec<f64> {
        (0..self.segments()).map(|i| self.slope(i)).collect()
    }

    /// Index of the segment used to evaluate at `x` (clamped to the ends).
    fn segment_for(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&b| b <= x);
        k.saturating_sub(1).min(self.segments() - 1)
    }

    /// Value at `x`, or a domain error outside `[x_0, x_n]`.
    pub fn eval(&self, x: f64) -> Result<f64, DcError> {
        let (a, b) = self.domain();
        if !(a..=b).contains(&x) {
            return Err(DcError::OutOfDomain { x, a, b });
        }
        Ok(self.eval_extended(x))
    }

    /// Value with affine continuation of the first and last segments.
    pub fn eval_extended(&self, x: f64) -> f64 {
        let i = self.segment_for(x);
        if x == self.xs[i] {
            return self.ys[i];
        }
        if x == self.xs[i + 1] {
            return self.ys[i + 1];
        }
        self.ys[i] + self.slope(i) * (x - self.xs[i])
    }

    /// One-sided derivative; outside the domain the boundary slope is used.
    pub fn derivative_extended(&self, x: f64, side: Side) -> f64 {
        let n = self.segments();
        let k = self.xs.partition_point(|&b| b < x);
        // k = number of breakpoints strictly left of x
        let at_node = k < self.xs.len() && self.xs[k] == x;
        let seg = match (side, at_node) {
            (Side::Plus, true) => k,
            (Side::Minus, true) => k.saturating_sub(1),
            (_, false) => k.saturating_sub(1),
        };
        self.slope(seg.min(n - 1))
    }

    pub fn derivative(&self, x: f64, side: Side) -> Result<f64, DcError> {
        let (a, b) = self.domain();
        let ok = match side {
            Side::Plus => a <= x && x < b,
            Side::Minus => a < x && x <= b,
        };
        if !ok {
            return Err(DcError::OutOfDomain { x, a, b });
        }
        Ok(self.derivative_extended(x, side))
    }

    /// Pointwise difference on a shared breakpoint set.
    pub fn sub(&self, other: &Self) -> Result<Self, DcError> {
        if self.xs != other.xs {
            return Err(DcError::Malformed("breakpoint sets differ".into()));
        }
        let ys = self.ys.iter().zip(&other.ys).map(|(a, b)| a - b).collect();
        Self::new(self.xs.clone(), ys)
    }

    /// Index of the first slope decrease beyond [`CONVEXITY_SLACK`], if any.
    pub fn convexity_violation(&self) -> Option<usize> {
        let s = self.slopes();
        s.windows(2)
            .position(|w| w[1] < w[0] - CONVEXITY_SLACK * (1.0 + w[0].abs().max(w[1].abs())))
            .map(|i| i + 1)
    }
}

/// Convex piecewise-linear function: nondecreasing slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPL(PiecewiseLinear1D);

impl ConvexPL {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, DcError> {
        Self::try_from(PiecewiseLinear1D::new(xs, ys)?)
    }

    pub fn as_pl(&self) -> &PiecewiseLinear1D {
        &self.0
    }

    pub fn into_pl(self) -> PiecewiseLinear1D {
        self.0
    }
}

impl TryFrom<PiecewiseLinear1D> for ConvexPL {
    type Error = DcError;

    fn try_from(p: PiecewiseLinear1D) -> Result<Self, DcError> {
        match p.convexity_violation() {
            Some(index) => Err(DcError::NotConvex { index }),
            None => Ok(Self(p)),
        }
    }
}

impl std::ops::Deref for ConvexPL {
    type Target = PiecewiseLinear1D;
    fn deref(&self) -> &PiecewiseLinear1D {
        &self.0
    }
}

impl Convex1D for ConvexPL {
    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }

    fn eval(&self, x: f64) -> f64 {
        self.0.eval_extended(x)
    }

    fn derivative(&self, x: f64, side: Side) -> f64 {
        self.0.derivative_extended(x, side)
    }

    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        let (lo, hi) = self.0.domain();
        self.0
            .breakpoints()
            .iter()
            .copied()
            .filter(|&x| x > lo && x < hi && x > a && x < b)
            .collect()
    }
}

/// Interpolant of `phi` on the equidistant partition of `[a, b]` with `n + 1` nodes.
pub fn interpolate_on_partition<F>(phi: F, n: usize, a: f64, b: f64) -> Result<PiecewiseLinear1D, DcError>
where
    F: Fn(f64) -> f64,
{
    if n == 0 {
        return Err(DcError::Malformed("partition needs n >= 1".into()));
    }
    if !(a < b) {
        return Err(DcError::Malformed(format!("degenerate interval [{a}, {b}]")));
    }
    let xs = partition_nodes(n, a, b);
    let mut ys = Vec::with_capacity(n + 1);
    for (i, &x) in xs.iter().enumerate() {
        let y = phi(x);
        if !y.is_finite() {
            return Err(DcError::NonFinite { x, index: Some(i) });
        }
        ys.push(y);
    }
    PiecewiseLinear1D::new(xs, ys)
}

/// Nodes `a + (b - a) i / n`, with the last node pinned to `b`.
pub fn partition_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    let w = b - a;
    let mut xs: Vec<f64> = (0..=n).map(|i| a + w * i as f64 / n as f64).collect();
    xs[n] = b;
    xs
}

/// Interpolates a convex function and checks the result is convex.
pub fn interpolate_convex(phi: &dyn Convex1D, n: usize, a: f64, b: f64) -> Result<ConvexPL, DcError> {
    let (lo, hi) = phi.domain();
    if a < lo || b > hi {
        return Err(DcError::OutOfDomain { x: if a < lo { a } else { b }, a: lo, b: hi });
    }
    ConvexPL::try_from(interpolate_on_partition(|x| phi.eval(x), n, a, b)?)
}

/// Slope sequence and total turning `Σ |s_i - s_{i-1}|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Turning {
    pub slopes: Vec<f64>,
    pub total: f64,
}

pub fn slopes_and_turning(p: &PiecewiseLinear1D) -> Turning {
    let slopes = p.slopes();
    let total = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Turning { slopes, total }
}

/// Splits `p` into convex `(u, v)` with `p = u - v`.
///
/// `u` takes the upward slope jumps, `v` the downward ones. The starting
/// value and slope are split by sign (negative slope and positive value to
/// `u`), so `|x|` splits as `(|x|, 0)` and `-|x|` as `(0, |x|)`.
pub fn canonical_pl_split(p: &PiecewiseLinear1D) -> (ConvexPL, ConvexPL) {
    let xs = p.breakpoints();
    let s = p.slopes();
    let mut v = Vec::with_capacity(xs.len());
    v.push((-p.values()[0]).max(0.0));
    let mut v_slope = -s[0].max(0.0);
    for i in 1..xs.len() {
        if i >= 2 {
            let jump = s[i - 1] - s[i - 2];
            if jump < 0.0 {
                v_slope -= jump;
            }
        }
        v.push(v[i - 1] + v_slope * (xs[i] - xs[i - 1]));
    }
    let u: Vec<f64> = p.values().iter().zip(&v).map(|(y, w)| y + w).collect();
    let u = PiecewiseLinear1D::new(xs.to_vec(), u).expect("finite by construction");
    let v = PiecewiseLinear1D::new(xs.to_vec(), v).expect("finite by construction");
    // u = p + v is convex up to rounding; the unit tests and property tests
    // check it against the slack used by ConvexPL.
    (ConvexPL(u), ConvexPL(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(xs: &[f64], ys: &[f64]) -> PiecewiseLinear1D {
        PiecewiseLinear1D::new(xs.to_vec(), ys.to_vec()).unwrap()
    }

    #[test]
    fn square_interpolation_two_segments() {
        let p = interpolate_on_partition(|x| x * x, 2, -1.0, 1.0).unwrap();
        assert_eq!(p.breakpoints(), &[-1.0, 0.0, 1.0]);
        assert_eq!(p.values(), &[1.0, 0.0, 1.0]);
        assert_eq!(p.slopes(), vec![-1.0, 1.0]);
    }

    #[test]
    fn square_interpolation_four_segments() {
        let p = interpolate_on_partition(|x| x * x, 4, -1.0, 1.0).unwrap();
        assert_eq!(p.slopes(), vec![-1.5, -0.5, 0.5, 1.5]);
        let t = slopes_and_turning(&p);
        assert_eq!(t.total, 3.0);
    }

    #[test]
    fn abs_is_reproduced() {
        let p = interpolate_on_partition(f64::abs, 2, -1.0, 1.0).unwrap();
        for k in 0..=100 {
            let x = -1.0 + 0.02 * k as f64;
            assert!((p.eval(x).unwrap() - x.abs()).abs() < 1e-15);
        }
        let t = slopes_and_turning(&p);
        assert_eq!(t.slopes, vec![-1.0, 1.0]);
        assert_eq!(t.total, 2.0);
    }

    #[test]
    fn non_finite_node_is_reported() {
        let err = interpolate_on_partition(|x| 1.0 / x, 2, -1.0, 1.0).unwrap_err();
        assert!(matches!(err, DcError::NonFinite { x, index: Some(1) } if x == 0.0));
    }

    #[test]
    fn odd_partition_keeps_endpoints() {
        let xs = partition_nodes(7, -1.0, 1.0);
        assert_eq!(xs[0], -1.0);
        assert_eq!(xs[7], 1.0);
        assert_eq!(partition_nodes(64, -1.0, 1.0)[32], 0.0);
    }

    #[test]
    fn convex_pl_rejects_concave_data() {
        let err = ConvexPL::new(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap_err();
        assert!(matches!(err, DcError::NotConvex { index: 1 }));
        assert!(ConvexPL::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).is_ok());
    }

    #[test]
    fn one_sided_derivatives_at_nodes() {
        let p = pl(&[-1.0, 0.0, 1.0], &[1.0, 0.0, 1.0]);
        assert_eq!(p.derivative(0.0, Side::Plus).unwrap(), 1.0);
        assert_eq!(p.derivative(0.0, Side::Minus).unwrap(), -1.0);
        assert_eq!(p.derivative(-1.0, Side::Plus).unwrap(), -1.0);
        assert!(p.derivative(-1.0, Side::Minus).is_err());
        assert!(p.derivative(1.0, Side::Plus).is_err());
        assert!(p.eval(1.5).is_err());
        assert_eq!(p.eval_extended(2.0), 2.0);
    }

    #[test]
    fn split_of_abs_and_negative_abs() {
        let p = pl(&[-1.0, 0.0, 1.0], &[1.0, 0.0, 1.0]);
        let (u, v) = canonical_pl_split(&p);
        assert_eq!(u.values(), &[1.0, 0.0, 1.0]);
        assert_eq!(v.values(), &[0.0, 0.0, 0.0]);

        let q = pl(&[-1.0, 0.0, 1.0], &[-1.0, 0.0, -1.0]);
        let (u, v) = canonical_pl_split(&q);
        assert_eq!(u.values(), &[0.0, 0.0, 0.0]);
        assert_eq!(v.values(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn split_reproduces_tent_map() {
        // slopes (1, -1, 1)
        let p = pl(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 0.0, 1.0]);
        let (u, v) = canonical_pl_split(&p);
        assert!(u.convexity_violation().is_none());
        assert!(v.convexity_violation().is_none());
        for k in 0..1000 {
            let x = 3.0 * k as f64 / 999.0;
            let direct = p.eval(x).unwrap();
            let split = u.as_pl().eval(x).unwrap() - v.as_pl().eval(x).unwrap();
            assert!((direct - split).abs() <= 1e-12, "x={x}");
        }
    }
}
