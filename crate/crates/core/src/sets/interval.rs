use super::SetError;
use serde::{Deserialize, Serialize};

/// Closed subset of the line: sorted disjoint closed intervals, plus the
/// declared accumulation points of a truncated infinite family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval1DSet {
    intervals: Vec<[f64; 2]>,
    #[serde(default)]
    limit_points: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFiniteness {
    pub locally_finite: bool,
    /// An accumulation point of components, when not locally finite.
    pub witness: Option<f64>,
}

impl Interval1DSet {
    pub fn new(mut intervals: Vec<[f64; 2]>, mut limit_points: Vec<f64>) -> Result<Self, SetError> {
        for (i, [a, b]) in intervals.iter().enumerate() {
            if !(a <= b) || !a.is_finite() || !b.is_finite() {
                return Err(SetError::Malformed(format!("interval {i}: [{a}, {b}]")));
            }
        }
        intervals.sort_by(|p, q| p[0].total_cmp(&q[0]));
        if let Some(i) = intervals.windows(2).position(|w| w[0][1] >= w[1][0]) {
            return Err(SetError::Unsorted(i + 1));
        }
        limit_points.sort_by(f64::total_cmp);
        limit_points.dedup();
        Ok(Interval1DSet { intervals, limit_points })
    }

    pub fn points(xs: impl IntoIterator<Item = f64>, limit_points: Vec<f64>) -> Result<Self, SetError> {
        Self::new(xs.into_iter().map(|x| [x, x]).collect(), limit_points)
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn limit_points(&self) -> &[f64] {
        &self.limit_points
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|iv| iv[1] < x);
        self.intervals.get(i).is_some_and(|iv| iv[0] <= x) || self.limit_points.contains(&x)
    }

    pub fn distance(&self, x: f64) -> f64 {
        let i = self.intervals.partition_point(|iv| iv[1] < x);
        let mut d = f64::INFINITY;
        if let Some(iv) = self.intervals.get(i) {
            d = (iv[0] - x).max(0.0);
        }
        if i > 0 {
            d = d.min(x - self.intervals[i - 1][1]);
        }
        for p in &self.limit_points {
            d = d.min((x - p).abs());
        }
        d
    }

    /// Whether only finitely many components meet each compact subset of
    /// `window`. The stored intervals are finite in number, so this fails
    /// exactly when a declared accumulation point lies in the window.
    pub fn components_locally_finite(&self, window: [f64; 2]) -> LocalFiniteness {
        let witness = self.limit_points.iter().copied().find(|p| window[0] <= *p && *p <= window[1]);
        LocalFiniteness { locally_finite: witness.is_none(), witness }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_union() {
        let a = Interval1DSet::new(vec![[3.0, 4.0], [0.0, 1.0], [2.0, 2.0]], vec![]).unwrap();
        let r = a.components_locally_finite([-1.0, 5.0]);
        assert!(r.locally_finite && r.witness.is_none());
        assert!(a.contains(2.0) && !a.contains(2.5));
        assert_eq!(a.distance(2.75), 0.25);
    }

    #[test]
    fn harmonic_points() {
        let a = Interval1DSet::points((1..=100).map(|k| 1.0 / k as f64), vec![0.0]).unwrap();
        assert_eq!(a.components_locally_finite([0.0, 1.0]), LocalFiniteness { locally_finite: false, witness: Some(0.0) });
        assert!(a.contains(0.0));
        let b = Interval1DSet::points((1..=50).flat_map(|k| [1.0 / k as f64, -1.0 / k as f64]), vec![0.0]).unwrap();
        assert_eq!(b.components_locally_finite([-1.0, 1.0]).witness, Some(0.0));
        assert!(b.components_locally_finite([0.5, 1.0]).locally_finite);
    }

    #[test]
    fn overlapping_intervals_rejected() {
        assert_eq!(Interval1DSet::new(vec![[0.0, 1.0], [1.0, 2.0]], vec![]), Err(SetError::Unsorted(1)));
    }
}
