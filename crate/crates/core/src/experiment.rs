use serde::{Deserialize, Serialize};

/// A sampled sequence `(index, value)` with running extremum estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSeries {
    pub points: Vec<(f64, f64)>,
    /// Maximum over all points.
    pub running_max: f64,
    /// Maximum over the final quarter of the points.
    pub tail_max: f64,
    /// Set when the computation stopped early (overflow, budget).
    #[serde(default)]
    pub truncated: bool,
}

impl ExperimentSeries {
    pub fn from_points(points: Vec<(f64, f64)>) -> Self {
        let running_max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let start = points.len() - points.len().div_ceil(4).min(points.len());
        let tail_max = points[start..].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        ExperimentSeries {
            points,
            running_max,
            tail_max,
            truncated: false,
        }
    }

    pub fn truncated(mut self) -> Self {
        self.truncated = true;
        self
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    /// Running maximum after each point.
    pub fn running_max_sequence(&self) -> Vec<f64> {
        self.points
            .iter()
            .scan(f64::NEG_INFINITY, |m, p| {
                *m = m.max(p.1);
                Some(*m)
            })
            .collect()
    }

    /// CSV with the given column names for index and value.
    pub fn to_csv(&self, index_name: &str, value_name: &str) -> String {
        let mut out = format!("{index_name},{value_name}\n");
        for (i, v) in &self.points {
            out.push_str(&format!("{i:?},{v:?}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_is_last_quarter() {
        let s = ExperimentSeries::from_points(
            (0..8)
                .map(|i| (i as f64, [5., 1., 1., 1., 1., 1., 2., 3.][i]))
                .collect(),
        );
        assert_eq!(s.running_max, 5.0);
        assert_eq!(s.tail_max, 3.0);
        assert!(s.tail_max <= s.running_max);
        assert_eq!(s.running_max_sequence()[7], 5.0);
    }

    #[test]
    fn single_point() {
        let s = ExperimentSeries::from_points(vec![(1.0, 0.5)]);
        assert_eq!(s.tail_max, 0.5);
    }
}
