//! Scalar bound sequences of the bi-orthogonal counterexample:
//!
//! * `S(n) = Σ_{k>=1} n e^{-n/k!} / k!`, which bounds `n ‖T^n - T^{n+1}‖`;
//! * `P(n) = Σ_{k<=n} e^{-n!/k!} + Σ_{k>n} n!/k!`, which bounds
//!   `‖P_n + T^{n!} - I‖`.
//!
//! Each term of `S` is `x e^{-x}` at `x = n/k!`, so at `n = m!` the `k = m`
//! term is exactly `1/e`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ExperimentSeries;
use crate::quad::CompensatedSum;

/// Relative size below which the remainder of `S(n)` is dropped.
const EPS: f64 = 1e-17;

/// Terms `(k, n e^{-n/k!}/k!)` of `S(n)` in ascending `k`, up to the point
/// where the remainder `Σ_{j>k} n/j!` is certified below `EPS` times the sum.
pub fn diff_bound_terms(n: u64) -> Result<Vec<(u32, f64)>> {
    if n < 1 {
        return Err(Error::param("n must be >= 1"));
    }
    let ln_n = (n as f64).ln();
    let mut ln_fact = 0.0;
    let mut terms = Vec::new();
    let mut sum = 0.0;
    for k in 1u32.. {
        ln_fact += (k as f64).ln();
        // x = n / k!, computed in the log domain so huge n/k! underflows cleanly
        let ln_x = ln_n - ln_fact;
        let x = ln_x.exp();
        let term = (ln_x - x).exp();
        terms.push((k, term));
        sum += term;
        // once x < 1 the terms are dominated by x; Σ_{j>k} n/j! <= x/(k+1) · (k+2)/(k+1)
        let kf = k as f64;
        let remainder = x / (kf + 1.0) * (kf + 2.0) / (kf + 1.0);
        if x < 1.0 && remainder <= EPS * sum {
            break;
        }
    }
    Ok(terms)
}

pub fn diff_bound_sum(n: u64) -> Result<f64> {
    let mut s = CompensatedSum::new();
    for (_, t) in diff_bound_terms(n)? {
        s.add(t);
    }
    Ok(s.value())
}

/// Which of the two sums in `P(n)` a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionPart {
    /// `e^{-n!/k!}`, `k <= n`.
    Head,
    /// `n!/k!`, `k > n`.
    Tail,
}

pub const MAX_PROJECTION_N: u64 = 12;

/// Terms of `P(n)` in ascending `k`; the tail stops at `k = n + 60`, beyond
/// which `Σ n!/k! < 1/60!`.
pub fn projection_bound_terms(n: u64) -> Result<Vec<(u32, ProjectionPart, f64)>> {
    if n < 1 {
        return Err(Error::param("n must be >= 1"));
    }
    if n > MAX_PROJECTION_N {
        return Err(Error::Range(format!(
            "projection bound supports n <= {MAX_PROJECTION_N}, got {n}"
        )));
    }
    let n32 = n as u32;
    let mut terms = Vec::new();
    for k in 1..=n32 {
        // n!/k! = (k+1)(k+2)...n, exact in f64 for n <= 12
        let ratio: f64 = (k + 1..=n32).map(f64::from).product();
        terms.push((k, ProjectionPart::Head, (-ratio).exp()));
    }
    let mut ratio = 1.0;
    for k in n32 + 1..=n32 + 60 {
        ratio /= k as f64;
        terms.push((k, ProjectionPart::Tail, ratio));
    }
    Ok(terms)
}

pub fn projection_bound_sum(n: u64) -> Result<f64> {
    let mut s = CompensatedSum::new();
    for (_, _, t) in projection_bound_terms(n)? {
        s.add(t);
    }
    Ok(s.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    DiffBound,
    ProjectionBound,
}

/// `count` log-spaced integers in `[lo, hi]`, deduplicated.
pub fn log_spaced(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    if count <= 1 || lo >= hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut v: Vec<u64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as u64)
        .map(|x| x.clamp(lo, hi))
        .collect();
    v.dedup();
    v
}

/// Evaluates the chosen sum at each `n`.
pub fn limsup_scan(kind: SequenceKind, ns: &[u64]) -> Result<ExperimentSeries> {
    if ns.is_empty() {
        return Err(Error::param("empty n range"));
    }
    let pts = ns
        .iter()
        .map(|&n| {
            let v = match kind {
                SequenceKind::DiffBound => diff_bound_sum(n)?,
                SequenceKind::ProjectionBound => projection_bound_sum(n)?,
            };
            Ok((n as f64, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentSeries::from_points(pts))
}

pub fn factorial(m: u32) -> Result<u64> {
    (1..=m as u64)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .ok_or_else(|| Error::Range(format!("{m}! overflows u64")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    /// Direct evaluation with exact factorials, for small `k`.
    fn naive_diff(n: u64) -> f64 {
        let mut f = 1.0;
        let mut s = 0.0;
        for k in 1..40 {
            f *= k as f64;
            let x = n as f64 / f;
            s += x * (-x).exp();
        }
        s
    }

    #[test]
    fn middle_term_is_one_over_e() {
        for m in 2..=8u32 {
            let n = factorial(m).unwrap();
            let terms = diff_bound_terms(n).unwrap();
            let t = terms.iter().find(|t| t.0 == m).unwrap().1;
            assert_abs_diff_eq!(t, 1.0 / E, epsilon = 1e-15);
            assert!(diff_bound_sum(n).unwrap() >= 1.0 / E - 1e-15);
        }
    }

    #[test]
    fn sums_match_direct_evaluation() {
        for n in [1u64, 2, 7, 100, 40320, 99_999] {
            let a = diff_bound_sum(n).unwrap();
            assert!((a - naive_diff(n)).abs() < 1e-14 * a, "n={n}");
        }
        let one = diff_bound_sum(1).unwrap();
        assert_abs_diff_eq!(diff_bound_terms(1).unwrap()[0].1, (-1.0f64).exp(), epsilon = 1e-16);
        assert_abs_diff_eq!(
            diff_bound_terms(1).unwrap()[1].1,
            0.5 * (-0.5f64).exp(),
            epsilon = 1e-16
        );
        assert!(one > 0.8 && one < 0.9);
    }

    #[test]
    fn factorial_points_approach_one_over_e() {
        let gaps: Vec<f64> = (4..=8u32)
            .map(|m| (diff_bound_sum(factorial(m).unwrap()).unwrap() - 1.0 / E).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn projection_examples() {
        assert_abs_diff_eq!(
            projection_bound_sum(1).unwrap(),
            (-1.0f64).exp() + E - 2.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            projection_bound_sum(2).unwrap(),
            (-2.0f64).exp() + (-1.0f64).exp() + 2.0 * (E - 2.5),
            epsilon = 1e-15
        );
        for n in 1..=12 {
            let v = projection_bound_sum(n).unwrap();
            assert!(v <= 2.0);
            assert_eq!(v.to_bits(), projection_bound_sum(n).unwrap().to_bits());
        }
        assert!(matches!(projection_bound_sum(13), Err(Error::Range(_))));
    }

    #[test]
    fn projection_parts_below_one_from_three() {
        for n in 3..=12 {
            let t = projection_bound_terms(n).unwrap();
            let head: f64 = t.iter().filter(|x| x.1 == ProjectionPart::Head).map(|x| x.2).sum();
            let tail: f64 = t.iter().filter(|x| x.1 == ProjectionPart::Tail).map(|x| x.2).sum();
            assert!(head < 1.0 && tail < 1.0 && tail < head, "n={n}");
        }
    }

    #[test]
    fn all_terms_positive() {
        for n in [1u64, 50, 5040, 100_000] {
            assert!(diff_bound_terms(n).unwrap().iter().all(|t| t.1 >= 0.0));
        }
    }

    #[test]
    fn log_spacing() {
        let v = log_spaced(10_000, 100_000, 50);
        assert_eq!((v[0], *v.last().unwrap()), (10_000, 100_000));
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }
}
