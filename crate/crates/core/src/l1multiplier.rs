//! The Fourier multiplier `m(ξ) = 1/(1 + iξ)`-type example whose powers grow
//! like `log n` in `L_1` while `n (m^{n+1} - m^n)` stays bounded.
//!
//! Both inverse transforms are written as an amplitude times `|cos(x - φ(x))|`:
//!
//! * `G(n)(x) = n cos(x - atan(n/x)) / (π x sqrt(x² + n²))`,
//! * `D(n)(x) = cos(x - ψ(x)) / (π sqrt((x² + n²)(x² + (n+1)²)))` with
//!   `ψ = atan2((2n+1) x, x² - n(n+1))`.
//!
//! The `L_1` norm integrates between consecutive zeros of the cosine, where
//! the integrand is smooth and of one sign, and replaces the far tail by the
//! mean value `2/π` of `|cos|` times the integral of the amplitude.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ExperimentSeries;
use crate::quad::{integrate, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum MultiplierKernel {
    /// Inverse transform of `m^n`.
    G(u64),
    /// Inverse transform of `m^{n+1} - m^n`.
    D(u64),
}

impl MultiplierKernel {
    pub fn n(&self) -> u64 {
        match *self {
            MultiplierKernel::G(n) | MultiplierKernel::D(n) => n,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n() == 0 {
            return Err(Error::param("kernel index n must be >= 1"));
        }
        Ok(())
    }

    /// Amplitude `a(x)` with `|kernel(x)| = a(x) |cos(x - φ(x))|`, `x > 0`.
    fn amplitude(&self, x: f64) -> f64 {
        let n = self.n() as f64;
        match self {
            MultiplierKernel::G(_) => n / (PI * x * (x * x + n * n).sqrt()),
            MultiplierKernel::D(_) => 1.0 / (PI * ((x * x + n * n) * (x * x + (n + 1.0).powi(2))).sqrt()),
        }
    }

    /// `x - φ(x)`, strictly increasing on `x > 0`.
    fn phase(&self, x: f64) -> f64 {
        let n = self.n() as f64;
        match self {
            MultiplierKernel::G(_) => x - (n / x).atan(),
            MultiplierKernel::D(_) => x - ((2.0 * n + 1.0) * x).atan2(x * x - n * (n + 1.0)),
        }
    }

    /// `k`-th positive zero: bracket and phase target.
    fn zero_bracket(&self, k: u64) -> (f64, f64, f64) {
        let kf = k as f64;
        match self {
            MultiplierKernel::G(_) => (kf * PI + FRAC_PI_2, (kf + 1.0) * PI, FRAC_PI_2 + kf * PI),
            MultiplierKernel::D(_) if k == 0 => (0.0, FRAC_PI_2, -FRAC_PI_2),
            MultiplierKernel::D(_) => ((kf - 0.5) * PI, (kf + 0.5) * PI, (kf - 0.5) * PI),
        }
    }

    fn zero(&self, k: u64) -> f64 {
        let (mut lo, mut hi, target) = self.zero_bracket(k);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.phase(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `∫_X^∞ a(x) dx`.
    fn amplitude_tail(&self, x: f64) -> Result<f64> {
        let n = self.n() as f64;
        match self {
            MultiplierKernel::G(_) => Ok((n / x).asinh() / PI),
            MultiplierKernel::D(_) => {
                // u = 1/x
                let m = n + 1.0;
                let f = |u: f64| 1.0 / (PI * ((1.0 + n * n * u * u) * (1.0 + m * m * u * u)).sqrt());
                Ok(integrate(&f, 0.0, 1.0 / x, 1e-15 / x, 10_000)?.0)
            }
        }
    }
}

/// Evaluates the kernel; `|x| < 1e-4` uses the degree-4 Taylor polynomial.
pub fn kernel_eval(k: MultiplierKernel, x: f64) -> f64 {
    let n = k.n() as f64;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        return match k {
            MultiplierKernel::G(_) => {
                // (n cos x + n² sin x / x) / (π (x² + n²))
                let a0 = n + n * n;
                let a2 = -n / 2.0 - n * n / 6.0;
                let a4 = n / 24.0 + n * n / 120.0;
                let n2 = n * n;
                let c0 = a0 / n2;
                let c2 = (a2 - a0 / n2) / n2;
                let c4 = (a4 - a2 / n2 + a0 / (n2 * n2)) / n2;
                (c0 + c2 * x2 + c4 * x2 * x2) / PI
            }
            MultiplierKernel::D(_) => {
                let m = n + 1.0;
                let p0 = -n * m;
                let p2 = 1.0 + n * m / 2.0 + (2.0 * n + 1.0);
                let p4 = -0.5 - n * m / 24.0 - (2.0 * n + 1.0) / 6.0;
                let q0 = n * n * m * m;
                let eps = (n * n + m * m) / q0;
                let del = 1.0 / q0;
                let (r0, r2, r4) = (1.0, -eps, eps * eps - del);
                (p0 * r0 + (p0 * r2 + p2 * r0) * x2 + (p0 * r4 + p2 * r2 + p4 * r0) * x2 * x2) / (q0 * PI)
            }
        };
    }
    closed_form(k, x)
}

fn closed_form(k: MultiplierKernel, x: f64) -> f64 {
    let n = k.n() as f64;
    match k {
        MultiplierKernel::G(_) => (n * x * x.cos() + n * n * x.sin()) / (PI * x * (x * x + n * n)),
        MultiplierKernel::D(_) => {
            let m = n + 1.0;
            ((x * x - n * m) * x.cos() + (2.0 * n + 1.0) * x * x.sin()) / (PI * (x * x + n * n) * (x * x + m * m))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1Norm {
    pub value: f64,
    /// Cutoff `X`, a zero of the kernel.
    pub cutoff: f64,
    /// Mean-value tail `2 · (2/π) ∫_X^∞ a`, included in `value`.
    pub tail: f64,
    /// Rigorous bound `2 ∫_X^∞ C/x² dx` on the tail, for reference.
    pub tail_bound: f64,
    /// Quadrature error estimate plus `8π² a(X)/X` for the tail replacement.
    pub error_estimate: f64,
    pub panels: usize,
}

/// Default cutoff `max(100 n, 10^4)`.
pub fn default_cutoff(n: u64) -> f64 {
    (100.0 * n as f64).max(1e4)
}

/// Consecutive zeros `0 = z_{-1} < z_0 < ... < z_K` with `z_K >= target`.
fn panel_edges(k: MultiplierKernel, target: f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut i = 0;
    loop {
        let z = k.zero(i);
        edges.push(z);
        if z >= target {
            return edges;
        }
        i += 1;
    }
}

/// Runs `f` over panels in parallel, summing in panel order.
fn sum_panels(edges: &[f64], tol: f64, f: impl Fn(f64) -> f64 + Sync) -> Result<(f64, f64)> {
    let total = edges[edges.len() - 1];
    let per: Vec<Result<(f64, f64)>> = edges
        .par_windows(2)
        .map(|w| integrate(&f, w[0], w[1], tol * (w[1] - w[0]) / total, 200))
        .collect();
    let mut sum = CompensatedSum::new();
    let mut err = 0.0;
    for r in per {
        match r {
            Ok((v, e)) => {
                sum.add(v);
                err += e;
            }
            Err(Error::Budget { partial, achieved, .. }) => {
                sum.add(partial);
                err += achieved;
                return Err(Error::Budget {
                    partial: sum.value(),
                    achieved: err,
                    requested: tol,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok((sum.value(), err))
}

/// `∫_ℝ |kernel|` to absolute tolerance `tol`.
pub fn l1_norm(k: MultiplierKernel, tol: f64) -> Result<L1Norm> {
    l1_norm_with_cutoff(k, tol, default_cutoff(k.n()))
}

pub fn l1_norm_with_cutoff(k: MultiplierKernel, tol: f64, cutoff: f64) -> Result<L1Norm> {
    k.validate()?;
    if !(tol > 0.0) || !(cutoff > 0.0) {
        return Err(Error::param("tol and cutoff must be positive"));
    }
    let edges = panel_edges(k, cutoff);
    let x = *edges.last().expect("edges are nonempty");
    let (half, qerr) = sum_panels(&edges, tol / 4.0, |t| kernel_eval(k, t).abs()).map_err(|e| match e {
        Error::Budget {
            partial,
            achieved,
            requested,
        } => Error::Budget {
            partial: 2.0 * partial,
            achieved: 2.0 * achieved,
            requested: 4.0 * requested,
        },
        e => e,
    })?;
    let tail = 2.0 * (2.0 / PI) * k.amplitude_tail(x)?;
    let c = match k {
        MultiplierKernel::G(n) => n as f64 / PI,
        MultiplierKernel::D(_) => 1.0 / PI,
    };
    // Between consecutive zeros the mean-value rule errs by O(a'' π³); summed
    // over the tail that is about π² |a'(X)| <= 2π² a(X)/X per side.
    let tail_error = 8.0 * PI * PI * k.amplitude(x) / x;
    let error_estimate = 2.0 * qerr + tail_error;
    if error_estimate > tol {
        return Err(Error::Budget {
            partial: 2.0 * half + tail,
            achieved: error_estimate,
            requested: tol,
        });
    }
    Ok(L1Norm {
        value: 2.0 * half + tail,
        cutoff: x,
        tail,
        tail_bound: 2.0 * c / x,
        error_estimate,
        panels: edges.len() - 1,
    })
}

/// `∫_ℝ G(n)`, which equals `m(0)^n = 1`. The tail beyond the cutoff is
/// exact: `G(n)(x) = Re[n e^{ix} / (π x (x + i n))]` is integrated along the
/// vertical ray `X + i s`, where it decays like `e^{-s}`.
pub fn signed_integral_g(n: u64, tol: f64) -> Result<f64> {
    let k = MultiplierKernel::G(n);
    k.validate()?;
    let edges = panel_edges(k, default_cutoff(n));
    let x = *edges.last().expect("edges are nonempty");
    let (half, _) = sum_panels(&edges, tol / 4.0, |t| kernel_eval(k, t))?;
    let nf = n as f64;
    let z = |s: f64| {
        let w = num_complex::Complex64::new(x, s);
        let v = num_complex::Complex64::i() * num_complex::Complex64::from_polar((-s).exp(), x)
            / (w * (w + num_complex::Complex64::new(0.0, nf)));
        v.re * nf / PI
    };
    let (tail, _) = integrate(&z, 0.0, 60.0, tol * 1e-3, 10_000)?;
    Ok(2.0 * (half + tail))
}

/// `∫_ℝ D(n) = signed ∫ G(n+1) - signed ∫ G(n)`, which should be 0.
pub fn signed_integral_d(n: u64, tol: f64) -> Result<f64> {
    Ok(signed_integral_g(n + 1, tol)? - signed_integral_g(n, tol)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthStudy {
    /// `(n, ‖G(n)‖_1)`.
    pub series: ExperimentSeries,
    /// Least-squares `a log n + b` over the upper half of the `n` list.
    pub fit_a: f64,
    pub fit_b: f64,
    pub fit_residuals: Vec<f64>,
    /// `(n, (N_{4n} - N_n) / log 4)` for each `n` with `4n` also in the list.
    pub slopes: Vec<(f64, f64)>,
}

impl GrowthStudy {
    /// `max/min - 1` over the slope estimates.
    pub fn slope_spread(&self) -> f64 {
        let max = self.slopes.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let min = self.slopes.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        max / min - 1.0
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,l1_norm,slope_estimate\n");
        for &(n, v) in &self.series.points {
            let slope = self
                .slopes
                .iter()
                .find(|s| s.0 == n)
                .map(|s| format!("{:?}", s.1))
                .unwrap_or_default();
            out.push_str(&format!("{n},{v:?},{slope}\n"));
        }
        out
    }
}

/// Growth analysis of an arbitrary norm sequence `n ↦ N_n`.
pub fn growth_study_with(n_list: &[u64], norm: impl Fn(u64) -> Result<f64> + Sync) -> Result<GrowthStudy> {
    if n_list.len() < 2 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("n_list needs >= 2 strictly increasing entries"));
    }
    let values = n_list.par_iter().map(|&n| norm(n)).collect::<Result<Vec<f64>>>()?;
    let pts: Vec<(f64, f64)> = n_list.iter().map(|&n| n as f64).zip(values.iter().copied()).collect();
    let upper = &pts[pts.len() / 2..];
    let upper = if upper.len() < 2 { &pts[pts.len() - 2..] } else { upper };
    let m = upper.len() as f64;
    let mx = upper.iter().map(|p| p.0.ln()).sum::<f64>() / m;
    let my = upper.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = upper.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    let sxy: f64 = upper.iter().map(|p| (p.0.ln() - mx) * (p.1 - my)).sum();
    let fit_a = sxy / sxx;
    let fit_b = my - fit_a * mx;
    let fit_residuals = upper.iter().map(|p| p.1 - (fit_a * p.0.ln() + fit_b)).collect();
    let slopes = n_list
        .iter()
        .enumerate()
        .filter_map(|(i, &n)| {
            let j = n_list.iter().position(|&q| Some(q) == n.checked_mul(4))?;
            Some((n as f64, (values[j] - values[i]) / 4f64.ln()))
        })
        .collect();
    Ok(GrowthStudy {
        series: ExperimentSeries::from_points(pts),
        fit_a,
        fit_b,
        fit_residuals,
        slopes,
    })
}

pub const DEFAULT_TOL: f64 = 1e-8;

pub fn growth_study(n_list: &[u64]) -> Result<GrowthStudy> {
    growth_study_at(n_list, DEFAULT_TOL)
}

/// [`growth_study`] with each norm computed to absolute tolerance `tol`.
pub fn growth_study_at(n_list: &[u64], tol: f64) -> Result<GrowthStudy> {
    growth_study_with(n_list, |n| Ok(l1_norm(MultiplierKernel::G(n), tol)?.value))
}

/// `(n, n ‖D(n)‖_1)` with running maximum.
pub fn diff_study(n_list: &[u64]) -> Result<ExperimentSeries> {
    diff_study_at(n_list, DEFAULT_TOL)
}

/// [`diff_study`] with `‖D(n)‖_1` computed to tolerance `tol / n`.
pub fn diff_study_at(n_list: &[u64], tol: f64) -> Result<ExperimentSeries> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("n_list must be nonempty and strictly increasing"));
    }
    let pts = n_list
        .par_iter()
        .map(|&n| {
            let v = l1_norm(MultiplierKernel::D(n), tol / n as f64)?.value;
            Ok((n as f64, n as f64 * v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentSeries::from_points(pts))
}

/// `max |G(n+1)(x) - G(n)(x) - D(n)(x)|` over `points` equally spaced `x` in
/// `[-x_max, x_max]`.
pub fn identity_defect(n: u64, x_max: f64, points: usize) -> f64 {
    (0..points)
        .into_par_iter()
        .map(|i| {
            let x = -x_max + 2.0 * x_max * i as f64 / (points - 1) as f64;
            (kernel_eval(MultiplierKernel::G(n + 1), x)
                - kernel_eval(MultiplierKernel::G(n), x)
                - kernel_eval(MultiplierKernel::D(n), x))
            .abs()
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn values_at_origin() {
        assert_abs_diff_eq!(kernel_eval(MultiplierKernel::G(1), 0.0), 2.0 / PI, epsilon = 1e-16);
        assert_abs_diff_eq!(
            kernel_eval(MultiplierKernel::D(1), 0.0),
            -1.0 / (2.0 * PI),
            epsilon = 1e-16
        );
        for n in [1u64, 3, 50] {
            let nf = n as f64;
            assert_abs_diff_eq!(
                kernel_eval(MultiplierKernel::G(n), 1e-9),
                (nf + 1.0) / (PI * nf),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn taylor_branch_is_continuous() {
        for n in [1u64, 2, 10, 1000] {
            for k in [MultiplierKernel::G(n), MultiplierKernel::D(n)] {
                for x in [1e-6, 5e-5, 0.99999e-4] {
                    let a = kernel_eval(k, x);
                    let b = closed_form(k, x);
                    assert!((a - b).abs() < 1e-14 * a.abs(), "{k:?} {x}");
                }
            }
        }
    }

    #[test]
    fn kernels_are_even() {
        for n in [1u64, 7, 64] {
            for x in [0.3, 2.0, 17.5, 1e3] {
                for k in [MultiplierKernel::G(n), MultiplierKernel::D(n)] {
                    assert_eq!(kernel_eval(k, x), kernel_eval(k, -x));
                }
            }
        }
    }

    #[test]
    fn amplitude_phase_form_matches() {
        for n in [1u64, 5, 100] {
            for k in [MultiplierKernel::G(n), MultiplierKernel::D(n)] {
                for x in [0.01, 0.7, 3.0, 40.0, 900.0] {
                    let v = k.amplitude(x) * k.phase(x).cos().abs();
                    assert!(
                        (v - kernel_eval(k, x).abs()).abs() < 1e-12 * k.amplitude(x),
                        "{k:?} {x}"
                    );
                }
            }
        }
    }

    #[test]
    fn zeros_are_zeros() {
        for k in [MultiplierKernel::G(3), MultiplierKernel::D(3)] {
            for i in 0..20 {
                let z = k.zero(i);
                assert!(
                    kernel_eval(k, z).abs() < 1e-14 * k.amplitude(z).max(1e-300) + 1e-17,
                    "{k:?} {i}"
                );
            }
        }
    }

    #[test]
    fn pointwise_identity() {
        for n in [1u64, 2, 10, 100] {
            assert!(identity_defect(n, 200.0, 20_001) <= 1e-12);
        }
    }

    #[test]
    fn signed_integral_is_one() {
        for n in [1u64, 4, 64] {
            let v = signed_integral_g(n, 1e-9).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "n={n} {v}");
        }
        assert!(signed_integral_d(4, 1e-9).unwrap().abs() < 1e-6);
    }

    #[test]
    fn l1_norms_dominate_one() {
        let a = l1_norm(MultiplierKernel::G(1), 1e-8).unwrap();
        let b = l1_norm(MultiplierKernel::G(16), 1e-8).unwrap();
        assert!(a.value >= 1.0 && b.value > a.value);
        assert!(a.tail <= a.tail_bound);
        // refining the cutoff moves the value by far less than the tail itself
        let c = l1_norm_with_cutoff(MultiplierKernel::G(16), 1e-8, 4e4).unwrap();
        assert!((c.value - b.value).abs() < 1e-7);
    }

    #[test]
    fn d_norm_at_one_is_finite() {
        let v = l1_norm(MultiplierKernel::D(1), 1e-9).unwrap().value;
        assert!(v.is_finite() && v > 0.0);
        assert!(l1_norm(MultiplierKernel::D(0), 1e-9).is_err());
    }

    #[test]
    fn growth_of_constant_sequence_is_flat() {
        let c = l1_norm(MultiplierKernel::G(4), 1e-8).unwrap().value;
        let s = growth_study_with(&[4, 16, 64], |_| Ok(c)).unwrap();
        assert!(s.slopes.iter().all(|x| x.1.abs() < 1e-15));
        let s = growth_study_with(&[2, 4], |n| Ok(n as f64)).unwrap();
        assert!(s.fit_residuals.iter().all(|r| r.abs() < 1e-12));
        assert!(s.slopes.is_empty());
    }
}
