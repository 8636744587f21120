//! Critical points of admissible functions, the identity `ξ = φ(f(ξ))` on the
//! boundary of convergence, the sharp threshold constants, and two grid scans:
//! the Sinclair-type classification of rays and the feasibility scan for
//! spectral points constrained by `|1 - λ^q| <= b`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FunctionSpec;
use crate::quad::{golden_max, CompensatedSum};
use crate::series::{class_p_check, invert_spec_scaled, radius_estimate, ClassP, PowerSeries};

pub const DEFAULT_SEARCH_LIMIT: f64 = 10.0;
const SCAN_STEPS: usize = 2048;
const BISECTION_RTOL: f64 = 1e-14;

/// Least positive zero of `f'`, located by a sign scan of `(0, search_limit)`
/// in 2048 steps and refined by bisection.
///
/// `f'` must be positive near 0; the first sign change is returned.
pub fn find_critical_xi(spec: &FunctionSpec, search_limit: f64) -> Result<f64> {
    spec.validate()?;
    if !(search_limit > 0.0 && search_limit.is_finite()) {
        return Err(Error::param("search limit must be positive and finite"));
    }
    let not_admissible = Error::NotAdmissible { limit: search_limit };
    let d = |x: f64| spec.deriv_real(x);
    if !(d(0.0) > 0.0) {
        return Err(not_admissible);
    }
    let h = search_limit / SCAN_STEPS as f64;
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=SCAN_STEPS {
        let x = i as f64 * h;
        let v = d(x);
        if v.is_nan() {
            return Err(not_admissible);
        }
        if v <= 0.0 {
            hi = Some(x);
            break;
        }
        lo = x;
    }
    let mut hi = hi.ok_or(not_admissible)?;
    while hi - lo > BISECTION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if d(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Summary of the boundary identity for an admissible function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub family: String,
    pub order: usize,
    pub xi: f64,
    pub f_xi: f64,
    /// Estimated radius of convergence of the inverse.
    pub radius_est: f64,
    /// `Σ_{k<=N} φ_k f(ξ)^k`.
    pub identity_partial: f64,
    /// `ξ - identity_partial`.
    pub residual: f64,
    /// First coefficient of `φ(f(ξ) w)` below `-1e-13`, if any.
    pub first_negative: Option<usize>,
}

/// Coefficients `φ_k δ^k` of the inverse evaluated on the circle of radius
/// `δ = scale`, in double precision.
pub fn scaled_inverse(spec: &FunctionSpec, order: usize, scale: f64) -> Result<PowerSeries<f64>> {
    spec.validate()?;
    invert_spec_scaled(spec, order, &scale)
}

/// Running partial sums of a coefficient sequence, compensated.
pub fn partial_sums(coeffs: &[f64]) -> Vec<f64> {
    let mut acc = CompensatedSum::new();
    coeffs
        .iter()
        .map(|&c| {
            acc.add(c);
            acc.value()
        })
        .collect()
}

pub fn admissibility_report(spec: &FunctionSpec, order: usize) -> Result<AdmissibilityReport> {
    let xi = find_critical_xi(spec, DEFAULT_SEARCH_LIMIT)?;
    let f_xi = spec.eval_real(xi);
    let psi = scaled_inverse(spec, order, f_xi)?;
    let radius_est = f_xi * radius_estimate(&psi)?;
    let identity_partial = *partial_sums(psi.coeffs()).last().expect("order >= 1");
    let first_negative = match class_p_check(&psi, 1e-13) {
        ClassP::FirstNegative { index } => Some(index),
        ClassP::Certified { .. } => None,
    };
    Ok(AdmissibilityReport {
        family: spec.to_string(),
        order,
        xi,
        f_xi,
        radius_est,
        identity_partial,
        residual: xi - identity_partial,
        first_negative,
    })
}

/// The sharp constants attached to each admissible family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdKind {
    /// `n^n / (n+1)^{n+1}`
    EsterleN { n: u32 },
    /// `(1 - n/m)(n/m)^{n/(m-n)}`
    Esterle2 { n: u32, m: u32 },
    /// `(m e)^{-1/m}`
    PowerM { m: u32 },
    /// `(s-1) s^{-s/(s-1)}`
    ExpDiff { s: f64 },
    /// `2 e^{-s atan(1/s)} / sqrt(1+s^2)`
    SinclairSin { s: f64 },
    /// `2 sin(π/(c+1))`
    Gorin { c: f64 },
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdKind::EsterleN { n } => write!(f, "esterle_n(n={n})"),
            ThresholdKind::Esterle2 { n, m } => write!(f, "esterle2(n={n},m={m})"),
            ThresholdKind::PowerM { m } => write!(f, "power_m(m={m})"),
            ThresholdKind::ExpDiff { s } => write!(f, "expdiff(s={s})"),
            ThresholdKind::SinclairSin { s } => write!(f, "sinclair_sin(s={s})"),
            ThresholdKind::Gorin { c } => write!(f, "gorin(c={c})"),
        }
    }
}

impl ThresholdKind {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ThresholdKind::EsterleN { n } => n >= 1,
            ThresholdKind::Esterle2 { n, m } => n >= 1 && m > n,
            ThresholdKind::PowerM { m } => m >= 1,
            ThresholdKind::ExpDiff { s } => s.is_finite() && s > 1.0,
            ThresholdKind::SinclairSin { s } => s.is_finite() && s >= 0.0,
            ThresholdKind::Gorin { c } => c.is_finite() && c > 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("parameters out of range for {self}")))
        }
    }

    /// The function family whose `f(ξ)` the constant equals, if any.
    pub fn family(&self) -> Option<FunctionSpec> {
        match *self {
            ThresholdKind::EsterleN { n } => Some(FunctionSpec::ZPow { n }),
            ThresholdKind::Esterle2 { n, m } => Some(FunctionSpec::PowDiff { n, m }),
            ThresholdKind::PowerM { m } => Some(FunctionSpec::ZExpM { m }),
            ThresholdKind::ExpDiff { s } => Some(FunctionSpec::ExpDiff { s }),
            ThresholdKind::SinclairSin { s } => Some(FunctionSpec::ExpSin { s }),
            ThresholdKind::Gorin { .. } => None,
        }
    }
}

pub fn threshold(kind: ThresholdKind) -> Result<f64> {
    kind.validate()?;
    Ok(match kind {
        ThresholdKind::EsterleN { n } => {
            let n = n as f64;
            // n^n / (n+1)^{n+1} = (n/(n+1))^n / (n+1)
            (n / (n + 1.0)).powf(n) / (n + 1.0)
        }
        ThresholdKind::Esterle2 { n, m } => {
            let r = n as f64 / m as f64;
            (1.0 - r) * r.powf(n as f64 / (m - n) as f64)
        }
        ThresholdKind::PowerM { m } => (m as f64 * std::f64::consts::E).powf(-1.0 / m as f64),
        ThresholdKind::ExpDiff { s } => (s - 1.0) * s.powf(-s / (s - 1.0)),
        ThresholdKind::SinclairSin { s } => 2.0 * (-s * (1.0 / s).atan()).exp() / (1.0 + s * s).sqrt(),
        ThresholdKind::Gorin { c } => 2.0 * (PI / (c + 1.0)).sin(),
    })
}

/// `|f(ξ) - threshold|` with `ξ` found numerically (twice `f(ξ)` for the
/// sine family). For the Gorin constant the comparison is against the
/// minimum of `|1 - e^{iφ}|` over the arc `[2π/(c+1), 2cπ/(c+1)]`, sampled.
pub fn threshold_consistency(kind: ThresholdKind) -> Result<f64> {
    let t = threshold(kind)?;
    let numeric = match kind {
        ThresholdKind::Gorin { c } => {
            let (a, b) = (2.0 * PI / (c + 1.0), 2.0 * c * PI / (c + 1.0));
            let steps = 4096;
            (0..=steps)
                .map(|i| {
                    let phi = a + (b - a) * i as f64 / steps as f64;
                    (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, phi)).norm()
                })
                .fold(f64::INFINITY, f64::min)
        }
        _ => {
            let spec = kind.family().expect("non-Gorin kinds map to a family");
            let xi = find_critical_xi(&spec, DEFAULT_SEARCH_LIMIT)?;
            let v = spec.eval_real(xi);
            if matches!(kind, ThresholdKind::SinclairSin { .. }) {
                2.0 * v
            } else {
                v
            }
        }
    };
    Ok((numeric - t).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayClass {
    /// Some point on the ray exceeds `f(ξ) + margin`.
    Cond1,
    /// Every sample with `t < ξ` lies below `f(ξ) - margin`.
    Cond2,
    /// Neither strictly, but the ray touches `f(ξ)` within the margin.
    BoundaryEqual,
    /// The evaluation produced NaN; nothing could be certified.
    Violation,
}

impl fmt::Display for RayClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RayClass::Cond1 => "cond1",
            RayClass::Cond2 => "cond2",
            RayClass::BoundaryEqual => "boundary_equal",
            RayClass::Violation => "violation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinclairConfig {
    pub theta_count: usize,
    pub t_max: f64,
    pub t_count: usize,
    pub margin: f64,
}

impl Default for SinclairConfig {
    fn default() -> Self {
        SinclairConfig {
            theta_count: 720,
            t_max: 50.0,
            t_count: 4096,
            margin: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayResult {
    pub theta: f64,
    pub class: RayClass,
    /// Refined supremum of `|f(t e^{iθ})|` over the sampled `t` range.
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinclairScan {
    pub family: String,
    pub xi: f64,
    pub f_xi: f64,
    pub rays: Vec<RayResult>,
}

impl SinclairScan {
    pub fn count(&self, class: RayClass) -> usize {
        self.rays.iter().filter(|r| r.class == class).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,classification,sup\n");
        for r in &self.rays {
            out.push_str(&format!("{:?},{},{:?}\n", r.theta, r.class, r.sup));
        }
        out
    }
}

/// Angles `-π + 2π(j+1)/count`, `j = 0..count`, so `π` is always included
/// and `0` is included for even counts.
pub fn theta_grid(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| -PI + 2.0 * PI * (j + 1) as f64 / count as f64)
        .collect()
}

/// Classifies each ray `t e^{iθ}` by the two alternative conditions of the
/// Sinclair-type theorem.
pub fn sinclair_scan(spec: &FunctionSpec, cfg: &SinclairConfig) -> Result<SinclairScan> {
    if !spec.is_entire() {
        return Err(Error::param(format!("{spec} is not entire")));
    }
    if cfg.theta_count == 0 || cfg.t_count < 2 || !(cfg.margin >= 0.0) {
        return Err(Error::param("scan needs theta_count >= 1, t_count >= 2, margin >= 0"));
    }
    let xi = find_critical_xi(spec, DEFAULT_SEARCH_LIMIT)?;
    let f_xi = spec.eval_real(xi);
    let t_min = 1e-4 * xi;
    if !(cfg.t_max > t_min) {
        return Err(Error::param("t_max must exceed 1e-4 * xi"));
    }
    let (l0, l1) = (t_min.ln(), cfg.t_max.ln());
    let ts: Vec<f64> = (0..cfg.t_count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (cfg.t_count - 1) as f64).exp())
        .collect();
    let rays = theta_grid(cfg.theta_count)
        .into_par_iter()
        .map(|theta| classify_ray(spec, theta, &ts, xi, f_xi, cfg.margin))
        .collect();
    Ok(SinclairScan {
        family: spec.to_string(),
        xi,
        f_xi,
        rays,
    })
}

fn classify_ray(spec: &FunctionSpec, theta: f64, ts: &[f64], xi: f64, f_xi: f64, margin: f64) -> RayResult {
    let dir = Complex64::from_polar(1.0, theta);
    let abs_at = |t: f64| spec.eval_complex(dir * t).norm();
    let vals: Vec<f64> = ts.iter().map(|&t| abs_at(t)).collect();
    if vals.iter().any(|v| v.is_infinite()) {
        return RayResult {
            theta,
            class: RayClass::Cond1,
            sup: f64::INFINITY,
        };
    }
    if vals.iter().any(|v| v.is_nan()) {
        return RayResult {
            theta,
            class: RayClass::Violation,
            sup: f64::NAN,
        };
    }
    let (imax, &vmax) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("t grid is nonempty");
    let lo = ts[imax.saturating_sub(1)].ln();
    let hi = ts[(imax + 1).min(ts.len() - 1)].ln();
    let (_, refined) = golden_max(|lt| abs_at(lt.exp()), lo, hi, 60);
    let sup = vmax.max(refined);
    let below = vals
        .iter()
        .zip(ts)
        .filter(|(_, &t)| t < xi)
        .map(|(v, _)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let class = if sup > f_xi + margin {
        RayClass::Cond1
    } else if below < f_xi - margin {
        RayClass::Cond2
    } else {
        RayClass::BoundaryEqual
    };
    RayResult { theta, class, sup }
}

/// Half-width of the annulus `1 - ε <= |λ| <= 1 + ε` in the feasibility scan.
pub const FEASIBILITY_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityGrid {
    /// Odd counts put `|λ| = 1` on the grid.
    pub radii: usize,
    /// A multiple of 7 puts `e^{2πi/7}` on the grid.
    pub angles: usize,
    pub eps: f64,
}

impl Default for FeasibilityGrid {
    fn default() -> Self {
        FeasibilityGrid {
            radii: 513,
            angles: 7 * 4096,
            eps: FEASIBILITY_EPS,
        }
    }
}

impl FeasibilityGrid {
    pub fn radius(&self, i: usize) -> f64 {
        if self.radii == 1 {
            return 1.0;
        }
        1.0 - self.eps + 2.0 * self.eps * i as f64 / (self.radii - 1) as f64
    }

    pub fn radial_step(&self) -> f64 {
        if self.radii == 1 {
            0.0
        } else {
            2.0 * self.eps / (self.radii - 1) as f64
        }
    }

    pub fn angular_step(&self) -> f64 {
        2.0 * PI / self.angles as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasiblePoint {
    pub radius_index: usize,
    pub angle_index: usize,
    pub r: f64,
    /// Argument in `(-π, π]`.
    pub theta: f64,
    pub re: f64,
    pub im: f64,
}

/// All grid points `λ` with `|1 - λ^q| <= b` for every `(q, b)`.
///
/// Angles are handled as exact residues: the argument of `λ^q` is
/// `2π (q j mod A) / A` for grid angle `j`, so large exponents lose no
/// accuracy to argument reduction.
pub fn lambda_feasibility_scan(constraints: &[(u64, f64)], grid: &FeasibilityGrid) -> Result<Vec<FeasiblePoint>> {
    if constraints.is_empty() {
        return Err(Error::param("constraint list is empty"));
    }
    if constraints.iter().any(|&(q, b)| q < 1 || !(b >= 0.0)) {
        return Err(Error::param("constraints need q >= 1 and b >= 0"));
    }
    if grid.radii == 0 || grid.angles == 0 || !(grid.eps >= 0.0 && grid.eps < 1.0) {
        return Err(Error::param("grid needs radii, angles >= 1 and 0 <= eps < 1"));
    }
    let a = grid.angles as u128;
    let cos_table: Vec<f64> = (0..grid.angles)
        .map(|j| (2.0 * PI * j as f64 / grid.angles as f64).cos())
        .collect();
    let ln_r: Vec<f64> = (0..grid.radii).map(|i| grid.radius(i).ln()).collect();
    let points: Vec<FeasiblePoint> = (0..grid.angles)
        .into_par_iter()
        .flat_map_iter(|j| {
            let cosines: Vec<f64> = constraints
                .iter()
                .map(|&(q, _)| cos_table[((q as u128 % a) * j as u128 % a) as usize])
                .collect();
            let ln_r = &ln_r;
            (0..grid.radii).filter_map(move |i| {
                let feasible = constraints.iter().zip(&cosines).all(|(&(q, b), &c)| {
                    let lq = q as f64 * ln_r[i];
                    if lq > 700.0 {
                        return false;
                    }
                    let rq = lq.exp();
                    // |1 - ρ e^{iφ}|² = 1 - 2ρ cos φ + ρ²
                    (1.0 - 2.0 * rq * c + rq * rq).max(0.0) <= b * b
                });
                feasible.then(|| {
                    let r = grid.radius(i);
                    let mut theta = 2.0 * PI * j as f64 / grid.angles as f64;
                    if theta > PI {
                        theta -= 2.0 * PI;
                    }
                    FeasiblePoint {
                        radius_index: i,
                        angle_index: j,
                        r,
                        theta,
                        re: r * theta.cos(),
                        im: r * theta.sin(),
                    }
                })
            })
        })
        .collect();
    Ok(points)
}

pub fn feasible_to_csv(points: &[FeasiblePoint]) -> String {
    let mut out = String::from("re_lambda,im_lambda,r,theta\n");
    for p in points {
        out.push_str(&format!("{:?},{:?},{:?},{:?}\n", p.re, p.im, p.r, p.theta));
    }
    out
}

/// Constraints `(base^k, b)` for `k = 0..=k_max`.
pub fn power_constraints(base: u64, k_max: u32, b: f64) -> Result<Vec<(u64, f64)>> {
    (0..=k_max)
        .map(|k| {
            base.checked_pow(k)
                .map(|q| (q, b))
                .ok_or_else(|| Error::Range(format!("{base}^{k} overflows u64")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn critical_points_of_basic_families() {
        let xi = find_critical_xi(&FunctionSpec::ZExpM { m: 1 }, 10.0).unwrap();
        assert_abs_diff_eq!(xi, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            FunctionSpec::ZExpM { m: 1 }.eval_real(xi),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
        let xi = find_critical_xi(&FunctionSpec::ZPow { n: 1 }, 10.0).unwrap();
        assert_abs_diff_eq!(xi, 0.5, epsilon = 1e-14);
        let xi = find_critical_xi(&FunctionSpec::ExpDiff { s: 2.0 }, 10.0).unwrap();
        assert_abs_diff_eq!(xi, 2f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(FunctionSpec::ExpDiff { s: 2.0 }.eval_real(xi), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn critical_point_closed_forms() {
        for n in 1..=6u32 {
            let xi = find_critical_xi(&FunctionSpec::ZPow { n }, 10.0).unwrap();
            assert_abs_diff_eq!(xi, 1.0 / (n as f64 + 1.0), epsilon = 1e-13);
        }
        for m in 1..=5u32 {
            let xi = find_critical_xi(&FunctionSpec::ZExpM { m }, 10.0).unwrap();
            assert_abs_diff_eq!(xi, (m as f64).powf(-1.0 / m as f64), epsilon = 1e-13);
        }
        for s in [0.0, 0.5, 1.0, 3.0] {
            let xi = find_critical_xi(&FunctionSpec::ExpSin { s }, 10.0).unwrap();
            let expect = if s == 0.0 { PI / 2.0 } else { (1.0 / s).atan() };
            assert_abs_diff_eq!(xi, expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn derivative_vanishes_at_xi() {
        let specs = [
            FunctionSpec::ZPow { n: 3 },
            FunctionSpec::PowDiff { n: 2, m: 7 },
            FunctionSpec::ExpDiff { s: 1.5 },
            FunctionSpec::ExpSin { s: 2.0 },
            FunctionSpec::ZExpM { m: 4 },
        ];
        for spec in specs {
            let xi = find_critical_xi(&spec, 10.0).unwrap();
            let h = 1e-5;
            let f2 = (spec.deriv_real(xi + h) - spec.deriv_real(xi - h)) / (2.0 * h);
            assert!(spec.deriv_real(xi).abs() <= 1e-10 * f2.abs().max(1.0), "{spec}");
            for i in 1..100 {
                assert!(spec.deriv_real(xi * i as f64 / 100.0) > 0.0);
            }
        }
    }

    #[test]
    fn identity_is_not_admissible() {
        assert_eq!(
            find_critical_xi(&FunctionSpec::Identity, 10.0),
            Err(Error::NotAdmissible { limit: 10.0 })
        );
        assert!(admissibility_report(&FunctionSpec::Identity, 10).is_err());
    }

    #[test]
    fn report_for_positive_lambert() {
        let r = admissibility_report(&FunctionSpec::ZExpM { m: 1 }, 400).unwrap();
        assert_abs_diff_eq!(r.xi, 1.0, epsilon = 1e-13);
        assert!(r.identity_partial <= r.xi + 1e-12);
        // tail Σ_{m>N} m^{-3/2}/√(2π) ≈ 2/√(2πN)
        let tail = 2.0 / (2.0 * PI * 400.0).sqrt();
        assert!((r.residual - tail).abs() < 0.2 * tail, "{}", r.residual);
        assert!((r.radius_est - r.f_xi).abs() < 0.01);
        assert_eq!(r.first_negative, None);
    }

    #[test]
    fn partial_sums_are_monotone_and_bounded() {
        let spec = FunctionSpec::ZPow { n: 2 };
        let xi = find_critical_xi(&spec, 10.0).unwrap();
        let psi = scaled_inverse(&spec, 300, spec.eval_real(xi)).unwrap();
        let sums = partial_sums(psi.coeffs());
        assert!(sums.windows(2).all(|w| w[1] >= w[0]));
        assert!(*sums.last().unwrap() <= xi + 1e-12);
    }

    #[test]
    fn threshold_values() {
        assert_eq!(threshold(ThresholdKind::EsterleN { n: 1 }).unwrap(), 0.25);
        assert_eq!(threshold(ThresholdKind::ExpDiff { s: 2.0 }).unwrap(), 0.25);
        let g = threshold(ThresholdKind::Gorin { c: 5.0 }).unwrap();
        assert!((g - 1.0).abs() <= 2.0 * f64::EPSILON);
        assert_abs_diff_eq!(
            threshold(ThresholdKind::PowerM { m: 1 }).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(
            threshold(ThresholdKind::SinclairSin { s: 1.0 }).unwrap(),
            2f64.sqrt() * (-PI / 4.0).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn threshold_parameter_ranges() {
        for k in [
            ThresholdKind::EsterleN { n: 0 },
            ThresholdKind::Esterle2 { n: 3, m: 3 },
            ThresholdKind::PowerM { m: 0 },
            ThresholdKind::ExpDiff { s: 1.0 },
            ThresholdKind::SinclairSin { s: -0.1 },
            ThresholdKind::Gorin { c: 1.0 },
        ] {
            assert!(matches!(threshold(k), Err(Error::Parameter(_))), "{k}");
        }
    }

    #[test]
    fn consistency_examples() {
        for k in [
            ThresholdKind::Esterle2 { n: 1, m: 2 },
            ThresholdKind::SinclairSin { s: 1.0 },
            ThresholdKind::PowerM { m: 1 },
            ThresholdKind::Gorin { c: 3.0 },
        ] {
            assert!(threshold_consistency(k).unwrap() <= 1e-12, "{k}");
        }
    }

    #[test]
    fn gorin_crosses_one_at_five() {
        for i in 1..40 {
            let c = 1.0 + 4.0 * i as f64 / 40.0;
            assert!(threshold(ThresholdKind::Gorin { c }).unwrap() > 1.0);
            let c = 5.0 + 5.0 * i as f64 / 40.0;
            assert!(threshold(ThresholdKind::Gorin { c }).unwrap() < 1.0);
        }
    }

    fn small_cfg() -> SinclairConfig {
        SinclairConfig {
            theta_count: 72,
            t_max: 30.0,
            t_count: 1024,
            margin: 1e-9,
        }
    }

    fn class_at(scan: &SinclairScan, theta: f64) -> RayResult {
        *scan
            .rays
            .iter()
            .min_by(|a, b| (a.theta - theta).abs().total_cmp(&(b.theta - theta).abs()))
            .unwrap()
    }

    #[test]
    fn sinclair_examples() {
        let scan = sinclair_scan(&FunctionSpec::Sin, &small_cfg()).unwrap();
        assert_eq!(class_at(&scan, PI / 2.0).class, RayClass::Cond1);
        let scan = sinclair_scan(&FunctionSpec::ExpSin { s: 1.0 }, &small_cfg()).unwrap();
        assert_eq!(class_at(&scan, 0.0).class, RayClass::Cond2);
        let scan = sinclair_scan(&FunctionSpec::ExpDiff { s: 2.0 }, &small_cfg()).unwrap();
        for th in [PI / 2.0, -PI / 2.0] {
            let r = class_at(&scan, th);
            assert_eq!(r.class, RayClass::Cond1);
            assert_abs_diff_eq!(r.sup, 2.0, epsilon = 1e-9);
        }
        assert_eq!(scan.count(RayClass::Violation), 0);
    }

    #[test]
    fn sinclair_rejects_non_entire() {
        assert!(sinclair_scan(&FunctionSpec::InvPow { n: 1 }, &small_cfg()).is_err());
    }

    #[test]
    fn feasibility_trivial_constraint() {
        let grid = FeasibilityGrid {
            radii: 9,
            angles: 64,
            eps: 1e-3,
        };
        let pts = lambda_feasibility_scan(&[(1, 0.0)], &grid).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!((pts[0].r, pts[0].theta), (1.0, 0.0));
        assert!(lambda_feasibility_scan(&[], &grid).is_err());
    }

    #[test]
    fn feasibility_keeps_seventh_root_for_powers_of_six() {
        let grid = FeasibilityGrid {
            radii: 33,
            angles: 7 * 64,
            eps: 1e-3,
        };
        let pts = lambda_feasibility_scan(&power_constraints(6, 6, 0.9).unwrap(), &grid).unwrap();
        assert!(pts.iter().any(|p| p.angle_index == 64 && p.r == 1.0));
        assert!(2.0 * (PI / 7.0).sin() < 0.9);
    }

    #[test]
    fn feasibility_powers_of_two_collapse_to_one() {
        let grid = FeasibilityGrid {
            radii: 65,
            angles: 7 * 256,
            eps: 1e-3,
        };
        let pts = lambda_feasibility_scan(&power_constraints(2, 20, 0.99).unwrap(), &grid).unwrap();
        assert!(!pts.is_empty());
        assert!(pts
            .iter()
            .all(|p| p.angle_index == 0 && (p.r - 1.0).abs() <= grid.radial_step() + 1e-15));
    }
}
