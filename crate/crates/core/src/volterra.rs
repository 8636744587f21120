//! Fractional Volterra operators: Fourier symbols on the line and Nyström
//! matrices on `[0, 1]`.
//!
//! The convolution kernel `u^{α-1} e^{-u} / Γ(α)` on the half line has
//! Fourier symbol `(1 + iξ)^{-α}`. Averaging over `α ∈ [0, 1/2]` gives the
//! composite symbol `h(ξ) = (1 - w^{-1/2}) / log w` with `w = 1 + iξ`. For a
//! symbol `σ` with positive real part, `t σ e^{-tσ}` is the multiplier of
//! `t A e^{tA}` where `A` has symbol `-σ`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::experiment::ExperimentSeries;
use crate::matrix::{mat_exp, DenseOperator, NormKind};
use crate::quad::{gauss_legendre, golden_max};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolKind {
    /// `(1 + iξ)^{-α}`, principal branch.
    MAlpha { alpha: f64 },
    /// `∫_0^{1/2} (1 + iξ)^{-α} dα`.
    HComposite,
    /// `σ(ξ) = ξ`: a positive real control with `sup_x t x e^{-tx} = 1/e`.
    RealAxisTest,
}

impl SymbolKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SymbolKind::MAlpha { alpha } if !(alpha > 0.0 && alpha <= 1.0) => {
                Err(Error::param(format!("alpha must lie in (0, 1], got {alpha}")))
            }
            _ => Ok(()),
        }
    }

    /// `lim sup_t` of the supremum of `t |σ| e^{-t Re σ}`: `1/(e cos(απ/2))`
    /// for the fractional symbol and `1/e` for the other two.
    pub fn limit_constant(&self) -> f64 {
        let e = std::f64::consts::E;
        match *self {
            SymbolKind::MAlpha { alpha } => 1.0 / (e * (alpha * FRAC_PI_2).cos()),
            _ => 1.0 / e,
        }
    }
}

/// `(1 - e^{-L/2}) / L`, by its Taylor series near `L = 0`.
fn h_from_log(l: Complex64) -> Complex64 {
    if l.norm() < 1e-4 {
        // Σ_k (-L)^k / (2^{k+1} (k+1)!)
        return Complex64::new(0.5, 0.0) - l / 8.0 + l * l / 48.0 - l * l * l / 384.0;
    }
    (Complex64::new(1.0, 0.0) - (-l * 0.5).exp()) / l
}

/// `log(1 + i e^u)`, accurate for large and very negative `u`.
fn log_w(u: f64) -> Complex64 {
    if u > 0.0 {
        Complex64::new(u + 0.5 * (-2.0 * u).exp().ln_1p(), FRAC_PI_2 - (-u).exp().atan())
    } else {
        Complex64::new(0.5 * (2.0 * u).exp().ln_1p(), u.exp().atan())
    }
}

fn from_log(kind: SymbolKind, l: Complex64) -> Complex64 {
    match kind {
        SymbolKind::MAlpha { alpha } => (-l * alpha).exp(),
        SymbolKind::HComposite => h_from_log(l),
        SymbolKind::RealAxisTest => unreachable!("real-axis symbol has no logarithmic form"),
    }
}

/// `σ(ξ)` for real `ξ`.
pub fn symbol_eval(kind: SymbolKind, xi: f64) -> Result<Complex64> {
    kind.validate()?;
    Ok(match kind {
        SymbolKind::RealAxisTest => Complex64::new(xi, 0.0),
        _ => from_log(kind, Complex64::new(1.0, xi).ln()),
    })
}

/// `σ(e^u)`; reaches `ξ` far beyond the range of `1 + iξ` in floating point.
pub fn symbol_at_log_xi(kind: SymbolKind, u: f64) -> Complex64 {
    match kind {
        SymbolKind::RealAxisTest => Complex64::new(u.exp(), 0.0),
        _ => from_log(kind, log_w(u)),
    }
}

/// `t |σ| e^{-t Re σ}`.
pub fn multiplier_value(sigma: Complex64, t: f64) -> f64 {
    t * sigma.norm() * (-t * sigma.re).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiGrid {
    pub points: usize,
    /// Upper end of the grid; `None` means `min(e^{1.2 t}, 1e16)`.
    pub xi_max: Option<f64>,
    pub refine_iterations: usize,
}

impl Default for XiGrid {
    fn default() -> Self {
        XiGrid {
            points: 4096,
            xi_max: None,
            refine_iterations: 60,
        }
    }
}

impl XiGrid {
    /// Grid reaching `e^{1.2 t}` with no cap.
    pub fn uncapped() -> Self {
        XiGrid {
            xi_max: Some(f64::INFINITY),
            ..Self::default()
        }
    }

    /// `(ln ξ_min, ln ξ_max)` for the given symbol and time.
    fn log_range(&self, kind: SymbolKind, t: f64) -> (f64, f64) {
        match kind {
            SymbolKind::RealAxisTest => {
                let c = -t.ln();
                (c - 3.0 * std::f64::consts::LN_10, c + 3.0 * std::f64::consts::LN_10)
            }
            _ => {
                let hi = match self.xi_max {
                    None => (1.2 * t).min(16.0 * std::f64::consts::LN_10),
                    Some(x) if x.is_infinite() => 1.2 * t,
                    Some(x) => x.ln(),
                };
                (-6.0 * std::f64::consts::LN_10, hi.max(1.0))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolSup {
    pub t: f64,
    pub sup_value: f64,
    pub argmax_xi: f64,
    /// `arg σ(ξ*)` at the maximizer.
    pub arg_at_argmax: f64,
    /// The grid maximum sat at an end of the grid: the range is too short.
    pub boundary: bool,
}

/// `sup_ξ t |σ(ξ)| e^{-t Re σ(ξ)}` over `ξ = 0` and a log-spaced grid, with
/// golden-section refinement in `ln ξ` around the best grid point.
pub fn symbol_sup(kind: SymbolKind, t: f64, grid: &XiGrid) -> Result<SymbolSup> {
    kind.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t must be positive"));
    }
    if grid.points < 3 {
        return Err(Error::param("xi grid needs at least 3 points"));
    }
    let (u0, u1) = grid.log_range(kind, t);
    let us: Vec<f64> = (0..grid.points)
        .map(|i| u0 + (u1 - u0) * i as f64 / (grid.points - 1) as f64)
        .collect();
    let f = |u: f64| multiplier_value(symbol_at_log_xi(kind, u), t);
    let vals: Vec<f64> = us.par_iter().map(|&u| f(u)).collect();
    let (imax, &vmax) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is nonempty");
    let at_zero = multiplier_value(symbol_eval(kind, 0.0)?, t);
    if at_zero >= vmax {
        let s = symbol_eval(kind, 0.0)?;
        return Ok(SymbolSup {
            t,
            sup_value: at_zero,
            argmax_xi: 0.0,
            arg_at_argmax: s.arg(),
            boundary: false,
        });
    }
    let boundary = imax == 0 || imax == us.len() - 1;
    let lo = us[imax.saturating_sub(1)];
    let hi = us[(imax + 1).min(us.len() - 1)];
    let (mut u_best, mut v_best) = golden_max(f, lo, hi, grid.refine_iterations);
    if vmax > v_best {
        u_best = us[imax];
        v_best = vmax;
    }
    Ok(SymbolSup {
        t,
        sup_value: v_best,
        argmax_xi: u_best.exp(),
        arg_at_argmax: symbol_at_log_xi(kind, u_best).arg(),
        boundary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitStudy {
    pub kind: SymbolKind,
    pub rows: Vec<SymbolSup>,
    /// `(t, sup)` pairs.
    pub series: ExperimentSeries,
}

impl LimitStudy {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value,argmax,arg_at_argmax,boundary\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:?},{:?},{:?},{:?},{}\n",
                r.t, r.sup_value, r.argmax_xi, r.arg_at_argmax, r.boundary
            ));
        }
        out
    }
}

pub fn symbol_limit_study(kind: SymbolKind, t_list: &[f64], grid: &XiGrid) -> Result<LimitStudy> {
    if t_list.is_empty() || t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("t_list must be nonempty and strictly increasing"));
    }
    let rows = t_list
        .iter()
        .map(|&t| symbol_sup(kind, t, grid))
        .collect::<Result<Vec<_>>>()?;
    let series = ExperimentSeries::from_points(rows.iter().map(|r| (r.t, r.sup_value)).collect());
    Ok(LimitStudy { kind, rows, series })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    /// `u^{α-1} / Γ(α)`
    JAlpha { alpha: f64 },
    /// `u^{α-1} e^{-u} / Γ(α)`
    LAlpha { alpha: f64 },
    /// `-e^{-u} ∫_0^{1/2} u^{α-1} / Γ(α) dα`
    AComposite,
}

impl KernelKind {
    fn validate(&self) -> Result<()> {
        match *self {
            KernelKind::JAlpha { alpha } | KernelKind::LAlpha { alpha } if !(alpha > 0.0 && alpha <= 1.0) => {
                Err(Error::param(format!("alpha must lie in (0, 1], got {alpha}")))
            }
            _ => Ok(()),
        }
    }
}

/// A Nyström discretization on the uniform mesh `x_i = (i + 1) h`, `h = 1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    pub kind: KernelKind,
    pub grid_size: usize,
    pub h: f64,
    pub matrix: DenseOperator<f64>,
}

impl KernelOperator {
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.grid_size).map(|i| (i + 1) as f64 * self.h).collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.grid_size;
        let e = self.matrix.entries();
        (0..n).map(|i| (0..=i).map(|j| e[i * n + j].re * v[j]).sum()).collect()
    }
}

/// `∫ over cell k of u^{α-1}/Γ(α)` where the cell is `[k h, (k+1) h]`.
fn j_cell(alpha: f64, h: f64, k: usize) -> f64 {
    let k = k as f64;
    h.powf(alpha) * ((k + 1.0).powf(alpha) - k.powf(alpha)) / gamma(alpha + 1.0)
}

/// Entry `(i, j)` integrates the kernel in `u = x_i - y` over mesh cell `j`,
/// exactly for the weak singularity; the `e^{-u}` factor is taken at the
/// cell midpoint. For the composite kernel the `α` integral is a 32-point
/// Gauss–Legendre rule on `[0, 1/2]`.
pub fn build_kernel(kind: KernelKind, grid_size: usize) -> Result<KernelOperator> {
    kind.validate()?;
    if grid_size < 8 {
        return Err(Error::param("grid_size must be >= 8"));
    }
    let h = 1.0 / grid_size as f64;
    // weights depend on i - j only
    let weights: Vec<f64> = match kind {
        KernelKind::JAlpha { alpha } => (0..grid_size).map(|k| j_cell(alpha, h, k)).collect(),
        KernelKind::LAlpha { alpha } => (0..grid_size)
            .map(|k| j_cell(alpha, h, k) * (-(k as f64 + 0.5) * h).exp())
            .collect(),
        KernelKind::AComposite => {
            let (x, w) = gauss_legendre(32);
            let nodes: Vec<(f64, f64)> = x.iter().zip(&w).map(|(x, w)| (0.25 * (x + 1.0), 0.25 * w)).collect();
            (0..grid_size)
                .map(|k| {
                    let a: f64 = nodes.iter().map(|&(al, wt)| wt * j_cell(al, h, k)).sum();
                    -a * (-(k as f64 + 0.5) * h).exp()
                })
                .collect()
        }
    };
    let mut m = DenseOperator::zeros(grid_size);
    for i in 0..grid_size {
        for j in 0..=i {
            m.set(i, j, Complex64::new(weights[i - j], 0.0));
        }
    }
    Ok(KernelOperator {
        kind,
        grid_size,
        h,
        matrix: m,
    })
}

/// `(t, t ‖K e^{tK}‖)` for each `t`.
pub fn semigroup_norm_curve(k: &DenseOperator<f64>, t_list: &[f64], kind: NormKind) -> Result<ExperimentSeries> {
    if t_list.is_empty() || t_list.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::param("t_list must be nonempty and positive"));
    }
    let pts = t_list
        .iter()
        .map(|&t| {
            let e = mat_exp(k, t)?;
            Ok((t, t * k.matmul(&e).op_norm(kind)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentSeries::from_points(pts))
}

/// Curve on `grid_size` together with its change from the half-size mesh.
pub fn semigroup_curve_refined(
    kind: KernelKind,
    grid_size: usize,
    t_list: &[f64],
    norm: NormKind,
) -> Result<(ExperimentSeries, Vec<f64>)> {
    let fine = semigroup_norm_curve(&build_kernel(kind, grid_size)?.matrix, t_list, norm)?;
    let coarse = semigroup_norm_curve(&build_kernel(kind, grid_size / 2)?.matrix, t_list, norm)?;
    let deltas = fine.values().zip(coarse.values()).map(|(a, b)| a - b).collect();
    Ok((fine, deltas))
}

/// Direct `α` quadrature of `∫_0^{1/2} (1 + iξ)^{-α} dα`, independent of the
/// closed form.
pub fn h_composite_by_quadrature(xi: f64) -> Complex64 {
    let (x, w) = gauss_legendre(32);
    let l = Complex64::new(1.0, xi).ln();
    x.iter()
        .zip(&w)
        .map(|(x, w)| (-l * (0.25 * (x + 1.0))).exp() * (0.25 * w))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symbol_values() {
        assert_eq!(
            symbol_eval(SymbolKind::MAlpha { alpha: 0.3 }, 0.0).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let v = symbol_eval(SymbolKind::MAlpha { alpha: 1.0 }, 1.0).unwrap();
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, -0.5, epsilon = 1e-15);
        let v = symbol_eval(SymbolKind::HComposite, 0.0).unwrap();
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
        assert!(symbol_eval(SymbolKind::MAlpha { alpha: 1.5 }, 0.0).is_err());
    }

    #[test]
    fn composite_closed_form_matches_quadrature() {
        for i in 0..=120 {
            let xi = if i == 0 {
                0.0
            } else {
                10f64.powf(-6.0 + 12.0 * i as f64 / 120.0)
            };
            let a = symbol_eval(SymbolKind::HComposite, xi).unwrap();
            let b = h_composite_by_quadrature(xi);
            assert!((a - b).norm() < 1e-10, "xi={xi}");
            assert!(a.re > 0.0);
        }
    }

    #[test]
    fn log_parametrization_agrees() {
        for u in [-10.0, -1.0, 0.0, 0.5, 3.0, 20.0] {
            for kind in [SymbolKind::HComposite, SymbolKind::MAlpha { alpha: 0.5 }] {
                let a = symbol_at_log_xi(kind, u);
                let b = symbol_eval(kind, f64::exp(u)).unwrap();
                assert!((a - b).norm() < 1e-13 * b.norm().max(1e-300), "u={u}");
            }
            assert_abs_diff_eq!(log_w(u).im, u.exp().atan(), epsilon = 1e-15);
        }
    }

    #[test]
    fn real_axis_sup_is_one_over_e() {
        for t in [0.01, 1.0, 37.0, 1e4] {
            let s = symbol_sup(SymbolKind::RealAxisTest, t, &XiGrid::default()).unwrap();
            assert_abs_diff_eq!(s.sup_value, (-1.0f64).exp(), epsilon = 1e-10);
            assert!((s.argmax_xi * t - 1.0).abs() < 1e-4);
            assert!(!s.boundary);
        }
    }

    #[test]
    fn fractional_symbol_limit() {
        let s = symbol_sup(SymbolKind::MAlpha { alpha: 0.5 }, 1e4, &XiGrid::default()).unwrap();
        let target = 2f64.sqrt() / std::f64::consts::E;
        assert!((s.sup_value - target).abs() < 0.01, "{}", s.sup_value);
    }

    #[test]
    fn composite_symbol_at_thirty() {
        let s = symbol_sup(SymbolKind::HComposite, 30.0, &XiGrid::default()).unwrap();
        assert!((s.sup_value - (-1.0f64).exp()).abs() < 0.01, "{}", s.sup_value);
        assert!(!s.boundary);
    }

    #[test]
    fn j_alpha_maps_constants_to_powers() {
        for alpha in [0.25, 0.5, 0.9, 1.0] {
            let k = build_kernel(KernelKind::JAlpha { alpha }, 64).unwrap();
            let img = k.apply(&vec![1.0; 64]);
            for (x, y) in k.nodes().iter().zip(&img) {
                assert!((y - x.powf(alpha) / gamma(alpha + 1.0)).abs() <= 10.0 / 64.0);
            }
        }
    }

    #[test]
    fn j_one_is_classical_volterra() {
        let k = build_kernel(KernelKind::JAlpha { alpha: 1.0 }, 16).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if j <= i { 1.0 / 16.0 } else { 0.0 };
                assert_abs_diff_eq!(k.matrix.get(i, j).re, expect, epsilon = 1e-16);
            }
        }
    }

    #[test]
    fn composite_kernel_is_causal_and_nonpositive() {
        let k = build_kernel(KernelKind::AComposite, 8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let v = k.matrix.get(i, j).re;
                if j > i {
                    assert_eq!(v, 0.0);
                } else {
                    assert!(v < 0.0);
                }
            }
        }
        assert!(build_kernel(KernelKind::JAlpha { alpha: 0.0 }, 8).is_err());
        assert!(build_kernel(KernelKind::AComposite, 4).is_err());
    }

    #[test]
    fn damped_powers_respect_gamma_bound() {
        let k = build_kernel(KernelKind::LAlpha { alpha: 0.5 }, 128).unwrap();
        let mut p = k.matrix.clone();
        for n in 1..=6u32 {
            let bound = 1.0 / gamma(0.5 * n as f64 + 1.0);
            assert!(p.op_norm(NormKind::Inf) <= bound * 1.05, "n={n}");
            p = p.matmul(&k.matrix);
        }
    }

    #[test]
    fn scalar_semigroup_curve() {
        let k = DenseOperator::from_rows(&[vec![-2.0]]).unwrap();
        let c = semigroup_norm_curve(&k, &[0.1, 0.5, 1.0], NormKind::Two).unwrap();
        assert_abs_diff_eq!(c.running_max, (-1.0f64).exp(), epsilon = 1e-13);
    }
}
