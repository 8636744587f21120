use super::PowerSeries;
use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// Outcome of checking the nonnegativity condition that defines class P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassP {
    /// Every coefficient is `>= -tol` (`tol` is 0 for exact series).
    Certified { tol: f64 },
    /// Index of the first coefficient below `-tol`.
    FirstNegative { index: usize },
}

impl ClassP {
    pub fn is_certified(&self) -> bool {
        matches!(self, ClassP::Certified { .. })
    }
}

/// Checks that every Taylor coefficient of the inverse `phi` is nonnegative.
/// Exact series are compared exactly and `tol` is ignored.
pub fn class_p_check<C: Coefficient>(phi: &PowerSeries<C>, tol: f64) -> ClassP {
    let tol = if C::EXACT { 0.0 } else { tol.abs() };
    let floor = if C::EXACT {
        C::zero()
    } else {
        C::from_f64(-tol).unwrap_or_else(C::zero)
    };
    match phi.coeffs().iter().position(|c| *c < floor) {
        Some(index) => ClassP::FirstNegative { index },
        None => ClassP::Certified { tol },
    }
}

/// Root-test estimate of the radius of convergence.
///
/// Fits `ln|c_k| ≈ a + b k + p ln k` by least squares over the nonzero
/// coefficients in the upper half of the series and returns `exp(-b)`. The
/// `ln k` column absorbs the algebraic prefactor that makes the bare
/// `|c_k|^{-1/k}` converge slowly. This is an estimate with no convergence
/// guarantee.
pub fn radius_estimate<C: Coefficient>(phi: &PowerSeries<C>) -> Result<f64> {
    let n = phi.order();
    if n < 10 {
        return Err(Error::param("radius estimate needs order >= 10"));
    }
    let pts: Vec<(f64, f64)> = (n.div_ceil(2)..=n)
        .filter_map(|k| {
            let l = phi.coeffs()[k].ln_abs();
            l.is_finite().then_some((k as f64, l))
        })
        .collect();
    match pts.len() {
        0 => Err(Error::UndefinedRadius),
        1 | 2 => {
            let best = pts.iter().map(|(k, l)| l / k).fold(f64::NEG_INFINITY, f64::max);
            Ok((-best).exp())
        }
        _ => Ok((-fit_log_linear(&pts)).exp()),
    }
}

/// Slope `b` of the least-squares fit `y ≈ a + b x + p ln x`.
fn fit_log_linear(pts: &[(f64, f64)]) -> f64 {
    // Centre the columns for conditioning, then solve the 2x2 normal equations
    // for (b, p).
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.0.ln()).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxl, mut sll, mut sxy, mut sly) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in pts {
        let (dx, dl, dy) = (x - mx, x.ln() - ml, y - my);
        sxx += dx * dx;
        sxl += dx * dl;
        sll += dl * dl;
        sxy += dx * dy;
        sly += dl * dy;
    }
    let det = sxx * sll - sxl * sxl;
    if det.abs() <= 1e-12 * sxx * sll {
        return sxy / sxx;
    }
    (sxy * sll - sly * sxl) / det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FunctionSpec;
    use crate::series::lagrange_invert;
    use num_rational::BigRational;

    #[test]
    fn lambert_inverse_fails_class_p_at_index_two() {
        let f: PowerSeries<BigRational> = FunctionSpec::ZExp.taylor(3).unwrap();
        let w = lagrange_invert(&f, 3).unwrap();
        assert_eq!(class_p_check(&w, 0.0), ClassP::FirstNegative { index: 2 });
    }

    #[test]
    fn positive_lambert_inverse_is_class_p() {
        let f: PowerSeries<BigRational> = FunctionSpec::ZExpM { m: 1 }.taylor(50).unwrap();
        let w = lagrange_invert(&f, 50).unwrap();
        assert!(class_p_check(&w, 0.0).is_certified());
        assert!(class_p_check(&PowerSeries::<BigRational>::identity(5), 0.0).is_certified());
    }

    #[test]
    fn float_check_honours_tolerance() {
        let s = PowerSeries::new(vec![0.0, 1.0, -1e-16, 0.5]).unwrap();
        assert_eq!(class_p_check(&s, 1e-12), ClassP::Certified { tol: 1e-12 });
        assert_eq!(class_p_check(&s, 0.0), ClassP::FirstNegative { index: 2 });
    }

    #[test]
    fn geometric_radius_is_exact() {
        let mut c = vec![0.0];
        c.extend((1..=40).map(|k| 0.5f64.powi(k - 1)));
        let s = PowerSeries::new(c).unwrap();
        assert!((radius_estimate(&s).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lambert_and_catalan_radii() {
        let f: PowerSeries<f64> = FunctionSpec::ZExp.taylor(200).unwrap();
        let w = lagrange_invert(&f, 200).unwrap();
        let r = radius_estimate(&w).unwrap();
        assert!((r - (-1.0f64).exp()).abs() < 0.01, "{r}");

        let f: PowerSeries<f64> = FunctionSpec::ZPowPlus { n: 1 }.taylor(200).unwrap();
        let w = lagrange_invert(&f, 200).unwrap();
        let r = radius_estimate(&w).unwrap();
        assert!((r - 0.25).abs() < 0.01, "{r}");
    }

    #[test]
    fn radius_errors() {
        let short = PowerSeries::new(vec![0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(radius_estimate(&short), Err(Error::Parameter(_))));
        let mut c = vec![0.0; 21];
        c[1] = 1.0;
        let flat = PowerSeries::new(c).unwrap();
        assert_eq!(radius_estimate(&flat), Err(Error::UndefinedRadius));
    }
}
