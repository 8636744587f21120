//! Analytic function families used throughout the crate.
//!
//! Each [`FunctionSpec`] can be evaluated on the real line (with an analytic
//! derivative), on the complex plane, and composed with a formal power series,
//! which also yields its Taylor coefficients about 0 to any order.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Coefficient;
use crate::series::PowerSeries;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// `z e^z`
    ZExp,
    /// `z (1 - z)^n`
    ZPow { n: u32 },
    /// `z (1 + z/n)^n`
    ZPowPlus { n: u32 },
    /// `(1 - z)^n - (1 - z)^m`, `m > n >= 1`
    PowDiff { n: u32, m: u32 },
    /// `e^{-z} - e^{-s z}`, `s > 1`
    ExpDiff { s: f64 },
    /// `e^{-s z} sin z`, `s >= 0`
    ExpSin { s: f64 },
    /// `1 - (1 - z)^n`
    OnePow { n: u32 },
    /// `z e^{-z^m}`
    ZExpM { m: u32 },
    /// `z`
    Identity,
    /// `e^{a z}`
    Exp { a: f64 },
    /// `(1 - z)^{-n}`
    InvPow { n: u32 },
    /// `sin z`
    Sin,
    /// `1 - e^{-a z}`
    OneMinusExp { a: f64 },
    /// Polynomial with the given coefficients `c_0, c_1, ...`.
    Custom(Vec<BigRational>),
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FunctionSpec::*;
        match self {
            ZExp => write!(f, "z e^z"),
            ZPow { n } => write!(f, "z (1-z)^{n}"),
            ZPowPlus { n } => write!(f, "z (1+z/{n})^{n}"),
            PowDiff { n, m } => write!(f, "(1-z)^{n} - (1-z)^{m}"),
            ExpDiff { s } => write!(f, "e^-z - e^-{s}z"),
            ExpSin { s } => write!(f, "e^-{s}z sin z"),
            OnePow { n } => write!(f, "1 - (1-z)^{n}"),
            ZExpM { m } => write!(f, "z e^(-z^{m})"),
            Identity => write!(f, "z"),
            Exp { a } => write!(f, "e^({a}z)"),
            InvPow { n } => write!(f, "(1-z)^-{n}"),
            Sin => write!(f, "sin z"),
            OneMinusExp { a } => write!(f, "1 - e^-{a}z"),
            Custom(c) => write!(f, "custom polynomial of degree {}", c.len().saturating_sub(1)),
        }
    }
}

fn real_param<C: Coefficient>(x: f64, name: &str) -> Result<C> {
    C::from_f64(x).ok_or_else(|| Error::param(format!("{name} must be finite")))
}

impl FunctionSpec {
    pub fn validate(&self) -> Result<()> {
        use FunctionSpec::*;
        let ok = match self {
            ZPow { n } | ZPowPlus { n } | OnePow { n } => *n >= 1,
            ZExpM { m } => *m >= 1,
            PowDiff { n, m } => *m > *n && *n >= 1,
            ExpDiff { s } => s.is_finite() && *s > 1.0,
            ExpSin { s } => s.is_finite() && *s >= 0.0,
            Exp { a } | OneMinusExp { a } => a.is_finite(),
            Custom(c) => !c.is_empty(),
            ZExp | Identity | InvPow { .. } | Sin => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("parameters out of range for {self:?}")))
        }
    }

    /// Degree-`order` Taylor polynomial about 0.
    pub fn taylor<C: Coefficient>(&self, order: usize) -> Result<PowerSeries<C>> {
        if order < 1 {
            return Err(Error::param("Taylor order must be >= 1"));
        }
        self.compose_series(&PowerSeries::identity(order))
    }

    /// `f ∘ psi` truncated at the order of `psi`. Non-polynomial families need
    /// `psi(0) = 0`.
    pub fn compose_series<C: Coefficient>(&self, psi: &PowerSeries<C>) -> Result<PowerSeries<C>> {
        use FunctionSpec::*;
        self.validate()?;
        let order = psi.order();
        let one = PowerSeries::constant(C::one(), order);
        let one_minus = one.sub(psi);
        let int = |k: u32| C::from_i64(k as i64);
        let out = match self {
            ZExp => psi.mul(&psi.exp()?),
            ZPow { n } => psi.mul(&one_minus.powi(*n)),
            ZPowPlus { n } => {
                let base = one.add(&psi.scale(&(C::one() / int(*n))));
                psi.mul(&base.powi(*n))
            }
            PowDiff { n, m } => one_minus.powi(*n).sub(&one_minus.powi(*m)),
            ExpDiff { s } => {
                let s: C = real_param(*s, "s")?;
                psi.neg().exp()?.sub(&psi.scale(&(-s)).exp()?)
            }
            ExpSin { s } => {
                let s: C = real_param(*s, "s")?;
                let (sin, _) = psi.sin_cos()?;
                psi.scale(&(-s)).exp()?.mul(&sin)
            }
            OnePow { n } => one.sub(&one_minus.powi(*n)),
            ZExpM { m } => psi.mul(&psi.powi(*m).neg().exp()?),
            Identity => psi.clone(),
            Exp { a } => psi.scale(&real_param(*a, "a")?).exp()?,
            InvPow { n } => one_minus.powi(*n).recip()?,
            Sin => psi.sin_cos()?.0,
            OneMinusExp { a } => {
                let a: C = real_param(*a, "a")?;
                one.sub(&psi.scale(&(-a)).exp()?)
            }
            Custom(coeffs) => {
                let mut acc = PowerSeries::zero(order);
                for c in coeffs.iter().rev() {
                    acc = acc.mul(psi);
                    let c0 = acc.coeff(0) + C::from_rational(c);
                    let mut v = acc.into_coeffs();
                    v[0] = c0;
                    acc = PowerSeries::new(v)?;
                }
                acc
            }
        };
        Ok(out)
    }

    /// `f(x)` on the real line.
    pub fn eval_real(&self, x: f64) -> f64 {
        use FunctionSpec::*;
        match self {
            ZExp => x * x.exp(),
            ZPow { n } => x * (1.0 - x).powi(*n as i32),
            ZPowPlus { n } => x * (1.0 + x / *n as f64).powi(*n as i32),
            PowDiff { n, m } => (1.0 - x).powi(*n as i32) - (1.0 - x).powi(*m as i32),
            ExpDiff { s } => (-x).exp() - (-s * x).exp(),
            ExpSin { s } => (-s * x).exp() * x.sin(),
            OnePow { n } => 1.0 - (1.0 - x).powi(*n as i32),
            ZExpM { m } => x * (-x.powi(*m as i32)).exp(),
            Identity => x,
            Exp { a } => (a * x).exp(),
            InvPow { n } => (1.0 - x).powi(-(*n as i32)),
            Sin => x.sin(),
            OneMinusExp { a } => 1.0 - (-a * x).exp(),
            Custom(c) => c.iter().rev().fold(0.0, |acc, ck| acc * x + Coefficient::to_f64(ck)),
        }
    }

    /// `f'(x)` from the closed form of each family.
    pub fn deriv_real(&self, x: f64) -> f64 {
        use FunctionSpec::*;
        match self {
            ZExp => (1.0 + x) * x.exp(),
            ZPow { n } => {
                let n = *n as i32;
                (1.0 - x).powi(n - 1) * (1.0 - (n as f64 + 1.0) * x)
            }
            ZPowPlus { n } => {
                let nf = *n as f64;
                (1.0 + x / nf).powi(*n as i32 - 1) * (1.0 + (nf + 1.0) * x / nf)
            }
            PowDiff { n, m } => {
                -(*n as f64) * (1.0 - x).powi(*n as i32 - 1) + *m as f64 * (1.0 - x).powi(*m as i32 - 1)
            }
            ExpDiff { s } => -(-x).exp() + s * (-s * x).exp(),
            ExpSin { s } => (-s * x).exp() * (x.cos() - s * x.sin()),
            OnePow { n } => *n as f64 * (1.0 - x).powi(*n as i32 - 1),
            ZExpM { m } => {
                let xm = x.powi(*m as i32);
                (-xm).exp() * (1.0 - *m as f64 * xm)
            }
            Identity => 1.0,
            Exp { a } => a * (a * x).exp(),
            InvPow { n } => *n as f64 * (1.0 - x).powi(-(*n as i32) - 1),
            Sin => x.cos(),
            OneMinusExp { a } => a * (-a * x).exp(),
            Custom(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, ck)| acc * x + k as f64 * Coefficient::to_f64(ck)),
        }
    }

    /// `f(z)` on the complex plane.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        use FunctionSpec::*;
        let one = Complex64::new(1.0, 0.0);
        match self {
            ZExp => z * z.exp(),
            ZPow { n } => z * (one - z).powi(*n as i32),
            ZPowPlus { n } => z * (one + z / *n as f64).powi(*n as i32),
            PowDiff { n, m } => (one - z).powi(*n as i32) - (one - z).powi(*m as i32),
            ExpDiff { s } => (-z).exp() - (-z * *s).exp(),
            ExpSin { s } => (-z * *s).exp() * z.sin(),
            OnePow { n } => one - (one - z).powi(*n as i32),
            ZExpM { m } => z * (-z.powi(*m as i32)).exp(),
            Identity => z,
            Exp { a } => (z * *a).exp(),
            InvPow { n } => (one - z).powi(-(*n as i32)),
            Sin => z.sin(),
            OneMinusExp { a } => one - (-z * *a).exp(),
            Custom(c) => c
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, ck| acc * z + Coefficient::to_f64(ck)),
        }
    }

    /// True when the function extends to an entire function.
    pub fn is_entire(&self) -> bool {
        !matches!(self, FunctionSpec::InvPow { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn taylor_of_zexp() {
        let t: PowerSeries<BigRational> = FunctionSpec::ZExp.taylor(2).unwrap();
        assert_eq!(t.coeffs(), &[q(0, 1), q(1, 1), q(1, 1)]);
    }

    #[test]
    fn taylor_of_zpow_one() {
        let t: PowerSeries<BigRational> = FunctionSpec::ZPow { n: 1 }.taylor(2).unwrap();
        assert_eq!(t.coeffs(), &[q(0, 1), q(1, 1), q(-1, 1)]);
    }

    #[test]
    fn taylor_of_expdiff_two() {
        // e^{-z} - e^{-2z}: k-th coefficient is ((-1)^k - (-2)^k)/k!
        let t: PowerSeries<BigRational> = FunctionSpec::ExpDiff { s: 2.0 }.taylor(5).unwrap();
        let mut fact = 1i64;
        for k in 0..=5i64 {
            if k > 0 {
                fact *= k;
            }
            let num = (-1i64).pow(k as u32) - (-2i64).pow(k as u32);
            assert_eq!(t.coeff(k as usize), q(num, fact), "k = {k}");
        }
        assert_eq!(t.coeff(2), q(-3, 2));
    }

    #[test]
    fn taylor_rejects_bad_parameters() {
        assert!(FunctionSpec::ZPow { n: 0 }.taylor::<f64>(3).is_err());
        assert!(FunctionSpec::PowDiff { n: 2, m: 2 }.taylor::<f64>(3).is_err());
        assert!(FunctionSpec::ExpDiff { s: 1.0 }.taylor::<f64>(3).is_err());
        assert!(FunctionSpec::ExpSin { s: -0.5 }.taylor::<f64>(3).is_err());
        assert!(FunctionSpec::ZExp.taylor::<f64>(0).is_err());
    }

    #[test]
    fn real_complex_and_series_evaluations_agree() {
        let specs = [
            FunctionSpec::ZExp,
            FunctionSpec::ZPow { n: 3 },
            FunctionSpec::ZPowPlus { n: 2 },
            FunctionSpec::PowDiff { n: 2, m: 5 },
            FunctionSpec::ExpDiff { s: 3.0 },
            FunctionSpec::ExpSin { s: 0.5 },
            FunctionSpec::OnePow { n: 4 },
            FunctionSpec::ZExpM { m: 2 },
            FunctionSpec::InvPow { n: 2 },
            FunctionSpec::Sin,
            FunctionSpec::OneMinusExp { a: 1.5 },
            FunctionSpec::Custom(vec![q(0, 1), q(1, 1), q(1, 3)]),
        ];
        let x = 0.1;
        for spec in &specs {
            let series: PowerSeries<f64> = spec.taylor(40).unwrap();
            let via_series = series.eval(&x);
            let real = spec.eval_real(x);
            let cplx = spec.eval_complex(Complex64::new(x, 0.0));
            assert!((via_series - real).abs() < 1e-13, "{spec}: {via_series} vs {real}");
            assert!((cplx.re - real).abs() < 1e-13 && cplx.im.abs() < 1e-15, "{spec}");
            // analytic derivative against the differentiated series
            let d = series.derivative().eval(&x);
            assert!((d - spec.deriv_real(x)).abs() < 1e-12, "{spec} derivative");
        }
    }
}
