//! Truncated formal power series in one variable.
//!
//! A [`PowerSeries`] of order `N` carries exactly `N + 1` coefficients
//! `c_0..=c_N`; every product is truncated back to the smaller order of its
//! operands. Coefficients are generic over [`Coefficient`], so the same code
//! runs on exact rationals and on floats.

mod certify;
mod inversion;
mod io;

pub use certify::{class_p_check, radius_estimate, ClassP};
pub use inversion::{fixed_point_invert, invert_spec_scaled, lagrange_invert, FIXED_POINT_DEFAULT_TOL};
pub use io::{from_csv, from_json, to_csv, to_json};

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// Default truncation order for reports.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> PowerSeries<C> {
    /// Builds a series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("a power series needs at least one coefficient"));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, C::one(), order)
    }

    pub fn monomial(k: usize, c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// Truncates or zero-pads to the given order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs: Vec<C> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, C::zero());
        PowerSeries { coeffs }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> PowerSeries<D> {
        PowerSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> PowerSeries<f64> {
        self.map(|c| c.to_f64())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() - other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, a: &C) -> Self {
        self.map(|c| c.clone() * a.clone())
    }

    /// Substitutes `z -> a z`, i.e. multiplies coefficient `k` by `a^k`.
    pub fn dilate(&self, a: &C) -> Self {
        let mut p = C::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * p.clone());
            p = p * a.clone();
        }
        PowerSeries { coeffs: out }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let first_a = a.iter().position(|c| !c.is_zero()).unwrap_or(n + 1);
        let first_b = b.iter().position(|c| !c.is_zero()).unwrap_or(n + 1);
        let mut out = vec![C::zero(); n + 1];
        for (k, slot) in out.iter_mut().enumerate() {
            if k < first_a + first_b {
                continue;
            }
            let mut acc = C::zero();
            for i in first_a..=(k - first_b) {
                if a[i].is_zero() {
                    continue;
                }
                acc = acc + a[i].clone() * b[k - i].clone();
            }
            *slot = acc;
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::param("reciprocal of a series with zero constant term"));
        }
        let inv0 = C::one() / c0.clone();
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Formal derivative; the order drops by one (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        PowerSeries {
            coeffs: (1..=self.order())
                .map(|k| self.coeffs[k].clone() * C::from_i64(k as i64))
                .collect(),
        }
    }

    /// Multiplies by `z`, keeping the order.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(C::zero());
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        PowerSeries { coeffs }
    }

    /// Divides by `z`; the order drops by one. Fails if `c_0 != 0`.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Composition(format!("{:?}", self.coeffs[0])));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(PowerSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    fn require_zero_constant(&self) -> Result<()> {
        if self.coeffs[0].is_zero() {
            Ok(())
        } else {
            Err(Error::Composition(format!("{:?}", self.coeffs[0])))
        }
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        self.require_zero_constant()?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(C::one());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc + C::from_i64(j as i64) * self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(acc / C::from_i64(k as i64));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `(sin(self), cos(self))` for a series with zero constant term.
    pub fn sin_cos(&self) -> Result<(Self, Self)> {
        self.require_zero_constant()?;
        let n = self.order();
        let mut s: Vec<C> = vec![C::zero()];
        let mut c: Vec<C> = vec![C::one()];
        for k in 1..=n {
            let mut acc_s = C::zero();
            let mut acc_c = C::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = C::from_i64(j as i64) * self.coeffs[j].clone();
                acc_s = acc_s + w.clone() * c[k - j].clone();
                acc_c = acc_c + w * s[k - j].clone();
            }
            let kk = C::from_i64(k as i64);
            s.push(acc_s / kk.clone());
            c.push(-(acc_c / kk));
        }
        Ok((PowerSeries { coeffs: s }, PowerSeries { coeffs: c }))
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, e: u32) -> Self {
        let mut result = Self::constant(C::one(), self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Evaluates the truncated polynomial at a point.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Largest `|c_k - d_k|` as a double, over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order());
        (0..=n)
            .map(|k| (self.coeffs[k].clone() - other.coeffs[k].clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }
}

/// `g ∘ f` truncated at degree `order`. `f` must have a zero constant term and
/// both operands must have order at least `order`.
pub fn compose<C: Coefficient>(g: &PowerSeries<C>, f: &PowerSeries<C>, order: usize) -> Result<PowerSeries<C>> {
    f.require_zero_constant()?;
    if g.order() < order || f.order() < order {
        return Err(Error::param(format!(
            "composition to order {order} needs operands of order >= {order} (got {} and {})",
            g.order(),
            f.order()
        )));
    }
    let f = f.with_order(order);
    // Horner: (((g_N f + g_{N-1}) f + ...) f + g_0)
    let mut acc = PowerSeries::constant(g.coeff(order), order);
    for k in (0..order).rev() {
        acc = acc.mul(&f);
        acc.coeffs[0] = acc.coeffs[0].clone() + g.coeff(k);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ser(v: &[(i64, i64)]) -> PowerSeries<BigRational> {
        PowerSeries::new(v.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn compose_with_identity_factors() {
        let z = PowerSeries::<BigRational>::identity(2);
        let f = ser(&[(0, 1), (1, 1), (1, 1)]);
        assert_eq!(compose(&z, &f, 2).unwrap(), f);
        let g = ser(&[(0, 1), (1, 1), (-1, 1)]);
        assert_eq!(compose(&g, &z, 2).unwrap(), g);
    }

    #[test]
    fn compose_rejects_constant_term() {
        let f = ser(&[(1, 1), (1, 1)]);
        let z = PowerSeries::<BigRational>::identity(1);
        assert!(matches!(compose(&z, &f, 1), Err(Error::Composition(_))));
    }

    #[test]
    fn exp_and_sin_cos_match_known_coefficients() {
        let z = PowerSeries::<BigRational>::identity(5);
        let e = z.exp().unwrap();
        assert_eq!(e.coeff(4), q(1, 24));
        let (s, c) = z.sin_cos().unwrap();
        assert_eq!(s.coeff(3), q(-1, 6));
        assert_eq!(s.coeff(5), q(1, 120));
        assert_eq!(c.coeff(4), q(1, 24));
        assert!(s.coeff(4).is_zero());
    }

    #[test]
    fn recip_times_self_is_one() {
        let f = ser(&[(2, 1), (1, 3), (-5, 7), (1, 1)]);
        let one = f.mul(&f.recip().unwrap());
        assert_eq!(one, PowerSeries::constant(q(1, 1), 3));
    }

    #[test]
    fn powi_matches_repeated_product() {
        let f = ser(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1)]);
        let p = f.powi(3);
        // (1 - z)^3 = 1 - 3z + 3z^2 - z^3
        assert_eq!(p, ser(&[(1, 1), (-3, 1), (3, 1), (-1, 1), (0, 1)]));
    }

    #[test]
    fn shift_and_derivative() {
        let f = ser(&[(0, 1), (1, 1), (1, 2), (1, 3)]);
        assert_eq!(f.shift_down().unwrap(), ser(&[(1, 1), (1, 2), (1, 3)]));
        assert_eq!(f.derivative(), ser(&[(1, 1), (1, 1), (1, 1)]));
        assert_eq!(f.shift_down().unwrap().shift_up(), ser(&[(0, 1), (1, 1), (1, 2)]));
    }
}
