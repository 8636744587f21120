use super::{class_p_check, compose, ClassP, PowerSeries};
use crate::error::{Error, Result};
use crate::family::FunctionSpec;
use crate::scalar::Coefficient;

/// Stabilization tolerance used by float callers of [`fixed_point_invert`].
pub const FIXED_POINT_DEFAULT_TOL: f64 = 1e-14;

/// Compositional inverse of `f` to order `order` by Lagrange inversion.
///
/// With `g = z / f(z)`, the inverse `φ` has `φ_m = [z^{m-1}] g^m / m`. The
/// needed coefficients of each power `g^m` come from the J.C.P. Miller
/// recurrence, computed only up to degree `m - 1`.
pub fn lagrange_invert<C: Coefficient>(f: &PowerSeries<C>, order: usize) -> Result<PowerSeries<C>> {
    if order < 1 {
        return Err(Error::param("inversion order must be >= 1"));
    }
    if f.order() < order {
        return Err(Error::param(format!(
            "series of order {} cannot be inverted to order {order}",
            f.order()
        )));
    }
    if !f.coeff(0).is_zero() {
        return Err(Error::Composition(format!("{:?}", f.coeff(0))));
    }
    if f.coeff(1).is_zero() {
        return Err(Error::NonInvertible);
    }
    let g = f.with_order(order).shift_down()?.recip()?;
    let g = g.coeffs();
    let g0 = g[0].clone();
    let mut out = vec![C::zero(); order + 1];
    let mut g0_pow = C::one();
    let mut h: Vec<C> = Vec::with_capacity(order);
    for m in 1..=order {
        g0_pow = g0_pow * g0.clone();
        h.clear();
        h.push(g0_pow.clone());
        let mf = (m + 1) as i64;
        for k in 1..m {
            let mut acc = C::zero();
            for j in 1..=k.min(g.len() - 1) {
                if g[j].is_zero() {
                    continue;
                }
                let w = mf * j as i64 - k as i64;
                if w == 0 {
                    continue;
                }
                acc = acc + C::from_i64(w) * g[j].clone() * h[k - j].clone();
            }
            h.push(acc / (C::from_i64(k as i64) * g0.clone()));
        }
        out[m] = h[m - 1].clone() / C::from_i64(m as i64);
    }
    PowerSeries::new(out)
}

/// Coefficients of `φ(scale · w)`, where `φ` is the local inverse of `spec`,
/// by Newton iteration on the series with precision doubling.
///
/// This is the fast path for large orders: rescaling by the radius of
/// convergence keeps float coefficients bounded where `φ`'s own coefficients
/// would overflow.
pub fn invert_spec_scaled<C: Coefficient>(spec: &FunctionSpec, order: usize, scale: &C) -> Result<PowerSeries<C>> {
    if order < 1 {
        return Err(Error::param("inversion order must be >= 1"));
    }
    if scale.is_zero() {
        return Err(Error::param("scale must be nonzero"));
    }
    let lead: PowerSeries<C> = spec.taylor(1)?;
    if !lead.coeff(0).is_zero() {
        return Err(Error::Composition(format!("{:?}", lead.coeff(0))));
    }
    if lead.coeff(1).is_zero() {
        return Err(Error::NonInvertible);
    }
    let inv_scale = C::one() / scale.clone();
    let mut psi = PowerSeries::monomial(1, scale.clone() / lead.coeff(1), 1);
    let mut correct = 1usize;
    while correct < order {
        let target = (2 * correct + 1).min(order);
        let p = psi.with_order(target);
        let f_psi = spec.compose_series(&p)?.scale(&inv_scale);
        // F'(ψ) = (F ∘ ψ)' / ψ'
        let dfdpsi = f_psi.derivative().div(&p.derivative())?;
        // residual F(ψ) - w vanishes through degree `correct`
        let mut resid: Vec<C> = f_psi.coeffs()[correct + 1..=target].to_vec();
        if correct == 0 {
            resid[0] = resid[0].clone() - C::one();
        }
        let width = target - correct - 1;
        let resid = PowerSeries::new(resid)?;
        let step = resid.mul(&dfdpsi.with_order(width).recip()?);
        let mut next = p.into_coeffs();
        for (k, c) in step.coeffs().iter().enumerate() {
            let slot = &mut next[correct + 1 + k];
            *slot = slot.clone() - c.clone();
        }
        psi = PowerSeries::new(next)?;
        correct = target;
    }
    Ok(psi.with_order(order))
}

/// Inverse of `F = f / h` built from the contraction `ψ ↦ φ(w · h(ψ))`, where
/// `φ` is the inverse of `f`.
///
/// `f` must be in class P and `h` must have `h(0) > 0` and nonnegative Taylor
/// coefficients; every iterate then has nonnegative coefficients. Coefficient
/// `k` settles after `k` iterations, so at most `order + 2` are run.
pub fn fixed_point_invert<C: Coefficient>(
    f: &FunctionSpec,
    h: &FunctionSpec,
    order: usize,
    tol: f64,
) -> Result<PowerSeries<C>> {
    let phi = lagrange_invert(&f.taylor::<C>(order)?, order)?;
    let neg_tol = if C::EXACT { 0.0 } else { tol };
    if let ClassP::FirstNegative { index } = class_p_check(&phi, neg_tol) {
        return Err(Error::HypothesisViolation { index });
    }
    let h_taylor: PowerSeries<C> = h.taylor(order)?;
    if h_taylor.coeff(0) <= C::zero() {
        return Err(Error::param("h(0) must be positive"));
    }
    if let Some(k) = h_taylor.coeffs().iter().position(|c| *c < C::zero()) {
        return Err(Error::param(format!(
            "h has a negative Taylor coefficient at index {k}"
        )));
    }

    let cap = order + 2;
    let mut psi = PowerSeries::<C>::zero(order);
    for _ in 0..cap {
        let inner = h.compose_series(&psi)?.shift_up();
        let next = compose(&phi, &inner, order)?;
        if let ClassP::FirstNegative { index } = class_p_check(&next, neg_tol) {
            return Err(Error::HypothesisViolation { index });
        }
        let settled = if C::EXACT {
            next == psi
        } else {
            next.max_abs_diff(&psi) <= tol
        };
        if settled {
            return Ok(next);
        }
        psi = next;
    }
    Err(Error::Convergence { iterations: cap })
}
