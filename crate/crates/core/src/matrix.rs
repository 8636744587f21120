//! Dense complex matrices as finite-dimensional stand-ins for bounded
//! operators: induced norms, the exponential, the power-series functional
//! calculus, and diagnostics built on them.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissible::{threshold, ThresholdKind};
use crate::error::{Error, Result};
use crate::experiment::ExperimentSeries;
use crate::family::FunctionSpec;
use crate::scalar::Coefficient;
use crate::series::{lagrange_invert, PowerSeries};

/// Real scalar types usable as matrix entries.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}
impl<T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static> Real for T {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Maximum absolute column sum.
    One,
    /// Largest singular value.
    #[default]
    Two,
    /// Maximum absolute row sum.
    Inf,
}

impl std::str::FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" | "induced-1" => Ok(NormKind::One),
            "2" | "two" | "induced-2" => Ok(NormKind::Two),
            "inf" | "induced-inf" => Ok(NormKind::Inf),
            _ => Err(Error::param(format!("unknown norm kind {s:?}"))),
        }
    }
}

/// Square complex matrix, row-major, with the norm used by diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
    pub norm_kind: NormKind,
}

fn c<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("representable constant")
}

impl<T: Real> DenseOperator<T> {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            dim,
            entries: vec![Complex::zero(); dim * dim],
            norm_kind: NormKind::default(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::one();
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::param(format!(
                "expected {dim}x{dim} entries, got {}",
                entries.len()
            )));
        }
        Ok(DenseOperator {
            dim,
            entries,
            norm_kind: NormKind::default(),
        })
    }

    /// Real matrix from rows.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::param("matrix rows must form a square"));
        }
        Self::from_entries(
            dim,
            rows.iter().flatten().map(|&x| Complex::new(x, T::zero())).collect(),
        )
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex::new(v, T::zero()));
        }
        m
    }

    pub fn with_norm(mut self, kind: NormKind) -> Self {
        self.norm_kind = kind;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.entries[i * self.dim + j] = v;
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        DenseOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            norm_kind: self.norm_kind,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        DenseOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|&a| a * s).collect(),
            norm_kind: self.norm_kind,
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex::zero(); n * n];
        let rows: Vec<(usize, &mut [Complex<T>])> = out.chunks_mut(n).enumerate().collect();
        let work = |(i, row): (usize, &mut [Complex<T>])| {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.entries[k * n..(k + 1) * n];
                for (o, &b) in row.iter_mut().zip(brow) {
                    *o = *o + a * b;
                }
            }
        };
        if n >= 96 {
            rows.into_par_iter().for_each(work);
        } else {
            rows.into_iter().for_each(work);
        }
        DenseOperator {
            dim: n,
            entries: out,
            norm_kind: self.norm_kind,
        }
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n).with_norm(self.norm_kind);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        m
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim).with_norm(self.norm_kind);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Zero on and below the diagonal.
    pub fn is_strictly_upper(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..=i).all(|j| self.entries[i * n + j].is_zero()))
    }

    /// Unit diagonal and zero below it: `I + N` with `N` strictly upper.
    pub fn is_unit_upper(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| self.entries[i * n + i].is_one() && (0..i).all(|j| self.entries[i * n + j].is_zero()))
    }

    /// Nilpotent either by structure or numerically: `‖A^dim‖ <= 1e-10 ‖A‖^dim`.
    pub fn is_nilpotent(&self) -> bool {
        if self.is_strictly_upper() {
            return true;
        }
        let a = self.op_norm(NormKind::One);
        let p = self.pow(self.dim as u64).op_norm(NormKind::One);
        p <= c::<T>(1e-10) * a.powi(self.dim as i32)
    }

    pub fn norm(&self) -> T {
        self.op_norm(self.norm_kind)
    }

    /// Induced operator norm. The 1 and ∞ norms are exact; the 2-norm is a
    /// power iteration on `(AᴴA)^64` started from its largest column, which
    /// yields a lower bound accurate to about the square of the final angle.
    pub fn op_norm(&self, kind: NormKind) -> T {
        let n = self.dim;
        match kind {
            NormKind::One => (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| self.entries[i * n + j].norm())
                        .fold(T::zero(), |a, b| a + b)
                })
                .fold(T::zero(), T::max),
            NormKind::Inf => (0..n)
                .map(|i| {
                    self.entries[i * n..(i + 1) * n]
                        .iter()
                        .map(|z| z.norm())
                        .fold(T::zero(), |a, b| a + b)
                })
                .fold(T::zero(), T::max),
            NormKind::Two => self.two_norm(),
        }
    }

    fn two_norm(&self) -> T {
        let n = self.dim;
        let scale = self.max_abs();
        if scale.is_zero() || !scale.is_finite() {
            return if scale.is_zero() { T::zero() } else { T::infinity() };
        }
        let a = self.scale_real(T::one() / scale);
        let b = a.adjoint().matmul(&a);
        let mut p = b.clone();
        for _ in 0..6 {
            p = p.matmul(&p);
            let m = p.max_abs();
            if m.is_zero() {
                break;
            }
            p = p.scale_real(T::one() / m);
        }
        let col = (0..n)
            .max_by(|&x, &y| {
                let cx = (0..n).map(|i| p.get(i, x).norm_sqr()).fold(T::zero(), |s, v| s + v);
                let cy = (0..n).map(|i| p.get(i, y).norm_sqr()).fold(T::zero(), |s, v| s + v);
                cx.partial_cmp(&cy).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        let mut v: Vec<Complex<T>> = (0..n).map(|i| p.get(i, col)).collect();
        normalize(&mut v);
        let tol = T::epsilon().sqrt() * c::<T>(0.1);
        for _ in 0..200 {
            let mut w = p.matvec(&v);
            if !normalize(&mut w) {
                break;
            }
            let diff = w
                .iter()
                .zip(&v)
                .map(|(x, y)| (*x - *y).norm_sqr())
                .fold(T::zero(), |s, t| s + t)
                .sqrt();
            v = w;
            if diff <= tol {
                break;
            }
        }
        let av = a.matvec(&v);
        let num = av.iter().map(|z| z.norm_sqr()).fold(T::zero(), |s, t| s + t).sqrt();
        num * scale
    }

    /// `e^{tA}` by scaling and squaring around a Taylor core.
    pub fn exp_scaled(&self, t: T) -> Result<Self> {
        let m = self.scale_real(t);
        let norm = m.op_norm(NormKind::One);
        if !norm.is_finite() {
            return Err(Error::Overflow("mat_exp"));
        }
        let half = c::<T>(0.5);
        let mut s = 0i32;
        if norm > half {
            s = (norm / half).log2().ceil().to_i32().unwrap_or(0).max(0);
        }
        let x = m.scale_real(c::<T>(0.5).powi(s));
        let mut sum = Self::identity(self.dim).with_norm(self.norm_kind);
        let mut term = sum.clone();
        for k in 1..=40 {
            term = term
                .matmul(&x)
                .scale_real(T::one() / T::from_usize(k).expect("small integer"));
            sum = sum.add(&term);
            if term.max_abs() <= T::epsilon() * c::<T>(1e-3) * sum.max_abs() {
                break;
            }
        }
        for _ in 0..s {
            sum = sum.matmul(&sum);
            if !sum.is_finite() {
                return Err(Error::Overflow("mat_exp"));
            }
        }
        if !sum.is_finite() {
            return Err(Error::Overflow("mat_exp"));
        }
        Ok(sum)
    }

    /// Inverse by LU with partial pivoting; `None` if a pivot vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        let tiny = T::min_positive_value() / T::epsilon();
        for col in 0..n {
            let piv = (col..n).max_by(|&x, &y| {
                a[x * n + col]
                    .norm()
                    .partial_cmp(&a[y * n + col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            let pv = a[piv * n + col];
            if !(pv.norm() > tiny) {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
            }
            let ipv = Complex::<T>::one() / pv;
            for j in 0..n {
                a[col * n + j] = a[col * n + j] * ipv;
                inv[col * n + j] = inv[col * n + j] * ipv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = a[r * n + j] - f * a[col * n + j];
                    inv[r * n + j] = inv[r * n + j] - f * inv[col * n + j];
                }
            }
        }
        let out = DenseOperator {
            dim: n,
            entries: inv,
            norm_kind: self.norm_kind,
        };
        out.is_finite().then_some(out)
    }

    pub fn to_f64(&self) -> DenseOperator<f64> {
        DenseOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|z| Complex::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)))
                .collect(),
            norm_kind: self.norm_kind,
        }
    }

    pub fn from_f64(m: &DenseOperator<f64>) -> Self {
        DenseOperator {
            dim: m.dim,
            entries: m
                .entries
                .iter()
                .map(|z| Complex::new(c::<T>(z.re), c::<T>(z.im)))
                .collect(),
            norm_kind: m.norm_kind,
        }
    }

    /// Row-major CSV with one `re+imi` cell per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| format_cell(self.get(i, j).to_f64c())).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows: Vec<Vec<Complex<f64>>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split(',').map(parse_cell).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Parse("matrix CSV is not square".into()));
        }
        let m = DenseOperator::<f64>::from_entries(dim, rows.into_iter().flatten().collect())?;
        Ok(Self::from_f64(&m))
    }

    pub fn to_json(&self) -> String {
        let f = self.to_f64();
        let n = f.dim;
        let doc = MatrixJson {
            dim: n,
            norm_kind: f.norm_kind,
            re: (0..n).map(|i| (0..n).map(|j| f.get(i, j).re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| f.get(i, j).im).collect()).collect(),
        };
        serde_json::to_string(&doc).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = doc.dim;
        if doc.re.len() != n || doc.im.len() != n || doc.re.iter().chain(&doc.im).any(|r| r.len() != n) {
            return Err(Error::Parse("matrix JSON shape does not match dim".into()));
        }
        let entries = (0..n * n)
            .map(|k| Complex::new(doc.re[k / n][k % n], doc.im[k / n][k % n]))
            .collect();
        Ok(Self::from_f64(
            &DenseOperator::<f64>::from_entries(n, entries)?.with_norm(doc.norm_kind),
        ))
    }
}

trait ToF64Complex {
    fn to_f64c(self) -> Complex<f64>;
}

impl<T: Real> ToF64Complex for Complex<T> {
    fn to_f64c(self) -> Complex<f64> {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    dim: usize,
    #[serde(default)]
    norm_kind: NormKind,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn format_cell(z: Complex<f64>) -> String {
    if z.im.is_sign_negative() {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

fn parse_cell(cell: &str) -> Result<Complex<f64>> {
    let s = cell.trim();
    let bad = || Error::Parse(format!("bad matrix cell {s:?}"));
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im_text = &body[split..];
    let im: f64 = im_text
        .strip_prefix('+')
        .unwrap_or(im_text)
        .parse()
        .map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}

fn normalize<T: Real>(v: &mut [Complex<T>]) -> bool {
    let n = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |s, t| s + t).sqrt();
    if !(n > T::zero()) || !n.is_finite() {
        return false;
    }
    for z in v.iter_mut() {
        *z = *z / n;
    }
    true
}

/// `e^{tA}`.
pub fn mat_exp<T: Real>(a: &DenseOperator<T>, t: T) -> Result<DenseOperator<T>> {
    a.exp_scaled(t)
}

/// Result of evaluating a power series at a matrix.
#[derive(Debug, Clone)]
pub struct SeriesValue<T> {
    pub value: DenseOperator<T>,
    /// Present when the series was cut off on a matrix that is not nilpotent.
    pub truncation_warning: Option<String>,
}

/// `Σ c_k A^k` by Horner's rule. On nilpotent `A` the sum is exact once the
/// order reaches `dim - 1`; otherwise the result carries a warning quoting
/// the size of the last retained term.
pub fn apply_entire_series<C: Coefficient, T: Real>(coeffs: &PowerSeries<C>, a: &DenseOperator<T>) -> SeriesValue<T> {
    let nilpotent = a.is_nilpotent();
    let order = if nilpotent {
        coeffs.order().min(a.dim().saturating_sub(1))
    } else {
        coeffs.order()
    };
    let cf: Vec<T> = (0..=order).map(|k| c::<T>(coeffs.coeff(k).to_f64())).collect();
    let id = DenseOperator::<T>::identity(a.dim()).with_norm(a.norm_kind);
    let mut acc = id.scale_real(cf[order]);
    for k in (0..order).rev() {
        acc = acc.matmul(a).add(&id.scale_real(cf[k]));
    }
    let truncation_warning = (!nilpotent).then(|| {
        let last =
            cf[order].abs().to_f64().unwrap_or(f64::NAN) * a.norm().to_f64().unwrap_or(f64::NAN).powi(order as i32);
        format!("series cut at order {order} on a non-nilpotent operator; last term norm bound {last:e}")
    });
    SeriesValue {
        value: acc,
        truncation_warning,
    }
}

/// Coefficients of `W_n`, the inverse of `z (1 + z/n)^n`, through `order`.
pub fn w_n_coefficients(n: u32, order: usize) -> Result<PowerSeries<f64>> {
    let f: PowerSeries<BigRational> = FunctionSpec::ZPowPlus { n }.taylor(order.max(1))?;
    Ok(lagrange_invert(&f, order.max(1))?.to_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsterleReport {
    pub n: u32,
    pub threshold: f64,
    /// `‖T^{n+1} - T^n‖`.
    pub diff_norm: f64,
    /// `‖T - I‖`.
    pub dist_to_identity: f64,
    pub hypothesis_holds: bool,
    /// `‖T - I‖ <= 1/(n+1)`.
    pub conclusion_holds: bool,
    /// `‖W_n(n(T^{n+1} - T^n)) - n(T - I)‖`.
    pub inversion_residual: f64,
}

impl EsterleReport {
    /// The implication "hypothesis ⇒ conclusion" failed.
    pub fn falsified(&self) -> bool {
        self.hypothesis_holds && !self.conclusion_holds
    }
}

/// Checks `‖T^{n+1} - T^n‖ <= n^n/(n+1)^{n+1} ⇒ ‖T - I‖ <= 1/(n+1)` and the
/// identity `W_n(n(T^{n+1} - T^n)) = n(T - I)` on `T = I + N`.
pub fn esterle_verify(t: &DenseOperator<f64>, n: u32) -> Result<EsterleReport> {
    let w = w_n_coefficients(n, t.dim())?;
    esterle_verify_with(t, n, &w)
}

/// [`esterle_verify`] with precomputed `W_n` coefficients of order `>= dim - 1`.
pub fn esterle_verify_with(t: &DenseOperator<f64>, n: u32, w: &PowerSeries<f64>) -> Result<EsterleReport> {
    if !t.is_unit_upper() {
        return Err(Error::param("T must be I + N with N strictly upper triangular"));
    }
    let thr = threshold(ThresholdKind::EsterleN { n })?;
    let id = DenseOperator::identity(t.dim()).with_norm(t.norm_kind);
    let tn = t.pow(n as u64);
    let d = tn.matmul(t).sub(&tn);
    let diff_norm = d.norm();
    let nn = t.sub(&id);
    let dist_to_identity = nn.norm();
    let lhs = apply_entire_series(w, &d.scale_real(n as f64)).value;
    let inversion_residual = lhs.sub(&nn.scale_real(n as f64)).norm();
    Ok(EsterleReport {
        n,
        threshold: thr,
        diff_norm,
        dist_to_identity,
        hypothesis_holds: diff_norm <= thr,
        conclusion_holds: dist_to_identity <= 1.0 / (n as f64 + 1.0),
        inversion_residual,
    })
}

/// Strictly upper triangular matrix with entries uniform on `[-1, 1]`.
pub fn random_strictly_upper(dim: usize, rng: &mut impl Rng) -> DenseOperator<f64> {
    let mut m = DenseOperator::zeros(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            m.set(i, j, Complex::new(rng.gen_range(-1.0..=1.0), 0.0));
        }
    }
    m
}

/// `T = I + cN` with random strictly upper `N` and `c` chosen by bisection so
/// that `‖T^{n+1} - T^n‖ = fraction · n^n/(n+1)^{n+1}`.
pub fn esterle_instance(dim: usize, n: u32, seed: u64, fraction: f64, kind: NormKind) -> Result<DenseOperator<f64>> {
    if dim < 2 {
        return Err(Error::param("instances need dim >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = random_strictly_upper(dim, &mut rng).with_norm(kind);
    let id = DenseOperator::identity(dim).with_norm(kind);
    let target = fraction * threshold(ThresholdKind::EsterleN { n })?;
    let diff = |s: f64| {
        let t = id.add(&base.scale_real(s));
        let tn = t.pow(n as u64);
        tn.matmul(&t).sub(&tn).norm()
    };
    let mut hi = 1.0;
    while diff(hi) < target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Convergence { iterations: 40 });
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if diff(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(id.add(&base.scale_real(lo)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerDiagnostics {
    /// `(n, ‖T^n‖)`.
    pub norms: ExperimentSeries,
    /// `(n, n ‖T^{n+1} - T^n‖)`.
    pub diffs: ExperimentSeries,
}

impl PowerDiagnostics {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,norm_Tn,n_diff_norm\n");
        for (a, b) in self.norms.points.iter().zip(&self.diffs.points) {
            out.push_str(&format!("{},{:?},{:?}\n", a.0, a.1, b.1));
        }
        out
    }
}

/// `‖T^n‖` and `n ‖T^{n+1} - T^n‖` for `n = 1..=n_max`. Stops early, with
/// the truncated flag set, once an entry overflows.
pub fn power_diagnostics(t: &DenseOperator<f64>, n_max: usize) -> Result<PowerDiagnostics> {
    if n_max < 1 {
        return Err(Error::param("n_max must be >= 1"));
    }
    let mut p = t.clone();
    let mut norms = Vec::with_capacity(n_max);
    let mut diffs = Vec::with_capacity(n_max);
    let mut truncated = false;
    for n in 1..=n_max {
        let next = p.matmul(t);
        if !next.is_finite() {
            truncated = true;
            break;
        }
        norms.push((n as f64, p.norm()));
        diffs.push((n as f64, n as f64 * next.sub(&p).norm()));
        p = next;
    }
    if norms.is_empty() {
        return Err(Error::Overflow("power_diagnostics"));
    }
    let mut norms = ExperimentSeries::from_points(norms);
    let mut diffs = ExperimentSeries::from_points(diffs);
    norms.truncated = truncated;
    diffs.truncated = truncated;
    Ok(PowerDiagnostics { norms, diffs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RittGrid {
    pub radii: usize,
    pub angles: usize,
    pub min_gap: f64,
    pub max_gap: f64,
}

impl Default for RittGrid {
    fn default() -> Self {
        RittGrid {
            radii: 64,
            angles: 256,
            min_gap: 1e-6,
            max_gap: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RittReport {
    /// Grid maximum of `|λ - 1| ‖(T - λ)^{-1}‖`: a lower bound for the
    /// Ritt constant.
    pub constant: f64,
    pub argmax_re: f64,
    pub argmax_im: f64,
    /// Grid points skipped because the resolvent solve was singular.
    pub excluded_points: usize,
    /// `‖T^k‖^{1/k}` at `k = 64`.
    pub spectral_radius_est: f64,
    pub warning: Option<String>,
}

/// Grid lower bound for `sup_{|λ|>1} |λ - 1| ‖(T - λ)^{-1}‖`, over
/// `|λ| = 1 + ρ` with `ρ` log-spaced in `[min_gap, max_gap]`.
pub fn ritt_constant(t: &DenseOperator<f64>, grid: &RittGrid) -> Result<RittReport> {
    if grid.radii < 2 || grid.angles < 1 || !(grid.min_gap > 0.0 && grid.max_gap > grid.min_gap) {
        return Err(Error::param(
            "Ritt grid needs radii >= 2, angles >= 1, 0 < min_gap < max_gap",
        ));
    }
    let k = 64;
    let spectral_radius_est = t.pow(k).norm().powf(1.0 / k as f64);
    let warning = (spectral_radius_est > 1.0 + 1e-2)
        .then(|| format!("spectral radius estimate {spectral_radius_est} exceeds 1; the constant is not meaningful"));
    let (l0, l1) = (grid.min_gap.ln(), grid.max_gap.ln());
    let points: Vec<(usize, usize)> = (0..grid.radii)
        .flat_map(|i| (0..grid.angles).map(move |j| (i, j)))
        .collect();
    let vals: Vec<Option<(f64, Complex<f64>)>> = points
        .par_iter()
        .map(|&(i, j)| {
            let rho = (l0 + (l1 - l0) * i as f64 / (grid.radii - 1) as f64).exp();
            let lambda = Complex::from_polar(1.0 + rho, 2.0 * std::f64::consts::PI * j as f64 / grid.angles as f64);
            let mut m = t.clone();
            for d in 0..t.dim() {
                m.set(d, d, m.get(d, d) - lambda);
            }
            m.inverse().map(|inv| ((lambda - 1.0).norm() * inv.norm(), lambda))
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, Complex::new(f64::NAN, f64::NAN));
    let mut excluded = 0;
    for v in vals {
        match v {
            Some((x, l)) if x.is_finite() => {
                if x > best.0 {
                    best = (x, l);
                }
            }
            _ => excluded += 1,
        }
    }
    Ok(RittReport {
        constant: best.0,
        argmax_re: best.1.re,
        argmax_im: best.1.im,
        excluded_points: excluded,
        spectral_radius_est,
        warning,
    })
}
