//! The `χ`/`σ` series engine.
//!
//! The prime-power averages `χ(k)` determine the mean values `σ(n)` through
//! the convolution recurrence
//!
//! ```text
//! σ(0) = 1,    n σ(n) = Σ_{k=1}^{n} χ(k) σ(n−k),
//! ```
//!
//! which is the coefficient-level form of `Σ σ(n) z^n = exp(Σ χ(k) z^k / k)`.
//! Two number modes are supported: complex double precision for bound
//! evaluation, and exact rationals for oracle equality tests. The recurrence
//! is implemented once, generically, over [`Coeff`].

use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::{Add, Sub};

/// Slack allowed when checking `|χ(k)| ≤ κ` on floating-point construction.
pub const KAPPA_TOL: f64 = 1e-12;

/// Which arithmetic backs a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumberMode {
    /// Exact rational arithmetic; requires all `χ(k)` rational and real.
    Exact,
    /// Complex double precision.
    Float,
}

/// `e(t) = exp(2πit)`.
pub fn e_unit(t: f64) -> Complex64 {
    Complex64::new(0.0, TAU * t).exp()
}

/// Scalar arithmetic shared by the floating and exact number modes.
///
/// Both the convolution recurrence and its inverse only need ring
/// operations plus exact division by a positive integer index.
pub trait Coeff: Clone + PartialEq + Zero + Add<Output = Self> + Sub<Output = Self> {
    fn one_value() -> Self;
    fn from_int(v: i64) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Division by a positive index; exact in both modes.
    fn div_index(&self, n: u64) -> Self;
}

impl Coeff for Complex64 {
    fn one_value() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_index(&self, n: u64) -> Self {
        self / n as f64
    }
}

impl Coeff for BigRational {
    fn one_value() -> Self {
        BigRational::from_integer(1.into())
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_index(&self, n: u64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }
}

/// `σ(0..=n_max)` from `χ(1..=n_max)` by the convolution recurrence,
/// generically over the number mode.
pub fn sigma_from_chi_in<T: Coeff>(chi: &[T], n_max: usize) -> Vec<T> {
    let mut sigma = Vec::with_capacity(n_max + 1);
    sigma.push(T::one_value());
    for n in 1..=n_max {
        let mut acc = T::zero();
        for k in 1..=n {
            acc = acc + chi[k - 1].mul_ref(&sigma[n - k]);
        }
        sigma.push(acc.div_index(n as u64));
    }
    sigma
}

/// Inverse of [`sigma_from_chi_in`]: `χ(n) = n σ(n) − Σ_{k<n} χ(k) σ(n−k)`.
pub fn chi_from_sigma_in<T: Coeff>(sigma: &[T]) -> Vec<T> {
    let n_max = sigma.len() - 1;
    let mut chi: Vec<T> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = T::from_int(n as i64).mul_ref(&sigma[n]);
        for k in 1..n {
            acc = acc - chi[k - 1].mul_ref(&sigma[n - k]);
        }
        chi.push(acc);
    }
    chi
}

/// The prime-power average sequence `χ(1..=N)` with its bound `κ`.
///
/// `χ(0) = 0` by convention and is not stored; `value(k)` is 1-indexed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSeq {
    values: Vec<Complex64>,
    kappa: f64,
}

impl ChiSeq {
    /// Validates `|χ(k)| ≤ κ + 1e−12` for every `k`.
    pub fn new(values: Vec<Complex64>, kappa: f64) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if v.norm() > kappa + KAPPA_TOL {
                return Err(Error::KappaExceeded {
                    index: i + 1,
                    modulus: v.norm(),
                    kappa,
                });
            }
        }
        Ok(ChiSeq { values, kappa })
    }

    /// Builds with the smallest admissible bound `κ = max_k |χ(k)|`.
    pub fn from_values(values: Vec<Complex64>) -> Self {
        let kappa = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        ChiSeq { values, kappa }
    }

    /// Constant sequence `χ(k) = α`.
    pub fn constant(alpha: Complex64, len: usize) -> Self {
        ChiSeq {
            values: vec![alpha; len],
            kappa: alpha.norm(),
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `χ(k)`, 1-indexed.
    pub fn value(&self, k: usize) -> Complex64 {
        self.values[k - 1]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// The truncation `χ⊥`: values at indices `≥ n` replaced by zero, so the
    /// generating function becomes entire. Length is preserved.
    pub fn truncate_perp(&self, n: usize) -> ChiSeq {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if i + 1 < n { *v } else { Complex64::zero() })
            .collect();
        ChiSeq {
            values,
            kappa: self.kappa,
        }
    }

    /// The twist `χ_θ(k) = χ(k) e(−kθ)`; moduli are unchanged.
    pub fn twist(&self, theta: f64) -> ChiSeq {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * e_unit(-((i + 1) as f64) * theta))
            .collect();
        ChiSeq {
            values,
            kappa: self.kappa,
        }
    }
}

/// The mean-value sequence `σ(0..=N)`; `σ(0) = 1` always.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSeq {
    values: Vec<Complex64>,
}

impl SigmaSeq {
    /// Wraps a raw sequence; `σ(0)` must be 1.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() || (values[0] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::BadArgument("sigma sequence must start with sigma(0) = 1"));
        }
        Ok(SigmaSeq { values })
    }

    /// `σ(n)`, 0-indexed.
    pub fn value(&self, n: usize) -> Complex64 {
        self.values[n]
    }

    /// Largest index stored.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `σ(0..=n_max)` from a floating `χ`.
pub fn sigma_from_chi(chi: &ChiSeq, n_max: usize) -> Result<SigmaSeq> {
    if chi.len() < n_max {
        return Err(Error::TooShort {
            needed: n_max,
            len: chi.len(),
        });
    }
    Ok(SigmaSeq {
        values: sigma_from_chi_in(chi.values(), n_max),
    })
}

/// Recovers `χ(1..=N)` from `σ(0..=N)`. No `κ` bound is asserted on the
/// output; the returned sequence carries the smallest admissible bound.
pub fn chi_from_sigma(sigma: &SigmaSeq) -> ChiSeq {
    ChiSeq::from_values(chi_from_sigma_in(sigma.values()))
}

/// Exact-rational `χ` sequence (real-valued).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactChiSeq {
    values: Vec<BigRational>,
    kappa: BigRational,
}

impl ExactChiSeq {
    /// Strict bound check: `|χ(k)| ≤ κ` exactly.
    pub fn new(values: Vec<BigRational>, kappa: BigRational) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if v.abs() > kappa {
                return Err(Error::KappaExceeded {
                    index: i + 1,
                    modulus: v.to_f64().unwrap_or(f64::NAN),
                    kappa: kappa.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(ExactChiSeq { values, kappa })
    }

    pub fn from_values(values: Vec<BigRational>) -> Self {
        let kappa = values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        ExactChiSeq { values, kappa }
    }

    pub fn kappa(&self) -> &BigRational {
        &self.kappa
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, k: usize) -> &BigRational {
        &self.values[k - 1]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn truncate_perp(&self, n: usize) -> ExactChiSeq {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if i + 1 < n { v.clone() } else { BigRational::zero() })
            .collect();
        ExactChiSeq {
            values,
            kappa: self.kappa.clone(),
        }
    }

    /// Rounds to the floating representation.
    pub fn to_float(&self) -> ChiSeq {
        ChiSeq::from_values(
            self.values
                .iter()
                .map(|v| Complex64::new(v.to_f64().unwrap(), 0.0))
                .collect(),
        )
    }
}

/// Exact-rational mean-value sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSigmaSeq {
    values: Vec<BigRational>,
}

impl ExactSigmaSeq {
    pub fn value(&self, n: usize) -> &BigRational {
        &self.values[n]
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

/// Exact-mode convolution recurrence.
pub fn sigma_from_chi_exact(chi: &ExactChiSeq, n_max: usize) -> Result<ExactSigmaSeq> {
    if chi.len() < n_max {
        return Err(Error::TooShort {
            needed: n_max,
            len: chi.len(),
        });
    }
    Ok(ExactSigmaSeq {
        values: sigma_from_chi_in(chi.values(), n_max),
    })
}

/// Exact-mode inverse recurrence; requires `σ(0) = 1`.
pub fn chi_from_sigma_exact(sigma: &ExactSigmaSeq) -> Result<ExactChiSeq> {
    if sigma.values.is_empty() || sigma.values[0] != BigRational::from_integer(1.into()) {
        return Err(Error::BadArgument("sigma sequence must start with sigma(0) = 1"));
    }
    Ok(ExactChiSeq::from_values(chi_from_sigma_in(sigma.values())))
}

/// The scaled generating function `G(w) = exp(Σ_{k=1}^{n−1} χ(k) w^k / k)`,
/// i.e. the entire function whose Taylor coefficients are the truncated mean
/// values `σ⊥`. Coefficients `χ(k)/k` are fixed at construction so repeated
/// evaluation (circle maxima, quadrature) costs one Horner pass plus one
/// complex exponential.
#[derive(Debug, Clone)]
pub struct ScaledGenFn {
    coeffs: Vec<Complex64>,
}

impl ScaledGenFn {
    /// Uses `χ(k)` for `k < n`; `n − 1` may exceed the stored length, in
    /// which case the missing values are zero (consistent with `χ⊥`).
    pub fn new(chi: &ChiSeq, n: usize) -> Self {
        let take = n.saturating_sub(1).min(chi.len());
        let coeffs = (1..=take)
            .map(|k| chi.value(k) / k as f64)
            .collect();
        ScaledGenFn { coeffs }
    }

    /// The exponent `Σ χ(k) w^k / k` by Horner.
    pub fn exponent_at(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc + c) * w;
        }
        acc
    }

    /// `G(w)`.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.exponent_at(w).exp()
    }

    /// `log |G|` at `w = r e(φ)`.
    pub fn log_abs(&self, r: f64, phi: f64) -> f64 {
        self.exponent_at(Complex64::from_polar(r, TAU * phi)).re
    }

    /// Bound on `|d/dφ log|G(r e(φ))||`: `2π Σ_k |χ(k)| r^k`.
    pub fn angular_lipschitz(&self, r: f64) -> f64 {
        let mut sum = 0.0;
        let mut rk = 1.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            rk *= r;
            sum += (i + 1) as f64 * c.norm() * rk;
        }
        TAU * sum
    }

    /// Bound on `|d²/dφ² log|G(r e(φ))||`: `4π² Σ_k k |χ(k)| r^k`.
    pub fn angular_curvature(&self, r: f64) -> f64 {
        let mut sum = 0.0;
        let mut rk = 1.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            rk *= r;
            let k = (i + 1) as f64;
            sum += k * k * c.norm() * rk;
        }
        TAU * TAU * sum
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
}

/// `G(w)` for the truncation of `chi` at `n`, straight from the definition.
pub fn eval_g(chi: &ChiSeq, n: usize, w: Complex64) -> Complex64 {
    ScaledGenFn::new(chi, n).eval(w)
}

/// The trivial bound `binom(κ+n−1, n) = Π_{j=0}^{n−1} (κ+j)/(j+1)`,
/// by the cancellation-free running product.
pub fn trivial_bound(kappa: f64, n: usize) -> f64 {
    assert!(kappa >= 0.0, "kappa must be nonnegative");
    let mut prod = 1.0;
    for j in 0..n {
        prod *= (kappa + j as f64) / (j + 1) as f64;
    }
    prod
}
