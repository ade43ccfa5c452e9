//! Worked constructions around the mean-value recurrence.
//!
//! Binomial (Selberg–Delange style) mean values, smooth cutoffs against the
//! Dickman function, periodic sign patterns and their discrete Fourier
//! resonance, the period-3 closed form, point-mass asymptotics, and root
//! recovery for terminating mean-value sequences.
//!
//! An aside on parity: the completely multiplicative `f(F) = (−1)^{deg F}`
//! has `σ(n) = (−1)^n`, so no analogue of the integer one-sided mean-value
//! spectrum bound (whose sharp constant is `−0.656999…`) can hold here
//! without accounting for it.

use crate::mult_series::{e_unit, sigma_from_chi, ChiSeq, SigmaSeq};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// `binom(α+n−1, n) = Π_{j=0}^{n−1} (α+j)/(j+1)`, the mean value of the
/// `α`-fold divisor analogue.
pub fn binomial_sigma(alpha: Complex64, n: usize) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..n {
        prod *= (alpha + j as f64) / (j + 1) as f64;
    }
    prod
}

/// Exact-rational [`binomial_sigma`].
pub fn binomial_sigma_exact(alpha: &BigRational, n: usize) -> BigRational {
    let mut prod = BigRational::one();
    for j in 0..n {
        let num = alpha + BigRational::from_integer(BigInt::from(j));
        prod *= num / BigRational::from_integer(BigInt::from(j + 1));
    }
    prod
}

/// Tabulated Dickman function `ρ(u)`.
///
/// `ρ = 1` on `[0,1]`, `ρ(u) = 1 − log u` on `[1,2]`, and beyond 2 the
/// table advances through the delay equation `u ρ(u) = ∫_{u−1}^{u} ρ`,
/// discretized by the implicit trapezoid rule with the Euler–Maclaurin
/// endpoint correction `−(h²/12)(ρ'(u) − ρ'(u−1))`, where
/// `ρ'(v) = −ρ(v−1)/v` is known from earlier nodes. Evaluation between
/// nodes is cubic (4-point Lagrange), with stencils clipped at `u = 2`
/// where `ρ''` jumps.
pub struct DickmanTable {
    /// Nodes per unit interval.
    k: usize,
    u_max: f64,
    values: Vec<f64>,
}

impl DickmanTable {
    /// Builds the table on `[0, u_max]` with step `2^{−h_exp}`.
    pub fn new(u_max: f64, h_exp: u32) -> Self {
        assert!(u_max >= 2.0, "table must extend past the closed-form range");
        let k = 1usize << h_exp;
        let h = 1.0 / k as f64;
        let n = (u_max * k as f64).ceil() as usize;
        let mut v = vec![0.0f64; n + 1];
        for (j, slot) in v.iter_mut().enumerate().take(2 * k + 1) {
            let u = j as f64 * h;
            *slot = if j <= k { 1.0 } else { 1.0 - u.ln() };
        }
        // ρ'(u_i) = −ρ(u_i − 1)/u_i for u_i ≥ 1
        let drho = |v: &[f64], i: usize| -> f64 {
            if i < k {
                0.0
            } else {
                -v[i - k] * k as f64 / i as f64
            }
        };
        for j in 2 * k + 1..=n {
            let u = j as f64 * h;
            // compensated interior sum Σ_{i=j−k+1}^{j−1} ρ(u_i)
            let mut sum = 0.0;
            let mut comp = 0.0;
            for &x in &v[j - k + 1..j] {
                let t = sum + x;
                comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
                sum = t;
            }
            let interior = sum + comp;
            let correction = -(h * h / 12.0) * (drho(&v, j) - drho(&v, j - k));
            v[j] = (h * (0.5 * v[j - k] + interior) + correction) / (u - 0.5 * h);
        }
        DickmanTable { k, u_max: n as f64 * h, values: v }
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn step(&self) -> f64 {
        1.0 / self.k as f64
    }

    /// `ρ(u)`; rejects arguments outside `[0, u_max]`.
    pub fn rho(&self, u: f64) -> Result<f64> {
        if !(0.0..=self.u_max).contains(&u) {
            return Err(Error::RhoOutOfRange { u, u_max: self.u_max });
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        if u <= 2.0 {
            return Ok(1.0 - u.ln());
        }
        let x = u * self.k as f64;
        let i0 = x.floor() as usize;
        let base = i0
            .saturating_sub(1)
            .clamp(2 * self.k, self.values.len() - 4);
        let s = x - base as f64;
        let w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
        let w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
        let w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
        let w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
        Ok(w0 * self.values[base]
            + w1 * self.values[base + 1]
            + w2 * self.values[base + 2]
            + w3 * self.values[base + 3])
    }
}

fn default_table() -> &'static DickmanTable {
    static TABLE: OnceLock<DickmanTable> = OnceLock::new();
    TABLE.get_or_init(|| DickmanTable::new(64.0, 10))
}

/// `ρ(u)` on the default table (`u_max = 64`, step `2^{−10}`).
pub fn dickman_rho(u: f64) -> Result<f64> {
    default_table().rho(u)
}

/// Mean values of the smooth cutoff model `χ(ℓ) = 1` for `ℓ ≤ m`, else 0.
/// Satisfies `σ(n) = 1` for `n ≤ m` and `σ(n) ≥ ρ(n/m)` for all `n`.
pub fn smooth_sigma(m: usize, n_max: usize) -> Result<SigmaSeq> {
    if m == 0 {
        return Err(Error::BadArgument("smooth cutoff m must be at least 1"));
    }
    let values = (1..=n_max.max(1))
        .map(|k| {
            if k <= m {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            }
        })
        .collect();
    let chi = ChiSeq::new(values, 1.0)?;
    sigma_from_chi(&chi, n_max)
}

/// The period-`m` sign pattern `χ(k) = sign(cos(2πk/m))` for odd `m`,
/// repeated out to the requested length.
pub fn periodic_sign_chi(m: usize, len: usize) -> Result<ChiSeq> {
    if m % 2 == 0 {
        return Err(Error::EvenPeriod(m));
    }
    let pattern: Vec<f64> = (1..=m)
        .map(|k| {
            let c = (2.0 * PI * k as f64 / m as f64).cos();
            if c >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let values = (0..len)
        .map(|i| Complex64::new(pattern[i % m], 0.0))
        .collect();
    ChiSeq::new(values, 1.0)
}

/// The discrete Fourier coefficients of one period:
/// `χ̂(j) = (1/m) Σ_{k=1}^{m} χ(k) e(−jk/m)`, returned for `j = 1..=m`.
pub fn hat_chi(period: &[Complex64]) -> Vec<Complex64> {
    let m = period.len();
    (1..=m)
        .map(|j| {
            let mut acc = Complex64::zero();
            for (k, v) in period.iter().enumerate() {
                acc += v * e_unit(-((j * (k + 1)) as f64) / m as f64);
            }
            acc / m as f64
        })
        .collect()
}

/// The closed-form mean values of the period-3 sign pattern:
/// `σ(3k) = −σ(3k+1) = Π_{i=1}^{k} (i − 1/3)/i` and `σ(3k+2) = 0`.
pub fn m3_closed_form(j: usize) -> f64 {
    match j % 3 {
        2 => 0.0,
        rem => {
            let k = j / 3;
            let mut prod = 1.0;
            for i in 1..=k {
                prod *= (i as f64 - 1.0 / 3.0) / i as f64;
            }
            if rem == 0 {
                prod
            } else {
                -prod
            }
        }
    }
}

/// Exact-rational [`m3_closed_form`]: `Π (3i−1)/(3i)` with a sign.
pub fn m3_closed_form_exact(j: usize) -> BigRational {
    match j % 3 {
        2 => BigRational::zero(),
        rem => {
            let k = j / 3;
            let mut prod = BigRational::one();
            for i in 1..=k as i64 {
                prod *= BigRational::new((3 * i - 1).into(), (3 * i).into());
            }
            if rem == 0 {
                prod
            } else {
                -prod
            }
        }
    }
}

/// Lanczos approximation of `Γ(z)` (g = 7, 9 coefficients), with the
/// reflection formula for `Re z < 1/2`. Relative accuracy ~1e−13 away from
/// the poles; at the poles the reflection returns `inf`, so `1/Γ` is 0.
pub fn complex_gamma(z: Complex64) -> Complex64 {
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if z.re < 0.5 {
        // Γ(z) Γ(1−z) = π / sin(πz)
        let pi_z = z * PI;
        return PI / (pi_z.sin() * complex_gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + 7.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// A finite set of unit-circle point masses `Σ_j a_j e(−k α_j)` driving
/// `χ(k)`, with the leading asymptotic coefficients
/// `C₀(j) = Π_{ℓ≠j} (1 − e(α_j − α_ℓ))^{−a_ℓ}` (principal branch powers).
#[derive(Debug, Clone)]
pub struct PointMassConfig {
    alphas: Vec<f64>,
    weights: Vec<Complex64>,
    c0: Vec<Complex64>,
}

impl PointMassConfig {
    /// Weights must satisfy `|a_j| ≤ 1` and the points must be pairwise
    /// distinct mod 1.
    pub fn new(alphas: Vec<f64>, weights: Vec<Complex64>) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != weights.len() {
            return Err(Error::BadArgument("need equally many points and weights, at least one"));
        }
        if weights.iter().any(|a| a.norm() > 1.0 + 1e-12) {
            return Err(Error::BadArgument("point-mass weights must satisfy |a| <= 1"));
        }
        let alphas: Vec<f64> = alphas.into_iter().map(|a| a.rem_euclid(1.0)).collect();
        for i in 0..alphas.len() {
            for j in i + 1..alphas.len() {
                let d = (alphas[i] - alphas[j]).rem_euclid(1.0);
                if d.min(1.0 - d) < 1e-9 {
                    return Err(Error::CoincidentPoints);
                }
            }
        }
        let c0 = (0..alphas.len())
            .map(|j| {
                let mut prod = Complex64::new(1.0, 0.0);
                for l in 0..alphas.len() {
                    if l != j {
                        let base = Complex64::new(1.0, 0.0) - e_unit(alphas[j] - alphas[l]);
                        prod *= base.powc(-weights[l]);
                    }
                }
                prod
            })
            .collect();
        Ok(PointMassConfig { alphas, weights, c0 })
    }

    /// Deterministic sample configuration: `k` points with angles and
    /// weights drawn through [`crate::SplitMix64`], weights in the unit disc.
    pub fn sample(seed: u64, k: usize) -> Self {
        let mut rng = crate::SplitMix64::new(seed);
        let mut alphas = Vec::with_capacity(k);
        while alphas.len() < k {
            let a: f64 = rng.next_f64();
            if alphas
                .iter()
                .all(|&b: &f64| ((a - b).rem_euclid(1.0)).min(1.0 - (a - b).rem_euclid(1.0)) > 1e-3)
            {
                alphas.push(a);
            }
        }
        let weights = (0..k).map(|_| rng.next_in_disc(1.0)).collect();
        PointMassConfig::new(alphas, weights).expect("sampled points are distinct")
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn c0(&self) -> &[Complex64] {
        &self.c0
    }

    /// `χ(k) = Σ_j a_j e(−k α_j)`, with `κ = Σ |a_j|`.
    pub fn chi(&self, len: usize) -> Result<ChiSeq> {
        let kappa: f64 = self.weights.iter().map(|a| a.norm()).sum();
        let values = (1..=len)
            .map(|k| {
                let mut acc = Complex64::zero();
                for (a, alpha) in self.weights.iter().zip(&self.alphas) {
                    acc += a * e_unit(-(k as f64) * alpha);
                }
                acc
            })
            .collect();
        ChiSeq::new(values, kappa)
    }

    /// The leading asymptotic term
    /// `Σ_j C₀(j) e(−n α_j) n^{a_j − 1} / Γ(a_j)`; the discrepancy against
    /// the recurrence is `O(1/n)` when every `|a_j| ≤ 1`.
    pub fn main_term(&self, n: usize) -> Complex64 {
        let ln_n = (n as f64).ln();
        let mut acc = Complex64::zero();
        for ((a, alpha), c0) in self.weights.iter().zip(&self.alphas).zip(&self.c0) {
            let n_pow = ((a - 1.0) * ln_n).exp();
            let gamma = complex_gamma(*a);
            let inv_gamma = if gamma.is_finite() && gamma.norm() > 0.0 {
                1.0 / gamma
            } else {
                Complex64::zero()
            };
            acc += c0 * e_unit(-(n as f64) * alpha) * n_pow * inv_gamma;
        }
        acc
    }
}

/// Recovers the reciprocal roots of a terminating mean-value sequence:
/// with `σ(n) = 0` for `n > k`, the generating polynomial factors as
/// `Σ_{n≤k} σ(n) (qz)^n = Π_{j=1}^{k} (1 − z α_j)`, and this returns the
/// `α_j` (sorted by modulus then argument).
///
/// Every root must satisfy `|α_j| ≤ q(1+1e−9)`; the power sums reproduce
/// the prime-power averages via `q^ℓ χ(ℓ) = −Σ_j α_j^ℓ`.
pub fn recover_roots(sigma: &SigmaSeq, q: u32) -> Result<Vec<Complex64>> {
    let vals = sigma.values();
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-11 * scale;
    if vals.last().map_or(true, |v| v.norm() > tol) {
        return Err(Error::NonTerminatingSigma);
    }
    let k = match (0..vals.len()).rev().find(|&i| vals[i].norm() > tol) {
        Some(i) => i,
        None => return Err(Error::BadArgument("sigma sequence is identically zero")),
    };
    if k == 0 {
        return Ok(Vec::new());
    }
    // monic reversed polynomial R(y) = Σ_i σ(i) q^i y^{k−i}; roots are the α_j
    let qf = q as f64;
    let mut coeffs = vec![Complex64::zero(); k + 1]; // coeffs[i] of y^i
    let mut qpow = 1.0;
    for (i, v) in vals.iter().enumerate().take(k + 1) {
        coeffs[k - i] = v * qpow;
        qpow *= qf;
    }
    let roots = durand_kerner(&coeffs)?;
    for root in &roots {
        if root.norm() > qf * (1.0 + 1e-9) {
            return Err(Error::RootOutsideDisc { modulus: root.norm(), q: qf });
        }
    }
    let mut roots = roots;
    roots.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });
    Ok(roots)
}

/// The prime-power averages induced by recovered roots:
/// `χ(ℓ) = −Σ_j α_j^ℓ / q^ℓ`.
pub fn chi_from_roots(roots: &[Complex64], q: u32, len: usize) -> Vec<Complex64> {
    let qf = q as f64;
    (1..=len)
        .map(|l| {
            let mut acc = Complex64::zero();
            for r in roots {
                acc += (r / qf).powi(l as i32);
            }
            -acc
        })
        .collect()
}

/// Weierstrass (Durand–Kerner) iteration for all roots of a monic complex
/// polynomial given by its coefficients (`coeffs[i]` of `y^i`, leading 1).
/// Deterministic starting points on a circle of the Cauchy bound radius;
/// residuals are checked against `1e−9` times the evaluation scale.
fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = coeffs.len() - 1;
    debug_assert!((coeffs[k] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    let eval = |y: Complex64| {
        let mut acc = Complex64::zero();
        for c in coeffs.iter().rev() {
            acc = acc * y + c;
        }
        acc
    };
    let radius = 1.0 + coeffs[..k].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..k)
        .map(|j| radius * e_unit((j as f64 + 0.25) / k as f64))
        .collect();
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for j in 0..k {
            let yj = roots[j];
            let mut den = Complex64::new(1.0, 0.0);
            for (i, yi) in roots.iter().enumerate() {
                if i != j {
                    den *= yj - yi;
                }
            }
            if den.norm() == 0.0 {
                // coincident iterates: nudge deterministically
                roots[j] += Complex64::new(1e-8, 1e-8);
                max_step = f64::INFINITY;
                continue;
            }
            let step = eval(yj) / den;
            roots[j] = yj - step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= 1e-15 * radius {
            break;
        }
    }
    for root in &roots {
        let mut scale = 0.0;
        let mut pow = 1.0;
        for c in coeffs {
            scale += c.norm() * pow;
            pow *= root.norm().max(1.0);
        }
        let residual = eval(*root).norm();
        let bound = 1e-9 * scale.max(1.0);
        if residual > bound {
            return Err(Error::RootsNotConverged { residual, bound });
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi_spec::ChiSpec;
    use crate::lipschitz::c_m;
    use crate::mult_series::sigma_from_chi_exact;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn binomial_sigma_basics() {
        for n in 0..30 {
            assert!((binomial_sigma(c(1.0, 0.0), n) - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(binomial_sigma(c(-1.0, 0.0), 2).norm() < 1e-15);
        assert!((binomial_sigma(c(0.5, 0.0), 1) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn binomial_matches_recurrence_exactly() {
        let alpha = BigRational::new(2.into(), 3.into());
        let chi = crate::mult_series::ExactChiSeq::new(vec![alpha.clone(); 200], alpha.clone())
            .unwrap();
        let sigma = sigma_from_chi_exact(&chi, 200).unwrap();
        for n in (0..=200).step_by(25) {
            assert_eq!(*sigma.value(n), binomial_sigma_exact(&alpha, n), "n={n}");
        }
    }

    #[test]
    fn dickman_closed_forms() {
        assert_eq!(dickman_rho(0.5).unwrap(), 1.0);
        assert_eq!(dickman_rho(1.0).unwrap(), 1.0);
        let r2 = dickman_rho(2.0).unwrap();
        assert!((r2 - (1.0 - 2.0f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn dickman_rho_three() {
        // ρ(3) = 0.0486083883…, cross-checked at two grid resolutions
        let coarse = DickmanTable::new(8.0, 10);
        let fine = DickmanTable::new(8.0, 11);
        let a = coarse.rho(3.0).unwrap();
        let b = fine.rho(3.0).unwrap();
        assert!((a - 0.04860838829).abs() < 1e-8, "{a}");
        assert!((a - b).abs() < 1e-9, "step halving moved rho(3) by {}", (a - b).abs());
    }

    #[test]
    fn dickman_step_halving_certifies_1e8() {
        let coarse = DickmanTable::new(10.0, 10);
        let fine = DickmanTable::new(10.0, 11);
        let mut worst = 0.0f64;
        for i in 0..=1000 {
            let u = 10.0 * i as f64 / 1000.0;
            let d = (coarse.rho(u).unwrap() - fine.rho(u).unwrap()).abs();
            worst = worst.max(d);
        }
        assert!(worst < 1e-8, "worst step-halving difference {worst}");
    }

    #[test]
    fn dickman_monotone_decreasing() {
        let mut prev = 1.0;
        for i in 0..=640 {
            let u = 1.0 + 9.0 * i as f64 / 640.0;
            let r = dickman_rho(u).unwrap();
            assert!(r <= prev + 1e-15 && r > 0.0, "u={u}");
            prev = r;
        }
    }

    #[test]
    fn dickman_delay_equation_residual() {
        // u ρ(u) = ∫_{u−1}^{u} ρ, checked by fine Simpson on the interpolant
        for u in [2.5f64, 3.0, 4.75, 7.0] {
            let lhs = u * dickman_rho(u).unwrap();
            let panels = 4096;
            let h = 1.0 / panels as f64;
            let mut integral = 0.0;
            for i in 0..panels {
                let a = u - 1.0 + i as f64 * h;
                let m = a + 0.5 * h;
                let b = a + h;
                integral += (dickman_rho(a).unwrap()
                    + 4.0 * dickman_rho(m).unwrap()
                    + dickman_rho(b).unwrap())
                    * h
                    / 6.0;
            }
            assert!((lhs - integral).abs() < 1e-8, "u={u}: {lhs} vs {integral}");
        }
    }

    #[test]
    fn dickman_rejects_out_of_range() {
        assert!(matches!(dickman_rho(-0.1), Err(Error::RhoOutOfRange { .. })));
        assert!(matches!(dickman_rho(65.0), Err(Error::RhoOutOfRange { .. })));
    }

    #[test]
    fn smooth_sigma_m1_is_inverse_factorial() {
        let sigma = smooth_sigma(1, 12).unwrap();
        let mut fact = 1.0;
        for n in 1..=12 {
            fact *= n as f64;
            assert!((sigma.value(n).re - 1.0 / fact).abs() < 1e-15 / 1.0f64.max(fact / 1e15));
        }
    }

    #[test]
    fn smooth_sigma_dominates_dickman() {
        for m in 1..=6usize {
            let n_max = 30 * m;
            let sigma = smooth_sigma(m, n_max).unwrap();
            for n in 0..=n_max {
                let rho = dickman_rho(n as f64 / m as f64).unwrap();
                let s = sigma.value(n).re;
                assert!(
                    s >= rho - 1e-12,
                    "m={m} n={n}: sigma {s} < rho {rho}"
                );
            }
        }
    }

    #[test]
    fn smooth_ratio_log_grows_near_m_squared() {
        // log(σ(um)/ρ(u)) nonnegative and growing in u around u ≈ m
        for m in [4usize, 6, 8] {
            let sigma = smooth_sigma(m, m * (m + 3)).unwrap();
            let mut prev = -1.0;
            for u in m.saturating_sub(2)..=m + 2 {
                let s = sigma.value(u * m).re;
                let rho = dickman_rho(u as f64).unwrap();
                let log_ratio = (s / rho).ln();
                assert!(log_ratio >= 0.0, "m={m} u={u}");
                assert!(log_ratio > prev, "m={m} u={u}: ratio log not growing");
                prev = log_ratio;
            }
        }
    }

    #[test]
    fn periodic_sign_pattern_m3() {
        let chi = periodic_sign_chi(3, 9).unwrap();
        let want = [-1.0, -1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(chi.value(k + 1).re, *w);
        }
        assert!(matches!(periodic_sign_chi(4, 4), Err(Error::EvenPeriod(4))));
    }

    #[test]
    fn hat_chi_resonance_equals_cm() {
        for m in [3usize, 5, 7, 11] {
            let chi = periodic_sign_chi(m, m).unwrap();
            let hat = hat_chi(chi.values());
            let cm = c_m(m).value;
            // χ̂(1) = χ̂(m−1) = c_m, all others real and strictly smaller
            assert!((hat[0] - c(cm, 0.0)).norm() < 1e-12, "m={m}");
            assert!((hat[m - 2] - c(cm, 0.0)).norm() < 1e-12, "m={m}");
            for (j, h) in hat.iter().enumerate() {
                assert!(h.im.abs() < 1e-12, "m={m} j={}", j + 1);
                if j != 0 && j != m - 2 {
                    assert!(h.re < cm - 1e-9, "m={m} j={}", j + 1);
                }
            }
        }
    }

    #[test]
    fn m3_closed_form_small_values() {
        assert_eq!(m3_closed_form(0), 1.0);
        assert_eq!(m3_closed_form(1), -1.0);
        assert_eq!(m3_closed_form(2), 0.0);
        assert!((m3_closed_form(3) - 2.0 / 3.0).abs() < 1e-15);
        assert!((m3_closed_form(4) + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m3_closed_form(5), 0.0);
        assert_eq!(m3_closed_form_exact(3), BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn m3_closed_form_matches_recurrence_exactly() {
        let chi = ChiSpec::stock("periodic3").unwrap().chi_exact(240).unwrap();
        let sigma = sigma_from_chi_exact(&chi, 240).unwrap();
        for j in 0..=240 {
            assert_eq!(*sigma.value(j), m3_closed_form_exact(j), "j={j}");
        }
    }

    #[test]
    fn gamma_reference_values() {
        assert!((complex_gamma(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-13);
        assert!((complex_gamma(c(5.0, 0.0)) - c(24.0, 0.0)).norm() < 1e-11);
        assert!((complex_gamma(c(0.5, 0.0)) - c(PI.sqrt(), 0.0)).norm() < 1e-13);
        // Γ(2/3) = 1.3541179394264004…
        assert!((complex_gamma(c(2.0 / 3.0, 0.0)).re - 1.3541179394264004).abs() < 1e-12);
        // recurrence Γ(z+1) = zΓ(z) at a complex point
        let z = c(0.3, -0.7);
        let lhs = complex_gamma(z + 1.0);
        let rhs = z * complex_gamma(z);
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }

    #[test]
    fn m3_asymptotic_normalization() {
        // σ(3k) Γ(2/3) k^{1/3} → 1
        let gamma23 = complex_gamma(c(2.0 / 3.0, 0.0)).re;
        for k in [100usize, 400, 1000] {
            let v = m3_closed_form(3 * k) * gamma23 * (k as f64).powf(1.0 / 3.0);
            assert!((v - 1.0).abs() < 0.01, "k={k}: {v}");
        }
    }

    #[test]
    fn point_mass_single_trivial() {
        let cfg = PointMassConfig::new(vec![0.0], vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(cfg.c0()[0], c(1.0, 0.0));
        for n in [1usize, 10, 100] {
            assert!((cfg.main_term(n) - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn point_mass_single_alpha_matches_binomial_asymptotics() {
        let a = c(0.6, 0.0);
        let cfg = PointMassConfig::new(vec![0.0], vec![a]).unwrap();
        for n in [64usize, 512, 4096] {
            let main = cfg.main_term(n);
            let binom = binomial_sigma(a, n);
            assert!(
                (main - binom).norm() <= 2.0 / n as f64,
                "n={n}: {main} vs {binom}"
            );
        }
    }

    #[test]
    fn point_mass_rejects_bad_configs() {
        assert!(matches!(
            PointMassConfig::new(vec![0.1, 0.1 + 1e-12], vec![c(1.0, 0.0); 2]),
            Err(Error::CoincidentPoints)
        ));
        assert!(PointMassConfig::new(vec![0.1], vec![c(1.5, 0.0)]).is_err());
    }

    #[test]
    fn point_mass_main_term_error_is_o_one_over_n() {
        let cfg = PointMassConfig::sample(5, 3);
        let n_max = 1 << 10;
        let chi = cfg.chi(n_max).unwrap();
        let sigma = sigma_from_chi(&chi, n_max).unwrap();
        for npow in [6usize, 8, 10] {
            let n = 1usize << npow;
            let err = (sigma.value(n) - cfg.main_term(n)).norm();
            assert!(
                err * n as f64 <= 8.0,
                "n={n}: n·err = {}",
                err * n as f64
            );
        }
    }

    #[test]
    fn roots_of_mobius_pattern() {
        let mut vals = vec![c(0.0, 0.0); 6];
        vals[0] = c(1.0, 0.0);
        vals[1] = c(-1.0, 0.0);
        let sigma = SigmaSeq::new(vals).unwrap();
        let roots = recover_roots(&sigma, 2).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(2.0, 0.0)).norm() < 1e-10);
        let chi = chi_from_roots(&roots, 2, 6);
        for (l, v) in chi.iter().enumerate() {
            assert!((v + c(1.0, 0.0)).norm() < 1e-10, "chi({})", l + 1);
        }
    }

    #[test]
    fn roots_of_double_root_pattern() {
        // (1, −2, 1, 0, …) over q = 3: (1 − 3z)², roots {3, 3}, χ ≡ −2
        let mut vals = vec![c(0.0, 0.0); 6];
        vals[0] = c(1.0, 0.0);
        vals[1] = c(-2.0, 0.0);
        vals[2] = c(1.0, 0.0);
        let sigma = SigmaSeq::new(vals).unwrap();
        let roots = recover_roots(&sigma, 3).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!((r - c(3.0, 0.0)).norm() < 1e-4, "double root off: {r}");
        }
        let chi = chi_from_roots(&roots, 3, 4);
        for v in &chi {
            assert!((v + c(2.0, 0.0)).norm() < 1e-5, "{v}");
        }
    }

    #[test]
    fn roots_recover_random_constructions() {
        // build σ from k random roots inside |α| ≤ q, recover, compare power sums
        let q = 2u32;
        let mut rng = crate::SplitMix64::new(4242);
        for trial in 0..12 {
            let k = 2 + (rng.next_u64() % 6) as usize;
            let true_roots: Vec<Complex64> =
                (0..k).map(|_| rng.next_in_disc(0.9 * q as f64)).collect();
            // σ(n) q^n = coefficients of Π (1 − z α_j)
            let mut poly = vec![c(1.0, 0.0)];
            for r in &true_roots {
                let mut next = vec![c(0.0, 0.0); poly.len() + 1];
                for (i, p) in poly.iter().enumerate() {
                    next[i] += p;
                    next[i + 1] -= p * r;
                }
                poly = next;
            }
            let mut vals: Vec<Complex64> = poly
                .iter()
                .enumerate()
                .map(|(i, p)| p / (q as f64).powi(i as i32))
                .collect();
            vals.extend_from_slice(&[c(0.0, 0.0), c(0.0, 0.0)]);
            let sigma = SigmaSeq::new(vals).unwrap();
            let roots = recover_roots(&sigma, q).unwrap();
            assert_eq!(roots.len(), k, "trial {trial}");
            let lhs = chi_from_roots(&roots, q, 2 * k);
            let want = chi_from_roots(&true_roots, q, 2 * k);
            for (a, b) in lhs.iter().zip(&want) {
                assert!((a - b).norm() < 1e-9, "trial {trial}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn roots_rejects_nonterminating() {
        let vals = vec![c(1.0, 0.0); 5];
        let sigma = SigmaSeq::new(vals).unwrap();
        assert!(matches!(recover_roots(&sigma, 2), Err(Error::NonTerminatingSigma)));
    }
}
