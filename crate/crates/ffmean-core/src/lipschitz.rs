//! Lipschitz estimates for twisted mean values.
//!
//! For `f` in the class `C(1)` the twisted differences
//! `σ_θ(n+ℓ) − σ_θ(n)` are controlled, at the maximizing twist `θ`, by the
//! quantity
//!
//! ```text
//! L(n,ℓ;θ) = max_{|z|=1} |(1 − z^ℓ) exp(Σ_{j<n} χ_θ(j) z^j / j)|
//! ```
//!
//! through the explicit inequality
//! `n |σ_θ(n+ℓ) − σ_θ(n)| ≤ 5ℓ + 3L + L log(2n/L) + 2`, and `L` itself is
//! dominated pointwise by
//! `L*(n,ℓ;α) = |1 − e(ℓα)| exp(Σ_{k<n} |cos(πkα)|/k)`.
//!
//! The size of `L*` is governed by the resonance constants
//! `c_m = (1/m) Σ_a |cos(πa/m)|` through rational approximation of `α`:
//! `m₀`, the smallest odd integer not dividing `ℓ`, yields the
//! function-field term `n^{−(1−c_{m₀})}` that has no integer analogue.
//!
//! Asymptotic statements carry implied constants, so the corresponding
//! checks here are regression properties with pinned empirical constants
//! ([`TWO_TERM_K`], [`L_STAR_BRACKET`]) rather than theorems.

use crate::certify::{max_periodic, max_periodic_scalar};
use crate::mult_series::{e_unit, sigma_from_chi, ChiSeq, KAPPA_TOL};
use crate::{Error, Result};
use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;
use std::f64::consts::{FRAC_2_PI, PI, TAU};

/// Pinned empirical constant for the two-term difference bound; the
/// randomized regression suite must pass with this value.
pub const TWO_TERM_K: f64 = 64.0;

/// Pinned empirical bracket for `L*` against the rational-approximation
/// estimate: the ratio stays within `[1/B, B]` on the regression grid
/// (observed range [2.7, 10.8] over n ∈ {2⁴, …, 2¹²}).
pub const L_STAR_BRACKET: f64 = 16.0;

/// Certification gap on the twist objective (the bound is `1e−8`; we
/// certify to a tenth of it).
pub const THETA_GAP: f64 = 1e-9;

/// Relative certification gap for `L` and `max L*`.
pub const L_REL_TOL: f64 = 1e-6;

/// Slack added to the explicit inequality for certification error.
pub const EXPLICIT_BOUND_ALLOWANCE: f64 = 1e-6;

/// `‖t‖`: distance from `t` to the nearest integer.
pub fn dist_to_int(t: f64) -> f64 {
    (t - t.round()).abs()
}

/// The resonance constant `c_m` of the period-`m` cosine sign pattern.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CmValue {
    pub m: usize,
    pub value: f64,
}

/// `c_m` by the closed form `cosec(π/2m)/m` (odd) or `cot(π/2m)/m` (even).
pub fn c_m_closed_form(m: usize) -> f64 {
    assert!(m >= 1);
    let x = PI / (2.0 * m as f64);
    if m % 2 == 1 {
        1.0 / (m as f64 * x.sin())
    } else {
        x.cos() / (m as f64 * x.sin())
    }
}

/// `c_m` by the defining average `(1/m) Σ_{a=0}^{m−1} |cos(πa/m)|`.
pub fn c_m_cosine_sum(m: usize) -> f64 {
    assert!(m >= 1);
    let mut sum = 0.0;
    for a in 0..m {
        sum += (PI * a as f64 / m as f64).cos().abs();
    }
    sum / m as f64
}

/// `c_m` by the Fourier tail `(2/π)(1 − 2 Σ_{m|r} (−1)^r/(4r²−1))`.
///
/// The series is summed over `r = ms` up to `s ≤ max(64, 10⁶/m²)` and the
/// tail is corrected analytically: half the next term for the alternating
/// (odd `m`) case, the midpoint integral for the same-sign (even `m`) case.
pub fn c_m_fourier(m: usize) -> f64 {
    assert!(m >= 1);
    let mf = m as f64;
    let s_max = ((1.0e6 / (mf * mf)).ceil() as usize).max(64);
    let mut sum = 0.0;
    for s in 1..=s_max {
        let r = mf * s as f64;
        let sign = if (m * s) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / (4.0 * r * r - 1.0);
    }
    let tail = if m % 2 == 0 {
        // all terms positive: ∫_{S+1/2}^∞ ds / (4m²s² − 1)
        let x = 2.0 * mf * (s_max as f64 + 0.5);
        ((x + 1.0) / (x - 1.0)).ln() / (4.0 * mf)
    } else {
        // alternating: half the first omitted term
        let s = (s_max + 1) as f64;
        let sign = if (m * (s_max + 1)) % 2 == 0 { 1.0 } else { -1.0 };
        0.5 * sign / (4.0 * mf * mf * s * s - 1.0)
    };
    FRAC_2_PI * (1.0 - 2.0 * (sum + tail))
}

/// `c_m` (closed form route).
pub fn c_m(m: usize) -> CmValue {
    CmValue { m, value: c_m_closed_form(m) }
}

/// The smallest odd integer that does not divide `ℓ`.
pub fn m0_of(ell: u64) -> u64 {
    assert!(ell >= 1);
    let mut m = 3u64;
    while ell % m == 0 {
        m += 2;
    }
    m
}

/// `L*(n,ℓ;α) = |1 − e(ℓα)| exp(Σ_{k=1}^{n−1} |cos(πkα)|/k)`.
pub fn l_star(n: usize, ell: usize, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadArgument("l_star needs n >= 2"));
    }
    let mut expo = 0.0;
    for k in 1..n {
        expo += (PI * k as f64 * alpha).cos().abs() / k as f64;
    }
    Ok(2.0 * (PI * ell as f64 * alpha).sin().abs() * expo.exp())
}

/// The twist `θ ∈ [0, 1)` maximizing `Re Σ_{j=1}^{n−1} χ_θ(j)/j`, certified
/// to within `1e−9` of the global maximum value. The argument itself may be
/// less precise when the objective is flat; downstream quantities depend on
/// `θ` only through smooth functions.
pub fn best_theta(chi: &ChiSeq, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadArgument("best_theta needs n >= 2"));
    }
    if chi.len() + 1 < n {
        return Err(Error::TooShort { needed: n - 1, len: chi.len() });
    }
    let coeffs: Vec<Complex64> = (1..n).map(|j| chi.value(j) / j as f64).collect();
    // |d/dθ Re Σ (χ(j)/j) e(−jθ)| ≤ 2π Σ |χ(j)|, second derivative adds a j
    let lip = TAU * (1..n).map(|j| chi.value(j).norm()).sum::<f64>();
    let curv = TAU * TAU * (1..n).map(|j| j as f64 * chi.value(j).norm()).sum::<f64>();
    let objective = |theta: f64| {
        let z = e_unit(-theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = (acc + c) * z;
        }
        acc.re
    };
    let out = max_periodic_scalar(
        objective,
        |a, b, fa, fb| {
            let w = b - a;
            fa.max(fb) + (0.5 * lip * w).min(0.125 * curv * w * w)
        },
        8 * n,
        |_| THETA_GAP,
    );
    Ok(out.witness_x.rem_euclid(1.0))
}

fn twisted_coeffs(chi: &ChiSeq, n: usize, theta: f64) -> Vec<Complex64> {
    (1..n)
        .map(|j| chi.value(j) * e_unit(-(j as f64) * theta) / j as f64)
        .collect()
}

/// `L(n,ℓ;θ)`: certified maximum over the unit circle of
/// `|(1 − z^ℓ) exp(Σ_{j<n} χ_θ(j) z^j / j)|`.
pub fn l_value(chi: &ChiSeq, n: usize, ell: usize, theta: f64) -> Result<f64> {
    if n < 2 || ell < 1 {
        return Err(Error::BadArgument("l_value needs n >= 2 and ell >= 1"));
    }
    if chi.len() + 1 < n {
        return Err(Error::TooShort { needed: n - 1, len: chi.len() });
    }
    let coeffs = twisted_coeffs(chi, n, theta);
    let h_lip = TAU * (1..n).map(|j| chi.value(j).norm()).sum::<f64>();
    let h_curv = TAU * TAU * (1..n).map(|j| j as f64 * chi.value(j).norm()).sum::<f64>();
    let ellf = ell as f64;
    let prefactor = |alpha: f64| 2.0 * (PI * ellf * alpha).sin().abs();
    // payload: (target value, exponent h(α))
    let eval = |alpha: f64| {
        let z = e_unit(alpha);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = (acc + c) * z;
        }
        let h = acc.re;
        (prefactor(alpha) * h.exp(), h)
    };
    let out = max_periodic(
        eval,
        |p: &(f64, f64)| p.0,
        |a, b, pa, pb| {
            let w = b - a;
            // |1 − z^ℓ| is 2|sin(πℓα)|: slope ≤ 2πℓ, curvature ≤ 2π²ℓ²
            let u_slack = (PI * ellf * w).min(0.25 * PI * PI * ellf * ellf * w * w);
            let u_bound = (prefactor(a).max(prefactor(b)) + u_slack).min(2.0);
            let h_bound = pa.1.max(pb.1) + (0.5 * h_lip * w).min(0.125 * h_curv * w * w);
            u_bound * h_bound.exp()
        },
        8 * n.max(ell),
        |best| L_REL_TOL * best.abs().max(1e-300),
    );
    Ok(out.upper)
}

/// A certified global maximum over the twist/angle variable `α ∈ [0, 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaMax {
    pub value: f64,
    pub lower_witness: f64,
    pub witness_alpha: f64,
    pub grid_points: usize,
    pub certification_gap: f64,
}

/// Certified `max_{α ∈ [0,1)} L*(n, ℓ; α)`.
///
/// The exponent sum is Lipschitz in `α` with constant `π(n−1)` and the
/// prefactor with constant `2πℓ`; a `64n`-point grid plus branch and bound
/// certifies the maximum to `1e−6` relative.
pub fn max_l_star(n: usize, ell: usize) -> Result<AlphaMax> {
    if n < 3 {
        return Err(Error::BadArgument("max_l_star needs n >= 3"));
    }
    if ell < 1 {
        return Err(Error::BadArgument("max_l_star needs ell >= 1"));
    }
    let e_lip = PI * (n as f64 - 1.0);
    // Σ_k (πk)²/k termwise; the chord bound survives the kinks of |cos|
    let e_curv = PI * PI * (n * (n - 1) / 2) as f64;
    let ellf = ell as f64;
    let prefactor = |alpha: f64| 2.0 * (PI * ellf * alpha).sin().abs();
    let eval = |alpha: f64| {
        let mut expo = 0.0;
        for k in 1..n {
            expo += (PI * k as f64 * alpha).cos().abs() / k as f64;
        }
        (prefactor(alpha) * expo.exp(), expo)
    };
    let out = max_periodic(
        eval,
        |p: &(f64, f64)| p.0,
        |a, b, pa, pb| {
            let w = b - a;
            let u_slack = (PI * ellf * w).min(0.25 * PI * PI * ellf * ellf * w * w);
            let u_bound = (prefactor(a).max(prefactor(b)) + u_slack).min(2.0);
            let e_bound = pa.1.max(pb.1) + (0.5 * e_lip * w).min(0.125 * e_curv * w * w);
            u_bound * e_bound.exp()
        },
        64 * n,
        |best| L_REL_TOL * best.abs().max(1e-300),
    );
    Ok(AlphaMax {
        value: out.upper,
        lower_witness: out.witness,
        witness_alpha: out.witness_x,
        grid_points: out.evals,
        certification_gap: out.upper - out.witness,
    })
}

/// Both sides of the sharpness identity behind the `L*` domination: for the
/// extremal `χ(k) = sign(cos(πkα))` at twist `θ = α/2`, the twisted middle
/// expression `Re Σ (χ_θ(j)/j) e(jα/2) cos(πjα)` equals `Σ |cos(πjα)|/j`.
/// Returns `(twisted route, direct route)`; zero cosines contribute zero.
pub fn domination_sharpness(n: usize, alpha: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::BadArgument("domination_sharpness needs n >= 2"));
    }
    let sign = |x: f64| {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    };
    let theta = alpha / 2.0;
    let mut twisted = 0.0;
    let mut direct = 0.0;
    for j in 1..n {
        let c = (PI * j as f64 * alpha).cos();
        let chi_j = Complex64::new(sign(c), 0.0);
        let chi_theta_j = chi_j * e_unit(-(j as f64) * theta);
        twisted += (chi_theta_j * e_unit(j as f64 * alpha / 2.0) * c).re / j as f64;
        direct += c.abs() / j as f64;
    }
    Ok((twisted, direct))
}

/// A Dirichlet-style rational approximation `b/m ≈ α` with `gcd(b,m) = 1`,
/// `m ≤ 2R`, `|α − b/m| ≤ 1/(2mR)` where `R = ⌈log n⌉`. The smallest
/// qualifying `m` is returned so runs are deterministic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RationalApprox {
    pub alpha: f64,
    pub b: i64,
    pub m: u32,
    pub r: u32,
}

pub fn rational_approx(alpha: f64, n: usize) -> Result<RationalApprox> {
    if n < 3 {
        return Err(Error::BadArgument("rational_approx needs n >= 3 so that R >= 2"));
    }
    let alpha = alpha.rem_euclid(1.0);
    let r = (n as f64).ln().ceil() as u32;
    for m in 1..=2 * r {
        let b = (alpha * m as f64).round() as i64;
        if (b.unsigned_abs()).gcd(&(m as u64)) != 1 {
            continue;
        }
        if (alpha - b as f64 / m as f64).abs() <= 1.0 / (2.0 * m as f64 * r as f64) {
            return Ok(RationalApprox { alpha, b, m, r });
        }
    }
    Err(Error::NoRationalApprox { alpha, n })
}

/// The sharper replacement for the `m^{O(1)}` factor:
/// `exp(−(4/π) Σ_{1≤r≤log m} ((−1)^r/(4r²−1)) log(m/|(rb)_m|))`,
/// where `(t)_m` is the least absolute residue of `t` mod `m`.
pub fn least_residue_factor(m: u32, b: i64) -> f64 {
    let r_max = (m as f64).ln().floor() as i64;
    let mut expo = 0.0;
    for r in 1..=r_max {
        let t = (r * b).rem_euclid(m as i64);
        let res = t.min(m as i64 - t) as f64;
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        expo += sign / (4.0 * (r * r) as f64 - 1.0) * (m as f64 / res).ln();
    }
    (-4.0 / PI * expo).exp()
}

/// The rational-approximation estimate for `L*(n,ℓ;α)`:
/// `‖ℓα‖ n^{2/π} min(n, 1/‖mα‖)^{c_m − 2/π}` times the factor of
/// [`least_residue_factor`]. The ratio `L*/estimate` is a regression quantity
/// bracketed by [`L_STAR_BRACKET`], not a certified bound.
pub fn l_star_estimate(n: usize, ell: usize, alpha: f64) -> Result<f64> {
    let ra = rational_approx(alpha, n)?;
    let cm = c_m(ra.m as usize).value;
    let nm = dist_to_int(ra.m as f64 * alpha);
    let pivot = if nm == 0.0 {
        n as f64
    } else {
        (n as f64).min(1.0 / nm)
    };
    Ok(dist_to_int(ell as f64 * alpha)
        * (n as f64).powf(FRAC_2_PI)
        * pivot.powf(cm - FRAC_2_PI)
        * least_residue_factor(ra.m, ra.b))
}

/// One verified Lipschitz instance: the explicit inequality and the
/// two-term difference bound at the maximizing twist.
#[derive(Debug, Clone, Serialize)]
pub struct LipschitzReport {
    pub n: usize,
    pub ell: usize,
    pub m0: u64,
    pub theta_star: f64,
    /// Certified `L(n,ℓ;θ*)`.
    pub l_value: f64,
    /// `n |σ_θ(n+ℓ) − σ_θ(n)|`.
    pub lhs: f64,
    /// `5ℓ + 3L + L log(2n/L) + 2`.
    pub prop1_rhs: f64,
    /// `(ℓ/n)^{1−2/π} log(2n/ℓ)`.
    pub thm2_term1: f64,
    /// `(log n)^{2−2/π} / n^{1−c_{m0}}`.
    pub thm2_term2: f64,
    pub explicit_pass: bool,
    pub two_term_pass: bool,
}

fn lipschitz_report(chi: &ChiSeq, n: usize, ell: usize) -> Result<LipschitzReport> {
    if chi.kappa() > 1.0 + KAPPA_TOL {
        return Err(Error::KappaAboveOne(chi.kappa()));
    }
    if n < 2 || ell < 1 || ell > n {
        return Err(Error::BadArgument("need n >= 2 and 1 <= ell <= n"));
    }
    if chi.len() < n + ell {
        return Err(Error::TooShort { needed: n + ell, len: chi.len() });
    }
    let theta = best_theta(chi, n)?;
    let l = l_value(chi, n, ell, theta)?;
    let sigma = sigma_from_chi(chi, n + ell)?;
    let nf = n as f64;
    let ellf = ell as f64;
    // σ_θ(n+ℓ) − σ_θ(n) = e(−nθ) (σ(n+ℓ)e(−ℓθ) − σ(n))
    let diff = (sigma.value(n + ell) * e_unit(-ellf * theta) - sigma.value(n)).norm();
    let lhs = nf * diff;
    // L log(2n/L) extended by continuity at L = 0; the logarithm is capped
    // below at 0 (L > 2n cannot occur for κ ≤ 1, but stay defensive)
    let log_term = if l > 0.0 { (2.0 * nf / l).ln().max(0.0) } else { 0.0 };
    let prop1_rhs = 5.0 * ellf + 3.0 * l + l * log_term + 2.0;

    let m0 = m0_of(ell as u64);
    let cm0 = c_m(m0 as usize).value;
    let thm2_term1 = (ellf / nf).powf(1.0 - FRAC_2_PI) * (2.0 * nf / ellf).ln();
    let thm2_term2 = nf.ln().powf(2.0 - FRAC_2_PI) / nf.powf(1.0 - cm0);
    let thm2_rhs = TWO_TERM_K * (thm2_term1 + thm2_term2);
    let mod_diff = (sigma.value(n + ell).norm() - sigma.value(n).norm()).abs();

    Ok(LipschitzReport {
        n,
        ell,
        m0,
        theta_star: theta,
        l_value: l,
        lhs,
        prop1_rhs,
        thm2_term1,
        thm2_term2,
        explicit_pass: lhs <= prop1_rhs + EXPLICIT_BOUND_ALLOWANCE,
        two_term_pass: diff <= thm2_rhs + 1e-9 && mod_diff <= thm2_rhs + 1e-9,
    })
}

/// Checks the explicit inequality
/// `n |σ_θ(n+ℓ) − σ_θ(n)| ≤ 5ℓ + 3L + L log(2n/L) + 2` at `θ = θ*`.
pub fn verify_explicit_bound(chi: &ChiSeq, n: usize, ell: usize) -> Result<LipschitzReport> {
    lipschitz_report(chi, n, ell)
}

/// Checks the two-term difference bound with the pinned constant
/// [`TWO_TERM_K`], for both the twisted difference and the modulus
/// difference.
pub fn verify_two_term_bound(chi: &ChiSeq, n: usize, ell: usize) -> Result<LipschitzReport> {
    lipschitz_report(chi, n, ell)
}
