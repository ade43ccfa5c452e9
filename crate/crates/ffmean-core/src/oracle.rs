//! Brute-force ground truth over `F_q[x]`.
//!
//! Given a [`ChiSpec`], a multiplicative function `f` is realized on prime
//! powers degree-by-degree and the averages
//!
//! ```text
//! χ(k) = q^{−k} Σ_{F ∈ M_k} Λ_f(F),    σ(n) = q^{−n} Σ_{F ∈ M_n} f(F)
//! ```
//!
//! are computed by enumerating and factoring every monic polynomial. In
//! exact rational mode the comparison against the series engine is an
//! equality with zero tolerance.
//!
//! The bridge from `χ` to `f` fixes `Λ_f(P^ℓ) = deg(P) · χ(ℓ · deg P)`
//! uniformly over irreducibles of equal degree; the values `f(P^j)` then
//! come from exponentiating the local series `Σ_ℓ χ(ℓ d) y^ℓ / ℓ`. This
//! keeps `|Λ_f| ≤ κ Λ` automatic and reproduces the requested `χ` exactly,
//! since `Σ_{d | k} d |P_d| = q^k`.
//!
//! The one deliberate exception is the `smooth` kind: there the natural
//! object is the indicator of `m`-smooth polynomials (`f(P^j) = 1` iff
//! `deg P ≤ m`), whose prime-power averages differ from the series-level
//! cutoff at composite degrees (`χ(2) = 1/2` instead of 1 for `m = 1`,
//! `q = 2`). Certification therefore compares the enumeration against the
//! series recurrence driven by the indicator-consistent `χ`, and the
//! series-level cutoff survives as the lower-bound model for smooth counts.

use crate::chi_spec::ChiSpec;
use crate::fq_poly::{
    count_irreducibles_formula, enumerate_monic, Factorization, Factorizer, FieldSize, MonicPoly,
};
use crate::mult_series::{sigma_from_chi_in, Coeff};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Enumeration ceiling: `q^n` beyond this is rejected with an estimate.
pub const FEASIBLE_LIMIT: f64 = 1e7;

fn check_feasible(q: FieldSize, degree: usize) -> Result<u64> {
    let count = (q.get() as f64).powi(degree as i32);
    if count > FEASIBLE_LIMIT {
        return Err(Error::Infeasible { q: q.get() as u64, degree, count });
    }
    Ok((q.get() as u64).pow(degree as u32))
}

/// The values `f(P^j)` shared by all irreducibles `P` of equal degree,
/// for every `d·j ≤ n_max`.
#[derive(Debug, Clone)]
pub struct PrimePowerValues<T> {
    n_max: usize,
    /// `by_degree[d][j−1] = f(P^j)` for `deg P = d`.
    by_degree: Vec<Vec<T>>,
}

impl<T: Coeff> PrimePowerValues<T> {
    /// Realizes `f` from the `χ` values (`chi[k−1] = χ(k)`, `k ≤ n_max`) by
    /// exponentiating each local series, or from the `m`-smooth indicator.
    pub fn from_chi_values(chi: &[T], n_max: usize, smooth_m: Option<usize>) -> Self {
        let mut by_degree: Vec<Vec<T>> = vec![Vec::new()];
        for d in 1..=n_max {
            let j_max = n_max / d;
            let values = match smooth_m {
                Some(m) => {
                    let v = if d <= m { T::one_value() } else { T::zero() };
                    vec![v; j_max]
                }
                None => {
                    // f(P^j) = [y^j] exp(Σ_ℓ χ(ℓd) y^ℓ/ℓ): the convolution
                    // recurrence applied to the subsampled sequence
                    let sub: Vec<T> = (1..=j_max).map(|j| chi[j * d - 1].clone()).collect();
                    let mut f = sigma_from_chi_in(&sub, j_max);
                    f.remove(0);
                    f
                }
            };
            by_degree.push(values);
        }
        PrimePowerValues { n_max, by_degree }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `f(P^j)` for `deg P = d`.
    pub fn f_value(&self, d: usize, j: usize) -> &T {
        &self.by_degree[d][j - 1]
    }

    /// `f(F)` as the product over the factorization.
    pub fn f_of(&self, fact: &Factorization) -> T {
        let mut acc = T::one_value();
        for (p, k) in fact.factors() {
            acc = acc.mul_ref(self.f_value(p.degree(), *k as usize));
        }
        acc
    }

    /// `Λ_f(P^j)` for `deg P = d`, derived from the `f`-values by the
    /// logarithmic recurrence (see [`local_lambda`]).
    pub fn lambdas(&self, d: usize) -> Vec<T> {
        local_lambda(&self.by_degree[d], d)
    }
}

/// Coefficients `Λ_f(P^k) = k·deg(P)·[y^k] log(1 + Σ_j f(P^j) y^j)`, from
/// the Newton-style recurrence `w_k = k a_k − Σ_{j<k} w_j a_{k−j}` with
/// `a_j = f(P^j)`; then `Λ_f(P^k) = d·w_k`.
pub fn local_lambda<T: Coeff>(f_values: &[T], d: usize) -> Vec<T> {
    let mut w: Vec<T> = Vec::with_capacity(f_values.len());
    for k in 1..=f_values.len() {
        let mut acc = T::from_int(k as i64).mul_ref(&f_values[k - 1]);
        for j in 1..k {
            acc = acc - w[j - 1].mul_ref(&f_values[k - j - 1]);
        }
        w.push(acc);
    }
    w.into_iter()
        .map(|x| T::from_int(d as i64).mul_ref(&x))
        .collect()
}

const CHUNK: u64 = 8192;

/// Sums `term(F)` over all of `M_n`, in fixed-size index chunks combined in
/// order, so float results are deterministic under any parallelism.
fn sum_over_monic<T, F>(q: FieldSize, n: usize, term: F) -> T
where
    T: Coeff + Send,
    F: Fn(&MonicPoly) -> T + Sync,
{
    let total = (q.get() as u64).pow(n as u32);
    let chunks: Vec<(u64, u64)> = (0..total)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK).min(total)))
        .collect();
    let partials: Vec<T> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = T::zero();
            for idx in lo..hi {
                acc = acc + term(&MonicPoly::from_index(q, n, idx));
            }
            acc
        })
        .collect();
    let mut acc = T::zero();
    for p in partials {
        acc = acc + p;
    }
    acc
}

fn oracle_chi_in<T: Coeff + Send + Sync>(
    pp: &PrimePowerValues<T>,
    q: FieldSize,
    k: usize,
    fz: &Factorizer,
) -> T {
    let qk = (q.get() as u64).pow(k as u32);
    let lambdas: Vec<Vec<T>> = (0..=k).map(|d| if d == 0 { Vec::new() } else { pp.lambdas(d) }).collect();
    let sum = sum_over_monic(q, k, |f| {
        match fz.factor(f).as_prime_power() {
            Some((p, j)) => lambdas[p.degree()][j as usize - 1].clone(),
            None => T::zero(),
        }
    });
    sum.div_index(qk)
}

fn oracle_sigma_in<T: Coeff + Send + Sync>(
    pp: &PrimePowerValues<T>,
    q: FieldSize,
    n: usize,
    fz: &Factorizer,
) -> T {
    let qn = (q.get() as u64).pow(n as u32);
    let sum = sum_over_monic(q, n, |f| {
        if f.degree() == 0 {
            T::one_value()
        } else {
            pp.f_of(&fz.factor(f))
        }
    });
    sum.div_index(qn)
}

/// Exact prime-power average `χ(k)` by enumeration of `M_k`.
pub fn oracle_chi_exact(spec: &ChiSpec, q: FieldSize, k: usize) -> Result<BigRational> {
    check_feasible(q, k)?;
    let pp = prime_power_values_exact(spec, k)?;
    let fz = Factorizer::new(q, k);
    Ok(oracle_chi_in(&pp, q, k, &fz))
}

/// Exact mean value `σ(n)` by enumeration of `M_n`.
pub fn oracle_sigma_exact(spec: &ChiSpec, q: FieldSize, n: usize) -> Result<BigRational> {
    check_feasible(q, n)?;
    let pp = prime_power_values_exact(spec, n)?;
    let fz = Factorizer::new(q, n);
    Ok(oracle_sigma_in(&pp, q, n, &fz))
}

/// Floating `χ(k)` by enumeration, for complex-valued specs.
pub fn oracle_chi_float(spec: &ChiSpec, q: FieldSize, k: usize) -> Result<Complex64> {
    check_feasible(q, k)?;
    let pp = prime_power_values_float(spec, k)?;
    let fz = Factorizer::new(q, k);
    Ok(oracle_chi_in(&pp, q, k, &fz))
}

/// Floating `σ(n)` by enumeration, for complex-valued specs.
pub fn oracle_sigma_float(spec: &ChiSpec, q: FieldSize, n: usize) -> Result<Complex64> {
    check_feasible(q, n)?;
    let pp = prime_power_values_float(spec, n)?;
    let fz = Factorizer::new(q, n);
    Ok(oracle_sigma_in(&pp, q, n, &fz))
}

/// Exact-mode prime-power values for a rational spec.
pub fn prime_power_values_exact(
    spec: &ChiSpec,
    n_max: usize,
) -> Result<PrimePowerValues<BigRational>> {
    let smooth_m = match spec {
        ChiSpec::Smooth { m, .. } => Some(*m),
        _ => None,
    };
    let chi = if smooth_m.is_some() {
        vec![BigRational::zero(); n_max]
    } else {
        spec.chi_exact(n_max)?.values().to_vec()
    };
    Ok(PrimePowerValues::from_chi_values(&chi, n_max, smooth_m))
}

/// Float-mode prime-power values for any spec.
pub fn prime_power_values_float(
    spec: &ChiSpec,
    n_max: usize,
) -> Result<PrimePowerValues<Complex64>> {
    let smooth_m = match spec {
        ChiSpec::Smooth { m, .. } => Some(*m),
        _ => None,
    };
    let chi = if smooth_m.is_some() {
        vec![Complex64::zero(); n_max]
    } else {
        spec.chi(n_max)?.values().to_vec()
    };
    Ok(PrimePowerValues::from_chi_values(&chi, n_max, smooth_m))
}

/// The `χ` sequence the oracle's `f` actually realizes: the spec's own
/// values for every kind except `smooth`, where the indicator model gives
/// `χ(k) = q^{−k} Σ_{d | k, d ≤ m} d |P_d|`.
pub fn consistent_chi_exact(
    spec: &ChiSpec,
    q: FieldSize,
    len: usize,
) -> Result<Vec<BigRational>> {
    match spec {
        ChiSpec::Smooth { m, .. } => Ok((1..=len)
            .map(|k| {
                let mut sum = BigInt::zero();
                for d in 1..=k.min(*m) {
                    if k % d == 0 {
                        sum += BigInt::from(d) * BigInt::from(count_irreducibles_formula(q, d as u32));
                    }
                }
                BigRational::new(sum, BigInt::from(q.get()).pow(k as u32))
            })
            .collect()),
        _ => Ok(spec.chi_exact(len)?.values().to_vec()),
    }
}

/// One disagreement between enumeration and the series engine.
#[derive(Debug, Clone, Serialize)]
pub struct OracleMismatch {
    pub quantity: String,
    pub q: u32,
    pub degree: usize,
    pub oracle: String,
    pub series: String,
}

/// Outcome of a certification run.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub spec: ChiSpec,
    pub q: u32,
    pub n_max: usize,
    pub all_pass: bool,
    pub mismatches: Vec<OracleMismatch>,
}

/// Certifies the series engine against enumeration, exactly.
///
/// For every `k, n ≤ n_max`: the enumerated `χ(k)` must equal the
/// oracle-consistent `χ(k)`, the enumerated `σ(n)` must equal the
/// convolution recurrence's output on that `χ`, and the enumerated
/// irreducible counts must match the Möbius-inversion formula. All
/// comparisons are exact rational equalities.
pub fn oracle_certify(spec: &ChiSpec, q: FieldSize, n_max: usize) -> Result<OracleReport> {
    check_feasible(q, n_max)?;
    let chi = consistent_chi_exact(spec, q, n_max)?;
    let sigma = sigma_from_chi_in(&chi, n_max);
    let pp = prime_power_values_exact(spec, n_max)?;
    let fz = Factorizer::new(q, n_max);
    let mut mismatches = Vec::new();

    for k in 1..=n_max {
        let oracle = oracle_chi_in(&pp, q, k, &fz);
        if oracle != chi[k - 1] {
            mismatches.push(OracleMismatch {
                quantity: "chi".into(),
                q: q.get(),
                degree: k,
                oracle: oracle.to_string(),
                series: chi[k - 1].to_string(),
            });
        }
    }
    for n in 1..=n_max {
        let oracle = oracle_sigma_in(&pp, q, n, &fz);
        if oracle != sigma[n] {
            mismatches.push(OracleMismatch {
                quantity: "sigma".into(),
                q: q.get(),
                degree: n,
                oracle: oracle.to_string(),
                series: sigma[n].to_string(),
            });
        }
    }
    for n in 1..=n_max {
        let direct = enumerate_monic(q, n)
            .filter(|f| fz.is_irreducible(f).expect("degree >= 1"))
            .count() as u128;
        let formula = count_irreducibles_formula(q, n as u32);
        if direct != formula {
            mismatches.push(OracleMismatch {
                quantity: "irreducible_count".into(),
                q: q.get(),
                degree: n,
                oracle: direct.to_string(),
                series: formula.to_string(),
            });
        }
    }

    Ok(OracleReport {
        spec: spec.clone(),
        q: q.get(),
        n_max,
        all_pass: mismatches.is_empty(),
        mismatches,
    })
}

/// Exercises the class-bound invariant `|Λ_f(P^k)| ≤ κ deg(P)` for every
/// prime power the run touches; returns the largest ratio `|Λ_f|/(κ d)`.
pub fn lambda_bound_ratio(spec: &ChiSpec, n_max: usize) -> Result<f64> {
    let pp = prime_power_values_exact(spec, n_max)?;
    let kappa = BigRational::from_float(spec.kappa()).unwrap_or_else(BigRational::one);
    let mut worst = BigRational::zero();
    for d in 1..=n_max {
        for lam in pp.lambdas(d) {
            let ratio = lam.abs() / (BigRational::from_integer(d.into()) * kappa.clone());
            if ratio > worst {
                worst = ratio;
            }
        }
    }
    Ok(worst.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u32) -> FieldSize {
        FieldSize::new(q).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn local_lambda_mobius_is_minus_degree() {
        // f(P) = −1, f(P^j) = 0 beyond: log(1−y) gives Λ_f(P^k) = −d
        let f = vec![rat(-1, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
        for d in [1usize, 3] {
            let lam = local_lambda(&f, d);
            assert!(lam.iter().all(|x| *x == rat(-(d as i64), 1)), "d={d}: {lam:?}");
        }
    }

    #[test]
    fn local_lambda_all_ones_is_von_mangoldt() {
        let f = vec![BigRational::one(); 5];
        let lam = local_lambda(&f, 2);
        assert!(lam.iter().all(|x| *x == rat(2, 1)));
    }

    #[test]
    fn local_lambda_geometric() {
        // f(P^j) = α^j: log(1/(1−αy)) gives Λ_f(P^k) = d α^k
        let alpha = rat(2, 3);
        let f: Vec<BigRational> = (1..=5).map(|j| {
            let mut p = BigRational::one();
            for _ in 0..j {
                p *= alpha.clone();
            }
            p
        }).collect();
        let lam = local_lambda(&f, 4);
        for (k, l) in lam.iter().enumerate() {
            let mut want = BigRational::from_integer(4.into());
            for _ in 0..=k {
                want *= alpha.clone();
            }
            assert_eq!(*l, want, "k={}", k + 1);
        }
    }

    #[test]
    fn bridge_reproduces_divisor_function() {
        // χ ≡ 2 realizes f(P^j) = j+1
        let spec = ChiSpec::stock("two").unwrap();
        let pp = prime_power_values_exact(&spec, 6).unwrap();
        for d in 1..=3usize {
            for j in 1..=6 / d {
                assert_eq!(*pp.f_value(d, j), rat(j as i64 + 1, 1), "d={d} j={j}");
            }
        }
    }

    #[test]
    fn bridge_reproduces_mobius_function() {
        let spec = ChiSpec::stock("minus-one").unwrap();
        let pp = prime_power_values_exact(&spec, 6).unwrap();
        for d in 1..=3usize {
            assert_eq!(*pp.f_value(d, 1), rat(-1, 1));
            for j in 2..=6 / d {
                assert_eq!(*pp.f_value(d, j), rat(0, 1), "d={d} j={j}");
            }
        }
    }

    #[test]
    fn oracle_chi_all_ones_is_one() {
        let spec = ChiSpec::stock("one").unwrap();
        for (q, k) in [(2u32, 1usize), (2, 4), (3, 3), (5, 2)] {
            assert_eq!(oracle_chi_exact(&spec, fq(q), k).unwrap(), rat(1, 1), "q={q} k={k}");
        }
    }

    #[test]
    fn oracle_chi_mobius_is_minus_one() {
        let spec = ChiSpec::stock("minus-one").unwrap();
        assert_eq!(oracle_chi_exact(&spec, fq(2), 2).unwrap(), rat(-1, 1));
        assert_eq!(oracle_chi_exact(&spec, fq(3), 3).unwrap(), rat(-1, 1));
    }

    #[test]
    fn oracle_chi_smooth_indicator_value() {
        // m = 1, q = 2, k = 2: only x² and (x+1)² contribute Λ_f = 1 each
        let spec = ChiSpec::stock("smooth1").unwrap();
        assert_eq!(oracle_chi_exact(&spec, fq(2), 2).unwrap(), rat(1, 2));
        let consistent = consistent_chi_exact(&spec, fq(2), 2).unwrap();
        assert_eq!(consistent[1], rat(1, 2));
    }

    #[test]
    fn oracle_sigma_hand_values() {
        // Möbius analog over F_2, n = 2: values 0, 0, 1, −1 average to 0
        let spec = ChiSpec::stock("minus-one").unwrap();
        assert_eq!(oracle_sigma_exact(&spec, fq(2), 2).unwrap(), rat(0, 1));
        // 2-divisor function: σ(2) = 3
        let spec = ChiSpec::stock("two").unwrap();
        assert_eq!(oracle_sigma_exact(&spec, fq(2), 2).unwrap(), rat(3, 1));
        // all ones
        let spec = ChiSpec::stock("one").unwrap();
        assert_eq!(oracle_sigma_exact(&spec, fq(2), 3).unwrap(), rat(1, 1));
    }

    #[test]
    fn certify_stock_specs_small() {
        for (name, spec) in ChiSpec::stock_all() {
            for q in [2u32, 3] {
                let rep = oracle_certify(&spec, fq(q), 5).unwrap();
                assert!(rep.all_pass, "{name} over F_{q}: {:?}", rep.mismatches);
            }
        }
    }

    #[test]
    fn lambda_bound_holds_for_stock_specs() {
        for (name, spec) in ChiSpec::stock_all() {
            let worst = lambda_bound_ratio(&spec, 8).unwrap();
            assert!(worst <= 1.0 + 1e-12, "{name}: ratio {worst}");
        }
    }

    #[test]
    fn infeasible_sizes_rejected() {
        let spec = ChiSpec::stock("one").unwrap();
        let err = oracle_sigma_exact(&spec, fq(5), 11);
        assert!(matches!(err, Err(Error::Infeasible { .. })));
    }

    #[test]
    fn float_oracle_matches_exact_for_rational_spec() {
        let spec = ChiSpec::stock("periodic3").unwrap();
        let exact = oracle_sigma_exact(&spec, fq(2), 5).unwrap();
        let float = oracle_sigma_float(&spec, fq(2), 5).unwrap();
        assert!((float.re - exact.to_f64().unwrap()).abs() < 1e-12);
        assert!(float.im.abs() < 1e-12);
    }

    #[test]
    fn twisted_spec_rotates_oracle_sigma() {
        // explicit twist of the all-ones spec by θ = 1/3
        let theta = 1.0 / 3.0;
        let n = 4usize;
        let values: Vec<[f64; 2]> = (1..=n)
            .map(|k| {
                let z = crate::mult_series::e_unit(-(k as f64) * theta);
                [z.re, z.im]
            })
            .collect();
        let twisted = ChiSpec::Explicit { values, kappa: Some(1.0) };
        let plain = ChiSpec::stock("one").unwrap();
        for nn in 1..=n {
            let tw = oracle_sigma_float(&twisted, fq(2), nn).unwrap();
            let pl = oracle_sigma_float(&plain, fq(2), nn).unwrap();
            let rotated = pl * crate::mult_series::e_unit(-(nn as f64) * theta);
            assert!((tw - rotated).norm() < 1e-12, "n={nn}");
        }
    }
}
