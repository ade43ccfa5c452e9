//! Exact arithmetic for monic polynomials over prime fields `F_q`.
//!
//! This module is the ground-truth substrate for the enumeration oracle:
//! lexicographic enumeration of the `q^n` monic polynomials of degree `n`,
//! irreducibility testing and complete factorization by trial division
//! against cached lower-degree irreducibles, the von Mangoldt analogue
//! `Λ(F)`, and the exact irreducible-counting formula
//! `|P_n| = (1/n) Σ_{d|n} μ(d) q^{n/d}`.
//!
//! Everything here is exact residue arithmetic; no floating point. The
//! intended scale is desk-sized (`q^n` up to ~10^7), so trial division is
//! deliberately preferred over asymptotically faster factorization.

use crate::{Error, Result};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// The size `q` of a prime field, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSize(u32);

impl FieldSize {
    /// Accepts prime `q >= 2` only.
    pub fn new(q: u32) -> Result<Self> {
        if is_prime_u64(q as u64) {
            Ok(FieldSize(q))
        } else {
            Err(Error::NotPrime(q as u64))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A monic polynomial over `F_q`, stored as residues lowest degree first.
///
/// The invariants `coeffs.last() == 1` and `coeffs[i] < q` hold for every
/// constructed value; the constant polynomial `1` is represented by `[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    q: FieldSize,
    coeffs: Vec<u32>,
}

impl MonicPoly {
    pub fn new(q: FieldSize, coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.is_empty() || *coeffs.last().unwrap() != 1 {
            return Err(Error::BadArgument("monic polynomial needs leading coefficient 1"));
        }
        if coeffs.iter().any(|&c| c >= q.get()) {
            return Err(Error::BadArgument("coefficient outside [0, q)"));
        }
        Ok(MonicPoly { q, coeffs })
    }

    /// The constant polynomial `1`, the unique element of `M_0`.
    pub fn one(q: FieldSize) -> Self {
        MonicPoly { q, coeffs: vec![1] }
    }

    /// The `index`-th monic polynomial of degree `n` in lexicographic order
    /// of coefficient vectors (constant coefficient most significant).
    ///
    /// `index` must be below `q^n`. Index 0 is `x^n`, index `q^n - 1` is
    /// `x^n + x^{n-1} + ... + 1` scaled to coefficients `q-1`.
    pub fn from_index(q: FieldSize, n: usize, index: u64) -> Self {
        let qq = q.get() as u64;
        let mut coeffs = vec![0u32; n + 1];
        coeffs[n] = 1;
        let mut rem = index;
        // lexicographic order: c_0 is the most significant digit
        for i in 0..n {
            let place = qq.pow((n - 1 - i) as u32);
            coeffs[i] = (rem / place) as u32;
            rem %= place;
        }
        MonicPoly { q, coeffs }
    }

    pub fn q(&self) -> FieldSize {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients lowest degree first; the last entry is 1.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        let q = self.q.get() as u64;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % q;
            }
        }
        MonicPoly {
            q: self.q,
            coeffs: out.into_iter().map(|c| c as u32).collect(),
        }
    }

    /// Quotient of `self / divisor` when the division is exact, else `None`.
    /// `divisor` must be monic, which makes the division algorithm exact
    /// over `F_q` without inversions of the leading coefficient.
    pub fn div_exact(&self, divisor: &MonicPoly) -> Option<MonicPoly> {
        let (quot, rem) = self.div_rem(divisor);
        if rem.iter().all(|&c| c == 0) {
            Some(MonicPoly { q: self.q, coeffs: quot })
        } else {
            None
        }
    }

    fn div_rem(&self, divisor: &MonicPoly) -> (Vec<u32>, Vec<u32>) {
        let q = self.q.get() as i64;
        let d = divisor.degree();
        if self.degree() < d {
            return (vec![1], self.coeffs.clone());
        }
        let mut rem: Vec<i64> = self.coeffs.iter().map(|&c| c as i64).collect();
        let n = self.degree();
        let mut quot = vec![0u32; n - d + 1];
        for k in (0..=n - d).rev() {
            let c = rem[k + d] % q;
            quot[k] = c as u32;
            if c != 0 {
                for (i, &b) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = (rem[k + i] - c * b as i64).rem_euclid(q);
                }
            }
        }
        rem.truncate(d);
        (quot, rem.into_iter().map(|c| c as u32).collect())
    }
}

/// Wire format: the coefficient list lowest degree first, e.g.
/// `[1,1,0,1]` for `x³+x+1` over `F_2`.
impl Serialize for MonicPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl PartialOrd for MonicPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonicPoly {
    /// Degree first, then lexicographic on coefficient vectors with the
    /// constant coefficient most significant — the enumeration order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs[..self.degree()].cmp(&other.coeffs[..other.degree()]))
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// A complete factorization into monic irreducibles with multiplicities,
/// sorted in enumeration order for determinism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(MonicPoly, u32)] {
        &self.factors
    }

    /// Multiplies the factorization back out.
    pub fn product(&self, q: FieldSize) -> MonicPoly {
        let mut acc = MonicPoly::one(q);
        for (p, k) in &self.factors {
            for _ in 0..*k {
                acc = acc.mul(p);
            }
        }
        acc
    }

    /// `Some((P, k))` when the factorization is a single prime power.
    pub fn as_prime_power(&self) -> Option<(&MonicPoly, u32)> {
        if self.factors.len() == 1 {
            let (p, k) = &self.factors[0];
            Some((p, *k))
        } else {
            None
        }
    }
}

/// Iterator over all monic polynomials of degree `n` in enumeration order.
pub fn enumerate_monic(q: FieldSize, n: usize) -> impl Iterator<Item = MonicPoly> {
    let total = (q.get() as u64).pow(n as u32);
    (0..total).map(move |i| MonicPoly::from_index(q, n, i))
}

/// Trial-division factorizer with a cache of irreducibles.
///
/// The cache holds every irreducible of degree up to `max(1, d/2)` where `d`
/// is the largest degree the factorizer was built for, which is exactly what
/// trial division needs: a polynomial with no irreducible factor of degree
/// at most half its own is itself irreducible.
pub struct Factorizer {
    q: FieldSize,
    by_degree: Vec<Vec<MonicPoly>>,
}

impl Factorizer {
    /// Prepares a factorizer for polynomials of degree up to `max_degree`.
    pub fn new(q: FieldSize, max_degree: usize) -> Self {
        let cache_to = (max_degree / 2).max(1);
        let mut by_degree: Vec<Vec<MonicPoly>> = vec![Vec::new()];
        for d in 1..=cache_to {
            let mut irr = Vec::new();
            'cand: for f in enumerate_monic(q, d) {
                for lower in by_degree.iter().take(d / 2 + 1).skip(1) {
                    for p in lower {
                        if f.div_exact(p).is_some() {
                            continue 'cand;
                        }
                    }
                }
                irr.push(f);
            }
            by_degree.push(irr);
        }
        Factorizer { q, by_degree }
    }

    pub fn q(&self) -> FieldSize {
        self.q
    }

    /// All cached irreducibles of degree `d` (requires `d` within the cache).
    pub fn irreducibles(&self, d: usize) -> &[MonicPoly] {
        &self.by_degree[d]
    }

    /// True iff `f` has no monic factor of degree in `[1, deg f - 1]`.
    pub fn is_irreducible(&self, f: &MonicPoly) -> Result<bool> {
        if f.degree() == 0 {
            return Err(Error::DegreeZero);
        }
        let half = f.degree() / 2;
        assert!(
            half < self.by_degree.len(),
            "factorizer built for smaller degrees than {}",
            f.degree()
        );
        for d in 1..=half {
            for p in &self.by_degree[d] {
                if f.div_exact(p).is_some() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Complete factorization; deterministic, factors in enumeration order.
    pub fn factor(&self, f: &MonicPoly) -> Factorization {
        let mut factors: Vec<(MonicPoly, u32)> = Vec::new();
        let mut rest = f.clone();
        let half = f.degree() / 2;
        for d in 1..=half {
            for p in &self.by_degree[d] {
                if p.degree() > rest.degree() {
                    break;
                }
                let mut mult = 0u32;
                while let Some(quot) = rest.div_exact(p) {
                    rest = quot;
                    mult += 1;
                }
                if mult > 0 {
                    factors.push((p.clone(), mult));
                }
            }
        }
        if rest.degree() > 0 {
            // no factor up to half the original degree divides it
            factors.push((rest, 1));
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        Factorization { factors }
    }

    /// Von Mangoldt analogue: `deg P` if `f = P^k`, else 0.
    pub fn big_lambda(&self, f: &MonicPoly) -> u32 {
        if f.degree() == 0 {
            return 0;
        }
        match self.factor(f).as_prime_power() {
            Some((p, _)) => p.degree() as u32,
            None => 0,
        }
    }
}

/// One-shot irreducibility test; builds a throwaway cache.
pub fn is_irreducible(f: &MonicPoly) -> Result<bool> {
    Factorizer::new(f.q(), f.degree().max(1)).is_irreducible(f)
}

/// One-shot complete factorization; builds a throwaway cache.
pub fn factor(f: &MonicPoly) -> Factorization {
    Factorizer::new(f.q(), f.degree().max(1)).factor(f)
}

/// One-shot `Λ(F)`.
pub fn big_lambda(f: &MonicPoly) -> u32 {
    Factorizer::new(f.q(), f.degree().max(1)).big_lambda(f)
}

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// The number of monic irreducibles of degree `n` over `F_q`:
/// `(1/n) Σ_{d|n} μ(d) q^{n/d}`, computed in exact integer arithmetic.
pub fn count_irreducibles_formula(q: FieldSize, n: u32) -> u128 {
    assert!(n >= 1, "degree must be at least 1");
    let qq = q.get() as i128;
    let mut sum = 0i128;
    for d in 1..=n {
        if n % d == 0 {
            sum += mobius(d as u64) as i128 * qq.pow(n / d);
        }
    }
    debug_assert!(sum > 0 && sum % n as i128 == 0, "formula must yield a positive integer");
    (sum / n as i128) as u128
}
