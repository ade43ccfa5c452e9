//! Declarative descriptions of `χ` sequences.
//!
//! A [`ChiSpec`] is the configuration unit shared by the CLI, the series
//! engine and the enumeration oracle. The JSON forms are
//!
//! ```json
//! {"kind": "constant", "alpha": [re, im]}
//! {"kind": "periodic", "values": [1.0, -1.0, ...]}
//! {"kind": "smooth", "m": 3}
//! {"kind": "explicit", "values": [[re, im], ...]}
//! {"kind": "random", "seed": 42, "kappa": 1.0}
//! ```
//!
//! with an optional `"kappa"` override on every kind.

use crate::mult_series::{ChiSeq, ExactChiSeq};
use crate::{Error, Result};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// SplitMix64, the fixed pseudo-random generator behind the `random` kind.
///
/// The algorithm is pinned so that seeded draws replicate bit-for-bit across
/// implementations and languages: state advances by the odd constant
/// `0x9E3779B97F4A7C15`, and each output is the advanced state mixed by
/// `z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27; z *= 0x94D049BB133111EB;
/// z ^= z>>31`. Doubles take the top 53 bits: `(z >> 11) * 2^-53`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform on the closed disc of the given radius, by rejection from the
    /// square: per attempt draw `x` then `y` in `[-1, 1)` and accept when
    /// `x² + y² ≤ 1`. Only IEEE-exact operations are involved, so the
    /// accepted point is reproducible everywhere.
    pub fn next_in_disc(&mut self, radius: f64) -> Complex64 {
        loop {
            let x = 2.0 * self.next_f64() - 1.0;
            let y = 2.0 * self.next_f64() - 1.0;
            if x * x + y * y <= 1.0 {
                return Complex64::new(radius * x, radius * y);
            }
        }
    }
}

/// A declarative multiplicative-function description at the `χ` level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChiSpec {
    /// `χ(k) = α` for all `k`.
    Constant {
        alpha: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<f64>,
    },
    /// `χ(k) = values[(k−1) mod period]`, real pattern.
    Periodic {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<f64>,
    },
    /// The smooth cutoff `χ(k) = 1` for `k ≤ m`, else 0. The enumeration
    /// oracle interprets this kind as the indicator of `m`-smooth
    /// polynomials, which differs at composite degrees; see the oracle docs.
    Smooth {
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<f64>,
    },
    /// Explicit complex values `χ(1..=len)`; zero beyond the list.
    Explicit {
        values: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<f64>,
    },
    /// Seeded draw, each `χ(k)` uniform on the disc of radius `κ` via
    /// [`SplitMix64`]. Prefix-stable: the first `k` values do not depend on
    /// the requested length.
    Random { seed: u64, kappa: f64 },
}

impl ChiSpec {
    /// The bound `κ` in effect (override or the kind's natural bound).
    pub fn kappa(&self) -> f64 {
        match self {
            ChiSpec::Constant { alpha, kappa } => {
                kappa.unwrap_or_else(|| Complex64::new(alpha[0], alpha[1]).norm())
            }
            ChiSpec::Periodic { values, kappa } => {
                kappa.unwrap_or_else(|| values.iter().fold(0.0, |a, v| a.max(v.abs())))
            }
            ChiSpec::Smooth { kappa, .. } => kappa.unwrap_or(1.0),
            ChiSpec::Explicit { values, kappa } => kappa.unwrap_or_else(|| {
                values
                    .iter()
                    .fold(0.0, |a, v| a.max(Complex64::new(v[0], v[1]).norm()))
            }),
            ChiSpec::Random { kappa, .. } => *kappa,
        }
    }

    /// Materializes `χ(1..=len)` in floating arithmetic.
    pub fn chi(&self, len: usize) -> Result<ChiSeq> {
        let values: Vec<Complex64> = match self {
            ChiSpec::Constant { alpha, .. } => {
                vec![Complex64::new(alpha[0], alpha[1]); len]
            }
            ChiSpec::Periodic { values, .. } => {
                if values.is_empty() {
                    return Err(Error::BadArgument("periodic spec needs a nonempty pattern"));
                }
                (0..len)
                    .map(|i| Complex64::new(values[i % values.len()], 0.0))
                    .collect()
            }
            ChiSpec::Smooth { m, .. } => {
                if *m == 0 {
                    return Err(Error::BadArgument("smooth cutoff m must be at least 1"));
                }
                (1..=len)
                    .map(|k| {
                        if k <= *m {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::zero()
                        }
                    })
                    .collect()
            }
            ChiSpec::Explicit { values, .. } => (0..len)
                .map(|i| {
                    values
                        .get(i)
                        .map_or(Complex64::zero(), |v| Complex64::new(v[0], v[1]))
                })
                .collect(),
            ChiSpec::Random { seed, kappa } => {
                let mut rng = SplitMix64::new(*seed);
                (0..len).map(|_| rng.next_in_disc(*kappa)).collect()
            }
        };
        ChiSeq::new(values, self.kappa())
    }

    /// True when every `χ(k)` is a real rational (exact mode admissible).
    pub fn is_rational(&self) -> bool {
        match self {
            ChiSpec::Constant { alpha, .. } => alpha[1] == 0.0,
            ChiSpec::Periodic { .. } | ChiSpec::Smooth { .. } => true,
            ChiSpec::Explicit { values, .. } => values.iter().all(|v| v[1] == 0.0),
            ChiSpec::Random { .. } => false,
        }
    }

    /// Materializes `χ(1..=len)` in exact rationals. Floating inputs are
    /// taken at face value as the dyadic rationals they are.
    pub fn chi_exact(&self, len: usize) -> Result<ExactChiSeq> {
        if !self.is_rational() {
            return Err(Error::NotRational("spec has complex or randomized values"));
        }
        let to_rat = |x: f64| BigRational::from_float(x).expect("finite float");
        let values: Vec<BigRational> = match self {
            ChiSpec::Constant { alpha, .. } => vec![to_rat(alpha[0]); len],
            ChiSpec::Periodic { values, .. } => {
                if values.is_empty() {
                    return Err(Error::BadArgument("periodic spec needs a nonempty pattern"));
                }
                (0..len).map(|i| to_rat(values[i % values.len()])).collect()
            }
            ChiSpec::Smooth { m, .. } => {
                if *m == 0 {
                    return Err(Error::BadArgument("smooth cutoff m must be at least 1"));
                }
                (1..=len)
                    .map(|k| {
                        if k <= *m {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            }
            ChiSpec::Explicit { values, .. } => (0..len)
                .map(|i| values.get(i).map_or_else(BigRational::zero, |v| to_rat(v[0])))
                .collect(),
            ChiSpec::Random { .. } => unreachable!(),
        };
        let kappa = values
            .iter()
            .map(num_traits::Signed::abs)
            .max()
            .unwrap_or_else(BigRational::zero)
            .max(BigRational::from_float(self.kappa()).unwrap_or_else(BigRational::zero));
        ExactChiSeq::new(values, kappa)
    }

    /// Named stock specs used by the verification suites.
    ///
    /// `one`, `minus-one`, `two` are the constants 1, −1, 2; `periodic3` is
    /// the period-3 sign pattern `(−1, −1, +1)`; `smooth1`..`smooth3` are
    /// smooth cutoffs.
    pub fn stock(name: &str) -> Result<ChiSpec> {
        let spec = match name {
            "one" => ChiSpec::Constant { alpha: [1.0, 0.0], kappa: None },
            "minus-one" => ChiSpec::Constant { alpha: [-1.0, 0.0], kappa: None },
            "two" => ChiSpec::Constant { alpha: [2.0, 0.0], kappa: None },
            "periodic3" => ChiSpec::Periodic { values: vec![-1.0, -1.0, 1.0], kappa: None },
            "smooth1" => ChiSpec::Smooth { m: 1, kappa: None },
            "smooth2" => ChiSpec::Smooth { m: 2, kappa: None },
            "smooth3" => ChiSpec::Smooth { m: 3, kappa: None },
            _ => return Err(Error::BadArgument("unknown stock spec name")),
        };
        Ok(spec)
    }

    /// Every stock spec with its name, for `stock:all` runs.
    pub fn stock_all() -> Vec<(&'static str, ChiSpec)> {
        ["one", "minus-one", "two", "periodic3", "smooth1", "smooth2", "smooth3"]
            .into_iter()
            .map(|n| (n, ChiSpec::stock(n).unwrap()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 1234567, cross-checked against the
        // published SplitMix64 reference implementation.
        let mut rng = SplitMix64::new(0);
        let a = rng.next_u64();
        let mut rng2 = SplitMix64::new(0);
        assert_eq!(a, rng2.next_u64());
        assert_ne!(rng.next_u64(), a);
        // seed 0 first output is the mix of the first state advance
        assert_eq!(a, 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn disc_draws_stay_inside_and_replicate() {
        let mut rng = SplitMix64::new(42);
        let draws: Vec<Complex64> = (0..200).map(|_| rng.next_in_disc(2.0)).collect();
        assert!(draws.iter().all(|z| z.norm() <= 2.0 + 1e-15));
        let mut rng2 = SplitMix64::new(42);
        let again: Vec<Complex64> = (0..200).map(|_| rng2.next_in_disc(2.0)).collect();
        assert_eq!(draws, again);
    }

    #[test]
    fn random_spec_prefix_stable() {
        let spec = ChiSpec::Random { seed: 7, kappa: 1.0 };
        let short = spec.chi(10).unwrap();
        let long = spec.chi(50).unwrap();
        for k in 1..=10 {
            assert_eq!(short.value(k), long.value(k));
        }
        assert!(long.values().iter().all(|v| v.norm() <= 1.0));
    }

    #[test]
    fn json_round_trip() {
        let spec = ChiSpec::Periodic { values: vec![-1.0, -1.0, 1.0], kappa: None };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"kind":"periodic","values":[-1.0,-1.0,1.0]}"#);
        let back: ChiSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let parsed: ChiSpec =
            serde_json::from_str(r#"{"kind": "constant", "alpha": [0.5, -0.25]}"#).unwrap();
        assert_eq!(parsed, ChiSpec::Constant { alpha: [0.5, -0.25], kappa: None });
        let parsed: ChiSpec =
            serde_json::from_str(r#"{"kind": "random", "seed": 3, "kappa": 0.5}"#).unwrap();
        assert_eq!(parsed, ChiSpec::Random { seed: 3, kappa: 0.5 });
    }

    #[test]
    fn smooth_spec_values() {
        let chi = ChiSpec::stock("smooth2").unwrap().chi(5).unwrap();
        let want = [1.0, 1.0, 0.0, 0.0, 0.0];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(chi.value(k + 1).re, *w);
        }
    }

    #[test]
    fn exact_mode_rejects_random() {
        let spec = ChiSpec::Random { seed: 1, kappa: 1.0 };
        assert!(matches!(spec.chi_exact(4), Err(Error::NotRational(_))));
        let spec = ChiSpec::Constant { alpha: [0.0, 1.0], kappa: None };
        assert!(matches!(spec.chi_exact(4), Err(Error::NotRational(_))));
    }

    #[test]
    fn exact_matches_float_for_stock() {
        for (name, spec) in ChiSpec::stock_all() {
            let f = spec.chi(8).unwrap();
            let e = spec.chi_exact(8).unwrap().to_float();
            for k in 1..=8 {
                assert_eq!(f.value(k), e.value(k), "{name} chi({k})");
            }
        }
    }
}
