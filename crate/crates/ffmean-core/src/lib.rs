//! Mean values of multiplicative functions over the polynomial ring `F_q[x]`.
//!
//! Everything revolves around two sequences attached to a multiplicative
//! function `f` on monic polynomials: the prime-power averages `χ(k)` and the
//! degree-`n` mean values `σ(n)`, linked by the convolution recurrence
//! `n σ(n) = Σ_{k=1}^{n} χ(k) σ(n−k)` or, equivalently, by
//! `Σ σ(n) z^n = exp(Σ χ(k) z^k / k)`.
//!
//! The crate provides:
//!
//! * [`fq_poly`] — exact arithmetic, enumeration and factorization of monic
//!   polynomials over prime fields (the ground truth substrate);
//! * [`mult_series`] — the `χ`/`σ` series engine in floating and exact
//!   rational arithmetic, truncation, twisting and generating-function
//!   evaluation;
//! * [`chi_spec`] — declarative descriptions of `χ` sequences shared by the
//!   CLI, the series engine and the oracle;
//! * [`halasz`] — certified evaluation of the Halász-type mean-value bound
//!   and its corollary (certified circle maxima, singular-endpoint
//!   quadrature);
//! * [`lipschitz`] — the Lipschitz machinery: maximizing twists, the
//!   resonance constants `c_m`, rational approximation, and the explicit
//!   inequality checks;
//! * [`examples`] — worked constructions: binomial mean values, smooth
//!   polynomials against the Dickman function, periodic sign patterns,
//!   point-mass asymptotics and root recovery;
//! * [`oracle`] — brute-force enumeration oracle certifying the series
//!   engine against direct averages over `F_q[x]`.

pub mod chi_spec;
pub mod examples;
pub mod fq_poly;
pub mod halasz;
pub mod lipschitz;
pub mod mult_series;
pub mod oracle;

mod certify;

pub use chi_spec::{ChiSpec, SplitMix64};
pub use fq_poly::{FieldSize, Factorization, MonicPoly};
pub use halasz::{CertifiedMax, HalaszReport};
pub use lipschitz::{CmValue, LipschitzReport, RationalApprox};
pub use mult_series::{ChiSeq, ExactChiSeq, ExactSigmaSeq, NumberMode, ScaledGenFn, SigmaSeq};

use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A field size that is not a prime number.
    NotPrime(u64),
    /// An operation that requires degree at least one was given a constant.
    DegreeZero,
    /// A coefficient sequence exceeded its declared bound `κ`.
    KappaExceeded { index: usize, modulus: f64, kappa: f64 },
    /// A sequence was too short for the requested length.
    TooShort { needed: usize, len: usize },
    /// Exact arithmetic was requested for a value that is not rational.
    NotRational(&'static str),
    /// A circle radius outside `(0, 1]`.
    BadRadius(f64),
    /// A logarithmic saving `M` below the certification allowance.
    NegativeM(f64),
    /// An operation restricted to the class bound `κ ≤ 1` got a larger `κ`.
    KappaAboveOne(f64),
    /// The periodic sign pattern requires an odd period.
    EvenPeriod(usize),
    /// A Dickman-function argument beyond the tabulated range.
    RhoOutOfRange { u: f64, u_max: f64 },
    /// Point masses must sit at pairwise distinct angles.
    CoincidentPoints,
    /// Root recovery needs a mean-value sequence with a visibly zero tail.
    NonTerminatingSigma,
    /// Root recovery produced a root outside the disc `|α| ≤ q`.
    RootOutsideDisc { modulus: f64, q: f64 },
    /// The polynomial root iteration failed its residual check.
    RootsNotConverged { residual: f64, bound: f64 },
    /// Brute-force enumeration would touch too many polynomials.
    Infeasible { q: u64, degree: usize, count: f64 },
    /// No rational approximation satisfied the Dirichlet bound; this
    /// indicates a bug, not a mathematical obstruction.
    NoRationalApprox { alpha: f64, n: usize },
    /// Generic precondition violation with a static description.
    BadArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(q) => write!(f, "field size {q} is not prime"),
            Error::DegreeZero => write!(f, "operation requires a polynomial of degree >= 1"),
            Error::KappaExceeded { index, modulus, kappa } => write!(
                f,
                "|chi({index})| = {modulus} exceeds the declared bound kappa = {kappa}"
            ),
            Error::TooShort { needed, len } => {
                write!(f, "sequence of length {len} is too short; need {needed}")
            }
            Error::NotRational(what) => write!(f, "exact mode requires rational values: {what}"),
            Error::BadRadius(r) => write!(f, "radius {r} outside (0, 1]"),
            Error::NegativeM(m) => write!(f, "logarithmic saving M = {m} below -1e-6"),
            Error::KappaAboveOne(k) => write!(f, "operation requires kappa <= 1, got {k}"),
            Error::EvenPeriod(m) => write!(f, "sign pattern needs odd period, got {m}"),
            Error::RhoOutOfRange { u, u_max } => {
                write!(f, "rho({u}) beyond tabulated range [0, {u_max}]")
            }
            Error::CoincidentPoints => write!(f, "point masses must be pairwise distinct"),
            Error::NonTerminatingSigma => {
                write!(f, "sigma sequence does not terminate (last entry nonzero)")
            }
            Error::RootOutsideDisc { modulus, q } => {
                write!(f, "recovered root of modulus {modulus} outside |alpha| <= q = {q}")
            }
            Error::RootsNotConverged { residual, bound } => {
                write!(f, "root residual {residual} exceeds bound {bound}")
            }
            Error::Infeasible { q, degree, count } => write!(
                f,
                "enumerating M_{degree} over F_{q} needs ~{count:.3e} polynomials (limit 1e7)"
            ),
            Error::NoRationalApprox { alpha, n } => write!(
                f,
                "no rational approximation for alpha = {alpha} at n = {n}; this is a bug"
            ),
            Error::BadArgument(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
