//! Certified global maxima of periodic functions on `[0, 1)`.
//!
//! Best-first branch and bound: sample an initial uniform grid, bound each
//! subinterval from above with a caller-supplied rule (derived from a
//! Lipschitz constant on the function or its logarithm), discard intervals
//! whose bound cannot beat the best sample, and bisect the most promising
//! interval until the certified gap meets the tolerance.
//!
//! All reductions run in a fixed order, so results are identical across
//! runs and thread counts.

use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub(crate) struct MaxOutcome {
    /// Certified upper bound for the score over the whole circle.
    pub upper: f64,
    /// Largest sampled score (a lower bound, attained at `witness_x`).
    pub witness: f64,
    pub witness_x: f64,
    /// Number of function evaluations spent.
    pub evals: usize,
}

struct Interval<P> {
    a: f64,
    b: f64,
    pa: P,
    pb: P,
    upper: f64,
}

impl<P> PartialEq for Interval<P> {
    fn eq(&self, other: &Self) -> bool {
        self.upper == other.upper && self.a == other.a
    }
}

impl<P> Eq for Interval<P> {}

impl<P> PartialOrd for Interval<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<P> Ord for Interval<P> {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on the upper bound; ties broken by position for determinism
        self.upper
            .total_cmp(&other.upper)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

const BATCH: usize = 32;
const MAX_EVALS: usize = 40_000_000;

/// Maximizes the score of a 1-periodic sampled quantity.
///
/// `f` evaluates a point to a payload `P`, `score` extracts the maximized
/// scalar, `upper_on(a, b, pa, pb)` must bound the score on `[a, b]` from
/// above given the endpoint payloads, and `gap_tol(witness)` maps the
/// current best score to the acceptable certification gap.
pub(crate) fn max_periodic<P, F, S, U, T>(
    f: F,
    score: S,
    upper_on: U,
    init: usize,
    gap_tol: T,
) -> MaxOutcome
where
    P: Copy + Send + Sync,
    F: Fn(f64) -> P + Sync,
    S: Fn(&P) -> f64,
    U: Fn(f64, f64, &P, &P) -> f64,
    T: Fn(f64) -> f64,
{
    let init = init.max(4);
    let grid: Vec<P> = (0..init)
        .into_par_iter()
        .map(|i| f(i as f64 / init as f64))
        .collect();
    let mut evals = init;
    let (mut witness, mut witness_x) = (f64::NEG_INFINITY, 0.0);
    for (i, p) in grid.iter().enumerate() {
        let v = score(p);
        if v > witness {
            witness = v;
            witness_x = i as f64 / init as f64;
        }
    }

    let mut heap: BinaryHeap<Interval<P>> = BinaryHeap::with_capacity(2 * init);
    // bound for regions whose subdivision hit floating-point resolution
    let mut stuck_upper = f64::NEG_INFINITY;
    for i in 0..init {
        let a = i as f64 / init as f64;
        let b = (i + 1) as f64 / init as f64;
        let (pa, pb) = (grid[i], grid[(i + 1) % init]);
        let upper = upper_on(a, b, &pa, &pb);
        if upper > witness {
            heap.push(Interval { a, b, pa, pb, upper });
        }
    }

    loop {
        let top_upper = heap.peek().map_or(f64::NEG_INFINITY, |iv| iv.upper);
        if top_upper.max(stuck_upper) - witness <= gap_tol(witness) || evals >= MAX_EVALS {
            break;
        }
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH {
            match heap.peek() {
                Some(iv) if iv.upper > witness => batch.push(heap.pop().unwrap()),
                _ => break,
            }
        }
        if batch.is_empty() {
            break;
        }
        let mids: Vec<(f64, P)> = batch
            .par_iter()
            .map(|iv| {
                let m = 0.5 * (iv.a + iv.b);
                (m, f(m))
            })
            .collect();
        evals += mids.len();
        for (m, p) in &mids {
            let v = score(p);
            if v > witness {
                witness = v;
                witness_x = *m;
            }
        }
        for (iv, (m, pm)) in batch.into_iter().zip(&mids) {
            if *m <= iv.a || *m >= iv.b {
                stuck_upper = stuck_upper.max(iv.upper);
                continue;
            }
            for (a, b, pa, pb) in [(iv.a, *m, iv.pa, *pm), (*m, iv.b, *pm, iv.pb)] {
                let upper = upper_on(a, b, &pa, &pb);
                if upper > witness {
                    heap.push(Interval { a, b, pa, pb, upper });
                }
            }
        }
    }

    let top = heap.peek().map_or(f64::NEG_INFINITY, |iv| iv.upper);
    let upper = witness.max(top).max(stuck_upper);
    MaxOutcome { upper, witness, witness_x, evals }
}

/// Scalar convenience wrapper: payload is the score itself.
pub(crate) fn max_periodic_scalar<F, U, T>(f: F, upper_on: U, init: usize, gap_tol: T) -> MaxOutcome
where
    F: Fn(f64) -> f64 + Sync,
    U: Fn(f64, f64, f64, f64) -> f64,
    T: Fn(f64) -> f64,
{
    max_periodic(
        f,
        |p: &f64| *p,
        |a, b, pa, pb| upper_on(a, b, *pa, *pb),
        init,
        gap_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn finds_cosine_maximum() {
        // f = cos(2πx), Lipschitz constant 2π
        let out = max_periodic_scalar(
            |x| (TAU * x).cos(),
            |a, b, fa, fb| fa.max(fb) + TAU * (b - a) / 2.0,
            16,
            |_| 1e-12,
        );
        assert!(out.upper >= 1.0);
        assert!(out.upper - out.witness <= 1e-12);
        assert!((out.witness - 1.0).abs() < 1e-12);
        let d = (out.witness_x - 0.0).abs().min((out.witness_x - 1.0).abs());
        assert!(d < 1e-5, "witness at {}", out.witness_x);
    }

    #[test]
    fn constant_function_certifies_immediately() {
        let out = max_periodic_scalar(|_| 3.5, |_, _, fa, fb| fa.max(fb), 8, |_| 1e-12);
        assert_eq!(out.upper, 3.5);
        assert_eq!(out.witness, 3.5);
        assert_eq!(out.evals, 8);
    }

    #[test]
    fn two_peak_function() {
        // peaks at 0.23 (value 2) and 0.77 (value 2.1), slopes of 20
        let f = |x: f64| {
            let d1 = (x - 0.23).abs().min((x - 1.23).abs());
            let d2 = (x - 0.77).abs().min((x + 0.23).abs());
            (2.0 - 20.0 * d1).max(2.1 - 20.0 * d2).max(0.0)
        };
        let out =
            max_periodic_scalar(f, |a, b, fa, fb| fa.max(fb) + 10.0 * (b - a), 32, |_| 1e-10);
        assert!((out.witness - 2.1).abs() < 1e-9);
        assert!((out.witness_x - 0.77).abs() < 1e-6);
    }

    #[test]
    fn deterministic_across_runs() {
        let f = |x: f64| (TAU * x).sin() + 0.3 * (3.0 * TAU * x).cos();
        let run = || {
            let out = max_periodic_scalar(
                f,
                |a, b, fa, fb| fa.max(fb) + 2.5 * TAU * (b - a),
                64,
                |_| 1e-11,
            );
            (out.upper.to_bits(), out.witness.to_bits(), out.witness_x.to_bits(), out.evals)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn payload_variant_matches_scalar() {
        let f = |x: f64| (TAU * x).sin();
        let a = max_periodic_scalar(f, |a, b, fa, fb| fa.max(fb) + TAU * (b - a), 32, |_| 1e-10);
        let b = max_periodic(
            |x| ((TAU * x).sin(), 0.0f64),
            |p: &(f64, f64)| p.0,
            |a, b, pa, pb| pa.0.max(pb.0) + TAU * (b - a),
            32,
            |_| 1e-10,
        );
        assert_eq!(a.upper.to_bits(), b.upper.to_bits());
        assert_eq!(a.witness_x.to_bits(), b.witness_x.to_bits());
    }
}
