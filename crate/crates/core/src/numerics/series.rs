//! Summation of slowly converging series.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::TransformResult;
use crate::{Error, Result};

/// Stopping rule and acceleration policy for [`sum_series`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Try Levin's u-transform on the partial sums.
    pub accelerate: bool,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            rel_tol: 1e-14,
            max_terms: 1_000_000,
            accelerate: true,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("series rel_tol must be positive"));
        }
        if self.max_terms < 10 {
            return Err(Error::domain("series max_terms must be at least 10"));
        }
        Ok(())
    }
}

/// Highest Levin order attempted; beyond this the transform is dominated
/// by rounding.
const LEVIN_MAX_ORDER: usize = 40;
const PLAIN_STREAK: usize = 3;

/// Levin u-transform of the partial sums `sums[i] = Σ_{j≤i} terms[j]`
/// using all supplied terms (order `terms.len() - 1`).
///
/// Returns `None` when a term vanishes, since the remainder estimates are
/// then undefined.
pub fn levin_u(terms: &[f64], sums: &[f64]) -> Option<f64> {
    let n = terms.len();
    if n < 2 || sums.len() != n {
        return None;
    }
    let k = n - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut binom = 1.0;
    let last = n as f64;
    for j in 0..n {
        let idx = (j + 1) as f64;
        let omega = idx * terms[j];
        if omega == 0.0 || !omega.is_finite() {
            return None;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * binom * (idx / last).powi(k as i32 - 1) / omega;
        num += weight * sums[j];
        den += weight;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    let t = num / den;
    t.is_finite().then_some(t)
}

/// Sums `Σ_{k≥1} term(k)`.
pub fn sum_series<F>(term: F, cfg: &SeriesConfig) -> Result<TransformResult>
where
    F: FnMut(usize) -> f64,
{
    sum_series_from(1, term, cfg)
}

/// Sums `Σ_{k≥start} term(k)`.
///
/// Plain summation stops once `|term| ≤ rel_tol·|partial sum|` holds for
/// three consecutive terms. With acceleration enabled, the Levin
/// u-transform of the first few dozen partial sums is accepted as soon as
/// the last two orders agree to `rel_tol` and the one before to `10·rel_tol`.
///
/// The plain rule cannot see the tail of a slowly converging series, so
/// such series need acceleration to be summed accurately.
pub fn sum_series_from<F>(start: usize, mut term: F, cfg: &SeriesConfig) -> Result<TransformResult>
where
    F: FnMut(usize) -> f64,
{
    cfg.validate()?;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut streak = 0;
    let mut terms: Vec<f64> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    let mut levin_prev: [Option<f64>; 2] = [None, None];
    let mut last_term = 0.0;
    for count in 1..=cfg.max_terms {
        let k = start + count - 1;
        let a = term(k);
        if !a.is_finite() {
            return Err(Error::domain(alloc::format!(
                "series term {k} is not finite"
            )));
        }
        // Kahan–Babuška summation.
        let t = sum + a;
        if sum.abs() >= a.abs() {
            comp += (sum - t) + a;
        } else {
            comp += (a - t) + sum;
        }
        sum = t;
        last_term = a;
        let total = sum + comp;
        if a == 0.0 || a.abs() <= cfg.rel_tol * total.abs() {
            streak += 1;
            if streak >= PLAIN_STREAK {
                return Ok(TransformResult {
                    value: total,
                    abs_err_estimate: a.abs(),
                    evaluations: count,
                });
            }
        } else {
            streak = 0;
        }
        if cfg.accelerate && count <= LEVIN_MAX_ORDER + 1 {
            terms.push(a);
            sums.push(total);
            if count >= 4 {
                let estimate = levin_u(&terms, &sums);
                if let (Some(t0), Some(t1), Some(t2)) = (estimate, levin_prev[1], levin_prev[0]) {
                    let tol = cfg.rel_tol * t0.abs();
                    if (t0 - t1).abs() <= tol && (t1 - t2).abs() <= 10.0 * tol {
                        return Ok(TransformResult {
                            value: t0,
                            abs_err_estimate: (t0 - t1).abs().max((t1 - t2).abs()),
                            evaluations: count,
                        });
                    }
                }
                levin_prev = [levin_prev[1], estimate];
            }
        }
    }
    Err(Error::NonConvergence {
        what: "series summation",
        best: sum + comp,
        abs_err: last_term.abs(),
        evaluations: cfg.max_terms,
    })
}
