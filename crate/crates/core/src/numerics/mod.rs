//! Numerical substrate: adaptive quadrature on finite and semi-infinite
//! ranges, series summation with Levin acceleration, and Chebyshev
//! interpolation.

mod chebyshev;
mod quadrature;
mod series;

use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use chebyshev::Chebyshev;
pub use quadrature::{
    integrate, integrate_semi_infinite, try_integrate, try_integrate_semi_infinite,
    QuadratureConfig, SemiInfinite,
};
pub use series::{levin_u, sum_series, sum_series_from, SeriesConfig};

/// A computed value together with its (heuristic) absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformResult {
    pub value: f64,
    pub abs_err_estimate: f64,
    pub evaluations: usize,
}

impl TransformResult {
    pub fn exact(value: f64) -> Self {
        TransformResult {
            value,
            abs_err_estimate: 0.0,
            evaluations: 0,
        }
    }
}

/// `sin(πx)`, with the argument reduced exactly so that values near the
/// zeros keep full relative accuracy.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if n % 2.0 == 0.0 {
        s
    } else {
        -s
    }
}

/// `cos(πx)` with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let c = (PI * (x - n)).cos();
    if n % 2.0 == 0.0 {
        c
    } else {
        -c
    }
}

/// `sin(π·num/den)` computed from the exact remainder `num - n·den`.
pub fn sin_pi_ratio(num: f64, den: f64) -> f64 {
    let n = (num / den).round();
    let r = (-n).mul_add(den, num) / den;
    let s = (PI * r).sin();
    if n % 2.0 == 0.0 {
        s
    } else {
        -s
    }
}

/// `sin(π·a·b)` computed from the exact remainder `a·b - n`.
pub fn sin_pi_product(a: f64, b: f64) -> f64 {
    let n = (a * b).round();
    let r = a.mul_add(b, -n);
    let s = (PI * r).sin();
    if n % 2.0 == 0.0 {
        s
    } else {
        -s
    }
}
