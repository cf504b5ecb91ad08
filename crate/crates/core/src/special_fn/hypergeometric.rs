use super::{is_nonpositive_integer, rgamma};
use crate::numerics::{
    integrate_semi_infinite, sin_pi, sum_series_from, QuadratureConfig, SemiInfinite, SeriesConfig,
};
use crate::{Error, Result};

/// Switch from the ₁F₁ combination to the integral representation of `U`.
const U_REFLECTION_LIMIT: f64 = 2.0;

fn entire_series() -> SeriesConfig {
    SeriesConfig {
        rel_tol: 1e-17,
        max_terms: 100_000,
        accelerate: false,
    }
}

/// Rising factorial `(a)_k = a(a+1)…(a+k-1)`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |p, j| p * (a + j as f64))
}

/// Kummer's confluent hypergeometric function `₁F₁(a; b; z)`.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(Error::domain(alloc::format!(
            "1F1 lower parameter must not be a non-positive integer, got {b}"
        )));
    }
    if !z.is_finite() {
        return Err(Error::domain("1F1 argument must be finite"));
    }
    if z < 0.0 && !is_nonpositive_integer(a) {
        // Kummer's transformation avoids the cancellation of the alternating series.
        return Ok(z.exp() * hyp1f1_series(b - a, b, -z)?);
    }
    hyp1f1_series(a, b, z)
}

fn hyp1f1_series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let tail = sum_series_from(
        0,
        |k| {
            if k > 0 {
                let j = (k - 1) as f64;
                term *= (a + j) * z / ((b + j) * (j + 1.0));
            }
            term
        },
        &entire_series(),
    )?;
    Ok(tail.value)
}

/// `₁F₂(a; b, c; z)`.
pub fn hyp1f2(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(b) || is_nonpositive_integer(c) {
        return Err(Error::domain(
            "1F2 lower parameters must not be non-positive integers",
        ));
    }
    if !z.is_finite() {
        return Err(Error::domain("1F2 argument must be finite"));
    }
    let mut term = 1.0;
    let r = sum_series_from(
        0,
        |k| {
            if k > 0 {
                let j = (k - 1) as f64;
                term *= (a + j) * z / ((b + j) * (c + j) * (j + 1.0));
            }
            term
        },
        &entire_series(),
    )?;
    Ok(r.value)
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)` for `z > 0`
/// and non-integer `b`.
///
/// Small arguments use the ₁F₁ combination, larger ones the integral
/// representation (when `a > 0`).
pub fn hyp_u(a: f64, b: f64, z: f64) -> Result<f64> {
    check_u_args(b, z)?;
    if z <= U_REFLECTION_LIMIT || a <= 0.0 {
        hyp_u_reflection(a, b, z)
    } else {
        hyp_u_integral(a, b, z)
    }
}

fn check_u_args(b: f64, z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(alloc::format!(
            "U(a, b, z) needs finite z > 0, got {z}"
        )));
    }
    if (b - b.round()).abs() < 1e-8 {
        return Err(Error::domain(alloc::format!(
            "U(a, b, z) is only implemented for non-integer b, got {b}"
        )));
    }
    Ok(())
}

/// `U(a,b,z) = π/sin(πb)·[₁F₁(a;b;z)/(Γ(1+a-b)Γ(b)) - z^{1-b}₁F₁(1+a-b;2-b;z)/(Γ(a)Γ(2-b))]`.
pub fn hyp_u_reflection(a: f64, b: f64, z: f64) -> Result<f64> {
    check_u_args(b, z)?;
    let first = hyp1f1(a, b, z)? * rgamma(1.0 + a - b) * rgamma(b);
    let second = z.powf(1.0 - b) * hyp1f1(1.0 + a - b, 2.0 - b, z)? * rgamma(a) * rgamma(2.0 - b);
    Ok(core::f64::consts::PI / sin_pi(b) * (first - second))
}

/// `U(a,b,z) = Γ(a)^{-1} ∫_0^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`, `a > 0`.
pub fn hyp_u_integral(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("U(a, b, z) needs finite z > 0"));
    }
    if !(a > 0.0) {
        return Err(Error::domain(
            "the integral representation of U needs a > 0",
        ));
    }
    let ends = SemiInfinite::default()
        .origin(a - 1.0)
        .tail(-2.0)
        .split_at(1.0 / z);
    let cfg = QuadratureConfig::default()
        .with_rel_tol(1e-13)
        .with_abs_tol(1e-300);
    let r = integrate_semi_infinite(
        |t| (-z * t).exp() * t.powf(a - 1.0) * (1.0 + t).powf(b - a - 1.0),
        &ends,
        &cfg,
    )?;
    Ok(r.value * rgamma(a))
}
