use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ln_gamma;
use crate::numerics::{integrate, sin_pi, sum_series, QuadratureConfig, SeriesConfig};
use crate::{Error, Result};

/// How the transition density of a γ-stable subordinator is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityMethod {
    /// Convergent power series in `x^{-γ}`; fast for large scaled arguments.
    SeriesLargeX,
    /// Zolotarev's integral over `(0, π)`; robust for small scaled arguments.
    IntegralSmallX,
    /// Lévy's closed form, only for `γ = 1/2`.
    ClosedFormHalf,
}

/// Automatic method choice and the scaled argument where it switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorDensityMethod {
    pub method: DensityMethod,
    pub crossover_x: f64,
}

impl SubordinatorDensityMethod {
    pub const DEFAULT_CROSSOVER: f64 = 1.5;

    /// Method used for `η_γ(1, x)`.
    pub fn select(gamma: f64, x: f64) -> Self {
        let method = if gamma == 0.5 {
            DensityMethod::ClosedFormHalf
        } else if x > Self::DEFAULT_CROSSOVER {
            DensityMethod::SeriesLargeX
        } else {
            DensityMethod::IntegralSmallX
        };
        SubordinatorDensityMethod {
            method,
            crossover_x: Self::DEFAULT_CROSSOVER,
        }
    }
}

/// Density `η_γ(t, x)` of the positive γ-stable subordinator at time `t`,
/// normalised so that `∫ e^{-sx} η_γ(t, x) dx = e^{-t s^γ}`.
pub fn subordinator_density(gamma: f64, t: f64, x: f64) -> Result<f64> {
    check(gamma, t, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let scale = t.powf(-1.0 / gamma);
    let xs = x * scale;
    let method = SubordinatorDensityMethod::select(gamma, xs).method;
    Ok(scale * unit_density(method, gamma, xs)?)
}

/// [`subordinator_density`] with the evaluation method forced.
pub fn subordinator_density_with(method: DensityMethod, gamma: f64, t: f64, x: f64) -> Result<f64> {
    check(gamma, t, x)?;
    if method == DensityMethod::ClosedFormHalf && gamma != 0.5 {
        return Err(Error::domain("the closed form only covers gamma = 1/2"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let scale = t.powf(-1.0 / gamma);
    Ok(scale * unit_density(method, gamma, x * scale)?)
}

/// Distribution function of `η_γ(1, ·)`.
pub fn positive_stable_cdf(gamma: f64, x: f64) -> Result<f64> {
    check(gamma, 1.0, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let c = x.powf(-gamma / (1.0 - gamma));
    let r = integrate(
        |phi| (-c * zolotarev_a(gamma, phi)).exp(),
        0.0,
        PI,
        &integral_config(),
    )?;
    Ok((r.value / PI).clamp(0.0, 1.0))
}

fn check(gamma: f64, t: f64, x: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(alloc::format!(
            "subordinator index must lie in (0, 1), got {gamma}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(alloc::format!(
            "time must be positive, got {t}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(alloc::format!(
            "argument must be non-negative and finite, got {x}"
        )));
    }
    Ok(())
}

fn integral_config() -> QuadratureConfig {
    QuadratureConfig::default()
        .with_rel_tol(1e-12)
        .with_abs_tol(1e-300)
}

fn unit_density(method: DensityMethod, gamma: f64, x: f64) -> Result<f64> {
    match method {
        DensityMethod::ClosedFormHalf => Ok(x.powf(-1.5) * (-0.25 / x).exp() / (2.0 * PI.sqrt())),
        DensityMethod::SeriesLargeX => {
            let lx = x.ln();
            let cfg = SeriesConfig {
                rel_tol: 1e-16,
                max_terms: 10_000,
                accelerate: false,
            };
            let r = sum_series(
                |k| {
                    let kf = k as f64;
                    let s = sin_pi(gamma * kf);
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    let log_mag =
                        ln_gamma(gamma * kf + 1.0) - ln_gamma(kf + 1.0) - (gamma * kf + 1.0) * lx;
                    sign * s * log_mag.exp()
                },
                &cfg,
            )?;
            Ok(r.value / PI)
        }
        DensityMethod::IntegralSmallX => {
            let c = x.powf(-gamma / (1.0 - gamma));
            let r = integrate(
                |phi| {
                    let a = zolotarev_a(gamma, phi);
                    if a.is_finite() {
                        (a.ln() - c * a).exp()
                    } else {
                        0.0
                    }
                },
                0.0,
                PI,
                &integral_config(),
            )?;
            Ok(gamma / (1.0 - gamma) * c / x * r.value / PI)
        }
    }
}

/// Zolotarev's function
/// `A(φ) = [sin(γφ)/sin φ]^{1/(1-γ)} · sin((1-γ)φ)/sin(γφ)` on `(0, π)`.
pub(crate) fn zolotarev_a(gamma: f64, phi: f64) -> f64 {
    if phi <= 0.0 {
        return gamma.powf(gamma / (1.0 - gamma)) * (1.0 - gamma);
    }
    let sg = (gamma * phi).sin();
    let s = phi.sin();
    if s <= 0.0 {
        return f64::INFINITY;
    }
    (sg / s).powf(1.0 / (1.0 - gamma)) * ((1.0 - gamma) * phi).sin() / sg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_semi_infinite, SemiInfinite};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_against_levy_closed_form() {
        let levy =
            |t: f64, x: f64| t * x.powf(-1.5) * (-t * t / (4.0 * x)).exp() / (2.0 * PI.sqrt());
        assert!((levy(1.0, 1.0) - 0.219_695_6).abs() < 1e-7);
        for &t in &[0.5, 1.0, 2.0] {
            for &x in &[0.1, 0.5, 1.0, 2.0, 10.0] {
                let exact = levy(t, x);
                for m in [DensityMethod::SeriesLargeX, DensityMethod::IntegralSmallX] {
                    let xs = x * t.powf(-2.0);
                    // The series is only trusted above the crossover.
                    if m == DensityMethod::SeriesLargeX && xs < 1.0 {
                        continue;
                    }
                    let v = subordinator_density_with(m, 0.5, t, x).unwrap();
                    assert!(rel(v, exact) < 1e-8, "{m:?} t={t} x={x}: {v} {exact}");
                }
                assert!(rel(subordinator_density(0.5, t, x).unwrap(), exact) < 1e-14);
            }
        }
    }

    #[test]
    fn methods_agree_across_crossover() {
        for &g in &[0.3, 1.0 / 3.0, 0.6, 2.0 / 3.0, 0.8] {
            for &x in &[1.5, 2.0, 3.0] {
                let s = subordinator_density_with(DensityMethod::SeriesLargeX, g, 1.0, x).unwrap();
                let i =
                    subordinator_density_with(DensityMethod::IntegralSmallX, g, 1.0, x).unwrap();
                assert!(rel(s, i) < 1e-9, "gamma={g} x={x}: {s} {i}");
            }
        }
    }

    #[test]
    fn laplace_transform_identity() {
        for &g in &[1.0 / 3.0, 2.0 / 3.0] {
            for &s in &[0.0, 0.5, 1.0, 4.0] {
                let ends = SemiInfinite::default().origin(0.0).tail(-1.0 - g);
                let r = integrate_semi_infinite(
                    |x| (-s * x).exp() * subordinator_density(g, 1.0, x).unwrap(),
                    &ends,
                    &QuadratureConfig::default().with_rel_tol(1e-10),
                )
                .unwrap();
                let exact = (-s.powf(g)).exp();
                assert!(
                    (r.value - exact).abs() < 1e-8,
                    "gamma={g} s={s}: {} {exact}",
                    r.value
                );
            }
        }
    }

    #[test]
    fn time_scaling() {
        let g = 0.4;
        let (t, x) = (2.5, 3.0);
        let direct = subordinator_density(g, t, x).unwrap();
        let scaled = t.powf(-1.0 / g) * subordinator_density(g, 1.0, x * t.powf(-1.0 / g)).unwrap();
        assert!(rel(direct, scaled) < 1e-14);
    }

    #[test]
    fn cdf_against_half_closed_form() {
        // For γ = 1/2, P(X ≤ x) = erfc(1/(2√x)).
        for &x in &[0.05f64, 0.3, 1.0, 5.0] {
            let exact = libm::erfc(0.5 / x.sqrt());
            assert!((positive_stable_cdf(0.5, x).unwrap() - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(subordinator_density(1.0, 1.0, 1.0).is_err());
        assert!(subordinator_density(0.5, 0.0, 1.0).is_err());
        assert!(subordinator_density(0.5, 1.0, -1.0).is_err());
        assert!(subordinator_density_with(DensityMethod::ClosedFormHalf, 0.3, 1.0, 1.0).is_err());
        assert_eq!(subordinator_density(0.3, 1.0, 0.0).unwrap(), 0.0);
    }
}
