//! Law of the first exit time `τ = inf{t : X_t < 0}` of a strictly stable
//! process started at `y > 0`, and the density of the factor `M_{α,ρ}` in
//! the product representation of `τ`.
//!
//! For a law that is not spectrally positive,
//!
//! ```text
//! E^1 e^{-tτ} = (sin((1-ρ)απ)/π) ∫_0^∞ e^{-t^{1/α}x} x^{α-1} κ(1,x)
//!                                  / (x^{2α} + 2x^α cos((1-ρ)απ) + 1) dx,
//! ```
//!
//! and `E^y e^{-tτ} = E^1 e^{-t y^α τ}`. Spectrally positive laws with
//! `α > 1` creep downwards and their exit times form a `1/α`-stable
//! subordinator in `y`, so `E^y e^{-tτ} = e^{-y t^{1/α}}`.

mod doney;

use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::kappa::KappaEvaluator;
use crate::numerics::{try_integrate_semi_infinite, QuadratureConfig, SemiInfinite};
use crate::special_fn::subordinator_density;
use crate::stable_law::{Classification, StableLaw, CLASS_TOL};
use crate::{Error, Result};

pub use doney::{
    density_tau_sym23, laplace_tau_doney, stieltjes_tau_doney, sym23_bracket, sym23_bracket_series,
};

/// Which representation [`ExitLaw::density_tau`] used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityRegime {
    /// `α > 1`: `τ = M_{α,ρ} × N(1/α)`, integrated against `η_{1/α}`.
    SubordinatorMixture,
    /// `α > 1`, only upward jumps: `τ` is `N(1/α)` at time `y`.
    SpectrallyPositive,
    /// `α = 1`, `ρ = 1/2`: `h(x) = κ(1, x)/(π(x² + 1))`.
    Cauchy,
    /// `α = 2/3`, `ρ = 1/2`: Laplace-type integral of a hypergeometric bracket.
    SymmetricTwoThirds,
}

impl DensityRegime {
    pub fn name(&self) -> &'static str {
        match self {
            DensityRegime::SubordinatorMixture => "subordinator-mixture",
            DensityRegime::SpectrallyPositive => "spectrally-positive",
            DensityRegime::Cauchy => "cauchy",
            DensityRegime::SymmetricTwoThirds => "symmetric-two-thirds",
        }
    }
}

/// The exit problem for one law and starting point.
#[derive(Debug, Clone)]
pub struct ExitLaw {
    law: StableLaw,
    start: f64,
    kev: KappaEvaluator,
    qcfg: QuadratureConfig,
}

impl ExitLaw {
    /// Process started at `y = 1`.
    pub fn new(law: StableLaw) -> Result<Self> {
        Self::with_evaluator(KappaEvaluator::new(law)?, 1.0)
    }

    pub fn with_start(law: StableLaw, start: f64) -> Result<Self> {
        Self::with_evaluator(KappaEvaluator::new(law)?, start)
    }

    pub fn with_evaluator(kev: KappaEvaluator, start: f64) -> Result<Self> {
        let law = *kev.law();
        let alpha = law.alpha();
        if alpha >= 2.0 {
            return Err(Error::unsupported("exit-time formulas need alpha < 2"));
        }
        if alpha < 1.0 && law.rho() >= 1.0 - CLASS_TOL {
            return Err(Error::unsupported(
                "an increasing process never leaves the positive half-line",
            ));
        }
        if !(start > 0.0) || !start.is_finite() {
            return Err(Error::domain(alloc::format!(
                "start must be finite and positive, got {start}"
            )));
        }
        Ok(ExitLaw {
            law,
            start,
            kev,
            qcfg: QuadratureConfig::default(),
        })
    }

    pub fn with_quadrature(mut self, qcfg: QuadratureConfig) -> Self {
        self.qcfg = qcfg;
        self
    }

    pub fn law(&self) -> &StableLaw {
        &self.law
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn kappa_evaluator(&self) -> &KappaEvaluator {
        &self.kev
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.qcfg
    }

    fn is_spectrally_positive(&self) -> bool {
        self.law.alpha() > 1.0 && self.law.classify() == Classification::SpectrallyPositive
    }

    /// `E^y e^{-tτ}`.
    pub fn laplace_tau(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(alloc::format!(
                "t must be finite and non-negative, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        let alpha = self.law.alpha();
        if self.is_spectrally_positive() {
            return Ok((-self.start * t.powf(1.0 / alpha)).exp());
        }
        let rate = (t * self.start.powf(alpha)).powf(1.0 / alpha);
        let (s, c) = (self.law.sin_dual_angle(), self.law.cos_dual_angle());
        let ends = SemiInfinite::default()
            .origin(alpha - 1.0)
            .tail(-1.0 - alpha * (1.0 - self.law.rho()))
            .split_at(1.0 / rate.max(1.0));
        let r = try_integrate_semi_infinite(
            |x| {
                let xa = x.powf(alpha);
                // x^{α-1}/(x^{2α} + 2x^α c + 1) without overflow.
                let weight = 1.0 / (x * (xa + 2.0 * c + 1.0 / xa));
                Ok((-rate * x).exp() * weight * self.kev.kappa(x)?)
            },
            &ends,
            &self.qcfg,
        )?;
        Ok((s / PI * r.value).clamp(0.0, 1.0))
    }

    /// The representation [`density_tau`](Self::density_tau) uses for this law.
    pub fn density_regime(&self) -> Result<DensityRegime> {
        let (alpha, rho) = (self.law.alpha(), self.law.rho());
        let near = |a: f64, b: f64| (a - b).abs() <= CLASS_TOL;
        if alpha > 1.0 {
            if self.is_spectrally_positive() {
                Ok(DensityRegime::SpectrallyPositive)
            } else {
                Ok(DensityRegime::SubordinatorMixture)
            }
        } else if alpha == 1.0 && near(rho, 0.5) {
            Ok(DensityRegime::Cauchy)
        } else if near(alpha, 2.0 / 3.0) && near(rho, 0.5) {
            Ok(DensityRegime::SymmetricTwoThirds)
        } else {
            Err(Error::unsupported(alloc::format!(
                "no explicit density of the exit time for alpha = {alpha}, rho = {rho}"
            )))
        }
    }

    /// Density of `τ` at `s` under `P^y`.
    pub fn density_tau(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain(alloc::format!(
                "s must be finite and positive, got {s}"
            )));
        }
        let regime = self.density_regime()?;
        let alpha = self.law.alpha();
        if regime == DensityRegime::SpectrallyPositive {
            return subordinator_density(1.0 / alpha, self.start, s);
        }
        // τ under P^y is y^α times τ under P^1.
        let scale = self.start.powf(alpha);
        let s1 = s / scale;
        let h = match regime {
            DensityRegime::SubordinatorMixture => self.mixture_density(s1)?,
            DensityRegime::Cauchy => self.kev.kappa(s1)? / (PI * (s1 * s1 + 1.0)),
            DensityRegime::SymmetricTwoThirds => density_tau_sym23(s1, &self.qcfg)?,
            DensityRegime::SpectrallyPositive => unreachable!(),
        };
        Ok(h / scale)
    }

    /// `h(s) = ∫_0^∞ m_{α,ρ}(u) η_{1/α}(1, s/u) du/u`, start 1.
    fn mixture_density(&self, s: f64) -> Result<f64> {
        let alpha = self.law.alpha();
        let gamma = 1.0 / alpha;
        let ends = SemiInfinite::default().origin(gamma).tail(-2.0).split_at(s);
        let r = try_integrate_semi_infinite(
            |u| {
                let eta = subordinator_density(gamma, 1.0, s / u)?;
                if eta == 0.0 {
                    return Ok(0.0);
                }
                Ok(m_value(&self.law, &self.kev, u)? * eta / u)
            },
            &ends,
            &self.qcfg,
        )?;
        Ok(r.value.max(0.0))
    }
}

/// Density of `M_{α,ρ}`:
/// `m(x) = (sin((1-ρ)απ)/(πα)) κ(1, x^{1/α}) / (x² + 2x cos((1-ρ)απ) + 1)`.
#[derive(Debug, Clone)]
pub struct MDensity {
    law: StableLaw,
    kev: KappaEvaluator,
}

impl MDensity {
    pub fn new(law: StableLaw) -> Result<Self> {
        Self::from_evaluator(KappaEvaluator::new(law)?)
    }

    pub fn from_evaluator(kev: KappaEvaluator) -> Result<Self> {
        let law = *kev.law();
        let (alpha, rho) = (law.alpha(), law.rho());
        if alpha >= 2.0 {
            return Err(Error::unsupported("M density needs alpha < 2"));
        }
        if rho >= 1.0 - CLASS_TOL || (alpha > 1.0 && (rho - (1.0 - 1.0 / alpha)).abs() <= CLASS_TOL)
        {
            return Err(Error::domain(alloc::format!(
                "M density needs rho in [0, 1) without rho = 1 - 1/alpha, got rho = {rho}"
            )));
        }
        Ok(MDensity { law, kev })
    }

    pub fn law(&self) -> &StableLaw {
        &self.law
    }

    pub fn m_density(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::domain(alloc::format!(
                "x must be finite and non-negative, got {x}"
            )));
        }
        m_value(&self.law, &self.kev, x)
    }

    /// Power `p` with `m(x) ~ x^p` as `x → ∞`.
    pub fn tail_exponent(&self) -> f64 {
        self.law.rho() - 2.0
    }
}

fn m_value(law: &StableLaw, kev: &KappaEvaluator, x: f64) -> Result<f64> {
    let alpha = law.alpha();
    let (s, c) = (law.sin_dual_angle(), law.cos_dual_angle());
    let k = kev.kappa(x.powf(1.0 / alpha))?;
    Ok(s / (PI * alpha) * k / (x * x + 2.0 * x * c + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_semi_infinite;

    fn law(alpha: f64, rho: f64) -> StableLaw {
        StableLaw::new(alpha, rho).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    const SYM23_AT_ONE: f64 = 0.260_170_590_463_940_4;

    #[test]
    fn laplace_at_zero_is_one() {
        for (a, r) in [(1.5, 0.5), (0.6, 0.3), (1.0, 0.5), (1.5, 1.0 / 3.0)] {
            assert_eq!(
                ExitLaw::new(law(a, r)).unwrap().laplace_tau(0.0).unwrap(),
                1.0
            );
        }
    }

    #[test]
    fn symmetric_two_thirds_laplace() {
        let e = ExitLaw::new(law(2.0 / 3.0, 0.5)).unwrap();
        let v = e.laplace_tau(1.0).unwrap();
        assert!(rel(v, SYM23_AT_ONE) < 1e-8, "{v}");
        assert!(rel(laplace_tau_doney(e.law(), 1.0).unwrap(), SYM23_AT_ONE) < 1e-13);
    }

    #[test]
    fn spectrally_positive_is_subordinator() {
        let e = ExitLaw::new(law(1.5, 1.0 / 3.0)).unwrap();
        assert!((e.laplace_tau(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        let e = ExitLaw::with_start(law(1.5, 1.0 / 3.0), 2.0).unwrap();
        assert!((e.laplace_tau(1.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(
            e.density_regime().unwrap(),
            DensityRegime::SpectrallyPositive
        );
    }

    #[test]
    fn start_scaling_passes_through() {
        let l = law(1.3, 0.4);
        let one = ExitLaw::new(l).unwrap();
        for &y in &[0.5, 2.0] {
            let e = ExitLaw::with_start(l, y).unwrap();
            for &t in &[0.3, 1.0] {
                let a = e.laplace_tau(t).unwrap();
                let b = one.laplace_tau(t * y.powf(1.3)).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn laplace_is_completely_monotone_on_grid() {
        let e = ExitLaw::new(law(1.7, 0.55)).unwrap();
        let ts: alloc::vec::Vec<f64> = (0..10).map(|i| 0.05 * 2f64.powi(i)).collect();
        let v: alloc::vec::Vec<f64> = ts.iter().map(|&t| e.laplace_tau(t).unwrap()).collect();
        for w in v.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn unsupported_laws() {
        assert!(matches!(
            ExitLaw::new(law(0.7, 1.0)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            ExitLaw::new(law(2.0, 0.5)),
            Err(Error::Unsupported(_))
        ));
        assert!(ExitLaw::with_start(law(1.5, 0.5), 0.0).is_err());
        let e = ExitLaw::new(law(0.6, 0.3)).unwrap();
        assert!(matches!(e.density_tau(1.0), Err(Error::Unsupported(_))));
        assert!(MDensity::new(law(1.5, 1.0 / 3.0)).is_err());
        assert!(MDensity::new(law(0.7, 1.0)).is_err());
    }

    #[test]
    fn m_density_closed_form_and_mass() {
        let m = MDensity::new(law(1.5, 2.0 / 3.0)).unwrap();
        assert!((m.m_density(1.0).unwrap() - 2.0 / (3.0 * PI)).abs() < 1e-9);
        assert!((m.m_density(1.0).unwrap() - 0.212_206_6).abs() < 1e-7);
        for (a, r) in [(1.5, 0.5), (0.6, 0.3), (0.6, 0.8), (1.3, 0.6), (1.0, 0.5)] {
            let m = MDensity::new(law(a, r)).unwrap();
            let ends = SemiInfinite::default().tail(m.tail_exponent());
            let mass = try_integrate_semi_infinite(
                |x| m.m_density(x),
                &ends,
                &QuadratureConfig::default(),
            )
            .unwrap()
            .value;
            assert!((mass - 1.0).abs() < 1e-8, "alpha={a} rho={r}: {mass}");
        }
    }

    #[test]
    fn cauchy_density() {
        let e = ExitLaw::new(law(1.0, 0.5)).unwrap();
        assert_eq!(e.density_regime().unwrap(), DensityRegime::Cauchy);
        let k1 = e.kappa_evaluator().kappa(1.0).unwrap();
        assert!(rel(e.density_tau(1.0).unwrap(), k1 / (2.0 * PI)) < 1e-14);
        // h ~ x^{-3/2}
        let ends = SemiInfinite::default().tail(-1.5);
        let mass =
            try_integrate_semi_infinite(|x| e.density_tau(x), &ends, &QuadratureConfig::default())
                .unwrap()
                .value;
        assert!((mass - 1.0).abs() < 1e-8, "{mass}");
    }

    #[test]
    fn mixture_density_transform_matches_laplace() {
        let e = ExitLaw::new(law(1.5, 0.5)).unwrap();
        // τ has tail ~ s^{-1-ρ} (heavier than the factor N(2/3)).
        let ends = SemiInfinite::default().origin(0.0).tail(-1.5);
        for &t in &[0.5, 1.0, 2.0] {
            let lhs = try_integrate_semi_infinite(
                |s| Ok((-t * s).exp() * e.density_tau(s)?),
                &ends,
                &QuadratureConfig::default().with_rel_tol(1e-8),
            )
            .unwrap()
            .value;
            let rhs = e.laplace_tau(t).unwrap();
            assert!((lhs - rhs).abs() < 3e-6, "t={t}: {lhs} {rhs}");
        }
    }

    #[test]
    fn general_start_density_rescales() {
        let l = law(1.0, 0.5);
        let one = ExitLaw::new(l).unwrap();
        let two = ExitLaw::with_start(l, 2.0).unwrap();
        let s = 3.0;
        assert!(
            rel(
                two.density_tau(s).unwrap(),
                one.density_tau(s / 2.0).unwrap() / 2.0
            ) < 1e-14
        );
        // Spectrally positive start y: η_{1/α}(y, s).
        let sp = ExitLaw::with_start(law(1.5, 1.0 / 3.0), 2.0).unwrap();
        let direct = subordinator_density(2.0 / 3.0, 2.0, 1.0).unwrap();
        assert_eq!(sp.density_tau(1.0).unwrap(), direct);
        let mass = integrate_semi_infinite(
            |s| sp.density_tau(s).unwrap(),
            &SemiInfinite::default().tail(-5.0 / 3.0).split_at(4.0),
            &QuadratureConfig::default(),
        )
        .unwrap()
        .value;
        assert!((mass - 1.0).abs() < 1e-7, "{mass}");
    }
}
