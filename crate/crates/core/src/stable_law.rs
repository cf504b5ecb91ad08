//! Parameterization of strictly α-stable laws by the index `alpha` and the
//! positivity coefficient `rho = P(X_t >= 0)`.
//!
//! The characteristic exponent is taken in the form
//! `E e^{izX_t} = exp(-t|z|^α (1 - iβ tan(πα/2) sgn z))`, which gives
//! `ρ = 1/2 + arctan(β tan(πα/2)) / (πα)`.

use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Absolute tolerance used when deciding membership in the special classes.
pub const CLASS_TOL: f64 = 1e-12;

/// A validated strictly α-stable law.
///
/// `alpha = 2` (with `rho = 1/2`) is accepted so that the ladder-exponent
/// series can be exercised at its Gaussian limit; the exit-law operations
/// reject it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableLaw {
    alpha: f64,
    rho: f64,
    beta: Option<f64>,
}

/// Special families of strictly stable laws with closed-form ladder data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    /// Only positive jumps.
    SpectrallyPositive,
    /// Only negative jumps.
    SpectrallyNegative,
    /// `rho = 1/2`.
    Symmetric,
    /// `alpha ∈ [1/2, 1)` with `1 - rho = 1/alpha - 1`: dual of Doney's class `C_{1,1}`.
    DoneyC11Dual,
    General,
}

/// Positivity coefficient of the law with skewness `beta`.
pub fn rho_from_beta(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(alloc::format!(
            "alpha must lie in (0, 2), got {alpha}"
        )));
    }
    if !(-1.0..=1.0).contains(&beta) {
        return Err(Error::domain(alloc::format!(
            "beta must lie in [-1, 1], got {beta}"
        )));
    }
    if alpha == 1.0 {
        if beta != 0.0 {
            return Err(Error::domain(
                "a strictly 1-stable law must have beta = 0 (Cauchy)",
            ));
        }
        return Ok(0.5);
    }
    let rho = 0.5 + (beta * (PI * alpha / 2.0).tan()).atan() / (PI * alpha);
    // Rounding can push the one-sided endpoints a hair outside [0, 1].
    Ok(rho.clamp(0.0, 1.0))
}

/// Closed admissible interval for `rho` at index `alpha`.
pub fn rho_band(alpha: f64) -> (f64, f64) {
    if alpha < 1.0 {
        (0.0, 1.0)
    } else if alpha == 1.0 {
        (0.5, 0.5)
    } else {
        (1.0 - 1.0 / alpha, 1.0 / alpha)
    }
}

impl StableLaw {
    /// Builds a law from `(alpha, rho)`; `beta` is left unset.
    pub fn new(alpha: f64, rho: f64) -> Result<Self> {
        if !alpha.is_finite() || !rho.is_finite() {
            return Err(Error::domain("alpha and rho must be finite"));
        }
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Inadmissible { alpha, rho });
        }
        let (lo, hi) = rho_band(alpha);
        // 1 - 1/alpha and 1/alpha are themselves rounded, so the endpoints get
        // a little slack and are snapped onto the band.
        if rho < lo - CLASS_TOL || rho > hi + CLASS_TOL {
            return Err(Error::Inadmissible { alpha, rho });
        }
        Ok(StableLaw {
            alpha,
            rho: rho.clamp(lo, hi),
            beta: None,
        })
    }

    /// Builds a law from `(alpha, beta)`, recording `beta`.
    pub fn from_beta(alpha: f64, beta: f64) -> Result<Self> {
        let rho = rho_from_beta(alpha, beta)?;
        let (lo, hi) = rho_band(alpha);
        Ok(StableLaw {
            alpha,
            rho: rho.clamp(lo, hi),
            beta: Some(beta),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    /// Skewness implied by `rho`, or the recorded value when the law was
    /// built from `beta`. `None` at `alpha = 1` and `alpha = 2`, where the
    /// map is not invertible.
    pub fn skewness(&self) -> Option<f64> {
        if self.beta.is_some() {
            return self.beta;
        }
        if self.alpha == 1.0 || self.alpha == 2.0 {
            return None;
        }
        let beta = (PI * self.alpha * (self.rho - 0.5)).tan() / (PI * self.alpha / 2.0).tan();
        Some(beta.clamp(-1.0, 1.0))
    }

    /// The law of `-X`: `rho ↦ 1 - rho`, `beta ↦ -beta`.
    pub fn dual(&self) -> StableLaw {
        StableLaw {
            alpha: self.alpha,
            rho: 1.0 - self.rho,
            beta: self.beta.map(|b| -b),
        }
    }

    pub fn classify(&self) -> Classification {
        let (alpha, rho) = (self.alpha, self.rho);
        let near = |a: f64, b: f64| (a - b).abs() <= CLASS_TOL;
        if (0.5 - CLASS_TOL..1.0).contains(&alpha) && near(1.0 - rho, 1.0 / alpha - 1.0) {
            return Classification::DoneyC11Dual;
        }
        if alpha > 1.0 && alpha < 2.0 {
            if near(rho, 1.0 - 1.0 / alpha) {
                return Classification::SpectrallyPositive;
            }
            if near(rho, 1.0 / alpha) {
                return Classification::SpectrallyNegative;
            }
        } else if alpha < 1.0 {
            // rho = 1: increasing (a subordinator); rho = 0: decreasing.
            if near(rho, 1.0) {
                return Classification::SpectrallyPositive;
            }
            if near(rho, 0.0) {
                return Classification::SpectrallyNegative;
            }
        }
        if near(rho, 0.5) {
            return Classification::Symmetric;
        }
        Classification::General
    }

    /// `sin((1-ρ)απ)`, the prefactor shared by the exit-time formulas.
    pub(crate) fn sin_dual_angle(&self) -> f64 {
        crate::numerics::sin_pi((1.0 - self.rho) * self.alpha)
    }

    /// `cos((1-ρ)απ)`.
    pub(crate) fn cos_dual_angle(&self) -> f64 {
        crate::numerics::cos_pi((1.0 - self.rho) * self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rho_from_beta_examples() {
        assert_eq!(rho_from_beta(1.5, 0.0).unwrap(), 0.5);
        assert!((rho_from_beta(1.5, -1.0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!((rho_from_beta(0.7, 1.0).unwrap() - 1.0).abs() < 1e-14);
        // Spectrally positive, alpha > 1.
        assert!((rho_from_beta(1.5, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rho_from_beta_rejects_bad_input() {
        assert!(matches!(rho_from_beta(1.0, 0.5), Err(Error::Domain(_))));
        assert!(matches!(rho_from_beta(2.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(rho_from_beta(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(rho_from_beta(1.2, 1.5), Err(Error::Domain(_))));
        assert_eq!(rho_from_beta(1.0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn new_validates_band() {
        let law = StableLaw::new(2.0 / 3.0, 0.5).unwrap();
        assert_eq!(law.alpha(), 2.0 / 3.0);
        assert_eq!(law.beta(), None);
        assert!(matches!(
            StableLaw::new(1.0, 0.3),
            Err(Error::Inadmissible { .. })
        ));
        assert!(matches!(
            StableLaw::new(1.5, 0.9),
            Err(Error::Inadmissible { .. })
        ));
        assert!(StableLaw::new(2.5, 0.5).is_err());
        assert!(StableLaw::new(f64::NAN, 0.5).is_err());
        assert!(StableLaw::new(0.3, 1.0).is_ok());
        assert!(StableLaw::new(0.3, 0.0).is_ok());
    }

    #[test]
    fn dual_examples() {
        let d = StableLaw::new(1.5, 2.0 / 3.0).unwrap().dual();
        assert!((d.rho() - 1.0 / 3.0).abs() < 1e-15);
        let s = StableLaw::new(2.0 / 3.0, 0.5).unwrap();
        assert_eq!(s.dual(), s);
        assert_eq!(StableLaw::new(0.7, 1.0).unwrap().dual().rho(), 0.0);
        let b = StableLaw::from_beta(1.2, 0.4).unwrap();
        assert_eq!(b.dual().beta(), Some(-0.4));
    }

    #[test]
    fn classify_examples() {
        use Classification::*;
        assert_eq!(
            StableLaw::new(2.0 / 3.0, 0.5).unwrap().classify(),
            DoneyC11Dual
        );
        assert_eq!(StableLaw::new(1.5, 0.5).unwrap().classify(), Symmetric);
        assert_eq!(
            StableLaw::new(1.5, 2.0 / 3.0).unwrap().classify(),
            SpectrallyNegative
        );
        assert_eq!(
            StableLaw::new(1.5, 1.0 / 3.0).unwrap().classify(),
            SpectrallyPositive
        );
        assert_eq!(
            StableLaw::new(0.7, 1.0).unwrap().classify(),
            SpectrallyPositive
        );
        assert_eq!(
            StableLaw::new(0.7, 0.0).unwrap().classify(),
            SpectrallyNegative
        );
        // alpha = 1/2, rho = 0 is both Doney-dual and decreasing; Doney wins.
        assert_eq!(StableLaw::new(0.5, 0.0).unwrap().classify(), DoneyC11Dual);
        assert_eq!(StableLaw::new(1.3, 0.4).unwrap().classify(), General);
        assert_eq!(StableLaw::new(1.0, 0.5).unwrap().classify(), Symmetric);
    }

    #[test]
    fn skewness_roundtrip() {
        let law = StableLaw::new(1.5, 2.0 / 3.0).unwrap();
        assert!((law.skewness().unwrap() + 1.0).abs() < 1e-12);
        let law = StableLaw::new(0.7, 0.6).unwrap();
        let beta = law.skewness().unwrap();
        assert!((rho_from_beta(0.7, beta).unwrap() - 0.6).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn rho_skew_symmetry(alpha in 0.05f64..1.95, beta in -1.0f64..1.0) {
            prop_assume!((alpha - 1.0).abs() > 1e-6);
            let r = rho_from_beta(alpha, beta).unwrap();
            let r_neg = rho_from_beta(alpha, -beta).unwrap();
            prop_assert!((r + r_neg - 1.0).abs() < 1e-12);
            let (lo, hi) = rho_band(alpha);
            prop_assert!(r >= lo - 1e-12 && r <= hi + 1e-12);
        }

        #[test]
        fn rho_monotone_in_beta(alpha in 0.05f64..1.95, b1 in -1.0f64..1.0, b2 in -1.0f64..1.0) {
            prop_assume!((alpha - 1.0).abs() > 1e-6);
            let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
            let (r_lo, r_hi) = (rho_from_beta(alpha, lo).unwrap(), rho_from_beta(alpha, hi).unwrap());
            // tan(πα/2) changes sign at alpha = 1.
            if alpha < 1.0 {
                prop_assert!(r_lo <= r_hi);
            } else {
                prop_assert!(r_lo >= r_hi);
            }
        }

        #[test]
        fn from_beta_stores_consistent_rho(alpha in 0.05f64..1.95, beta in -1.0f64..1.0) {
            prop_assume!((alpha - 1.0).abs() > 1e-6);
            let law = StableLaw::from_beta(alpha, beta).unwrap();
            prop_assert!((law.rho() - rho_from_beta(alpha, beta).unwrap()).abs() <= 1e-12);
            let back = law.dual().dual();
            prop_assert!((back.rho() - law.rho()).abs() <= 1e-15);
            prop_assert_eq!(back.beta(), law.beta());
        }

        #[test]
        fn dual_swaps_one_sided_classes(alpha in 1.01f64..1.99) {
            let neg = StableLaw::new(alpha, 1.0 / alpha).unwrap();
            prop_assert_eq!(neg.classify(), Classification::SpectrallyNegative);
            prop_assert_eq!(neg.dual().classify(), Classification::SpectrallyPositive);
            let sym = StableLaw::new(alpha, 0.5).unwrap();
            prop_assert_eq!(sym.dual().classify(), Classification::Symmetric);
        }
    }
}
