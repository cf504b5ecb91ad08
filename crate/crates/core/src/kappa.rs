//! The ascending ladder exponent `κ(1, θ)` of a strictly stable process.
//!
//! For `θ ∈ (0, 1)`,
//!
//! ```text
//! log κ(1, θ) = Σ_{m≥1} (-1)^{m+1} θ^m sin(ρmπ) / (m sin(mπ/α))
//!             + Σ_{k≥1} (-1)^{k+1} θ^{αk} sin(ραkπ) / (k sin(αkπ)),
//! ```
//!
//! and `κ(1, θ) = θ^{αρ} κ(1, 1/θ)` extends it to `θ > 1`. When `α` is
//! rational some divisors vanish; the singular terms of the two series
//! cancel in pairs and [`RationalAlphaPolicy`] decides how the limit is
//! taken. Close to `θ = 1` both series converge slowly, so the evaluator
//! interpolates there instead (see [`KappaEvaluator`]).

use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numerics::{
    cos_pi, sin_pi, sin_pi_product, sin_pi_ratio, try_integrate_semi_infinite, Chebyshev,
    QuadratureConfig, SemiInfinite, SeriesConfig,
};
use crate::stable_law::{Classification, StableLaw};
use crate::{Error, Result};

/// Divisors smaller than this are treated as resonant.
pub const RESONANCE_THRESHOLD: f64 = 1e-8;

/// `log θ` below which the series is summed directly.
const DIRECT_LOG_LIMIT: f64 = -0.25;
/// Half-width, in `log θ`, of the interpolation window around `θ = 1`.
const NEAR_ONE_HALF_WIDTH: f64 = 0.5;
const NEAR_ONE_NODES: usize = 20;

/// Step used by [`RationalAlphaPolicy::PairedCancellation`], divided by
/// the term index since the Laurent coefficients grow with it.
const PAIRED_STEP: f64 = 1e-3;

/// How vanishing divisors at rational `α` are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RationalAlphaPolicy {
    /// Evaluate at `α(1 ± δ)` and average.
    #[default]
    Perturb,
    /// Keep `α` and replace each resonant term by the finite part of its
    /// Laurent expansion in `α`; the poles of paired terms cancel.
    PairedCancellation,
}

/// Evaluates `κ(1, θ)` and the related Stieltjes density for one law.
///
/// On `|log θ| < 1/4` the evaluator uses a Chebyshev interpolant of
/// `log κ(1, e^u) - αρu/2`, which the scaling relation makes even in `u`.
/// The interpolant is built once at construction from series values at
/// `θ ≤ e^{-u_j}`, for the law and for its dual.
#[derive(Debug, Clone)]
pub struct KappaEvaluator {
    law: StableLaw,
    series_cfg: SeriesConfig,
    policy: RationalAlphaPolicy,
    perturbation: f64,
    near_one: Chebyshev,
    dual_near_one: Chebyshev,
}

impl KappaEvaluator {
    pub fn new(law: StableLaw) -> Result<Self> {
        Self::with_options(
            law,
            SeriesConfig::default(),
            RationalAlphaPolicy::default(),
            1e-7,
        )
    }

    pub fn with_options(
        law: StableLaw,
        series_cfg: SeriesConfig,
        policy: RationalAlphaPolicy,
        perturbation: f64,
    ) -> Result<Self> {
        series_cfg.validate()?;
        if !(perturbation > 0.0 && perturbation <= 1e-4) {
            return Err(Error::domain(alloc::format!(
                "perturbation must lie in (0, 1e-4], got {perturbation}"
            )));
        }
        let mut ev = KappaEvaluator {
            law,
            series_cfg,
            policy,
            perturbation,
            near_one: Chebyshev::fit(0.0, 1.0, 2, |_| Ok(0.0))?,
            dual_near_one: Chebyshev::fit(0.0, 1.0, 2, |_| Ok(0.0))?,
        };
        ev.near_one = ev.fit_near_one(law.rho())?;
        ev.dual_near_one = ev.fit_near_one(1.0 - law.rho())?;
        Ok(ev)
    }

    pub fn law(&self) -> &StableLaw {
        &self.law
    }

    pub fn policy(&self) -> RationalAlphaPolicy {
        self.policy
    }

    pub fn perturbation(&self) -> f64 {
        self.perturbation
    }

    /// `κ(1, θ)`.
    pub fn kappa(&self, theta: f64) -> Result<f64> {
        self.kappa_for(self.law.rho(), &self.near_one, theta)
    }

    /// `κ̂(1, θ)`, the exponent of the dual process `-X`.
    pub fn kappa_dual(&self, theta: f64) -> Result<f64> {
        self.kappa_for(1.0 - self.law.rho(), &self.dual_near_one, theta)
    }

    /// Density `l` with `∫_0^∞ l(x)/(x+θ) dx = 1/κ(1, θ)`:
    /// `l(x) = (sin(ραπ)/π) x^α κ̂(1, x) / (x^{2α} + 2x^α cos(ραπ) + 1)`.
    pub fn stieltjes_density_l(&self, x: f64) -> Result<f64> {
        self.check_stieltjes()?;
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::domain(alloc::format!(
                "l(x) needs finite x > 0, got {x}"
            )));
        }
        let (alpha, rho) = (self.law.alpha(), self.law.rho());
        let xa = x.powf(alpha);
        // x^α/(x^{2α} + 2x^α c + 1) written without overflow.
        let ratio = 1.0 / (xa + 2.0 * cos_pi(rho * alpha) + 1.0 / xa);
        Ok(sin_pi(rho * alpha) / PI * self.kappa_dual(x)? * ratio)
    }

    /// `∫_0^∞ l(x)/(x+θ) dx` by quadrature; equals `1/κ(1, θ)`.
    pub fn inv_kappa_via_stieltjes(&self, theta: f64, qcfg: &QuadratureConfig) -> Result<f64> {
        self.check_stieltjes()?;
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::domain(alloc::format!(
                "theta must be finite and positive, got {theta}"
            )));
        }
        let (alpha, rho) = (self.law.alpha(), self.law.rho());
        let ends = SemiInfinite::default()
            .origin(alpha)
            .tail(-1.0 - alpha * rho)
            .split_at(1.0);
        let r = try_integrate_semi_infinite(
            |x| Ok(self.stieltjes_density_l(x)? / (x + theta)),
            &ends,
            qcfg,
        )?;
        Ok(r.value)
    }

    fn check_stieltjes(&self) -> Result<()> {
        let (alpha, rho) = (self.law.alpha(), self.law.rho());
        if alpha >= 2.0 {
            return Err(Error::unsupported("the Stieltjes density needs alpha < 2"));
        }
        if rho <= 0.0 {
            return Err(Error::domain("the Stieltjes density needs rho > 0"));
        }
        if (rho * alpha - 1.0).abs() <= crate::stable_law::CLASS_TOL {
            return Err(Error::domain(
                "the Stieltjes density degenerates at rho = 1/alpha; use the closed form",
            ));
        }
        Ok(())
    }

    fn kappa_for(&self, rho: f64, near_one: &Chebyshev, theta: f64) -> Result<f64> {
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::domain(alloc::format!(
                "theta must be finite and non-negative, got {theta}"
            )));
        }
        if theta == 0.0 {
            return Ok(1.0);
        }
        let alpha = self.law.alpha();
        let u = theta.ln();
        let log_kappa = if u.abs() < -DIRECT_LOG_LIMIT {
            near_one.eval(u) + 0.5 * alpha * rho * u
        } else if u < 0.0 {
            self.log_kappa_series(rho, theta)?
        } else {
            alpha * rho * u + self.log_kappa_series(rho, 1.0 / theta)?
        };
        Ok(log_kappa.exp())
    }

    fn fit_near_one(&self, rho: f64) -> Result<Chebyshev> {
        let alpha = self.law.alpha();
        let h = NEAR_ONE_HALF_WIDTH;
        let mut cache: alloc::vec::Vec<(f64, f64)> = alloc::vec::Vec::new();
        Chebyshev::fit(-h, h, NEAR_ONE_NODES, |u| {
            // f(u) = f(-u): evaluate on the left half and mirror.
            let v = -u.abs();
            if let Some(&(_, f)) = cache.iter().find(|&&(w, _)| w == v) {
                return Ok(f);
            }
            let f = self.log_kappa_series(rho, v.exp())? - 0.5 * alpha * rho * v;
            cache.push((v, f));
            Ok(f)
        })
    }

    /// `log κ(1, θ)` from the two series, `θ ∈ (0, 1)`.
    fn log_kappa_series(&self, rho: f64, theta: f64) -> Result<f64> {
        let alpha = self.law.alpha();
        match self.policy {
            RationalAlphaPolicy::Perturb => match self.series_at(alpha, rho, theta, false) {
                Err(Error::Resonance { .. }) => {
                    let d = self.perturbation;
                    let up = self.series_at(alpha * (1.0 + d), rho, theta, false)?;
                    let down = self.series_at(alpha * (1.0 - d), rho, theta, false)?;
                    Ok(0.5 * (up + down))
                }
                other => other,
            },
            RationalAlphaPolicy::PairedCancellation => self.series_at(alpha, rho, theta, true),
        }
    }

    fn series_at(&self, alpha: f64, rho: f64, theta: f64, resolve: bool) -> Result<f64> {
        let tol = self.series_cfg.rel_tol;
        let max_terms = self.series_cfg.max_terms;
        let ln_theta = theta.ln();
        let m_term = |a: f64, m: f64| -> f64 {
            let sign = if m % 2.0 == 1.0 { 1.0 } else { -1.0 };
            sign * (m * ln_theta).exp() * sin_pi_product(rho, m) / (m * sin_pi_ratio(m, a))
        };
        let k_term = |a: f64, k: f64| -> f64 {
            let sign = if k % 2.0 == 1.0 { 1.0 } else { -1.0 };
            sign * (a * k * ln_theta).exp() * sin_pi_product(rho * a, k)
                / (k * sin_pi_product(a, k))
        };
        let m_sum = self.sum_resonant(alpha, theta, tol, max_terms, resolve, |a, m| {
            (sin_pi_ratio(m, a), m_term(a, m))
        })?;
        let k_sum =
            self.sum_resonant(alpha, theta.powf(alpha), tol, max_terms, resolve, |a, k| {
                (sin_pi_product(a, k), k_term(a, k))
            })?;
        Ok(m_sum + k_sum)
    }

    /// Sums `Σ_n term(α, n)` where `|term| ≤ q^n / (n |divisor|)`.
    fn sum_resonant<F>(
        &self,
        alpha: f64,
        q: f64,
        tol: f64,
        max_terms: usize,
        resolve: bool,
        term: F,
    ) -> Result<f64>
    where
        F: Fn(f64, f64) -> (f64, f64),
    {
        let mut sum = 0.0;
        let mut comp = 0.0;
        let mut worst = 1.0f64;
        let mut power = 1.0;
        for n in 1..=max_terms {
            let nf = n as f64;
            power *= q;
            let (divisor, mut t) = term(alpha, nf);
            if divisor.abs() < RESONANCE_THRESHOLD {
                if !resolve {
                    return Err(Error::Resonance { alpha, index: n });
                }
                t = finite_part(|a| term(a, nf).1, alpha, PAIRED_STEP / nf);
            } else {
                worst = worst.max(1.0 / divisor.abs());
            }
            if !t.is_finite() {
                return Err(Error::Resonance { alpha, index: n });
            }
            let s = sum + t;
            comp += if sum.abs() >= t.abs() {
                (sum - s) + t
            } else {
                (t - s) + sum
            };
            sum = s;
            // Bound on the remaining tail, assuming no worse divisor ahead.
            if power * worst / (nf * (1.0 - q)) <= tol {
                return Ok(sum + comp);
            }
        }
        Err(Error::NonConvergence {
            what: "ladder exponent series",
            best: sum + comp,
            abs_err: power * worst,
            evaluations: max_terms,
        })
    }
}

/// Constant term of the Laurent expansion of `t(α0(1+ε))` around `ε = 0`,
/// from symmetric averages at `ε = ±h, ±h/2` with Richardson extrapolation.
fn finite_part<F: Fn(f64) -> f64>(t: F, alpha0: f64, h: f64) -> f64 {
    let avg = |h: f64| 0.5 * (t(alpha0 * (1.0 + h)) + t(alpha0 * (1.0 - h)));
    (4.0 * avg(0.5 * h) - avg(h)) / 3.0
}

/// Closed forms of `κ(1, θ)`: `1 + θ` for spectrally negative laws with
/// `α > 1`, and `(θ^{2α} - 2θ^α cos απ + 1)/(1 + θ)` on the dual Doney
/// class `1 - ρ = 1/α - 1`.
pub fn kappa_closed_form(law: &StableLaw, theta: f64) -> Option<f64> {
    if !(theta >= 0.0) {
        return None;
    }
    let alpha = law.alpha();
    match law.classify() {
        Classification::SpectrallyNegative if alpha > 1.0 => Some(1.0 + theta),
        Classification::DoneyC11Dual => {
            let ta = theta.powf(alpha);
            Some((ta * ta - 2.0 * ta * cos_pi(alpha) + 1.0) / (1.0 + theta))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(alpha: f64, rho: f64) -> KappaEvaluator {
        KappaEvaluator::new(StableLaw::new(alpha, rho).unwrap()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn normalization() {
        for (a, r) in [(1.5, 0.5), (0.7, 0.3), (1.0, 0.5), (1.8, 0.45)] {
            let e = ev(a, r);
            assert_eq!(e.kappa(0.0).unwrap(), 1.0);
            assert_eq!(e.kappa_dual(0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn documented_examples() {
        assert!(rel(ev(1.5, 2.0 / 3.0).kappa(0.5).unwrap(), 1.5) < 1e-10);
        assert!(rel(ev(2.0 / 3.0, 0.5).kappa(1.0).unwrap(), 1.5) < 1e-9);
        assert!(rel(ev(1.5, 1.0 / 3.0).kappa_dual(0.5).unwrap(), 1.5) < 1e-10);
        let l = ev(2.0 / 3.0, 0.5).stieltjes_density_l(1.0).unwrap();
        assert!((l - 3f64.sqrt() / (4.0 * PI)).abs() < 1e-9);
        assert!((l - 0.137_832_2).abs() < 1e-7);
    }

    #[test]
    fn closed_form_examples() {
        let neg = StableLaw::new(1.5, 2.0 / 3.0).unwrap();
        assert_eq!(kappa_closed_form(&neg, 2.0), Some(3.0));
        let doney = StableLaw::new(2.0 / 3.0, 0.5).unwrap();
        assert!((kappa_closed_form(&doney, 8.0).unwrap() - 7.0 / 3.0).abs() < 1e-14);
        assert_eq!(
            kappa_closed_form(&StableLaw::new(1.5, 0.5).unwrap(), 1.0),
            None
        );
    }

    #[test]
    fn series_matches_closed_forms() {
        let laws = [
            (1.2, 1.0 / 1.2),
            (1.5, 1.0 / 1.5),
            (1.8, 1.0 / 1.8),
            (0.55, 2.0 - 1.0 / 0.55),
            (2.0 / 3.0, 2.0 - 1.5),
            (0.9, 2.0 - 1.0 / 0.9),
        ];
        for (a, r) in laws {
            let law = StableLaw::new(a, r).unwrap();
            for policy in [
                RationalAlphaPolicy::Perturb,
                RationalAlphaPolicy::PairedCancellation,
            ] {
                let e = KappaEvaluator::with_options(law, SeriesConfig::default(), policy, 1e-7)
                    .unwrap();
                for &t in &[0.1, 0.3, 0.7, 0.8, 0.95, 1.0, 1.05, 1.3, 2.0, 5.0, 10.0] {
                    let exact = kappa_closed_form(&law, t).unwrap();
                    let v = e.kappa(t).unwrap();
                    assert!(
                        rel(v, exact) < 1e-9,
                        "{policy:?} alpha={a} theta={t}: {v} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn subordinator_and_gaussian_limits() {
        // A subordinator is its own ladder height process: κ(1, θ) = 1 + θ^α.
        let e = ev(0.7, 1.0);
        for &t in &[0.2, 0.9, 1.0, 3.0] {
            assert!(rel(e.kappa(t).unwrap(), 1.0 + t.powf(0.7)) < 1e-10);
        }
        // Brownian motion: κ(1, θ) = 1 + θ.
        let e = ev(2.0, 0.5);
        for &t in &[0.2, 0.6, 1.0, 4.0] {
            assert!(
                rel(e.kappa(t).unwrap(), 1.0 + t) < 1e-9,
                "{}",
                e.kappa(t).unwrap()
            );
        }
    }

    #[test]
    fn interpolant_matches_direct_series() {
        for (a, r) in [(1.3, 0.4), (0.6, 0.8), (1.7, 0.55), (1.0, 0.5), (0.75, 0.3)] {
            let e = ev(a, r);
            for &t in &[0.62, 0.7, 0.77] {
                let direct = e.log_kappa_series(r, t).unwrap();
                let interp = e.near_one.eval(t.ln()) + 0.5 * a * r * t.ln();
                // At alpha = 1 every term is resonant and the averaged poles
                // cost a few digits.
                let tol = if a == 1.0 { 1e-9 } else { 1e-11 };
                assert!(
                    (direct - interp).abs() < tol,
                    "alpha={a} rho={r} theta={t}: {direct} {interp}"
                );
            }
        }
    }

    #[test]
    fn policies_agree_at_rational_alpha() {
        for (a, r) in [(0.75, 0.3), (1.5, 0.5), (1.0, 0.5), (1.25, 0.6)] {
            let law = StableLaw::new(a, r).unwrap();
            let p = KappaEvaluator::new(law).unwrap();
            let c = KappaEvaluator::with_options(
                law,
                SeriesConfig::default(),
                RationalAlphaPolicy::PairedCancellation,
                1e-7,
            )
            .unwrap();
            for &t in &[0.3, 0.7, 1.0, 3.0] {
                let (x, y) = (p.kappa(t).unwrap(), c.kappa(t).unwrap());
                assert!(rel(x, y) < 1e-8, "alpha={a} theta={t}: {x} {y}");
            }
        }
    }

    #[test]
    fn continuity_in_alpha() {
        let at = |a: f64, t: f64| ev(a, 0.5).kappa(t).unwrap();
        for &t in &[0.3, 0.7] {
            let mid = 0.5 * (at(0.75 + 1e-5, t) + at(0.75 - 1e-5, t));
            assert!((at(0.75, t) - mid).abs() < 1e-8);
        }
    }

    #[test]
    fn stieltjes_identity_on_grid() {
        let q = QuadratureConfig::default().with_rel_tol(1e-10);
        for (a, r) in [(1.3, 0.5), (0.6, 0.8), (2.0 / 3.0, 0.5), (1.5, 1.0 / 3.0)] {
            let e = ev(a, r);
            for &t in &[0.1, 1.0, 10.0] {
                let lhs = e.inv_kappa_via_stieltjes(t, &q).unwrap();
                let rhs = 1.0 / e.kappa(t).unwrap();
                assert!(
                    rel(lhs, rhs) < 1e-8,
                    "alpha={a} rho={r} theta={t}: {lhs} {rhs}"
                );
            }
        }
        let e = ev(2.0 / 3.0, 0.5);
        assert!(rel(e.inv_kappa_via_stieltjes(1.0, &q).unwrap(), 2.0 / 3.0) < 1e-8);
    }

    #[test]
    fn stieltjes_rejects_degenerate_laws() {
        assert!(ev(1.5, 2.0 / 3.0).stieltjes_density_l(1.0).is_err());
        assert!(ev(0.7, 0.0).stieltjes_density_l(1.0).is_err());
        assert!(ev(1.3, 0.5).stieltjes_density_l(0.0).is_err());
    }

    #[test]
    fn rejects_bad_options() {
        let law = StableLaw::new(1.3, 0.5).unwrap();
        let bad = |d| {
            KappaEvaluator::with_options(
                law,
                SeriesConfig::default(),
                RationalAlphaPolicy::Perturb,
                d,
            )
        };
        assert!(bad(0.0).is_err());
        assert!(bad(1e-3).is_err());
        assert!(ev(1.3, 0.5).kappa(-1.0).is_err());
        assert!(ev(1.3, 0.5).kappa(f64::INFINITY).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scaling_relation(alpha in 0.3f64..1.9, frac in 0.05f64..0.95, theta in 1.5f64..20.0) {
            let (lo, hi) = crate::stable_law::rho_band(alpha);
            let rho = lo + frac * (hi - lo);
            let e = ev(alpha, rho);
            let lhs = e.kappa(theta).unwrap();
            let rhs = theta.powf(alpha * rho) * e.kappa(1.0 / theta).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-12);
        }

        #[test]
        fn positive_and_nondecreasing(alpha in 0.3f64..1.9, frac in 0.05f64..0.95) {
            let (lo, hi) = crate::stable_law::rho_band(alpha);
            let e = ev(alpha, lo + frac * (hi - lo));
            let mut prev = 1.0;
            for i in 1..=40 {
                let t = 0.1 * i as f64;
                let v = e.kappa(t).unwrap();
                prop_assert!(v > 0.0 && v >= prev * (1.0 - 1e-12));
                prev = v;
            }
        }

        #[test]
        fn l_is_positive(alpha in 0.3f64..1.9, frac in 0.05f64..0.95, lx in -3.0f64..3.0) {
            let (lo, hi) = crate::stable_law::rho_band(alpha);
            let rho = lo + frac * (hi - lo);
            prop_assume!((rho * alpha - 1.0).abs() > 1e-6);
            let e = ev(alpha, rho);
            prop_assert!(e.stieltjes_density_l(10f64.powf(lx)).unwrap() > 0.0);
        }
    }
}
