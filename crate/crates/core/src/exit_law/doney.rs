//! Closed forms on the dual Doney class `α ∈ [1/2, 1)`, `1 - ρ = 1/α - 1`,
//! where `κ(1, x) = (x^{2α} - 2x^α cos απ + 1)/(1 + x)`, and the density of
//! `τ` for the symmetric 2/3-stable process, which belongs to it.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{
    integrate_semi_infinite, sin_pi, try_integrate_semi_infinite, QuadratureConfig, SemiInfinite,
};
use crate::special_fn::{gamma, gamma_upper_scaled, hyp1f1, hyp1f2};
use crate::stable_law::{Classification, StableLaw};
use crate::{Error, Result};

/// Below this argument `U(α, α, w)` is taken from its ₁F₁ combination.
const LITERAL_BRACKET_LIMIT: f64 = 2.0;

fn check_class(law: &StableLaw) -> Result<()> {
    if law.classify() == Classification::DoneyC11Dual {
        Ok(())
    } else {
        Err(Error::unsupported(alloc::format!(
            "alpha = {}, rho = {} is not in the dual Doney class 1 - rho = 1/alpha - 1",
            law.alpha(),
            law.rho()
        )))
    }
}

/// `E^1 e^{-tτ} = (sin απ/π) Γ(α) Γ(1-α, t^{1/α}) e^{t^{1/α}}`.
pub fn laplace_tau_doney(law: &StableLaw, t: f64) -> Result<f64> {
    check_class(law)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(alloc::format!(
            "t must be finite and non-negative, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let alpha = law.alpha();
    let z = t.powf(1.0 / alpha);
    Ok(sin_pi(alpha) / PI * gamma(alpha) * gamma_upper_scaled(1.0 - alpha, z)?)
}

/// `E^1 [1/(x + τ)] = ∫_0^∞ e^{-u} (sin απ/π) Γ(α) U(α, α, (u/x)^{1/α}) / x du`.
///
/// For small arguments the bracket is evaluated in the form
/// `[e^w - w^{1-α} ₁F₁(1; 2-α; w)/Γ(2-α)]/x`; beyond that through
/// `U(α, α, w) = e^w Γ(1-α, w)`, which avoids the cancellation.
pub fn stieltjes_tau_doney(law: &StableLaw, x: f64, qcfg: &QuadratureConfig) -> Result<f64> {
    check_class(law)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(alloc::format!(
            "x must be finite and positive, got {x}"
        )));
    }
    let alpha = law.alpha();
    let prefactor = sin_pi(alpha) / PI * gamma(alpha);
    let g2 = gamma(2.0 - alpha);
    let bracket = |u: f64| -> Result<f64> {
        let w = (u / x).powf(1.0 / alpha);
        if w <= LITERAL_BRACKET_LIMIT {
            Ok((w.exp() - w.powf(1.0 - alpha) * hyp1f1(1.0, 2.0 - alpha, w)? / g2) / x)
        } else {
            Ok(prefactor * gamma_upper_scaled(1.0 - alpha, w)? / x)
        }
    };
    let r = try_integrate_semi_infinite(
        |u| Ok((-u).exp() * bracket(u)?),
        &SemiInfinite::default(),
        qcfg,
    )?;
    Ok(r.value)
}

/// The bracket `sin(t^{3/2}) + t^{1/2} ₁F₂(1; 2/3, 7/6; -t³/4)/Γ(4/3)` summed
/// as a power series. Loses accuracy to cancellation once `t^{3/2}` is
/// more than about 10.
pub fn sym23_bracket_series(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("t must be finite and non-negative"));
    }
    let f = hyp1f2(1.0, 2.0 / 3.0, 7.0 / 6.0, -t * t * t / 4.0)?;
    Ok(t.powf(1.5).sin() + t.sqrt() * f / gamma(4.0 / 3.0))
}

/// The same bracket through `√3 sin(y + π/6) + Re Q(t)`, `y = t^{3/2}`, where
/// `Q(t) = -e^{-iπ/6} e^{iy} Γ(1/3, iy)/Γ(1/3)` decays like `t^{-5/2}`.
pub fn sym23_bracket(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("t must be finite and non-negative"));
    }
    let y = t.powf(1.5);
    Ok(3f64.sqrt() * (y + PI / 6.0).sin() + sym23_remainder(y)?)
}

/// `Re Q` as a function of `y = t^{3/2}`.
fn sym23_remainder(y: f64) -> Result<f64> {
    let q = -Complex64::from_polar(1.0, -PI / 6.0) * scaled_upper_gamma_imag(1.0 / 3.0, y)?
        / gamma(1.0 / 3.0);
    Ok(q.re)
}

/// Density of `τ` for the symmetric 2/3-stable process started at 1:
/// `(1/π) ∫_0^∞ e^{-tx} B(t) dt` with `B` the bracket of [`sym23_bracket`].
///
/// The oscillating part `√3 sin(t^{3/2} + π/6)` is integrated along the ray
/// `t = r e^{iπ/3}`, where `e^{i t^{3/2}} = e^{-r^{3/2}}`; the smooth
/// remainder is integrated on the real line.
pub fn density_tau_sym23(x: f64, qcfg: &QuadratureConfig) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(alloc::format!(
            "x must be finite and positive, got {x}"
        )));
    }
    let ray = Complex64::from_polar(1.0, PI / 3.0);
    // √3 e^{iπ/6} = 1 + e^{iπ/3}, times the Jacobian e^{iπ/3}.
    let c = (1.0 + ray) * ray;
    // Both integrands live on the scale min(1, 1/x).
    let scale = x.recip().min(1.0);
    let oscillating = integrate_semi_infinite(
        |r| (c * (-x * r * ray - r.powf(1.5)).exp()).im,
        &SemiInfinite::default().split_at(scale),
        qcfg,
    )?;
    let remainder = try_integrate_semi_infinite(
        |t| Ok((-t * x).exp() * sym23_remainder(t.powf(1.5))?),
        &SemiInfinite::default().tail(-2.5).split_at(scale),
        qcfg,
    )?;
    Ok(((oscillating.value + remainder.value) / PI).max(0.0))
}

const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

/// `e^{iy} Γ(a, iy)` for `y ≥ 0` and `0 < a < 1`.
fn scaled_upper_gamma_imag(a: f64, y: f64) -> Result<Complex64> {
    if y == 0.0 {
        return Ok(Complex64::new(gamma(a), 0.0));
    }
    let z = Complex64::new(0.0, y);
    let za = Complex64::from_polar(y.powf(a), PI * a / 2.0);
    if y <= 1.5 {
        // Γ(a) - z^a Σ (-z)^n / (n! (a + n))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term / a;
        for n in 1..MAX_ITER {
            term = term * (-z) / n as f64;
            let add = term / (a + n as f64);
            sum += add;
            if add.norm() < 1e-17 * sum.norm() {
                return Ok(z.exp() * (gamma(a) - za * sum));
            }
        }
    } else {
        // Legendre continued fraction, modified Lentz: Γ(a, z) = e^{-z} z^a h.
        let tiny = Complex64::new(FPMIN, 0.0);
        let mut b = z + 1.0 - a;
        let mut c = Complex64::new(1.0 / FPMIN, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = d * an + b;
            if d.norm() < FPMIN {
                d = tiny;
            }
            c = b + an / c;
            if c.norm() < FPMIN {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                return Ok(za * h);
            }
        }
    }
    Err(Error::NonConvergence {
        what: "incomplete gamma at imaginary argument",
        best: f64::NAN,
        abs_err: f64::NAN,
        evaluations: MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYM23_AT_ONE: f64 = 0.260_170_590_463_940_4;

    fn sym23() -> StableLaw {
        StableLaw::new(2.0 / 3.0, 0.5).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn doney_laplace_limits() {
        for &a in &[0.55, 2.0 / 3.0, 0.9] {
            let law = StableLaw::new(a, 2.0 - 1.0 / a).unwrap();
            // 1 - E e^{-tτ} ~ (sin απ/π) Γ(α) z^{1-α}/(1-α), z = t^{1/α}
            let t = 1e-12f64;
            let z = t.powf(1.0 / a);
            let lead = sin_pi(a) / PI * gamma(a) * z.powf(1.0 - a) / (1.0 - a);
            let v = laplace_tau_doney(&law, t).unwrap();
            assert!(((1.0 - v) / lead - 1.0).abs() < 1e-2, "alpha={a}: {v}");
            assert_eq!(laplace_tau_doney(&law, 0.0).unwrap(), 1.0);
        }
        assert!(rel(laplace_tau_doney(&sym23(), 1.0).unwrap(), SYM23_AT_ONE) < 1e-13);
        assert!(laplace_tau_doney(&StableLaw::new(0.7, 0.5).unwrap(), 1.0).is_err());
    }

    #[test]
    fn imaginary_incomplete_gamma_branches_agree() {
        // Both branches against the integral ∫_0^∞ (r + iy)^{a-1} e^{-r} dr.
        for &y in &[0.3, 1.0, 1.5, 1.6, 3.0, 20.0] {
            let g = scaled_upper_gamma_imag(1.0 / 3.0, y).unwrap();
            let cfg = QuadratureConfig::default().with_rel_tol(1e-13);
            let ends = SemiInfinite::default().split_at(y.max(1.0));
            let part = |f: fn(Complex64) -> f64| {
                integrate_semi_infinite(
                    |r| f(Complex64::new(r, y).powf(-2.0 / 3.0) * (-r).exp()),
                    &ends,
                    &cfg,
                )
                .unwrap()
                .value
            };
            let re = part(|c| c.re);
            let im = part(|c| c.im);
            assert!(
                (g.re - re).abs() < 1e-12 && (g.im - im).abs() < 1e-12,
                "y={y}: {g} vs {re} {im}"
            );
        }
    }

    #[test]
    fn bracket_representations_agree() {
        for i in 0..=40 {
            let t = 0.1 * i as f64;
            let a = sym23_bracket(t).unwrap();
            let b = sym23_bracket_series(t).unwrap();
            assert!((a - b).abs() < 1e-10, "t={t}: {a} {b}");
        }
        assert!(sym23_bracket(0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn sym23_density_reference_values() {
        let q = QuadratureConfig::default();
        for (x, v) in [
            (0.05, 0.371_197_806_604_83),
            (0.5, 0.314_884_427_250_982_5),
            (1.0, 0.238_605_614_013_931_8),
            (4.0, 0.049_331_520_799_187_29),
        ] {
            let h = density_tau_sym23(x, &q).unwrap();
            assert!(rel(h, v) < 1e-9, "x={x}: {h} {v}");
        }
    }

    #[test]
    fn sym23_density_against_literal_bracket_for_large_x() {
        // For large x only small t matter, where the power series is exact enough.
        let q = QuadratureConfig::default();
        for &x in &[4.0, 8.0] {
            let literal = try_integrate_semi_infinite(
                |t| {
                    if t * x > 60.0 {
                        return Ok(0.0);
                    }
                    Ok((-t * x).exp() * sym23_bracket_series(t)?)
                },
                &SemiInfinite::default().split_at(1.0 / x),
                &q,
            )
            .unwrap()
            .value
                / PI;
            assert!(rel(density_tau_sym23(x, &q).unwrap(), literal) < 1e-8);
        }
    }

    #[test]
    fn sym23_density_mass_and_transform() {
        let q = QuadratureConfig::default();
        // h(x) ~ x^{-3/2} at infinity.
        let ends = SemiInfinite::default().tail(-1.5);
        let mass = try_integrate_semi_infinite(|x| density_tau_sym23(x, &q), &ends, &q)
            .unwrap()
            .value;
        assert!((mass - 1.0).abs() < 1e-7, "{mass}");
        let lt =
            try_integrate_semi_infinite(|x| Ok((-x).exp() * density_tau_sym23(x, &q)?), &ends, &q)
                .unwrap()
                .value;
        assert!(rel(lt, SYM23_AT_ONE) < 1e-8, "{lt}");
        let d = |x| density_tau_sym23(x, &q).unwrap();
        assert!(d(1e3) < d(1e2) && d(1e2) < d(10.0));
    }

    #[test]
    fn stieltjes_transform_consistency() {
        let q = QuadratureConfig::default();
        let law = sym23();
        for &x in &[0.3, 1.0, 4.0] {
            let direct = stieltjes_tau_doney(&law, x, &q).unwrap();
            let oracle = try_integrate_semi_infinite(
                |s| Ok(density_tau_sym23(s, &q)? / (x + s)),
                &SemiInfinite::default().tail(-2.5),
                &q,
            )
            .unwrap()
            .value;
            assert!(rel(direct, oracle) < 1e-8, "x={x}: {direct} {oracle}");
        }
        let big = 1e6;
        assert!((big * stieltjes_tau_doney(&law, big, &q).unwrap() - 1.0).abs() < 1e-2);
    }
}
