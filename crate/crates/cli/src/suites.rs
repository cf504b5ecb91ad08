//! Verification suites. Each one checks an identity or an independent oracle
//! over a fixed grid and returns a [`VerificationReport`].

use std::f64::consts::PI;

use stable_exit_core::exit_law::{density_tau_sym23, laplace_tau_doney, ExitLaw, MDensity};
use stable_exit_core::kappa::{kappa_closed_form, KappaEvaluator, RationalAlphaPolicy};
use stable_exit_core::montecarlo::{
    convolution_check_with, empirical_laplace, simulate_exit_time_halved, ConvolutionConfig,
    PathConfig, SamplePool,
};
use stable_exit_core::numerics::{sum_series, try_integrate_semi_infinite, SemiInfinite};
use stable_exit_core::special_fn::{
    gamma, gamma_upper_scaled, subordinator_density, subordinator_density_with, DensityMethod,
};
use stable_exit_core::{
    CaseRecord, QuadratureConfig, Result, SeriesConfig, StableLaw, VerificationReport,
};

use crate::parallel;

fn law(alpha: f64, rho: f64) -> Result<StableLaw> {
    StableLaw::new(alpha, rho)
}

fn rel_case(name: &str, params: &[(&str, f64)], lhs: f64, rhs: f64, rel_tol: f64) -> CaseRecord {
    CaseRecord::compare(name, params, lhs, rhs, rel_tol * rhs.abs())
}

/// Laws with `α ∈ {0.6, 1.3, 1.7}`, two admissible `ρ` each.
pub fn stieltjes_laws() -> Vec<(f64, f64)> {
    vec![
        (0.6, 0.3),
        (0.6, 0.8),
        (1.3, 0.4),
        (1.3, 0.6),
        (1.7, 0.45),
        (1.7, 0.55),
    ]
}

/// `∫ l(x)/(x+θ) dx = 1/κ(1, θ)`, relative 1e-6.
pub fn stieltjes() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("stieltjes");
    let q = QuadratureConfig::default();
    for (a, p) in stieltjes_laws() {
        let kev = KappaEvaluator::new(law(a, p)?)?;
        for theta in [0.1, 0.5, 2.0, 10.0] {
            let lhs = kev.inv_kappa_via_stieltjes(theta, &q)?;
            let rhs = 1.0 / kev.kappa(theta)?;
            r.push(rel_case(
                "stieltjes_inverse_kappa",
                &[("alpha", a), ("rho", p), ("theta", theta)],
                lhs,
                rhs,
                1e-6,
            ));
        }
    }
    Ok(r)
}

/// Laws of the dual Doney class `1 - ρ = 1/α - 1`.
pub fn doney_laws() -> Vec<(f64, f64)> {
    [0.55, 2.0 / 3.0, 0.9]
        .into_iter()
        .map(|a| (a, 2.0 - 1.0 / a))
        .collect()
}

/// General Laplace transform (quadrature over the series `κ`) against the
/// incomplete-gamma closed form, relative 1e-6.
pub fn doney() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("doney");
    for (a, p) in doney_laws() {
        let l = law(a, p)?;
        let exit = ExitLaw::new(l)?;
        for t in [0.1, 1.0, 10.0] {
            r.push(rel_case(
                "laplace_general_vs_closed_form",
                &[("alpha", a), ("rho", p), ("t", t)],
                exit.laplace_tau(t)?,
                laplace_tau_doney(&l, t)?,
                1e-6,
            ));
        }
    }
    Ok(r)
}

/// Series `κ` against the closed forms: spectrally negative (`1 + θ`) and the
/// dual Doney class.
pub fn closed_forms() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("closed-form");
    let mut laws: Vec<(f64, f64)> = [1.2, 1.5, 1.8].into_iter().map(|a| (a, 1.0 / a)).collect();
    laws.extend(doney_laws());
    for (a, p) in laws {
        let l = law(a, p)?;
        let kev = KappaEvaluator::new(l)?;
        for theta in [0.1, 0.3, 0.7, 2.0, 5.0, 0.9, 0.95, 1.0, 1.05, 1.1] {
            let exact = kappa_closed_form(&l, theta).expect("closed-form law");
            let tol = if (0.9..=1.1).contains(&theta) {
                1e-6
            } else {
                1e-8
            };
            r.push(rel_case(
                "kappa_series_vs_closed_form",
                &[("alpha", a), ("rho", p), ("theta", theta)],
                kev.kappa(theta)?,
                exact,
                tol,
            ));
        }
    }
    Ok(r)
}

/// Every law used by the deterministic suites.
pub fn test_laws() -> Vec<(f64, f64)> {
    let mut v = stieltjes_laws();
    v.extend([1.2, 1.5, 1.8].into_iter().map(|a| (a, 1.0 / a)));
    v.extend(doney_laws());
    v.extend([(1.0, 0.5), (0.75, 0.5), (1.5, 0.5), (0.7, 0.5)]);
    v
}

/// `κ(1, θ) = θ^{αρ} κ(1, 1/θ)` for `θ ∈ {2, 5, 10}`, relative 1e-10.
///
/// The right side sums the series at `1/θ`. The left side is the evaluator's
/// value and, where the Stieltjes density exists (`αρ < 1`), also the
/// reciprocal of the Stieltjes integral at `θ`, which does not go through
/// the scaling relation for the law itself. Resonant terms at rational `α`
/// use their finite parts.
pub fn scaling() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("scaling");
    let q = QuadratureConfig::default().with_rel_tol(1e-12);
    for (a, p) in test_laws() {
        // Averaging at α(1 ± δ) loses about 1e-10 to cancellation at α = 1.
        let kev = KappaEvaluator::with_options(
            law(a, p)?,
            SeriesConfig::default(),
            RationalAlphaPolicy::PairedCancellation,
            1e-7,
        )?;
        for theta in [2.0f64, 5.0, 10.0] {
            let params = [("alpha", a), ("rho", p), ("theta", theta)];
            let rhs = theta.powf(a * p) * kev.kappa(1.0 / theta)?;
            r.push(rel_case(
                "kappa_scaling",
                &params,
                kev.kappa(theta)?,
                rhs,
                1e-10,
            ));
            if a * p < 1.0 - 1e-9 {
                r.push(rel_case(
                    "kappa_scaling_stieltjes",
                    &params,
                    1.0 / kev.inv_kappa_via_stieltjes(theta, &q)?,
                    rhs,
                    1e-10,
                ));
            }
        }
    }
    Ok(r)
}

/// Laws for which `m_{α,ρ}` is normalized.
pub fn m_laws() -> Vec<(f64, f64)> {
    vec![
        (0.6, 0.3),
        (0.6, 0.8),
        (0.7, 0.5),
        (1.0, 0.5),
        (1.3, 0.4),
        (1.5, 0.5),
        (1.5, 2.0 / 3.0),
        (1.7, 0.55),
    ]
}

/// `E e^{-0·τ} = 1` exactly and unit mass of `m`, the Cauchy exit density and
/// the symmetric 2/3 exit density.
pub fn normalizations() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("normalization");
    let q = QuadratureConfig::default();
    for (a, p) in test_laws() {
        let v = ExitLaw::new(law(a, p)?)?.laplace_tau(0.0)?;
        r.push(CaseRecord::compare(
            "laplace_at_zero",
            &[("alpha", a), ("rho", p)],
            v,
            1.0,
            0.0,
        ));
    }
    for (a, p) in m_laws() {
        let md = MDensity::new(law(a, p)?)?;
        let ends = SemiInfinite::default().tail(md.tail_exponent());
        let mass = try_integrate_semi_infinite(|x| md.m_density(x), &ends, &q)?.value;
        r.push(CaseRecord::compare(
            "m_mass",
            &[("alpha", a), ("rho", p)],
            mass,
            1.0,
            1e-6,
        ));
    }
    let cauchy = ExitLaw::new(law(1.0, 0.5)?)?;
    let ends = SemiInfinite::default().tail(-1.5);
    let mass = try_integrate_semi_infinite(|s| cauchy.density_tau(s), &ends, &q)?.value;
    r.push(CaseRecord::compare(
        "cauchy_exit_density_mass",
        &[("alpha", 1.0), ("rho", 0.5)],
        mass,
        1.0,
        1e-5,
    ));
    let mass = try_integrate_semi_infinite(|s| density_tau_sym23(s, &q), &ends, &q)?.value;
    r.push(CaseRecord::compare(
        "symmetric_two_thirds_exit_density_mass",
        &[("alpha", 2.0 / 3.0), ("rho", 0.5)],
        mass,
        1.0,
        1e-5,
    ));
    Ok(r)
}

/// Laplace transform of the symmetric 2/3 exit density against
/// `(√3/(2π)) Γ(2/3) Γ(1/3, t^{3/2}) e^{t^{3/2}}`, relative 1e-4.
pub fn sym23_transform() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("symmetric-two-thirds");
    let q = QuadratureConfig::default();
    let ends = SemiInfinite::default().tail(-1.5);
    for t in [0.5, 1.0, 2.0] {
        let lhs = try_integrate_semi_infinite(
            |s| Ok((-t * s).exp() * density_tau_sym23(s, &q)?),
            &ends,
            &q,
        )?
        .value;
        let rhs = 3f64.sqrt() / (2.0 * PI)
            * gamma(2.0 / 3.0)
            * gamma_upper_scaled(1.0 / 3.0, t.powf(1.5))?;
        r.push(rel_case("density_transform", &[("t", t)], lhs, rhs, 1e-4));
    }
    Ok(r)
}

/// `η_{1/2}` by the general algorithms against the Lévy closed form, and the
/// Laplace identity `∫ e^{-sx} η_γ(1, x) dx = e^{-s^γ}`.
pub fn subordinator() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("subordinator");
    for x in [0.1f64, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let method = if x > 1.5 {
            DensityMethod::SeriesLargeX
        } else {
            DensityMethod::IntegralSmallX
        };
        let exact = x.powf(-1.5) * (-0.25 / x).exp() / (2.0 * PI.sqrt());
        r.push(rel_case(
            "half_stable_density",
            &[
                ("x", x),
                (
                    "series",
                    (method == DensityMethod::SeriesLargeX) as u8 as f64,
                ),
            ],
            subordinator_density_with(method, 0.5, 1.0, x)?,
            exact,
            1e-8,
        ));
    }
    let q = QuadratureConfig::default().with_rel_tol(1e-10);
    for g in [1.0 / 3.0, 2.0 / 3.0] {
        for s in [0.5, 1.0, 4.0] {
            let ends = SemiInfinite::default().tail(-1.0 - g).split_at(1.0 / s);
            let lhs = try_integrate_semi_infinite(
                |x| Ok((-s * x).exp() * subordinator_density(g, 1.0, x)?),
                &ends,
                &q,
            )?
            .value;
            r.push(CaseRecord::compare(
                "subordinator_laplace",
                &[("gamma", g), ("s", s)],
                lhs,
                (-s.powf(g)).exp(),
                1e-6,
            ));
        }
    }
    Ok(r)
}

/// At rational `α = 3/4` the Perturb policy agrees with the mean of
/// evaluations at `α ± 1e-5` to relative 1e-4.
pub fn rational_continuity() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("rational-continuity");
    let (a, p, d) = (0.75, 0.5, 1e-5);
    let at = |alpha: f64| {
        KappaEvaluator::with_options(
            law(alpha, p)?,
            SeriesConfig::default(),
            RationalAlphaPolicy::Perturb,
            1e-7,
        )
    };
    let (mid, lo, hi) = (at(a)?, at(a - d)?, at(a + d)?);
    for theta in [0.3, 0.7] {
        let mean = 0.5 * (lo.kappa(theta)? + hi.kappa(theta)?);
        r.push(rel_case(
            "kappa_rational_continuity",
            &[("alpha", a), ("theta", theta)],
            mid.kappa(theta)?,
            mean,
            1e-4,
        ));
    }
    Ok(r)
}

/// `Σ p^k sin(kφ)/k = arctan(p sin φ/(1 - p cos φ))` and
/// `Σ p^k cos(kφ)/k = -½ log(1 - 2p cos φ + p²)` on a 5×5 grid, 1e-12.
pub fn trig_series() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("trig-series");
    let cfg = SeriesConfig::default();
    for p in [0.1f64, 0.3, 0.5, 0.7, 0.9] {
        for j in 1..=5 {
            let phi = PI * j as f64 / 3.0;
            let sin_sum = sum_series(
                |k| p.powi(k as i32) * (k as f64 * phi).sin() / k as f64,
                &cfg,
            )?
            .value;
            let cos_sum = sum_series(
                |k| p.powi(k as i32) * (k as f64 * phi).cos() / k as f64,
                &cfg,
            )?
            .value;
            let params = [("p", p), ("phi", phi)];
            r.push(CaseRecord::compare(
                "sine_series_arctan",
                &params,
                sin_sum,
                (p * phi.sin() / (1.0 - p * phi.cos())).atan(),
                1e-12,
            ));
            r.push(CaseRecord::compare(
                "cosine_series_log",
                &params,
                cos_sum,
                -0.5 * (1.0 - 2.0 * p * phi.cos() + p * p).ln(),
                1e-12,
            ));
        }
    }
    Ok(r)
}

/// `(ρ, name)` of the laws in the Monte Carlo Laplace check at `α = 3/2`.
pub fn montecarlo_laws() -> Vec<(f64, &'static str)> {
    vec![(0.5, "symmetric"), (1.0 - 1.0 / 1.5, "spectrally_positive")]
}

/// Empirical `E^1 e^{-τ̂}` from random-walk skeletons at step `h` against
/// `laplace_tau(1)` (and `e^{-1}` for the spectrally positive control).
///
/// The tolerance is `3·SE + b`, where the bias allowance
/// `b = |est(h) - est(h/2)|/(1 - 2^{-1/2})` extrapolates the coupled
/// step-halving difference at an `h^{1/2}` rate.
pub fn montecarlo(n: usize, step: f64, seed: u64) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("montecarlo");
    let alpha = 1.5;
    for (i, (rho, _)) in montecarlo_laws().into_iter().enumerate() {
        let l = law(alpha, rho)?;
        let exact = if i == 1 {
            (-1.0f64).exp()
        } else {
            ExitLaw::new(l)?.laplace_tau(1.0)?
        };
        let pc = PathConfig::with_default_horizon(&l, step, 1.0)?;
        // Laws get disjoint stream ranges.
        let stream_seed = seed.wrapping_add(i as u64 * 0x9E37_79B9_7F4A_7C15);
        let parts = parallel::map_streams(stream_seed, n, |k, rng| {
            simulate_exit_time_halved(&l, &pc, k, rng)
        })?;
        let (coarse, fine): (Vec<SamplePool>, Vec<SamplePool>) = parts.into_iter().unzip();
        let (coarse, fine) = (SamplePool::concat(&coarse)?, SamplePool::concat(&fine)?);
        let (est, se) = empirical_laplace(&coarse, 1.0)?;
        let (est_half, _) = empirical_laplace(&fine, 1.0)?;
        let bias = (est - est_half).abs() / (1.0 - 0.5f64.sqrt());
        let censored = coarse.meta.censored as f64 / n as f64;
        if censored >= 0.01 {
            r.warn(format!(
                "rho = {rho}: {:.2}% of paths censored at horizon {} (transform error below e^-horizon)",
                100.0 * censored,
                pc.horizon
            ));
        }
        let tol = 3.0 * se + bias;
        r.push(CaseRecord::with_outcome(
            "montecarlo_laplace",
            &[
                ("alpha", alpha),
                ("rho", rho),
                ("n", n as f64),
                ("step", step),
                ("t", 1.0),
                ("stderr", se),
                ("estimate_half_step", est_half),
                ("bias_allowance", bias),
                ("censored_fraction", censored),
            ],
            est,
            exact,
            tol,
            (est - exact).abs() <= tol,
        ));
    }
    Ok(r)
}

/// The default convolution laws: `(α, ρ, n scale)`; the path-based `α < 1`
/// check uses a tenth of the draws.
pub fn convolution_laws() -> Vec<(f64, f64, f64)> {
    vec![(1.5, 0.5, 1.0), (1.5, 2.0 / 3.0, 1.0), (0.7, 0.5, 0.1)]
}

/// KS checks of the multiplicative convolution identities for one law.
pub fn convolution_one(
    l: &StableLaw,
    n: usize,
    step: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let cfg = ConvolutionConfig {
        step,
        ..ConvolutionConfig::default()
    };
    let mut rng = stable_exit_core::montecarlo::RngStream::new(seed, 0);
    convolution_check_with(l, n, &cfg, &mut rng)
}

/// All default convolution laws with `n` draws (`n/10` for `α < 1`).
pub fn convolution(n: usize, step: f64, seed: u64) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("convolution");
    for (i, (a, p, scale)) in convolution_laws().into_iter().enumerate() {
        let k = ((n as f64 * scale).round() as usize).max(1);
        r.merge(convolution_one(
            &law(a, p)?,
            k,
            step,
            seed.wrapping_add(i as u64),
        )?);
    }
    Ok(r)
}
