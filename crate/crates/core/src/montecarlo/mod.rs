//! Monte Carlo oracle: samplers for stable increments, `N(γ)`, `M_{α,ρ}` and
//! exit times, with two-sample Kolmogorov–Smirnov checks of the
//! multiplicative convolution identities
//! `τ ≙ M_{α,ρ} × N(1/α)` (`1 < α < 2`) and `τ × N(α)^α ≙ M_{α,ρ}` (`α < 1`).
//!
//! Every draw comes from an [`RngStream`], a ChaCha8 generator keyed by
//! `(seed, stream_id)`, so runs are bit-reproducible and parallel workers on
//! distinct streams can be merged in stream order.

mod inverse_cdf;
mod paths;
mod samplers;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use inverse_cdf::{InverseCdf, TableConfig};
pub use paths::{simulate_exit_time, simulate_exit_time_halved, PathConfig};
pub use samplers::{sample_positive_stable, sample_stable_increment, StableSampler};

use crate::exit_law::{ExitLaw, MDensity};
use crate::{CaseRecord, Error, Result, StableLaw, VerificationReport};

/// Reproducible random stream keyed by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.sample(Open01)
    }

    /// Standard exponential.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PoolMeta {
    pub seed: u64,
    pub stream_id: u64,
    pub n: usize,
    pub step: Option<f64>,
    pub start: Option<f64>,
    pub horizon: Option<f64>,
    /// Paths that had not exited by the horizon; their value is the horizon.
    pub censored: usize,
}

impl PoolMeta {
    fn for_stream(rng: &RngStream, n: usize) -> Self {
        PoolMeta {
            seed: rng.seed,
            stream_id: rng.stream_id,
            n,
            ..PoolMeta::default()
        }
    }
}

/// Positive i.i.d. draws of one law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePool {
    pub values: Vec<f64>,
    pub law_tag: String,
    pub meta: PoolMeta,
}

impl SamplePool {
    fn new(values: Vec<f64>, law_tag: String, mut meta: PoolMeta) -> Self {
        meta.n = values.len();
        SamplePool {
            values,
            law_tag,
            meta,
        }
    }

    /// A pool of externally produced draws; all must be finite and positive.
    pub fn from_values(values: Vec<f64>, law_tag: &str) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::domain(format!(
                "pool values must be finite and positive, got {v}"
            )));
        }
        Ok(Self::new(values, law_tag.into(), PoolMeta::default()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Concatenates pools in the given order, e.g. the per-stream pools of a
    /// parallel run sorted by `stream_id`. Seed and stream come from the first
    /// part; sizes and censor counts add up.
    pub fn concat(parts: &[SamplePool]) -> Result<SamplePool> {
        let first = parts.first().ok_or(Error::EmptyPool)?;
        if let Some(p) = parts.iter().find(|p| p.law_tag != first.law_tag) {
            return Err(Error::domain(format!(
                "cannot merge pools of {} and {}",
                first.law_tag, p.law_tag
            )));
        }
        let mut meta = first.meta.clone();
        meta.censored = parts.iter().map(|p| p.meta.censored).sum();
        let values = parts
            .iter()
            .flat_map(|p| p.values.iter().copied())
            .collect();
        Ok(Self::new(values, first.law_tag.clone(), meta))
    }

    /// Draws from an inverse-CDF table.
    pub fn from_table(table: &InverseCdf, n: usize, law_tag: &str, rng: &mut RngStream) -> Self {
        let values = (0..n).map(|_| table.sample(rng)).collect();
        Self::new(values, law_tag.into(), PoolMeta::for_stream(rng, n))
    }
}

/// Inverse-CDF table of `m_{α,ρ}` on `cfg`.
pub fn m_table(md: &MDensity, cfg: &TableConfig) -> Result<InverseCdf> {
    InverseCdf::tabulate(|x| md.m_density(x), cfg, 0.0, Some(md.tail_exponent()))
}

/// Inverse-CDF table of the exit time `τ` on `cfg` scaled by `start^α`.
/// The density has a finite limit at 0 and decays like `s^{-1-ρ}`.
pub fn tau_table(exit: &ExitLaw, cfg: &TableConfig) -> Result<InverseCdf> {
    let law = exit.law();
    let cfg = cfg.scaled(exit.start().powf(law.alpha()));
    InverseCdf::tabulate(|s| exit.density_tau(s), &cfg, 0.0, Some(-1.0 - law.rho()))
}

#[allow(non_snake_case)]
pub fn sample_M(md: &MDensity, n: usize, rng: &mut RngStream) -> Result<SamplePool> {
    let tag = m_tag(md.law());
    if n == 0 {
        return Ok(SamplePool::new(
            Vec::new(),
            tag,
            PoolMeta::for_stream(rng, 0),
        ));
    }
    let table = m_table(md, &TableConfig::default())?;
    Ok(SamplePool::from_table(&table, n, &tag, rng))
}

/// Exit times drawn by inverting the tabulated law of `τ`.
pub fn sample_tau(exit: &ExitLaw, n: usize, rng: &mut RngStream) -> Result<SamplePool> {
    let law = exit.law();
    let tag = format!(
        "tau(alpha={},rho={},start={})",
        law.alpha(),
        law.rho(),
        exit.start()
    );
    if n == 0 {
        return Ok(SamplePool::new(
            Vec::new(),
            tag,
            PoolMeta::for_stream(rng, 0),
        ));
    }
    let table = tau_table(exit, &TableConfig::default())?;
    let mut pool = SamplePool::from_table(&table, n, &tag, rng);
    pool.meta.start = Some(exit.start());
    Ok(pool)
}

fn m_tag(law: &StableLaw) -> String {
    format!("M(alpha={},rho={})", law.alpha(), law.rho())
}

/// Mean of `e^{-tX}` over the pool and its standard error. Censored exit
/// times enter at the horizon, so the value is then an upper bound.
pub fn empirical_laplace(pool: &SamplePool, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "t must be finite and non-negative, got {t}"
        )));
    }
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    if t == 0.0 {
        return Ok((1.0, 0.0));
    }
    let n = pool.len() as f64;
    let mean = pool.values.iter().map(|v| (-t * v).exp()).sum::<f64>() / n;
    if pool.len() < 2 {
        return Ok((mean, 0.0));
    }
    let ss = pool
        .values
        .iter()
        .map(|v| {
            let d = (-t * v).exp() - mean;
            d * d
        })
        .sum::<f64>();
    Ok((mean, (ss / (n - 1.0) / n).sqrt()))
}

fn sorted(pool: &SamplePool) -> Vec<f64> {
    let mut v = pool.values.clone();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &SamplePool, b: &SamplePool) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPool);
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_against_cdf<F: FnMut(f64) -> f64>(pool: &SamplePool, mut cdf: F) -> Result<f64> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let v = sorted(pool);
    let n = v.len() as f64;
    Ok(v.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    }))
}

/// Settings of [`convolution_check_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionConfig {
    pub table: TableConfig,
    /// Skeleton step for the `α < 1` check; the horizon is the default one.
    pub step: f64,
}

impl Default for ConvolutionConfig {
    fn default() -> Self {
        ConvolutionConfig {
            table: TableConfig::default(),
            step: 1e-3,
        }
    }
}

/// KS threshold: 0.015 at `n = 10⁵` for the tabulated check and 0.05 at
/// `n = 10⁴` for the path-based one, scaled like `n^{-1/2}`.
pub fn convolution_threshold(alpha: f64, n: usize) -> f64 {
    if alpha > 1.0 {
        0.015 * (1e5 / n as f64).sqrt()
    } else {
        0.05 * (1e4 / n as f64).sqrt()
    }
}

pub fn convolution_check(
    law: &StableLaw,
    n: usize,
    rng: &mut RngStream,
) -> Result<VerificationReport> {
    convolution_check_with(law, n, &ConvolutionConfig::default(), rng)
}

/// For `1 < α < 2` compares exit times drawn from the tabulated density of
/// `τ` (start 1) with products `M_{α,ρ}·N(1/α)`. For `α < 1` compares
/// `τ̂·N(α)^α`, with `τ̂` from random-walk skeletons, against `M_{α,ρ}`.
pub fn convolution_check_with(
    law: &StableLaw,
    n: usize,
    cfg: &ConvolutionConfig,
    rng: &mut RngStream,
) -> Result<VerificationReport> {
    let alpha = law.alpha();
    if alpha == 1.0 || alpha >= 2.0 {
        return Err(Error::unsupported(
            "the convolution identities need alpha in (0, 1) or (1, 2)",
        ));
    }
    if n == 0 {
        return Err(Error::EmptyPool);
    }
    let md = MDensity::new(*law)?;
    let m = SamplePool::from_table(&m_table(&md, &cfg.table)?, n, &m_tag(law), rng);
    let threshold = convolution_threshold(alpha, n);
    let mut report = VerificationReport::new("convolution");
    let mut params = alloc::vec![("alpha", alpha), ("rho", law.rho()), ("n", n as f64)];
    let ks = if alpha > 1.0 {
        let exit = ExitLaw::new(*law)?;
        let tau = SamplePool::from_table(&tau_table(&exit, &cfg.table)?, n, "tau", rng);
        let prod: Vec<f64> = m
            .values
            .iter()
            .map(|&x| x * samplers::draw_positive_stable(1.0 / alpha, rng))
            .collect();
        ks_two_sample(&tau, &SamplePool::from_values(prod, "M x N")?)?
    } else {
        let pc = PathConfig::with_default_horizon(law, cfg.step, 1.0)?;
        let tau = simulate_exit_time(law, &pc, n, rng)?;
        let censored = tau.meta.censored as f64 / n as f64;
        params.push(("step", pc.step));
        params.push(("horizon", pc.horizon));
        params.push(("censored_fraction", censored));
        if censored >= 0.01 {
            report.warn(format!(
                "{:.2}% of exit-time paths were censored at the horizon {}",
                100.0 * censored,
                pc.horizon
            ));
        }
        let prod: Vec<f64> = tau
            .values
            .iter()
            .map(|&t| t * samplers::draw_positive_stable(alpha, rng).powf(alpha))
            .collect();
        ks_two_sample(&SamplePool::from_values(prod, "tau x N^alpha")?, &m)?
    };
    report.push(CaseRecord::with_outcome(
        "convolution_ks",
        &params,
        ks,
        0.0,
        threshold,
        ks < threshold,
    ));
    Ok(report)
}
