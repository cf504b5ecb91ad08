//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! Semi-infinite integrals are split at a scale point `c`. The piece on
//! `(0, c)` uses `x = c·y^{1/(1+p)}`, which removes an `x^p` endpoint
//! singularity; the piece on `(c, ∞)` uses `x = c·v^{-1/s}` with
//! `s = -1 - q`, which turns an `x^q` tail into a bounded integrand.
//! Exponentially decaying tails are handled by the default `q = -2`.

use alloc::collections::BinaryHeap;
use alloc::format;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::TransformResult;
use crate::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_774_636,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule, at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and limits for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Panels whose error estimate falls below this fraction of the running
    /// total are retired instead of refined.
    pub tail_cutoff_ratio: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            tail_cutoff_ratio: 1e-16,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.tail_cutoff_ratio > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Endpoint behaviour of an integrand on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiInfinite {
    /// `p` with `f(x) ~ x^p` as `x → 0`; must exceed -1.
    pub origin_exponent: f64,
    /// `q` with `f(x) ~ x^q` as `x → ∞`; must be below -1.
    pub tail_exponent: f64,
    /// Split point between the origin and tail maps.
    pub split: f64,
}

impl Default for SemiInfinite {
    fn default() -> Self {
        SemiInfinite {
            origin_exponent: 0.0,
            tail_exponent: -2.0,
            split: 1.0,
        }
    }
}

impl SemiInfinite {
    pub fn origin(mut self, p: f64) -> Self {
        self.origin_exponent = p;
        self
    }

    pub fn tail(mut self, q: f64) -> Self {
        self.tail_exponent = q;
        self
    }

    pub fn split_at(mut self, c: f64) -> Self {
        self.split = c;
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((value, err))
}

/// Adaptive integration of `g` over the union of `intervals`.
fn adaptive<F>(
    mut g: F,
    intervals: &[(f64, f64)],
    cfg: &QuadratureConfig,
) -> Result<TransformResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    let mut total = 0.0;
    let mut err = 0.0;
    for &(a, b) in intervals {
        let (value, e) = gk21(&mut g, a, b)?;
        evaluations += 21;
        total += value;
        err += e;
        heap.push(Panel {
            a,
            b,
            value,
            err: e,
        });
    }
    let mut retired = 0.0;
    let mut retired_err = 0.0;
    let mut panels = intervals.len();
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= target || heap.is_empty() {
            // Re-sum to shed the drift of the running totals.
            let value = retired + heap.iter().map(|p| p.value).sum::<f64>();
            let abs_err = retired_err + heap.iter().map(|p| p.err).sum::<f64>();
            return Ok(TransformResult {
                value,
                abs_err_estimate: abs_err,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = !(mid > worst.a && mid < worst.b);
        if panels >= cfg.max_subdivisions || too_narrow {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                best: total,
                abs_err: err,
                evaluations,
            });
        }
        let (v1, e1) = gk21(&mut g, worst.a, mid)?;
        let (v2, e2) = gk21(&mut g, mid, worst.b)?;
        evaluations += 42;
        panels += 1;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        let cutoff = cfg.tail_cutoff_ratio * total.abs();
        for (a, b, value, e) in [(worst.a, mid, v1, e1), (mid, worst.b, v2, e2)] {
            if e < cutoff {
                retired += value;
                retired_err += e;
            } else {
                heap.push(Panel {
                    a,
                    b,
                    value,
                    err: e,
                });
            }
        }
    }
}

/// [`integrate`] for integrands that can fail; the first error is returned.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<TransformResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let r = integrate(|x| capture(f(x), &mut failure), a, b, cfg);
    failure.map_or(r, Err)
}

/// [`integrate_semi_infinite`] for integrands that can fail.
pub fn try_integrate_semi_infinite<F>(
    mut f: F,
    ends: &SemiInfinite,
    cfg: &QuadratureConfig,
) -> Result<TransformResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let r = integrate_semi_infinite(|x| capture(f(x), &mut failure), ends, cfg);
    failure.map_or(r, Err)
}

fn capture(v: Result<f64>, failure: &mut Option<Error>) -> f64 {
    match v {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    }
}

fn checked(x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!(
            "integrand is not finite at x = {x:e}"
        )))
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<TransformResult>
where
    F: FnMut(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(TransformResult::exact(0.0));
    }
    adaptive(|x| checked(x, f(x)), &[(a, b)], cfg)
}

/// Integrates `f` over `(0, ∞)` using the endpoint hints in `ends`.
pub fn integrate_semi_infinite<F>(
    mut f: F,
    ends: &SemiInfinite,
    cfg: &QuadratureConfig,
) -> Result<TransformResult>
where
    F: FnMut(f64) -> f64,
{
    let p = ends.origin_exponent;
    let q = ends.tail_exponent;
    let c = ends.split;
    if !(p > -1.0) {
        return Err(Error::domain(format!(
            "origin exponent must exceed -1, got {p}"
        )));
    }
    if !(q < -1.0) {
        return Err(Error::domain(format!(
            "tail exponent must be below -1, got {q}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain("split point must be positive and finite"));
    }
    let e = 1.0 / (1.0 + p);
    let s = -1.0 - q;
    // u in (0, 1): origin piece with y = u; u in (1, 2): tail piece with v = 2 - u.
    let g = |u: f64| -> Result<f64> {
        if u < 1.0 {
            let y = u;
            let x = c * y.powf(e);
            if x == 0.0 {
                return Ok(0.0);
            }
            checked(x, f(x) * x * e / y)
        } else {
            let v = 2.0 - u;
            let x = c * v.powf(-1.0 / s);
            if !x.is_finite() {
                return Ok(0.0);
            }
            let fx = f(x);
            if fx == 0.0 {
                return Ok(0.0);
            }
            checked(x, fx * x / (s * v))
        }
    };
    adaptive(g, &[(0.0, 1.0), (1.0, 2.0)], cfg)
}
