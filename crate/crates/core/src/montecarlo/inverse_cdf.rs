use alloc::format;
use alloc::vec::Vec;

use super::RngStream;
use crate::{Error, Result};

/// Grid used to tabulate a distribution function on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableConfig {
    pub nodes: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            nodes: 2048,
            lo: 1e-6,
            hi: 1e6,
        }
    }
}

impl TableConfig {
    /// The same node count on `[lo·c, hi·c]`.
    pub fn scaled(&self, c: f64) -> Self {
        TableConfig {
            lo: self.lo * c,
            hi: self.hi * c,
            ..*self
        }
    }
}

/// Numerical distribution function of a positive random variable, built from
/// its density on a log grid, with power-law tails outside the grid.
///
/// Inside the grid `ln x` is a monotone cubic (Fritsch–Carlson) function of
/// the CDF; below the grid the density is taken as `c x^p`, above it as
/// `c x^q`, matched to the end nodes.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    ln_x: Vec<f64>,
    cdf: Vec<f64>,
    slope: Vec<f64>,
    left_power: f64,
    right_power: f64,
    mass: f64,
}

impl InverseCdf {
    /// Tabulates `density`, whose behaviour is `x^left` near 0 and `x^right`
    /// at infinity (`left > -1`, `right < -1`). When `right` is `None` it is
    /// fitted to the last decade of the grid.
    pub fn tabulate<F>(
        mut density: F,
        cfg: &TableConfig,
        left: f64,
        right: Option<f64>,
    ) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if cfg.nodes < 16 || !(cfg.lo > 0.0 && cfg.hi > cfg.lo * 100.0) || !(left > -1.0) {
            return Err(Error::domain(format!("invalid inverse-CDF grid {cfg:?}")));
        }
        let n = cfg.nodes;
        let (a, b) = (cfg.lo.ln(), cfg.hi.ln());
        let du = (b - a) / (n - 1) as f64;
        let u: Vec<f64> = (0..n).map(|i| a + du * i as f64).collect();
        // g(u) = f(e^u) e^u is the density of ln X.
        let g = u
            .iter()
            .map(|&ui| density(ui.exp()).map(|f| f * ui.exp()))
            .collect::<Result<Vec<f64>>>()?;
        if g.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || (right.is_none() && g[n - 1] <= 0.0) {
            return Err(Error::domain(
                "density must be finite and non-negative on the grid",
            ));
        }
        let right = match right {
            Some(q) => q,
            None => {
                let k = ((10f64.ln() / du).round() as usize).min(n - 1);
                (g[n - 1] / g[n - 1 - k]).ln() / (u[n - 1] - u[n - 1 - k]) - 1.0
            }
        };
        if !(right < -1.0) {
            return Err(Error::domain(format!(
                "right tail exponent {right} is not integrable"
            )));
        }
        let left_power = left + 1.0;
        let right_power = right + 1.0;
        let mut cdf = Vec::with_capacity(n);
        cdf.push(g[0] / left_power);
        for i in 1..n {
            let prev = cdf[i - 1];
            cdf.push(prev + 0.5 * du * (g[i - 1] + g[i]));
        }
        let mass = cdf[n - 1] - g[n - 1] / right_power;
        for c in &mut cdf {
            *c /= mass;
        }
        // Drop nodes where the CDF does not increase (density underflow).
        let mut ln_x = Vec::with_capacity(n);
        let mut f = Vec::with_capacity(n);
        for i in 0..n {
            if f.last().is_none_or(|&l| cdf[i] > l) {
                f.push(cdf[i]);
                ln_x.push(u[i]);
            }
        }
        if f.len() < 2 || !(mass > 0.0) {
            return Err(Error::domain(
                "tabulated distribution function is degenerate",
            ));
        }
        let slope = pchip_slopes(&f, &ln_x);
        Ok(InverseCdf {
            ln_x,
            cdf: f,
            slope,
            left_power,
            right_power,
            mass,
        })
    }

    /// Integral of the supplied density; 1 for a normalized density.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.cdf.len();
        let (f0, fn_) = (self.cdf[0], self.cdf[n - 1]);
        if p <= f0 {
            return self.ln_x[0].exp() * (p / f0).powf(1.0 / self.left_power);
        }
        if p >= fn_ {
            return self.ln_x[n - 1].exp() * ((1.0 - p) / (1.0 - fn_)).powf(1.0 / self.right_power);
        }
        let i = self.cdf.partition_point(|&c| c <= p) - 1;
        hermite(
            p,
            (self.cdf[i], self.cdf[i + 1]),
            (self.ln_x[i], self.ln_x[i + 1]),
            (self.slope[i], self.slope[i + 1]),
        )
        .exp()
    }

    /// The tabulated distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let n = self.cdf.len();
        let l = x.ln();
        if l <= self.ln_x[0] {
            return self.cdf[0] * (l - self.ln_x[0]).exp().powf(self.left_power);
        }
        if l >= self.ln_x[n - 1] {
            return 1.0
                - (1.0 - self.cdf[n - 1]) * (l - self.ln_x[n - 1]).exp().powf(self.right_power);
        }
        // Invert the monotone interpolant by bisection on its parameter.
        let i = self.ln_x.partition_point(|&v| v <= l) - 1;
        let (mut lo, mut hi) = (self.cdf[i], self.cdf[i + 1]);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let v = hermite(
                mid,
                (self.cdf[i], self.cdf[i + 1]),
                (self.ln_x[i], self.ln_x[i + 1]),
                (self.slope[i], self.slope[i + 1]),
            );
            if v < l {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.quantile(rng.uniform())
    }
}

fn hermite(x: f64, (x0, x1): (f64, f64), (y0, y1): (f64, f64), (d0, d1): (f64, f64)) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return alloc::vec![delta[0]; 2];
    }
    let mut d = alloc::vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
