use alloc::format;
use alloc::vec::Vec;

use super::{PoolMeta, RngStream, SamplePool, StableSampler};
use crate::{Error, Result, StableLaw};

/// Time grid of the random-walk skeleton `X_0, X_h, X_{2h}, …`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    pub step: f64,
    pub horizon: f64,
    pub start: f64,
}

impl PathConfig {
    pub fn new(step: f64, horizon: f64, start: f64) -> Result<Self> {
        let pc = PathConfig {
            step,
            horizon,
            start,
        };
        pc.validate()?;
        Ok(pc)
    }

    /// Horizon `50·start^α` for `α > 1` and `10³` otherwise.
    pub fn with_default_horizon(law: &StableLaw, step: f64, start: f64) -> Result<Self> {
        let horizon = if law.alpha() > 1.0 {
            50.0 * start.powf(law.alpha())
        } else {
            1e3
        };
        Self::new(step, horizon, start)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(self.step) && ok(self.horizon) && ok(self.start)) {
            return Err(Error::domain(format!(
                "step, horizon and start must be positive and finite: {self:?}"
            )));
        }
        if self.step > self.horizon / 10.0 {
            return Err(Error::domain(format!(
                "step {} exceeds a tenth of the horizon {}",
                self.step, self.horizon
            )));
        }
        Ok(())
    }

    fn max_steps(&self) -> u64 {
        (self.horizon / self.step).ceil() as u64
    }
}

fn check_law(law: &StableLaw) -> Result<()> {
    if law.rho() >= 1.0 {
        return Err(Error::unsupported(
            "the process has no negative increments and never leaves (0, ∞)",
        ));
    }
    Ok(())
}

/// Draws `τ̂ = h·min{k ≥ 1 : X_{kh} ≤ 0}` for paths started at `pc.start`.
/// Paths still positive at the horizon are recorded as `horizon` and counted
/// in `meta.censored`.
pub fn simulate_exit_time(
    law: &StableLaw,
    pc: &PathConfig,
    n: usize,
    rng: &mut RngStream,
) -> Result<SamplePool> {
    pc.validate()?;
    check_law(law)?;
    let sampler = StableSampler::new(law);
    let scale = pc.step.powf(1.0 / law.alpha());
    let max_steps = pc.max_steps();
    let mut meta = PoolMeta::for_stream(rng, n);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let mut x = pc.start;
        let mut k = 0u64;
        let mut exited = false;
        while k < max_steps {
            k += 1;
            x += scale * sampler.draw(rng);
            if x <= 0.0 {
                exited = true;
                break;
            }
        }
        if exited {
            values.push(k as f64 * pc.step);
        } else {
            values.push(pc.horizon);
            meta.censored += 1;
        }
    }
    meta.step = Some(pc.step);
    meta.start = Some(pc.start);
    meta.horizon = Some(pc.horizon);
    Ok(SamplePool::new(values, tag(law, pc.step), meta))
}

/// Runs each path on the grid of step `h/2` and reads off the exit times of
/// both the `h/2` skeleton and its `h` sub-skeleton. The coupling makes the
/// coarse exit time pathwise no smaller than the fine one. Returns
/// `(pool at h, pool at h/2)`.
pub fn simulate_exit_time_halved(
    law: &StableLaw,
    pc: &PathConfig,
    n: usize,
    rng: &mut RngStream,
) -> Result<(SamplePool, SamplePool)> {
    pc.validate()?;
    check_law(law)?;
    let h = pc.step;
    let sampler = StableSampler::new(law);
    let scale = (0.5 * h).powf(1.0 / law.alpha());
    let max_fine = 2 * pc.max_steps();
    let mut coarse_meta = PoolMeta::for_stream(rng, n);
    let mut fine_meta = coarse_meta.clone();
    let mut coarse = Vec::with_capacity(n);
    let mut fine = Vec::with_capacity(n);
    for _ in 0..n {
        let mut x = pc.start;
        let mut k = 0u64;
        let mut fine_exit = None;
        let mut coarse_exit = None;
        while k < max_fine {
            k += 1;
            x += scale * sampler.draw(rng);
            if x <= 0.0 {
                if fine_exit.is_none() {
                    fine_exit = Some(k);
                }
                if k.is_multiple_of(2) {
                    coarse_exit = Some(k / 2);
                    break;
                }
            }
        }
        match fine_exit {
            Some(k) => fine.push(k as f64 * 0.5 * h),
            None => {
                fine.push(pc.horizon);
                fine_meta.censored += 1;
            }
        }
        match coarse_exit {
            Some(k) => coarse.push(k as f64 * h),
            None => {
                coarse.push(pc.horizon);
                coarse_meta.censored += 1;
            }
        }
    }
    for (m, s) in [(&mut coarse_meta, h), (&mut fine_meta, 0.5 * h)] {
        m.step = Some(s);
        m.start = Some(pc.start);
        m.horizon = Some(pc.horizon);
    }
    Ok((
        SamplePool::new(coarse, tag(law, h), coarse_meta),
        SamplePool::new(fine, tag(law, 0.5 * h), fine_meta),
    ))
}

fn tag(law: &StableLaw, h: f64) -> alloc::string::String {
    format!("tau_hat(alpha={},rho={},h={h})", law.alpha(), law.rho())
}
