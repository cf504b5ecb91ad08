use crate::{Error, Result};

const MAX_ITER: usize = 10_000;
const FPMIN: f64 = 1e-300;

/// Γ(x).
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln |Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// 1/Γ(x), zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if super::is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / libm::tgamma(x)
    }
}

/// Upper incomplete Gamma function `Γ(a, z) = ∫_z^∞ t^{a-1} e^{-t} dt`.
pub fn gamma_upper(a: f64, z: f64) -> Result<f64> {
    let (scaled, log_scale) = upper_parts(a, z)?;
    Ok(scaled * (-log_scale).exp())
}

/// `e^z Γ(a, z)`, which stays finite for large `z`.
pub fn gamma_upper_scaled(a: f64, z: f64) -> Result<f64> {
    let (scaled, log_scale) = upper_parts(a, z)?;
    Ok(scaled * (z - log_scale).exp())
}

/// Returns `(v, s)` with `Γ(a, z) = v·e^{-s}`.
fn upper_parts(a: f64, z: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(alloc::format!(
            "incomplete gamma needs a > 0, got {a}"
        )));
    }
    if !(z >= 0.0) {
        return Err(Error::domain(alloc::format!(
            "incomplete gamma needs z >= 0, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok((gamma(a), 0.0));
    }
    if z < a + 1.0 {
        // Γ(a) minus the lower function from its power series.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut converged = false;
        for n in 1..MAX_ITER {
            term *= z / (a + n as f64);
            sum += term;
            if term.abs() < sum.abs() * f64::EPSILON {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(non_convergence(sum));
        }
        let lower = sum * (a * z.ln() - z).exp();
        Ok((gamma(a) - lower, 0.0))
    } else {
        // Legendre continued fraction, modified Lentz.
        let mut b = z + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < f64::EPSILON {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(non_convergence(h));
        }
        // Γ(a, z) = h·z^a·e^{-z}
        Ok((h, z - a * z.ln()))
    }
}

fn non_convergence(best: f64) -> Error {
    Error::NonConvergence {
        what: "incomplete gamma",
        best,
        abs_err: f64::NAN,
        evaluations: MAX_ITER,
    }
}
