//! Special functions used by the exit-time formulas: Gamma and upper
//! incomplete Gamma, Pochhammer symbols, `₁F₁`, Tricomi's `U`, `₁F₂`, and
//! the transition density of a one-sided stable subordinator.

mod gamma;
mod hypergeometric;
mod subordinator;

pub use gamma::{gamma, gamma_upper, gamma_upper_scaled, ln_gamma, rgamma};
pub use hypergeometric::{hyp1f1, hyp1f2, hyp_u, hyp_u_integral, hyp_u_reflection, pochhammer};
pub(crate) use subordinator::zolotarev_a;
pub use subordinator::{
    positive_stable_cdf, subordinator_density, subordinator_density_with, DensityMethod,
    SubordinatorDensityMethod,
};

/// True when `x` is within rounding distance of a non-positive integer.
pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}
