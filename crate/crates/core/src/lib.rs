//! First exit time of a strictly α-stable Lévy process from the positive
//! half-line.
//!
//! The crate evaluates, for a process started at `y > 0`,
//!
//! * the ascending ladder exponent `κ(1, θ)` through its logarithmic series
//!   ([`kappa`]), together with the density `l(x)` whose Stieltjes transform
//!   is `1/κ(1, θ)`;
//! * the Laplace transform `E^y e^{-tτ}`, the density of `τ` where it is
//!   explicit, and the density of the factor `M_{α,ρ}` ([`exit_law`]);
//! * the special functions those formulas need ([`special_fn`]);
//! * an independent Monte Carlo oracle: stable samplers, skeleton exit-time
//!   simulation and two-sample Kolmogorov–Smirnov checks ([`montecarlo`]).
//!
//! Everything here is `no_std` and only needs `alloc`. File formats, the
//! command line and parallel drivers live in the `stable-exit` crate.
//!
//! ```
//! use stable_exit_core::{exit_law::ExitLaw, StableLaw};
//!
//! // Symmetric 2/3-stable process started at 1.
//! let law = StableLaw::new(2.0 / 3.0, 0.5).unwrap();
//! let exit = ExitLaw::new(law).unwrap();
//! let value = exit.laplace_tau(1.0).unwrap();
//! assert!((value - 0.260_170_590_463_940_4).abs() < 1e-7);
//! ```
#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod exit_law;
pub mod kappa;
pub mod montecarlo;
pub mod numerics;
pub mod report;
pub mod special_fn;
pub mod stable_law;

pub use error::{Error, Result};
pub use numerics::{QuadratureConfig, SeriesConfig, TransformResult};
pub use report::{CaseRecord, VerificationReport};
pub use stable_law::{Classification, StableLaw};
