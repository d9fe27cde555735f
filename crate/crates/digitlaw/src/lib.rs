//! Deterministic leading-significant-digit analysis.
//!
//! The toolkit is organized around one object: the cumulative digit
//! profile `G(s)`, the distribution of the phases `{log10 x}` of a dataset
//! or a density. Digit-block frequencies, their large-block asymptotics,
//! windowed and rescaled variants, the Euler–Maclaurin integral
//! representation, and the inversion back from a profile to a distribution
//! function all flow through it.
//!
//! Modules:
//! - [`digitcore`]: exact mantissa/phase arithmetic, the indicator kernels
//!   `V(k, x)` and `M(s, x)`, canonicalization, and direct counting.
//! - [`profiles`]: the [`profiles::Profile`] abstraction, frequency
//!   formulas, analytic families, and sequence profiles.
//! - [`scaling`]: base slices, circular scale shifts, and the
//!   R-representation.
//! - [`inversion`]: the box-sum shift equation and density recovery.
//! - [`embridge`]: the exact `rho = J1 + J3` decomposition and
//!   density-to-profile quadrature.
//! - [`statfit`]: digit tables, chi-square/KL against the logarithmic
//!   vector, Weibull maximum likelihood with parametric bootstrap, and
//!   seeded samplers.

pub mod density;
pub mod digitcore;
pub mod embridge;
pub mod error;
pub mod inversion;
pub mod profiles;
pub mod quad;
pub mod rng;
pub mod scaling;
pub mod statfit;

pub use digitcore::{
    canonicalize, empirical_block_freq, empirical_profile, indicator_v, leading_block, log_phase,
    window_m, BlockFrequencyTable, Dataset, DigitBlock, LogPhase, PositiveReal, RawEntry,
};
pub use error::{Error, Result};
pub use profiles::{rho_asymptotic, rho_from_profile, rho_two_term, Cdm, Profile, WindowSpec};
