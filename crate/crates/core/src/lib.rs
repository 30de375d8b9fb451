//! Tools for testing whether symmetric decreasing rearrangement lowers
//! gradient functionals with a variable exponent `p(x)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`function_model`]: piecewise-linear test functions `u` on `[-1, 1]` and
//!   exponent fields `p(x)`.
//! * [`rearrange`]: exact symmetric decreasing rearrangement `u ↦ u*`.
//! * [`functionals`]: the functionals `J(u)`, `I(u)` and the kernels `K`, `M`, `𝒦`.
//! * [`conditions`]: the differential conditions on `p` (Hessian determinants,
//!   the coefficient `A(w, q)`, power-convexity screens).
//! * [`certify`]: interval-arithmetic certification of upper bounds of `A`
//!   over compact regions of the `(w, q)` quadrant.
//! * [`experiments`]: reproducible numerical experiments built on the above.

pub mod certify;
pub mod conditions;
pub mod error;
pub mod experiments;
pub mod function_model;
pub mod functionals;
pub mod quadrature;
pub mod rearrange;

pub use certify::interval::Interval;
pub use certify::{Certificate, Chart, MasterCertificate, Quantity, RegionSpec};
pub use conditions::ConditionVerdict;
pub use error::{Error, Result};
pub use experiments::{Grid2D, TrialReport};
pub use function_model::{ExponentSpec, ExponentValue, PiecewiseLinear, Segment};
pub use functionals::QuadratureConfig;
pub use rearrange::LevelProfile;
