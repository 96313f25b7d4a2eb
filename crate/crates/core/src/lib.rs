//! Numerical laboratory for the tangent family f(z) = lambda * tan(z).
//!
//! - [`tangent`]: evaluation, the Moebius-exp decomposition, inverse
//!   branches and curve lifting, strip/half-plane geometry.
//! - [`rotation`]: continued fractions, convergents, Brjuno partial sums,
//!   multipliers e^{2 pi i theta}.
//! - [`siegel`]: the Schröder linearizer of the Siegel disk at 0,
//!   conformal-radius estimation, invariant curves, and the numerical
//!   unboundedness dichotomy.
//! - [`scan`]: orbit classification over grids, parameter sweeps, raster
//!   rendering.
//! - [`mp`]: the multiprecision complex arithmetic backing the series work.

pub mod mp;
pub mod rotation;
pub mod scan;
pub mod siegel;
pub mod tangent;

pub use rotation::{QuadraticIrrational, RotationNumber};
pub use siegel::{LinearizerSeries, SiegelEstimate, Verdict};
pub use tangent::{EvalResult, Polyline, StripSpec, TangentMap};
