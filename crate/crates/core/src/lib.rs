//! Exact decision procedures for distorted stochastic orderings.
//!
//! Distributions are finite-support step cdfs, base utilities and distortions
//! are piecewise-linear, and every Lebesgue–Stieltjes integral that appears
//! in the orderings is evaluated as a finite sum. That makes the cdf-side and
//! quantile-side formulations of each ordering directly comparable: they are
//! computed by separate code paths and must agree up to floating-point noise.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! report serialization live in the `stochord` crate.
//!
//! Module map:
//!
//! - [`dist`]: [`DiscreteCdf`], its quantile function and the negation transform.
//! - [`func`]: piecewise-linear and step functions ([`PiecewiseLinear`],
//!   [`MonotonePL`], [`StepFn`]).
//! - [`stieltjes`]: exact integration plus the integration-by-parts,
//!   change-of-variables and Young-type identity checks.
//! - [`distortion`]: standard pairs, relative concavity, extreme rays and the
//!   tilde transform.
//! - [`ordering`]: upper, lower and double orderings, crossings and the
//!   classical special cases.
//! - [`majorize`]: vector majorization and its sum statements.
//! - [`welfare`]: RDEU, Yaari and S-Gini functionals and the two perception
//!   corollaries.
//! - [`dualcheck`]: randomized and exhaustive equivalence harness.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod dist;
pub mod distortion;
pub mod dualcheck;
pub mod error;
pub mod func;
pub mod majorize;
pub mod ordering;
pub mod stieltjes;
pub mod welfare;

pub use dist::{Atom, DiscreteCdf, QuantileFn, Support};
pub use distortion::{GeneratedUtility, GeneratorKind, RaySide, StandardPair};
pub use error::{Error, Result};
pub use func::{Continuity, Direction, Integrand, MonotonePL, PiecewiseLinear, Side, StepFn, Tail};
pub use ordering::{ClassicOrder, CrossingInterval, Direction as CrossDirection, OrderingVerdict, Witness};
pub use stieltjes::{ls_integral, Anchors, IntegralResult, Integrator, Interval};

/// Comparison tolerance used by every inequality decision.
///
/// A weak inequality `lhs >= rhs` is accepted when `lhs - rhs >= -eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(pub f64);

impl Tolerance {
    /// Default comparison tolerance.
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    /// The raw epsilon.
    #[inline]
    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}
