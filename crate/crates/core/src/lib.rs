//! Numerical verification of colored Jones asymptotics for the figure-eight
//! knot and the volume / Chern–Simons invariants of its Dehn fillings.
//!
//! Module map:
//!
//! * [`special_fn`]: `Li2`, Rogers dilogarithm, Lobachevsky function.
//! * [`cusp`]: branch-tracked deformation data `m, z, w, y, v` as functions
//!   of the meridian log-holonomy `u`.
//! * [`potential`]: the potentials `H(ξ,η)`, `H(u)`, `f(u)`, `Φ(u)`.
//! * [`logcomplex`] and [`jones`]: overflow-safe evaluation of the colored
//!   Jones polynomial and the Riemann-sum discrepancy.
//! * [`asymptotics`]: limit sweeps, extrapolation, saddle prediction and cone
//!   volumes.
//! * [`surgery`]: Dehn filling equations and volume / Chern–Simons.
//! * [`optimistic`]: critical points of `V_p` and the optimistic-limit check.
//! * [`selftest`]: property suites runnable outside `cargo test`.

pub mod asymptotics;
pub mod cusp;
pub mod error;
pub mod jones;
pub mod logcomplex;
pub mod optimistic;
pub mod potential;
pub mod selftest;
pub mod special_fn;
pub mod surgery;

pub use num_complex::Complex64;

/// The universal scalar.
pub type ComplexValue = Complex64;

pub use asymptotics::{ConvergenceRow, FitResult};
pub use cusp::{DeformationParam, HolonomyState, U_MAX};
pub use error::{Error, Result};
pub use jones::{JonesPoint, RealJones};
pub use logcomplex::LogComplex;
pub use optimistic::{CriticalPoint, Observation};
pub use potential::{figure_eight_volume, PotentialValue};
pub use special_fn::Angle;
pub use surgery::{FillingSlope, SurgeryResult};
