//! Numerics for the heat-semigroup Segal–Bargmann transform on compact
//! quotients of complex-type symmetric spaces.
//!
//! The library has five layers:
//!
//! * [`rootsys`] — restricted root systems and the radial Jacobians
//!   `j`, `j^c`, `j^{c,1/2}`, `j^{nc}` together with the generalized
//!   polar-coordinate density on the Weyl chamber.
//! * [`multiplier`] — the spectral multipliers `alpha_{t,R}` and
//!   `beta_{t,R}` that represent partial inversion and partial isometry
//!   as functions of the Laplacian, evaluated through a one-dimensional
//!   reduction of the underlying ball integrals.
//! * [`models`] — pluggable eigenbasis oracles (circle, torus, and a
//!   synthetic compact-quotient spectrum) standing in for the base
//!   manifold.
//! * [`transform`] — the heat semigroup, analytic continuation of heat
//!   images, partial/global inversion, isometry functionals,
//!   surjectivity reconstruction, and two standalone identity checks,
//!   each computed both geometrically and spectrally where the model
//!   permits.
//! * [`harness`] — the `sbq` command-line front end: experiment
//!   configuration, CSV emission, and pass/fail summaries.

pub mod error;
pub mod harness;
pub mod models;
pub mod multiplier;
pub mod numerics;
pub mod rootsys;
pub mod table;
pub mod transform;

pub use error::{Error, Result};
