//! Verification engine for the electroweak model with contracted gauge group
//! SU(2;j)×U(1).
//!
//! * [`ring`]: polynomials in the contraction parameter `j`, with the nilpotent
//!   reduction `j = ι`, `ι² = 0`.
//! * [`matrix`]: SU(2;j), su(2;j), U(1) and U(1)_em as 2×2 matrices.
//! * [`algebra`]: symbolic field polynomials with Lorentz indices, parser,
//!   canonical forms, numeric identity testing and Euler–Lagrange equations.
//! * [`model`]: the bosonic Lagrangian, its radial form, gauge invariance and
//!   the mass spectrum.
//! * [`limit`]: the `j → 0` / `j = ι` limit of the model.

pub mod algebra;
pub mod limit;
pub mod matrix;
pub mod model;
pub mod report;
pub mod ring;
pub mod rng;

pub use report::{DecisionPath, Status, VerificationReport};
pub use ring::{ComplexRational, ContractionScalar, JMode};
