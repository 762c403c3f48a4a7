//! On-axis dynamics of axisymmetric incompressible Euler flow with swirl.
//!
//! - [`axis_ode`]: the reduced strain/vorticity ODEs on the symmetry axis, their
//!   Riccati closed form, blow-up prediction and an adaptive integrator.
//! - [`euler`]: an (r, z) vorticity/stream-function solver with swirl that extracts
//!   the same on-axis quantities from a full field and checks them against the ODEs.
//! - [`lemma`]: a finite-difference verifier for the on-axis derivative identities of
//!   smooth axisymmetric fields.
//! - [`scenario`]: config-driven runs that write CSV/JSON artifacts (used by the CLI).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axis_ode;
pub mod euler;
pub mod lemma;
pub mod scenario;
