//! Finite-element solver for the equilibrium state of a multi-constituent
//! electrolyte: ion atomic fractions, total number density and electric
//! potential, with Lagrange multipliers pinning the domain averages.
//!
//! The crate is layered bottom-up:
//!
//! * [`mesh`] generates and validates simplicial meshes with tagged boundaries.
//! * [`fem`] holds the P1 space, quadrature, sparse storage and the direct solver.
//! * [`model`] defines the mixture, coefficient functions and the discrete
//!   residual/Jacobian of the coupled system.
//! * [`solver`] runs damped Newton with voltage continuation.
//! * [`verify`] is the manufactured-solution harness.
//! * [`studies`] drives the parameter studies and writes results to disk.

pub mod error;
pub mod fem;
pub mod mesh;
pub mod model;
pub mod solver;
pub mod studies;
pub mod verify;

pub use error::{Error, Result};
