//! Periodic two-dimensional gravity water waves with constant vorticity over a
//! flat bed, written in terms of the surface elevation `eta` and the surface
//! trace `xi` of the generalized velocity potential.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs: file formats, configuration and the command line
//! live in the `cvwave` companion crate.
//!
//! Module map:
//!
//! * [`grid`]: periodic collocation grid, real DFT, spectral calculus.
//! * [`harmonic`]: the mixed Dirichlet/Neumann problem for the potential,
//!   surface traces and the generalized Hilbert transform `T(eta)`.
//! * [`hamiltonian`]: surface and volume energies, variational derivatives.
//! * [`dynamics`]: the evolution system, RK4 time stepping, linearization.
//! * [`steady`]: traveling waves, mass flux, Newton continuation.
//! * [`reconstruct`]: interior velocity, stream function and pressure.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dynamics;
mod error;
pub mod grid;
pub mod hamiltonian;
pub mod harmonic;
pub mod linalg;
mod params;
pub mod quadrature;
pub mod reconstruct;
pub mod steady;
#[cfg(test)]
mod testutil;

pub use error::{Result, WaveError};
pub use grid::{make_grid, PeriodicGrid};
pub use params::{Model, SurfaceState, WaveParameters};
