//! Casimir-Lifshitz pressures and radiative heat transfer for a system of
//! three parallel slabs, and for a polarizable atom inside a planar cavity,
//! in and out of thermal equilibrium.
//!
//! The physics is organized bottom-up:
//!
//! - [`numerics`]: adaptive quadrature, Matsubara summation, bisection,
//!   and the Kramers-Kronig transform onto the imaginary frequency axis.
//! - [`materials`]: permittivity models (phonon resonance, Drude metal,
//!   oscillator sums, tabulated data) on both frequency axes.
//! - [`scattering`]: Fresnel coefficients and finite-thickness slab
//!   amplitudes per mode.
//! - [`cavity`]: scalar composition of two- and three-body reflection,
//!   transmission, and intracavity resummation factors.
//! - [`slab`]: equilibrium pressures (Matsubara form plus a real-frequency
//!   cross-check), non-equilibrium heat flux and pressure contributions with
//!   per-channel decompositions, and spectral densities.
//! - [`atom`]: dipole-approximation forces and potential landscapes for an
//!   atom between two slabs.
//! - [`analysis`]: equilibrium-temperature solving, non-additivity maps,
//!   and a generic parameter-sweep engine.

pub mod analysis;
pub mod atom;
pub mod cavity;
pub mod constants;
pub mod error;
pub mod materials;
pub mod numerics;
pub mod scattering;
pub mod slab;

pub use error::{Error, Result};
