//! Generic numerical kernels: adaptive quadrature, Matsubara summation,
//! bisection, interpolation, and the Kramers-Kronig transform.
//!
//! All operations are pure and deterministic: identical inputs produce
//! bit-identical outputs regardless of execution parallelism elsewhere.

pub mod interp;
pub mod kk;
pub mod quad;
pub mod roots;
pub mod sum;
pub mod tail;

pub use kk::{kramers_kronig_imag_axis, validate_absorption_table};
pub use quad::{integrate_finite, integrate_seeded, integrate_semi_infinite, Estimate, QuadratureSpec};
pub use roots::bisect;
pub use sum::{matsubara_frequency, matsubara_sum, SummationSpec};
