//! Physical constants (SI, CODATA 2018).

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant [J/K].
pub const KB: f64 = 1.380_649e-23;

/// Speed of light in vacuum [m/s].
pub const C: f64 = 299_792_458.0;

/// Vacuum permittivity [F/m].
pub const EPS0: f64 = 8.854_187_8128e-12;

/// Stefan-Boltzmann constant [W m^-2 K^-4].
pub const SIGMA_SB: f64 = 5.670_374_419e-8;
