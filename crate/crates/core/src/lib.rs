//! Casimir interaction between a small Drude-model sphere and a dielectric
//! half-space.
//!
//! Everything here is dimensionless: frequencies are measured in units of the
//! sphere's plasma frequency `ω_p`, lengths in `1/ω_p`, energies in
//! `α_0 ω_p⁴` and forces in `α_0 ω_p⁵` (Lorentz–Heaviside, `ħ = c = 1`).
//! Positive forces are repulsive.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature to link
//! the standard library's float routines instead of `libm`.
//!
//! Module map:
//!
//! - [`materials`]: Drude dielectric function, sphere polarizability, pole data.
//! - [`reflection`]: wall reflection coefficients in every parametrization.
//! - [`quadrature`]: adaptive integration, Matsubara sums, bracketed roots.
//! - [`potential`]: zero-temperature potential and force.
//! - [`thermal`]: finite-temperature potential and activation barriers.
//! - [`analysis`]: force curves, equilibria, laboratory units.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is how the validators reject NaN along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod materials;
pub mod potential;
pub mod quadrature;
pub mod reflection;
pub mod thermal;

pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64;

/// Soft validity diagnostics. These never abort a computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// The dipole approximation wants `a ≪ z`.
    SphereNotSmallComparedToSeparation { radius: f64, z: f64 },
    /// The dipole approximation wants `a ω_p ≲ 1`.
    SphereNotSmallComparedToPlasmaWavelength { radius_times_omega_p: f64 },
    /// The plasma model is trustworthy only while `γ_s z ≪ 1`.
    DampingOutsidePlasmaRegime { gamma_s_times_z: f64 },
    /// The thermal results need `a ≪ β`.
    SphereNotSmallComparedToThermalWavelength { radius: f64, beta: f64 },
    /// Fewer than ten grid points per oscillation period `π/Ω`.
    UnderResolvedGrid { spacing: f64, period: f64 },
}

impl core::fmt::Display for Warning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            Warning::SphereNotSmallComparedToSeparation { radius, z } => {
                write!(f, "sphere radius {radius} is not small compared to separation {z}")
            }
            Warning::SphereNotSmallComparedToPlasmaWavelength { radius_times_omega_p } => {
                write!(f, "a*omega_p = {radius_times_omega_p} exceeds 1")
            }
            Warning::DampingOutsidePlasmaRegime { gamma_s_times_z } => {
                write!(f, "gamma_s*z = {gamma_s_times_z} is outside the plasma-model regime")
            }
            Warning::SphereNotSmallComparedToThermalWavelength { radius, beta } => {
                write!(f, "sphere radius {radius} is not small compared to beta {beta}")
            }
            Warning::UnderResolvedGrid { spacing, period } => {
                write!(f, "grid spacing {spacing} resolves the period {period} with fewer than 10 points")
            }
        }
    }
}
