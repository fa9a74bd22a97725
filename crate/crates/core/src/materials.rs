//! Drude dielectric response, the small-sphere polarizability built on it, and
//! the pole structure of its real part.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Drude parameters `(ω_p, γ)` of a sphere or a wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    omega_plasma: f64,
    gamma: f64,
}

impl Material {
    pub fn new(omega_plasma: f64, gamma: f64) -> Result<Self> {
        if !(omega_plasma > 0.0) || !omega_plasma.is_finite() {
            return Err(Error::invalid("omega_plasma", omega_plasma));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::invalid("gamma", gamma));
        }
        Ok(Material { omega_plasma, gamma })
    }

    /// Undamped (plasma-model) material.
    pub fn plasma(omega_plasma: f64) -> Result<Self> {
        Self::new(omega_plasma, 0.0)
    }

    pub fn omega_plasma(&self) -> f64 {
        self.omega_plasma
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ε(ω) = 1 − ω_p²/(ω(ω + iγ))`.
    pub fn epsilon(&self, omega: Complex64) -> Result<Complex64> {
        drude_epsilon(self, omega)
    }

    /// Resonance of `α_r`; fails when `12 ω_p² − 9 γ² ≤ 0`.
    pub fn pole_data(&self) -> Result<PoleData> {
        pole_data(self)
    }
}

/// The Drude dielectric function. Poles at `ω = 0` and `ω = −iγ`.
pub fn drude_epsilon(m: &Material, omega: Complex64) -> Result<Complex64> {
    epsilon_signed(m.omega_plasma, m.gamma, omega)
}

// Also accepts negative damping, which the averaged reflection coefficients need.
pub(crate) fn epsilon_signed(omega_plasma: f64, gamma: f64, omega: Complex64) -> Result<Complex64> {
    let denominator = omega * (omega + Complex64::new(0.0, gamma));
    if denominator == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { what: "the Drude dielectric function" });
    }
    Ok(Complex64::new(1.0, 0.0) - omega_plasma * omega_plasma / denominator)
}

/// Location of the first-quadrant pole of `α_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleData {
    /// `Ω = √(12ω_p² − 9γ²)/6`.
    pub resonance: f64,
    /// `ω₁ = Ω + iγ/2`.
    pub pole: Complex64,
}

impl PoleData {
    /// Spacing `π/Ω` of the force oscillations at large separation.
    pub fn oscillation_period(&self) -> f64 {
        PI / self.resonance
    }
}

pub fn pole_data(m: &Material) -> Result<PoleData> {
    let radicand = 12.0 * m.omega_plasma * m.omega_plasma - 9.0 * m.gamma * m.gamma;
    if !(radicand > 0.0) {
        return Err(Error::Overdamped { omega_plasma: m.omega_plasma, gamma: m.gamma });
    }
    let resonance = radicand.sqrt() / 6.0;
    Ok(PoleData { resonance, pole: Complex64::new(resonance, 0.5 * m.gamma) })
}

/// A sphere small enough to be treated as a point dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSpec {
    radius: f64,
    material: Material,
    alpha0: f64,
    pole: PoleData,
}

impl SphereSpec {
    /// Rejects overdamped materials: without a first-quadrant pole the
    /// contour split into imaginary-axis and pole parts does not apply.
    pub fn new(radius: f64, material: Material) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("radius", radius));
        }
        let pole = material.pole_data()?;
        Ok(SphereSpec { radius, material, alpha0: 4.0 * PI * radius.powi(3), pole })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    /// Static polarizability `α_0 = 4πa³`.
    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn pole_data(&self) -> PoleData {
        self.pole
    }

    /// Complex polarizability `α_0 (ε − 1)/(ε + 2)`.
    pub fn alpha(&self, omega: Complex64) -> Result<Complex64> {
        let eps = self.material.epsilon(omega)?;
        let denominator = eps + 2.0;
        if denominator == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { what: "the sphere polarizability" });
        }
        Ok((eps - 1.0) / denominator * self.alpha0)
    }

    /// Real part of the polarizability on the real frequency axis.
    pub fn alpha_real(&self, omega: f64) -> Result<f64> {
        alpha_real(self, omega)
    }

    /// `α_r` continued to `ω = iζ`.
    pub fn alpha_imaginary_axis(&self, zeta: f64) -> Result<f64> {
        alpha_imaginary_axis(self, zeta)
    }

    /// `α_r(iζ)/α_0`, the dimensionless weight of the imaginary-axis integral.
    pub(crate) fn imaginary_axis_shape(&self, zeta: f64) -> Result<f64> {
        let wp2 = self.material.omega_plasma.powi(2);
        let g = self.material.gamma;
        let a = 3.0 * zeta * zeta + wp2;
        let denominator = a * a - 9.0 * zeta * zeta * g * g;
        if !(denominator > 0.0) {
            return Err(Error::Pole { what: "alpha_r on the imaginary axis" });
        }
        Ok(wp2 * a / denominator)
    }
}

/// `α_0 ω_p² (ω_p² − 3ω²) / ((3ω² − ω_p²)² + 9ω²γ²)`.
pub fn alpha_real(s: &SphereSpec, omega: f64) -> Result<f64> {
    let wp2 = s.material.omega_plasma.powi(2);
    let g = s.material.gamma;
    let w2 = omega * omega;
    let detuning = 3.0 * w2 - wp2;
    let denominator = detuning * detuning + 9.0 * w2 * g * g;
    if denominator == 0.0 {
        return Err(Error::Pole { what: "alpha_r at the undamped resonance" });
    }
    Ok(s.alpha0 * wp2 * (wp2 - 3.0 * w2) / denominator)
}

/// `α_0 ω_p² (3ζ² + ω_p²) / ((3ζ² + ω_p²)² − 9ζ²γ²)`.
pub fn alpha_imaginary_axis(s: &SphereSpec, zeta: f64) -> Result<f64> {
    Ok(s.alpha0 * s.imaginary_axis_shape(zeta)?)
}
