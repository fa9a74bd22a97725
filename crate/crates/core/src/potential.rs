//! Zero-temperature interaction potential and force.
//!
//! Rotating the frequency integral onto the imaginary axis splits the
//! potential into `V = V_j + V_p`: a smooth imaginary-axis integral and the
//! residue of the first-quadrant pole `ω₁` of `α_r`. All values are per unit
//! `α_0`; forces are `F = −dV/dz` (positive means repulsion) and are obtained
//! by differentiating under the integral sign, never by finite differences.
//!
//! Pole part. With `κ² = k² − ω₁²`, `k dk = κ dκ` turns the `k`-integral into
//! a `κ`-integral of `h(κ) e^{−2κz}` with `h = ω₁² r̄ + (2κ² + ω₁²) r̄′`, from
//! `κ₀ = −iω₁` out to `+∞`. The production route integrates along the straight
//! line `κ = κ₀ + s`, `s ≥ 0`; [`pole_integral_literal`] follows the image of
//! the real `k` axis instead. The two agree by Cauchy's theorem whenever the
//! latter is regular. At `γ_s = 0` and `ω_q > √2 Ω` the literal path runs into
//! the wall's surface-plasmon pole of `r′`, which the straight path avoids.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::materials::SphereSpec;
use crate::quadrature::{
    integrate_semi_infinite, try_integrate_breakpoints, try_integrate_finite, try_integrate_semi_infinite,
    IntegrationSpec,
};
use crate::reflection::{averaged_at, coefficients_at, fresnel_polar, outgoing_sqrt, WallResponse};
use crate::{Error, Result, Warning};
#[allow(unused_imports)]
use num_traits::Float;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which polarizability drives the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarizability {
    /// Drude sphere: `α_r(iζ)` from the sphere material, plus the pole part.
    #[default]
    Drude,
    /// Non-dispersive `α = α_0`; there is no pole, so `V_p = 0`.
    Static,
}

/// A sphere facing a wall at separation `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    sphere: SphereSpec,
    wall: WallResponse,
    z: f64,
}

impl Scenario {
    pub fn new(sphere: SphereSpec, wall: WallResponse, z: f64) -> Result<Self> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::invalid("z", z));
        }
        Ok(Scenario { sphere, wall, z })
    }

    /// Same sphere and wall at another separation.
    pub fn at(&self, z: f64) -> Result<Self> {
        Scenario::new(self.sphere, self.wall, z)
    }

    pub fn sphere(&self) -> &SphereSpec {
        &self.sphere
    }

    pub fn wall(&self) -> &WallResponse {
        &self.wall
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Soft validity checks of the dipole and plasma-model approximations.
    pub fn warnings(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        let a = self.sphere.radius();
        let m = self.sphere.material();
        if a > 0.3 * self.z {
            out.push(Warning::SphereNotSmallComparedToSeparation { radius: a, z: self.z });
        }
        if a * m.omega_plasma() > 1.0 {
            out.push(Warning::SphereNotSmallComparedToPlasmaWavelength { radius_times_omega_p: a * m.omega_plasma() });
        }
        if m.gamma() * self.z > 0.3 {
            out.push(Warning::DampingOutsidePlasmaRegime { gamma_s_times_z: m.gamma() * self.z });
        }
        out
    }
}

/// Potential and force at one separation, split into the imaginary-axis
/// (`j`) and pole (`p`) contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialBreakdown {
    pub z: f64,
    pub v_j: f64,
    pub v_p: f64,
    pub v_total: f64,
    pub f_j: f64,
    pub f_p: f64,
    pub f_total: f64,
}

impl PotentialBreakdown {
    pub fn from_parts(z: f64, v_j: f64, v_p: f64, f_j: f64, f_p: f64) -> Self {
        PotentialBreakdown { z, v_j, v_p, v_total: v_j + v_p, f_j, f_p, f_total: f_j + f_p }
    }
}

/// Full breakdown for a Drude sphere. Perfectly conducting walls use the
/// closed forms ([`v_j_perfect_wall`], [`force_j_perfect_wall`],
/// [`v_p_perfect_wall`], [`force_p_perfect_wall`]).
pub fn breakdown(s: &Scenario, spec: &IntegrationSpec) -> Result<PotentialBreakdown> {
    breakdown_with(s, Polarizability::Drude, spec)
}

pub fn breakdown_with(
    s: &Scenario,
    polarizability: Polarizability,
    spec: &IntegrationSpec,
) -> Result<PotentialBreakdown> {
    if polarizability == Polarizability::Drude && matches!(s.wall, WallResponse::PerfectConductor) {
        return Ok(PotentialBreakdown::from_parts(
            s.z,
            v_j_perfect_wall(s, spec)?,
            v_p_perfect_wall(s)?,
            force_j_perfect_wall(s, spec)?,
            force_p_perfect_wall(s)?,
        ));
    }
    let [v_j, f_j] = imaginary_axis_parts(s, polarizability, spec)?;
    let [v_p, f_p] = match polarizability {
        Polarizability::Drude => pole_parts(s, Complex64::new(0.5, 0.0), spec)?,
        Polarizability::Static => [0.0, 0.0],
    };
    Ok(PotentialBreakdown::from_parts(s.z, v_j, v_p, f_j, f_p))
}

/// Imaginary-axis part in polar variables `ζ = ut`, `k = u√(1 − t²)`:
///
/// `V_j = −(1/8π²) ∫₀^∞ du u³ e^{−2uz} ∫₀¹ dt (α_r(iut)/α_0) Re[−t² r̄ + (2 − t²) r̄′]`.
pub fn v_j(s: &Scenario, spec: &IntegrationSpec) -> Result<f64> {
    Ok(imaginary_axis_parts(s, Polarizability::Drude, spec)?[0])
}

/// `−dV_j/dz`: the `u`-integrand picks up a factor `2u`.
pub fn force_j(s: &Scenario, spec: &IntegrationSpec) -> Result<f64> {
    Ok(imaginary_axis_parts(s, Polarizability::Drude, spec)?[1])
}

/// Pole part `V_p = (ω_p²/48πΩ) Re ∫₀^∞ dk (k/κ) [ω₁² r̄ + (2k² − ω₁²) r̄′] e^{−2κz}`.
pub fn v_p(s: &Scenario, spec: &IntegrationSpec) -> Result<f64> {
    Ok(pole_parts(s, Complex64::new(0.5, 0.0), spec)?[0])
}

/// `−dV_p/dz`: the integrand picks up a factor `2κ`.
pub fn force_p(s: &Scenario, spec: &IntegrationSpec) -> Result<f64> {
    Ok(pole_parts(s, Complex64::new(0.5, 0.0), spec)?[1])
}

/// `[V_j, F_j]` from one nested quadrature.
pub(crate) fn imaginary_axis_parts(
    s: &Scenario,
    polarizability: Polarizability,
    spec: &IntegrationSpec,
) -> Result<[f64; 2]> {
    let z = s.z;
    let outer = spec.with_decay_scale(0.5 / z);
    let inner = spec.with_relative_tolerance((0.1 * spec.relative_tolerance).max(1e-13));
    let sphere = s.sphere;
    let wall = s.wall;
    let undamped = wall.is_undamped();

    let estimate = try_integrate_semi_infinite(
        |u: f64| -> Result<[f64; 2]> {
            let angular = try_integrate_finite(
                |t: f64| -> Result<f64> {
                    let shape = match polarizability {
                        Polarizability::Drude => sphere.imaginary_axis_shape(u * t)?,
                        Polarizability::Static => 1.0,
                    };
                    let t2 = t * t;
                    let bracket = if undamped {
                        let c = fresnel_polar(&wall, u, t);
                        -t2 * c.r + (2.0 - t2) * c.r_prime
                    } else {
                        let c = averaged_at(&wall, Complex64::new(u, 0.0), Complex64::new(0.0, u * t))?;
                        (-c.r * t2 + c.r_prime * (2.0 - t2)).re
                    };
                    Ok(shape * bracket)
                },
                0.0,
                1.0,
                &inner,
            )?
            .value;
            let w = u * u * u * (-2.0 * u * z).exp() * angular;
            Ok([w, 2.0 * u * w])
        },
        &outer,
    )?;
    let c = -1.0 / (8.0 * PI * PI);
    Ok([c * estimate.value[0], c * estimate.value[1]])
}

/// `[V_p, F_p]` with the pole weighted by `w` (`½` at zero temperature):
/// `(ω_p²/24πΩ) Re{w ∫ h e^{−2κz} dκ}` and the same with `2κ h`.
pub(crate) fn pole_parts(s: &Scenario, weight: Complex64, spec: &IntegrationSpec) -> Result<[f64; 2]> {
    let pole = s.sphere.pole_data();
    let wp = s.sphere.material().omega_plasma();
    let [iv, i_f] = if s.wall.is_undamped() {
        pole_integral(&s.wall, pole.pole, s.z, spec)?
    } else {
        pole_integral_literal(&s.wall, pole.pole, s.z, spec)?
    };
    let prefactor = wp * wp / (24.0 * PI * pole.resonance);
    Ok([prefactor * (weight * iv).re, prefactor * (weight * i_f).re])
}

fn pole_h(wall: &WallResponse, omega1: Complex64, kappa: Complex64) -> Result<Complex64> {
    let c = averaged_at(wall, kappa, omega1)?;
    let w2 = omega1 * omega1;
    Ok(c.r * w2 + c.r_prime * (kappa * kappa * 2.0 + w2))
}

/// `[∫ h e^{−2κz} dκ, ∫ 2κ h e^{−2κz} dκ]` along `κ = −iω₁ + s`, `s ∈ [0, ∞)`.
pub fn pole_integral(wall: &WallResponse, omega1: Complex64, z: f64, spec: &IntegrationSpec) -> Result<[Complex64; 2]> {
    let kappa0 = -I * omega1;
    let decay = spec.with_decay_scale(0.5 / z);
    let estimate = try_integrate_semi_infinite(
        |x: f64| -> Result<[Complex64; 2]> {
            let kappa = kappa0 + x;
            let g = pole_h(wall, omega1, kappa)? * (-2.0 * x * z).exp();
            Ok([g, g * kappa * 2.0])
        },
        &decay,
    )?;
    let phase = (-2.0 * kappa0 * z).exp();
    Ok([estimate.value[0] * phase, estimate.value[1] * phase])
}

/// The same integrals as [`pole_integral`], taken along the image of the
/// real `k` axis, `κ = √(k² − ω₁²)`.
///
/// For real `ω₁` the propagating stretch `k < Ω` is written with
/// `κ = −iq`, so the integral becomes
/// `i ∫₀^Ω dq h(−iq) e^{2iqz} + ∫₀^∞ dκ h(κ) e^{−2κz}`.
/// Fails with a quadrature error when the path crosses a pole of `r′`.
pub fn pole_integral_literal(
    wall: &WallResponse,
    omega1: Complex64,
    z: f64,
    spec: &IntegrationSpec,
) -> Result<[Complex64; 2]> {
    let resonance = omega1.re;
    let omega_q = wall.material().map(|m| m.omega_plasma());
    let decay = spec.with_decay_scale(0.5 / z);

    if omega1.im == 0.0 {
        let mut points = Vec::from([0.0]);
        if let Some(q) = omega_q.filter(|&q| q < resonance) {
            points.push(q);
        }
        points.push(resonance);
        let propagating = try_integrate_breakpoints(
            |q: f64| -> Result<[Complex64; 2]> {
                let kappa = Complex64::new(0.0, -q);
                let g = pole_h(wall, omega1, kappa)? * Complex64::new(0.0, 2.0 * q * z).exp();
                Ok([g * I, g * kappa * 2.0 * I])
            },
            &points,
            spec,
        )?;
        let evanescent = try_integrate_semi_infinite(
            |x: f64| -> Result<[Complex64; 2]> {
                let kappa = Complex64::new(x, 0.0);
                let g = pole_h(wall, omega1, kappa)? * (-2.0 * x * z).exp();
                Ok([g, g * kappa * 2.0])
            },
            &decay,
        )?;
        return Ok([propagating.value[0] + evanescent.value[0], propagating.value[1] + evanescent.value[1]]);
    }

    let w2 = omega1 * omega1;
    let integrand = |k: f64| -> Result<[Complex64; 2]> {
        let kappa = outgoing_sqrt(Complex64::new(k * k, 0.0) - w2);
        let g = pole_h(wall, omega1, kappa)? * (-2.0 * kappa * z).exp() * (k / kappa);
        Ok([g, g * kappa * 2.0])
    };
    let cut = 2.0 * resonance;
    let mut points = Vec::from([0.0]);
    if let Some(q) = omega_q.filter(|&q| q < resonance) {
        points.push((resonance * resonance - q * q).sqrt());
    }
    points.extend([resonance, cut]);
    let near = try_integrate_breakpoints(integrand, &points, spec)?;
    let far = try_integrate_semi_infinite(|x: f64| integrand(cut + x), &decay)?;
    Ok([near.value[0] + far.value[0], near.value[1] + far.value[1]])
}

fn require_perfect_wall(s: &Scenario) -> Result<()> {
    match s.wall {
        WallResponse::PerfectConductor => Ok(()),
        WallResponse::Dielectric(m) => Err(Error::invalid("wall (expected a perfect conductor)", m.omega_plasma())),
    }
}

/// Imaginary-axis part for a perfect wall, with the `t`-integral done:
///
/// `V_j = (ω_p²/4π²) (3(4ω_p² − 3γ²))^{−½} ∫₀^∞ du u² [atan(√3(γ − 2u)/R) − atan(√3(γ + 2u)/R)] e^{−2uz}`,
/// `R = √(4ω_p² − 3γ²)`.
pub fn v_j_perfect_wall(s: &Scenario, spec: &IntegrationSpec) -> Result<f64> {
    require_perfect_wall(s)?;
    let m = s.sphere.material();
    let (wp, g) = (m.omega_plasma(), m.gamma());
    let root = (4.0 * wp * wp - 3.0 * g * g).sqrt();
    let s3 = 3f64.sqrt();
    let z = s.z;
    let estimate = integrate_semi_infinite(
        |u: f64| {
            let angle = (s3 * (g - 2.0 * u) / root).atan() - (s3 * (g + 2.0 * u) / root).atan();
            u * u * angle * (-2.0 * u * z).exp()
        },
        &spec.with_decay_scale(0.5 / z),
    )?;
    Ok(wp * wp / (4.0 * PI * PI * s3 * root) * estimate.value)
}

/// `J = −dV_j/dz` for a perfect wall:
///
/// `J = −(1/16π²z⁴) ∫₀^∞ dξ (α_r(iξ)/α_0)(4z³ξ³ + 6z²ξ² + 6zξ + 3) e^{−2zξ}`.
pub fn force_j_perfect_wall(s: &Scenario, spec: &IntegrationSpec) -> Result<f64> {
    require_perfect_wall(s)?;
    let z = s.z;
    let sphere = s.sphere;
    let estimate = try_integrate_semi_infinite(
        |xi: f64| -> Result<f64> {
            let x = z * xi;
            let poly = ((4.0 * x + 6.0) * x + 6.0) * x + 3.0;
            Ok(sphere.imaginary_axis_shape(xi)? * poly * (-2.0 * x).exp())
        },
        &spec.with_decay_scale(0.5 / z),
    )?;
    Ok(-estimate.value / (16.0 * PI * PI * z.powi(4)))
}

/// Closed-form pole part for a perfect wall:
/// `V_p = −(ω_p²/96πΩ) Re[(2ω₁²z² + 2iω₁z − 1) e^{2iω₁z}]/z³`.
pub fn v_p_perfect_wall(s: &Scenario) -> Result<f64> {
    require_perfect_wall(s)?;
    let pole = s.sphere.pole_data();
    let wp = s.sphere.material().omega_plasma();
    let (w, z) = (pole.pole, s.z);
    let bracket = (w * w * (2.0 * z * z) + I * w * (2.0 * z) - 1.0) * (I * w * (2.0 * z)).exp();
    Ok(-wp * wp / (96.0 * PI * pole.resonance) * bracket.re / z.powi(3))
}

/// `P = Re(−dV_p/dz)` for a perfect wall:
///
/// `P = −(ω_p²/192πΩ) z⁻⁴ e^{−γz} [2Ωz(4Ω²z² − 3γ²z² − 6γz − 6) sin 2Ωz
///      + (12γΩ²z³ − γ³z³ + 12Ω²z² − 3γ²z² − 6γz − 6) cos 2Ωz]`.
pub fn force_p_perfect_wall(s: &Scenario) -> Result<f64> {
    require_perfect_wall(s)?;
    let pole = s.sphere.pole_data();
    let wp = s.sphere.material().omega_plasma();
    let g = s.sphere.material().gamma();
    let (om, z) = (pole.resonance, s.z);
    let (z2, z3) = (z * z, z * z * z);
    let (sin, cos) = (2.0 * om * z).sin_cos();
    let sine_part = 2.0 * om * z * (4.0 * om * om * z2 - 3.0 * g * g * z2 - 6.0 * g * z - 6.0);
    let cosine_part =
        12.0 * g * om * om * z3 - g * g * g * z3 + 12.0 * om * om * z2 - 3.0 * g * g * z2 - 6.0 * g * z - 6.0;
    Ok(-wp * wp / (192.0 * PI * om) / z.powi(4) * (-g * z).exp() * (sine_part * sin + cosine_part * cos))
}

/// Leading small-separation force for a plasma-model wall,
/// `−(1/4π)(3√2/8) ω_p² ω_q / (2ω_p² − 3ω_q²) z⁻⁴`.
pub fn force_small_z_asymptote(s: &Scenario) -> Result<f64> {
    let omega_q = match s.wall {
        WallResponse::Dielectric(m) => m.omega_plasma(),
        WallResponse::PerfectConductor => return Err(Error::invalid("wall (expected a dielectric)", f64::INFINITY)),
    };
    let wp2 = s.sphere.material().omega_plasma().powi(2);
    let denominator = 2.0 * wp2 - 3.0 * omega_q * omega_q;
    if denominator.abs() <= 1e-12 * wp2 {
        return Err(Error::ResonantRatio { omega_wall: omega_q });
    }
    Ok(-(3.0 * 2f64.sqrt() / 8.0) / (4.0 * PI) * wp2 * omega_q / denominator / s.z.powi(4))
}

/// Casimir–Polder potential `−3α_0/(32π²z⁴)` of a non-dispersive
/// polarizability in front of a perfect wall.
pub fn casimir_polder(alpha0: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid("z", z));
    }
    Ok(-3.0 * alpha0 / (32.0 * PI * PI * z.powi(4)))
}

/// Casimir–Polder spectrum `σ(ω) = (2ω²z² − 1) sin 2ωz + 2ωz cos 2ωz`, with
/// `V_CP = (α_0/16π²z³) ∫₀^∞ σ dω`.
pub fn cp_spectrum(omega: f64, z: f64) -> f64 {
    let x = omega * z;
    let (sin, cos) = (2.0 * x).sin_cos();
    (2.0 * x * x - 1.0) * sin + 2.0 * x * cos
}

/// Closed-form `∫₀^∞ σ(ω) e^{−γω} dω`; tends to `−3/(2z)` as `γ → 0`.
pub fn cp_spectrum_laplace(gamma: f64, z: f64) -> f64 {
    let b = 2.0 * z;
    let d = gamma * gamma + b * b;
    2.0 * z * z * 2.0 * b * (3.0 * gamma * gamma - b * b) / (d * d * d) - b / d
        + 2.0 * z * (gamma * gamma - b * b) / (d * d)
}

/// Abel-regularized `∫₀^∞ σ(ω) dω`.
///
/// The damped integrals `∫ σ e^{−γω}` are evaluated by quadrature at
/// `γ = γ₀, γ₀/2, …` and extrapolated to `γ = 0` by Richardson in `γ²`
/// (the damped integral is even in `γ`). It depends on `γ/z` only and is
/// analytic for `|γ| < 2z`, so the ladder starts at `γ₀ = z`.
pub fn regularized_spectrum_integral(z: f64, spec: &IntegrationSpec) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid("z", z));
    }
    let mut values = [0.0; SPECTRUM_LEVELS];
    for (k, v) in values.iter_mut().enumerate() {
        let gamma = z / (1u32 << k) as f64;
        let tight = spec.with_decay_scale(1.0 / gamma).with_absolute_tolerance(1e-2 * spec.relative_tolerance / z);
        *v = integrate_semi_infinite(|w: f64| cp_spectrum(w, z) * (-gamma * w).exp(), &tight)?.value;
    }
    Ok(richardson(&mut values, 4.0))
}

/// Same extrapolation as [`regularized_spectrum_integral`], fed with
/// [`cp_spectrum_laplace`] instead of quadrature.
pub fn regularized_spectrum_laplace(z: f64) -> f64 {
    let mut values = [0.0; SPECTRUM_LEVELS];
    for (k, v) in values.iter_mut().enumerate() {
        *v = cp_spectrum_laplace(z / (1u32 << k) as f64, z);
    }
    richardson(&mut values, 4.0)
}

const SPECTRUM_LEVELS: usize = 5;

/// Neville–Richardson table for step sizes shrinking by `sqrt(ratio)` with
/// an error series in even powers; returns the extrapolated value.
fn richardson(values: &mut [f64], ratio: f64) -> f64 {
    let n = values.len();
    for level in 1..n {
        let factor = ratio.powi(level as i32);
        for i in (level..n).rev() {
            values[i] = (factor * values[i] - values[i - 1]) / (factor - 1.0);
        }
    }
    values[n - 1]
}

/// Mode density `⟨E²⟩_ω` at real `ω > 0`:
///
/// `⟨E²⟩_ω = −Re{(i/4π) ∫₀^∞ dk (k/κ) [ω² r + (2k² − ω²) r′] e^{−2κz}}`.
///
/// The propagating stretch `k < ω` (`κ = −iq`) carries the oscillations. For
/// an undamped wall the evanescent stretch is real except at the surface
/// plasmon `κ_p² = ω_q²/(ε² − 1)`, present when `ε(ω) < −1`; its half-residue
/// is added in closed form. A damped wall is integrated directly.
///
/// The absolute tolerance is floored at `rel · 10⁻⁶ (ω³ + z⁻³)`, the
/// free-space scale: for a nearly transparent wall `r` is computed from a
/// difference of nearly equal roots, and a purely relative target on the
/// tiny result is out of reach.
pub fn spectral_e2(s: &Scenario, omega: f64, spec: &IntegrationSpec) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::invalid("omega", omega));
    }
    let z = s.z;
    let floor = spec.relative_tolerance * 1e-6 * (omega.powi(3) + z.powi(-3));
    let spec = &spec.with_absolute_tolerance(spec.absolute_tolerance.max(floor));
    let w = Complex64::new(omega, 0.0);
    let f = |kappa: Complex64| -> Result<Complex64> {
        let c = match s.wall {
            WallResponse::PerfectConductor => return Ok(kappa * kappa * 2.0),
            WallResponse::Dielectric(m) => coefficients_at(m.omega_plasma(), m.gamma(), kappa, w)?,
        };
        Ok(c.r * (omega * omega) + c.r_prime * (kappa * kappa * 2.0 + omega * omega))
    };
    let mut points = Vec::from([0.0]);
    if let Some(m) = s.wall.material() {
        if m.omega_plasma() < omega {
            points.push((omega * omega - m.omega_plasma().powi(2)).sqrt());
        }
    }
    points.push(omega);
    let propagating = try_integrate_breakpoints(
        |q: f64| -> Result<f64> {
            let kappa = Complex64::new(0.0, -q);
            Ok((f(kappa)? * Complex64::new(0.0, 2.0 * q * z).exp()).re)
        },
        &points,
        spec,
    )?
    .value;
    // −Re{(i/4π)(i P)} = Re{P}/4π.
    let mut e2 = propagating / (4.0 * PI);

    let m = match s.wall {
        WallResponse::PerfectConductor => return Ok(e2),
        WallResponse::Dielectric(m) => m,
    };
    let eps = 1.0 - (m.omega_plasma() / omega).powi(2);
    if m.gamma() == 0.0 {
        if eps < -1.0 {
            let kp = m.omega_plasma() / (eps * eps - 1.0).sqrt();
            let residue =
                (2.0 * kp * kp + omega * omega) * (2.0 * eps * kp / (eps - 1.0 / eps)) * (-2.0 * kp * z).exp();
            e2 += residue / 4.0;
        }
        return Ok(e2);
    }
    let mut points = Vec::from([0.0]);
    let scale = 0.5 / z;
    if eps < -1.0 {
        let kp = m.omega_plasma() / (eps * eps - 1.0).sqrt();
        let width = (m.gamma() / omega * kp).max(1e-12);
        for d in [-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0] {
            let p = kp + d * width;
            if p > *points.last().unwrap() {
                points.push(p);
            }
        }
    }
    let end = points.last().unwrap() + 40.0 * scale;
    points.push(end);
    let evanescent_near = try_integrate_breakpoints(
        |x: f64| -> Result<f64> { Ok((f(Complex64::new(x, 0.0))? * I).re * (-2.0 * x * z).exp()) },
        &points,
        spec,
    )?
    .value;
    let evanescent_far = try_integrate_semi_infinite(
        |x: f64| -> Result<f64> {
            let k = end + x;
            Ok((f(Complex64::new(k, 0.0))? * I).re * (-2.0 * k * z).exp())
        },
        &spec.with_decay_scale(scale),
    )?
    .value;
    e2 -= (evanescent_near + evanescent_far) / (4.0 * PI);
    Ok(e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_are_exact_sums() {
        let b = PotentialBreakdown::from_parts(2.0, 0.1, 0.2, -0.3, 0.7);
        assert_eq!(b.v_total, 0.1 + 0.2);
        assert_eq!(b.f_total, -0.3 + 0.7);
    }

    #[test]
    fn richardson_removes_even_powers() {
        // f(h) = 3 + h² + h⁴ at h = 1, 1/2, 1/4
        let mut v: Vec<f64> = [1.0f64, 0.5, 0.25].iter().map(|h| 3.0 + h * h + h.powi(4)).collect();
        assert!((richardson(&mut v, 4.0) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn casimir_polder_value() {
        assert_eq!(casimir_polder(1.0, 1.0).unwrap(), -3.0 / (32.0 * PI * PI));
        assert!(casimir_polder(1.0, 0.0).is_err());
    }
}
