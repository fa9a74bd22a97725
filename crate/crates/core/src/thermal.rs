//! Finite-temperature potential and thermal activation barriers.
//!
//! At inverse temperature `β` the imaginary-axis integral becomes a sum over
//! Matsubara frequencies `ζ_n = 2πn/β` (`∫dζ/2π → (1/β) Σ′`, the `n = 0`
//! term at half weight), and the pole part picks up the Bose weight
//! `1/(e^{βω₁} − 1) + ½` in place of `½`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::potential::{pole_parts, PotentialBreakdown, Scenario};
use crate::quadrature::{
    integrate_semi_infinite, try_integrate_finite, try_sum_matsubara, IntegrationSpec, SeriesSpec,
};
use crate::reflection::{imaginary_axis_coefficients, WallResponse};
use crate::{Error, Result, Warning};
#[allow(unused_imports)]
use num_traits::Float;

/// Inverse temperature `β = 1/kT`, in units of `1/ω_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    beta: f64,
}

impl ThermalState {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || beta.is_nan() {
            return Err(Error::invalid("beta", beta));
        }
        Ok(ThermalState { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `ζ_n = 2πn/β`.
    pub fn matsubara(&self, n: usize) -> f64 {
        2.0 * PI * n as f64 / self.beta
    }

    /// `1/(e^{βω} − 1) + ½`, evaluated as `e^{−βω}/(1 − e^{−βω}) + ½` so
    /// that large `β` neither overflows nor loses the `½`.
    pub fn bose_weight(&self, omega: Complex64) -> Complex64 {
        let q = (-omega * self.beta).exp();
        q / (1.0 - q) + 0.5
    }

    /// The thermal results assume `a ≪ β`.
    pub fn warnings(&self, radius: f64) -> Vec<Warning> {
        if radius > 0.3 * self.beta {
            Vec::from([Warning::SphereNotSmallComparedToThermalWavelength { radius, beta: self.beta }])
        } else {
            Vec::new()
        }
    }
}

/// `V_j = −(1/4πβ) Σ′_n (α_r(iζ_n)/α_0) ∫₀^∞ (dk k/κ) [−ζ_n² r + (2k² + ζ_n²) r′] e^{−2κz}`,
/// with `κ = √(k² + ζ_n²)`. Needs an undamped wall.
pub fn v_j_thermal(s: &Scenario, t: &ThermalState, spec: &IntegrationSpec, series: &SeriesSpec) -> Result<f64> {
    Ok(matsubara_parts(s, t, spec, series)?[0])
}

/// `−dV_j/dz` at finite temperature.
pub fn force_j_thermal(s: &Scenario, t: &ThermalState, spec: &IntegrationSpec, series: &SeriesSpec) -> Result<f64> {
    Ok(matsubara_parts(s, t, spec, series)?[1])
}

/// Bose-weighted pole part `(ω_p²/24πΩ) Re{(1/(e^{βω₁} − 1) + ½) ∫ ...}`.
pub fn v_p_thermal(s: &Scenario, t: &ThermalState, spec: &IntegrationSpec) -> Result<f64> {
    Ok(pole_parts(s, t.bose_weight(s.sphere().pole_data().pole), spec)?[0])
}

/// `−dV_p/dz` at finite temperature.
pub fn force_p_thermal(s: &Scenario, t: &ThermalState, spec: &IntegrationSpec) -> Result<f64> {
    Ok(pole_parts(s, t.bose_weight(s.sphere().pole_data().pole), spec)?[1])
}

pub fn thermal_breakdown(
    s: &Scenario,
    t: &ThermalState,
    spec: &IntegrationSpec,
    series: &SeriesSpec,
) -> Result<PotentialBreakdown> {
    let [v_j, f_j] = matsubara_parts(s, t, spec, series)?;
    let [v_p, f_p] = pole_parts(s, t.bose_weight(s.sphere().pole_data().pole), spec)?;
    Ok(PotentialBreakdown::from_parts(s.z(), v_j, v_p, f_j, f_p))
}

/// `[V_j, F_j]` from one Matsubara sum. With `k dk = κ dκ` each term is an
/// integral over `κ ∈ [ζ_n, ∞)`; for a perfect wall it is elementary:
/// `∫ 2κ² e^{−2κz} dκ = e^{−2ζz}(2ζ²z² + 2ζz + 1)/(2z³)`.
fn matsubara_parts(s: &Scenario, t: &ThermalState, spec: &IntegrationSpec, series: &SeriesSpec) -> Result<[f64; 2]> {
    let wall = *s.wall();
    if !wall.is_undamped() {
        return Err(Error::RequiresPlasmaWall { gamma_w: wall.gamma() });
    }
    let z = s.z();
    let sphere = *s.sphere();
    let decay = spec.with_decay_scale(0.5 / z);

    let sum = try_sum_matsubara(
        |n: usize| -> Result<[f64; 2]> {
            let zeta = t.matsubara(n);
            let shape = sphere.imaginary_axis_shape(zeta)?;
            let [kv, kf] = match wall {
                WallResponse::PerfectConductor => {
                    let x = zeta * z;
                    let e = (-2.0 * x).exp();
                    let kv = e * ((2.0 * x + 2.0) * x + 1.0) / (2.0 * z * z * z);
                    // ∫ 4κ³ e^{−2κz} dκ from ζ.
                    let kf = e * (((4.0 * x + 6.0) * x + 6.0) * x + 3.0) / (2.0 * z.powi(4));
                    [kv, kf]
                }
                WallResponse::Dielectric(_) => {
                    let z2 = zeta * zeta;
                    integrate_semi_infinite(
                        |x: f64| {
                            let kappa = zeta + x;
                            let c = imaginary_axis_coefficients(&wall, zeta, kappa);
                            let g = (-z2 * c.r + (2.0 * kappa * kappa - z2) * c.r_prime) * (-2.0 * kappa * z).exp();
                            [g, 2.0 * kappa * g]
                        },
                        &decay,
                    )?
                    .value
                }
            };
            Ok([shape * kv, shape * kf])
        },
        series,
    )?;
    let c = -1.0 / (4.0 * PI * t.beta);
    Ok([c * sum.value[0], c * sum.value[1]])
}

/// Energy needed to move from `z_from` to `z_to`,
/// `W = −∫_{z_from}^{z_to} F dz = V(z_to) − V(z_from)`.
///
/// Positive when the force opposes the motion, as it does between a stable
/// equilibrium and the next unstable one. Reversing the limits negates `W`.
pub fn activation_barrier<F>(force: F, z_from: f64, z_to: f64, spec: &IntegrationSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(z_from > 0.0) || !z_from.is_finite() {
        return Err(Error::invalid("z_from", z_from));
    }
    if !(z_to > 0.0) || !z_to.is_finite() {
        return Err(Error::invalid("z_to", z_to));
    }
    Ok(-try_integrate_finite(force, z_from, z_to, spec)?.value)
}
