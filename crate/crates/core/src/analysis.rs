//! Force curves, equilibria and laboratory units.
//!
//! A [`ForceModel`] maps a separation to a [`PotentialBreakdown`]. Curves are
//! sampled on a caller-supplied grid; equilibria are the sign changes of the
//! force, refined by re-evaluating the model (never an interpolant).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::materials::SphereSpec;
use crate::potential::{breakdown_with, casimir_polder, Polarizability, PotentialBreakdown, Scenario};
use crate::quadrature::{try_roots_from_samples, IntegrationSpec, SeriesSpec};
use crate::reflection::WallResponse;
use crate::thermal::{activation_barrier, thermal_breakdown, ThermalState};
use crate::{Error, Result, Warning};
#[allow(unused_imports)]
use num_traits::Float;

/// Anything that yields the potential and force at a separation.
///
/// `Sync` so that front ends may evaluate grid points concurrently.
pub trait ForceModel: Sync {
    fn breakdown(&self, z: f64) -> Result<PotentialBreakdown>;

    fn force(&self, z: f64) -> Result<f64> {
        Ok(self.breakdown(z)?.f_total)
    }

    /// Asymptotic spacing of the force oscillations, if there are any.
    fn oscillation_period(&self) -> Option<f64> {
        None
    }

    /// Validity diagnostics at `z`.
    fn warnings_at(&self, _z: f64) -> Vec<Warning> {
        Vec::new()
    }

    /// Tolerances used when integrating the force along `z`.
    fn integration(&self) -> IntegrationSpec {
        IntegrationSpec::PRODUCTION
    }
}

/// Drude sphere in front of a wall, optionally at finite temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereWallModel {
    pub sphere: SphereSpec,
    pub wall: WallResponse,
    pub thermal: Option<ThermalState>,
    pub polarizability: Polarizability,
    pub integration: IntegrationSpec,
    pub series: SeriesSpec,
}

impl SphereWallModel {
    pub fn new(sphere: SphereSpec, wall: WallResponse) -> Self {
        SphereWallModel {
            sphere,
            wall,
            thermal: None,
            polarizability: Polarizability::Drude,
            integration: IntegrationSpec::PRODUCTION,
            series: SeriesSpec::default(),
        }
    }

    pub fn with_thermal(mut self, thermal: Option<ThermalState>) -> Self {
        self.thermal = thermal;
        self
    }

    pub fn with_integration(mut self, spec: IntegrationSpec) -> Self {
        self.integration = spec;
        self
    }

    pub fn with_series(mut self, spec: SeriesSpec) -> Self {
        self.series = spec;
        self
    }

    pub fn with_polarizability(mut self, polarizability: Polarizability) -> Self {
        self.polarizability = polarizability;
        self
    }

    /// The same model with the wall replaced.
    pub fn with_wall(mut self, wall: WallResponse) -> Self {
        self.wall = wall;
        self
    }

    pub fn scenario(&self, z: f64) -> Result<Scenario> {
        Scenario::new(self.sphere, self.wall, z)
    }
}

impl ForceModel for SphereWallModel {
    fn breakdown(&self, z: f64) -> Result<PotentialBreakdown> {
        let s = self.scenario(z)?;
        match (self.thermal, self.polarizability) {
            (None, p) => breakdown_with(&s, p, &self.integration),
            (Some(t), Polarizability::Drude) => thermal_breakdown(&s, &t, &self.integration, &self.series),
            (Some(_), Polarizability::Static) => {
                Err(Error::invalid("polarizability (static at finite temperature)", f64::NAN))
            }
        }
    }

    fn oscillation_period(&self) -> Option<f64> {
        match self.polarizability {
            Polarizability::Drude => Some(self.sphere.pole_data().oscillation_period()),
            Polarizability::Static => None,
        }
    }

    fn warnings_at(&self, z: f64) -> Vec<Warning> {
        let mut out = match self.scenario(z) {
            Ok(s) => s.warnings(),
            Err(_) => Vec::new(),
        };
        if let Some(t) = self.thermal {
            out.extend(t.warnings(self.sphere.radius()));
        }
        out
    }

    fn integration(&self) -> IntegrationSpec {
        self.integration
    }
}

/// Non-dispersive polarizability `α_0` in front of a perfect wall:
/// `V = −3/(32π²z⁴)`, `F = −3/(8π²z⁵)`, no pole part.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CasimirPolderModel;

impl ForceModel for CasimirPolderModel {
    fn breakdown(&self, z: f64) -> Result<PotentialBreakdown> {
        let v = casimir_polder(1.0, z)?;
        Ok(PotentialBreakdown::from_parts(z, v, 0.0, 4.0 * v / z, 0.0))
    }
}

/// `points` equally spaced separations from `z_min` to `z_max` inclusive.
pub fn linear_grid(z_min: f64, z_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(z_min > 0.0) || !z_min.is_finite() {
        return Err(Error::invalid("z_min", z_min));
    }
    if !z_max.is_finite() {
        return Err(Error::invalid("z_max", z_max));
    }
    if points == 0 {
        return Err(Error::invalid("points", 0.0));
    }
    if points == 1 {
        if z_max != z_min {
            return Err(Error::invalid("points (a single point needs z_min = z_max)", 1.0));
        }
        return Ok(Vec::from([z_min]));
    }
    if !(z_max > z_min) {
        return Err(Error::invalid("z_max (empty range)", z_max));
    }
    let step = (z_max - z_min) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| z_min + step * i as f64).collect();
    grid[points - 1] = z_max;
    Ok(grid)
}

/// A sampled force curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceCurve {
    pub grid: Vec<f64>,
    pub samples: Vec<PotentialBreakdown>,
    /// Force against a perfectly conducting wall, same grid.
    pub perfect_wall: Option<Vec<f64>>,
    /// Each kind of warning once, at the first grid point that raised it.
    pub warnings: Vec<Warning>,
}

impl ForceCurve {
    /// Assembles a curve from per-point results (which may have been
    /// computed in any order or concurrently).
    pub fn from_results<M: ForceModel + ?Sized>(
        model: &M,
        grid: Vec<f64>,
        results: Vec<Result<PotentialBreakdown>>,
    ) -> Result<Self, CurveError> {
        let mut samples = Vec::with_capacity(results.len());
        let mut failures = Vec::new();
        for (index, (r, &z)) in results.into_iter().zip(&grid).enumerate() {
            match r {
                Ok(b) => samples.push(b),
                Err(error) => failures.push(PointFailure { index, z, error }),
            }
        }
        if !failures.is_empty() {
            return Err(CurveError { failures, completed: samples });
        }
        let mut warnings = Vec::new();
        for &z in &grid {
            for w in model.warnings_at(z) {
                push_kind_once(&mut warnings, w);
            }
        }
        if let Some(w) = grid_resolution_warning(&grid, model.oscillation_period()) {
            warnings.push(w);
        }
        Ok(ForceCurve { grid, samples, perfect_wall: None, warnings })
    }

    pub fn forces(&self) -> Vec<f64> {
        self.samples.iter().map(|b| b.f_total).collect()
    }

    /// Attaches the perfect-wall comparison column computed with `reference`.
    pub fn with_reference<M: ForceModel + ?Sized>(mut self, reference: &M) -> Result<Self, CurveError> {
        let results: Vec<Result<f64>> = self.grid.iter().map(|&z| reference.force(z)).collect();
        self.perfect_wall = Some(collect_forces(&self.grid, results)?);
        Ok(self)
    }

    /// Largest `|F|` on the curve.
    pub fn peak_force(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, b| m.max(b.f_total.abs()))
    }

    /// Interior local extrema of the sampled force, as grid indices.
    pub fn extrema(&self) -> Vec<usize> {
        let f = self.forces();
        (1..f.len().saturating_sub(1)).filter(|&i| (f[i] - f[i - 1]) * (f[i + 1] - f[i]) < 0.0).collect()
    }

    /// Number of sign changes of the sampled force.
    pub fn sign_changes(&self) -> usize {
        let f = self.forces();
        f.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }
}

fn collect_forces(grid: &[f64], results: Vec<Result<f64>>) -> Result<Vec<f64>, CurveError> {
    let mut out = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (index, (r, &z)) in results.into_iter().zip(grid).enumerate() {
        match r {
            Ok(f) => out.push(f),
            Err(error) => failures.push(PointFailure { index, z, error }),
        }
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(CurveError { failures, completed: Vec::new() })
    }
}

fn push_kind_once(list: &mut Vec<Warning>, w: Warning) {
    if !list.iter().any(|x| core::mem::discriminant(x) == core::mem::discriminant(&w)) {
        list.push(w);
    }
}

fn grid_resolution_warning(grid: &[f64], period: Option<f64>) -> Option<Warning> {
    let period = period?;
    let spacing = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    (spacing > period / 10.0).then_some(Warning::UnderResolvedGrid { spacing, period })
}

/// A grid point whose evaluation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub index: usize,
    pub z: f64,
    pub error: Error,
}

/// Failed curve evaluation, with whatever points did succeed.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveError {
    pub failures: Vec<PointFailure>,
    pub completed: Vec<PotentialBreakdown>,
}

impl CurveError {
    /// The first failure, which decides how the error is classified.
    pub fn first(&self) -> &Error {
        &self.failures[0].error
    }
}

impl core::fmt::Display for CurveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let first = &self.failures[0];
        write!(f, "{} of the grid points failed; first at z = {}: {}", self.failures.len(), first.z, first.error)
    }
}

impl core::error::Error for CurveError {}

/// Evaluates `model` at every grid point (sequentially).
pub fn force_curve<M: ForceModel + ?Sized>(model: &M, grid: &[f64]) -> Result<ForceCurve, CurveError> {
    validate_grid(grid).map_err(|error| CurveError {
        failures: Vec::from([PointFailure { index: 0, z: grid.first().copied().unwrap_or(f64::NAN), error }]),
        completed: Vec::new(),
    })?;
    let results = grid.iter().map(|&z| model.breakdown(z)).collect();
    ForceCurve::from_results(model, grid.to_vec(), results)
}

/// Non-empty, positive, finite and strictly ascending.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("grid (empty)", 0.0));
    }
    if let Some(&z) = grid.iter().find(|z| !(**z > 0.0) || !z.is_finite()) {
        return Err(Error::invalid("grid point", z));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("grid (not strictly ascending)", f64::NAN));
    }
    Ok(())
}

/// A zero of the force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub z_star: f64,
    /// Negative force slope: a small displacement is pushed back.
    pub stable: bool,
    /// `|dF/dz|` at `z_star`.
    pub stiffness: f64,
    /// For a stable point, the energy `V(z_u) − V(z_star)` needed to reach
    /// the next unstable point `z_u` at larger separation.
    pub barrier_to_next: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibria {
    pub points: Vec<EquilibriumPoint>,
    pub warnings: Vec<Warning>,
}

/// All force zeros on the curve's grid, refined against `model`, with
/// stability and barriers to the next unstable point.
pub fn find_equilibria<M: ForceModel + ?Sized>(model: &M, curve: &ForceCurve) -> Result<Equilibria> {
    let mut warnings = Vec::new();
    if let Some(w) = grid_resolution_warning(&curve.grid, model.oscillation_period()) {
        warnings.push(w);
    }
    let values = curve.forces();
    let mut force = |z: f64| model.force(z);
    let roots = try_roots_from_samples(&mut force, &curve.grid, &values)?;

    let barrier_spec = model
        .integration()
        .with_relative_tolerance((model.integration().relative_tolerance * 100.0).clamp(1e-10, 1e-6));
    let mut points = Vec::with_capacity(roots.len());
    for (i, root) in roots.iter().enumerate() {
        let stable = root.is_descending();
        let barrier_to_next = match roots.get(i + 1) {
            Some(next) if stable && !next.is_descending() => {
                Some(activation_barrier(|z| model.force(z), root.x, next.x, &barrier_spec)?)
            }
            _ => None,
        };
        points.push(EquilibriumPoint { z_star: root.x, stable, stiffness: root.slope.abs(), barrier_to_next });
    }
    Ok(Equilibria { points, warnings })
}

/// `ħc` in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.327;
/// Kelvin per eV.
pub const KELVIN_PER_EV: f64 = 11604.5;
/// Standard gravity in m/s².
pub const STANDARD_GRAVITY: f64 = 9.80665;
/// Joule per eV.
pub const JOULE_PER_EV: f64 = 1.602_176_634e-19;
/// Upper radius for gold spheres quoted alongside the dipole bound, in nm.
pub const GOLD_RADIUS_BOUND_NM: f64 = 20.0;

/// Conversion context between the dimensionless `ω_p` units and the lab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabUnits {
    /// Sphere plasma frequency `ħω_p` in eV.
    pub omega_p_ev: f64,
    /// Sphere mass density in g/cm³.
    pub rho_g_cm3: f64,
    /// Gravitational acceleration in m/s².
    pub gravity: f64,
}

impl LabUnits {
    pub fn new(omega_p_ev: f64, rho_g_cm3: f64) -> Result<Self> {
        if !(omega_p_ev > 0.0) || !omega_p_ev.is_finite() {
            return Err(Error::invalid("omega_p_ev", omega_p_ev));
        }
        if !(rho_g_cm3 > 0.0) || !rho_g_cm3.is_finite() {
            return Err(Error::invalid("rho", rho_g_cm3));
        }
        Ok(LabUnits { omega_p_ev, rho_g_cm3, gravity: STANDARD_GRAVITY })
    }

    /// `1/ω_p` in nm.
    pub fn length_unit_nm(&self) -> f64 {
        HBAR_C_EV_NM / self.omega_p_ev
    }

    pub fn length_to_nm(&self, x: f64) -> f64 {
        x * self.length_unit_nm()
    }

    pub fn length_from_nm(&self, nm: f64) -> f64 {
        nm / self.length_unit_nm()
    }

    pub fn energy_to_ev(&self, e: f64) -> f64 {
        e * self.omega_p_ev
    }

    pub fn energy_from_ev(&self, ev: f64) -> f64 {
        ev / self.omega_p_ev
    }

    pub fn ev_to_kelvin(ev: f64) -> f64 {
        ev * KELVIN_PER_EV
    }

    pub fn kelvin_to_ev(kelvin: f64) -> f64 {
        kelvin / KELVIN_PER_EV
    }

    /// `β` in `1/ω_p` units for a temperature in kelvin.
    pub fn beta_from_kelvin(&self, kelvin: f64) -> f64 {
        self.omega_p_ev / Self::kelvin_to_ev(kelvin)
    }

    pub fn kelvin_from_beta(&self, beta: f64) -> f64 {
        Self::ev_to_kelvin(self.omega_p_ev / beta)
    }
}

/// Rule-of-thumb ratio of the peak force to the weight,
/// `27 (ω_p/1 eV)⁴ (1 μm/z)(1 g cm⁻³/ρ) e^{−5 (γ_s/1 eV)(z/1 μm)}`.
pub fn levitation_ratio_formula(units: &LabUnits, z_um: f64, gamma_s_ev: f64) -> f64 {
    27.0 * units.omega_p_ev.powi(4) / z_um / units.rho_g_cm3 * (-5.0 * gamma_s_ev * z_um).exp()
}

/// Barrier `W` (in `α_0 ω_p⁴`) as a temperature, for a sphere of radius
/// `a_nm`: `W · 4π(a ω_p/ħc)³ · ħω_p / k_B`.
pub fn barrier_in_kelvin(w: f64, a_nm: f64, units: &LabUnits) -> f64 {
    let a = units.length_from_nm(a_nm);
    LabUnits::ev_to_kelvin(units.energy_to_ev(w * 4.0 * PI * a * a * a))
}

/// Radius limits for the dipole treatment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeBound {
    /// `a ω_p = 1`, in nm.
    pub dipole_limit_nm: f64,
    /// Quoted bound for gold spheres, in nm.
    pub gold_bound_nm: f64,
}

pub fn sphere_size_bound(units: &LabUnits) -> SizeBound {
    SizeBound { dipole_limit_nm: units.length_unit_nm(), gold_bound_nm: GOLD_RADIUS_BOUND_NM }
}

/// Exact ratio of a dimensionless force `F` (in `α_0 ω_p⁵`) to the weight
/// `ρ (4/3)πa³ g`; the radius cancels:
/// `3 F (ħω_p)⁵ / ((ħc)⁴ ρ g)` in SI after unit bookkeeping.
pub fn peak_force_to_gravity(f_peak: f64, units: &LabUnits) -> f64 {
    // eV/nm → N is 1e9·JOULE_PER_EV; g/cm³ → kg/m³ is 1e3; nm³ → m³ is 1e−27.
    let si = JOULE_PER_EV * 1e9 / (1e3 * 1e-27);
    3.0 * f_peak * units.omega_p_ev.powi(5) / HBAR_C_EV_NM.powi(4) * si / (units.rho_g_cm3 * units.gravity)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(forces: &[f64]) -> ForceCurve {
        let grid: Vec<f64> = (1..=forces.len()).map(|i| i as f64).collect();
        let samples =
            grid.iter().zip(forces).map(|(&z, &f)| PotentialBreakdown::from_parts(z, 0.0, 0.0, f, 0.0)).collect();
        ForceCurve { grid, samples, perfect_wall: None, warnings: Vec::new() }
    }

    #[test]
    fn extrema_and_sign_changes() {
        let c = curve(&[1.0, 2.0, -1.0, -3.0, 0.5, 0.2]);
        assert_eq!(c.extrema(), [1, 3, 4]);
        assert_eq!(c.sign_changes(), 2);
        assert_eq!(c.peak_force(), 3.0);
    }

    #[test]
    fn warnings_are_deduplicated_by_kind() {
        let mut list = Vec::new();
        push_kind_once(&mut list, Warning::UnderResolvedGrid { spacing: 1.0, period: 2.0 });
        push_kind_once(&mut list, Warning::UnderResolvedGrid { spacing: 3.0, period: 2.0 });
        assert_eq!(list.len(), 1);
    }
}
