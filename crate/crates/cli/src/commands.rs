//! The subcommands. Each turns [`Settings`] into a [`Report`].

use rayon::prelude::*;
use sphere_casimir::analysis::{
    barrier_in_kelvin, find_equilibria, levitation_ratio_formula, linear_grid, sphere_size_bound, ForceCurve,
    ForceModel, LabUnits, SphereWallModel,
};
use sphere_casimir::materials::{Material, SphereSpec};
use sphere_casimir::potential::{cp_spectrum, regularized_spectrum_integral, spectral_e2, Polarizability, Scenario};
use sphere_casimir::quadrature::IntegrationSpec;
use sphere_casimir::reflection::WallResponse;
use sphere_casimir::thermal::{activation_barrier, ThermalState};
use sphere_casimir::Warning;

use crate::config::{PolarizabilityChoice, Settings, WallRatio};
use crate::error::CliError;
use crate::output::{Cell, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Potential and force on a grid of separations (finite temperature if --beta is set).
    Force,
    /// Stable and unstable equilibria with stiffness and barriers.
    Equilibria,
    /// Potential and force at the inverse temperature --beta.
    Thermal,
    /// Casimir–Polder spectrum σ(ω) and the mode density ⟨E²⟩_ω at one separation.
    Spectrum,
    /// Laboratory-unit report: barrier temperature, levitation ratio, size bounds.
    Units,
}

pub fn run(command: Command, s: &Settings) -> Result<Report, CliError> {
    match command {
        Command::Force => force(s, "force"),
        Command::Thermal => {
            if s.beta.is_none() {
                return Err(CliError::Config("the thermal command needs --beta".into()));
            }
            force(s, "thermal")
        }
        Command::Equilibria => equilibria(s),
        Command::Spectrum => spectrum(s),
        Command::Units => units(s),
    }
}

fn wall(s: &Settings) -> Result<WallResponse, CliError> {
    match s.wall_ratio {
        WallRatio::Perfect if s.gamma_w != 0.0 => {
            Err(CliError::Config("gamma_w needs a finite wall_ratio, not \"perfect\"".into()))
        }
        WallRatio::Perfect => Ok(WallResponse::PerfectConductor),
        WallRatio::Ratio(r) => Ok(WallResponse::Dielectric(Material::new(r, s.gamma_w)?)),
    }
}

fn integration(s: &Settings) -> Result<IntegrationSpec, CliError> {
    if !(s.rel_tol > 0.0 && s.rel_tol < 1.0) {
        return Err(CliError::Config(format!("rel_tol must lie in (0, 1), got {}", s.rel_tol)));
    }
    Ok(IntegrationSpec::PRODUCTION.with_relative_tolerance(s.rel_tol))
}

/// The model described by the settings; validates every physical parameter.
pub fn model(s: &Settings) -> Result<SphereWallModel, CliError> {
    let sphere = SphereSpec::new(s.radius, Material::new(1.0, s.gamma_s)?)?;
    let thermal = s.beta.map(ThermalState::new).transpose()?;
    let polarizability = match s.polarizability {
        PolarizabilityChoice::Drude => Polarizability::Drude,
        PolarizabilityChoice::Static => Polarizability::Static,
    };
    Ok(SphereWallModel::new(sphere, wall(s)?)
        .with_thermal(thermal)
        .with_polarizability(polarizability)
        .with_integration(integration(s)?))
}

/// Grid points are evaluated in parallel; the curve keeps grid order.
fn curve(m: &SphereWallModel, s: &Settings) -> Result<ForceCurve, CliError> {
    let grid = linear_grid(s.z_min, s.z_max, s.points)?;
    let results = grid.par_iter().map(|&z| m.breakdown(z)).collect();
    let mut c = ForceCurve::from_results(m, grid, results)?;
    if s.reference {
        let reference = m.with_wall(WallResponse::PerfectConductor);
        let forces: Result<Vec<f64>, _> = c.grid.par_iter().map(|&z| reference.force(z)).collect();
        c.perfect_wall = Some(forces?);
    }
    Ok(c)
}

fn warning_strings(w: &[Warning]) -> Vec<String> {
    w.iter().map(ToString::to_string).collect()
}

fn force(s: &Settings, name: &'static str) -> Result<Report, CliError> {
    let m = model(s)?;
    let c = curve(&m, s)?;
    let mut columns = vec!["z", "V_j", "V_p", "V", "F_j", "F_p", "F"];
    if c.perfect_wall.is_some() {
        columns.push("F_perfect_wall");
    }
    let mut report = Report::new(name, columns);
    report.warnings = warning_strings(&c.warnings);
    for (i, b) in c.samples.iter().enumerate() {
        let mut row: Vec<Cell> =
            [b.z, b.v_j, b.v_p, b.v_total, b.f_j, b.f_p, b.f_total].into_iter().map(Cell::Num).collect();
        if let Some(reference) = &c.perfect_wall {
            row.push(Cell::Num(reference[i]));
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// Kelvin conversion, available when both lab parameters are given.
fn kelvin(s: &Settings) -> Result<Option<(LabUnits, f64)>, CliError> {
    match (s.omega_p_ev, s.radius_nm) {
        (Some(ev), Some(a)) => Ok(Some((LabUnits::new(ev, s.rho.unwrap_or(1.0))?, a))),
        _ => Ok(None),
    }
}

fn barrier(m: &SphereWallModel, from: f64, to: f64) -> Result<f64, CliError> {
    let spec = m.integration.with_relative_tolerance((m.integration.relative_tolerance * 100.0).clamp(1e-10, 1e-6));
    Ok(activation_barrier(|z| m.force(z), from, to, &spec)?)
}

fn equilibria(s: &Settings) -> Result<Report, CliError> {
    let m = model(s)?;
    let c = curve(&m, s)?;
    let eq = find_equilibria(&m, &c)?;
    let lab = kelvin(s)?;
    let mut columns = vec!["z_star", "stability", "stiffness", "barrier_to_next"];
    if lab.is_some() {
        columns.push("barrier_to_next_K");
    }
    let mut report = Report::new("equilibria", columns);
    let mut warnings = c.warnings.clone();
    for w in eq.warnings {
        if !warnings.iter().any(|x| std::mem::discriminant(x) == std::mem::discriminant(&w)) {
            warnings.push(w);
        }
    }
    report.warnings = warning_strings(&warnings);
    if eq.points.is_empty() {
        report.notes.push("no equilibria".into());
    }
    for p in &eq.points {
        let mut row = vec![
            Cell::Num(p.z_star),
            Cell::from(if p.stable { "stable" } else { "unstable" }),
            Cell::Num(p.stiffness),
            Cell::from(p.barrier_to_next),
        ];
        if let Some((units, a)) = &lab {
            row.push(Cell::from(p.barrier_to_next.map(|w| barrier_in_kelvin(w, *a, units))));
        }
        report.rows.push(row);
    }
    if let Some((from, to)) = s.barrier_interval()? {
        let w = barrier(&m, from, to)?;
        report.meta("barrier", w);
        if let Some((units, a)) = &lab {
            report.meta("barrier_K", barrier_in_kelvin(w, *a, units));
        }
    }
    Ok(report)
}

fn spectrum(s: &Settings) -> Result<Report, CliError> {
    let z = s.z.unwrap_or(s.z_min);
    let spec = integration(s)?;
    let scenario = Scenario::new(SphereSpec::new(s.radius, Material::new(1.0, s.gamma_s)?)?, wall(s)?, z)?;
    let ordered = 0.0 <= s.omega_min && s.omega_min < s.omega_max && s.omega_max.is_finite();
    if !ordered || s.omega_points < 2 {
        return Err(CliError::Config(format!(
            "need 0 <= omega_min < omega_max and omega_points >= 2, got [{}, {}] with {} points",
            s.omega_min, s.omega_max, s.omega_points
        )));
    }
    let step = (s.omega_max - s.omega_min) / (s.omega_points - 1) as f64;
    let omegas: Vec<f64> = (0..s.omega_points)
        .map(|i| if i + 1 == s.omega_points { s.omega_max } else { s.omega_min + step * i as f64 })
        .collect();
    // At ω = 0 the integrand is real and the mode density vanishes.
    let e2: Result<Vec<f64>, _> =
        omegas.par_iter().map(|&w| if w == 0.0 { Ok(0.0) } else { spectral_e2(&scenario, w, &spec) }).collect();
    let e2 = e2?;

    let mut report = Report::new("spectrum", vec!["omega", "sigma", "E2"]);
    report.meta("separation", z);
    report.meta("sigma_integral_regularized", regularized_spectrum_integral(z, &spec)?);
    report.meta("sigma_integral_expected", -1.5 / z);
    report.warnings = warning_strings(&scenario.warnings());
    for (&w, &e) in omegas.iter().zip(&e2) {
        report.rows.push(vec![Cell::Num(w), Cell::Num(cp_spectrum(w, z)), Cell::Num(e)]);
    }
    Ok(report)
}

fn units(s: &Settings) -> Result<Report, CliError> {
    let ev = s.omega_p_ev.unwrap_or(10.0);
    let units = LabUnits::new(ev, s.rho.unwrap_or(1.0))?;
    let a_nm = s.radius_nm.unwrap_or(20.0);
    let z_um = s.z_um.unwrap_or(1.0);
    if a_nm.is_nan() || a_nm <= 0.0 || z_um.is_nan() || z_um <= 0.0 {
        return Err(CliError::Config("radius_nm and z_um must be positive".into()));
    }
    let (from, to) = s.barrier_interval()?.unwrap_or((4.0, 7.0));
    let m = model(s)?;
    let w = barrier(&m, from, to)?;
    let bound = sphere_size_bound(&units);

    let mut report = Report::new("units", vec!["quantity", "value", "unit"]);
    let mut row = |q: &str, v: f64, unit: &str| report.rows.push(vec![q.into(), Cell::Num(v), unit.into()]);
    row("omega_p", ev, "eV");
    row("rho", units.rho_g_cm3, "g/cm^3");
    row("length_unit", units.length_unit_nm(), "nm");
    row("energy_unit", units.energy_to_ev(1.0), "eV");
    row("radius", a_nm, "nm");
    row("radius_dimensionless", units.length_from_nm(a_nm), "1/omega_p");
    row("dipole_limit", bound.dipole_limit_nm, "nm");
    row("gold_radius_bound", bound.gold_bound_nm, "nm");
    row("barrier_from", from, "1/omega_p");
    row("barrier_to", to, "1/omega_p");
    row("barrier_from_nm", units.length_to_nm(from), "nm");
    row("barrier_to_nm", units.length_to_nm(to), "nm");
    row("barrier", w, "alpha_0*omega_p^4");
    row("barrier_temperature", barrier_in_kelvin(w, a_nm, &units), "K");
    row("levitation_z", z_um, "um");
    row("levitation_ratio", levitation_ratio_formula(&units, z_um, s.gamma_s * ev), "1");
    if let Some(beta) = s.beta {
        row("temperature", units.kelvin_from_beta(beta), "K");
    }
    report.warnings = warning_strings(&m.warnings_at(from));
    Ok(report)
}
