use std::f64::consts::PI;

use approx::assert_relative_eq;
use sphere_casimir::materials::{Material, SphereSpec};
use sphere_casimir::potential::{breakdown, Scenario};
use sphere_casimir::quadrature::{integrate_semi_infinite, IntegrationSpec, SeriesSpec};
use sphere_casimir::reflection::{fresnel_matsubara, WallResponse};
use sphere_casimir::thermal::*;
use sphere_casimir::{Complex64, Error, ErrorKind};

const PRODUCTION: IntegrationSpec = IntegrationSpec::PRODUCTION;

fn scenario(wall: WallResponse, z: f64) -> Scenario {
    Scenario::new(SphereSpec::new(0.01, Material::plasma(1.0).unwrap()).unwrap(), wall, z).unwrap()
}

fn plasma_wall(omega_q: f64) -> WallResponse {
    WallResponse::plasma(omega_q).unwrap()
}

/// Plain truncated Matsubara sum over `k` integrals, no tail logic.
fn v_j_brute_force(s: &Scenario, beta: f64, terms: usize) -> f64 {
    let z = s.z();
    let wall = *s.wall();
    let spec = IntegrationSpec::ORACLE.with_decay_scale(0.5 / z);
    let mut sum = 0.0;
    for n in 0..terms {
        let zeta = 2.0 * PI * n as f64 / beta;
        let integral = integrate_semi_infinite(
            |k: f64| {
                let kappa = (k * k + zeta * zeta).sqrt();
                let c = fresnel_matsubara(&wall, zeta, k);
                k / kappa
                    * (-zeta * zeta * c.r + (2.0 * k * k + zeta * zeta) * c.r_prime)
                    * (-2.0 * (kappa - zeta) * z).exp()
            },
            &spec,
        )
        .unwrap()
        .value;
        let weight = if n == 0 { 0.5 } else { 1.0 };
        sum += weight * integral * (-2.0 * zeta * z).exp() / (3.0 * zeta * zeta + 1.0);
    }
    -sum / (4.0 * PI * beta)
}

#[test]
fn matsubara_sum_matches_brute_force() {
    let series = SeriesSpec::default();
    for (wall, z, beta) in
        [(plasma_wall(2.0), 4.0, 5.0), (plasma_wall(0.5), 3.0, 20.0), (WallResponse::PerfectConductor, 5.0, 8.0)]
    {
        let s = scenario(wall, z);
        let t = ThermalState::new(beta).unwrap();
        let terms = (beta * 4.0) as usize + 20;
        assert_relative_eq!(
            v_j_thermal(&s, &t, &IntegrationSpec::ORACLE, &series).unwrap(),
            v_j_brute_force(&s, beta, terms),
            max_relative = 1e-8
        );
    }
}

#[test]
fn classical_limit_keeps_only_static_term() {
    // Only n = 0 survives: ½ · ∫ 2κ² e^{−2κz} dκ = 1/(4z³).
    let (z, beta) = (5.0, 0.1);
    let s = scenario(WallResponse::PerfectConductor, z);
    let t = ThermalState::new(beta).unwrap();
    let v = v_j_thermal(&s, &t, &PRODUCTION, &SeriesSpec::default()).unwrap();
    assert_relative_eq!(v, -1.0 / (16.0 * PI * beta * z.powi(3)), max_relative = 1e-12);
    let f = force_j_thermal(&s, &t, &PRODUCTION, &SeriesSpec::default()).unwrap();
    assert_relative_eq!(f, -3.0 / (16.0 * PI * beta * z.powi(4)), max_relative = 1e-12);
}

#[test]
fn perfect_wall_closed_form_matches_opaque_dielectric() {
    let t = ThermalState::new(5.0).unwrap();
    let series = SeriesSpec::default();
    let a = thermal_breakdown(&scenario(WallResponse::PerfectConductor, 4.0), &t, &PRODUCTION, &series).unwrap();
    let b = thermal_breakdown(&scenario(plasma_wall(1e5), 4.0), &t, &PRODUCTION, &series).unwrap();
    assert_relative_eq!(a.v_j, b.v_j, max_relative = 1e-4);
    assert_relative_eq!(a.f_j, b.f_j, max_relative = 1e-4);
}

#[test]
fn low_temperature_limit() {
    let t = ThermalState::new(1e3).unwrap();
    for wall in [plasma_wall(2.0), WallResponse::PerfectConductor] {
        for z in [3.0, 5.0, 8.0] {
            let s = scenario(wall, z);
            let hot = thermal_breakdown(&s, &t, &PRODUCTION, &SeriesSpec::default()).unwrap();
            let cold = breakdown(&s, &PRODUCTION).unwrap();
            assert_relative_eq!(hot.v_total, cold.v_total, max_relative = 1e-2);
        }
    }
}

#[test]
fn force_is_minus_derivative_of_potential() {
    let t = ThermalState::new(5.0).unwrap();
    let series = SeriesSpec::default();
    let spec = IntegrationSpec::ORACLE;
    let s = scenario(plasma_wall(1.0), 6.0);
    let v = |z: f64| thermal_breakdown(&s.at(z).unwrap(), &t, &spec, &series).unwrap().v_total;
    let h = 1e-3;
    let d = (-v(6.0 + 2.0 * h) + 8.0 * v(6.0 + h) - 8.0 * v(6.0 - h) + v(6.0 - 2.0 * h)) / (12.0 * h);
    let f = thermal_breakdown(&s, &t, &spec, &series).unwrap().f_total;
    assert_relative_eq!(f, -d, max_relative = 1e-5);
}

#[test]
fn bose_weight_limits() {
    let w = Complex64::new(0.6, 0.0);
    assert_relative_eq!(ThermalState::new(1e4).unwrap().bose_weight(w).re, 0.5, epsilon = 1e-15);
    // 1/(e^{x} − 1) + ½ = ½ coth(x/2)
    let t = ThermalState::new(3.0).unwrap();
    assert_relative_eq!(t.bose_weight(w).re, 0.5 / (0.9f64).tanh(), max_relative = 1e-14);
    assert_eq!(t.matsubara(0), 0.0);
    assert_relative_eq!(t.matsubara(3), 2.0 * PI, max_relative = 1e-15);
}

#[test]
fn damped_wall_is_rejected() {
    let wall = WallResponse::Dielectric(Material::new(2.0, 0.1).unwrap());
    let e = v_j_thermal(&scenario(wall, 5.0), &ThermalState::new(5.0).unwrap(), &PRODUCTION, &SeriesSpec::default())
        .unwrap_err();
    assert!(matches!(e, Error::RequiresPlasmaWall { .. }));
    assert_eq!(e.kind(), ErrorKind::Domain);
}

#[test]
fn invalid_temperature() {
    assert!(ThermalState::new(0.0).is_err());
    assert!(ThermalState::new(-1.0).is_err());
    assert!(ThermalState::new(f64::NAN).is_err());
}

#[test]
fn thermal_warning() {
    assert!(ThermalState::new(5.0).unwrap().warnings(0.01).is_empty());
    assert_eq!(ThermalState::new(0.01).unwrap().warnings(0.01).len(), 1);
}

#[test]
fn barrier_between_levitation_points() {
    let s = scenario(plasma_wall(2.0), 4.0);
    let force = |z: f64| Ok(breakdown(&s.at(z)?, &PRODUCTION)?.f_total);
    let spec = PRODUCTION.with_relative_tolerance(1e-7);
    let w = activation_barrier(force, 4.0, 7.0, &spec).unwrap();
    assert!((w - 1.4e-3).abs() <= 0.25 * 1.4e-3, "{w}");

    // W = V(7) − V(4).
    let v = |z: f64| breakdown(&s.at(z).unwrap(), &PRODUCTION).unwrap().v_total;
    assert_relative_eq!(w, v(7.0) - v(4.0), max_relative = 1e-6);

    let back = activation_barrier(force, 7.0, 4.0, &spec).unwrap();
    assert_relative_eq!(back, -w, max_relative = 1e-9);
    assert_eq!(activation_barrier(force, 5.0, 5.0, &spec).unwrap(), 0.0);
    assert!(activation_barrier(force, 0.0, 5.0, &spec).is_err());
}
