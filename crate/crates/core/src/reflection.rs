//! Reflection coefficients `r` (TE) and `r′` (TM) of the wall.
//!
//! Three parametrizations are provided: a general complex mode `(k, ω)`,
//! the polar imaginary-axis variables `(u, t)` and the Matsubara variables
//! `(ζ_n, k)`. The last two are closed real formulas for the undamped wall;
//! for `γ_w = 0` all three agree.
//!
//! Square roots for `κ² = k² − ω²` and `κ₁² = k² − ω² ε_w` follow one rule,
//! [`outgoing_sqrt`]: the principal branch, with the negative real axis
//! approached from below. This is the `γ → 0⁺` continuation of the damped
//! case, so propagating modes get `κ = −i√(ω² − k²)`.

use num_complex::Complex64;

use crate::materials::Material;
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// The half-space the sphere faces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WallResponse {
    Dielectric(Material),
    /// The `ε_w → ∞` limit, with `r = −1` and `r′ = 1` exactly.
    PerfectConductor,
}

impl WallResponse {
    /// Undamped Drude wall with plasma frequency `ω_q`.
    pub fn plasma(omega_q: f64) -> Result<Self> {
        Ok(WallResponse::Dielectric(Material::plasma(omega_q)?))
    }

    pub fn material(&self) -> Option<&Material> {
        match self {
            WallResponse::Dielectric(m) => Some(m),
            WallResponse::PerfectConductor => None,
        }
    }

    /// Damping of the wall; zero for the perfect conductor.
    pub fn gamma(&self) -> f64 {
        self.material().map_or(0.0, Material::gamma)
    }

    pub fn is_undamped(&self) -> bool {
        self.gamma() == 0.0
    }
}

/// A transverse plane-wave component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMode {
    k: f64,
    omega: Complex64,
}

impl TransverseMode {
    pub fn new(k: f64, omega: Complex64) -> Result<Self> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::invalid("k", k));
        }
        Ok(TransverseMode { k, omega })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }
}

/// A pair of reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection<T> {
    pub r: T,
    pub r_prime: T,
}

impl Reflection<f64> {
    const PERFECT: Reflection<f64> = Reflection { r: -1.0, r_prime: 1.0 };
}

impl Reflection<Complex64> {
    const PERFECT: Reflection<Complex64> =
        Reflection { r: Complex64::new(-1.0, 0.0), r_prime: Complex64::new(1.0, 0.0) };

    fn mean(self, other: Self) -> Self {
        Reflection { r: (self.r + other.r) * 0.5, r_prime: (self.r_prime + other.r_prime) * 0.5 }
    }
}

/// Principal square root, except that the negative real axis maps to
/// `−i√|x|` (the limit from `Im < 0`).
pub fn outgoing_sqrt(x: Complex64) -> Complex64 {
    if x.im == 0.0 && x.re < 0.0 {
        Complex64::new(0.0, -(-x.re).sqrt())
    } else {
        x.sqrt()
    }
}

/// `κ = √(k² − ω²)` on the outgoing branch.
pub fn kappa(mode: &TransverseMode) -> Complex64 {
    outgoing_sqrt(Complex64::new(mode.k * mode.k, 0.0) - mode.omega * mode.omega)
}

/// `r = (κ − κ₁)/(κ + κ₁)`, `r′ = (κε_w − κ₁)/(κε_w + κ₁)` at the mode.
pub fn fresnel(wall: &WallResponse, mode: &TransverseMode) -> Result<Reflection<Complex64>> {
    match wall {
        WallResponse::PerfectConductor => Ok(Reflection::<Complex64>::PERFECT),
        WallResponse::Dielectric(m) => coefficients_at(m.omega_plasma(), m.gamma(), kappa(mode), mode.omega),
    }
}

/// Mean of the coefficients with wall damping `+γ_w` and `−γ_w`; the two
/// terms come from the first- and third-quadrant poles of `α_r`.
pub fn fresnel_averaged(wall: &WallResponse, mode: &TransverseMode) -> Result<Reflection<Complex64>> {
    averaged_at(wall, kappa(mode), mode.omega)
}

pub(crate) fn averaged_at(wall: &WallResponse, kappa: Complex64, omega: Complex64) -> Result<Reflection<Complex64>> {
    match wall {
        WallResponse::PerfectConductor => Ok(Reflection::<Complex64>::PERFECT),
        WallResponse::Dielectric(m) if m.gamma() == 0.0 => coefficients_at(m.omega_plasma(), 0.0, kappa, omega),
        WallResponse::Dielectric(m) => {
            let plus = coefficients_at(m.omega_plasma(), m.gamma(), kappa, omega)?;
            let minus = coefficients_at(m.omega_plasma(), -m.gamma(), kappa, omega)?;
            Ok(plus.mean(minus))
        }
    }
}

/// Coefficients for a given `κ` (already on its branch) and frequency `ω`.
///
/// Uses `ω²(1 − ε_w) = ω_q² ω/(ω + iγ)`, which stays finite at `ω = 0`, so
/// `κ₁² = κ² + ω_q² ω/(ω + iγ)` and `r′ = (κ(ω² − s) − ω²κ₁)/(κ(ω² − s) + ω²κ₁)`.
pub(crate) fn coefficients_at(
    omega_q: f64,
    gamma: f64,
    kappa: Complex64,
    omega: Complex64,
) -> Result<Reflection<Complex64>> {
    let damped = omega + Complex64::new(0.0, gamma);
    if damped == Complex64::new(0.0, 0.0) {
        // Pole of ε_w; both coefficients are regular there and take their ε_w → ∞ values.
        return Ok(Reflection::<Complex64>::PERFECT);
    }
    let shift = omega * (omega_q * omega_q) / damped;
    let kappa1 = outgoing_sqrt(kappa * kappa + shift);
    let w2 = omega * omega;

    let te_den = kappa + kappa1;
    let a = kappa * (w2 - shift);
    let b = w2 * kappa1;
    let tm_den = a + b;
    if te_den == Complex64::new(0.0, 0.0) || !te_den.is_finite() {
        return Err(Error::DegenerateDenominator { which: "r" });
    }
    if tm_den == Complex64::new(0.0, 0.0) || !tm_den.is_finite() {
        return Err(Error::DegenerateDenominator { which: "r'" });
    }
    Ok(Reflection { r: (kappa - kappa1) / te_den, r_prime: (a - b) / tm_den })
}

/// Undamped-wall coefficients in the polar variables `ζ = ut`, `k = u√(1 − t²)`:
///
/// `r = (u − √(u²+ω_q²))/(u + √(u²+ω_q²))`,
/// `r′ = (u²t² + ω_q² − ut²√(u²+ω_q²))/(u²t² + ω_q² + ut²√(u²+ω_q²))`.
///
/// The wall damping is ignored; use [`fresnel_averaged`] for `γ_w > 0`.
pub fn fresnel_polar(wall: &WallResponse, u: f64, t: f64) -> Reflection<f64> {
    let m = match wall {
        WallResponse::PerfectConductor => return Reflection::<f64>::PERFECT,
        WallResponse::Dielectric(m) => m,
    };
    let wq2 = m.omega_plasma() * m.omega_plasma();
    let root = (u * u + wq2).sqrt();
    let sum = u + root;
    let t2 = t * t;
    // u − √(u²+ω_q²) = −ω_q²/(u + √(u²+ω_q²)) avoids cancellation at large u.
    let r = -wq2 / (sum * sum);
    let numerator = wq2 * (1.0 - u * t2 / sum);
    let denominator = u * u * t2 + wq2 + u * t2 * root;
    Reflection { r, r_prime: numerator / denominator }
}

/// Undamped-wall coefficients at the Matsubara frequency `ζ_n` and
/// transverse wavenumber `k`, with `κ = √(k² + ζ_n²)`:
///
/// `r = (κ − √(κ²+ω_q²))/(κ + √(κ²+ω_q²))`,
/// `r′ = (κ(ζ_n²+ω_q²) − ζ_n²√(κ²+ω_q²))/(κ(ζ_n²+ω_q²) + ζ_n²√(κ²+ω_q²))`.
pub fn fresnel_matsubara(wall: &WallResponse, zeta_n: f64, k: f64) -> Reflection<f64> {
    let kappa = (k * k + zeta_n * zeta_n).sqrt();
    imaginary_axis_coefficients(wall, zeta_n, kappa)
}

pub(crate) fn imaginary_axis_coefficients(wall: &WallResponse, zeta: f64, kappa: f64) -> Reflection<f64> {
    let m = match wall {
        WallResponse::PerfectConductor => return Reflection::<f64>::PERFECT,
        WallResponse::Dielectric(m) => m,
    };
    if kappa == 0.0 {
        // Static, k = 0 limit taken along ζ = 0.
        return Reflection::<f64>::PERFECT;
    }
    let wq2 = m.omega_plasma() * m.omega_plasma();
    let root = (kappa * kappa + wq2).sqrt();
    let sum = kappa + root;
    let z2 = zeta * zeta;
    let r = -wq2 / (sum * sum);
    let numerator = wq2 * (kappa - z2 / sum);
    let denominator = kappa * (z2 + wq2) + z2 * root;
    Reflection { r, r_prime: numerator / denominator }
}
