//! Numerical engines shared by the potential and thermal modules.
//!
//! - [`integrate_finite`] / [`integrate_semi_infinite`]: globally adaptive
//!   Gauss–Kronrod (10/21) integration with error estimates.
//! - [`sum_matsubara`]: half-weighted series `½ t₀ + Σ_{n≥1} t_n` with a
//!   geometric tail bound.
//! - [`find_roots_bracketed`]: sign-change scan plus Brent refinement.
//!
//! The integrators work on any [`QuadValue`], so a potential and its force
//! (or the real and imaginary parts of a contour integral) share one set of
//! abscissae.

mod adaptive;
mod gauss_kronrod;
mod roots;
mod series;

pub use adaptive::{
    integrate_finite, integrate_semi_infinite, try_integrate_breakpoints, try_integrate_finite,
    try_integrate_semi_infinite,
};
pub(crate) use roots::try_roots_from_samples;
pub use roots::{brent, find_roots_bracketed, try_find_roots_bracketed, Root};
pub use series::{sum_matsubara, try_sum_matsubara, SeriesSum};

use num_complex::Complex64;

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Upper bound on the number of live subintervals.
    pub max_subdivisions: usize,
    /// Length over which a semi-infinite integrand decays by `1/e`; sets the
    /// panel width and the analytic tail bound.
    pub decay_scale: f64,
}

impl IntegrationSpec {
    /// Tolerances used for production curves.
    pub const PRODUCTION: IntegrationSpec = IntegrationSpec {
        relative_tolerance: 1e-8,
        absolute_tolerance: 1e-20,
        max_subdivisions: 2000,
        decay_scale: 1.0,
    };

    /// Tighter tolerances used when results are compared against oracles.
    pub const ORACLE: IntegrationSpec = IntegrationSpec {
        relative_tolerance: 1e-10,
        absolute_tolerance: 1e-22,
        max_subdivisions: 4000,
        decay_scale: 1.0,
    };

    pub fn with_relative_tolerance(mut self, tol: f64) -> Self {
        self.relative_tolerance = tol;
        self
    }

    pub fn with_absolute_tolerance(mut self, tol: f64) -> Self {
        self.absolute_tolerance = tol;
        self
    }

    pub fn with_decay_scale(mut self, scale: f64) -> Self {
        self.decay_scale = scale;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        if !(self.relative_tolerance > 0.0) {
            return Err(crate::Error::invalid("relative_tolerance", self.relative_tolerance));
        }
        if !(self.absolute_tolerance > 0.0) {
            return Err(crate::Error::invalid("absolute_tolerance", self.absolute_tolerance));
        }
        if !(self.decay_scale > 0.0) || !self.decay_scale.is_finite() {
            return Err(crate::Error::invalid("decay_scale", self.decay_scale));
        }
        if self.max_subdivisions == 0 {
            return Err(crate::Error::invalid("max_subdivisions", 0.0));
        }
        Ok(())
    }

    pub(crate) fn tolerance_for(&self, magnitude: f64) -> f64 {
        self.absolute_tolerance.max(self.relative_tolerance * magnitude)
    }
}

impl Default for IntegrationSpec {
    fn default() -> Self {
        Self::PRODUCTION
    }
}

/// Tolerances for [`sum_matsubara`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    pub relative_tail_tolerance: f64,
    pub max_terms: usize,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        SeriesSpec { relative_tail_tolerance: 1e-9, max_terms: 200_000 }
    }
}

/// An integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Values the integrators and series can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, factor: f64) -> Self;
    /// Size used in error control (max-norm for arrays).
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        num_traits::Float::abs(self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

impl<T: QuadValue, const N: usize> QuadValue for [T; N] {
    fn zero() -> Self {
        [T::zero(); N]
    }
    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a = a.add(b);
        }
        self
    }
    fn sub(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a = a.sub(b);
        }
        self
    }
    fn scale(mut self, factor: f64) -> Self {
        for a in self.iter_mut() {
            *a = a.scale(factor);
        }
        self
    }
    fn norm(self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}
