use super::{QuadValue, SeriesSpec};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Result of a half-weighted series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum<T> {
    pub value: T,
    /// Geometric bound on the neglected tail.
    pub tail_bound: f64,
    /// Number of terms evaluated, including `n = 0`.
    pub terms: usize,
}

/// `½·term(0) + Σ_{n≥1} term(n)` for an infallible term.
pub fn sum_matsubara<T, F>(mut term: F, spec: &SeriesSpec) -> Result<SeriesSum<T>>
where
    T: QuadValue,
    F: FnMut(usize) -> T,
{
    try_sum_matsubara(|n| Ok(term(n)), spec)
}

/// `½·term(0) + Σ_{n≥1} term(n)`, stopping once the geometric tail bound
/// `|t_n|·ρ/(1−ρ)` (with `ρ` the larger of the last two term ratios) stays
/// below `relative_tail_tolerance·|sum|` for two consecutive terms.
///
/// Terms must eventually decay at least geometrically.
pub fn try_sum_matsubara<T, F>(mut term: F, spec: &SeriesSpec) -> Result<SeriesSum<T>>
where
    T: QuadValue,
    F: FnMut(usize) -> Result<T>,
{
    if !(spec.relative_tail_tolerance > 0.0) {
        return Err(Error::invalid("relative_tail_tolerance", spec.relative_tail_tolerance));
    }
    if spec.max_terms < 2 {
        return Err(Error::invalid("max_terms", spec.max_terms as f64));
    }

    let mut sum = term(0)?.scale(0.5);
    let mut previous = f64::NAN;
    let mut previous_ratio = f64::INFINITY;
    let mut quiet = 0;

    for n in 1..spec.max_terms {
        let t = term(n)?;
        sum = sum.add(t);
        let size = t.norm();

        let ratio = if n == 1 {
            f64::INFINITY
        } else if previous == 0.0 {
            if size == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            size / previous
        };
        let rho = ratio.max(previous_ratio);
        let tail = if rho < 1.0 { size * rho / (1.0 - rho) } else { f64::INFINITY };

        if tail <= spec.relative_tail_tolerance * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(SeriesSum { value: sum, tail_bound: tail, terms: n + 1 });
            }
        } else {
            quiet = 0;
        }
        previous = size;
        previous_ratio = ratio;
    }
    Err(Error::Series { partial: sum.norm(), terms: spec.max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_half() {
        let s = sum_matsubara(|n| 0.5f64.powi(n as i32), &SeriesSpec::default()).unwrap();
        assert!((s.value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn only_zeroth_term() {
        let s = sum_matsubara(|n| if n == 0 { 1.0 } else { 0.0 }, &SeriesSpec::default()).unwrap();
        assert_eq!(s.value, 0.5);
        assert!(s.terms <= 6);
    }

    #[test]
    fn exponential_terms() {
        let e = (-1.0f64).exp();
        let exact = 0.5 + e / (1.0 - e);
        let s = sum_matsubara(|n| (-(n as f64)).exp(), &SeriesSpec::default()).unwrap();
        assert!((s.value - exact).abs() < 1e-9 * exact);
        assert!((s.value - exact).abs() <= s.tail_bound.max(1e-15));
    }

    #[test]
    fn divergent_series_is_reported() {
        let spec = SeriesSpec { relative_tail_tolerance: 1e-9, max_terms: 50 };
        let err = sum_matsubara(|_| 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::Series { terms: 50, .. }));
    }
}
