use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use super::gauss_kronrod::{gk21, EVALUATIONS};
use super::{Estimate, IntegrationSpec, QuadValue};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

// Panels laid down before the tail bound is trusted, and the cap on how far
// the truncation point may move out (in units of the panel width).
const MIN_PANELS: usize = 2;
const MAX_PANELS: usize = 400;
const PANEL_WIDTH_IN_DECAY_SCALES: f64 = 4.0;

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl<T> Eq for Segment<T> {}

impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `∫_a^b f` for an infallible integrand.
pub fn integrate_finite<T, F>(mut f: F, a: f64, b: f64, spec: &IntegrationSpec) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    try_integrate_finite(|x| Ok(f(x)), a, b, spec)
}

/// `∫_a^b f` where evaluating `f` may itself fail (nested quadrature).
///
/// `a > b` is allowed and flips the sign; `a == b` gives zero.
pub fn try_integrate_finite<T, F>(f: F, a: f64, b: f64, spec: &IntegrationSpec) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    try_integrate_breakpoints(f, &[a, b], spec)
}

/// Integrates over consecutive intervals `[p₀,p₁], [p₁,p₂], ...`, so kinks at
/// the breakpoints never land inside a panel.
pub fn try_integrate_breakpoints<T, F>(mut f: F, points: &[f64], spec: &IntegrationSpec) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    spec.validate()?;
    if points.len() < 2 {
        return Err(Error::invalid("breakpoints", points.len() as f64));
    }
    for &p in points {
        if !p.is_finite() {
            return Err(Error::invalid("integration limit", p));
        }
    }
    let (first, last) = (points[0], points[points.len() - 1]);
    if first == last && points.iter().all(|&p| p == first) {
        return Ok(Estimate { value: T::zero(), error: 0.0, evaluations: 0 });
    }
    let ascending = points.windows(2).all(|w| w[0] <= w[1]);
    let descending = points.windows(2).all(|w| w[0] >= w[1]);
    if !ascending && !descending {
        return Err(Error::invalid("breakpoints (not monotone)", f64::NAN));
    }

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let panel = gk21(&mut f, w[0], w[1])?;
        evaluations += EVALUATIONS;
        heap.push(Segment { a: w[0], b: w[1], value: panel.value, error: panel.error });
    }
    refine_all(&mut f, heap, evaluations, spec)
}

/// `∫_0^∞ f` for an infallible integrand bounded by `C·exp(−x/decay_scale)`
/// beyond some finite prefix.
pub fn integrate_semi_infinite<T, F>(mut f: F, spec: &IntegrationSpec) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), spec)
}

/// Fallible version of [`integrate_semi_infinite`].
///
/// Panels of width `4·decay_scale` are laid down from the origin until the
/// exponential tail bound `peak·decay_scale` beyond the last panel drops
/// under a tenth of the tolerance; the panels are then refined adaptively and
/// the tail bound is added to the reported error.
pub fn try_integrate_semi_infinite<T, F>(mut f: F, spec: &IntegrationSpec) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    spec.validate()?;
    let width = PANEL_WIDTH_IN_DECAY_SCALES * spec.decay_scale;
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut running = T::zero();
    let mut tail = f64::INFINITY;

    let mut i = 0;
    while i < MAX_PANELS {
        let a = i as f64 * width;
        let b = a + width;
        i += 1;
        let panel = gk21(&mut f, a, b)?;
        evaluations += EVALUATIONS;
        running = running.add(panel.value);
        let panel_size = panel.value.norm();
        heap.push(Segment { a, b, value: panel.value, error: panel.error });

        // Envelope `m·exp(−(x−b)/d)` integrates to `m·d` beyond `b`; doubling
        // covers polynomial prefactors that are still growing slowly.
        tail = 2.0 * panel.right_peak * spec.decay_scale;
        let target = 0.1 * spec.tolerance_for(running.norm());
        if i >= MIN_PANELS && tail <= target && panel_size <= 10.0 * target {
            match refine(&mut f, &mut heap, tail, &mut evaluations, spec)? {
                Refined::Converged(estimate) => return Ok(estimate),
                // Oscillatory integrands can have partial sums far larger
                // than the final value, so the truncation point chosen above
                // may be too early: push it out and refine again.
                Refined::TailLimited(value) => running = value,
                Refined::Exhausted { value, error } => {
                    return Err(Error::Integration { estimate: value.norm(), error, evaluations })
                }
            }
        }
    }
    Err(Error::Integration { estimate: running.norm(), error: tail, evaluations })
}

enum Refined<T> {
    Converged(Estimate<T>),
    TailLimited(T),
    Exhausted { value: T, error: f64 },
}

fn refine_all<T, F>(
    f: &mut F,
    mut heap: BinaryHeap<Segment<T>>,
    mut evaluations: usize,
    spec: &IntegrationSpec,
) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    match refine(f, &mut heap, 0.0, &mut evaluations, spec)? {
        Refined::Converged(estimate) => Ok(estimate),
        // No tail on a finite interval.
        Refined::TailLimited(_) => unreachable!(),
        Refined::Exhausted { value, error } => Err(Error::Integration { estimate: value.norm(), error, evaluations }),
    }
}

fn refine<T, F>(
    f: &mut F,
    heap: &mut BinaryHeap<Segment<T>>,
    tail: f64,
    evaluations: &mut usize,
    spec: &IntegrationSpec,
) -> Result<Refined<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let sums =
        |heap: &BinaryHeap<Segment<T>>| heap.iter().fold((T::zero(), tail), |(v, e), s| (v.add(s.value), e + s.error));
    let (mut value, mut error) = sums(heap);

    loop {
        let target = spec.tolerance_for(value.norm());
        if error <= target {
            let (value, error) = sums(heap);
            return Ok(Refined::Converged(Estimate { value, error, evaluations: *evaluations }));
        }
        if tail > 0.5 * target {
            return Ok(Refined::TailLimited(sums(heap).0));
        }
        let worst = match heap.peek() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow =
            (worst.b - worst.a).abs() <= 8.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if heap.len() >= spec.max_subdivisions || too_narrow || !error.is_finite() {
            break;
        }
        let worst = heap.pop().expect("peeked");
        let left = gk21(f, worst.a, mid)?;
        let right = gk21(f, mid, worst.b)?;
        *evaluations += 2 * EVALUATIONS;
        value = value.sub(worst.value).add(left.value).add(right.value);
        error += left.error + right.error - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: left.value, error: left.error });
        heap.push(Segment { a: mid, b: worst.b, value: right.value, error: right.error });

        // Keep the running sums from drifting.
        if heap.len().is_multiple_of(64) {
            let (v, e) = sums(heap);
            value = v;
            error = e;
        }
    }

    let (value, error) = sums(heap);
    if error <= spec.tolerance_for(value.norm()) {
        return Ok(Refined::Converged(Estimate { value, error, evaluations: *evaluations }));
    }
    Ok(Refined::Exhausted { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn spec() -> IntegrationSpec {
        IntegrationSpec::ORACLE
    }

    #[test]
    fn exponential_tail() {
        let est = integrate_semi_infinite(|u: f64| (-u).exp(), &spec()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        assert!(est.error < 1e-9);
    }

    #[test]
    fn cubic_times_exponential() {
        let s = spec().with_decay_scale(0.5);
        let est = integrate_semi_infinite(|u: f64| u.powi(3) * (-2.0 * u).exp(), &s).unwrap();
        assert!((est.value - 0.375).abs() < 1e-12);
    }

    #[test]
    fn damped_oscillation_matches_closed_form() {
        // ∫ u² e^{-u} cos 5u du = Re Γ(3)/(1 − 5i)³ = 2 Re (1 − 5i)^{-3}
        let exact = (Complex64::new(1.0, -5.0).powi(-3) * 2.0).re;
        let est = integrate_semi_infinite(|u: f64| u * u * (-u).exp() * (5.0 * u).cos(), &spec()).unwrap();
        assert!((est.value - exact).abs() < 1e-11 * exact.abs().max(1e-3), "{} vs {}", est.value, exact);
    }

    #[test]
    fn polynomials_on_unit_interval() {
        let est = integrate_finite(|t: f64| t * t, 0.0, 1.0, &spec()).unwrap();
        assert!((est.value - 1.0 / 3.0).abs() < 1e-15);
        let est = integrate_finite(|t: f64| 2.0 - t * t, 0.0, 1.0, &spec()).unwrap();
        assert!((est.value - 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let fwd = integrate_finite(|x: f64| x.sin(), 0.0, 2.0, &spec()).unwrap().value;
        let rev = integrate_finite(|x: f64| x.sin(), 2.0, 0.0, &spec()).unwrap().value;
        assert_eq!(fwd, -rev);
        let zero = integrate_finite(|x: f64| x.sin(), 1.5, 1.5, &spec()).unwrap();
        assert_eq!(zero.value, 0.0);
        assert_eq!(zero.evaluations, 0);
    }

    #[test]
    fn vector_valued_integrand_shares_nodes() {
        let est = integrate_finite(|x: f64| [x, x * x], 0.0, 1.0, &spec()).unwrap();
        assert!((est.value[0] - 0.5).abs() < 1e-15);
        assert!((est.value[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let est = try_integrate_breakpoints(|x: f64| Ok((x - 0.3).abs()), &[0.0, 0.3, 1.0], &spec()).unwrap();
        assert!((est.value - (0.045 + 0.245)).abs() < 1e-15);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let s = spec().with_max_subdivisions(3);
        let err = integrate_finite(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &s).unwrap_err();
        match err {
            Error::Integration { estimate, error, evaluations } => {
                assert!(estimate.is_finite());
                assert!(error > 0.0);
                assert!(evaluations > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let s = spec().with_relative_tolerance(0.0);
        assert!(matches!(integrate_finite(|x: f64| x, 0.0, 1.0, &s), Err(Error::InvalidParameter { .. })));
        let s = spec().with_decay_scale(-1.0);
        assert!(integrate_semi_infinite(|x: f64| x, &s).is_err());
    }

    #[test]
    fn integrand_failure_propagates() {
        let r: Result<Estimate<f64>> = try_integrate_finite(|_| Err(Error::Pole { what: "test" }), 0.0, 1.0, &spec());
        assert_eq!(r.unwrap_err(), Error::Pole { what: "test" });
    }
}
