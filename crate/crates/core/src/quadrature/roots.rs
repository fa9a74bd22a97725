use alloc::vec::Vec;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A refined zero of a sampled function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Centered-difference slope at `x`.
    pub slope: f64,
}

impl Root {
    pub fn is_descending(&self) -> bool {
        self.slope < 0.0
    }
}

/// Brent's method on a bracket with `f(a)·f(b) ≤ 0`.
pub fn brent<F>(f: &mut F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::invalid("bracket (no sign change)", a));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(b)
}

/// Zeros of `f` on an ascending grid: every sign change between neighbouring
/// samples is refined with Brent's method, and the slope is taken from a
/// centered difference.
pub fn find_roots_bracketed<F>(mut f: F, grid: &[f64]) -> Vec<Root>
where
    F: FnMut(f64) -> f64,
{
    try_find_roots_bracketed(|x| Ok(f(x)), grid).unwrap_or_default()
}

/// Fallible version of [`find_roots_bracketed`].
pub fn try_find_roots_bracketed<F>(mut f: F, grid: &[f64]) -> Result<Vec<Root>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    try_roots_from_samples(&mut f, grid, &values)
}

pub(crate) fn try_roots_from_samples<F>(f: &mut F, grid: &[f64], values: &[f64]) -> Result<Vec<Root>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("grid (not strictly ascending)", f64::NAN));
    }
    let mut roots = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (values[i], values[i + 1]);
        let root = if fa == 0.0 {
            // A sample sitting exactly on a zero counts once, for the interval it starts.
            if i > 0 && values[i - 1] == 0.0 {
                continue;
            }
            a
        } else if fb == 0.0 {
            if i + 2 < grid.len() {
                continue;
            }
            b
        } else if fa.signum() != fb.signum() {
            brent(f, a, b, 1e-13 * (b - a).max(a.abs()))?
        } else {
            continue;
        };
        let h = 1e-4 * (b - a);
        let slope = (f(root + h)? - f(root - h)?) / (2.0 * h);
        roots.push(Root { x: root, slope });
    }
    Ok(roots)
}
