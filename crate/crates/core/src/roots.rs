//! One-dimensional root finding and maximisation.

use crate::error::{NctError, Result};

/// Brent's method on a bracket `[a, b]` with `f(a)`, `f(b)` of opposite sign
/// (already evaluated). Stops when the bracket is narrower than `xtol` or
/// `|f| <= ftol`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn brent<F>(
    op: &'static str,
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol: impl Fn(f64) -> f64,
    ftol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NctError::range(op, format!("f({a}) and f({b}) have the same sign")));
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..max_iter {
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
        let tol = 0.5 * xtol(b);
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() <= ftol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * m * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(NctError::NoConvergence {
        op,
        iterations: max_iter,
        best: b,
        estimate: (c - b).abs(),
    })
}

/// Maximiser of `f` on `[lo, hi]`: coarse grid scan, then golden section
/// inside the best grid cell pair. `f` may return `-inf`.
pub(crate) fn maximize<F>(mut f: F, lo: f64, hi: f64, iterations: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(hi > lo) {
        return Ok(lo);
    }
    const GRID: usize = 32;
    let step = (hi - lo) / GRID as f64;
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=GRID {
        let v = f(lo + i as f64 * step)?;
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    if best_v == f64::NEG_INFINITY {
        return Ok(0.5 * (lo + hi));
    }
    let mut a = lo + best.saturating_sub(1) as f64 * step;
    let mut b = (lo + (best + 1) as f64 * step).min(hi);
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let mut c1 = b - gr * (b - a);
    let mut c2 = a + gr * (b - a);
    let mut f1 = f(c1)?;
    let mut f2 = f(c2)?;
    for _ in 0..iterations {
        if f1 < f2 {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f(c2)?;
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f(c1)?;
        }
        if b - a <= 1e-12 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    if f(mid)? >= best_v {
        Ok(mid)
    } else {
        Ok(lo + best as f64 * step)
    }
}
