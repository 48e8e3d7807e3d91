//! Quantile and inverse-parameter solvers.

use super::distribution::pdf_raw;
use super::{cdf, NctParams, TailSide, ToleranceConfig};
use crate::error::{NctError, Result};
use crate::roots::brent;
use crate::specfun::{ninv, PositiveReal, Probability};

const DELTA_LIMIT: f64 = 1e4;
const NU_MIN: f64 = 1e-2;
const NU_MAX: f64 = 1e7;
const NU_GRID_PER_DECADE: usize = 10;

/// Splits a probability into the tail it is accurately representable on.
fn smaller_tail(prob: Probability) -> (TailSide, f64) {
    let p = prob.value();
    if p <= 0.5 {
        (TailSide::Lower, p)
    } else {
        (TailSide::Upper, 1.0 - p)
    }
}

fn interior(op: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(NctError::domain(op, format!("probability {t} must lie in (0, 1)")))
    }
}

/// Start for the quantile: the normal approximation
/// `Phi(((1 - 1/(4 nu)) x - delta) / sqrt(1 + x^2/(2 nu)))`
/// solved for `x`.
fn normal_start(z: f64, nu: f64, delta: f64) -> f64 {
    let k = 1.0 - 0.25 / nu;
    let fallback = delta + z;
    if k <= 0.1 {
        return fallback;
    }
    let a = k * k - z * z / (2.0 * nu);
    let b = -2.0 * delta * k;
    let c = delta * delta - z * z;
    let disc = b * b - 4.0 * a * c;
    if a <= 0.0 || disc < 0.0 {
        return fallback;
    }
    let sq = disc.sqrt();
    for x in [(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)] {
        let lhs = k * x - delta;
        if x.is_finite() && (z == 0.0 || lhs.signum() == z.signum()) {
            return x;
        }
    }
    fallback
}

/// Quantile for a probability on a given tail: the `x` with
/// `Pr(T <= x) = t` (lower) or `Pr(T > x) = t` (upper).
///
/// Working on the tail the caller supplies keeps full relative precision
/// for tiny upper-tail probabilities that `1 - p` cannot represent.
pub fn quantile_tail(t: f64, side: TailSide, nu: PositiveReal, delta: f64, cfg: &ToleranceConfig) -> Result<f64> {
    cfg.validate()?;
    interior("quantile", t)?;
    if !delta.is_finite() {
        return Err(NctError::domain("quantile", "delta must be finite"));
    }
    let ln_t = t.ln();
    let base = NctParams::from_parts(0.0, nu, delta)?;

    // G(x) = +-(ln T_side(x) - ln t), increasing in x; G'(x) = f(x) / T_side(x)
    let eval = |x: f64, need_slope: bool| -> Result<(f64, f64)> {
        let p = base.with_x(x);
        let tp = cdf(&p, cfg)?;
        let tail = tp.tail(side);
        let g = match side {
            TailSide::Lower => tail.ln() - ln_t,
            TailSide::Upper => ln_t - tail.ln(),
        };
        if !need_slope || tail == 0.0 {
            return Ok((g, f64::NAN));
        }
        Ok((g, pdf_raw(&p, cfg)? / tail))
    };

    let z = match side {
        TailSide::Lower => ninv(t),
        TailSide::Upper => -ninv(t),
    };
    let mut x = normal_start(z, nu.value(), delta);
    let (mut g, mut dg) = eval(x, true)?;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for _ in 0..cfg.max_iter {
        if g.abs() <= cfg.solver_log_tol {
            return Ok(x);
        }
        if g < 0.0 || g.is_nan() && side == TailSide::Lower {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - g / dg;
        let bracketed = lo.is_finite() && hi.is_finite();
        let mut next = newton;
        if bracketed {
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
        } else {
            let dir = if lo.is_finite() { 1.0 } else { -1.0 };
            let reach = 10.0 * x.abs().max(1.0);
            if !next.is_finite() || (next - x) * dir <= 0.0 {
                next = x + dir * x.abs().max(1.0);
            } else if (next - x).abs() > reach {
                next = x + dir * reach;
            }
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
            || (bracketed && hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()))
        {
            return Ok(next);
        }
        if !next.is_finite() || next.abs() > 1e300 {
            break;
        }
        x = next;
        (g, dg) = eval(x, true)?;
    }
    Err(NctError::NoConvergence {
        op: "quantile",
        iterations: cfg.max_iter,
        best: x,
        estimate: if hi.is_finite() && lo.is_finite() {
            hi - lo
        } else {
            f64::INFINITY
        },
    })
}

/// The `x` with `Pr(T <= x) = prob`. Probabilities above one half are
/// solved on the upper tail.
pub fn quantile(prob: Probability, nu: PositiveReal, delta: f64, cfg: &ToleranceConfig) -> Result<f64> {
    let (side, t) = smaller_tail(prob);
    quantile_tail(t, side, nu, delta, cfg)
}

/// The noncentrality `delta` with `Pr(T <= x) = prob`.
///
/// The CDF falls strictly in `delta`; the bracket is grown outward from a
/// normal-approximation start and searched within `|delta| <= 1e4`.
pub fn solve_delta(x: f64, nu: PositiveReal, prob: Probability, cfg: &ToleranceConfig) -> Result<f64> {
    cfg.validate()?;
    interior("solve_delta", prob.value())?;
    let (side, t) = smaller_tail(prob);
    if x == 0.0 {
        // Pr(T <= 0) = Phi(-delta)
        return Ok(match side {
            TailSide::Lower => -ninv(t),
            TailSide::Upper => ninv(t),
        });
    }
    let base = NctParams::from_parts(x, nu, 0.0)?;
    let ln_t = t.ln();
    // increasing in delta
    let g = |d: f64| -> Result<f64> {
        let tail = cdf(&base.with_delta(d), cfg)?.tail(side);
        Ok(match side {
            TailSide::Lower => ln_t - tail.ln(),
            TailSide::Upper => tail.ln() - ln_t,
        })
    };
    let n = nu.value();
    let z = match side {
        TailSide::Lower => ninv(t),
        TailSide::Upper => -ninv(t),
    };
    let start = (x * (1.0 - 0.25 / n) - z * (1.0 + x * x / (2.0 * n)).sqrt()).clamp(-DELTA_LIMIT, DELTA_LIMIT);
    let g0 = g(start)?;
    let dir = if g0 > 0.0 { -1.0 } else { 1.0 };
    let (mut a, mut ga) = (start, g0);
    let mut step = 1.0f64.max(0.1 * start.abs());
    let (b, gb) = loop {
        let b = (a + dir * step).clamp(-DELTA_LIMIT, DELTA_LIMIT);
        let gb = g(b)?;
        if gb == 0.0 || gb.signum() != ga.signum() && !gb.is_nan() {
            break (b, gb);
        }
        if b.abs() >= DELTA_LIMIT {
            return Err(NctError::range(
                "solve_delta",
                format!(
                    "no root with |delta| <= {DELTA_LIMIT} for x = {x}, nu = {n}, prob = {}",
                    prob.value()
                ),
            ));
        }
        a = b;
        ga = gb;
        step *= 2.0;
    };
    brent(
        "solve_delta",
        g,
        a,
        b,
        ga,
        gb,
        |d| 2.0 * f64::EPSILON * d.abs().max(1.0),
        cfg.solver_log_tol,
        cfg.max_iter,
    )
}

/// The degrees of freedom `nu` with `Pr(T <= x) = prob`.
///
/// The CDF need not be monotone in `nu`, so a logarithmic grid over
/// `[1e-2, 1e7]` is scanned for the first sign change, which is then
/// refined in `ln nu`. No sign change is a range error.
pub fn solve_nu(x: f64, delta: f64, prob: Probability, cfg: &ToleranceConfig) -> Result<PositiveReal> {
    cfg.validate()?;
    interior("solve_nu", prob.value())?;
    let (side, t) = smaller_tail(prob);
    let base = NctParams::new(x, 1.0, delta)?;
    let ln_t = t.ln();
    let g = |ln_nu: f64| -> Result<f64> {
        let tail = cdf(&base.with_nu(ln_nu.exp()), cfg)?.tail(side);
        Ok(tail.ln() - ln_t)
    };
    let (l0, l1) = (NU_MIN.ln(), NU_MAX.ln());
    let steps = NU_GRID_PER_DECADE * (NU_MAX / NU_MIN).log10().round() as usize;
    let mut prev = (l0, g(l0)?);
    if prev.1 == 0.0 {
        return PositiveReal::new(NU_MIN);
    }
    for i in 1..=steps {
        let l = if i == steps {
            l1
        } else {
            l0 + (l1 - l0) * i as f64 / steps as f64
        };
        let gl = g(l)?;
        if gl == 0.0 {
            return PositiveReal::new(l.exp());
        }
        if gl.signum() != prev.1.signum() && !gl.is_nan() && !prev.1.is_nan() {
            let r = brent(
                "solve_nu",
                g,
                prev.0,
                l,
                prev.1,
                gl,
                |_| 2e-15,
                cfg.solver_log_tol,
                cfg.max_iter,
            )?;
            return PositiveReal::new(r.exp());
        }
        prev = (l, gl);
    }
    Err(NctError::range(
        "solve_nu",
        format!(
            "Pr(T <= {x}) = {} is not attained for nu in [{NU_MIN}, {NU_MAX}] at delta = {delta}",
            prob.value()
        ),
    ))
}
