//! Integration window reduction.

use super::integrand::{mode_in, Kernel};
use super::{IntegrationWindow, NctParams, TailSide, ToleranceConfig};
use crate::error::Result;
use crate::roots::maximize;
use crate::specfun::{
    chi2_quantile_approx_inglot, chi2_quantile_upper_chernoff, ln_gamma, log_gamma_pair, ncdf, PositiveReal,
    Probability,
};

const DEGENERATE_WIDTH: f64 = 1e-3;

/// A chi-square quantile `q` with `Pr(chi2_nu <= q) <= eps`: the closed-form
/// approximation when it checks out, otherwise `2 (eps Gamma(a+1))^(1/a)`,
/// which follows from `P(a, y) <= y^a / Gamma(a+1)`. The approximation
/// overshoots badly for `nu` near 1 and below.
fn lower_quantile_bound(eps: f64, nu: PositiveReal) -> Result<f64> {
    let q = chi2_quantile_approx_inglot(eps, nu)?;
    let a = 0.5 * nu.value();
    if q == 0.0 || log_gamma_pair(a, 0.5 * q)?.0 <= eps.ln() {
        return Ok(q);
    }
    Ok((std::f64::consts::LN_2 + (eps.ln() + ln_gamma(a + 1.0)) / a).exp())
}

/// Moves `start` outward from `zm` until the log-integrand falls to `ln_eps`,
/// never past `lim`, then pulls it back by bisection to within a relative
/// 1e-3 of the crossing. Returns the endpoint and whether it was clamped at
/// `lim` with the integrand still above the threshold.
fn settle<F>(ln_g: &mut F, zm: f64, start: f64, lim: f64, ln_eps: f64) -> Result<(f64, bool)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if ln_g(start)? <= ln_eps {
        return Ok((start, false));
    }
    if start == lim {
        return Ok((lim, true));
    }
    let dir = if lim < zm { -1.0 } else { 1.0 };
    let beyond = |z: f64| if dir < 0.0 { z <= lim } else { z >= lim };
    let mut inner = start;
    let mut step = (start - zm).abs().max(1e-3 * zm.abs().max(1.0));
    let mut out;
    loop {
        step *= 1.5;
        out = zm + dir * step;
        if beyond(out) {
            out = lim;
        }
        if ln_g(out)? <= ln_eps {
            break;
        }
        if out == lim {
            return Ok((lim, true));
        }
        inner = out;
    }
    for _ in 0..60 {
        if (inner - out).abs() < 1e-3 * (out - zm).abs() {
            break;
        }
        let m = 0.5 * (inner + out);
        if ln_g(m)? > ln_eps {
            inner = m;
        } else {
            out = m;
        }
    }
    Ok((out, false))
}

pub(crate) fn build(p: &NctParams, cfg: &ToleranceConfig) -> Result<(Kernel, IntegrationWindow)> {
    p.require_positive_x("window")?;
    let k = Kernel::new(p);
    let (x, nu, delta) = (p.x(), p.nu(), p.delta());
    let nu_pr = PositiveReal::new(nu)?;
    let ln_eps_r = cfg.eps_r.ln();
    let a0 = (-delta).max(cfg.z_floor);
    // delta < z_floor leaves nothing above the floor: the range collapses to a point
    let b0 = (-cfg.z_floor).max(a0);

    if x <= delta {
        // lower tail: for z < a1 the gamma factor exceeds 1 - eps_r, so that
        // stretch contributes Phi(a1) in closed form
        let side = TailSide::Lower;
        let q = lower_quantile_bound(cfg.eps_r, nu_pr)?;
        let a1 = (x * (q / nu).sqrt() - delta).clamp(a0, b0);
        let (lo, hi) = (a1, b0);
        let zm = mode_in(&k, lo, hi)?.clamp(lo, hi);
        let mut ln_g = |z: f64| k.ln_g(z, side);
        let ln_peak = k.h(zm).min(ln_g(zm)?);
        let ln_eps_a = ln_peak + ln_eps_r;
        let curv = k.h_second(zm);
        let w = if curv < 0.0 {
            (-2.0 * ln_eps_r / -curv).sqrt()
        } else {
            0.0
        };
        let head = Probability::clamped(ncdf(a1))?;
        finish(&mut ln_g, side, zm, w, lo, hi, ln_eps_a, head).map(|w| (k, w))
    } else {
        // upper tail: beyond b1 the gamma factor P exceeds 1 - eps_r and the
        // remainder 1 - Phi(b1) is added in closed form
        let side = TailSide::Upper;
        let qu = chi2_quantile_upper_chernoff(cfg.eps_r, nu_pr)?;
        let b1 = (x * (qu / nu).sqrt() - delta).clamp(a0, b0);
        let (lo, hi) = (a0, b1);
        let mut ln_g = |z: f64| k.ln_g(z, side);
        let zm = maximize(&mut ln_g, lo, hi, 80)?;
        let f0 = ln_g(zm)?;
        let mut hs = 1e-3 * zm.abs().max(1.0);
        let mut curv = f64::NAN;
        for _ in 0..12 {
            let fp = ln_g(zm + hs)?;
            let fm = ln_g(zm - hs)?;
            if f0 - fp > 0.5 || f0 - fm > 0.5 {
                hs /= 10.0;
                continue;
            }
            curv = (fp - 2.0 * f0 + fm) / (hs * hs);
            break;
        }
        let ln_eps_a = f0 + ln_eps_r;
        let w = if curv < 0.0 {
            (-2.0 * ln_eps_r / -curv).sqrt()
        } else {
            // flat or unresolved curvature: keep the full range
            f64::INFINITY
        };
        let head = Probability::clamped(ncdf(-b1))?;
        finish(&mut ln_g, side, zm, w, lo, hi, ln_eps_a, head).map(|w| (k, w))
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<F>(
    ln_g: &mut F,
    tail: TailSide,
    zm: f64,
    w: f64,
    lo: f64,
    hi: f64,
    ln_eps_a: f64,
    analytic_head: Probability,
) -> Result<IntegrationWindow>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut win = IntegrationWindow {
        a: lo,
        b: hi,
        tail,
        analytic_head,
        lo,
        hi,
        z_mod: zm,
        ln_eps_a,
        a_clamped: false,
        b_clamped: false,
        degenerate: false,
    };
    if hi > lo && zm.is_finite() {
        let a = (zm - w).max(lo).min(zm);
        let b = (zm + w).min(hi).max(zm);
        let (a, a_cl) = settle(ln_g, zm, a, lo, ln_eps_a)?;
        let (b, b_cl) = settle(ln_g, zm, b, hi, ln_eps_a)?;
        win.a = a;
        win.b = b;
        win.a_clamped = a_cl;
        win.b_clamped = b_cl;
    }
    if !(win.a < win.b) {
        win.degenerate = true;
        let c = zm.clamp(lo, hi.max(lo));
        win.a = (c - 0.5 * DEGENERATE_WIDTH).max(lo);
        win.b = (win.a + DEGENERATE_WIDTH).min(hi.max(lo));
    }
    Ok(win)
}

/// Integration window for `x > 0`: the lower-tail window when `x <= delta`,
/// the upper-tail window otherwise.
///
/// Construction: the outer range `[max(-delta, z_floor), -z_floor]` is cut
/// at the chi-square quantile bound, the absolute level
/// `eps_a = eps_r * peak` is set from the integrand at the mode, the
/// quadratic expansion of the log-integrand about the mode gives a first
/// guess of the ends, and each end is then checked against the integrand
/// and moved outward until it lies below `eps_a`.
pub fn window(p: &NctParams, cfg: &ToleranceConfig) -> Result<IntegrationWindow> {
    cfg.validate()?;
    build(p, cfg)
        .map(|(_, w)| w)
        .map_err(|e| e.in_eval(p.x(), p.nu(), p.delta()))
}
