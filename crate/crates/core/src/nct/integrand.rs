//! The window integrand, its log-scale bound `h` and the mode estimate.

use super::{NctParams, TailSide, Z_FLOOR};
use crate::error::{NctError, Result};
use crate::roots::maximize;
use crate::specfun::{ln_phi, phi, GammaShape};

const LN_2: f64 = std::f64::consts::LN_2;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Precomputed constants for the integrand at fixed `(x > 0, nu, delta)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    pub x: f64,
    pub nu: f64,
    pub delta: f64,
    /// gamma shape `nu / 2`
    shape: GammaShape,
    /// `nu / (2 x^2)`, so the gamma argument is `c (z + delta)^2`
    c: f64,
}

impl Kernel {
    pub fn new(p: &NctParams) -> Kernel {
        let x = p.x();
        let nu = p.nu();
        Kernel {
            x,
            nu,
            delta: p.delta(),
            shape: GammaShape::new(0.5 * nu),
            c: 0.5 * nu / (x * x),
        }
    }

    /// Integrand value: `Q(..) phi(z)` for the lower tail, `P(..) phi(z)` for the upper.
    pub fn g(&self, z: f64, side: TailSide) -> Result<f64> {
        let s = z + self.delta;
        if s <= 0.0 {
            return Ok(match side {
                TailSide::Lower => phi(z),
                TailSide::Upper => 0.0,
            });
        }
        self.shape
            .tail_weighted(self.c * s * s, side == TailSide::Lower, phi(z), ln_phi(z))
    }

    pub fn ln_g(&self, z: f64, side: TailSide) -> Result<f64> {
        let s = z + self.delta;
        if s <= 0.0 {
            return Ok(match side {
                TailSide::Lower => ln_phi(z),
                TailSide::Upper => f64::NEG_INFINITY,
            });
        }
        Ok(self.shape.ln_tail(self.c * s * s, side == TailSide::Lower)? + ln_phi(z))
    }

    /// `nu - 2`, replaced by 1 when `nu <= 2`.
    pub fn nm2(&self) -> f64 {
        if self.nu <= 2.0 {
            1.0
        } else {
            self.nu - 2.0
        }
    }

    pub fn h(&self, z: f64) -> f64 {
        let s = z + self.delta;
        if s <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let q = self.nu * (s / self.x) * (s / self.x);
        let ln_q_over_nu = 2.0 * (s / self.x).ln();
        -LN_2 - 0.5 * (q - self.nu - self.nm2() * ln_q_over_nu + self.nu.ln() + LN_2PI + z * z)
    }

    /// `h''(z)`, analytic.
    pub fn h_second(&self, z: f64) -> f64 {
        let s = z + self.delta;
        let r = self.nu / (self.x * self.x);
        -(r + self.nm2() / (s * s) + 1.0)
    }

    /// Closed-form maximiser of `h`, unclamped. Evaluated with everything
    /// divided by `x^2` so that large `x` cannot overflow.
    pub fn z_mod_raw(&self) -> f64 {
        let r = self.nu / (self.x * self.x);
        let nm2 = self.nm2();
        let d = self.delta;
        let k = 4.0 * nm2 * (1.0 + r);
        let root = (d * d + k).sqrt();
        // sqrt(d^2 + k) - d without cancellation for d > 0
        let diff = if d > 0.0 { k / (root + d) } else { root - d };
        (diff - 2.0 * r * d) / (2.0 * (1.0 + r))
    }
}

fn kernel_for(op: &'static str, p: &NctParams) -> Result<Kernel> {
    p.require_positive_x(op)?;
    Ok(Kernel::new(p))
}

fn checked(op: &'static str, z: f64, p: &NctParams) -> Result<()> {
    if z.is_nan() {
        return Err(NctError::domain(op, "NaN abscissa").in_eval(p.x(), p.nu(), p.delta()));
    }
    Ok(())
}

/// Lower-tail integrand `Q(nu/2, nu (z+delta)^2 / (2 x^2)) phi(z)`; needs `x > 0`.
pub fn integrand_g(z: f64, p: &NctParams) -> Result<f64> {
    checked("integrand_g", z, p)?;
    kernel_for("integrand_g", p)?
        .g(z, TailSide::Lower)
        .map_err(|e| e.in_eval(p.x(), p.nu(), p.delta()))
}

/// Upper-tail integrand `P(nu/2, nu (z+delta)^2 / (2 x^2)) phi(z)`; needs `x > 0`.
pub fn integrand_g_upper(z: f64, p: &NctParams) -> Result<f64> {
    checked("integrand_g_upper", z, p)?;
    kernel_for("integrand_g_upper", p)?
        .g(z, TailSide::Upper)
        .map_err(|e| e.in_eval(p.x(), p.nu(), p.delta()))
}

/// Log-scale bound on the lower-tail integrand,
///
/// `h(z) = -ln 2 - (q - nu - (nu-2) ln(q/nu) + ln nu + ln 2 pi + z^2) / 2`,
///
/// with `q = nu (z+delta)^2 / x^2` and `nu - 2` replaced by 1 when `nu <= 2`.
/// Returns `-inf` at `z = -delta`.
pub fn log_integrand_h(z: f64, p: &NctParams) -> Result<f64> {
    checked("log_integrand_h", z, p)?;
    Ok(kernel_for("log_integrand_h", p)?.h(z))
}

/// Mode estimate of the lower-tail integrand (the maximiser of `h`), clamped
/// to `[max(-delta, Z_FLOOR), -Z_FLOOR]`. Falls back to a numerical search
/// if the closed form is not finite.
pub fn mode_zmod(p: &NctParams) -> Result<f64> {
    let k = kernel_for("mode_zmod", p)?;
    let lo = (-p.delta()).max(Z_FLOOR);
    let hi = -Z_FLOOR;
    Ok(mode_in(&k, lo, hi)?.clamp(lo, hi.max(lo)))
}

pub(crate) fn mode_in(k: &Kernel, lo: f64, hi: f64) -> Result<f64> {
    let z = k.z_mod_raw();
    if z.is_finite() {
        Ok(z)
    } else {
        maximize(|z| Ok(k.h(z)), lo, hi, 60)
    }
}
