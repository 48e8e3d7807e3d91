//! Standard normal density, distribution and quantile.
//!
//! The lower tail is evaluated as `phi(z) * R(-z)` where `R` is the Mills
//! ratio, so no `1 - x` cancellation ever occurs below `z = -0.75` and the
//! relative accuracy holds down to `z = -38` (and beyond, in log form).

use super::Probability;
use crate::error::{NctError, Result};
use std::f64::consts::FRAC_1_SQRT_2;
use std::f64::consts::FRAC_2_SQRT_PI;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Below this |z| the lower tail comes from the erf series; above it, from the
// Mills ratio.
const SERIES_LIMIT: f64 = 0.75;
const CHEB_LO: f64 = 0.75;
const CHEB_HI: f64 = 3.0;

// Chebyshev expansion of the Mills ratio R(t) = Phi(-t) / phi(t) on
// [0.75, 3]; the leading coefficient is already halved.
#[allow(clippy::excessive_precision)]
const MILLS_CHEB: [f64; 22] = [
    4.838_628_777_607_383_30e-1,
    -2.157_713_388_471_419_47e-1,
    4.330_829_010_259_790_17e-2,
    -7.991_358_501_887_644_78e-3,
    1.374_653_969_022_471_84e-3,
    -2.226_340_876_965_492_78e-4,
    3.420_052_098_546_863_79e-5,
    -5.012_042_362_040_610_75e-6,
    7.039_384_792_969_592_47e-7,
    -9.511_004_910_325_391_36e-8,
    1.240_086_086_050_414_57e-8,
    -1.564_459_426_538_326_83e-9,
    1.914_050_302_453_837_77e-10,
    -2.275_503_779_966_162_08e-11,
    2.633_232_439_225_716_73e-12,
    -2.970_659_835_545_388_87e-13,
    3.271_601_657_042_096_86e-14,
    -3.521_614_891_754_978_81e-15,
    3.709_156_282_358_615_50e-16,
    -3.826_425_444_450_158_20e-17,
    3.869_817_523_700_356_71e-18,
    -3.839_965_656_059_252_47e-19,
];

/// `exp(-z^2 / 2) / sqrt(2 pi)` with the square split so that the exponent
/// is exact up to a tiny correction term.
#[inline]
pub(crate) fn phi(z: f64) -> f64 {
    let z = z.abs();
    if z > 40.0 {
        return 0.0;
    }
    let hi = (z * 16.0).trunc() / 16.0;
    let lo_part = (z - hi) * (z + hi);
    FRAC_1_SQRT_2PI * (-0.5 * hi * hi).exp() * (-0.5 * lo_part).exp()
}

#[inline]
pub(crate) fn ln_phi(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// Mills ratio `Phi(-t) / phi(t)` for `t >= 0.75`.
pub(crate) fn mills(t: f64) -> f64 {
    debug_assert!(t >= CHEB_LO);
    if t <= CHEB_HI {
        mills_cheb(t)
    } else {
        mills_cf(t)
    }
}

fn mills_cheb(t: f64) -> f64 {
    let u = (2.0 * t - (CHEB_LO + CHEB_HI)) / (CHEB_HI - CHEB_LO);
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in MILLS_CHEB.iter().skip(1).rev() {
        let b0 = 2.0 * u * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    u * b1 - b2 + MILLS_CHEB[0]
}

fn mills_cf(t: f64) -> f64 {
    // Laplace continued fraction 1/(t+ 1/(t+ 2/(t+ 3/(t+ ...)))), evaluated
    // backward with enough terms for full precision at t >= 3.
    let n = (540.0 / (t * t)) as usize + 10;
    let mut f = 0.0;
    for k in (1..=n).rev() {
        f = k as f64 / (t + f);
    }
    1.0 / (t + f)
}

/// erf by its Maclaurin series; used only for |t| < 0.54.
fn erf_series(t: f64) -> f64 {
    let t2 = t * t;
    let mut power = t;
    let mut sum = t;
    let mut n = 0.0;
    loop {
        n += 1.0;
        power *= -t2 / n;
        let term = power / (2.0 * n + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Unchecked standard normal CDF.
pub(crate) fn ncdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z < -SERIES_LIMIT {
        if z < -40.0 {
            // phi underflows; go through logs so that the subnormal range is kept.
            return (ln_phi(z) + mills(-z).ln()).exp();
        }
        phi(z) * mills(-z)
    } else if z <= SERIES_LIMIT {
        0.5 + 0.5 * erf_series(z * FRAC_1_SQRT_2)
    } else if z > 40.0 {
        1.0
    } else {
        1.0 - phi(z) * mills(z)
    }
}

fn check_nan(op: &'static str, z: f64) -> Result<()> {
    if z.is_nan() {
        Err(NctError::domain(op, "NaN argument"))
    } else {
        Ok(())
    }
}

/// Standard normal density. Underflows to `0.0` for `|z| > ~38.6`.
pub fn norm_pdf(z: f64) -> Result<f64> {
    check_nan("norm_pdf", z)?;
    Ok(phi(z))
}

/// Standard normal CDF, accurate to a few ulp in both tails.
pub fn norm_cdf(z: f64) -> Result<Probability> {
    check_nan("norm_cdf", z)?;
    Probability::clamped(ncdf(z))
}

/// Standard normal survival function `1 - Phi(z)`, computed natively.
pub fn norm_sf(z: f64) -> Result<Probability> {
    check_nan("norm_sf", z)?;
    Probability::clamped(ncdf(-z))
}

/// `ln Phi(z)`, finite for every finite `z`.
pub fn log_norm_cdf(z: f64) -> Result<f64> {
    check_nan("log_norm_cdf", z)?;
    Ok(ln_ncdf(z))
}

pub(crate) fn ln_ncdf(z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else if z < -SERIES_LIMIT {
        ln_phi(z) + mills(-z).ln()
    } else if z <= SERIES_LIMIT {
        ncdf(z).ln()
    } else {
        (-ncdf(-z)).ln_1p()
    }
}

// Acklam's rational approximation (relative error < 1.2e-9), used as a
// starting point only.
#[allow(clippy::excessive_precision)]
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549671010229297e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Lower-tail quantile for `0 < p <= 0.5`, refined by Halley steps on
/// `ln Phi(z) - ln p`.
fn ninv_lower(p: f64) -> f64 {
    let mut z = acklam(p);
    if p == 0.5 {
        return 0.0;
    }
    let target = p.ln();
    for _ in 0..4 {
        let g = ln_ncdf(z) - target;
        // lambda = phi / Phi, the derivative of ln Phi
        let lambda = if z < -SERIES_LIMIT {
            1.0 / mills(-z)
        } else {
            phi(z) / ncdf(z)
        };
        let newton = g / lambda;
        let step = newton / (1.0 + 0.5 * newton * (z + lambda));
        z -= step;
        if step.abs() <= 1e-15 * z.abs().max(1.0) {
            break;
        }
    }
    z
}

/// Unchecked normal quantile for `0 < p < 1`.
pub(crate) fn ninv(p: f64) -> f64 {
    if p <= 0.5 {
        ninv_lower(p)
    } else {
        -ninv_lower(1.0 - p)
    }
}

/// Standard normal quantile for `0 < p < 1`.
pub fn norm_inv(p: Probability) -> Result<f64> {
    let v = p.value();
    if !p.is_interior() {
        return Err(NctError::domain(
            "norm_inv",
            format!("p = {v} must lie strictly inside (0, 1)"),
        ));
    }
    Ok(ninv(v))
}
