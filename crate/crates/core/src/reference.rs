//! Independent CDF algorithms for cross-checking: the Poisson-weighted
//! incomplete-beta series, the normal approximation and a brute-force
//! quadrature over the chi-square mixture.

use crate::error::{NctError, Result};
use crate::mixture::chi_mixture;
pub use crate::mixture::MixtureKind;
use crate::nct::NctParams;
use crate::quadrature::QuadratureResult;
use crate::specfun::{inc_beta_pair, ln_gamma, log_gamma_pair, ncdf, Probability};

const SERIES_MAX_TERMS: usize = 1_000_000;
const RESYNC_EVERY: usize = 64;
const LOG_WEIGHTS_ABOVE: f64 = 700.0;

/// How the series ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesDiagnostics {
    pub terms_used: usize,
    pub converged: bool,
    /// Bound on the omitted tail of the series when it stopped.
    pub truncation_bound: f64,
}

/// Series CDF:
///
/// `Phi(-delta) + 1/2 sum_i { P_i I_y(i + 1/2, nu/2) + (delta / sqrt 2) Q_i I_y(i + 1, nu/2) }`
///
/// with `y = x^2 / (nu + x^2)` and Poisson weights in `delta^2 / 2`, summed
/// forward from `i = 0`. The beta terms follow the usual two-term forward
/// recurrence, recomputed directly every 64 terms and whenever a term has
/// halved since its last direct evaluation. The truncation bound is the remaining Poisson
/// mass times the next odd beta term.
///
/// `x = 0` is exact and `x < 0` goes through `1 - F(-x; nu, -delta)`, so tiny
/// lower tails at negative `x` are lost to cancellation. Accuracy also
/// degrades quickly once `delta` is large.
pub fn cdf_guenther_series(p: &NctParams, tol: f64) -> Result<(Probability, SeriesDiagnostics)> {
    if !(tol > 0.0) {
        return Err(NctError::domain(
            "cdf_guenther_series",
            format!("tol = {tol} must be > 0"),
        ));
    }
    let (x, nu, d) = (p.x(), p.nu(), p.delta());
    if x == 0.0 {
        let diag = SeriesDiagnostics {
            terms_used: 0,
            converged: true,
            truncation_bound: 0.0,
        };
        return Ok((Probability::clamped(ncdf(-d))?, diag));
    }
    if x < 0.0 {
        let (v, diag) = series_positive(-x, nu, -d, tol)?;
        return Ok((Probability::clamped(1.0 - v)?, diag));
    }
    let (v, diag) = series_positive(x, nu, d, tol)?;
    Ok((Probability::clamped(v)?, diag))
}

fn series_positive(x: f64, nu: f64, d: f64, tol: f64) -> Result<(f64, SeriesDiagnostics)> {
    let x2 = x * x;
    let y = x2 / (nu + x2);
    let y1m = nu / (nu + x2);
    let b = 0.5 * nu;
    let lambda = 0.5 * d * d;
    let ln_y = y.ln();
    let ln_y1m = y1m.ln();

    // beta state at shape a: I_y(a, b), I_y(a + 1/2, b) and the differences
    // I_y(a, b) - I_y(a + 1, b) (likewise for a + 1/2)
    let ln_gap = |a: f64| ln_gamma(a + b) - ln_gamma(a + 1.0) - ln_gamma(b) + a * ln_y + b * ln_y1m;
    let beta_state = |a: f64| -> Result<(f64, f64, f64, f64)> {
        Ok((
            inc_beta_pair(y, y1m, a, b)?.0,
            inc_beta_pair(y, y1m, a + 0.5, b)?.0,
            ln_gap(a).exp(),
            ln_gap(a + 0.5).exp(),
        ))
    };

    let mut a = 0.5;
    let (mut xodd, mut xeven, mut godd, mut geven) = beta_state(a)?;
    let mut sync = (xodd, xeven);

    let log_weights = lambda > LOG_WEIGHTS_ABOVE;
    let ln_half = -std::f64::consts::LN_2;
    let ln_lambda = lambda.ln();
    let sqrt_2_over_pi = (2.0 / std::f64::consts::PI).sqrt();
    // P_0 = e^{-lambda} / 2, Q_0 = sqrt(2/pi) delta e^{-lambda} / 2
    let weights = |i: usize| -> (f64, f64) {
        let fi = i as f64;
        let lp = ln_half - lambda + fi * ln_lambda - ln_gamma(fi + 1.0);
        let lq = ln_half - lambda + (fi + 0.5) * ln_lambda - ln_gamma(fi + 1.5);
        (lp.exp(), d.signum() * lq.exp())
    };
    let (mut pw, mut qw) = if log_weights {
        weights(0)
    } else {
        let p0 = 0.5 * (-lambda).exp();
        (p0, sqrt_2_over_pi * p0 * d)
    };
    let mut remaining = 0.5 - pw;
    let mut sum = pw * xodd + qw * xeven;
    let mut bound = f64::INFINITY;
    let mut terms = 1;
    while terms < SERIES_MAX_TERMS {
        let i = terms as f64;
        a += 1.0;
        // the forward differences carry the absolute error of the last direct
        // evaluation, so once a term has halved since then it is recomputed
        let unstable = xodd - godd < 0.5 * sync.0 || xeven - geven < 0.5 * sync.1;
        let resync = terms % RESYNC_EVERY == 0;
        if resync || unstable {
            (xodd, xeven, godd, geven) = beta_state(a)?;
            sync = (xodd, xeven);
        } else {
            xodd -= godd;
            xeven -= geven;
            godd *= y * (a + b - 1.0) / a;
            geven *= y * (a + b - 0.5) / (a + 0.5);
        }
        if log_weights {
            (pw, qw) = weights(terms);
        } else {
            pw *= lambda / i;
            qw *= lambda / (i + 0.5);
        }
        sum += pw * xodd + qw * xeven;
        terms += 1;
        remaining = if resync {
            // Poisson mass at indices >= terms, without the drift of repeated subtraction
            0.5 * log_gamma_pair(terms as f64, lambda)?.0.exp()
        } else {
            remaining - pw
        };
        bound = 2.0 * remaining.max(0.0) * (xodd - godd).max(0.0);
        if bound <= tol && i >= lambda {
            break;
        }
    }
    let diag = SeriesDiagnostics {
        terms_used: terms,
        converged: bound <= tol,
        truncation_bound: bound,
    };
    Ok((sum + ncdf(-d), diag))
}

/// `Phi(((1 - 1/(4 nu)) x - delta) / sqrt(1 + x^2 / (2 nu)))`.
pub fn cdf_normal_approx(p: &NctParams) -> Probability {
    let (x, nu, d) = (p.x(), p.nu(), p.delta());
    let z = (x * (1.0 - 0.25 / nu) - d) / (1.0 + x * x / (2.0 * nu)).sqrt();
    Probability::clamped(ncdf(z)).expect("ncdf stays in [0, 1]")
}

/// `Pr(T <= x)` by adaptive quadrature of
/// `int_0^inf Phi(x sqrt(q/nu) - delta) f_chi2(q; nu) dq`.
///
/// Works in `ln q` with a log-scaled integrand, so it reaches the same
/// deep tails as [`crate::cdf`] at a much higher cost.
pub fn cdf_oracle_quadrature(p: &NctParams, rel_tol: f64) -> Result<Probability> {
    let r = oracle(p, MixtureKind::Lower, rel_tol)?;
    Probability::clamped(r.value)
}

/// `Pr(T > x)` by the same quadrature as [`cdf_oracle_quadrature`].
pub fn sf_oracle_quadrature(p: &NctParams, rel_tol: f64) -> Result<Probability> {
    let r = oracle(p, MixtureKind::Upper, rel_tol)?;
    Probability::clamped(r.value)
}

/// Density at `x` by quadrature of
/// `int_0^inf sqrt(q/nu) phi(x sqrt(q/nu) - delta) f_chi2(q; nu) dq`.
pub fn pdf_oracle_quadrature(p: &NctParams, rel_tol: f64) -> Result<f64> {
    Ok(oracle(p, MixtureKind::Density, rel_tol)?.value)
}

/// Raw oracle integral with its error estimate.
pub fn oracle(p: &NctParams, kind: MixtureKind, rel_tol: f64) -> Result<QuadratureResult> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(NctError::domain(
            "oracle",
            format!("rel_tol = {rel_tol} must lie in (0, 1)"),
        ));
    }
    chi_mixture(p, kind, rel_tol).map_err(|e| e.in_eval(p.x(), p.nu(), p.delta()))
}
