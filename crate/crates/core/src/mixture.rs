//! Integrals over the chi-square mixing distribution,
//!
//! `F(x) = int_0^inf Phi(x sqrt(q/nu) - delta) f_nu(q) dq`,
//!
//! evaluated by adaptive quadrature in `t = ln q` on a log-scaled integrand.
//! Slow but independent of the window machinery; used as a test oracle and
//! as the PDF fallback where the CDF-difference formula cancels.

use crate::error::{NctError, Result};
use crate::nct::NctParams;
use crate::quadrature::{adaptive, QuadratureResult};
use crate::specfun::{
    chi2_quantile_upper_chernoff, ln_gamma, ln_ncdf, ln_phi, ln_prefix, log_gamma_pair, PositiveReal,
};
use std::cell::RefCell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixtureKind {
    /// `Pr(T <= x)`
    Lower,
    /// `Pr(T > x)`
    Upper,
    /// density at `x`
    Density,
}

// Stop extending the range once the integrand is this far (in log units)
// below its peak.
const LOG_DROP: f64 = 80.0;
const T_MIN: f64 = -700.0;

pub(crate) fn chi_mixture(p: &NctParams, kind: MixtureKind, rel_tol: f64) -> Result<QuadratureResult> {
    let (x, nu, d) = (p.x(), p.nu(), p.delta());
    let a = 0.5 * nu;
    let ln_nu = nu.ln();
    let log_f = |t: f64| -> f64 {
        let q = t.exp();
        let arg = x * (0.5 * (t - ln_nu)).exp() - d;
        // q f_nu(q) = (q/2)^a e^{-q/2} / Gamma(a)
        let base = ln_prefix(a, 0.5 * q);
        match kind {
            MixtureKind::Lower => base + ln_ncdf(arg),
            MixtureKind::Upper => base + ln_ncdf(-arg),
            MixtureKind::Density => base + 0.5 * (t - ln_nu) + ln_phi(arg),
        }
    };

    // search range: below t_lo the chi-square mass is under 1e-300 (the
    // small-q approximation of P(a, q/2) only overestimates), above t_hi too
    let ln_p = -300.0 * std::f64::consts::LN_10;
    let t_lo = (std::f64::consts::LN_2 + (ln_p + ln_gamma(a + 1.0)) / a).max(T_MIN);
    let t_hi = chi2_quantile_upper_chernoff(1e-300, PositiveReal::new(nu)?)?.ln();

    let t_star = crate::roots::maximize(|t| Ok(log_f(t)), t_lo, t_hi, 100)?;
    let peak = log_f(t_star);
    if !peak.is_finite() {
        return Err(NctError::NonFinite {
            node: t_star,
            value: peak,
        });
    }

    let walk = |dir: f64, lim: f64| -> f64 {
        let mut step = 0.05;
        let mut t = t_star;
        loop {
            t += dir * step;
            if (dir < 0.0 && t <= lim) || (dir > 0.0 && t >= lim) {
                return lim;
            }
            if log_f(t) < peak - LOG_DROP {
                return t;
            }
            step *= 1.5;
        }
    };
    let t_a = walk(-1.0, t_lo);
    let t_b = walk(1.0, t_hi);

    let failure: RefCell<Option<NctError>> = RefCell::new(None);
    let r = adaptive(
        |t| {
            let v = (log_f(t) - peak).exp();
            if v.is_nan() {
                failure
                    .borrow_mut()
                    .get_or_insert(NctError::NonFinite { node: t, value: v });
            }
            v
        },
        t_a,
        t_b,
        rel_tol,
        1e-300,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = r?;
    let scale = peak.exp();
    let mut value = r.value * scale;
    let mut error = r.error_estimate * scale;

    if t_a <= t_lo {
        // mass below q_a = e^{t_a}: there x sqrt(q/nu) is negligible next to delta
        let qa = t_a.exp();
        let rest = match kind {
            MixtureKind::Lower => (ln_ncdf(-d) + log_gamma_pair(a, 0.5 * qa)?.0).exp(),
            MixtureKind::Upper => (ln_ncdf(d) + log_gamma_pair(a, 0.5 * qa)?.0).exp(),
            MixtureKind::Density => {
                // int_0^qa sqrt(q/nu) f_nu(q) dq = sqrt(2/nu) Gamma(a+1/2)/Gamma(a) P(a+1/2, qa/2)
                (ln_phi(-d) + 0.5 * (2.0 / nu).ln() + ln_gamma(a + 0.5) - ln_gamma(a)
                    + log_gamma_pair(a + 0.5, 0.5 * qa)?.0)
                    .exp()
            }
        };
        value += rest;
        error += rest * 1e-6;
    }
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations: r.evaluations,
    })
}
