//! Chi-square distribution helpers.

use super::gamma::{ln_gamma, ln_prefix, log_gamma_pair, reg_gamma_pair};
use super::normal::ninv;
use super::{PositiveReal, Probability};
use crate::error::{NctError, Result};

const MAX_ITER: usize = 200;

/// `F(q; nu) = P(nu/2, q/2)`.
pub fn chi2_cdf(q: f64, nu: PositiveReal) -> Result<Probability> {
    Probability::clamped(reg_gamma_pair(0.5 * nu.value(), 0.5 * q)?.0)
}

/// `1 - F(q; nu)`, computed natively.
pub fn chi2_sf(q: f64, nu: PositiveReal) -> Result<Probability> {
    Probability::clamped(reg_gamma_pair(0.5 * nu.value(), 0.5 * q)?.1)
}

/// Closed-form quantile approximation used to trim the integration window:
///
/// `q = nu + 2 eps + 1.62 sqrt(nu eps) + 0.63012 sqrt(nu) ln eps
///      - 1.12032 sqrt(nu) - 2.48 sqrt(eps) - 0.65381 ln eps - 0.22872`,
///
/// clamped at zero.
pub fn chi2_quantile_approx_inglot(eps: f64, nu: PositiveReal) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(NctError::domain(
            "chi2_quantile_approx_inglot",
            format!("eps = {eps} must lie in (0, 1)"),
        ));
    }
    let nu = nu.value();
    let sn = nu.sqrt();
    let le = eps.ln();
    let q = nu + 2.0 * eps + 1.62 * (nu * eps).sqrt() + 0.63012 * sn * le
        - 1.12032 * sn
        - 2.48 * eps.sqrt()
        - 0.65381 * le
        - 0.22872;
    Ok(q.max(0.0))
}

/// Which tail a quantile target refers to.
#[derive(Clone, Copy, PartialEq)]
enum Side {
    Lower,
    Upper,
}

/// Solves `ln P(a, q/2) = ln p` (lower) or `ln Q(a, q/2) = ln p` (upper) by
/// safeguarded Newton in `ln q`.
fn solve(p: f64, side: Side, nu: f64) -> Result<f64> {
    let a = 0.5 * nu;
    let target = p.ln();
    // Returns G and dG/d(ln q). The upper form is negated so that G always
    // increases with q.
    let eval = |q: f64| -> Result<(f64, f64)> {
        let (lp, lq) = log_gamma_pair(a, 0.5 * q)?;
        let lpre = ln_prefix(a, 0.5 * q);
        Ok(match side {
            Side::Lower => (lp - target, (lpre - lp).exp()),
            Side::Upper => (target - lq, (lpre - lq).exp()),
        })
    };

    let p_lower = if side == Side::Lower { p } else { 1.0 - p };
    let z = if side == Side::Lower { ninv(p) } else { -ninv(p) };
    let k = 2.0 / (9.0 * nu);
    let wh = nu * (1.0 - k + z * k.sqrt()).powi(3);
    let mut u = if wh > 0.0 && p_lower > 1e-3 {
        wh.ln()
    } else if side == Side::Lower {
        // P(a, q/2) ~ (q/2)^a / Gamma(a+1) for small q
        std::f64::consts::LN_2 + (target + ln_gamma(a + 1.0)) / a
    } else {
        nu.max(1.0).ln()
    };
    if !u.is_finite() {
        u = nu.max(1.0).ln();
    }

    // Bracket, then Newton in ln q. The iterate is kept as q itself so its
    // relative resolution does not degrade with |ln q|.
    let mut q = u.exp();
    let (mut g, mut dg) = eval(q)?;
    let (mut lo, mut hi);
    let mut step = 1.0f64;
    if g < 0.0 {
        lo = q;
        hi = q * step.exp();
        while eval(hi)?.0 < 0.0 {
            lo = hi;
            step *= 2.0;
            hi *= step.exp();
            if !hi.is_finite() {
                return Err(NctError::range("chi2_quantile", format!("p = {p:e} not bracketed")));
            }
        }
    } else {
        hi = q;
        lo = q * (-step).exp();
        while eval(lo)?.0 > 0.0 {
            hi = lo;
            step *= 2.0;
            lo *= (-step).exp();
            if lo == 0.0 {
                return Err(NctError::range("chi2_quantile", format!("p = {p:e} not bracketed")));
            }
        }
    }

    for _ in 0..MAX_ITER {
        if g == 0.0 {
            return Ok(q);
        }
        if g < 0.0 {
            lo = lo.max(q);
        } else {
            hi = hi.min(q);
        }
        let du = -g / dg;
        let newton = q * du.exp();
        let next = if dg > 0.0 && newton >= lo && newton <= hi {
            newton
        } else {
            (lo * hi).sqrt()
        };
        if du.abs() <= 4.0 * f64::EPSILON || hi <= lo * (1.0 + 8.0 * f64::EPSILON) {
            return Ok(next);
        }
        q = next;
        (g, dg) = eval(q)?;
    }
    Err(NctError::NoConvergence {
        op: "chi2_quantile",
        iterations: MAX_ITER,
        best: q,
        estimate: hi - lo,
    })
}

/// `q` with `F(q; nu) = p`.
pub fn chi2_quantile_exact(p: Probability, nu: PositiveReal) -> Result<f64> {
    let v = p.value();
    if !p.is_interior() {
        return Err(NctError::domain(
            "chi2_quantile_exact",
            format!("p = {v} must lie in (0, 1)"),
        ));
    }
    if v <= 0.5 {
        solve(v, Side::Lower, nu.value())
    } else {
        solve(1.0 - v, Side::Upper, nu.value())
    }
}

/// `q` with `1 - F(q; nu) = p_upper`; keeps full precision for tiny `p_upper`.
pub fn chi2_quantile_upper_exact(p_upper: Probability, nu: PositiveReal) -> Result<f64> {
    let v = p_upper.value();
    if !p_upper.is_interior() {
        return Err(NctError::domain(
            "chi2_quantile_upper_exact",
            format!("p = {v} must lie in (0, 1)"),
        ));
    }
    if v <= 0.5 {
        solve(v, Side::Upper, nu.value())
    } else {
        solve(1.0 - v, Side::Lower, nu.value())
    }
}

/// Chernoff bound on the upper `eps`-quantile: the root `q > nu` of
/// `q - nu - nu ln(q/nu) = 2 ln(1/eps)`. Beyond it `1 - F(q) < eps`.
pub fn chi2_quantile_upper_chernoff(eps: f64, nu: PositiveReal) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(NctError::domain(
            "chi2_quantile_upper_chernoff",
            format!("eps = {eps} must lie in (0, 1)"),
        ));
    }
    let nu = nu.value();
    let s = -2.0 * eps.ln() / nu;
    // nu * phi(r) = t with phi(r) = r - 1 - ln r, solved for r = q / nu > 1
    let phi = |r: f64| (r - 1.0) - (r - 1.0).ln_1p();
    let mut r = 1.0 + s + (2.0 * s).sqrt();
    while phi(r) < s {
        r = 1.0 + 2.0 * (r - 1.0);
    }
    for _ in 0..MAX_ITER {
        let step = (phi(r) - s) / (1.0 - 1.0 / r);
        r -= step;
        if step.abs() <= 1e-15 * r {
            break;
        }
    }
    Ok(nu * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(v: f64) -> PositiveReal {
        PositiveReal::new(v).unwrap()
    }
    fn pb(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(chi2_cdf(0.0, pr(3.0)).unwrap().value(), 0.0);
        let m = chi2_cdf(2.0 * std::f64::consts::LN_2, pr(2.0)).unwrap().value();
        assert!((m - 0.5).abs() < 1e-16);
        // mpmath gammainc(50, 0, 50, regularized=True)
        let v = chi2_cdf(100.0, pr(100.0)).unwrap().value();
        assert!(((v - 0.518_808_315_472_043_3) / v).abs() < 1e-12);
    }

    #[test]
    fn inglot_examples() {
        assert_eq!(chi2_quantile_approx_inglot(1e-16, pr(100.0)).unwrap(), 0.0);
        let q = chi2_quantile_approx_inglot(1e-16, pr(1e5)).unwrap();
        // termwise evaluation of the formula in Python
        assert!((q - 92_328.519_506_042_18).abs() < 1e-6, "{q}");
        assert!(chi2_quantile_approx_inglot(1.0 - 1e-12, pr(4.0)).unwrap() >= 0.0);
        assert!(chi2_quantile_approx_inglot(0.0, pr(4.0)).is_err());
    }

    #[test]
    fn exact_quantile_examples() {
        let q = chi2_quantile_exact(pb(0.5), pr(2.0)).unwrap();
        assert!((q - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
        let q = chi2_quantile_exact(pb(0.95), pr(1.0)).unwrap();
        assert!((q - 3.841_458_820_694_124).abs() < 1e-13, "{q}");
    }

    #[test]
    fn exact_quantile_round_trip() {
        for &nu in &[0.3, 1.0, 2.5, 10.0, 100.0, 1e4, 1e6] {
            for &p in &[1e-18, 1e-9, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-12] {
                let q = chi2_quantile_exact(pb(p), pr(nu)).unwrap();
                let back = chi2_cdf(q, pr(nu)).unwrap().value();
                assert!((back - p).abs() <= 1e-13, "nu={nu} p={p}: {back}");
            }
        }
    }

    #[test]
    fn upper_quantile_is_tail_accurate() {
        let q = chi2_quantile_upper_exact(pb(1e-200), pr(10.0)).unwrap();
        let back = chi2_sf(q, pr(10.0)).unwrap().value();
        assert!(((back - 1e-200) / 1e-200).abs() < 1e-12, "{back:e}");
    }

    #[test]
    fn chernoff_bound_is_conservative() {
        for &nu in &[0.5, 1.0, 10.0, 1000.0, 1e6] {
            let q = chi2_quantile_upper_chernoff(1e-16, pr(nu)).unwrap();
            assert!(q > nu);
            let sf = chi2_sf(q, pr(nu)).unwrap().value();
            assert!(sf <= 1e-16, "nu={nu}: sf={sf:e}");
        }
    }
}
