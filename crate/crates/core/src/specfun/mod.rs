//! Double-precision special functions: the standard normal, log-gamma,
//! regularized incomplete gamma and beta functions and chi-square helpers.
//!
//! Every probability-valued routine computes the smaller of the two tails
//! natively so that results keep full relative precision far below `1e-300`.

mod beta;
mod chi2;
mod gamma;
mod normal;
mod temme;

pub use beta::inc_beta;
pub use chi2::{
    chi2_cdf, chi2_quantile_approx_inglot, chi2_quantile_exact, chi2_quantile_upper_chernoff,
    chi2_quantile_upper_exact, chi2_sf,
};
pub use gamma::{gamma_ln, log_reg_gamma_lower, log_reg_gamma_upper, reg_gamma_lower, reg_gamma_upper};
pub use normal::{log_norm_cdf, norm_cdf, norm_inv, norm_pdf, norm_sf};

pub(crate) use beta::inc_beta_pair;
pub(crate) use gamma::{ln_gamma, ln_prefix, log_gamma_pair, GammaShape};
pub(crate) use normal::{ln_ncdf, ln_phi, ncdf, ninv, phi};

use crate::error::{NctError, Result};
use std::fmt;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(NctError::domain(
                "Probability::new",
                format!("{value} is not in [0, 1]"),
            ))
        }
    }

    /// Clamps a computed value into `[0, 1]`; NaN is rejected.
    pub(crate) fn clamped(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(NctError::domain("Probability::clamped", "NaN"));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`, rounded once.
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }

    /// True for `0 < p < 1`.
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = NctError;
    fn try_from(v: f64) -> Result<Self> {
        Probability::new(v)
    }
}

/// A finite, strictly positive real (degrees of freedom, gamma shapes).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(PositiveReal(value))
        } else {
            Err(NctError::domain(
                "PositiveReal::new",
                format!("{value} is not a finite positive number"),
            ))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for PositiveReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<PositiveReal> for f64 {
    fn from(p: PositiveReal) -> f64 {
        p.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = NctError;
    fn try_from(v: f64) -> Result<Self> {
        PositiveReal::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_rejects_out_of_range_and_nan() {
        assert!(Probability::new(-1e-300).is_err());
        assert!(Probability::new(1.0 + f64::EPSILON).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert_eq!(Probability::new(0.0).unwrap().value(), 0.0);
        assert_eq!(Probability::new(1.0).unwrap().value(), 1.0);
    }

    #[test]
    fn positive_real_rejects_zero_negative_and_infinite() {
        assert!(PositiveReal::new(0.0).is_err());
        assert!(PositiveReal::new(-2.0).is_err());
        assert!(PositiveReal::new(f64::INFINITY).is_err());
        assert!(PositiveReal::new(f64::NAN).is_err());
        assert_eq!(PositiveReal::new(1e-300).unwrap().value(), 1e-300);
    }
}
