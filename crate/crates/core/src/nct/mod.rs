//! The noncentral t-distribution: CDF by direct quadrature, PDF, quantile and
//! inverse-parameter solvers.
//!
//! For `x > 0` the CDF is
//!
//! ```text
//! F(x) = Phi(-delta) + int_{-delta}^inf Q(nu/2, nu (z + delta)^2 / (2 x^2)) phi(z) dz
//! ```
//!
//! with `Q` the regularized upper incomplete gamma function. The integrand
//! is concentrated around a single mode, so a short window found around that
//! mode and a handful of (G7, K15) panels suffice. When `x > delta` the upper
//! tail is integrated instead (with `P = 1 - Q` in place of `Q`), so that
//! whichever tail is small is always computed with full relative precision.

mod distribution;
mod integrand;
mod inverse;
mod window;

pub use distribution::{cdf, integrand_trace, pdf, IntegrandTrace};
pub use integrand::{integrand_g, integrand_g_upper, log_integrand_h, mode_zmod};
pub use inverse::{quantile, quantile_tail, solve_delta, solve_nu};
pub use window::window;

use crate::error::{NctError, Result};
use crate::specfun::{PositiveReal, Probability};
use std::fmt;

/// `Phi^{-1}` of the smallest positive normal double.
pub const Z_FLOOR: f64 = -37.5194;

/// An evaluation triple `(x, nu, delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NctParams {
    x: f64,
    nu: PositiveReal,
    delta: f64,
}

impl NctParams {
    pub fn new(x: f64, nu: f64, delta: f64) -> Result<Self> {
        let nu = PositiveReal::new(nu)
            .map_err(|_| NctError::domain("NctParams", format!("nu = {nu} must be finite and > 0")))?;
        Self::from_parts(x, nu, delta)
    }

    pub fn from_parts(x: f64, nu: PositiveReal, delta: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(NctError::domain("NctParams", format!("x = {x} must be finite")));
        }
        if !delta.is_finite() {
            return Err(NctError::domain("NctParams", format!("delta = {delta} must be finite")));
        }
        Ok(NctParams { x, nu, delta })
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu.value()
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `(-x, nu, -delta)`, whose lower tail is this triple's upper tail.
    pub fn reflected(&self) -> NctParams {
        NctParams {
            x: -self.x,
            nu: self.nu,
            delta: -self.delta,
        }
    }

    pub(crate) fn with_x(&self, x: f64) -> NctParams {
        NctParams { x, ..*self }
    }

    pub(crate) fn with_delta(&self, delta: f64) -> NctParams {
        NctParams { delta, ..*self }
    }

    pub(crate) fn with_nu(&self, nu: f64) -> NctParams {
        NctParams {
            nu: PositiveReal::new(nu).expect("positive nu"),
            ..*self
        }
    }

    pub(crate) fn require_positive_x(&self, op: &'static str) -> Result<()> {
        if self.x > 0.0 {
            Ok(())
        } else {
            Err(NctError::domain(op, format!("needs x > 0, got {}", self.x)))
        }
    }
}

impl fmt::Display for NctParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x = {}, nu = {}, delta = {})", self.x, self.nu, self.delta)
    }
}

/// Accuracy knobs for the CDF and the root finders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative tolerance of the window reduction.
    pub eps_r: f64,
    /// Smallest probability the window is asked to resolve.
    pub r_eps0: f64,
    /// `Phi^{-1}(r_eps0)`; bounds every window.
    pub z_floor: f64,
    /// Number of equal-width K15 panels.
    pub n_subs: usize,
    /// Convergence threshold on `|ln tail - ln target|` for the inverses.
    pub solver_log_tol: f64,
    /// Iteration cap for the inverses.
    pub max_iter: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eps_r: 1e-16,
            r_eps0: f64::MIN_POSITIVE,
            z_floor: Z_FLOOR,
            n_subs: 16,
            solver_log_tol: 1e-14,
            max_iter: 300,
        }
    }
}

impl ToleranceConfig {
    pub fn with_n_subs(mut self, n_subs: usize) -> Self {
        self.n_subs = n_subs;
        self
    }

    pub fn with_eps_r(mut self, eps_r: f64) -> Self {
        self.eps_r = eps_r;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_r > 0.0 && self.eps_r < 1.0) {
            return Err(NctError::domain(
                "ToleranceConfig",
                format!("eps_r = {} not in (0, 1)", self.eps_r),
            ));
        }
        if self.n_subs == 0 {
            return Err(NctError::domain("ToleranceConfig", "n_subs must be >= 1"));
        }
        if !(self.r_eps0 > 0.0 && self.r_eps0 < 0.5) {
            return Err(NctError::domain(
                "ToleranceConfig",
                format!("r_eps0 = {} not in (0, 0.5)", self.r_eps0),
            ));
        }
        let z = crate::specfun::ninv(self.r_eps0);
        if (z - self.z_floor).abs() > 1e-3 {
            return Err(NctError::domain(
                "ToleranceConfig",
                format!("z_floor = {} differs from norm_inv(r_eps0) = {z}", self.z_floor),
            ));
        }
        if !(self.solver_log_tol > 0.0) || self.max_iter == 0 {
            return Err(NctError::domain(
                "ToleranceConfig",
                "solver tolerances must be positive",
            ));
        }
        Ok(())
    }
}

/// Which tail of the distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailSide {
    Lower,
    Upper,
}

impl TailSide {
    pub fn flip(self) -> TailSide {
        match self {
            TailSide::Lower => TailSide::Upper,
            TailSide::Upper => TailSide::Lower,
        }
    }
}

impl fmt::Display for TailSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailSide::Lower => "lower",
            TailSide::Upper => "upper",
        })
    }
}

/// The tail that carries full relative precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NativeTail {
    Lower,
    Upper,
    /// Both tails are closed-form (`x = 0`).
    Exact,
}

impl fmt::Display for NativeTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NativeTail::Lower => "lower",
            NativeTail::Upper => "upper",
            NativeTail::Exact => "exact",
        })
    }
}

/// Finite integration limits and the closed-form part of the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationWindow {
    pub a: f64,
    pub b: f64,
    /// Tail whose integrand is integrated over `[a, b]`.
    pub tail: TailSide,
    /// `Phi(a1)` for the lower tail or `1 - Phi(b1)` for the upper, where
    /// `a1`/`b1` is the chi-square quantile cut beyond which the gamma factor
    /// is within `eps_r` of one.
    pub analytic_head: Probability,
    /// Outer limits the window was confined to.
    pub lo: f64,
    pub hi: f64,
    /// Mode estimate used to centre the window.
    pub z_mod: f64,
    /// `ln eps_a`, the absolute integrand level at the window ends. Kept in
    /// log form because `eps_a` itself may underflow.
    pub ln_eps_a: f64,
    /// The endpoint sits on an outer limit with the integrand still above `eps_a`.
    pub a_clamped: bool,
    pub b_clamped: bool,
    /// The reduction produced an empty window; a width-1e-3 window around
    /// `z_mod` is used instead.
    pub degenerate: bool,
}

impl IntegrationWindow {
    pub fn eps_a(&self) -> f64 {
        self.ln_eps_a.exp()
    }
}

/// Both tails of the distribution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailProbability {
    pub lower: Probability,
    pub upper: Probability,
    pub native_tail: NativeTail,
    /// The value came from the reflected triple `(-x, nu, -delta)`.
    pub reflected: bool,
    /// Quadrature error estimate on the native tail.
    pub quad_error: f64,
    pub evaluations: usize,
}

impl TailProbability {
    pub fn tail(&self, side: TailSide) -> f64 {
        match side {
            TailSide::Lower => self.lower.value(),
            TailSide::Upper => self.upper.value(),
        }
    }

    /// The smaller tail and its side; the lower tail wins ties.
    pub fn smaller(&self) -> (TailSide, f64) {
        if self.lower.value() <= self.upper.value() {
            (TailSide::Lower, self.lower.value())
        } else {
            (TailSide::Upper, self.upper.value())
        }
    }

    pub(crate) fn swapped(self) -> TailProbability {
        TailProbability {
            lower: self.upper,
            upper: self.lower,
            native_tail: match self.native_tail {
                NativeTail::Lower => NativeTail::Upper,
                NativeTail::Upper => NativeTail::Lower,
                NativeTail::Exact => NativeTail::Exact,
            },
            reflected: !self.reflected,
            ..self
        }
    }
}
