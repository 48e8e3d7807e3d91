//! Log-gamma and the regularized incomplete gamma functions.

use super::normal::ln_ncdf;
use super::{temme, PositiveReal, Probability};
use crate::error::{NctError, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;
const LANCZOS_R: f64 = 10.900_511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_557_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_057_067_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];

const STIRLING_SWITCH: f64 = 10.0;
const BASE_ITERATIONS: usize = 10_000;

/// Lanczos approximation, valid for `a >= 0.5`.
fn ln_gamma_lanczos(a: f64) -> f64 {
    let mut s = LANCZOS_DK[0];
    for (i, &d) in LANCZOS_DK.iter().enumerate().skip(1) {
        s += d / (a + i as f64 - 1.0);
    }
    s.ln() + TWO_SQRT_E_OVER_PI.ln() + (a - 0.5) * ((a - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
}

/// Tail of Stirling's series, `ln Gamma(a) - (a - 1/2) ln a + a - ln sqrt(2 pi)`.
pub(crate) fn stirlerr(a: f64) -> f64 {
    if a < STIRLING_SWITCH {
        return ln_gamma(a) - (a - 0.5) * a.ln() + a - LN_SQRT_2PI;
    }
    let r = 1.0 / a;
    let r2 = r * r;
    let series = 1.0 / 12.0
        - r2 * (1.0 / 360.0
            - r2 * (1.0 / 1260.0
                - r2 * (1.0 / 1680.0
                    - r2 * (1.0 / 1188.0
                        - r2 * (691.0 / 360_360.0 - r2 * (1.0 / 156.0 - r2 * (3617.0 / 122_400.0)))))));
    series * r
}

/// Unchecked `ln Gamma(a)` for `a > 0`.
pub(crate) fn ln_gamma(a: f64) -> f64 {
    if a == 1.0 || a == 2.0 {
        0.0
    } else if a < 0.5 {
        ln_gamma_lanczos(a + 1.0) - a.ln()
    } else if a < STIRLING_SWITCH {
        ln_gamma_lanczos(a)
    } else {
        (a - 0.5) * a.ln() - a + LN_SQRT_2PI + stirlerr(a)
    }
}

/// `a ln(a/x) + x - a`, evaluated without cancellation when `a ~ x`.
pub(crate) fn bd0(a: f64, x: f64) -> f64 {
    if (a - x).abs() < 0.1 * (a + x) {
        let v = (a - x) / (a + x);
        let v2 = v * v;
        let mut s = (a - x) * v;
        let mut ej = 2.0 * a * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        a * (a / x).ln() + x - a
    }
}

/// `ln(x^a e^-x / Gamma(a))`.
pub(crate) fn ln_prefix(a: f64, x: f64) -> f64 {
    GammaShape::new(a).ln_prefix(x)
}

/// Shape-dependent constants for repeated evaluation at one `a`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GammaShape {
    a: f64,
    /// `-ln Gamma(a)` below the Stirling switch, else `ln sqrt(a / 2 pi) - stirlerr(a)`
    c: f64,
    /// `2a` when `a` is a small integer or half-integer, so `Q` has a finite form
    twice_a: Option<u32>,
}

/// Largest shape given the finite-sum upper tail.
const FINITE_SUM_MAX: f64 = 30.0;

impl GammaShape {
    pub fn new(a: f64) -> Self {
        let c = if a < STIRLING_SWITCH {
            -ln_gamma(a)
        } else {
            0.5 * (a / (2.0 * std::f64::consts::PI)).ln() - stirlerr(a)
        };
        let twice_a = (a <= FINITE_SUM_MAX && (2.0 * a).fract() == 0.0).then_some((2.0 * a) as u32);
        GammaShape { a, c, twice_a }
    }

    /// `ln Q(a, x)` for `2a = m`:
    /// `Q = e^-x sum_{k<a} x^k / k!` for integer `a` and
    /// `Q = erfc(sqrt x) + e^-x sum_{k<a-1/2} x^{k+1/2} / Gamma(k+3/2)` otherwise.
    /// Every term is positive, so the sum keeps full relative precision.
    fn ln_upper_finite(&self, m: u32, x: f64) -> f64 {
        // terms relative to the largest, x^{a-1} / Gamma(a), summed from the smallest
        let n = m / 2;
        let offset = if m.is_multiple_of(2) { 0.0 } else { 0.5 };
        let mut t = 1.0;
        let mut sum = 0.0;
        let mut terms = [0.0; FINITE_SUM_MAX as usize];
        for k in (0..n).rev() {
            terms[k as usize] = t;
            t *= (k as f64 + offset) / x;
        }
        for v in terms[..n as usize].iter() {
            sum += v;
        }
        let ln_sum = if n > 0 {
            self.ln_prefix(x) - x.ln() + sum.ln()
        } else {
            f64::NEG_INFINITY
        };
        if m.is_multiple_of(2) {
            return ln_sum;
        }
        let ln_erfc = std::f64::consts::LN_2 + ln_ncdf(-(2.0 * x).sqrt());
        let (hi, lo) = if ln_sum > ln_erfc {
            (ln_sum, ln_erfc)
        } else {
            (ln_erfc, ln_sum)
        };
        hi + (lo - hi).exp().ln_1p()
    }

    pub fn ln_prefix(&self, x: f64) -> f64 {
        if self.a < STIRLING_SWITCH {
            self.a * x.ln() - x + self.c
        } else {
            -bd0(self.a, x) + self.c
        }
    }

    /// The tail evaluated directly, as `(is_upper, ln value)`. Needs `x >= 0`.
    fn native(&self, x: f64) -> Result<(bool, f64)> {
        let a = self.a;
        if x == 0.0 {
            return Ok((false, f64::NEG_INFINITY));
        }
        if x == f64::INFINITY {
            return Ok((true, f64::NEG_INFINITY));
        }
        if let (Some(m), true) = (self.twice_a, x >= a + 1.0) {
            return Ok((true, self.ln_upper_finite(m, x)));
        }
        if let Some(n) = temme::native(a, x) {
            return Ok(n);
        }
        if x < a + 1.0 {
            Ok((false, self.ln_prefix(x) + lower_series(a, x)?.ln()))
        } else {
            Ok((true, self.ln_prefix(x) + upper_cf(a, x)?.ln()))
        }
    }

    /// `(ln P(a, x), ln Q(a, x))`.
    pub fn log_pair(&self, x: f64) -> Result<(f64, f64)> {
        let (upper, ln) = self.native(x)?;
        let other = (-ln.exp()).ln_1p();
        Ok(if upper { (other, ln) } else { (ln, other) })
    }

    /// `(P(a, x), Q(a, x))`.
    pub fn pair(&self, x: f64) -> Result<(f64, f64)> {
        let (upper, ln) = self.native(x)?;
        let v = ln.exp();
        Ok(if upper { (1.0 - v, v) } else { (v, 1.0 - v) })
    }

    /// `Q(a, x) w` if `upper`, else `P(a, x) w`, for a weight `w = e^ln_w`;
    /// goes through logs where the tail alone would underflow.
    pub fn tail_weighted(&self, x: f64, upper: bool, w: f64, ln_w: f64) -> Result<f64> {
        let (native_upper, ln) = self.native(x)?;
        Ok(if native_upper != upper {
            -ln.exp_m1() * w
        } else if ln > -700.0 {
            ln.exp() * w
        } else {
            (ln + ln_w).exp()
        })
    }

    /// `ln Q(a, x)` if `upper`, else `ln P(a, x)`.
    pub fn ln_tail(&self, x: f64, upper: bool) -> Result<f64> {
        let (native_upper, ln) = self.native(x)?;
        Ok(if native_upper == upper { ln } else { (-ln.exp()).ln_1p() })
    }
}

fn iteration_cap(a: f64) -> usize {
    // sqrt(a) terms are needed near x ~ a; keep headroom for huge shapes
    BASE_ITERATIONS.max((50.0 * a.sqrt()) as usize)
}

/// `sum_{n>=0} x^n / (a (a+1) ... (a+n))`, so that `P(a,x) = prefix * sum`.
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let cap = iteration_cap(a);
    for n in 1..=cap {
        term *= x / (a + n as f64);
        sum += term;
        if term <= sum * 1e-17 {
            return Ok(sum);
        }
    }
    Err(NctError::NoConvergence {
        op: "reg_gamma (series)",
        iterations: cap,
        best: sum,
        estimate: term,
    })
}

/// Continued fraction with `Q(a,x) = prefix * cf`, modified Lentz.
fn upper_cf(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    let cap = iteration_cap(a);
    for i in 1..=cap {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= 2.0 * f64::EPSILON {
            return Ok(h);
        }
    }
    Err(NctError::NoConvergence {
        op: "reg_gamma (continued fraction)",
        iterations: cap,
        best: h,
        estimate: f64::NAN,
    })
}

fn check_args(op: &'static str, a: f64, x: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(NctError::domain(op, format!("shape a = {a} must be finite and > 0")));
    }
    if !(x >= 0.0) {
        return Err(NctError::domain(op, format!("x = {x} must be >= 0")));
    }
    Ok(())
}

/// `(ln P(a,x), ln Q(a,x))`, each computed natively when it is the smaller.
pub(crate) fn log_gamma_pair(a: f64, x: f64) -> Result<(f64, f64)> {
    check_args("reg_gamma", a, x)?;
    GammaShape::new(a).log_pair(x)
}

/// `(P(a,x), Q(a,x))`.
pub(crate) fn reg_gamma_pair(a: f64, x: f64) -> Result<(f64, f64)> {
    check_args("reg_gamma", a, x)?;
    GammaShape::new(a).pair(x)
}

/// `ln Gamma(a)`.
pub fn gamma_ln(a: PositiveReal) -> f64 {
    ln_gamma(a.value())
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn reg_gamma_upper(a: PositiveReal, x: f64) -> Result<Probability> {
    Probability::clamped(reg_gamma_pair(a.value(), x)?.1)
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn reg_gamma_lower(a: PositiveReal, x: f64) -> Result<Probability> {
    Probability::clamped(reg_gamma_pair(a.value(), x)?.0)
}

/// `ln Q(a, x)`; finite even where `Q` underflows.
pub fn log_reg_gamma_upper(a: PositiveReal, x: f64) -> Result<f64> {
    Ok(log_gamma_pair(a.value(), x)?.1)
}

/// `ln P(a, x)`; finite even where `P` underflows.
pub fn log_reg_gamma_lower(a: PositiveReal, x: f64) -> Result<f64> {
    Ok(log_gamma_pair(a.value(), x)?.0)
}
