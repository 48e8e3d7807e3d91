// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod mixture;
pub mod nct;
pub mod quadrature;
pub mod reference;
mod roots;
pub mod specfun;
pub mod table;

pub use error::{NctError, Result};
pub use nct::{
    cdf, pdf, quantile, quantile_tail, solve_delta, solve_nu, IntegrationWindow, NativeTail, NctParams,
    TailProbability, TailSide, ToleranceConfig,
};
pub use specfun::{PositiveReal, Probability};
