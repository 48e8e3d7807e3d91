use thiserror::Error;

/// Errors raised by the special functions, the integrators and the
/// distribution routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NctError {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: argument out of domain ({detail})")]
    Domain { op: &'static str, detail: String },

    /// An iterative method hit its iteration or panel budget.
    #[error("{op}: no convergence after {iterations} iterations (best {best:e}, error estimate {estimate:e})")]
    NoConvergence {
        op: &'static str,
        iterations: usize,
        best: f64,
        estimate: f64,
    },

    /// An integrand returned NaN or an infinity.
    #[error("non-finite integrand value {value} at node z = {node}")]
    NonFinite { node: f64, value: f64 },

    /// A root could not be bracketed.
    #[error("{op}: no root in range ({detail})")]
    Range { op: &'static str, detail: String },

    /// A failure inside a distribution evaluation, tagged with its parameters.
    #[error("evaluation at x = {x}, nu = {nu}, delta = {delta} failed: {source}")]
    Eval {
        x: f64,
        nu: f64,
        delta: f64,
        #[source]
        source: Box<NctError>,
    },
}

impl NctError {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        NctError::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn range(op: &'static str, detail: impl Into<String>) -> Self {
        NctError::Range {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn in_eval(self, x: f64, nu: f64, delta: f64) -> Self {
        match self {
            // already tagged
            e @ NctError::Eval { .. } => e,
            e => NctError::Eval {
                x,
                nu,
                delta,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, NctError>;
