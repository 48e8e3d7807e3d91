//! Requests, result records and their text/JSON rendering.

use crate::CliError;
use noncentral_t::{
    cdf, pdf, quantile, quantile_tail, solve_delta, solve_nu, NativeTail, NctParams, PositiveReal, Probability,
    TailProbability, TailSide, ToleranceConfig,
};
use serde_json::{Map, Number, Value};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operation {
    Cdf,
    Pdf,
    Quantile,
    SolveDelta,
    SolveNu,
}

/// One evaluation. Exactly the inputs the operation needs are `Some`.
#[derive(Debug, Clone, Copy)]
pub struct EvalRequest {
    pub op: Operation,
    pub x: Option<f64>,
    pub nu: Option<f64>,
    pub delta: Option<f64>,
    pub prob: Option<f64>,
    pub tail: TailSide,
}

impl EvalRequest {
    pub fn point(op: Operation, x: f64, nu: f64, delta: f64) -> Self {
        EvalRequest {
            op,
            x: Some(x),
            nu: Some(nu),
            delta: Some(delta),
            prob: None,
            tail: TailSide::Lower,
        }
    }

    fn need(v: Option<f64>, name: &str) -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::usage(format!("missing {name}")))
    }

    pub fn evaluate(&self, cfg: &ToleranceConfig) -> Result<EvalRecord, CliError> {
        let start = Instant::now();
        let mut rec = EvalRecord {
            request: *self,
            x: 0.0,
            nu: 0.0,
            delta: 0.0,
            density: None,
            tails: None,
            wall_ns: 0,
        };
        match self.op {
            Operation::Cdf | Operation::Pdf => {
                let p = NctParams::new(
                    Self::need(self.x, "x")?,
                    Self::need(self.nu, "nu")?,
                    Self::need(self.delta, "delta")?,
                )?;
                (rec.x, rec.nu, rec.delta) = (p.x(), p.nu(), p.delta());
                if self.op == Operation::Cdf {
                    rec.tails = Some(cdf(&p, cfg)?);
                } else {
                    rec.density = Some(pdf(&p, cfg)?);
                }
            }
            Operation::Quantile => {
                let nu = positive(Self::need(self.nu, "nu")?)?;
                let delta = Self::need(self.delta, "delta")?;
                let prob = Self::need(self.prob, "p")?;
                let x = match self.tail {
                    TailSide::Lower => quantile(probability(prob)?, nu, delta, cfg)?,
                    TailSide::Upper => quantile_tail(prob, TailSide::Upper, nu, delta, cfg)?,
                };
                (rec.x, rec.nu, rec.delta) = (x, nu.value(), delta);
            }
            Operation::SolveDelta => {
                let x = Self::need(self.x, "x")?;
                let nu = positive(Self::need(self.nu, "nu")?)?;
                let delta = solve_delta(x, nu, probability(Self::need(self.prob, "p")?)?, cfg)?;
                (rec.x, rec.nu, rec.delta) = (x, nu.value(), delta);
            }
            Operation::SolveNu => {
                let x = Self::need(self.x, "x")?;
                let delta = Self::need(self.delta, "delta")?;
                let nu = solve_nu(x, delta, probability(Self::need(self.prob, "p")?)?, cfg)?;
                (rec.x, rec.nu, rec.delta) = (x, nu.value(), delta);
            }
        }
        if matches!(
            self.op,
            Operation::Quantile | Operation::SolveDelta | Operation::SolveNu
        ) {
            // report the tails at the solution so the answer can be checked
            rec.tails = Some(cdf(&NctParams::new(rec.x, rec.nu, rec.delta)?, cfg)?);
        }
        rec.wall_ns = start.elapsed().as_nanos();
        Ok(rec)
    }
}

fn positive(v: f64) -> Result<PositiveReal, CliError> {
    PositiveReal::new(v).map_err(|_| CliError::numeric(format!("nu = {v} must be > 0")))
}

fn probability(v: f64) -> Result<Probability, CliError> {
    Probability::new(v).map_err(|_| CliError::numeric(format!("p = {v} must lie in [0, 1]")))
}

#[derive(Debug, Clone)]
pub struct EvalRecord {
    pub request: EvalRequest,
    pub x: f64,
    pub nu: f64,
    pub delta: f64,
    pub density: Option<f64>,
    pub tails: Option<TailProbability>,
    pub wall_ns: u128,
}

/// 17 significant digits, scientific.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Shortest decimal that parses back to the same double.
pub fn shortest(v: f64) -> String {
    format!("{v:?}")
}

pub fn native_tail_label(t: &TailProbability) -> &'static str {
    match (t.native_tail, t.reflected) {
        (NativeTail::Exact, _) => "Exact",
        (NativeTail::Lower, false) => "Lower",
        (NativeTail::Upper, false) => "Upper",
        (NativeTail::Lower, true) => "Lower-after-reflection",
        (NativeTail::Upper, true) => "Upper-after-reflection",
    }
}

impl EvalRecord {
    /// `(key, value, is_number)` in output order.
    fn fields(&self) -> Vec<(&'static str, String, bool)> {
        let req = &self.request;
        // inputs are echoed in shortest form, solved quantities in full
        let show = |given: Option<f64>, v: f64| match given {
            Some(g) => shortest(g),
            None => sci(v),
        };
        let mut f = vec![
            ("x", show(req.x, self.x), true),
            ("nu", show(req.nu, self.nu), true),
            ("delta", show(req.delta, self.delta), true),
        ];
        if let Some(p) = req.prob {
            f.push(("p", shortest(p), true));
            f.push(("tail", req.tail.to_string(), false));
        }
        if let Some(d) = self.density {
            f.push(("pdf", sci(d), true));
        }
        if let Some(t) = &self.tails {
            f.push(("lower", sci(t.lower.value()), true));
            f.push(("upper", sci(t.upper.value()), true));
            f.push(("native_tail", native_tail_label(t).to_string(), false));
            f.push(("quad_error", sci(t.quad_error), true));
        }
        f
    }

    /// `key=value` pairs on one line; no timing, so identical runs print identical text.
    pub fn text(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(k, v, _)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn json(&self) -> String {
        let mut m = Map::new();
        for (k, v, is_number) in self.fields() {
            let value = if is_number {
                Value::Number(v.parse::<Number>().expect("formatted floats are valid JSON numbers"))
            } else {
                Value::String(v)
            };
            m.insert(k.to_string(), value);
        }
        m.insert("wall_ns".into(), Value::Number(Number::from(self.wall_ns as u64)));
        Value::Object(m).to_string()
    }
}

/// A failed row in batch mode.
pub fn error_json(x: f64, nu: f64, delta: f64, message: &str) -> String {
    let mut m = Map::new();
    for (k, v) in [("x", x), ("nu", nu), ("delta", delta)] {
        m.insert(k.into(), Value::Number(shortest(v).parse().expect("finite input")));
    }
    m.insert("error".into(), Value::String(message.to_string()));
    Value::Object(m).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formats_round_trip() {
        for v in [0.75, 7.315011025292485e-272, 1e-300, -35.0, 2.0f64.sqrt()] {
            assert_eq!(sci(v).parse::<f64>().unwrap(), v);
            assert_eq!(shortest(v).parse::<f64>().unwrap(), v);
            assert!(sci(v).parse::<Number>().is_ok());
            assert!(shortest(v).parse::<Number>().is_ok());
        }
        assert_eq!(sci(0.75), "7.5000000000000000e-1");
    }

    #[test]
    fn json_keys_in_order() {
        let req = EvalRequest::point(Operation::Cdf, 1.0, 1.0, 0.0);
        let rec = req.evaluate(&ToleranceConfig::default()).unwrap();
        let s = rec.json();
        let keys: Vec<String> = match serde_json::from_str::<Value>(&s).unwrap() {
            Value::Object(m) => m.keys().cloned().collect(),
            _ => unreachable!(),
        };
        assert_eq!(
            keys,
            [
                "x",
                "nu",
                "delta",
                "lower",
                "upper",
                "native_tail",
                "quad_error",
                "wall_ns"
            ]
        );
    }
}
