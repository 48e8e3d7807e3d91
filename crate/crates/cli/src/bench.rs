//! Timing sweeps.

use crate::args::{BenchArgs, Method};
use crate::record::shortest;
use crate::CliError;
use noncentral_t::reference::cdf_guenther_series;
use noncentral_t::{cdf, NctParams, ToleranceConfig};
use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

/// Parses `v`, `lo:hi:count` (evenly spaced) or `lo:hi:count:log` (geometric).
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| -> Result<f64, String> {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{s}' in sweep '{spec}' is not a finite number"))
    };
    let (lo, hi, count, log) = match parts.as_slice() {
        [v] => return Ok(vec![num(v)?]),
        [lo, hi, n] => (num(lo)?, num(hi)?, *n, false),
        [lo, hi, n, "log"] => (num(lo)?, num(hi)?, *n, true),
        _ => return Err(format!("sweep '{spec}' is not v, lo:hi:count or lo:hi:count:log")),
    };
    let count: usize = count.parse().map_err(|_| format!("bad count in sweep '{spec}'"))?;
    if log && !(lo > 0.0 && hi > 0.0) {
        return Err(format!("log sweep '{spec}' needs positive ends"));
    }
    Ok((0..count)
        .map(|i| {
            let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            if log {
                (lo.ln() + t * (hi.ln() - lo.ln())).exp()
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect())
}

fn once(p: &NctParams, method: Method, cfg: &ToleranceConfig) -> Result<f64, CliError> {
    Ok(match method {
        Method::Direct => cdf(p, cfg)?.lower.value(),
        Method::Series => cdf_guenther_series(p, 1e-16)?.0.value(),
    })
}

pub fn run(a: &BenchArgs, cfg: &ToleranceConfig, out: &mut impl Write) -> Result<(), CliError> {
    let xs = parse_sweep(&a.x).map_err(CliError::usage)?;
    let nus = parse_sweep(&a.nu).map_err(CliError::usage)?;
    let deltas = parse_sweep(&a.delta).map_err(CliError::usage)?;
    let method = match a.method {
        Method::Direct => "direct",
        Method::Series => "series",
    };
    let mut cells = Vec::with_capacity(xs.len() * nus.len() * deltas.len());
    for &x in &xs {
        for &nu in &nus {
            for &d in &deltas {
                cells.push(NctParams::new(x, nu, d)?);
            }
        }
    }
    writeln!(out, "method,x,nu,delta,reps,median_ns,evals_per_sec")?;
    let mut samples = vec![0u128; a.reps as usize];
    for p in &cells {
        for s in samples.iter_mut() {
            let start = Instant::now();
            black_box(once(black_box(p), a.method, cfg)?);
            *s = start.elapsed().as_nanos();
        }
        samples.sort_unstable();
        let median = samples[samples.len() / 2].max(1);
        writeln!(
            out,
            "{method},{},{},{},{},{median},{:.0}",
            shortest(p.x()),
            shortest(p.nu()),
            shortest(p.delta()),
            a.reps,
            1e9 / median as f64
        )?;
    }
    if !cells.is_empty() {
        let start = Instant::now();
        for p in &cells {
            black_box(once(p, a.method, cfg)?);
        }
        let secs = start.elapsed().as_secs_f64();
        eprintln!(
            "batch: {} evaluations in {:.3} ms, {:.0} per second",
            cells.len(),
            secs * 1e3,
            cells.len() as f64 / secs.max(1e-12)
        );
    }
    Ok(())
}
