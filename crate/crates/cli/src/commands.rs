use crate::args::{Cli, Command, PointArgs, QuantileArgs, SolveCommand, Tail, Tuning};
use crate::bench;
use crate::record::{error_json, native_tail_label, sci, shortest, EvalRequest, Operation};
use crate::CliError;
use noncentral_t::nct::integrand_trace;
use noncentral_t::table::GOLD;
use noncentral_t::{cdf, NctParams, TailSide, ToleranceConfig};
use rayon::prelude::*;
use std::io::{Read, Write};
use std::path::Path;

pub fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let cfg = config(&cli.tuning)?;
    match cli.command {
        Command::Cdf(a) => point(Operation::Cdf, a, &cfg, out),
        Command::Pdf(a) => point(Operation::Pdf, a, &cfg, out),
        Command::Quantile(a) => quantile(a, &cfg, out),
        Command::Solve(s) => solve(s, &cfg, out),
        Command::Table(a) => table(a.tol, &cfg, out),
        Command::Integrand(a) => integrand(a.x, a.nu, a.delta, &cfg, out),
        Command::Bench(a) => bench::run(&a, &cfg, out),
    }
}

fn config(t: &Tuning) -> Result<ToleranceConfig, CliError> {
    let mut cfg = ToleranceConfig::default();
    if let Some(n) = t.n_subs {
        cfg = cfg.with_n_subs(n as usize);
    }
    if let Some(e) = t.eps_r {
        cfg = cfg.with_eps_r(e);
    }
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(cfg)
}

fn point(op: Operation, a: PointArgs, cfg: &ToleranceConfig, out: &mut impl Write) -> Result<(), CliError> {
    let Some(path) = &a.batch else {
        // clap guarantees all three without --batch
        let req = EvalRequest::point(op, a.x.unwrap(), a.nu.unwrap(), a.delta.unwrap());
        let rec = req.evaluate(cfg)?;
        writeln!(out, "{}", if a.json { rec.json() } else { rec.text() })?;
        return Ok(());
    };
    let rows = read_batch(path)?;
    let results: Vec<_> = rows
        .par_iter()
        .map(|&(x, nu, d)| EvalRequest::point(op, x, nu, d).evaluate(cfg))
        .collect();
    let mut failed = 0;
    for (&(x, nu, d), r) in rows.iter().zip(results) {
        let line = match r {
            Ok(rec) if a.json => rec.json(),
            Ok(rec) => rec.text(),
            Err(e) => {
                failed += 1;
                if a.json {
                    error_json(x, nu, d, &e.message)
                } else {
                    format!(
                        "x={} nu={} delta={} error=\"{}\"",
                        shortest(x),
                        shortest(nu),
                        shortest(d),
                        e.message
                    )
                }
            }
        };
        writeln!(out, "{line}")?;
    }
    if failed > 0 {
        return Err(CliError::numeric(format!("{failed} of {} rows failed", rows.len())));
    }
    Ok(())
}

/// `x,nu,delta` rows; a first row that does not parse as numbers is taken as a header.
fn read_batch(path: &Path) -> Result<Vec<(f64, f64, f64)>, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::usage(format!("batch input: {e}")))?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        let fields: Vec<Result<f64, _>> = rec.iter().map(str::parse::<f64>).collect();
        if i == 0 && fields.iter().any(Result::is_err) {
            continue;
        }
        match fields.as_slice() {
            [Ok(x), Ok(nu), Ok(d)] if x.is_finite() && nu.is_finite() && d.is_finite() => rows.push((*x, *nu, *d)),
            _ => {
                return Err(CliError::usage(format!(
                    "batch input line {line}: expected three finite numbers x,nu,delta"
                )))
            }
        }
    }
    Ok(rows)
}

fn emit(req: EvalRequest, json: bool, cfg: &ToleranceConfig, out: &mut impl Write) -> Result<(), CliError> {
    let rec = req.evaluate(cfg)?;
    writeln!(out, "{}", if json { rec.json() } else { rec.text() })?;
    Ok(())
}

fn quantile(a: QuantileArgs, cfg: &ToleranceConfig, out: &mut impl Write) -> Result<(), CliError> {
    let req = EvalRequest {
        op: Operation::Quantile,
        x: None,
        nu: Some(a.nu),
        delta: Some(a.delta),
        prob: Some(a.p),
        tail: match a.tail {
            Tail::Lower => TailSide::Lower,
            Tail::Upper => TailSide::Upper,
        },
    };
    emit(req, a.json, cfg, out)
}

fn solve(s: SolveCommand, cfg: &ToleranceConfig, out: &mut impl Write) -> Result<(), CliError> {
    let (req, json) = match s {
        SolveCommand::Delta { x, nu, p, json } => (
            EvalRequest {
                op: Operation::SolveDelta,
                x: Some(x),
                nu: Some(nu),
                delta: None,
                prob: Some(p),
                tail: TailSide::Lower,
            },
            json,
        ),
        SolveCommand::Nu { x, delta, p, json } => (
            EvalRequest {
                op: Operation::SolveNu,
                x: Some(x),
                nu: None,
                delta: Some(delta),
                prob: Some(p),
                tail: TailSide::Lower,
            },
            json,
        ),
    };
    emit(req, json, cfg, out)
}

fn table(tol: f64, cfg: &ToleranceConfig, out: &mut impl Write) -> Result<(), CliError> {
    writeln!(
        out,
        "{:>3} {:>7} {:>6} {:>6}  {:<23}  {:<23}  {:>9}  status",
        "row", "x", "nu", "delta", "computed", "reference", "rel_err"
    )?;
    let mut failed = Vec::new();
    for r in GOLD.iter() {
        let p = NctParams::new(r.x, r.nu, r.delta)?;
        let (computed, err) = match cdf(&p, cfg) {
            Ok(t) => {
                let v = t.lower.value();
                (sci(v), ((v - r.cdf) / r.cdf).abs())
            }
            Err(e) => (format!("error: {e}"), f64::INFINITY),
        };
        let pass = err <= tol;
        if !pass {
            failed.push(r.id);
        }
        writeln!(
            out,
            "{:>3} {:>7} {:>6} {:>6}  {:<23}  {:<23}  {:>9.2e}  {}",
            r.id,
            r.x,
            r.nu,
            r.delta,
            computed,
            sci(r.cdf),
            err,
            if pass { "PASS" } else { "FAIL" }
        )?;
    }
    writeln!(
        out,
        "{}/{} rows within relative error {tol:e}",
        GOLD.len() - failed.len(),
        GOLD.len()
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError {
            code: CliError::TABLE,
            message: format!("rows {failed:?} exceed relative error {tol:e}"),
        })
    }
}

fn integrand(x: f64, nu: f64, delta: f64, cfg: &ToleranceConfig, out: &mut impl Write) -> Result<(), CliError> {
    let p = NctParams::new(x, nu, delta)?;
    if x == 0.0 {
        return Err(CliError::usage("integrand needs x != 0"));
    }
    let tr = integrand_trace(&p, cfg)?;
    writeln!(out, "z,g")?;
    for (z, g) in &tr.nodes {
        writeln!(out, "{},{}", sci(*z), sci(*g))?;
    }
    let w = &tr.window;
    let ip = &tr.integrated;
    writeln!(
        out,
        "# integrated x={} nu={} delta={} tail={} a={} b={} analytic_head={} ln_eps_a={}",
        shortest(ip.x()),
        shortest(ip.nu()),
        shortest(ip.delta()),
        w.tail,
        sci(w.a),
        sci(w.b),
        sci(w.analytic_head.value()),
        sci(w.ln_eps_a)
    )?;
    let t = &tr.result;
    writeln!(
        out,
        "# cdf lower={} upper={} native_tail={} nodes={}",
        sci(t.lower.value()),
        sci(t.upper.value()),
        native_tail_label(t),
        tr.nodes.len()
    )?;
    Ok(())
}
