//! (G7, K15) Gauss-Kronrod quadrature: a single panel, a fixed equal-width
//! panel integrator and a globally adaptive integrator.

use crate::error::{NctError, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Non-negative Kronrod abscissae, descending, and their weights. Odd indices
// are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Node and weight tables of the (G7, K15) pair on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Kronrod abscissae in ascending order.
    pub kronrod_nodes: [f64; 15],
    pub kronrod_weights: [f64; 15],
    /// Gauss weights for the nodes `kronrod_nodes[1, 3, ..., 13]`.
    pub gauss_weights: [f64; 7],
}

impl QuadratureRule {
    pub fn gk15() -> Self {
        let mut nodes = [0.0; 15];
        let mut wk = [0.0; 15];
        for j in 0..8 {
            nodes[j] = -XGK[j];
            nodes[14 - j] = XGK[j];
            wk[j] = WGK[j];
            wk[14 - j] = WGK[j];
        }
        let mut wg = [0.0; 7];
        for j in 0..4 {
            wg[j] = WG[j];
            wg[6 - j] = WG[j];
        }
        QuadratureRule {
            kronrod_nodes: nodes,
            kronrod_weights: wk,
            gauss_weights: wg,
        }
    }
}

/// Integral estimate with its error estimate and the number of integrand
/// evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn check(node: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(NctError::NonFinite { node, value })
    }
}

fn check_interval(op: &'static str, a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(NctError::domain(op, format!("need finite a < b, got [{a}, {b}]")));
    }
    Ok(())
}

fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<QuadratureResult> {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let fc = check(centr, f(centr))?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = hlgth * XGK[j];
        let (z1, z2) = (centr - dx, centr + dx);
        let f1 = check(z1, f(z1))?;
        let f2 = check(z2, f(z2))?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resabs = WGK[7] * fc.abs();
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resabs += WGK[j] * (fv1[j].abs() + fv2[j].abs());
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let h = hlgth.abs();
    let value = resk * hlgth;
    resabs *= h;
    resasc *= h;
    let mut err = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(QuadratureResult {
        value,
        error_estimate: err,
        evaluations: 15,
    })
}

/// One (G7, K15) panel on `[a, b]`.
///
/// The error estimate is the QUADPACK heuristic
/// `resasc * min(1, (200 |K15 - G7| / resasc)^1.5)`, floored at
/// `50 eps * integral of |f|`.
pub fn gk15_panel<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Result<QuadratureResult> {
    check_interval("gk15_panel", a, b)?;
    panel(&mut f, a, b)
}

/// Neumaier-compensated sum of `values` taken in ascending magnitude.
pub(crate) fn sorted_sum(values: &mut [f64]) -> f64 {
    values.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap_or(Ordering::Equal));
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values.iter() {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sum of `n_subs` equal-width K15 panels covering `[a, b]`.
///
/// Panels are evaluated left to right and summed in ascending magnitude, so
/// results are bit-reproducible.
pub fn fixed_panels<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, n_subs: usize) -> Result<QuadratureResult> {
    check_interval("fixed_panels", a, b)?;
    if n_subs == 0 {
        return Err(NctError::domain("fixed_panels", "n_subs must be >= 1"));
    }
    let width = (b - a) / n_subs as f64;
    let edges: Vec<f64> = (0..=n_subs)
        .map(|i| if i == n_subs { b } else { a + i as f64 * width })
        .collect();
    panel_sum(f, &edges)
}

/// Sum of K15 panels over consecutive `edges` (ascending, at least two),
/// evaluated left to right and summed in ascending magnitude.
pub fn panel_sum<F: FnMut(f64) -> f64>(mut f: F, edges: &[f64]) -> Result<QuadratureResult> {
    if edges.len() < 2 {
        return Err(NctError::domain("panel_sum", "need at least two edges"));
    }
    let n = edges.len() - 1;
    let mut values = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    for w in edges.windows(2) {
        check_interval("panel_sum", w[0], w[1])?;
        let r = panel(&mut f, w[0], w[1])?;
        values.push(r.value);
        errors.push(r.error_estimate);
    }
    Ok(QuadratureResult {
        value: sorted_sum(&mut values),
        error_estimate: sorted_sum(&mut errors),
        evaluations: 15 * n,
    })
}

/// As [`fixed_panels`], also returning every `(z, f(z))` pair in ascending `z`.
pub fn fixed_panels_recorded<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n_subs: usize,
) -> Result<(QuadratureResult, Vec<(f64, f64)>)> {
    let mut nodes = Vec::with_capacity(15 * n_subs);
    let r = fixed_panels(
        |z| {
            let v = f(z);
            nodes.push((z, v));
            v
        },
        a,
        b,
        n_subs,
    )?;
    nodes.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(Ordering::Equal));
    Ok((r, nodes))
}

struct Panel {
    a: f64,
    b: f64,
    r: QuadratureResult,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.r
            .error_estimate
            .total_cmp(&other.r.error_estimate)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

pub const ADAPTIVE_PANEL_BUDGET: usize = 10_000;

/// Globally adaptive K15 integration: the panel with the largest error
/// estimate is bisected until the summed estimate is at most
/// `max(abs_tol, rel_tol * |value|)` or the panel budget runs out.
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    check_interval("adaptive", a, b)?;
    if !(rel_tol > 0.0 && abs_tol > 0.0) {
        return Err(NctError::domain("adaptive", "tolerances must be > 0"));
    }
    let mut heap = BinaryHeap::new();
    let first = panel(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error_estimate;
    heap.push(Panel { a, b, r: first });

    let totals = |heap: &BinaryHeap<Panel>| {
        let mut v: Vec<f64> = heap.iter().map(|p| p.r.value).collect();
        let mut e: Vec<f64> = heap.iter().map(|p| p.r.error_estimate).collect();
        (sorted_sum(&mut v), sorted_sum(&mut e))
    };

    loop {
        if error <= abs_tol.max(rel_tol * value.abs()) {
            // confirm with exact compensated totals before accepting
            (value, error) = totals(&heap);
            if error <= abs_tol.max(rel_tol * value.abs()) {
                return Ok(QuadratureResult {
                    value,
                    error_estimate: error,
                    evaluations,
                });
            }
        }
        if heap.len() >= ADAPTIVE_PANEL_BUDGET {
            let (value, error) = totals(&heap);
            return Err(NctError::NoConvergence {
                op: "adaptive quadrature",
                iterations: heap.len(),
                best: value,
                estimate: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            let (value, error) = totals(&heap);
            return Err(NctError::NoConvergence {
                op: "adaptive quadrature (panel width underflow)",
                iterations: heap.len(),
                best: value,
                estimate: error,
            });
        }
        let left = panel(&mut f, worst.a, mid)?;
        let right = panel(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.r.value;
        error += left.error_estimate + right.error_estimate - worst.r.error_estimate;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            r: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            r: right,
        });
        if heap.len() % 64 == 0 {
            (value, error) = totals(&heap);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulps(a: f64, b: f64) -> f64 {
        (a - b).abs() / (f64::EPSILON * b.abs())
    }

    #[test]
    fn rule_invariants() {
        let r = QuadratureRule::gk15();
        for j in 0..15 {
            assert_eq!(r.kronrod_nodes[j], -r.kronrod_nodes[14 - j]);
            assert_eq!(r.kronrod_weights[j], r.kronrod_weights[14 - j]);
            assert!(r.kronrod_weights[j] > 0.0);
            assert!(r.kronrod_nodes[j].abs() < 1.0);
        }
        for j in 0..7 {
            assert_eq!(r.gauss_weights[j], r.gauss_weights[6 - j]);
        }
        let mut wk = r.kronrod_weights.to_vec();
        let mut wg = r.gauss_weights.to_vec();
        assert!((sorted_sum(&mut wk) - 2.0).abs() <= 1e-15);
        assert!((sorted_sum(&mut wg) - 2.0).abs() <= 1e-15);
    }

    #[test]
    fn panel_examples() {
        let r = gk15_panel(|_| 1.0, 0.0, 1.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.error_estimate < 1e-13);
        assert_eq!(r.evaluations, 15);
        let r = gk15_panel(|z| z.powi(13), 0.0, 1.0).unwrap();
        assert!(ulps(r.value, 1.0 / 14.0) <= 4.0, "{}", r.value);
        let r = gk15_panel(f64::sin, 0.0, std::f64::consts::PI).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_exactness_to_degree_22() {
        // int_0^1 z^22 = 1/23, through the 50-eps floor only
        let r = gk15_panel(|z| z.powi(22), 0.0, 1.0).unwrap();
        assert!(ulps(r.value, 1.0 / 23.0) <= 8.0);
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let e = gk15_panel(|z| if z > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0).unwrap_err();
        match e {
            NctError::NonFinite { node, value } => {
                assert!(node > 0.5 && node < 1.0);
                assert!(value.is_nan());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(gk15_panel(|z| z, 1.0, 0.0).is_err());
    }

    #[test]
    fn fixed_panel_examples() {
        let f = |z: f64| (3.0 * z).cos() * z.exp();
        let one = fixed_panels(f, -1.0, 2.0, 1).unwrap();
        let p = gk15_panel(f, -1.0, 2.0).unwrap();
        assert_eq!(one, p);
        let r = fixed_panels(f64::exp, 0.0, 1.0, 16).unwrap();
        let e1 = std::f64::consts::E - 1.0;
        assert!(((r.value - e1) / e1).abs() < 1e-14);
        assert_eq!(r.evaluations, 240);
        assert!(fixed_panels(f64::exp, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn interval_additivity() {
        let f = |z: f64| (-z * z).exp() + 0.3 * z.sin();
        let whole = fixed_panels(f, -2.0, 3.0, 8).unwrap().value;
        let halves = fixed_panels(f, -2.0, 0.5, 4).unwrap().value + fixed_panels(f, 0.5, 3.0, 4).unwrap().value;
        assert!(ulps(whole, halves) <= 4.0);
    }

    #[test]
    fn recorded_nodes_are_sorted() {
        let (r, nodes) = fixed_panels_recorded(|z| z * z, 0.0, 3.0, 6).unwrap();
        assert_eq!(nodes.len(), 90);
        assert!(nodes.windows(2).all(|w| w[0].0 < w[1].0));
        assert!((r.value - 9.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_examples() {
        let sigma = 0.7f64;
        let r = adaptive(|z| (-0.5 * (z / sigma).powi(2)).exp(), -10.0, 10.0, 1e-13, 1e-300).unwrap();
        let exact = (2.0 * std::f64::consts::PI).sqrt() * sigma;
        assert!(((r.value - exact) / exact).abs() < 1e-13);

        let spike = |z: f64| 1.0 / (1e-6 + (z - 0.3).powi(2));
        let exact = 1e3 * ((0.7f64 / 1e-3).atan() + (0.3f64 / 1e-3).atan());
        let fixed = fixed_panels(spike, 0.0, 1.0, 1).unwrap();
        assert!(((fixed.value - exact) / exact).abs() > 1e-6);
        let r = adaptive(spike, 0.0, 1.0, 1e-12, 1e-300).unwrap();
        assert!(((r.value - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn adaptive_budget_exhaustion_is_an_error() {
        let e = adaptive(|z| (1.0 / z).sin(), 1e-9, 1.0, 1e-15, 1e-300).unwrap_err();
        assert!(matches!(e, NctError::NoConvergence { .. }));
    }
}
