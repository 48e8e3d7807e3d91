//! Workloads shared by the criterion benches.

use noncentral_t::table::GOLD;
use noncentral_t::NctParams;

/// Parameters of the 17 reference rows.
pub fn gold_params() -> Vec<NctParams> {
    GOLD.iter()
        .map(|r| NctParams::new(r.x, r.nu, r.delta).expect("reference rows are valid"))
        .collect()
}

/// `n` points spread over `x` in [-50, 50], `nu` in [1, 1000] (log) and
/// `delta` in [-40, 40], in a fixed order.
pub fn spread(n: usize) -> Vec<NctParams> {
    let frac = |i: usize, k: u64| ((i as u64 * k) % n as u64) as f64 / n as f64;
    (0..n)
        .map(|i| {
            let x = -50.0 + 100.0 * frac(i, 7919);
            let nu = 10f64.powf(3.0 * frac(i, 104_729));
            let delta = -40.0 + 80.0 * frac(i, 1_299_709);
            NctParams::new(x, nu, delta).expect("finite, nu > 0")
        })
        .collect()
}
