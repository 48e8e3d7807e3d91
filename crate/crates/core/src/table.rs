//! Published reference CDF values, `(x, nu, delta, Pr(T <= x))`.
#![allow(clippy::excessive_precision)]

/// One reference row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldRow {
    pub id: usize,
    pub x: f64,
    pub nu: f64,
    pub delta: f64,
    pub cdf: f64,
}

const fn row(id: usize, x: f64, nu: f64, delta: f64, cdf: f64) -> GoldRow {
    GoldRow { id, x, nu, delta, cdf }
}

/// Seventeen rows spanning Cauchy tails down to 1e-272 and `nu` up to 1000.
pub const GOLD: [GoldRow; 17] = [
    row(1, 1.0, 1.0, 0.0, 7.50000000000000000e-1),
    row(2, -35.0, 1.0, 0.0, 9.09209467564843408e-3),
    row(3, -35.0, 1.0, 1.0, 1.89903487263458750e-3),
    row(4, -5.0, 1.0, 5.0, 8.52042451613777143e-9),
    row(5, -15.0, 1.0, 15.0, 1.29043391190105994e-53),
    row(6, -35.0, 1.0, 35.0, 7.31501102529248499e-272),
    row(7, 1.0, 10.0, 5.0, 4.34725285650591657e-5),
    row(8, 1.0, 10.0, 10.0, 7.95914542988750673e-19),
    row(9, 1.0, 10.0, 15.0, 1.41346486009205976e-42),
    row(10, 1.0, 10.0, 35.0, 1.69061467860900429e-237),
    row(11, 150.0, 10.0, 200.0, 5.88999020094520836e-2),
    row(12, 150.0, 10.0, 500.0, 3.25241635439258347e-19),
    row(13, 50.0, 100.0, 75.0, 4.99615060338271916e-11),
    row(14, 500.0, 100.0, 510.0, 3.71160937464178059e-1),
    row(15, 1.0, 1000.0, 10.0, 1.14935521338266224e-19),
    row(16, 100.0, 1000.0, 105.0, 2.05403544901854621e-2),
    row(17, 1000.0, 1000.0, 1010.0, 3.22438286661716843e-1),
];

/// `Pr(T <= 5)` for `nu = 100`, `delta = 15`.
pub const FIGURE_CDF: (f64, f64, f64, f64) = (5.0, 100.0, 15.0, 2.640405806735035e-21);
