//! Shared oracles for the integration tests.
#![allow(dead_code)]

use iacache::analytic::total_average_rate;
use iacache::model::{wyner_path_loss, BackhaulConfig, CacheProfile, SystemConfig};

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_W: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
// weights of the embedded 7-point Gauss rule on nodes 1, 3, 5, 7
const GAUSS_W: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = KRONROD_W[7] * fc;
    let mut gauss = GAUSS_W[3] * fc;
    for j in 0..7 {
        let x = h * GK_NODES[j];
        let s = f(c - x) + f(c + x);
        kronrod += KRONROD_W[j] * s;
        if j % 2 == 1 {
            gauss += GAUSS_W[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature: the interval with the
/// largest error estimate is bisected until the summed estimate falls below
/// `rel_tol·|I|`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (v, e) = gk15(f, a, b);
    let mut parts = vec![(a, b, v, e)];
    for _ in 0..100_000 {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= rel_tol * total.abs() {
            break;
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    parts.iter().map(|p| p.2).sum()
}

/// `E1(x) = ∫_0^∞ exp(−x·e^y) dy` (substitution `t = x·e^y`), truncated where
/// the integrand drops below `e^{−750}`.
pub fn e1_by_quadrature(x: f64) -> f64 {
    let upper = (750.0 / x).ln();
    integrate(&|y: f64| (-x * y.exp()).exp(), 0.0, upper, 1e-13)
}

/// Large-array setting of the figure sweeps at `pairs` pairs.
pub fn large_array_system(pairs: usize, bits: u32) -> SystemConfig {
    SystemConfig::from_snr_db(15, 15, 2, pairs, 10.0, bits, 10e6).unwrap()
}

pub fn large_array_cache(f0: f64, eta: f64) -> CacheProfile {
    CacheProfile::common(f0, eta).unwrap()
}

pub fn large_array_backhaul(c_csi_mbps: f64) -> BackhaulConfig {
    BackhaulConfig::from_mbps_ms(c_csi_mbps, 5.0, 1.0).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Exhaustive search over the pair counts, using the per-user rate sum.
pub fn brute_force(c: &SystemConfig, cache: &CacheProfile, bh: &BackhaulConfig, zeta: f64) -> Option<usize> {
    let d = c.common_streams().unwrap();
    let limit = (c.n_tx() + c.n_rx()) / d - 1;
    let eta = cache.common_eta().unwrap();
    let budget = (bh.c_csi() + (1.0 - cache.f0().powf(1.0 - eta)) * bh.c_data()) * bh.slot();
    let mut best: Option<(usize, f64)> = None;
    for l in 2..=limit {
        let bits = (l * l * (l - 1)) as f64 * c.quant_bits() as f64;
        if bits > budget {
            continue;
        }
        let cl = c.with_pairs(l).unwrap();
        let rate = total_average_rate(&cl, &wyner_path_loss(l, zeta).unwrap(), cache, bh)
            .unwrap()
            .total;
        if best.is_none_or(|(_, r)| rate > r) {
            best = Some((l, rate));
        }
    }
    best.map(|b| b.0)
}
