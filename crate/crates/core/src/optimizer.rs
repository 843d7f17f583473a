//! Pair-count and bit-count selection on the Wyner chain under the backhaul
//! CSI-sharing budget.
//!
//! With a common stream count `d` and a common steepness `η`, users `i` and
//! `L − i + 1` of the chain see the same interference, so the total rate
//! reduces to a sum over half the chain plus the middle user when `L` is odd.

use std::f64::consts::LOG2_E;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::analytic::{miss_probability_of, scaled_e1};
use crate::error::{invalid, Error, Result};
use crate::model::{BackhaulConfig, CacheProfile, SystemConfig};

struct WynerTerms {
    noise_term: f64,
    leak: f64,
    wireless_scale: f64,
    backhaul_term: f64,
}

impl WynerTerms {
    fn new(config: &SystemConfig, cache: &CacheProfile, bh: &BackhaulConfig, zeta: f64) -> Result<Self> {
        if !(zeta > 0.0 && zeta < 1.0) {
            return Err(invalid("zeta", format!("{zeta} outside (0, 1)")));
        }
        let d = config
            .common_streams()
            .ok_or_else(|| invalid("streams", "Wyner total rate needs a common stream count"))? as f64;
        let eta = cache
            .common_eta()
            .ok_or_else(|| invalid("eta", "Wyner total rate needs a common steepness factor"))?;
        let miss = miss_probability_of(cache.f0(), eta)?;
        Ok(Self {
            noise_term: d * config.noise() / config.power(),
            leak: d * config.leakage_factor(),
            wireless_scale: d * LOG2_E * (1.0 - miss) * config.bandwidth_hz(),
            backhaul_term: bh.c_data() * miss,
        })
    }
}

fn check_pairs(pairs: usize) -> Result<()> {
    if pairs < 2 {
        return Err(invalid("pairs", "the Wyner chain needs at least 2 pairs"));
    }
    Ok(())
}

/// Total average transmission rate (bits/s) of an `L`-pair Wyner chain with
/// coupling `zeta`. Stream count, SNR, quantization bits and bandwidth come
/// from `config`; its own pair count is ignored.
pub fn wyner_total_rate(
    config: &SystemConfig,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    zeta: f64,
    pairs: usize,
) -> Result<f64> {
    check_pairs(pairs)?;
    let t = WynerTerms::new(config, cache, bh, zeta)?;
    let half = pairs / 2;
    let geo = t.leak / (1.0 - zeta);
    let mut sum = 0.0;
    for i in 1..=half {
        let a_i = t.noise_term + geo * (2.0 * zeta - zeta.powi((pairs - i + 1) as i32) - zeta.powi(i as i32));
        sum += 2.0 * scaled_e1(a_i)?;
    }
    if pairs % 2 == 1 {
        let b_1 = t.noise_term + geo * 2.0 * (zeta - zeta.powi(half as i32 + 1));
        sum += scaled_e1(b_1)?;
    }
    Ok(t.wireless_scale * sum + t.backhaul_term)
}

/// Affine-in-`L` approximation of [`wyner_total_rate`] for small `zeta`:
/// the two edge users see one interferer at `ζ`, interior users two.
pub fn approx_total_rate_small_zeta(
    config: &SystemConfig,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    zeta: f64,
    pairs: usize,
) -> Result<f64> {
    check_pairs(pairs)?;
    let t = WynerTerms::new(config, cache, bh, zeta)?;
    let c_1 = t.noise_term + t.leak * zeta;
    let c_2 = t.noise_term + t.leak * 2.0 * zeta;
    let edge = 2.0 * scaled_e1(c_1)?;
    let interior = (pairs - 2) as f64 * scaled_e1(c_2)?;
    Ok(t.wireless_scale * (edge + interior) + t.backhaul_term)
}

/// Bits exchanged over the backhaul per slot for CSI sharing: `L²(L−1)B`.
pub fn csi_overhead_bits(pairs: usize, quant_bits: u32) -> u64 {
    let l = pairs as u64;
    l * l * l.saturating_sub(1) * quant_bits as u64
}

/// Backhaul bits per slot available for CSI sharing: the reserved share plus
/// the data capacity freed by cache hits, `(C_c + (1 − f0^{1−η})·C_d)·τ`.
pub fn backhaul_budget_bits(cache: &CacheProfile, bh: &BackhaulConfig) -> Result<f64> {
    let eta = cache
        .common_eta()
        .ok_or_else(|| invalid("eta", "budget needs a common steepness factor"))?;
    let hit = 1.0 - miss_probability_of(cache.f0(), eta)?;
    Ok((bh.c_csi() + hit * bh.c_data()) * bh.slot())
}

/// A pair count that satisfies both the antenna and the CSI budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub pairs: usize,
    pub csi_bits: u64,
    /// Total average transmission rate in bits/s.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub l_opt: usize,
    /// Rate at `l_opt`, bits/s.
    pub rate_at_opt: f64,
    pub budget_bits: f64,
    /// Feasible pair counts in increasing order.
    pub feasible_set: Vec<Candidate>,
}

/// Enumerates every pair count allowed by the antenna budget and the CSI
/// budget and returns the one with the largest total rate. Ties go to the
/// smaller pair count.
pub fn optimize_pairs(
    config: &SystemConfig,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    zeta: f64,
) -> Result<OptimizationResult> {
    let d = config
        .common_streams()
        .ok_or_else(|| invalid("streams", "pair optimization needs a common stream count"))?;
    let max_pairs = config.max_feasible_pairs(d);
    if max_pairs < 2 {
        return Err(Error::NoFeasiblePairs(format!(
            "antenna budget: n_tx + n_rx = {} < 3d = {}",
            config.n_tx() + config.n_rx(),
            3 * d
        )));
    }
    let budget = backhaul_budget_bits(cache, bh)?;
    let bits = config.quant_bits();
    let within_budget: Vec<usize> = (2..=max_pairs)
        .filter(|&l| csi_overhead_bits(l, bits) as f64 <= budget)
        .collect();
    if within_budget.is_empty() {
        return Err(Error::NoFeasiblePairs(format!(
            "CSI budget: {budget:.1} bits per slot < {} bits needed at L = 2",
            csi_overhead_bits(2, bits)
        )));
    }

    let feasible_set = within_budget
        .par_iter()
        .map(|&l| {
            Ok(Candidate {
                pairs: l,
                csi_bits: csi_overhead_bits(l, bits),
                rate: wyner_total_rate(config, cache, bh, zeta, l)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = feasible_set
        .iter()
        .fold(None::<&Candidate>, |best, c| match best {
            Some(b) if c.rate <= b.rate => Some(b),
            _ => Some(c),
        })
        .expect("non-empty");

    Ok(OptimizationResult {
        l_opt: best.pairs,
        rate_at_opt: best.rate,
        budget_bits: budget,
        feasible_set,
    })
}

/// Largest quantization bit count whose CSI overhead fits the budget at the
/// configuration's pair count. The total rate is nondecreasing in `B`, so
/// this is also the rate-maximizing choice.
pub fn optimize_bits(config: &SystemConfig, cache: &CacheProfile, bh: &BackhaulConfig) -> Result<u32> {
    let pairs = config.pairs();
    check_pairs(pairs)?;
    if !config.ia_feasible() {
        return Err(Error::IaInfeasible {
            antennas: config.n_tx() + config.n_rx(),
            required: config.ia_required_antennas(),
        });
    }
    let budget = backhaul_budget_bits(cache, bh)?;
    let per_bit = csi_overhead_bits(pairs, 1);
    let ratio = (budget / per_bit as f64).floor();
    if ratio < 1.0 {
        return Err(Error::NoFeasibleBits(format!(
            "CSI budget {budget:.1} bits per slot < L²(L−1) = {per_bit} bits needed for B = 1"
        )));
    }
    let mut b = ratio.min(u32::MAX as f64) as u32;
    // guard the floor against rounding in the division
    while b > 1 && csi_overhead_bits(pairs, b) as f64 > budget {
        b -= 1;
    }
    while b < u32::MAX && csi_overhead_bits(pairs, b + 1) as f64 <= budget {
        b += 1;
    }
    Ok(b)
}

/// Whether [`wyner_total_rate`] strictly increases across `l_range`.
pub fn check_monotone_in_pairs(
    config: &SystemConfig,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    zeta: f64,
    l_range: RangeInclusive<usize>,
) -> Result<bool> {
    let rates = l_range
        .map(|l| wyner_total_rate(config, cache, bh, zeta, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(rates.windows(2).all(|w| w[1] > w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup() -> (SystemConfig, CacheProfile, BackhaulConfig) {
        (
            SystemConfig::from_snr_db(15, 15, 2, 2, 10.0, 30, 10e6).unwrap(),
            CacheProfile::common(10.0, 1.2).unwrap(),
            BackhaulConfig::from_mbps_ms(20.0, 5.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn overhead_examples() {
        assert_eq!(csi_overhead_bits(2, 10), 40);
        assert_eq!(csi_overhead_bits(9, 30), 19_440);
        assert_eq!(csi_overhead_bits(10, 30), 27_000);
    }

    #[test]
    fn budget_examples() {
        let (_, cache, bh) = setup();
        assert_relative_eq!(
            backhaul_budget_bits(&cache, &bh).unwrap(),
            21_845.213_277_599_03,
            max_relative = 1e-12
        );
        let none = CacheProfile::common(1.0, 1.2).unwrap();
        assert_eq!(backhaul_budget_bits(&none, &bh).unwrap(), 20e6 * 1e-3);
        let steep = CacheProfile::common(10.0, 1e6).unwrap();
        assert_relative_eq!(
            backhaul_budget_bits(&steep, &bh).unwrap(),
            25e6 * 1e-3,
            max_relative = 1e-15
        );
    }

    #[test]
    fn two_pairs_without_coupling() {
        let (c, cache, bh) = setup();
        let tiny = 1e-300;
        let m = 10f64.powf(-0.2);
        let a = 2.0 * LOG2_E * (1.0 - m);
        let expected = 2.0 * a * scaled_e1(2.0 * 0.1).unwrap() * 10e6 + 5e6 * m;
        assert_relative_eq!(
            wyner_total_rate(&c, &cache, &bh, tiny, 2).unwrap(),
            expected,
            max_relative = 1e-13
        );
    }

    #[test]
    fn rejects_invalid_zeta_and_pairs() {
        let (c, cache, bh) = setup();
        assert!(wyner_total_rate(&c, &cache, &bh, 1.0, 4).is_err());
        assert!(wyner_total_rate(&c, &cache, &bh, 0.0, 4).is_err());
        assert!(wyner_total_rate(&c, &cache, &bh, 0.3, 1).is_err());
    }

    #[test]
    fn large_array_instance_picks_nine_pairs() {
        let (c, cache, bh) = setup();
        let res = optimize_pairs(&c, &cache, &bh, 0.05).unwrap();
        assert_eq!(res.l_opt, 9);
        assert_eq!(res.feasible_set.last().unwrap().pairs, 9);
        assert!(csi_overhead_bits(10, 30) as f64 > res.budget_bits);
    }

    #[test]
    fn empty_budget_is_an_error() {
        let (c, cache, _) = setup();
        let bh = BackhaulConfig::new(0.0, 0.0, 1e-3).unwrap();
        let err = optimize_pairs(&c, &cache, &bh, 0.05).unwrap_err();
        assert!(matches!(err, Error::NoFeasiblePairs(ref s) if s.contains("CSI budget")));
        let small = SystemConfig::from_snr_db(2, 2, 2, 2, 10.0, 30, 10e6).unwrap();
        let (_, _, bh) = setup();
        let err = optimize_pairs(&small, &cache, &bh, 0.05).unwrap_err();
        assert!(matches!(err, Error::NoFeasiblePairs(ref s) if s.contains("antenna")));
    }

    #[test]
    fn bits_examples() {
        let c2 = SystemConfig::from_snr_db(2, 2, 1, 2, 10.0, 10, 10e6).unwrap();
        let none = CacheProfile::common(1.0, 1.2).unwrap();
        // budget = C_c·τ exactly when nothing is cached
        let bh40 = BackhaulConfig::new(40e3, 5e6, 1e-3).unwrap();
        assert_eq!(optimize_bits(&c2, &none, &bh40).unwrap(), 10);
        let bh3 = BackhaulConfig::new(3e3, 5e6, 1e-3).unwrap();
        assert!(matches!(optimize_bits(&c2, &none, &bh3), Err(Error::NoFeasibleBits(_))));

        let (c, cache, bh) = setup();
        let c9 = c.with_pairs(9).unwrap();
        assert_eq!(optimize_bits(&c9, &cache, &bh).unwrap(), 33);
        assert_eq!(csi_overhead_bits(9, 33), 21_384);
        assert_eq!(csi_overhead_bits(9, 34), 22_032);
        let c15 = c.with_pairs(15).unwrap();
        assert!(matches!(
            optimize_bits(&c15, &cache, &bh),
            Err(Error::IaInfeasible { .. })
        ));
    }

    #[test]
    fn approximation_is_affine_in_pairs() {
        let (c, cache, bh) = setup();
        let v: Vec<f64> = (2..=14)
            .map(|l| approx_total_rate_small_zeta(&c, &cache, &bh, 0.05, l).unwrap())
            .collect();
        let step = v[1] - v[0];
        for w in v.windows(2) {
            assert_relative_eq!(w[1] - w[0], step, max_relative = 1e-9);
        }
    }

    #[test]
    fn geometric_tail_anchor() {
        // 0.1 + 0.01 + 0.001 + ... = 0.111...
        let s: f64 = (1..60).map(|k| 0.1f64.powi(k)).sum();
        assert_relative_eq!(s, 1.0 / 9.0, max_relative = 1e-14);
        assert!((s - 0.1).abs() < 0.012);
    }

    #[test]
    fn monotone_for_small_zeta() {
        let (c, cache, bh) = setup();
        assert!(check_monotone_in_pairs(&c, &cache, &bh, 0.05, 3..=13).unwrap());
        assert!(check_monotone_in_pairs(&c, &cache, &bh, 1e-6, 3..=14).unwrap());
    }
}
