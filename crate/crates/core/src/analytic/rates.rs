//! Closed-form average rates under Gaussian-treated quantization leakage,
//! cache hit/miss mixing and the operational caching regime.

use std::f64::consts::LOG2_E;

use super::special::scaled_e1;
use crate::error::{invalid, Error, Result};
use crate::model::{
    check_dims, per_link_capacities, BackhaulConfig, CacheProfile, PathLossModel, RegimeParams, SystemConfig,
};

/// Probability `1 − f0^{1−η}` that a request is served from the local cache.
pub fn hit_probability_of(f0: f64, eta: f64) -> Result<f64> {
    Ok(1.0 - miss_probability_of(f0, eta)?)
}

/// Probability `f0^{1−η}` that a request has to be fetched over the backhaul.
pub fn miss_probability_of(f0: f64, eta: f64) -> Result<f64> {
    if !(eta > 1.0) {
        return Err(invalid("eta", format!("{eta} <= 1 is not normalizable")));
    }
    if !(f0 >= 1.0) {
        return Err(invalid("f0", format!("{f0} must be >= 1")));
    }
    if f0 == 1.0 {
        return Ok(1.0);
    }
    Ok(f0.powf(1.0 - eta))
}

pub fn hit_probability(cache: &CacheProfile, user: usize) -> Result<f64> {
    hit_probability_of(cache.f0(), cache.eta(user)?)
}

pub fn miss_probability(cache: &CacheProfile, user: usize) -> Result<f64> {
    miss_probability_of(cache.f0(), cache.eta(user)?)
}

/// Effective SNR `β_k = Pζ_kk / (d_k(σ² + P·2^{1−B/Q}·Σ_{i≠k} ζ_ki))`.
pub fn beta(config: &SystemConfig, pl: &PathLossModel, k: usize) -> Result<f64> {
    Ok(1.0 / inverse_beta(config, pl, k)?)
}

pub(crate) fn inverse_beta(config: &SystemConfig, pl: &PathLossModel, k: usize) -> Result<f64> {
    check_dims(config, pl)?;
    let d = config.streams_of(k)? as f64;
    let p = config.power();
    let denom = config.noise() + p * config.leakage_factor() * pl.interference_sum(k)?;
    Ok(d * denom / (p * pl.get(k, k)?))
}

/// Average wireless rate of user `k` in bits/s/Hz:
/// `d_k·log2(e)·e^{1/β_k}·E1(1/β_k)`.
pub fn average_rate(config: &SystemConfig, pl: &PathLossModel, k: usize) -> Result<f64> {
    let d = config.streams_of(k)? as f64;
    Ok(d * LOG2_E * scaled_e1(inverse_beta(config, pl, k)?)?)
}

/// Hit/miss mixture `R·(1 − f0^{1−η}) + C_kd·f0^{1−η}` for a wireless rate
/// `wireless_bps` and per-link data backhaul `c_kd`, both in bits/s.
pub fn transmission_mixture(wireless_bps: f64, c_kd: f64, f0: f64, eta: f64) -> Result<f64> {
    let miss = miss_probability_of(f0, eta)?;
    Ok(wireless_bps * (1.0 - miss) + c_kd * miss)
}

/// `dr̄/dη = (R − C_kd)·f0^{1−η}·ln f0`; zero when `f0 = 1`.
pub fn rate_derivative_from_rates(wireless_bps: f64, c_kd: f64, f0: f64, eta: f64) -> Result<f64> {
    let miss = miss_probability_of(f0, eta)?;
    if f0 == 1.0 {
        return Ok(0.0);
    }
    Ok((wireless_bps - c_kd) * miss * f0.ln())
}

/// Per-user inputs of the transmission-rate formulas, in bits/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserRates {
    pub wireless_bps: f64,
    pub c_kd: f64,
    pub f0: f64,
    pub eta: f64,
}

/// Wireless rate (bits/s) and backhaul share of user `k`, checking that the
/// backhaul is the limiting link.
pub fn user_rates(
    config: &SystemConfig,
    pl: &PathLossModel,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    k: usize,
) -> Result<UserRates> {
    let wireless_bps = average_rate(config, pl, k)? * config.bandwidth_hz();
    let c_kd = per_link_capacities(bh, config.pairs())?.c_kd;
    if c_kd >= wireless_bps {
        return Err(Error::BackhaulNotLimiting {
            user: k,
            c_kd,
            wireless: wireless_bps,
        });
    }
    Ok(UserRates {
        wireless_bps,
        c_kd,
        f0: cache.f0(),
        eta: cache.eta(k)?,
    })
}

/// Average transmission rate of user `k` in bits/s.
pub fn average_transmission_rate(
    config: &SystemConfig,
    pl: &PathLossModel,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    k: usize,
) -> Result<f64> {
    let u = user_rates(config, pl, cache, bh, k)?;
    transmission_mixture(u.wireless_bps, u.c_kd, u.f0, u.eta)
}

/// Derivative of user `k`'s average transmission rate with respect to its
/// steepness factor, in bits/s per unit of `η`.
pub fn rate_derivative_eta(
    config: &SystemConfig,
    pl: &PathLossModel,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    k: usize,
) -> Result<f64> {
    let u = user_rates(config, pl, cache, bh, k)?;
    rate_derivative_from_rates(u.wireless_bps, u.c_kd, u.f0, u.eta)
}

/// Per-user and total average rates, all in bits/s.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub per_user_wireless: Vec<f64>,
    pub per_user_transmission: Vec<f64>,
    pub total: f64,
}

pub fn total_average_rate(
    config: &SystemConfig,
    pl: &PathLossModel,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
) -> Result<RateReport> {
    let mut per_user_wireless = Vec::with_capacity(config.pairs());
    let mut per_user_transmission = Vec::with_capacity(config.pairs());
    for k in 0..config.pairs() {
        let u = user_rates(config, pl, cache, bh, k)?;
        per_user_wireless.push(u.wireless_bps);
        per_user_transmission.push(transmission_mixture(u.wireless_bps, u.c_kd, u.f0, u.eta)?);
    }
    let total = per_user_transmission.iter().sum();
    Ok(RateReport {
        per_user_wireless,
        per_user_transmission,
        total,
    })
}

/// Steepness interval `[η_k1, η_k2]` of the operational caching regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeInterval {
    /// Smallest `η` meeting the QoS floor `r̄_k >= p·R̄_k`.
    pub eta_lo: f64,
    /// `η` at which `dr̄_k/dη` has fallen to `ε`.
    pub eta_hi: f64,
    pub valid: bool,
}

/// Regime bounds from a user's wireless rate and data backhaul (bits/s).
pub fn regime_bounds_from_rates(
    wireless_bps: f64,
    c_kd: f64,
    f0: f64,
    params: &RegimeParams,
) -> Result<RegimeInterval> {
    if !(f0 > 1.0) {
        return Err(invalid("f0", "regime bounds need f0 > 1"));
    }
    let ln_f0 = f0.ln();
    let gap = wireless_bps - c_kd;
    let lo_arg = wireless_bps * (1.0 - params.qos_fraction()) / gap;
    if !(lo_arg > 0.0) || !lo_arg.is_finite() {
        return Err(Error::RegimeLogDomain {
            bound: "eta_lo (minimum guaranteed rate)",
            argument: lo_arg,
        });
    }
    let hi_arg = params.flatness_eps() / (gap * ln_f0);
    if !(hi_arg > 0.0) || !hi_arg.is_finite() {
        return Err(Error::RegimeLogDomain {
            bound: "eta_hi (constant rate variation)",
            argument: hi_arg,
        });
    }
    let eta_lo = 1.0 - lo_arg.ln() / ln_f0;
    let eta_hi = 1.0 - hi_arg.ln() / ln_f0;
    Ok(RegimeInterval {
        eta_lo,
        eta_hi,
        valid: eta_lo <= eta_hi,
    })
}

pub fn regime_bounds(
    config: &SystemConfig,
    pl: &PathLossModel,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    params: &RegimeParams,
    k: usize,
) -> Result<RegimeInterval> {
    let u = user_rates(config, pl, cache, bh, k)?;
    regime_bounds_from_rates(u.wireless_bps, u.c_kd, u.f0, params)
}
