//! Scenario and configuration types shared by every other module.
//!
//! Capacities are carried in bits/s and wireless rates in bits/s/Hz; the
//! conversion between the two happens through [`SystemConfig::bandwidth_hz`].

use crate::error::{invalid, Error, Result};

/// Wireless parameters of an `L`-pair MIMO interference network.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    n_tx: usize,
    n_rx: usize,
    streams: Vec<usize>,
    power: f64,
    noise: f64,
    quant_bits: u32,
    bandwidth_hz: f64,
}

impl SystemConfig {
    /// Builds a configuration with per-pair stream counts.
    pub fn new(
        n_tx: usize,
        n_rx: usize,
        streams: Vec<usize>,
        power: f64,
        noise: f64,
        quant_bits: u32,
        bandwidth_hz: f64,
    ) -> Result<Self> {
        if n_tx == 0 || n_rx == 0 {
            return Err(invalid("n_tx/n_rx", "antenna counts must be >= 1"));
        }
        if n_tx * n_rx < 2 {
            return Err(invalid("n_tx/n_rx", "Q = n_tx*n_rx - 1 must be >= 1"));
        }
        if streams.is_empty() {
            return Err(invalid("pairs", "at least one pair is required"));
        }
        let d_cap = n_tx.min(n_rx);
        if let Some(&d) = streams.iter().find(|&&d| d == 0 || d > d_cap) {
            return Err(invalid(
                "streams",
                format!("stream count {d} outside [1, min(n_tx, n_rx) = {d_cap}]"),
            ));
        }
        if !(power.is_finite() && power > 0.0) {
            return Err(invalid("power", "must be finite and > 0"));
        }
        if !(noise.is_finite() && noise > 0.0) {
            return Err(invalid("noise", "must be finite and > 0"));
        }
        if quant_bits == 0 {
            return Err(invalid("quant_bits", "must be >= 1"));
        }
        if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
            return Err(invalid("bandwidth_hz", "must be finite and > 0"));
        }
        Ok(Self {
            n_tx,
            n_rx,
            streams,
            power,
            noise,
            quant_bits,
            bandwidth_hz,
        })
    }

    /// Same stream count `d` on every pair.
    #[allow(clippy::too_many_arguments)]
    pub fn homogeneous(
        n_tx: usize,
        n_rx: usize,
        streams: usize,
        pairs: usize,
        power: f64,
        noise: f64,
        quant_bits: u32,
        bandwidth_hz: f64,
    ) -> Result<Self> {
        Self::new(n_tx, n_rx, vec![streams; pairs], power, noise, quant_bits, bandwidth_hz)
    }

    /// Homogeneous configuration with `σ² = 1` and `P = 10^(snr_db/10)`.
    pub fn from_snr_db(
        n_tx: usize,
        n_rx: usize,
        streams: usize,
        pairs: usize,
        snr_db: f64,
        quant_bits: u32,
        bandwidth_hz: f64,
    ) -> Result<Self> {
        Self::homogeneous(
            n_tx,
            n_rx,
            streams,
            pairs,
            10f64.powf(snr_db / 10.0),
            1.0,
            quant_bits,
            bandwidth_hz,
        )
    }

    /// Copy with `pairs` pairs, all using the common stream count.
    pub fn with_pairs(&self, pairs: usize) -> Result<Self> {
        let d = self
            .common_streams()
            .ok_or_else(|| invalid("streams", "resizing requires a common stream count"))?;
        Self::new(
            self.n_tx,
            self.n_rx,
            vec![d; pairs],
            self.power,
            self.noise,
            self.quant_bits,
            self.bandwidth_hz,
        )
    }

    pub fn with_quant_bits(&self, quant_bits: u32) -> Result<Self> {
        Self::new(
            self.n_tx,
            self.n_rx,
            self.streams.clone(),
            self.power,
            self.noise,
            quant_bits,
            self.bandwidth_hz,
        )
    }

    pub fn with_power(&self, power: f64) -> Result<Self> {
        Self::new(
            self.n_tx,
            self.n_rx,
            self.streams.clone(),
            power,
            self.noise,
            self.quant_bits,
            self.bandwidth_hz,
        )
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn pairs(&self) -> usize {
        self.streams.len()
    }

    pub fn streams(&self) -> &[usize] {
        &self.streams
    }

    pub fn streams_of(&self, k: usize) -> Result<usize> {
        self.streams.get(k).copied().ok_or(Error::IndexOutOfRange {
            what: "pairs",
            index: k,
            len: self.pairs(),
        })
    }

    /// The shared stream count, if every pair uses the same one.
    pub fn common_streams(&self) -> Option<usize> {
        let d = self.streams[0];
        self.streams.iter().all(|&s| s == d).then_some(d)
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn quant_bits(&self) -> u32 {
        self.quant_bits
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    /// Dimension of the quantization cell, `Q = n_tx·n_rx − 1`.
    pub fn q(&self) -> u32 {
        (self.n_tx * self.n_rx - 1) as u32
    }

    /// `2^(1 − B/Q)`: mean leakage power per interfering stream in the
    /// Gaussian-leakage rate model.
    pub fn leakage_factor(&self) -> f64 {
        (1.0 - self.quant_bits as f64 / self.q() as f64).exp2()
    }

    /// Antenna budget condition `n_tx + n_rx >= d(L+1)`, using the largest
    /// stream count for heterogeneous configurations.
    pub fn ia_feasible(&self) -> bool {
        self.n_tx + self.n_rx >= self.ia_required_antennas()
    }

    pub(crate) fn ia_required_antennas(&self) -> usize {
        let d_max = *self.streams.iter().max().expect("non-empty");
        d_max * (self.pairs() + 1)
    }

    /// Largest pair count satisfying the antenna budget for stream count `d`.
    pub fn max_feasible_pairs(&self, d: usize) -> usize {
        ((self.n_tx + self.n_rx) / d).saturating_sub(1)
    }
}

/// Path-loss coefficients `ζ_ki` between transmitter `i` and receiver `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLossModel {
    pairs: usize,
    zeta: Vec<f64>,
}

impl PathLossModel {
    /// Builds from explicit rows; every entry must lie in `(0, 1]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let pairs = rows.len();
        if pairs == 0 {
            return Err(invalid("zeta", "empty path-loss matrix"));
        }
        let mut zeta = Vec::with_capacity(pairs * pairs);
        for row in rows {
            if row.len() != pairs {
                return Err(invalid("zeta", "path-loss matrix must be square"));
            }
            for &z in row {
                if !(z > 0.0 && z <= 1.0) {
                    return Err(invalid("zeta", format!("entry {z} outside (0, 1]")));
                }
                zeta.push(z);
            }
        }
        Ok(Self { pairs, zeta })
    }

    /// Every coefficient equal to one.
    pub fn uniform(pairs: usize) -> Result<Self> {
        Self::from_rows(&vec![vec![1.0; pairs]; pairs])
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn get(&self, k: usize, i: usize) -> Result<f64> {
        if k >= self.pairs || i >= self.pairs {
            return Err(Error::IndexOutOfRange {
                what: "path-loss entries",
                index: k.max(i),
                len: self.pairs,
            });
        }
        Ok(self.zeta[k * self.pairs + i])
    }

    /// `Σ_{i≠k} ζ_ki`.
    pub fn interference_sum(&self, k: usize) -> Result<f64> {
        if k >= self.pairs {
            return Err(Error::IndexOutOfRange {
                what: "path-loss rows",
                index: k,
                len: self.pairs,
            });
        }
        let row = &self.zeta[k * self.pairs..(k + 1) * self.pairs];
        Ok(row.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, z)| z).sum())
    }
}

/// Wyner chain: entry `(k, i)` is `ζ^|k−i|`.
pub fn wyner_path_loss(pairs: usize, zeta: f64) -> Result<PathLossModel> {
    if pairs < 2 {
        return Err(invalid("pairs", "Wyner chain needs at least 2 pairs"));
    }
    if !(zeta > 0.0 && zeta < 1.0) {
        return Err(invalid("zeta", format!("{zeta} outside (0, 1)")));
    }
    let mut values = Vec::with_capacity(pairs * pairs);
    for k in 0..pairs {
        for i in 0..pairs {
            values.push(zeta.powi(k.abs_diff(i) as i32));
        }
    }
    Ok(PathLossModel { pairs, zeta: values })
}

/// Received power fraction `α_ki = ζ_ki·P/d_i`.
pub fn alpha(config: &SystemConfig, pl: &PathLossModel, k: usize, i: usize) -> Result<f64> {
    check_dims(config, pl)?;
    let d_i = config.streams_of(i)?;
    Ok(pl.get(k, i)? * config.power() / d_i as f64)
}

pub(crate) fn check_dims(config: &SystemConfig, pl: &PathLossModel) -> Result<()> {
    if config.pairs() != pl.pairs() {
        return Err(invalid(
            "pairs",
            format!(
                "configuration has {} pairs but path-loss model has {}",
                config.pairs(),
                pl.pairs()
            ),
        ));
    }
    Ok(())
}

/// Content popularity seen by the edge caches: support endpoint `f0` and a
/// steepness factor per user (or one shared by all users).
#[derive(Debug, Clone, PartialEq)]
pub struct CacheProfile {
    f0: f64,
    eta: Vec<f64>,
}

impl CacheProfile {
    pub fn common(f0: f64, eta: f64) -> Result<Self> {
        Self::per_user(f0, vec![eta])
    }

    pub fn per_user(f0: f64, eta: Vec<f64>) -> Result<Self> {
        if !(f0.is_finite() && f0 >= 1.0) {
            return Err(invalid("f0", format!("{f0} must be finite and >= 1")));
        }
        if eta.is_empty() {
            return Err(invalid("eta", "at least one steepness factor required"));
        }
        if let Some(&e) = eta.iter().find(|&&e| !(e > 1.0)) {
            return Err(invalid(
                "eta",
                format!("{e} <= 1 gives a non-normalizable popularity density"),
            ));
        }
        Ok(Self { f0, eta })
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    /// Steepness factor of user `k`. A single shared value applies to all.
    pub fn eta(&self, k: usize) -> Result<f64> {
        match self.eta.as_slice() {
            [e] => Ok(*e),
            etas => etas.get(k).copied().ok_or(Error::IndexOutOfRange {
                what: "users",
                index: k,
                len: etas.len(),
            }),
        }
    }

    pub fn common_eta(&self) -> Option<f64> {
        let e = self.eta[0];
        self.eta.iter().all(|&x| x == e).then_some(e)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::common(self.f0, eta)
    }

    pub fn with_f0(&self, f0: f64) -> Result<Self> {
        Self::per_user(f0, self.eta.clone())
    }
}

/// System backhaul: total capacity split between CSI sharing and data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackhaulConfig {
    c_total: f64,
    c_csi: f64,
    c_data: f64,
    slot: f64,
}

/// Per-link share of the backhaul for a given pair count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkCapacities {
    pub c_k: f64,
    pub c_kc: f64,
    pub c_kd: f64,
}

impl BackhaulConfig {
    /// Capacities in bits/s, slot duration in seconds.
    pub fn new(c_csi: f64, c_data: f64, slot: f64) -> Result<Self> {
        if !(c_csi.is_finite() && c_csi >= 0.0) {
            return Err(invalid("c_csi", "must be finite and >= 0"));
        }
        if !(c_data.is_finite() && c_data >= 0.0) {
            return Err(invalid("c_data", "must be finite and >= 0"));
        }
        if !(slot.is_finite() && slot > 0.0) {
            return Err(invalid("slot", "must be finite and > 0"));
        }
        Ok(Self {
            c_total: c_csi + c_data,
            c_csi,
            c_data,
            slot,
        })
    }

    /// Same as [`BackhaulConfig::new`] with capacities in Mb/s and slot in ms.
    pub fn from_mbps_ms(c_csi_mbps: f64, c_data_mbps: f64, slot_ms: f64) -> Result<Self> {
        Self::new(c_csi_mbps * 1e6, c_data_mbps * 1e6, slot_ms * 1e-3)
    }

    pub fn with_c_csi(&self, c_csi: f64) -> Result<Self> {
        Self::new(c_csi, self.c_data, self.slot)
    }

    pub fn c_total(&self) -> f64 {
        self.c_total
    }

    pub fn c_csi(&self) -> f64 {
        self.c_csi
    }

    pub fn c_data(&self) -> f64 {
        self.c_data
    }

    pub fn slot(&self) -> f64 {
        self.slot
    }
}

/// `(C/L, C_c/L, C_d/L)`.
pub fn per_link_capacities(bh: &BackhaulConfig, pairs: usize) -> Result<LinkCapacities> {
    if pairs == 0 {
        return Err(invalid("pairs", "per-link capacities need at least one pair"));
    }
    let l = pairs as f64;
    Ok(LinkCapacities {
        c_k: bh.c_total / l,
        c_kc: bh.c_csi / l,
        c_kd: bh.c_data / l,
    })
}

/// QoS fraction `p` and flatness threshold `ε` (bits/s per unit of `η`)
/// defining the operational caching regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    qos_fraction: f64,
    flatness_eps: f64,
}

impl RegimeParams {
    pub fn new(qos_fraction: f64, flatness_eps: f64) -> Result<Self> {
        if !(qos_fraction > 0.0 && qos_fraction < 1.0) {
            return Err(invalid("qos_fraction", "must lie in (0, 1)"));
        }
        if !(flatness_eps.is_finite() && flatness_eps > 0.0) {
            return Err(invalid("flatness_eps", "must be finite and > 0"));
        }
        Ok(Self {
            qos_fraction,
            flatness_eps,
        })
    }

    pub fn qos_fraction(&self) -> f64 {
        self.qos_fraction
    }

    pub fn flatness_eps(&self) -> f64 {
        self.flatness_eps
    }
}
