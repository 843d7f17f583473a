//! Flat `key = value` scenario files.
//!
//! ```text
//! # desk-scale check
//! n_tx = 2
//! n_rx = 2
//! L = 3
//! B = 10
//! sweep = eta 1.05 4.0 0.05
//! ```
//!
//! Capacities are given in Mb/s, the slot in ms, the bandwidth in MHz and the
//! flatness threshold `eps` in Mb/s per unit of steepness.

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{wyner_path_loss, BackhaulConfig, CacheProfile, PathLossModel, RegimeParams, SystemConfig};

/// One swept variable: `start, start + step, …` up to `stop` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn new(var: &str, start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
            return Err(Error::Config(format!(
                "sweep {var}: need finite start <= stop and step > 0, got {start} {stop} {step}"
            )));
        }
        Ok(Self {
            var: var.to_string(),
            start,
            stop,
            step,
        })
    }

    /// Grid points, each computed as `start + i·step` so no error accumulates.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Parsed scenario. Missing keys keep the defaults of [`Scenario::default`],
/// the large-array setting used for the figures.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n_tx: usize,
    pub n_rx: usize,
    pub d: usize,
    pub pairs: usize,
    pub snr_db: f64,
    pub bits: u32,
    pub zeta: f64,
    pub f0: f64,
    pub eta: f64,
    pub c_csi_mbps: f64,
    pub c_data_mbps: f64,
    pub tau_ms: f64,
    pub bw_mhz: f64,
    pub seed: u64,
    /// QoS fraction of the wireless rate defining the regime's lower edge.
    pub p: f64,
    /// Flatness threshold on `dr̄/dη`, Mb/s.
    pub eps: f64,
    /// User whose rate is reported by per-user sweeps.
    pub user: usize,
    pub sweep: Option<Sweep>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            n_tx: 15,
            n_rx: 15,
            d: 2,
            pairs: 8,
            snr_db: 10.0,
            bits: 30,
            zeta: 0.3,
            f0: 10.0,
            eta: 1.2,
            c_csi_mbps: 20.0,
            c_data_mbps: 5.0,
            tau_ms: 1.0,
            bw_mhz: 10.0,
            seed: 1,
            p: 0.7,
            eps: 0.05,
            user: 0,
            sweep: None,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("line {line}: cannot parse {key} = {value:?}")))
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    pub fn system_config(&self) -> Result<SystemConfig> {
        SystemConfig::from_snr_db(
            self.n_tx,
            self.n_rx,
            self.d,
            self.pairs,
            self.snr_db,
            self.bits,
            self.bw_mhz * 1e6,
        )
    }

    pub fn path_loss(&self) -> Result<PathLossModel> {
        wyner_path_loss(self.pairs, self.zeta)
    }

    pub fn cache(&self) -> Result<CacheProfile> {
        CacheProfile::common(self.f0, self.eta)
    }

    pub fn backhaul(&self) -> Result<BackhaulConfig> {
        BackhaulConfig::from_mbps_ms(self.c_csi_mbps, self.c_data_mbps, self.tau_ms)
    }

    pub fn regime(&self) -> Result<RegimeParams> {
        RegimeParams::new(self.p, self.eps * 1e6)
    }

    /// The sweep for `var`, or `default` when the file has none. A sweep
    /// over any other variable is rejected.
    pub fn sweep_or(&self, var: &str, default: Sweep) -> Result<Sweep> {
        match &self.sweep {
            None => Ok(default),
            Some(s) if s.var == var => Ok(s.clone()),
            Some(s) => Err(Error::Config(format!(
                "this command sweeps {var}, but the scenario sweeps {}",
                s.var
            ))),
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut s = Scenario::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(Error::Config(format!("line {line}: {key} given twice")));
            }
            seen.push(key.to_string());
            match key {
                "n_tx" => s.n_tx = parse_num(key, value, line)?,
                "n_rx" => s.n_rx = parse_num(key, value, line)?,
                "d" => s.d = parse_num(key, value, line)?,
                "L" => s.pairs = parse_num(key, value, line)?,
                "snr_db" => s.snr_db = parse_num(key, value, line)?,
                "B" => s.bits = parse_num(key, value, line)?,
                "zeta" => s.zeta = parse_num(key, value, line)?,
                "f0" => s.f0 = parse_num(key, value, line)?,
                "eta" => s.eta = parse_num(key, value, line)?,
                "c_csi_mbps" => s.c_csi_mbps = parse_num(key, value, line)?,
                "c_data_mbps" => s.c_data_mbps = parse_num(key, value, line)?,
                "tau_ms" => s.tau_ms = parse_num(key, value, line)?,
                "bw_mhz" => s.bw_mhz = parse_num(key, value, line)?,
                "seed" => s.seed = parse_num(key, value, line)?,
                "p" => s.p = parse_num(key, value, line)?,
                "eps" => s.eps = parse_num(key, value, line)?,
                "user" => s.user = parse_num(key, value, line)?,
                "sweep" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 4 {
                        return Err(Error::Config(format!(
                            "line {line}: sweep = <variable> <start> <stop> <step>"
                        )));
                    }
                    s.sweep = Some(Sweep::new(
                        parts[0],
                        parse_num("sweep start", parts[1], line)?,
                        parse_num("sweep stop", parts[2], line)?,
                        parse_num("sweep step", parts[3], line)?,
                    )?);
                }
                other => return Err(Error::Config(format!("line {line}: unknown key {other:?}"))),
            }
        }
        Ok(s)
    }
}
