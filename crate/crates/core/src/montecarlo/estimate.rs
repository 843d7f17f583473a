//! Monte Carlo estimators. Trials run in parallel, each on its own ChaCha
//! stream derived from `(seed, trial index)`; results are reduced in trial
//! order so the output is bit-identical for any thread count.

use rand::Rng;
use rayon::prelude::*;

use super::channel::sample_channels_with;
use super::channel::{complex_gaussian, isotropic_unit, trial_rng, CMatrix, CVector, C64};
use super::ia::{design_ia, IaOptions};
use super::quantize::{quantize_channel, quantize_csi, vectorize, QuantMode};
use super::sinr::stream_powers;
use crate::analytic::{hit_probability, RateReport};
use crate::error::{invalid, Error, Result};
use crate::model::{per_link_capacities, BackhaulConfig, CacheProfile, PathLossModel, SystemConfig};

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
}

impl MeanEstimate {
    /// Ordered reduction over `values`.
    pub fn from_samples(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut n, mut sum, mut sum_sq) = (0usize, 0.0, 0.0);
        for x in values {
            n += 1;
            sum += x;
            sum_sq += x * x;
        }
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std_err: f64::NAN,
            };
        }
        let mean = sum / n as f64;
        let var = if n > 1 {
            ((sum_sq - n as f64 * mean * mean) / (n as f64 - 1.0)).max(0.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_err: (var / n as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageEstimate {
    pub estimate: MeanEstimate,
    /// Gaussian-leakage model value `2^{1−B/Q}`.
    pub target: f64,
    pub trials: usize,
}

/// Monte Carlo estimate of `E[‖h‖²·e·|w*s|²]`, the per-stream leakage
/// power left by quantized CSI, with `s = v̄ ⊗ u` built from unit-norm `u`,
/// `v` drawn independently of the channel and `w` the unit residual
/// direction of `h̃` orthogonal to its codeword.
pub fn validate_leakage_expectation(config: &SystemConfig, trials: usize, seed: u64) -> Result<LeakageEstimate> {
    if trials == 0 {
        return Err(invalid("trials", "must be >= 1"));
    }
    let (nr, nt) = (config.n_rx(), config.n_tx());
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let h = CMatrix::from_fn(nr, nt, |_, _| complex_gaussian(&mut rng));
            let (h_hat, e) = quantize_channel(&h, config, QuantMode::Statistical, &mut rng)?;
            let w = residual_direction(&vectorize(&h), &h_hat);
            let u = isotropic_unit(nr, &mut rng);
            let v = isotropic_unit(nt, &mut rng);
            let s = kron_conj(&v, &u);
            Ok(h.norm_squared() * e * w.dotc(&s).norm_sqr())
        })
        .collect::<Result<_>>()?;
    Ok(LeakageEstimate {
        estimate: MeanEstimate::from_samples(samples),
        target: config.leakage_factor(),
        trials,
    })
}

/// `v̄ ⊗ u`, so that `u*Hv = (v̄ ⊗ u)* vec(H)`.
pub fn kron_conj(v: &CVector, u: &CVector) -> CVector {
    let mut out = CVector::zeros(v.len() * u.len());
    for (c, vc) in v.iter().enumerate() {
        for (r, ur) in u.iter().enumerate() {
            out[c * u.len() + r] = vc.conj() * ur;
        }
    }
    out
}

/// Unit direction `w` with `h̃ = (ĥ*h̃)·ĥ + √e·w`, `w ⊥ ĥ`.
pub fn residual_direction(h: &CVector, h_hat: &CVector) -> CVector {
    let dir = h / C64::from(h.norm());
    let rest = &dir - h_hat * h_hat.dotc(&dir);
    let n = rest.norm();
    if n > 0.0 {
        rest / C64::from(n)
    } else {
        rest
    }
}

/// How the transmitters learn the cross channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiModel {
    Exact,
    Quantized(QuantMode),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub csi: CsiModel,
    pub ia: IaOptions,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            csi: CsiModel::Quantized(QuantMode::Statistical),
            ia: IaOptions::default(),
        }
    }
}

/// Empirical counterpart of [`RateReport`] with sampling statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRates {
    /// Sample means, bits/s.
    pub report: RateReport,
    pub wireless_std_err: Vec<f64>,
    pub transmission_std_err: Vec<f64>,
    pub total_std_err: f64,
    pub hit_frequency: Vec<f64>,
    pub trials: usize,
    /// Trials whose IA design did not reach the leakage target.
    pub unconverged: usize,
    pub mean_iterations: f64,
    /// Mean `|û*H_ki v̂|²` over all cross links and stream pairs.
    pub mean_cross_gain: MeanEstimate,
    /// Largest observed inter-stream to signal power ratio.
    pub max_isi_ratio: f64,
    /// Largest observed inter-user to signal power ratio.
    pub max_iui_ratio: f64,
}

struct Trial {
    wireless: Vec<f64>,
    transmission: Vec<f64>,
    hits: Vec<bool>,
    converged: bool,
    iterations: usize,
    cross_gains: Vec<f64>,
    isi_ratio: f64,
    iui_ratio: f64,
}

fn run_trial(
    config: &SystemConfig,
    pl: &PathLossModel,
    hit: &[f64],
    c_kd: f64,
    opts: &SimOptions,
    seed: u64,
    t: u64,
) -> Result<Trial> {
    let l = config.pairs();
    let mut rng = trial_rng(seed, t);
    let real = sample_channels_with(config, pl, &mut rng)?;
    let design = match opts.csi {
        CsiModel::Exact => real.channels.clone(),
        CsiModel::Quantized(mode) => quantize_csi(&real, config, mode, &mut rng)?.design_channels(&real),
    };
    let ia = design_ia(&design, config, &opts.ia, rng.random())?;

    let bw = config.bandwidth_hz();
    let mut wireless = Vec::with_capacity(l);
    let mut transmission = Vec::with_capacity(l);
    let mut hits = Vec::with_capacity(l);
    let (mut isi_ratio, mut iui_ratio) = (0.0f64, 0.0f64);
    for k in 0..l {
        let mut rate = 0.0;
        for m in 0..config.streams_of(k)? {
            let p = stream_powers(&real.channels, &ia, config, pl, k, m)?;
            rate += (1.0 + p.signal / (config.noise() + p.iui)).log2();
            isi_ratio = isi_ratio.max(p.isi / p.signal);
            iui_ratio = iui_ratio.max(p.iui / p.signal);
        }
        let rate = rate * bw;
        let is_hit = rng.random::<f64>() < hit[k];
        wireless.push(rate);
        transmission.push(if is_hit { rate } else { c_kd });
        hits.push(is_hit);
    }

    let mut cross_gains = Vec::new();
    for k in 0..l {
        for i in (0..l).filter(|&i| i != k) {
            let g = ia.combiners[k].adjoint() * real.channels.get(k, i) * &ia.precoders[i];
            cross_gains.extend(g.iter().map(|z| z.norm_sqr()));
        }
    }

    Ok(Trial {
        wireless,
        transmission,
        hits,
        converged: ia.converged,
        iterations: ia.iterations,
        cross_gains,
        isi_ratio,
        iui_ratio,
    })
}

/// Link-level estimate of the per-user wireless and transmission rates:
/// each trial draws channels, shares quantized CSI, designs IA on it, then
/// evaluates the instantaneous rates on the true channels and draws one
/// content request per user.
pub fn estimate_rates(
    config: &SystemConfig,
    pl: &PathLossModel,
    cache: &CacheProfile,
    bh: &BackhaulConfig,
    trials: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<EmpiricalRates> {
    if trials == 0 {
        return Err(invalid("trials", "must be >= 1"));
    }
    if !config.ia_feasible() {
        return Err(Error::IaInfeasible {
            antennas: config.n_tx() + config.n_rx(),
            required: config.ia_required_antennas(),
        });
    }
    let l = config.pairs();
    let hit = (0..l).map(|k| hit_probability(cache, k)).collect::<Result<Vec<_>>>()?;
    let c_kd = per_link_capacities(bh, l)?.c_kd;

    let outcomes: Vec<Trial> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, pl, &hit, c_kd, opts, seed, t))
        .collect::<Result<_>>()?;

    let per_user = |f: &dyn Fn(&Trial) -> f64| MeanEstimate::from_samples(outcomes.iter().map(f));
    let mut report = RateReport {
        per_user_wireless: Vec::with_capacity(l),
        per_user_transmission: Vec::with_capacity(l),
        total: 0.0,
    };
    let (mut wireless_std_err, mut transmission_std_err, mut hit_frequency) = (vec![], vec![], vec![]);
    for k in 0..l {
        let w = per_user(&|t| t.wireless[k]);
        let r = per_user(&|t| t.transmission[k]);
        report.per_user_wireless.push(w.mean);
        report.per_user_transmission.push(r.mean);
        wireless_std_err.push(w.std_err);
        transmission_std_err.push(r.std_err);
        hit_frequency.push(outcomes.iter().filter(|t| t.hits[k]).count() as f64 / trials as f64);
    }
    let total = per_user(&|t| t.transmission.iter().sum());
    report.total = total.mean;

    Ok(EmpiricalRates {
        report,
        wireless_std_err,
        transmission_std_err,
        total_std_err: total.std_err,
        hit_frequency,
        trials,
        unconverged: outcomes.iter().filter(|t| !t.converged).count(),
        mean_iterations: outcomes.iter().map(|t| t.iterations as f64).sum::<f64>() / trials as f64,
        mean_cross_gain: MeanEstimate::from_samples(outcomes.iter().flat_map(|t| t.cross_gains.iter().copied())),
        max_isi_ratio: outcomes.iter().map(|t| t.isi_ratio).fold(0.0, f64::max),
        max_iui_ratio: outcomes.iter().map(|t| t.iui_ratio).fold(0.0, f64::max),
    })
}
