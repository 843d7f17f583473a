use super::channel::{CVector, ChannelSet};
use super::ia::IaSolution;
use crate::error::{Error, Result};
use crate::model::{alpha, PathLossModel, SystemConfig};

/// Received powers seen by stream `m` of receiver `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamPowers {
    /// `α_kk·|û*H_kk v̂_k^m|²`
    pub signal: f64,
    /// `Σ_{i≠k} α_ki Σ_j |û*H_ki v̂_i^j|²`
    pub iui: f64,
    /// `α_kk Σ_{j≠m} |û*H_kk v̂_k^j|²`, excluded from the SINR.
    pub isi: f64,
}

/// `|u* H v|²` for column vectors `u`, `v`.
fn gain(u: &CVector, h: &nalgebra::DMatrix<super::channel::C64>, v: &CVector) -> f64 {
    u.dotc(&(h * v)).norm_sqr()
}

pub fn stream_powers(
    channels: &ChannelSet,
    ia: &IaSolution,
    config: &SystemConfig,
    pl: &PathLossModel,
    k: usize,
    m: usize,
) -> Result<StreamPowers> {
    let l = config.pairs();
    if k >= l {
        return Err(Error::IndexOutOfRange {
            what: "receivers",
            index: k,
            len: l,
        });
    }
    let d_k = config.streams_of(k)?;
    if m >= d_k {
        return Err(Error::IndexOutOfRange {
            what: "streams",
            index: m,
            len: d_k,
        });
    }
    let u = ia.combiners[k].column(m).clone_owned();
    let a_kk = alpha(config, pl, k, k)?;
    let h_kk = channels.get(k, k);
    let mut isi = 0.0;
    for j in (0..d_k).filter(|&j| j != m) {
        isi += gain(&u, h_kk, &ia.precoders[k].column(j).clone_owned());
    }
    let mut iui = 0.0;
    for i in (0..l).filter(|&i| i != k) {
        let a_ki = alpha(config, pl, k, i)?;
        let h = channels.get(k, i);
        let s: f64 = ia.precoders[i]
            .column_iter()
            .map(|v| gain(&u, h, &v.clone_owned()))
            .sum();
        iui += a_ki * s;
    }
    Ok(StreamPowers {
        signal: a_kk * gain(&u, h_kk, &ia.precoders[k].column(m).clone_owned()),
        iui,
        isi: a_kk * isi,
    })
}

/// SINR of stream `m` at receiver `k` on the true channels, with
/// inter-stream interference treated as suppressed.
pub fn compute_sinr(
    channels: &ChannelSet,
    ia: &IaSolution,
    config: &SystemConfig,
    pl: &PathLossModel,
    k: usize,
    m: usize,
) -> Result<f64> {
    let p = stream_powers(channels, ia, config, pl, k, m)?;
    Ok(p.signal / (config.noise() + p.iui))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::wyner_path_loss;
    use crate::montecarlo::channel::{sample_channels, CMatrix, C64};
    use crate::montecarlo::ia::{design_ia, IaOptions};

    #[test]
    fn interference_free_value() {
        // identity channels, unit precoders/combiners on orthogonal axes
        let c = SystemConfig::homogeneous(2, 2, 1, 2, 10.0, 1.0, 10, 1e7).unwrap();
        let pl = wyner_path_loss(2, 0.5).unwrap();
        let e0 = CMatrix::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let e1 = CMatrix::from_column_slice(2, 1, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let ch = ChannelSet::from_fn(2, |_, _| CMatrix::identity(2, 2));
        let ia = IaSolution {
            precoders: vec![e0.clone(), e1.clone()],
            combiners: vec![e0, e1],
            leakage: 0.0,
            iterations: 0,
            converged: true,
        };
        let s = compute_sinr(&ch, &ia, &c, &pl, 0, 0).unwrap();
        assert!((s - 10.0).abs() < 1e-12);
        assert!(compute_sinr(&ch, &ia, &c, &pl, 2, 0).is_err());
        assert!(compute_sinr(&ch, &ia, &c, &pl, 0, 1).is_err());
    }

    #[test]
    fn perfect_csi_matches_interference_free_sinr() {
        let c = SystemConfig::homogeneous(2, 2, 1, 3, 10.0, 1.0, 10, 1e7).unwrap();
        let pl = wyner_path_loss(3, 0.3).unwrap();
        let real = sample_channels(&c, &pl, 21).unwrap();
        let ia = design_ia(&real.channels, &c, &IaOptions::default(), 3).unwrap();
        assert!(ia.converged);
        for k in 0..3 {
            let p = stream_powers(&real.channels, &ia, &c, &pl, k, 0).unwrap();
            let ideal = p.signal / c.noise();
            let s = compute_sinr(&real.channels, &ia, &c, &pl, k, 0).unwrap();
            assert!((s - ideal).abs() <= 1e-6 * ideal);
            assert!(p.iui <= 1e-10 * p.signal, "iui {} signal {}", p.iui, p.signal);
        }
    }

    #[test]
    fn sinr_increases_with_power() {
        let c = SystemConfig::homogeneous(2, 2, 1, 3, 1.0, 1.0, 10, 1e7).unwrap();
        let pl = wyner_path_loss(3, 0.3).unwrap();
        let real = sample_channels(&c, &pl, 2).unwrap();
        // deliberately poor design: one iteration only
        let opts = IaOptions {
            max_iters: 1,
            ..IaOptions::default()
        };
        let ia = design_ia(&real.channels, &c, &opts, 1).unwrap();
        let mut prev = 0.0;
        for p in [0.1, 1.0, 10.0, 100.0, 1000.0] {
            let s = compute_sinr(&real.channels, &ia, &c.with_power(p).unwrap(), &pl, 0, 0).unwrap();
            assert!(s > prev);
            prev = s;
        }
        let pw = stream_powers(&real.channels, &ia, &c.with_power(1e12).unwrap(), &pl, 0, 0).unwrap();
        assert!(prev < pw.signal / pw.iui);
    }
}
