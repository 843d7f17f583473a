//! Limited-feedback quantization of channel directions shared over the
//! backhaul.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::channel::{isotropic_orthogonal, isotropic_unit, CMatrix, CVector, ChannelRealization, ChannelSet, C64};
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Largest bit count accepted by [`QuantMode::Codebook`].
pub const MAX_CODEBOOK_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantMode {
    /// Error drawn from the quantization-cell CDF `2^B·ε^Q`, direction
    /// perturbed isotropically in the orthogonal complement.
    #[default]
    Statistical,
    /// Explicit random codebook of `2^B` isotropic codewords.
    Codebook,
}

/// Quantization error with CDF `2^B·ε^Q` on `[0, 2^{−B/Q}]`, by inverse
/// transform.
pub fn sample_quantization_error(config: &SystemConfig, seed: u64) -> f64 {
    sample_quantization_error_with(config, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_quantization_error_with<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> f64 {
    let q = config.q() as f64;
    let u: f64 = rng.random();
    u.powf(1.0 / q) * (-(config.quant_bits() as f64) / q).exp2()
}

/// Column-major vectorization `vec(H)`.
pub fn vectorize(h: &CMatrix) -> CVector {
    CVector::from_column_slice(h.as_slice())
}

/// Quantizes the direction of `h`, returning the unit-norm codeword `ĥ` and
/// the realized error `e = 1 − |ĥ*h̃|²`.
pub fn quantize_channel<R: Rng + ?Sized>(
    h: &CMatrix,
    config: &SystemConfig,
    mode: QuantMode,
    rng: &mut R,
) -> Result<(CVector, f64)> {
    let v = vectorize(h);
    let dir = &v / C64::from(v.norm());
    match mode {
        QuantMode::Statistical => {
            let e = sample_quantization_error_with(config, rng);
            let w = isotropic_orthogonal(&dir, rng);
            let h_hat = &dir * C64::from((1.0 - e).sqrt()) + w * C64::from(e.sqrt());
            Ok((h_hat, e))
        }
        QuantMode::Codebook => {
            let bits = config.quant_bits();
            if bits > MAX_CODEBOOK_BITS {
                return Err(Error::CodebookTooLarge {
                    bits,
                    max: MAX_CODEBOOK_BITS,
                });
            }
            let mut best = (isotropic_unit(dir.len(), rng), f64::NEG_INFINITY);
            for _ in 0..(1u64 << bits) {
                let c = isotropic_unit(dir.len(), rng);
                let gain = dir.dotc(&c).norm_sqr();
                if gain > best.1 {
                    best = (c, gain);
                }
            }
            let (codeword, gain) = best;
            Ok((codeword, (1.0 - gain).max(0.0)))
        }
    }
}

/// Shared CSI: exact direct channels, quantized directions for cross links.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedCsi {
    pairs: usize,
    /// `ĥ_ki` for `k ≠ i`, `None` on the diagonal.
    h_hat: Vec<Option<CVector>>,
    /// `e_ki`, zero on the diagonal.
    err: Vec<f64>,
    norms: Vec<f64>,
    pub mode: QuantMode,
}

impl QuantizedCsi {
    pub fn h_hat(&self, k: usize, i: usize) -> Option<&CVector> {
        self.h_hat[k * self.pairs + i].as_ref()
    }

    pub fn error(&self, k: usize, i: usize) -> f64 {
        self.err[k * self.pairs + i]
    }

    /// Channels seen by the IA design: `H_kk` exact, `‖h_ki‖·unvec(ĥ_ki)`
    /// for cross links.
    pub fn design_channels(&self, real: &ChannelRealization) -> ChannelSet {
        let ch = &real.channels;
        ChannelSet::from_fn(self.pairs, |k, i| match self.h_hat(k, i) {
            None => ch.get(k, i).clone(),
            Some(v) => {
                let (nr, nt) = ch.get(k, i).shape();
                CMatrix::from_column_slice(nr, nt, v.as_slice()) * C64::from(self.norms[k * self.pairs + i])
            }
        })
    }
}

/// Quantizes every cross link of a realization.
pub fn quantize_csi<R: Rng + ?Sized>(
    real: &ChannelRealization,
    config: &SystemConfig,
    mode: QuantMode,
    rng: &mut R,
) -> Result<QuantizedCsi> {
    let pairs = real.channels.pairs();
    let mut h_hat = Vec::with_capacity(pairs * pairs);
    let mut err = Vec::with_capacity(pairs * pairs);
    let mut norms = Vec::with_capacity(pairs * pairs);
    for k in 0..pairs {
        for i in 0..pairs {
            let h = real.channels.get(k, i);
            norms.push(h.norm());
            if k == i {
                h_hat.push(None);
                err.push(0.0);
            } else {
                let (v, e) = quantize_channel(h, config, mode, rng)?;
                h_hat.push(Some(v));
                err.push(e);
            }
        }
    }
    Ok(QuantizedCsi {
        pairs,
        h_hat,
        err,
        norms,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::wyner_path_loss;
    use crate::montecarlo::channel::{gaussian_matrix, sample_channels, trial_rng};

    fn config(bits: u32) -> SystemConfig {
        SystemConfig::homogeneous(2, 2, 1, 3, 10.0, 1.0, bits, 1e7).unwrap()
    }

    #[test]
    fn error_support_and_moments() {
        let c = config(6);
        let q = 3.0;
        let cap = (-6.0f64 / q).exp2();
        let mut rng = trial_rng(11, 0);
        let n = 1_000_000;
        let (mut sum, mut below_half) = (0.0, 0usize);
        for _ in 0..n {
            let e = sample_quantization_error_with(&c, &mut rng);
            assert!((0.0..=cap).contains(&e));
            sum += e;
            if e <= cap / 2.0 {
                below_half += 1;
            }
        }
        // oracle: E[e] = ∫ (1 - 2^B ε^Q) dε over [0, cap] = Q/(Q+1)·cap
        let mean_model = q / (q + 1.0) * cap;
        assert!(((sum / n as f64) - mean_model).abs() < 0.01 * mean_model);
        // CDF at cap/2 is 2^-Q = 0.125, binomial sd ≈ 3.3e-4
        let frac = below_half as f64 / n as f64;
        assert!((frac - 0.125).abs() < 2e-3, "cdf {frac}");
    }

    #[test]
    fn statistical_mode_realizes_its_error() {
        let c = config(10);
        let mut rng = trial_rng(2, 0);
        for _ in 0..200 {
            let h = gaussian_matrix(2, 2, &mut rng);
            let (h_hat, e) = quantize_channel(&h, &c, QuantMode::Statistical, &mut rng).unwrap();
            let v = vectorize(&h);
            let dir = &v / C64::from(v.norm());
            assert!((h_hat.norm() - 1.0).abs() < 1e-12);
            assert!((1.0 - h_hat.dotc(&dir).norm_sqr() - e).abs() < 1e-10);
        }
    }

    #[test]
    fn statistical_mode_converges_with_many_bits() {
        let c = config(600);
        let mut rng = trial_rng(3, 0);
        let h = gaussian_matrix(2, 2, &mut rng);
        let (h_hat, e) = quantize_channel(&h, &c, QuantMode::Statistical, &mut rng).unwrap();
        assert!(e < 1e-40);
        let v = vectorize(&h);
        assert!((h_hat - &v / C64::from(v.norm())).norm() < 1e-12);
    }

    #[test]
    fn codebook_guard() {
        let c = config(17);
        let mut rng = trial_rng(4, 0);
        let h = gaussian_matrix(2, 2, &mut rng);
        assert!(matches!(
            quantize_channel(&h, &c, QuantMode::Codebook, &mut rng),
            Err(Error::CodebookTooLarge { bits: 17, .. })
        ));
    }

    #[test]
    fn one_bit_codebook_matches_cell_model_mean() {
        let c = config(1);
        let mut rng = trial_rng(5, 0);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let h = gaussian_matrix(2, 2, &mut rng);
            let (h_hat, e) = quantize_channel(&h, &c, QuantMode::Codebook, &mut rng).unwrap();
            assert!((h_hat.norm() - 1.0).abs() < 1e-12);
            sum += e;
        }
        let model = 0.75 * (-1.0f64 / 3.0).exp2();
        let mean = sum / n as f64;
        assert!((mean - model).abs() < 0.1 * model, "mean {mean} model {model}");
    }

    #[test]
    fn direct_links_stay_exact() {
        let c = config(8);
        let pl = wyner_path_loss(3, 0.3).unwrap();
        let real = sample_channels(&c, &pl, 1).unwrap();
        let csi = quantize_csi(&real, &c, QuantMode::Statistical, &mut trial_rng(1, 9)).unwrap();
        let design = csi.design_channels(&real);
        for k in 0..3 {
            assert!(csi.h_hat(k, k).is_none());
            assert_eq!(csi.error(k, k), 0.0);
            assert_eq!(design.get(k, k), real.channels.get(k, k));
            for i in (0..3).filter(|&i| i != k) {
                assert!(csi.error(k, i) > 0.0);
                assert!((design.get(k, i).norm() - real.channels.get(k, i).norm()).abs() < 1e-12);
            }
        }
    }
}
