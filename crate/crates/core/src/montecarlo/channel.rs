use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::model::{check_dims, PathLossModel, SystemConfig};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Generator for trial `stream` of a run seeded with `seed`. Every trial owns
/// an independent ChaCha stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Circularly-symmetric `CN(0, 1)` sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // column-major fill
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Unit vector uniformly distributed on the complex sphere.
pub fn isotropic_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let g = CVector::from_fn(dim, |_, _| complex_gaussian(rng));
        let n = g.norm();
        if n > 1e-300 {
            return g / C64::from(n);
        }
    }
}

/// Unit vector isotropic in the orthogonal complement of the unit vector `x`.
pub fn isotropic_orthogonal<R: Rng + ?Sized>(x: &CVector, rng: &mut R) -> CVector {
    loop {
        let g = CVector::from_fn(x.len(), |_, _| complex_gaussian(rng));
        let proj = x.dotc(&g);
        let r = g - x * proj;
        let n = r.norm();
        if n > 1e-12 {
            return r / C64::from(n);
        }
    }
}

/// Random `n × d` matrix with orthonormal columns (Gram–Schmidt on a
/// Gaussian draw).
pub fn random_orthonormal<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> CMatrix {
    loop {
        let mut m = gaussian_matrix(n, d, rng);
        if orthonormalize(&mut m) {
            return m;
        }
    }
}

/// In-place modified Gram–Schmidt; false when the columns are (numerically)
/// dependent.
pub(crate) fn orthonormalize(m: &mut CMatrix) -> bool {
    for j in 0..m.ncols() {
        for p in 0..j {
            let proj = m.column(p).dotc(&m.column(j));
            let col_p = m.column(p).clone_owned();
            let mut col_j = m.column_mut(j);
            col_j -= col_p * proj;
        }
        let n = m.column(j).norm();
        if n < 1e-12 {
            return false;
        }
        m.column_mut(j).unscale_mut(n);
    }
    true
}

/// All `L × L` channel matrices `H_ki` (receiver `k`, transmitter `i`), each
/// `n_rx × n_tx`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pairs: usize,
    h: Vec<CMatrix>,
}

impl ChannelSet {
    pub fn from_fn(pairs: usize, mut f: impl FnMut(usize, usize) -> CMatrix) -> Self {
        let mut h = Vec::with_capacity(pairs * pairs);
        for k in 0..pairs {
            for i in 0..pairs {
                h.push(f(k, i));
            }
        }
        Self { pairs, h }
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// `H_ki`: transmitter `i` to receiver `k`.
    pub fn get(&self, k: usize, i: usize) -> &CMatrix {
        &self.h[k * self.pairs + i]
    }
}

/// One draw of every channel in the network together with its path loss.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub channels: ChannelSet,
    pub pl: PathLossModel,
}

/// I.i.d. `CN(0, 1)` channel matrices for every transmitter/receiver pair.
pub fn sample_channels(config: &SystemConfig, pl: &PathLossModel, seed: u64) -> Result<ChannelRealization> {
    sample_channels_with(config, pl, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_channels_with<R: Rng + ?Sized>(
    config: &SystemConfig,
    pl: &PathLossModel,
    rng: &mut R,
) -> Result<ChannelRealization> {
    check_dims(config, pl)?;
    let (nr, nt) = (config.n_rx(), config.n_tx());
    let channels = ChannelSet::from_fn(config.pairs(), |_, _| gaussian_matrix(nr, nt, rng));
    Ok(ChannelRealization {
        channels,
        pl: pl.clone(),
    })
}
