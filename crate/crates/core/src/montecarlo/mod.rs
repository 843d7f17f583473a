//! Link-level simulation: channel draws, limited-feedback CSI, interference
//! alignment and empirical rates.

mod channel;
mod estimate;
mod ia;
mod quantize;
mod sinr;

pub use channel::{
    complex_gaussian, gaussian_matrix, isotropic_orthogonal, isotropic_unit, random_orthonormal, sample_channels,
    sample_channels_with, trial_rng, CMatrix, CVector, ChannelRealization, ChannelSet, C64,
};
pub use estimate::{
    estimate_rates, kron_conj, residual_direction, validate_leakage_expectation, CsiModel, EmpiricalRates,
    LeakageEstimate, MeanEstimate, SimOptions,
};
pub use ia::{design_ia, IaOptions, IaSolution};
pub use quantize::{
    quantize_channel, quantize_csi, sample_quantization_error, sample_quantization_error_with, vectorize, QuantMode,
    QuantizedCsi, MAX_CODEBOOK_BITS,
};
pub use sinr::{compute_sinr, stream_powers, StreamPowers};
