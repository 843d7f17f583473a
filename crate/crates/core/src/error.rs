use thiserror::Error;

/// Errors produced by the rate models, the optimizer and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range for {len} {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    /// The backhaul data rate of a user is not below its wireless rate, so the
    /// transmission-rate mixture is outside its validity domain.
    #[error("user {user}: per-link data backhaul {c_kd} b/s is not below the wireless rate {wireless} b/s")]
    BackhaulNotLimiting { user: usize, c_kd: f64, wireless: f64 },

    #[error("regime bound `{bound}` undefined: logarithm argument {argument} is not positive")]
    RegimeLogDomain { bound: &'static str, argument: f64 },

    #[error("no feasible pair count: {0}")]
    NoFeasiblePairs(String),

    #[error("no feasible bit count: {0}")]
    NoFeasibleBits(String),

    #[error("interference alignment infeasible: n_tx + n_rx = {antennas} < d(L+1) = {required}")]
    IaInfeasible { antennas: usize, required: usize },

    #[error("codebook quantization limited to B <= {max} bits, got {bits}")]
    CodebookTooLarge { bits: u32, max: u32 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
