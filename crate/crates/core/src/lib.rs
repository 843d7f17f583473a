//! Average transmission rate of cache-enabled interference alignment with
//! limited backhaul and quantized channel feedback.
//!
//! * [`model`]: system parameters, path loss, cache and backhaul descriptions.
//! * [`analytic`]: closed-form average rates, derivative and regime bounds.
//! * [`optimizer`]: closed-form Wyner-model rates and the choice of the number
//!   of transceiver pairs and feedback bits.
//! * [`montecarlo`]: link-level simulation used to check the analysis.
//! * [`cli`]: scenario files and the figure/table generators behind the binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod optimizer;

pub use error::{Error, Result};
