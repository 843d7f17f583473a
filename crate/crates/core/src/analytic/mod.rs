//! Closed-form rate analysis.

mod rates;
mod special;

pub use rates::{
    average_rate, average_transmission_rate, beta, hit_probability, hit_probability_of, miss_probability,
    miss_probability_of, rate_derivative_eta, rate_derivative_from_rates, regime_bounds, regime_bounds_from_rates,
    total_average_rate, transmission_mixture, user_rates, RateReport, RegimeInterval, UserRates,
};
pub use special::{exp_integral_e1, scaled_e1};
