//! Sweep generators behind the command-line subcommands. Every runner returns
//! typed rows; [`to_csv`] renders them with a unit-carrying header.

use log::{info, warn};

use super::config::{Scenario, Sweep};
use crate::analytic::{average_rate, average_transmission_rate, hit_probability, regime_bounds, RegimeInterval};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_rates, validate_leakage_expectation, SimOptions};
use crate::optimizer::{backhaul_budget_bits, csi_overhead_bits, optimize_bits, optimize_pairs, wyner_total_rate};

/// Catalog sizes drawn as separate series.
pub const CATALOG_SIZES: [f64; 3] = [10.0, 100.0, 1000.0];
/// Bit counts compared in the rate-versus-pairs sweep.
pub const BIT_SERIES: [u32; 2] = [10, 30];
/// CSI backhaul shares (Mb/s) compared in the maximum-rate sweep.
pub const CSI_SERIES_MBPS: [f64; 2] = [2.0, 20.0];
/// Steepness factors compared in the optimal-pairs sweep.
pub const ETA_SERIES: [f64; 3] = [1.1, 1.5, 3.0];

/// Floating-point cells use 17 significant digits in scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub trait CsvRow {
    const HEADER: &'static str;
    fn fields(&self) -> Vec<String>;
}

pub fn to_csv<R: CsvRow>(rows: &[R]) -> String {
    let mut out = String::from(R::HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.fields().join(","));
        out.push('\n');
    }
    out
}

fn sweep(scenario: &Scenario, default: Sweep) -> Result<Vec<f64>> {
    Ok(scenario.sweep_or(&default.var.clone(), default)?.points())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Row {
    pub pairs: usize,
    pub f0: f64,
    pub bits: u32,
    pub rate_mbps: f64,
}

impl CsvRow for Fig2Row {
    const HEADER: &'static str = "L,f0_files,B_bits,rate_mbps";
    fn fields(&self) -> Vec<String> {
        vec![
            self.pairs.to_string(),
            fmt_real(self.f0),
            self.bits.to_string(),
            fmt_real(self.rate_mbps),
        ]
    }
}

/// Total average transmission rate on the Wyner chain against the number of
/// pairs, for each catalog size and bit count.
pub fn run_fig2(scenario: &Scenario) -> Result<Vec<Fig2Row>> {
    let pairs = sweep(scenario, Sweep::new("L", 3.0, 14.0, 1.0)?)?;
    let base = scenario.system_config()?;
    let cache = scenario.cache()?;
    let bh = scenario.backhaul()?;
    let max_pairs = base.max_feasible_pairs(scenario.d);
    let mut rows = Vec::new();
    for &f0 in &CATALOG_SIZES {
        let cache = cache.with_f0(f0)?;
        for &bits in &BIT_SERIES {
            let config = base.with_quant_bits(bits)?;
            for &l in &pairs {
                if l < 2.0 || l.fract() != 0.0 {
                    return Err(Error::Config(format!("L sweep must hold integers >= 2, got {l}")));
                }
                let l = l as usize;
                if l > max_pairs {
                    info!("L = {l} omitted: alignment needs d(L+1) <= n_tx + n_rx");
                    continue;
                }
                rows.push(Fig2Row {
                    pairs: l,
                    f0,
                    bits,
                    rate_mbps: wyner_total_rate(&config, &cache, &bh, scenario.zeta, l)? / 1e6,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Row {
    pub eta: f64,
    pub f0: f64,
    pub rate_mbps: f64,
    pub eta_lo: f64,
    pub eta_hi: f64,
}

impl CsvRow for Fig3Row {
    const HEADER: &'static str = "eta,f0_files,rate_mbps,eta_lo,eta_hi";
    fn fields(&self) -> Vec<String> {
        [self.eta, self.f0, self.rate_mbps, self.eta_lo, self.eta_hi]
            .iter()
            .map(|&x| fmt_real(x))
            .collect()
    }
}

/// Average transmission rate of the scenario's user against its steepness
/// factor, with the operational regime bounds of each series.
pub fn run_fig3(scenario: &Scenario) -> Result<Vec<Fig3Row>> {
    let etas = sweep(scenario, Sweep::new("eta", 1.01, 4.0, 0.01)?)?;
    let config = scenario.system_config()?;
    let pl = scenario.path_loss()?;
    let bh = scenario.backhaul()?;
    let params = scenario.regime()?;
    let k = scenario.user;
    let mut rows = Vec::new();
    for &f0 in CATALOG_SIZES.iter().rev() {
        let cache = scenario.cache()?.with_f0(f0)?;
        let bounds = match regime_bounds(&config, &pl, &cache, &bh, &params, k) {
            Ok(b) => b,
            Err(e @ Error::RegimeLogDomain { .. }) => {
                warn!("f0 = {f0}: {e}");
                RegimeInterval {
                    eta_lo: f64::NAN,
                    eta_hi: f64::NAN,
                    valid: false,
                }
            }
            Err(e) => return Err(e),
        };
        for &eta in &etas {
            let cache = cache.with_eta(eta)?;
            rows.push(Fig3Row {
                eta,
                f0,
                rate_mbps: average_transmission_rate(&config, &pl, &cache, &bh, k)? / 1e6,
                eta_lo: bounds.eta_lo,
                eta_hi: bounds.eta_hi,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Row {
    pub eta: f64,
    pub f0: f64,
    pub c_csi_mbps: f64,
    /// NaN when no pair count is feasible.
    pub max_rate_mbps: f64,
    /// 0 when no pair count is feasible.
    pub l_opt: usize,
}

impl CsvRow for Fig4Row {
    const HEADER: &'static str = "eta,f0_files,c_csi_mbps,max_rate_mbps,l_opt";
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_real(self.eta),
            fmt_real(self.f0),
            fmt_real(self.c_csi_mbps),
            fmt_real(self.max_rate_mbps),
            self.l_opt.to_string(),
        ]
    }
}

/// `(l_opt, rate in Mb/s)`, or the `(0, NaN)` sentinel when nothing fits.
fn optimum_or_sentinel(scenario: &Scenario, f0: f64, eta: f64, c_csi_mbps: f64) -> Result<(usize, f64)> {
    let config = scenario.system_config()?;
    let cache = scenario.cache()?.with_f0(f0)?.with_eta(eta)?;
    let bh = scenario.backhaul()?.with_c_csi(c_csi_mbps * 1e6)?;
    match optimize_pairs(&config, &cache, &bh, scenario.zeta) {
        Ok(r) => Ok((r.l_opt, r.rate_at_opt / 1e6)),
        Err(e @ Error::NoFeasiblePairs(_)) => {
            warn!("f0 = {f0}, eta = {eta}, C_c = {c_csi_mbps} Mb/s: {e}");
            Ok((0, f64::NAN))
        }
        Err(e) => Err(e),
    }
}

/// Maximum total rate over the feasible pair counts against the steepness
/// factor, per catalog size and CSI backhaul share.
pub fn run_fig4(scenario: &Scenario) -> Result<Vec<Fig4Row>> {
    let etas = sweep(scenario, Sweep::new("eta", 1.05, 4.0, 0.05)?)?;
    let mut rows = Vec::new();
    for &f0 in &CATALOG_SIZES {
        for &c in CSI_SERIES_MBPS.iter().rev() {
            for &eta in &etas {
                let (l_opt, max_rate_mbps) = optimum_or_sentinel(scenario, f0, eta, c)?;
                rows.push(Fig4Row {
                    eta,
                    f0,
                    c_csi_mbps: c,
                    max_rate_mbps,
                    l_opt,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig5Row {
    pub c_csi_mbps: f64,
    pub eta: f64,
    /// 0 when no pair count is feasible.
    pub l_opt: usize,
}

impl CsvRow for Fig5Row {
    const HEADER: &'static str = "c_csi_mbps,eta,l_opt";
    fn fields(&self) -> Vec<String> {
        vec![fmt_real(self.c_csi_mbps), fmt_real(self.eta), self.l_opt.to_string()]
    }
}

/// Optimal number of pairs against the CSI backhaul share for several
/// steepness factors, at the scenario's catalog size.
pub fn run_fig5(scenario: &Scenario) -> Result<Vec<Fig5Row>> {
    let shares = sweep(scenario, Sweep::new("c_csi_mbps", 0.5, 20.0, 0.5)?)?;
    let mut rows = Vec::new();
    for &eta in ETA_SERIES.iter().rev() {
        for &c in &shares {
            let (l_opt, _) = optimum_or_sentinel(scenario, scenario.f0, eta, c)?;
            rows.push(Fig5Row {
                c_csi_mbps: c,
                eta,
                l_opt,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeRow {
    pub pairs: usize,
    pub csi_bits: u64,
    pub budget_bits: f64,
    pub within_budget: bool,
    pub rate_mbps: f64,
    pub optimal: bool,
}

impl CsvRow for OptimizeRow {
    const HEADER: &'static str = "L,csi_bits,budget_bits,within_budget,rate_mbps,optimal";
    fn fields(&self) -> Vec<String> {
        vec![
            self.pairs.to_string(),
            self.csi_bits.to_string(),
            fmt_real(self.budget_bits),
            u8::from(self.within_budget).to_string(),
            fmt_real(self.rate_mbps),
            u8::from(self.optimal).to_string(),
        ]
    }
}

/// Every pair count the antennas allow, with its CSI overhead, budget check
/// and Wyner total rate; the optimum is flagged.
pub fn run_optimize(scenario: &Scenario) -> Result<Vec<OptimizeRow>> {
    let config = scenario.system_config()?;
    let cache = scenario.cache()?;
    let bh = scenario.backhaul()?;
    let result = optimize_pairs(&config, &cache, &bh, scenario.zeta)?;
    info!(
        "L_opt = {} at {:.6} Mb/s, budget {:.3} bits per slot",
        result.l_opt,
        result.rate_at_opt / 1e6,
        result.budget_bits
    );
    match optimize_bits(&config, &cache, &bh) {
        Ok(b) => info!("largest B fitting the budget at L = {}: {b}", config.pairs()),
        Err(e) => info!("at L = {}: {e}", config.pairs()),
    }
    let budget = backhaul_budget_bits(&cache, &bh)?;
    (2..=config.max_feasible_pairs(scenario.d))
        .map(|l| {
            let csi_bits = csi_overhead_bits(l, scenario.bits);
            Ok(OptimizeRow {
                pairs: l,
                csi_bits,
                budget_bits: budget,
                within_budget: csi_bits as f64 <= budget,
                rate_mbps: wyner_total_rate(&config, &cache, &bh, scenario.zeta, l)? / 1e6,
                optimal: l == result.l_opt,
            })
        })
        .collect()
}

/// One comparison of a simulated quantity against its model value.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub metric: String,
    pub empirical: f64,
    pub std_err: f64,
    pub reference: f64,
    pub rel_gap: f64,
    /// Allowed `|empirical − reference|`.
    pub tolerance: f64,
    pub pass: bool,
}

impl CsvRow for ValidationRow {
    const HEADER: &'static str = "metric,empirical,std_err,reference,rel_gap,abs_tolerance,pass";
    fn fields(&self) -> Vec<String> {
        vec![
            self.metric.clone(),
            fmt_real(self.empirical),
            fmt_real(self.std_err),
            fmt_real(self.reference),
            fmt_real(self.rel_gap),
            fmt_real(self.tolerance),
            u8::from(self.pass).to_string(),
        ]
    }
}

impl ValidationRow {
    fn new(metric: String, empirical: f64, std_err: f64, reference: f64, tolerance: f64) -> Self {
        let gap = (empirical - reference).abs();
        Self {
            metric,
            empirical,
            std_err,
            reference,
            rel_gap: gap / reference.abs(),
            tolerance,
            pass: gap <= tolerance,
        }
    }
}

/// Relative tolerance on simulated against closed-form average rates.
pub const RATE_REL_TOL: f64 = 0.15;
/// Minimum fraction of trials whose alignment design must converge.
pub const MIN_CONVERGED_FRACTION: f64 = 0.99;
/// Largest admissible inter-stream to signal power ratio.
pub const MAX_ISI_RATIO: f64 = 1e-8;

/// Monte Carlo check of the scenario: leakage expectation, per-user wireless
/// and transmission rates, cache hit frequencies, alignment convergence and
/// residual inter-stream interference.
pub fn run_validate(scenario: &Scenario, trials: usize, seed: u64) -> Result<Vec<ValidationRow>> {
    if trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    let config = scenario.system_config()?;
    let pl = scenario.path_loss()?;
    let cache = scenario.cache()?;
    let bh = scenario.backhaul()?;

    let mut rows = Vec::new();
    let leak = validate_leakage_expectation(&config, trials, seed)?;
    rows.push(ValidationRow::new(
        "leakage_expectation".into(),
        leak.estimate.mean,
        leak.estimate.std_err,
        leak.target,
        3.0 * leak.estimate.std_err,
    ));

    let sim = estimate_rates(
        &config,
        &pl,
        &cache,
        &bh,
        trials,
        seed.wrapping_add(1),
        &SimOptions::default(),
    )?;
    let bw = config.bandwidth_hz();
    for k in 0..config.pairs() {
        let closed_form = average_rate(&config, &pl, k)? * bw / 1e6;
        rows.push(ValidationRow::new(
            format!("wireless_rate_mbps[{k}]"),
            sim.report.per_user_wireless[k] / 1e6,
            sim.wireless_std_err[k] / 1e6,
            closed_form,
            RATE_REL_TOL * closed_form,
        ));
    }
    for k in 0..config.pairs() {
        let model = average_transmission_rate(&config, &pl, &cache, &bh, k)? / 1e6;
        rows.push(ValidationRow::new(
            format!("transmission_rate_mbps[{k}]"),
            sim.report.per_user_transmission[k] / 1e6,
            sim.transmission_std_err[k] / 1e6,
            model,
            RATE_REL_TOL * model,
        ));
    }
    for k in 0..config.pairs() {
        let p = hit_probability(&cache, k)?;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        rows.push(ValidationRow::new(
            format!("hit_frequency[{k}]"),
            sim.hit_frequency[k],
            se,
            p,
            (4.0 * se).max(0.01),
        ));
    }
    let converged = 1.0 - sim.unconverged as f64 / trials as f64;
    rows.push(ValidationRow {
        metric: "ia_converged_fraction".into(),
        empirical: converged,
        std_err: 0.0,
        reference: 1.0,
        rel_gap: 1.0 - converged,
        tolerance: 1.0 - MIN_CONVERGED_FRACTION,
        pass: converged >= MIN_CONVERGED_FRACTION,
    });
    rows.push(ValidationRow {
        metric: "max_isi_ratio".into(),
        empirical: sim.max_isi_ratio,
        std_err: 0.0,
        reference: 0.0,
        rel_gap: f64::NAN,
        tolerance: MAX_ISI_RATIO,
        pass: sim.max_isi_ratio <= MAX_ISI_RATIO,
    });
    info!(
        "{} trials, mean alignment iterations {:.1}, mean cross-link gain {:.3e}",
        trials, sim.mean_iterations, sim.mean_cross_gain.mean
    );
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_format_has_17_significant_digits() {
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_real(88.0), "8.8000000000000000e1");
        assert_eq!(fmt_real(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn fig2_omits_pairs_beyond_antenna_limit() {
        let s: Scenario = "n_tx = 4\nn_rx = 4\nd = 2".parse().unwrap();
        let rows = run_fig2(&s).unwrap();
        assert!(rows.iter().all(|r| r.pairs == 3));
        assert_eq!(rows.len(), 6);
    }

    #[test]
    fn fig5_sentinel_when_budget_too_small() {
        let s: Scenario = "c_data_mbps = 0.001\nB = 200".parse().unwrap();
        let rows = run_fig5(&s).unwrap();
        let first = rows.iter().find(|r| r.c_csi_mbps == 0.5).unwrap();
        assert_eq!(first.l_opt, 0);
        let csv = to_csv(&rows);
        assert!(csv.starts_with("c_csi_mbps,eta,l_opt\n"));
    }

    #[test]
    fn optimize_flags_single_optimum() {
        let s: Scenario = "zeta = 0.05".parse().unwrap();
        let rows = run_optimize(&s).unwrap();
        assert_eq!(rows.len(), 13);
        let opt: Vec<_> = rows.iter().filter(|r| r.optimal).collect();
        assert_eq!(opt.len(), 1);
        assert_eq!(opt[0].pairs, 9);
        assert!(!rows[8].within_budget);
    }

    #[test]
    fn validate_rejects_zero_trials() {
        let s: Scenario = "n_tx = 2\nn_rx = 2\nd = 1\nL = 3\nB = 10".parse().unwrap();
        assert!(matches!(run_validate(&s, 0, 1), Err(Error::Config(_))));
    }
}
