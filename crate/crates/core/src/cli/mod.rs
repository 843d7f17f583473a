//! Scenario files and the sweep generators driven by the `iacache` binary.

mod config;
mod figures;

pub use config::{Scenario, Sweep};
pub use figures::{
    fmt_real, run_fig2, run_fig3, run_fig4, run_fig5, run_optimize, run_validate, to_csv, CsvRow, Fig2Row, Fig3Row,
    Fig4Row, Fig5Row, OptimizeRow, ValidationRow, BIT_SERIES, CATALOG_SIZES, CSI_SERIES_MBPS, ETA_SERIES,
    MAX_ISI_RATIO, MIN_CONVERGED_FRACTION, RATE_REL_TOL,
};
