//! Experiment runner: configuration, seeded Monte-Carlo runs, CSV output and
//! the command line.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod output;

pub use config::{
    default_nu, log_grid, stitched_grid, Experiment, ExperimentConfig, KeyValues, Method,
    DEFAULT_SEED,
};
pub use experiments::{
    linear_fit, run_certificate_audit, run_coverage_experiment, run_slope_experiment,
    run_stitched_experiment, run_width_experiment, wilson_interval, CertificateSummary,
    CoverageSummary, ExperimentRow, Procedure, SlopeEntry, ThetaRegime,
};
pub use output::{fmt_g6, summarize, CellSummary};
