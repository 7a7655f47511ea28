//! Log-log width slopes for the five scale regimes.

use catoni_cs::distributions::HeavyTailDist;
use catoni_cs::harness::{
    log_grid, run_slope_experiment, Experiment, ExperimentConfig, ThetaRegime,
};

fn main() -> catoni_cs::Result<()> {
    let mut config = ExperimentConfig::defaults(Experiment::Slope, HeavyTailDist::CenteredPareto18);
    config.ts = log_grid(100, 100_000, 3);
    config.replications = 4;
    println!(
        "{:<18} {:>8} {:>9} {:>9} {:>7}",
        "regime", "raw", "adjusted", "expected", "r2"
    );
    for e in run_slope_experiment(&config, &ThetaRegime::ALL)? {
        println!(
            "{:<18} {:>8.4} {:>9.4} {:>9.4} {:>7.4}",
            e.regime.name(),
            e.raw_slope,
            e.adjusted_slope,
            e.expected_slope,
            e.r_squared
        );
    }
    Ok(())
}
