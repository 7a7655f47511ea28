//! Anytime coverage and width-certificate audits.

use catoni_cs::distributions::{central_moment, HeavyTailDist};
use catoni_cs::harness::{
    run_certificate_audit, run_coverage_experiment, Experiment, ExperimentConfig, Method,
};

fn main() -> catoni_cs::Result<()> {
    for dist in HeavyTailDist::ALL {
        let mut config = ExperimentConfig::defaults(Experiment::Coverage, dist);
        // the audit is only meaningful when ν really bounds the moment
        config.nu_alpha = config.nu_alpha.max(central_moment(dist, 1.5)?);
        config.replications = 200;
        println!("{dist} nu = {:.4}", config.nu_alpha);
        for s in run_coverage_experiment(&config)? {
            println!(
                "  coverage {:<18} delta {:<5} {:.3} [{:.3}, {:.3}]",
                s.method.to_string(),
                s.delta,
                s.rate,
                s.wilson_lower,
                s.wilson_upper
            );
        }

        config.methods = vec![
            Method::Improved,
            Method::ImprovedStitched,
            Method::WRStitched,
        ];
        config.ts = vec![1000, 2000];
        for s in run_certificate_audit(&config)? {
            println!(
                "  bound    {:<18} delta {:<5} t {:<5} certified {:<5} bound {:.4} violations {}/{}",
                s.method.to_string(),
                s.delta,
                s.t,
                s.certified,
                s.bound,
                s.violations,
                s.reps
            );
        }
    }
    Ok(())
}
