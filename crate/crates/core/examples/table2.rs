//! Mean widths over a δ × t grid for both distributions.
//!
//! `cargo run --release --example table2 -- [reps]` (200 reproduces the full table)

use catoni_cs::distributions::HeavyTailDist;
use catoni_cs::harness::{run_width_experiment, summarize, Experiment, ExperimentConfig, Method};

fn main() -> catoni_cs::Result<()> {
    let reps: usize = std::env::args()
        .nth(1)
        .map_or(Ok(20), |s| s.parse())
        .expect("reps must be an integer");
    for dist in HeavyTailDist::ALL {
        let mut config = ExperimentConfig::defaults(Experiment::Table2, dist);
        config.replications = reps;
        let cells = summarize(&run_width_experiment(&config)?);
        println!("{dist} (nu = {}, {reps} reps)", config.nu_alpha);
        println!(
            "{:>6} {:>28} {:>28}",
            "delta", "improved t=1e2,1e3,1e4", "wr"
        );
        for &delta in &config.deltas {
            let row = |m: Method| {
                cells
                    .iter()
                    .filter(|c| c.method == m && c.delta == delta)
                    .map(|c| format!("{:.4}", c.mean_width))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!(
                "{delta:>6} {:>28} {:>28}",
                row(Method::Improved),
                row(Method::WR)
            );
        }
    }
    Ok(())
}
