//! Width paths for both methods, written as plot-ready CSV.
//!
//! `cargo run --release --example figure1 -- [out_dir]`

use std::path::PathBuf;

use catoni_cs::distributions::HeavyTailDist;
use catoni_cs::harness::output::write_plot;
use catoni_cs::harness::{run_width_experiment, summarize, Experiment, ExperimentConfig};

fn main() -> catoni_cs::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "results".into()));
    std::fs::create_dir_all(&out)?;
    for dist in HeavyTailDist::ALL {
        let mut config = ExperimentConfig::defaults(Experiment::Figure1, dist);
        config.replications = 50;
        let cells = summarize(&run_width_experiment(&config)?);
        let path = out.join(format!("figure1_{dist}_plot.csv"));
        write_plot(&path, &cells)?;
        println!("wrote {} ({} cells)", path.display(), cells.len());
    }
    Ok(())
}
