//! Online intervals for a heavy-tailed stream, improved vs baseline.
//!
//! `cargo run --example running_interval -- [delta]`

use catoni_cs::distributions::{HeavyTailDist, Sampler, SeedSpec};
use catoni_cs::{ConfidenceSequence, CsParams, ThetaTuning};

fn main() -> catoni_cs::Result<()> {
    let delta: f64 = std::env::args()
        .nth(1)
        .map_or(Ok(0.05), |s| s.parse())
        .expect("delta must be a number");
    let params = CsParams::new(0.5, 5.0, delta)?;
    let mut improved = ConfidenceSequence::improved(params)?;
    let mut baseline = ConfidenceSequence::wang_ramdas(params, ThetaTuning::WangRamdasUnhalved)?;

    let mut sampler = Sampler::new(HeavyTailDist::CenteredPareto18, SeedSpec::new(1, 0));
    println!("{:>6} {:>22} {:>22}", "t", "improved", "baseline");
    for t in 1..=10_000usize {
        let x = sampler.draw();
        improved.push(x)?;
        baseline.push(x)?;
        if [10, 100, 1000, 10_000].contains(&t) {
            let (a, b) = (improved.interval()?, baseline.interval()?);
            println!(
                "{t:>6} [{:>9.4}, {:>9.4}] [{:>9.4}, {:>9.4}]",
                a.lower, a.upper, b.lower, b.upper
            );
        }
    }
    Ok(())
}
