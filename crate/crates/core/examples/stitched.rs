//! Stitched sequences: epoch schedule, intervals and width bounds.

use catoni_cs::distributions::{HeavyTailDist, Sampler, SeedSpec};
use catoni_cs::stitching::{stitched_width_bound, StitchEpoch, StitchVariant, StitchedSequence};
use catoni_cs::CsParams;

fn main() -> catoni_cs::Result<()> {
    let params = CsParams::new(0.5, 5.0, 0.05)?;

    println!(
        "{:>3} {:>7} {:>10} {:>10} {:>10}",
        "k", "first_t", "delta_k", "theta_imp", "theta_wr"
    );
    for k in 1..=9 {
        let imp = StitchEpoch::new(k, &params, StitchVariant::Improved)?;
        let wr = StitchEpoch::new(k, &params, StitchVariant::WR)?;
        println!(
            "{k:>3} {:>7} {:>10.3e} {:>10.5} {:>10.5}",
            imp.first_t(),
            imp.delta_k,
            imp.theta_k,
            wr.theta_k
        );
    }

    let mut seq = StitchedSequence::new(params, StitchVariant::Improved)?;
    let mut sampler = Sampler::new(HeavyTailDist::StudentT2, SeedSpec::new(8, 0));
    println!(
        "\n{:>5} {:>3} {:>9} {:>9} {:>8} {:>7}",
        "t", "k", "lower", "upper", "bound", "applies"
    );
    for t in 1..=8000usize {
        seq.push(sampler.draw())?;
        if [21, 55, 148, 403, 1097, 2981, 8000].contains(&t) {
            let ci = seq.interval()?;
            let b = stitched_width_bound(t, &params, StitchVariant::Improved)?;
            println!(
                "{t:>5} {:>3} {:>9.4} {:>9.4} {:>8.4} {:>7}",
                seq.epoch()?.k,
                ci.lower,
                ci.upper,
                b.bound,
                b.applies
            );
        }
    }
    Ok(())
}
