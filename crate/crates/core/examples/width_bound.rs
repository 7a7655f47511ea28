//! Deterministic width certificate vs realized widths.

use catoni_cs::distributions::{sample, HeavyTailDist, SeedSpec};
use catoni_cs::{theta_improved, width_bound, ConfidenceSequence, CsParams};

fn main() -> catoni_cs::Result<()> {
    let params = CsParams::new(0.5, 5.0, 0.05)?;
    let xs = sample(HeavyTailDist::CenteredPareto18, SeedSpec::new(3, 0), 20_000);
    let mut cs = ConfidenceSequence::improved(params)?;
    let mut thetas = Vec::new();

    println!(
        "{:>6} {:>9} {:>10} {:>10}",
        "t", "feasible", "bound", "width"
    );
    for (i, &x) in xs.iter().enumerate() {
        let t = i + 1;
        cs.push(x)?;
        thetas.push(theta_improved(t, &params));
        if [50, 200, 1000, 5000, 20_000].contains(&t) {
            let wb = width_bound(&params, &thetas)?;
            println!(
                "{t:>6} {:>9} {:>10.4} {:>10.4}",
                wb.feasible,
                wb.bound,
                cs.interval()?.width()
            );
        }
    }
    Ok(())
}
