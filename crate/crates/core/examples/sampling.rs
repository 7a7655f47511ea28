//! Seeded heavy-tailed streams and the moment oracle.

use catoni_cs::distributions::{central_moment, sample, HeavyTailDist, SeedSpec};

fn main() -> catoni_cs::Result<()> {
    for dist in HeavyTailDist::ALL {
        let xs = sample(dist, SeedSpec::new(42, 0), 1_000_000);
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let q = |p: f64| sorted[(p * (sorted.len() - 1) as f64) as usize];
        println!(
            "{dist}: mean {} sample mean {:.4} median {:.4} q01 {:.3} q99 {:.3} E|X-mu|^1.5 {:.5}",
            dist.mean(),
            xs.iter().sum::<f64>() / xs.len() as f64,
            q(0.5),
            q(0.01),
            q(0.99),
            central_moment(dist, 1.5)?
        );
    }
    // same seed and stream, same draws
    let a = sample(HeavyTailDist::StudentT2, SeedSpec::new(7, 3), 5);
    let b = sample(HeavyTailDist::StudentT2, SeedSpec::new(7, 3), 5);
    assert_eq!(a, b);
    println!("stream (7, 3): {a:?}");
    Ok(())
}
