use std::collections::BTreeMap;

use catoni_cs::distributions::HeavyTailDist;
use catoni_cs::harness::{
    run_coverage_experiment, run_stitched_experiment, run_width_experiment, stitched_grid,
    summarize, Experiment, ExperimentConfig, Method,
};
use catoni_cs::stitching::{
    b_alpha, delta_budget, epoch_theta, schedule_inequality_check, stitched_width_bound,
    StitchVariant,
};
use catoni_cs::CsParams;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn params() -> CsParams {
    CsParams::new(0.5, 5.0, 0.05).unwrap()
}

const VARIANTS: [StitchVariant; 2] = [StitchVariant::Improved, StitchVariant::WR];

#[test]
fn schedule_inequality_random_times() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for variant in VARIANTS {
        for k in 1..=12u32 {
            let (lo, hi) = ((k as f64).exp(), ((k + 1) as f64).exp());
            for _ in 0..20 {
                let t = lo + (hi - lo) * rng.random::<f64>();
                assert!(
                    schedule_inequality_check(k, t, &params(), variant).unwrap(),
                    "{variant:?} k={k} t={t}"
                );
            }
        }
    }
}

#[test]
fn budget_partial_sums_stay_below_delta() {
    let limit = 0.05 * (std::f64::consts::PI.powi(2) / 6.0 - 1.0);
    let mut prev = 0.0;
    for k in 0..2000 {
        let b = delta_budget(k, 0.05);
        assert!(b > prev && b < limit);
        prev = b;
    }
}

#[test]
fn epoch_scales_strictly_decrease() {
    for variant in VARIANTS {
        for k in 1..40 {
            assert!(
                epoch_theta(k + 1, &params(), variant).unwrap()
                    < epoch_theta(k, &params(), variant).unwrap()
            );
        }
    }
}

#[test]
fn bound_rate_after_log_correction() {
    let p = params();
    let a = p.alpha;
    let ts: Vec<f64> = (0..=30)
        .map(|i| 10f64.powf(3.0 + i as f64 / 10.0))
        .collect();
    let x: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    for variant in VARIANTS {
        let y: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let bound = stitched_width_bound(t as usize, &p, variant).unwrap().bound;
                let correction = 2.0 * (t.ln() + 2.0).ln() + (2.0 / p.delta).ln();
                bound.ln() - a / (1.0 + a) * correction.ln()
            })
            .collect();
        let (slope, _) = catoni_cs::harness::linear_fit(&x, &y);
        assert!(
            (slope + a / (1.0 + a)).abs() <= 0.02,
            "{variant:?}: {slope}"
        );
    }
    assert!(b_alpha(a, 1e6, 0.05) < b_alpha(a, 1e3, 0.05));
}

#[test]
fn stitched_anytime_coverage() {
    let mut c = ExperimentConfig::defaults(Experiment::Coverage, HeavyTailDist::CenteredPareto18);
    c.ts = vec![3000];
    c.deltas = vec![0.05];
    c.methods = vec![Method::ImprovedStitched, Method::WRStitched];
    for r in run_coverage_experiment(&c).unwrap() {
        assert!(r.rate >= 1.0 - 0.05 - 0.03, "{}: {}", r.method, r.rate);
    }
}

fn mean_widths(rows: &[catoni_cs::harness::ExperimentRow]) -> BTreeMap<(Method, usize), f64> {
    summarize(rows)
        .into_iter()
        .map(|c| ((c.method, c.t), c.mean_width))
        .collect()
}

#[test]
fn figure2_shape() {
    let mut c = ExperimentConfig::defaults(Experiment::Figure2, HeavyTailDist::CenteredPareto18);
    c.replications = 40;
    c.ts = stitched_grid(3000);
    let stitched = mean_widths(&run_stitched_experiment(&c).unwrap());
    let boundaries: Vec<usize> = (2..10).map(|k| (k as f64).exp().ceil() as usize).collect();

    for m in [Method::ImprovedStitched, Method::WRStitched] {
        let path: Vec<(usize, f64)> = c.ts.iter().map(|&t| (t, stitched[&(m, t)])).collect();
        for w in path.windows(2) {
            if w[1].1 > w[0].1 {
                assert!(
                    boundaries.contains(&w[1].0),
                    "{m}: width rises at t={} off a boundary",
                    w[1].0
                );
            }
        }
    }
    for &t in c.ts.iter().filter(|&&t| t >= 100) {
        assert!(
            stitched[&(Method::ImprovedStitched, t)] < stitched[&(Method::WRStitched, t)],
            "t={t}"
        );
    }

    let mut plain = c.clone();
    plain.experiment = Experiment::Figure1;
    plain.methods = vec![Method::Improved];
    let plain = mean_widths(&run_width_experiment(&plain).unwrap());
    // right after each epoch change the stitched interval is wider; late in
    // an epoch it can dip below the plain one
    for &t in &boundaries[..6] {
        assert!(
            stitched[&(Method::ImprovedStitched, t)] > plain[&(Method::Improved, t)],
            "t={t}"
        );
    }
    let wider =
        c.ts.iter()
            .filter(|&&t| stitched[&(Method::ImprovedStitched, t)] > plain[&(Method::Improved, t)])
            .count();
    assert!(2 * wider > c.ts.len(), "{wider} of {}", c.ts.len());
}
