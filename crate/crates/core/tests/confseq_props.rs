use catoni_cs::confseq::{supermartingale_factor, supermartingale_factor_minus, ENDPOINT_RESIDUAL};
use catoni_cs::distributions::{sample, HeavyTailDist, SeedSpec};
use catoni_cs::{theta_improved, CsParams, CsState, InfluenceSpec};
use proptest::prelude::*;

mod common;
use common::oracle;

fn state_strategy() -> impl Strategy<Value = (f64, Vec<(f64, f64)>)> {
    (
        prop::sample::select(vec![0.2, 0.5, 0.8, 1.0]),
        prop::collection::vec((-50.0f64..50.0, 0.05f64..2.0), 1..50),
    )
}

fn build(alpha: f64, samples: &[(f64, f64)]) -> CsState {
    let mut s = CsState::new(alpha).unwrap();
    for &(x, th) in samples {
        s.append(x, th).unwrap();
    }
    s
}

fn specs(alpha: f64) -> [InfluenceSpec; 2] {
    [
        InfluenceSpec::tight(alpha).unwrap(),
        InfluenceSpec::chen(alpha).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn g_strictly_decreasing((alpha, samples) in state_strategy(), m0 in -60.0f64..60.0) {
        let s = build(alpha, &samples);
        for spec in specs(alpha) {
            let mut prev = s.g(&spec, m0);
            for i in 1..40 {
                let v = s.g(&spec, m0 + 0.25 * i as f64);
                prop_assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn endpoints_solve_threshold((alpha, samples) in state_strategy(), delta in 0.001f64..0.5) {
        let s = build(alpha, &samples);
        let p = CsParams::new(alpha, 3.0, delta).unwrap();
        for spec in specs(alpha) {
            let r = s.threshold(&spec, &p);
            let ci = s.interval(&spec, &p).unwrap();
            let tol = ENDPOINT_RESIDUAL * (1.0 + r);
            prop_assert!(ci.lower < ci.upper);
            prop_assert!((s.g(&spec, ci.lower) - r).abs() <= tol);
            prop_assert!((s.g(&spec, ci.upper) + r).abs() <= tol);
        }
    }

    #[test]
    fn intervals_nest_in_delta((alpha, samples) in state_strategy(), d1 in 0.01f64..0.9, f in 0.01f64..0.99) {
        let s = build(alpha, &samples);
        let d2 = d1 * f;
        for spec in specs(alpha) {
            let wide = s.interval(&spec, &CsParams::new(alpha, 2.0, d2).unwrap()).unwrap();
            let narrow = s.interval(&spec, &CsParams::new(alpha, 2.0, d1).unwrap()).unwrap();
            prop_assert!(wide.lower <= narrow.lower && narrow.upper <= wide.upper);
        }
    }

    #[test]
    fn estimator_inside_interval((alpha, samples) in state_strategy(), delta in 0.001f64..0.9) {
        let s = build(alpha, &samples);
        for spec in specs(alpha) {
            let est = s.catoni_estimate(&spec).unwrap();
            let ci = s.interval(&spec, &CsParams::new(alpha, 1.0, delta).unwrap()).unwrap();
            prop_assert!(ci.lower < est && est < ci.upper);
        }
    }

    #[test]
    fn translation_equivariance((alpha, samples) in state_strategy(), shift in -100.0f64..100.0) {
        // dyadic shifts keep x + c exact for these magnitudes
        let shift = (shift * 64.0).round() / 64.0;
        let s = build(alpha, &samples);
        let moved: Vec<(f64, f64)> = samples.iter().map(|&(x, th)| (x + shift, th)).collect();
        let m = build(alpha, &moved);
        let p = CsParams::new(alpha, 2.0, 0.05).unwrap();
        for spec in specs(alpha) {
            let a = s.interval(&spec, &p).unwrap();
            let b = m.interval(&spec, &p).unwrap();
            prop_assert!((b.lower - a.lower - shift).abs() <= 1e-9, "{} vs {}", b.lower - a.lower, shift);
            prop_assert!((b.upper - a.upper - shift).abs() <= 1e-9);
        }
    }
}

#[test]
fn oracle_coefficient_agrees() {
    for a in [0.1, 0.5, 0.9, 1.0] {
        let c = catoni_cs::tight_coefficient(a).unwrap();
        assert!((c - oracle::coefficient(a)).abs() < 1e-15);
    }
}

#[test]
fn grid_search_oracle_matches_endpoints() {
    let (alpha, nu) = (0.5, 5.0);
    let spec = InfluenceSpec::tight(alpha).unwrap();
    for inst in 0..50u64 {
        let t = 5 + (inst as usize * 37) % 196;
        let delta = [0.2, 0.05, 0.01][inst as usize % 3];
        let p = CsParams::new(alpha, nu, delta).unwrap();
        let xs = sample(HeavyTailDist::CenteredPareto18, SeedSpec::new(7, inst), t);
        let thetas: Vec<f64> = (1..=t).map(|i| theta_improved(i, &p)).collect();
        let mut s = CsState::new(alpha).unwrap();
        for (&x, &th) in xs.iter().zip(&thetas) {
            s.append(x, th).unwrap();
        }
        let ci = s.interval(&spec, &p).unwrap();
        let (lo, hi) = oracle::interval(alpha, nu, delta, &xs, &thetas);
        assert!(
            (ci.lower - lo).abs() <= 2e-4,
            "instance {inst}: lower {} vs {lo}",
            ci.lower
        );
        assert!(
            (ci.upper - hi).abs() <= 2e-4,
            "instance {inst}: upper {} vs {hi}",
            ci.upper
        );
    }
}

#[test]
fn supermartingale_increment_has_mean_at_most_one() {
    let (alpha, nu, theta) = (0.5, 5.0, 0.3);
    let p = CsParams::new(alpha, nu, 0.05).unwrap();
    let spec = InfluenceSpec::tight(alpha).unwrap();
    let xs = sample(
        HeavyTailDist::CenteredPareto18,
        SeedSpec::new(11, 0),
        1_000_000,
    );
    for factor in [supermartingale_factor, supermartingale_factor_minus] {
        let vals: Vec<f64> = xs
            .iter()
            .map(|&x| factor(&spec, &p, theta, x, 0.0))
            .collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!(mean <= 1.0 + 3.0 * se, "mean {mean} se {se}");
    }
}
