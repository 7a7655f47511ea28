#![allow(dead_code)]

/// 10⁵ points on `[−10⁶, 10⁶]`: log-spaced magnitudes of both signs plus a
/// dense linear band around zero.
pub fn influence_grid() -> Vec<f64> {
    let mut xs = Vec::with_capacity(100_000);
    let logs = 30_000;
    for i in 0..logs {
        let m = 10f64.powf(-12.0 + 18.0 * i as f64 / (logs - 1) as f64);
        xs.push(m);
        xs.push(-m);
    }
    let band = 100_000 - xs.len() - 1;
    for i in 0..band {
        xs.push(-5.0 + 10.0 * i as f64 / (band - 1) as f64);
    }
    xs.push(0.0);
    xs.sort_by(f64::total_cmp);
    xs
}

/// Independent reimplementation: closed-form ψ and threshold, and a scan
/// over `m` with step `0.01` refined to `1e-4` at each boundary.
pub mod oracle {
    pub fn coefficient(a: f64) -> f64 {
        if a == 1.0 {
            return 0.5;
        }
        (a / (1.0 + a)).powf((1.0 + a) / 2.0) * ((1.0 - a) / a).powf((1.0 - a) / 2.0)
    }

    fn psi(a: f64, c: f64, x: f64) -> f64 {
        x.signum() * (1.0 + x.abs() + c * x.abs().powf(1.0 + a)).ln()
    }

    pub fn interval(a: f64, nu: f64, delta: f64, xs: &[f64], thetas: &[f64]) -> (f64, f64) {
        let c = coefficient(a);
        let r = c * nu * thetas.iter().map(|t| t.powf(1.0 + a)).sum::<f64>() + (2.0 / delta).ln();
        let g = |m: f64| {
            xs.iter()
                .zip(thetas)
                .map(|(x, t)| psi(a, c, t * (x - m)))
                .sum::<f64>()
        };
        let inside = |m: f64| g(m).abs() <= r;
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        let start = sorted[sorted.len() / 2];
        assert!(inside(start), "median should be inside");
        let edge = |dir: f64| {
            let mut m = start;
            while inside(m + dir * 0.01) {
                m += dir * 0.01;
            }
            let mut k = 0;
            while k < 100 && inside(m + dir * 1e-4 * (k + 1) as f64) {
                k += 1;
            }
            m + dir * 1e-4 * k as f64
        };
        (edge(-1.0), edge(1.0))
    }
}
