use rayon::prelude::*;

use crate::confseq::{width_bound, ConfidenceInterval, CsParams, CsState, ThetaTuning};
use crate::distributions::{sample, SeedSpec};
use crate::error::{Error, Result};
use crate::influence::{pow_abs, InfluenceSpec};
use crate::stitching::{epoch_index, stitched_width_bound, StitchEpoch, StitchVariant};

use super::config::{Experiment, ExperimentConfig, Method};

/// One realized interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub experiment: Experiment,
    pub distribution: crate::distributions::HeavyTailDist,
    pub method: Method,
    pub alpha: f64,
    pub nu_alpha: f64,
    pub delta: f64,
    pub t: usize,
    pub rep: usize,
    pub seed: u64,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
}

/// A method bound to its parameters.
#[derive(Debug, Clone, Copy)]
pub struct Procedure {
    pub method: Method,
    pub params: CsParams,
    spec: InfluenceSpec,
    tuning: ThetaTuning,
}

impl Procedure {
    /// `improved_theta` and `wr_theta` are the scale rules of the two
    /// non-stitched methods; stitched methods ignore them.
    pub fn new(
        method: Method,
        params: CsParams,
        improved_theta: ThetaTuning,
        wr_theta: ThetaTuning,
    ) -> Result<Self> {
        params.validate()?;
        let a = params.alpha;
        let (spec, tuning) = match method {
            Method::Improved => (InfluenceSpec::tight(a)?, improved_theta),
            Method::WR => (InfluenceSpec::chen(a)?, wr_theta),
            Method::ImprovedStitched => (InfluenceSpec::tight(a)?, improved_theta),
            Method::WRStitched => (InfluenceSpec::chen(a)?, wr_theta),
        };
        Ok(Self {
            method,
            params,
            spec,
            tuning,
        })
    }

    pub fn from_config(config: &ExperimentConfig, method: Method, delta: f64) -> Result<Self> {
        Self::new(
            method,
            config.params(delta)?,
            config.improved_theta,
            config.wr_theta,
        )
    }

    pub fn spec(&self) -> &InfluenceSpec {
        &self.spec
    }

    fn variant(&self) -> Option<StitchVariant> {
        match self.method {
            Method::ImprovedStitched => Some(StitchVariant::Improved),
            Method::WRStitched => Some(StitchVariant::WR),
            _ => None,
        }
    }

    /// The nonrandom scale `θ_t` of a non-stitched method.
    pub fn theta(&self, t: usize) -> f64 {
        self.tuning.theta(t, &self.params)
    }

    /// Intervals at each of the increasing times `ts`, all computed on
    /// prefixes of `xs`.
    pub fn intervals_at(&self, xs: &[f64], ts: &[usize]) -> Result<Vec<ConfidenceInterval>> {
        let horizon = ts.last().copied().unwrap_or(0);
        if horizon > xs.len() {
            return Err(Error::domain(format!(
                "need {horizon} observations, have {}",
                xs.len()
            )));
        }
        let mut out = Vec::with_capacity(ts.len());
        match self.variant() {
            None => {
                let mut state = CsState::with_capacity(self.params.alpha, horizon)?;
                let mut next = 0;
                for (i, &x) in xs[..horizon].iter().enumerate() {
                    state.append(x, self.theta(i + 1))?;
                    while next < ts.len() && ts[next] == i + 1 {
                        out.push(state.interval(&self.spec, &self.params)?);
                        next += 1;
                    }
                }
            }
            Some(variant) => {
                // Epoch k reuses one constant-scale state; it is rebuilt from
                // the prefix whenever the epoch changes.
                let mut current: Option<(u32, CsState, CsParams)> = None;
                for &t in ts {
                    let k = epoch_index(t);
                    let fresh = !matches!(current, Some((ck, ref st, _)) if ck == k && st.t() <= t);
                    if fresh {
                        let epoch = StitchEpoch::new(k, &self.params, variant)?;
                        let state =
                            CsState::constant_theta(self.params.alpha, &xs[..t], epoch.theta_k)?;
                        current = Some((k, state, epoch.params(&self.params)?));
                    }
                    let (_, state, eparams) = current.as_mut().expect("set above");
                    let theta = state.thetas().first().copied().unwrap_or(1.0);
                    while state.t() < t {
                        state.append(xs[state.t()], theta)?;
                    }
                    out.push(state.interval(&self.spec, eparams)?);
                }
            }
        }
        Ok(out)
    }

    /// First time `t ≤ xs.len()` whose interval misses `mu`, or `None`.
    ///
    /// `mu ∈ CI_t` exactly when `|g_t(mu)| ≤ R_t`, so this needs running sums
    /// only, except for one recomputation per epoch for stitched methods.
    pub fn first_miscoverage(&self, xs: &[f64], mu: f64) -> Result<Option<usize>> {
        let a = self.params.alpha;
        let cnu = self.spec.c_alpha() * self.params.nu_alpha;
        match self.variant() {
            None => {
                let log_term = self.params.log_two_over_delta();
                let (mut g, mut s2) = (0.0, 0.0);
                for (i, &x) in xs.iter().enumerate() {
                    let theta = self.theta(i + 1);
                    g += self.spec.psi(theta * (x - mu));
                    s2 += pow_abs(theta, 1.0 + a);
                    if g.abs() > cnu * s2 + log_term {
                        return Ok(Some(i + 1));
                    }
                }
            }
            Some(variant) => {
                let mut epoch: Option<StitchEpoch> = None;
                let (mut g, mut s2, mut log_term) = (0.0, 0.0, 0.0);
                for t in 1..=xs.len() {
                    let k = epoch_index(t);
                    if epoch.map(|e| e.k) != Some(k) {
                        let e = StitchEpoch::new(k, &self.params, variant)?;
                        let tp = pow_abs(e.theta_k, 1.0 + a);
                        g = xs[..t - 1]
                            .iter()
                            .map(|&x| self.spec.psi(e.theta_k * (x - mu)))
                            .sum();
                        s2 = tp * (t - 1) as f64;
                        log_term = (2.0 / e.delta_k).ln();
                        epoch = Some(e);
                    }
                    let e = epoch.expect("set above");
                    g += self.spec.psi(e.theta_k * (xs[t - 1] - mu));
                    s2 += pow_abs(e.theta_k, 1.0 + a);
                    if g.abs() > cnu * s2 + log_term {
                        return Ok(Some(t));
                    }
                }
            }
        }
        Ok(None)
    }
}

fn stream(config: &ExperimentConfig, rep: usize) -> Vec<f64> {
    sample(
        config.distribution,
        SeedSpec::new(config.master_seed, rep as u64),
        config.horizon(),
    )
}

fn sort_rows(rows: &mut [ExperimentRow]) {
    rows.sort_by(|a, b| {
        (a.experiment, a.distribution, a.method)
            .cmp(&(b.experiment, b.distribution, b.method))
            .then(b.delta.total_cmp(&a.delta))
            .then(a.t.cmp(&b.t))
            .then(a.rep.cmp(&b.rep))
    });
}

fn run_paths(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let procedures: Vec<Procedure> = config
        .deltas
        .iter()
        .flat_map(|&d| config.methods.iter().map(move |&m| (m, d)))
        .map(|(m, d)| Procedure::from_config(config, m, d))
        .collect::<Result<_>>()?;
    let per_rep: Vec<Vec<ExperimentRow>> = (0..config.replications)
        .into_par_iter()
        .map(|rep| {
            // every method and δ sees the same stream
            let xs = stream(config, rep);
            let mut rows = Vec::with_capacity(procedures.len() * config.ts.len());
            for p in &procedures {
                for ci in p.intervals_at(&xs, &config.ts)? {
                    rows.push(ExperimentRow {
                        experiment: config.experiment,
                        distribution: config.distribution,
                        method: p.method,
                        alpha: config.alpha,
                        nu_alpha: config.nu_alpha,
                        delta: p.params.delta,
                        t: ci.t,
                        rep,
                        seed: config.master_seed,
                        lower: ci.lower,
                        upper: ci.upper,
                        width: ci.width(),
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ExperimentRow> = per_rep.into_iter().flatten().collect();
    sort_rows(&mut rows);
    Ok(rows)
}

/// Widths at each `(method, δ, t, rep)`. Used for Figure 1 and Table 2.
pub fn run_width_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    run_paths(config)
}

/// Widths of stitched sequences. Used for Figure 2.
pub fn run_stitched_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if let Some(m) = config.methods.iter().find(|m| !m.is_stitched()) {
        return Err(Error::validation(format!("method '{m}' is not stitched")));
    }
    run_paths(config)
}

/// Empirical anytime coverage of one `(method, δ)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageSummary {
    pub distribution: crate::distributions::HeavyTailDist,
    pub method: Method,
    pub delta: f64,
    pub horizon: usize,
    pub reps: usize,
    /// Replications whose interval contained the mean at every `t ≤ horizon`.
    pub covered: usize,
    pub rate: f64,
    pub wilson_lower: f64,
    pub wilson_upper: f64,
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let nf = n as f64;
    let p = k as f64 / nf;
    let denom = 1.0 + z * z / nf;
    let center = (p + z * z / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Checks `μ ∈ CI_t` for all `t ≤ horizon` on every replication.
pub fn run_coverage_experiment(config: &ExperimentConfig) -> Result<Vec<CoverageSummary>> {
    config.validate()?;
    if config.replications < 100 {
        return Err(Error::validation(
            "coverage audits need at least 100 replications",
        ));
    }
    let mu = config.distribution.mean();
    let procedures: Vec<Procedure> = config
        .methods
        .iter()
        .flat_map(|&m| config.deltas.iter().map(move |&d| (m, d)))
        .map(|(m, d)| Procedure::from_config(config, m, d))
        .collect::<Result<_>>()?;
    let hits: Vec<Vec<bool>> = (0..config.replications)
        .into_par_iter()
        .map(|rep| {
            let xs = stream(config, rep);
            procedures
                .iter()
                .map(|p| Ok(p.first_miscoverage(&xs, mu)?.is_none()))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;
    Ok(procedures
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let covered = hits.iter().filter(|h| h[j]).count();
            let (wilson_lower, wilson_upper) = wilson_interval(covered, config.replications);
            CoverageSummary {
                distribution: config.distribution,
                method: p.method,
                delta: p.params.delta,
                horizon: config.horizon(),
                reps: config.replications,
                covered,
                rate: covered as f64 / config.replications as f64,
                wilson_lower,
                wilson_upper,
            }
        })
        .collect())
}

/// How often realized widths exceed a deterministic width certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateSummary {
    pub method: Method,
    pub delta: f64,
    pub t: usize,
    /// Whether the certificate's sample-size condition holds at `t`.
    pub certified: bool,
    pub bound: f64,
    pub reps: usize,
    pub violations: usize,
    pub rate: f64,
    /// Violation probability the certificate allows.
    pub nominal: f64,
}

/// Audits the improved width bound (`Improved`) and the stitched bounds
/// (`ImprovedStitched`, `WRStitched`) against realized widths. `WR` has no
/// certificate and is rejected.
pub fn run_certificate_audit(config: &ExperimentConfig) -> Result<Vec<CertificateSummary>> {
    if config.methods.contains(&Method::WR) {
        return Err(Error::validation("the wr method has no width certificate"));
    }
    let rows = run_paths(config)?;
    let mut out = Vec::new();
    for &method in &config.methods {
        for &delta in &config.deltas {
            let p = Procedure::from_config(config, method, delta)?;
            for &t in &config.ts {
                let (certified, bound, nominal) = match p.variant() {
                    None => {
                        let thetas: Vec<f64> = (1..=t).map(|i| p.theta(i)).collect();
                        let wb = width_bound(&p.params, &thetas)?;
                        (wb.feasible, wb.bound, p.params.beta)
                    }
                    Some(v) => {
                        let sb = stitched_width_bound(t, &p.params, v)?;
                        (sb.applies, sb.bound, delta / 4.0)
                    }
                };
                let violations = rows
                    .iter()
                    .filter(|r| {
                        r.method == method && r.delta == delta && r.t == t && r.width > bound
                    })
                    .count();
                out.push(CertificateSummary {
                    method,
                    delta,
                    t,
                    certified,
                    bound,
                    reps: config.replications,
                    violations,
                    rate: violations as f64 / config.replications as f64,
                    nominal,
                });
            }
        }
    }
    Ok(out)
}

/// The five scale regimes of the rate table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaRegime {
    /// `θ ∝ 1/t`
    InverseT,
    /// `θ ∝ (log t / t)^{1/(1+α)}`
    LogOverT,
    /// `θ ∝ t^{−1/(1+α)}`
    Power,
    /// `θ ∝ (1/(t log t))^{1/(1+α)}`
    InverseTLog,
    /// `θ ∝ (1/(t log t log log t))^{1/(1+α)}`
    InverseTLogLog,
}

// Logs are floored at 1 so early scales stay finite and positive.
fn guarded_log(x: f64) -> f64 {
    x.ln().max(1.0)
}

impl ThetaRegime {
    pub const ALL: [ThetaRegime; 5] = [
        ThetaRegime::InverseT,
        ThetaRegime::LogOverT,
        ThetaRegime::Power,
        ThetaRegime::InverseTLog,
        ThetaRegime::InverseTLogLog,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ThetaRegime::InverseT => "inv_t",
            ThetaRegime::LogOverT => "log_over_t",
            ThetaRegime::Power => "power",
            ThetaRegime::InverseTLog => "inv_t_log",
            ThetaRegime::InverseTLogLog => "inv_t_log_loglog",
        }
    }

    /// `scale` times the regime's shape at time `t`.
    pub fn theta(&self, t: usize, alpha: f64, scale: f64) -> f64 {
        let tf = t as f64;
        let l = guarded_log(tf);
        let e = 1.0 / (1.0 + alpha);
        scale
            * match self {
                ThetaRegime::InverseT => 1.0 / tf,
                ThetaRegime::LogOverT => (l / tf).powf(e),
                ThetaRegime::Power => tf.powf(-e),
                ThetaRegime::InverseTLog => (1.0 / (tf * l)).powf(e),
                ThetaRegime::InverseTLogLog => (1.0 / (tf * l * guarded_log(l))).powf(e),
            }
    }

    /// Predicted width order as `(p, log_factor(t))` for `t^{−p} · log_factor`.
    pub fn predicted(&self, t: f64, alpha: f64) -> (f64, f64) {
        let l = t.ln();
        let p = alpha / (1.0 + alpha);
        match self {
            ThetaRegime::InverseT => (0.0, 1.0 / l),
            ThetaRegime::LogOverT => (p, l.powf((2.0 * alpha + 1.0) / (1.0 + alpha))),
            ThetaRegime::Power => (p, l.powf(p)),
            ThetaRegime::InverseTLog | ThetaRegime::InverseTLogLog => {
                (p, l.powf(1.0 / (1.0 + alpha)))
            }
        }
    }

    pub fn predicted_rate(&self, t: f64, alpha: f64) -> f64 {
        let (p, f) = self.predicted(t, alpha);
        t.powf(-p) * f
    }
}

/// Least-squares fit `y ≈ a + b x`, returning `(b, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, r2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeEntry {
    pub regime: ThetaRegime,
    pub alpha: f64,
    pub ts: Vec<usize>,
    pub mean_widths: Vec<f64>,
    /// Slope of `log(width)` on `log(t)`.
    pub raw_slope: f64,
    /// Slope of `log(width / log_factor(t))` on `log(t)`.
    pub adjusted_slope: f64,
    /// `−p` of the predicted order.
    pub expected_slope: f64,
    /// Slope of `log(width)` on `log(predicted rate)`; `1` when the rate is right.
    pub rate_slope: f64,
    pub r_squared: f64,
}

impl SlopeEntry {
    pub fn within(&self, tol: f64) -> bool {
        (self.adjusted_slope - self.expected_slope).abs() <= tol
    }
}

/// Fits mean improved widths against each regime's predicted rate. The scale
/// of every regime is the `θ_1` of the improved tuning, so all start alike.
pub fn run_slope_experiment(
    config: &ExperimentConfig,
    regimes: &[ThetaRegime],
) -> Result<Vec<SlopeEntry>> {
    config.validate()?;
    if config.ts.len() < 3 || config.ts[0] < 3 {
        return Err(Error::validation(
            "slope fits need at least three times, all ≥ 3",
        ));
    }
    let delta = config.deltas[0];
    let params = config.params(delta)?;
    let spec = InfluenceSpec::tight(config.alpha)?;
    let scale = ThetaTuning::Improved.theta(1, &params);
    let a = config.alpha;

    let widths: Vec<Vec<Vec<f64>>> = (0..config.replications)
        .into_par_iter()
        .map(|rep| {
            let xs = stream(config, rep);
            regimes
                .iter()
                .map(|regime| {
                    let mut state = CsState::with_capacity(a, config.horizon())?;
                    let mut out = Vec::with_capacity(config.ts.len());
                    let mut next = 0;
                    for (i, &x) in xs.iter().enumerate() {
                        state.append(x, regime.theta(i + 1, a, scale))?;
                        if config.ts[next] == i + 1 {
                            out.push(state.interval(&spec, &params)?.width());
                            next += 1;
                            if next == config.ts.len() {
                                break;
                            }
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let log_t: Vec<f64> = config.ts.iter().map(|&t| (t as f64).ln()).collect();
    Ok(regimes
        .iter()
        .enumerate()
        .map(|(j, &regime)| {
            let mean_widths: Vec<f64> = (0..config.ts.len())
                .map(|i| widths.iter().map(|w| w[j][i]).sum::<f64>() / config.replications as f64)
                .collect();
            let log_w: Vec<f64> = mean_widths.iter().map(|w| w.ln()).collect();
            let adjusted: Vec<f64> = config
                .ts
                .iter()
                .zip(&log_w)
                .map(|(&t, lw)| lw - regime.predicted(t as f64, a).1.ln())
                .collect();
            let log_rate: Vec<f64> = config
                .ts
                .iter()
                .map(|&t| regime.predicted_rate(t as f64, a).ln())
                .collect();
            let (raw_slope, _) = linear_fit(&log_t, &log_w);
            let (adjusted_slope, _) = linear_fit(&log_t, &adjusted);
            let (rate_slope, r_squared) = linear_fit(&log_rate, &log_w);
            SlopeEntry {
                regime,
                alpha: a,
                ts: config.ts.clone(),
                mean_widths,
                raw_slope,
                adjusted_slope,
                expected_slope: -regime.predicted(2.0, a).0,
                rate_slope,
                r_squared,
            }
        })
        .collect())
}
