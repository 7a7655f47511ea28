//! Stitched confidence sequences.
//!
//! Time is cut into epochs `[e^k, e^{k+1})`, `k = 1, 2, …`. Epoch `k` spends
//! error budget `δ_k = δ/(k+2)²` and uses the constant scale
//!
//! ```text
//!     Θ_k = (2 log(2/δ_k) / (α L e^{k+1}))^{1/(1+α)},
//! ```
//!
//! where `L = (1+u^{−α}) C_α ν_α` for the improved sequence and
//! `L = 5ν_α/(1+α)` for the Wang–Ramdas baseline. At time `t` in epoch `k` the
//! stitched interval is the constant-scale interval with `θ_i = Θ_k` for every
//! `i ≤ t`, evaluated at level `δ_k`. Since `Σ_{k≥0} δ_k < δ` the union bound
//! keeps the whole sequence at level `1 − δ`; `t ∈ {1, 2}` is served by epoch 1.

use std::f64::consts::E;

use crate::confseq::{ConfidenceInterval, CsParams, CsState};
use crate::error::{Error, Result};
use crate::influence::{chen_coefficient, tight_coefficient, InfluenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StitchVariant {
    Improved,
    WR,
}

impl StitchVariant {
    pub fn influence(&self, alpha: f64) -> Result<InfluenceSpec> {
        match self {
            StitchVariant::Improved => InfluenceSpec::tight(alpha),
            StitchVariant::WR => InfluenceSpec::chen(alpha),
        }
    }
}

/// One block of the stitched schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StitchEpoch {
    pub k: u32,
    /// `e^k`
    pub t_k: f64,
    /// `δ/(k+2)²`
    pub delta_k: f64,
    /// `Θ_k`
    pub theta_k: f64,
    pub variant: StitchVariant,
}

impl StitchEpoch {
    pub fn new(k: u32, params: &CsParams, variant: StitchVariant) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("epochs are numbered from 1"));
        }
        Ok(Self {
            k,
            t_k: (k as f64).exp(),
            delta_k: epoch_delta(k, params.delta),
            theta_k: epoch_theta(k, params, variant)?,
            variant,
        })
    }

    /// First integer time served by this epoch.
    pub fn first_t(&self) -> usize {
        if self.k == 1 {
            1
        } else {
            self.t_k.ceil() as usize
        }
    }

    /// Parameters with `δ` replaced by this epoch's `δ_k`.
    pub fn params(&self, params: &CsParams) -> Result<CsParams> {
        params.with_delta(self.delta_k)
    }
}

/// `δ/(k+2)²`.
pub fn epoch_delta(k: u32, delta: f64) -> f64 {
    let d = k as f64 + 2.0;
    delta / (d * d)
}

/// `Σ_{k=0}^{K} δ/(k+2)²`, always below `δ(π²/6 − 1)`.
pub fn delta_budget(last_k: u32, delta: f64) -> f64 {
    (0..=last_k).map(|k| epoch_delta(k, delta)).sum()
}

/// Index `k ≥ 1` with `e^k ≤ t < e^{k+1}`; times below `e` map to 1.
pub fn epoch_index(t: usize) -> u32 {
    let tf = t as f64;
    let mut k = tf.ln().floor().max(1.0) as u32;
    while k > 1 && (k as f64).exp() > tf {
        k -= 1;
    }
    while ((k + 1) as f64).exp() <= tf {
        k += 1;
    }
    k
}

pub fn epoch_of(t: usize, params: &CsParams, variant: StitchVariant) -> Result<StitchEpoch> {
    if t == 0 {
        return Err(Error::domain("time starts at 1"));
    }
    StitchEpoch::new(epoch_index(t), params, variant)
}

/// The constant `L` of the variant.
pub fn schedule_constant(params: &CsParams, variant: StitchVariant) -> Result<f64> {
    Ok(match variant {
        StitchVariant::Improved => {
            params.split_factor() * tight_coefficient(params.alpha)? * params.nu_alpha
        }
        StitchVariant::WR => 5.0 * params.nu_alpha / (1.0 + params.alpha),
    })
}

/// `Θ_k = (2 log(2/δ_k) / (α L e^{k+1}))^{1/(1+α)}`.
pub fn epoch_theta(k: u32, params: &CsParams, variant: StitchVariant) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("epochs are numbered from 1"));
    }
    let a = params.alpha;
    let l = schedule_constant(params, variant)?;
    let dk = epoch_delta(k, params.delta);
    Ok((2.0 * (2.0 / dk).ln() / (a * l * ((k + 1) as f64).exp())).powf(1.0 / (1.0 + a)))
}

/// The stitched interval at time `t` over the first `t` observations.
pub fn stitched_interval(
    xs: &[f64],
    t: usize,
    params: &CsParams,
    variant: StitchVariant,
) -> Result<ConfidenceInterval> {
    if t == 0 || t > xs.len() {
        return Err(Error::domain(format!("t = {t} outside 1..={}", xs.len())));
    }
    let epoch = epoch_of(t, params, variant)?;
    let state = CsState::constant_theta(params.alpha, &xs[..t], epoch.theta_k)?;
    state.interval(&variant.influence(params.alpha)?, &epoch.params(params)?)
}

/// An online stitched sequence.
#[derive(Debug, Clone)]
pub struct StitchedSequence {
    params: CsParams,
    variant: StitchVariant,
    xs: Vec<f64>,
}

impl StitchedSequence {
    pub fn new(params: CsParams, variant: StitchVariant) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            variant,
            xs: Vec::new(),
        })
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::domain(format!(
                "observation must be finite, got {x}"
            )));
        }
        self.xs.push(x);
        Ok(())
    }

    pub fn t(&self) -> usize {
        self.xs.len()
    }

    pub fn epoch(&self) -> Result<StitchEpoch> {
        epoch_of(self.t().max(1), &self.params, self.variant)
    }

    pub fn interval(&self) -> Result<ConfidenceInterval> {
        stitched_interval(&self.xs, self.xs.len(), &self.params, self.variant)
    }
}

/// `A_α = (eν)^{1/(1+α)} 2^{α/(1+α)} (1−α)^{(1−α)/(2(1+α))} (1+α)^{1/2}`.
pub fn a_alpha(alpha: f64, nu_alpha: f64) -> f64 {
    let p = 1.0 / (1.0 + alpha);
    (E * nu_alpha).powf(p)
        * 2f64.powf(alpha * p)
        * (1.0 - alpha).powf((1.0 - alpha) * p / 2.0)
        * (1.0 + alpha).sqrt()
}

/// `A_α^{(WR)} = (5eν)^{1/(1+α)} (2/α)^{α/(1+α)} (1+α)^{(2α+1)/(1+α)}`.
pub fn a_alpha_wr(alpha: f64, nu_alpha: f64) -> f64 {
    let p = 1.0 / (1.0 + alpha);
    (5.0 * E * nu_alpha).powf(p)
        * (2.0 / alpha).powf(alpha * p)
        * (1.0 + alpha).powf((2.0 * alpha + 1.0) * p)
}

/// `B_α(t, δ) = ((2 log(log t + 2) + log(2/δ)) / t)^{α/(1+α)}`.
pub fn b_alpha(alpha: f64, t: f64, delta: f64) -> f64 {
    ((2.0 * (t.ln() + 2.0).ln() + (2.0 / delta).ln()) / t).powf(alpha / (1.0 + alpha))
}

/// Multiplier of `B_α(t, δ)` in the stitched width bound.
pub fn stitched_coefficient(params: &CsParams, variant: StitchVariant) -> f64 {
    let (a, nu) = (params.alpha, params.nu_alpha);
    match variant {
        StitchVariant::Improved => {
            2.0 * (1.0 + params.lambda)
                * params.split_factor().powf(1.0 / (1.0 + a))
                * a_alpha(a, nu)
        }
        StitchVariant::WR => 2.0 * a_alpha_wr(a, nu),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StitchedBound {
    /// Whether `t` clears the explicit sample-size threshold, making the
    /// bound a `1 − δ/4` guarantee.
    pub applies: bool,
    pub bound: f64,
}

/// Width bound of the stitched sequence at time `t`.
///
/// The baseline's constants coincide with the improved ones at
/// `C_α = 1/(1+α)`, `u = 4^{−1/α}` and `λ = α`, which is what its
/// sample-size threshold uses.
pub fn stitched_width_bound(
    t: usize,
    params: &CsParams,
    variant: StitchVariant,
) -> Result<StitchedBound> {
    if t == 0 {
        return Err(Error::domain("time starts at 1"));
    }
    params.validate()?;
    let a = params.alpha;
    let bound = stitched_coefficient(params, variant) * b_alpha(a, t as f64, params.delta);
    let (c, u, lambda) = match variant {
        StitchVariant::Improved => (tight_coefficient(a)?, params.u, params.lambda),
        StitchVariant::WR => (chen_coefficient(a)?, 4f64.powf(-1.0 / a), a),
    };
    let k = epoch_index(t) as f64;
    let prefactor = 2.0 * c.powf(1.0 / a) / (1.0 - u) * (1.0 + lambda).powf(1.0 + 1.0 / a)
        / lambda.powf(1.0 / a);
    let logs = (1.0 / E + 1.0) * (1.0 / params.delta).ln()
        + (2.0 / E + 1.0) * (k + 2.0).ln()
        + (1.0 / E + 2.0) * 2f64.ln();
    Ok(StitchedBound {
        applies: t as f64 >= prefactor * logs,
        bound,
    })
}

/// Evaluates both sides of the per-epoch inequality
///
/// ```text
///     (L t Θ_k^{1+α} + 2 log(2/δ_k)) / (t Θ_k)
///         ≤ (1+α) (2/α)^{α/(1+α)} (L e)^{1/(1+α)} B_α(t, δ)
/// ```
///
/// and returns `(lhs, rhs)`. Holds for every `t ∈ [e^k, e^{k+1})`.
pub fn schedule_inequality_sides(
    k: u32,
    t: f64,
    params: &CsParams,
    variant: StitchVariant,
) -> Result<(f64, f64)> {
    let a = params.alpha;
    let l = schedule_constant(params, variant)?;
    let theta = epoch_theta(k, params, variant)?;
    let dk = epoch_delta(k, params.delta);
    let lhs = (l * t * theta.powf(1.0 + a) + 2.0 * (2.0 / dk).ln()) / (t * theta);
    let rhs = (1.0 + a)
        * (2.0 / a).powf(a / (1.0 + a))
        * (l * E).powf(1.0 / (1.0 + a))
        * b_alpha(a, t, params.delta);
    Ok((lhs, rhs))
}

pub fn schedule_inequality_check(
    k: u32,
    t: f64,
    params: &CsParams,
    variant: StitchVariant,
) -> Result<bool> {
    let (lhs, rhs) = schedule_inequality_sides(k, t, params, variant)?;
    Ok(lhs <= rhs * (1.0 + 1e-12))
}
