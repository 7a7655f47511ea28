//! Running α-Catoni confidence sequences for the mean.
//!
//! Given observations `x_1, x_2, …` with scales `θ_1, θ_2, …`, the interval at
//! time `t` is
//!
//! ```text
//!     CI_t = { m : |g_t(m)| ≤ R_t },   g_t(m) = Σ ψ(θ_i (x_i − m)),
//!     R_t  = C_α ν_α Σ θ_i^{1+α} + log(2/δ).
//! ```
//!
//! `g_t` is continuous and strictly decreasing, so `CI_t` is a closed interval
//! whose endpoints solve `g_t(m) = ±R_t`. With the Chen coefficient
//! `C_α = 1/(1+α)` the same construction gives the Wang–Ramdas baseline.

use crate::error::{Error, Result};
use crate::influence::{check_alpha, pow_abs, tight_coefficient, InfluenceSpec};
use crate::root::solve_decreasing;

/// Relative residual accepted for interval endpoints, `|g(m) ∓ R| ≤ tol·(1+R)`.
pub const ENDPOINT_RESIDUAL: f64 = 1e-9;

/// Tuning constants shared by the interval, its width bound, and the θ rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsParams {
    pub alpha: f64,
    /// Known bound on the `(1+α)`-th central moment.
    pub nu_alpha: f64,
    pub delta: f64,
    /// Scaling parameter of the width bound, `0 < λ < 1/α`.
    pub lambda: f64,
    /// Convexity split of the width bound, `0 < u < 1`.
    pub u: f64,
    /// Failure probability of the width bound.
    pub beta: f64,
}

impl CsParams {
    /// Parameters with `u = 4^{-1/α}`, `λ = α` (or `1/2` when `α = 1`, where
    /// `λ` must stay below 1) and `β = δ`.
    pub fn new(alpha: f64, nu_alpha: f64, delta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let lambda = if alpha < 1.0 { alpha } else { 0.5 };
        let params = Self {
            alpha,
            nu_alpha,
            delta,
            lambda,
            u: 4f64.powf(-1.0 / alpha),
            beta: delta,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn with_u(mut self, u: f64) -> Result<Self> {
        self.u = u;
        self.validate()?;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        self.beta = beta;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !(self.nu_alpha.is_finite() && self.nu_alpha > 0.0) {
            return Err(Error::domain(format!(
                "nu_alpha must be positive, got {}",
                self.nu_alpha
            )));
        }
        if !open_unit(self.delta) {
            return Err(Error::domain(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !open_unit(self.beta) {
            return Err(Error::domain(format!(
                "beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        if !open_unit(self.u) {
            return Err(Error::domain(format!(
                "u must lie in (0, 1), got {}",
                self.u
            )));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0 / self.alpha) {
            return Err(Error::domain(format!(
                "lambda must lie in (0, 1/alpha), got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// `1 + u^{-α}`.
    pub fn split_factor(&self) -> f64 {
        1.0 + self.u.powf(-self.alpha)
    }

    /// `log(2/δ)`.
    pub fn log_two_over_delta(&self) -> f64 {
        (2.0 / self.delta).ln()
    }
}

/// A closed interval `[lower, upper]` reported at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub t: usize,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, m: f64) -> bool {
        self.lower <= m && m <= self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// The observations seen so far with their scales, and the running sums
/// `Σθ_i` and `Σθ_i^{1+α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsState {
    alpha: f64,
    xs: Vec<f64>,
    thetas: Vec<f64>,
    sum_theta: f64,
    sum_theta_pow: f64,
}

impl CsState {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            xs: Vec::new(),
            thetas: Vec::new(),
            sum_theta: 0.0,
            sum_theta_pow: 0.0,
        })
    }

    pub fn with_capacity(alpha: f64, capacity: usize) -> Result<Self> {
        let mut state = Self::new(alpha)?;
        state.xs.reserve(capacity);
        state.thetas.reserve(capacity);
        Ok(state)
    }

    /// A state holding `xs` with the constant scale `theta`.
    pub fn constant_theta(alpha: f64, xs: &[f64], theta: f64) -> Result<Self> {
        let mut state = Self::with_capacity(alpha, xs.len())?;
        for &x in xs {
            state.append(x, theta)?;
        }
        Ok(state)
    }

    pub fn append(&mut self, x: f64, theta: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::domain(format!(
                "observation must be finite, got {x}"
            )));
        }
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::domain(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        self.xs.push(x);
        self.thetas.push(theta);
        self.sum_theta += theta;
        self.sum_theta_pow += pow_abs(theta, 1.0 + self.alpha);
        Ok(())
    }

    /// Value-style append.
    pub fn appended(mut self, x: f64, theta: f64) -> Result<Self> {
        self.append(x, theta)?;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn sum_theta(&self) -> f64 {
        self.sum_theta
    }

    pub fn sum_theta_pow(&self) -> f64 {
        self.sum_theta_pow
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thetas.iter().copied().zip(self.xs.iter().copied())
    }

    /// `g_t(m) = Σ ψ(θ_i (x_i − m))`.
    pub fn g(&self, spec: &InfluenceSpec, m: f64) -> f64 {
        self.samples()
            .map(|(theta, x)| spec.psi(theta * (x - m)))
            .sum()
    }

    /// The radius `R_t = C_α ν_α Σθ_i^{1+α} + log(2/δ)`.
    ///
    /// For the Chen coefficient this is `ν_α/(1+α) Σθ_i^{1+α} + log(2/δ)`.
    pub fn threshold(&self, spec: &InfluenceSpec, params: &CsParams) -> f64 {
        spec.c_alpha() * params.nu_alpha * self.sum_theta_pow + params.log_two_over_delta()
    }

    /// The confidence interval at the current time. Requires `t ≥ 1`.
    pub fn interval(&self, spec: &InfluenceSpec, params: &CsParams) -> Result<ConfidenceInterval> {
        self.interval_at_radius(spec, self.threshold(spec, params))
    }

    pub(crate) fn interval_at_radius(
        &self,
        spec: &InfluenceSpec,
        radius: f64,
    ) -> Result<ConfidenceInterval> {
        self.check_nonempty()?;
        check_spec_alpha(spec, self.alpha)?;
        let center = median(&self.xs);
        let tol = ENDPOINT_RESIDUAL * (1.0 + radius);
        let g = |m: f64| self.g(spec, m);
        let lower = solve_decreasing(g, radius, center, tol)?;
        let upper = solve_decreasing(g, -radius, center, tol)?;
        Ok(ConfidenceInterval {
            lower,
            upper,
            t: self.t(),
        })
    }

    /// The α-Catoni M-estimate, the root of `g_t(m) = 0`.
    pub fn catoni_estimate(&self, spec: &InfluenceSpec) -> Result<f64> {
        self.check_nonempty()?;
        check_spec_alpha(spec, self.alpha)?;
        let tol = ENDPOINT_RESIDUAL;
        solve_decreasing(|m| self.g(spec, m), 0.0, median(&self.xs), tol)
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::domain("interval requires at least one observation"))
        } else {
            Ok(())
        }
    }
}

fn check_spec_alpha(spec: &InfluenceSpec, alpha: f64) -> Result<()> {
    if spec.alpha() != alpha {
        return Err(Error::domain(format!(
            "influence alpha {} does not match state alpha {alpha}",
            spec.alpha()
        )));
    }
    Ok(())
}

fn median(xs: &[f64]) -> f64 {
    let mut buf = xs.to_vec();
    let mid = buf.len() / 2;
    let (_, m, _) = buf.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    *m
}

/// Outcome of the deterministic width bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthBound {
    /// Whether the sufficient sample-size condition holds. The bound is a
    /// `1 − β` guarantee only when it does.
    pub feasible: bool,
    pub bound: f64,
}

/// Width bound of the improved interval for a nonrandom scale sequence.
///
/// The caller guarantees `thetas` does not depend on the data. With
/// `L = log(2/β) + log(2/δ)`, `S1 = Σθ_i` and `S2 = Σθ_i^{1+α}`:
///
/// ```text
///     feasible ⇔ C^{-1/α}(1−u) λ^{1/α}/(1+λ)^{1+1/α} (S1/S2)^{1+1/α}
///                    ≥ (1+u^{−α}) C ν + L/S2
///     bound     = 2(1+λ)/S1 · ((1+u^{−α}) C ν S2 + L)
/// ```
pub fn width_bound(params: &CsParams, thetas: &[f64]) -> Result<WidthBound> {
    params.validate()?;
    if thetas.is_empty() {
        return Err(Error::domain("width bound needs at least one theta"));
    }
    if let Some(bad) = thetas.iter().find(|th| !(th.is_finite() && **th > 0.0)) {
        return Err(Error::domain(format!("theta must be positive, got {bad}")));
    }
    let a = params.alpha;
    let c = tight_coefficient(a)?;
    let s1: f64 = thetas.iter().sum();
    let s2: f64 = thetas.iter().map(|&th| pow_abs(th, 1.0 + a)).sum();
    let log_pair = (2.0 / params.beta).ln() + params.log_two_over_delta();
    let moment_term = params.split_factor() * c * params.nu_alpha;
    let lam = params.lambda;

    let lhs = c.powf(-1.0 / a) * (1.0 - params.u) * lam.powf(1.0 / a)
        / (1.0 + lam).powf(1.0 + 1.0 / a)
        * (s1 / s2).powf(1.0 + 1.0 / a);
    let rhs = moment_term + log_pair / s2;
    let bound = 2.0 * (1.0 + lam) / s1 * (moment_term * s2 + log_pair);
    Ok(WidthBound {
        feasible: lhs >= rhs,
        bound,
    })
}

/// `θ_t = (u^α log(2/δ) / (α t C_α ν_α))^{1/(1+α)}`.
pub fn theta_bhatt(t: usize, params: &CsParams) -> f64 {
    let a = params.alpha;
    let c = tight_coefficient(a).expect("validated alpha");
    (params.u.powf(a) * params.log_two_over_delta() / (a * t as f64 * c * params.nu_alpha))
        .powf(1.0 / (1.0 + a))
}

/// `θ_t = (log(2/δ) / (α C_α ν_α (1+u^{−α}) t))^{1/(1+α)}`, the tuning used
/// for the improved sequence in the simulations.
pub fn theta_improved(t: usize, params: &CsParams) -> f64 {
    let a = params.alpha;
    let c = tight_coefficient(a).expect("validated alpha");
    (params.log_two_over_delta() / (a * c * params.nu_alpha * params.split_factor() * t as f64))
        .powf(1.0 / (1.0 + a))
}

/// `θ_t = ½ ((1+α) log(2/δ) / (t ν_α))^{1/(1+α)}`.
pub fn theta_wr(t: usize, params: &CsParams) -> f64 {
    0.5 * theta_wr_unhalved(t, params)
}

/// [`theta_wr`] without the leading `½`. This is the tuning that reproduces
/// the reference baseline widths.
pub fn theta_wr_unhalved(t: usize, params: &CsParams) -> f64 {
    let a = params.alpha;
    ((1.0 + a) * params.log_two_over_delta() / (t as f64 * params.nu_alpha)).powf(1.0 / (1.0 + a))
}

/// Deterministic scale sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaTuning {
    /// [`theta_improved`]
    Improved,
    /// [`theta_bhatt`]
    Bhatt,
    /// [`theta_wr`]
    WangRamdas,
    /// [`theta_wr_unhalved`]
    WangRamdasUnhalved,
}

impl ThetaTuning {
    pub fn theta(&self, t: usize, params: &CsParams) -> f64 {
        match self {
            ThetaTuning::Improved => theta_improved(t, params),
            ThetaTuning::Bhatt => theta_bhatt(t, params),
            ThetaTuning::WangRamdas => theta_wr(t, params),
            ThetaTuning::WangRamdasUnhalved => theta_wr_unhalved(t, params),
        }
    }
}

/// One-step factor `exp(ψ(θ(x−μ)) − θ^{1+α} C_α ν_α)` of the upper
/// supermartingale.
pub fn supermartingale_factor(
    spec: &InfluenceSpec,
    params: &CsParams,
    theta: f64,
    x: f64,
    mu: f64,
) -> f64 {
    (spec.psi(theta * (x - mu)) - compensator(spec, params, theta)).exp()
}

/// One-step factor `exp(−ψ(θ(x−μ)) − θ^{1+α} C_α ν_α)` of the lower
/// supermartingale.
pub fn supermartingale_factor_minus(
    spec: &InfluenceSpec,
    params: &CsParams,
    theta: f64,
    x: f64,
    mu: f64,
) -> f64 {
    (-spec.psi(theta * (x - mu)) - compensator(spec, params, theta)).exp()
}

fn compensator(spec: &InfluenceSpec, params: &CsParams, theta: f64) -> f64 {
    pow_abs(theta, 1.0 + spec.alpha()) * spec.c_alpha() * params.nu_alpha
}

/// An online confidence sequence: an influence function, parameters and a
/// scale tuning bundled with the running state.
#[derive(Debug, Clone)]
pub struct ConfidenceSequence {
    spec: InfluenceSpec,
    params: CsParams,
    tuning: ThetaTuning,
    state: CsState,
}

impl ConfidenceSequence {
    pub fn new(spec: InfluenceSpec, params: CsParams, tuning: ThetaTuning) -> Result<Self> {
        params.validate()?;
        check_spec_alpha(&spec, params.alpha)?;
        Ok(Self {
            spec,
            params,
            tuning,
            state: CsState::new(params.alpha)?,
        })
    }

    /// Improved sequence: tight coefficient with [`theta_improved`].
    pub fn improved(params: CsParams) -> Result<Self> {
        Self::new(
            InfluenceSpec::tight(params.alpha)?,
            params,
            ThetaTuning::Improved,
        )
    }

    /// Baseline sequence: Chen coefficient with the given Wang–Ramdas tuning.
    pub fn wang_ramdas(params: CsParams, tuning: ThetaTuning) -> Result<Self> {
        Self::new(InfluenceSpec::chen(params.alpha)?, params, tuning)
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        let theta = self.tuning.theta(self.state.t() + 1, &self.params);
        self.state.append(x, theta)
    }

    pub fn interval(&self) -> Result<ConfidenceInterval> {
        self.state.interval(&self.spec, &self.params)
    }

    pub fn state(&self) -> &CsState {
        &self.state
    }

    pub fn spec(&self) -> &InfluenceSpec {
        &self.spec
    }

    pub fn params(&self) -> &CsParams {
        &self.params
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> CsParams {
        CsParams::new(0.5, 5.0, 0.05).unwrap()
    }

    #[test]
    fn append_examples() {
        let s = CsState::new(0.5).unwrap().appended(1.0, 0.5).unwrap();
        assert_eq!(s.t(), 1);
        assert_eq!(s.sum_theta(), 0.5);
        assert!((s.sum_theta_pow() - 0.5f64.powf(1.5)).abs() < 1e-15);

        let s = CsState::new(1.0).unwrap();
        let s = s.appended(0.0, 1.0).unwrap().appended(0.0, 1.0).unwrap();
        assert_eq!((s.sum_theta(), s.sum_theta_pow()), (2.0, 2.0));
    }

    #[test]
    fn append_rejects_bad_inputs() {
        let mut s = CsState::new(0.5).unwrap();
        assert!(s.append(1.0, 0.0).is_err());
        assert!(s.append(1.0, -1.0).is_err());
        assert!(s.append(f64::NAN, 1.0).is_err());
        assert!(s.append(1.0, f64::INFINITY).is_err());
        assert!(s.is_empty());
    }

    #[test]
    fn g_examples() {
        let tight = InfluenceSpec::tight(0.5).unwrap();
        let s = CsState::new(0.5).unwrap().appended(0.0, 1.0).unwrap();
        assert_eq!(s.g(&tight, 0.0), 0.0);
        let s = CsState::constant_theta(0.5, &[-1.0, 1.0], 1.0).unwrap();
        assert_eq!(s.g(&tight, 0.0), 0.0);
        let s = CsState::new(0.5).unwrap().appended(1.0, 1.0).unwrap();
        assert!((s.g(&tight, 0.0) - 0.891_461_558_396_610_7).abs() < 1e-14);
    }

    #[test]
    fn threshold_examples() {
        let p = params();
        let tight = InfluenceSpec::tight(0.5).unwrap();
        let chen = InfluenceSpec::chen(0.5).unwrap();
        let empty = CsState::new(0.5).unwrap();
        assert!((empty.threshold(&tight, &p) - 40f64.ln()).abs() < 1e-15);

        let s = CsState::constant_theta(0.5, &[0.0; 10], 0.1).unwrap();
        // mpmath values
        assert!((s.threshold(&tight, &p) - 4.382_511_362_495_239).abs() < 1e-12);
        assert!((s.threshold(&chen, &p) - 4.742_972_007_503_396).abs() < 1e-12);
    }

    #[test]
    fn interval_requires_observations() {
        let tight = InfluenceSpec::tight(0.5).unwrap();
        assert!(CsState::new(0.5)
            .unwrap()
            .interval(&tight, &params())
            .is_err());
    }

    #[test]
    fn interval_rejects_mismatched_alpha() {
        let s = CsState::new(0.5).unwrap().appended(0.0, 1.0).unwrap();
        let spec = InfluenceSpec::tight(1.0).unwrap();
        assert!(s.interval(&spec, &params()).is_err());
    }

    #[test]
    fn single_zero_sample_gives_symmetric_interval() {
        for alpha in [0.25, 0.5, 1.0] {
            let spec = InfluenceSpec::tight(alpha).unwrap();
            let p = CsParams::new(alpha, 1.0, 0.05).unwrap();
            let s = CsState::new(alpha).unwrap().appended(0.0, 1.0).unwrap();
            let ci = s.interval(&spec, &p).unwrap();
            assert!((ci.lower + ci.upper).abs() < 1e-9, "{ci:?}");
            assert!(ci.lower < ci.upper);
        }
    }

    #[test]
    fn symmetric_pair_centres_interval() {
        let spec = InfluenceSpec::chen(1.0).unwrap();
        let p = CsParams::new(1.0, 1.0, 0.05).unwrap();
        let s = CsState::constant_theta(1.0, &[-1.0, 1.0], 1.0).unwrap();
        let ci = s.interval(&spec, &p).unwrap();
        assert!(ci.midpoint().abs() < 1e-9);
    }

    #[test]
    fn endpoint_residuals_are_small() {
        let spec = InfluenceSpec::tight(0.5).unwrap();
        let p = params();
        let xs = [0.3, -1.2, 4.0, 0.1, -0.7, 12.0, -1.1];
        let mut s = CsState::new(0.5).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            s.append(x, theta_improved(i + 1, &p)).unwrap();
        }
        let r = s.threshold(&spec, &p);
        let ci = s.interval(&spec, &p).unwrap();
        assert!((s.g(&spec, ci.lower) - r).abs() <= 1e-9 * (1.0 + r));
        assert!((s.g(&spec, ci.upper) + r).abs() <= 1e-9 * (1.0 + r));
    }

    #[test]
    fn width_bound_split_factor_is_five() {
        let p = params();
        assert_eq!(p.u, 0.0625);
        assert_eq!(p.split_factor(), 5.0);
    }

    #[test]
    fn width_bound_decreases_as_lambda_shrinks() {
        let base = params();
        let thetas: Vec<f64> = (1..=1000).map(|t| theta_improved(t, &base)).collect();
        let mut prev = f64::INFINITY;
        for lam in [1.5, 1.0, 0.5, 0.25, 0.1, 0.01] {
            let b = width_bound(&base.with_lambda(lam).unwrap(), &thetas)
                .unwrap()
                .bound;
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn width_bound_at_alpha_one_matches_finite_variance_form() {
        let p = CsParams::new(1.0, 2.0, 0.05)
            .unwrap()
            .with_lambda(0.5)
            .unwrap()
            .with_u(0.75)
            .unwrap()
            .with_beta(0.1)
            .unwrap();
        let thetas = vec![0.2; 500];
        let wb = width_bound(&p, &thetas).unwrap();
        let s1 = 0.2 * 500.0;
        let s2 = 0.04 * 500.0;
        let l = (2.0f64 / 0.1).ln() + (2.0f64 / 0.05).ln();
        let expected = 2.0 * 1.5 / s1 * ((1.0 + 1.0 / 0.75) / 2.0 * 2.0 * s2 + l);
        assert!((wb.bound - expected).abs() < 1e-12 * expected);
        let lhs = 2.0 * 0.25 * 0.5 / 1.5f64.powi(2) * (s1 / s2).powi(2);
        let rhs = (1.0 + 1.0 / 0.75) / 2.0 * 2.0 + l / s2;
        assert_eq!(wb.feasible, lhs >= rhs);
    }

    #[test]
    fn width_bound_rejects_bad_input() {
        assert!(width_bound(&params(), &[]).is_err());
        assert!(width_bound(&params(), &[0.1, 0.0]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CsParams::new(0.5, 5.0, 1.0).is_err());
        assert!(CsParams::new(0.5, 0.0, 0.05).is_err());
        assert!(params().with_lambda(2.0).is_err());
        assert!(params().with_u(1.0).is_err());
        assert!(params().with_beta(0.0).is_err());
        // default lambda stays inside (0, 1) at alpha = 1
        assert_eq!(CsParams::new(1.0, 1.0, 0.05).unwrap().lambda, 0.5);
    }

    #[test]
    fn theta_examples() {
        // mpmath values
        let p1 = CsParams::new(1.0, 1.0, 0.05).unwrap().with_u(0.25).unwrap();
        assert!((theta_bhatt(1, &p1) - 1.358_101_515_740_619_5).abs() < 1e-13);
        assert!((theta_bhatt(4, &p1) - 0.5 * theta_bhatt(1, &p1)).abs() < 1e-15);

        let p = params();
        assert!((theta_bhatt(100, &p) - 0.041_351_404_952_165_62).abs() < 1e-15);
        assert!((theta_improved(1, &p) - 0.767_744_877_920_688_4).abs() < 1e-13);
        assert!((theta_wr(1, &p) - 0.534_950_769_399_047_4).abs() < 1e-13);
        assert!((theta_wr_unhalved(1, &p) - 2.0 * theta_wr(1, &p)).abs() < 1e-15);
    }

    #[test]
    fn theta_scaling_laws() {
        let p = params();
        let k = theta_improved(1, &p);
        let ratio = theta_improved(1, &p) / theta_bhatt(1, &p);
        for t in [2usize, 10, 1000, 123_456] {
            let tf = t as f64;
            assert!((theta_improved(t, &p) * tf.powf(1.0 / 1.5) - k).abs() < 1e-12);
            assert!((theta_improved(t, &p) / theta_bhatt(t, &p) - ratio).abs() < 1e-12);
        }
        // t scaled by 10^{1+α} scales θ_WR by 1/10
        let t0 = 100usize;
        let t1 = (t0 as f64 * 10f64.powf(1.5)).round() as usize;
        let expected = theta_wr(t0, &p) * (t0 as f64 / t1 as f64).powf(1.0 / 1.5);
        assert!((theta_wr(t1, &p) - expected).abs() < 1e-15);
        assert!((theta_wr(t1, &p) / theta_wr(t0, &p) - 0.1).abs() < 1e-4);
        let huge_nu = CsParams::new(0.5, 1e30, 0.05).unwrap();
        assert!(theta_wr(1, &huge_nu) < 1e-19);
    }

    #[test]
    fn supermartingale_factor_examples() {
        let spec = InfluenceSpec::tight(0.5).unwrap();
        let p = params();
        let f = supermartingale_factor(&spec, &p, 0.3, 1.7, 1.7);
        assert!((f - (-(0.3f64.powf(1.5)) * spec.c_alpha() * 5.0).exp()).abs() < 1e-15);
        assert!(f < 1.0);
        assert!((supermartingale_factor(&spec, &p, 1e-12, 0.0, 0.0) - 1.0).abs() < 1e-15);
        let up = supermartingale_factor(&spec, &p, 0.3, 2.0, 0.0);
        let down = supermartingale_factor_minus(&spec, &p, 0.3, -2.0, 0.0);
        assert!((up - down).abs() < 1e-15);
    }

    #[test]
    fn online_sequence_matches_manual_state() {
        let p = params();
        let mut cs = ConfidenceSequence::improved(p).unwrap();
        let mut manual = CsState::new(0.5).unwrap();
        for (i, x) in [0.5, -0.2, 3.0, -1.0].into_iter().enumerate() {
            cs.push(x).unwrap();
            manual.append(x, theta_improved(i + 1, &p)).unwrap();
        }
        let spec = InfluenceSpec::tight(0.5).unwrap();
        assert_eq!(cs.interval().unwrap(), manual.interval(&spec, &p).unwrap());
    }
}
