//! α-Catoni-type influence functions.
//!
//! An influence function `ψ_α` is any nondecreasing function squeezed between
//! two logarithmic envelopes,
//!
//! ```text
//!     -log(1 - x + C_α|x|^{1+α})  ≤  ψ_α(x)  ≤  log(1 + x + C_α|x|^{1+α}),
//! ```
//!
//! and such a function exists exactly when `C_α` is at least the tight
//! coefficient returned by [`tight_coefficient`]. This module provides the
//! canonical odd selection: the upper envelope for `x ≥ 0` and the lower
//! envelope for `x < 0`.

use crate::error::{Error, Result};

/// Which coefficient the influence function is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfluenceVariant {
    /// The smallest admissible coefficient.
    TightCatoni,
    /// `C_α = 1/(1+α)`, the coefficient used by the Wang–Ramdas baseline.
    ChenWR,
}

/// An influence function: a variant, its `α`, and the coefficient `C_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfluenceSpec {
    variant: InfluenceVariant,
    alpha: f64,
    c_alpha: f64,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

/// The minimal coefficient `(α/(1+α))^{(1+α)/2} · ((1-α)/α)^{(1-α)/2}`.
///
/// At `α = 1` the second factor is `0^0 = 1`, giving `1/2`.
pub fn tight_coefficient(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let head = (alpha / (1.0 + alpha)).powf((1.0 + alpha) / 2.0);
    if alpha == 1.0 {
        return Ok(head);
    }
    let tail = ((1.0 - alpha) / alpha).powf((1.0 - alpha) / 2.0);
    Ok(head * tail)
}

/// `1/(1+α)`.
pub fn chen_coefficient(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(1.0 / (1.0 + alpha))
}

impl InfluenceSpec {
    pub fn new(variant: InfluenceVariant, alpha: f64) -> Result<Self> {
        let c_alpha = match variant {
            InfluenceVariant::TightCatoni => tight_coefficient(alpha)?,
            InfluenceVariant::ChenWR => chen_coefficient(alpha)?,
        };
        Ok(Self {
            variant,
            alpha,
            c_alpha,
        })
    }

    pub fn tight(alpha: f64) -> Result<Self> {
        Self::new(InfluenceVariant::TightCatoni, alpha)
    }

    pub fn chen(alpha: f64) -> Result<Self> {
        Self::new(InfluenceVariant::ChenWR, alpha)
    }

    /// An influence spec with an arbitrary coefficient. The envelope pair is
    /// only ordered (and a valid `ψ` only exists) when `c_alpha` is at least
    /// the tight coefficient; [`envelopes_ordered`](Self::envelopes_ordered)
    /// probes this.
    pub fn with_coefficient(variant: InfluenceVariant, alpha: f64, c_alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(c_alpha.is_finite() && c_alpha > 0.0) {
            return Err(Error::domain(format!(
                "coefficient must be positive, got {c_alpha}"
            )));
        }
        Ok(Self {
            variant,
            alpha,
            c_alpha,
        })
    }

    pub fn variant(&self) -> InfluenceVariant {
        self.variant
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }

    /// `x + C_α|x|^{1+α}` evaluated at `|x|`, i.e. the argument of `log1p`.
    #[inline]
    fn growth(&self, abs_x: f64) -> f64 {
        abs_x + self.c_alpha * pow_abs(abs_x, 1.0 + self.alpha)
    }

    /// The canonical influence function.
    #[inline]
    pub fn psi(&self, x: f64) -> f64 {
        let s = self.growth(x.abs()).ln_1p();
        if x < 0.0 {
            -s
        } else {
            s
        }
    }

    /// Checked variant of [`psi`](Self::psi) that rejects non-finite input.
    pub fn try_psi(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain(format!(
                "psi argument must be finite, got {x}"
            )));
        }
        Ok(self.psi(x))
    }

    /// `log(1 + x + C_α|x|^{1+α})`; infinite where the argument is nonpositive.
    pub fn upper_envelope(&self, x: f64) -> f64 {
        let inner = 1.0 + x + self.c_alpha * pow_abs(x, 1.0 + self.alpha);
        if inner > 0.0 {
            inner.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    /// `-log(1 - x + C_α|x|^{1+α})`; infinite where the argument is nonpositive.
    pub fn lower_envelope(&self, x: f64) -> f64 {
        -self.upper_envelope(-x)
    }

    /// Slack of `ψ` against each envelope: `(ψ - lower, upper - ψ)`.
    ///
    /// Both entries are nonnegative (up to rounding) for an admissible
    /// coefficient. On the side where `ψ` coincides with an envelope the
    /// slack is zero up to rounding.
    pub fn sandwich_margin(&self, x: f64) -> (f64, f64) {
        let psi = self.psi(x);
        (psi - self.lower_envelope(x), self.upper_envelope(x) - psi)
    }

    /// Whether `lower(x) ≤ upper(x)` at `x`, with a relative rounding allowance.
    pub fn envelopes_ordered(&self, x: f64) -> bool {
        let lo = self.lower_envelope(x);
        let hi = self.upper_envelope(x);
        lo <= hi + 1e-14 * (1.0 + hi.abs())
    }
}

/// `|x|^p` via `exp(p·ln|x|)`, with `0 ↦ 0`.
#[inline]
pub(crate) fn pow_abs(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else {
        (p * a.ln()).exp()
    }
}
