//! Anytime-valid confidence sequences for the mean of heavy-tailed data.
//!
//! Only a known bound `ν_α` on the `(1+α)`-th central moment is assumed,
//! with `α ∈ (0, 1]`, so the variance may be infinite. Intervals are built
//! from α-Catoni influence functions and nonnegative supermartingales, and
//! hold simultaneously over all sample sizes with probability `1 − δ`.
//!
//! - [`influence`]: influence functions and their coefficients.
//! - [`confseq`]: running intervals, width bounds, and scale tunings.
//! - [`stitching`]: epoch schedules and stitched sequences.
//! - [`distributions`]: seeded heavy-tailed samplers and a moment oracle.
//! - [`harness`]: simulation experiments and CSV output.

pub mod confseq;
pub mod distributions;
pub mod error;
pub mod harness;
pub mod influence;
pub mod quadrature;
mod root;
pub mod stitching;

pub use confseq::{
    theta_bhatt, theta_improved, theta_wr, theta_wr_unhalved, width_bound, ConfidenceInterval,
    ConfidenceSequence, CsParams, CsState, ThetaTuning, WidthBound,
};
pub use error::{Error, Result};
pub use influence::{chen_coefficient, tight_coefficient, InfluenceSpec, InfluenceVariant};
