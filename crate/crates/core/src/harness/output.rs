use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;

use super::config::Method;
use super::experiments::{CertificateSummary, CoverageSummary, ExperimentRow, SlopeEntry};

pub const ROW_HEADER: &str =
    "experiment,distribution,method,alpha,nu_alpha,delta,t,rep,seed,lower,upper,width";

/// C's `%g`: six significant digits, trailing zeros dropped, exponent form
/// outside `[1e-4, 1e6)`.
pub fn fmt_g6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The value a reader of the CSV sees.
pub fn round_g6(v: f64) -> f64 {
    fmt_g6(v).parse().unwrap_or(v)
}

pub fn row_line(r: &ExperimentRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.experiment,
        r.distribution,
        r.method,
        fmt_g6(r.alpha),
        fmt_g6(r.nu_alpha),
        fmt_g6(r.delta),
        r.t,
        r.rep,
        r.seed,
        fmt_g6(r.lower),
        fmt_g6(r.upper),
        fmt_g6(r.width)
    )
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_lines(path: &Path, header: &str, lines: impl IntoIterator<Item = String>) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{header}")?;
    for line in lines {
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows(path: &Path, rows: &[ExperimentRow]) -> Result<()> {
    write_lines(path, ROW_HEADER, rows.iter().map(row_line))
}

/// Mean and median width of one `(distribution, method, δ, t)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub distribution: String,
    pub method: Method,
    pub delta: f64,
    pub t: usize,
    pub reps: usize,
    pub mean_width: f64,
    pub median_width: f64,
    pub p10_width: f64,
    pub p90_width: f64,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Per-cell statistics, computed from the rounded widths that [`write_rows`]
/// emits so they can be recomputed from the raw CSV.
pub fn summarize(rows: &[ExperimentRow]) -> Vec<CellSummary> {
    // positive f64 bit patterns order like the values; δ descends
    let mut cells: BTreeMap<(String, Method, Reverse<u64>, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        cells
            .entry((
                r.distribution.to_string(),
                r.method,
                Reverse(r.delta.to_bits()),
                r.t,
            ))
            .or_default()
            .push(round_g6(r.width));
    }
    cells
        .into_iter()
        .map(|((distribution, method, Reverse(bits), t), mut w)| {
            w.sort_by(f64::total_cmp);
            let n = w.len();
            CellSummary {
                distribution,
                method,
                delta: f64::from_bits(bits),
                t,
                reps: n,
                mean_width: w.iter().sum::<f64>() / n as f64,
                median_width: quantile(&w, 0.5),
                p10_width: quantile(&w, 0.1),
                p90_width: quantile(&w, 0.9),
            }
        })
        .collect()
}

pub fn write_summary(path: &Path, cells: &[CellSummary]) -> Result<()> {
    write_lines(
        path,
        "distribution,method,delta,t,reps,mean_width,median_width",
        cells.iter().map(|c| {
            format!(
                "{},{},{},{},{},{},{}",
                c.distribution,
                c.method,
                fmt_g6(c.delta),
                c.t,
                c.reps,
                c.mean_width,
                c.median_width
            )
        }),
    )
}

/// Plot-ready bands: one line per `(method, δ, t)`.
pub fn write_plot(path: &Path, cells: &[CellSummary]) -> Result<()> {
    write_lines(
        path,
        "distribution,method,delta,t,mean_width,p10_width,p90_width",
        cells.iter().map(|c| {
            format!(
                "{},{},{},{},{},{},{}",
                c.distribution,
                c.method,
                fmt_g6(c.delta),
                c.t,
                c.mean_width,
                c.p10_width,
                c.p90_width
            )
        }),
    )
}

pub fn write_coverage(path: &Path, rows: &[CoverageSummary]) -> Result<()> {
    write_lines(
        path,
        "distribution,method,delta,horizon,reps,covered,coverage,wilson_lower,wilson_upper",
        rows.iter().map(|c| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                c.distribution,
                c.method,
                fmt_g6(c.delta),
                c.horizon,
                c.reps,
                c.covered,
                c.rate,
                fmt_g6(c.wilson_lower),
                fmt_g6(c.wilson_upper)
            )
        }),
    )
}

pub fn write_certificates(path: &Path, rows: &[CertificateSummary]) -> Result<()> {
    write_lines(
        path,
        "method,delta,t,certified,bound,reps,violations,rate,nominal",
        rows.iter().map(|c| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                c.method,
                fmt_g6(c.delta),
                c.t,
                c.certified,
                fmt_g6(c.bound),
                c.reps,
                c.violations,
                c.rate,
                fmt_g6(c.nominal)
            )
        }),
    )
}

/// Writes the fitted slopes and the mean-width curves behind them.
pub fn write_slopes(dir: &Path, entries: &[SlopeEntry]) -> Result<()> {
    write_lines(
        &dir.join("slope_summary.csv"),
        "regime,alpha,raw_slope,adjusted_slope,expected_slope,rate_slope,r_squared",
        entries.iter().map(|e| {
            format!(
                "{},{},{},{},{},{},{}",
                e.regime.name(),
                fmt_g6(e.alpha),
                e.raw_slope,
                e.adjusted_slope,
                e.expected_slope,
                e.rate_slope,
                e.r_squared
            )
        }),
    )?;
    write_lines(
        &dir.join("slope_widths.csv"),
        "regime,alpha,t,mean_width",
        entries.iter().flat_map(|e| {
            e.ts.iter().zip(&e.mean_widths).map(move |(t, w)| {
                format!("{},{},{t},{}", e.regime.name(), fmt_g6(e.alpha), fmt_g6(*w))
            })
        }),
    )
}
