use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::confseq::{ConfidenceSequence, CsParams, ThetaTuning};
use crate::distributions::{central_moment, HeavyTailDist};
use crate::error::{Error, Result};
use crate::influence::InfluenceSpec;

use super::config::{Experiment, ExperimentConfig, KeyValues};
use super::experiments::{
    run_coverage_experiment, run_slope_experiment, run_stitched_experiment, run_width_experiment,
    ThetaRegime,
};
use super::output::{self, fmt_g6};

pub const SEED_ENV: &str = "CS_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "catoni-cs",
    version,
    about = "Confidence sequences for heavy-tailed means"
)]
struct Cli {
    /// Flat `key = value` file applied on top of the experiment defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config file and CS_SEED
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,
    #[arg(long, global = true)]
    reps: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Width paths of the improved and baseline sequences
    Figure1(RunArgs),
    /// Widths at t = 100, 1000, 10000 over eight confidence levels
    Table2(RunArgs),
    /// Width paths of the stitched sequences
    Figure2(RunArgs),
    /// Anytime coverage audit
    Coverage(RunArgs),
    /// Width rates under the five scale regimes
    Slope(RunArgs),
    /// Running interval over numbers read from a file or stdin
    Interval(IntervalArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// pareto or t2; both when omitted
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Comma-separated confidence levels
    #[arg(long)]
    delta: Option<String>,
    /// Comma-separated recording times
    #[arg(long)]
    t: Option<String>,
    /// Comma-separated methods
    #[arg(long)]
    methods: Option<String>,
    /// improved or bhatt
    #[arg(long)]
    theta: Option<String>,
    /// half or unhalved
    #[arg(long)]
    wr_theta: Option<String>,
}

#[derive(Debug, Args)]
struct IntervalArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// improved or wr
    #[arg(long, default_value = "improved")]
    method: String,
    /// improved, bhatt, wr or wr-unhalved; defaults to the method's own rule
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    /// Read from this file instead of stdin
    input: Option<PathBuf>,
}

/// Runs the command line with process stdio and environment.
pub fn cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdin = std::io::stdin();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run(
        args,
        env_seed.as_deref(),
        &mut stdin.lock(),
        &mut out,
        &mut err,
    )
}

/// [`cli`] with explicit streams. Returns the exit code.
pub fn run<I, T>(
    args: I,
    env_seed: Option<&str>,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(parsed, env_seed, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(
    cli: Cli,
    env_seed: Option<&str>,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let Format::Csv = cli.format;
    let experiment = match &cli.command {
        Command::Interval(args) => return run_interval(args, stdin, stdout),
        Command::Figure1(_) => Experiment::Figure1,
        Command::Table2(_) => Experiment::Table2,
        Command::Figure2(_) => Experiment::Figure2,
        Command::Coverage(_) => Experiment::Coverage,
        Command::Slope(_) => Experiment::Slope,
    };
    let args = match &cli.command {
        Command::Figure1(a)
        | Command::Table2(a)
        | Command::Figure2(a)
        | Command::Coverage(a)
        | Command::Slope(a) => a,
        Command::Interval(_) => unreachable!(),
    };

    let mut overrides = KeyValues::default();
    if let Some(s) = env_seed {
        overrides.insert("master_seed", s);
    }
    if let Some(path) = &cli.config {
        for (k, v) in KeyValues::load(path)?.0 {
            overrides.insert(&k, v);
        }
    }
    let flags = [
        ("distribution", args.dist.clone()),
        ("alpha", args.alpha.map(|v| v.to_string())),
        ("nu_alpha", args.nu.map(|v| v.to_string())),
        ("delta", args.delta.clone()),
        ("t", args.t.clone()),
        ("methods", args.methods.clone()),
        ("theta", args.theta.clone()),
        ("wr_theta", args.wr_theta.clone()),
        ("master_seed", cli.seed.map(|v| v.to_string())),
        ("replications", cli.reps.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            overrides.insert(k, v);
        }
    }
    let dists: Vec<HeavyTailDist> = match overrides.get("distribution") {
        Some(d) => vec![d.parse()?],
        None if experiment == Experiment::Slope => vec![HeavyTailDist::CenteredPareto18],
        None => HeavyTailDist::ALL.to_vec(),
    };
    let alphas: Vec<Option<f64>> =
        if experiment == Experiment::Slope && overrides.get("alpha").is_none() {
            vec![Some(0.5), Some(1.0)]
        } else {
            vec![None]
        };

    let out = cli.out.as_path();
    let mut slope_entries = Vec::new();
    for dist in dists {
        for &alpha in &alphas {
            let mut config = ExperimentConfig::defaults(experiment, dist);
            config.apply(&overrides)?;
            if let Some(a) = alpha {
                config.alpha = a;
            }
            config.validate()?;
            let name = format!("{}_{}", experiment, dist);
            match experiment {
                Experiment::Table2 | Experiment::Figure1 => {
                    let oracle_nu = moment_above_bound(&config, stderr)?;
                    let mut runs = vec![(config.clone(), name.clone())];
                    if let (Some(nu), Experiment::Table2) = (oracle_nu, experiment) {
                        let mut c = config.clone();
                        c.nu_alpha = nu;
                        runs.push((c, format!("{name}_oracle")));
                    }
                    for (config, name) in runs {
                        let rows = run_width_experiment(&config)?;
                        let cells = output::summarize(&rows);
                        written(
                            stdout,
                            output::write_rows(&out.join(format!("{name}.csv")), &rows),
                            out,
                            &name,
                            "",
                        )?;
                        let (file, suffix) = if experiment == Experiment::Table2 {
                            (
                                output::write_summary(
                                    &out.join(format!("{name}_summary.csv")),
                                    &cells,
                                ),
                                "_summary",
                            )
                        } else {
                            (
                                output::write_plot(&out.join(format!("{name}_plot.csv")), &cells),
                                "_plot",
                            )
                        };
                        written(stdout, file, out, &name, suffix)?;
                    }
                }
                Experiment::Figure2 => {
                    let rows = run_stitched_experiment(&config)?;
                    let cells = output::summarize(&rows);
                    written(
                        stdout,
                        output::write_rows(&out.join(format!("{name}.csv")), &rows),
                        out,
                        &name,
                        "",
                    )?;
                    let plot = output::write_plot(&out.join(format!("{name}_plot.csv")), &cells);
                    written(stdout, plot, out, &name, "_plot")?;
                }
                Experiment::Coverage => {
                    let report = run_coverage_experiment(&config)?;
                    for c in &report {
                        writeln!(
                            stdout,
                            "{dist} {} delta={} coverage={} [{}, {}]",
                            c.method,
                            fmt_g6(c.delta),
                            c.rate,
                            fmt_g6(c.wilson_lower),
                            fmt_g6(c.wilson_upper)
                        )?;
                    }
                    written(
                        stdout,
                        output::write_coverage(&out.join(format!("{name}.csv")), &report),
                        out,
                        &name,
                        "",
                    )?;
                }
                Experiment::Slope => {
                    let entries = run_slope_experiment(&config, &ThetaRegime::ALL)?;
                    for e in &entries {
                        writeln!(
                            stdout,
                            "alpha={} {}: slope={:.4} adjusted={:.4} expected={:.4} r2={:.4}",
                            fmt_g6(e.alpha),
                            e.regime.name(),
                            e.raw_slope,
                            e.adjusted_slope,
                            e.expected_slope,
                            e.r_squared
                        )?;
                    }
                    slope_entries.extend(entries);
                }
            }
        }
    }
    if experiment == Experiment::Slope {
        output::write_slopes(out, &slope_entries)?;
        writeln!(stdout, "wrote {}", out.join("slope_summary.csv").display())?;
        writeln!(stdout, "wrote {}", out.join("slope_widths.csv").display())?;
    }
    Ok(())
}

fn written(
    stdout: &mut dyn Write,
    result: Result<()>,
    out: &Path,
    name: &str,
    suffix: &str,
) -> Result<()> {
    result?;
    writeln!(
        stdout,
        "wrote {}",
        out.join(format!("{name}{suffix}.csv")).display()
    )?;
    Ok(())
}

/// The true `E|X|^{1+α}` when it exceeds the configured `ν_α`.
fn moment_above_bound(config: &ExperimentConfig, stderr: &mut dyn Write) -> Result<Option<f64>> {
    match central_moment(config.distribution, 1.0 + config.alpha) {
        Ok(m) if m > config.nu_alpha => {
            writeln!(
                stderr,
                "note: E|X|^{} = {} for {} exceeds nu_alpha = {}",
                fmt_g6(1.0 + config.alpha),
                fmt_g6(m),
                config.distribution,
                fmt_g6(config.nu_alpha)
            )?;
            Ok(Some(m))
        }
        _ => Ok(None),
    }
}

fn required(value: Option<f64>, flag: &str) -> Result<f64> {
    value.ok_or_else(|| Error::validation(format!("missing required argument --{flag}")))
}

fn run_interval(
    args: &IntervalArgs,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
) -> Result<()> {
    let alpha = required(args.alpha, "alpha")?;
    let nu = required(args.nu, "nu")?;
    let delta = required(args.delta, "delta")?;
    let mut params =
        CsParams::new(alpha, nu, delta).map_err(|e| Error::validation(e.to_string()))?;
    if let Some(l) = args.lambda {
        params = params
            .with_lambda(l)
            .map_err(|e| Error::validation(e.to_string()))?;
    }
    if let Some(u) = args.u {
        params = params
            .with_u(u)
            .map_err(|e| Error::validation(e.to_string()))?;
    }
    let (spec, default_theta) = match args.method.as_str() {
        "improved" => (InfluenceSpec::tight(alpha)?, ThetaTuning::Improved),
        "wr" => (InfluenceSpec::chen(alpha)?, ThetaTuning::WangRamdas),
        other => return Err(Error::validation(format!("unknown method '{other}'"))),
    };
    let tuning = match args.theta.as_deref() {
        None => default_theta,
        Some("improved") => ThetaTuning::Improved,
        Some("bhatt") => ThetaTuning::Bhatt,
        Some("wr") => ThetaTuning::WangRamdas,
        Some("wr-unhalved") => ThetaTuning::WangRamdasUnhalved,
        Some(other) => return Err(Error::validation(format!("unknown theta '{other}'"))),
    };

    let mut text = String::new();
    match &args.input {
        Some(path) => text = std::fs::read_to_string(path)?,
        None => {
            stdin.read_to_string(&mut text)?;
        }
    }
    let mut cs = ConfidenceSequence::new(spec, params, tuning)?;
    writeln!(stdout, "t,lower,upper,width")?;
    for token in text.split_whitespace() {
        let x: f64 = token
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::validation(format!("not a finite number: '{token}'")))?;
        cs.push(x)?;
        let ci = cs.interval()?;
        writeln!(
            stdout,
            "{},{},{},{}",
            ci.t,
            fmt_g6(ci.lower),
            fmt_g6(ci.upper),
            fmt_g6(ci.width())
        )?;
    }
    Ok(())
}
