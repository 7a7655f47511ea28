use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::confseq::{CsParams, ThetaTuning};
use crate::distributions::HeavyTailDist;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const TABLE2_DELTAS: [f64; 8] = [0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001];
pub const TABLE2_TS: [usize; 3] = [100, 1000, 10_000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Figure1,
    Table2,
    Figure2,
    Coverage,
    Slope,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Figure1 => "figure1",
            Experiment::Table2 => "table2",
            Experiment::Figure2 => "figure2",
            Experiment::Coverage => "coverage",
            Experiment::Slope => "slope",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "figure1" => Ok(Experiment::Figure1),
            "table2" => Ok(Experiment::Table2),
            "figure2" => Ok(Experiment::Figure2),
            "coverage" => Ok(Experiment::Coverage),
            "slope" => Ok(Experiment::Slope),
            other => Err(Error::validation(format!("unknown experiment '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Improved,
    WR,
    ImprovedStitched,
    WRStitched,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Improved,
        Method::WR,
        Method::ImprovedStitched,
        Method::WRStitched,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Improved => "improved",
            Method::WR => "wr",
            Method::ImprovedStitched => "improved_stitched",
            Method::WRStitched => "wr_stitched",
        }
    }

    pub fn is_stitched(&self) -> bool {
        matches!(self, Method::ImprovedStitched | Method::WRStitched)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "improved" => Ok(Method::Improved),
            "wr" => Ok(Method::WR),
            "improved_stitched" => Ok(Method::ImprovedStitched),
            "wr_stitched" => Ok(Method::WRStitched),
            other => Err(Error::validation(format!("unknown method '{other}'"))),
        }
    }
}

/// Everything an experiment run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub distribution: HeavyTailDist,
    pub alpha: f64,
    pub nu_alpha: f64,
    pub deltas: Vec<f64>,
    /// Recording times, strictly increasing. The largest is the horizon.
    pub ts: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    pub lambda: Option<f64>,
    pub u: Option<f64>,
    /// Scale rule of the improved sequence.
    pub improved_theta: ThetaTuning,
    /// Scale rule of the baseline sequence.
    pub wr_theta: ThetaTuning,
}

/// The moment bounds used in the reference simulations.
pub fn default_nu(dist: HeavyTailDist) -> f64 {
    match dist {
        HeavyTailDist::CenteredPareto18 => 5.0,
        HeavyTailDist::StudentT2 => 1.0,
    }
}

/// Roughly `per_decade` log-spaced integers from `start` to `end`, inclusive.
pub fn log_grid(start: usize, end: usize, per_decade: usize) -> Vec<usize> {
    let (a, b) = ((start.max(1) as f64).log10(), (end as f64).log10());
    let steps = ((b - a) * per_decade as f64).ceil().max(1.0) as usize;
    let mut out: Vec<usize> = (0..=steps)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / steps as f64).round() as usize)
        .collect();
    out.dedup();
    out
}

impl ExperimentConfig {
    /// The reference settings for each experiment.
    pub fn defaults(experiment: Experiment, distribution: HeavyTailDist) -> Self {
        let (deltas, ts, replications, methods) = match experiment {
            Experiment::Table2 => (
                TABLE2_DELTAS.to_vec(),
                TABLE2_TS.to_vec(),
                200,
                vec![Method::Improved, Method::WR],
            ),
            Experiment::Figure1 => (
                vec![0.05],
                log_grid(10, 10_000, 10),
                200,
                vec![Method::Improved, Method::WR],
            ),
            Experiment::Figure2 => (
                vec![0.05],
                stitched_grid(20_000),
                200,
                vec![Method::ImprovedStitched, Method::WRStitched],
            ),
            Experiment::Coverage => (vec![0.05, 0.2], vec![2000], 400, Method::ALL.to_vec()),
            Experiment::Slope => (
                vec![0.05],
                log_grid(100, 1_000_000, 3),
                8,
                vec![Method::Improved],
            ),
        };
        Self {
            experiment,
            distribution,
            alpha: 0.5,
            nu_alpha: default_nu(distribution),
            deltas,
            ts,
            replications,
            master_seed: DEFAULT_SEED,
            methods,
            lambda: None,
            u: None,
            improved_theta: ThetaTuning::Improved,
            wr_theta: ThetaTuning::WangRamdasUnhalved,
        }
    }

    pub fn horizon(&self) -> usize {
        self.ts.last().copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::validation("replications must be at least 1"));
        }
        if self.deltas.is_empty() {
            return Err(Error::validation("at least one delta is required"));
        }
        if self.ts.is_empty() || self.ts[0] == 0 {
            return Err(Error::validation("t values must be positive and nonempty"));
        }
        if self.ts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation("t values must be strictly increasing"));
        }
        if self.methods.is_empty() {
            return Err(Error::validation("at least one method is required"));
        }
        for &d in &self.deltas {
            self.params(d)
                .map_err(|e| Error::validation(e.to_string()))?;
        }
        Ok(())
    }

    pub fn params(&self, delta: f64) -> Result<CsParams> {
        let mut p = CsParams::new(self.alpha, self.nu_alpha, delta)?;
        if let Some(l) = self.lambda {
            p = p.with_lambda(l)?;
        }
        if let Some(u) = self.u {
            p = p.with_u(u)?;
        }
        Ok(p)
    }

    /// Applies `key = value` overrides.
    pub fn apply(&mut self, values: &KeyValues) -> Result<()> {
        for (key, value) in &values.0 {
            match key.as_str() {
                "experiment" => {
                    let e: Experiment = value.parse()?;
                    if e != self.experiment {
                        return Err(Error::validation(format!(
                            "config is for '{e}' but running '{}'",
                            self.experiment
                        )));
                    }
                }
                "distribution" => self.distribution = value.parse()?,
                "alpha" => self.alpha = parse_num(key, value)?,
                "nu" | "nu_alpha" => self.nu_alpha = parse_num(key, value)?,
                "delta" | "deltas" => self.deltas = parse_list(key, value)?,
                "t" | "ts" => self.ts = parse_list(key, value)?,
                "reps" | "replications" => self.replications = parse_num(key, value)?,
                "seed" | "master_seed" => self.master_seed = parse_num(key, value)?,
                "methods" | "method" => self.methods = parse_list(key, value)?,
                "lambda" => self.lambda = Some(parse_num(key, value)?),
                "u" => self.u = Some(parse_num(key, value)?),
                "theta" => {
                    self.improved_theta = match value.as_str() {
                        "improved" => ThetaTuning::Improved,
                        "bhatt" => ThetaTuning::Bhatt,
                        other => return Err(Error::validation(format!("unknown theta '{other}'"))),
                    }
                }
                "wr_theta" => {
                    self.wr_theta = match value.as_str() {
                        "half" => ThetaTuning::WangRamdas,
                        "unhalved" => ThetaTuning::WangRamdasUnhalved,
                        other => {
                            return Err(Error::validation(format!("unknown wr_theta '{other}'")))
                        }
                    }
                }
                other => return Err(Error::validation(format!("unknown config key '{other}'"))),
            }
        }
        Ok(())
    }
}

/// Recording grid for stitched runs: log-spaced times plus both sides of
/// every epoch boundary `⌈e^k⌉`.
pub fn stitched_grid(horizon: usize) -> Vec<usize> {
    let mut ts = log_grid(1, horizon, 20);
    let mut k = 2;
    loop {
        let b = (k as f64).exp().ceil() as usize;
        if b > horizon {
            break;
        }
        ts.push(b - 1);
        ts.push(b);
        k += 1;
    }
    ts.sort_unstable();
    ts.dedup();
    ts
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::validation(format!("invalid value '{value}' for '{key}'")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::validation(format!("invalid entry '{s}' for '{key}'")))
        })
        .collect()
}

fn canonical_key(key: &str) -> String {
    let k = key.trim().to_ascii_lowercase();
    match k.as_str() {
        "seed" => "master_seed",
        "reps" => "replications",
        "nu" => "nu_alpha",
        "deltas" => "delta",
        "ts" => "t",
        "method" => "methods",
        other => other,
    }
    .to_string()
}

/// Ordered `key = value` pairs from a flat config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues(pub BTreeMap<String, String>);

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::validation(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            map.insert(canonical_key(k), v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn insert(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(canonical_key(key), value.into());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_key_values() {
        let kv =
            KeyValues::parse("# comment\nalpha = 0.5\n\ndelta = 0.05, 0.1 # trailing\n").unwrap();
        assert_eq!(kv.get("alpha"), Some("0.5"));
        assert_eq!(kv.get("delta"), Some("0.05, 0.1"));
        assert_eq!(
            KeyValues::parse("Seed = 3").unwrap().get("master_seed"),
            Some("3")
        );
        assert!(KeyValues::parse("alpha 0.5").is_err());
    }

    #[test]
    fn applies_overrides() {
        let mut c = ExperimentConfig::defaults(Experiment::Table2, HeavyTailDist::CenteredPareto18);
        let kv =
            KeyValues::parse("reps = 3\nt = 10, 20\nmethods = improved\nwr_theta = half").unwrap();
        c.apply(&kv).unwrap();
        assert_eq!(c.replications, 3);
        assert_eq!(c.ts, vec![10, 20]);
        assert_eq!(c.methods, vec![Method::Improved]);
        assert_eq!(c.wr_theta, ThetaTuning::WangRamdas);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_configs() {
        let base = ExperimentConfig::defaults(Experiment::Figure1, HeavyTailDist::StudentT2);
        let mut c = base.clone();
        c.ts = vec![10, 10];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.deltas = vec![1.5];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.replications = 0;
        assert!(c.validate().is_err());
        let mut c = base;
        assert!(c.apply(&KeyValues::parse("bogus = 1").unwrap()).is_err());
        assert!(c.apply(&KeyValues::parse("alpha = x").unwrap()).is_err());
        assert!(c
            .apply(&KeyValues::parse("experiment = table2").unwrap())
            .is_err());
    }

    #[test]
    fn grids() {
        let g = log_grid(100, 1_000_000, 3);
        assert_eq!(g.first(), Some(&100));
        assert_eq!(g.last(), Some(&1_000_000));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let s = stitched_grid(20_000);
        assert!(s.contains(&7) && s.contains(&8) && s.contains(&8103) && s.contains(&8104));
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}
