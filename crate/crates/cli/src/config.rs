//! Regimes, experiment configuration, command-line flags and the flat
//! `key=value` configuration file.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{usage, CliError};

/// Largest tree accepted per replica; the cut-tree arena holds `2n - 1` nodes.
pub const MAX_N: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum RegimeForm {
    /// `p_n = min(1, c n^{-alpha})`
    Power { c: f64, alpha: f64 },
    /// the same `p` for every `n`
    Explicit { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Subcritical,
    Critical,
    Supercritical,
    /// `n p_n` stays bounded or `p_n = 0`: none of the three regimes
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub form: RegimeForm,
    pub classification: Classification,
}

impl RegimeSpec {
    pub fn power(c: f64, alpha: f64) -> Result<Self, CliError> {
        if !(c > 0.0 && c.is_finite()) {
            return usage(format!("c must be positive, got {c}"));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return usage(format!("alpha must be nonnegative, got {alpha}"));
        }
        let classification = if alpha < 0.5 {
            Classification::Subcritical
        } else if alpha == 0.5 {
            Classification::Critical
        } else if alpha < 1.0 {
            Classification::Supercritical
        } else {
            Classification::Degenerate
        };
        Ok(Self { form: RegimeForm::Power { c, alpha }, classification })
    }

    pub fn explicit(p: f64) -> Result<Self, CliError> {
        if !(0.0..=1.0).contains(&p) {
            return usage(format!("p must lie in [0, 1], got {p}"));
        }
        let classification = if p > 0.0 { Classification::Subcritical } else { Classification::Degenerate };
        Ok(Self { form: RegimeForm::Explicit { p }, classification })
    }

    pub fn p_n(&self, n: usize) -> f64 {
        match self.form {
            RegimeForm::Power { c, alpha } => (c * (n as f64).powf(-alpha)).min(1.0),
            RegimeForm::Explicit { p } => p,
        }
    }

    pub fn c(&self) -> Option<f64> {
        match self.form {
            RegimeForm::Power { c, .. } => Some(c),
            RegimeForm::Explicit { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Oracle,
    Coupling,
    Critical,
    Subcritical,
    Supercritical,
    Distributions,
    CuttreeDemo,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Coupling => "coupling",
            Suite::Critical => "critical",
            Suite::Subcritical => "subcritical",
            Suite::Supercritical => "supercritical",
            Suite::Distributions => "distributions",
            Suite::CuttreeDemo => "cuttree-demo",
        }
    }
}

/// Regime pieces as given by the user, resolved against a suite default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegimeInput {
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
}

impl RegimeInput {
    pub fn resolve(&self, default: RegimeSpec) -> Result<RegimeSpec, CliError> {
        match (self.p, self.c, self.alpha) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => usage("give either p or (c, alpha), not both"),
            (Some(p), None, None) => RegimeSpec::explicit(p),
            (None, None, None) => Ok(default),
            (None, c, alpha) => {
                let (dc, da) = match default.form {
                    RegimeForm::Power { c, alpha } => (c, alpha),
                    RegimeForm::Explicit { .. } => (1.0, 0.5),
                };
                RegimeSpec::power(c.unwrap_or(dc), alpha.unwrap_or(da))
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_none() && self.alpha.is_none() && self.p.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub regime: RegimeInput,
    /// `None` selects the suite's own sizes
    pub n_values: Option<Vec<usize>>,
    pub replicas: Option<u64>,
    pub seed: u64,
    /// `None` uses every available core
    pub threads: Option<usize>,
    pub output_dir: PathBuf,
    pub depth: usize,
    pub discretization: u64,
    /// record wall-clock nanoseconds per replica (makes CSV output non-reproducible)
    pub record_timing: bool,
}

pub const DEFAULT_SEED: u64 = 20_160_429;

impl ExperimentConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            regime: RegimeInput::default(),
            n_values: None,
            replicas: None,
            seed: DEFAULT_SEED,
            threads: None,
            output_dir: PathBuf::from("fires-out"),
            depth: cayley_fires::stats::DEFAULT_DEPTH,
            discretization: cayley_fires::limitlaws::DEFAULT_DISCRETIZATION,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(ns) = &self.n_values {
            if ns.is_empty() {
                return usage("n list is empty");
            }
            if let Some(&big) = ns.iter().find(|&&n| n > MAX_N) {
                return usage(format!("n = {big} exceeds the per-replica limit {MAX_N} (cut-tree arena of 2n-1 nodes)"));
            }
            if let Some(&small) = ns.iter().find(|&&n| n < 2) {
                return usage(format!("n = {small} is too small, need n >= 2"));
            }
        }
        if self.replicas == Some(0) {
            return usage("replicas must be at least 1");
        }
        if self.threads == Some(0) {
            return usage("threads must be at least 1");
        }
        if self.depth == 0 {
            return usage("depth must be at least 1");
        }
        if self.discretization < cayley_fires::limitlaws::MIN_DISCRETIZATION {
            return usage(format!(
                "discretization must be at least {}",
                cayley_fires::limitlaws::MIN_DISCRETIZATION
            ));
        }
        Ok(())
    }
}

/// Integer given plainly or in scientific notation (`1e6`).
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a nonnegative integer")),
    }
}

fn parse_size(s: &str) -> Result<usize, String> {
    parse_count(s).map(|v| v as usize)
}

/// Fire dynamics on uniform Cayley trees: simulation and verification suites.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "fires", version)]
pub struct Flags {
    /// Suite to run
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Tree sizes, comma separated (`1e3,1e4`)
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    pub n: Option<Vec<usize>>,
    /// Exponent in p_n = c n^-alpha
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Constant in p_n = c n^-alpha
    #[arg(long)]
    pub c: Option<f64>,
    /// Fixed probability for every n (excludes --c/--alpha)
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_parser = parse_count)]
    pub replicas: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Depth of ranked comparisons
    #[arg(long)]
    pub depth: Option<usize>,
    /// Bridge size N for conditioned jump sequences
    #[arg(long, value_parser = parse_count)]
    pub discretization: Option<u64>,
    /// Flat key=value file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Record per-replica wall-clock time in the CSV
    #[arg(long)]
    pub record_timing: bool,
}

impl Flags {
    /// Fields set here win; the rest come from `file`.
    pub fn overlay(self, file: Flags) -> Flags {
        Flags {
            suite: self.suite.or(file.suite),
            n: self.n.or(file.n),
            alpha: self.alpha.or(file.alpha),
            c: self.c.or(file.c),
            p: self.p.or(file.p),
            replicas: self.replicas.or(file.replicas),
            seed: self.seed.or(file.seed),
            threads: self.threads.or(file.threads),
            out: self.out.or(file.out),
            depth: self.depth.or(file.depth),
            discretization: self.discretization.or(file.discretization),
            config: self.config,
            record_timing: self.record_timing || file.record_timing,
        }
    }

    pub fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let Some(suite) = self.suite else {
            return usage("--suite is required (flag or config file)");
        };
        let mut cfg = ExperimentConfig::new(suite);
        cfg.regime = RegimeInput { c: self.c, alpha: self.alpha, p: self.p };
        cfg.n_values = self.n;
        cfg.replicas = self.replicas;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.threads = self.threads;
        if let Some(out) = self.out {
            cfg.output_dir = out;
        }
        if let Some(depth) = self.depth {
            cfg.depth = depth;
        }
        if let Some(d) = self.discretization {
            cfg.discretization = d;
        }
        cfg.record_timing = self.record_timing;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `key=value` lines (`#` comments, blank lines ignored) into flags.
pub fn parse_config_text(text: &str) -> Result<Flags, CliError> {
    let mut args = vec!["fires".to_string()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return usage(format!("config line {}: expected key=value, got `{line}`", i + 1));
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key == "config" {
            return usage("config files cannot include other config files");
        }
        if key == "record-timing" {
            match value {
                "true" | "1" | "yes" => args.push("--record-timing".into()),
                "false" | "0" | "no" => {}
                _ => return usage(format!("config line {}: record-timing expects true/false", i + 1)),
            }
            continue;
        }
        args.push(format!("--{key}"));
        args.push(value.to_string());
    }
    Flags::try_parse_from(&args).map_err(|e| CliError::Usage(format!("config file: {}", e.to_string().trim())))
}

pub fn read_config_file(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_config_text(&text)
}

/// Resolves command-line flags, reading the config file they name if any.
pub fn resolve_flags(flags: Flags) -> Result<ExperimentConfig, CliError> {
    let merged = match &flags.config {
        Some(path) => {
            let file = read_config_file(path)?;
            flags.overlay(file)
        }
        None => flags,
    };
    merged.into_config()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_follows_alpha() {
        assert_eq!(RegimeSpec::power(1.0, 0.25).unwrap().classification, Classification::Subcritical);
        assert_eq!(RegimeSpec::power(1.0, 0.5).unwrap().classification, Classification::Critical);
        assert_eq!(RegimeSpec::power(1.0, 0.75).unwrap().classification, Classification::Supercritical);
        assert_eq!(RegimeSpec::power(1.0, 1.0).unwrap().classification, Classification::Degenerate);
        assert_eq!(RegimeSpec::explicit(0.3).unwrap().classification, Classification::Subcritical);
        assert!(RegimeSpec::power(0.0, 0.5).is_err());
        assert!(RegimeSpec::explicit(1.2).is_err());
    }

    #[test]
    fn p_n_is_clamped() {
        let r = RegimeSpec::power(5.0, 0.5).unwrap();
        assert_eq!(r.p_n(4), 1.0);
        assert!((r.p_n(10_000) - 0.05).abs() < 1e-15);
        assert_eq!(RegimeSpec::explicit(0.2).unwrap().p_n(99), 0.2);
    }

    #[test]
    fn regime_input_resolution() {
        let default = RegimeSpec::power(1.0, 0.75).unwrap();
        assert_eq!(RegimeInput::default().resolve(default).unwrap(), default);
        let only_c = RegimeInput { c: Some(2.0), ..Default::default() };
        assert_eq!(only_c.resolve(default).unwrap().form, RegimeForm::Power { c: 2.0, alpha: 0.75 });
        let clash = RegimeInput { c: Some(2.0), p: Some(0.1), alpha: None };
        assert!(clash.resolve(default).is_err());
    }

    #[test]
    fn file_and_flag_precedence() {
        let file = parse_config_text("# experiment\nsuite = critical\nn = 1e3,1e4\nseed=5\nreplicas=200\nrecord_timing = true\n").unwrap();
        let flags = Flags::try_parse_from(["fires", "--seed", "9", "--threads", "2"]).unwrap();
        let cfg = flags.overlay(file).into_config().unwrap();
        assert_eq!(cfg.suite, Suite::Critical);
        assert_eq!(cfg.n_values, Some(vec![1000, 10_000]));
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.replicas, Some(200));
        assert_eq!(cfg.threads, Some(2));
        assert!(cfg.record_timing);
    }

    #[test]
    fn bad_inputs_are_usage_errors() {
        assert!(parse_config_text("suite critical").is_err());
        assert!(parse_config_text("bogus=1").is_err());
        assert!(parse_config_text("config=x").is_err());
        let f = Flags::try_parse_from(["fires", "--suite", "critical", "--n", "30000000"]).unwrap();
        assert_eq!(f.into_config().unwrap_err().exit_code(), 2);
        let f = Flags::try_parse_from(["fires", "--suite", "oracle", "--replicas", "0"]).unwrap();
        assert!(f.into_config().is_err());
        assert!(Flags::default().into_config().is_err());
        assert!(Flags::try_parse_from(["fires", "--n", "1.5"]).is_err());
    }
}
