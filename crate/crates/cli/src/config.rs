//! Command-line arguments and the serializable run configuration they produce.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use divisor_maxcut::{build_params, Error, Family, MinusculeParams};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_RESTARTS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Build the (-1)-divisor multigraph and write it as JSON (or CSV edges).
    Construct,
    /// Exact primal and dual semidefinite values with the bounds they imply.
    Certify,
    /// Strongly regular certificate and the exactly verified spectrum.
    Spectrum,
    /// Certified lower and upper bounds on the maximum cut.
    Bounds,
    /// Seeded random-hyperplane rounding of the optimal embedding.
    Simulate,
    /// Exact maximum cut (up to 30 vertices) or a local-search witness.
    Oracle,
    /// One row per family: bounds, rounding statistics and oracle value.
    FullReport,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Construct => "construct",
            CommandKind::Certify => "certify",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Bounds => "bounds",
            CommandKind::Simulate => "simulate",
            CommandKind::Oracle => "oracle",
            CommandKind::FullReport => "full-report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A requested graph, either as raw `(a, b, c)` or as a family shorthand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Target {
    Abc(u32, u32, u32),
    Family(Family),
}

impl Target {
    pub fn params(&self) -> Result<MinusculeParams, Error> {
        match *self {
            Target::Abc(a, b, c) => build_params(a, b, c),
            Target::Family(f) => MinusculeParams::from_family(f),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Abc(a, b, c) => write!(f, "{a},{b},{c}"),
            Target::Family(fam) => write!(f, "{fam}"),
        }
    }
}

impl From<Target> for String {
    fn from(t: Target) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for Target {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        if s.contains(':') || s.eq_ignore_ascii_case("e6") || s.eq_ignore_ascii_case("e7") {
            s.parse::<Family>().map(Target::Family).map_err(|e| e.to_string())
        } else {
            parse_abc(&s).map(|(a, b, c)| Target::Abc(a, b, c))
        }
    }
}

pub fn parse_abc(s: &str) -> Result<(u32, u32, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Result<Vec<u32>, _> = parts.iter().map(|p| p.parse::<u32>()).collect();
    match nums.as_deref() {
        Ok(&[a, b, c]) if a > 0 && b > 0 && c > 0 => Ok((a, b, c)),
        _ => Err(format!("expected three positive integers A,B,C, got {s:?}")),
    }
}

/// Counts such as `100000` or `1e5`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.trim().parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.trim().parse().map_err(|_| format!("not a count: {s:?}"))?;
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63) {
        Ok(v as u64)
    } else {
        Err(format!("not a whole nonnegative count: {s:?}"))
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "divisor-maxcut", version, about = "Max-cut certificates for minuscule (-1)-divisor multigraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<CommandKind>,

    /// Lattice parameters A,B,C (repeatable).
    #[arg(long, value_parser = parse_abc, global = true)]
    pub abc: Vec<(u32, u32, u32)>,

    /// Family shorthand typeA:r,s | typeD:r | e6 | e7 (repeatable).
    #[arg(long, value_parser = parse_family, global = true)]
    pub family: Vec<Family>,

    /// Number of rounding samples (accepts 1e5).
    #[arg(long, value_parser = parse_count, default_value = "1e5", global = true)]
    pub samples: u64,

    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Local-search restarts for graphs beyond exhaustive range.
    #[arg(long, value_parser = parse_count, default_value = "100", global = true)]
    pub restarts: u64,

    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub format: OutputFormat,

    /// Evaluate the originally stated formulas as written and report every discrepancy.
    #[arg(long, global = true)]
    pub check_paper_literal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub targets: Vec<Target>,
    pub samples: u64,
    pub seed: u64,
    pub restarts: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub check_paper_literal: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            targets: Vec::new(),
            samples: DEFAULT_SAMPLES,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            out: None,
            format: OutputFormat::Json,
            check_paper_literal: false,
        }
    }
}

impl RunConfig {
    pub fn new(command: CommandKind, targets: impl IntoIterator<Item = Target>) -> Self {
        RunConfig { command: Some(command), targets: targets.into_iter().collect(), ..RunConfig::default() }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let targets = cli
            .abc
            .into_iter()
            .map(|(a, b, c)| Target::Abc(a, b, c))
            .chain(cli.family.into_iter().map(Target::Family))
            .collect();
        RunConfig {
            command: cli.command,
            targets,
            samples: cli.samples,
            seed: cli.seed,
            restarts: cli.restarts,
            out: cli.out,
            format: cli.format,
            check_paper_literal: cli.check_paper_literal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        let mut full = vec!["divisor-maxcut"];
        full.extend_from_slice(args);
        Cli::try_parse_from(full).unwrap().into()
    }

    #[test]
    fn defaults() {
        let c = parse(&["simulate", "--abc", "2,1,3"]);
        assert_eq!(c.command, Some(CommandKind::Simulate));
        assert_eq!((c.samples, c.seed, c.restarts), (100_000, 0, 100));
        assert_eq!(c.format, OutputFormat::Json);
        assert_eq!(c.targets, vec![Target::Abc(2, 1, 3)]);
    }

    #[test]
    fn flags_and_families() {
        let c = parse(&[
            "full-report", "--family", "typeD:5", "--family", "e6", "--samples", "2e3", "--seed", "9", "--format", "csv",
            "--out", "x.csv",
        ]);
        assert_eq!(c.targets, vec![Target::Family(Family::TypeD { r: 5 }), Target::Family(Family::E6)]);
        assert_eq!((c.samples, c.seed), (2000, 9));
        assert_eq!(c.format, OutputFormat::Csv);
        assert_eq!(c.out, Some(PathBuf::from("x.csv")));
        assert!(parse(&["--check-paper-literal"]).check_paper_literal);
    }

    #[test]
    fn config_round_trip() {
        let c = parse(&["oracle", "--abc", "2,3,3", "--family", "typeA:4,1", "--restarts", "1e3"]);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"typeA:4,1\"") && text.contains("\"2,3,3\""));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
        let d = RunConfig::default();
        assert_eq!(serde_json::from_str::<RunConfig>(&serde_json::to_string(&d).unwrap()).unwrap(), d);
    }

    #[test]
    fn bad_arguments() {
        assert!(Cli::try_parse_from(["x", "bounds", "--abc", "2,4"]).is_err());
        assert!(Cli::try_parse_from(["x", "bounds", "--family", "e8"]).is_err());
        assert!(Cli::try_parse_from(["x", "simulate", "--samples", "1.5"]).is_err());
        assert_eq!(parse_count("1e5"), Ok(100_000));
        assert!(parse_count("-3").is_err());
    }
}
