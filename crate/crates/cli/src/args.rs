//! Flag and config-file parsing. Every subcommand's parameters live in one
//! struct that derives both the clap and serde traits, so `--config file`
//! and command-line flags go through identical validation.

use std::path::PathBuf;
use std::str::FromStr;

use bosonalg::{Algebra, JCVariant, C64};
use clap::{Parser, Subcommand};
use serde::Deserialize;

/// Complex scalar written as "re,im" (e.g. "2,0" or "1.5,-0.3").
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub C64);

impl FromStr for ComplexArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| format!("expected \"re,im\", got \"{s}\""))?;
        let re: f64 = re.trim().parse().map_err(|_| format!("bad real part in \"{s}\""))?;
        let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part in \"{s}\""))?;
        Ok(ComplexArg(C64::new(re, im)))
    }
}

impl<'de> Deserialize<'de> for ComplexArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Counting algebra flag ("weyl" or "su11").
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraArg(pub Algebra);

impl FromStr for AlgebraArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(AlgebraArg)
    }
}

impl<'de> Deserialize<'de> for AlgebraArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coupling-variant flag ("linear" or "su11").
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantArg(pub JCVariant);

impl FromStr for VariantArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(VariantArg)
    }
}

impl<'de> Deserialize<'de> for VariantArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Compare {
    Exact,
    Closed,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "bosonalg",
    about = "Truncated Fock-space operator algebra: counting laws, oscillator \
             constructions, boost covariance, and atom-field dynamics",
    version
)]
pub struct Cli {
    /// Run from a single JSON config file instead of flags.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Occupation distribution of n quanta over m modes.
    Stats {
        #[command(flatten)]
        params: StatsParams,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Residual table for the oscillator constructions.
    Oscillator {
        #[command(flatten)]
        params: OscillatorParams,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Boost-covariance residuals and boost-matrix checks.
    Lorentz {
        #[command(flatten)]
        params: LorentzParams,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Atom-field inversion dynamics, exact and closed-form.
    Jc {
        #[command(flatten)]
        params: JcParams,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Full invariant suite; exit 0 only if every check passes.
    Verify {
        #[command(flatten)]
        out: OutputOpts,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct OutputOpts {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

impl Default for OutputOpts {
    fn default() -> Self {
        Self {
            output: None,
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsParams {
    /// Total number of quanta.
    #[arg(long)]
    pub n: usize,

    /// Number of modes.
    #[arg(long)]
    pub m: usize,

    /// Counting algebra: weyl or su11.
    #[arg(long)]
    pub algebra: AlgebraArg,
}

#[derive(Debug, Clone, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorParams {
    /// Fock-space cutoff for the identity table.
    #[arg(long, default_value_t = 50)]
    #[serde(default = "default_cutoff_50")]
    pub cutoff: usize,
}

#[derive(Debug, Clone, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzParams {
    /// Boost rapidity.
    #[arg(long, default_value_t = 0.5)]
    #[serde(default = "default_half")]
    pub theta: f64,

    /// Representation label for the conjugating boost.
    #[arg(long, default_value_t = 0.5)]
    #[serde(default = "default_half")]
    pub kappa: f64,

    /// Fock-space cutoff.
    #[arg(long, default_value_t = 80)]
    #[serde(default = "default_cutoff_80")]
    pub cutoff: usize,

    /// Interior margin for the covariance residual.
    #[arg(long, default_value_t = 25)]
    #[serde(default = "default_margin_25")]
    pub margin: usize,

    /// Restrict the residual to one algebra (default: both).
    #[arg(long)]
    #[serde(default)]
    pub algebra: Option<AlgebraArg>,
}

#[derive(Debug, Clone, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JcParams {
    /// Coupling variant: linear or su11.
    #[arg(long)]
    pub variant: VariantArg,

    /// Poisson-weighted (coherent) initial field, as "re,im".
    #[arg(long, value_name = "RE,IM")]
    #[serde(default)]
    pub alpha: Option<ComplexArg>,

    /// Lowering-eigenstate initial field, as "re,im".
    #[arg(long, value_name = "RE,IM")]
    #[serde(default)]
    pub eta: Option<ComplexArg>,

    /// Field frequency.
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "default_one")]
    pub omega: f64,

    /// Atomic transition frequency.
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "default_one")]
    pub omega0: f64,

    /// Coupling strength.
    #[arg(long)]
    pub coupling: f64,

    /// Fock-space cutoff.
    #[arg(long, default_value_t = 120)]
    #[serde(default = "default_cutoff_120")]
    pub cutoff: usize,

    /// End of the time grid (starts at 0).
    #[arg(long)]
    pub t_max: f64,

    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    #[serde(default = "default_steps_200")]
    pub t_steps: usize,

    /// Which series to compute.
    #[arg(long, value_enum, default_value = "both")]
    #[serde(default = "default_compare_both")]
    pub compare: Compare,
}

fn default_half() -> f64 {
    0.5
}
fn default_one() -> f64 {
    1.0
}
fn default_cutoff_50() -> usize {
    50
}
fn default_cutoff_80() -> usize {
    80
}
fn default_cutoff_120() -> usize {
    120
}
fn default_margin_25() -> usize {
    25
}
fn default_steps_200() -> usize {
    200
}
fn default_compare_both() -> Compare {
    Compare::Both
}

/// On-disk run configuration: `{"subcommand": ..., "parameters": {...},
/// "output": ..., "format": ...}`. Unknown keys anywhere are rejected.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub subcommand: String,
    #[serde(default)]
    pub parameters: serde_json::Value,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn into_command(self) -> Result<Command, String> {
        let out = OutputOpts {
            output: self.output,
            format: self.format.unwrap_or(Format::Csv),
        };
        // treat an omitted parameters object as empty
        let params = if self.parameters.is_null() {
            serde_json::Value::Object(serde_json::Map::new())
        } else {
            self.parameters
        };
        fn parse<T: serde::de::DeserializeOwned>(
            what: &str,
            v: serde_json::Value,
        ) -> Result<T, String> {
            serde_json::from_value(v).map_err(|e| format!("bad {what} parameters: {e}"))
        }
        match self.subcommand.as_str() {
            "stats" => Ok(Command::Stats {
                params: parse("stats", params)?,
                out,
            }),
            "oscillator" => Ok(Command::Oscillator {
                params: parse("oscillator", params)?,
                out,
            }),
            "lorentz" => Ok(Command::Lorentz {
                params: parse("lorentz", params)?,
                out,
            }),
            "jc" => Ok(Command::Jc {
                params: parse("jc", params)?,
                out,
            }),
            "verify" => {
                if params != serde_json::json!({}) {
                    return Err("verify takes no parameters".into());
                }
                Ok(Command::Verify { out })
            }
            other => Err(format!(
                "unknown subcommand \"{other}\" (expected stats, oscillator, lorentz, jc, or verify)"
            )),
        }
    }
}
