//! Command-line and JSON-config arguments.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{de, Deserialize, Deserializer};

use pulsebloch::{EvolutionMode, Grid, Parameter, PulseConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "pulsebloch",
    version,
    about = "Pulse-driven qubit dynamics and QFI of the initial coherent state"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bloch-vector trajectory (tau, sx, sy, sz, norm) at uniform sample times.
    Evolve(Options),
    /// QFI at a single point, analytic and finite-difference.
    Qfi(Options),
    /// QFI over a theta x phi x delta grid.
    Sweep(Options),
    /// Grid data along the axes of one of the published figures, both evolution modes.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[command(flatten)]
        opts: Options,
    },
    /// Closed-form solutions versus RK4 on a 10x10x10 (theta, phi, tau) grid.
    OracleCheck(Options),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Qfi(_) => "qfi",
            Command::Sweep(_) => "sweep",
            Command::Reproduce { .. } => "reproduce",
            Command::OracleCheck(_) => "oracle-check",
        }
    }

    pub fn options_mut(&mut self) -> &mut Options {
        match self {
            Command::Evolve(o) | Command::Qfi(o) | Command::Sweep(o) | Command::OracleCheck(o) => o,
            Command::Reproduce { opts, .. } => opts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseKind {
    Rect,
    Exp,
    Sin2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exact,
    Paper,
}

impl From<ModeArg> for EvolutionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => EvolutionMode::Exact,
            ModeArg::Paper => EvolutionMode::PaperVerbatim,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamArg {
    Theta,
    Phi,
}

impl From<ParamArg> for Parameter {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::Theta => Parameter::Theta,
            ParamArg::Phi => Parameter::Phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Closed-form propagator.
    #[default]
    Closed,
    /// RK4 integration; allows detuning with any pulse shape.
    Rk4,
}

/// A real number that may also be written as a multiple of pi: `pi`, `-pi/2`, `3pi/4`, `0.5*pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl FromStr for Real {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_lowercase();
        let bad = || format!("invalid number '{s}'");
        let value = match t.split_once("pi") {
            None => t.parse::<f64>().map_err(|_| bad())?,
            Some((coef, rest)) => {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = match coef {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    c => c.parse::<f64>().map_err(|_| bad())?,
                };
                let d = match rest {
                    "" => 1.0,
                    r => r
                        .strip_prefix('/')
                        .ok_or_else(bad)?
                        .parse::<f64>()
                        .map_err(|_| bad())?,
                };
                c * PI / d
            }
        };
        if !value.is_finite() {
            return Err(format!("'{s}' is not finite"));
        }
        Ok(Real(value))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v.is_finite() => Ok(Real(v)),
            Raw::Num(v) => Err(de::Error::custom(format!("{v} is not finite"))),
            Raw::Text(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// `MIN,MAX,COUNT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg(pub Grid);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        let [min, max, count] = parts[..] else {
            return Err(format!("grid '{s}' must be MIN,MAX,COUNT"));
        };
        let min: Real = min.parse()?;
        let max: Real = max.parse()?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| format!("invalid grid count '{count}'"))?;
        Grid::new(min.0, max.0, count)
            .map(GridArg)
            .map_err(|e| e.to_string())
    }
}

impl<'de> Deserialize<'de> for GridArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

impl fmt::Display for GridArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0.min, self.0.max, self.0.count)
    }
}

/// Flags shared by all commands. A JSON file given with `--config` uses the
/// same names as keys; flags on the command line win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// JSON file with any of these options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub pulse: Option<PulseKind>,
    /// Detuning delta = Delta/Omega0.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<Real>,
    /// Omega0/gamma_p for the exponential pulse.
    #[arg(long)]
    pub omega_ratio: Option<Real>,
    /// Omega0/omega_q for the sin^2 pulse (and the figure panels).
    #[arg(long)]
    pub omega_prime: Option<Real>,
    /// Beating index of the sin^2 pulse.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub theta: Option<Real>,
    #[arg(long)]
    pub phi: Option<Real>,
    /// Scaled evaluation time (end time for evolve, upper bound for oracle-check).
    #[arg(long)]
    pub tau: Option<Real>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub param: Option<ParamArg>,
    /// MIN,MAX,COUNT
    #[arg(long)]
    pub grid_theta: Option<GridArg>,
    /// MIN,MAX,COUNT
    #[arg(long)]
    pub grid_phi: Option<GridArg>,
    /// MIN,MAX,COUNT
    #[arg(long, allow_hyphen_values = true)]
    pub grid_delta: Option<GridArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// RK4 step (oracle-check, evolve --solver rk4).
    #[arg(long)]
    pub step: Option<Real>,
    /// Number of trajectory samples for evolve.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub solver: Option<Solver>,
    /// Finite-difference step for qfi.
    #[arg(long)]
    pub fd_step: Option<Real>,
}

macro_rules! overlay {
    ($flags:ident, $file:ident; $($field:ident),+ $(,)?) => {
        Options { config: $flags.config, $($field: $flags.$field.or($file.$field)),+ }
    };
}

impl Options {
    /// Fill unset flags from the `--config` file, if any.
    pub fn resolve(self) -> Result<Options> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load_config(&path)?;
        let flags = self;
        Ok(overlay!(flags, file;
            pulse, delta, omega_ratio, omega_prime, n, theta, phi, tau, mode, param,
            grid_theta, grid_phi, grid_delta, out, format, step, samples, solver, fd_step,
        ))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn mode(&self) -> EvolutionMode {
        self.mode.map(Into::into).unwrap_or_default()
    }

    pub fn parameter(&self) -> Parameter {
        self.param.map(Into::into).unwrap_or(Parameter::Theta)
    }

    pub fn require_tau(&self) -> Result<f64> {
        self.tau
            .map(|r| r.0)
            .ok_or_else(|| CliError::Usage("--tau is required for this command".into()))
    }

    pub fn require_angle(&self, which: Parameter) -> Result<f64> {
        let v = match which {
            Parameter::Theta => self.theta,
            Parameter::Phi => self.phi,
        };
        v.map(|r| r.0)
            .ok_or_else(|| CliError::Usage(format!("--{which} is required for this command")))
    }

    /// Pulse selected by `--pulse` (default `rect`) with its parameters.
    pub fn pulse_config(&self) -> Result<PulseConfig> {
        let pulse = match self.pulse.unwrap_or(PulseKind::Rect) {
            PulseKind::Rect => PulseConfig::Rectangular {
                delta: self.delta.map_or(0.0, |r| r.0),
            },
            PulseKind::Exp => PulseConfig::Exponential {
                omega0_over_gamma: self
                    .omega_ratio
                    .ok_or_else(|| CliError::Usage("--pulse exp needs --omega-ratio".into()))?
                    .0,
            },
            PulseKind::Sin2 => PulseConfig::SinSquared {
                omega_prime: self
                    .omega_prime
                    .ok_or_else(|| CliError::Usage("--pulse sin2 needs --omega-prime".into()))?
                    .0,
                n: self.n.unwrap_or(1),
            },
        };
        pulse.validate()?;
        Ok(pulse)
    }
}

fn load_config(path: &Path) -> Result<Options> {
    let err = |source: Box<dyn std::error::Error + Send + Sync>| CliError::Config {
        path: path.to_path_buf(),
        source,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(Box::new(e)))?;
    serde_json::from_str(&text).map_err(|e| err(Box::new(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pi_expressions() {
        let cases = [
            ("pi", PI),
            ("-pi", -PI),
            ("pi/4", PI / 4.0),
            ("3pi/2", 1.5 * PI),
            ("0.5*pi", 0.5 * PI),
            ("2 pi", 2.0 * PI),
            ("1.25", 1.25),
            ("-0.3", -0.3),
        ];
        for (s, v) in cases {
            assert_eq!(s.parse::<Real>().unwrap().0, v, "{s}");
        }
        for s in ["", "pie", "pi/", "x", "inf", "pi/0"] {
            assert!(s.parse::<Real>().is_err(), "{s}");
        }
    }

    #[test]
    fn parses_grids() {
        let g: GridArg = "0,pi,51".parse().unwrap();
        assert_eq!(g.0, Grid::new(0.0, PI, 51).unwrap());
        assert!("0,1".parse::<GridArg>().is_err());
        assert!("1,0,3".parse::<GridArg>().is_err());
        assert!("0,1,0".parse::<GridArg>().is_err());
    }

    #[test]
    fn config_json_mirrors_flags() {
        let o: Options = serde_json::from_str(
            r#"{"pulse":"sin2","omega-prime":0.5,"n":2,"theta":"pi/2","grid-phi":"0,2pi,5","mode":"paper"}"#,
        )
        .unwrap();
        assert_eq!(o.pulse, Some(PulseKind::Sin2));
        assert_eq!(o.theta, Some(Real(PI / 2.0)));
        assert_eq!(o.grid_phi.unwrap().0.count, 5);
        assert_eq!(o.mode(), EvolutionMode::PaperVerbatim);
        assert_eq!(
            o.pulse_config().unwrap(),
            PulseConfig::SinSquared {
                omega_prime: 0.5,
                n: 2
            }
        );
        assert!(serde_json::from_str::<Options>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"tau": 2.0, "theta": 0.5, "param": "phi"}"#).unwrap();
        let flags = Options {
            config: Some(path),
            tau: Some(Real(1.0)),
            ..Default::default()
        };
        let o = flags.resolve().unwrap();
        assert_eq!(o.tau, Some(Real(1.0)));
        assert_eq!(o.theta, Some(Real(0.5)));
        assert_eq!(o.parameter(), Parameter::Phi);
    }

    #[test]
    fn pulse_parameters_are_required() {
        let o = Options {
            pulse: Some(PulseKind::Exp),
            ..Default::default()
        };
        assert!(matches!(o.pulse_config(), Err(CliError::Usage(_))));
        let o = Options {
            pulse: Some(PulseKind::Exp),
            omega_ratio: Some(Real(-1.0)),
            ..Default::default()
        };
        assert!(matches!(o.pulse_config(), Err(CliError::Model(_))));
    }
}
