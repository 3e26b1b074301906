//! Run configuration.
//!
//! ```toml
//! mode = "simulate"          # simulate | steady | validate | reconstruct
//!
//! [physics]
//! L = 6.283185307179586      # period
//! g = 9.81
//! omega = 0.0                # vorticity
//! d_ref = 1.0                # mean depth
//! p_atm = 0.0
//!
//! [numerics]
//! N = 64                     # collocation nodes, even
//! dealias = 0.6666666666666666
//! solver_tol = 1e-10
//!
//! [initial]
//! ic = "linear-mode"         # flat | linear-mode | custom | snapshot
//! m = 1
//! amplitude = 0.01
//! branch = "positive"        # positive | negative
//! eta_modes = [[2, 0.001, 0.0]]   # custom: [m, cos, sin] added to d_ref
//! xi_modes = [[1, 0.0, 0.01]]
//! path = "state.txt"         # snapshot
//!
//! [time]
//! t_end = 10.0
//! dt = 0.01                  # default: stability guidance
//! diagnostics_stride = 1
//! snapshot_stride = 100      # 0 disables snapshots
//! gauge_normalize = true
//! collapse_floor = 1e-6      # relative to d_ref
//! drift_threshold = 1e-4     # relative energy drift flagged as instability
//!
//! [steady]
//! branch = "positive"
//! amplitudes = [0.0, 0.02, 0.04]
//! newton_tol = 1e-10
//! max_iter = 25
//!
//! [output]
//! dir = "out"
//! lattice_nx = 64
//! lattice_ny = 17
//! ```

use std::path::{Path, PathBuf};

use cvwave_core::steady::Branch;
use cvwave_core::WaveParameters;
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simulate,
    Steady,
    Validate,
    Reconstruct,
}

impl Mode {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "simulate" => Ok(Mode::Simulate),
            "steady" => Ok(Mode::Steady),
            "validate" => Ok(Mode::Validate),
            "reconstruct" => Ok(Mode::Reconstruct),
            other => Err(CliError::config("mode", format!("unknown mode {other:?}"))),
        }
    }
}

/// A Fourier mode `a cos(k_m x) + b sin(k_m x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub m: usize,
    pub cos: f64,
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Flat,
    LinearMode {
        m: usize,
        amplitude: f64,
        branch: Branch,
    },
    Custom {
        eta: Vec<ModeSpec>,
        xi: Vec<ModeSpec>,
    },
    Snapshot(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeControls {
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub diagnostics_stride: usize,
    pub snapshot_stride: usize,
    pub gauge_normalize: bool,
    pub collapse_floor: f64,
    pub drift_threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyControls {
    pub branch: Branch,
    pub amplitudes: Vec<f64>,
    pub newton_tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputControls {
    pub dir: PathBuf,
    pub lattice_nx: usize,
    pub lattice_ny: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: WaveParameters,
    pub mode: Mode,
    pub initial: InitialCondition,
    pub time: TimeControls,
    pub steady: SteadyControls,
    pub output: OutputControls,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<String>,
    #[serde(default)]
    physics: RawPhysics,
    #[serde(default)]
    numerics: RawNumerics,
    #[serde(default)]
    initial: RawInitial,
    #[serde(default)]
    time: RawTime,
    #[serde(default)]
    steady: RawSteady,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    #[serde(rename = "L")]
    length: Option<f64>,
    g: Option<f64>,
    omega: Option<f64>,
    d_ref: Option<f64>,
    p_atm: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    #[serde(rename = "N")]
    n: Option<i64>,
    dealias: Option<f64>,
    solver_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    ic: Option<String>,
    m: Option<i64>,
    amplitude: Option<f64>,
    branch: Option<String>,
    eta_modes: Option<Vec<(i64, f64, f64)>>,
    xi_modes: Option<Vec<(i64, f64, f64)>>,
    path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_end: Option<f64>,
    dt: Option<f64>,
    diagnostics_stride: Option<i64>,
    snapshot_stride: Option<i64>,
    gauge_normalize: Option<bool>,
    collapse_floor: Option<f64>,
    drift_threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSteady {
    branch: Option<String>,
    amplitudes: Option<Vec<f64>>,
    newton_tol: Option<f64>,
    max_iter: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    lattice_nx: Option<i64>,
    lattice_ny: Option<i64>,
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(field, "must be finite and positive"))
    }
}

fn count(field: &str, v: i64, min: i64) -> Result<usize> {
    if v >= min {
        Ok(v as usize)
    } else {
        Err(CliError::config(
            field,
            format!("must be an integer >= {min}"),
        ))
    }
}

fn branch(field: &str, s: Option<&str>) -> Result<Branch> {
    match s.unwrap_or("positive") {
        "positive" => Ok(Branch::Positive),
        "negative" => Ok(Branch::Negative),
        other => Err(CliError::config(
            field,
            format!("expected \"positive\" or \"negative\", got {other:?}"),
        )),
    }
}

fn modes(field: &str, list: Option<Vec<(i64, f64, f64)>>) -> Result<Vec<ModeSpec>> {
    list.unwrap_or_default()
        .into_iter()
        .map(|(m, cos, sin)| {
            Ok(ModeSpec {
                m: count(field, m, 1)?,
                cos,
                sin,
            })
        })
        .collect()
}

/// Parses and validates a configuration. Relative snapshot paths are resolved
/// against `base`.
pub fn parse_config_in(text: &str, base: &Path) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let defaults = WaveParameters::default();
    let ph = raw.physics;
    let nu = raw.numerics;
    let n = match nu.n {
        Some(n) if n >= 8 && n % 2 == 0 => n as usize,
        Some(_) => {
            return Err(CliError::config(
                "N",
                "number of nodes must be even and at least 8",
            ))
        }
        None => defaults.n,
    };
    let params = WaveParameters {
        length: positive("L", ph.length.unwrap_or(defaults.length))?,
        gravity: positive("g", ph.g.unwrap_or(defaults.gravity))?,
        omega: ph.omega.unwrap_or(defaults.omega),
        d_ref: positive("d_ref", ph.d_ref.unwrap_or(defaults.d_ref))?,
        p_atm: ph.p_atm.unwrap_or(defaults.p_atm),
        n,
        dealias_fraction: nu.dealias.unwrap_or(defaults.dealias_fraction),
        solver_tol: nu.solver_tol.unwrap_or(defaults.solver_tol),
    };
    if !params.omega.is_finite() {
        return Err(CliError::config("omega", "must be finite"));
    }
    params.validate().map_err(|e| match e {
        cvwave_core::WaveError::Config { field, reason } => CliError::config(field, reason),
        other => CliError::Config(other.to_string()),
    })?;

    let mode = Mode::parse(raw.mode.as_deref().unwrap_or("simulate"))?;

    let ini = raw.initial;
    let initial = match ini.ic.as_deref().unwrap_or("flat") {
        "flat" => InitialCondition::Flat,
        "linear-mode" => InitialCondition::LinearMode {
            m: count("m", ini.m.unwrap_or(1), 1)?,
            amplitude: ini
                .amplitude
                .ok_or_else(|| CliError::config("amplitude", "required for linear-mode"))?,
            branch: branch("branch", ini.branch.as_deref())?,
        },
        "custom" => InitialCondition::Custom {
            eta: modes("eta_modes", ini.eta_modes)?,
            xi: modes("xi_modes", ini.xi_modes)?,
        },
        "snapshot" => {
            let path = ini
                .path
                .ok_or_else(|| CliError::config("path", "required for snapshot"))?;
            let path = if path.is_relative() {
                base.join(path)
            } else {
                path
            };
            if !path.is_file() {
                return Err(CliError::config(
                    "path",
                    format!("{} does not exist", path.display()),
                ));
            }
            InitialCondition::Snapshot(path)
        }
        other => {
            return Err(CliError::config(
                "ic",
                format!("unknown initial condition {other:?}"),
            ))
        }
    };

    let t = raw.time;
    let time = TimeControls {
        t_end: t
            .t_end
            .map(|v| {
                if v >= 0.0 {
                    Ok(v)
                } else {
                    Err(CliError::config("t_end", "must be >= 0"))
                }
            })
            .transpose()?,
        dt: t.dt.map(|v| positive("dt", v)).transpose()?,
        diagnostics_stride: count("diagnostics_stride", t.diagnostics_stride.unwrap_or(1), 1)?,
        snapshot_stride: count("snapshot_stride", t.snapshot_stride.unwrap_or(0), 0)?,
        gauge_normalize: t.gauge_normalize.unwrap_or(true),
        collapse_floor: positive("collapse_floor", t.collapse_floor.unwrap_or(1e-6))?,
        drift_threshold: positive("drift_threshold", t.drift_threshold.unwrap_or(1e-4))?,
    };
    if !time.snapshot_stride.is_multiple_of(time.diagnostics_stride) {
        return Err(CliError::config(
            "snapshot_stride",
            "must be a multiple of diagnostics_stride",
        ));
    }

    let st = raw.steady;
    let steady = SteadyControls {
        branch: branch("branch", st.branch.as_deref())?,
        amplitudes: st
            .amplitudes
            .unwrap_or_else(|| vec![0.0, 0.01, 0.02, 0.03, 0.04, 0.05]),
        newton_tol: positive("newton_tol", st.newton_tol.unwrap_or(1e-10))?,
        max_iter: count("max_iter", st.max_iter.unwrap_or(25), 1)?,
    };
    let a = &steady.amplitudes;
    if a.is_empty() || a[0] < 0.0 || a.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::config(
            "amplitudes",
            "must be non-empty, non-negative and increasing",
        ));
    }

    let out = raw.output;
    let output = OutputControls {
        dir: out.dir.unwrap_or_else(|| PathBuf::from("out")),
        lattice_nx: count("lattice_nx", out.lattice_nx.unwrap_or(64), 1)?,
        lattice_ny: count("lattice_ny", out.lattice_ny.unwrap_or(17), 2)?,
    };

    Ok(RunConfig {
        params,
        mode,
        initial,
        time,
        steady,
        output,
    })
}

/// [`parse_config_in`] relative to the working directory.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_in(text, Path::new("."))
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_in(&text, path.parent().unwrap_or(Path::new(".")))
}
