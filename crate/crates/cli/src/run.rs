use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cvwave_core::dynamics::{integrate, stable_dt, StepOptions, Trajectory};
use cvwave_core::reconstruct::{pressure_field, sample_lattice};
use cvwave_core::steady::{continuation_run, NewtonOptions};
use cvwave_core::Model;

use crate::config::{Mode, RunConfig};
use crate::error::{CliError, Result};
use crate::initial::build_initial_state;
use crate::output::write_table;
use crate::snapshot::Snapshot;
use crate::validate::{run_suite, SuiteOptions};

pub const DIAGNOSTICS_HEADER: [&str; 8] = [
    "t",
    "H_surface",
    "mass",
    "min_eta",
    "max_eta",
    "solve_residual",
    "max_deviation",
    "eta_tail",
];
pub const FAMILY_HEADER: [&str; 5] = ["amplitude", "c", "k_flux", "H_hat", "residual_norm"];
pub const FIELD_HEADER: [&str; 6] = ["x", "y", "u", "v", "psi", "P"];

/// What a finished run produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Human-readable summary, one line per entry.
    pub lines: Vec<String>,
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

struct RunLog {
    path: PathBuf,
    text: String,
}

impl RunLog {
    fn new(dir: &Path, config: &RunConfig) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "cvwave {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(text, "mode {:?}", config.mode);
        let _ = writeln!(text, "params {:?}", config.params);
        let _ = writeln!(text, "initial {:?}", config.initial);
        Self {
            path: dir.join("run.log"),
            text,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn save(&self) -> Result<()> {
        fs::write(&self.path, &self.text).map_err(|e| CliError::io(&self.path, e))
    }
}

fn write_diagnostics(path: &Path, traj: &Trajectory) -> Result<()> {
    write_table(
        path,
        &DIAGNOSTICS_HEADER,
        traj.diagnostics.iter().map(|d| {
            vec![
                d.t,
                d.h_surface,
                d.mass,
                d.min_eta,
                d.max_eta,
                d.solve_residual,
                d.max_deviation,
                d.eta_tail,
            ]
        }),
    )
}

fn simulate(config: &RunConfig, model: &Model, dir: &Path, log: &mut RunLog) -> Result<RunReport> {
    let t = &config.time;
    let state0 = build_initial_state(config, model)?;
    let t_end = t
        .t_end
        .ok_or_else(|| CliError::config("t_end", "required for simulate"))?;
    let guide = stable_dt(model);
    let dt = t.dt.unwrap_or(guide);
    log.line(format!("dt {dt:e} (guidance {guide:e})"));
    let opts = StepOptions {
        gauge_normalize: t.gauge_normalize,
        collapse_floor: t.collapse_floor,
        dealias: true,
    };
    let result = integrate(
        model,
        &state0,
        state0.t + t_end,
        dt,
        t.diagnostics_stride,
        opts,
    );
    let (traj, failure) = match result {
        Ok(tr) => (tr, None),
        Err(f) => (f.partial, Some(f.error)),
    };
    let mut report = RunReport::default();
    let diag = dir.join("diagnostics.csv");
    write_diagnostics(&diag, &traj)?;
    report.files.push(diag);

    if t.snapshot_stride > 0 {
        let every = t.snapshot_stride / t.diagnostics_stride;
        let last = traj.snapshots.len().saturating_sub(1);
        for (i, s) in traj.snapshots.iter().enumerate() {
            if i % every == 0 || i == last {
                let path = dir.join(format!("snapshot_{i:06}.txt"));
                Snapshot::new(&model.params, s.clone()).write(&path)?;
                report.files.push(path);
            }
        }
    }

    if let Some(err) = failure {
        log.line(format!("aborted: {err}"));
        return Err(CliError::from(err));
    }
    let h0 = traj.diagnostics[0].h_surface;
    let drift = traj
        .diagnostics
        .iter()
        .map(|d| (d.h_surface - h0).abs() / h0.abs().max(1e-300))
        .fold(0.0, f64::max);
    let summary = format!(
        "{} steps recorded, final t = {:.6}, max relative energy drift {drift:.3e}",
        traj.snapshots.len(),
        traj.last().map_or(0.0, |s| s.t)
    );
    log.line(&summary);
    report.lines.push(summary);
    if !(drift <= t.drift_threshold) {
        return Err(CliError::Instability(format!(
            "relative energy drift {drift:.3e} exceeds {:.1e}; reduce dt (guidance {guide:.3e})",
            t.drift_threshold
        )));
    }
    Ok(report)
}

fn steady(config: &RunConfig, model: &Model, dir: &Path, log: &mut RunLog) -> Result<RunReport> {
    let s = &config.steady;
    let opts = NewtonOptions {
        tol: s.newton_tol,
        max_iter: s.max_iter,
        ..NewtonOptions::default()
    };
    let (family, failure) = match continuation_run(model, s.branch, &s.amplitudes, opts) {
        Ok(f) => (f, None),
        Err(f) => (f.family, Some((f.amplitude, f.failure.error))),
    };
    let mut report = RunReport::default();
    let table = dir.join("family.csv");
    write_table(
        &table,
        &FAMILY_HEADER,
        family
            .iter()
            .map(|w| vec![w.amplitude, w.c, w.k_flux, w.h_hat, w.residual_norm]),
    )?;
    report.files.push(table);
    for (i, w) in family.iter().enumerate() {
        let path = dir.join(format!("member_{i:03}.txt"));
        Snapshot::new(&model.params, w.state()).write(&path)?;
        report.files.push(path);
        let line = format!(
            "a = {:.6e}  c = {:.12e}  k = {:.12e}  residual = {:.3e}  iterations = {}",
            w.amplitude, w.c, w.k_flux, w.residual_norm, w.iterations
        );
        log.line(&line);
        report.lines.push(line);
    }
    if let Some((a, err)) = failure {
        log.line(format!("stopped at amplitude {a:e}: {err}"));
        return Err(CliError::NonConvergence(format!(
            "continuation stopped at amplitude {a:e}: {err}"
        )));
    }
    Ok(report)
}

fn reconstruct(config: &RunConfig, model: &Model, dir: &Path) -> Result<RunReport> {
    let state = build_initial_state(config, model)?;
    let o = &config.output;
    let pts = sample_lattice(model, &state.eta, o.lattice_nx, o.lattice_ny)?;
    let samples = pressure_field(model, &state, &pts)?;
    let path = dir.join("fields.csv");
    write_table(
        &path,
        &FIELD_HEADER,
        samples
            .iter()
            .map(|s| vec![s.x, s.y, s.u, s.v, s.psi, s.pressure.unwrap_or(f64::NAN)]),
    )?;
    Ok(RunReport {
        files: vec![path],
        lines: vec![format!("{} samples", samples.len())],
    })
}

/// Runs the property suite and fails if any check fails.
pub fn validate(config: &RunConfig, opts: SuiteOptions) -> Result<RunReport> {
    let checks = run_suite(&config.params, opts);
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let lines = checks.iter().map(|c| c.to_string()).collect();
    if failed > 0 {
        for c in &checks {
            println!("{c}");
        }
        return Err(CliError::Validation(failed));
    }
    Ok(RunReport {
        files: vec![],
        lines,
    })
}

/// Runs `config` (all modes except validate write into `config.output.dir`).
pub fn run(config: &RunConfig) -> Result<RunReport> {
    if config.mode == Mode::Validate {
        return validate(config, SuiteOptions::default());
    }
    let model = Model::new(config.params.clone())?;
    let dir = &config.output.dir;
    prepare_dir(dir)?;
    let mut log = RunLog::new(dir, config);
    let result = match config.mode {
        Mode::Simulate => simulate(config, &model, dir, &mut log),
        Mode::Steady => steady(config, &model, dir, &mut log),
        Mode::Reconstruct => reconstruct(config, &model, dir),
        Mode::Validate => unreachable!(),
    };
    if let Err(e) = &result {
        log.line(format!("error: {e}"));
    }
    log.save()?;
    result
}
