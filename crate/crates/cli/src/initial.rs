use cvwave_core::dynamics::linear_phase_speeds;
use cvwave_core::steady::Branch;
use cvwave_core::{Model, SurfaceState, WaveError};

use crate::config::{InitialCondition, ModeSpec, RunConfig};
use crate::error::{CliError, Result};
use crate::snapshot::Snapshot;

fn check_mode(model: &Model, m: usize) -> Result<()> {
    let cut = model.grid.dealias_cutoff(model.params.dealias_fraction);
    if m > cut {
        return Err(WaveError::Resolution("initial mode lies above the dealiasing cutoff").into());
    }
    Ok(())
}

/// Linear wave of mode `m` on the chosen branch:
/// `eta = d + a cos(k x)`, `xi = (c + omega d) a sin(k x) / tanh(k d)`.
pub fn linear_mode(
    model: &Model,
    m: usize,
    amplitude: f64,
    branch: Branch,
) -> Result<SurfaceState> {
    check_mode(model, m)?;
    let p = &model.params;
    if !(amplitude.abs() < p.d_ref) {
        return Err(CliError::config("amplitude", "must be smaller than d_ref"));
    }
    let k = model.grid.wavenumbers()[m];
    let (c_plus, c_minus) = linear_phase_speeds(p, k);
    let c = match branch {
        Branch::Positive => c_plus,
        Branch::Negative => c_minus,
    };
    let b = (c + p.omega * p.d_ref) * amplitude / (k * p.d_ref).tanh();
    let nodes = model.grid.nodes();
    Ok(SurfaceState {
        t: 0.0,
        eta: nodes
            .iter()
            .map(|x| p.d_ref + amplitude * (k * x).cos())
            .collect(),
        xi: nodes.iter().map(|x| b * (k * x).sin()).collect(),
    })
}

fn superpose(model: &Model, base: f64, modes: &[ModeSpec]) -> Result<Vec<f64>> {
    let mut f = vec![base; model.n()];
    for spec in modes {
        check_mode(model, spec.m)?;
        let k = model.grid.wavenumbers()[spec.m];
        for (v, x) in f.iter_mut().zip(model.grid.nodes()) {
            let (s, c) = (k * x).sin_cos();
            *v += spec.cos * c + spec.sin * s;
        }
    }
    Ok(f)
}

pub fn build_initial_state(config: &RunConfig, model: &Model) -> Result<SurfaceState> {
    let p = &model.params;
    let state = match &config.initial {
        InitialCondition::Flat => SurfaceState::flat(model.n(), p.d_ref),
        InitialCondition::LinearMode {
            m,
            amplitude,
            branch,
        } => linear_mode(model, *m, *amplitude, *branch)?,
        InitialCondition::Custom { eta, xi } => SurfaceState {
            t: 0.0,
            eta: superpose(model, p.d_ref, eta)?,
            xi: superpose(model, 0.0, xi)?,
        },
        InitialCondition::Snapshot(path) => {
            let snap = Snapshot::read(path)?;
            if snap.n() != model.n() {
                return Err(CliError::config(
                    "N",
                    format!(
                        "snapshot has {} nodes, configuration has {}",
                        snap.n(),
                        model.n()
                    ),
                ));
            }
            if (snap.length - p.length).abs() > 1e-12 * p.length {
                return Err(CliError::config(
                    "L",
                    "snapshot period differs from configuration",
                ));
            }
            snap.state
        }
    };
    if let Some((node, &min_eta)) = state
        .eta
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .filter(|(_, e)| !(**e > 0.0))
    {
        return Err(WaveError::SurfaceCollapse { min_eta, node }.into());
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn model(n: usize) -> Model {
        Model::new(cvwave_core::WaveParameters {
            n,
            omega: 0.5,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn flat_and_linear_shapes() {
        let m = model(32);
        let c = parse_config("[numerics]\nN = 32\n").unwrap();
        let s = build_initial_state(&c, &m).unwrap();
        assert!(s.eta.iter().all(|e| *e == 1.0) && s.xi.iter().all(|x| *x == 0.0));
        let s = linear_mode(&m, 2, 0.01, Branch::Positive).unwrap();
        assert!((s.eta[0] - 1.01).abs() < 1e-15);
        assert!(s.xi[0].abs() < 1e-15);
    }

    #[test]
    fn modes_above_cutoff_are_rejected() {
        let m = model(32);
        assert!(matches!(
            linear_mode(&m, 12, 0.01, Branch::Positive),
            Err(CliError::Solver(WaveError::Resolution(_)))
        ));
        let c = parse_config(
            "[numerics]\nN = 32\n[initial]\nic = \"custom\"\nxi_modes = [[15, 1.0, 0.0]]\n",
        )
        .unwrap();
        assert!(build_initial_state(&c, &m).is_err());
    }

    #[test]
    fn custom_modes_add_up() {
        let m = model(16);
        let c = parse_config("[numerics]\nN = 16\n[initial]\nic = \"custom\"\neta_modes = [[1, 0.1, 0.0], [2, 0.0, 0.05]]\n").unwrap();
        let s = build_initial_state(&c, &m).unwrap();
        for (e, x) in s.eta.iter().zip(m.grid.nodes()) {
            assert!((e - (1.0 + 0.1 * x.cos() + 0.05 * (2.0 * x).sin())).abs() < 1e-15);
        }
    }
}
