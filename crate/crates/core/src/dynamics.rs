//! Time evolution of `(eta, xi)`:
//!
//! ```text
//! eta_t =  dH/dxi
//! xi_t  = -dH/deta - omega chi
//! ```
//!
//! For `omega = 0` this is the canonical Hamiltonian system. The extra term
//! does no work: `dH/dt = -omega <chi, eta_t> = omega <chi, chi_x> = 0`.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, WaveError};
use crate::hamiltonian::{self, grad_eta, grad_xi};
use crate::harmonic::{self, SurfaceTraces};
use crate::linalg::Matrix;
use crate::params::{check_above_bed, Model, SurfaceState, WaveParameters};

/// Time derivatives of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct Rhs {
    pub eta_dot: Vec<f64>,
    pub xi_dot: Vec<f64>,
    pub solve_residual: f64,
}

/// The pieces the right-hand side is assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsTerms {
    pub traces: SurfaceTraces,
    pub grad_eta: Vec<f64>,
    pub grad_xi: Vec<f64>,
}

pub fn rhs_terms(model: &Model, state: &SurfaceState) -> Result<RhsTerms> {
    state.check(model.n())?;
    let traces = harmonic::traces(model, &state.eta, &state.xi)?;
    let ge = grad_eta(model, state, &traces)?;
    let gx = grad_xi(model, state, &traces)?;
    Ok(RhsTerms {
        traces,
        grad_eta: ge,
        grad_xi: gx,
    })
}

/// Right-hand side, dealiased according to `params.dealias_fraction`.
pub fn rhs(model: &Model, state: &SurfaceState) -> Result<Rhs> {
    rhs_with(model, state, true)
}

/// Right-hand side with the dealiasing filter switched on or off.
pub fn rhs_with(model: &Model, state: &SurfaceState, dealias: bool) -> Result<Rhs> {
    let terms = rhs_terms(model, state)?;
    let omega = model.params.omega;
    let eta_dot = terms.grad_xi;
    let xi_dot: Vec<f64> = terms
        .grad_eta
        .iter()
        .zip(&terms.traces.chi)
        .map(|(g, c)| -g - omega * c)
        .collect();
    let (eta_dot, xi_dot) = if dealias && model.params.dealias_fraction < 1.0 {
        let cut = model.grid.dealias_cutoff(model.params.dealias_fraction);
        (
            model.grid.lowpass(&eta_dot, cut)?,
            model.grid.lowpass(&xi_dot, cut)?,
        )
    } else {
        (eta_dot, xi_dot)
    };
    Ok(Rhs {
        eta_dot,
        xi_dot,
        solve_residual: terms.traces.solve_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    /// Remove `mean(xi)` after each step.
    pub gauge_normalize: bool,
    /// Steps leaving `min(eta)` below `collapse_floor * d_ref` fail.
    pub collapse_floor: f64,
    pub dealias: bool,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            gauge_normalize: true,
            collapse_floor: 1e-6,
            dealias: true,
        }
    }
}

/// One classical Runge-Kutta step of size `dt` (negative `dt` steps backwards).
pub fn step_rk4(
    model: &Model,
    state: &SurfaceState,
    dt: f64,
    opts: StepOptions,
) -> Result<SurfaceState> {
    if !(dt.is_finite() && dt != 0.0) {
        return Err(WaveError::Config {
            field: "dt",
            reason: "time step must be finite and nonzero",
        });
    }
    state.check(model.n())?;
    let stage = |s: &SurfaceState, idx: usize| {
        rhs_with(model, s, opts.dealias).map_err(|e| WaveError::StepFailed {
            stage: idx,
            source: Box::new(e),
        })
    };
    let offset = |k: &Rhs, h: f64| SurfaceState {
        t: state.t + h,
        eta: state
            .eta
            .iter()
            .zip(&k.eta_dot)
            .map(|(a, b)| a + h * b)
            .collect(),
        xi: state
            .xi
            .iter()
            .zip(&k.xi_dot)
            .map(|(a, b)| a + h * b)
            .collect(),
    };
    let k1 = stage(state, 1)?;
    let k2 = stage(&offset(&k1, 0.5 * dt), 2)?;
    let k3 = stage(&offset(&k2, 0.5 * dt), 3)?;
    let k4 = stage(&offset(&k3, dt), 4)?;
    let combine = |base: &[f64], f: fn(&Rhs) -> &Vec<f64>| -> Vec<f64> {
        let (a, b, c, d) = (f(&k1), f(&k2), f(&k3), f(&k4));
        (0..base.len())
            .map(|j| base[j] + dt / 6.0 * (a[j] + 2.0 * b[j] + 2.0 * c[j] + d[j]))
            .collect()
    };
    let eta = combine(&state.eta, |k| &k.eta_dot);
    let mut xi = combine(&state.xi, |k| &k.xi_dot);
    if opts.gauge_normalize {
        let mean = model.grid.mean(&xi);
        xi.iter_mut().for_each(|v| *v -= mean);
    }
    check_above_bed(&eta, opts.collapse_floor * model.params.d_ref)?;
    Ok(SurfaceState {
        t: state.t + dt,
        eta,
        xi,
    })
}

/// Frequencies `sigma` of the two linear waves `exp(i(k x - sigma t))` on
/// still water of depth `d_ref`, largest first. They solve
/// `W^2 - omega tanh(k d) W - g k tanh(k d) = 0` with `W = sigma + omega d k`.
pub fn linear_frequencies(params: &WaveParameters, k: f64) -> (f64, f64) {
    let d = params.d_ref;
    let tau = (k * d).tanh();
    let (om, g) = (params.omega, params.gravity);
    let disc = (om * om * tau * tau + 4.0 * g * k * tau).sqrt();
    let doppler = om * d * k;
    (
        (om * tau + disc) / 2.0 - doppler,
        (om * tau - disc) / 2.0 - doppler,
    )
}

/// Linear phase speeds `sigma / k`, largest first.
pub fn linear_phase_speeds(params: &WaveParameters, k: f64) -> (f64, f64) {
    let (a, b) = linear_frequencies(params, k);
    (a / k, b / k)
}

/// Time step guidance `0.5 / sigma_max`, with `sigma_max` the largest linear
/// frequency on the grid.
pub fn stable_dt(model: &Model) -> f64 {
    let sigma_max = model.grid.wavenumbers()[1..]
        .iter()
        .map(|&k| {
            let (a, b) = linear_frequencies(&model.params, k);
            a.abs().max(b.abs())
        })
        .fold(0.0, f64::max);
    0.5 / sigma_max
}

/// One diagnostics row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub h_surface: f64,
    pub mass: f64,
    pub min_eta: f64,
    pub max_eta: f64,
    /// `max |eta - mean(eta)|`.
    pub max_deviation: f64,
    pub solve_residual: f64,
    /// Relative spectral content of `eta` above the dealiasing cutoff.
    pub eta_tail: f64,
}

pub fn diagnostics(model: &Model, state: &SurfaceState) -> Result<Diagnostics> {
    state.check(model.n())?;
    let tr = harmonic::traces(model, &state.eta, &state.xi)?;
    let h = hamiltonian::surface_terms_from(model, state, &tr.t_xi)?.total();
    let mean = model.grid.mean(&state.eta);
    let cut = model.grid.dealias_cutoff(model.params.dealias_fraction);
    Ok(Diagnostics {
        t: state.t,
        h_surface: h,
        mass: hamiltonian::mass(model, state),
        min_eta: state.eta.iter().cloned().fold(f64::INFINITY, f64::min),
        max_eta: state.eta.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        max_deviation: state
            .eta
            .iter()
            .map(|e| (e - mean).abs())
            .fold(0.0, f64::max),
        solve_residual: tr.solve_residual,
        eta_tail: model.grid.spectral_tail(&state.eta, cut)?,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub snapshots: Vec<SurfaceState>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&SurfaceState> {
        self.snapshots.last()
    }

    fn record(&mut self, model: &Model, state: SurfaceState) -> Result<()> {
        self.diagnostics.push(diagnostics(model, &state)?);
        self.snapshots.push(state);
        Ok(())
    }
}

/// A failed integration: everything recorded before the error, plus the error.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrateFailure {
    pub partial: Trajectory,
    pub error: WaveError,
}

/// Advances `state0` to `t_end` with steps of `dt` (the last step is shortened
/// if `dt` does not divide the interval), recording every `output_stride`
/// steps and at the end.
pub fn integrate(
    model: &Model,
    state0: &SurfaceState,
    t_end: f64,
    dt: f64,
    output_stride: usize,
    opts: StepOptions,
) -> core::result::Result<Trajectory, IntegrateFailure> {
    let mut traj = Trajectory::default();
    let fail = |partial: Trajectory, error| IntegrateFailure { partial, error };
    let duration = t_end - state0.t;
    if !(duration >= 0.0) || !(dt > 0.0) || output_stride == 0 {
        return Err(fail(
            traj,
            WaveError::Config {
                field: "time",
                reason: "need t_end >= t0, dt > 0 and a positive output stride",
            },
        ));
    }
    if let Err(e) = traj.record(model, state0.clone()) {
        return Err(fail(traj, e));
    }
    let steps = (duration / dt - 1e-9).ceil().max(0.0) as usize;
    let mut state = state0.clone();
    for i in 1..=steps {
        let t_next = if i == steps {
            t_end
        } else {
            state0.t + i as f64 * dt
        };
        let h = t_next - state.t;
        state = match step_rk4(model, &state, h, opts) {
            Ok(mut s) => {
                s.t = t_next;
                s
            }
            Err(e) => return Err(fail(traj, e)),
        };
        if i % output_stride == 0 || i == steps {
            if let Err(e) = traj.record(model, state.clone()) {
                return Err(fail(traj, e));
            }
        }
    }
    Ok(traj)
}

/// Central-difference Jacobian of [`rhs`] in the stacked `(eta, xi)`
/// coordinates, with the constant-`xi` direction projected out.
pub fn linearize(model: &Model, base: &SurfaceState, eps: f64) -> Result<Matrix> {
    base.check(model.n())?;
    if !(eps > 0.0) {
        return Err(WaveError::Config {
            field: "eps",
            reason: "finite-difference step must be positive",
        });
    }
    let n = model.n();
    let mut jac = Matrix::zeros(2 * n, 2 * n);
    let eval = |col: usize, h: f64| -> Result<Vec<f64>> {
        let mut s = base.clone();
        if col < n {
            s.eta[col] += h;
        } else {
            s.xi[col - n] += h;
        }
        let r = rhs(model, &s)?;
        let mut out = r.eta_dot;
        out.extend(r.xi_dot);
        Ok(out)
    };
    for col in 0..2 * n {
        let plus = eval(col, eps)?;
        let minus = eval(col, -eps)?;
        let c: Vec<f64> = plus
            .iter()
            .zip(&minus)
            .map(|(p, m)| (p - m) / (2.0 * eps))
            .collect();
        jac.set_col(col, &c);
    }
    // P J P, where P removes the mean of the xi block.
    let project_rows = |m: &mut Matrix| {
        for col in 0..2 * n {
            let mean = (n..2 * n).map(|i| m[(i, col)]).sum::<f64>() / n as f64;
            (n..2 * n).for_each(|i| m[(i, col)] -= mean);
        }
    };
    project_rows(&mut jac);
    let mut t = jac.transpose();
    project_rows(&mut t);
    Ok(t.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    #[test]
    fn equilibrium_rhs() {
        for omega in [0.0, 1.0, -2.5] {
            let m = model(32, omega);
            let g = m.params.gravity;
            let r = rhs(&m, &SurfaceState::flat(32, 1.0)).unwrap();
            assert!(r.eta_dot.iter().all(|v| v.abs() < 1e-12));
            assert!(r.xi_dot.iter().all(|v| (v + g).abs() < 1e-10));
        }
    }

    #[test]
    fn irrotational_rhs_is_canonical() {
        let mut r = rng(31);
        let m = model(32, 0.0);
        let s = random_state(&mut r, &m, 0.05, 0.3);
        let terms = rhs_terms(&m, &s).unwrap();
        let raw = rhs_with(&m, &s, false).unwrap();
        let neg: Vec<f64> = terms.grad_eta.iter().map(|v| -v).collect();
        assert_eq!(raw.xi_dot, neg);
        assert_eq!(raw.eta_dot, terms.grad_xi);
    }

    #[test]
    fn eta_dot_is_minus_chi_derivative_and_has_zero_mean() {
        let mut r = rng(32);
        let m = model(64, 1.4);
        let s = random_state(&mut r, &m, 0.05, 0.3);
        let rd = rhs(&m, &s).unwrap();
        let chi = hamiltonian::chi_of_state(&m, &s).unwrap();
        let chi_x = m.grid.derivative(&chi).unwrap();
        assert!(rd
            .eta_dot
            .iter()
            .zip(&chi_x)
            .all(|(e, c)| (e + c).abs() < 1e-10));
        assert!(m.grid.mean(&rd.eta_dot).abs() < 1e-14);
    }

    #[test]
    fn semi_discrete_energy_rate_vanishes() {
        let mut r = rng(33);
        for omega in [0.0, 2.0, -1.0] {
            let m = model(64, omega);
            let s = random_state(&mut r, &m, 0.05, 0.3);
            let t = rhs_terms(&m, &s).unwrap();
            let rd = rhs(&m, &s).unwrap();
            let rate =
                m.grid.inner(&t.grad_eta, &rd.eta_dot) + m.grid.inner(&t.grad_xi, &rd.xi_dot);
            let h = hamiltonian::energy_surface(&m, &s).unwrap();
            assert!(rate.abs() <= 1e-9 * h.abs(), "rate {rate:e}");
        }
    }

    #[test]
    fn gauge_shift_leaves_dynamics_unchanged() {
        let mut r = rng(34);
        let m = model(32, 0.7);
        let s = random_state(&mut r, &m, 0.05, 0.3);
        let mut shifted = s.clone();
        shifted.xi.iter_mut().for_each(|v| *v += 2.0);
        let (a, b) = (rhs(&m, &s).unwrap(), rhs(&m, &shifted).unwrap());
        assert!(max_abs_diff(&a.eta_dot, &b.eta_dot) < 1e-12);
        let centered = |v: &[f64]| {
            let mean = m.grid.mean(v);
            v.iter().map(|x| x - mean).collect::<Vec<_>>()
        };
        assert!(max_abs_diff(&centered(&a.xi_dot), &centered(&b.xi_dot)) < 1e-12);
    }

    #[test]
    fn equilibrium_is_a_fixed_point_of_the_step() {
        let m = model(32, 1.0);
        let s = SurfaceState::flat(32, 1.0);
        let next = step_rk4(&m, &s, 0.01, StepOptions::default()).unwrap();
        assert!(max_abs_diff(&next.eta, &s.eta) < 1e-14);
        assert!(max_abs_diff(&next.xi, &s.xi) < 1e-14);
        assert!((next.t - 0.01).abs() < 1e-16);
    }

    #[test]
    fn collapse_and_stage_failures() {
        let m = model(16, 0.0);
        let mut s = SurfaceState::flat(16, 1.0);
        s.eta[2] = 1e-3;
        s.xi = cos_mode(&m, 1, 50.0, 0.0);
        match step_rk4(&m, &s, 0.5, StepOptions::default()) {
            Err(WaveError::StepFailed { stage, .. }) => assert!(stage >= 2),
            Err(WaveError::SurfaceCollapse { .. }) => {}
            other => panic!("expected a failure, got {other:?}"),
        }
        assert!(step_rk4(
            &m,
            &SurfaceState::flat(16, 1.0),
            0.0,
            StepOptions::default()
        )
        .is_err());
    }

    #[test]
    fn zero_duration_integration() {
        let m = model(16, 0.0);
        let s = SurfaceState::flat(16, 1.0);
        let traj = integrate(&m, &s, 0.0, 0.01, 1, StepOptions::default()).unwrap();
        assert_eq!(traj.snapshots.len(), 1);
        assert_eq!(traj.diagnostics.len(), 1);
    }

    #[test]
    fn integration_records_at_stride_and_end() {
        let m = model(16, 0.5);
        let mut s = SurfaceState::flat(16, 1.0);
        s.eta = cos_mode(&m, 1, 0.01, 0.0).iter().map(|v| 1.0 + v).collect();
        let traj = integrate(&m, &s, 0.105, 0.01, 4, StepOptions::default()).unwrap();
        let times: Vec<f64> = traj.diagnostics.iter().map(|d| d.t).collect();
        assert_eq!(times.len(), 4);
        assert!(times.windows(2).all(|w| w[1] > w[0]));
        assert!((times[1] - 0.04).abs() < 1e-15 && (times[3] - 0.105).abs() < 1e-15);
    }

    #[test]
    fn failed_integration_keeps_partial_trajectory() {
        let m = model(16, 0.0);
        let mut s = SurfaceState::flat(16, 1.0);
        s.eta = cos_mode(&m, 1, 0.9, 0.0).iter().map(|v| 1.0 + v).collect();
        s.xi = cos_mode(&m, 3, 5.0, 0.0);
        let err = integrate(&m, &s, 100.0, 0.2, 1, StepOptions::default()).unwrap_err();
        assert!(!err.partial.snapshots.is_empty());
    }

    #[test]
    fn rk4_is_fourth_order() {
        let m = model(32, 1.0);
        let d = 1.0;
        let mut s = SurfaceState::flat(32, d);
        s.eta = cos_mode(&m, 1, 0.05, 0.0).iter().map(|v| d + v).collect();
        let (c, _) = linear_phase_speeds(&m.params, 1.0);
        let t_end = m.params.length / c;
        let run = |dt: f64| {
            integrate(&m, &s, t_end, dt, 1_000_000, StepOptions::default())
                .unwrap()
                .last()
                .unwrap()
                .eta
                .clone()
        };
        let base = t_end / 40.0;
        let reference = run(base / 8.0);
        let e1 = max_abs_diff(&run(base), &reference);
        let e2 = max_abs_diff(&run(base / 2.0), &reference);
        let order = (e1 / e2).log2();
        assert!(order >= 3.8, "order {order} ({e1:e}, {e2:e})");
    }

    #[test]
    fn forward_then_backward_returns_home() {
        let m = model(32, -1.0);
        let mut r = rng(35);
        let s = random_state(&mut r, &m, 0.03, 0.1);
        let opts = StepOptions::default();
        let march = |from: &SurfaceState, dt: f64, steps: usize| {
            (0..steps).fold(from.clone(), |st, _| step_rk4(&m, &st, dt, opts).unwrap())
        };
        let dt = 0.02;
        let fine = march(&s, dt / 2.0, 40);
        let coarse = march(&s, dt, 20);
        let one_way = max_abs_diff(&coarse.eta, &fine.eta);
        let back = march(&coarse, -dt, 20);
        let err = max_abs_diff(&back.eta, &s.eta);
        assert!(err <= 10.0 * one_way, "{err:e} vs {one_way:e}");
        assert!(back.t.abs() < 1e-14);
    }

    #[test]
    fn linear_speeds_reduce_to_classical_case() {
        let p = WaveParameters::default();
        let (a, b) = linear_phase_speeds(&p, 1.0);
        let c0 = (p.gravity * (1.0f64).tanh()).sqrt();
        assert!((a - c0).abs() < 1e-14 && (b + c0).abs() < 1e-14);
        let p = WaveParameters { omega: 1e-9, ..p };
        let (a2, _) = linear_phase_speeds(&p, 1.0);
        assert!((a2 - c0).abs() < 1e-8);
    }

    #[test]
    fn linearization_is_symplectic_without_vorticity() {
        let m = model(16, 0.0);
        let n = 16;
        let a = linearize(&m, &SurfaceState::flat(n, 1.0), 1e-6).unwrap();
        // J A with J = [[0, I], [-I, 0]].
        let mut ja = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..2 * n {
                ja[(i, j)] = a[(i + n, j)];
                ja[(i + n, j)] = -a[(i, j)];
            }
        }
        let asym = (0..2 * n)
            .flat_map(|i| (0..2 * n).map(move |j| (i, j)))
            .map(|(i, j)| (ja[(i, j)] - ja[(j, i)]).abs())
            .fold(0.0, f64::max);
        assert!(asym < 1e-6, "{asym:e}");
    }
}
