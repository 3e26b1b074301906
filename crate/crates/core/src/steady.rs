//! Traveling waves `eta(x - c t)`, `xi(x - c t)`.
//!
//! In the moving frame the surface is a streamline, so `chi - c eta` equals a
//! constant `k`, the relative mass flux. The traveling equations are
//!
//! ```text
//! grad_xi + c eta_x = 0
//! -grad_eta - omega (k + c eta) + c xi_x = B
//! ```
//!
//! with `B` a Bernoulli constant absorbed into the gauge of `xi`. They are the
//! stationarity conditions of `H^ = H + omega k int eta + (c omega / 2) int eta^2`
//! for the moving-frame flow.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::linear_phase_speeds;
use crate::error::{Result, WaveError};
use crate::grid::Spectrum;
use crate::hamiltonian::{self, grad_eta, grad_xi};
use crate::harmonic;
use crate::linalg::{least_squares, Matrix};
use crate::params::{Model, SurfaceState, WaveParameters};

/// A converged traveling wave.
#[derive(Debug, Clone, PartialEq)]
pub struct TravelingWave {
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    pub c: f64,
    pub k_flux: f64,
    /// Max departure of `chi - c eta` from `k_flux`.
    pub flux_deviation: f64,
    /// Bernoulli constant: the mean of the `xi` residual.
    pub gauge: f64,
    pub residual_norm: f64,
    /// First cosine coefficient of `eta`.
    pub amplitude: f64,
    pub h_hat: f64,
    pub iterations: usize,
    pub params: WaveParameters,
}

impl TravelingWave {
    pub fn state(&self) -> SurfaceState {
        SurfaceState {
            t: 0.0,
            eta: self.eta.clone(),
            xi: self.xi.clone(),
        }
    }
}

/// Starting point for [`traveling_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Guess {
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Finite-difference step for the Jacobian columns.
    pub fd_step: f64,
    /// Jacobians whose QR diagonal ratio falls below this are singular.
    pub min_pivot_ratio: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 25,
            fd_step: 1e-6,
            min_pivot_ratio: 1e-12,
        }
    }
}

/// Failed Newton solve, with the best iterate when one was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonFailure {
    pub error: WaveError,
    pub best: Option<Box<TravelingWave>>,
}

impl From<NewtonFailure> for WaveError {
    fn from(f: NewtonFailure) -> Self {
        f.error
    }
}

impl From<WaveError> for NewtonFailure {
    fn from(error: WaveError) -> Self {
        Self { error, best: None }
    }
}

fn check_speed(c: f64) -> Result<()> {
    if !(c.is_finite() && c != 0.0) {
        return Err(WaveError::Config {
            field: "c",
            reason: "wave speed must be finite and nonzero",
        });
    }
    Ok(())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

/// Mean of `chi - c eta` over the nodes and the max departure from it.
pub fn mass_flux(model: &Model, state: &SurfaceState, c: f64) -> Result<(f64, f64)> {
    check_speed(c)?;
    let chi = hamiltonian::chi_of_state(model, state)?;
    let q: Vec<f64> = chi.iter().zip(&state.eta).map(|(x, e)| x - c * e).collect();
    let k = model.grid.mean(&q);
    Ok((k, q.iter().map(|v| (v - k).abs()).fold(0.0, f64::max)))
}

/// `H^ = H + omega k int eta + (c omega / 2) int eta^2`.
pub fn steady_hamiltonian(model: &Model, state: &SurfaceState, c: f64, k: f64) -> Result<f64> {
    let h = hamiltonian::energy_surface(model, state)?;
    let omega = model.params.omega;
    let grid = &model.grid;
    let sq: Vec<f64> = state.eta.iter().map(|e| e * e).collect();
    Ok(h + omega * k * grid.integrate(&state.eta) + 0.5 * c * omega * grid.integrate(&sq))
}

/// Residual of the traveling equations with `chi` in place of `k + c eta`:
/// `R_eta = grad_xi + c eta_x`, `R_xi = -grad_eta - omega chi + c xi_x`.
pub fn traveling_residual(
    model: &Model,
    eta: &[f64],
    xi: &[f64],
    c: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_speed(c)?;
    let state = SurfaceState::new(0.0, eta.to_vec(), xi.to_vec())?;
    state.check(model.n())?;
    let tr = harmonic::traces(model, eta, xi)?;
    let grid = &model.grid;
    let omega = model.params.omega;
    let (eta_x, xi_x) = (grid.derivative(eta)?, grid.derivative(xi)?);
    let gx = grad_xi(model, &state, &tr)?;
    let ge = grad_eta(model, &state, &tr)?;
    let r_eta = gx.iter().zip(&eta_x).map(|(g, e)| g + c * e).collect();
    let r_xi = (0..eta.len())
        .map(|j| -ge[j] - omega * tr.chi[j] + c * xi_x[j])
        .collect();
    Ok((r_eta, r_xi))
}

/// Traveling residual with the flux `k` given explicitly:
/// `R_xi = -grad_eta - omega (k + c eta) + c xi_x`.
pub fn flux_residual(
    model: &Model,
    eta: &[f64],
    xi: &[f64],
    c: f64,
    k: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_speed(c)?;
    let state = SurfaceState::new(0.0, eta.to_vec(), xi.to_vec())?;
    state.check(model.n())?;
    let tr = harmonic::traces(model, eta, xi)?;
    let grid = &model.grid;
    let omega = model.params.omega;
    let (eta_x, xi_x) = (grid.derivative(eta)?, grid.derivative(xi)?);
    let gx = grad_xi(model, &state, &tr)?;
    let ge = grad_eta(model, &state, &tr)?;
    Ok((
        gx.iter().zip(&eta_x).map(|(g, e)| g + c * e).collect(),
        (0..eta.len())
            .map(|j| -ge[j] - omega * (k + c * eta[j]) + c * xi_x[j])
            .collect(),
    ))
}

/// Residuals `c eta_x + dH^/dxi` and `c xi_x - dH^/deta` of the moving-frame
/// Hamiltonian system.
pub fn hamiltonian_residual(
    model: &Model,
    eta: &[f64],
    xi: &[f64],
    c: f64,
    k: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_speed(c)?;
    let state = SurfaceState::new(0.0, eta.to_vec(), xi.to_vec())?;
    state.check(model.n())?;
    let tr = harmonic::traces(model, eta, xi)?;
    let grid = &model.grid;
    let omega = model.params.omega;
    let dh_dxi = grad_xi(model, &state, &tr)?;
    let dh_deta: Vec<f64> = grad_eta(model, &state, &tr)?
        .into_iter()
        .zip(eta)
        .map(|(g, e)| g + omega * k + c * omega * e)
        .collect();
    let (eta_x, xi_x) = (grid.derivative(eta)?, grid.derivative(xi)?);
    Ok((
        eta_x.iter().zip(&dh_dxi).map(|(e, g)| c * e + g).collect(),
        xi_x.iter().zip(&dh_deta).map(|(x, g)| c * x - g).collect(),
    ))
}

/// Max of `|R_eta|` and `|R_xi - mean(R_xi)|`, plus `mean(R_xi)`.
fn residual_norm(model: &Model, eta: &[f64], xi: &[f64], c: f64) -> Result<(f64, f64)> {
    let (re, rx) = traveling_residual(model, eta, xi, c)?;
    let b = model.grid.mean(&rx);
    Ok((
        max_abs(&re).max(rx.iter().map(|v| (v - b).abs()).fold(0.0, f64::max)),
        b,
    ))
}

/// Unknowns: `eta` modes `2..=M`, `xi` modes `1..=M` (cos and sin), `c`, `B`.
struct Layout {
    m: usize,
    depth: f64,
    amplitude: f64,
}

impl Layout {
    fn len(&self) -> usize {
        4 * self.m
    }

    fn pack(&self, model: &Model, guess: &Guess, b: f64) -> Result<Vec<f64>> {
        let se = model.grid.forward(&guess.eta)?;
        let sx = model.grid.forward(&guess.xi)?;
        let mut z = Vec::with_capacity(self.len());
        for mode in 2..=self.m {
            z.push(se.cos[mode]);
            z.push(se.sin[mode]);
        }
        for mode in 1..=self.m {
            z.push(sx.cos[mode]);
            z.push(sx.sin[mode]);
        }
        z.push(guess.c);
        z.push(b);
        Ok(z)
    }

    fn unpack(&self, model: &Model, z: &[f64]) -> (Vec<f64>, Vec<f64>, f64, f64) {
        let n = model.n();
        let mut se = Spectrum::zeros(n);
        let mut sx = Spectrum::zeros(n);
        se.cos[0] = self.depth;
        se.cos[1] = self.amplitude;
        let mut it = z.iter().cloned();
        for mode in 2..=self.m {
            se.cos[mode] = it.next().unwrap();
            se.sin[mode] = it.next().unwrap();
        }
        for mode in 1..=self.m {
            sx.cos[mode] = it.next().unwrap();
            sx.sin[mode] = it.next().unwrap();
        }
        let c = it.next().unwrap();
        let b = it.next().unwrap();
        (model.grid.inverse(&se), model.grid.inverse(&sx), c, b)
    }

    fn equations(&self, model: &Model, z: &[f64]) -> Result<Vec<f64>> {
        let (eta, xi, c, b) = self.unpack(model, z);
        let (mut re, rx) = traveling_residual(model, &eta, &xi, c)?;
        re.extend(rx.into_iter().map(|v| v - b));
        Ok(re)
    }
}

/// Flat solution on the branch whose linear speed is closest to `c_hint`.
fn flat_solution(model: &Model, c_hint: f64) -> Result<TravelingWave> {
    let p = &model.params;
    let k1 = model.grid.wavenumbers()[1];
    let (c_plus, c_minus) = linear_phase_speeds(p, k1);
    let c = if (c_plus - c_hint).abs() <= (c_minus - c_hint).abs() {
        c_plus
    } else {
        c_minus
    };
    finish(model, SurfaceState::flat(model.n(), p.d_ref), c, 0)
}

fn finish(model: &Model, state: SurfaceState, c: f64, iterations: usize) -> Result<TravelingWave> {
    let (residual, gauge) = residual_norm(model, &state.eta, &state.xi, c)?;
    let (k_flux, flux_deviation) = mass_flux(model, &state, c)?;
    let h_hat = steady_hamiltonian(model, &state, c, k_flux)?;
    let amplitude = model.grid.forward(&state.eta)?.cos[1];
    Ok(TravelingWave {
        eta: state.eta,
        xi: state.xi,
        c,
        k_flux,
        flux_deviation,
        gauge,
        residual_norm: residual,
        amplitude,
        h_hat,
        iterations,
        params: model.params.clone(),
    })
}

/// Gauss-Newton solve of the traveling equations with `mean(eta) = d_ref`, the
/// first cosine mode of `eta` fixed to `amplitude` and its first sine mode
/// zero. The unknowns are the remaining Fourier modes of `eta` and `xi` (with
/// `mean(xi) = 0`), `c` and the Bernoulli constant.
pub fn traveling_solve(
    model: &Model,
    guess: &Guess,
    amplitude: f64,
    opts: NewtonOptions,
) -> core::result::Result<TravelingWave, NewtonFailure> {
    model.check_len(&guess.eta)?;
    model.check_len(&guess.xi)?;
    check_speed(guess.c)?;
    if amplitude == 0.0 {
        return Ok(flat_solution(model, guess.c)?);
    }
    let layout = Layout {
        m: model.grid.nyquist() - 1,
        depth: model.params.d_ref,
        amplitude,
    };
    let (_, b0) = residual_norm(model, &guess.eta, &guess.xi, guess.c)?;
    let mut z = layout.pack(model, guess, b0)?;
    let mut f = layout.equations(model, &z)?;
    let sumsq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let mut best: Option<Box<TravelingWave>> = None;

    for iter in 0..=opts.max_iter {
        let (eta, xi, c, _) = layout.unpack(model, &z);
        let candidate = finish(model, SurfaceState::new(0.0, eta, xi)?, c, iter)?;
        let converged = candidate.residual_norm <= opts.tol;
        if best
            .as_ref()
            .is_none_or(|b| candidate.residual_norm < b.residual_norm)
        {
            best = Some(Box::new(candidate));
        }
        if converged {
            return Ok(*best.unwrap());
        }
        if iter == opts.max_iter {
            break;
        }

        let mut jac = Matrix::zeros(f.len(), z.len());
        for col in 0..z.len() {
            let h = opts.fd_step * z[col].abs().max(1.0);
            let mut zp = z.clone();
            zp[col] += h;
            let mut zm = z.clone();
            zm[col] -= h;
            let (fp, fm) = (layout.equations(model, &zp)?, layout.equations(model, &zm)?);
            let column: Vec<f64> = fp
                .iter()
                .zip(&fm)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect();
            jac.set_col(col, &column);
        }
        let neg: Vec<f64> = f.iter().map(|v| -v).collect();
        let (dz, ratio) = least_squares(&jac, &neg);
        if !(ratio >= opts.min_pivot_ratio) {
            return Err(NewtonFailure {
                error: WaveError::Bifurcation { pivot_ratio: ratio },
                best,
            });
        }

        let f_norm = sumsq(&f);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = z.iter().zip(&dz).map(|(a, b)| a + lambda * b).collect();
            if let Ok(ft) = layout.equations(model, &trial) {
                if sumsq(&ft) < f_norm {
                    z = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            let residual = best.as_ref().map_or(f64::INFINITY, |b| b.residual_norm);
            return Err(NewtonFailure {
                error: WaveError::NonConvergence {
                    residual,
                    tolerance: opts.tol,
                },
                best,
            });
        }
    }
    let residual = best.as_ref().map_or(f64::INFINITY, |b| b.residual_norm);
    Err(NewtonFailure {
        error: WaveError::NewtonDiverged {
            iterations: opts.max_iter,
            residual,
        },
        best,
    })
}

/// Which of the two linear waves a family continues from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The larger linear phase speed.
    Positive,
    /// The smaller linear phase speed.
    Negative,
}

/// Linear traveling wave of the first mode:
/// `eta = d + a cos(k x)`, `xi = (c + omega d) a sin(k x) / tanh(k d)`.
pub fn linear_guess(model: &Model, branch: Branch, amplitude: f64) -> Guess {
    let p = &model.params;
    let k = model.grid.wavenumbers()[1];
    let (c_plus, c_minus) = linear_phase_speeds(p, k);
    let c = match branch {
        Branch::Positive => c_plus,
        Branch::Negative => c_minus,
    };
    let b = (c + p.omega * p.d_ref) * amplitude / (k * p.d_ref).tanh();
    let nodes = model.grid.nodes();
    Guess {
        eta: nodes
            .iter()
            .map(|x| p.d_ref + amplitude * (k * x).cos())
            .collect(),
        xi: nodes.iter().map(|x| b * (k * x).sin()).collect(),
        c,
    }
}

/// A continuation run that stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationFailure {
    pub family: Vec<TravelingWave>,
    pub amplitude: f64,
    pub failure: NewtonFailure,
}

/// Solves for each amplitude in turn, seeding each member with the previous
/// one rescaled to the new amplitude.
pub fn continuation_run(
    model: &Model,
    branch: Branch,
    amplitudes: &[f64],
    opts: NewtonOptions,
) -> core::result::Result<Vec<TravelingWave>, ContinuationFailure> {
    let mut family: Vec<TravelingWave> = Vec::with_capacity(amplitudes.len());
    let bad = |family: Vec<TravelingWave>, amplitude, error| ContinuationFailure {
        family,
        amplitude,
        failure: NewtonFailure { error, best: None },
    };
    if amplitudes.windows(2).any(|w| !(w[1] > w[0])) || amplitudes.first().is_some_and(|a| *a < 0.0)
    {
        return Err(bad(
            family,
            amplitudes.first().cloned().unwrap_or(0.0),
            WaveError::Config {
                field: "amplitudes",
                reason: "amplitude schedule must be increasing from zero",
            },
        ));
    }
    let d = model.params.d_ref;
    for &a in amplitudes {
        let guess = match family.last() {
            Some(prev) if prev.amplitude != 0.0 => {
                let s = a / prev.amplitude;
                Guess {
                    eta: prev.eta.iter().map(|e| d + s * (e - d)).collect(),
                    xi: prev.xi.iter().map(|x| s * x).collect(),
                    c: prev.c,
                }
            }
            _ => linear_guess(model, branch, a),
        };
        match traveling_solve(model, &guess, a, opts) {
            Ok(w) => family.push(w),
            Err(failure) => {
                return Err(ContinuationFailure {
                    family,
                    amplitude: a,
                    failure,
                })
            }
        }
    }
    Ok(family)
}
