//! Total energy of the wave motion and its variational derivatives.
//!
//! Two independent routes to the energy are provided. [`energy_volume`]
//! integrates `(u^2 + v^2)/2 + g y` over the fluid column by column;
//! [`energy_surface`] evaluates the surface functional
//!
//! ```text
//! H(eta, xi) = 1/2 int xi_x T(eta)xi + 1/2 int g eta^2 - omega/2 int xi_x eta^2 + omega^2/6 int eta^3
//! ```
//!
//! Agreement between the two certifies the reduction of the volume integral to
//! surface data.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::harmonic::{self, SurfaceTraces};
use crate::params::{Model, SurfaceState};
use crate::quadrature::GaussLegendre;

/// Energies below this magnitude are compared absolutely.
pub const MISMATCH_FLOOR: f64 = 1e-12;

/// The four terms of the surface energy, in the order written above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceEnergyTerms {
    pub dirichlet: f64,
    pub gravity: f64,
    pub vortical: f64,
    pub cubic: f64,
}

impl SurfaceEnergyTerms {
    pub fn total(&self) -> f64 {
        self.dirichlet + self.gravity + self.vortical + self.cubic
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub h_surface: f64,
    pub h_volume: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub mass: f64,
    pub relative_mismatch: f64,
}

/// Column quadrature settings for [`energy_volume`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeQuadrature {
    /// Gauss-Legendre points per column.
    pub gauss_points: usize,
    /// Columns per grid spacing.
    pub x_refine: usize,
}

impl Default for VolumeQuadrature {
    fn default() -> Self {
        Self {
            gauss_points: 24,
            x_refine: 2,
        }
    }
}

/// Surface energy terms given `T(eta) xi`.
pub fn surface_terms_from(
    model: &Model,
    state: &SurfaceState,
    t_xi: &[f64],
) -> Result<SurfaceEnergyTerms> {
    let grid = &model.grid;
    let g = model.params.gravity;
    let omega = model.params.omega;
    let xi_x = grid.derivative(&state.xi)?;
    let eta = &state.eta;
    let int = |f: &dyn Fn(usize) -> f64| grid.integrate(&(0..eta.len()).map(f).collect::<Vec<_>>());
    Ok(SurfaceEnergyTerms {
        dirichlet: 0.5 * int(&|j| xi_x[j] * t_xi[j]),
        gravity: 0.5 * g * int(&|j| eta[j] * eta[j]),
        vortical: -0.5 * omega * int(&|j| xi_x[j] * eta[j] * eta[j]),
        cubic: omega * omega / 6.0 * int(&|j| eta[j] * eta[j] * eta[j]),
    })
}

pub fn energy_surface_terms(model: &Model, state: &SurfaceState) -> Result<SurfaceEnergyTerms> {
    state.check(model.n())?;
    let t_xi = harmonic::hilbert_transform(model, &state.eta, &state.xi)?;
    surface_terms_from(model, state, &t_xi)
}

/// The surface Hamiltonian `H(eta, xi)`.
pub fn energy_surface(model: &Model, state: &SurfaceState) -> Result<f64> {
    Ok(energy_surface_terms(model, state)?.total())
}

/// Volume energy with the default column quadrature.
pub fn energy_volume(model: &Model, state: &SurfaceState) -> Result<EnergyReport> {
    energy_volume_with(model, state, VolumeQuadrature::default())
}

pub fn energy_volume_with(
    model: &Model,
    state: &SurfaceState,
    quad: VolumeQuadrature,
) -> Result<EnergyReport> {
    state.check(model.n())?;
    let field = harmonic::solve_dirichlet(model, &state.eta, &state.xi)?;
    let tr = harmonic::surface_traces(model, &field, &state.eta)?;
    let h_surface = surface_terms_from(model, state, &tr.t_xi)?.total();

    let grid = &model.grid;
    let profile = harmonic::SurfaceProfile::new(model, &state.eta)?;
    let rule = GaussLegendre::new(quad.gauss_points);
    let g = model.params.gravity;
    let omega = model.params.omega;
    let columns = grid.n() * quad.x_refine.max(1);
    let dx = grid.length() / columns as f64;
    let (mut kinetic, mut potential) = (0.0, 0.0);
    for i in 0..columns {
        let x = i as f64 * dx;
        let top = profile.height(x);
        kinetic += rule.integrate(0.0, top, |y| {
            let f = field.evaluate(x, y);
            let u = f.phi_x - omega * y;
            0.5 * (u * u + f.phi_y * f.phi_y)
        });
        potential += rule.integrate(0.0, top, |y| g * y);
    }
    kinetic *= dx;
    potential *= dx;
    let h_volume = kinetic + potential;
    Ok(EnergyReport {
        h_surface,
        h_volume,
        kinetic,
        potential,
        mass: mass(model, state),
        relative_mismatch: (h_surface - h_volume).abs() / h_volume.abs().max(MISMATCH_FLOOR),
    })
}

/// `dH/dxi = v - u eta_x = xi2 - (xi1 - omega eta) eta_x`.
pub fn grad_xi(model: &Model, state: &SurfaceState, traces: &SurfaceTraces) -> Result<Vec<f64>> {
    model.check_len(&traces.xi1)?;
    let eta_x = model.grid.derivative(&state.eta)?;
    let omega = model.params.omega;
    Ok((0..eta_x.len())
        .map(|j| traces.xi2[j] - (traces.xi1[j] - omega * state.eta[j]) * eta_x[j])
        .collect())
}

/// `dH/deta` with `xi` held fixed.
pub fn grad_eta(model: &Model, state: &SurfaceState, traces: &SurfaceTraces) -> Result<Vec<f64>> {
    model.check_len(&traces.xi1)?;
    let eta_x = model.grid.derivative(&state.eta)?;
    let omega = model.params.omega;
    let g = model.params.gravity;
    Ok((0..eta_x.len())
        .map(|j| {
            let (e, ex) = (state.eta[j], eta_x[j]);
            let (a, b) = (traces.xi1[j], traces.xi2[j]);
            -omega * e * ex * b - omega * e * a
                + 0.5 * omega * omega * e * e
                + 0.5 * (a * a + b * b)
                + g * e
                - b * b
                + a * b * ex
        })
        .collect())
}

/// Stream function on the surface, `chi = T(eta) xi - omega eta^2 / 2`.
pub fn chi_of_state(model: &Model, state: &SurfaceState) -> Result<Vec<f64>> {
    state.check(model.n())?;
    Ok(harmonic::traces(model, &state.eta, &state.xi)?.chi)
}

/// `int eta dx` over one period.
pub fn mass(model: &Model, state: &SurfaceState) -> f64 {
    model.grid.integrate(&state.eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use crate::WaveParameters;
    use alloc::vec;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(MISMATCH_FLOOR)
    }

    #[test]
    fn flat_rest_energy() {
        for omega in [0.0, 1.3, -2.0] {
            let m = model(16, omega);
            let (l, g, d) = (m.params.length, m.params.gravity, 1.0);
            let s = SurfaceState::flat(16, d);
            let want = l * (g * d * d / 2.0 + omega * omega * d * d * d / 6.0);
            assert!(rel(energy_surface(&m, &s).unwrap(), want) < 1e-14);
            let vol = energy_volume(&m, &s).unwrap();
            assert!(rel(vol.kinetic, omega * omega * d.powi(3) * l / 6.0) < 1e-13);
            assert!(rel(vol.potential, g * d * d * l / 2.0) < 1e-13);
        }
    }

    #[test]
    fn flat_linear_mode_energy() {
        let m = model(32, 0.0);
        let (l, g, d, a) = (m.params.length, m.params.gravity, 1.0, 0.3);
        for mode in [1usize, 2] {
            let k = mode as f64;
            let s = SurfaceState::new(0.0, vec![d; 32], cos_mode(&m, mode, a, 0.0)).unwrap();
            let want = a * a * k * l / 4.0 * (k * d).tanh() + g * d * d * l / 2.0;
            assert!(rel(energy_surface(&m, &s).unwrap(), want) < 1e-13);
        }
    }

    #[test]
    fn no_gravity_no_flow_no_energy() {
        let m = Model::new(WaveParameters {
            gravity: 0.0,
            n: 16,
            ..WaveParameters::default()
        })
        .unwrap();
        let vol = energy_volume(&m, &SurfaceState::flat(16, 1.0)).unwrap();
        assert_eq!(vol.h_volume, 0.0);
        assert_eq!(vol.h_surface, 0.0);
        assert_eq!(vol.relative_mismatch, 0.0);
    }

    #[test]
    fn surface_and_volume_energies_agree() {
        let mut r = rng(17);
        for omega in [-2.0, 0.0, 2.0] {
            let m = model(64, omega);
            for _ in 0..3 {
                let s = random_state(&mut r, &m, 0.1, 0.4);
                let rep = energy_volume(&m, &s).unwrap();
                assert!(rep.relative_mismatch <= 1e-8, "{rep:?}");
            }
        }
        let m = model(64, 1.0);
        let eta: Vec<f64> = cos_mode(&m, 1, 0.02, 0.0).iter().map(|v| 1.0 + v).collect();
        let xi = cos_mode(&m, 1, 0.01, -core::f64::consts::FRAC_PI_2);
        let rep = energy_volume(&m, &SurfaceState::new(0.0, eta, xi).unwrap()).unwrap();
        assert!(rep.relative_mismatch <= 1e-8);
    }

    #[test]
    fn kinetic_part_also_agrees() {
        // The background potential energy dominates H; compare wave parts too.
        let mut r = rng(4);
        let m = model(64, 1.5);
        let s = random_state(&mut r, &m, 0.05, 0.4);
        let rep = energy_volume(&m, &s).unwrap();
        let terms = energy_surface_terms(&m, &s).unwrap();
        let surface_kinetic = terms.total()
            - m.params.gravity / 2.0
                * m.grid
                    .integrate(&s.eta.iter().map(|e| e * e).collect::<Vec<_>>());
        assert!(
            rel(surface_kinetic, rep.kinetic) < 1e-9,
            "{} {}",
            surface_kinetic,
            rep.kinetic
        );
    }

    #[test]
    fn energy_is_gauge_invariant() {
        let mut r = rng(9);
        let m = model(32, -1.0);
        let s = random_state(&mut r, &m, 0.05, 0.3);
        let mut shifted = s.clone();
        shifted.xi.iter_mut().for_each(|v| *v += 4.2);
        let (a, b) = (
            energy_surface(&m, &s).unwrap(),
            energy_surface(&m, &shifted).unwrap(),
        );
        assert!(rel(a, b) < 1e-14);
    }

    #[test]
    fn irrotational_terms_vanish() {
        let mut r = rng(10);
        let m = model(32, 0.0);
        let s = random_state(&mut r, &m, 0.05, 0.3);
        let t = energy_surface_terms(&m, &s).unwrap();
        assert_eq!(t.vortical, 0.0);
        assert_eq!(t.cubic, 0.0);
    }

    #[test]
    fn flat_gradients() {
        let omega = 0.9;
        let m = model(32, omega);
        let (g, d, a) = (m.params.gravity, 1.0, 0.2);
        let s = SurfaceState::flat(32, d);
        let tr = harmonic::traces(&m, &s.eta, &s.xi).unwrap();
        assert!(grad_xi(&m, &s, &tr)
            .unwrap()
            .iter()
            .all(|v| v.abs() < 1e-14));
        for v in grad_eta(&m, &s, &tr).unwrap() {
            assert!((v - (0.5 * omega * omega * d * d + g * d)).abs() < 1e-13);
        }
        let m0 = m.with_omega(0.0);
        for v in grad_eta(&m0, &s, &tr).unwrap() {
            assert!((v - g * d).abs() < 1e-13);
        }
        let s = SurfaceState::new(0.0, vec![d; 32], cos_mode(&m, 2, a, 0.0)).unwrap();
        let tr = harmonic::traces(&m, &s.eta, &s.xi).unwrap();
        let gx = grad_xi(&m, &s, &tr).unwrap();
        for (j, x) in m.grid.nodes().iter().enumerate() {
            assert!((gx[j] - a * 2.0 * (2.0 * d).tanh() * (2.0 * x).cos()).abs() < 1e-12);
        }
    }

    fn directional_check(m: &Model, s: &SurfaceState, seed: u64, directions: usize) -> (f64, f64) {
        let mut r = rng(seed);
        let tr = harmonic::traces(m, &s.eta, &s.xi).unwrap();
        let ge = grad_eta(m, s, &tr).unwrap();
        let gx = grad_xi(m, s, &tr).unwrap();
        let eps = 1e-5;
        let (mut worst_eta, mut worst_xi): (f64, f64) = (0.0, 0.0);
        for _ in 0..directions {
            let dir = band_limited(&mut r, m, 6, 1.0);
            let shift = |which: usize, sign: f64| {
                let mut p = s.clone();
                let target = if which == 0 { &mut p.eta } else { &mut p.xi };
                target
                    .iter_mut()
                    .zip(&dir)
                    .for_each(|(v, d)| *v += sign * eps * d);
                energy_surface(m, &p).unwrap()
            };
            let fd_eta = (shift(0, 1.0) - shift(0, -1.0)) / (2.0 * eps);
            let fd_xi = (shift(1, 1.0) - shift(1, -1.0)) / (2.0 * eps);
            worst_eta = worst_eta.max(rel(fd_eta, m.grid.inner(&ge, &dir)));
            worst_xi = worst_xi.max(rel(fd_xi, m.grid.inner(&gx, &dir)));
        }
        (worst_eta, worst_xi)
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut r = rng(12);
        for omega in [0.0, 1.7] {
            let m = model(64, omega);
            let s = random_state(&mut r, &m, 0.05, 0.3);
            let (e, x) = directional_check(&m, &s, 100, 5);
            assert!(e <= 1e-5 && x <= 1e-5, "eta {e:e} xi {x:e}");
        }
    }

    #[test]
    fn grad_xi_is_minus_chi_derivative() {
        let mut r = rng(14);
        let m = model(64, -1.2);
        let s = random_state(&mut r, &m, 0.05, 0.3);
        let tr = harmonic::traces(&m, &s.eta, &s.xi).unwrap();
        let chi_x = m.grid.derivative(&chi_of_state(&m, &s).unwrap()).unwrap();
        let gx = grad_xi(&m, &s, &tr).unwrap();
        for j in 0..64 {
            assert!((gx[j] + chi_x[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn chi_on_flat_states() {
        let m = model(16, 1.1);
        let chi = chi_of_state(&m, &SurfaceState::flat(16, 1.0)).unwrap();
        assert!(chi.iter().all(|c| (c + 0.55).abs() < 1e-15));
        let mut r = rng(1);
        let s = random_state(&mut r, &m.with_omega(0.0), 0.05, 0.2);
        let m0 = m.with_omega(0.0);
        assert_eq!(
            chi_of_state(&m0, &s).unwrap(),
            harmonic::hilbert_transform(&m0, &s.eta, &s.xi).unwrap()
        );
    }

    #[test]
    fn chi_matches_interior_stream_function() {
        let mut r = rng(15);
        let m = model(32, 0.8);
        let s = random_state(&mut r, &m, 0.05, 0.3);
        let field = harmonic::solve_dirichlet(&m, &s.eta, &s.xi).unwrap();
        let pts: Vec<(f64, f64)> = m
            .grid
            .nodes()
            .iter()
            .cloned()
            .zip(s.eta.iter().cloned())
            .collect();
        let samples = harmonic::evaluate_interior(&m, &field, &s.eta, &pts).unwrap();
        let chi = chi_of_state(&m, &s).unwrap();
        for (p, c) in samples.iter().zip(&chi) {
            assert!((p.psi - c).abs() < 1e-10);
        }
    }

    #[test]
    fn mass_of_simple_profiles() {
        let m = model(16, 0.0);
        let l = m.params.length;
        assert!((mass(&m, &SurfaceState::flat(16, 0.7)) - 0.7 * l).abs() < 1e-14);
        let eta: Vec<f64> = cos_mode(&m, 3, 0.1, 0.4).iter().map(|v| 0.7 + v).collect();
        let s = SurfaceState::new(0.0, eta, vec![0.0; 16]).unwrap();
        assert!((mass(&m, &s) - 0.7 * l).abs() < 1e-14);
    }
}
