//! Interior velocity, stream function and pressure.
//!
//! The pressure follows from the Bernoulli law for constant vorticity,
//! `P = P_atm - phi_t - (u^2 + v^2)/2 - omega psi - g y`, with `phi_t` the
//! harmonic function whose surface data is `xi_t - xi2 eta_t`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{rhs_with, step_rk4, StepOptions};
use crate::error::Result;
use crate::harmonic::{self, HarmonicField, SurfaceProfile};
use crate::params::{Model, SurfaceState};

/// Flow quantities at one point of the fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    pub psi: f64,
    /// Present only for samples produced by [`pressure_field`].
    pub pressure: Option<f64>,
    pub phi_t: Option<f64>,
}

fn velocity_with(
    model: &Model,
    field: &HarmonicField,
    eta: &[f64],
    points: &[(f64, f64)],
) -> Result<Vec<FieldSample>> {
    Ok(harmonic::evaluate_interior(model, field, eta, points)?
        .into_iter()
        .map(|s| FieldSample {
            x: s.x,
            y: s.y,
            u: s.u,
            v: s.v,
            psi: s.psi,
            pressure: None,
            phi_t: None,
        })
        .collect())
}

/// `u = phi_x - omega y`, `v = phi_y` and `psi` at points inside the fluid.
pub fn velocity_field(
    model: &Model,
    state: &SurfaceState,
    points: &[(f64, f64)],
) -> Result<Vec<FieldSample>> {
    state.check(model.n())?;
    let field = harmonic::solve_dirichlet(model, &state.eta, &state.xi)?;
    velocity_with(model, &field, &state.eta, points)
}

/// The potential of `phi_t`, solved from the surface data `xi_t - xi2 eta_t`.
pub fn phi_t_field(model: &Model, state: &SurfaceState) -> Result<HarmonicField> {
    let rates = rhs_with(model, state, false)?;
    let tr = harmonic::traces(model, &state.eta, &state.xi)?;
    let data: Vec<f64> = (0..state.eta.len())
        .map(|j| rates.xi_dot[j] - tr.xi2[j] * rates.eta_dot[j])
        .collect();
    harmonic::solve_dirichlet(model, &state.eta, &data)
}

/// Velocity plus pressure and `phi_t` at points inside the fluid.
pub fn pressure_field(
    model: &Model,
    state: &SurfaceState,
    points: &[(f64, f64)],
) -> Result<Vec<FieldSample>> {
    state.check(model.n())?;
    let field = harmonic::solve_dirichlet(model, &state.eta, &state.xi)?;
    let dt_field = phi_t_field(model, state)?;
    let p = &model.params;
    let mut samples = velocity_with(model, &field, &state.eta, points)?;
    for s in samples.iter_mut() {
        let phi_t = dt_field.evaluate(s.x, s.y).phi;
        s.phi_t = Some(phi_t);
        s.pressure = Some(
            p.p_atm - phi_t - 0.5 * (s.u * s.u + s.v * s.v) - p.omega * s.psi - p.gravity * s.y,
        );
    }
    Ok(samples)
}

/// `int_0^L u(x, 0) dx` by the trapezoid rule on the grid.
pub fn bed_flow_check(model: &Model, state: &SurfaceState) -> Result<f64> {
    state.check(model.n())?;
    let field = harmonic::solve_dirichlet(model, &state.eta, &state.xi)?;
    let u: Vec<f64> = model
        .grid
        .nodes()
        .iter()
        .map(|&x| field.evaluate(x, 0.0).phi_x)
        .collect();
    Ok(model.grid.integrate(&u))
}

/// `nx` columns uniform in `x`, each with `ny` points from the bed to the
/// surface.
pub fn sample_lattice(model: &Model, eta: &[f64], nx: usize, ny: usize) -> Result<Vec<(f64, f64)>> {
    let profile = SurfaceProfile::new(model, eta)?;
    let dx = model.grid.length() / nx.max(1) as f64;
    let mut pts = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        let x = i as f64 * dx;
        let top = profile.height(x);
        for j in 0..ny {
            let frac = if ny > 1 {
                j as f64 / (ny - 1) as f64
            } else {
                1.0
            };
            pts.push((x, top * frac));
        }
    }
    Ok(pts)
}

/// Residuals of the two momentum equations, by central differences with step
/// `h` in space and `dt` in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerResidual {
    pub x: f64,
    pub y: f64,
    pub horizontal: f64,
    pub vertical: f64,
}

pub fn euler_residuals(
    model: &Model,
    state: &SurfaceState,
    points: &[(f64, f64)],
    h: f64,
    dt: f64,
) -> Result<Vec<EulerResidual>> {
    let opts = StepOptions {
        gauge_normalize: false,
        dealias: false,
        ..StepOptions::default()
    };
    let later = step_rk4(model, state, dt, opts)?;
    let earlier = step_rk4(model, state, -dt, opts)?;
    let g = model.params.gravity;
    let offsets = [(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)];
    let stencil: Vec<(f64, f64)> = points
        .iter()
        .flat_map(|&(x, y)| offsets.iter().map(move |&(a, b)| (x + a, y + b)))
        .collect();
    let now = pressure_field(model, state, &stencil)?;
    let centers: Vec<(f64, f64)> = points.to_vec();
    let plus = velocity_field(model, &later, &centers)?;
    let minus = velocity_field(model, &earlier, &centers)?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let s = &now[5 * i..5 * i + 5];
            let ddx = |f: fn(&FieldSample) -> f64| (f(&s[1]) - f(&s[2])) / (2.0 * h);
            let ddy = |f: fn(&FieldSample) -> f64| (f(&s[3]) - f(&s[4])) / (2.0 * h);
            let (u, v) = (s[0].u, s[0].v);
            let u_t = (plus[i].u - minus[i].u) / (2.0 * dt);
            let v_t = (plus[i].v - minus[i].v) / (2.0 * dt);
            let p = |s: &FieldSample| s.pressure.unwrap();
            EulerResidual {
                x,
                y,
                horizontal: u_t + u * ddx(|s| s.u) + v * ddy(|s| s.u) + ddx(p),
                vertical: v_t + u * ddx(|s| s.v) + v * ddy(|s| s.v) + ddy(p) + g,
            }
        })
        .collect())
}
