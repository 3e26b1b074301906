//! The generalized velocity potential below a periodic free surface.
//!
//! The potential is expanded in
//!
//! ```text
//! 1,   cos(k_m x) cosh(k_m y) / cosh(k_m d),   sin(k_m x) cosh(k_m y) / cosh(k_m d)
//! ```
//!
//! for `m = 1..N/2-1`, plus the Nyquist cosine. Every element is harmonic,
//! satisfies `phi_y = 0` on the bed `y = 0` and is `L`-periodic, so the only
//! condition left to enforce is the Dirichlet data `phi(x_j, eta_j) = xi_j` at
//! the `N` collocation nodes: a square dense solve.
//!
//! The harmonic conjugate `conj` (with `phi_x = conj_y`, `phi_y = -conj_x`) is
//! normalized to vanish on the bed. The stream function is then
//! `psi = conj - omega y^2 / 2`, and the trace of `conj` on the surface is the
//! generalized Hilbert transform `T(eta) xi`.

mod series;

pub use series::{dno_series_order2, SeriesTraces};

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, WaveError};
use crate::grid::Spectrum;
use crate::linalg::{Lu, Matrix};
use crate::params::{check_above_bed, Model};

/// Matrices with a larger condition estimate are treated as singular.
const MAX_CONDITION: f64 = 1e13;

/// Relative slack allowed above the surface before a point counts as outside.
const SURFACE_SLACK: f64 = 1e-12;

/// Coefficients of the potential in the harmonic basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicField {
    pub a0: f64,
    /// Cosine coefficients for `m = 1..=M`.
    pub ac: Vec<f64>,
    /// Sine coefficients for `m = 1..=M`.
    pub as_: Vec<f64>,
    /// Coefficient of the Nyquist cosine `cos(k_{N/2} x)`.
    pub nyquist: f64,
    pub d_ref: f64,
    /// `k_1..=k_{N/2}`.
    wavenumbers: Vec<f64>,
    /// Max Dirichlet mismatch at the nodes, relative to `max |xi|`.
    pub solve_residual: f64,
    pub condition: f64,
}

/// Value of the potential, its gradient, and the conjugate at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub phi: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    /// Harmonic conjugate, zero on the bed.
    pub conj: f64,
}

/// Surface evaluations of the potential.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceTraces {
    /// `phi_x` at `(x_j, eta_j)`.
    pub xi1: Vec<f64>,
    /// `phi_y` at `(x_j, eta_j)`.
    pub xi2: Vec<f64>,
    /// Stream function on the surface.
    pub chi: Vec<f64>,
    /// `T(eta) xi`, the conjugate trace.
    pub t_xi: Vec<f64>,
    pub solve_residual: f64,
}

/// Interior evaluation of the flow at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorSample {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
    pub u: f64,
    pub v: f64,
    pub psi: f64,
}

/// `cosh(k y) / cosh(k d)` and `sinh(k y) / cosh(k d)` without overflow.
#[inline]
pub(crate) fn basis_ratios(k: f64, y: f64, d: f64) -> (f64, f64) {
    let e = (k * (y - d)).exp();
    let ey = (-2.0 * k * y).exp();
    let den = 1.0 + (-2.0 * k * d).exp();
    let c = e * (1.0 + ey) / den;
    let s = -e * (-2.0 * k * y).exp_m1() / den;
    (c, s)
}

impl HarmonicField {
    pub fn order(&self) -> usize {
        self.ac.len()
    }

    /// Evaluates the field at `(x, y)`. Points above the surface get the
    /// analytic continuation; use [`evaluate_interior`] for checked access.
    pub fn evaluate(&self, x: f64, y: f64) -> FieldValue {
        let d = self.d_ref;
        let mut v = FieldValue {
            phi: self.a0,
            phi_x: 0.0,
            phi_y: 0.0,
            conj: 0.0,
        };
        let mut add = |k: f64, a: f64, b: f64| {
            if a == 0.0 && b == 0.0 {
                return;
            }
            let (sn, cs) = (k * x).sin_cos();
            let (c, s) = basis_ratios(k, y, d);
            let even = a * cs + b * sn;
            let odd = -a * sn + b * cs;
            v.phi += even * c;
            v.phi_x += k * odd * c;
            v.phi_y += k * even * s;
            v.conj += odd * s;
        };
        for m in 0..self.order() {
            add(self.wavenumbers[m], self.ac[m], self.as_[m]);
        }
        add(self.wavenumbers[self.order()], self.nyquist, 0.0);
        v
    }
}

/// Solves for the potential with `phi = xi` on `y = eta`, `phi_y = 0` on the bed.
pub fn solve_dirichlet(model: &Model, eta: &[f64], xi: &[f64]) -> Result<HarmonicField> {
    model.check_len(eta)?;
    model.check_len(xi)?;
    check_above_bed(eta, 0.0)?;
    let grid = &model.grid;
    let n = grid.n();
    let half = grid.nyquist();
    let d = model.params.d_ref;
    let ks = &grid.wavenumbers()[1..];

    let mut a = Matrix::zeros(n, n);
    for (j, &e) in eta.iter().enumerate() {
        a[(j, 0)] = 1.0;
        for m in 1..half {
            let (c, _) = basis_ratios(ks[m - 1], e, d);
            let (cs, sn) = grid.trig(j, m);
            a[(j, 2 * m - 1)] = cs * c;
            a[(j, 2 * m)] = sn * c;
        }
        let (c, _) = basis_ratios(ks[half - 1], e, d);
        a[(j, n - 1)] = grid.trig(j, half).0 * c;
    }

    let lu = Lu::factor(&a)?;
    let condition = lu.condition_estimate();
    if !(condition < MAX_CONDITION) {
        return Err(WaveError::Singular { condition });
    }
    let scale = xi
        .iter()
        .fold(0.0, |m: f64, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let residual_of = |coef: &[f64]| -> (Vec<f64>, f64) {
        let r: Vec<f64> = a.mul_vec(coef).iter().zip(xi).map(|(p, q)| q - p).collect();
        let worst = r.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        (r, worst / scale)
    };
    let mut coef = lu.solve(xi);
    let (r, mut residual) = residual_of(&coef);
    let tol = model.params.solver_tol;
    if residual > tol {
        let corr = lu.solve(&r);
        coef.iter_mut().zip(&corr).for_each(|(c, dc)| *c += dc);
        residual = residual_of(&coef).1;
    }
    if !(residual <= tol) {
        return Err(WaveError::NonConvergence {
            residual,
            tolerance: tol,
        });
    }

    let ac = (1..half).map(|m| coef[2 * m - 1]).collect();
    let as_ = (1..half).map(|m| coef[2 * m]).collect();
    Ok(HarmonicField {
        a0: coef[0],
        ac,
        as_,
        nyquist: coef[n - 1],
        d_ref: d,
        wavenumbers: ks.to_vec(),
        solve_residual: residual,
        condition,
    })
}

/// Surface traces of a field solved for `eta`.
pub fn surface_traces(model: &Model, field: &HarmonicField, eta: &[f64]) -> Result<SurfaceTraces> {
    model.check_len(eta)?;
    let grid = &model.grid;
    let n = grid.n();
    let half = grid.nyquist();
    if field.order() + 1 != half {
        return Err(WaveError::Shape {
            expected: half - 1,
            got: field.order(),
        });
    }
    let omega = model.params.omega;
    let d = field.d_ref;
    let mut tr = SurfaceTraces {
        xi1: alloc::vec![0.0; n],
        xi2: alloc::vec![0.0; n],
        chi: alloc::vec![0.0; n],
        t_xi: alloc::vec![0.0; n],
        solve_residual: field.solve_residual,
    };
    for (j, &e) in eta.iter().enumerate() {
        let (mut p_x, mut p_y, mut conj) = (0.0, 0.0, 0.0);
        for m in 1..=half {
            let (a, b) = if m < half {
                (field.ac[m - 1], field.as_[m - 1])
            } else {
                (field.nyquist, 0.0)
            };
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let k = field.wavenumbers[m - 1];
            let (c, s) = basis_ratios(k, e, d);
            let (cs, sn) = grid.trig(j, m);
            let even = a * cs + b * sn;
            let odd = -a * sn + b * cs;
            p_x += k * odd * c;
            p_y += k * even * s;
            conj += odd * s;
        }
        tr.xi1[j] = p_x;
        tr.xi2[j] = p_y;
        tr.t_xi[j] = conj;
        tr.chi[j] = conj - 0.5 * omega * e * e;
    }
    Ok(tr)
}

/// Solve plus traces in one call.
pub fn traces(model: &Model, eta: &[f64], xi: &[f64]) -> Result<SurfaceTraces> {
    let field = solve_dirichlet(model, eta, xi)?;
    surface_traces(model, &field, eta)
}

/// The generalized Hilbert transform `T(eta) xi`: the surface trace of the
/// harmonic conjugate of the potential with data `xi`. Independent of `omega`.
pub fn hilbert_transform(model: &Model, eta: &[f64], xi: &[f64]) -> Result<Vec<f64>> {
    Ok(traces(model, eta, xi)?.t_xi)
}

/// Trigonometric interpolant of the surface, for locating arbitrary points.
#[derive(Debug, Clone)]
pub struct SurfaceProfile<'a> {
    model: &'a Model,
    spectrum: Spectrum,
}

impl<'a> SurfaceProfile<'a> {
    pub fn new(model: &'a Model, eta: &[f64]) -> Result<Self> {
        Ok(Self {
            model,
            spectrum: model.grid.forward(eta)?,
        })
    }

    pub fn height(&self, x: f64) -> f64 {
        self.model.grid.interpolate(&self.spectrum, x)
    }

    /// Errors when `(x, y)` lies outside `0 <= y <= eta(x)` beyond round-off slack.
    pub fn check_inside(&self, x: f64, y: f64) -> Result<()> {
        let surface = self.height(x);
        let slack = SURFACE_SLACK * self.model.params.d_ref;
        if !(y >= -slack && y <= surface + slack) {
            return Err(WaveError::Domain { x, y, surface });
        }
        Ok(())
    }
}

/// Velocity, potential and stream function at points inside the fluid.
pub fn evaluate_interior(
    model: &Model,
    field: &HarmonicField,
    eta: &[f64],
    points: &[(f64, f64)],
) -> Result<Vec<InteriorSample>> {
    let profile = SurfaceProfile::new(model, eta)?;
    let omega = model.params.omega;
    points
        .iter()
        .map(|&(x, y)| {
            profile.check_inside(x, y)?;
            let f = field.evaluate(x, y);
            Ok(InteriorSample {
                x,
                y,
                phi: f.phi,
                u: f.phi_x - omega * y,
                v: f.phi_y,
                psi: f.conj - 0.5 * omega * y * y,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
