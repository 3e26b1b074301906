use alloc::vec::Vec;

use crate::error::{Result, WaveError};
use crate::grid::PeriodicGrid;

/// Physical constants and the discretization of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveParameters {
    /// Spatial period `L`.
    pub length: f64,
    /// Gravitational acceleration `g`.
    pub gravity: f64,
    /// Constant vorticity `omega = v_x - u_y`; zero gives irrotational flow.
    pub omega: f64,
    /// Reference mean depth, used to normalize the harmonic basis.
    pub d_ref: f64,
    /// Atmospheric pressure on the free surface.
    pub p_atm: f64,
    /// Number of collocation nodes (even, at least 8).
    pub n: usize,
    /// Fraction of the resolvable modes kept when dealiasing time derivatives.
    /// `1.0` disables the filter.
    pub dealias_fraction: f64,
    /// Relative Dirichlet residual accepted from the harmonic solve.
    pub solver_tol: f64,
}

impl Default for WaveParameters {
    fn default() -> Self {
        Self {
            length: 2.0 * core::f64::consts::PI,
            gravity: 9.81,
            omega: 0.0,
            d_ref: 1.0,
            p_atm: 0.0,
            n: 64,
            dealias_fraction: 2.0 / 3.0,
            solver_tol: 1e-10,
        }
    }
}

impl WaveParameters {
    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason| Err(WaveError::Config { field, reason });
        if !(self.length.is_finite() && self.length > 0.0) {
            return bad("L", "period must be positive and finite");
        }
        if !(self.gravity.is_finite() && self.gravity >= 0.0) {
            return bad("g", "gravity must be non-negative and finite");
        }
        if !self.omega.is_finite() {
            return bad("omega", "vorticity must be finite");
        }
        if !(self.d_ref.is_finite() && self.d_ref > 0.0) {
            return bad("d_ref", "reference depth must be positive");
        }
        if !self.p_atm.is_finite() {
            return bad("P_atm", "atmospheric pressure must be finite");
        }
        if self.n < 8 || !self.n.is_multiple_of(2) {
            return bad("N", "number of nodes must be even and at least 8");
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return bad("dealias_fraction", "must lie in (0, 1]");
        }
        if !(self.solver_tol > 0.0 && self.solver_tol < 1.0) {
            return bad("solver_tol", "must lie in (0, 1)");
        }
        Ok(())
    }
}

/// The canonical pair `(eta, xi)` at time `t`, sampled at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceState {
    pub t: f64,
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
}

impl SurfaceState {
    pub fn new(t: f64, eta: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if eta.len() != xi.len() {
            return Err(WaveError::Shape {
                expected: eta.len(),
                got: xi.len(),
            });
        }
        Ok(Self { t, eta, xi })
    }

    /// Undisturbed water of depth `depth` at rest in the gauge `xi = 0`.
    pub fn flat(n: usize, depth: f64) -> Self {
        Self {
            t: 0.0,
            eta: alloc::vec![depth; n],
            xi: alloc::vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    /// Checks the array lengths against `n` and that the surface stays above the bed.
    pub fn check(&self, n: usize) -> Result<()> {
        for len in [self.eta.len(), self.xi.len()] {
            if len != n {
                return Err(WaveError::Shape {
                    expected: n,
                    got: len,
                });
            }
        }
        check_above_bed(&self.eta, 0.0)
    }
}

pub(crate) fn check_above_bed(eta: &[f64], floor: f64) -> Result<()> {
    for (node, &e) in eta.iter().enumerate() {
        if !(e > floor) {
            return Err(WaveError::SurfaceCollapse { min_eta: e, node });
        }
    }
    Ok(())
}

/// Parameters together with the grid built from them. Every numerical routine
/// takes a `&Model`.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: WaveParameters,
    pub grid: PeriodicGrid,
}

impl Model {
    pub fn new(params: WaveParameters) -> Result<Self> {
        let grid = crate::grid::make_grid(&params)?;
        Ok(Self { params, grid })
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    /// Same physics with a different vorticity (the grid is reused).
    pub fn with_omega(&self, omega: f64) -> Self {
        let mut m = self.clone();
        m.params.omega = omega;
        m
    }

    pub(crate) fn check_len(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.n() {
            return Err(WaveError::Shape {
                expected: self.n(),
                got: f.len(),
            });
        }
        Ok(())
    }
}
