//! Uniform periodic grid and Fourier calculus on it.
//!
//! Functions are stored by their values at `x_j = j L / N`. The real
//! trigonometric interpolant is
//!
//! ```text
//! f(x) = a_0 + sum_{m=1}^{N/2-1} (a_m cos(k_m x) + b_m sin(k_m x)) + a_{N/2} cos(k_{N/2} x)
//! ```
//!
//! with `k_m = 2 pi m / L`. Transforms are plain matrix DFTs over precomputed
//! tables; at the grid sizes used here (N <= 256) they cost far less than the
//! dense collocation solve that accompanies every evaluation.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, WaveError};
use crate::params::WaveParameters;

/// Cosine/sine coefficients for modes `0..=N/2`. `sin[0]` and `sin[N/2]` are
/// always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Spectrum {
    pub fn zeros(n: usize) -> Self {
        Self {
            cos: vec![0.0; n / 2 + 1],
            sin: vec![0.0; n / 2 + 1],
        }
    }

    pub fn modes(&self) -> usize {
        self.cos.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGrid {
    length: f64,
    nodes: Vec<f64>,
    wavenumbers: Vec<f64>,
    cos_table: Vec<f64>,
    sin_table: Vec<f64>,
}

/// Builds the grid for `params` after validating them.
pub fn make_grid(params: &WaveParameters) -> Result<PeriodicGrid> {
    params.validate()?;
    PeriodicGrid::new(params.length, params.n)
}

impl PeriodicGrid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(WaveError::Config {
                field: "L",
                reason: "period must be positive and finite",
            });
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(WaveError::Config {
                field: "N",
                reason: "number of nodes must be even",
            });
        }
        let h = length / n as f64;
        let nodes = (0..n).map(|j| j as f64 * h).collect();
        let wavenumbers = (0..=n / 2).map(|m| 2.0 * PI * m as f64 / length).collect();
        let (sin_table, cos_table) = (0..n)
            .map(|q| (2.0 * PI * q as f64 / n as f64).sin_cos())
            .unzip();
        Ok(Self {
            length,
            nodes,
            wavenumbers,
            cos_table,
            sin_table,
        })
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n() as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `k_m` for `m = 0..=N/2`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn nyquist(&self) -> usize {
        self.n() / 2
    }

    /// `(cos(k_m x_j), sin(k_m x_j))` from the tables.
    pub(crate) fn trig(&self, j: usize, m: usize) -> (f64, f64) {
        let q = (j * m) % self.n();
        (self.cos_table[q], self.sin_table[q])
    }

    fn check(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.n() {
            return Err(WaveError::Shape {
                expected: self.n(),
                got: f.len(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, f: &[f64]) -> Result<Spectrum> {
        self.check(f)?;
        let n = self.n();
        let half = n / 2;
        let mut s = Spectrum::zeros(n);
        for m in 0..=half {
            let (mut c, mut si) = (0.0, 0.0);
            let mut q = 0;
            for &v in f {
                c += v * self.cos_table[q];
                si += v * self.sin_table[q];
                q += m;
                if q >= n {
                    q -= n;
                }
            }
            let w = if m == 0 || m == half { 1.0 } else { 2.0 } / n as f64;
            s.cos[m] = w * c;
            s.sin[m] = if m == 0 || m == half { 0.0 } else { w * si };
        }
        Ok(s)
    }

    pub fn inverse(&self, s: &Spectrum) -> Vec<f64> {
        let n = self.n();
        let half = n / 2;
        debug_assert_eq!(s.modes(), half);
        let mut f = vec![s.cos[0]; n];
        for m in 1..=half {
            let (a, b) = (s.cos[m], s.sin[m]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let mut q = 0;
            for v in f.iter_mut() {
                *v += a * self.cos_table[q] + b * self.sin_table[q];
                q += m;
                if q >= n {
                    q -= n;
                }
            }
        }
        f
    }

    /// Evaluates the trigonometric interpolant of `s` at an arbitrary `x`.
    pub fn interpolate(&self, s: &Spectrum, x: f64) -> f64 {
        let mut v = s.cos[0];
        for m in 1..=s.modes() {
            let (sn, cs) = (self.wavenumbers[m] * x).sin_cos();
            v += s.cos[m] * cs + s.sin[m] * sn;
        }
        v
    }

    /// Applies an operator that maps `cos -> -mu sin` and `sin -> mu cos` in
    /// mode `m` (derivatives, conjugations, antiderivatives). The Nyquist mode
    /// is dropped.
    fn apply_odd(&self, f: &[f64], mu: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let s = self.forward(f)?;
        let half = self.nyquist();
        let mut out = Spectrum::zeros(self.n());
        for m in 1..half {
            let k = self.wavenumbers[m];
            let w = mu(k);
            out.cos[m] = w * s.sin[m];
            out.sin[m] = -w * s.cos[m];
        }
        Ok(self.inverse(&out))
    }

    /// Multiplies mode `m` by `mu(k_m)`, mode 0 and Nyquist included.
    pub fn apply_even(&self, f: &[f64], mu: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let mut s = self.forward(f)?;
        for m in 0..=self.nyquist() {
            let w = mu(self.wavenumbers[m]);
            s.cos[m] *= w;
            s.sin[m] *= w;
        }
        Ok(self.inverse(&s))
    }

    /// Spectral derivative with the Nyquist mode of the result set to zero.
    pub fn derivative(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.apply_odd(f, |k| k)
    }

    /// Zero-mean antiderivative (the mean of `f` is ignored).
    pub fn antiderivative(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.apply_odd(f, |k| -1.0 / k)
    }

    /// Harmonic-conjugate trace on a flat surface of depth `depth`:
    /// `cos(kx) -> -tanh(k d) sin(kx)`, `sin(kx) -> tanh(k d) cos(kx)`.
    pub fn flat_conjugate(&self, f: &[f64], depth: f64) -> Result<Vec<f64>> {
        self.apply_odd(f, |k| (k * depth).tanh())
    }

    /// Flat-surface Dirichlet-Neumann multiplier `k tanh(k d)`.
    pub fn flat_dno(&self, f: &[f64], depth: f64) -> Result<Vec<f64>> {
        self.apply_even(f, |k| k * (k * depth).tanh())
    }

    /// Keeps modes `m <= max_mode`, zeroing the rest.
    pub fn lowpass(&self, f: &[f64], max_mode: usize) -> Result<Vec<f64>> {
        if max_mode >= self.nyquist() {
            self.check(f)?;
            return Ok(f.to_vec());
        }
        let mut s = self.forward(f)?;
        for m in max_mode + 1..=self.nyquist() {
            s.cos[m] = 0.0;
            s.sin[m] = 0.0;
        }
        Ok(self.inverse(&s))
    }

    /// Highest mode retained by a dealiasing filter keeping `fraction` of the
    /// resolvable modes.
    pub fn dealias_cutoff(&self, fraction: f64) -> usize {
        let half = self.nyquist();
        if fraction >= 1.0 {
            half
        } else {
            (fraction * half as f64 + 1e-9).floor() as usize
        }
    }

    /// Returns `f(x - shift)` sampled on the grid.
    pub fn translate(&self, f: &[f64], shift: f64) -> Result<Vec<f64>> {
        let s = self.forward(f)?;
        let mut out = Spectrum::zeros(self.n());
        out.cos[0] = s.cos[0];
        for m in 1..=self.nyquist() {
            let (sn, cs) = (self.wavenumbers[m] * shift).sin_cos();
            // a cos(k(x-s)) + b sin(k(x-s))
            out.cos[m] = s.cos[m] * cs - s.sin[m] * sn;
            out.sin[m] = s.cos[m] * sn + s.sin[m] * cs;
        }
        // The shifted Nyquist mode is not representable on the nodes; keep its
        // cosine projection.
        out.sin[self.nyquist()] = 0.0;
        Ok(self.inverse(&out))
    }

    /// Largest coefficient magnitude above `cutoff`, relative to the largest
    /// non-constant coefficient.
    pub fn spectral_tail(&self, f: &[f64], cutoff: usize) -> Result<f64> {
        let s = self.forward(f)?;
        let amp = |m: usize| s.cos[m].hypot(s.sin[m]);
        let total = (1..=self.nyquist()).map(amp).fold(0.0, f64::max);
        if total == 0.0 {
            return Ok(0.0);
        }
        let tail = (cutoff + 1..=self.nyquist()).map(amp).fold(0.0, f64::max);
        Ok(tail / total)
    }

    /// Periodic trapezoid rule over one period.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.spacing() * f.iter().sum::<f64>()
    }

    /// `L^2` inner product on the period cell by the trapezoid rule.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.spacing() * f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn mean(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() / f.len() as f64
    }
}

/// Spectral derivative of `f` on `grid`.
pub fn spectral_derivative(grid: &PeriodicGrid, f: &[f64]) -> Result<Vec<f64>> {
    grid.derivative(f)
}
