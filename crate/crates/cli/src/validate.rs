//! The property suite behind `cvwave validate`.

use std::fmt;

use cvwave_core::dynamics::{self, integrate, linearize, rhs, rhs_terms, rhs_with, StepOptions};
use cvwave_core::hamiltonian::{energy_surface, energy_volume, grad_eta, grad_xi};
use cvwave_core::harmonic::{dno_series_order2, hilbert_transform, traces};
use cvwave_core::reconstruct::{bed_flow_check, euler_residuals, pressure_field};
use cvwave_core::steady::{
    continuation_run, flux_residual, hamiltonian_residual, Branch, NewtonOptions,
};
use cvwave_core::{Model, SurfaceState, WaveParameters};
use nalgebra::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::initial::linear_mode;
use crate::spectrum::{eigenvalues, nearest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub bound: Bound,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            bound: Bound::AtMost,
        }
    }

    fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            bound: Bound::AtLeast,
        }
    }

    /// A check that could not be evaluated.
    fn failed(name: impl Into<String>) -> Self {
        Self::at_most(name, f64::NAN, 0.0)
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.threshold,
            Bound::AtLeast => self.measured >= self.threshold,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        write!(
            f,
            "{} {:<44} measured {:.3e} {op} {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub quick: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            quick: false,
            seed: 1,
        }
    }
}

/// Smooth random field with `modes` Fourier modes decaying like `e^{-m}` and
/// `max |f| = amplitude`.
pub fn band_limited(rng: &mut StdRng, model: &Model, modes: usize, amplitude: f64) -> Vec<f64> {
    let ks = model.grid.wavenumbers();
    let coef: Vec<(f64, f64)> = (1..=modes)
        .map(|m| {
            let w = (-(m as f64 - 1.0)).exp();
            (w * rng.gen_range(-1.0..1.0), w * rng.gen_range(-1.0..1.0))
        })
        .collect();
    let f: Vec<f64> = model
        .grid
        .nodes()
        .iter()
        .map(|x| {
            coef.iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let (s, c) = (ks[i + 1] * x).sin_cos();
                    a * c + b * s
                })
                .sum()
        })
        .collect();
    let peak = f
        .iter()
        .fold(0.0, |m: f64, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    f.iter().map(|v| v * amplitude / peak).collect()
}

/// A resolved random state: `eta = d (1 + amp * band-limited)`.
pub fn random_state(rng: &mut StdRng, model: &Model, amp: f64, xi_amp: f64) -> SurfaceState {
    let d = model.params.d_ref;
    let eta = band_limited(rng, model, 4, amp * d)
        .into_iter()
        .map(|v| d + v)
        .collect();
    let offset = rng.gen_range(-0.5..0.5);
    let xi = band_limited(rng, model, 4, xi_amp)
        .into_iter()
        .map(|v| v + offset)
        .collect();
    SurfaceState { t: 0.0, eta, xi }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

struct Suite {
    base: WaveParameters,
    rng: StdRng,
    quick: bool,
    checks: Vec<Check>,
}

impl Suite {
    fn model(&self, omega: f64) -> Model {
        Model::new(WaveParameters {
            omega,
            ..self.base.clone()
        })
        .expect("suite parameters are valid")
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn energy(&mut self) {
        let per = if self.quick { 2 } else { 7 };
        let mut worst: f64 = 0.0;
        for omega in [-2.0, 0.0, 2.0] {
            let m = self.model(omega);
            for _ in 0..per {
                let s = random_state(&mut self.rng, &m, 0.1, 0.4);
                worst =
                    worst.max(energy_volume(&m, &s).map_or(f64::INFINITY, |r| r.relative_mismatch));
            }
        }
        self.push(Check::at_most(
            "energy: surface vs volume form",
            worst,
            1e-8,
        ));
    }

    fn gradients(&mut self) {
        let dirs = if self.quick { 4 } else { 20 };
        let mut worst: f64 = 0.0;
        for omega in [0.0, 1.5] {
            let m = self.model(omega);
            let s = random_state(&mut self.rng, &m, 0.05, 0.3);
            let tr = traces(&m, &s.eta, &s.xi).unwrap();
            let (ge, gx) = (
                grad_eta(&m, &s, &tr).unwrap(),
                grad_xi(&m, &s, &tr).unwrap(),
            );
            let eps = 1e-5;
            for _ in 0..dirs {
                let dir = band_limited(&mut self.rng, &m, 6, 1.0);
                for (which, grad) in [(0, &ge), (1, &gx)] {
                    let at = |sign: f64| {
                        let mut p = s.clone();
                        let v = if which == 0 { &mut p.eta } else { &mut p.xi };
                        v.iter_mut()
                            .zip(&dir)
                            .for_each(|(a, d)| *a += sign * eps * d);
                        energy_surface(&m, &p).unwrap()
                    };
                    let fd = (at(1.0) - at(-1.0)) / (2.0 * eps);
                    worst = worst.max(rel(fd, m.grid.inner(grad, &dir)));
                }
            }
        }
        self.push(Check::at_most(
            "gradients: directional finite differences",
            worst,
            1e-5,
        ));
    }

    fn conservation(&mut self) {
        let m = self.model(1.0);
        let periods = if self.quick { 2.0 } else { 10.0 };
        let d = m.params.d_ref;
        let s = linear_mode(&m, 1, 0.01 * d, Branch::Positive).unwrap();
        let k = m.grid.wavenumbers()[1];
        let c = dynamics::linear_phase_speeds(&m.params, k).0;
        let t_end = periods * m.params.length / c.abs();
        let dt = dynamics::stable_dt(&m);
        match integrate(&m, &s, t_end, dt, 10, StepOptions::default()) {
            Ok(tr) => {
                let d0 = tr.diagnostics[0];
                let dh = max_abs(
                    tr.diagnostics
                        .iter()
                        .map(|r| rel(r.h_surface, d0.h_surface)),
                );
                let dm = max_abs(tr.diagnostics.iter().map(|r| rel(r.mass, d0.mass)));
                self.push(Check::at_most("conservation: energy drift", dh, 1e-8));
                self.push(Check::at_most("conservation: mass drift", dm, 1e-10));
            }
            Err(_) => self.push(Check::failed("conservation: integration")),
        }
    }

    fn equilibrium(&mut self) {
        let m = self.model(1.3);
        let d = m.params.d_ref;
        let flat = SurfaceState::flat(m.n(), d);
        let r = rhs(&m, &flat).unwrap();
        let g = m.params.gravity;
        self.push(Check::at_most(
            "equilibrium: eta_dot",
            max_abs(r.eta_dot.iter().cloned()),
            1e-12,
        ));
        self.push(Check::at_most(
            "equilibrium: xi_dot + g d",
            max_abs(r.xi_dot.iter().map(|v| v + g * d)),
            1e-10,
        ));
        let s = random_state(&mut self.rng, &m, 0.05, 0.3);
        let mut shifted = s.clone();
        shifted.xi.iter_mut().for_each(|v| *v += 3.0);
        let h = rel(
            energy_surface(&m, &s).unwrap(),
            energy_surface(&m, &shifted).unwrap(),
        );
        self.push(Check::at_most("gauge: energy under xi + const", h, 1e-13));
    }

    fn hilbert(&mut self) {
        let m = self.model(0.0);
        let d = m.params.d_ref;
        let flat = vec![d; m.n()];
        let mut worst: f64 = 0.0;
        for mode in 1..=4 {
            let k = m.grid.wavenumbers()[mode];
            let f: Vec<f64> = m.grid.nodes().iter().map(|x| (k * x).cos()).collect();
            let t = hilbert_transform(&m, &flat, &f).unwrap();
            let want = m
                .grid
                .nodes()
                .iter()
                .map(|x| -(k * d).tanh() * (k * x).sin());
            worst = worst.max(max_abs(t.iter().zip(want).map(|(a, b)| a - b)));
        }
        self.push(Check::at_most(
            "hilbert: flat action on cos(kx)",
            worst,
            1e-10,
        ));
        let k1 = m.grid.wavenumbers()[1];
        let wavy: Vec<f64> = m
            .grid
            .nodes()
            .iter()
            .map(|x| d + 0.1 * d * (k1 * x).cos())
            .collect();
        let (mut flat_defect, mut wavy_defect): (f64, f64) = (0.0, 0.0);
        for _ in 0..4 {
            let f = band_limited(&mut self.rng, &m, 8, 1.0);
            let g = band_limited(&mut self.rng, &m, 8, 1.0);
            let defect = |eta: &[f64]| {
                let tf = hilbert_transform(&m, eta, &f).unwrap();
                let tg = hilbert_transform(&m, eta, &g).unwrap();
                (m.grid.inner(&tf, &g) + m.grid.inner(&f, &tg)).abs()
            };
            flat_defect = flat_defect.max(defect(&flat));
            wavy_defect = wavy_defect.max(defect(&wavy));
        }
        self.push(Check::at_most(
            "hilbert: flat skew-adjointness defect",
            flat_defect,
            1e-10,
        ));
        self.push(Check::at_least(
            "hilbert: wavy skew-adjointness defect",
            wavy_defect,
            1e-6,
        ));
    }

    fn dispersion_error(&self, omega: f64) -> f64 {
        let m = self.model(omega);
        let a = match linearize(&m, &SurfaceState::flat(m.n(), m.params.d_ref), 1e-6) {
            Ok(a) => a,
            Err(_) => return f64::INFINITY,
        };
        let eigs = eigenvalues(&a);
        let mut worst: f64 = 0.0;
        for mode in 1..=4 {
            let k = m.grid.wavenumbers()[mode];
            let (sp, sm) = dynamics::linear_frequencies(&m.params, k);
            for sigma in [sp, sm, -sp, -sm] {
                let target = Complex::new(0.0, sigma);
                let hit = nearest(&eigs, target).unwrap();
                worst = worst.max((hit - target).norm() / sigma.abs());
            }
        }
        worst
    }

    fn zakharov(&mut self) {
        let m = self.model(0.0);
        let s = random_state(&mut self.rng, &m, 0.05, 0.3);
        let terms = rhs_terms(&m, &s).unwrap();
        let raw = rhs_with(&m, &s, false).unwrap();
        let diff = max_abs(raw.xi_dot.iter().zip(&terms.grad_eta).map(|(a, b)| a + b));
        self.push(Check::at_most(
            "zakharov: xi_dot = -grad_eta at omega = 0",
            diff,
            0.0,
        ));
        let e = self.dispersion_error(0.0);
        self.push(Check::at_most(
            "zakharov: dispersion g k tanh(k d), k = 1..4",
            e,
            1e-6,
        ));
    }

    fn vorticity_dispersion(&mut self) {
        let worst = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|&w| self.dispersion_error(w))
            .fold(0.0, f64::max);
        self.push(Check::at_most(
            "dispersion: constant vorticity, k = 1..4",
            worst,
            1e-6,
        ));
    }

    fn steady(&mut self) {
        let m = self.model(1.0);
        let amps: Vec<f64> = if self.quick {
            vec![0.025, 0.05]
        } else {
            vec![0.01, 0.02, 0.03, 0.04, 0.05]
        };
        let d = m.params.d_ref;
        let amps: Vec<f64> = amps.iter().map(|a| a * d).collect();
        let fam = match continuation_run(&m, Branch::Positive, &amps, NewtonOptions::default()) {
            Ok(f) => f,
            Err(_) => {
                self.push(Check::failed("steady: continuation"));
                return;
            }
        };
        let res = fam.iter().map(|w| w.residual_norm).fold(0.0, f64::max);
        self.push(Check::at_most("steady: Newton residual", res, 1e-10));
        let mut flux: f64 = 0.0;
        let mut forms: f64 = 0.0;
        for w in &fam {
            let t = hilbert_transform(&m, &w.eta, &w.xi).unwrap();
            let omega = m.params.omega;
            flux = flux.max(w.flux_deviation);
            flux = flux.max(max_abs(
                t.iter()
                    .zip(&w.eta)
                    .map(|(t, e)| t - w.c * e - 0.5 * omega * e * e - w.k_flux),
            ));
            let (a, b) = flux_residual(&m, &w.eta, &w.xi, w.c, w.k_flux).unwrap();
            let (p, q) = hamiltonian_residual(&m, &w.eta, &w.xi, w.c, w.k_flux).unwrap();
            forms = forms.max(max_abs(
                a.iter().zip(&p).chain(b.iter().zip(&q)).map(|(x, y)| x - y),
            ));
        }
        self.push(Check::at_most("steady: flux identities", flux, 1e-8));
        self.push(Check::at_most(
            "steady: flux form vs Hamiltonian form",
            forms,
            1e-12,
        ));
        let w = fam.last().unwrap();
        let period = m.params.length / w.c.abs();
        let dt = period / 120.0;
        let drift = match integrate(&m, &w.state(), period, dt, 30, StepOptions::default()) {
            Ok(tr) => tr
                .snapshots
                .iter()
                .map(|s| {
                    let want = m.grid.translate(&w.eta, w.c * s.t).unwrap();
                    max_abs(s.eta.iter().zip(&want).map(|(a, b)| a - b))
                })
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        self.push(Check::at_most(
            "steady: rigid translation over one period",
            drift,
            1e-6,
        ));
    }

    fn series(&mut self) {
        let m = self.model(0.0);
        let d = m.params.d_ref;
        let k1 = m.grid.wavenumbers()[1];
        let xi: Vec<f64> = m.grid.nodes().iter().map(|x| (k1 * x).sin()).collect();
        let errs: Vec<f64> = [0.01, 0.02, 0.04]
            .iter()
            .map(|a| {
                let eta: Vec<f64> = m
                    .grid
                    .nodes()
                    .iter()
                    .map(|x| d + a * d * (k1 * x).cos())
                    .collect();
                let t = hilbert_transform(&m, &eta, &xi).unwrap();
                let s = dno_series_order2(&m, &eta, &xi).unwrap();
                max_abs(t.iter().zip(&s.t_xi).map(|(a, b)| a - b))
            })
            .collect();
        let slope = (errs[2] / errs[0]).ln() / 4f64.ln();
        self.push(Check::at_most(
            "series: |slope - 3| of order-2 error",
            (slope - 3.0).abs(),
            0.3,
        ));
    }

    fn reconstruction(&mut self) {
        let m = self.model(1.5);
        let s = random_state(&mut self.rng, &m, 0.05, 0.3);
        let pts: Vec<(f64, f64)> = m
            .grid
            .nodes()
            .iter()
            .cloned()
            .zip(s.eta.iter().cloned())
            .collect();
        let p_atm = m.params.p_atm;
        let surf = pressure_field(&m, &s, &pts)
            .map(|f| max_abs(f.iter().map(|x| x.pressure.unwrap() - p_atm)))
            .unwrap_or(f64::INFINITY);
        self.push(Check::at_most(
            "reconstruct: surface pressure - P_atm",
            surf,
            1e-8,
        ));
        let d = m.params.d_ref;
        let g = m.params.gravity;
        let flat = SurfaceState::flat(m.n(), d);
        let l = m.params.length;
        let lattice: Vec<(f64, f64)> = (0..8)
            .flat_map(|i| (0..5).map(move |j| (l * i as f64 / 8.0, d * j as f64 / 4.0)))
            .collect();
        let hydro = pressure_field(&m, &flat, &lattice)
            .map(|f| {
                max_abs(
                    f.iter()
                        .map(|x| x.pressure.unwrap() - (p_atm + g * (d - x.y))),
                )
            })
            .unwrap_or(f64::INFINITY);
        self.push(Check::at_most(
            "reconstruct: hydrostatic flat shear",
            hydro,
            1e-12,
        ));
        let wave = linear_mode(&m, 1, 0.01 * d, Branch::Positive).unwrap();
        let pts = [
            (0.05 * l, 0.5 * d),
            (0.3 * l, 0.9 * d),
            (0.64 * l, 0.1 * d),
            (0.92 * l, 0.7 * d),
        ];
        let euler = euler_residuals(&m, &wave, &pts, 1e-4 * d, 1e-3)
            .map(|r| max_abs(r.iter().flat_map(|e| [e.horizontal, e.vertical])))
            .unwrap_or(f64::INFINITY);
        self.push(Check::at_most("reconstruct: Euler residuals", euler, 1e-5));
        let bed = [&s, &flat, &wave]
            .iter()
            .map(|st| {
                let scale = m.params.length * (1.0 + max_abs(st.xi.iter().cloned()));
                bed_flow_check(&m, st).map_or(f64::INFINITY, |b| b.abs() / scale)
            })
            .fold(0.0, f64::max);
        self.push(Check::at_most(
            "reconstruct: bed flow integral (relative)",
            bed,
            1e-12,
        ));
    }
}

/// Runs every check. `quick` halves the grid and shortens the long checks.
pub fn run_suite(base: &WaveParameters, opts: SuiteOptions) -> Vec<Check> {
    let mut base = base.clone();
    if opts.quick {
        base.n = 32;
    }
    let mut s = Suite {
        base,
        rng: StdRng::seed_from_u64(opts.seed),
        quick: opts.quick,
        checks: Vec::new(),
    };
    s.energy();
    s.gradients();
    s.conservation();
    s.equilibrium();
    s.hilbert();
    s.zakharov();
    s.vorticity_dispersion();
    s.steady();
    s.series();
    s.reconstruction();
    s.checks
}
