//! Random resolved states for unit tests.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{Model, SurfaceState, WaveParameters};

/// Highest mode excited in random states.
pub const RANDOM_MODES: usize = 4;

pub fn model(n: usize, omega: f64) -> Model {
    Model::new(WaveParameters {
        n,
        omega,
        ..WaveParameters::default()
    })
    .unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Zero-mean trigonometric sum over modes `1..=max_mode` with geometric decay,
/// scaled so that `max |f| = amplitude`.
pub fn band_limited(rng: &mut StdRng, model: &Model, max_mode: usize, amplitude: f64) -> Vec<f64> {
    let ks = model.grid.wavenumbers().to_vec();
    let coefs: Vec<(f64, f64)> = (1..=max_mode)
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
            coefs
                .iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let k = ks[i + 1];
                    a * (k * x).cos() + b * (k * x).sin()
                })
                .sum()
        })
        .collect();
    let peak = f.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    f.into_iter().map(|v| v * amplitude / peak).collect()
}

/// Resolved state with surface amplitude `amp * d_ref` and potential amplitude `xi_amp`.
pub fn random_state(rng: &mut StdRng, model: &Model, amp: f64, xi_amp: f64) -> SurfaceState {
    let d = model.params.d_ref;
    let eta = band_limited(rng, model, RANDOM_MODES, amp * d)
        .into_iter()
        .map(|v| v + d)
        .collect();
    let offset = rng.gen_range(-0.5..0.5);
    let xi = band_limited(rng, model, RANDOM_MODES, xi_amp)
        .into_iter()
        .map(|v| v + offset)
        .collect();
    SurfaceState { t: 0.0, eta, xi }
}

pub fn cos_mode(model: &Model, m: usize, amp: f64, phase: f64) -> Vec<f64> {
    let k = 2.0 * PI * m as f64 / model.params.length;
    model
        .grid
        .nodes()
        .iter()
        .map(|x| amp * (k * x + phase).cos())
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
