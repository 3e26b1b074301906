//! Second-order operator expansion of the surface operators about the mean
//! depth. This is an independent check on the collocation solve and is not used
//! by the dynamics.

use alloc::vec::Vec;

use crate::error::Result;
use crate::params::Model;

/// Series approximations of the surface operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTraces {
    /// `phi_y - eta_x phi_x` on the surface (unnormalized normal derivative).
    pub normal_flux: Vec<f64>,
    /// `T(eta) xi`.
    pub t_xi: Vec<f64>,
}

/// Expands the Dirichlet-Neumann operator in powers of `zeta = eta - mean(eta)`
/// up to second order,
///
/// ```text
/// G0 = D tanh(h D)
/// G1 = D zeta D - G0 zeta G0
/// G2 = -1/2 (D^2 zeta^2 G0 + G0 zeta^2 D^2 - 2 G0 zeta G0 zeta G0)
/// ```
///
/// with `D = -i d/dx`, and recovers `T(eta) xi` from `d/dx T(eta) xi = -G(eta) xi`
/// together with `mean(T(eta) xi) = -mean(xi eta_x)`.
pub fn dno_series_order2(model: &Model, eta: &[f64], xi: &[f64]) -> Result<SeriesTraces> {
    model.check_len(eta)?;
    model.check_len(xi)?;
    let grid = &model.grid;
    let h = grid.mean(eta);
    let zeta: Vec<f64> = eta.iter().map(|e| e - h).collect();
    let zeta2: Vec<f64> = zeta.iter().map(|z| z * z).collect();

    let mul = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p * q).collect() };
    let g0 = |f: &[f64]| grid.flat_dno(f, h);
    let d2 = |f: &[f64]| grid.apply_even(f, |k| k * k);

    let g0xi = g0(xi)?;

    // G1 xi = -(zeta xi_x)_x - G0(zeta G0 xi)
    let xi_x = grid.derivative(xi)?;
    let flux1 = grid.derivative(&mul(&zeta, &xi_x))?;
    let back1 = g0(&mul(&zeta, &g0xi))?;
    let g1xi: Vec<f64> = flux1.iter().zip(&back1).map(|(a, b)| -a - b).collect();

    let t1 = d2(&mul(&zeta2, &g0xi))?;
    let t2 = g0(&mul(&zeta2, &d2(xi)?))?;
    let t3 = g0(&mul(&zeta, &back1))?;
    let g2xi: Vec<f64> = (0..xi.len())
        .map(|j| -0.5 * (t1[j] + t2[j] - 2.0 * t3[j]))
        .collect();

    let normal_flux: Vec<f64> = (0..xi.len()).map(|j| g0xi[j] + g1xi[j] + g2xi[j]).collect();

    let eta_x = grid.derivative(eta)?;
    let mean_t = -grid.mean(&mul(xi, &eta_x));
    let t_xi = grid
        .antiderivative(&normal_flux)?
        .into_iter()
        .map(|v| mean_t - v)
        .collect();
    Ok(SeriesTraces { normal_flux, t_xi })
}
