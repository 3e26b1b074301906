use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::testutil::*;

#[test]
fn flat_zero_data_gives_zero_field() {
    let m = model(16, 0.3);
    let f = solve_dirichlet(&m, &[1.0; 16], &[0.0; 16]).unwrap();
    assert_eq!(f.a0, 0.0);
    assert!(f.ac.iter().chain(&f.as_).all(|c| *c == 0.0));
    assert_eq!(f.nyquist, 0.0);
}

#[test]
fn flat_cosine_is_a_single_basis_element() {
    let m = model(16, 0.0);
    let xi = cos_mode(&m, 1, 1.0, 0.0);
    let f = solve_dirichlet(&m, &[1.0; 16], &xi).unwrap();
    assert!((f.ac[0] - 1.0).abs() < 1e-13);
    let rest = f.ac[1..].iter().chain(&f.as_).chain([&f.a0, &f.nyquist]);
    assert!(rest.into_iter().all(|c| c.abs() < 1e-13));
}

#[test]
fn flat_traces_are_separable() {
    let omega = 0.7;
    let m = model(32, omega);
    let d = 1.0;
    for mode in [1usize, 3] {
        let k = mode as f64;
        let xi = cos_mode(&m, mode, 1.0, 0.0);
        let tr = traces(&m, &vec![d; 32], &xi).unwrap();
        for (j, x) in m.grid.nodes().iter().enumerate() {
            assert!((tr.xi1[j] + k * (k * x).sin()).abs() < 1e-12);
            assert!((tr.xi2[j] - k * (k * d).tanh() * (k * x).cos()).abs() < 1e-12);
            let chi = -(k * d).tanh() * (k * x).sin() - omega * d * d / 2.0;
            assert!((tr.chi[j] - chi).abs() < 1e-12);
        }
    }
}

#[test]
fn constant_data_has_no_flow() {
    let omega = -1.3;
    let m = model(16, omega);
    let d = 0.8;
    let tr = traces(&m, &[d; 16], &[2.5; 16]).unwrap();
    for j in 0..16 {
        assert!(tr.xi1[j].abs() < 1e-13 && tr.xi2[j].abs() < 1e-13);
        assert!((tr.chi[j] + omega * d * d / 2.0).abs() < 1e-13);
    }
}

#[test]
fn chain_rule_identity_on_random_states() {
    let mut r = rng(7);
    for (n, amp) in [(64, 0.05), (128, 0.1)] {
        let m = model(n, 1.0);
        for _ in 0..4 {
            let s = random_state(&mut r, &m, amp, 0.3);
            let tr = traces(&m, &s.eta, &s.xi).unwrap();
            let xi_x = m.grid.derivative(&s.xi).unwrap();
            let eta_x = m.grid.derivative(&s.eta).unwrap();
            let chain: Vec<f64> = (0..n).map(|j| tr.xi1[j] + eta_x[j] * tr.xi2[j]).collect();
            assert!(
                max_abs_diff(&xi_x, &chain) < 1e-10,
                "{}",
                max_abs_diff(&xi_x, &chain)
            );
        }
    }
}

#[test]
fn flat_hilbert_transform() {
    let m = model(32, 2.0);
    let d = 1.0;
    let tanh = |k: f64| (k * d).tanh();
    for mode in [1usize, 2, 5] {
        let k = mode as f64;
        let c = cos_mode(&m, mode, 1.0, 0.0);
        let s = cos_mode(&m, mode, 1.0, -core::f64::consts::FRAC_PI_2);
        let tc = hilbert_transform(&m, &[d; 32], &c).unwrap();
        let ts = hilbert_transform(&m, &[d; 32], &s).unwrap();
        for (j, x) in m.grid.nodes().iter().enumerate() {
            assert!((tc[j] + tanh(k) * (k * x).sin()).abs() < 1e-10);
            assert!((ts[j] - tanh(k) * (k * x).cos()).abs() < 1e-10);
        }
    }
}

#[test]
fn hilbert_transform_ignores_vorticity_and_matches_chi() {
    let mut r = rng(11);
    let m = model(32, 1.7);
    let s = random_state(&mut r, &m, 0.08, 0.2);
    let tr = traces(&m, &s.eta, &s.xi).unwrap();
    let t0 = hilbert_transform(&m.with_omega(0.0), &s.eta, &s.xi).unwrap();
    assert_eq!(t0, tr.t_xi);
    for j in 0..32 {
        let chi = tr.t_xi[j] - 0.85 * s.eta[j] * s.eta[j];
        assert!((chi - tr.chi[j]).abs() < 1e-12);
    }
}

#[test]
fn pure_shear_in_the_interior() {
    let omega = 1.5;
    let m = model(16, omega);
    let eta = [1.0; 16];
    let f = solve_dirichlet(&m, &eta, &[0.0; 16]).unwrap();
    let pts = [(0.3, 0.0), (1.1, 0.4), (4.0, 1.0)];
    for p in evaluate_interior(&m, &f, &eta, &pts).unwrap() {
        assert!((p.u + omega * p.y).abs() < 1e-15);
        assert_eq!(p.v, 0.0);
        assert!((p.psi + omega * p.y * p.y / 2.0).abs() < 1e-15);
    }
}

#[test]
fn bed_conditions_hold_for_any_field() {
    let mut r = rng(3);
    let m = model(32, -0.9);
    let s = random_state(&mut r, &m, 0.1, 0.5);
    let f = solve_dirichlet(&m, &s.eta, &s.xi).unwrap();
    let pts: Vec<(f64, f64)> = (0..40).map(|i| (i as f64 * 0.157, 0.0)).collect();
    for p in evaluate_interior(&m, &f, &s.eta, &pts).unwrap() {
        assert!(p.v.abs() < 1e-13);
        assert!(p.psi.abs() < 1e-13);
    }
    // Mean horizontal velocity on the bed vanishes (periodic potential).
    let u_bed: Vec<f64> = m
        .grid
        .nodes()
        .iter()
        .map(|&x| f.evaluate(x, 0.0).phi_x)
        .collect();
    assert!(m.grid.integrate(&u_bed).abs() < 1e-12);
}

#[test]
fn interior_fields_satisfy_continuity_and_vorticity() {
    let omega = 2.0;
    let m = model(32, omega);
    let mut r = rng(5);
    let s = random_state(&mut r, &m, 0.1, 0.4);
    let f = solve_dirichlet(&m, &s.eta, &s.xi).unwrap();
    let h = 1e-4;
    let sample = |x: f64, y: f64| {
        let v = f.evaluate(x, y);
        (v.phi_x - omega * y, v.phi_y, v.conj, v.phi_x, v.phi_y)
    };
    for &(x, y) in &[(0.5, 0.3), (2.0, 0.7), (4.4, 0.5), (5.9, 0.8)] {
        let (ue, ve, ..) = sample(x + h, y);
        let (uw, vw, ..) = sample(x - h, y);
        let (un, vn, cn, ..) = sample(x, y + h);
        let (us, vs, cs, ..) = sample(x, y - h);
        let (_, _, ce, ..) = sample(x + h, y);
        let (_, _, cw, ..) = sample(x - h, y);
        let div = (ue - uw) / (2.0 * h) + (vn - vs) / (2.0 * h);
        let curl = (ve - vw) / (2.0 * h) - (un - us) / (2.0 * h);
        assert!(div.abs() < 1e-6, "div {div}");
        assert!((curl - omega).abs() < 1e-6, "curl {curl}");
        // Conjugacy: phi_x = conj_y, phi_y = -conj_x.
        let (.., px, py) = sample(x, y);
        assert!((px - (cn - cs) / (2.0 * h)).abs() < 1e-6);
        assert!((py + (ce - cw) / (2.0 * h)).abs() < 1e-6);
    }
}

#[test]
fn points_above_the_surface_are_rejected() {
    let m = model(16, 0.0);
    let eta = [1.0; 16];
    let f = solve_dirichlet(&m, &eta, &[0.0; 16]).unwrap();
    assert!(matches!(
        evaluate_interior(&m, &f, &eta, &[(1.0, 1.01)]),
        Err(WaveError::Domain { .. })
    ));
    assert!(matches!(
        evaluate_interior(&m, &f, &eta, &[(1.0, -0.01)]),
        Err(WaveError::Domain { .. })
    ));
    assert!(evaluate_interior(&m, &f, &eta, &[(1.0, 1.0 + 1e-14)]).is_ok());
}

#[test]
fn flat_transform_is_skew_adjoint_wavy_is_not() {
    let m = model(64, 0.0);
    let mut r = rng(21);
    let defect = |eta: &[f64], f: &[f64], g: &[f64]| {
        let tf = hilbert_transform(&m, eta, f).unwrap();
        let tg = hilbert_transform(&m, eta, g).unwrap();
        (m.grid.inner(&tf, g) + m.grid.inner(f, &tg)).abs()
    };
    let flat = vec![1.0; 64];
    let wavy: Vec<f64> = cos_mode(&m, 1, 0.1, 0.0).iter().map(|v| 1.0 + v).collect();
    let mut worst_wavy: f64 = 0.0;
    for _ in 0..4 {
        let f = band_limited(&mut r, &m, 8, 1.0);
        let g = band_limited(&mut r, &m, 8, 1.0);
        assert!(defect(&flat, &f, &g) < 1e-10);
        worst_wavy = worst_wavy.max(defect(&wavy, &f, &g));
    }
    assert!(worst_wavy > 1e-6, "{worst_wavy}");
}

#[test]
fn traces_are_invariant_under_constant_shift() {
    let m = model(32, 0.5);
    let mut r = rng(8);
    let s = random_state(&mut r, &m, 0.1, 0.3);
    let shifted: Vec<f64> = s.xi.iter().map(|v| v + 3.0).collect();
    let a = traces(&m, &s.eta, &s.xi).unwrap();
    let b = traces(&m, &s.eta, &shifted).unwrap();
    assert!(max_abs_diff(&a.xi1, &b.xi1) < 1e-12);
    assert!(max_abs_diff(&a.xi2, &b.xi2) < 1e-12);
    assert!(max_abs_diff(&a.t_xi, &b.t_xi) < 1e-12);
}

#[test]
fn wavy_solve_meets_tolerance_and_series_agrees() {
    let m = model(64, 0.0);
    let eta: Vec<f64> = cos_mode(&m, 1, 0.05, 0.0).iter().map(|v| 1.0 + v).collect();
    let xi = cos_mode(&m, 1, 1.0, -core::f64::consts::FRAC_PI_2);
    let field = solve_dirichlet(&m, &eta, &xi).unwrap();
    assert!(field.solve_residual <= 1e-10);
    let tr = surface_traces(&m, &field, &eta).unwrap();
    let series = dno_series_order2(&m, &eta, &xi).unwrap();
    let eta_x = m.grid.derivative(&eta).unwrap();
    let flux: Vec<f64> = (0..64).map(|j| tr.xi2[j] - eta_x[j] * tr.xi1[j]).collect();
    // O(a^3) with a = 0.05.
    assert!(max_abs_diff(&flux, &series.normal_flux) < 1e-3);
    assert!(max_abs_diff(&tr.t_xi, &series.t_xi) < 1e-3);
}

#[test]
fn series_is_exact_on_flat_surfaces_and_linear() {
    let m = model(32, 0.0);
    let mut r = rng(2);
    let eta = vec![1.2; 32];
    let a = band_limited(&mut r, &m, 6, 1.0);
    let b = band_limited(&mut r, &m, 6, 1.0);
    let sa = dno_series_order2(&m, &eta, &a).unwrap();
    let exact = traces(&m, &eta, &a).unwrap();
    assert!(max_abs_diff(&sa.t_xi, &exact.t_xi) < 1e-12);
    assert!(max_abs_diff(&sa.normal_flux, &exact.xi2) < 1e-12);

    let wavy: Vec<f64> = cos_mode(&m, 2, 0.05, 0.3).iter().map(|v| 1.0 + v).collect();
    let sum: Vec<f64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
    let (sa, sb, ss) = (
        dno_series_order2(&m, &wavy, &a).unwrap(),
        dno_series_order2(&m, &wavy, &b).unwrap(),
        dno_series_order2(&m, &wavy, &sum).unwrap(),
    );
    for j in 0..32 {
        assert!((ss.t_xi[j] - sa.t_xi[j] - sb.t_xi[j]).abs() < 1e-12);
        assert!((ss.normal_flux[j] - sa.normal_flux[j] - sb.normal_flux[j]).abs() < 1e-12);
    }
}

#[test]
fn series_error_is_cubic_in_amplitude() {
    let m = model(64, 0.0);
    let xi = cos_mode(&m, 1, 1.0, -core::f64::consts::FRAC_PI_2);
    let errs: Vec<f64> = [0.01, 0.02, 0.04]
        .iter()
        .map(|a| {
            let eta: Vec<f64> = cos_mode(&m, 1, *a, 0.0).iter().map(|v| 1.0 + v).collect();
            let tr = traces(&m, &eta, &xi).unwrap();
            let s = dno_series_order2(&m, &eta, &xi).unwrap();
            max_abs_diff(&tr.t_xi, &s.t_xi)
        })
        .collect();
    let slope = (errs[2] / errs[0]).ln() / 4f64.ln();
    assert!((slope - 3.0).abs() <= 0.3, "slope {slope}, errors {errs:?}");
}

#[test]
fn degenerate_surfaces_are_reported() {
    let m = model(16, 0.0);
    let mut eta = vec![1.0; 16];
    eta[3] = 0.0;
    assert!(matches!(
        solve_dirichlet(&m, &eta, &[0.0; 16]),
        Err(WaveError::SurfaceCollapse { node: 3, .. })
    ));
    let m = model(128, 0.0);
    let spiky: Vec<f64> = (0..128)
        .map(|j| if j % 2 == 0 { 0.05 } else { 6.0 })
        .collect();
    assert!(matches!(
        solve_dirichlet(&m, &spiky, &[1.0; 128]),
        Err(WaveError::Singular { .. })
    ));
    assert!(matches!(
        solve_dirichlet(&m, &[1.0; 12], &[1.0; 12]),
        Err(WaveError::Shape { .. })
    ));
}
