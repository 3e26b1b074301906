use cvwave_core::dynamics::{integrate, stable_dt, StepOptions};
use cvwave_core::hamiltonian::{energy_surface, mass};
use cvwave_core::steady::{continuation_run, mass_flux, Branch, NewtonOptions};
use cvwave_core::{Model, SurfaceState, WaveError, WaveParameters};

fn model(omega: f64, n: usize) -> Model {
    Model::new(WaveParameters {
        omega,
        n,
        ..WaveParameters::default()
    })
    .unwrap()
}

#[test]
fn rejects_bad_parameters() {
    let bad = |p: WaveParameters| Model::new(p).is_err();
    assert!(bad(WaveParameters {
        n: 31,
        ..WaveParameters::default()
    }));
    assert!(bad(WaveParameters {
        length: -1.0,
        ..WaveParameters::default()
    }));
    assert!(bad(WaveParameters {
        d_ref: 0.0,
        ..WaveParameters::default()
    }));
    assert!(bad(WaveParameters {
        omega: f64::NAN,
        ..WaveParameters::default()
    }));
}

#[test]
fn surface_touching_the_bed_is_a_domain_error() {
    let m = model(0.0, 16);
    let mut s = SurfaceState::flat(16, 1.0);
    s.eta[3] = 0.0;
    assert!(matches!(
        energy_surface(&m, &s),
        Err(WaveError::SurfaceCollapse { .. })
    ));
}

#[test]
fn steady_member_reproduces_its_flux_and_travels() {
    let m = model(0.5, 32);
    let fam = continuation_run(
        &m,
        Branch::Negative,
        &[0.0, 0.015, 0.03],
        NewtonOptions::default(),
    )
    .unwrap();
    assert_eq!(fam.len(), 3);
    assert!(fam[0].c < 0.0);
    let w = &fam[2];
    assert!(w.residual_norm <= 1e-10);
    let (k, dev) = mass_flux(&m, &w.state(), w.c).unwrap();
    assert!((k - w.k_flux).abs() < 1e-9 && dev < 1e-8);

    let t_end = 0.5 * m.params.length / w.c.abs();
    let tr = integrate(
        &m,
        &w.state(),
        t_end,
        stable_dt(&m).min(t_end / 100.0),
        1,
        StepOptions::default(),
    )
    .unwrap();
    let end = tr.last().unwrap();
    let want = m.grid.translate(&w.eta, w.c * end.t).unwrap();
    let err = end
        .eta
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-6, "{err:e}");
    let h0 = energy_surface(&m, &w.state()).unwrap();
    assert!((energy_surface(&m, end).unwrap() - h0).abs() < 1e-9 * h0.abs());
    assert!((mass(&m, end) - mass(&m, &w.state())).abs() < 1e-12);
}
