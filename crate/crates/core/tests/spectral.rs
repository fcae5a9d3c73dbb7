mod common;

use std::f64::consts::TAU;

use common::rng;
use num_complex::Complex64 as C64;
use paramstab::spectral::{NoisePsd, SpectralError};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn normalized_over_parameter_grid() {
    for a in [0.5, 1.0, 4.0] {
        for w0 in [0.0, 5.0, 10.0] {
            let n = NoisePsd::new(a, w0).unwrap().normalization().unwrap();
            assert!((n - 1.0).abs() <= 1e-8, "a={a} w0={w0}: {n}");
        }
    }
}

#[test]
fn quartic_near_zero_frequency() {
    for (a, w0) in [(1.0, 10.0), (20.0, 100.0), (0.5, 0.0)] {
        let psd = NoisePsd::new(a, w0).unwrap();
        let r3 = psd.psd_eval(1e-3) / 1e-12;
        let r4 = psd.psd_eval(1e-4) / 1e-16;
        assert!(r3 > 0.0 && ((r3 - r4) / r4).abs() < 1e-3);
    }
}

#[test]
fn closed_form_matches_quadrature_at_random_points() {
    let psd = NoisePsd::new(20.0, 100.0).unwrap();
    let mut r = rng(7);
    for _ in 0..20 {
        let z = C64::new(r.gen_range(0.05..200.0), r.gen_range(-300.0..300.0));
        let closed = psd.gz_closed(z).unwrap();
        let quad = psd.gz_quadrature(z).unwrap();
        assert!(
            (closed - quad).norm() <= 1e-6 * closed.norm().max(1e-300),
            "z = {z}"
        );
    }
}

#[test]
fn pole_set_invariants() {
    for (a, w0) in [(1.0, 10.0), (2.0, 5.0), (20.0, 100.0)] {
        let set = NoisePsd::new(a, w0).unwrap().poles_residues();
        assert_eq!(set.len(), 8);
        assert!(set.poles().iter().all(|m| m.re < 0.0));
        assert!((set.residue_sum() - 1.0 / TAU).norm() <= 1e-12);
    }
}

#[test]
fn zero_center_merges_poles() {
    let set = NoisePsd::new(1.0, 0.0).unwrap().poles_residues();
    assert_eq!(set.len(), 4);
    assert!((set.residue_sum() - 1.0 / TAU).norm() <= 1e-12);
}

#[test]
fn peak_near_center_frequency() {
    let (a, w0) = (1.0, 10.0);
    let psd = NoisePsd::new(a, w0).unwrap();
    let scan: Vec<(f64, f64)> = (0..=400)
        .map(|k| {
            let w = k as f64 * 0.05;
            (w, psd.gz_closed(C64::new(0.1, w)).unwrap().norm())
        })
        .collect();
    let (w_max, g_max) = scan
        .iter()
        .copied()
        .fold((0.0, 0.0), |b, x| if x.1 > b.1 { x } else { b });
    assert!((w_max - w0).abs() <= a);
    assert!(psd.gz_closed(C64::new(0.1, w0)).unwrap().norm() >= 0.8 * g_max);
}

#[test]
fn invalid_models_are_rejected() {
    assert!(matches!(
        NoisePsd::new(0.0, 1.0),
        Err(SpectralError::InvalidModel(_))
    ));
    assert!(matches!(
        NoisePsd::new(1.0, f64::NAN),
        Err(SpectralError::InvalidModel(_))
    ));
}

proptest! {
    #[test]
    fn closed_form_is_rational(a in 0.2f64..30.0, w0 in 0.0f64..150.0, re in -50.0f64..50.0, im in -200.0f64..200.0) {
        let psd = NoisePsd::new(a, w0).unwrap();
        let set = psd.poles_residues();
        let z = C64::new(re, im);
        prop_assume!(set.pole_distance(z) > 1e-3 * a);
        let terms: f64 = set.iter().map(|(m, r)| (r / (z - m)).norm()).sum();
        let g = psd.gz_closed(z).unwrap();
        prop_assert!((g - set.eval(z).unwrap()).norm() <= 1e-12 * terms);
        prop_assert!((psd.gz_closed(z.conj()).unwrap() - g.conj()).norm() <= 1e-12 * terms);
    }

    #[test]
    fn spectrum_is_even_and_nonnegative(a in 0.2f64..30.0, w0 in 0.0f64..150.0, w in -400.0f64..400.0) {
        let psd = NoisePsd::new(a, w0).unwrap();
        prop_assert!(psd.psd_eval(w) >= 0.0);
        prop_assert_eq!(psd.psd_eval(w), psd.psd_eval(-w));
    }

    #[test]
    fn autocorrelation_is_real(a in 0.2f64..30.0, w0 in 0.0f64..150.0, tau in 0.0f64..5.0) {
        let set = NoisePsd::new(a, w0).unwrap().poles_residues();
        prop_assert!(set.acf_eval(tau).im.abs() <= 1e-12);
    }
}
