use std::collections::BTreeMap;

use hadshock::classifier::{
    classify, criterion, min_criterion, reference_delta, transition_alpha, ReferenceExample,
    StabilityKind,
};
use hadshock::linalg::Mat;
use hadshock::lopatinskii::{
    delta_one, delta_v1, delta_v2, evaluate_grid, freq_map, imag_scan, stable_beta, FreqPoint,
    GridSpec, GridVar,
};
use hadshock::materials::{catalog, check_hypotheses, piola_kirchhoff, MaterialModel};
use hadshock::shock::{alpha_max, build, genuine_nonlinearity, lax_check, rho, ShockError};
use hadshock::C64;

fn cg() -> MaterialModel {
    catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn cg_shock_at_minus_point_three() {
    let sf = build(&cg(), &Mat::identity(2), &[0.0, 0.0], -0.3).unwrap();
    assert!(close(sf.j_minus(), 1.3, 1e-15));
    assert!(close(sf.s() * sf.s(), 2.769231, 1e-6));
    assert!(close(sf.s(), -1.664101, 1e-6));
    assert!(close(rho(&sf), 0.3, 1e-12));
    let lax = lax_check(&sf);
    assert!(lax.ok);
    assert!(close(lax.m1, 0.05422, 1e-5));
    assert!(close(lax.m2, 0.06795, 1e-5));
    assert!(close(lax.m3, 0.664101, 1e-6));
    let (kin, mom) = sf.rh_residual();
    assert!(kin.max(mom) < 1e-14);
}

#[test]
fn cg_stress_and_bounds() {
    let m = cg();
    let u = Mat::diag(&[2.0, 1.0]);
    let s = piola_kirchhoff(&m, &u).unwrap();
    let h1 = m.h1(2.0);
    assert!(close(h1, 0.5, 1e-15));
    assert!(close(s[(0, 0)], 2.0 + h1, 1e-15));
    assert!(close(s[(1, 1)], 1.0 + 2.0 * h1, 1e-15));
    assert_eq!(s[(0, 1)], 0.0);
    assert!(close(alpha_max(&u).unwrap(), 2.0, 1e-15));
    assert!(close(genuine_nonlinearity(&m, &Mat::identity(2)).unwrap(), 1.0 / 3.0, 1e-14));
}

#[test]
fn shock_errors() {
    let m = cg();
    assert!(matches!(
        build(&m, &Mat::identity(2), &[0.0, 0.0], 1.5),
        Err(ShockError::AlphaOutOfRange { .. })
    ));
    assert!(matches!(
        build(&m, &Mat::identity(2), &[0.0, 0.0], 0.5),
        Err(ShockError::WrongSignForMaterial { .. })
    ));
}

#[test]
fn cg_classification_values() {
    let m = cg();
    let sf = build(&m, &Mat::identity(2), &[0.0, 0.0], -0.3).unwrap();
    let v = classify(&sf, None).unwrap();
    assert_eq!(v.kind, StabilityKind::Uniform);
    assert!(close(v.min_criterion.unwrap(), 2.675, 1e-3));

    let sf = build(&m, &Mat::identity(2), &[0.0, 0.0], -8.0).unwrap();
    assert!(close(rho(&sf), 8.0, 1e-12));
    let v = classify(&sf, None).unwrap();
    assert_eq!(v.kind, StabilityKind::Weak);
    assert!(close(v.min_criterion.unwrap(), -8.368, 1e-3));
    let w = v.witness.unwrap();
    assert!(w.residual <= 1e-8);
    assert!(delta_v2(&sf, C64::new(0.0, w.t), &w.xi_t).unwrap().norm() <= 1e-8);
}

#[test]
fn criterion_scales_quadratically() {
    let sf = build(&cg(), &Mat::identity(2), &[0.0, 0.0], -1.0).unwrap();
    for x in [0.3, -1.0, 2.0] {
        let g1 = criterion(&sf, &[x]).unwrap();
        let g2 = criterion(&sf, &[2.0 * x]).unwrap();
        assert!(close(g2, 4.0 * g1, 1e-12 * g2.abs().max(1.0)));
    }
}

#[test]
fn foam_is_rho_negative() {
    let mut p = BTreeMap::new();
    p.insert("c1".into(), 2.0);
    let m = catalog("ogden-foam", 2, 1.0, None, &p).unwrap();
    assert!(check_hypotheses(&m).h3_negative);
    let sf = build(&m, &Mat::identity(2), &[0.0, 0.0], -1.0).unwrap();
    assert!(close(rho(&sf), -3.0625, 1e-12));
    let v = classify(&sf, None).unwrap();
    assert_eq!(v.kind, StabilityKind::Uniform);
    assert!(v.min_criterion.is_none());
    let d1 = delta_one(&sf, C64::new(1.0, 0.0), &[1.0]).unwrap();
    assert!(d1.is_finite() && d1.norm() > 0.0);
    // no switch inside the ρ < 0 region
    assert_eq!(
        transition_alpha(&m, &Mat::identity(2), &[0.0, 0.0], (-1.5, -0.1), None).unwrap(),
        None
    );
}

#[test]
fn cg_reference_matches_module() {
    let sf = build(&cg(), &Mat::identity(2), &[0.0, 0.0], -0.3).unwrap();
    let ex = ReferenceExample::Cg2d { mu: 1.0, kappa: 2.0, alpha: -0.3 };
    let mut worst = 0.0f64;
    for a in 0..50 {
        for b in 0..50 {
            let g = C64::new(2.0 * a as f64 / 49.0, -2.0 + 4.0 * b as f64 / 49.0);
            let want = reference_delta(ex, g, &[1.0]).unwrap();
            let got = delta_v2(&sf, g, &[1.0]).unwrap();
            worst = worst.max((got - want).norm() / (1.0 + want.norm()));
        }
    }
    assert!(worst <= 1e-11, "{worst:e}");
}

#[test]
fn printed_cg_sign_does_not_match() {
    // With s = +√(s²) the inner sign flips; that variant disagrees with the module.
    let (mu, kappa, alpha): (f64, f64, f64) = (1.0, 2.0, -0.3);
    let sf = build(&cg(), &Mat::identity(2), &[0.0, 0.0], alpha).unwrap();
    let s2 = kappa + mu / (1.0 - alpha);
    let g = C64::new(0.7, 0.4);
    let z = (g * g + (mu + kappa)).sqrt();
    let w = g - z * ((mu + kappa) / s2).sqrt();
    let printed = w * w - alpha * (kappa * kappa - mu * mu) / s2;
    let module = delta_v2(&sf, g, &[1.0]).unwrap();
    assert!((printed - module).norm() > 1e-2);
}

#[test]
fn cg_weak_grid_minimum_on_axis() {
    let sf = build(&cg(), &Mat::identity(2), &[0.0, 0.0], -8.0).unwrap();
    let sc = imag_scan(&sf, &[1.0]).unwrap();
    assert_eq!(sc.roots.len(), 2);
    let spec = GridSpec {
        variable: GridVar::Gamma,
        re_range: (0.0, 2.0),
        im_range: (0.0, 4.0),
        n_re: 21,
        n_im: 40_001,
        xi_t: vec![1.0],
        restrict_gamma_tilde: false,
    };
    let grid = evaluate_grid(&sf, &spec).unwrap();
    let best = grid
        .iter()
        .filter_map(|g| g.value.map(|z| (z.norm(), g.re, g.im)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    assert_eq!(best.1, 0.0);
    assert!(best.0 <= 1e-3, "{best:?}");
    assert!(sc.roots.iter().any(|t| (t - best.2).abs() < 1e-4));
}

#[test]
fn cg_uniform_grid_bounded_away() {
    let sf = build(&cg(), &Mat::identity(2), &[0.0, 0.0], -0.3).unwrap();
    let spec = GridSpec {
        variable: GridVar::Gamma,
        re_range: (0.0, 2.0),
        im_range: (-2.0, 2.0),
        n_re: 200,
        n_im: 200,
        xi_t: vec![1.0],
        restrict_gamma_tilde: false,
    };
    let min = evaluate_grid(&sf, &spec)
        .unwrap()
        .iter()
        .filter_map(|g| g.value.map(|z| z.norm()))
        .fold(f64::INFINITY, f64::min);
    assert!(min > 0.01, "{min}");
}

#[test]
fn normal_incidence_values() {
    let sf = build(&cg(), &Mat::identity(2), &[0.0, 0.0], -0.3).unwrap();
    let fp = FreqPoint::new(C64::new(1.0, 0.0), vec![0.0]);
    assert!(close(stable_beta(&sf, &fp).unwrap().re, -14.717, 1e-3));
    assert!(close(delta_v1(&sf, &fp).unwrap().re, 49.980, 1e-3));
    let g = freq_map(&sf, &fp).unwrap();
    let want = (3.0 / (3.0 - sf.s() * sf.s())).sqrt();
    assert!(close(g.re, want, 1e-13) && g.im.abs() < 1e-15);
}

#[test]
fn blatz_rho_vanishes() {
    for d in 2..=4 {
        let m = catalog("blatz", d, 1.3, Some(2.0), &BTreeMap::new()).unwrap();
        let u = Mat::from_fn(d, d, |i, j| if i == j { 1.1 } else { 0.05 * (i + 2 * j) as f64 });
        let sf = build(&m, &u, &vec![0.0; d], -2.0).unwrap();
        assert!(rho(&sf).abs() < 1e-12);
        let (g, _) = min_criterion(&sf, 256).unwrap();
        assert!(g > 0.0);
    }
}
