use std::collections::BTreeMap;

use hadshock::linalg::Mat;
use hadshock::materials::{
    acoustic_spectrum, acoustic_tensor, catalog, cauchy_stress, char_speeds, check_hypotheses,
    piola_kirchhoff, CustomForm, CustomTerm, DerivativeSource, MaterialConfig, MaterialModel,
    CATALOG_NAMES,
};

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn catalog_hypotheses() {
    let cg = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
    let r = check_hypotheses(&cg);
    assert!(r.all_hold() && r.fd_consistent, "{r:?}");

    let sm = catalog("simo-miehe", 3, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
    assert!(!check_hypotheses(&sm).free_stress);

    let bag = catalog("bischoff-arruda-grosh", 3, 1.0, None, &params(&[("cbar", 2.0), ("b", 1.0)])).unwrap();
    assert!(!check_hypotheses(&bag).h3_negative);

    let oh = catalog("ogden-hill", 2, 1.0, None, &params(&[("b", 0.5)])).unwrap();
    let r = check_hypotheses(&oh);
    assert!(!r.h3_negative && !r.free_stress);
    for j in [0.5, 1.0, 3.0] {
        assert!(oh.h3(j).abs() < 1e-14);
    }
}

#[test]
fn every_catalog_model_is_fd_consistent() {
    let cases: Vec<(&str, Option<f64>, BTreeMap<String, f64>)> = vec![
        ("ciarlet-geymonat", Some(2.0), BTreeMap::new()),
        ("blatz", Some(2.0), BTreeMap::new()),
        ("ogden-foam", None, params(&[("c1", 2.0)])),
        ("levinson-burgess", None, params(&[("cbar", 2.0)])),
        ("simo-taylor", Some(2.0), BTreeMap::new()),
        ("ogden-hill", None, params(&[("b", 0.5)])),
        ("simo-miehe", Some(2.0), BTreeMap::new()),
        ("bischoff-arruda-grosh", None, params(&[("cbar", 2.0), ("b", 1.0)])),
    ];
    assert_eq!(cases.len() + 1, CATALOG_NAMES.len());
    for (name, k, p) in cases {
        let m = catalog(name, 3, 1.0, k, &p).unwrap();
        let r = check_hypotheses(&m);
        assert!(r.fd_consistent, "{name}: {:e}", r.fd_max_rel_error);
        assert_eq!(r.derivative_source, DerivativeSource::Analytic);
    }
}

#[test]
fn blatz_second_derivative() {
    let m = catalog("blatz", 3, 1.5, Some(2.0), &BTreeMap::new()).unwrap();
    for j in [0.4f64, 1.0, 2.2] {
        assert!((m.h2(j) - (2.0 + 0.5) / (j * j)).abs() < 1e-13);
    }
}

#[test]
fn reference_state_is_stress_free() {
    let m = catalog("ciarlet-geymonat", 3, 1.2, Some(3.0), &BTreeMap::new()).unwrap();
    let s = piola_kirchhoff(&m, &Mat::identity(3)).unwrap();
    assert!(s.max_abs() < 1e-15);
    let t = cauchy_stress(&m, &Mat::identity(3)).unwrap();
    assert!(t.max_abs() < 1e-15);
}

#[test]
fn acoustic_values_at_identity() {
    let m = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
    let sp = acoustic_spectrum(&m, &Mat::identity(2), &[1.0, 0.0]).unwrap();
    assert!((sp.kappa1 - 1.0).abs() < 1e-15 && (sp.kappa2 - 3.0).abs() < 1e-15);
    assert_eq!(sp.mult1, 1);
    let q = acoustic_tensor(&m, &Mat::identity(2), &[0.0, 0.0]).unwrap();
    assert_eq!(q.max_abs(), 0.0);
    let speeds: Vec<f64> = char_speeds(&m, &Mat::identity(2)).unwrap().iter().map(|c| c.speed).collect();
    let r3 = 3f64.sqrt();
    for (a, b) in speeds.iter().zip([-r3, -1.0, 0.0, 1.0, r3]) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn custom_model_with_synthesized_derivatives() {
    // CG in d = 2 rebuilt from terms: −1 − log J + ½J² − J + ½
    let terms = vec![
        CustomTerm::Constant { coeff: -0.5 },
        CustomTerm::Log { coeff: -1.0 },
        CustomTerm::Power { coeff: 0.5, exponent: 2.0 },
        CustomTerm::Power { coeff: -1.0, exponent: 1.0 },
    ];
    let analytic = MaterialModel::custom(2, 1.0, Some(2.0), CustomForm { terms: terms.clone(), synthesize_derivatives: false }).unwrap();
    let synth = MaterialModel::custom(2, 1.0, Some(2.0), CustomForm { terms, synthesize_derivatives: true }).unwrap();
    let cg = catalog("ciarlet-geymonat", 2, 1.0, Some(2.0), &BTreeMap::new()).unwrap();
    for j in [0.5f64, 1.0, 1.7] {
        assert!((analytic.h2(j) - cg.h2(j)).abs() < 1e-13);
        assert!((synth.h2(j) - cg.h2(j)).abs() < 1e-6);
        assert!((synth.h3(j) - cg.h3(j)).abs() < 1e-4 * cg.h3(j).abs());
    }
    assert_eq!(synth.derivative_source(), DerivativeSource::Synthesized);
    assert!(check_hypotheses(&analytic).all_hold());
}

#[test]
fn config_json_roundtrip() {
    let json = r#"{"name":"ogden-foam","dimension":2,"mu":1.0,"params":{"c1":2.0}}"#;
    let cfg: MaterialConfig = serde_json::from_str(json).unwrap();
    let m = MaterialModel::from_config(&cfg).unwrap();
    let back = MaterialModel::from_config(&m.to_config()).unwrap();
    assert_eq!(m, back);
    assert!(catalog("nope", 2, 1.0, None, &BTreeMap::new()).is_err());
    assert!(catalog("ciarlet-geymonat", 2, -1.0, Some(2.0), &BTreeMap::new()).is_err());
    assert!(catalog("ciarlet-geymonat", 3, 1.0, Some(0.5), &BTreeMap::new()).is_err());
}
