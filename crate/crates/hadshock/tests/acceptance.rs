//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::time::Instant;

use hadshock::classifier::{
    cg_alpha_star, classify, reference_delta, transition_alpha, ReferenceExample, StabilityKind,
};
use hadshock::linalg::Mat;
use hadshock::lopatinskii::{
    delta_v1, delta_v2, evaluate_grid, imag_scan, winding, winding_number, DContour, FreqPoint,
    GridSpec, GridVar,
};
use hadshock::materials::{catalog, MaterialModel};
use hadshock::oracle::{random_u_plus, scenario_rng};
use hadshock::oracle::{run_suite, VerifyConfig, VerifyReport};
use hadshock::shock::{build, rho, ShockFront};
use hadshock::C64;
use rand::Rng;

const SEED: u64 = 7;
const SCENARIOS_PER_DIM: usize = 170;

fn cg(mu: f64, kappa: f64) -> MaterialModel {
    catalog("ciarlet-geymonat", 2, mu, Some(kappa), &BTreeMap::new()).unwrap()
}

fn cg_shock(alpha: f64) -> ShockFront {
    build(&cg(1.0, 2.0), &Mat::identity(2), &[0.0, 0.0], alpha).unwrap()
}

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Check {
    let t0 = Instant::now();
    let star = cg_alpha_star(1.0, 2.0).map_err(|e| e.to_string())?;
    let closed = -(1.0 + 13f64.sqrt()) / 2.0;
    let bis = transition_alpha(&cg(1.0, 2.0), &Mat::identity(2), &[0.0, 0.0], (-5.0, -0.1), None)
        .map_err(|e| e.to_string())?
        .ok_or("no transition found")?;
    let dt = t0.elapsed().as_secs_f64();
    ensure(
        (star - closed).abs() < 1e-14
            && (star + 2.3028).abs() <= 1e-3
            && (bis - star).abs() <= 1e-6
            && dt < 1.0,
        format!("alpha* = {star:.9}, bisection = {bis:.9}, {dt:.3} s"),
    )
}

fn criterion_2() -> Check {
    let t0 = Instant::now();
    let star = cg_alpha_star(1.0, 2.0).unwrap();
    let steps = 200;
    let mut bad = Vec::new();
    for k in 0..steps {
        let a = -5.0 + 4.9 * k as f64 / (steps - 1) as f64;
        let v = classify(&cg_shock(a), None).map_err(|e| e.to_string())?;
        let want = if a > star { StabilityKind::Uniform } else { StabilityKind::Weak };
        if v.kind != want {
            bad.push(a);
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(bad.is_empty() && dt < 5.0, format!("{steps} steps, mismatches {bad:?}, {dt:.3} s"))
}

fn criterion_3() -> Check {
    let t0 = Instant::now();
    let mut worst_rho = 0.0f64;
    let mut non_uniform = 0;
    for k in 0..100 {
        let mut rng = scenario_rng(SEED ^ 0xb1a7, 3, k);
        let mu = rng.gen_range(0.5..2.0);
        let kappa = 2.0 * mu / 3.0 * rng.gen_range(1.2..4.0);
        let m = catalog("blatz", 3, mu, Some(kappa), &BTreeMap::new()).unwrap();
        let u = random_u_plus(&mut rng, 3);
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let alpha = rng.gen_range(-3.0..-0.05);
        let sf = build(&m, &u, &v, alpha).map_err(|e| format!("case {k}: {e}"))?;
        let s2 = sf.s() * sf.s();
        worst_rho = worst_rho.max(rho(&sf).abs() / s2.max(1.0));
        if classify(&sf, None).map_err(|e| e.to_string())?.kind != StabilityKind::Uniform {
            non_uniform += 1;
        }
    }
    let m = catalog("blatz", 3, 1.0, Some(1.0), &BTreeMap::new()).unwrap();
    let sf = build(&m, &Mat::identity(3), &[0.0; 3], -5.0).unwrap();
    let spec = GridSpec {
        variable: GridVar::Gamma,
        re_range: (0.0, 1.0),
        im_range: (-1.0, 1.0),
        n_re: 100,
        n_im: 100,
        xi_t: vec![1.0, 0.0],
        restrict_gamma_tilde: true,
    };
    let grid = evaluate_grid(&sf, &spec).map_err(|e| e.to_string())?;
    let ex = ReferenceExample::Blatz3d { mu: 1.0, kappa: 1.0, alpha: -5.0 };
    let (mut worst, mut nodes) = (0.0f64, 0);
    for g in &grid {
        if let Some(z) = g.value {
            let want = reference_delta(ex, C64::new(g.re, g.im), &[]).map_err(|e| e.to_string())?;
            worst = worst.max((z - want).norm());
            nodes += 1;
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(
        worst_rho <= 1e-12 && non_uniform == 0 && nodes == 10_000 && worst <= 1e-10 && dt < 30.0,
        format!(
            "max |rho|/max(1,s^2) = {worst_rho:.2e}, non-uniform {non_uniform}, \
             grid {nodes} nodes max diff {worst:.2e}, {dt:.3} s"
        ),
    )
}

fn criterion_4() -> Check {
    let sf = cg_shock(-8.0);
    let sc = imag_scan(&sf, &[1.0]).map_err(|e| e.to_string())?;
    let want = 3.0 * (1.0 - 72.0 / 19.0);
    let t = sc.roots.iter().copied().find(|t| *t > 0.0).ok_or("no root")?;
    let res = delta_v2(&sf, C64::new(0.0, t), &[1.0]).map_err(|e| e.to_string())?.norm();
    ensure(
        res <= 1e-8 && (sc.boundary_value - want).abs() <= 1e-9,
        format!("t* = {t:.10}, |delta| = {res:.2e}, boundary = {:.12}", sc.boundary_value),
    )
}

fn stat_line(reps: &[VerifyReport], names: &[&str], min_samples: &[usize]) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, &need) in names.iter().zip(min_samples) {
        let mut n = 0;
        let mut worst = f64::NAN;
        let mut pass = true;
        for r in reps {
            if let Some(st) = r.identities.get(*name) {
                n += st.samples;
                pass &= st.passed;
                worst = if worst.is_nan() { st.worst } else {
                    match st.bound {
                        hadshock::oracle::Bound::Upper => worst.max(st.worst),
                        hadshock::oracle::Bound::Lower => worst.min(st.worst),
                    }
                };
            }
        }
        ok &= pass && n >= need;
        parts.push(format!("{name} {worst:.1e} (n={n})"));
    }
    ensure(ok, parts.join(", "))
}

fn per_dim(reps: &[VerifyReport], names: &[&str], need: usize) -> Check {
    let mut out = Vec::new();
    let mut ok = true;
    for r in reps {
        let line = stat_line(std::slice::from_ref(r), names, &vec![need; names.len()]);
        ok &= line.is_ok();
        out.push(format!("d={}: {}", r.dims[0], line.unwrap_or_else(|e| e)));
    }
    ensure(ok, out.join("; "))
}

fn criterion_8() -> Check {
    let mut worst = 0.0f64;
    let mut n = 0;
    for k in 0..50 {
        let d = 2 + k % 3;
        let sc = hadshock::oracle::random_scenario(SEED ^ 0x1d, d, k);
        let sf = &sc.shock;
        let sk = sf.kappa2_plus().sqrt();
        let s = sf.s();
        for q in 0..16 {
            let phi = -1.5 + 3.0 * q as f64 / 15.0;
            let lam = C64::from_polar(1.0, phi);
            let got = delta_v1(sf, &FreqPoint::new(lam, vec![0.0; d - 1])).map_err(|e| e.to_string())?;
            let want = lam * lam * (sf.theta11() * (sk - s) / (sk + s));
            worst = worst.max((got - want).norm() / (1.0 + want.norm()));
            n += 1;
        }
    }
    ensure(worst <= 1e-11, format!("{n} samples on 50 shocks, worst {worst:.2e}"))
}

fn criterion_9() -> Check {
    let mut p = BTreeMap::new();
    p.insert("c1".to_string(), 2.0);
    let m = catalog("ogden-foam", 2, 1.0, None, &p).unwrap();
    let sf = build(&m, &Mat::identity(2), &[0.0, 0.0], -1.0).map_err(|e| e.to_string())?;
    let r = rho(&sf);
    let mut ws = Vec::new();
    for radius in [5.0, 20.0, 100.0] {
        ws.push(winding(&sf, &[1.0], radius).map_err(|e| e.to_string())?);
    }
    let c = DContour::new(2.0);
    let w_in = winding_number(|w| w - 0.5, &c).map_err(|e| e.to_string())?;
    let w_out = winding_number(|w| w + 0.5, &c).map_err(|e| e.to_string())?;
    ensure(
        (r + 3.0625).abs() <= 1e-12 && ws.iter().all(|w| *w == 0) && w_in == 1 && w_out == 0,
        format!("rho = {r}, winding R=5/20/100: {ws:?}, synthetic {w_in}/{w_out}"),
    )
}

fn main() {
    let reps: Vec<VerifyReport> = [2usize, 3, 4]
        .iter()
        .map(|&d| {
            run_suite(&VerifyConfig { seed: SEED, scenarios: SCENARIOS_PER_DIM, dims: vec![d] })
                .expect("verify suite runs")
        })
        .collect();
    let scenario_failures: Vec<&String> = reps.iter().flat_map(|r| &r.failures).collect();
    let total = 3 * SCENARIOS_PER_DIM;

    let results: Vec<(usize, &str, Check)> = vec![
        (1, "CG threshold", criterion_1()),
        (2, "CG sweep", criterion_2()),
        (3, "Blatz identity", criterion_3()),
        (4, "weak witness", criterion_4()),
        (
            5,
            "version equivalence",
            stat_line(
                &reps,
                &["v1_vs_v2", "v3_factorization", "delta_one_reconstruction"],
                &[500, 1, 1],
            ),
        ),
        (
            6,
            "full assembly",
            stat_line(
                &reps,
                &["left_eigenvector_residual", "hersh_count", "jump_vector_projection"],
                &[150, 150, 150],
            ),
        ),
        (
            7,
            "tensor identities",
            per_dim(
                &reps,
                &[
                    "b_tensor_vs_fd_hessian",
                    "acoustic_spectrum_vs_eig",
                    "m_matrix_gram",
                    "cofactor_derivative",
                ],
                50,
            ),
        ),
        (8, "one-dimensional stability", criterion_8()),
        (9, "rho < 0 regime", criterion_9()),
        (
            10,
            "no interior zeros",
            stat_line(
                &reps,
                &["winding_v2_shifted", "winding_delta_one", "grid_min_abs_delta"],
                &[total / 2, 1, total / 2],
            )
            .and_then(|s| {
                ensure(
                    scenario_failures.is_empty(),
                    format!("{s}, scenario errors {}", scenario_failures.len()),
                )
            }),
        ),
    ];

    let mut failed = 0;
    for (k, name, res) in &results {
        match res {
            Ok(msg) => println!("criterion {k:2} PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k:2} FAIL  {name}: {msg}");
            }
        }
    }
    for f in &scenario_failures {
        println!("  scenario error: {f}");
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
