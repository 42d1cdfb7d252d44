//! Independent cross-checks of the closed-form machinery.
//!
//! Everything here takes the long way round: full `(d² + d)`-dimensional
//! flux Jacobians, a dense eigensolver, finite differences of the stored
//! energy, raw jump vectors built from both states. [`run_suite`] draws
//! seeded random shocks and records the worst error of every identity.

mod assemble;
mod eig;
mod scenario;

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use assemble::{assemble_aj, assemble_cal_a, flux, jump_vector, left_eigenvector, state_vector};
pub use eig::{cluster, dense_eig, EigResult, MAX_DIM};
pub use scenario::{
    random_freq, random_material, random_scenario, random_u_plus, scenario_rng, Scenario,
    SCENARIO_MODELS,
};

use crate::linalg::{cdot, cofactor, cross, dot, Mat, C64};
use crate::lopatinskii::{
    delta_hat, delta_one, delta_v1, delta_v1_completed, delta_v2, delta_v3, evaluate_grid,
    freq_map, freq_unmap, stable_beta, v2_prefactor, winding, winding_number, winding_v2,
    DContour, FreqPoint, GridSpec, GridVar, LopatinskiiError,
};
use crate::materials::{
    acoustic_spectrum, acoustic_tensor, b_tensor, cauchy_stress, char_speeds, energy,
    piola_kirchhoff, MaterialError, MaterialModel,
};
use crate::shock::{
    freq_coeffs, genuine_nonlinearity, geometry, lax_check, rho, tau, ShockError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Shock(#[from] ShockError),
    #[error(transparent)]
    Lopatinskii(#[from] LopatinskiiError),
    #[error("shock speed {0} coincides with a characteristic speed")]
    CharacteristicSpeed(f64),
    #[error("QR iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("shape error: {0}")]
    Shape(String),
}

/// How an identity's recorded value is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Worst value must not exceed the tolerance.
    Upper,
    /// Worst (smallest) value must be at least the tolerance.
    Lower,
}

/// Tolerances of the suite, `(name, tolerance, bound)`.
pub const IDENTITIES: &[(&str, f64, Bound)] = &[
    ("cofactor_identity", 1e-12, Bound::Upper),
    ("jacobian_derivative", 1e-7, Bound::Upper),
    ("cofactor_derivative", 1e-6, Bound::Upper),
    ("piola_vs_energy_gradient", 1e-6, Bound::Upper),
    ("b_tensor_vs_fd_hessian", 1e-5, Bound::Upper),
    ("b_tensor_symmetry", 1e-14, Bound::Upper),
    ("cauchy_identity", 1e-12, Bound::Upper),
    ("acoustic_double_sum", 1e-12, Bound::Upper),
    ("acoustic_spectrum_vs_eig", 1e-9, Bound::Upper),
    ("char_speeds_vs_eig", 1e-8, Bound::Upper),
    ("genuine_nonlinearity_vs_fd", 1e-6, Bound::Upper),
    ("m_matrix_cofactor_jump", 1e-11, Bound::Upper),
    ("m_matrix_gram", 1e-10, Bound::Upper),
    ("m_matrix_cross_product", 1e-12, Bound::Upper),
    ("rankine_hugoniot", 1e-12, Bound::Upper),
    ("stress_jump_formula", 1e-11, Bound::Upper),
    ("lax_margins_positive", 0.0, Bound::Upper),
    ("rho_from_raw_stresses", 1e-10, Bound::Upper),
    ("p_nonnegative", 0.0, Bound::Upper),
    ("stable_beta_residual", 1e-11, Bound::Upper),
    ("stable_beta_left_half_plane", 0.0, Bound::Upper),
    ("hersh_count", 0.0, Bound::Upper),
    ("hersh_root_matches_beta", 1e-8, Bound::Upper),
    ("multiplicity_minus_lambda_over_s", 0.0, Bound::Upper),
    ("left_eigenvector_residual", 1e-10, Bound::Upper),
    ("jump_vector_projection", 1e-10, Bound::Upper),
    ("v1_expanded_vs_completed", 1e-10, Bound::Upper),
    ("v1_vs_v2", 1e-10, Bound::Upper),
    ("v3_factorization", 1e-10, Bound::Upper),
    ("delta_one_reconstruction", 1e-10, Bound::Upper),
    ("freq_map_roundtrip", 1e-13, Bound::Upper),
    ("homogeneity", 1e-10, Bound::Upper),
    ("one_dimensional_stability", 1e-11, Bound::Upper),
    ("grid_min_abs_delta", 1e-6, Bound::Lower),
    ("winding_v2_shifted", 0.0, Bound::Upper),
    ("winding_delta_one", 0.0, Bound::Upper),
    ("negative_control_winding", 0.0, Bound::Upper),
];

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1.0)
}

fn mat_err(a: &Mat, b: &Mat) -> f64 {
    (a - b).max_abs()
}

/// Central-difference gradient of the energy; `out[(p, j)] ≈ ∂W/∂U_pj`.
fn fd_energy_gradient(m: &MaterialModel, u: &Mat) -> Result<Mat, OracleError> {
    let d = m.dim();
    let mut g = Mat::zeros(d, d);
    for p in 0..d {
        for j in 0..d {
            let h = 1e-6 * u[(p, j)].abs().max(1.0);
            let mut up = u.clone();
            up[(p, j)] += h;
            let mut dn = u.clone();
            dn[(p, j)] -= h;
            g[(p, j)] = (energy(m, &up)? - energy(m, &dn)?) / (2.0 * h);
        }
    }
    Ok(g)
}

/// Worst deviation of `B_i^j` from a second-difference Hessian of `W`.
fn hessian_check(m: &MaterialModel, u: &Mat) -> Result<f64, OracleError> {
    let d = m.dim();
    let h = 1e-4;
    let w = |x: &Mat| energy(m, x);
    let mut worst = 0.0f64;
    let mut bmax = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let b = b_tensor(m, u, i, j)?;
            bmax = bmax.max(b.max_abs());
            for p in 0..d {
                for q in 0..d {
                    // ∂²W/∂U_pj ∂U_qi
                    let shift = |sp: f64, sq: f64| {
                        let mut x = u.clone();
                        x[(p, j)] += sp * h;
                        x[(q, i)] += sq * h;
                        w(&x)
                    };
                    let fd = (shift(1.0, 1.0)? - shift(1.0, -1.0)? - shift(-1.0, 1.0)?
                        + shift(-1.0, -1.0)?)
                        / (4.0 * h * h);
                    worst = worst.max((fd - b[(p, q)]).abs());
                }
            }
        }
    }
    Ok(rel(worst, bmax))
}

fn cofactor_derivative_check(u: &Mat) -> f64 {
    let d = u.rows();
    let j = u.det();
    let v = cofactor(u);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for q in 0..d {
        for i in 0..d {
            let mut up = u.clone();
            up[(q, i)] += h;
            let mut dn = u.clone();
            dn[(q, i)] -= h;
            let dc = &cofactor(&up) - &cofactor(&dn);
            for p in 0..d {
                for jj in 0..d {
                    let fd = dc[(p, jj)] / (2.0 * h);
                    let exact = (v[(q, i)] * v[(p, jj)] - v[(p, i)] * v[(q, jj)]) / j;
                    worst = worst.max((fd - exact).abs());
                }
            }
        }
    }
    rel(worst, v.max_abs().powi(2) / j.abs())
}

fn jacobian_derivative_check(u: &Mat) -> f64 {
    let d = u.rows();
    let v = cofactor(u);
    let mut worst = 0.0f64;
    for p in 0..d {
        for q in 0..d {
            let h = 1e-6;
            let mut up = u.clone();
            up[(p, q)] += h;
            let mut dn = u.clone();
            dn[(p, q)] -= h;
            let fd = (up.det() - dn.det()) / (2.0 * h);
            worst = worst.max((fd - v[(p, q)]).abs());
        }
    }
    rel(worst, v.max_abs())
}

/// Slowest normal speed `a₁(U) = −√(μ + h''(J)|V₁|²)`.
fn slow_speed(m: &MaterialModel, u: &Mat) -> f64 {
    let j = u.det();
    let v1 = cofactor(u).col(0);
    -(m.mu() + m.h2(j) * dot(&v1, &v1)).sqrt()
}

fn gnl_check(m: &MaterialModel, u: &Mat) -> Result<f64, OracleError> {
    let exact = genuine_nonlinearity(m, u)?;
    let a1 = slow_speed(m, u);
    let v1 = cofactor(u).col(0);
    // r has U₁-block −V₁/a₁; a₁ does not depend on v
    let h = 1e-5;
    let along = |t: f64| {
        let mut x = u.clone();
        for (p, &w) in v1.iter().enumerate() {
            x[(p, 0)] += t * (-w / a1);
        }
        slow_speed(m, &x)
    };
    let fd = (along(-2.0 * h) - 8.0 * along(-h) + 8.0 * along(h) - along(2.0 * h)) / (12.0 * h);
    Ok(rel((fd - exact).abs(), exact.abs()))
}

/// Sorted real parts plus the largest imaginary part.
fn real_spectrum(a: &Mat) -> Result<(Vec<f64>, f64), OracleError> {
    let e = dense_eig(&a.to_complex(), false)?;
    let mut re: Vec<f64> = e.values.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    let im = e.values.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    Ok((re, im))
}

/// Record of one scenario: `(identity, value)` pairs.
pub type Measurements = Vec<(&'static str, f64)>;

/// Run every per-scenario identity.
pub fn fd_check_suite(sc: &Scenario) -> Result<Measurements, OracleError> {
    let sf = &sc.shock;
    let m = sf.material();
    let d = m.dim();
    let u = sf.u_plus();
    let mut out: Measurements = Vec::new();

    // --- kinematics and constitutive law ---
    let v = cofactor(u);
    let j = u.det();
    out.push((
        "cofactor_identity",
        rel(
            mat_err(&v.transpose().matmul(u), &Mat::identity(d).scale(j)),
            v.max_abs() * u.max_abs(),
        ),
    ));
    out.push(("jacobian_derivative", jacobian_derivative_check(u)));
    out.push(("cofactor_derivative", cofactor_derivative_check(u)));

    let sigma = piola_kirchhoff(m, u)?;
    out.push((
        "piola_vs_energy_gradient",
        rel(mat_err(&fd_energy_gradient(m, u)?, &sigma), sigma.max_abs()),
    ));
    out.push(("b_tensor_vs_fd_hessian", hessian_check(m, u)?));
    let mut sym = 0.0f64;
    for i in 0..d {
        for jj in 0..d {
            let b = b_tensor(m, u, i, jj)?;
            let bt = b_tensor(m, u, jj, i)?;
            sym = sym.max(rel(mat_err(&b, &bt.transpose()), b.max_abs()));
        }
    }
    out.push(("b_tensor_symmetry", sym));

    let t = cauchy_stress(m, u)?;
    let back = t.matmul(&u.inverse().map_err(|e| OracleError::Shape(e.to_string()))?.transpose()).scale(j);
    out.push(("cauchy_identity", rel(mat_err(&back, &sigma), sigma.max_abs())));

    // --- acoustic tensor and characteristic speeds ---
    let xi_full: Vec<f64> = {
        let mut x = vec![0.0; d];
        x[0] = 0.7;
        for (k, &y) in sc.freq.xi_t.iter().enumerate() {
            x[k + 1] = y;
        }
        x
    };
    let q = acoustic_tensor(m, u, &xi_full)?;
    let mut dsum = Mat::zeros(d, d);
    for i in 0..d {
        for jj in 0..d {
            dsum = &dsum + &b_tensor(m, u, i, jj)?.scale(xi_full[i] * xi_full[jj]);
        }
    }
    out.push(("acoustic_double_sum", rel(mat_err(&dsum, &q), q.max_abs())));
    let sp = acoustic_spectrum(m, u, &xi_full)?;
    let mut want: Vec<f64> = vec![sp.kappa1; d - 1];
    want.push(sp.kappa2);
    want.sort_by(f64::total_cmp);
    let (got, im) = real_spectrum(&q)?;
    let err = got.iter().zip(&want).fold(im, |e, (a, b)| e.max((a - b).abs()));
    out.push(("acoustic_spectrum_vs_eig", rel(err, sp.kappa2.abs().max(sp.kappa1))));

    let speeds = char_speeds(m, u)?;
    let mut want: Vec<f64> = speeds
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.speed, c.multiplicity))
        .collect();
    want.sort_by(f64::total_cmp);
    let (got, im) = real_spectrum(&assemble_aj(m, u, 0)?)?;
    let err = got.iter().zip(&want).fold(im, |e, (a, b)| e.max((a - b).abs()));
    out.push(("char_speeds_vs_eig", rel(err, want.last().copied().unwrap_or(1.0))));
    out.push(("genuine_nonlinearity_vs_fd", gnl_check(m, u)?));

    // --- shock geometry and jumps ---
    let geo = geometry(sf);
    let alpha = sf.alpha();
    let vm = cofactor(sf.u_minus());
    let pred = &v - &geo.m.scale(alpha);
    out.push((
        "m_matrix_cofactor_jump",
        rel(mat_err(&vm, &pred), sf.scale() * v.max_abs()),
    ));
    let gram = v.transpose().matmul(&geo.m);
    let want = geo.big_theta.scale(1.0 / sf.j_plus());
    out.push(("m_matrix_gram", rel(mat_err(&gram, &want), want.max_abs())));
    if d == 3 {
        let v1 = sf.v1();
        let c2 = cross(&u.col(2), &v1);
        let c3 = cross(&u.col(1), &v1);
        let mut e = 0.0f64;
        for p in 0..3 {
            e = e.max(geo.m[(p, 0)].abs());
            e = e.max((geo.m[(p, 1)] - c2[p]).abs());
            e = e.max((geo.m[(p, 2)] + c3[p]).abs());
        }
        out.push(("m_matrix_cross_product", rel(e, geo.m.max_abs())));
    }
    let (kin, mom) = sf.rh_residual();
    let sig_m = piola_kirchhoff(m, sf.u_minus())?;
    let sscale = sf.scale() * sigma.max_abs().max(sig_m.max_abs()).max(1.0);
    out.push(("rankine_hugoniot", kin.max(mom) / sscale));
    let s = sf.s();
    let s2 = s * s;
    let mu = m.mu();
    let mut e = 0.0f64;
    for jj in 1..d {
        for p in 0..d {
            let jump = sigma[(p, jj)] - sig_m[(p, jj)];
            let pred = alpha * ((s2 - mu) * v[(p, jj)] + m.h1(sf.j_minus()) * geo.m[(p, jj)]);
            e = e.max((jump - pred).abs());
        }
    }
    out.push(("stress_jump_formula", e / sscale));
    let lax = lax_check(sf);
    out.push((
        "lax_margins_positive",
        (-lax.m1.min(lax.m2).min(lax.m3)).max(0.0),
    ));
    // s² recovered from the raw first-column stress jump
    let v1 = sf.v1();
    let js1: Vec<f64> = (0..d).map(|p| sigma[(p, 0)] - sig_m[(p, 0)]).collect();
    let s2_raw = dot(&js1, &v1) / (alpha * sf.theta11());
    let rho_raw = (s2_raw - mu) * sf.j_minus() / (sf.theta11() * sf.j_plus()) - sf.h2_plus();
    out.push((
        "rho_from_raw_stresses",
        rel((rho_raw - rho(sf)).abs(), sf.h2_plus().abs().max(s2)),
    ));

    // --- frequency analysis ---
    let fp = &sc.freq;
    let fc = freq_coeffs(sf, &fp.xi_t)?;
    out.push(("p_nonnegative", (-(sf.theta11() * fc.n2 - fc.eta * fc.eta)
        / (sf.theta11() * fc.n2).max(1.0)
        - 1e-13)
        .max(0.0)));
    let beta = stable_beta(sf, fp)?;
    let k2 = sf.kappa2_plus();
    let lam = fp.lambda;
    let i = C64::new(0.0, 1.0);
    let quad = beta * beta * (k2 - s2) - 2.0 * (lam * s + i * (sf.h2_plus() * fc.eta)) * beta
        - (lam * lam + fc.omega);
    let qscale = (beta.norm_sqr() * k2).max(lam.norm_sqr() + fc.omega.abs());
    out.push(("stable_beta_residual", rel(quad.norm(), qscale)));
    out.push(("stable_beta_left_half_plane", beta.re.max(0.0)));

    let cal_a = assemble_cal_a(sf, fp)?;
    let eig = dense_eig(&cal_a, false)?;
    let anorm = cal_a.frobenius();
    let zero_tol = 1e-9 * anorm;
    let negatives: Vec<C64> = eig.values.iter().copied().filter(|z| z.re < -zero_tol).collect();
    out.push(("hersh_count", (negatives.len() as f64 - 1.0).abs()));
    let closest = eig
        .values
        .iter()
        .map(|z| (z - beta).norm())
        .fold(f64::INFINITY, f64::min);
    out.push(("hersh_root_matches_beta", rel(closest, beta.norm())));
    let target = -lam / s;
    let mult = eig
        .values
        .iter()
        .filter(|z| (*z - target).norm() <= 1e-7 * anorm)
        .count();
    out.push((
        "multiplicity_minus_lambda_over_s",
        (mult as f64 - (d * d - d) as f64).abs(),
    ));

    let (beta_l, l) = left_eigenvector(sf, fp)?;
    let la = cal_a.vecmat(&l);
    let res: f64 = la
        .iter()
        .zip(&l)
        .map(|(x, y)| (x - beta_l * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let lnorm = crate::linalg::cnorm(&l);
    out.push(("left_eigenvector_residual", res / lnorm));
    let kvec = jump_vector(sf, fp)?;
    let dh = delta_hat(sf, fp)?;
    let proj = cdot(&l, &kvec) / (lam + beta * s);
    out.push(("jump_vector_projection", (proj - dh).norm() / (1.0 + dh.norm())));

    let v1val = delta_v1(sf, fp)?;
    let comp = delta_v1_completed(sf, fp)?;
    out.push(("v1_expanded_vs_completed", (v1val - comp).norm() / (1.0 + v1val.norm())));
    let gamma = freq_map(sf, fp)?;
    let v2 = delta_v2(sf, gamma, &fp.xi_t)? * v2_prefactor(sf);
    out.push(("v1_vs_v2", (v1val - v2).norm() / (1.0 + dh.norm())));
    let r = rho(sf);
    if r < 0.0 {
        let v3 = delta_v3(sf, fp)?;
        out.push(("v3_factorization", (v1val - v3).norm() / (1.0 + v1val.norm())));
        let c = k2 - s2;
        let delta = (-r * fc.p / (sf.theta11() * c)).sqrt();
        let minus_factor = beta - delta - i * (fc.eta / sf.theta11());
        let d1 = delta_one(sf, gamma, &fp.xi_t)?;
        let recon = minus_factor * d1 * (c * sf.theta11() * s / (k2 * c).sqrt());
        out.push(("delta_one_reconstruction", (v1val - recon).norm() / (1.0 + v1val.norm())));
    }
    let back = freq_unmap(sf, gamma, &fp.xi_t)?;
    out.push(("freq_map_roundtrip", (back.lambda - lam).norm() / (1.0 + lam.norm())));
    let c = 2.5;
    let scaled_xi: Vec<f64> = fp.xi_t.iter().map(|x| c * x).collect();
    let big = delta_v2(sf, gamma * c, &scaled_xi)?;
    let small = delta_v2(sf, gamma, &fp.xi_t)? * (c * c);
    out.push(("homogeneity", (big - small).norm() / (1.0 + small.norm())));

    // one-dimensional perturbations on the unit half circle
    let phi = (sc.index as f64 * 0.618_033_988_749_894_9).fract() * 3.1 - 1.55;
    let lam1 = C64::from_polar(1.0, phi);
    let fp1 = FreqPoint::new(lam1, vec![0.0; d - 1]);
    let got = delta_v1(sf, &fp1)?;
    let sk = k2.sqrt();
    let want = lam1 * lam1 * (sf.theta11() * (sk - s) / (sk + s));
    out.push(("one_dimensional_stability", (got - want).norm() / (1.0 + want.norm())));

    // --- no zeros in the open right half plane ---
    let xn = fp.xi_t.iter().map(|x| x * x).sum::<f64>().sqrt();
    if xn > 1e-3 {
        let dir: Vec<f64> = fp.xi_t.iter().map(|x| x / xn).collect();
        let spec = GridSpec {
            variable: GridVar::Gamma,
            re_range: (0.01, 2.0),
            im_range: (-2.0, 2.0),
            n_re: 20,
            n_im: 41,
            xi_t: dir.clone(),
            restrict_gamma_tilde: false,
        };
        let grid = evaluate_grid(sf, &spec)?;
        let min = grid
            .iter()
            .filter_map(|g| g.value.map(|z| z.norm()))
            .fold(f64::INFINITY, f64::min);
        out.push(("grid_min_abs_delta", min));
        let fcd = freq_coeffs(sf, &dir)?;
        let cst = r * k2 * fcd.p / (s2 * sf.theta11());
        let radius = 20.0 * (1.0 + fcd.zeta.sqrt() + (tau(sf) * fcd.eta).abs() + cst.abs().sqrt());
        let w = winding_v2(sf, &dir, &DContour::shifted(radius, 0.01))?;
        out.push(("winding_v2_shifted", (w as f64).abs()));
        if r < 0.0 {
            let w = winding(sf, &dir, radius)?;
            out.push(("winding_delta_one", (w as f64).abs()));
        }
    }
    Ok(out)
}

/// Parameters of [`run_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub scenarios: usize,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityStat {
    /// Largest error (or smallest value for lower bounds) seen.
    pub worst: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub scenarios_per_dim: usize,
    pub scenario_count: usize,
    pub identities: BTreeMap<String, IdentityStat>,
    /// Scenario-level errors (an operation failed outright).
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Draw `scenarios` random shocks per dimension and run every identity.
/// Scenarios are independent and evaluated in parallel; the report is
/// deterministic for a given seed.
pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport, OracleError> {
    for &d in &cfg.dims {
        if !(2..=4).contains(&d) {
            return Err(OracleError::Shape(format!(
                "verify supports d in 2..=4 (system size ≤ {MAX_DIM}), got {d}"
            )));
        }
    }
    let jobs: Vec<(usize, usize)> = cfg
        .dims
        .iter()
        .flat_map(|&d| (0..cfg.scenarios).map(move |k| (d, k)))
        .collect();
    let results: Vec<(usize, usize, Result<Measurements, OracleError>)> = jobs
        .par_iter()
        .map(|&(d, k)| {
            let sc = random_scenario(cfg.seed, d, k);
            (d, k, fd_check_suite(&sc))
        })
        .collect();

    let mut stats: BTreeMap<String, IdentityStat> = IDENTITIES
        .iter()
        .map(|&(name, tol, bound)| {
            (
                name.to_string(),
                IdentityStat {
                    worst: match bound {
                        Bound::Upper => 0.0,
                        Bound::Lower => f64::INFINITY,
                    },
                    tolerance: tol,
                    bound,
                    samples: 0,
                    passed: true,
                },
            )
        })
        .collect();
    let mut failures = Vec::new();
    for (d, k, res) in results {
        match res {
            Ok(ms) => {
                for (name, val) in ms {
                    let st = stats.get_mut(name).expect("identity registered");
                    st.samples += 1;
                    st.worst = match st.bound {
                        Bound::Upper => st.worst.max(val),
                        Bound::Lower => st.worst.min(val),
                    };
                    // NaN must fail
                    if val.is_nan() {
                        st.worst = f64::NAN;
                    }
                }
            }
            Err(e) => failures.push(format!("d = {d}, scenario {k}: {e}")),
        }
    }

    // negative control: the contour machinery must see a known zero
    let c = DContour::new(2.0);
    let w_in = winding_number(|w| w - 0.5, &c)?;
    let w_out = winding_number(|w| w + 0.5, &c)?;
    let st = stats.get_mut("negative_control_winding").expect("registered");
    st.samples += 2;
    st.worst = ((w_in - 1).abs() + w_out.abs()) as f64;

    for st in stats.values_mut() {
        st.passed = match st.bound {
            Bound::Upper => st.worst <= st.tolerance,
            Bound::Lower => st.worst >= st.tolerance,
        };
    }
    stats.retain(|_, st| st.samples > 0);
    let passed = failures.is_empty() && stats.values().all(|s| s.passed);
    Ok(VerifyReport {
        seed: cfg.seed,
        dims: cfg.dims.clone(),
        scenarios_per_dim: cfg.scenarios,
        scenario_count: jobs.len(),
        identities: stats,
        failures,
        passed,
    })
}

/// Random unit vector helper used by tests and the acceptance suite.
pub fn random_unit(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-3 && r <= 1.0 {
            return v.iter().map(|x| x / r).collect();
        }
    }
}
