//! Seeded random shock scenarios.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Mat, C64};
use crate::lopatinskii::FreqPoint;
use crate::materials::{catalog, MaterialModel};
use crate::shock::{build, ShockFront};

/// Materials with `h''' < 0` everywhere, so every `α < 0` gives a Lax shock.
pub const SCENARIO_MODELS: [&str; 5] = [
    "ciarlet-geymonat",
    "blatz",
    "ogden-foam",
    "simo-taylor",
    "simo-miehe",
];

/// A random shock plus a random frequency in the right half plane.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub index: usize,
    pub shock: ShockFront,
    pub freq: FreqPoint,
}

/// Deterministic stream per `(seed, dim, index)`.
pub fn scenario_rng(seed: u64, dim: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 32) | index as u64);
    rng
}

/// `U⁺ = I + 0.5 G`, `G` entries uniform in `[−1, 1]`, resampled until
/// `det U⁺ > 0.2`.
pub fn random_u_plus(rng: &mut impl Rng, d: usize) -> Mat {
    loop {
        let g = Mat::from_fn(d, d, |_, _| rng.gen_range(-1.0..=1.0));
        let u = &Mat::identity(d) + &g.scale(0.5);
        if u.det() > 0.2 {
            return u;
        }
    }
}

pub fn random_material(rng: &mut impl Rng, d: usize) -> MaterialModel {
    let name = SCENARIO_MODELS[rng.gen_range(0..SCENARIO_MODELS.len())];
    let mu = rng.gen_range(0.5..2.0);
    let kappa = 2.0 * mu / d as f64 * rng.gen_range(1.2..4.0);
    catalog(name, d, mu, Some(kappa), &BTreeMap::new()).expect("moduli chosen admissible")
}

/// `λ` with `Re λ > 0` (bounded away from the axis) and `ξ̃ ∈ [−1, 1]^{d−1}`.
pub fn random_freq(rng: &mut impl Rng, d: usize) -> FreqPoint {
    let phi = rng.gen_range(-1.35..1.35);
    let r = rng.gen_range(0.2..2.0);
    let xi = (1..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    FreqPoint::new(C64::from_polar(r, phi), xi)
}

/// Scenario `index` of dimension `d`.
pub fn random_scenario(seed: u64, d: usize, index: usize) -> Scenario {
    let mut rng = scenario_rng(seed, d, index);
    loop {
        let m = random_material(&mut rng, d);
        let u = random_u_plus(&mut rng, d);
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let alpha = rng.gen_range(-3.0..=-0.05);
        // every α < 0 is admissible for these models; retry only on the
        // (numerically) degenerate corner cases
        if let Ok(shock) = build(&m, &u, &v, alpha) {
            let freq = random_freq(&mut rng, d);
            return Scenario { index, shock, freq };
        }
    }
}
