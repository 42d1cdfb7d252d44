//! Hyperelastic materials of Hadamard type,
//! `W(U) = μ/2 tr(UᵀU) + h(det U)`.
//!
//! A [`MaterialModel`] is the shear modulus, the spatial dimension and a
//! volumetric function `h` with its first three derivatives. The catalog
//! covers the standard closed-form volumetric laws; [`HForm::Custom`]
//! assembles `h` from a short list of elementary terms.

mod forms;
mod tensors;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use forms::{CustomForm, CustomTerm, HForm};
pub use tensors::{
    acoustic_spectrum, acoustic_tensor, b_tensor, cauchy_stress, char_speeds, domain_check,
    energy, piola_kirchhoff, AcousticSpectrum, CharSpeed,
};

/// Errors from material construction and evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("unknown material model `{0}`")]
    UnknownModel(String),
    #[error("bad moduli: {0}")]
    BadModuli(String),
    #[error("deformation gradient has det U = {0:e} ≤ 0")]
    NonPositiveJacobian(f64),
    #[error("zero frequency vector")]
    ZeroFrequency,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("system is not hyperbolic at this state (κ₂ = {0:e})")]
    NotHyperbolic(f64),
}

/// How the derivatives of `h` were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Analytic,
    /// Synthesised by central differences; lower confidence.
    Synthesized,
}

/// Material record in the on-disk / CLI form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialConfig {
    pub name: String,
    pub dimension: usize,
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

/// An immutable material: `μ`, `d` and the volumetric law.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    name: String,
    dim: usize,
    mu: f64,
    kappa: Option<f64>,
    form: HForm,
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 9] = [
    "ciarlet-geymonat",
    "blatz",
    "ogden-foam",
    "levinson-burgess",
    "simo-taylor",
    "ogden-hill",
    "simo-miehe",
    "bischoff-arruda-grosh",
    "custom",
];

fn param(params: &BTreeMap<String, f64>, key: &str) -> Option<f64> {
    params.get(key).copied()
}

fn need(params: &BTreeMap<String, f64>, key: &str, model: &str) -> Result<f64, MaterialError> {
    param(params, key)
        .ok_or_else(|| MaterialError::BadModuli(format!("{model} needs parameter `{key}`")))
}

fn need_kappa(kappa: Option<f64>, model: &str) -> Result<f64, MaterialError> {
    kappa.ok_or_else(|| MaterialError::BadModuli(format!("{model} needs a bulk modulus kappa")))
}

fn require_poisson_positive(kappa: f64, mu: f64, dim: usize) -> Result<(), MaterialError> {
    let lim = 2.0 * mu / dim as f64;
    if kappa > lim {
        Ok(())
    } else {
        Err(MaterialError::BadModuli(format!(
            "kappa = {kappa} must exceed 2 mu / d = {lim}"
        )))
    }
}

/// Build a catalog material.
///
/// `params` carries the model-specific scalars (`c1`, `cbar`, `b`,
/// `lambda`). Custom models go through [`MaterialModel::custom`] or
/// [`MaterialModel::from_config`].
pub fn catalog(
    name: &str,
    dim: usize,
    mu: f64,
    kappa: Option<f64>,
    params: &BTreeMap<String, f64>,
) -> Result<MaterialModel, MaterialError> {
    if !(2..=5).contains(&dim) {
        return Err(MaterialError::BadModuli(format!(
            "dimension {dim} not supported (2..=5)"
        )));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(MaterialError::BadModuli(format!("mu = {mu} must be positive")));
    }
    if let Some(k) = kappa {
        if !k.is_finite() {
            return Err(MaterialError::BadModuli("kappa is not finite".into()));
        }
    }
    let d = dim as f64;
    let form = match name {
        "ciarlet-geymonat" => {
            let k = need_kappa(kappa, name)?;
            require_poisson_positive(k, mu, dim)?;
            HForm::CiarletGeymonat { kappa: k }
        }
        "blatz" => {
            let k = need_kappa(kappa, name)?;
            require_poisson_positive(k, mu, dim)?;
            HForm::Blatz { kappa: k }
        }
        "ogden-foam" => {
            let c1 = match (param(params, "c1"), kappa) {
                (Some(c1), Some(k)) => {
                    let implied = (d * k - 2.0 * mu) / (2.0 * d * mu);
                    if (implied - c1).abs() > 1e-12 * c1.abs().max(1.0) {
                        return Err(MaterialError::BadModuli(format!(
                            "c1 = {c1} inconsistent with kappa = {k} (implies c1 = {implied})"
                        )));
                    }
                    c1
                }
                (Some(c1), None) => c1,
                (None, Some(k)) => {
                    require_poisson_positive(k, mu, dim)?;
                    (d * k - 2.0 * mu) / (2.0 * d * mu)
                }
                (None, None) => {
                    return Err(MaterialError::BadModuli(
                        "ogden-foam needs kappa or parameter `c1`".into(),
                    ))
                }
            };
            if !(c1 > 0.0 && c1.is_finite()) {
                return Err(MaterialError::BadModuli(format!("c1 = {c1} must be positive")));
            }
            HForm::OgdenFoam { c1 }
        }
        "levinson-burgess" => {
            let cbar = match (param(params, "cbar"), kappa) {
                (Some(c), _) => c,
                (None, Some(k)) => {
                    require_poisson_positive(k, mu, dim)?;
                    k / mu - 2.0 / d + 1.0
                }
                (None, None) => {
                    return Err(MaterialError::BadModuli(
                        "levinson-burgess needs kappa or parameter `cbar`".into(),
                    ))
                }
            };
            if !(cbar > 1.0) {
                return Err(MaterialError::BadModuli(format!(
                    "cbar = {cbar} must exceed 1"
                )));
            }
            HForm::LevinsonBurgess { cbar }
        }
        "simo-taylor" => {
            let lambda = match (param(params, "lambda"), kappa) {
                (Some(l), _) => l,
                (None, Some(k)) => {
                    require_poisson_positive(k, mu, dim)?;
                    k - 2.0 * mu / d
                }
                (None, None) => {
                    return Err(MaterialError::BadModuli(
                        "simo-taylor needs kappa or parameter `lambda`".into(),
                    ))
                }
            };
            if !(lambda > 0.0) {
                return Err(MaterialError::BadModuli(format!(
                    "lambda = {lambda} must be positive"
                )));
            }
            HForm::SimoTaylor { lambda }
        }
        "ogden-hill" => {
            let b = need(params, "b", name)?;
            if !(b > 0.0) {
                return Err(MaterialError::BadModuli(format!("b = {b} must be positive")));
            }
            HForm::OgdenHill { b }
        }
        "simo-miehe" => {
            let k = need_kappa(kappa, name)?;
            if !(k > 0.0) {
                return Err(MaterialError::BadModuli(format!("kappa = {k} must be positive")));
            }
            HForm::SimoMiehe { kappa: k }
        }
        "bischoff-arruda-grosh" => {
            let cbar = need(params, "cbar", name)?;
            let b = need(params, "b", name)?;
            if !(cbar > 0.0) || b == 0.0 || !b.is_finite() {
                return Err(MaterialError::BadModuli(format!(
                    "need cbar > 0 and b != 0 (got cbar = {cbar}, b = {b})"
                )));
            }
            HForm::BischoffArrudaGrosh { cbar, b }
        }
        "custom" => {
            return Err(MaterialError::BadModuli(
                "custom models need a term list; use a config file".into(),
            ))
        }
        other => return Err(MaterialError::UnknownModel(other.to_string())),
    };
    Ok(MaterialModel {
        name: name.to_string(),
        dim,
        mu,
        kappa,
        form,
    })
}

impl MaterialModel {
    /// Custom model from elementary terms.
    pub fn custom(
        dim: usize,
        mu: f64,
        kappa: Option<f64>,
        form: CustomForm,
    ) -> Result<Self, MaterialError> {
        if !(2..=5).contains(&dim) {
            return Err(MaterialError::BadModuli(format!(
                "dimension {dim} not supported (2..=5)"
            )));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(MaterialError::BadModuli(format!("mu = {mu} must be positive")));
        }
        if form.terms.is_empty() {
            return Err(MaterialError::BadModuli("custom model has no terms".into()));
        }
        Ok(Self {
            name: "custom".into(),
            dim,
            mu,
            kappa,
            form: HForm::Custom(form),
        })
    }

    pub fn from_config(cfg: &MaterialConfig) -> Result<Self, MaterialError> {
        if cfg.name == "custom" {
            let params = cfg
                .params
                .clone()
                .ok_or_else(|| MaterialError::BadModuli("custom model needs params".into()))?;
            let form: CustomForm = serde_json::from_value(params)
                .map_err(|e| MaterialError::BadModuli(format!("custom params: {e}")))?;
            return Self::custom(cfg.dimension, cfg.mu, cfg.kappa, form);
        }
        let mut params = BTreeMap::new();
        if let Some(v) = &cfg.params {
            let obj = v
                .as_object()
                .ok_or_else(|| MaterialError::BadModuli("params must be an object".into()))?;
            for (k, x) in obj {
                let x = x.as_f64().ok_or_else(|| {
                    MaterialError::BadModuli(format!("parameter `{k}` is not a number"))
                })?;
                params.insert(k.clone(), x);
            }
        }
        catalog(&cfg.name, cfg.dimension, cfg.mu, cfg.kappa, &params)
    }

    pub fn to_config(&self) -> MaterialConfig {
        let params = match &self.form {
            HForm::OgdenFoam { c1 } => Some(serde_json::json!({ "c1": c1 })),
            HForm::LevinsonBurgess { cbar } => Some(serde_json::json!({ "cbar": cbar })),
            HForm::SimoTaylor { lambda } => Some(serde_json::json!({ "lambda": lambda })),
            HForm::OgdenHill { b } => Some(serde_json::json!({ "b": b })),
            HForm::BischoffArrudaGrosh { cbar, b } => {
                Some(serde_json::json!({ "cbar": cbar, "b": b }))
            }
            HForm::Custom(c) => serde_json::to_value(c).ok(),
            HForm::CiarletGeymonat { .. } | HForm::Blatz { .. } | HForm::SimoMiehe { .. } => None,
        };
        MaterialConfig {
            name: self.name.clone(),
            dimension: self.dim,
            mu: self.mu,
            kappa: self.kappa,
            params,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Declared bulk modulus, if any.
    pub fn declared_kappa(&self) -> Option<f64> {
        self.kappa
    }

    /// Bulk modulus implied by the linearisation at `U = I`:
    /// `κ = μ(2/d − 1) + h''(1)`.
    pub fn implied_kappa(&self) -> f64 {
        self.mu * (2.0 / self.dim as f64 - 1.0) + self.h2(1.0)
    }

    /// Declared bulk modulus, falling back to the implied one.
    pub fn kappa(&self) -> f64 {
        self.kappa.unwrap_or_else(|| self.implied_kappa())
    }

    pub fn form(&self) -> &HForm {
        &self.form
    }

    pub fn derivative_source(&self) -> DerivativeSource {
        match &self.form {
            HForm::Custom(c) if c.synthesize_derivatives => DerivativeSource::Synthesized,
            _ => DerivativeSource::Analytic,
        }
    }

    pub fn h(&self, j: f64) -> f64 {
        self.form.h(j, self.dim as f64, self.mu)
    }

    pub fn h1(&self, j: f64) -> f64 {
        self.form.h1(j, self.dim as f64, self.mu)
    }

    pub fn h2(&self, j: f64) -> f64 {
        self.form.h2(j, self.dim as f64, self.mu)
    }

    pub fn h3(&self, j: f64) -> f64 {
        self.form.h3(j, self.dim as f64, self.mu)
    }
}

/// Result of [`check_hypotheses`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub name: String,
    pub dimension: usize,
    /// `h'' > 0` on the whole sample grid.
    pub h2_positive: bool,
    /// `h''' < 0` on the whole sample grid.
    pub h3_negative: bool,
    /// `h'(1) = −μ`.
    pub free_stress: bool,
    /// Declared `κ` agrees with `μ(2/d − 1) + h''(1)`; false when no `κ`
    /// was declared.
    pub bulk_relation: bool,
    /// Whether a bulk modulus was declared at all. Without one the bulk
    /// relation is not a claimed hypothesis.
    pub kappa_declared: bool,
    /// `h' ≤ 0` on the grid (informational only).
    pub restricted_hadamard: bool,
    /// Supplied derivatives agree with central differences of `h`.
    pub fd_consistent: bool,
    pub fd_max_rel_error: f64,
    pub kappa: f64,
    pub lame_lambda: f64,
    pub poisson: f64,
    pub derivative_source: DerivativeSource,
}

impl HypothesisReport {
    /// Every hypothesis the stability analysis relies on holds.
    pub fn all_hold(&self) -> bool {
        self.h2_positive
            && self.h3_negative
            && self.free_stress
            && (self.bulk_relation || !self.kappa_declared)
    }
}

/// Log-spaced grid of `n` Jacobians in `[lo, hi]`.
pub fn j_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Sample grid used by [`check_hypotheses`].
pub const HYPOTHESIS_GRID: (f64, f64, usize) = (1e-3, 1e3, 400);

/// Relative tolerance for the derivative consistency check.
pub const FD_CONSISTENCY_TOL: f64 = 1e-6;

/// Check the structural hypotheses on a log-spaced `J` grid.
pub fn check_hypotheses(m: &MaterialModel) -> HypothesisReport {
    let (lo, hi, n) = HYPOTHESIS_GRID;
    let grid = j_grid(lo, hi, n);
    let h2_positive = grid.iter().all(|&j| m.h2(j) > 0.0);
    let h3_negative = grid.iter().all(|&j| m.h3(j) < 0.0);
    let restricted_hadamard = grid.iter().all(|&j| m.h1(j) <= 0.0);
    let mu = m.mu();
    let free_stress = (m.h1(1.0) + mu).abs() <= 1e-12 * mu.max(1.0);
    let implied = m.implied_kappa();
    let bulk_relation = m
        .declared_kappa()
        .is_some_and(|k| (k - implied).abs() <= 1e-10 * k.abs().max(1.0));

    let mut worst = 0.0f64;
    let scale = m.form().length_scale();
    for &j in &grid {
        // chain first derivatives: h1 ~ D h, h2 ~ D h1, h3 ~ D h2
        let step = forms::synth_step(j, scale);
        let checks = [
            (m.h1(j), forms::d1(|x| m.h(x), j, step)),
            (m.h2(j), forms::d1(|x| m.h1(x), j, step)),
            (m.h3(j), forms::d1(|x| m.h2(x), j, step)),
        ];
        for (got, fd) in checks {
            if !(got.is_finite() && fd.is_finite()) {
                continue;
            }
            let rel = (got - fd).abs() / got.abs().max(fd.abs()).max(1.0);
            worst = worst.max(rel);
        }
    }

    let d = m.dim() as f64;
    let kappa = m.kappa();
    HypothesisReport {
        name: m.name().to_string(),
        dimension: m.dim(),
        h2_positive,
        h3_negative,
        free_stress,
        bulk_relation,
        kappa_declared: m.declared_kappa().is_some(),
        restricted_hadamard,
        fd_consistent: worst <= FD_CONSISTENCY_TOL,
        fd_max_rel_error: worst,
        kappa,
        lame_lambda: kappa - 2.0 * mu / d,
        poisson: (d * kappa - 2.0 * mu) / (2.0 * mu + d * (d - 1.0) * kappa),
        derivative_source: m.derivative_source(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(d: usize, mu: f64, k: f64) -> MaterialModel {
        catalog("ciarlet-geymonat", d, mu, Some(k), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn cg_plane_values() {
        let m = cg(2, 1.0, 2.0);
        for j in [0.5f64, 1.0, 1.3, 4.0] {
            let h = -1.0 - j.ln() + 0.5 * (j - 1.0) * (j - 1.0);
            assert!((m.h(j) - h).abs() < 1e-14);
            assert!((m.h2(j) - (1.0 / (j * j) + 1.0)).abs() < 1e-14);
        }
        let r = check_hypotheses(&m);
        assert!(r.all_hold() && r.fd_consistent, "{r:?}");
    }

    #[test]
    fn ogden_hill_fails_strict_h3() {
        let mut p = BTreeMap::new();
        p.insert("b".to_string(), 0.5);
        let m = catalog("ogden-hill", 2, 1.0, None, &p).unwrap();
        let r = check_hypotheses(&m);
        assert!(!r.h3_negative && !r.all_hold());
    }

    #[test]
    fn bag_h3_changes_sign() {
        let mut p = BTreeMap::new();
        p.insert("cbar".to_string(), 1.0);
        p.insert("b".to_string(), 0.5);
        let m = catalog("bischoff-arruda-grosh", 3, 1.0, None, &p).unwrap();
        assert!(m.h3(0.5) < 0.0 && m.h3(2.0) > 0.0);
        assert!(!check_hypotheses(&m).h3_negative);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            catalog("neo-hookean-ish", 2, 1.0, Some(2.0), &BTreeMap::new()),
            Err(MaterialError::UnknownModel(_))
        ));
        assert!(matches!(
            catalog("ciarlet-geymonat", 2, 1.0, Some(0.9), &BTreeMap::new()),
            Err(MaterialError::BadModuli(_))
        ));
        assert!(matches!(
            catalog("blatz", 3, -1.0, Some(2.0), &BTreeMap::new()),
            Err(MaterialError::BadModuli(_))
        ));
    }

    #[test]
    fn ogden_foam_from_c1() {
        let mut p = BTreeMap::new();
        p.insert("c1".to_string(), 2.0);
        let m = catalog("ogden-foam", 2, 1.0, None, &p).unwrap();
        assert!((m.h1(2.0) + 2f64.powi(-5)).abs() < 1e-15);
        assert!((m.implied_kappa() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn config_roundtrip() {
        let m = cg(3, 1.5, 4.0);
        let back = MaterialModel::from_config(&m.to_config()).unwrap();
        assert_eq!(m, back);
    }
}
