//! Volumetric laws `h(J)` and their derivatives.

use serde::{Deserialize, Serialize};

/// Closed-form volumetric functions. `d` and `μ` are supplied at evaluation
/// time by the owning [`super::MaterialModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum HForm {
    /// `−dμ/2 − μ ln J + (κ/2 − μ/d)(J − 1)²`
    CiarletGeymonat { kappa: f64 },
    /// `−dμ/2 + (κ − 2μ/d)(J − 1) − (κ + (d − 2)μ/d) ln J`
    Blatz { kappa: f64 },
    /// `−dμ/2 + μ/(2c₁) (J^{−2c₁} − 1)`
    OgdenFoam { c1: f64 },
    /// `−dμ/2 + μ/2 (c̄(J² − 1) + 2(c̄ + 1)(1 − J))`
    LevinsonBurgess { cbar: f64 },
    /// `−dμ/2 − μ ln J + Λ/2 (J²/2 − ln J − 1/2)`
    SimoTaylor { lambda: f64 },
    /// `−dμ/2 + (J − 1)²/b`
    OgdenHill { b: f64 },
    /// `−dμ/2 + κ/4 (J² − 1 − 2 ln J)`
    SimoMiehe { kappa: f64 },
    /// `−dμ/2 + c̄/b² (cosh(b(J − 1)) − 1)`
    BischoffArrudaGrosh { cbar: f64, b: f64 },
    Custom(CustomForm),
}

/// One elementary term of a custom volumetric law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CustomTerm {
    /// `c`
    Constant { coeff: f64 },
    /// `c J^p`
    Power { coeff: f64, exponent: f64 },
    /// `c ln J`
    Log { coeff: f64 },
    /// `c exp(r J)`
    Exp { coeff: f64, rate: f64 },
}

/// `h(J) = Σ terms`. With `synthesize_derivatives` set, only `h` itself is
/// evaluated analytically and `h'`, `h''`, `h'''` come from central
/// differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomForm {
    pub terms: Vec<CustomTerm>,
    #[serde(default)]
    pub synthesize_derivatives: bool,
}

impl CustomTerm {
    fn eval(&self, j: f64, order: u32) -> f64 {
        match *self {
            CustomTerm::Constant { coeff } => {
                if order == 0 {
                    coeff
                } else {
                    0.0
                }
            }
            CustomTerm::Power { coeff, exponent: p } => {
                let mut c = coeff;
                for k in 0..order {
                    c *= p - k as f64;
                }
                if c == 0.0 {
                    0.0
                } else {
                    c * j.powf(p - order as f64)
                }
            }
            CustomTerm::Log { coeff } => match order {
                0 => coeff * j.ln(),
                1 => coeff / j,
                2 => -coeff / (j * j),
                _ => 2.0 * coeff / (j * j * j),
            },
            CustomTerm::Exp { coeff, rate } => coeff * rate.powi(order as i32) * (rate * j).exp(),
        }
    }
}

impl CustomForm {
    fn eval(&self, j: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(j, 0)).sum()
    }

    fn derivative(&self, j: f64, order: u32) -> f64 {
        if self.synthesize_derivatives {
            let s = synth_step(j, self.length_scale());
            let f = |x: f64| self.eval(x);
            match order {
                1 => d1(f, j, s),
                2 => d2(f, j, 10.0 * s),
                _ => d3(f, j, 20.0 * s),
            }
        } else {
            self.terms.iter().map(|t| t.eval(j, order)).sum()
        }
    }

    fn length_scale(&self) -> f64 {
        self.terms
            .iter()
            .filter_map(|t| match t {
                CustomTerm::Exp { rate, .. } if *rate != 0.0 => Some(1.0 / rate.abs()),
                _ => None,
            })
            .fold(f64::INFINITY, f64::min)
    }
}

impl HForm {
    pub fn h(&self, j: f64, d: f64, mu: f64) -> f64 {
        let base = -d * mu / 2.0;
        match self {
            HForm::CiarletGeymonat { kappa } => {
                base - mu * j.ln() + (kappa / 2.0 - mu / d) * (j - 1.0).powi(2)
            }
            HForm::Blatz { kappa } => {
                base + (kappa - 2.0 * mu / d) * (j - 1.0) - (kappa + (d - 2.0) * mu / d) * j.ln()
            }
            HForm::OgdenFoam { c1 } => base + mu / (2.0 * c1) * (j.powf(-2.0 * c1) - 1.0),
            HForm::LevinsonBurgess { cbar } => {
                base + mu / 2.0 * (cbar * (j * j - 1.0) + 2.0 * (cbar + 1.0) * (1.0 - j))
            }
            HForm::SimoTaylor { lambda } => {
                base - mu * j.ln() + lambda / 2.0 * (j * j / 2.0 - j.ln() - 0.5)
            }
            HForm::OgdenHill { b } => base + (j - 1.0).powi(2) / b,
            HForm::SimoMiehe { kappa } => base + kappa / 4.0 * (j * j - 1.0 - 2.0 * j.ln()),
            HForm::BischoffArrudaGrosh { cbar, b } => {
                base + cbar / (b * b) * ((b * (j - 1.0)).cosh() - 1.0)
            }
            HForm::Custom(c) => c.eval(j),
        }
    }

    pub fn h1(&self, j: f64, d: f64, mu: f64) -> f64 {
        match self {
            HForm::CiarletGeymonat { kappa } => -mu / j + (kappa - 2.0 * mu / d) * (j - 1.0),
            HForm::Blatz { kappa } => (kappa - 2.0 * mu / d) - (kappa + (d - 2.0) * mu / d) / j,
            HForm::OgdenFoam { c1 } => -mu * j.powf(-2.0 * c1 - 1.0),
            HForm::LevinsonBurgess { cbar } => mu * (cbar * j - (cbar + 1.0)),
            HForm::SimoTaylor { lambda } => -mu / j + lambda / 2.0 * (j - 1.0 / j),
            HForm::OgdenHill { b } => 2.0 * (j - 1.0) / b,
            HForm::SimoMiehe { kappa } => kappa / 2.0 * (j - 1.0 / j),
            HForm::BischoffArrudaGrosh { cbar, b } => cbar / b * (b * (j - 1.0)).sinh(),
            HForm::Custom(c) => c.derivative(j, 1),
        }
    }

    pub fn h2(&self, j: f64, d: f64, mu: f64) -> f64 {
        match self {
            HForm::CiarletGeymonat { kappa } => mu / (j * j) + kappa - 2.0 * mu / d,
            HForm::Blatz { kappa } => (kappa + (d - 2.0) * mu / d) / (j * j),
            HForm::OgdenFoam { c1 } => mu * (2.0 * c1 + 1.0) * j.powf(-2.0 * c1 - 2.0),
            HForm::LevinsonBurgess { cbar } => mu * cbar,
            HForm::SimoTaylor { lambda } => mu / (j * j) + lambda / 2.0 * (1.0 + 1.0 / (j * j)),
            HForm::OgdenHill { b } => 2.0 / b,
            HForm::SimoMiehe { kappa } => kappa / 2.0 * (1.0 + 1.0 / (j * j)),
            HForm::BischoffArrudaGrosh { cbar, b } => cbar * (b * (j - 1.0)).cosh(),
            HForm::Custom(c) => c.derivative(j, 2),
        }
    }

    pub fn h3(&self, j: f64, d: f64, mu: f64) -> f64 {
        let j3 = j * j * j;
        match self {
            HForm::CiarletGeymonat { .. } => -2.0 * mu / j3,
            HForm::Blatz { kappa } => -2.0 * (kappa + (d - 2.0) * mu / d) / j3,
            HForm::OgdenFoam { c1 } => {
                -mu * (2.0 * c1 + 1.0) * (2.0 * c1 + 2.0) * j.powf(-2.0 * c1 - 3.0)
            }
            HForm::LevinsonBurgess { .. } | HForm::OgdenHill { .. } => 0.0,
            HForm::SimoTaylor { lambda } => -(2.0 * mu + lambda) / j3,
            HForm::SimoMiehe { kappa } => -kappa / j3,
            HForm::BischoffArrudaGrosh { cbar, b } => cbar * b * (b * (j - 1.0)).sinh(),
            HForm::Custom(c) => c.derivative(j, 3),
        }
    }

    /// Length over which `h` varies appreciably (∞ for algebraic forms).
    pub fn length_scale(&self) -> f64 {
        match self {
            HForm::BischoffArrudaGrosh { b, .. } => 1.0 / b.abs(),
            HForm::Custom(c) => c.length_scale(),
            _ => f64::INFINITY,
        }
    }
}

pub(crate) fn synth_step(j: f64, scale: f64) -> f64 {
    1e-3 * j.min(1.0).min(scale)
}

/// Fourth-order central first derivative.
pub(crate) fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

fn d3(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h)
        - 8.0 * f(x - 2.0 * h)
        + f(x - 3.0 * h))
        / (8.0 * h * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthesized_matches_analytic() {
        let terms = vec![
            CustomTerm::Constant { coeff: -1.0 },
            CustomTerm::Log { coeff: -1.0 },
            CustomTerm::Power { coeff: 0.5, exponent: 2.0 },
            CustomTerm::Exp { coeff: 0.1, rate: -0.5 },
        ];
        let exact = CustomForm { terms: terms.clone(), synthesize_derivatives: false };
        let synth = CustomForm { terms, synthesize_derivatives: true };
        for j in [0.3, 1.0, 2.5] {
            for order in 1..=3 {
                let a = exact.derivative(j, order);
                let s = synth.derivative(j, order);
                assert!((a - s).abs() < 1e-5 * a.abs().max(1.0), "order {order} at {j}");
            }
        }
    }
}
