//! Argument parsing and command dispatch. Every number printed here comes
//! straight from a library call.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use hadshock::classifier::{classify, ClassifierError, StabilityKind, Verdict};
use hadshock::linalg::Mat;
use hadshock::lopatinskii::{evaluate_grid, GridNode, GridSpec, GridVar, LopatinskiiError};
use hadshock::materials::{
    catalog, check_hypotheses, MaterialConfig, MaterialError, MaterialModel, CATALOG_NAMES,
};
use hadshock::oracle::{run_suite, OracleError, VerifyConfig};
use hadshock::shock::{
    build, lax_check, rho, tau, LaxMargins, MatrixSpec, ShockError, ShockFront, ShockScenario,
};

use crate::output::{csv_f64, to_csv, to_json};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<MaterialError> for CliError {
    fn from(e: MaterialError) -> Self {
        match e {
            MaterialError::UnknownModel(_) | MaterialError::BadModuli(_) | MaterialError::Shape(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ShockError> for CliError {
    fn from(e: ShockError) -> Self {
        match e {
            ShockError::Material(m) => m.into(),
            ShockError::Shape(_) => CliError::Config(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<LopatinskiiError> for CliError {
    fn from(e: LopatinskiiError) -> Self {
        match e {
            LopatinskiiError::Shock(s) => s.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::Shock(s) => s.into(),
            ClassifierError::Lopatinskii(l) => l.into(),
            ClassifierError::InvalidBracket(_) | ClassifierError::BadParams(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Shape(_) => CliError::Config(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

/// Honour `HADSHOCK_THREADS` for the global rayon pool.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HADSHOCK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("HADSHOCK_THREADS = `{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Parser, Debug)]
#[command(name = "hadshock", version, about = "Lax shock stability analysis for Hadamard-type hyperelastic materials")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect catalog materials.
    #[command(subcommand)]
    Material(MaterialCmd),
    /// Build a shock and report its states, speed and Lax margins.
    Shock(ShockArgs),
    /// Decide uniform vs weak stability.
    Classify {
        #[command(flatten)]
        shock: ShockArgs,
        /// Sphere samples for d ≥ 3.
        #[arg(long)]
        sphere_res: Option<usize>,
    },
    /// Classify along a range of amplitudes (CSV).
    Sweep {
        #[command(flatten)]
        shock: ShockArgs,
        /// `lo,hi`
        #[arg(long, allow_hyphen_values = true)]
        alpha_range: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        sphere_res: Option<usize>,
    },
    /// Evaluate the normalised determinant on a rectangle of the complex plane.
    Grid {
        #[command(flatten)]
        shock: ShockArgs,
        #[arg(long, value_enum, default_value_t = Var::Gamma)]
        var: Var,
        /// `lo,hi`
        #[arg(long, allow_hyphen_values = true, default_value = "0,2")]
        grid_re: String,
        /// `lo,hi`
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2")]
        grid_im: String,
        /// `n` or `n_re,n_im`
        #[arg(long, default_value = "101")]
        grid_n: String,
        /// Tangential frequency, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// Rescale ξ̃ onto the normalised set.
        #[arg(long)]
        restrict: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the randomized identity suite (JSON report).
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        scenarios: usize,
        #[arg(long, default_value = "2,3,4")]
        dims: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum MaterialCmd {
    /// List catalog models.
    List,
    /// Check the structural hypotheses; exits 4 if any fails.
    Check(MaterialArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Var {
    Gamma,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct MaterialArgs {
    /// Catalog model name.
    #[arg(long, alias = "name")]
    material: Option<String>,
    /// JSON config (material record, or a shock scenario for shock commands).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    cbar: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct ShockArgs {
    #[command(flatten)]
    material: MaterialArgs,
    /// Row-major entries, comma separated, or `identity`.
    #[arg(long = "Uplus", allow_hyphen_values = true)]
    u_plus: Option<String>,
    #[arg(long = "vplus", allow_hyphen_values = true)]
    v_plus: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("{what}: `{t}` is not a number")))
        })
        .collect()
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    match parse_list(s, what)?[..] {
        [a, b] if a.is_finite() && b.is_finite() => Ok((a, b)),
        _ => Err(CliError::Config(format!("{what} expects `lo,hi`"))),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl MaterialArgs {
    fn params(&self) -> BTreeMap<String, f64> {
        [("b", self.b), ("c1", self.c1), ("cbar", self.cbar), ("lambda", self.lambda)]
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }

    fn catalog_model(&self) -> Result<MaterialModel, CliError> {
        let name = self
            .material
            .as_deref()
            .ok_or_else(|| CliError::Config("need --material or --config".into()))?;
        Ok(catalog(name, self.dim, self.mu, self.kappa, &self.params())?)
    }

    fn model(&self) -> Result<MaterialModel, CliError> {
        match &self.config {
            Some(p) => Ok(MaterialModel::from_config(&read_json::<MaterialConfig>(p)?)?),
            None => self.catalog_model(),
        }
    }
}

/// The shock inputs after merging a scenario file with command-line flags
/// (flags win).
struct ShockInputs {
    material: MaterialModel,
    u_plus: Mat,
    v_plus: Vec<f64>,
    alpha: Option<f64>,
}

impl ShockArgs {
    fn inputs(&self) -> Result<ShockInputs, CliError> {
        let (material, u_spec, v_plus, alpha) = match &self.material.config {
            Some(p) => {
                let sc: ShockScenario = read_json(p)?;
                let m = MaterialModel::from_config(&sc.material)?;
                (m, Some(sc.u_plus), sc.v_plus, Some(sc.alpha))
            }
            None => (self.material.catalog_model()?, None, None, None),
        };
        let d = material.dim();
        let u_spec = match &self.u_plus {
            Some(s) if s.trim() == "identity" => MatrixSpec::Named("identity".into()),
            Some(s) => MatrixSpec::Flat(parse_list(s, "--Uplus")?),
            None => u_spec.unwrap_or(MatrixSpec::Named("identity".into())),
        };
        let u_plus = u_spec.resolve(d)?;
        let v_plus = match &self.v_plus {
            Some(s) => parse_list(s, "--vplus")?,
            None => v_plus.unwrap_or_else(|| vec![0.0; d]),
        };
        if v_plus.len() != d {
            return Err(CliError::Config(format!("--vplus needs {d} entries")));
        }
        Ok(ShockInputs { material, u_plus, v_plus, alpha: self.alpha.or(alpha) })
    }

    fn shock(&self) -> Result<ShockFront, CliError> {
        let inp = self.inputs()?;
        let alpha = inp.alpha.ok_or_else(|| CliError::Config("need --alpha".into()))?;
        Ok(build(&inp.material, &inp.u_plus, &inp.v_plus, alpha)?)
    }
}

#[derive(Serialize)]
struct ShockReport {
    material: MaterialConfig,
    alpha: f64,
    alpha_max: f64,
    s: f64,
    j_plus: f64,
    j_minus: f64,
    u_plus: Vec<Vec<f64>>,
    u_minus: Vec<Vec<f64>>,
    v_plus: Vec<f64>,
    v_minus: Vec<f64>,
    theta11: f64,
    kappa2_plus: f64,
    kappa2_minus: f64,
    rho: f64,
    tau: f64,
    lax_margins: LaxMargins,
    rh_residual: [f64; 2],
}

fn rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn shock_report(sf: &ShockFront) -> ShockReport {
    let (kin, mom) = sf.rh_residual();
    ShockReport {
        material: sf.material().to_config(),
        alpha: sf.alpha(),
        alpha_max: sf.alpha_max(),
        s: sf.s(),
        j_plus: sf.j_plus(),
        j_minus: sf.j_minus(),
        u_plus: rows(sf.u_plus()),
        u_minus: rows(sf.u_minus()),
        v_plus: sf.v_plus().to_vec(),
        v_minus: sf.v_minus().to_vec(),
        theta11: sf.theta11(),
        kappa2_plus: sf.kappa2_plus(),
        kappa2_minus: sf.kappa2_minus(),
        rho: rho(sf),
        tau: tau(sf),
        lax_margins: lax_check(sf),
        rh_residual: [kin, mom],
    }
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v.kind {
        StabilityKind::Uniform => "uniform",
        StabilityKind::Weak => "weak",
    }
}

#[derive(Serialize)]
struct GridRow {
    re: f64,
    im: f64,
    re_delta: Option<f64>,
    im_delta: Option<f64>,
    abs_delta: Option<f64>,
    arg_delta: Option<f64>,
}

impl From<&GridNode> for GridRow {
    fn from(g: &GridNode) -> Self {
        let v: Option<Complex64> = g.value;
        GridRow {
            re: g.re,
            im: g.im,
            re_delta: v.map(|z| z.re),
            im_delta: v.map(|z| z.im),
            abs_delta: v.map(|z| z.norm()),
            arg_delta: v.map(|z| z.arg()),
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Material(MaterialCmd::List) => {
            for name in CATALOG_NAMES.iter().filter(|n| **n != "custom") {
                println!("{name}");
            }
            Ok(())
        }
        Command::Material(MaterialCmd::Check(args)) => {
            let m = args.model()?;
            let rep = check_hypotheses(&m);
            print!("{}", to_json(&rep));
            if rep.all_hold() {
                Ok(())
            } else {
                Err(CliError::Verification(format!("{}: hypotheses not satisfied", m.name())))
            }
        }
        Command::Shock(args) => {
            let sf = args.shock()?;
            emit(&to_json(&shock_report(&sf)), args.out.as_deref())
        }
        Command::Classify { shock, sphere_res } => {
            let sf = shock.shock()?;
            let v = classify(&sf, sphere_res)?;
            emit(&to_json(&v), shock.out.as_deref())
        }
        Command::Sweep { shock, alpha_range, steps, sphere_res } => {
            let (lo, hi) = parse_pair(&alpha_range, "--alpha-range")?;
            if steps < 2 {
                return Err(CliError::Config("--steps must be at least 2".into()));
            }
            let inp = shock.inputs()?;
            let alphas = linspace(lo, hi, steps);
            let rows: Vec<Vec<String>> = alphas
                .par_iter()
                .map(|&a| -> Result<Vec<String>, CliError> {
                    let sf = build(&inp.material, &inp.u_plus, &inp.v_plus, a)?;
                    let v = classify(&sf, sphere_res)?;
                    Ok(vec![
                        csv_f64(Some(a)),
                        csv_f64(Some(v.rho)),
                        csv_f64(v.min_criterion),
                        verdict_name(&v).to_string(),
                    ])
                })
                .collect::<Result<_, _>>()?;
            let text = to_csv(&["alpha", "rho", "min_criterion", "verdict"], &rows)
                .map_err(|e| CliError::Config(e.to_string()))?;
            emit(&text, shock.out.as_deref())
        }
        Command::Grid { shock, var, grid_re, grid_im, grid_n, xi, restrict, format } => {
            let sf = shock.shock()?;
            let d = sf.dim();
            let re = parse_pair(&grid_re, "--grid-re")?;
            let im = parse_pair(&grid_im, "--grid-im")?;
            let ns = parse_list(&grid_n, "--grid-n")?;
            let (n_re, n_im) = match ns[..] {
                [n] => (n, n),
                [a, b] => (a, b),
                _ => return Err(CliError::Config("--grid-n expects `n` or `n_re,n_im`".into())),
            };
            if !(n_re >= 2.0 && n_im >= 2.0 && n_re.fract() == 0.0 && n_im.fract() == 0.0) {
                return Err(CliError::Config("grid sizes must be integers ≥ 2".into()));
            }
            let xi_t = match xi {
                Some(s) => parse_list(&s, "--xi")?,
                None => {
                    let mut v = vec![0.0; d - 1];
                    v[0] = 1.0;
                    v
                }
            };
            if xi_t.len() != d - 1 {
                return Err(CliError::Config(format!("--xi needs {} entries", d - 1)));
            }
            let variable = match var {
                Var::Gamma => GridVar::Gamma,
                Var::Lambda => GridVar::Lambda,
            };
            // one grid column per task; row order matches a single sweep
            let columns: Vec<Vec<GridNode>> = linspace(re.0, re.1, n_re as usize)
                .par_iter()
                .map(|&r| {
                    evaluate_grid(
                        &sf,
                        &GridSpec {
                            variable,
                            re_range: (r, r),
                            im_range: im,
                            n_re: 1,
                            n_im: n_im as usize,
                            xi_t: xi_t.clone(),
                            restrict_gamma_tilde: restrict,
                        },
                    )
                })
                .collect::<Result<_, _>>()?;
            let nodes: Vec<GridRow> = columns.iter().flatten().map(GridRow::from).collect();
            let text = match format {
                Format::Json => to_json(&nodes),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = nodes
                        .iter()
                        .map(|g| {
                            vec![
                                csv_f64(Some(g.re)),
                                csv_f64(Some(g.im)),
                                csv_f64(g.re_delta),
                                csv_f64(g.im_delta),
                                csv_f64(g.abs_delta),
                                csv_f64(g.arg_delta),
                            ]
                        })
                        .collect();
                    to_csv(&["re", "im", "re_delta", "im_delta", "abs_delta", "arg_delta"], &rows)
                        .map_err(|e| CliError::Config(e.to_string()))?
                }
            };
            emit(&text, shock.out.as_deref())
        }
        Command::Verify { seed, scenarios, dims, out } => {
            let dims: Vec<usize> = parse_list(&dims, "--dims")?
                .into_iter()
                .map(|x| {
                    (x.fract() == 0.0 && x >= 0.0)
                        .then_some(x as usize)
                        .ok_or_else(|| CliError::Config(format!("--dims: `{x}` is not an integer")))
                })
                .collect::<Result<_, _>>()?;
            if scenarios == 0 {
                return Err(CliError::Config("--scenarios must be positive".into()));
            }
            let rep = run_suite(&VerifyConfig { seed, scenarios, dims })?;
            emit(&to_json(&rep), out.as_deref())?;
            if rep.passed {
                Ok(())
            } else {
                Err(CliError::Verification("identity suite failed".into()))
            }
        }
    }
}
