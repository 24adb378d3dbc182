//! Batch front-end: TOML run configurations, one driver per subcommand,
//! and CSV/JSON artifacts stamped with the configuration hash.

use crate::algebra::{FullDualElement, GeometryError, GroupElement};
use crate::convex::InvariantPotential;
use crate::kahler::{matrix_coeff, state_norm, QuantumState, StateTag};
use crate::kw::{self, bs_points, bs_scan, convergence_profile, harmonics_by_torus_integration, harmonics, laplace_test};
use crate::lie::{GroupData, GroupId, Weight};
use crate::linalg::{c, CMat};
use crate::phase::CotangentPoint;
use crate::repr::{build_irrep, matrix_unit, EndMatrix};
use crate::transforms::{self, gcst, holomorphic_part, transport_pointwise, IsotypicVector, TransformSpec};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Identifiers of the normalization conventions baked into every artifact.
pub const CONVENTIONS: &str =
    "pairing=+i*tr;weights=fundamental;kak=det-fixed-last-column;halfform=covolume-one;haar=normalized";

#[derive(Parser, Debug)]
#[command(name = "kwlab", version, about = "Half-form quantization experiments on T*SU(2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Group data, dimensions and Bohr-Sommerfeld points.
    Info,
    /// Fourier harmonics of matrix coefficients and their reconstruction.
    Harmonics,
    /// Convergence of rescaled matrix coefficients along a geodesic ray.
    Converge,
    /// Laplace concentration of the half-form measure.
    Laplace,
    /// Bohr-Sommerfeld monodromy scan.
    Bs,
    /// Norms of Kähler states along a ray.
    Norms,
    /// Plancherel identity for random Peter-Weyl sums.
    Plancherel,
    /// Coherent state transport: composition and pointwise consistency.
    Gcst,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Info => "info",
            Command::Harmonics => "harmonics",
            Command::Converge => "converge",
            Command::Laplace => "laplace",
            Command::Bs => "bs",
            Command::Norms => "norms",
            Command::Plancherel => "plancherel",
            Command::Gcst => "gcst",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("tolerance failure: {0}")]
    Tolerance(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical error: {0}")]
    Geometry(GeometryError),
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Unsupported(m) => CliError::Unsupported(m),
            other => CliError::Geometry(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Tolerance(_) | CliError::Geometry(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Quadratic,
    QuarticPlusQuadratic,
    /// `Σ_k c_k q^k` in `q = <ξ, ξ>`.
    Casimir { coeffs: Vec<f64> },
}

impl PotentialSpec {
    pub fn build(&self, g: &GroupData) -> Result<InvariantPotential, CliError> {
        match self {
            PotentialSpec::Quadratic => Ok(InvariantPotential::quadratic(g)),
            PotentialSpec::QuarticPlusQuadratic => Ok(InvariantPotential::quartic_plus_quadratic(g)),
            PotentialSpec::Casimir { coeffs } => {
                InvariantPotential::casimir_polynomial(g, coeffs).map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSpec {
    Identity,
    Unit { i: usize, j: usize },
    Random { seed: u64 },
}

impl CoefficientSpec {
    pub fn build(&self, d: usize) -> Result<EndMatrix, CliError> {
        match *self {
            CoefficientSpec::Identity => Ok(CMat::identity(d, d)),
            CoefficientSpec::Unit { i, j } => {
                if i >= d || j >= d {
                    return Err(CliError::Config(format!("matrix unit ({i},{j}) outside dimension {d}")));
                }
                Ok(matrix_unit(d, i, j))
            }
            CoefficientSpec::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(d as u64));
                Ok(CMat::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl TGrid {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.count == 0 {
            return Err(CliError::Config("t-grid is empty".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop < self.start {
            return Err(CliError::Config("t-grid needs start <= stop".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let n = (self.count - 1) as f64;
        Ok(match self.spacing {
            Spacing::Linear => (0..self.count).map(|k| self.start + (self.stop - self.start) * k as f64 / n).collect(),
            Spacing::Log => {
                if self.start <= 0.0 {
                    return Err(CliError::Config("log spacing needs start > 0".into()));
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                (0..self.count).map(|k| (a + (b - a) * k as f64 / n).exp()).collect()
            }
        })
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TestProfile {
    /// `φ ≡ 1`.
    One,
    /// `φ = P⁻² e^{-(s - (λ+ρ))²}`.
    Bump,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub reconstruction: f64,
    pub torus_quadrature: f64,
    pub rate: f64,
    pub single_harmonic: f64,
    pub unitarity: f64,
    pub plancherel_exact: f64,
    pub plancherel_quadrature: f64,
    pub transport: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            reconstruction: 1e-10,
            torus_quadrature: 1e-9,
            rate: 0.1,
            single_harmonic: 1e-12,
            unitarity: 1e-6,
            plancherel_exact: 1e-9,
            plancherel_quadrature: 1e-6,
            transport: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub group: String,
    pub seed: u64,
    /// Highest weights, in fundamental-weight coordinates.
    pub lambdas: Vec<Vec<i64>>,
    pub g: PotentialSpec,
    pub h: PotentialSpec,
    pub coefficient: CoefficientSpec,
    pub t_grid: TGrid,
    /// Dominant `ξ₊` for single-point drivers.
    pub chamber_point: Vec<f64>,
    /// Random points for harmonics and transport checks.
    pub points: usize,
    pub torus_nodes: usize,
    pub bs_upper: f64,
    pub bs_denominator: u32,
    pub laplace_profile: TestProfile,
    pub plancherel_functions: usize,
    pub plancherel_max_lambda: i64,
    pub tolerance: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: "SU(2)".into(),
            seed: 0,
            lambdas: vec![vec![1]],
            g: PotentialSpec::Quadratic,
            h: PotentialSpec::Quadratic,
            coefficient: CoefficientSpec::Random { seed: 1 },
            t_grid: TGrid { start: 10.0, stop: 40.0, count: 31, spacing: Spacing::Linear },
            chamber_point: vec![1.0],
            points: 20,
            torus_nodes: 128,
            bs_upper: 5.0,
            bs_denominator: 100,
            laplace_profile: TestProfile::One,
            plancherel_functions: 20,
            plancherel_max_lambda: 4,
            tolerance: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    fn group_data(&self) -> Result<GroupData, CliError> {
        let id = GroupId::parse(&self.group).map_err(|e| CliError::Config(e.to_string()))?;
        if id != GroupId::SU2 {
            return Err(CliError::Unsupported(format!("{id} drivers; only SU(2) is available")));
        }
        GroupData::new(id).map_err(|e| CliError::Config(e.to_string()))
    }

    fn weights(&self, g: &GroupData) -> Result<Vec<Weight>, CliError> {
        if self.lambdas.is_empty() {
            return Err(CliError::Config("no highest weights given".into()));
        }
        self.lambdas
            .iter()
            .map(|l| {
                let w = Weight(l.clone());
                if l.len() != g.rank || !w.is_dominant() {
                    return Err(CliError::Config(format!("{l:?} is not a dominant weight of {}", g.id)));
                }
                Ok(w)
            })
            .collect()
    }

    fn chamber(&self, g: &GroupData) -> Result<Vec<f64>, CliError> {
        if self.chamber_point.len() != g.rank || !g.is_regular(&self.chamber_point) {
            return Err(CliError::Config(format!("chamber point {:?} is not regular", self.chamber_point)));
        }
        Ok(self.chamber_point.clone())
    }
}

/// A finished artifact: file name and contents.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Result of one driver: artifacts, a human summary, and tolerance failures.
#[derive(Clone, Debug)]
pub struct Report {
    pub artifacts: Vec<Artifact>,
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

pub fn config_hash(config_text: &str, seed: u64) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config_text.as_bytes());
    hasher.update(seed.to_le_bytes());
    format!("{:x}", hasher.finalize())
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Csv {
    text: String,
}

impl Csv {
    fn new(cmd: &str, hash: &str, header: &[&str]) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# kwlab {cmd} config_sha256={hash} conventions={CONVENTIONS}");
        let _ = writeln!(text, "{}", header.join(","));
        Csv { text }
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }
}

fn json_artifact(name: &str, hash: &str, value: serde_json::Value) -> Artifact {
    // serde_json's map is ordered by key
    let body = json!({ "config_sha256": hash, "conventions": CONVENTIONS, "result": value });
    Artifact { name: name.into(), contents: serde_json::to_string_pretty(&body).expect("serializable") + "\n" }
}

fn weight_label(w: &Weight) -> String {
    w.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs one subcommand on a parsed configuration.
pub fn run(cmd: Command, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    let g = cfg.group_data()?;
    match cmd {
        Command::Info => cmd_info(&g, cfg, hash),
        Command::Harmonics => cmd_harmonics(&g, cfg, hash),
        Command::Converge => cmd_converge(&g, cfg, hash),
        Command::Laplace => cmd_laplace(&g, cfg, hash),
        Command::Bs => cmd_bs(&g, cfg, hash),
        Command::Norms => cmd_norms(&g, cfg, hash),
        Command::Plancherel => cmd_plancherel(&g, cfg, hash),
        Command::Gcst => cmd_gcst(&g, cfg, hash),
    }
}

fn cmd_info(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    let dims: Vec<serde_json::Value> = (0..=3)
        .map(|l| {
            let w = Weight(vec![l]);
            json!({ "lambda": w.0, "dim": g.weyl_dimension(&w).expect("dominant") })
        })
        .collect();
    let bs = bs_points(g, cfg.bs_upper);
    let value = json!({
        "group": g.id.to_string(),
        "rank": g.rank,
        "dim": g.dim(),
        "rho": g.rho.0,
        "positive_roots": g.positive_roots.iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
        "gram": g.gram,
        "dimensions": dims,
        "bs_window_upper": cfg.bs_upper,
        "bs_points": bs,
    });
    let summary = vec![
        format!("group {} rank {} dim {}", g.id, g.rank, g.dim()),
        format!("rho {:?}", g.rho.0),
        format!("Bohr-Sommerfeld points in (0, {}]: {:?}", cfg.bs_upper, bs),
    ];
    Ok(Report { artifacts: vec![json_artifact("info.json", hash, value)], summary, failures: vec![] })
}

fn random_regular_point(rng: &mut ChaCha8Rng) -> CotangentPoint {
    CotangentPoint::random_with_chamber(2, 0.2, 2.0, rng)
}

fn cmd_harmonics(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    let pot = cfg.g.build(g)?;
    let tol = &cfg.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut csv = Csv::new(
        "harmonics",
        hash,
        &["lambda", "point", "nu", "re", "im", "torus_re", "torus_im", "torus_error", "reconstruction_error"],
    );
    let mut worst_rec: f64 = 0.0;
    let mut worst_torus: f64 = 0.0;
    for lam in cfg.weights(g)? {
        let ir = build_irrep(g, &lam)?;
        let a = cfg.coefficient.build(ir.dim)?;
        for k in 0..cfg.points {
            let p = random_regular_point(&mut rng);
            let tab = harmonics(&pot, &ir, &a, &p)?;
            let f = matrix_coeff(&pot, &ir, &a, &p)?;
            let scale = 1.0 + f.norm();
            let rec = (tab.sum() - f).norm() / scale;
            worst_rec = worst_rec.max(rec);
            let qs = harmonics_by_torus_integration(&pot, |x| matrix_coeff(&pot, &ir, &a, x), &ir.weights, &p, cfg.torus_nodes)?;
            for (nu, q) in ir.weights.iter().zip(qs) {
                let e = tab.entry(nu);
                let terr = (q - e).norm() / scale;
                worst_torus = worst_torus.max(terr);
                csv.row(&[
                    weight_label(&lam),
                    k.to_string(),
                    weight_label(nu),
                    num(e.re),
                    num(e.im),
                    num(q.re),
                    num(q.im),
                    num(terr),
                    num(rec),
                ]);
            }
        }
    }
    let mut failures = vec![];
    if worst_rec >= tol.reconstruction {
        failures.push(format!("reconstruction error {worst_rec:e} >= {:e}", tol.reconstruction));
    }
    if worst_torus >= tol.torus_quadrature {
        failures.push(format!("torus quadrature error {worst_torus:e} >= {:e}", tol.torus_quadrature));
    }
    Ok(Report {
        artifacts: vec![Artifact { name: "harmonics.csv".into(), contents: csv.text }],
        summary: vec![format!("max relative reconstruction error {worst_rec:e}, torus cross-check {worst_torus:e}")],
        failures,
    })
}

fn cmd_converge(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    let gp = cfg.g.build(g)?;
    let hp = cfg.h.build(g)?;
    let ts = cfg.t_grid.values()?;
    let s = cfg.chamber(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let u = GroupElement::random(2, &mut rng);
    let p = CotangentPoint::new(GroupElement::random(2, &mut rng), FullDualElement::from_chamber(2, &s).conjugate(&u));
    let mut csv = Csv::new("converge", hash, &["lambda", "t", "error", "naive_error", "fitted_rate", "predicted_rate"]);
    let mut summary = vec![];
    let mut failures = vec![];
    for lam in cfg.weights(g)? {
        let ir = build_irrep(g, &lam)?;
        let a = cfg.coefficient.build(ir.dim)?;
        let prof = convergence_profile(&gp, &hp, &ir, &a, &p, &ts)?;
        let predicted = prof.predicted_rate.unwrap_or(f64::NAN);
        for (k, row) in prof.rows.iter().enumerate() {
            let upto = &prof.rows[..=k];
            let upper: Vec<_> = upto.iter().skip(upto.len() / 2).filter(|r| r.error > 0.0).collect();
            let fit = kw::linear_fit(
                &upper.iter().map(|r| r.t).collect::<Vec<_>>(),
                &upper.iter().map(|r| r.error.ln()).collect::<Vec<_>>(),
            )
            .map_or(f64::NAN, |(sl, _, _)| -sl);
            csv.row(&[weight_label(&lam), num(row.t), num(row.error), num(row.naive_error), num(fit), num(predicted)]);
        }
        match (prof.fitted_rate, prof.predicted_rate) {
            (Some(fit), Some(pred)) => {
                let ratio = fit / pred;
                summary.push(format!(
                    "lambda {:?}: fitted rate {fit:.6} predicted {pred:.6} ratio {ratio:.4} R² {:.6}",
                    lam.0,
                    prof.r_squared.unwrap_or(f64::NAN)
                ));
                if (ratio - 1.0).abs() > cfg.tolerance.rate {
                    failures.push(format!("lambda {:?}: rate ratio {ratio}", lam.0));
                }
            }
            (_, None) => {
                let worst = prof.rows.iter().map(|r| r.error.max(r.naive_error)).fold(0.0, f64::max);
                summary.push(format!("lambda {:?}: single harmonic, max error {worst:e}", lam.0));
                if worst >= cfg.tolerance.single_harmonic {
                    failures.push(format!("lambda {:?}: single-harmonic error {worst:e}", lam.0));
                }
            }
            (None, Some(_)) => failures.push(format!("lambda {:?}: too few points to fit a rate", lam.0)),
        }
    }
    Ok(Report { artifacts: vec![Artifact { name: "converge.csv".into(), contents: csv.text }], summary, failures })
}

fn cmd_laplace(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    let hp = cfg.h.build(g)?;
    let ts = cfg.t_grid.values()?;
    let mut csv = Csv::new("laplace", hash, &["lambda", "t", "value", "limit", "error", "t_times_error"]);
    let mut summary = vec![];
    for lam in cfg.weights(g)? {
        let m = lam.add(&g.rho).as_f64();
        let profile = cfg.laplace_profile;
        let phi = move |s: &[f64]| match profile {
            TestProfile::One => 1.0,
            TestProfile::Bump => {
                let d2: f64 = s.iter().zip(&m).map(|(a, b)| (a - b).powi(2)).sum();
                let pw = GroupData::su2().weyl_density(s);
                (-d2).exp() / (pw * pw)
            }
        };
        let mut last = None;
        for &t in &ts {
            let r = laplace_test(&hp, &lam, t, phi.clone())?;
            csv.row(&[weight_label(&lam), num(t), num(r.value), num(r.limit), num(r.error), num(t * r.error)]);
            last = Some((t, r));
        }
        if let Some((t, r)) = last {
            summary.push(format!("lambda {:?}: t {t} error {:e} (t·error {:.6})", lam.0, r.error, t * r.error));
        }
    }
    Ok(Report { artifacts: vec![Artifact { name: "laplace.csv".into(), contents: csv.text }], summary, failures: vec![] })
}

fn cmd_bs(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    if cfg.bs_denominator == 0 || cfg.bs_upper <= 0.0 {
        return Err(CliError::Config("bs scan needs a positive window and denominator".into()));
    }
    let count = (cfg.bs_upper * cfg.bs_denominator as f64).round() as u32;
    let rows = bs_scan(g, cfg.bs_denominator, count)?;
    let mut csv = Csv::new("bs", hash, &["mu", "defect", "trivial"]);
    for r in &rows {
        csv.row(&[num(r.mu[0]), num(r.defect), r.trivial.to_string()]);
    }
    let trivial: Vec<f64> = rows.iter().filter(|r| r.trivial).map(|r| r.mu[0]).collect();
    let expected = bs_points(g, cfg.bs_upper);
    let mut failures = vec![];
    if trivial != expected {
        failures.push(format!("trivial monodromy at {trivial:?}, expected {expected:?}"));
    }
    Ok(Report {
        artifacts: vec![Artifact { name: "bs.csv".into(), contents: csv.text }],
        summary: vec![format!("trivial monodromy at {trivial:?}")],
        failures,
    })
}

fn cmd_norms(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    let hp = cfg.h.build(g)?;
    let ts = cfg.t_grid.values()?;
    let casimir = cfg.h == PotentialSpec::Quadratic;
    let mut csv = Csv::new("norms", hash, &["lambda", "t", "norm", "target", "deviation"]);
    let mut worst: f64 = 0.0;
    for lam in cfg.weights(g)? {
        let ir = build_irrep(g, &lam)?;
        let d = ir.dim;
        for &t in &ts {
            let st = QuantumState::new(ir.clone(), matrix_unit(d, 0, 0), StateTag::Kahler(hp.scaled(t)))?;
            let n = state_norm(&st, None)?;
            let target = 1.0 / d as f64;
            worst = worst.max((n - target).abs());
            csv.row(&[weight_label(&lam), num(t), num(n), num(target), num(n - target)]);
        }
    }
    let mut failures = vec![];
    if casimir && worst >= cfg.tolerance.unitarity {
        failures.push(format!("norm deviation {worst:e} >= {:e}", cfg.tolerance.unitarity));
    }
    let label = if casimir { "Casimir ray" } else { "non-Casimir ray (reported only)" };
    Ok(Report {
        artifacts: vec![Artifact { name: "norms.csv".into(), contents: csv.text }],
        summary: vec![format!("{label}: max |norm - 1/d| {worst:e}")],
        failures,
    })
}

fn cmd_plancherel(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    if cfg.plancherel_max_lambda < 0 {
        return Err(CliError::Config("plancherel_max_lambda must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut entries = vec![];
    let mut failures = vec![];
    let mut worst = (0.0f64, 0.0f64);
    for k in 0..cfg.plancherel_functions {
        let nblocks = rng.gen_range(1..=3usize);
        let mut lams: Vec<Weight> =
            (0..nblocks).map(|_| Weight(vec![rng.gen_range(0..=cfg.plancherel_max_lambda)])).collect();
        lams.sort();
        lams.dedup();
        let v = IsotypicVector::random(g, &lams, &mut rng)?;
        let exact = transforms::plancherel_check(g, &v)?;
        let quad = transforms::plancherel_by_quadrature(g, |x| v.eval(g, x).expect("SU(2) blocks"), v.bandwidth())?;
        worst = (worst.0.max(exact.diff), worst.1.max(quad.diff));
        entries.push(json!({
            "index": k,
            "lambdas": lams.iter().map(|l| l.0[0]).collect::<Vec<_>>(),
            "lhs": exact.lhs,
            "rhs": exact.rhs,
            "diff": exact.diff,
            "quadrature_lhs": quad.lhs,
            "quadrature_rhs": quad.rhs,
            "quadrature_diff": quad.diff,
        }));
    }
    if worst.0 >= cfg.tolerance.plancherel_exact {
        failures.push(format!("orthogonality path diff {:e}", worst.0));
    }
    if worst.1 >= cfg.tolerance.plancherel_quadrature {
        failures.push(format!("quadrature path diff {:e}", worst.1));
    }
    Ok(Report {
        artifacts: vec![json_artifact("plancherel.json", hash, json!({ "functions": entries }))],
        summary: vec![format!("max diff: orthogonality {:e}, quadrature {:e}", worst.0, worst.1)],
        failures,
    })
}

fn cmd_gcst(g: &GroupData, cfg: &RunConfig, hash: &str) -> Result<Report, CliError> {
    let gp = cfg.g.build(g)?;
    let hp = cfg.h.build(g)?;
    let ts = cfg.t_grid.values()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lams = cfg.weights(g)?;
    let mut v = IsotypicVector::new();
    for l in &lams {
        let d = g.weyl_dimension(l).map_err(|e| CliError::Config(e.to_string()))? as usize;
        v.insert(g, l.clone(), cfg.coefficient.build(d)?)?;
    }
    let mut csv = Csv::new("gcst", hash, &["lambda", "t", "point", "moved_re", "moved_im", "target_re", "target_im", "rel_error"]);
    let mut failures = vec![];
    let mut worst: f64 = 0.0;
    // composition: two half steps against one full step
    let source = StateTag::Kahler(gp.clone());
    for &t in &ts {
        let half = TransformSpec { h: hp.clone(), t: t / 2.0, source: source.clone() };
        let (v1, tag1) = gcst(&half, &v)?;
        let (v2, _) = gcst(&TransformSpec { h: hp.clone(), t: t / 2.0, source: tag1 }, &v1)?;
        let (vf, _) = gcst(&TransformSpec { h: hp.clone(), t, source: source.clone() }, &v)?;
        if v2 != vf {
            failures.push(format!("composition differs at t = {t}"));
        }
    }
    for l in &lams {
        let ir = build_irrep(g, l)?;
        let a = &v.blocks[l];
        for &t in &ts {
            for k in 0..cfg.points {
                let p = random_regular_point(&mut rng);
                let moved = transport_pointwise(&gp, &hp, t, &ir, a, &p)?;
                let target = holomorphic_part(&gp.plus(t, &hp), &ir, a, &p)?;
                let rel = (moved - target).norm() / target.norm().max(1.0);
                worst = worst.max(rel);
                csv.row(&[weight_label(l), num(t), k.to_string(), num(moved.re), num(moved.im), num(target.re), num(target.im), num(rel)]);
            }
        }
    }
    if worst >= cfg.tolerance.transport {
        failures.push(format!("pointwise transport error {worst:e} >= {:e}", cfg.tolerance.transport));
    }
    Ok(Report {
        artifacts: vec![Artifact { name: "gcst.csv".into(), contents: csv.text }],
        summary: vec![format!("composition exact over {} times; max pointwise error {worst:e}", ts.len())],
        failures,
    })
}

fn write_artifacts(dir: &Path, report: &Report) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for a in &report.artifacts {
        std::fs::write(dir.join(&a.name), &a.contents)?;
    }
    Ok(())
}

/// Parses flags and configuration, runs the driver, writes artifacts and
/// returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            if report.failures.is_empty() {
                0
            } else {
                for f in &report.failures {
                    eprintln!("FAIL {f}");
                }
                1
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let hash = config_hash(&text, cfg.seed);
    let report = run(cli.command, &cfg, &hash)?;
    write_artifacts(&cli.out, &report)?;
    Ok(report)
}
