//! Batch scenarios: a JSON file declares a space, a grid, maps and a task
//! list; running one produces a machine-readable report plus per-task CSV
//! side files. Reports are byte-identical across runs except for the
//! timing fields.

pub mod expr;

use crate::distmap::{
    builtin_map, map_from_samples, matrix_from_csv, transform_map, BuiltinKind, DistributionMap,
    MapError,
};
use crate::frameops::{
    canonical_dual, classify, frame_bounds, frame_operator, frame_operator_oracle,
    reconstruction_residual, unboundedness_sweep, ClassifyTolerances, FrameError,
};
use crate::numerics::{general_eigenvalues, ComplexMatrix};
use crate::opcalc::{
    atomic_certificates, atomic_map, diagonal_operator, eigen_residual, riesz_multiplier,
    spectrum_distance, OperatorMatrix, SymbolSamples,
};
use crate::pairs::{compatibility_report, PairTolerances, PairsError};
use crate::quadrature::{make_grid, GridKind, QuadratureError, QuadratureGrid};
use crate::report::JsonValue;
use crate::testspace::{hermite_space, TestSpace};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scenario invalid: {0}")]
    Validation(String),
    #[error("task {index} references unknown map label '{label}'")]
    UnknownMapLabel { index: usize, label: String },
    #[error("task {index} ({kind}) failed: {message}")]
    TaskFailure {
        index: usize,
        kind: String,
        message: String,
    },
}

// ---------------------------------------------------------------------------
// schema

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub space: SpaceSpec,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub maps: Vec<MapDecl>,
    pub tasks: Vec<TaskSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub basis: String,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub kind: GridKind,
    pub m: usize,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDecl {
    pub label: String,
    pub source: MapSource,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSource {
    Builtin(BuiltinKind),
    Csv(String),
    Transform { of: String, operator_csv: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    Classify {
        map: String,
    },
    Dual {
        map: String,
        store_as: String,
    },
    Reconstruct {
        omega: String,
        theta: String,
    },
    Multiplier {
        zeta: String,
        operator_csv: String,
        symbol: String,
    },
    Eigen {
        zeta: String,
        symbol: String,
    },
    Atomic {
        zeta: String,
        #[serde(default)]
        operator_csv: Option<String>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Pair {
        omega: String,
        theta: String,
    },
    ZeroRow {
        of: String,
        row: usize,
        store_as: String,
    },
    Sweep {
        map: BuiltinKind,
        sizes: Vec<usize>,
    },
    OracleCheck {
        count: usize,
        seed: u64,
        max_dim: usize,
    },
}

impl TaskSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskSpec::Classify { .. } => "classify",
            TaskSpec::Dual { .. } => "dual",
            TaskSpec::Reconstruct { .. } => "reconstruct",
            TaskSpec::Multiplier { .. } => "multiplier",
            TaskSpec::Eigen { .. } => "eigen",
            TaskSpec::Atomic { .. } => "atomic",
            TaskSpec::Pair { .. } => "pair",
            TaskSpec::ZeroRow { .. } => "zero_row",
            TaskSpec::Sweep { .. } => "sweep",
            TaskSpec::OracleCheck { .. } => "oracle_check",
        }
    }

    fn referenced_labels(&self) -> Vec<&str> {
        match self {
            TaskSpec::Classify { map } => vec![map],
            TaskSpec::Dual { map, .. } => vec![map],
            TaskSpec::Reconstruct { omega, theta } => vec![omega, theta],
            TaskSpec::Multiplier { zeta, .. } => vec![zeta],
            TaskSpec::Eigen { zeta, .. } => vec![zeta],
            TaskSpec::Atomic { zeta, .. } => vec![zeta],
            TaskSpec::Pair { omega, theta } => vec![omega, theta],
            TaskSpec::ZeroRow { of, .. } => vec![of],
            TaskSpec::Sweep { .. } | TaskSpec::OracleCheck { .. } => vec![],
        }
    }

    fn stored_label(&self) -> Option<&str> {
        match self {
            TaskSpec::Dual { store_as, .. } | TaskSpec::ZeroRow { store_as, .. } => {
                Some(store_as)
            }
            _ => None,
        }
    }

    fn symbol(&self) -> Option<&str> {
        match self {
            TaskSpec::Multiplier { symbol, .. } | TaskSpec::Eigen { symbol, .. } => Some(symbol),
            _ => None,
        }
    }
}

/// Tolerance overrides, merged over the defaults.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub parseval_tol: f64,
    pub rank_tol: f64,
    pub frame_floor: f64,
    pub iso_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let c = ClassifyTolerances::default();
        let p = PairTolerances::default();
        Self {
            parseval_tol: c.parseval_tol,
            rank_tol: c.rank_tol,
            frame_floor: c.frame_floor,
            iso_floor: p.iso_floor,
        }
    }
}

impl Tolerances {
    fn classify(&self) -> ClassifyTolerances {
        ClassifyTolerances {
            parseval_tol: self.parseval_tol,
            rank_tol: self.rank_tol,
            frame_floor: self.frame_floor,
        }
    }

    fn pair(&self) -> PairTolerances {
        PairTolerances {
            iso_floor: self.iso_floor,
            rank_tol: self.rank_tol,
        }
    }
}

// ---------------------------------------------------------------------------
// report

#[derive(Debug, Clone)]
pub struct TaskOutcome {
    pub index: usize,
    pub kind: String,
    pub timing_ms: i64,
    pub result: JsonValue,
    pub side_files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub version: String,
    pub report_path: PathBuf,
    pub tasks: Vec<TaskOutcome>,
}

impl RunReport {
    pub fn to_json(&self) -> JsonValue {
        JsonValue::object(vec![
            ("scenario", JsonValue::Str(self.scenario.clone())),
            ("version", JsonValue::Str(self.version.clone())),
            (
                "tasks",
                JsonValue::Array(
                    self.tasks
                        .iter()
                        .map(|t| {
                            JsonValue::object(vec![
                                ("index", JsonValue::Int(t.index as i64)),
                                ("kind", JsonValue::Str(t.kind.clone())),
                                ("timing_ms", JsonValue::Int(t.timing_ms)),
                                (
                                    "side_files",
                                    JsonValue::Array(
                                        t.side_files
                                            .iter()
                                            .map(|f| JsonValue::Str(f.clone()))
                                            .collect(),
                                    ),
                                ),
                                ("result", t.result.clone()),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

// ---------------------------------------------------------------------------
// loading and validation

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let scenario: Scenario =
        serde_json::from_str(&text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    validate(&scenario)?;
    Ok(scenario)
}

fn validate(scenario: &Scenario) -> Result<(), ScenarioError> {
    if scenario.space.basis != "hermite" {
        return Err(ScenarioError::Validation(format!(
            "unknown basis '{}', only 'hermite' is available",
            scenario.space.basis
        )));
    }
    if scenario.space.n == 0 {
        return Err(ScenarioError::Validation("space.n must be positive".into()));
    }
    let mut labels: Vec<&str> = Vec::new();
    for decl in &scenario.maps {
        if labels.contains(&decl.label.as_str()) {
            return Err(ScenarioError::Validation(format!(
                "duplicate map label '{}'",
                decl.label
            )));
        }
        if let MapSource::Transform { of, .. } = &decl.source {
            if !labels.contains(&of.as_str()) {
                return Err(ScenarioError::Validation(format!(
                    "map '{}' transforms undeclared label '{}'",
                    decl.label, of
                )));
            }
        }
        labels.push(&decl.label);
    }
    for (index, task) in scenario.tasks.iter().enumerate() {
        for needed in task.referenced_labels() {
            if !labels.contains(&needed) {
                return Err(ScenarioError::UnknownMapLabel {
                    index,
                    label: needed.to_string(),
                });
            }
        }
        if let Some(stored) = task.stored_label() {
            if labels.contains(&stored) {
                return Err(ScenarioError::Validation(format!(
                    "task {index} stores duplicate label '{stored}'"
                )));
            }
            labels.push(stored);
        }
        if let Some(sym) = task.symbol() {
            expr::parse(sym).map_err(|e| {
                ScenarioError::Validation(format!("task {index}: bad symbol '{sym}': {e}"))
            })?;
        }
        if let TaskSpec::Sweep { sizes, .. } = task {
            if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ScenarioError::Validation(format!(
                    "task {index}: sweep sizes must be strictly ascending"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// execution

struct Context {
    space: TestSpace,
    grid: QuadratureGrid,
    maps: BTreeMap<String, DistributionMap>,
    tolerances: Tolerances,
    base_dir: PathBuf,
}

impl Context {
    fn map(&self, index: usize, label: &str) -> Result<&DistributionMap, ScenarioError> {
        self.maps
            .get(label)
            .ok_or_else(|| ScenarioError::UnknownMapLabel {
                index,
                label: label.to_string(),
            })
    }

    fn operator_from_csv(&self, rel: &str) -> Result<OperatorMatrix, String> {
        let path = self.base_dir.join(rel);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read operator csv {}: {e}", path.display()))?;
        let (_, matrix) = matrix_from_csv(&text).map_err(|e| e.to_string())?;
        OperatorMatrix::new(self.space, matrix).map_err(|e| e.to_string())
    }
}

fn scenario_grid(scenario: &Scenario) -> Result<QuadratureGrid, QuadratureError> {
    match &scenario.grid {
        Some(spec) => make_grid(
            spec.kind,
            spec.m,
            spec.a.unwrap_or(0.0),
            spec.b.unwrap_or(0.0),
        ),
        None => {
            // auto: the smallest rule exact for every declared builtin
            let mut nodes = 2.max(scenario.space.n);
            for decl in &scenario.maps {
                if let MapSource::Builtin(kind) = &decl.source {
                    nodes = nodes.max(kind.auto_grid_nodes(scenario.space.n));
                }
            }
            make_grid(GridKind::GaussHermiteLebesgue, nodes, 0.0, 0.0)
        }
    }
}

/// Executes a scenario file and writes `<name>.report.json` plus per-task
/// CSV side files into `out_dir`. Classification outcomes are data, not
/// errors: the run fails only when a task cannot execute at all.
pub fn run_scenario(path: &Path, out_dir: &Path) -> Result<RunReport, ScenarioError> {
    let scenario = load_scenario(path)?;
    std::fs::create_dir_all(out_dir).map_err(|source| ScenarioError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let space = hermite_space(scenario.space.n)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    let grid = scenario_grid(&scenario).map_err(|e| ScenarioError::Validation(e.to_string()))?;
    let base_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();

    let mut ctx = Context {
        space,
        grid,
        maps: BTreeMap::new(),
        tolerances: scenario.tolerances,
        base_dir,
    };

    // declared maps, in order
    for (k, decl) in scenario.maps.iter().enumerate() {
        let map = build_map(&ctx, decl).map_err(|message| ScenarioError::TaskFailure {
            index: k,
            kind: format!("map '{}'", decl.label),
            message,
        })?;
        ctx.maps.insert(decl.label.clone(), map);
    }

    let mut outcomes = Vec::with_capacity(scenario.tasks.len());
    for (index, task) in scenario.tasks.iter().enumerate() {
        let started = std::time::Instant::now();
        let (result, side_files) =
            run_task(&mut ctx, index, task, &scenario.name, out_dir).map_err(|e| match e {
                TaskError::Unknown(label) => ScenarioError::UnknownMapLabel { index, label },
                TaskError::Failed(message) => ScenarioError::TaskFailure {
                    index,
                    kind: task.kind().to_string(),
                    message,
                },
            })?;
        outcomes.push(TaskOutcome {
            index,
            kind: task.kind().to_string(),
            timing_ms: started.elapsed().as_millis() as i64,
            result,
            side_files,
        });
    }

    let report = RunReport {
        scenario: scenario.name.clone(),
        version: crate::VERSION.to_string(),
        report_path: out_dir.join(format!("{}.report.json", scenario.name)),
        tasks: outcomes,
    };
    std::fs::write(&report.report_path, report.to_json().render()).map_err(|source| {
        ScenarioError::Io {
            path: report.report_path.clone(),
            source,
        }
    })?;
    Ok(report)
}

fn build_map(ctx: &Context, decl: &MapDecl) -> Result<DistributionMap, String> {
    let map = match &decl.source {
        MapSource::Builtin(kind) => {
            builtin_map(*kind, &ctx.space, &ctx.grid).map_err(|e| e.to_string())?
        }
        MapSource::Csv(rel) => {
            let path = ctx.base_dir.join(rel);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read map csv {}: {e}", path.display()))?;
            DistributionMap::from_csv(&ctx.space, &ctx.grid, &text).map_err(|e| e.to_string())?
        }
        MapSource::Transform { of, operator_csv } => {
            let base = ctx
                .maps
                .get(of)
                .ok_or_else(|| format!("undeclared map '{of}'"))?;
            let op = ctx.operator_from_csv(operator_csv)?;
            transform_map(base, &op).map_err(|e: MapError| e.to_string())?
        }
    };
    // re-label with the declared name
    map_from_samples(decl.label.clone(), &ctx.space, &ctx.grid, map.pairing().clone())
        .map_err(|e| e.to_string())
}

enum TaskError {
    Unknown(String),
    Failed(String),
}

impl From<String> for TaskError {
    fn from(s: String) -> Self {
        TaskError::Failed(s)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> TaskError {
    TaskError::Failed(e.to_string())
}

fn write_side_file(
    out_dir: &Path,
    name: &str,
    content: String,
    side_files: &mut Vec<String>,
) -> Result<(), TaskError> {
    let path = out_dir.join(name);
    std::fs::write(&path, content).map_err(|e| TaskError::Failed(e.to_string()))?;
    side_files.push(name.to_string());
    Ok(())
}

fn run_task(
    ctx: &mut Context,
    index: usize,
    task: &TaskSpec,
    scenario_name: &str,
    out_dir: &Path,
) -> Result<(JsonValue, Vec<String>), TaskError> {
    use crate::distmap::format_f64;
    let mut side_files = Vec::new();
    let result = match task {
        TaskSpec::Classify { map } => {
            let m = ctx
                .map(index, map)
                .map_err(|_| TaskError::Unknown(map.clone()))?;
            let report = classify(m, &ctx.tolerances.classify()).map_err(fail)?;
            let mut csv = String::from("index,singular_value\n");
            for (k, s) in report.singulars.iter().enumerate() {
                csv.push_str(&format!("{k},{}\n", format_f64(*s)));
            }
            write_side_file(
                out_dir,
                &format!("{scenario_name}.task{index}.singulars.csv"),
                csv,
                &mut side_files,
            )?;
            report.to_json()
        }
        TaskSpec::Dual { map, store_as } => {
            let m = ctx
                .map(index, map)
                .map_err(|_| TaskError::Unknown(map.clone()))?
                .clone();
            let dual = canonical_dual(&m).map_err(fail)?;
            let bounds = frame_bounds(&dual);
            let residual = reconstruction_residual(&m, &dual).map_err(fail)?;
            let json = JsonValue::object(vec![
                ("map", JsonValue::Str(map.clone())),
                ("store_as", JsonValue::Str(store_as.clone())),
                (
                    "bounds",
                    JsonValue::object(vec![
                        ("A", JsonValue::Float(bounds.lower)),
                        ("B", JsonValue::Float(bounds.upper)),
                    ]),
                ),
                ("reconstruction_residual", JsonValue::Float(residual)),
            ]);
            ctx.maps.insert(store_as.clone(), dual);
            json
        }
        TaskSpec::Reconstruct { omega, theta } => {
            let om = ctx
                .map(index, omega)
                .map_err(|_| TaskError::Unknown(omega.clone()))?;
            let th = ctx
                .map(index, theta)
                .map_err(|_| TaskError::Unknown(theta.clone()))?;
            let residual = reconstruction_residual(om, th).map_err(fail)?;
            JsonValue::object(vec![
                ("omega", JsonValue::Str(omega.clone())),
                ("theta", JsonValue::Str(theta.clone())),
                ("residual", JsonValue::Float(residual)),
            ])
        }
        TaskSpec::Multiplier {
            zeta,
            operator_csv,
            symbol,
        } => {
            let z = ctx
                .map(index, zeta)
                .map_err(|_| TaskError::Unknown(zeta.clone()))?;
            let w_op = ctx.operator_from_csv(operator_csv)?;
            let alpha_expr = expr::parse(symbol).map_err(fail)?;
            let alpha = SymbolSamples::from_real_fn(z.grid(), |x| alpha_expr.eval(x));
            let w_dag = w_op.dagger();
            let omega = transform_map(z, &w_dag).map_err(fail)?;
            let theta = canonical_dual(&omega).map_err(fail)?;
            let h = riesz_multiplier(&omega, &theta, &alpha).map_err(fail)?;
            let a = diagonal_operator(z, &alpha).map_err(fail)?;
            let distance = spectrum_distance(&h, &a).map_err(fail)?;

            let mut eig_h = general_eigenvalues(h.entries()).map_err(fail)?;
            let mut eig_a = general_eigenvalues(a.entries()).map_err(fail)?;
            let by_parts = |u: &Complex64, v: &Complex64| {
                u.re.partial_cmp(&v.re)
                    .unwrap()
                    .then(u.im.partial_cmp(&v.im).unwrap())
            };
            eig_h.sort_by(by_parts);
            eig_a.sort_by(by_parts);
            let mut csv = String::from("index,multiplier_re,multiplier_im,diagonal_re,diagonal_im\n");
            for (k, (hh, aa)) in eig_h.iter().zip(&eig_a).enumerate() {
                csv.push_str(&format!(
                    "{k},{},{},{},{}\n",
                    format_f64(hh.re),
                    format_f64(hh.im),
                    format_f64(aa.re),
                    format_f64(aa.im)
                ));
            }
            write_side_file(
                out_dir,
                &format!("{scenario_name}.task{index}.spectra.csv"),
                csv,
                &mut side_files,
            )?;
            JsonValue::object(vec![
                ("zeta", JsonValue::Str(zeta.clone())),
                ("symbol", JsonValue::Str(symbol.clone())),
                ("spectrum_distance", JsonValue::Float(distance)),
                ("max_abs_symbol", JsonValue::Float(alpha.max_abs())),
            ])
        }
        TaskSpec::Eigen { zeta, symbol } => {
            let z = ctx
                .map(index, zeta)
                .map_err(|_| TaskError::Unknown(zeta.clone()))?;
            let alpha_expr = expr::parse(symbol).map_err(fail)?;
            let alpha = SymbolSamples::from_real_fn(z.grid(), |x| alpha_expr.eval(x));
            let a = diagonal_operator(z, &alpha).map_err(fail)?;
            let residual = eigen_residual(z, &a, &alpha).map_err(fail)?;
            JsonValue::object(vec![
                ("zeta", JsonValue::Str(zeta.clone())),
                ("symbol", JsonValue::Str(symbol.clone())),
                ("residual", JsonValue::Float(residual)),
            ])
        }
        TaskSpec::Atomic {
            zeta,
            operator_csv,
            seed,
        } => {
            let z = ctx
                .map(index, zeta)
                .map_err(|_| TaskError::Unknown(zeta.clone()))?;
            let n = ctx.space.dim();
            let a = match (operator_csv, seed) {
                (Some(rel), _) => ctx.operator_from_csv(rel)?,
                (None, Some(seed)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let entries = ComplexMatrix::from_fn(n, n, |_, _| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    });
                    OperatorMatrix::new(ctx.space, entries).map_err(fail)?
                }
                (None, None) => {
                    return Err(TaskError::Failed(
                        "atomic task needs operator_csv or seed".into(),
                    ))
                }
            };
            let omega = atomic_map(z, &a).map_err(fail)?;
            let (bessel, decomposition) =
                atomic_certificates(z, &a, &omega, 10, seed.unwrap_or(0) ^ 0x5eed).map_err(fail)?;
            let bounds = frame_bounds(&omega);
            JsonValue::object(vec![
                ("zeta", JsonValue::Str(zeta.clone())),
                ("bessel_identity_error", JsonValue::Float(bessel)),
                ("decomposition_error", JsonValue::Float(decomposition)),
                (
                    "bounds",
                    JsonValue::object(vec![
                        ("A", JsonValue::Float(bounds.lower)),
                        ("B", JsonValue::Float(bounds.upper)),
                    ]),
                ),
            ])
        }
        TaskSpec::Pair { omega, theta } => {
            let om = ctx
                .map(index, omega)
                .map_err(|_| TaskError::Unknown(omega.clone()))?;
            let th = ctx
                .map(index, theta)
                .map_err(|_| TaskError::Unknown(theta.clone()))?;
            let report = compatibility_report(th, om, &ctx.tolerances.pair())
                .map_err(|e: PairsError| fail(e))?;
            report.to_json()
        }
        TaskSpec::ZeroRow { of, row, store_as } => {
            let m = ctx
                .map(index, of)
                .map_err(|_| TaskError::Unknown(of.clone()))?
                .clone();
            let degraded = m.with_zeroed_row(*row).map_err(fail)?;
            ctx.maps.insert(store_as.clone(), degraded);
            JsonValue::object(vec![
                ("of", JsonValue::Str(of.clone())),
                ("row", JsonValue::Int(*row as i64)),
                ("store_as", JsonValue::Str(store_as.clone())),
            ])
        }
        TaskSpec::Sweep { map, sizes } => {
            let report = unboundedness_sweep(*map, sizes).map_err(|e: FrameError| fail(e))?;
            let mut csv = String::from("N,A,B\n");
            for row in &report.rows {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    row.n,
                    format_f64(row.lower),
                    format_f64(row.upper)
                ));
            }
            write_side_file(
                out_dir,
                &format!("{scenario_name}.task{index}.sweep.csv"),
                csv,
                &mut side_files,
            )?;
            report.to_json()
        }
        TaskSpec::OracleCheck {
            count,
            seed,
            max_dim,
        } => {
            let (frame_dev, adjoint_dev) = oracle_check(*count, *seed, *max_dim).map_err(fail)?;
            JsonValue::object(vec![
                ("count", JsonValue::Int(*count as i64)),
                ("seed", JsonValue::Int(*seed as i64)),
                ("max_dim", JsonValue::Int(*max_dim as i64)),
                ("max_frame_operator_deviation", JsonValue::Float(frame_dev)),
                ("max_adjoint_identity_error", JsonValue::Float(adjoint_dev)),
            ])
        }
    };
    Ok((result, side_files))
}

/// Random-map cross-validation: the matrix-algebra frame operator against
/// the explicit double-sum oracle, and the synthesis/analysis adjoint
/// identity. Returns the worst deviations seen.
pub fn oracle_check(count: usize, seed: u64, max_dim: usize) -> Result<(f64, f64), String> {
    use crate::distmap::{analysis, synthesis};
    use crate::quadrature::NodeFunction;
    use crate::testspace::CoeffVector;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_dim = max_dim.max(2);
    let mut worst_frame = 0.0f64;
    let mut worst_adjoint = 0.0f64;
    for _ in 0..count {
        let m = rng.random_range(2..=max_dim);
        let n = rng.random_range(1..=max_dim);
        let space = hermite_space(n).map_err(|e| e.to_string())?;
        let grid =
            make_grid(GridKind::Trapezoid, m, -1.0, 1.0).map_err(|e| e.to_string())?;
        let pairing = ComplexMatrix::from_fn(m, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let map =
            map_from_samples("oracle", &space, &grid, pairing).map_err(|e| e.to_string())?;

        let s = frame_operator(&map);
        let oracle = frame_operator_oracle(&map);
        let dev = s.sub(&oracle).map_err(|e| e.to_string())?.norm_max();
        worst_frame = worst_frame.max(dev);

        let xi = NodeFunction::new(
            &grid,
            (0..m)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let f = CoeffVector::new(
            space,
            (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let lhs = synthesis(&map, &xi)
            .map_err(|e| e.to_string())?
            .pairing(&f);
        let af = analysis(&map, &f).map_err(|e| e.to_string())?;
        let rhs: Complex64 = grid
            .weights()
            .iter()
            .zip(xi.values())
            .zip(af.values())
            .map(|((w, x), a)| x * a.conj() * *w)
            .sum();
        worst_adjoint = worst_adjoint.max((lhs - rhs).norm());
    }
    Ok((worst_frame, worst_adjoint))
}
