//! Distribution maps: weakly measurable families of functionals encoded as
//! M x N pairing matrices, with pairing[j][n] = <e_n | omega_{x_j}>.
//!
//! Rows index grid nodes (the functionals), columns index basis test
//! functions. The pairing is linear in the test function and
//! conjugate-linear in the functional; the whole crate sticks to that one
//! convention. Built-in kernels use closed forms (the Fourier
//! eigenrelation of the Hermite basis and the Hermite ODE) so the main
//! path carries a single discretization error; direct quadrature of the
//! kernels survives only as a test oracle.

use crate::numerics::ComplexMatrix;
use crate::opcalc::OperatorMatrix;
use crate::quadrature::{make_grid, GridKind, NodeFunction, QuadratureError, QuadratureGrid};
use crate::testspace::{evaluate_basis, gram_defect, CoeffVector, TestSpace};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Gram-defect ceiling for a grid to count as adequate for a space.
pub const GRAM_GATE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("pairing matrix contains a non-finite entry")]
    NonFinite,
    #[error("coefficient vector belongs to a different space")]
    SpaceMismatch,
    #[error("node function or operand belongs to a different grid")]
    GridMismatch,
    #[error("grid inadequate for the space: gram defect {defect:.3e} exceeds {gate:.1e}")]
    InadequateGrid { defect: f64, gate: f64 },
    #[error("malformed pairing CSV: {0}")]
    CsvFormat(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinKind {
    Fourier,
    Delta,
    WeightedFourier,
}

impl BuiltinKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BuiltinKind::Fourier => "fourier",
            BuiltinKind::Delta => "delta",
            BuiltinKind::WeightedFourier => "weighted_fourier",
        }
    }

    /// Node count of the default square grid: N nodes for an N-dimensional
    /// space. Exact for the fourier/delta frame-operator integrands; the
    /// weighted kernel picks up a small quadrature error that moves its
    /// bounds well within their classification margins.
    pub fn auto_grid_nodes(&self, n: usize) -> usize {
        n.max(2)
    }
}

/// The default grid for a builtin kernel on an N-dimensional space.
pub fn auto_grid(space: &TestSpace, kind: BuiltinKind) -> Result<QuadratureGrid, QuadratureError> {
    make_grid(
        GridKind::GaussHermiteLebesgue,
        kind.auto_grid_nodes(space.dim()),
        0.0,
        0.0,
    )
}

/// A weakly measurable map sampled on a grid: label, grid (M nodes),
/// space (dim N) and the M x N pairing matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionMap {
    label: String,
    grid: QuadratureGrid,
    space: TestSpace,
    pairing: ComplexMatrix,
}

impl DistributionMap {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn space(&self) -> TestSpace {
        self.space
    }

    pub fn pairing(&self) -> &ComplexMatrix {
        &self.pairing
    }

    pub fn nodes(&self) -> usize {
        self.grid.len()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// diag(sqrt(w)) * pairing: the matrix whose singular values carry the
    /// frame-theoretic content.
    pub fn weighted_pairing(&self) -> ComplexMatrix {
        let w = self.grid.weights();
        ComplexMatrix::from_fn(self.nodes(), self.dim(), |j, n| {
            self.pairing[(j, n)] * w[j].sqrt()
        })
    }

    /// Same space and same grid.
    pub fn compatible_with(&self, other: &Self) -> bool {
        self.space == other.space && self.grid == other.grid
    }

    /// Copy with one pairing row zeroed; degrades the map on purpose.
    pub fn with_zeroed_row(&self, row: usize) -> Result<Self, MapError> {
        if row >= self.nodes() {
            return Err(MapError::DimensionMismatch(format!(
                "row {row} out of range for {} nodes",
                self.nodes()
            )));
        }
        let pairing = ComplexMatrix::from_fn(self.nodes(), self.dim(), |j, n| {
            if j == row {
                Complex64::new(0.0, 0.0)
            } else {
                self.pairing[(j, n)]
            }
        });
        Ok(Self {
            label: format!("{}[row {} zeroed]", self.label, row),
            grid: self.grid.clone(),
            space: self.space,
            pairing,
        })
    }
}

fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Builds one of the three worked kernels on the given grid.
///
/// Closed forms, with h_n the Hermite functions sampled at node x:
/// - fourier: i^n h_n(x)
/// - delta: h_n(x)
/// - weighted_fourier: i^n (2n + 2 - x^2) h_n(x)
///
/// The grid must be adequate for the space (gram defect below 1e-6).
pub fn builtin_map(
    kind: BuiltinKind,
    space: &TestSpace,
    grid: &QuadratureGrid,
) -> Result<DistributionMap, MapError> {
    let defect = gram_defect(space, grid);
    if defect > GRAM_GATE_TOL {
        return Err(MapError::InadequateGrid {
            defect,
            gate: GRAM_GATE_TOL,
        });
    }
    let e = evaluate_basis(space, grid.nodes());
    let nodes = grid.nodes();
    let pairing = ComplexMatrix::from_fn(grid.len(), space.dim(), |j, n| {
        let h = e.get(j, n);
        match kind {
            BuiltinKind::Delta => Complex64::new(h, 0.0),
            BuiltinKind::Fourier => i_pow(n) * h,
            BuiltinKind::WeightedFourier => {
                let x = nodes[j];
                i_pow(n) * ((2.0 * n as f64 + 2.0 - x * x) * h)
            }
        }
    });
    Ok(DistributionMap {
        label: kind.as_str().to_string(),
        grid: grid.clone(),
        space: *space,
        pairing,
    })
}

/// Wraps a user-supplied pairing matrix.
pub fn map_from_samples(
    label: impl Into<String>,
    space: &TestSpace,
    grid: &QuadratureGrid,
    pairing: ComplexMatrix,
) -> Result<DistributionMap, MapError> {
    if pairing.rows() != grid.len() || pairing.cols() != space.dim() {
        return Err(MapError::DimensionMismatch(format!(
            "pairing is {}x{}, expected {}x{}",
            pairing.rows(),
            pairing.cols(),
            grid.len(),
            space.dim()
        )));
    }
    if pairing.check_finite().is_err() {
        return Err(MapError::NonFinite);
    }
    Ok(DistributionMap {
        label: label.into(),
        grid: grid.clone(),
        space: *space,
        pairing,
    })
}

/// The analysis operator: f maps to the coefficient function
/// x_j -> <f | omega_{x_j}>, i.e. values = pairing * coords.
pub fn analysis(map: &DistributionMap, f: &CoeffVector) -> Result<NodeFunction, MapError> {
    if f.space() != map.space {
        return Err(MapError::SpaceMismatch);
    }
    let values = map
        .pairing
        .matvec(f.coords())
        .map_err(|e| MapError::DimensionMismatch(e.to_string()))?;
    NodeFunction::new(&map.grid, values).map_err(|_| MapError::GridMismatch)
}

/// The synthesis operator: a coefficient function maps back into the
/// space, coords = pairing^H * diag(w) * values. Adjoint of analysis under
/// the weighted L2 pairing on the grid.
pub fn synthesis(map: &DistributionMap, xi: &NodeFunction) -> Result<CoeffVector, MapError> {
    if xi.grid() != &map.grid {
        return Err(MapError::GridMismatch);
    }
    let w = map.grid.weights();
    let n = map.dim();
    let mut coords = vec![Complex64::new(0.0, 0.0); n];
    for (j, v) in xi.values().iter().enumerate() {
        let wv = v * w[j];
        for (k, c) in coords.iter_mut().enumerate() {
            *c += map.pairing[(j, k)].conj() * wv;
        }
    }
    CoeffVector::new(map.space, coords).map_err(|_| MapError::SpaceMismatch)
}

/// Transforms the map through an operator: the new pairing is
/// pairing * m_dag, where m_dag is the matrix of the transforming
/// operator's adjoint on the space.
pub fn transform_map(
    map: &DistributionMap,
    m_dag: &OperatorMatrix,
) -> Result<DistributionMap, MapError> {
    if m_dag.space() != map.space {
        return Err(MapError::DimensionMismatch(format!(
            "operator on a {}-dimensional space applied to a map over {} dimensions",
            m_dag.space().dim(),
            map.dim()
        )));
    }
    let pairing = map
        .pairing
        .mul(m_dag.entries())
        .map_err(|e| MapError::DimensionMismatch(e.to_string()))?;
    Ok(DistributionMap {
        label: format!("transform({})", map.label),
        grid: map.grid.clone(),
        space: map.space,
        pairing,
    })
}

// ---------------------------------------------------------------------------
// CSV import/export
//
// Header line `# rows=M cols=N label=<text>`, then M lines of N
// comma-separated re+imi entries. 17 significant digits, which round-trips
// f64 exactly.

pub fn format_f64(x: f64) -> String {
    // normalize -0.0 so reports are byte-stable
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn format_complex(z: Complex64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", format_f64(z.re), sign, format_f64(im.abs()))
}

pub fn parse_complex(s: &str) -> Result<Complex64, MapError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(MapError::CsvFormat("empty entry".into()));
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last +/- that is not an exponent sign and not leading
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        let k = split.ok_or_else(|| MapError::CsvFormat(format!("no imaginary sign in '{s}'")))?;
        let re: f64 = body[..k]
            .parse()
            .map_err(|_| MapError::CsvFormat(format!("bad real part in '{s}'")))?;
        let sign = if bytes[k] as char == '-' { -1.0 } else { 1.0 };
        let im: f64 = body[k + 1..]
            .parse()
            .map_err(|_| MapError::CsvFormat(format!("bad imaginary part in '{s}'")))?;
        Ok(Complex64::new(re, sign * im))
    } else {
        let re: f64 = s
            .parse()
            .map_err(|_| MapError::CsvFormat(format!("bad real entry '{s}'")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Serializes a labeled complex matrix in the pairing CSV format.
pub fn matrix_to_csv(label: &str, m: &ComplexMatrix) -> String {
    let mut out = format!("# rows={} cols={} label={}\n", m.rows(), m.cols(), label);
    for i in 0..m.rows() {
        let line: Vec<String> = (0..m.cols()).map(|j| format_complex(m[(i, j)])).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Parses text in the pairing CSV format back into a label and a matrix.
pub fn matrix_from_csv(text: &str) -> Result<(String, ComplexMatrix), MapError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| MapError::CsvFormat("missing header".into()))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| MapError::CsvFormat("header must start with '#'".into()))?
        .trim();
    let rows_part = header
        .strip_prefix("rows=")
        .ok_or_else(|| MapError::CsvFormat("header missing rows=".into()))?;
    let (rows_str, rest) = rows_part
        .split_once(' ')
        .ok_or_else(|| MapError::CsvFormat("header missing cols=".into()))?;
    let cols_part = rest
        .trim_start()
        .strip_prefix("cols=")
        .ok_or_else(|| MapError::CsvFormat("header missing cols=".into()))?;
    let (cols_str, rest) = cols_part
        .split_once(' ')
        .ok_or_else(|| MapError::CsvFormat("header missing label=".into()))?;
    let label = rest
        .trim_start()
        .strip_prefix("label=")
        .ok_or_else(|| MapError::CsvFormat("header missing label=".into()))?
        .to_string();
    let rows: usize = rows_str
        .parse()
        .map_err(|_| MapError::CsvFormat("bad rows count".into()))?;
    let cols: usize = cols_str
        .parse()
        .map_err(|_| MapError::CsvFormat("bad cols count".into()))?;

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0usize;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let entries: Vec<&str> = line.split(',').collect();
        if entries.len() != cols {
            return Err(MapError::CsvFormat(format!(
                "row {} has {} entries, expected {}",
                seen_rows + 1,
                entries.len(),
                cols
            )));
        }
        for e in entries {
            data.push(parse_complex(e)?);
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(MapError::CsvFormat(format!(
            "expected {rows} rows, found {seen_rows}"
        )));
    }
    let m = ComplexMatrix::new(rows, cols, data).map_err(|_| MapError::NonFinite)?;
    Ok((label, m))
}

impl DistributionMap {
    pub fn to_csv(&self) -> String {
        matrix_to_csv(&self.label, &self.pairing)
    }

    pub fn from_csv(
        space: &TestSpace,
        grid: &QuadratureGrid,
        text: &str,
    ) -> Result<Self, MapError> {
        let (label, pairing) = matrix_from_csv(text)?;
        map_from_samples(label, space, grid, pairing)
    }
}
