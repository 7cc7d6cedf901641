//! Data model, CSV ingestion, min-max normalization, splitting, and
//! synthetic-data generation.
//!
//! A sample couples six inputs (aspect ratio, width, hydraulic diameter,
//! length, length-to-diameter ratio, Peclet number) with the average
//! Nusselt number target. The CSV schema is fixed:
//!
//! ```text
//! alpha,W_mm,Dh_mm,L_mm,L_over_D,Pe,Nu_ave
//! ```
//!
//! comma-separated, `.` decimal, UTF-8, LF line endings.

pub mod stats;

use std::fmt;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::RandomStream;
use crate::physics::{self, PhysicsParams};

/// Exact CSV header for dataset files.
pub const CSV_HEADER: &str = "alpha,W_mm,Dh_mm,L_mm,L_over_D,Pe,Nu_ave";

/// Names of the seven variables in field order.
pub const VARIABLE_NAMES: [&str; 7] = ["alpha", "W_mm", "Dh_mm", "L_mm", "L_over_D", "Pe", "Nu_ave"];

/// Number of model input features (all variables except the target).
pub const FEATURE_COUNT: usize = 6;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("non-positive value in row {row}, column {column}")]
    NonPositiveValue { row: usize, column: &'static str },
    #[error("row {row}: L/D = {stated} is inconsistent with L/Dh = {derived}")]
    InconsistentLOverD { row: usize, stated: f64, derived: f64 },
    #[error("feature {0} is degenerate (max equals min)")]
    DegenerateFeature(&'static str),
    #[error("bad partition spec: {0}")]
    BadPartitionSpec(String),
    #[error("bad generation spec: {0}")]
    BadGenerationSpec(String),
    #[error("bad bandwidth: {0}")]
    BadBandwidth(String),
    #[error("dataset is empty")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One CFD (or synthetic) sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    /// Aspect ratio H/W.
    pub alpha: f64,
    /// Heat-sink width in mm.
    pub w: f64,
    /// Hydraulic diameter in mm.
    pub dh: f64,
    /// Heat-sink length in mm.
    pub l: f64,
    /// Length over hydraulic diameter.
    pub l_over_d: f64,
    /// Peclet number.
    pub pe: f64,
    /// Average Nusselt number (target).
    pub nu_ave: f64,
}

impl DataPoint {
    /// All seven variables in schema order.
    pub fn variables(&self) -> [f64; 7] {
        [
            self.alpha,
            self.w,
            self.dh,
            self.l,
            self.l_over_d,
            self.pe,
            self.nu_ave,
        ]
    }

    /// The six model inputs in schema order.
    pub fn features(&self) -> [f64; FEATURE_COUNT] {
        [self.alpha, self.w, self.dh, self.l, self.l_over_d, self.pe]
    }
}

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    CfdCsv,
    SyntheticNa,
    SyntheticWater,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Provenance::CfdCsv => "cfd-csv",
            Provenance::SyntheticNa => "synthetic-na",
            Provenance::SyntheticWater => "synthetic-water",
        };
        f.write_str(tag)
    }
}

/// Which correlation variant backs a synthetic dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fluid {
    Na,
    Water,
}

/// Ordered collection of samples. Order is preserved and meaningful for
/// fold assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub points: Vec<DataPoint>,
    pub provenance: Provenance,
    pub seed: Option<u64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// New dataset holding the points at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            points: indices.iter().map(|&i| self.points[i]).collect(),
            provenance: self.provenance,
            seed: self.seed,
        }
    }

    pub fn targets(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.nu_ave).collect()
    }
}

/// Reads a dataset from a CSV file with the fixed schema. With `check`
/// enabled, each row's stated L/D must match L/Dh within 1e-6 relative.
pub fn ingest_csv(path: &Path, check: bool) -> Result<Dataset, DataError> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, check)
}

/// Parses CSV text with the fixed schema (see [`ingest_csv`]).
pub fn parse_csv(text: &str, check: bool) -> Result<Dataset, DataError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| DataError::SchemaMismatch("empty file".into()))?;
    if header.trim_end() != CSV_HEADER {
        return Err(DataError::SchemaMismatch(format!(
            "expected header `{CSV_HEADER}`, got `{header}`"
        )));
    }
    let mut points = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1; // 1-based data row index
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(DataError::SchemaMismatch(format!(
                "row {row}: expected 7 fields, got {}",
                fields.len()
            )));
        }
        let mut values = [0.0_f64; 7];
        for (k, raw) in fields.iter().enumerate() {
            values[k] = raw.trim().parse::<f64>().map_err(|_| {
                DataError::SchemaMismatch(format!(
                    "row {row}: cannot parse `{raw}` as a number in column {}",
                    VARIABLE_NAMES[k]
                ))
            })?;
        }
        for (k, v) in values.iter().enumerate() {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(DataError::NonPositiveValue {
                    row,
                    column: VARIABLE_NAMES[k],
                });
            }
        }
        let point = DataPoint {
            alpha: values[0],
            w: values[1],
            dh: values[2],
            l: values[3],
            l_over_d: values[4],
            pe: values[5],
            nu_ave: values[6],
        };
        if check {
            let derived = point.l / point.dh;
            if (point.l_over_d - derived).abs() > 1e-6 * point.l_over_d.abs() {
                return Err(DataError::InconsistentLOverD {
                    row,
                    stated: point.l_over_d,
                    derived,
                });
            }
        }
        points.push(point);
    }
    Ok(Dataset {
        points,
        provenance: Provenance::CfdCsv,
        seed: None,
    })
}

/// Writes a dataset with the fixed schema. Values round-trip exactly
/// through [`ingest_csv`].
pub fn write_csv(ds: &Dataset, path: &Path) -> Result<(), DataError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{CSV_HEADER}")?;
    for p in &ds.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.alpha, p.w, p.dh, p.l, p.l_over_d, p.pe, p.nu_ave
        )?;
    }
    Ok(())
}

/// Per-variable min/max fitted on a dataset; maps features to [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub mins: [f64; 7],
    pub maxs: [f64; 7],
}

impl NormalizationParams {
    /// `(x - min) / (max - min)` for variable `index` (schema order).
    pub fn apply(&self, index: usize, x: f64) -> f64 {
        (x - self.mins[index]) / (self.maxs[index] - self.mins[index])
    }

    /// Inverse of [`apply`](Self::apply).
    pub fn invert(&self, index: usize, u: f64) -> f64 {
        self.mins[index] + u * (self.maxs[index] - self.mins[index])
    }

    /// Normalized model inputs for one point.
    pub fn apply_features(&self, p: &DataPoint) -> Vec<f64> {
        p.features()
            .iter()
            .enumerate()
            .map(|(i, &x)| self.apply(i, x))
            .collect()
    }
}

/// Fits min-max normalization on `ds`. Each of the six input features must
/// be non-degenerate; the target's bounds are recorded but unchecked.
pub fn fit_normalizer(ds: &Dataset) -> Result<NormalizationParams, DataError> {
    if ds.is_empty() {
        return Err(DataError::Empty);
    }
    let mut mins = [f64::INFINITY; 7];
    let mut maxs = [f64::NEG_INFINITY; 7];
    for p in &ds.points {
        for (i, v) in p.variables().iter().enumerate() {
            mins[i] = mins[i].min(*v);
            maxs[i] = maxs[i].max(*v);
        }
    }
    for i in 0..FEATURE_COUNT {
        if !(maxs[i] > mins[i]) {
            return Err(DataError::DegenerateFeature(VARIABLE_NAMES[i]));
        }
    }
    Ok(NormalizationParams { mins, maxs })
}

/// Train/eval split specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PartitionMode {
    Holdout { fraction: f64, seed: u64 },
    KFold { k: usize, seed: u64 },
}

/// Splits a dataset into (train indices, eval indices) pairs.
///
/// `KFold` returns `k` pairs with disjoint eval sets covering every index
/// exactly once, sizes differing by at most one. `Holdout` returns a single
/// pair with `round(fraction * n)` eval points.
pub fn partition(ds: &Dataset, mode: PartitionMode) -> Result<Vec<(Vec<usize>, Vec<usize>)>, DataError> {
    let n = ds.len();
    if n == 0 {
        return Err(DataError::Empty);
    }
    match mode {
        PartitionMode::Holdout { fraction, seed } => {
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(DataError::BadPartitionSpec(format!(
                    "holdout fraction must lie in (0,1), got {fraction}"
                )));
            }
            let eval_size = (fraction * n as f64).round() as usize;
            if eval_size == 0 || eval_size >= n {
                return Err(DataError::BadPartitionSpec(format!(
                    "holdout of {n} points with fraction {fraction} leaves an empty split"
                )));
            }
            let mut order: Vec<usize> = (0..n).collect();
            RandomStream::new(seed).shuffle(&mut order);
            let eval: Vec<usize> = order[..eval_size].to_vec();
            let train: Vec<usize> = order[eval_size..].to_vec();
            Ok(vec![(train, eval)])
        }
        PartitionMode::KFold { k, seed } => {
            if k < 2 || k > n {
                return Err(DataError::BadPartitionSpec(format!(
                    "k must satisfy 2 <= k <= {n}, got {k}"
                )));
            }
            let mut order: Vec<usize> = (0..n).collect();
            RandomStream::new(seed).shuffle(&mut order);
            // first n % k folds take one extra point
            let base = n / k;
            let extra = n % k;
            let mut folds: Vec<Vec<usize>> = Vec::with_capacity(k);
            let mut cursor = 0;
            for f in 0..k {
                let size = base + usize::from(f < extra);
                folds.push(order[cursor..cursor + size].to_vec());
                cursor += size;
            }
            Ok((0..k)
                .map(|f| {
                    let eval = folds[f].clone();
                    let train = folds
                        .iter()
                        .enumerate()
                        .filter(|(g, _)| *g != f)
                        .flat_map(|(_, fold)| fold.iter().copied())
                        .collect();
                    (train, eval)
                })
                .collect())
        }
    }
}

/// Draws `n` synthetic samples from the correlation.
///
/// Features are sampled uniformly inside the validated envelope
/// (alpha in [0.143, 1], Dh in [1, 2.33] mm, L/D in [75, 150],
/// Pe in [3.9, 162.8]); length and width follow from
/// `L = (L/D) * Dh` and `W = Dh * (1 + alpha) / (2 alpha)`. The target is
/// the correlation value times `1 + eps` with `eps ~ Normal(0, noise)`.
pub fn synthesize_dataset(
    n: usize,
    params: &PhysicsParams,
    noise: f64,
    fluid: Fluid,
    seed: u64,
) -> Result<Dataset, DataError> {
    if n == 0 {
        return Err(DataError::BadGenerationSpec("n must be at least 1".into()));
    }
    if !(noise >= 0.0) || !noise.is_finite() {
        return Err(DataError::BadGenerationSpec(format!(
            "noise must be a finite non-negative fraction, got {noise}"
        )));
    }
    let effective = match fluid {
        Fluid::Na => *params,
        Fluid::Water => PhysicsParams {
            c0: PhysicsParams::water_analog().c0,
            c1: PhysicsParams::water_analog().c1,
            pe_exp: PhysicsParams::water_analog().pe_exp,
            ..*params
        },
    };
    let mut stream = RandomStream::new(seed);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let alpha = stream.uniform_in(0.143, 1.0);
        let dh = stream.uniform_in(1.0, 2.33);
        let l_over_d = stream.uniform_in(75.0, 150.0);
        let pe = stream.uniform_in(3.9, 162.8);
        let l = l_over_d * dh;
        let w = dh * (1.0 + alpha) / (2.0 * alpha);
        let clean = physics::nu_ave_hat(alpha, l_over_d, pe, &effective)
            .map_err(|e| DataError::BadGenerationSpec(e.to_string()))?;
        let eps = if noise > 0.0 {
            stream.normal(0.0, noise)
        } else {
            0.0
        };
        points.push(DataPoint {
            alpha,
            w,
            dh,
            l,
            l_over_d,
            pe,
            nu_ave: clean * (1.0 + eps),
        });
    }
    Ok(Dataset {
        points,
        provenance: match fluid {
            Fluid::Na => Provenance::SyntheticNa,
            Fluid::Water => Provenance::SyntheticWater,
        },
        seed: Some(seed),
    })
}
