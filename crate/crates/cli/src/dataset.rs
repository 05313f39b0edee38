//! Dataset loading: CSV files or named toy spectra generated on the fly.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use nalgebra::DMatrix;

use cssdpp_core::matrixgen::{dirichlet_leverage_profile, matrix_generator, LeverageTarget};
use cssdpp_core::toy::{toy_default_k, toy_spectrum, TOY_DIM};
use cssdpp_core::{DataMatrix, RngState};

/// A loaded matrix plus the identifier used in result records.
pub struct Dataset {
    pub id: String,
    pub x: DataMatrix,
}

/// Common source flags: a CSV file or a named toy spectrum.
#[derive(clap::Args, Clone)]
pub struct SourceArgs {
    /// CSV file with one observation per row
    #[arg(long, value_name = "PATH", conflicts_with = "toy")]
    pub dataset: Option<PathBuf>,

    /// Built-in toy spectrum (proj-3, proj-5, smooth-3, smooth-5,
    /// identity), generated with a Dirichlet leverage profile
    #[arg(long, value_name = "NAME")]
    pub toy: Option<String>,

    /// Rows of the generated toy matrix
    #[arg(long, default_value_t = 100)]
    pub n: usize,

    /// Sparsity level of the generated toy leverage profile
    #[arg(long, value_name = "P")]
    pub sparsity: Option<usize>,

    /// First CSV row is a header to skip
    #[arg(long, default_value_t = false)]
    pub header: bool,

    /// Center columns and scale them to unit variance
    #[arg(long, default_value_t = false)]
    pub standardize: bool,
}

impl SourceArgs {
    /// Load or generate the matrix. `k` and `seed` drive toy generation.
    pub fn load(&self, k: usize, seed: u64) -> Result<Dataset> {
        match (&self.dataset, &self.toy) {
            (Some(path), _) => {
                let mut x = read_csv_matrix(path, self.header)?;
                if self.standardize {
                    x = standardize(&x)?;
                }
                Ok(Dataset {
                    id: path.display().to_string(),
                    x,
                })
            }
            (None, Some(name)) => {
                let x = generate_toy(name, k, self.n, self.sparsity, seed)?;
                Ok(Dataset {
                    id: format!("toy:{name}"),
                    x,
                })
            }
            (None, None) => bail!("provide --dataset <csv> or --toy <name>"),
        }
    }
}

pub fn generate_toy(
    name: &str,
    k: usize,
    n: usize,
    sparsity: Option<usize>,
    seed: u64,
) -> Result<DataMatrix> {
    let sigma = toy_spectrum(name)
        .ok_or_else(|| anyhow!("unknown toy spectrum `{name}`; see `cssdpp gen --help`"))?;
    let _ = toy_default_k(name);
    let d = TOY_DIM;
    let p = sparsity.unwrap_or(d);
    let state = RngState::new(seed);
    let mut rng = state.substream(0xD1).rng();
    let ell = dirichlet_leverage_profile(k, p, d, &mut rng)?;
    Ok(matrix_generator(&ell, &sigma, n, &state.substream(0xD2))?)
}

/// Parse a comma-separated list of floats.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .with_context(|| format!("cannot parse `{tok}` as a number"))
        })
        .collect()
}

/// Leverage profile spec: `dirichlet:P` or an explicit value list.
pub fn parse_leverage_spec(spec: &str, k: usize, d: usize, seed: u64) -> Result<LeverageTarget> {
    if let Some(p_str) = spec.strip_prefix("dirichlet:") {
        let p: usize = p_str
            .trim()
            .parse()
            .with_context(|| format!("bad sparsity in `{spec}`"))?;
        let mut rng = RngState::new(seed).substream(0xE11).rng();
        return Ok(dirichlet_leverage_profile(k, p, d, &mut rng)?);
    }
    let values = parse_float_list(spec)?;
    if values.len() != d {
        bail!("leverage spec has {} values, expected {d}", values.len());
    }
    Ok(LeverageTarget::new(values)?)
}

pub fn read_csv_matrix(path: &Path, header: bool) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row: Vec<f64> = record
            .iter()
            .map(|tok| {
                tok.parse::<f64>()
                    .with_context(|| format!("non-numeric entry `{tok}`"))
            })
            .collect::<Result<_>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                bail!("ragged CSV: {} vs {} columns", row.len(), first.len());
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("{} has no data rows", path.display());
    }
    let n = rows.len();
    let d = rows[0].len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(DataMatrix::new(DMatrix::from_row_slice(n, d, &flat))?)
}

pub fn write_csv_matrix(path: &Path, x: &DataMatrix) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().from_path(path)?;
    let m = x.values();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)])).collect();
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

fn standardize(x: &DataMatrix) -> Result<DataMatrix> {
    let m = x.values();
    let n = m.nrows() as f64;
    let mut out = m.clone();
    for j in 0..m.ncols() {
        let col = m.column(j);
        let mean = col.sum() / n;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let scale = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
        for i in 0..m.nrows() {
            out[(i, j)] = (m[(i, j)] - mean) / scale;
        }
    }
    Ok(DataMatrix::new(out)?)
}
