use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::Matrix4;
use num_complex::Complex64;
use qdecor::choi::ChoiOperator;
use qdecor::linalg::CMat;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

/// Off-diagonal asymmetry tolerated in a custom correlation matrix before it is symmetrized.
pub const CUSTOM_SYM_TOL: f64 = 1e-9;

/// Choi file: `data` holds the (dim_out·dim_in)² entries row-major as [re, im] pairs.
#[derive(Debug, Serialize, Deserialize)]
pub struct ChoiFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub data: Vec<[f64; 2]>,
}

impl ChoiFile {
    pub fn from_choi(r: &ChoiOperator) -> Self {
        let n = r.matrix().nrows();
        let data = (0..n * n).map(|k| {
            let z = r.matrix()[(k / n, k % n)];
            [z.re, z.im]
        });
        Self { dim_in: r.dim_in(), dim_out: r.dim_out(), data: data.collect() }
    }

    pub fn into_choi(self) -> CliResult<ChoiOperator> {
        let n = self.dim_in * self.dim_out;
        if n == 0 || self.data.len() != n * n {
            return Err(CliError::Usage(format!(
                "Choi file: {} entries for dims {}→{}, expected {}",
                self.data.len(),
                self.dim_in,
                self.dim_out,
                n * n
            )));
        }
        let m = CMat::from_fn(n, n, |r, c| {
            let [re, im] = self.data[r * n + c];
            Complex64::new(re, im)
        });
        Ok(ChoiOperator::new(self.dim_in, self.dim_out, m)?)
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_choi(path: &Path) -> CliResult<ChoiOperator> {
    let f: ChoiFile = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    f.into_choi()
}

pub fn read_matrix4(path: &Path) -> CliResult<Matrix4<f64>> {
    let text = read(path)?;
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|e| bad(format!("'{t}': {e}"))))
            .collect::<CliResult<_>>()?;
        if row.len() != 4 {
            return Err(bad(format!("row with {} entries, expected 4", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != 4 {
        return Err(bad(format!("{} rows, expected 4", rows.len())));
    }
    let m = Matrix4::from_fn(|r, c| rows[r][c]);
    if m.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite entry".into()));
    }
    let defect = (m - m.transpose()).amax();
    if defect > CUSTOM_SYM_TOL {
        return Err(bad(format!("not symmetric (defect {defect:.3e})")));
    }
    Ok((m + m.transpose()) * 0.5)
}

/// Writes to `path`, or stdout for `-`.
pub fn write_out(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        return out.write_all(bytes).map_err(|e| CliError::Io(format!("stdout: {e}")));
    }
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Verify(e.to_string()))?;
    s.push('\n');
    write_out(Path::new("-"), s.as_bytes())
}
