use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AxisDiagnostics, AxisymField, EulerError, PressureField};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotFormat {
    #[default]
    Csv,
    /// Little-endian: `u64` row count, then the six columns `r, z, omega_theta,
    /// v_theta, psi, p` as consecutive `f64` arrays, rows ordered by `(i, j)`.
    Binary,
}

pub const SNAPSHOT_COLUMNS: [&str; 6] = ["r", "z", "omega_theta", "v_theta", "psi", "p"];

pub fn write_snapshot(
    path: &Path,
    field: &AxisymField,
    pressure: &PressureField,
    format: SnapshotFormat,
) -> Result<(), EulerError> {
    let g = &field.grid;
    let (rows, cols) = g.shape();
    let column = |k: usize| -> Vec<f64> {
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                out.push(match k {
                    0 => g.r(i),
                    1 => g.z(j),
                    2 => field.omega_theta[[i, j]],
                    3 => field.v_theta[[i, j]],
                    4 => field.psi[[i, j]],
                    _ => pressure.p[[i, j]],
                });
            }
        }
        out
    };
    match format {
        SnapshotFormat::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(SNAPSHOT_COLUMNS)?;
            let data: Vec<Vec<f64>> = (0..6).map(column).collect();
            for n in 0..rows * cols {
                w.write_record(data.iter().map(|c| c[n].to_string()))?;
            }
            w.flush()?;
        }
        SnapshotFormat::Binary => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(&((rows * cols) as u64).to_le_bytes())?;
            for k in 0..6 {
                for v in column(k) {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// One row per `(t, z_j)` with columns `t, z, lambda, omega_bar, q_rr, p_33`.
pub fn write_axis_csv<'a>(
    path: &Path,
    frames: impl IntoIterator<Item = &'a AxisDiagnostics>,
) -> Result<(), EulerError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "z", "lambda", "omega_bar", "q_rr", "p_33"])?;
    for d in frames {
        for j in 0..d.len() {
            w.write_record(
                [
                    d.t,
                    d.z[j],
                    d.lambda[j],
                    d.omega_bar[j],
                    d.q_rr[j],
                    d.p_33[j],
                ]
                .iter()
                .map(f64::to_string),
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{init_field, profiles, EulerSolver, Grid2D};

    #[test]
    fn snapshot_formats_hold_the_same_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid2D::new(16, 16, 6.0, 2.0 * std::f64::consts::PI).unwrap();
        let f = init_field(g, &profiles::smooth_generic(1.0, 1.0)).unwrap();
        let (p, d) = EulerSolver::new(g).diagnose(&f).unwrap();

        let csv_path = dir.path().join("s.csv");
        let bin_path = dir.path().join("s.bin");
        write_snapshot(&csv_path, &f, &p, SnapshotFormat::Csv).unwrap();
        write_snapshot(&bin_path, &f, &p, SnapshotFormat::Binary).unwrap();

        let bytes = std::fs::read(&bin_path).unwrap();
        let n = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
        assert_eq!(n, 17 * 16);
        assert_eq!(bytes.len(), 8 + 6 * 8 * n);
        let bin = |col: usize, row: usize| {
            let o = 8 + 8 * (col * n + row);
            f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap())
        };
        let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
        assert_eq!(rdr.headers().unwrap(), SNAPSHOT_COLUMNS.as_slice());
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.unwrap();
            for col in 0..6 {
                assert_eq!(rec[col].parse::<f64>().unwrap(), bin(col, row));
            }
        }

        let axis_path = dir.path().join("axis.csv");
        write_axis_csv(&axis_path, [&d]).unwrap();
        let mut rdr = csv::Reader::from_path(&axis_path).unwrap();
        assert_eq!(
            rdr.headers().unwrap(),
            vec!["t", "z", "lambda", "omega_bar", "q_rr", "p_33"]
        );
        assert_eq!(rdr.records().count(), 16);
    }
}
