//! Separable elliptic solves: FFT in the periodic direction, a tridiagonal solve in
//! `r` for every axial mode. The axial wavenumbers are the modified ones of the
//! centered second difference, so each solve inverts the finite-difference operator
//! exactly up to rounding.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::diagnostics::{axis_lambda_omega, one_sided_dr};
use super::{AxisymField, EulerError, Grid2D};

const SOLVE_TOL: f64 = 1e-10;

struct ModalFft {
    nz: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `(2 - 2 cos(2 pi k / nz)) / dz^2`
    kappa2: Vec<f64>,
}

impl ModalFft {
    fn new(grid: &Grid2D) -> Self {
        let mut planner = FftPlanner::new();
        let nz = grid.nz;
        let dz = grid.dz();
        let kappa2 = (0..nz)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / nz as f64;
                (2.0 - 2.0 * th.cos()) / (dz * dz)
            })
            .collect();
        Self {
            nz,
            forward: planner.plan_fft_forward(nz),
            inverse: planner.plan_fft_inverse(nz),
            kappa2,
        }
    }

    /// Row-wise forward transform, returned mode-major: `out[k][i]`.
    fn to_modes(&self, rows: &Array2<f64>) -> Vec<Vec<Complex64>> {
        let nrow = rows.nrows();
        let spectra: Vec<Vec<Complex64>> = (0..nrow)
            .into_par_iter()
            .map(|i| {
                let mut buf: Vec<Complex64> = rows
                    .row(i)
                    .iter()
                    .map(|&v| Complex64::new(v, 0.0))
                    .collect();
                self.forward.process(&mut buf);
                buf
            })
            .collect();
        (0..self.nz)
            .map(|k| spectra.iter().map(|row| row[k]).collect())
            .collect()
    }

    fn synthesize(&self, modes: &[Vec<Complex64>], nrow: usize) -> Array2<f64> {
        let scale = 1.0 / self.nz as f64;
        let rows: Vec<Vec<f64>> = (0..nrow)
            .into_par_iter()
            .map(|i| {
                let mut buf: Vec<Complex64> = modes.iter().map(|m| m[i]).collect();
                self.inverse.process(&mut buf);
                buf.iter().map(|c| c.re * scale).collect()
            })
            .collect();
        Array2::from_shape_fn((nrow, self.nz), |(i, j)| rows[i][j])
    }
}

/// Thomas algorithm; `lower[0]` and `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [Complex64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = upper[0] / beta;
    rhs[0] /= beta;
    for i in 1..n {
        beta = diag[i] - lower[i] * c[i - 1];
        if i + 1 < n {
            c[i] = upper[i] / beta;
        }
        rhs[i] = (rhs[i] - rhs[i - 1] * lower[i]) / beta;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= next * c[i];
    }
}

/// `r d_r(psi_r / r) + psi_zz` at the interior nodes (zero on the axis and wall rows).
pub(crate) fn apply_stream_operator(grid: &Grid2D, psi: &Array2<f64>) -> Array2<f64> {
    let (dr, dz) = (grid.dr(), grid.dz());
    let mut out = Array2::zeros(grid.shape());
    for i in 1..grid.nr {
        let r = grid.r(i);
        let a = r / ((r - 0.5 * dr) * dr * dr);
        let c = r / ((r + 0.5 * dr) * dr * dr);
        for j in 0..grid.nz {
            let radial = a * (psi[[i - 1, j]] - psi[[i, j]]) + c * (psi[[i + 1, j]] - psi[[i, j]]);
            let axial =
                (psi[[i, grid.jp(j)]] - 2.0 * psi[[i, j]] + psi[[i, grid.jm(j)]]) / (dz * dz);
            out[[i, j]] = radial + axial;
        }
    }
    out
}

/// Stokes stream-function solver: `d_r(psi_r / r) + psi_zz / r = -omega_theta`,
/// `psi = 0` on the axis and at `r = r_max`, periodic in `z`.
pub struct StreamSolver {
    grid: Grid2D,
    fft: ModalFft,
    lower: Vec<f64>,
    upper: Vec<f64>,
    radial_diag: Vec<f64>,
}

impl StreamSolver {
    pub fn new(grid: Grid2D) -> Self {
        let dr = grid.dr();
        let n = grid.nr - 1;
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut radial_diag = vec![0.0; n];
        for k in 0..n {
            let r = grid.r(k + 1);
            let a = r / ((r - 0.5 * dr) * dr * dr);
            let c = r / ((r + 0.5 * dr) * dr * dr);
            lower[k] = a;
            upper[k] = c;
            radial_diag[k] = -(a + c);
        }
        Self {
            fft: ModalFft::new(&grid),
            grid,
            lower,
            upper,
            radial_diag,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn solve(&self, omega_theta: &Array2<f64>) -> Result<Array2<f64>, EulerError> {
        let g = &self.grid;
        let nr = g.nr;
        let rhs = Array2::from_shape_fn(g.shape(), |(i, j)| {
            if i == 0 || i == nr {
                0.0
            } else {
                -g.r(i) * omega_theta[[i, j]]
            }
        });
        let interior = rhs.slice(ndarray::s![1..nr, ..]).to_owned();
        let mut modes = self.fft.to_modes(&interior);
        modes.par_iter_mut().enumerate().for_each(|(k, col)| {
            let diag: Vec<f64> = self
                .radial_diag
                .iter()
                .map(|d| d - self.fft.kappa2[k])
                .collect();
            solve_tridiagonal(&self.lower, &diag, &self.upper, col);
        });
        let inner = self.fft.synthesize(&modes, nr - 1);
        let mut psi = Array2::zeros(g.shape());
        psi.slice_mut(ndarray::s![1..nr, ..]).assign(&inner);

        let residual = scaled_residual(&apply_stream_operator(g, &psi), &rhs, 1..nr);
        if !(residual <= SOLVE_TOL) {
            return Err(EulerError::SolverDivergence {
                solver: "stream function",
                residual,
            });
        }
        Ok(psi)
    }
}

fn scaled_residual(lhs: &Array2<f64>, rhs: &Array2<f64>, rows: std::ops::Range<usize>) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for i in rows {
        for (a, b) in lhs.row(i).iter().zip(rhs.row(i).iter()) {
            num = num.max((a - b).abs());
            den = den.max(b.abs());
        }
    }
    if num.is_nan() {
        return f64::NAN;
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

#[derive(Debug, Clone)]
pub struct PressureField {
    pub p: Array2<f64>,
    /// Scaled max-norm residual of the discrete Poisson equation.
    pub residual: f64,
    /// Constant removed from the source to make the pure-Neumann mean mode solvable.
    pub compatibility_defect: f64,
}

/// Cylindrical pressure Poisson solver with regularity on the axis, a Neumann
/// condition at the wall and a zero-mean gauge. Finite-volume weights in `r` make
/// the discrete compatibility condition exact.
pub struct PressureSolver {
    grid: Grid2D,
    fft: ModalFft,
    volume: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    radial_diag: Vec<f64>,
}

impl PressureSolver {
    pub fn new(grid: Grid2D) -> Self {
        let nr = grid.nr;
        let dr = grid.dr();
        let r_half = |i: usize| (i as f64 + 0.5) * dr;
        let mut volume = vec![0.0; nr + 1];
        volume[0] = dr * dr / 8.0;
        for (i, v) in volume.iter_mut().enumerate().take(nr).skip(1) {
            *v = grid.r(i) * dr;
        }
        volume[nr] = 0.5 * (grid.r_max * dr - 0.25 * dr * dr);
        let mut lower = vec![0.0; nr + 1];
        let mut upper = vec![0.0; nr + 1];
        for i in 0..=nr {
            if i > 0 {
                lower[i] = r_half(i - 1) / (dr * volume[i]);
            }
            if i < nr {
                upper[i] = r_half(i) / (dr * volume[i]);
            }
        }
        let radial_diag = (0..=nr).map(|i| -(lower[i] + upper[i])).collect();
        Self {
            fft: ModalFft::new(&grid),
            grid,
            volume,
            lower,
            upper,
            radial_diag,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Discrete Laplacian with the wall flux `wall_flux[j] = d_r p(r_max, z_j)`.
    pub fn apply(&self, p: &Array2<f64>, wall_flux: &[f64]) -> Array2<f64> {
        let g = &self.grid;
        let dz = g.dz();
        let nr = g.nr;
        Array2::from_shape_fn(g.shape(), |(i, j)| {
            let mut radial = self.radial_diag[i] * p[[i, j]];
            if i > 0 {
                radial += self.lower[i] * p[[i - 1, j]];
            }
            if i < nr {
                radial += self.upper[i] * p[[i + 1, j]];
            } else {
                radial += g.r_max * wall_flux[j] / self.volume[nr];
            }
            radial + (p[[i, g.jp(j)]] - 2.0 * p[[i, j]] + p[[i, g.jm(j)]]) / (dz * dz)
        })
    }

    pub fn solve(
        &self,
        source: &Array2<f64>,
        wall_flux: &[f64],
    ) -> Result<PressureField, EulerError> {
        let g = &self.grid;
        let nr = g.nr;
        let total_volume: f64 = self.volume.iter().sum::<f64>() * g.nz as f64;
        let weighted: f64 = (0..=nr)
            .map(|i| self.volume[i] * source.row(i).sum())
            .sum::<f64>();
        let boundary: f64 = g.r_max * wall_flux.iter().sum::<f64>();
        let defect = (weighted - boundary) / total_volume;

        let mut rhs = source.mapv(|s| s - defect);
        for j in 0..g.nz {
            rhs[[nr, j]] -= g.r_max * wall_flux[j] / self.volume[nr];
        }
        let mut modes = self.fft.to_modes(&rhs);
        modes.par_iter_mut().enumerate().for_each(|(k, col)| {
            let kappa2 = self.fft.kappa2[k];
            if k == 0 {
                // singular mode: pin the wall value and drop the wall row, which then
                // holds by compatibility. The wall cell is the largest, so the rounding
                // pushed onto it is the least amplified.
                col[nr] = Complex64::new(0.0, 0.0);
                solve_tridiagonal(
                    &self.lower[..nr],
                    &self.radial_diag[..nr],
                    &self.upper[..nr],
                    &mut col[..nr],
                );
            } else {
                let diag: Vec<f64> = self.radial_diag.iter().map(|d| d - kappa2).collect();
                solve_tridiagonal(&self.lower, &diag, &self.upper, col);
            }
        });
        let mut p = self.fft.synthesize(&modes, nr + 1);
        let mean: f64 = (0..=nr)
            .map(|i| self.volume[i] * p.row(i).sum())
            .sum::<f64>()
            / total_volume;
        p.mapv_inplace(|v| v - mean);

        let target = source.mapv(|s| s - defect);
        let residual = scaled_residual(&self.apply(&p, wall_flux), &target, 0..nr + 1);
        if !(residual <= SOLVE_TOL) {
            return Err(EulerError::SolverDivergence {
                solver: "pressure",
                residual,
            });
        }
        Ok(PressureField {
            p,
            residual,
            compatibility_defect: defect,
        })
    }

    /// Pressure of a flow state: `Laplacian p = -tr(V^2)`, with the wall flux taken
    /// from the radial momentum balance `d_r p = v_theta^2 / r` (no normal flow).
    pub fn recover(&self, field: &AxisymField) -> Result<PressureField, EulerError> {
        let (source, flux) = pressure_source(field);
        self.solve(&source, &flux)
    }
}

/// Source `-tr(V^2)` and wall flux for the pressure equation of a flow state.
///
/// `tr(V^2) = (d_r v_r)^2 + (v_r / r)^2 + (d_z v_z)^2 + 2 d_z v_r d_r v_z
///            - 2 (v_theta / r) d_r v_theta`,
/// which on the axis reduces to `3/2 lambda^2 - omega_bar^2 / 2`.
pub(crate) fn pressure_source(field: &AxisymField) -> (Array2<f64>, Vec<f64>) {
    let g = &field.grid;
    let (nr, nz) = (g.nr, g.nz);
    let (dr, dz) = (g.dr(), g.dz());
    let (vr, vz, vt) = (&field.v_r, &field.v_z, &field.v_theta);
    let mut src = Array2::zeros(g.shape());

    let (lambda, omega_bar) = axis_lambda_omega(field);
    for j in 0..nz {
        src[[0, j]] = -(1.5 * lambda[j] * lambda[j] - 0.5 * omega_bar[j] * omega_bar[j]);
    }
    for i in 1..nr {
        let r = g.r(i);
        for j in 0..nz {
            let (jp, jm) = (g.jp(j), g.jm(j));
            let dr_vr = (vr[[i + 1, j]] - vr[[i - 1, j]]) / (2.0 * dr);
            let dz_vz = (vz[[i, jp]] - vz[[i, jm]]) / (2.0 * dz);
            let dz_vr = (vr[[i, jp]] - vr[[i, jm]]) / (2.0 * dz);
            let dr_vz = (vz[[i + 1, j]] - vz[[i - 1, j]]) / (2.0 * dr);
            let dr_vt = (vt[[i + 1, j]] - vt[[i - 1, j]]) / (2.0 * dr);
            let tr = dr_vr * dr_vr + (vr[[i, j]] / r).powi(2) + dz_vz * dz_vz + 2.0 * dz_vr * dr_vz
                - 2.0 * (vt[[i, j]] / r) * dr_vt;
            src[[i, j]] = -tr;
        }
    }
    let mut flux = vec![0.0; nz];
    for j in 0..nz {
        let (jp, jm) = (g.jp(j), g.jm(j));
        let dz_vz = (vz[[nr, jp]] - vz[[nr, jm]]) / (2.0 * dz);
        let dr_vt = one_sided_dr(vt[[nr, j]], vt[[nr - 1, j]], vt[[nr - 2, j]], dr);
        let vt_over_r = vt[[nr, j]] / g.r_max;
        // v_r = 0 on the wall, so d_r v_r = -d_z v_z and d_z v_r = 0
        src[[nr, j]] = -(2.0 * dz_vz * dz_vz - 2.0 * vt_over_r * dr_vt);
        flux[j] = vt[[nr, j]] * vt_over_r;
    }
    (src, flux)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn tridiagonal_matches_dense() {
        let lower = [0.0, 1.0, 2.0, 0.5];
        let diag = [4.0, 5.0, 6.0, 3.0];
        let upper = [1.0, 0.5, 1.0, 0.0];
        let x = [1.0, -2.0, 0.5, 3.0];
        let mut b: Vec<Complex64> = (0..4)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += lower[i] * x[i - 1];
                }
                if i < 3 {
                    s += upper[i] * x[i + 1];
                }
                Complex64::new(s, -s)
            })
            .collect();
        solve_tridiagonal(&lower, &diag, &upper, &mut b);
        for i in 0..4 {
            assert!((b[i].re - x[i]).abs() < 1e-14 && (b[i].im + x[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn homogeneous_stream_problem() {
        let g = Grid2D::new(32, 32, 1.0, 1.0).unwrap();
        let psi = StreamSolver::new(g)
            .solve(&Array2::zeros(g.shape()))
            .unwrap();
        assert!(psi.iter().all(|v| *v == 0.0));
    }

    fn manufactured_stream_error(nr: usize, nz: usize) -> f64 {
        let (rm, zp) = (1.0, 2.0);
        let g = Grid2D::new(nr, nz, rm, zp).unwrap();
        let k = 2.0 * PI / zp;
        let psi_exact = |r: f64, z: f64| r * r * (1.0 - r / rm).powi(2) * (k * z).sin();
        // -(1/r) [r d_r(psi_r / r) + psi_zz]
        let omega = |r: f64, z: f64| {
            (6.0 * (1.0 - r / rm) / rm - 2.0 * r / (rm * rm) + k * k * r * (1.0 - r / rm).powi(2))
                * (k * z).sin()
        };
        let w = Array2::from_shape_fn(g.shape(), |(i, j)| omega(g.r(i), g.z(j)));
        let psi = StreamSolver::new(g).solve(&w).unwrap();
        let mut err = 0.0f64;
        for i in 0..=nr {
            for j in 0..nz {
                err = err.max((psi[[i, j]] - psi_exact(g.r(i), g.z(j))).abs());
            }
        }
        err
    }

    #[test]
    fn manufactured_stream_solution_converges_at_second_order() {
        let e1 = manufactured_stream_error(32, 32);
        let e2 = manufactured_stream_error(64, 64);
        assert!(e1 < 5e-3, "{e1}");
        let ratio = e1 / e2;
        assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
    }

    fn manufactured_pressure_error(nr: usize, nz: usize) -> (f64, f64) {
        let (rm, zp) = (2.0, 3.0);
        let g = Grid2D::new(nr, nz, rm, zp).unwrap();
        let a = PI / rm;
        let k = 2.0 * PI / zp;
        // even in r with zero radial derivative at both ends
        let p_exact = |r: f64, z: f64| (a * r).cos() * (1.0 + 0.5 * (k * z).sin());
        let lap = |r: f64, z: f64| {
            let radial = if r == 0.0 {
                -2.0 * a * a
            } else {
                -a * a * (a * r).cos() - a * (a * r).sin() / r
            };
            radial * (1.0 + 0.5 * (k * z).sin()) - (a * r).cos() * 0.5 * k * k * (k * z).sin()
        };
        let src = Array2::from_shape_fn(g.shape(), |(i, j)| lap(g.r(i), g.z(j)));
        let solver = PressureSolver::new(g);
        let pf = solver.solve(&src, &vec![0.0; nz]).unwrap();
        let exact = Array2::from_shape_fn(g.shape(), |(i, j)| p_exact(g.r(i), g.z(j)));
        let mean: f64 = (0..=nr)
            .map(|i| solver.volume[i] * exact.row(i).sum())
            .sum::<f64>()
            / (solver.volume.iter().sum::<f64>() * nz as f64);
        let err =
            pf.p.iter()
                .zip(exact.iter())
                .map(|(a, b)| (a - (b - mean)).abs())
                .fold(0.0, f64::max);
        (err, pf.residual)
    }

    #[test]
    fn manufactured_pressure_solution_converges() {
        let (e1, r1) = manufactured_pressure_error(32, 32);
        let (e2, r2) = manufactured_pressure_error(64, 64);
        assert!(r1 <= 1e-10 && r2 <= 1e-10);
        let ratio = e1 / e2;
        assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}, e1 {e1}");
    }

    #[test]
    fn zero_velocity_gives_zero_pressure() {
        let g = Grid2D::new(32, 32, 1.0, 1.0).unwrap();
        let pf = PressureSolver::new(g)
            .recover(&AxisymField::zeros(g))
            .unwrap();
        assert!(pf.p.iter().all(|v| v.abs() < 1e-14));
    }
}
