use serde::{Deserialize, Serialize};

use super::field::limit_over_r;
use super::{AxisymField, PressureField};

/// On-axis quantities at every axial node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisDiagnostics {
    pub t: f64,
    pub z: Vec<f64>,
    /// `d3 v3` on the axis.
    pub lambda: Vec<f64>,
    /// `2 lim v_theta / r`.
    pub omega_bar: Vec<f64>,
    /// `lim d_r p / r = d_r^2 p` on the axis.
    pub q_rr: Vec<f64>,
    /// `d3^2 p` on the axis.
    pub p_33: Vec<f64>,
}

impl AxisDiagnostics {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// `lim f / r` for a function odd in `r`, sampled at `dr` and `2 dr`. Eliminates the
/// `r^3` term, so the result is exact for `f = c1 r + c3 r^3`.
pub fn limit_odd_over_r(f_dr: f64, f_2dr: f64, dr: f64) -> f64 {
    limit_over_r(f_dr, f_2dr, dr)
}

/// Second-order one-sided `d_r f` at the last node from `f(nr), f(nr-1), f(nr-2)`.
#[inline]
pub(crate) fn one_sided_dr(f0: f64, f1: f64, f2: f64, dr: f64) -> f64 {
    (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * dr)
}

/// `(lambda, omega_bar)` at every axial node, shared by the pressure source and the
/// diagnostics so the two agree exactly.
pub(crate) fn axis_lambda_omega(field: &AxisymField) -> (Vec<f64>, Vec<f64>) {
    let g = &field.grid;
    let (dr, dz) = (g.dr(), g.dz());
    let lambda = (0..g.nz)
        .map(|j| (field.v_z[[0, g.jp(j)]] - field.v_z[[0, g.jm(j)]]) / (2.0 * dz))
        .collect();
    let omega_bar = (0..g.nz)
        .map(|j| 2.0 * limit_over_r(field.v_theta[[1, j]], field.v_theta[[2, j]], dr))
        .collect();
    (lambda, omega_bar)
}

impl AxisymField {
    /// `omega_bar` through the derivative route `2 d_r v_theta |_0`, a centered
    /// difference with the odd reflection `v_theta(-dr) = -v_theta(dr)`.
    pub fn omega_bar_from_derivative(&self) -> Vec<f64> {
        let dr = self.grid.dr();
        (0..self.grid.nz)
            .map(|j| 2.0 * (self.v_theta[[1, j]] - (-self.v_theta[[1, j]])) / (2.0 * dr))
            .collect()
    }
}

pub fn extract_axis(field: &AxisymField, pressure: &PressureField) -> AxisDiagnostics {
    let g = &field.grid;
    let (dr, dz) = (g.dr(), g.dz());
    let p = &pressure.p;
    let (lambda, omega_bar) = axis_lambda_omega(field);
    let q_rr = (0..g.nz)
        .map(|j| {
            // d_r p is odd in r; centered values at dr and 2 dr
            let g1 = (p[[2, j]] - p[[0, j]]) / (2.0 * dr);
            let g2 = (p[[3, j]] - p[[1, j]]) / (2.0 * dr);
            limit_over_r(g1, g2, dr)
        })
        .collect();
    let p_33 = (0..g.nz)
        .map(|j| (p[[0, g.jp(j)]] - 2.0 * p[[0, j]] + p[[0, g.jm(j)]]) / (dz * dz))
        .collect();
    AxisDiagnostics {
        t: field.t,
        z: (0..g.nz).map(|j| g.z(j)).collect(),
        lambda,
        omega_bar,
        q_rr,
        p_33,
    }
}

/// `|Laplacian p - (-3/2 lambda^2 + omega_bar^2 / 2)|` on the axis, with the
/// Laplacian evaluated as `2 q_rr + p_33`.
pub fn check_trace_identity(diag: &AxisDiagnostics) -> Vec<f64> {
    (0..diag.len())
        .map(|j| {
            let lap = 2.0 * diag.q_rr[j] + diag.p_33[j];
            let rhs = -1.5 * diag.lambda[j].powi(2) + 0.5 * diag.omega_bar[j].powi(2);
            (lap - rhs).abs()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{init_field, AnalyticProfile, Grid2D, PressureSolver};
    use ndarray::Array2;

    fn grid(n: usize) -> Grid2D {
        Grid2D::new(n, n, 6.0, 2.0 * std::f64::consts::PI).unwrap()
    }

    fn zero_pressure(g: &Grid2D) -> PressureField {
        PressureField {
            p: Array2::zeros(g.shape()),
            residual: 0.0,
            compatibility_defect: 0.0,
        }
    }

    #[test]
    fn linear_swirl_gives_exact_vorticity() {
        let g = grid(32);
        let mut f = AxisymField::zeros(g);
        for i in 0..=g.nr {
            for j in 0..g.nz {
                f.v_theta[[i, j]] = g.r(i) * (1.0 + g.z(j).sin());
            }
        }
        let d = extract_axis(&f, &zero_pressure(&g));
        for j in 0..g.nz {
            assert!((d.omega_bar[j] - 2.0 * (1.0 + g.z(j).sin())).abs() < 1e-13);
        }
    }

    #[test]
    fn axial_strain_from_axis_velocity() {
        let err = |n: usize| {
            let g = grid(n);
            let mut f = AxisymField::zeros(g);
            for j in 0..g.nz {
                f.v_z[[0, j]] = g.z(j).cos();
            }
            let d = extract_axis(&f, &zero_pressure(&g));
            (0..g.nz)
                .map(|j| (d.lambda[j] + g.z(j).sin()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e1 < 1e-2);
        assert!((3.5..4.5).contains(&(e1 / e2)));
    }

    #[test]
    fn radial_curvature_of_pressure() {
        let h = |z: f64| 1.0 + 0.5 * z.cos();
        // quadratic: exact
        let g = grid(32);
        let f = AxisymField::zeros(g);
        let p = PressureField {
            p: Array2::from_shape_fn(g.shape(), |(i, j)| 0.5 * g.r(i).powi(2) * h(g.z(j)) + 3.0),
            ..zero_pressure(&g)
        };
        let d = extract_axis(&f, &p);
        for j in 0..g.nz {
            assert!((d.q_rr[j] - h(g.z(j))).abs() < 1e-10);
        }
        // with a quartic term the error is O(dr^2)
        let err = |n: usize| {
            let g = grid(n);
            let p = PressureField {
                p: Array2::from_shape_fn(g.shape(), |(i, j)| {
                    let r = g.r(i);
                    0.5 * r * r * h(g.z(j)) + r.powi(4)
                }),
                ..zero_pressure(&g)
            };
            let d = extract_axis(&AxisymField::zeros(g), &p);
            (0..g.nz)
                .map(|j| (d.q_rr[j] - h(g.z(j))).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(32) / err(64);
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn zero_field_has_zero_trace_residual() {
        let g = grid(32);
        let f = AxisymField::zeros(g);
        let p = PressureSolver::new(g).recover(&f).unwrap();
        assert!(check_trace_identity(&extract_axis(&f, &p))
            .iter()
            .all(|r| *r == 0.0));
    }

    #[test]
    fn steady_swirl_trace_identity_converges() {
        let omega = 0.8;
        let residual = |n: usize| {
            let g = grid(n);
            let prof = AnalyticProfile::new(|_, _| 0.0, move |r, _| omega * r * (-r * r).exp());
            let f = init_field(g, &prof).unwrap();
            let p = PressureSolver::new(g).recover(&f).unwrap();
            let d = extract_axis(&f, &p);
            for j in 0..g.nz {
                assert!((d.omega_bar[j] - 2.0 * omega).abs() < 1e-2);
                assert!(d.p_33[j].abs() < 1e-10);
            }
            check_trace_identity(&d).into_iter().fold(0.0, f64::max)
        };
        let (e1, e2) = (residual(32), residual(64));
        assert!(e1 < 0.1, "{e1}");
        assert!((3.2..=4.8).contains(&(e1 / e2)), "{}", e1 / e2);
    }

    #[test]
    fn two_vorticity_routes_agree_to_second_order() {
        let diff = |n: usize| {
            let g = grid(n);
            let prof = AnalyticProfile::new(
                |_, _| 0.0,
                |r, z| r * (-r * r).exp() * (1.0 + 0.3 * z.sin()),
            );
            let f = init_field(g, &prof).unwrap();
            let d = extract_axis(&f, &zero_pressure(&g));
            let alt = f.omega_bar_from_derivative();
            (0..g.nz)
                .map(|j| (d.omega_bar[j] - alt[j]).abs())
                .fold(0.0, f64::max)
        };
        let ratio = diff(32) / diff(64);
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }
}
