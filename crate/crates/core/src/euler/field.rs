use ndarray::Array2;

use super::poisson::{apply_stream_operator, StreamSolver};
use super::{EulerError, Grid2D};

const PARITY_TOL: f64 = 1e-10;

/// Initial data for the swirling flow: Stokes stream function (even in `r`, vanishing
/// on the axis) and swirl velocity (odd in `r`). Both must accept negative `r` so
/// their parity can be checked.
pub trait AxisymProfile {
    fn psi(&self, r: f64, z: f64) -> f64;
    fn v_theta(&self, r: f64, z: f64) -> f64;
}

pub struct AnalyticProfile {
    psi: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    v_theta: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl AnalyticProfile {
    pub fn new(
        psi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        v_theta: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            psi: Box::new(psi),
            v_theta: Box::new(v_theta),
        }
    }
}

impl AxisymProfile for AnalyticProfile {
    fn psi(&self, r: f64, z: f64) -> f64 {
        (self.psi)(r, z)
    }
    fn v_theta(&self, r: f64, z: f64) -> f64 {
        (self.v_theta)(r, z)
    }
}

/// One state of the flow. `eta = omega_theta / r` and `u1 = v_theta / r` are the
/// advanced variables; everything else is derived from them.
#[derive(Debug, Clone)]
pub struct AxisymField {
    pub grid: Grid2D,
    pub t: f64,
    pub(crate) eta: Array2<f64>,
    pub(crate) u1: Array2<f64>,
    pub omega_theta: Array2<f64>,
    pub v_theta: Array2<f64>,
    pub psi: Array2<f64>,
    pub v_r: Array2<f64>,
    pub v_z: Array2<f64>,
}

impl AxisymField {
    pub(crate) fn from_parts(
        grid: Grid2D,
        t: f64,
        mut eta: Array2<f64>,
        mut u1: Array2<f64>,
        psi: Array2<f64>,
    ) -> Self {
        let nr = grid.nr;
        for j in 0..grid.nz {
            eta[[nr, j]] = 0.0;
            u1[[nr, j]] = 0.0;
        }
        let r = Array2::from_shape_fn(grid.shape(), |(i, _)| grid.r(i));
        let omega_theta = &eta * &r;
        let v_theta = &u1 * &r;
        let (v_r, v_z) = velocities(&grid, &psi);
        Self {
            grid,
            t,
            eta,
            u1,
            omega_theta,
            v_theta,
            psi,
            v_r,
            v_z,
        }
    }

    /// Rebuilds the derived fields from `(eta, u1)` with a fresh stream-function solve.
    pub(crate) fn assemble(
        stream: &StreamSolver,
        t: f64,
        eta: Array2<f64>,
        u1: Array2<f64>,
    ) -> Result<Self, EulerError> {
        let grid = *stream.grid();
        let r = Array2::from_shape_fn(grid.shape(), |(i, _)| grid.r(i));
        let psi = stream.solve(&(&eta * &r))?;
        Ok(Self::from_parts(grid, t, eta, u1, psi))
    }

    pub fn zeros(grid: Grid2D) -> Self {
        let z = Array2::zeros(grid.shape());
        Self::from_parts(grid, 0.0, z.clone(), z.clone(), z)
    }

    /// `omega_theta / r`, even in `r`.
    pub fn eta(&self) -> &Array2<f64> {
        &self.eta
    }

    /// `v_theta / r`, even in `r`; its axis value is `omega_bar / 2`.
    pub fn u1(&self) -> &Array2<f64> {
        &self.u1
    }

    /// Max-norm of `(1/r) d_r(r v_r) + d_z v_z` over the off-axis interior nodes,
    /// with the same centered stencils that produce the velocities.
    pub fn max_divergence(&self) -> f64 {
        let g = &self.grid;
        let (dr, dz) = (g.dr(), g.dz());
        let mut worst = 0.0f64;
        for i in 1..g.nr {
            let r = g.r(i);
            for j in 0..g.nz {
                let flux_r = (g.r(i + 1) * self.v_r[[i + 1, j]]
                    - g.r(i - 1) * self.v_r[[i - 1, j]])
                    / (2.0 * dr * r);
                let flux_z = (self.v_z[[i, g.jp(j)]] - self.v_z[[i, g.jm(j)]]) / (2.0 * dz);
                worst = worst.max((flux_r + flux_z).abs());
            }
        }
        worst
    }

    /// `max(|v_theta(0, z)|, |omega_theta(0, z)|, |psi(0, z)|)`.
    pub fn axis_parity_defect(&self) -> f64 {
        (0..self.grid.nz)
            .map(|j| {
                self.v_theta[[0, j]]
                    .abs()
                    .max(self.omega_theta[[0, j]].abs())
                    .max(self.psi[[0, j]].abs())
            })
            .fold(0.0, f64::max)
    }

    /// `int (v_r^2 + v_z^2 + v_theta^2) r dr dz`.
    pub fn energy(&self) -> f64 {
        self.grid.integrate_rdr(|i, j| {
            self.v_r[[i, j]].powi(2) + self.v_z[[i, j]].powi(2) + self.v_theta[[i, j]].powi(2)
        })
    }

    /// Largest meridional speed, the one that limits the explicit time step.
    pub fn max_meridional_speed(&self) -> f64 {
        self.v_r
            .iter()
            .zip(self.v_z.iter())
            .map(|(a, b)| a.abs().max(b.abs()))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.eta.iter().chain(self.u1.iter()).all(|v| v.is_finite())
    }

    /// `v_z` on the axis, `lim psi_r / r`.
    pub fn axis_velocity(&self) -> Vec<f64> {
        self.v_z.row(0).to_vec()
    }
}

/// Meridional velocity from the stream function.
pub(crate) fn velocities(grid: &Grid2D, psi: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let (nr, nz) = (grid.nr, grid.nz);
    let (dr, dz) = (grid.dr(), grid.dz());
    let mut v_r = Array2::zeros(grid.shape());
    let mut v_z = Array2::zeros(grid.shape());
    for j in 0..nz {
        // psi = c2 r^2 + c4 r^4 + ..., v_z(0) = 2 c2
        v_z[[0, j]] =
            (16.0 * (psi[[1, j]] - psi[[0, j]]) - (psi[[2, j]] - psi[[0, j]])) / (6.0 * dr * dr);
        v_z[[nr, j]] = (3.0 * psi[[nr, j]] - 4.0 * psi[[nr - 1, j]] + psi[[nr - 2, j]])
            / (2.0 * dr * grid.r_max);
    }
    for i in 1..nr {
        let r = grid.r(i);
        for j in 0..nz {
            v_r[[i, j]] = -(psi[[i, grid.jp(j)]] - psi[[i, grid.jm(j)]]) / (2.0 * dz * r);
            v_z[[i, j]] = (psi[[i + 1, j]] - psi[[i - 1, j]]) / (2.0 * dr * r);
        }
    }
    (v_r, v_z)
}

/// Samples an analytic profile onto the grid.
///
/// `psi` is taken as given, `omega_theta` is obtained by applying the discrete
/// stream-function operator to it, and `v_theta` is sampled directly. Fails when the
/// profile breaks axis parity or does not vanish at the outer wall.
pub fn init_field(grid: Grid2D, profile: &dyn AxisymProfile) -> Result<AxisymField, EulerError> {
    let (nr, nz) = (grid.nr, grid.nz);
    let psi_s = Array2::from_shape_fn(grid.shape(), |(i, j)| profile.psi(grid.r(i), grid.z(j)));
    let vt_s = Array2::from_shape_fn(grid.shape(), |(i, j)| profile.v_theta(grid.r(i), grid.z(j)));
    if psi_s.iter().chain(vt_s.iter()).any(|v| !v.is_finite()) {
        return Err(EulerError::InvalidInput(
            "profile produced non-finite values".into(),
        ));
    }
    let scale = psi_s
        .iter()
        .chain(vt_s.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = PARITY_TOL * scale;

    for j in 0..nz {
        let z = grid.z(j);
        if psi_s[[0, j]].abs() > tol || vt_s[[0, j]].abs() > tol {
            return Err(EulerError::ParityViolation(format!(
                "psi or v_theta nonzero on the axis at z = {z}"
            )));
        }
        for k in 1..=3 {
            let r = grid.r(k);
            let even = profile.psi(-r, z) - profile.psi(r, z);
            let odd = profile.v_theta(-r, z) + profile.v_theta(r, z);
            if even.abs() > tol {
                return Err(EulerError::ParityViolation(format!(
                    "psi is not even in r at (r, z) = ({r}, {z})"
                )));
            }
            if odd.abs() > tol {
                return Err(EulerError::ParityViolation(format!(
                    "v_theta is not odd in r at (r, z) = ({r}, {z})"
                )));
            }
        }
        if psi_s[[nr, j]].abs() > tol || vt_s[[nr, j]].abs() > tol {
            return Err(EulerError::WallViolation(format!(
                "psi = {:e}, v_theta = {:e} at r = r_max, z = {z}",
                psi_s[[nr, j]],
                vt_s[[nr, j]]
            )));
        }
    }

    let mut psi = psi_s;
    for j in 0..nz {
        psi[[0, j]] = 0.0;
        psi[[nr, j]] = 0.0;
    }
    let l_psi = apply_stream_operator(&grid, &psi);
    let dr = grid.dr();
    let mut eta = Array2::zeros(grid.shape());
    let mut u1 = Array2::zeros(grid.shape());
    for i in 1..nr {
        let r = grid.r(i);
        for j in 0..nz {
            eta[[i, j]] = -l_psi[[i, j]] / (r * r);
            u1[[i, j]] = vt_s[[i, j]] / r;
        }
    }
    for j in 0..nz {
        eta[[0, j]] = (4.0 * eta[[1, j]] - eta[[2, j]]) / 3.0;
        u1[[0, j]] = limit_over_r(vt_s[[1, j]], vt_s[[2, j]], dr);
    }
    Ok(AxisymField::from_parts(grid, 0.0, eta, u1, psi))
}

/// `lim f / r` for odd `f = c1 r + c3 r^3 + ...` from samples at `dr` and `2 dr`.
#[inline]
pub(crate) fn limit_over_r(f1: f64, f2: f64, dr: f64) -> f64 {
    ((4.0 / 3.0) * f1 - (1.0 / 6.0) * f2) / dr
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid2D {
        Grid2D::new(64, 64, 6.0, 2.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn pure_swirl_has_no_meridional_flow() {
        let g = grid();
        let p = AnalyticProfile::new(|_, _| 0.0, |r, z| r * (-r * r).exp() * z.sin());
        let f = init_field(g, &p).unwrap();
        assert!(f.v_r.iter().chain(f.v_z.iter()).all(|v| *v == 0.0));
        for i in 0..=g.nr {
            for j in 0..g.nz {
                let want = p.v_theta(g.r(i), g.z(j));
                assert!((f.v_theta[[i, j]] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn meridional_flow_is_discretely_divergence_free() {
        let g = grid();
        let p = AnalyticProfile::new(|r, z| r * r * (-r * r).exp() * z.sin(), |_, _| 0.0);
        let f = init_field(g, &p).unwrap();
        assert!(f.max_divergence() <= 1e-12, "{}", f.max_divergence());
        assert!(f.max_meridional_speed() > 0.1);
        assert_eq!(f.axis_parity_defect(), 0.0);
    }

    #[test]
    fn odd_stream_function_is_rejected() {
        let p = AnalyticProfile::new(|r, _| r * (-r * r).exp(), |_, _| 0.0);
        assert!(matches!(
            init_field(grid(), &p),
            Err(EulerError::ParityViolation(_))
        ));
        let p = AnalyticProfile::new(|_, _| 0.0, |r, _| (-r * r).exp());
        assert!(matches!(
            init_field(grid(), &p),
            Err(EulerError::ParityViolation(_))
        ));
    }

    #[test]
    fn untapered_data_is_rejected() {
        let p = AnalyticProfile::new(|_, _| 0.0, |r, _| r);
        assert!(matches!(
            init_field(grid(), &p),
            Err(EulerError::WallViolation(_))
        ));
    }

    #[test]
    fn axis_velocity_matches_quadratic_coefficient() {
        let g = grid();
        // psi = r^2 s(z) / 2 near the axis gives v_z(0, z) = s(z)
        let p = AnalyticProfile::new(|r, z| 0.5 * r * r * (-r * r).exp() * z.cos(), |_, _| 0.0);
        let f = init_field(g, &p).unwrap();
        for j in 0..g.nz {
            assert!((f.v_z[[0, j]] - g.z(j).cos()).abs() < 5e-4);
        }
    }
}
