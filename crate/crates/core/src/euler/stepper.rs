use ndarray::Array2;

use super::{
    diagnostics::extract_axis, AxisDiagnostics, AxisymField, EulerError, Grid2D, PressureField,
    PressureSolver, StreamSolver,
};

/// Explicit SSP-RK3 stepper for the swirling axisymmetric flow, together with the
/// elliptic solvers it and the diagnostics need.
pub struct EulerSolver {
    grid: Grid2D,
    stream: StreamSolver,
    pressure: PressureSolver,
    pub cfl: f64,
}

impl EulerSolver {
    pub fn new(grid: Grid2D) -> Self {
        Self {
            grid,
            stream: StreamSolver::new(grid),
            pressure: PressureSolver::new(grid),
            cfl: 0.5,
        }
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn solve_stream(&self, omega_theta: &Array2<f64>) -> Result<Array2<f64>, EulerError> {
        self.stream.solve(omega_theta)
    }

    pub fn recover_pressure(&self, field: &AxisymField) -> Result<PressureField, EulerError> {
        self.pressure.recover(field)
    }

    pub fn diagnose(
        &self,
        field: &AxisymField,
    ) -> Result<(PressureField, AxisDiagnostics), EulerError> {
        let p = self.recover_pressure(field)?;
        let d = extract_axis(field, &p);
        Ok((p, d))
    }

    /// Largest step allowed by `dt <= cfl min(dr, dz) / max |v|`.
    pub fn stable_dt(&self, field: &AxisymField) -> f64 {
        let speed = field.max_meridional_speed();
        if speed == 0.0 {
            f64::INFINITY
        } else {
            self.cfl * self.grid.dr().min(self.grid.dz()) / speed
        }
    }

    pub fn step(&self, field: &AxisymField, dt: f64) -> Result<AxisymField, EulerError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(EulerError::InvalidInput(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let limit = self.stable_dt(field);
        if dt > limit * (1.0 + 1e-12) {
            return Err(EulerError::CflViolation { dt, limit });
        }
        let t = field.t;
        let (e0, u0) = (&field.eta, &field.u1);

        let (de, du) = self.rhs(field);
        let s1 = self.stage(t + dt, e0 + &(de * dt), u0 + &(du * dt))?;

        let (de, du) = self.rhs(&s1);
        let e2 = e0 * 0.75 + &((&s1.eta + &(de * dt)) * 0.25);
        let u2 = u0 * 0.75 + &((&s1.u1 + &(du * dt)) * 0.25);
        let s2 = self.stage(t + 0.5 * dt, e2, u2)?;

        let (de, du) = self.rhs(&s2);
        let e3 = e0 / 3.0 + &((&s2.eta + &(de * dt)) * (2.0 / 3.0));
        let u3 = u0 / 3.0 + &((&s2.u1 + &(du * dt)) * (2.0 / 3.0));
        self.stage(t + dt, e3, u3)
    }

    fn stage(&self, t: f64, eta: Array2<f64>, u1: Array2<f64>) -> Result<AxisymField, EulerError> {
        if eta.iter().chain(u1.iter()).any(|v| !v.is_finite()) {
            return Err(EulerError::NonFiniteField { t });
        }
        AxisymField::assemble(&self.stream, t, eta, u1)
    }

    /// Time derivatives of `(eta, u1)`:
    ///
    /// ```text
    /// d_t eta = -div(v eta) + d_z(u1^2)
    /// d_t u1  = -div(v u1) - 2 (v_r / r) u1
    /// ```
    ///
    /// with `div(v f) = (1/r) d_r(r v_r f) + d_z(v_z f)`, which on the axis becomes
    /// `2 lim(v_r f / r) + d_z(v_z f)`. Wall rows are held at zero.
    fn rhs(&self, f: &AxisymField) -> (Array2<f64>, Array2<f64>) {
        let g = &self.grid;
        let (nr, nz) = (g.nr, g.nz);
        let (dr, dz) = (g.dr(), g.dz());
        let (vr, vz) = (&f.v_r, &f.v_z);
        let (eta, u1) = (&f.eta, &f.u1);
        let mut de = Array2::zeros(g.shape());
        let mut du = Array2::zeros(g.shape());

        for j in 0..nz {
            let (jp, jm) = (g.jp(j), g.jm(j));
            let ax = |q: &Array2<f64>| {
                (vz[[0, jp]] * q[[0, jp]] - vz[[0, jm]] * q[[0, jm]]) / (2.0 * dz)
            };
            let rad = |q: &Array2<f64>| 2.0 * vr[[1, j]] * q[[1, j]] / dr;
            let lambda = (vz[[0, jp]] - vz[[0, jm]]) / (2.0 * dz);
            let swirl_src = (u1[[0, jp]].powi(2) - u1[[0, jm]].powi(2)) / (2.0 * dz);
            de[[0, j]] = -(rad(eta) + ax(eta)) + swirl_src;
            // v_r / r -> -lambda / 2 on the axis
            du[[0, j]] = -(rad(u1) + ax(u1)) + lambda * u1[[0, j]];
        }

        for i in 1..nr {
            let r = g.r(i);
            let (rp, rm) = (g.r(i + 1), g.r(i - 1));
            for j in 0..nz {
                let (jp, jm) = (g.jp(j), g.jm(j));
                let div = |q: &Array2<f64>| {
                    (rp * vr[[i + 1, j]] * q[[i + 1, j]] - rm * vr[[i - 1, j]] * q[[i - 1, j]])
                        / (2.0 * dr * r)
                        + (vz[[i, jp]] * q[[i, jp]] - vz[[i, jm]] * q[[i, jm]]) / (2.0 * dz)
                };
                let swirl_src = (u1[[i, jp]].powi(2) - u1[[i, jm]].powi(2)) / (2.0 * dz);
                de[[i, j]] = -div(eta) + swirl_src;
                du[[i, j]] = -div(u1) - 2.0 * (vr[[i, j]] / r) * u1[[i, j]];
            }
        }
        (de, du)
    }
}
