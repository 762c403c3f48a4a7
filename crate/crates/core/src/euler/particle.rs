use super::EulerError;

/// Periodic 4-point cubic interpolation on a uniform grid `z_j = j * period / n`.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicCubic {
    pub period: f64,
}

impl PeriodicCubic {
    pub fn new(period: f64) -> Self {
        Self { period }
    }

    pub fn eval(&self, values: &[f64], z: f64) -> f64 {
        let n = values.len();
        let h = self.period / n as f64;
        let s = z.rem_euclid(self.period) / h;
        let j = s.floor();
        let x = s - j;
        let j = j as usize % n;
        let at = |k: isize| values[(j as isize + k).rem_euclid(n as isize) as usize];
        let (fm, f0, f1, f2) = (at(-1), at(0), at(1), at(2));
        // Lagrange weights on nodes -1, 0, 1, 2
        let wm = -x * (x - 1.0) * (x - 2.0) / 6.0;
        let w0 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        let w1 = -(x + 1.0) * x * (x - 2.0) / 2.0;
        let w2 = (x + 1.0) * x * (x - 1.0) / 6.0;
        wm * fm + w0 * f0 + w1 * f1 + w2 * f2
    }
}

/// Axis velocity `v_z(0, z_j, t_k)` at increasing times; linear in time between them.
#[derive(Debug, Clone)]
pub struct AxisVelocityHistory {
    interp: PeriodicCubic,
    times: Vec<f64>,
    slices: Vec<Vec<f64>>,
}

impl AxisVelocityHistory {
    pub fn new(z_period: f64) -> Self {
        Self {
            interp: PeriodicCubic::new(z_period),
            times: Vec::new(),
            slices: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, v_axis: Vec<f64>) -> Result<(), EulerError> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(EulerError::InvalidInput(format!(
                    "history times must increase: {t} after {last}"
                )));
            }
            if v_axis.len() != self.slices[0].len() {
                return Err(EulerError::InvalidInput("slice length changed".into()));
            }
        }
        if v_axis.len() < 4 {
            return Err(EulerError::InvalidInput(
                "need at least 4 axial nodes".into(),
            ));
        }
        self.times.push(t);
        self.slices.push(v_axis);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn z_period(&self) -> f64 {
        self.interp.period
    }

    fn velocity(&self, k: usize, t: f64, z: f64) -> f64 {
        let a = self.interp.eval(&self.slices[k], z);
        if k + 1 == self.times.len() {
            return a;
        }
        let b = self.interp.eval(&self.slices[k + 1], z);
        let s = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        a + s * (b - a)
    }
}

/// Path `X(a, t_k)` of the axis particle starting at `a` at the first history time,
/// one position per history time, wrapped into `[0, z_period)`. Each interval is
/// covered by `substeps` classical RK4 steps.
pub fn advect_axis_particle(a: f64, history: &AxisVelocityHistory, substeps: usize) -> Vec<f64> {
    let period = history.z_period();
    let times = history.times();
    let substeps = substeps.max(1);
    let mut x = a;
    let mut path = Vec::with_capacity(times.len());
    if times.is_empty() {
        return path;
    }
    path.push(x.rem_euclid(period));
    for k in 0..times.len() - 1 {
        let h = (times[k + 1] - times[k]) / substeps as f64;
        for s in 0..substeps {
            let t = times[k] + s as f64 * h;
            let v = |t: f64, z: f64| history.velocity(k, t, z);
            let k1 = v(t, x);
            let k2 = v(t + 0.5 * h, x + 0.5 * h * k1);
            let k3 = v(t + 0.5 * h, x + 0.5 * h * k2);
            let k4 = v(t + h, x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        path.push(x.rem_euclid(period));
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn history(n: usize, times: &[f64], v: impl Fn(f64, f64) -> f64) -> AxisVelocityHistory {
        let period = 2.0 * PI;
        let mut h = AxisVelocityHistory::new(period);
        for &t in times {
            let slice = (0..n).map(|j| v(t, j as f64 * period / n as f64)).collect();
            h.push(t, slice).unwrap();
        }
        h
    }

    #[test]
    fn cubic_is_exact_on_nodes_and_converges() {
        let c = PeriodicCubic::new(2.0 * PI);
        let err = |n: usize| {
            let v: Vec<f64> = (0..n)
                .map(|j| (j as f64 * 2.0 * PI / n as f64).sin())
                .collect();
            assert_eq!(c.eval(&v, 3.0 * 2.0 * PI / n as f64), v[3]);
            (0..97)
                .map(|k| {
                    let z = -1.0 + 0.1 * k as f64;
                    (c.eval(&v, z) - z.sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(32) / err(64);
        assert!((12.0..20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn zero_velocity_keeps_particle_still() {
        let h = history(32, &[0.0, 0.5, 1.0], |_, _| 0.0);
        assert_eq!(advect_axis_particle(1.25, &h, 4), vec![1.25; 3]);
    }

    #[test]
    fn uniform_translation_wraps() {
        let c = 1.7;
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
        let h = history(32, &times, |_, _| c);
        let path = advect_axis_particle(5.0, &h, 2);
        for (t, x) in times.iter().zip(&path) {
            let want = (5.0 + c * t).rem_euclid(2.0 * PI);
            assert!((x - want).abs() < 1e-12, "{x} vs {want}");
        }
    }

    #[test]
    fn steady_sine_flow_matches_analytic_path() {
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.1).collect();
        let h = history(512, &times, |_, z| z.sin());
        for a in [0.3, 1.0, 2.5] {
            let path = advect_axis_particle(a, &h, 8);
            for (t, x) in times.iter().zip(&path) {
                let want = 2.0 * ((a / 2.0).tan() * t.exp()).atan();
                assert!((x - want).abs() < 1e-6, "a {a} t {t}: {x} vs {want}");
            }
        }
    }

    #[test]
    fn time_dependent_velocity_is_interpolated() {
        // v = t: linear in time is reproduced exactly, X = a + t^2 / 2
        let times = [0.0, 0.25, 0.5, 1.0];
        let h = history(16, &times, |t, _| t);
        let path = advect_axis_particle(0.5, &h, 3);
        for (t, x) in times.iter().zip(&path) {
            assert!((x - (0.5 + 0.5 * t * t)).abs() < 1e-13);
        }
    }

    #[test]
    fn non_increasing_times_are_rejected() {
        let mut h = AxisVelocityHistory::new(1.0);
        h.push(0.0, vec![0.0; 8]).unwrap();
        assert!(h.push(0.0, vec![0.0; 8]).is_err());
        assert!(h.push(1.0, vec![0.0; 7]).is_err());
    }
}
