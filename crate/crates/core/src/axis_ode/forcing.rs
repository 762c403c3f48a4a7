use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::AxisOdeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    Linear,
    /// Fritsch-Carlson monotone cubic Hermite.
    #[default]
    MonotoneCubic,
}

/// Radial pressure curvature `dr^2 p` seen by one axis particle, as a function of time.
#[derive(Clone)]
pub enum PressureForcing {
    Constant(f64),
    Tabulated(TabulatedForcing),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for PressureForcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(q) => f.debug_tuple("Constant").field(q).finish(),
            Self::Tabulated(t) => f.debug_tuple("Tabulated").field(t).finish(),
            Self::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl Default for PressureForcing {
    fn default() -> Self {
        Self::Constant(0.0)
    }
}

impl PressureForcing {
    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Constant(q) => *q,
            Self::Tabulated(tab) => tab.eval(t),
            Self::Function(f) => f(t),
        }
    }

    /// Checks the forcing is defined on the closed interval between `t0` and `t1`.
    pub fn validate_on(&self, t0: f64, t1: f64) -> Result<(), AxisOdeError> {
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        match self {
            Self::Constant(q) if !q.is_finite() => Err(AxisOdeError::Forcing(format!(
                "constant forcing {q} is not finite"
            ))),
            Self::Tabulated(tab) => {
                let (a, b) = tab.span();
                if a <= lo && hi <= b {
                    Ok(())
                } else {
                    Err(AxisOdeError::Forcing(format!(
                        "table covers [{a}, {b}] but integration needs [{lo}, {hi}]"
                    )))
                }
            }
            _ => Ok(()),
        }
    }
}

/// Tabulated samples `(t_i, q_i)` with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedForcing {
    times: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    interp: Interpolation,
}

impl TabulatedForcing {
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        interp: Interpolation,
    ) -> Result<Self, AxisOdeError> {
        if times.len() != values.len() {
            return Err(AxisOdeError::Forcing(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(AxisOdeError::Forcing("need at least two samples".into()));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(AxisOdeError::Forcing("samples must be finite".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(AxisOdeError::Forcing(
                "sample times must be strictly increasing".into(),
            ));
        }
        let slopes = match interp {
            Interpolation::Linear => Vec::new(),
            Interpolation::MonotoneCubic => fritsch_carlson_slopes(&times, &values),
        };
        Ok(Self {
            times,
            values,
            slopes,
            interp,
        })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interp
    }

    /// Value at `t`; clamped to the end samples outside the table.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.values[0];
        }
        if t >= self.times[n - 1] {
            return self.values[n - 1];
        }
        let k = self.times.partition_point(|&x| x <= t) - 1;
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        match self.interp {
            Interpolation::Linear => y0 + s * (y1 - y0),
            Interpolation::MonotoneCubic => {
                let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
            }
        }
    }
}

fn fritsch_carlson_slopes(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let delta: Vec<f64> = (0..n - 1)
        .map(|k| (y[k + 1] - y[k]) / (t[k + 1] - t[k]))
        .collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        m[k] = if delta[k - 1] * delta[k] <= 0.0 {
            0.0
        } else {
            0.5 * (delta[k - 1] + delta[k])
        };
    }
    for k in 0..n - 1 {
        if delta[k] == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let a = m[k] / delta[k];
        let b = m[k + 1] / delta[k];
        // keep (a, b) inside the circle of radius 3
        let r2 = a * a + b * b;
        if r2 > 9.0 {
            let tau = 3.0 / r2.sqrt();
            m[k] = tau * a * delta[k];
            m[k + 1] = tau * b * delta[k];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(TabulatedForcing::new(vec![0.0], vec![1.0], Interpolation::Linear).is_err());
        assert!(
            TabulatedForcing::new(vec![0.0, 0.0], vec![1.0, 2.0], Interpolation::Linear).is_err()
        );
        assert!(TabulatedForcing::new(vec![0.0, 1.0], vec![1.0], Interpolation::Linear).is_err());
    }

    #[test]
    fn coverage_is_checked() {
        let tab =
            TabulatedForcing::new(vec![0.0, 1.0], vec![0.0, 1.0], Interpolation::Linear).unwrap();
        let f = PressureForcing::Tabulated(tab);
        assert!(f.validate_on(0.0, 1.0).is_ok());
        assert!(f.validate_on(0.0, 1.5).is_err());
        assert_eq!(f.eval(0.25), 0.25);
    }

    #[test]
    fn cubic_reproduces_linear_data() {
        let t: Vec<f64> = (0..6).map(|k| k as f64 * 0.3).collect();
        let y: Vec<f64> = t.iter().map(|x| 2.0 * x - 1.0).collect();
        let tab = TabulatedForcing::new(t, y, Interpolation::MonotoneCubic).unwrap();
        for k in 0..50 {
            let x = k as f64 * 0.03;
            assert!((tab.eval(x) - (2.0 * x - 1.0)).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn monotone_cubic_does_not_overshoot(
            steps in prop::collection::vec(0.0f64..1.0, 3..12),
            gaps in prop::collection::vec(0.05f64..1.0, 12),
        ) {
            // nondecreasing, nonnegative data
            let mut y = vec![0.0];
            for s in &steps { let last = *y.last().unwrap(); y.push(last + s); }
            let mut t = vec![0.0];
            for g in gaps.iter().take(y.len() - 1) { let last = *t.last().unwrap(); t.push(last + g); }
            let tab = TabulatedForcing::new(t.clone(), y.clone(), Interpolation::MonotoneCubic).unwrap();
            let (a, b) = tab.span();
            let mut prev = tab.eval(a);
            for k in 1..=400 {
                let x = a + (b - a) * k as f64 / 400.0;
                let v = tab.eval(x);
                prop_assert!(v >= prev - 1e-12);
                prop_assert!(v >= -1e-12);
                prev = v;
            }
        }
    }
}
