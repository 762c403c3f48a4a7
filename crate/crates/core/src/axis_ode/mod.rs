//! Reduced dynamics on the symmetry axis.
//!
//! On the axis of an axisymmetric flow the strain tensor, vorticity and pressure
//! hessian collapse to diagonal/axial forms, and the evolution of the axial strain
//! `lambda = d3 v3` and the axis vorticity `omega_bar = 2 dr v_theta` along an axis
//! particle path becomes a pair of ODEs driven by the radial pressure curvature
//! `q = dr^2 p`:
//!
//! ```text
//! D lambda / Dt    = lambda^2/2 - omega_bar^2/2 + 2 q
//! D omega_bar / Dt = lambda * omega_bar
//! ```
//!
//! With `q = 0` this is the Constantin-Lax-Majda system, which the complex variable
//! `theta = lambda + i omega_bar` turns into the Riccati equation `theta' = theta^2/2`.

mod forcing;
mod integrator;

pub use forcing::{Interpolation, PressureForcing, TabulatedForcing};
pub use integrator::{
    integrate, integrate_interval, IntegratorConfig, StepMode, TerminalStatus, TrajectoryRecord,
    TrajectorySample,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Modulus of `2 - theta0 t` below which the closed form is treated as singular.
pub const SINGULARITY_EPSILON: f64 = 1e-12;

/// `|omega0|` at or below this value counts as an exactly vanishing axis vorticity.
pub const EXACT_ZERO_VORTICITY: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AxisOdeError {
    #[error("axis state must be finite (lambda = {lambda}, omega_bar = {omega_bar})")]
    NonFinite { lambda: f64, omega_bar: f64 },
    #[error("closed form is singular at t = {t}: |2 - theta0 t| = {modulus:e}")]
    BlowUpSingularity { t: f64, modulus: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid forcing: {0}")]
    Forcing(String),
    #[error("invalid integrator configuration: {0}")]
    Config(String),
}

/// Axial strain and axis vorticity at one point of the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisState {
    pub lambda: f64,
    pub omega_bar: f64,
}

impl AxisState {
    pub fn new(lambda: f64, omega_bar: f64) -> Result<Self, AxisOdeError> {
        if lambda.is_finite() && omega_bar.is_finite() {
            Ok(Self { lambda, omega_bar })
        } else {
            Err(AxisOdeError::NonFinite { lambda, omega_bar })
        }
    }

    pub const fn zero() -> Self {
        Self {
            lambda: 0.0,
            omega_bar: 0.0,
        }
    }

    /// `max(|lambda|, |omega_bar|)`, the quantity compared against the blow-up threshold.
    pub fn magnitude(&self) -> f64 {
        self.lambda.abs().max(self.omega_bar.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.lambda.is_finite() && self.omega_bar.is_finite()
    }
}

/// `theta = lambda + i omega_bar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaValue {
    pub re: f64,
    pub im: f64,
}

impl ThetaValue {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(self) -> f64 {
        self.as_complex().norm()
    }
}

impl From<AxisState> for ThetaValue {
    fn from(s: AxisState) -> Self {
        Self::new(s.lambda, s.omega_bar)
    }
}

impl From<ThetaValue> for AxisState {
    fn from(t: ThetaValue) -> Self {
        Self {
            lambda: t.re,
            omega_bar: t.im,
        }
    }
}

impl From<Complex64> for ThetaValue {
    fn from(c: Complex64) -> Self {
        Self::new(c.re, c.im)
    }
}

/// Riccati solution `theta(t) = 2 theta0 / (2 - theta0 t)`.
pub fn closed_form_theta(theta0: ThetaValue, t: f64) -> Result<ThetaValue, AxisOdeError> {
    closed_form_theta_with(theta0, t, SINGULARITY_EPSILON)
}

pub fn closed_form_theta_with(
    theta0: ThetaValue,
    t: f64,
    epsilon: f64,
) -> Result<ThetaValue, AxisOdeError> {
    let th0 = theta0.as_complex();
    let denom = Complex64::new(2.0, 0.0) - th0 * t;
    let modulus = denom.norm();
    if modulus < epsilon {
        return Err(AxisOdeError::BlowUpSingularity { t, modulus });
    }
    Ok((th0 * 2.0 / denom).into())
}

/// Real form of the Riccati solution:
///
/// ```text
/// omega_bar(t) = 4 omega0 / D,  lambda(t) = (4 lambda0 - 2 (lambda0^2 + omega0^2) t) / D,
/// D = (2 - lambda0 t)^2 + omega0^2 t^2 = |2 - theta0 t|^2
/// ```
pub fn closed_form_state(lambda0: f64, omega0: f64, t: f64) -> Result<AxisState, AxisOdeError> {
    closed_form_state_with(lambda0, omega0, t, SINGULARITY_EPSILON)
}

pub fn closed_form_state_with(
    lambda0: f64,
    omega0: f64,
    t: f64,
    epsilon: f64,
) -> Result<AxisState, AxisOdeError> {
    let a = 2.0 - lambda0 * t;
    let b = omega0 * t;
    let denom = a * a + b * b;
    let modulus = denom.sqrt();
    if modulus < epsilon {
        return Err(AxisOdeError::BlowUpSingularity { t, modulus });
    }
    let lambda = (4.0 * lambda0 - 2.0 * (lambda0 * lambda0 + omega0 * omega0) * t) / denom;
    let omega_bar = 4.0 * omega0 / denom;
    AxisState::new(lambda, omega_bar)
}

/// Singular time of the unforced system: `2 / lambda0` when `omega0` vanishes and
/// `lambda0 > 0`, otherwise the denominator stays positive for all `t >= 0`.
pub fn blowup_time(lambda0: f64, omega0: f64) -> Option<f64> {
    if omega0.abs() <= EXACT_ZERO_VORTICITY && lambda0 > 0.0 {
        Some(2.0 / lambda0)
    } else {
        None
    }
}

/// Closest approach of the closed form to its singularity for small but nonzero `omega0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearBlowup {
    /// Time at which `|2 - theta0 t|` is smallest.
    pub t_min: f64,
    /// `|2 - theta0 t_min|`.
    pub min_modulus: f64,
    /// `|theta(t_min)|`, the largest modulus reached by the solution.
    pub peak_modulus: f64,
}

/// Minimizes `(2 - lambda0 t)^2 + omega0^2 t^2` over `t > 0`. The minimizer is
/// `t* = 2 lambda0 / (lambda0^2 + omega0^2)`, which is positive only for `lambda0 > 0`.
pub fn near_blowup_time(lambda0: f64, omega0: f64) -> Option<NearBlowup> {
    if !(lambda0 > 0.0) || !omega0.is_finite() {
        return None;
    }
    let m2 = lambda0 * lambda0 + omega0 * omega0;
    let t_min = 2.0 * lambda0 / m2;
    let a = 2.0 - lambda0 * t_min;
    let b = omega0 * t_min;
    let min_modulus = (a * a + b * b).sqrt();
    let peak_modulus = if min_modulus > 0.0 {
        2.0 * m2.sqrt() / min_modulus
    } else {
        f64::INFINITY
    };
    Some(NearBlowup {
        t_min,
        min_modulus,
        peak_modulus,
    })
}

/// Unforced right-hand side `(lambda^2/2 - omega_bar^2/2, lambda omega_bar)`.
pub fn clm_rhs(state: AxisState) -> AxisState {
    forced_rhs(state, 0.0)
}

/// Right-hand side with the radial pressure curvature `q` acting on the strain.
pub fn forced_rhs(state: AxisState, q: f64) -> AxisState {
    let AxisState { lambda, omega_bar } = state;
    AxisState {
        lambda: 0.5 * (lambda * lambda - omega_bar * omega_bar) + 2.0 * q,
        omega_bar: lambda * omega_bar,
    }
}

/// Strain evolution from the axial component, `-lambda^2 - d3^2 p`.
pub fn forced_rhs_axial(state: AxisState, p33: f64) -> f64 {
    -state.lambda * state.lambda - p33
}

/// Comparison bound `2 lambda0 / (2 - t lambda0)` for `omega0 = 0` and `q >= 0`.
pub fn lower_bound_lambda(lambda0: f64, t: f64) -> Result<f64, AxisOdeError> {
    if !(lambda0 > 0.0) {
        return Err(AxisOdeError::Domain(format!(
            "lower bound needs lambda0 > 0, got {lambda0}"
        )));
    }
    if t * lambda0 >= 2.0 {
        return Err(AxisOdeError::Domain(format!(
            "t = {t} is at or past the singular time 2/lambda0 = {}",
            2.0 / lambda0
        )));
    }
    Ok(2.0 * lambda0 / (2.0 - t * lambda0))
}

/// `omega0 * exp(int_0^T lambda dt)` with the trapezoidal rule over `(t, lambda)` samples.
pub fn vorticity_exponential(omega0: f64, lambda_samples: &[(f64, f64)]) -> f64 {
    if omega0 == 0.0 {
        return 0.0;
    }
    let integral: f64 = lambda_samples
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum();
    omega0 * integral.exp()
}

/// `(lambda^2 + omega_bar^2) / omega_bar`, conserved by the unforced system.
pub fn invariant_q(state: AxisState) -> Result<f64, AxisOdeError> {
    if state.omega_bar == 0.0 {
        return Err(AxisOdeError::Domain(
            "first integral undefined for omega_bar = 0".into(),
        ));
    }
    Ok((state.lambda * state.lambda + state.omega_bar * state.omega_bar) / state.omega_bar)
}

/// Initial axis data as functions of the axis label `a`.
pub struct InitialProfile {
    lambda0: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    omega0: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl InitialProfile {
    pub fn new(
        lambda0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        omega0: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            lambda0: Box::new(lambda0),
            omega0: Box::new(omega0),
        }
    }

    pub fn state_at(&self, a: f64) -> Result<AxisState, AxisOdeError> {
        AxisState::new((self.lambda0)(a), (self.omega0)(a))
    }
}

impl std::fmt::Debug for InitialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InitialProfile").finish_non_exhaustive()
    }
}

/// Membership of an axis label in the blow-up sets.
///
/// `InS` (vanishing vorticity, positive strain, nonnegative radial pressure curvature)
/// is a subset of `InS0` (vanishing vorticity, positive strain).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    InS,
    InS0,
    Neither,
}

impl Membership {
    pub fn in_s(self) -> bool {
        matches!(self, Membership::InS)
    }

    pub fn in_s0(self) -> bool {
        matches!(self, Membership::InS | Membership::InS0)
    }
}

pub fn classify_initial_point(profile: &InitialProfile, a: f64, q0: f64) -> Membership {
    let Ok(s) = profile.state_at(a) else {
        return Membership::Neither;
    };
    if s.omega_bar == 0.0 && s.lambda > 0.0 {
        if q0 >= 0.0 {
            Membership::InS
        } else {
            Membership::InS0
        }
    } else {
        Membership::Neither
    }
}

/// The two candidate lower limits on `T1(a)`: the theorem statement uses `1/lambda0`
/// while the comparison argument yields `2/lambda0`. Both are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisThresholds {
    pub statement: f64,
    pub proof: f64,
}

impl HypothesisThresholds {
    pub fn for_lambda0(lambda0: f64) -> Option<Self> {
        (lambda0 > 0.0).then(|| Self {
            statement: 1.0 / lambda0,
            proof: 2.0 / lambda0,
        })
    }

    /// `(T1 >= 1/lambda0, T1 >= 2/lambda0)`.
    pub fn check(&self, t1: f64) -> (bool, bool) {
        (t1 >= self.statement, t1 >= self.proof)
    }
}

/// First time the sampled radial pressure curvature becomes negative, with linear
/// interpolation of the crossing. `f64::INFINITY` when it never does.
pub fn hypothesis_violation_time(q_samples: &[(f64, f64)]) -> f64 {
    match q_samples.first() {
        None => return f64::INFINITY,
        Some(&(t0, q0)) if q0 < 0.0 => return t0,
        _ => {}
    }
    for w in q_samples.windows(2) {
        let (ta, qa) = w[0];
        let (tb, qb) = w[1];
        if qb < 0.0 {
            let frac = if qa > qb { qa / (qa - qb) } else { 1.0 };
            return ta + frac * (tb - ta);
        }
    }
    f64::INFINITY
}
