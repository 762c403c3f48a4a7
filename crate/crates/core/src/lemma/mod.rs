//! Independent numerical check of the on-axis identities satisfied by smooth
//! axisymmetric vector fields and pressures.
//!
//! A [`SyntheticField`] is given by its cylindrical profiles. [`cartesian_eval`] maps
//! it to Cartesian components, and every identity is checked with centered finite
//! differences of those Cartesian values around a point on (or near) the axis. None of
//! the stencils are shared with the PDE solver.

mod identities;

pub use identities::{
    axis_values, check_identity, full_report, AxisValues, IdentityId, IdentityKind, IdentityReport,
    DEFAULT_H,
};

use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LemmaError {
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("profile `{profile}` breaks axis parity at r = {r}, z = {z}")]
    ParityViolation {
        profile: &'static str,
        r: f64,
        z: f64,
    },
    #[error("stencil width must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("non-finite residual for `{identity}` at z = {z}")]
    NonFinite { identity: String, z: f64 },
}

type Profile = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

const PARITY_TOL: f64 = 1e-10;

/// Cylindrical profiles `(v_r, v_theta, v_z, p)` as functions of `(r, z)`. `v_r` and
/// `v_theta` must be odd in `r`, `v_z` and `p` even; profiles are evaluated at
/// negative `r` only to verify this.
#[derive(Clone)]
pub struct SyntheticField {
    vr: Profile,
    vtheta: Profile,
    vz: Profile,
    p: Profile,
    divergence_free: bool,
}

impl std::fmt::Debug for SyntheticField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SyntheticField")
            .field("divergence_free", &self.divergence_free)
            .finish_non_exhaustive()
    }
}

impl SyntheticField {
    /// Builds a field and checks axis parity by sampling.
    pub fn new(
        vr: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        vtheta: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        vz: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        p: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        divergence_free: bool,
    ) -> Result<Self, LemmaError> {
        let field = Self::new_unchecked(vr, vtheta, vz, p, divergence_free);
        field.check_parity()?;
        Ok(field)
    }

    /// Skips the parity check. Meant for negative controls.
    pub fn new_unchecked(
        vr: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        vtheta: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        vz: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        p: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        divergence_free: bool,
    ) -> Self {
        Self {
            vr: Arc::new(vr),
            vtheta: Arc::new(vtheta),
            vz: Arc::new(vz),
            p: Arc::new(p),
            divergence_free,
        }
    }

    /// Divergence-free meridional cell from the stream function
    /// `psi = r^2 exp(-alpha r^2) s(z) / 2`, swirl `r exp(-beta r^2) g(z)` and pressure
    /// `p(r, z)`:
    ///
    /// ```text
    /// v_r = -r exp(-alpha r^2) s'(z) / 2,   v_z = exp(-alpha r^2) (1 - alpha r^2) s(z)
    /// ```
    pub fn swirling_cell(
        alpha: f64,
        s: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static,
        ds: impl Fn(f64) -> f64 + Send + Sync + 'static,
        beta: f64,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        p: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, LemmaError> {
        Self::new(
            move |r, z| -0.5 * r * (-alpha * r * r).exp() * ds(z),
            move |r, z| r * (-beta * r * r).exp() * g(z),
            move |r, z| (-alpha * r * r).exp() * (1.0 - alpha * r * r) * s(z),
            p,
            true,
        )
    }

    /// Three unrelated smooth, parity-correct, divergence-free fields with swirl.
    pub fn presets() -> Vec<(&'static str, SyntheticField)> {
        let a = Self::swirling_cell(
            1.0,
            f64::sin,
            f64::cos,
            1.0,
            |z| 1.0 + 0.5 * z.cos(),
            |r, z| z.cos() * (-r * r).exp(),
        );
        let b = Self::swirling_cell(
            0.5,
            |z| (2.0 * z + 0.5).cos() + 0.3,
            |z| -2.0 * (2.0 * z + 0.5).sin(),
            0.7,
            |z| z.sin() + 2.0,
            |r, z| (1.0 + 0.5 * z.sin()) * (-0.5 * r * r).exp() + 0.3 * r.powi(4),
        );
        let c = Self::swirling_cell(
            2.0,
            |z| z.sin().exp(),
            |z| z.cos() * z.sin().exp(),
            1.5,
            |z| (2.0 * z).cos() - 0.4,
            |r, z| (2.0 + z.cos()).ln() * r * r * (-r * r).exp() - (1.0 + r * r).sqrt(),
        );
        vec![
            ("gaussian-cell", a.expect("parity-correct by construction")),
            ("wide-cell", b.expect("parity-correct by construction")),
            ("narrow-cell", c.expect("parity-correct by construction")),
        ]
    }

    pub fn vr(&self, r: f64, z: f64) -> f64 {
        (self.vr)(r, z)
    }

    pub fn vtheta(&self, r: f64, z: f64) -> f64 {
        (self.vtheta)(r, z)
    }

    pub fn vz(&self, r: f64, z: f64) -> f64 {
        (self.vz)(r, z)
    }

    pub fn p(&self, r: f64, z: f64) -> f64 {
        (self.p)(r, z)
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    fn check_parity(&self) -> Result<(), LemmaError> {
        let zs = (0..8).map(|k| 0.8 * k as f64 - 0.3);
        for z in zs {
            for (name, f) in [("v_r", &self.vr), ("v_theta", &self.vtheta)] {
                if f(0.0, z).abs() > PARITY_TOL {
                    return Err(LemmaError::ParityViolation {
                        profile: name,
                        r: 0.0,
                        z,
                    });
                }
            }
            for r in [1e-3, 0.1, 0.5] {
                let checks: [(&'static str, f64); 4] = [
                    ("v_r", self.vr(r, z) + self.vr(-r, z)),
                    ("v_theta", self.vtheta(r, z) + self.vtheta(-r, z)),
                    ("v_z", self.vz(r, z) - self.vz(-r, z)),
                    ("p", self.p(r, z) - self.p(-r, z)),
                ];
                for (name, defect) in checks {
                    if !(defect.abs() <= PARITY_TOL) {
                        return Err(LemmaError::ParityViolation {
                            profile: name,
                            r,
                            z,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Cartesian components and pressure at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianSample {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub p: f64,
}

impl CartesianSample {
    fn get(&self, c: Component) -> f64 {
        match c {
            Component::V1 => self.v1,
            Component::V2 => self.v2,
            Component::V3 => self.v3,
            Component::P => self.p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Component {
    V1,
    V2,
    V3,
    P,
}

/// `v1 = (x1/r) v_r - (x2/r) v_theta`, `v2 = (x2/r) v_r + (x1/r) v_theta`. On the axis
/// itself `v1 = v2 = 0`.
pub fn cartesian_eval(field: &SyntheticField, x1: f64, x2: f64, x3: f64) -> CartesianSample {
    let r = (x1 * x1 + x2 * x2).sqrt();
    if r == 0.0 {
        return CartesianSample {
            v1: 0.0,
            v2: 0.0,
            v3: field.vz(0.0, x3),
            p: field.p(0.0, x3),
        };
    }
    let (vr, vt) = (field.vr(r, x3), field.vtheta(r, x3));
    let (c, s) = (x1 / r, x2 / r);
    CartesianSample {
        v1: c * vr - s * vt,
        v2: s * vr + c * vt,
        v3: field.vz(r, x3),
        p: field.p(r, x3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(vr: fn(f64, f64) -> f64, vt: fn(f64, f64) -> f64) -> SyntheticField {
        SyntheticField::new(vr, vt, |_, _| 1.0, |_, _| 0.0, false).unwrap()
    }

    #[test]
    fn radial_unit_vector() {
        let s = cartesian_eval(&field(|r, _| r, |_, _| 0.0), 1.0, 0.0, 0.0);
        assert_eq!((s.v1, s.v2), (1.0, 0.0));
    }

    #[test]
    fn azimuthal_unit_vector() {
        let s = cartesian_eval(&field(|_, _| 0.0, |r, _| r), 0.0, 1.0, 0.0);
        assert_eq!((s.v1, s.v2), (-1.0, 0.0));
    }

    #[test]
    fn axis_points_have_no_transverse_velocity() {
        for (_, f) in SyntheticField::presets() {
            for z in [-1.0, 0.0, 2.5] {
                let s = cartesian_eval(&f, 0.0, 0.0, z);
                assert_eq!((s.v1, s.v2), (0.0, 0.0));
                assert_eq!(s.v3, f.vz(0.0, z));
            }
        }
    }

    #[test]
    fn parity_is_checked() {
        let bad = SyntheticField::new(|_, _| 1.0, |_, _| 0.0, |_, _| 0.0, |_, _| 0.0, false);
        assert!(matches!(
            bad,
            Err(LemmaError::ParityViolation { profile: "v_r", .. })
        ));
        let bad = SyntheticField::new(|_, _| 0.0, |_, _| 0.0, |r, _| r, |_, _| 0.0, false);
        assert!(matches!(
            bad,
            Err(LemmaError::ParityViolation { profile: "v_z", .. })
        ));
        let bad = SyntheticField::new(|_, _| 0.0, |_, _| 0.0, |_, _| 0.0, |r, _| r.powi(3), false);
        assert!(matches!(
            bad,
            Err(LemmaError::ParityViolation { profile: "p", .. })
        ));
    }

    #[test]
    fn presets_are_divergence_free() {
        // (1/r) d_r(r v_r) + d_z v_z by centered differences of the profiles
        let h = 1e-4;
        for (name, f) in SyntheticField::presets() {
            for (r, z) in [(0.3, 0.2), (1.1, -2.0), (0.05, 1.0)] {
                let rad = ((r + h) * f.vr(r + h, z) - (r - h) * f.vr(r - h, z)) / (2.0 * h * r);
                let ax = (f.vz(r, z + h) - f.vz(r, z - h)) / (2.0 * h);
                assert!(
                    (rad + ax).abs() < 1e-6,
                    "{name} at ({r}, {z}): {}",
                    rad + ax
                );
            }
        }
    }
}
