//! Ready-made initial data. All profiles decay like `exp(-r^2)` and so vanish at the
//! outer wall to rounding once `r_max >= 6`.

use super::AnalyticProfile;

/// Pure swirl `v_theta = omega r exp(-(r / width)^2)`, no meridional flow. An exact
/// steady state whose axis pressure curvature is `omega^2`.
pub fn rigid_swirl(omega: f64, width: f64) -> AnalyticProfile {
    AnalyticProfile::new(
        |_, _| 0.0,
        move |r, _| omega * r * (-(r / width).powi(2)).exp(),
    )
}

/// Meridional cells plus z-modulated swirl:
///
/// ```text
/// psi     = a r^2 exp(-r^2) (sin z + 0.3 cos 2z) / 2
/// v_theta = b r exp(-r^2) (1 + 0.5 cos z)
/// ```
///
/// Near the axis `v_z(0, z) = a (sin z + 0.3 cos 2z)` and `omega_bar = 2 b (1 + 0.5 cos z)`.
pub fn smooth_generic(a: f64, b: f64) -> AnalyticProfile {
    AnalyticProfile::new(
        move |r, z| 0.5 * a * r * r * (-r * r).exp() * (z.sin() + 0.3 * (2.0 * z).cos()),
        move |r, z| b * r * (-r * r).exp() * (1.0 + 0.5 * z.cos()),
    )
}

/// Axial stagnation flow `v_z(0, z) = a sin z` with uniform swirl `omega_bar = 2 b`
/// near the axis. The point `z = 0` is a fixed axis particle with strain `lambda = a`.
pub fn stagnation_swirl(a: f64, b: f64) -> AnalyticProfile {
    AnalyticProfile::new(
        move |r, z| 0.5 * a * r * r * (-r * r).exp() * z.sin(),
        move |r, _| b * r * (-r * r).exp(),
    )
}
