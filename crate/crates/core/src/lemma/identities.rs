use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cartesian_eval, Component, LemmaError, SyntheticField};

/// Stencil width used when none is given.
pub const DEFAULT_H: f64 = 1e-3;

/// Residuals below this are rounding noise; no order is estimated from them.
const ROUNDING_FLOOR: f64 = 1e-12;

/// Identities whose estimated order falls below this are flagged.
const SUSPECT_ORDER: f64 = 1.5;

/// Direction of the ray along which limits towards the axis are taken.
const RAY_ANGLE: f64 = 0.7;

/// Radius at which the finite-radius identities are evaluated.
const PROBE_RADIUS: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    // limits on the axis
    AxisTransverseVanishing,
    AxisCylindricalVanishing,
    AxisStrainSplit,
    AxisSwirlRate,
    AxisPressureGradientVanishing,
    AxisPressureCurvature,
    // finite radius, diagonal point (r / sqrt 2, r / sqrt 2)
    DiagonalShearSwirl,
    DiagonalStrainSum,
    DiagonalCrossSum,
    DiagonalCrossDifference,
    TransverseLaplacian,
    DiagonalPressureCross,
    // finite radius, exact under rotation by a quarter turn
    RotatedV1,
    RotatedV2,
    DiagonalRadial,
    DiagonalAzimuthal,
    #[serde(rename = "rotated-d1v3")]
    RotatedD1V3,
    #[serde(rename = "rotated-d2v3")]
    RotatedD2V3,
    #[serde(rename = "rotated-d1v1")]
    RotatedD1V1,
    #[serde(rename = "rotated-d1v2")]
    RotatedD1V2,
    RotatedPressureCross,
    RotatedPressureCurvature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    /// An `r -> 0` statement; residuals are truncation errors that must converge.
    AxisLimit,
    /// Holds at every `r > 0`; checked with finite differences on both sides.
    FiniteRadius,
    /// Holds at every `r > 0` and is evaluated with stencils mapped onto each other,
    /// so it is exact up to rounding.
    Rotation,
}

impl IdentityId {
    pub const ALL: [IdentityId; 22] = [
        Self::AxisTransverseVanishing,
        Self::AxisCylindricalVanishing,
        Self::AxisStrainSplit,
        Self::AxisSwirlRate,
        Self::AxisPressureGradientVanishing,
        Self::AxisPressureCurvature,
        Self::DiagonalShearSwirl,
        Self::DiagonalStrainSum,
        Self::DiagonalCrossSum,
        Self::DiagonalCrossDifference,
        Self::TransverseLaplacian,
        Self::DiagonalPressureCross,
        Self::RotatedV1,
        Self::RotatedV2,
        Self::DiagonalRadial,
        Self::DiagonalAzimuthal,
        Self::RotatedD1V3,
        Self::RotatedD2V3,
        Self::RotatedD1V1,
        Self::RotatedD1V2,
        Self::RotatedPressureCross,
        Self::RotatedPressureCurvature,
    ];

    pub fn kind(self) -> IdentityKind {
        use IdentityId::*;
        match self {
            AxisTransverseVanishing
            | AxisCylindricalVanishing
            | AxisStrainSplit
            | AxisSwirlRate
            | AxisPressureGradientVanishing
            | AxisPressureCurvature => IdentityKind::AxisLimit,
            DiagonalShearSwirl
            | DiagonalStrainSum
            | DiagonalCrossSum
            | DiagonalCrossDifference
            | TransverseLaplacian
            | DiagonalPressureCross => IdentityKind::FiniteRadius,
            _ => IdentityKind::Rotation,
        }
    }

    pub fn name(self) -> &'static str {
        use IdentityId::*;
        match self {
            AxisTransverseVanishing => "axis-transverse-vanishing",
            AxisCylindricalVanishing => "axis-cylindrical-vanishing",
            AxisStrainSplit => "axis-strain-split",
            AxisSwirlRate => "axis-swirl-rate",
            AxisPressureGradientVanishing => "axis-pressure-gradient-vanishing",
            AxisPressureCurvature => "axis-pressure-curvature",
            DiagonalShearSwirl => "diagonal-shear-swirl",
            DiagonalStrainSum => "diagonal-strain-sum",
            DiagonalCrossSum => "diagonal-cross-sum",
            DiagonalCrossDifference => "diagonal-cross-difference",
            TransverseLaplacian => "transverse-laplacian",
            DiagonalPressureCross => "diagonal-pressure-cross",
            RotatedV1 => "rotated-v1",
            RotatedV2 => "rotated-v2",
            DiagonalRadial => "diagonal-radial",
            DiagonalAzimuthal => "diagonal-azimuthal",
            RotatedD1V3 => "rotated-d1v3",
            RotatedD2V3 => "rotated-d2v3",
            RotatedD1V1 => "rotated-d1v1",
            RotatedD1V2 => "rotated-d1v2",
            RotatedPressureCross => "rotated-pressure-cross",
            RotatedPressureCurvature => "rotated-pressure-curvature",
        }
    }

    /// The statement being checked. Primes denote the point rotated by a quarter
    /// turn, `(x1', x2') = (-x2, x1)`; bars the diagonal point at the same radius.
    pub fn statement(self) -> &'static str {
        use IdentityId::*;
        match self {
            AxisTransverseVanishing => "on axis: v1 = v2 = d3 v1 = d3 v2 = d1 v3 = d2 v3 = 0",
            AxisCylindricalVanishing => "on axis: vr = vtheta = d3 vr = d3 vtheta = dr v3 = 0",
            AxisStrainSplit => "on axis: d1 v1 = d2 v2 = -d3 v3 / 2 = dr vr = lim vr / r",
            AxisSwirlRate => "on axis: d1 v2 = -d2 v1 = dr vtheta = lim vtheta / r",
            AxisPressureGradientVanishing => {
                "on axis: d1 p = d2 p = d1 d2 p = d1 d3 p = d2 d3 p = dr p = dr d3 p = 0"
            }
            AxisPressureCurvature => "on axis: d1^2 p = d2^2 p = dr^2 p = lim dr p / r",
            DiagonalShearSwirl => "d1 v1(xbar) - d2 v2(xbar) = vtheta / r - dr vtheta",
            DiagonalStrainSum => "d1 v1(xbar) + d2 v2(xbar) = vr / r + dr vr",
            DiagonalCrossSum => "d2 v1(xbar) + d1 v2(xbar) = -vr / r + dr vr",
            DiagonalCrossDifference => "d2 v1(xbar) - d1 v2(xbar) = -vtheta / r - dr vtheta",
            TransverseLaplacian => "d1^2 p + d2^2 p = dr p / r + dr^2 p",
            DiagonalPressureCross => "d1 d2 p(xbar) = -dr p / (2 r) + dr^2 p / 2",
            RotatedV1 => "v1(x') = -v2(x)",
            RotatedV2 => "v2(x') = v1(x)",
            DiagonalRadial => "v1(xbar) + v2(xbar) = sqrt(2) vr",
            DiagonalAzimuthal => "v1(xbar) - v2(xbar) = -sqrt(2) vtheta",
            RotatedD1V3 => "d1 v3(x') = -d2 v3(x)",
            RotatedD2V3 => "d2 v3(x') = d1 v3(x)",
            RotatedD1V1 => "d1 v1(x') = d2 v2(x)",
            RotatedD1V2 => "d1 v2(x') = -d2 v1(x)",
            RotatedPressureCross => "d1 d2 p(x') = -d1 d2 p(x)",
            RotatedPressureCurvature => "d1^2 p(x) = d2^2 p(x')",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = LemmaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| LemmaError::UnknownIdentity(s.to_string()))
    }
}

/// Finite-difference probes of a field.
struct Probe<'a> {
    f: &'a SyntheticField,
}

type Point = [f64; 3];

fn shift(x: Point, dir: usize, d: f64) -> Point {
    let mut y = x;
    y[dir] += d;
    y
}

impl Probe<'_> {
    fn at(&self, c: Component, x: Point) -> f64 {
        cartesian_eval(self.f, x[0], x[1], x[2]).get(c)
    }

    /// Centered first difference along axis `i` (0-based).
    fn d(&self, c: Component, x: Point, i: usize, h: f64) -> f64 {
        (self.at(c, shift(x, i, h)) - self.at(c, shift(x, i, -h))) / (2.0 * h)
    }

    fn dd(&self, c: Component, x: Point, i: usize, h: f64) -> f64 {
        (self.at(c, shift(x, i, h)) - 2.0 * self.at(c, x) + self.at(c, shift(x, i, -h))) / (h * h)
    }

    /// Mixed difference, summed as `(f++ + f--) - (f+- + f-+)` so that a quarter-turn
    /// rotation maps the stencil onto itself with the same rounding.
    fn dij(&self, c: Component, x: Point, i: usize, j: usize, h: f64) -> f64 {
        let f = |si: f64, sj: f64| self.at(c, shift(shift(x, i, si * h), j, sj * h));
        ((f(1.0, 1.0) + f(-1.0, -1.0)) - (f(1.0, -1.0) + f(-1.0, 1.0))) / (4.0 * h * h)
    }

    /// Centered `d_r` of a cylindrical profile at radius `r`.
    fn dr(&self, g: impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
        (g(r + h) - g(r - h)) / (2.0 * h)
    }

    fn drr(&self, g: impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
        (g(r + h) - 2.0 * g(r) + g(r - h)) / (h * h)
    }
}

/// Second-order one-sided `d_r` at the axis from `f(0), f(h), f(2h)`.
fn axis_dr(g: impl Fn(f64) -> f64, h: f64) -> f64 {
    (-3.0 * g(0.0) + 4.0 * g(h) - g(2.0 * h)) / (2.0 * h)
}

/// Second-order one-sided `d_r^2` at the axis from four samples.
fn axis_drr(g: impl Fn(f64) -> f64, h: f64) -> f64 {
    (2.0 * g(0.0) - 5.0 * g(h) + 4.0 * g(2.0 * h) - g(3.0 * h)) / (h * h)
}

/// `2 F(h) - F(2h)`: removes the linear term of a quantity that vanishes on the axis.
fn ray_limit(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    2.0 * f(h) - f(2.0 * h)
}

fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    hi - lo
}

/// Residual of one identity at height `z` with stencil width `h`: the spread of the
/// chain of quantities the identity claims to be equal.
pub fn check_identity(
    field: &SyntheticField,
    id: IdentityId,
    z: f64,
    h: f64,
) -> Result<f64, LemmaError> {
    use Component::*;
    use IdentityId::*;
    if !(h > 0.0) || !h.is_finite() {
        return Err(LemmaError::InvalidStep(h));
    }
    let pr = Probe { f: field };
    let axis: Point = [0.0, 0.0, z];
    let (c, s) = (RAY_ANGLE.cos(), RAY_ANGLE.sin());
    let on_ray = |rho: f64| -> Point { [rho * c, rho * s, z] };
    let rho = PROBE_RADIUS;
    let x: Point = [rho * c, rho * s, z];
    let xr: Point = [-x[1], x[0], z];
    let xb: Point = [rho / SQRT_2, rho / SQRT_2, z];
    let vr = |r: f64| field.vr(r, z);
    let vt = |r: f64| field.vtheta(r, z);
    let vz = |r: f64| field.vz(r, z);
    let p = |r: f64| field.p(r, z);
    let d3 = |g: fn(&SyntheticField, f64, f64) -> f64, r: f64, h: f64| {
        (g(field, r, z + h) - g(field, r, z - h)) / (2.0 * h)
    };

    let residual = match id {
        AxisTransverseVanishing => spread(&[
            0.0,
            ray_limit(|t| pr.at(V1, on_ray(t)), h),
            ray_limit(|t| pr.at(V2, on_ray(t)), h),
            ray_limit(|t| pr.d(V1, on_ray(t), 2, t), h),
            ray_limit(|t| pr.d(V2, on_ray(t), 2, t), h),
            ray_limit(|t| pr.d(V3, on_ray(t), 0, t), h),
            ray_limit(|t| pr.d(V3, on_ray(t), 1, t), h),
        ]),
        AxisCylindricalVanishing => spread(&[
            0.0,
            ray_limit(vr, h),
            ray_limit(vt, h),
            ray_limit(|t| d3(SyntheticField::vr, t, t), h),
            ray_limit(|t| d3(SyntheticField::vtheta, t, t), h),
            axis_dr(vz, h),
        ]),
        AxisStrainSplit => {
            let mut chain = vec![
                pr.d(V1, axis, 0, h),
                pr.d(V2, axis, 1, h),
                axis_dr(vr, h),
                vr(h) / h,
            ];
            if field.is_divergence_free() {
                chain.push(-0.5 * pr.d(V3, axis, 2, h));
            }
            spread(&chain)
        }
        AxisSwirlRate => spread(&[
            pr.d(V2, axis, 0, h),
            -pr.d(V1, axis, 1, h),
            axis_dr(vt, h),
            vt(h) / h,
        ]),
        AxisPressureGradientVanishing => spread(&[
            0.0,
            ray_limit(|t| pr.d(P, on_ray(t), 0, t), h),
            ray_limit(|t| pr.d(P, on_ray(t), 1, t), h),
            ray_limit(|t| pr.dij(P, on_ray(t), 0, 1, t), h),
            ray_limit(|t| pr.dij(P, on_ray(t), 0, 2, t), h),
            ray_limit(|t| pr.dij(P, on_ray(t), 1, 2, t), h),
            axis_dr(p, h),
            axis_dr(|r| d3(SyntheticField::p, r, h), h),
        ]),
        AxisPressureCurvature => spread(&[
            pr.dd(P, axis, 0, h),
            pr.dd(P, axis, 1, h),
            axis_drr(p, h),
            // centered d_r p at r = h, divided by h
            (p(2.0 * h) - p(0.0)) / (2.0 * h * h),
        ]),

        DiagonalShearSwirl => {
            let lhs = pr.d(V1, xb, 0, h) - pr.d(V2, xb, 1, h);
            (lhs - (vt(rho) / rho - pr.dr(vt, rho, h))).abs()
        }
        DiagonalStrainSum => {
            let lhs = pr.d(V1, xb, 0, h) + pr.d(V2, xb, 1, h);
            (lhs - (vr(rho) / rho + pr.dr(vr, rho, h))).abs()
        }
        DiagonalCrossSum => {
            let lhs = pr.d(V1, xb, 1, h) + pr.d(V2, xb, 0, h);
            (lhs - (-vr(rho) / rho + pr.dr(vr, rho, h))).abs()
        }
        DiagonalCrossDifference => {
            let lhs = pr.d(V1, xb, 1, h) - pr.d(V2, xb, 0, h);
            (lhs - (-vt(rho) / rho - pr.dr(vt, rho, h))).abs()
        }
        TransverseLaplacian => {
            let lhs = pr.dd(P, x, 0, h) + pr.dd(P, x, 1, h);
            (lhs - (pr.dr(p, rho, h) / rho + pr.drr(p, rho, h))).abs()
        }
        DiagonalPressureCross => {
            let lhs = pr.dij(P, xb, 0, 1, h);
            (lhs - (-pr.dr(p, rho, h) / (2.0 * rho) + 0.5 * pr.drr(p, rho, h))).abs()
        }

        RotatedV1 => (pr.at(V1, xr) + pr.at(V2, x)).abs(),
        RotatedV2 => (pr.at(V2, xr) - pr.at(V1, x)).abs(),
        DiagonalRadial => (pr.at(V1, xb) + pr.at(V2, xb) - SQRT_2 * vr(rho)).abs(),
        DiagonalAzimuthal => (pr.at(V1, xb) - pr.at(V2, xb) + SQRT_2 * vt(rho)).abs(),
        RotatedD1V3 => (pr.d(V3, xr, 0, h) + pr.d(V3, x, 1, h)).abs(),
        RotatedD2V3 => (pr.d(V3, xr, 1, h) - pr.d(V3, x, 0, h)).abs(),
        RotatedD1V1 => (pr.d(V1, xr, 0, h) - pr.d(V2, x, 1, h)).abs(),
        RotatedD1V2 => (pr.d(V2, xr, 0, h) + pr.d(V1, x, 1, h)).abs(),
        RotatedPressureCross => (pr.dij(P, xr, 0, 1, h) + pr.dij(P, x, 0, 1, h)).abs(),
        RotatedPressureCurvature => (pr.dd(P, x, 0, h) - pr.dd(P, xr, 1, h)).abs(),
    };
    if residual.is_finite() {
        Ok(residual)
    } else {
        Err(LemmaError::NonFinite {
            identity: id.name().to_string(),
            z,
        })
    }
}

/// One line of a lemma report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub z: f64,
    pub h: f64,
    pub residual: f64,
    /// `log2(residual(h) / residual(h/2))`; absent when both residuals sit at the
    /// rounding floor.
    pub order: Option<f64>,
    pub suspect: bool,
}

/// Every identity at every `z`, at widths `h` and `h / 2`. Limit and finite-radius
/// identities are flagged when their order drops below 1.5; rotation identities when
/// their residual leaves the rounding level.
pub fn full_report(
    field: &SyntheticField,
    z_samples: &[f64],
    h: f64,
) -> Result<Vec<IdentityReport>, LemmaError> {
    let jobs: Vec<(IdentityId, f64)> = IdentityId::ALL
        .iter()
        .flat_map(|&id| z_samples.iter().map(move |&z| (id, z)))
        .collect();
    jobs.into_par_iter()
        .map(|(id, z)| {
            let r1 = check_identity(field, id, z, h)?;
            let r2 = check_identity(field, id, z, 0.5 * h)?;
            let order = (r1.max(r2) > ROUNDING_FLOOR).then(|| (r1 / r2).log2());
            let suspect = match id.kind() {
                IdentityKind::Rotation => r1 > ROUNDING_FLOOR,
                _ => order.is_some_and(|o| !(o >= SUSPECT_ORDER)),
            };
            Ok(IdentityReport {
                identity: id,
                z,
                h,
                residual: r1,
                order,
                suspect,
            })
        })
        .collect()
}

/// On-axis `(lambda, omega_bar, q_rr)` of a synthetic field from the Cartesian values:
/// `d3 v3`, `2 d1 v2` and `d1^2 p`, all centered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisValues {
    pub lambda: f64,
    pub omega_bar: f64,
    pub q_rr: f64,
}

pub fn axis_values(field: &SyntheticField, z: f64, h: f64) -> AxisValues {
    let pr = Probe { f: field };
    let axis = [0.0, 0.0, z];
    AxisValues {
        lambda: pr.d(Component::V3, axis, 2, h),
        omega_bar: 2.0 * pr.d(Component::V2, axis, 0, h),
        q_rr: pr.dd(Component::P, axis, 0, h),
    }
}
