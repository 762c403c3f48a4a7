use serde::{Deserialize, Serialize};

use super::EulerError;

/// Uniform (r, z) grid: radial nodes `r_i = i dr, i = 0..=nr` (node 0 is the axis,
/// node `nr` the outer wall) and periodic axial nodes `z_j = j dz, j = 0..nz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nr: usize,
    pub nz: usize,
    pub r_max: f64,
    pub z_period: f64,
}

impl Grid2D {
    pub fn new(nr: usize, nz: usize, r_max: f64, z_period: f64) -> Result<Self, EulerError> {
        if nr < 16 || nz < 16 {
            return Err(EulerError::InvalidGrid(format!(
                "need nr, nz >= 16, got {nr} x {nz}"
            )));
        }
        if !(r_max > 0.0 && r_max.is_finite() && z_period > 0.0 && z_period.is_finite()) {
            return Err(EulerError::InvalidGrid(format!(
                "extents must be positive, got r_max = {r_max}, z_period = {z_period}"
            )));
        }
        Ok(Self {
            nr,
            nz,
            r_max,
            z_period,
        })
    }

    pub fn dr(&self) -> f64 {
        self.r_max / self.nr as f64
    }

    pub fn dz(&self) -> f64 {
        self.z_period / self.nz as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.dr()
    }

    pub fn z(&self, j: usize) -> f64 {
        j as f64 * self.dz()
    }

    /// Array shape `(nr + 1, nz)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.nr + 1, self.nz)
    }

    #[inline]
    pub fn jp(&self, j: usize) -> usize {
        if j + 1 == self.nz {
            0
        } else {
            j + 1
        }
    }

    #[inline]
    pub fn jm(&self, j: usize) -> usize {
        if j == 0 {
            self.nz - 1
        } else {
            j - 1
        }
    }

    /// Same grid with both resolutions multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            nr: self.nr * factor,
            nz: self.nz * factor,
            ..*self
        }
    }

    /// `int f r dr dz` by the trapezoidal rule in `r` (periodic sum in `z`).
    pub fn integrate_rdr(&self, f: impl Fn(usize, usize) -> f64) -> f64 {
        let (dr, dz) = (self.dr(), self.dz());
        let mut total = 0.0;
        for i in 0..=self.nr {
            let w = if i == self.nr { 0.5 } else { 1.0 };
            let r = self.r(i);
            let row: f64 = (0..self.nz).map(|j| f(i, j)).sum();
            total += w * r * row;
        }
        total * dr * dz
    }
}
