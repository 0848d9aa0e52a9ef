use serde::{Deserialize, Serialize};

use crate::algebra::Complex;
use crate::error::{Error, Result};

/// Rectangular parameter grid, traversed row-major: `y` index outer, `x` inner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let bounds = [self.x_min, self.x_max, self.y_min, self.y_max];
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidArgument("grid needs at least one node per axis".into()));
        }
        if (self.nx > 1 && self.x_max <= self.x_min) || (self.ny > 1 && self.y_max <= self.y_min) {
            return Err(Error::InvalidArgument("grid steps must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        if self.nx > 1 {
            (self.x_max - self.x_min) / (self.nx - 1) as f64
        } else {
            0.0
        }
    }

    pub fn dy(&self) -> f64 {
        if self.ny > 1 {
            (self.y_max - self.y_min) / (self.ny - 1) as f64
        } else {
            0.0
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx && self.nx > 1 {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny && self.ny > 1 {
            self.y_max
        } else {
            self.y_min + j as f64 * self.dy()
        }
    }

    /// Node `k` in row-major order.
    pub fn node(&self, k: usize) -> (f64, f64) {
        (self.x(k % self.nx), self.y(k / self.nx))
    }

    pub fn z(&self, k: usize) -> Complex {
        let (x, y) = self.node(k);
        Complex::new(x, y)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |k| self.node(k))
    }

    /// Triangles of the quad grid, two per cell, as 0-based vertex indices.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(2 * self.nx.saturating_sub(1) * self.ny.saturating_sub(1));
        for j in 0..self.ny.saturating_sub(1) {
            for i in 0..self.nx.saturating_sub(1) {
                let a = j * self.nx + i;
                let b = a + 1;
                let c = a + self.nx;
                let d = c + 1;
                out.push([a, b, d]);
                out.push([a, d, c]);
            }
        }
        out
    }
}
