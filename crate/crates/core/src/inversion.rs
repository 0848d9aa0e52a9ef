//! Möbius inversion of surfaces as matrix inversion `S ↦ S⁻¹` in `su(2)`.
//!
//! With the dictionary `S = ((iu³, −u¹ − iu²), (u¹ − iu², −iu³))` one has
//! `S⁻¹ = −S/|u|²`, so the decoded point is `−u/|u|²`: the inversion in the
//! unit sphere followed by the antipodal map. Both are conformal and the sign
//! does not affect any potential.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{re, Complex, HMatrix, Mat2, DEFAULT_DET_EPS};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::moutard::DeformedSurface;
use crate::obj::{write_obj, MeshStats};
use crate::spinor::SpinorPair;
use crate::weierstrass::{SurfaceMatrix, SurfacePoint};

pub fn invert_surface_matrix(s: &HMatrix) -> Result<HMatrix> {
    s.inv_with(DEFAULT_DET_EPS)
}

/// `decode(encode(p)⁻¹)`.
pub fn invert_point(p: SurfacePoint) -> Result<SurfacePoint> {
    let inv = invert_surface_matrix(&SurfaceMatrix::encode(p).matrix())?;
    Ok(SurfaceMatrix::decode(&inv))
}

/// `Ψ̃ = Ψ₀ · S⁻¹`; its columns are spinors of the inverted surface.
pub fn inverted_spinor(psi0: &HMatrix, s: &HMatrix) -> Result<HMatrix> {
    Ok(*psi0 * invert_surface_matrix(s)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvertedSample {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    /// NaN components when `degenerate`.
    pub point: SurfacePoint,
    pub degenerate: bool,
}

impl InvertedSample {
    pub fn z(&self) -> Complex {
        Complex::new(self.x, self.y)
    }

    pub fn vertex(&self) -> Option<SurfacePoint> {
        (!self.degenerate).then_some(self.point)
    }
}

/// Inverted points of the surface `S̃(·, t)` over a grid, row-major.
pub fn sample_inverted_surface(s: &SpinorPair, grid: &Grid, t: f64, u0: SurfacePoint) -> Vec<InvertedSample> {
    let surface = DeformedSurface::new(s, u0);
    let patch = surface.patch(t);
    let time_term = surface.s_tilde(Complex::new(0.0, 0.0), t)
        - SurfaceMatrix::encode(patch.point(Complex::new(0.0, 0.0), u0)).matrix();
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (x, y) = grid.node(k);
            let m = SurfaceMatrix::encode(patch.point(Complex::new(x, y), u0)).matrix() + time_term;
            match invert_surface_matrix(&m) {
                Ok(inv) => InvertedSample {
                    x,
                    y,
                    t,
                    point: SurfaceMatrix::decode(&inv),
                    degenerate: false,
                },
                Err(_) => InvertedSample {
                    x,
                    y,
                    t,
                    point: SurfacePoint::new(f64::NAN, f64::NAN, f64::NAN),
                    degenerate: true,
                },
            }
        })
        .collect()
}

pub fn write_inverted_obj<W: std::io::Write>(
    out: W,
    grid: &Grid,
    samples: &[InvertedSample],
    comment: &str,
) -> std::io::Result<MeshStats> {
    let verts: Vec<_> = samples.iter().map(InvertedSample::vertex).collect();
    write_obj(out, grid, &verts, comment)
}

fn mat2_inverse(m: &Mat2) -> Result<Mat2> {
    let e = &m.0;
    let det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
    if !(det.norm() > DEFAULT_DET_EPS) {
        return Err(Error::DegenerateMatrix {
            det: det.norm(),
            eps: DEFAULT_DET_EPS,
        });
    }
    Ok(Mat2([[e[1][1], -e[0][1]], [-e[1][0], e[0][0]]]).scale(re(1.0) / det))
}

/// `Ũ = U + W` for the surface `S̃` from plain 2×2 products:
/// `K = Ψ̃ · ΓΨ₀ᵀΓ⁻¹`, `W = Im K₁₁`, with the seed `U = 0`.
pub fn inverted_surface_potential(surface: &DeformedSurface, z: Complex, t: f64) -> Result<f64> {
    let frame = surface.frame(z, t);
    let psi = frame.psi0.to_mat2();
    let s_inv = mat2_inverse(&frame.s_tilde.to_mat2())?;
    let gamma = HMatrix::gamma().to_mat2();
    let gamma_inv = mat2_inverse(&gamma)?;
    let psi_tilde = psi * s_inv;
    let k = psi_tilde * gamma * psi.transpose() * gamma_inv;
    Ok(k.0[0][0].im)
}
