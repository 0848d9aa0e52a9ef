//! Weierstrass representation of minimal surfaces from polynomial spinors.
//!
//! With `ψ₁ = p`, `ψ̄₂ = q` the three path integrals from the origin reduce to
//! holomorphic antiderivatives:
//!
//! ```text
//! u¹ = −Im ∫₀ᶻ (p² + q²)      u² = Re ∫₀ᶻ (q² − p²)      u³ = 2 Re ∫₀ᶻ p q
//! ```
//!
//! plus the image `u₀` of the origin.

use std::ops::{Add, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Complex, HMatrix, I};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::poly::Poly;
use crate::spinor::SpinorPair;

/// Threshold on `e^α = |ψ₁|² + |ψ₂|²` below which a point counts as a branch point.
pub const BRANCH_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl SurfacePoint {
    pub const fn new(u1: f64, u2: f64, u3: f64) -> Self {
        Self { u1, u2, u3 }
    }

    pub const ORIGIN: SurfacePoint = SurfacePoint::new(0.0, 0.0, 0.0);

    pub fn norm_sqr(&self) -> f64 {
        self.u1 * self.u1 + self.u2 * self.u2 + self.u3 * self.u3
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.u1 * s, self.u2 * s, self.u3 * s)
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.u1 * o.u1 + self.u2 * o.u2 + self.u3 * o.u3
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.u2 * o.u3 - self.u3 * o.u2,
            self.u3 * o.u1 - self.u1 * o.u3,
            self.u1 * o.u2 - self.u2 * o.u1,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.u1.is_finite() && self.u2.is_finite() && self.u3.is_finite()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }
}

impl Add for SurfacePoint {
    type Output = SurfacePoint;

    fn add(self, o: SurfacePoint) -> SurfacePoint {
        SurfacePoint::new(self.u1 + o.u1, self.u2 + o.u2, self.u3 + o.u3)
    }
}

impl Sub for SurfacePoint {
    type Output = SurfacePoint;

    fn sub(self, o: SurfacePoint) -> SurfacePoint {
        SurfacePoint::new(self.u1 - o.u1, self.u2 - o.u2, self.u3 - o.u3)
    }
}

/// The su(2) image `((iu³, −u¹ − iu²), (u¹ − iu², −iu³))` of a point of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceMatrix(pub HMatrix);

impl SurfaceMatrix {
    pub fn encode(p: SurfacePoint) -> Self {
        SurfaceMatrix(HMatrix::new(
            Complex::new(0.0, p.u3),
            Complex::new(-p.u1, -p.u2),
        ))
    }

    /// Reads the point back through the same dictionary. The real part of
    /// `α` is ignored; it vanishes for every trace-free anti-Hermitian matrix.
    pub fn decode(m: &HMatrix) -> SurfacePoint {
        SurfacePoint::new(-m.beta.re, -m.beta.im, m.alpha.im)
    }

    pub fn point(&self) -> SurfacePoint {
        Self::decode(&self.0)
    }

    pub fn matrix(&self) -> HMatrix {
        self.0
    }

    /// Equals the squared Euclidean norm of the encoded point.
    pub fn det(&self) -> f64 {
        self.0.det()
    }
}

pub fn surface_matrix(p: SurfacePoint) -> SurfaceMatrix {
    SurfaceMatrix::encode(p)
}

/// Weierstrass data of a spinor at a fixed time: integrands and their
/// antiderivatives from the origin.
#[derive(Debug, Clone)]
pub struct WeierstrassPatch {
    spinor: SpinorPair,
    sum_sq: Poly,
    diff_sq: Poly,
    prod: Poly,
    sum_sq_int: Poly,
    diff_sq_int: Poly,
    prod_int: Poly,
}

impl WeierstrassPatch {
    pub fn new(s: &SpinorPair, t: f64) -> Self {
        let spinor = s.evolve(t);
        let p = spinor.p.as_poly();
        let q = spinor.q.as_poly();
        let pp = p * p;
        let qq = q * q;
        let sum_sq = &pp + &qq;
        let diff_sq = &qq - &pp;
        let prod = p * q;
        Self {
            sum_sq_int: sum_sq.antiderivative(),
            diff_sq_int: diff_sq.antiderivative(),
            prod_int: prod.antiderivative(),
            spinor,
            sum_sq,
            diff_sq,
            prod,
        }
    }

    /// The spinor evolved to this patch's time.
    pub fn spinor(&self) -> &SpinorPair {
        &self.spinor
    }

    pub fn point(&self, z: Complex, u0: SurfacePoint) -> SurfacePoint {
        SurfacePoint::new(
            -self.sum_sq_int.eval(z).im + u0.u1,
            self.diff_sq_int.eval(z).re + u0.u2,
            2.0 * self.prod_int.eval(z).re + u0.u3,
        )
    }

    /// `(∂ₓF, ∂ᵧF)` from the integrands of the representation.
    pub fn tangents(&self, z: Complex) -> (SurfacePoint, SurfacePoint) {
        let f1 = self.sum_sq.eval(z);
        let f2 = self.diff_sq.eval(z);
        let f3 = self.prod.eval(z);
        let along_x = SurfacePoint::new(-f1.im, f2.re, 2.0 * f3.re);
        let (g1, g2, g3) = (I * f1, I * f2, I * f3);
        let along_y = SurfacePoint::new(-g1.im, g2.re, 2.0 * g3.re);
        (along_x, along_y)
    }

    pub fn metric_factor(&self, z: Complex) -> f64 {
        let (psi1, psi2) = self.spinor.eval_evolved(z);
        psi1.norm_sqr() + psi2.norm_sqr()
    }

    pub fn normal(&self, z: Complex) -> Result<SurfacePoint> {
        let (psi1, psi2) = self.spinor.eval_evolved(z);
        let e_alpha = psi1.norm_sqr() + psi2.norm_sqr();
        if !(e_alpha > BRANCH_EPS) {
            return Err(Error::BranchPoint {
                metric_factor: e_alpha,
            });
        }
        let x = psi1 * psi2;
        Ok(SurfacePoint::new(
            -2.0 * x.im,
            -2.0 * x.re,
            psi2.norm_sqr() - psi1.norm_sqr(),
        )
        .scale(1.0 / e_alpha))
    }
}

pub fn surface_point(s: &SpinorPair, z: Complex, t: f64, u0: SurfacePoint) -> SurfacePoint {
    WeierstrassPatch::new(s, t).point(z, u0)
}

/// Conformal factor `e^{2α} = (|ψ₁|² + |ψ₂|²)²`.
pub fn induced_metric(s: &SpinorPair, z: Complex, t: f64) -> f64 {
    let (psi1, psi2) = s.eval(z, t);
    let e_alpha = psi1.norm_sqr() + psi2.norm_sqr();
    e_alpha * e_alpha
}

pub fn normal_vector(s: &SpinorPair, z: Complex, t: f64) -> Result<SurfacePoint> {
    WeierstrassPatch::new(s, t).normal(z)
}

/// Surface points over a grid, in row-major order.
pub fn sample_surface(s: &SpinorPair, grid: &Grid, t: f64, u0: SurfacePoint) -> Vec<SurfacePoint> {
    let patch = WeierstrassPatch::new(s, t);
    (0..grid.len())
        .into_par_iter()
        .map(|k| patch.point(grid.z(k), u0))
        .collect()
}

/// Closed-form Enneper coordinates `(u¹, u², u³)` at `(x, y)`, without offset.
pub fn enneper_point(x: f64, y: f64) -> SurfacePoint {
    SurfacePoint::new(
        y * (y * y / 3.0 - x * x - 1.0),
        x * (1.0 + y * y - x * x / 3.0),
        x * x - y * y,
    )
}
