//! Complex scalars and the quaternionic matrix space `H`.
//!
//! `H` is the set of 2×2 complex matrices of the form
//!
//! ```text
//! ( α   β )
//! (-β̄   ᾱ )
//! ```
//!
//! It is closed under products, sums and real scaling, and every non-zero
//! element is invertible with `det = |α|² + |β|²`. Values are stored as the
//! pair `(α, β)`, so a matrix outside this pattern cannot be represented.
//!
//! [`Mat2`] is a bare general 2×2 complex matrix used only where products
//! leave `H` (transposes and Pauli matrices inside the one-form assembly).

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Default threshold below which a determinant is treated as zero.
pub const DEFAULT_DET_EPS: f64 = 1e-300;

pub const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// An element of `H`, stored as `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HMatrix {
    pub alpha: Complex,
    pub beta: Complex,
}

impl HMatrix {
    pub const fn new(alpha: Complex, beta: Complex) -> Self {
        Self { alpha, beta }
    }

    pub const fn zero() -> Self {
        Self::new(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))
    }

    pub const fn identity() -> Self {
        Self::new(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    /// `Γ = ((0, 1), (−1, 0))`.
    pub const fn gamma() -> Self {
        Self::new(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [[Complex; 2]; 2] {
        [
            [self.alpha, self.beta],
            [-self.beta.conj(), self.alpha.conj()],
        ]
    }

    pub fn det(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// Quaternionic conjugate `((ᾱ, −β), (β̄, α))`, equal to `det · A⁻¹`.
    ///
    /// This is also `Γ Aᵀ Γ⁻¹`.
    pub fn conj(&self) -> Self {
        Self::new(self.alpha.conj(), -self.beta)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.alpha * s, self.beta * s)
    }

    /// Inverse, failing with [`Error::DegenerateMatrix`] when `det ≤ eps`.
    pub fn inv_with(&self, eps: f64) -> Result<Self> {
        let det = self.det();
        if !(det > eps) {
            return Err(Error::DegenerateMatrix { det, eps });
        }
        Ok(self.conj().scale(1.0 / det))
    }

    pub fn inv(&self) -> Result<Self> {
        self.inv_with(DEFAULT_DET_EPS)
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2(self.entries())
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.alpha - other.alpha)
            .norm()
            .max((self.beta - other.beta).norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha.norm().max(self.beta.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite()
    }
}

impl Mul for HMatrix {
    type Output = HMatrix;

    fn mul(self, rhs: HMatrix) -> HMatrix {
        HMatrix::new(
            self.alpha * rhs.alpha - self.beta * rhs.beta.conj(),
            self.alpha * rhs.beta + self.beta * rhs.alpha.conj(),
        )
    }
}

impl Add for HMatrix {
    type Output = HMatrix;

    fn add(self, rhs: HMatrix) -> HMatrix {
        HMatrix::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl Sub for HMatrix {
    type Output = HMatrix;

    fn sub(self, rhs: HMatrix) -> HMatrix {
        HMatrix::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl Neg for HMatrix {
    type Output = HMatrix;

    fn neg(self) -> HMatrix {
        HMatrix::new(-self.alpha, -self.beta)
    }
}

/// Which fixed matrix enters the one-form assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliTag {
    Sigma2,
    Sigma3,
    Identity,
}

impl PauliTag {
    pub fn matrix(self) -> Mat2 {
        let o = re(0.0);
        let one = re(1.0);
        match self {
            PauliTag::Sigma2 => Mat2([[o, -I], [I, o]]),
            PauliTag::Sigma3 => Mat2([[one, o], [o, -one]]),
            PauliTag::Identity => Mat2::identity(),
        }
    }
}

/// General 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[Complex; 2]; 2]);

impl Mat2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Mat2([[re(1.0), re(0.0)], [re(0.0), re(1.0)]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, s: Complex) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Nearest element of `H` (orthogonal projection onto the `(α, β)` pattern).
    pub fn project_h(&self) -> HMatrix {
        let m = &self.0;
        HMatrix::new(
            (m[0][0] + m[1][1].conj()) * 0.5,
            (m[0][1] - m[1][0].conj()) * 0.5,
        )
    }

    /// Distance of this matrix from `H`, in max-entry norm.
    pub fn h_defect(&self) -> f64 {
        (*self - self.project_h().to_mat2()).max_abs()
    }
}

impl From<HMatrix> for Mat2 {
    fn from(h: HMatrix) -> Self {
        h.to_mat2()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[re(0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(re(-1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &HMatrix, b: &HMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn gamma_squared_is_minus_identity() {
        let g = HMatrix::gamma();
        assert_eq!(g * g, HMatrix::new(re(-1.0), re(0.0)));
    }

    #[test]
    fn identity_is_neutral() {
        let a = HMatrix::new(c(0.3, -1.2), c(2.0, 0.5));
        assert_eq!(a * HMatrix::identity(), a);
        assert_eq!(HMatrix::identity() * a, a);
    }

    #[test]
    fn product_matches_hand_multiplication() {
        // ((1, i), (i, 1))² = ((1 + i², 2i), (2i, i² + 1)) = ((0, 2i), (2i, 0))
        let a = HMatrix::new(re(1.0), I);
        assert!(close(&(a * a), &HMatrix::new(re(0.0), c(0.0, 2.0)), 0.0));
        let general = (a.to_mat2() * a.to_mat2()).project_h();
        assert_eq!(general, a * a);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(HMatrix::gamma().inv().unwrap(), -HMatrix::gamma());
        assert_eq!(HMatrix::identity().inv().unwrap(), HMatrix::identity());
        // Solving ((1, i), (i, 1)) X = I by hand gives X = ½((1, −i), (−i, 1)).
        let inv = HMatrix::new(re(1.0), I).inv().unwrap();
        assert!(close(&inv, &HMatrix::new(re(0.5), c(0.0, -0.5)), 1e-16));
    }

    #[test]
    fn inverse_of_zero_is_degenerate() {
        let err = HMatrix::zero().inv().unwrap_err();
        assert!(matches!(err, Error::DegenerateMatrix { .. }));
    }

    #[test]
    fn configurable_threshold_admits_near_degenerate() {
        let tiny = HMatrix::new(re(1e-140), re(0.0));
        assert!(tiny.inv().is_ok());
        assert!(tiny.inv_with(1e-310).is_ok());
        assert!(tiny.inv_with(1e-200).is_err());
    }

    #[test]
    fn conj_equals_gamma_transpose_conjugation() {
        let a = HMatrix::new(c(0.7, -0.2), c(-1.1, 0.4));
        let g = HMatrix::gamma().to_mat2();
        let g_inv = HMatrix::gamma().inv().unwrap().to_mat2();
        let lit = g * a.to_mat2().transpose() * g_inv;
        assert!((lit - a.conj().to_mat2()).max_abs() < 1e-15);
    }

    #[test]
    fn pauli_tags() {
        let s2 = PauliTag::Sigma2.matrix();
        let s3 = PauliTag::Sigma3.matrix();
        assert!((s2 * s2 - Mat2::identity()).max_abs() < 1e-16);
        assert!((s3 * s3 - Mat2::identity()).max_abs() < 1e-16);
        assert!((s2 * s3 + s3 * s2).max_abs() < 1e-16);
        assert_eq!(PauliTag::Identity.matrix(), Mat2::identity());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn hmat() -> impl Strategy<Value = HMatrix> {
            (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
                .prop_map(|(a, b, cc, d)| HMatrix::new(c(a, b), c(cc, d)))
        }

        proptest! {
            #[test]
            fn det_is_multiplicative(a in hmat(), b in hmat()) {
                let lhs = (a * b).det();
                let rhs = a.det() * b.det();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
            }

            #[test]
            fn product_agrees_with_general_product(a in hmat(), b in hmat()) {
                let general = a.to_mat2() * b.to_mat2();
                prop_assert!(general.h_defect() <= 1e-12 * (1.0 + general.max_abs()));
                prop_assert!((general - (a * b).to_mat2()).max_abs() <= 1e-12 * (1.0 + general.max_abs()));
            }

            #[test]
            fn inverse_is_two_sided(a in hmat()) {
                prop_assume!(a.det() > 1e-6);
                let inv = a.inv().unwrap();
                let bound = 1e-12 * (1.0 + a.max_abs() * inv.max_abs());
                prop_assert!((a * inv).max_abs_diff(&HMatrix::identity()) <= bound);
                prop_assert!((inv * a).max_abs_diff(&HMatrix::identity()) <= bound);
            }
        }
    }
}
