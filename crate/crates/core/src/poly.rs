//! Dense univariate polynomials with complex coefficients.
//!
//! Used both for holomorphic polynomials in `z` and for polynomials in the
//! (real) time variable that arise from the exact spinor evolution.

use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{re, Complex};

/// `Σ c_k x^k`, normalized so the trailing coefficient is non-zero.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.last().is_some_and(|c| *c == re(0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: Complex, k: usize) -> Self {
        let mut coeffs = vec![re(0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(re(0.0), |acc, &c| acc * x + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(re(0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= order {
            return Self::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|k| {
                let falling: f64 = ((k - order + 1)..=k).map(|j| j as f64).product();
                self.coeffs[k] * falling
            })
            .collect();
        Self::new(coeffs)
    }

    /// Antiderivative vanishing at the origin.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(re(0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        Self::new(coeffs)
    }

    /// Coefficient-wise complex conjugate. For a real variable `x` this is
    /// the conjugate of the polynomial's value.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `∫₀ᵗ p(τ) dτ` for real `t`.
    pub fn integrate_from_zero(&self, t: f64) -> Complex {
        self.antiderivative().eval_real(t)
    }

    pub fn max_abs_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.scale(re(-1.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![re(0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::c;

    #[test]
    fn normalization_trims_trailing_zeros() {
        let p = Poly::new(vec![re(1.0), re(0.0), re(0.0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Poly::new(vec![re(0.0)]).is_zero());
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn derivative_falling_factorials() {
        let z4 = Poly::monomial(re(1.0), 4);
        assert_eq!(z4.derivative(2), Poly::monomial(re(12.0), 2));
        assert_eq!(z4.derivative(4), Poly::constant(re(24.0)));
        assert!(z4.derivative(5).is_zero());
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let p = Poly::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)]);
        let q = p.antiderivative().derivative(1);
        assert!(q.max_abs_coeff_diff(&p) < 1e-15);
        assert_eq!(p.antiderivative().coeff(0), re(0.0));
    }

    #[test]
    fn product_and_eval() {
        let a = Poly::new(vec![re(1.0), re(1.0)]); // 1 + z
        let b = Poly::new(vec![re(-1.0), re(1.0)]); // z − 1
        let prod = &a * &b;
        assert_eq!(prod, Poly::new(vec![re(-1.0), re(0.0), re(1.0)]));
        let z = c(0.3, -0.4);
        assert!((prod.eval(z) - (z * z - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn time_integral() {
        // ∫₀² (1 + 3τ²) dτ = 2 + 8
        let p = Poly::new(vec![re(1.0), re(0.0), re(3.0)]);
        assert!((p.integrate_from_zero(2.0) - re(10.0)).norm() < 1e-14);
    }
}
