//! Holomorphic polynomial spinors and their exact time evolution.
//!
//! A spinor pair `(p, q)` stands for `ψ₁ = p(z)` and `ψ₂ = conj(q(z))`, so both
//! `ψ₁` and `ψ̄₂` are holomorphic. The flow `∂ₜψ₁ = ∂³ψ₁`, `∂ₜψ₂ = ∂̄³ψ₂`
//! becomes `∂ₜp = p'''` and `∂ₜq = q'''`, whose solution from polynomial data
//! is the finite series
//!
//! ```text
//! p(·, t) = Σ_{m ≥ 0} tᵐ/m! · (d/dz)^{3m} p₀
//! ```

use crate::algebra::{re, Complex};
use crate::error::{Error, Result};
use crate::poly::Poly;

pub const DEFAULT_MAX_DEGREE: usize = 16;

/// A holomorphic polynomial `Σ c_k z^k` of bounded degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HoloPoly {
    poly: Poly,
}

impl HoloPoly {
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        Self::with_max_degree(coeffs, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(coeffs: Vec<Complex>, max: usize) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        let poly = Poly::new(coeffs);
        match poly.degree() {
            Some(degree) if degree > max => Err(Error::DegreeTooHigh { degree, max }),
            _ => Ok(Self { poly }),
        }
    }

    pub fn zero() -> Self {
        Self { poly: Poly::zero() }
    }

    /// `z^k`
    pub fn monomial(k: usize) -> Self {
        Self {
            poly: Poly::monomial(re(1.0), k),
        }
    }

    pub fn constant(c: Complex) -> Self {
        Self {
            poly: Poly::constant(c),
        }
    }

    pub fn as_poly(&self) -> &Poly {
        &self.poly
    }

    pub fn coeffs(&self) -> &[Complex] {
        self.poly.coeffs()
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.poly.eval(z)
    }

    /// Exact coefficient differentiation. Derivatives never raise the degree,
    /// so the result keeps the degree bound.
    pub fn derivative(&self, order: usize) -> Self {
        Self {
            poly: self.poly.derivative(order),
        }
    }

    /// The `k`-th coefficient of the evolved polynomial as a polynomial in `t`:
    /// `c_k(t) = Σ_m (k+3m)!/(k! m!) · c_{k+3m} · tᵐ`.
    pub fn evolved_coefficient(&self, k: usize) -> Poly {
        let coeffs = self.coeffs();
        let mut out = Vec::new();
        let mut m = 0;
        while k + 3 * m < coeffs.len() {
            let falling: f64 = ((k + 1)..=(k + 3 * m)).map(|j| j as f64).product();
            let m_fact: f64 = (1..=m).map(|j| j as f64).product();
            out.push(coeffs[k + 3 * m] * (falling / m_fact));
            m += 1;
        }
        Poly::new(out)
    }

    /// Exact solution of `∂ₜp = p'''` at time `t`.
    pub fn evolve(&self, t: f64) -> Self {
        if t == 0.0 {
            return self.clone();
        }
        let n = self.coeffs().len();
        let coeffs = (0..n)
            .map(|k| self.evolved_coefficient(k).eval_real(t))
            .collect();
        Self {
            poly: Poly::new(coeffs),
        }
    }
}

/// `d^order/dz^order p`.
pub fn poly_derivative(p: &HoloPoly, order: usize) -> HoloPoly {
    p.derivative(order)
}

/// Spinor data `ψ₁ = p(z)`, `ψ₂ = conj(q(z))`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpinorPair {
    pub p: HoloPoly,
    pub q: HoloPoly,
}

impl SpinorPair {
    pub fn new(p: HoloPoly, q: HoloPoly) -> Self {
        Self { p, q }
    }

    /// The Enneper spinor `ψ₁ = z`, `ψ₂ = 1`.
    pub fn enneper() -> Self {
        Self::higher_enneper(1)
    }

    /// `ψ₁ = z^k`, `ψ₂ = 1`.
    pub fn higher_enneper(k: usize) -> Self {
        Self::new(HoloPoly::monomial(k), HoloPoly::constant(re(1.0)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_enneper(&self) -> bool {
        *self == Self::enneper()
    }

    /// Both components have degree below 3, so the flow is trivial.
    pub fn is_stationary(&self) -> bool {
        self.p.coeffs().len() <= 3 && self.q.coeffs().len() <= 3
    }

    pub fn evolve(&self, t: f64) -> Self {
        Self::new(self.p.evolve(t), self.q.evolve(t))
    }

    /// `(ψ₁, ψ₂)` at `(z, t)`.
    pub fn eval(&self, z: Complex, t: f64) -> (Complex, Complex) {
        let evolved = self.evolve(t);
        evolved.eval_evolved(z)
    }

    /// `(ψ₁, ψ₂)` for a pair that is already at the wanted time.
    pub fn eval_evolved(&self, z: Complex) -> (Complex, Complex) {
        (self.p.eval(z), self.q.eval(z).conj())
    }
}

pub fn spinor_evolve(s: &SpinorPair, t: f64) -> SpinorPair {
    s.evolve(t)
}

pub fn spinor_eval(s: &SpinorPair, z: Complex, t: f64) -> (Complex, Complex) {
    s.eval(z, t)
}
