//! Moutard transformation of the zero potential by a minimal-surface spinor.
//!
//! For a spinor pair evolving by `∂ₜψ₁ = ∂³ψ₁`, `∂ₜψ₂ = ∂̄³ψ₂` the primitive
//! of the closed one-form `Γω̃(Ψ₀, Ψ₀)` is
//!
//! ```text
//! S̃(z, t) = S(F(z, t)) − i ∫₀ᵗ ((w, v̄), (v, −w))(0, τ) dτ
//! ```
//!
//! where `S(F)` is the su(2) matrix of the Weierstrass surface at time `t`
//! (with `u₀` the image of the origin) and `v`, `w` are the quadratic spinor
//! expressions of [`vw_coefficients`], taken at `z = 0`. The time integrand is
//! a polynomial in `τ` and is integrated exactly.
//!
//! From `S̃` the transformed potentials follow:
//!
//! ```text
//! K = Ψ₀ S̃⁻¹ Γ Ψ₀ᵀ Γ⁻¹ = ((iW, a), (−ā, −iW))
//! M = Γ ∂ᵧΨ₀ Ψ₀⁻¹ Γ⁻¹  = ((b, c), (−c̄, b̄))
//! Ũ = W,   Ṽ = a² + 2(a b̄ − i c̄ W)
//! ```

mod enneper;
mod oneform;

pub use enneper::{
    enneper_closed_form, enneper_gamma_delta, enneper_polar, enneper_scalars, EnneperField,
};
pub use oneform::{one_form, one_form_integral, spinor_jet, Jet, OneForm, SeedPotential};

use rayon::prelude::*;

use crate::algebra::{Complex, HMatrix, DEFAULT_DET_EPS, I};
use crate::error::{Error, Result};
use crate::field::{Field, FieldValue, SpaceTimePoint};
use crate::grid::Grid;
use crate::poly::Poly;
use crate::spinor::SpinorPair;
use crate::weierstrass::{SurfaceMatrix, SurfacePoint, WeierstrassPatch};

/// Image of the origin that places the Enneper blow-up at `(0, 0, c)`.
pub fn blow_up_u0(c: f64) -> SurfacePoint {
    SurfacePoint::new(0.0, -c, 0.0)
}

/// `(v, w)` of the spinor at `(z, t)`.
pub fn vw_coefficients(s: &SpinorPair, z: Complex, t: f64) -> (Complex, f64) {
    let e = s.evolve(t);
    let (p, q) = (&e.p, &e.q);
    let (p0, p1, p2) = (p.eval(z), p.derivative(1).eval(z), p.derivative(2).eval(z));
    let (q0, q1, q2) = (q.eval(z), q.derivative(1).eval(z), q.derivative(2).eval(z));
    let v = (p1 * p1 - (q1 * q1).conj()) - 2.0 * (p0 * p2 - (q0 * q2).conj());
    let w = 2.0 * (p1 * q1 - p2 * q0 - p0 * q2).re;
    (v, w)
}

/// `∫₀ᵗ v(0, τ) dτ` and `∫₀ᵗ w(0, τ) dτ`, integrated exactly in `τ`.
#[derive(Debug, Clone)]
pub struct TimeTerm {
    v_int: Poly,
    w_int: Poly,
}

impl TimeTerm {
    pub fn new(s: &SpinorPair) -> Self {
        let p0 = s.p.evolved_coefficient(0);
        let p1 = s.p.evolved_coefficient(1);
        let p2 = s.p.evolved_coefficient(2).scale(Complex::new(2.0, 0.0));
        let q0 = s.q.evolved_coefficient(0);
        let q1 = s.q.evolved_coefficient(1);
        let q2 = s.q.evolved_coefficient(2).scale(Complex::new(2.0, 0.0));
        let two = Complex::new(2.0, 0.0);
        let v = &(&(&p1 * &p1) - &(&q1 * &q1).conj()) - &(&(&p0 * &p2) - &(&q0 * &q2).conj()).scale(two);
        let x = &(&(&p1 * &q1) - &(&p2 * &q0)) - &(&p0 * &q2);
        let w = &x + &x.conj();
        Self {
            v_int: v.antiderivative(),
            w_int: w.antiderivative(),
        }
    }

    /// `(∫v, ∫w)` over `[0, t]`.
    pub fn at(&self, t: f64) -> (Complex, f64) {
        (self.v_int.eval_real(t), self.w_int.eval_real(t).re)
    }

    /// `−i ∫₀ᵗ ((w, v̄), (v, −w)) dτ` as an element of `H`.
    pub fn matrix(&self, t: f64) -> HMatrix {
        let (iv, iw) = self.at(t);
        HMatrix::new(-I * iw, -I * iv.conj())
    }
}

/// Evaluator of `S̃` for one spinor and one choice of `u₀`.
#[derive(Debug, Clone)]
pub struct DeformedSurface {
    spinor: SpinorPair,
    u0: SurfacePoint,
    time_term: TimeTerm,
    stationary: Option<WeierstrassPatch>,
}

impl DeformedSurface {
    pub fn new(spinor: &SpinorPair, u0: SurfacePoint) -> Self {
        let stationary = spinor
            .is_stationary()
            .then(|| WeierstrassPatch::new(spinor, 0.0));
        Self {
            spinor: spinor.clone(),
            u0,
            time_term: TimeTerm::new(spinor),
            stationary,
        }
    }

    pub fn spinor(&self) -> &SpinorPair {
        &self.spinor
    }

    pub fn u0(&self) -> SurfacePoint {
        self.u0
    }

    pub fn patch(&self, t: f64) -> WeierstrassPatch {
        match &self.stationary {
            Some(p) => p.clone(),
            None => WeierstrassPatch::new(&self.spinor, t),
        }
    }

    fn with_patch<R>(&self, t: f64, f: impl FnOnce(&WeierstrassPatch) -> R) -> R {
        match &self.stationary {
            Some(p) => f(p),
            None => f(&WeierstrassPatch::new(&self.spinor, t)),
        }
    }

    pub fn s_tilde(&self, z: Complex, t: f64) -> HMatrix {
        self.with_patch(t, |patch| self.s_tilde_on(patch, z, t))
    }

    fn s_tilde_on(&self, patch: &WeierstrassPatch, z: Complex, t: f64) -> HMatrix {
        SurfaceMatrix::encode(patch.point(z, self.u0)).matrix() + self.time_term.matrix(t)
    }

    /// The point of ℝ³ encoded by `S̃`: the surface moved by the time term.
    pub fn moved_point(&self, z: Complex, t: f64) -> SurfacePoint {
        SurfaceMatrix::decode(&self.s_tilde(z, t))
    }

    pub fn frame(&self, z: Complex, t: f64) -> MoutardFrame {
        self.with_patch(t, |patch| {
            let e = patch.spinor();
            let (p, q) = (e.p.eval(z), e.q.eval(z));
            let (dp, dq) = (e.p.derivative(1).eval(z), e.q.derivative(1).eval(z));
            MoutardFrame {
                s_tilde: self.s_tilde_on(patch, z, t),
                psi0: HMatrix::new(p, -q),
                psi0_y: HMatrix::new(I * dp, -I * dq),
                c: -self.u0.u2,
            }
        })
    }
}

pub fn s_tilde(s: &SpinorPair, z: Complex, t: f64, u0: SurfacePoint) -> HMatrix {
    DeformedSurface::new(s, u0).s_tilde(z, t)
}

/// `S̃`, `Ψ₀` and `∂ᵧΨ₀` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoutardFrame {
    pub s_tilde: HMatrix,
    /// `((ψ₁, −ψ̄₂), (ψ₂, ψ̄₁))`
    pub psi0: HMatrix,
    pub psi0_y: HMatrix,
    /// Blow-up time parameter, `−u²₀`.
    pub c: f64,
}

/// `K` and `M` as elements of `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoutardMatrices {
    pub k: HMatrix,
    pub m: HMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoutardScalars {
    pub w: f64,
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
}

impl MoutardScalars {
    pub const ZERO: MoutardScalars = MoutardScalars {
        w: 0.0,
        a: Complex::new(0.0, 0.0),
        b: Complex::new(0.0, 0.0),
        c: Complex::new(0.0, 0.0),
    };
}

impl MoutardFrame {
    pub fn matrices(&self) -> Result<MoutardMatrices> {
        self.matrices_with(DEFAULT_DET_EPS)
    }

    pub fn matrices_with(&self, eps: f64) -> Result<MoutardMatrices> {
        let s_inv = self.s_tilde.inv_with(eps)?;
        // Γ Ψᵀ Γ⁻¹ is the quaternionic conjugate of Ψ.
        let k = self.psi0 * s_inv * self.psi0.conj();
        let psi_inv = self
            .psi0
            .inv_with(eps)
            .map_err(|_| Error::SingularFrame { det: self.psi0.det() })?;
        let gamma = HMatrix::gamma();
        let m = gamma * (self.psi0_y * psi_inv) * (-gamma);
        Ok(MoutardMatrices { k, m })
    }

    /// Returns `Im(α)` of `K` as `W`; the discarded real part is available
    /// through [`MoutardFrame::matrices`].
    pub fn scalars(&self) -> Result<MoutardScalars> {
        let MoutardMatrices { k, m } = self.matrices()?;
        Ok(MoutardScalars {
            w: k.alpha.im,
            a: k.beta,
            b: m.alpha,
            c: m.beta,
        })
    }
}

pub fn moutard_scalars(frame: &MoutardFrame) -> Result<MoutardScalars> {
    frame.scalars()
}

/// `Ũ = U + W`.
pub fn transformed_u(seed_u: f64, sc: &MoutardScalars) -> f64 {
    seed_u + sc.w
}

/// `Ṽ = V + 2UW + a² + 2(a b̄ − i c̄ W)`.
pub fn transformed_v(seed_u: f64, seed_v: Complex, sc: &MoutardScalars) -> Complex {
    seed_v + 2.0 * seed_u * sc.w + sc.a * sc.a + 2.0 * (sc.a * sc.b.conj() - I * sc.c.conj() * sc.w)
}

/// `(Ũ, Ṽ)` produced by the Moutard transformation of `U = V = 0`.
#[derive(Debug, Clone)]
pub struct MoutardField {
    surface: DeformedSurface,
    det_eps: f64,
    singular: Option<SpaceTimePoint>,
}

impl MoutardField {
    pub fn new(spinor: &SpinorPair, u0: SurfacePoint) -> Self {
        Self {
            surface: DeformedSurface::new(spinor, u0),
            det_eps: DEFAULT_DET_EPS,
            singular: None,
        }
    }

    /// The Enneper blow-up solution with singular point `(0, 0, c)`.
    pub fn enneper(c: f64) -> Self {
        Self::new(&SpinorPair::enneper(), blow_up_u0(c))
            .with_singular_point(SpaceTimePoint::new(0.0, 0.0, c))
    }

    pub fn with_singular_point(mut self, p: SpaceTimePoint) -> Self {
        self.singular = Some(p);
        self
    }

    pub fn with_det_eps(mut self, eps: f64) -> Self {
        self.det_eps = eps;
        self
    }

    pub fn surface(&self) -> &DeformedSurface {
        &self.surface
    }

    pub fn frame(&self, p: SpaceTimePoint) -> MoutardFrame {
        self.surface.frame(p.z(), p.t)
    }

    pub fn scalars(&self, p: SpaceTimePoint) -> Result<MoutardScalars> {
        let frame = self.frame(p);
        let MoutardMatrices { k, m } = frame.matrices_with(self.det_eps).map_err(|e| match e {
            Error::DegenerateMatrix { .. } => Error::BlowUpPoint(p),
            other => other,
        })?;
        Ok(MoutardScalars {
            w: k.alpha.im,
            a: k.beta,
            b: m.alpha,
            c: m.beta,
        })
    }

    pub fn potential_u(&self, p: SpaceTimePoint) -> Result<f64> {
        Ok(transformed_u(0.0, &self.scalars(p)?))
    }

    pub fn potential_v(&self, p: SpaceTimePoint) -> Result<Complex> {
        Ok(transformed_v(0.0, Complex::new(0.0, 0.0), &self.scalars(p)?))
    }

    /// Field values over a grid at time `t`, row-major. Blow-up nodes give `Err`.
    pub fn sample(&self, grid: &Grid, t: f64) -> Vec<Result<FieldValue>> {
        (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = grid.node(k);
                self.eval(SpaceTimePoint::new(x, y, t))
            })
            .collect()
    }
}

impl Field for MoutardField {
    fn eval(&self, p: SpaceTimePoint) -> Result<FieldValue> {
        let sc = self.scalars(p)?;
        Ok(FieldValue {
            u: transformed_u(0.0, &sc),
            v: transformed_v(0.0, Complex::new(0.0, 0.0), &sc),
        })
    }

    fn blow_up_point(&self) -> Option<SpaceTimePoint> {
        self.singular
    }
}

pub fn potential_u(s: &SpinorPair, z: Complex, t: f64, u0: SurfacePoint) -> Result<f64> {
    MoutardField::new(s, u0).potential_u(SpaceTimePoint::new(z.re, z.im, t))
}

pub fn potential_v(s: &SpinorPair, z: Complex, t: f64, u0: SurfacePoint) -> Result<Complex> {
    MoutardField::new(s, u0).potential_v(SpaceTimePoint::new(z.re, z.im, t))
}
