//! The matrix-valued one-form `ω̃(Φ, Ψ)` and its path integrals.
//!
//! In `dx`/`dy`/`dt` components, with `Φᵀ` the transpose:
//!
//! ```text
//! ω̃_x = −i Φᵀσ₃Ψ
//! ω̃_y = ΦᵀΨ
//! ω̃_t = i(Φᵀ_yyσ₃Ψ + Φᵀσ₃Ψ_yy − Φᵀ_yσ₃Ψ_y) + 2iU(Φᵀ_yσ₂Ψ − Φᵀσ₂Ψ_y)
//!        + Φᵀ ((iU² − 3iV, −iU_x), (−iU_x, −iU² + 3iV̄)) Ψ
//! ```
//!
//! For `Φ = Ψ = Ψ₀` over the zero potential, `Γω̃` is closed and its primitive
//! is `S̃`.

use crate::algebra::{re, Complex, HMatrix, Mat2, PauliTag, I};
use crate::error::{Error, Result};
use crate::field::SpaceTimePoint;
use crate::quadrature::adaptive_simpson;
use crate::spinor::SpinorPair;

/// A matrix solution with its first two `y`-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Mat2,
    pub dy: Mat2,
    pub dyy: Mat2,
}

/// `Ψ₀ = ((ψ₁, −ψ̄₂), (ψ₂, ψ̄₁))` and its `y`-derivatives for a holomorphic spinor.
pub fn spinor_jet(s: &SpinorPair, z: Complex, t: f64) -> Jet {
    let e = s.evolve(t);
    let (p, q) = (&e.p, &e.q);
    let (p1, q1) = (p.derivative(1).eval(z), q.derivative(1).eval(z));
    let (p2, q2) = (p.derivative(2).eval(z), q.derivative(2).eval(z));
    Jet {
        value: HMatrix::new(p.eval(z), -q.eval(z)).to_mat2(),
        dy: HMatrix::new(I * p1, -I * q1).to_mat2(),
        dyy: HMatrix::new(-p2, q2).to_mat2(),
    }
}

/// Seed potential data entering `ω̃_t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SeedPotential {
    pub u: f64,
    pub u_x: f64,
    pub v: Complex,
}

/// Components of `ω̃` along `dx`, `dy`, `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneForm {
    pub dx: Mat2,
    pub dy: Mat2,
    pub dt: Mat2,
}

impl OneForm {
    /// Contraction with a displacement `(Δx, Δy, Δt)`.
    pub fn apply(&self, dx: f64, dy: f64, dt: f64) -> Mat2 {
        self.dx.scale(re(dx)) + self.dy.scale(re(dy)) + self.dt.scale(re(dt))
    }
}

pub fn one_form(phi: &Jet, psi: &Jet, seed: &SeedPotential) -> OneForm {
    let s2 = PauliTag::Sigma2.matrix();
    let s3 = PauliTag::Sigma3.matrix();
    let ft = phi.value.transpose();
    let ft_y = phi.dy.transpose();
    let ft_yy = phi.dyy.transpose();
    let i = I;
    let u = seed.u;

    let dx = (ft * s3 * psi.value).scale(-i);
    let dy = ft * psi.value;

    let second = (ft_yy * s3 * psi.value + ft * s3 * psi.dyy - ft_y * s3 * psi.dy).scale(i);
    let drift = (ft_y * s2 * psi.value - ft * s2 * psi.dy).scale(2.0 * i * u);
    let pot = Mat2([
        [i * (u * u) - 3.0 * i * seed.v, -i * seed.u_x],
        [-i * seed.u_x, -i * (u * u) + 3.0 * i * seed.v.conj()],
    ]);
    let dt = second + drift + ft * pot * psi.value;
    OneForm { dx, dy, dt }
}

fn flatten(m: &Mat2) -> [f64; 8] {
    let e = &m.0;
    [
        e[0][0].re, e[0][0].im, e[0][1].re, e[0][1].im,
        e[1][0].re, e[1][0].im, e[1][1].re, e[1][1].im,
    ]
}

fn unflatten(a: &[f64; 8]) -> Mat2 {
    Mat2([
        [Complex::new(a[0], a[1]), Complex::new(a[2], a[3])],
        [Complex::new(a[4], a[5]), Complex::new(a[6], a[7])],
    ])
}

/// `∫ Γω̃(Ψ₀, Ψ₀)` along a polyline in `(x, y, t)`, by adaptive Simpson per segment.
///
/// For a path from `P` to `Q` the result is `S̃(Q) − S̃(P)`; the translation
/// `u₀` cancels. `tol` bounds the absolute error of each segment.
pub fn one_form_integral(s: &SpinorPair, path: &[SpaceTimePoint], tol: f64) -> Result<HMatrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let gamma = HMatrix::gamma().to_mat2();
    let seed = SeedPotential::default();
    let mut total = Mat2::zero();
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let (dx, dy, dt) = (b.x - a.x, b.y - a.y, b.t - a.t);
        if dx == 0.0 && dy == 0.0 && dt == 0.0 {
            continue;
        }
        let integrand = |u: f64| {
            let p = SpaceTimePoint::new(a.x + u * dx, a.y + u * dy, a.t + u * dt);
            let jet = spinor_jet(s, p.z(), p.t);
            let w = one_form(&jet, &jet, &seed).apply(dx, dy, dt);
            flatten(&(gamma * w))
        };
        let seg_int = adaptive_simpson(integrand, 0.0, 1.0, tol, 40)?;
        total = total + unflatten(&seg_int);
    }
    Ok(total.project_h())
}
