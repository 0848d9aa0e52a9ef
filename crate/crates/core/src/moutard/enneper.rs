//! Closed forms for the Enneper seed `(p, q) = (z, 1)` with `u₀ = (0, −C, 0)`.

use crate::algebra::{c, Complex, I};
use crate::error::{Error, Result};
use crate::field::{Field, FieldValue, SpaceTimePoint};

use super::{transformed_u, transformed_v, MoutardScalars};

/// `(γ, δ)` with `S̃ = ((γ, δ), (−δ̄, γ̄))`.
pub fn enneper_gamma_delta(x: f64, y: f64, t: f64, cc: f64) -> (Complex, Complex) {
    let gamma = c(0.0, x * x - y * y);
    let delta = c(
        -y * (y * y / 3.0 - x * x - 1.0),
        -(x * (1.0 + y * y - x * x / 3.0) - (cc - t)),
    );
    (gamma, delta)
}

/// `W, a, b, c` from `γ, δ` without any matrix products.
pub fn enneper_scalars(x: f64, y: f64, t: f64, cc: f64) -> Result<MoutardScalars> {
    let (g, d) = enneper_gamma_delta(x, y, t, cc);
    let den = g.norm_sqr() + d.norm_sqr();
    if den <= 0.0 {
        return Err(Error::BlowUpPoint(SpaceTimePoint::new(x, y, t)));
    }
    let z = c(x, y);
    let r2 = z.norm_sqr();
    let w = (-I * (r2 * g.conj() + g + d * z - d.conj() * z.conj()) / den).re;
    let a = (z * (g.conj() - g) - d * z * z - d.conj()) / den;
    let b = -I * z / (1.0 + r2);
    let cs = -I / (1.0 + r2);
    Ok(MoutardScalars { w, a, b, c: cs })
}

/// `(Ũ, Q)`, with `Q` the positive denominator of the rational closed form.
pub fn enneper_closed_form(x: f64, y: f64, t: f64, cc: f64) -> Result<(f64, f64)> {
    let s = cc - t;
    let (x2, y2) = (x * x, y * y);
    let r2 = x2 + y2;
    let q = r2 * r2 * r2
        + 3.0 * (x2 * x2 + y2 * y2)
        + 18.0 * x2 * y2
        + 9.0 * r2
        + 9.0 * s * s
        + (6.0 * x2 * x - 18.0 * x * y2 - 18.0 * x) * s;
    if q <= 0.0 {
        return Err(Error::BlowUpPoint(SpaceTimePoint::new(x, y, t)));
    }
    let num = (r2 + 3.0) * (x2 - y2) - 6.0 * x * s;
    Ok((-3.0 * num / q, q))
}

/// `Ũ(re^{iφ}, C)`, the blow-up time slice in polar coordinates.
pub fn enneper_polar(r: f64, phi: f64) -> f64 {
    let r2 = r * r;
    let s2 = (2.0 * phi).sin();
    -3.0 * (r2 + 3.0) * (2.0 * phi).cos() / (r2 * r2 + 3.0 * r2 * (1.0 + s2 * s2) + 9.0)
}

/// The Enneper blow-up solution evaluated from the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnneperField {
    pub c: f64,
}

impl EnneperField {
    pub fn new(c: f64) -> Self {
        Self { c }
    }
}

impl Field for EnneperField {
    fn eval(&self, p: SpaceTimePoint) -> Result<FieldValue> {
        let (u, _) = enneper_closed_form(p.x, p.y, p.t, self.c)?;
        let sc = enneper_scalars(p.x, p.y, p.t, self.c)?;
        Ok(FieldValue {
            u,
            v: transformed_v(0.0, Complex::new(0.0, 0.0), &sc),
        })
    }

    fn blow_up_point(&self) -> Option<SpaceTimePoint> {
        Some(SpaceTimePoint::new(0.0, 0.0, self.c))
    }

    fn u(&self, p: SpaceTimePoint) -> Result<f64> {
        enneper_closed_form(p.x, p.y, p.t, self.c).map(|(u, _)| u)
    }
}

impl EnneperField {
    /// `Ũ` through `W` rather than the rational form.
    pub fn u_from_scalars(&self, p: SpaceTimePoint) -> Result<f64> {
        enneper_scalars(p.x, p.y, p.t, self.c).map(|sc| transformed_u(0.0, &sc))
    }
}
