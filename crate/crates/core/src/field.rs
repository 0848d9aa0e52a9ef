//! Space–time points and the field evaluator interface shared by the
//! verification and quadrature code.

use serde::{Deserialize, Serialize};

use crate::algebra::{re, Complex};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl SpaceTimePoint {
    pub const fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    pub fn z(&self) -> Complex {
        Complex::new(self.x, self.y)
    }

    pub fn offset(&self, dx: f64, dy: f64, dt: f64) -> Self {
        Self::new(self.x + dx, self.y + dy, self.t + dt)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.t - other.t).powi(2)).sqrt()
    }
}

/// The pair `(Ũ, Ṽ)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub u: f64,
    pub v: Complex,
}

impl FieldValue {
    pub const ZERO: FieldValue = FieldValue {
        u: 0.0,
        v: Complex::new(0.0, 0.0),
    };
}

/// Anything that can produce `(Ũ, Ṽ)` at a space–time point.
pub trait Field: Sync {
    fn eval(&self, p: SpaceTimePoint) -> Result<FieldValue>;

    /// Known singular point, if any. Stencils refuse to come near it.
    fn blow_up_point(&self) -> Option<SpaceTimePoint> {
        None
    }

    fn u(&self, p: SpaceTimePoint) -> Result<f64> {
        self.eval(p).map(|v| v.u)
    }
}

impl<F: Field + ?Sized> Field for &F {
    fn eval(&self, p: SpaceTimePoint) -> Result<FieldValue> {
        (**self).eval(p)
    }

    fn blow_up_point(&self) -> Option<SpaceTimePoint> {
        (**self).blow_up_point()
    }
}

/// `U ≡ 0`, `V ≡ 0`: the seed potential.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroField;

impl Field for ZeroField {
    fn eval(&self, _p: SpaceTimePoint) -> Result<FieldValue> {
        Ok(FieldValue::ZERO)
    }
}

/// A field given by a closure returning `(U, V)`.
pub struct FnField<F> {
    f: F,
    singular: Option<SpaceTimePoint>,
}

impl<F> FnField<F>
where
    F: Fn(SpaceTimePoint) -> (f64, Complex) + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, singular: None }
    }

    pub fn with_singular_point(mut self, p: SpaceTimePoint) -> Self {
        self.singular = Some(p);
        self
    }
}

impl<F> Field for FnField<F>
where
    F: Fn(SpaceTimePoint) -> (f64, Complex) + Sync,
{
    fn eval(&self, p: SpaceTimePoint) -> Result<FieldValue> {
        let (u, v) = (self.f)(p);
        Ok(FieldValue { u, v })
    }

    fn blow_up_point(&self) -> Option<SpaceTimePoint> {
        self.singular
    }
}

/// A real-valued `U` with `V = U²`, used for x-only consistency checks.
pub fn real_field<G>(g: G) -> FnField<impl Fn(SpaceTimePoint) -> (f64, Complex) + Sync>
where
    G: Fn(SpaceTimePoint) -> f64 + Sync,
{
    FnField::new(move |p| {
        let u = g(p);
        (u, re(u * u))
    })
}
