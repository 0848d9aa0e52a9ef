//! Blow-up solutions of the modified Novikov–Veselov equation
//!
//! ```text
//! Uₜ = U_zzz + 3U_zV + (3/2)UV_z + c.c.,   V_z̄ = (U²)_z
//! ```
//!
//! built from minimal surfaces. A holomorphic spinor `(p, q)` defines a
//! Weierstrass surface; evolving the spinor by `∂ₜ = ∂³` and applying the
//! Moutard transformation to the zero potential gives `(Ũ, Ṽ)`. For the
//! Enneper seed `(z, 1)` the result blows up at exactly one point `(0, 0, C)`.
//!
//! Modules:
//! - [`algebra`]: the quaternionic matrices `H`.
//! - [`spinor`]: polynomial spinors and their exact time evolution.
//! - [`weierstrass`]: surfaces, normals, OBJ meshes.
//! - [`moutard`]: `S̃`, `K`, `M`, the potentials and the Enneper closed forms.
//! - [`inversion`]: Möbius inversion `S ↦ S⁻¹`.
//! - [`verify`]: finite-difference residuals, decay and singular-limit tables.
//! - [`quadrature`]: `∫Ũ²` over the plane.

pub mod algebra;
pub mod error;
pub mod field;
pub mod grid;
pub mod inversion;
pub mod moutard;
pub mod obj;
pub mod poly;
pub mod quadrature;
pub mod spinor;
pub mod verify;
pub mod weierstrass;

pub use algebra::{Complex, HMatrix, Mat2, PauliTag};
pub use error::{Error, Result};
pub use field::{Field, FieldValue, SpaceTimePoint};
pub use grid::Grid;
pub use moutard::{EnneperField, MoutardField, MoutardFrame, MoutardScalars};
pub use spinor::{HoloPoly, SpinorPair};
pub use weierstrass::{SurfaceMatrix, SurfacePoint};
