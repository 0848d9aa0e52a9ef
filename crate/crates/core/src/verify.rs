//! Finite-difference checks of
//!
//! ```text
//! Uₜ = 2 Re(U_zzz + 3U_zV + (3/2)UV_z),   V_z̄ = (U²)_z
//! ```
//!
//! with `∂ = (∂ₓ − i∂ᵧ)/2`, `∂̄ = (∂ₓ + i∂ᵧ)/2`. All derivatives are central and
//! second order; pure third derivatives use five nodes per axis and mixed ones
//! a 3×3 tensor stencil.

use std::collections::HashMap;
use std::io::{self, Read, Write};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Complex, I};
use crate::error::{Error, Result};
use crate::field::{Field, FieldValue, SpaceTimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stencil {
    pub h_space: f64,
    pub h_time: f64,
}

impl Default for Stencil {
    fn default() -> Self {
        Self {
            h_space: 1e-3,
            h_time: 1e-4,
        }
    }
}

/// Radius of the exclusion ball around a blow-up point, in units of `h_space`.
pub const EXCLUSION_FACTOR: f64 = 10.0;

impl Stencil {
    pub fn new(h_space: f64, h_time: f64) -> Result<Self> {
        if !(h_space > 0.0 && h_time > 0.0 && h_space.is_finite() && h_time.is_finite()) {
            return Err(Error::InvalidArgument("stencil steps must be positive".into()));
        }
        Ok(Self { h_space, h_time })
    }

    /// Same space/time ratio as the default, scaled to `h_space = h`.
    pub fn with_h(h: f64) -> Result<Self> {
        Self::new(h, 0.1 * h)
    }

    pub fn halved(&self) -> Self {
        Self {
            h_space: 0.5 * self.h_space,
            h_time: 0.5 * self.h_time,
        }
    }

    fn check(&self, field: &impl Field, p: SpaceTimePoint) -> Result<()> {
        if let Some(b) = field.blow_up_point() {
            if p.distance(&b) < EXCLUSION_FACTOR * self.h_space.max(self.h_time) {
                return Err(Error::StencilCollision(p));
            }
        }
        Ok(())
    }
}

fn at<F: Field>(field: &F, p: SpaceTimePoint) -> Result<FieldValue> {
    field.eval(p).map_err(|e| match e {
        Error::BlowUpPoint(q) => Error::StencilCollision(q),
        other => other,
    })
}

/// Values on the spatial 5×5 stencil and the two time neighbours.
struct Samples {
    grid: [[FieldValue; 5]; 5],
    before: FieldValue,
    after: FieldValue,
    h: f64,
    k: f64,
}

impl Samples {
    fn take<F: Field>(field: &F, p: SpaceTimePoint, st: &Stencil) -> Result<Self> {
        st.check(field, p)?;
        let (h, k) = (st.h_space, st.h_time);
        let mut grid = [[FieldValue::ZERO; 5]; 5];
        for (i, row) in grid.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let (di, dj) = (i as i32 - 2, j as i32 - 2);
                // only the cross and the inner 3×3 block are used
                if di.abs() <= 1 && dj.abs() <= 1 || di == 0 || dj == 0 {
                    *v = at(field, p.offset(di as f64 * h, dj as f64 * h, 0.0))?;
                }
            }
        }
        Ok(Self {
            grid,
            before: at(field, p.offset(0.0, 0.0, -k))?,
            after: at(field, p.offset(0.0, 0.0, k))?,
            h,
            k,
        })
    }

    fn g<T>(&self, i: i32, j: i32, f: impl Fn(&FieldValue) -> T) -> T {
        f(&self.grid[(i + 2) as usize][(j + 2) as usize])
    }

    fn dx<T: Into<Complex>>(&self, f: impl Fn(&FieldValue) -> T + Copy) -> Complex {
        (self.g(1, 0, f).into() - self.g(-1, 0, f).into()) / (2.0 * self.h)
    }

    fn dy<T: Into<Complex>>(&self, f: impl Fn(&FieldValue) -> T + Copy) -> Complex {
        (self.g(0, 1, f).into() - self.g(0, -1, f).into()) / (2.0 * self.h)
    }

    /// `∂ = (∂ₓ − i∂ᵧ)/2`
    fn dz<T: Into<Complex>>(&self, f: impl Fn(&FieldValue) -> T + Copy) -> Complex {
        (self.dx(f) - I * self.dy(f)) * 0.5
    }

    /// `∂̄ = (∂ₓ + i∂ᵧ)/2`
    fn dzbar<T: Into<Complex>>(&self, f: impl Fn(&FieldValue) -> T + Copy) -> Complex {
        (self.dx(f) + I * self.dy(f)) * 0.5
    }

    fn u(&self, i: i32, j: i32) -> f64 {
        self.g(i, j, |v| v.u)
    }

    fn u_zzz(&self) -> Complex {
        let h3 = self.h.powi(3);
        let u = |i, j| self.u(i, j);
        let xxx = (u(2, 0) - 2.0 * u(1, 0) + 2.0 * u(-1, 0) - u(-2, 0)) / (2.0 * h3);
        let yyy = (u(0, 2) - 2.0 * u(0, 1) + 2.0 * u(0, -1) - u(0, -2)) / (2.0 * h3);
        // ∂ₓ²∂ᵧ and ∂ₓ∂ᵧ² on the inner 3×3 block
        let xxy = ((u(1, 1) - 2.0 * u(0, 1) + u(-1, 1)) - (u(1, -1) - 2.0 * u(0, -1) + u(-1, -1))) / (2.0 * h3);
        let xyy = ((u(1, 1) - 2.0 * u(1, 0) + u(1, -1)) - (u(-1, 1) - 2.0 * u(-1, 0) + u(-1, -1))) / (2.0 * h3);
        Complex::new(xxx - 3.0 * xyy, yyy - 3.0 * xxy) / 8.0
    }

    fn mnv(&self) -> f64 {
        let ut = (self.after.u - self.before.u) / (2.0 * self.k);
        let c = &self.grid[2][2];
        let uz = self.dz(|v| v.u);
        let vz = self.dz(|v| v.v);
        let rhs = 2.0 * (self.u_zzz() + 3.0 * uz * c.v + 1.5 * c.u * vz).re;
        (ut - rhs).abs()
    }

    fn constraint(&self) -> f64 {
        let vzb = self.dzbar(|v| v.v);
        let u2z = self.dz(|v| v.u * v.u);
        (vzb - u2z).norm()
    }
}

pub fn mnv_residual<F: Field>(field: &F, p: SpaceTimePoint, st: &Stencil) -> Result<f64> {
    Ok(Samples::take(field, p, st)?.mnv())
}

pub fn constraint_residual<F: Field>(field: &F, p: SpaceTimePoint, st: &Stencil) -> Result<f64> {
    Ok(Samples::take(field, p, st)?.constraint())
}

/// Both residuals from one set of samples.
pub fn residuals<F: Field>(field: &F, p: SpaceTimePoint, st: &Stencil) -> Result<(f64, f64)> {
    let s = Samples::take(field, p, st)?;
    Ok((s.mnv(), s.constraint()))
}

/// Least-squares slope of `log r` against `log h`.
pub fn convergence_order(hs: &[f64], residuals: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = hs
        .iter()
        .zip(residuals)
        .filter(|(_, r)| **r > 0.0)
        .map(|(h, r)| (h.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderOptions {
    /// Coarsest stencil of the halving sequence.
    pub coarse: Stencil,
    pub halvings: usize,
}

impl Default for OrderOptions {
    fn default() -> Self {
        Self {
            coarse: Stencil::new(1e-2, 1e-3).unwrap(),
            halvings: 2,
        }
    }
}

impl OrderOptions {
    pub fn stencils(&self) -> Vec<Stencil> {
        std::iter::successors(Some(self.coarse), |s| Some(s.halved()))
            .take(self.halvings + 1)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub h: f64,
    pub mnv_residual: f64,
    pub constraint_residual: f64,
    /// The smaller of the two measured orders.
    pub order: f64,
    pub mnv_order: f64,
    pub constraint_order: f64,
}

/// Residuals at `st` and convergence orders over the halving sequence.
pub fn residual_report<F: Field>(field: &F, p: SpaceTimePoint, st: &Stencil, ord: &OrderOptions) -> Result<ResidualReport> {
    let (m, c) = residuals(field, p, st)?;
    let seq = ord.stencils();
    let mut hs = Vec::with_capacity(seq.len());
    let mut ms = Vec::with_capacity(seq.len());
    let mut cs = Vec::with_capacity(seq.len());
    for s in &seq {
        let (a, b) = residuals(field, p, s)?;
        hs.push(s.h_space);
        ms.push(a);
        cs.push(b);
    }
    let mnv_order = convergence_order(&hs, &ms);
    let constraint_order = convergence_order(&hs, &cs);
    Ok(ResidualReport {
        x: p.x,
        y: p.y,
        t: p.t,
        h: st.h_space,
        mnv_residual: m,
        constraint_residual: c,
        order: mnv_order.min(constraint_order),
        mnv_order,
        constraint_order,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifySummary {
    pub max_residual: f64,
    pub min_order: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub points: Vec<ResidualReport>,
    pub summary: VerifySummary,
}

pub fn verify_points<F: Field>(
    field: &F,
    points: &[SpaceTimePoint],
    st: &Stencil,
    ord: &OrderOptions,
) -> Result<VerifyReport> {
    let reports: Vec<ResidualReport> = points
        .par_iter()
        .map(|&p| residual_report(field, p, st, ord))
        .collect::<Result<_>>()?;
    let max_residual = reports
        .iter()
        .map(|r| r.mnv_residual.max(r.constraint_residual))
        .fold(0.0, f64::max);
    let min_order = reports.iter().map(|r| r.order).fold(f64::INFINITY, f64::min);
    Ok(VerifyReport {
        points: reports,
        summary: VerifySummary {
            max_residual,
            min_order,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub r: f64,
    pub max_r2_u: f64,
    pub max_r2_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub t: f64,
    pub rows: Vec<DecayRow>,
    /// Set when `r²|Ũ|` or `r²|Ṽ|` more than doubles between consecutive radii.
    pub growth: bool,
}

pub fn decay_report<F: Field>(field: &F, t: f64, radii: &[f64], angles: &[f64]) -> Result<DecayReport> {
    if radii.iter().any(|&r| !(r >= 1.0)) {
        return Err(Error::InvalidArgument("decay radii must be ≥ 1".into()));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let (mut mu, mut mv): (f64, f64) = (0.0, 0.0);
        for &phi in angles {
            let v = field.eval(SpaceTimePoint::new(r * phi.cos(), r * phi.sin(), t))?;
            mu = mu.max(r * r * v.u.abs());
            mv = mv.max(r * r * v.v.norm());
        }
        rows.push(DecayRow {
            r,
            max_r2_u: mu,
            max_r2_v: mv,
        });
    }
    let grows = |a: f64, b: f64| b > 2.0 * a && b > 1e-12;
    let growth = rows
        .windows(2)
        .any(|w| grows(w[0].max_r2_u, w[1].max_r2_u) || grows(w[0].max_r2_v, w[1].max_r2_v));
    Ok(DecayReport { t, rows, growth })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularRow {
    pub r: f64,
    pub phi: f64,
    pub u: f64,
    /// `|Ũ(re^{iφ}, C) + cos 2φ|`
    pub error: f64,
}

pub fn singular_limit_report<F: Field>(field: &F, c: f64, radii: &[f64], angles: &[f64]) -> Result<Vec<SingularRow>> {
    if radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidArgument("singular-limit radii must be positive".into()));
    }
    let mut rows = Vec::with_capacity(radii.len() * angles.len());
    for &r in radii {
        for &phi in angles {
            let u = field.u(SpaceTimePoint::new(r * phi.cos(), r * phi.sin(), c))?;
            rows.push(SingularRow {
                r,
                phi,
                u,
                error: (u + (2.0 * phi).cos()).abs(),
            });
        }
    }
    Ok(rows)
}

type Key = (u64, u64, u64);

fn key(p: SpaceTimePoint) -> Key {
    (p.x.to_bits(), p.y.to_bits(), p.t.to_bits())
}

/// Field values looked up at exactly the sampled points.
#[derive(Debug, Clone, Default)]
pub struct SampledField {
    values: HashMap<Key, FieldValue>,
    singular: Option<SpaceTimePoint>,
}

impl SampledField {
    pub fn new(rows: impl IntoIterator<Item = (SpaceTimePoint, Option<FieldValue>)>) -> Self {
        let values = rows
            .into_iter()
            .filter_map(|(p, v)| v.map(|v| (key(p), v)))
            .collect();
        Self {
            values,
            singular: None,
        }
    }

    pub fn with_singular_point(mut self, p: SpaceTimePoint) -> Self {
        self.singular = Some(p);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Field for SampledField {
    fn eval(&self, p: SpaceTimePoint) -> Result<FieldValue> {
        self.values
            .get(&key(p))
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("no sample at ({}, {}, {})", p.x, p.y, p.t)))
    }

    fn blow_up_point(&self) -> Option<SpaceTimePoint> {
        self.singular
    }
}

/// Wraps a field and remembers every point it was asked for.
pub struct RecordingField<F> {
    inner: F,
    seen: Mutex<Vec<(SpaceTimePoint, Option<FieldValue>)>>,
}

impl<F: Field> RecordingField<F> {
    pub fn new(inner: F) -> Self {
        Self {
            inner,
            seen: Mutex::new(Vec::new()),
        }
    }

    /// Recorded samples, deduplicated and sorted by `(t, y, x)`.
    pub fn into_samples(self) -> Vec<(SpaceTimePoint, Option<FieldValue>)> {
        let mut v = self.seen.into_inner().unwrap_or_else(|e| e.into_inner());
        v.sort_by(|a, b| {
            (a.0.t, a.0.y, a.0.x)
                .partial_cmp(&(b.0.t, b.0.y, b.0.x))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        v.dedup_by_key(|s| key(s.0));
        v
    }
}

impl<F: Field> Field for RecordingField<F> {
    fn eval(&self, p: SpaceTimePoint) -> Result<FieldValue> {
        let r = self.inner.eval(p);
        self.seen
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .push((p, r.as_ref().ok().copied()));
        r
    }

    fn blow_up_point(&self) -> Option<SpaceTimePoint> {
        self.inner.blow_up_point()
    }
}

pub const CSV_HEADER: &str = "x,y,t,U,ReV,ImV";

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// One CSV record per sample; missing values are written as `nan`.
pub fn write_field_csv<W: Write>(out: W, rows: &[(SpaceTimePoint, Option<FieldValue>)]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for (p, v) in rows {
        let (u, vr, vi) = match v {
            Some(v) => (v.u, v.v.re, v.v.im),
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        w.write_record([p.x, p.y, p.t, u, vr, vi].map(num))?;
    }
    w.flush()
}

pub fn read_field_csv<R: Read>(input: R) -> Result<Vec<(SpaceTimePoint, Option<FieldValue>)>> {
    let bad = |e: csv::Error| Error::InvalidArgument(format!("field CSV: {e}"));
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(bad)?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(Error::InvalidArgument(format!("expected CSV header {CSV_HEADER:?}")));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(bad)?;
        let line = rec.position().map_or(0, |p| p.line());
        let vals: Vec<f64> = rec
            .iter()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("field CSV line {line}: {e}")))?;
        if vals.len() != 6 {
            return Err(Error::InvalidArgument(format!("field CSV line {line}: expected 6 columns")));
        }
        let p = SpaceTimePoint::new(vals[0], vals[1], vals[2]);
        let v = (!vals[3].is_nan()).then(|| FieldValue {
            u: vals[3],
            v: Complex::new(vals[4], vals[5]),
        });
        rows.push((p, v));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::re;
    use crate::field::{real_field, FnField, ZeroField};
    use crate::moutard::{EnneperField, MoutardField};
    use std::f64::consts::PI;

    #[test]
    fn zero_field_has_zero_residuals() {
        let p = SpaceTimePoint::new(0.3, -0.2, 1.0);
        assert_eq!(mnv_residual(&ZeroField, p, &Stencil::default()).unwrap(), 0.0);
        assert_eq!(constraint_residual(&ZeroField, p, &Stencil::default()).unwrap(), 0.0);
    }

    #[test]
    fn stencils_are_exact_on_cubics() {
        // U = x³ − 3xy² = Re z³ gives U_zzz = 3 exactly; V = 0, so Uₜ must equal 6.
        let f = FnField::new(|p: SpaceTimePoint| (p.x.powi(3) - 3.0 * p.x * p.y * p.y + 6.0 * p.t, re(0.0)));
        let r = mnv_residual(&f, SpaceTimePoint::new(0.7, -1.1, 0.2), &Stencil::new(1e-2, 1e-2).unwrap()).unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn x_only_field_satisfies_constraint_to_second_order() {
        // V = U² with U = x³: V_z̄ − (U²)_z = (1/2)(∂ₓ + i∂ᵧ − ∂ₓ + i∂ᵧ)U² = 0
        let f = real_field(|p: SpaceTimePoint| p.x.powi(3));
        let p = SpaceTimePoint::new(0.8, 0.1, 0.0);
        let r = constraint_residual(&f, p, &Stencil::default()).unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn enneper_residuals_small_and_second_order() {
        let field = MoutardField::enneper(0.0);
        let p = SpaceTimePoint::new(1.0, 1.0, 1.0);
        let st = Stencil::default();
        let (m, c) = residuals(&field, p, &st).unwrap();
        assert!(m <= 1e-4 && c <= 1e-4, "{m} {c}");
        let rep = residual_report(&field, p, &st, &OrderOptions::default()).unwrap();
        assert!((rep.mnv_order - 2.0).abs() < 0.3, "{rep:?}");
        assert!((rep.constraint_order - 2.0).abs() < 0.3, "{rep:?}");
        let (_, c) = residuals(&field, SpaceTimePoint::new(0.5, -0.7, -0.3), &st).unwrap();
        assert!(c <= 1e-4);
    }

    #[test]
    fn collision_near_blow_up() {
        let field = EnneperField::new(1.0);
        let err = mnv_residual(&field, SpaceTimePoint::new(0.005, 0.0, 1.0), &Stencil::default()).unwrap_err();
        assert!(matches!(err, Error::StencilCollision(_)));
    }

    #[test]
    fn order_of_synthetic_sequence() {
        let hs = [1e-2, 5e-3, 2.5e-3];
        let rs: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        assert!((convergence_order(&hs, &rs) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn decay_table() {
        let angles: Vec<f64> = (0..32).map(|k| 2.0 * PI * k as f64 / 32.0).collect();
        let rep = decay_report(&EnneperField::new(0.0), 0.0, &[10.0, 100.0, 1000.0], &angles).unwrap();
        assert!(!rep.growth);
        for row in &rep.rows {
            assert!(row.max_r2_u <= 3.0 + 1e-2, "{row:?}");
        }
        let z = decay_report(&ZeroField, 0.0, &[10.0, 100.0], &angles).unwrap();
        assert!(z.rows.iter().all(|r| r.max_r2_u == 0.0 && r.max_r2_v == 0.0));
        assert!(decay_report(&ZeroField, 0.0, &[0.5], &angles).is_err());
    }

    #[test]
    fn singular_limit_directions() {
        let rows = singular_limit_report(&EnneperField::new(2.0), 2.0, &[1e-3], &[0.0, PI / 4.0, PI / 2.0]).unwrap();
        assert!((rows[0].u + 1.0).abs() < 1e-5);
        assert!(rows[1].u.abs() < 1e-12);
        assert!((rows[2].u - 1.0).abs() < 1e-5);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let field = RecordingField::new(EnneperField::new(0.5));
        let p = SpaceTimePoint::new(0.4, 0.3, -0.2);
        let st = Stencil::default();
        let direct = residuals(&field, p, &st).unwrap();
        let _ = field.eval(SpaceTimePoint::new(0.0, 0.0, 0.5));
        let samples = field.into_samples();
        let mut buf = Vec::new();
        write_field_csv(&mut buf, &samples).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.contains("nan,nan,nan"));
        let back = read_field_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), samples.len());
        let sampled = SampledField::new(back);
        assert_eq!(residuals(&sampled, p, &st).unwrap(), direct);
    }
}
