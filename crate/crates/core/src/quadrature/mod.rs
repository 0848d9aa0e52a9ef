//! `∫_{ℝ²} Ũ² dx dy` by adaptive Gauss–Legendre panels in polar coordinates.
//!
//! The disc `r ≤ R` is split at fixed radii `{1, 3, 10, 30}` and into eight
//! angular sectors. Each panel carries a tensor Gauss–Legendre value and the
//! difference to the sum over its four children as error estimate; panels with
//! the largest estimates are split until the total falls below `tol/2`. The
//! outer radius comes from a measured decay constant `K ≥ r⁴Ũ²`, which bounds
//! the tail by `πK/R²`.
//!
//! An optional focus point grades the breakpoints geometrically towards a
//! known narrow peak that a coarse panel could step over.

mod gauss;
mod simpson;

pub use gauss::GaussLegendre;
pub use simpson::adaptive_simpson;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, SpaceTimePoint};
use crate::moutard::EnneperField;

pub const RADIAL_BREAKPOINTS: [f64; 4] = [1.0, 3.0, 10.0, 30.0];
pub const TAIL_PROBE_RADII: [f64; 3] = [30.0, 100.0, 300.0];
const TAIL_PROBE_ANGLES: usize = 64;
const SECTORS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneIntegralOptions {
    pub tol: f64,
    pub max_evaluations: usize,
    /// Gauss–Legendre points per panel axis.
    pub order: usize,
    /// Rotation of the angular sectors.
    pub angle_offset: f64,
    /// A point `(x, y)` near which the integrand has a narrow peak.
    pub focus: Option<(f64, f64)>,
}

impl Default for PlaneIntegralOptions {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_evaluations: 1_000_000,
            order: 8,
            angle_offset: 0.0,
            focus: None,
        }
    }
}

impl PlaneIntegralOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneIntegralResult {
    pub value: f64,
    /// Panel error estimate plus the tail bound.
    pub abs_error_estimate: f64,
    pub tail_bound: f64,
    pub panels_used: usize,
    pub evaluations: usize,
    pub radius: f64,
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    r0: f64,
    r1: f64,
    p0: f64,
    p1: f64,
}

impl Panel {
    fn children(&self) -> [Panel; 4] {
        let rm = 0.5 * (self.r0 + self.r1);
        let pm = 0.5 * (self.p0 + self.p1);
        [
            Panel { r0: self.r0, r1: rm, p0: self.p0, p1: pm },
            Panel { r0: rm, r1: self.r1, p0: self.p0, p1: pm },
            Panel { r0: self.r0, r1: rm, p0: pm, p1: self.p1 },
            Panel { r0: rm, r1: self.r1, p0: pm, p1: self.p1 },
        ]
    }
}

#[derive(Debug, Clone, Copy)]
struct Scored {
    panel: Panel,
    value: f64,
    err: f64,
}

struct Integrator<'a, F: Field> {
    field: &'a F,
    t: f64,
    rule: GaussLegendre,
}

impl<F: Field> Integrator<'_, F> {
    fn evals_per_panel(&self) -> usize {
        5 * self.rule.len() * self.rule.len()
    }

    fn tensor(&self, p: &Panel) -> Result<f64> {
        let mut acc = NeumaierSum::default();
        for (r, wr) in self.rule.mapped(p.r0, p.r1) {
            for (phi, wp) in self.rule.mapped(p.p0, p.p1) {
                let u = self.field.u(SpaceTimePoint::new(r * phi.cos(), r * phi.sin(), self.t))?;
                acc.add(wr * wp * r * u * u);
            }
        }
        let v = acc.value();
        if !v.is_finite() {
            return Err(Error::NonFinite("plane integrand"));
        }
        Ok(v)
    }

    fn score(&self, p: Panel) -> Result<Scored> {
        let coarse = self.tensor(&p)?;
        let mut fine = NeumaierSum::default();
        for c in p.children() {
            fine.add(self.tensor(&c)?);
        }
        let value = fine.value();
        Ok(Scored {
            panel: p,
            value,
            err: (value - coarse).abs(),
        })
    }
}

fn graded(center: f64, widest: f64, narrowest: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut w = widest;
    while w >= narrowest {
        out.push(center - w);
        out.push(center + w);
        w *= 0.5;
    }
    out
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1.0));
    v
}

/// Max of `r⁴Ũ²` over the far-field probe circles.
pub fn tail_constant<F: Field>(field: &F, t: f64) -> Result<f64> {
    let mut k: f64 = 0.0;
    for &r in &TAIL_PROBE_RADII {
        for j in 0..TAIL_PROBE_ANGLES {
            let phi = 2.0 * PI * j as f64 / TAIL_PROBE_ANGLES as f64;
            let u = field.u(SpaceTimePoint::new(r * phi.cos(), r * phi.sin(), t))?;
            k = k.max(r.powi(4) * u * u);
        }
    }
    Ok(k)
}

/// `∫ Ũ(x, y, t)² dx dy` over the plane.
pub fn l2_integral<F: Field>(field: &F, t: f64, opts: &PlaneIntegralOptions) -> Result<PlaneIntegralResult> {
    let tol = opts.tol;
    if !(tol > 0.0) || !t.is_finite() || opts.order == 0 {
        return Err(Error::InvalidArgument("l2_integral needs tol > 0, finite t, order > 0".into()));
    }
    let k = 2.0 * tail_constant(field, t)?;
    let radius = (2.0 * PI * k / tol).sqrt().max(*RADIAL_BREAKPOINTS.last().unwrap());
    let tail_bound = PI * k / (radius * radius);

    let mut radii = vec![0.0, radius];
    radii.extend(RADIAL_BREAKPOINTS.iter().copied().filter(|&r| r < radius));
    let off = opts.angle_offset;
    let uniform: Vec<f64> = (0..=SECTORS).map(|j| off + 2.0 * PI * j as f64 / SECTORS as f64).collect();
    let mut focus_band = None;
    let mut focus_angles = Vec::new();
    if let Some((fx, fy)) = opts.focus {
        let rf = fx.hypot(fy);
        if rf > 0.0 && rf < radius {
            radii.extend(graded(rf, 0.5 * rf, 0.25 * rf * rf).into_iter().filter(|&r| r > 0.0 && r < radius));
            radii.push(rf);
            focus_band = Some((0.25 * rf, 4.0 * rf));
            // angles folded into [off, off + 2π)
            let pf = fy.atan2(fx);
            for a in graded(pf, 0.25 * PI, 0.25 * rf.min(1.0)).into_iter().chain([pf]) {
                focus_angles.push(off + (a - off).rem_euclid(2.0 * PI));
            }
        }
    }
    let radii = sorted_unique(radii);
    let focused_angles = sorted_unique(uniform.iter().copied().chain(focus_angles).collect());

    let mut initial = Vec::new();
    for w in radii.windows(2) {
        let near = focus_band.is_some_and(|(lo, hi)| w[1] > lo && w[0] < hi);
        let angles = if near { &focused_angles } else { &uniform };
        for a in angles.windows(2) {
            initial.push(Panel { r0: w[0], r1: w[1], p0: a[0], p1: a[1] });
        }
    }

    let integ = Integrator {
        field,
        t,
        rule: GaussLegendre::new(opts.order),
    };
    let per_panel = integ.evals_per_panel();
    let mut evaluations = TAIL_PROBE_RADII.len() * TAIL_PROBE_ANGLES + per_panel * initial.len();
    let mut panels: Vec<Scored> = initial.into_par_iter().map(|p| integ.score(p)).collect::<Result<_>>()?;
    let target = 0.5 * tol;
    loop {
        let total_err = panels.iter().map(|p| p.err).collect::<NeumaierSum>().value();
        if total_err <= target {
            let value = panels.iter().map(|p| p.value).collect::<NeumaierSum>().value();
            return Ok(PlaneIntegralResult {
                value,
                abs_error_estimate: total_err + tail_bound,
                tail_bound,
                panels_used: panels.len(),
                evaluations,
                radius,
            });
        }
        // Split the largest contributors covering half of the current estimate.
        let mut order: Vec<usize> = (0..panels.len()).collect();
        order.sort_by(|&a, &b| panels[b].err.total_cmp(&panels[a].err).then(a.cmp(&b)));
        let mut split = vec![false; panels.len()];
        let mut covered = 0.0;
        for &i in &order {
            if covered >= 0.5 * total_err {
                break;
            }
            split[i] = true;
            covered += panels[i].err;
        }
        let n_split = split.iter().filter(|&&s| s).count();
        if evaluations + 4 * n_split * per_panel > opts.max_evaluations {
            return Err(Error::ToleranceNotMet {
                tol,
                estimate: total_err + tail_bound,
                evaluations,
            });
        }
        evaluations += 4 * n_split * per_panel;
        let next: Vec<Panel> = panels
            .iter()
            .zip(&split)
            .flat_map(|(p, &s)| if s { p.panel.children().to_vec() } else { vec![p.panel] })
            .collect();
        let keep: Vec<Option<Scored>> = panels
            .iter()
            .zip(&split)
            .flat_map(|(p, &s)| if s { vec![None; 4] } else { vec![Some(*p)] })
            .collect();
        panels = next
            .into_par_iter()
            .zip(keep)
            .map(|(p, k)| match k {
                Some(s) => Ok(s),
                None => integ.score(p),
            })
            .collect::<Result<_>>()?;
    }
}

/// Location of the narrow peak of the Enneper solution near the blow-up time.
pub fn enneper_focus(t: f64, c: f64) -> Option<(f64, f64)> {
    (t != c).then_some((c - t, 0.0))
}

/// `3π` away from the blow-up time, `2π` at it.
pub fn enneper_reference(t: f64, c: f64) -> f64 {
    if t == c {
        2.0 * PI
    } else {
        3.0 * PI
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationRow {
    pub t: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub tail_bound: f64,
    pub reference: Option<f64>,
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationScan {
    pub rows: Vec<ConservationRow>,
    /// Largest `|value − 3π|` over times other than `C`.
    pub max_deviation_regular: Option<f64>,
}

/// `∫Ũ²` at each time; `reference` supplies the expected value if known.
pub fn conservation_scan<F: Field>(
    field: &F,
    c: f64,
    times: &[f64],
    opts: &PlaneIntegralOptions,
    reference: Option<&dyn Fn(f64) -> f64>,
    focus: Option<&dyn Fn(f64) -> Option<(f64, f64)>>,
) -> Result<ConservationScan> {
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        if !t.is_finite() {
            return Err(Error::InvalidArgument("times must be finite".into()));
        }
        let mut o = opts.clone();
        if let Some(f) = focus {
            o.focus = f(t);
        }
        let r = l2_integral(field, t, &o)?;
        let reference = reference.map(|f| f(t));
        rows.push(ConservationRow {
            t,
            c,
            value: r.value,
            error_estimate: r.abs_error_estimate,
            tail_bound: r.tail_bound,
            reference,
            deviation: reference.map(|x| (r.value - x).abs()),
        });
    }
    let max_deviation_regular = rows
        .iter()
        .filter(|r| r.t != c)
        .map(|r| (r.value - 3.0 * PI).abs())
        .reduce(f64::max);
    Ok(ConservationScan {
        rows,
        max_deviation_regular,
    })
}

/// Conservation scan of the Enneper blow-up solution against `3π` / `2π`.
pub fn enneper_conservation_scan(c: f64, times: &[f64], opts: &PlaneIntegralOptions) -> Result<ConservationScan> {
    let field = EnneperField::new(c);
    let reference = move |t: f64| enneper_reference(t, c);
    let focus = move |t: f64| enneper_focus(t, c);
    conservation_scan(&field, c, times, opts, Some(&reference), Some(&focus))
}
