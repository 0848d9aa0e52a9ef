use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use mnv_core::inversion::{sample_inverted_surface, write_inverted_obj};
use mnv_core::moutard::MoutardField;
use mnv_core::obj::write_obj;
use mnv_core::quadrature::{conservation_scan, enneper_focus, enneper_reference, PlaneIntegralOptions};
use mnv_core::verify::{
    read_field_csv, verify_points, write_field_csv, OrderOptions, RecordingField, SampledField, Stencil,
    EXCLUSION_FACTOR,
};
use mnv_core::weierstrass::sample_surface;
use mnv_core::{Error, Field, SpaceTimePoint};

use crate::config::RunConfig;
use crate::Failure;

fn with_output<T>(cfg: &RunConfig, f: impl FnOnce(&mut dyn Write) -> io::Result<T>) -> Result<T, Failure> {
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::io(path, e))?;
            let mut w = BufWriter::new(file);
            let r = f(&mut w).map_err(|e| Failure::io(path, e))?;
            w.flush().map_err(|e| Failure::io(path, e))?;
            Ok(r)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            let r = f(&mut w).map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
            w.flush().map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
            Ok(r)
        }
    }
}

fn write_json(cfg: &RunConfig, value: &impl Serialize) -> Result<(), Failure> {
    with_output(cfg, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::other)?;
        writeln!(w)
    })
}

/// The transformed potentials; the Enneper seed with the default `u₀` knows
/// its blow-up point.
fn moutard_field(cfg: &RunConfig) -> Result<MoutardField, Failure> {
    let s = cfg.spinor()?;
    let field = MoutardField::new(&s, cfg.u0());
    if s.is_enneper() && cfg.u0.is_none() {
        Ok(field.with_singular_point(SpaceTimePoint::new(0.0, 0.0, cfg.c)))
    } else {
        Ok(field)
    }
}

fn is_enneper_default(cfg: &RunConfig) -> Result<bool, Failure> {
    Ok(cfg.spinor()?.is_enneper() && cfg.u0.is_none())
}

pub fn field(cfg: &RunConfig) -> Result<(), Failure> {
    let field = moutard_field(cfg)?;
    let mut rows = Vec::with_capacity(cfg.grid.len());
    for t in cfg.times_or(&[1.0]) {
        for (p, r) in cfg.grid.nodes().map(|(x, y)| SpaceTimePoint::new(x, y, t)).zip(field.sample(&cfg.grid, t)) {
            match r {
                Ok(v) => rows.push((p, Some(v))),
                Err(Error::BlowUpPoint(_)) => {
                    eprintln!("warning: blow-up point ({}, {}, {}) written as nan", p.x, p.y, p.t);
                    rows.push((p, None));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    with_output(cfg, |w| write_field_csv(w, &rows))
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: mnv_core::verify::VerifyReport,
    skipped: Vec<SpaceTimePoint>,
    stencil: Stencil,
    order_stencils: Vec<Stencil>,
    passed: bool,
}

pub fn verify(cfg: &RunConfig, from_csv: Option<&Path>, dump_csv: Option<&Path>) -> Result<(), Failure> {
    let stencil = Stencil::new(cfg.h, cfg.h_time.unwrap_or(0.1 * cfg.h))?;
    let order = OrderOptions::default();
    let field = moutard_field(cfg)?;
    let candidates: Vec<SpaceTimePoint> = if cfg.points.is_empty() {
        cfg.times_or(&[1.0])
            .into_iter()
            .flat_map(|t| cfg.grid.nodes().map(move |(x, y)| SpaceTimePoint::new(x, y, t)))
            .collect()
    } else {
        cfg.points.iter().map(|&[x, y, t]| SpaceTimePoint::new(x, y, t)).collect()
    };
    let widest = stencil.h_space.max(order.coarse.h_space).max(stencil.h_time).max(order.coarse.h_time);
    let (points, skipped): (Vec<_>, Vec<_>) = candidates.into_iter().partition(|p| {
        field
            .blow_up_point()
            .is_none_or(|b| p.distance(&b) >= EXCLUSION_FACTOR * widest)
    });

    let report = match from_csv {
        Some(path) => {
            let file = File::open(path).map_err(|e| Failure::io(path, e))?;
            let mut sampled = SampledField::new(read_field_csv(BufReader::new(file))?);
            if let Some(b) = field.blow_up_point() {
                sampled = sampled.with_singular_point(b);
            }
            verify_points(&sampled, &points, &stencil, &order)?
        }
        None => match dump_csv {
            Some(path) => {
                let rec = RecordingField::new(&field);
                let report = verify_points(&rec, &points, &stencil, &order)?;
                let file = File::create(path).map_err(|e| Failure::io(path, e))?;
                let mut w = BufWriter::new(file);
                write_field_csv(&mut w, &rec.into_samples()).map_err(|e| Failure::io(path, e))?;
                w.flush().map_err(|e| Failure::io(path, e))?;
                report
            }
            None => verify_points(&field, &points, &stencil, &order)?,
        },
    };

    let th = &cfg.thresholds;
    let passed = report.summary.max_residual <= th.max_residual && report.summary.min_order >= th.min_order;
    let out = VerifyOutput {
        report,
        skipped,
        stencil,
        order_stencils: order.stencils(),
        passed,
    };
    write_json(cfg, &out)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::acceptance(format!(
            "max residual {:e} (limit {:e}), min order {} (limit {})",
            out.report.summary.max_residual, th.max_residual, out.report.summary.min_order, th.min_order
        )))
    }
}

pub fn conserve(cfg: &RunConfig) -> Result<(), Failure> {
    let field = moutard_field(cfg)?;
    let c = cfg.c;
    let times = cfg.times_or(&[1.0]);
    let opts = PlaneIntegralOptions::with_tol(cfg.tol);
    let enneper = is_enneper_default(cfg)?;
    let reference = move |t: f64| enneper_reference(t, c);
    let focus = move |t: f64| enneper_focus(t, c);
    let scan = if enneper {
        conservation_scan(&field, c, &times, &opts, Some(&reference), Some(&focus))?
    } else {
        conservation_scan(&field, c, &times, &opts, None, None)?
    };
    let worst = scan.rows.iter().filter_map(|r| r.deviation).fold(0.0, f64::max);
    let passed = worst <= cfg.thresholds.max_deviation;
    write_json(
        cfg,
        &json!({
            "rows": scan.rows,
            "max_deviation_regular": scan.max_deviation_regular,
            "max_deviation": worst,
            "references": if enneper { json!({"regular": 3.0 * PI, "blow_up": 2.0 * PI}) } else { json!(null) },
            "tol": cfg.tol,
            "passed": passed,
        }),
    )?;
    if passed {
        Ok(())
    } else {
        Err(Failure::acceptance(format!(
            "deviation {worst:e} exceeds {:e}",
            cfg.thresholds.max_deviation
        )))
    }
}

fn first_time(cfg: &RunConfig, default: f64) -> f64 {
    cfg.times.first().copied().unwrap_or(default)
}

fn out_label(cfg: &RunConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>"))
}

pub fn surface(cfg: &RunConfig) -> Result<(), Failure> {
    let s = cfg.spinor()?;
    let t = first_time(cfg, 0.0);
    let u0 = cfg.u0();
    let verts: Vec<_> = sample_surface(&s, &cfg.grid, t, u0).into_iter().map(Some).collect();
    let comment = format!("weierstrass surface t={t} u0=({}, {}, {})", u0.u1, u0.u2, u0.u3);
    let stats = with_output(cfg, |w| write_obj(w, &cfg.grid, &verts, &comment))?;
    eprintln!("{}: {} vertices, {} faces", out_label(cfg).display(), stats.vertices, stats.faces);
    Ok(())
}

pub fn invert(cfg: &RunConfig) -> Result<(), Failure> {
    let s = cfg.spinor()?;
    let t = first_time(cfg, cfg.c);
    let samples = sample_inverted_surface(&s, &cfg.grid, t, cfg.u0());
    let comment = format!("inverted deformed surface t={t} C={}", cfg.c);
    let stats = with_output(cfg, |w| write_inverted_obj(w, &cfg.grid, &samples, &comment))?;
    for smp in samples.iter().filter(|s| s.degenerate) {
        eprintln!("warning: vertex ({}, {}) maps to infinity", smp.x, smp.y);
    }
    eprintln!(
        "{}: {} vertices, {} faces, {} degenerate",
        out_label(cfg).display(),
        stats.vertices,
        stats.faces,
        stats.degenerate
    );
    Ok(())
}
