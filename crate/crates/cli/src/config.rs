use std::path::{Path, PathBuf};

use serde::Deserialize;

use mnv_core::algebra::Complex;
use mnv_core::spinor::{HoloPoly, SpinorPair};
use mnv_core::{Grid, SurfacePoint};

use crate::Failure;

/// Pass/fail limits applied by `verify` and `conserve`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub max_residual: f64,
    pub min_order: f64,
    pub max_deviation: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            max_residual: 1e-3,
            min_order: 1.7,
            max_deviation: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "C")]
    pub c: f64,
    /// Coefficients `[re, im]` of `p` and `q`, constant term first.
    pub spinor_p: Vec<[f64; 2]>,
    pub spinor_q: Vec<[f64; 2]>,
    /// Image of the origin; defaults to `(0, −C, 0)`.
    pub u0: Option<[f64; 3]>,
    pub grid: Grid,
    pub times: Vec<f64>,
    /// Explicit `[x, y, t]` points for `verify`; the grid is used otherwise.
    pub points: Vec<[f64; 3]>,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub h: f64,
    pub h_time: Option<f64>,
    pub thresholds: Thresholds,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            c: 0.0,
            spinor_p: vec![[0.0, 0.0], [1.0, 0.0]],
            spinor_q: vec![[1.0, 0.0]],
            u0: None,
            grid: Grid {
                x_min: -1.0,
                x_max: 1.0,
                y_min: -1.0,
                y_max: 1.0,
                nx: 3,
                ny: 3,
            },
            times: Vec::new(),
            points: Vec::new(),
            out: None,
            tol: 1e-4,
            h: 1e-3,
            h_time: None,
            thresholds: Thresholds::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Failure::validation(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if !self.c.is_finite() {
            return Err(Failure::validation("C must be finite"));
        }
        self.grid.validate().map_err(Failure::from)?;
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(Failure::validation("times must be finite"));
        }
        if !(self.tol > 0.0) {
            return Err(Failure::validation("tol must be positive"));
        }
        if !(self.h > 0.0) || self.h_time.is_some_and(|k| !(k > 0.0)) {
            return Err(Failure::validation("stencil steps must be positive"));
        }
        if self.spinor()?.is_zero() {
            return Err(Failure::validation("spinor pair must not be identically zero"));
        }
        Ok(())
    }

    pub fn spinor(&self) -> Result<SpinorPair, Failure> {
        let poly = |v: &[[f64; 2]]| {
            HoloPoly::new(v.iter().map(|&[a, b]| Complex::new(a, b)).collect()).map_err(Failure::from)
        };
        Ok(SpinorPair::new(poly(&self.spinor_p)?, poly(&self.spinor_q)?))
    }

    pub fn u0(&self) -> SurfacePoint {
        match self.u0 {
            Some([a, b, c]) => SurfacePoint::new(a, b, c),
            None => mnv_core::moutard::blow_up_u0(self.c),
        }
    }

    /// Times to sample, `[C]`-relative default when none were given.
    pub fn times_or(&self, default: &[f64]) -> Vec<f64> {
        if self.times.is_empty() {
            default.iter().map(|d| self.c + d).collect()
        } else {
            self.times.clone()
        }
    }
}

/// Coefficient list given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients(pub Vec<[f64; 2]>);

/// `"re:im,re:im,…"`; a bare number is a real coefficient.
pub fn parse_coefficients(s: &str) -> Result<Coefficients, String> {
    s.split(',')
        .map(|item| {
            let item = item.trim();
            let (re, im) = item.split_once(':').unwrap_or((item, "0"));
            let re: f64 = re.trim().parse().map_err(|_| format!("bad coefficient {item:?}"))?;
            let im: f64 = im.trim().parse().map_err(|_| format!("bad coefficient {item:?}"))?;
            Ok([re, im])
        })
        .collect::<Result<_, _>>()
        .map(Coefficients)
}

/// `"XMIN,XMAX,YMIN,YMAX,NX,NY"`.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err("grid needs XMIN,XMAX,YMIN,YMAX,NX,NY".into());
    }
    let f = |i: usize| parts[i].parse::<f64>().map_err(|_| format!("bad grid bound {:?}", parts[i]));
    let n = |i: usize| parts[i].parse::<usize>().map_err(|_| format!("bad grid count {:?}", parts[i]));
    Ok(Grid {
        x_min: f(0)?,
        x_max: f(1)?,
        y_min: f(2)?,
        y_max: f(3)?,
        nx: n(4)?,
        ny: n(5)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_lists() {
        assert_eq!(parse_coefficients("0:0,1:0").unwrap().0, vec![[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(parse_coefficients("2, -1:0.5").unwrap().0, vec![[2.0, 0.0], [-1.0, 0.5]]);
        assert!(parse_coefficients("1:x").is_err());
    }

    #[test]
    fn grid_spec() {
        let g = parse_grid("-1,1,-2,2,3,5").unwrap();
        assert_eq!((g.x_min, g.y_max, g.nx, g.ny), (-1.0, 2.0, 3, 5));
        assert!(parse_grid("0,1,0,1,3").is_err());
        assert!(parse_grid("0,1,0,1,3,a").is_err());
    }

    #[test]
    fn config_json_defaults_and_overrides() {
        let cfg: RunConfig = serde_json::from_str(r#"{"C": 1.5, "times": [2.5], "thresholds": {"max_deviation": 0.01}}"#).unwrap();
        assert_eq!(cfg.c, 1.5);
        assert_eq!(cfg.thresholds.max_deviation, 0.01);
        assert_eq!(cfg.thresholds.min_order, 1.7);
        assert!(cfg.spinor().unwrap().is_enneper());
        assert_eq!(cfg.u0(), SurfacePoint::new(0.0, -1.5, 0.0));
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn zero_spinor_is_rejected() {
        let cfg = RunConfig {
            spinor_p: vec![],
            spinor_q: vec![[0.0, 0.0]],
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
