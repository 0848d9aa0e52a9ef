//! Adaptive Simpson quadrature for vector-valued integrands.

use crate::error::{Error, Result};

fn combine<const N: usize>(a: &[f64; N], wa: f64, b: &[f64; N], wb: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = wa * a[k] + wb * b[k];
    }
    out
}

fn simpson<const N: usize>(h: f64, fa: &[f64; N], fm: &[f64; N], fb: &[f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = h / 6.0 * (fa[k] + 4.0 * fm[k] + fb[k]);
    }
    out
}

fn max_abs_diff<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

struct State {
    worst: f64,
    failed: bool,
}

#[allow(clippy::too_many_arguments)]
fn recurse<const N: usize, F: FnMut(f64) -> [f64; N]>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: [f64; N],
    fm: [f64; N],
    fb: [f64; N],
    whole: [f64; N],
    tol: f64,
    depth: usize,
    st: &mut State,
) -> [f64; N] {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(m - a, &fa, &flm, &fm);
    let right = simpson(b - m, &fm, &frm, &fb);
    let both = combine(&left, 1.0, &right, 1.0);
    let err = max_abs_diff(&both, &whole) / 15.0;
    if err <= tol || depth == 0 || m <= a || m >= b {
        if err > tol {
            st.failed = true;
            st.worst = st.worst.max(err);
        }
        // Richardson step
        return combine(&both, 16.0 / 15.0, &whole, -1.0 / 15.0);
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, st);
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, st);
    combine(&l, 1.0, &r, 1.0)
}

/// `∫ₐᵇ f` componentwise, with absolute tolerance `tol` in max norm.
///
/// Fails with [`Error::QuadratureFailure`] if some subinterval still misses
/// its share of the tolerance at `max_depth`.
pub fn adaptive_simpson<const N: usize, F>(mut f: F, a: f64, b: f64, tol: f64, max_depth: usize) -> Result<[f64; N]>
where
    F: FnMut(f64) -> [f64; N],
{
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument("adaptive Simpson needs finite limits and tol > 0".into()));
    }
    if a == b {
        return Ok([0.0; N]);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    if fa.iter().chain(&fb).chain(&fm).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("adaptive Simpson integrand"));
    }
    let whole = simpson(b - a, &fa, &fm, &fb);
    let mut st = State {
        worst: 0.0,
        failed: false,
    };
    let out = recurse(&mut f, a, b, fa, fm, fb, whole, tol, max_depth, &mut st);
    if st.failed || out.iter().any(|v| !v.is_finite()) {
        return Err(Error::QuadratureFailure {
            tol,
            estimate: st.worst,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_smooth() {
        let [v] = adaptive_simpson(|x| [x * x * x], 0.0, 2.0, 1e-12, 30).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
        let [s, c] = adaptive_simpson(|x: f64| [x.sin(), x.cos()], 0.0, 1.0, 1e-12, 40).unwrap();
        assert!((s - (1.0 - 1f64.cos())).abs() < 1e-12);
        assert!((c - 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn reversed_and_empty_interval() {
        let [v] = adaptive_simpson(|x| [x], 1.0, 0.0, 1e-12, 30).unwrap();
        assert!((v + 0.5).abs() < 1e-15);
        assert_eq!(adaptive_simpson(|x| [x], 1.0, 1.0, 1e-12, 30).unwrap(), [0.0]);
    }

    #[test]
    fn reports_failure() {
        let r = adaptive_simpson(|x: f64| [x.abs().sqrt().recip().min(1e300)], -1.0, 1.0, 1e-14, 6);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
        assert!(adaptive_simpson(|x| [x], 0.0, 1.0, 0.0, 6).is_err());
    }
}
