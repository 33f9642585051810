//! Numeric root finding for intersection problems on local-model charts.
//!
//! Interior chain intersections solve a 2x2 system (the two chain equations
//! pulled back along the curve) by a grid scan with damped Newton refinement;
//! boundary problems solve a single equation along a boundary parameterisation
//! by sign-change bracketing plus Newton polish.  All detection thresholds are
//! centralised here so the counting ops stay deterministic.

use nalgebra::{Matrix2, Matrix6};
use num::complex::Complex64;
use rayon::prelude::*;

use super::models::{embed, mul_i, DomainKind, LocalModelFamily};
use super::{GeometryError, Window};

/// Grid resolution per axis for interior scans.
pub(crate) const GRID: usize = 200;
/// Residual required of an accepted root.
pub(crate) const RESIDUAL_TOL: f64 = 1e-11;
/// Transversality threshold on Jacobian and orientation determinants.
pub(crate) const TRANSVERSALITY_MIN: f64 = 1e-6;
/// Distance below which two candidate roots are considered equal.
const DEDUP_TOL: f64 = 1e-5;
/// Distance kept from domain boundaries when classifying interior points.
pub(crate) const INTERIOR_MARGIN: f64 = 1e-3;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A refined interior root of the pulled-back constraint system.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ChartRoot {
    pub chart: usize,
    pub p: (f64, f64),
    pub target: [f64; 6],
    pub residual: f64,
}

fn dot6(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The two constraint values at chart point p.
fn constraint(
    family: &LocalModelFamily,
    chart: usize,
    rows: &[[f64; 6]; 2],
    p: Complex64,
) -> [f64; 2] {
    let v = embed(&family.eval(chart, p));
    [dot6(&rows[0], &v), dot6(&rows[1], &v)]
}

/// Jacobian of the constraints with respect to (re p, im p).
fn jacobian(
    family: &LocalModelFamily,
    chart: usize,
    rows: &[[f64; 6]; 2],
    p: Complex64,
) -> [[f64; 2]; 2] {
    let d = family.deriv(chart, p);
    let da = embed(&d);
    let db = embed(&mul_i(&d));
    [
        [dot6(&rows[0], &da), dot6(&rows[0], &db)],
        [dot6(&rows[1], &da), dot6(&rows[1], &db)],
    ]
}

fn norm2(f: &[f64; 2]) -> f64 {
    f[0].hypot(f[1])
}

/// Damped Newton for a 2D system given by value and Jacobian closures;
/// returns the converged point and its residual.
pub(crate) fn newton2(
    f: &dyn Fn((f64, f64)) -> [f64; 2],
    jac: &dyn Fn((f64, f64)) -> [[f64; 2]; 2],
    start: (f64, f64),
) -> Option<((f64, f64), f64)> {
    let mut p = start;
    let mut fv = f(p);
    let mut n = norm2(&fv);
    for _ in 0..80 {
        if n < 1e-13 {
            break;
        }
        let j = jac(p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 || !det.is_finite() {
            return None;
        }
        let step = (
            (fv[0] * j[1][1] - fv[1] * j[0][1]) / det,
            (fv[1] * j[0][0] - fv[0] * j[1][0]) / det,
        );
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..10 {
            let q = (p.0 - lambda * step.0, p.1 - lambda * step.1);
            let fq = f(q);
            let nq = norm2(&fq);
            if nq < n {
                p = q;
                fv = fq;
                n = nq;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if n < RESIDUAL_TOL && p.0.is_finite() && p.1.is_finite() {
        Some((p, n))
    } else {
        None
    }
}

/// Newton refinement of the pulled-back chain system from a chart start point.
fn newton(
    family: &LocalModelFamily,
    chart: usize,
    rows: &[[f64; 6]; 2],
    start: (f64, f64),
) -> Option<((f64, f64), f64)> {
    let f = |p: (f64, f64)| constraint(family, chart, rows, Complex64::new(p.0, p.1));
    let j = |p: (f64, f64)| jacobian(family, chart, rows, Complex64::new(p.0, p.1));
    newton2(&f, &j, start)
}

/// Scan ranges for one chart restricted to a window.
fn scan_box(domain: DomainKind, window: &Window) -> Option<((f64, f64), (f64, f64))> {
    let (re_lo, re_hi) = window.re;
    let (im_lo, im_hi) = window.im;
    let (re_rng, im_rng) = match domain {
        DomainKind::HalfPlane => ((re_lo, re_hi), (im_lo.max(0.0), im_hi)),
        DomainKind::Strip => (
            (re_lo, re_hi),
            (im_lo.max(0.0), im_hi.min(std::f64::consts::PI)),
        ),
        DomainKind::Plane => ((re_lo, re_hi), (im_lo, im_hi)),
        DomainKind::Cylinder { s_min } => (
            (re_lo.max(s_min), re_hi),
            (im_lo.max(0.0), im_hi.min(TWO_PI)),
        ),
    };
    if re_rng.0 >= re_rng.1 || im_rng.0 >= im_rng.1 {
        None
    } else {
        Some((re_rng, im_rng))
    }
}

fn wrap_im(domain: DomainKind, im: f64) -> f64 {
    if domain.is_periodic() {
        im.rem_euclid(TWO_PI)
    } else {
        im
    }
}

/// All interior roots of the constraint system on one chart, deduplicated,
/// sorted, and checked for transversality of the defining system.
pub(crate) fn chart_roots(
    family: &LocalModelFamily,
    chart: usize,
    domain: DomainKind,
    rows: &[[f64; 6]; 2],
    window: &Window,
) -> Result<Vec<ChartRoot>, GeometryError> {
    let Some((re_rng, im_rng)) = scan_box(domain, window) else {
        return Ok(Vec::new());
    };
    let dre = (re_rng.1 - re_rng.0) / GRID as f64;
    let dim = (im_rng.1 - im_rng.0) / GRID as f64;

    let mut candidates: Vec<((f64, f64), f64)> = (0..GRID * GRID)
        .into_par_iter()
        .filter_map(|cell| {
            let i = cell / GRID;
            let j = cell % GRID;
            let start = (
                re_rng.0 + (i as f64 + 0.5) * dre,
                im_rng.0 + (j as f64 + 0.5) * dim,
            );
            newton(family, chart, rows, start)
        })
        .collect();
    for c in &mut candidates {
        c.0 .1 = wrap_im(domain, c.0 .1);
    }
    candidates.retain(|((re, im), _)| {
        domain.is_interior(*re, *im, INTERIOR_MARGIN)
            && *re >= re_rng.0 - DEDUP_TOL
            && *re <= re_rng.1 + DEDUP_TOL
            && (domain.is_periodic()
                || (*im >= im_rng.0 - DEDUP_TOL && *im <= im_rng.1 + DEDUP_TOL))
    });
    candidates.sort_by(|a, b| {
        (a.0 .0, a.0 .1)
            .partial_cmp(&(b.0 .0, b.0 .1))
            .expect("finite root coordinates")
    });

    let mut roots: Vec<ChartRoot> = Vec::new();
    for ((re, im), residual) in candidates {
        let duplicate = roots.iter().any(|r| {
            let dim_gap = if domain.is_periodic() {
                let raw = (r.p.1 - im).abs().rem_euclid(TWO_PI);
                raw.min(TWO_PI - raw)
            } else {
                (r.p.1 - im).abs()
            };
            (r.chart == chart) && (r.p.0 - re).abs() < DEDUP_TOL && dim_gap < DEDUP_TOL
        });
        if duplicate {
            continue;
        }
        let p = Complex64::new(re, im);
        let j = jacobian(family, chart, rows, p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < TRANSVERSALITY_MIN {
            return Err(GeometryError::NonTransverse { chart, re, im, det });
        }
        roots.push(ChartRoot {
            chart,
            p: (re, im),
            target: embed(&family.eval(chart, p)),
            residual,
        });
    }
    Ok(roots)
}

/// Orientation sign of a transverse interior intersection: the determinant of
/// the complex-oriented curve 2-frame followed by the oriented chain 4-frame.
pub(crate) fn intersection_sign(
    family: &LocalModelFamily,
    chart: usize,
    p: (f64, f64),
    chain_frame: &[[f64; 6]; 4],
) -> Result<i8, GeometryError> {
    let d = family.deriv(chart, Complex64::new(p.0, p.1));
    let v1 = embed(&d);
    let v2 = embed(&mul_i(&d));
    let mut flat = [0.0f64; 36];
    for (row, src) in [
        &v1,
        &v2,
        &chain_frame[0],
        &chain_frame[1],
        &chain_frame[2],
        &chain_frame[3],
    ]
    .into_iter()
    .enumerate()
    {
        flat[6 * row..6 * row + 6].copy_from_slice(src);
    }
    let det = Matrix6::from_row_slice(&flat).determinant();
    if det.abs() < TRANSVERSALITY_MIN {
        return Err(GeometryError::NonTransverse {
            chart,
            re: p.0,
            im: p.1,
            det,
        });
    }
    Ok(if det > 0.0 { 1 } else { -1 })
}

/// A refined root of a single equation g(tau) = 0 along a boundary curve.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineRoot {
    pub tau: f64,
    pub residual: f64,
    pub slope: f64,
}

/// Roots of `g` on [lo, hi] via dense sampling, bracketing, and
/// Newton/bisection polish.  `dg` is the derivative of `g`.
pub(crate) fn line_roots(
    g: &dyn Fn(f64) -> f64,
    dg: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
) -> Vec<LineRoot> {
    const SAMPLES: usize = 4000;
    let h = (hi - lo) / SAMPLES as f64;
    let mut out: Vec<LineRoot> = Vec::new();
    let mut push = |tau: f64| {
        let mut t = tau;
        for _ in 0..60 {
            let v = g(t);
            if v.abs() < 1e-14 {
                break;
            }
            let s = dg(t);
            if s.abs() < 1e-300 {
                break;
            }
            let next = t - v / s;
            if !next.is_finite() || (next - t).abs() > h {
                break;
            }
            t = next;
        }
        let residual = g(t).abs();
        if residual < RESIDUAL_TOL
            && t >= lo - h
            && t <= hi + h
            && !out.iter().any(|r| (r.tau - t).abs() < DEDUP_TOL)
        {
            out.push(LineRoot {
                tau: t,
                residual,
                slope: dg(t),
            });
        }
    };
    let mut prev_tau = lo;
    let mut prev = g(lo);
    for k in 1..=SAMPLES {
        let tau = lo + k as f64 * h;
        let v = g(tau);
        if prev == 0.0 {
            push(prev_tau);
        } else if prev.signum() != v.signum() && v != 0.0 {
            // Bisect the bracket before polishing so Newton starts close.
            let (mut a, mut b) = (prev_tau, tau);
            let (mut ga, _) = (prev, v);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                let gm = g(m);
                if gm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if ga.signum() == gm.signum() {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            push(0.5 * (a + b));
        }
        prev_tau = tau;
        prev = v;
    }
    if prev == 0.0 {
        push(prev_tau);
    }
    out.sort_by(|a, b| a.tau.partial_cmp(&b.tau).expect("finite root"));
    out
}

pub(crate) fn det2(a: [f64; 2], b: [f64; 2]) -> f64 {
    Matrix2::new(a[0], a[1], b[0], b[1]).determinant()
}
