//! Signed intersection theory for exact local models of bounded holomorphic
//! curves in C^3.
//!
//! The ambient space carries the Lagrangian R^3 = {y = 0} and a bounding
//! 4-chain presented in one of two charts: the standard chart, where the
//! chain is the pair of half-spaces C^+/- = {y1 = y2 = 0, +-y3 >= 0}, and the
//! gamma chart, where the chain is {x1 = y2, x2 = y1} and meets the
//! Lagrangian along the arc gamma = {x1 = x2 = 0} with spanning 2-chain
//! sigma = {x1 <= 0, x2 = 0}.  Orientation frames for all chain pieces are
//! fixed once here so that every chain piece induces the positive orientation
//! on R^3; all signed counts are determinants against those frozen frames.
//!
//! [`chain_intersections`] counts interior curve/chain points,
//! [`boundary_sigma_intersections`] counts boundary/sigma points,
//! [`linking_number`] combines the two, [`projected_writhe`] and
//! [`framing_balance`] track the tangency wall crossing, and
//! [`convergence_check`] measures nodal degenerations quantitatively.

mod models;
mod roots;

use nalgebra::Matrix3;
use num::complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use models::{FamilyKind, LocalModelFamily};

use models::{embed, BoundaryKind};
use roots::{chart_roots, det2, intersection_sign, line_roots, newton2, TRANSVERSALITY_MIN};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
/// Points closer than this to a chart-defining wall are treated as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid model parameter: {0}")]
    BadParameter(String),
    #[error("non-transverse intersection on chart {chart} near ({re}, {im}): |det| = {det:e}")]
    NonTransverse {
        chart: usize,
        re: f64,
        im: f64,
        det: f64,
    },
    #[error("degenerate boundary intersection near tau = {0}")]
    DegenerateBoundary(f64),
    #[error("intersection point lies on the Lagrangian; the chain side is undetermined")]
    OnLagrangian,
    #[error("{op} requires the {chart} chart")]
    ChartMismatch {
        op: &'static str,
        chart: &'static str,
    },
}

/// Which presentation of the bounding 4-chain intersections are counted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChart {
    /// Chain pieces C^+/- = {y1 = y2 = 0, +-y3 >= 0}.
    Standard,
    /// Chain {x1 = y2, x2 = y1} with sigma = {x1 <= 0, x2 = 0} inside R^3.
    Gamma,
}

impl ModelChart {
    /// Gradients of the two chain equations, as rows over (x1,y1,x2,y2,x3,y3).
    fn constraint_rows(&self) -> [[f64; 6]; 2] {
        match self {
            ModelChart::Standard => [
                [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            ],
            ModelChart::Gamma => [
                [1.0, 0.0, 0.0, -1.0, 0.0, 0.0],
                [0.0, -1.0, 1.0, 0.0, 0.0, 0.0],
            ],
        }
    }

    /// Oriented 4-frame of the chain piece through `target`.  Both standard
    /// pieces are framed outward-normal-first at their boundary, so each
    /// induces (dx1, dx2, dx3) on the Lagrangian.
    fn chain_frame(&self, target: &[f64; 6]) -> Result<[[f64; 6]; 4], GeometryError> {
        match self {
            ModelChart::Standard => {
                let y3 = target[5];
                if y3.abs() < DEGENERACY_TOL {
                    return Err(GeometryError::OnLagrangian);
                }
                let normal = if y3 > 0.0 { -1.0 } else { 1.0 };
                Ok([
                    [0.0, 0.0, 0.0, 0.0, 0.0, normal],
                    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
                    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
                ])
            }
            ModelChart::Gamma => Ok([
                [1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                [0.0, 1.0, 1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            ]),
        }
    }
}

/// Oriented 2-frame of sigma inside the Lagrangian (x1, x2, x3): the frame
/// (-dx1, dx3), outward-normal-first along gamma, matching the gamma-chart
/// chain frame so that wall crossings preserve linking numbers.
const SIGMA_FRAME: [[f64; 3]; 2] = [[-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];

/// Search region for intersection scans.
///
/// `re`/`im` bound the chart coordinate (clamped to each chart's natural
/// domain); `target` optionally restricts accepted points to a box in the
/// real coordinates (x1, y1, x2, y2, x3, y3).
#[derive(Debug, Clone)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub target: Option<([f64; 6], [f64; 6])>,
}

impl Window {
    /// A window wide enough for every fixture of the given family at its
    /// stored parameters.
    pub fn standard(family: &LocalModelFamily) -> Window {
        let (re, im) = match *family.kind() {
            FamilyKind::ThroughGamma { .. } => ((-4.0, 4.0), (0.0, 4.0)),
            FamilyKind::Tangency { s, .. } => {
                let m = s.abs().sqrt().max(1.0);
                ((-3.0 * m, 3.0 * m), (0.0, 3.0 * m))
            }
            FamilyKind::HyperbolicPair { .. } | FamilyKind::HyperbolicNodal { .. } => {
                ((-4.0, 4.0), (0.0, std::f64::consts::PI))
            }
            FamilyKind::EllipticCylinder { .. } => ((-3.0, 3.0), (-3.0, 3.0)),
            FamilyKind::EllipticNodal { rho } => ((-rho, 4.0), (0.0, TWO_PI)),
        };
        Window {
            re,
            im,
            target: None,
        }
    }

    /// Restrict accepted intersection points to the box [min, max].
    pub fn with_target(mut self, min: [f64; 6], max: [f64; 6]) -> Window {
        self.target = Some((min, max));
        self
    }

    fn admits_target(&self, x: &[f64; 6]) -> bool {
        match &self.target {
            None => true,
            Some((lo, hi)) => x
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .all(|(v, (a, b))| *v >= *a && *v <= *b),
        }
    }
}

/// One transverse intersection point found by a counting op.
#[derive(Debug, Clone, Serialize)]
pub struct IntersectionPoint {
    /// Chart coordinate of the point (domain piece index in `chart`).
    pub param: (f64, f64),
    /// Real target coordinates (x1, y1, x2, y2, x3, y3).
    pub target: [f64; 6],
    /// Orientation sign against the frozen chain or sigma frame.
    pub sign: i8,
    #[serde(skip_serializing)]
    pub chart: usize,
    #[serde(skip_serializing)]
    pub residual: f64,
}

/// A signed point count with its refinement quality.
#[derive(Debug, Clone, Serialize)]
pub struct SignedCount {
    pub points: Vec<IntersectionPoint>,
    pub total: i64,
    pub residual_max: f64,
}

impl SignedCount {
    fn from_points(points: Vec<IntersectionPoint>) -> SignedCount {
        let total = points.iter().map(|p| i64::from(p.sign)).sum();
        let residual_max = points.iter().map(|p| p.residual).fold(0.0, f64::max);
        SignedCount {
            points,
            total,
            residual_max,
        }
    }
}

/// Quantitative comparison of a nodal family against its smooth limit.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    /// Sup-distance between the nodal map and the limit over the window.
    pub sup_distance: f64,
    /// Radius of the nodal boundary circle, when the family has one.
    pub boundary_radius: Option<f64>,
}

/// Signed count of interior intersections between the curve and the 4-chain.
///
/// Runs a grid scan with damped Newton refinement on every chart of the
/// family, then signs each transverse point by the determinant of the
/// complex-oriented curve 2-frame against the chain 4-frame.  Roots that are
/// on the curve but fail the transversality threshold are reported as errors
/// rather than silently counted.
pub fn chain_intersections(
    family: &LocalModelFamily,
    chart: ModelChart,
    window: &Window,
) -> Result<SignedCount, GeometryError> {
    let rows = chart.constraint_rows();
    let mut points = Vec::new();
    for (ci, domain) in family.charts().into_iter().enumerate() {
        for root in chart_roots(family, ci, domain, &rows, window)? {
            if !window.admits_target(&root.target) {
                continue;
            }
            let frame = chart.chain_frame(&root.target)?;
            let sign = intersection_sign(family, ci, root.p, &frame)?;
            points.push(IntersectionPoint {
                param: root.p,
                target: root.target,
                sign,
                chart: ci,
                residual: root.residual,
            });
        }
    }
    Ok(SignedCount::from_points(points))
}

/// Signed count of boundary intersections with sigma in the gamma chart.
///
/// Boundary components are scanned for zeros of x2, kept when they land in
/// the open half-line x1 < 0, and signed by the determinant of the boundary
/// tangent against the sigma frame.  A zero of x2 with x1 = 0 sits on gamma
/// itself and is reported as degenerate.
pub fn boundary_sigma_intersections(
    family: &LocalModelFamily,
    chart: ModelChart,
    window: &Window,
) -> Result<SignedCount, GeometryError> {
    if chart != ModelChart::Gamma {
        return Err(GeometryError::ChartMismatch {
            op: "boundary_sigma_intersections",
            chart: "gamma",
        });
    }
    let mut points = Vec::new();
    for boundary in family.boundaries() {
        let (lo, hi) = match boundary.kind {
            BoundaryKind::EndCircle { .. } => (0.0, TWO_PI),
            _ => window.re,
        };
        let value = |tau: f64| family.eval(boundary.chart, boundary.kind.point(tau));
        let tangent = |tau: f64| {
            let d = family.deriv(boundary.chart, boundary.kind.point(tau));
            let v = mul_scalar(&d, boundary.kind.speed());
            [v[0].re, v[1].re, v[2].re]
        };
        let g = |tau: f64| value(tau)[1].re;
        let dg = |tau: f64| tangent(tau)[1];
        for root in line_roots(&g, &dg, lo, hi) {
            if root.slope.abs() < TRANSVERSALITY_MIN {
                return Err(GeometryError::DegenerateBoundary(root.tau));
            }
            let v = value(root.tau);
            let target = embed(&v);
            let x1 = target[0];
            if x1.abs() < DEGENERACY_TOL {
                return Err(GeometryError::DegenerateBoundary(root.tau));
            }
            if x1 > 0.0 || !window.admits_target(&target) {
                continue;
            }
            let t = tangent(root.tau);
            let det = Matrix3::new(
                t[0],
                t[1],
                t[2],
                SIGMA_FRAME[0][0],
                SIGMA_FRAME[0][1],
                SIGMA_FRAME[0][2],
                SIGMA_FRAME[1][0],
                SIGMA_FRAME[1][1],
                SIGMA_FRAME[1][2],
            )
            .determinant();
            if det.abs() < TRANSVERSALITY_MIN {
                return Err(GeometryError::DegenerateBoundary(root.tau));
            }
            let p = boundary.kind.point(root.tau);
            points.push(IntersectionPoint {
                param: (p.re, p.im),
                target,
                sign: if det > 0.0 { 1 } else { -1 },
                chart: boundary.chart,
                residual: root.residual,
            });
        }
    }
    Ok(SignedCount::from_points(points))
}

fn mul_scalar(v: &[Complex64; 3], s: Complex64) -> [Complex64; 3] {
    [v[0] * s, v[1] * s, v[2] * s]
}

/// Linking number of the curve boundary against gamma: interior chain count
/// plus boundary sigma count, both in the gamma chart.  Constant in the
/// family parameter away from the wall because the frozen chain and sigma
/// frames are matched along gamma.
pub fn linking_number(
    family: &LocalModelFamily,
    chart: ModelChart,
    window: &Window,
) -> Result<i64, GeometryError> {
    if chart != ModelChart::Gamma {
        return Err(GeometryError::ChartMismatch {
            op: "linking_number",
            chart: "gamma",
        });
    }
    let interior = chain_intersections(family, chart, window)?;
    let boundary = boundary_sigma_intersections(family, chart, window)?;
    Ok(interior.total + boundary.total)
}

/// Writhe of the boundary curve projected to (x1, x2), with over/under
/// decided by x3.  Defined for the tangency family away from s = 0, where the
/// projected boundary has a cusp.
pub fn projected_writhe(family: &LocalModelFamily) -> Result<i64, GeometryError> {
    let FamilyKind::Tangency { s, .. } = *family.kind() else {
        return Err(GeometryError::BadParameter(
            "projected writhe is defined for the tangency family".into(),
        ));
    };
    if s == 0.0 {
        return Err(GeometryError::BadParameter(
            "projected boundary has a cusp at s = 0".into(),
        ));
    }
    let reach = 3.0 * s.abs().sqrt().max(1.0);
    let position = |tau: f64| {
        let v = family.eval(0, Complex64::new(tau, 0.0));
        [v[0].re, v[1].re, v[2].re]
    };
    let velocity = |tau: f64| {
        let d = family.deriv(0, Complex64::new(tau, 0.0));
        [d[0].re, d[1].re, d[2].re]
    };
    let system = |p: (f64, f64)| {
        let a = position(p.0);
        let b = position(p.1);
        [a[0] - b[0], a[1] - b[1]]
    };
    let jac = |p: (f64, f64)| {
        let a = velocity(p.0);
        let b = velocity(p.1);
        [[a[0], -b[0]], [a[1], -b[1]]]
    };

    const N: usize = 160;
    let h = 2.0 * reach / N as f64;
    let mut crossings: Vec<(f64, f64)> = Vec::new();
    for i in 0..N {
        for j in 0..N {
            let start = (-reach + (i as f64 + 0.5) * h, -reach + (j as f64 + 0.5) * h);
            if start.1 < start.0 + h {
                continue;
            }
            let Some(((a, b), _)) = newton2(&system, &jac, start) else {
                continue;
            };
            if b - a < 1e-3
                || a < -reach - h
                || b > reach + h
                || crossings
                    .iter()
                    .any(|(x, y)| (x - a).abs() < 1e-5 && (y - b).abs() < 1e-5)
            {
                continue;
            }
            crossings.push((a, b));
        }
    }
    crossings.sort_by(|p, q| p.partial_cmp(q).expect("finite crossing parameters"));

    let mut writhe = 0i64;
    for (a, b) in crossings {
        let za = position(a)[2];
        let zb = position(b)[2];
        if (za - zb).abs() < DEGENERACY_TOL {
            return Err(GeometryError::DegenerateBoundary(a));
        }
        let (over, under) = if za > zb {
            (velocity(a), velocity(b))
        } else {
            (velocity(b), velocity(a))
        };
        let det = det2([over[0], over[1]], [under[0], under[1]]);
        if det.abs() < TRANSVERSALITY_MIN {
            return Err(GeometryError::DegenerateBoundary(a));
        }
        writhe += if det > 0.0 { 1 } else { -1 };
    }
    Ok(writhe)
}

/// Whether projected writhe plus interior chain count is equal on the two
/// sides s = -s0 and s = +s0 of the tangency wall; the boundary self-framing
/// lost at the wall is exactly compensated by the new chain point.
pub fn framing_balance(branch: i8, s0: f64) -> Result<bool, GeometryError> {
    if !s0.is_finite() || s0 <= 0.0 {
        return Err(GeometryError::BadParameter(
            "framing balance requires a positive wall offset s0".into(),
        ));
    }
    let before = LocalModelFamily::tangency(-s0, branch)?;
    let after = LocalModelFamily::tangency(s0, branch)?;
    let window = Window::standard(&after);
    let lhs = projected_writhe(&before)?
        + chain_intersections(&before, ModelChart::Standard, &window)?.total;
    let rhs = projected_writhe(&after)?
        + chain_intersections(&after, ModelChart::Standard, &window)?.total;
    Ok(lhs == rhs)
}

/// Sup-distance between a nodal family member and its smooth limit over the
/// domain window |s| <= half_width, plus the nodal boundary radius when the
/// family has a boundary circle.
///
/// The hyperbolic nodal strip is translated by rho and compared against the
/// first strip of the pair at t = 0.  The elliptic nodal annulus is compared
/// against the t = 0 cylinder rescaled by the nodal normalisation 1/sqrt(2).
/// Both distances decay like e^(-2 rho).
pub fn convergence_check(
    smooth: &LocalModelFamily,
    nodal: &LocalModelFamily,
    half_width: f64,
) -> Result<ConvergenceReport, GeometryError> {
    if !half_width.is_finite() || half_width <= 0.0 {
        return Err(GeometryError::BadParameter(
            "convergence window half-width must be positive".into(),
        ));
    }
    match (*smooth.kind(), *nodal.kind()) {
        (FamilyKind::HyperbolicPair { t }, FamilyKind::HyperbolicNodal { rho }) => {
            if t != 0.0 {
                return Err(GeometryError::BadParameter(
                    "compare against the t = 0 pair".into(),
                ));
            }
            let sup = sup_distance(
                |zeta| nodal.eval(0, zeta + rho),
                |zeta| smooth.eval(0, zeta),
                half_width,
                (0.0, std::f64::consts::PI),
            );
            Ok(ConvergenceReport {
                sup_distance: sup,
                boundary_radius: None,
            })
        }
        (FamilyKind::EllipticCylinder { t }, FamilyKind::EllipticNodal { rho }) => {
            if t != 0.0 {
                return Err(GeometryError::BadParameter(
                    "compare against the t = 0 cylinder".into(),
                ));
            }
            let scale = std::f64::consts::FRAC_1_SQRT_2;
            let sup = sup_distance(
                |zeta| nodal.eval(0, zeta),
                |zeta| mul_scalar(&smooth.eval(0, zeta.exp()), Complex64::from(scale)),
                half_width.min(rho),
                (0.0, TWO_PI),
            );
            let mut radius = 0.0f64;
            const CIRCLE: usize = 512;
            for k in 0..CIRCLE {
                let theta = TWO_PI * k as f64 / CIRCLE as f64;
                let v = nodal.eval(0, Complex64::new(-rho, theta));
                radius = radius.max(v[0].re.hypot(v[1].re));
            }
            Ok(ConvergenceReport {
                sup_distance: sup,
                boundary_radius: Some(radius),
            })
        }
        _ => Err(GeometryError::BadParameter(
            "convergence check compares a nodal family with its smooth counterpart".into(),
        )),
    }
}

fn sup_distance(
    nodal: impl Fn(Complex64) -> [Complex64; 3],
    limit: impl Fn(Complex64) -> [Complex64; 3],
    half_width: f64,
    im_range: (f64, f64),
) -> f64 {
    const RE_SAMPLES: usize = 400;
    const IM_SAMPLES: usize = 100;
    let mut sup = 0.0f64;
    for i in 0..=RE_SAMPLES {
        let s = -half_width + 2.0 * half_width * i as f64 / RE_SAMPLES as f64;
        for j in 0..=IM_SAMPLES {
            let theta = im_range.0 + (im_range.1 - im_range.0) * j as f64 / IM_SAMPLES as f64;
            let zeta = Complex64::new(s, theta);
            let a = nodal(zeta);
            let b = limit(zeta);
            let d2: f64 = a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum();
            sup = sup.max(d2.sqrt());
        }
    }
    sup
}
