//! Closed-form local-model families of holomorphic maps into C^3.
//!
//! Target coordinates are (z1, z2, z3) with zj = xj + i*yj; the Lagrangian
//! R^3 is the fixed locus {y1 = y2 = y3 = 0}.  Each family is an explicit
//! holomorphic map on a half plane, strip, plane, or half-infinite cylinder,
//! provided together with its complex derivative so that downstream root
//! finding and orientation determinants need no finite differencing.

use num::complex::Complex64;

use super::GeometryError;

pub(crate) type C3 = [Complex64; 3];

/// Real coordinates (x1, y1, x2, y2, x3, y3) of a complex 3-vector.
pub(crate) fn embed(v: &C3) -> [f64; 6] {
    [v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im]
}

pub(crate) fn mul_i(v: &C3) -> C3 {
    let i = Complex64::new(0.0, 1.0);
    [v[0] * i, v[1] * i, v[2] * i]
}

/// Parameter data for one local-model family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// Disk whose boundary crosses the chain-singular arc: u_t(z) = (t, z, 0)
    /// on the upper half plane.
    ThroughGamma { t: f64 },
    /// Boundary tangency unfolding: u(z) = (z^2, z(z^2 + s), branch * z) on
    /// the upper half plane.
    Tangency { s: f64, branch: i8 },
    /// Two disjoint strips u^1(z) = (e^z, 0, 0) and u^2(z) = (0, e^-z, t).
    HyperbolicPair { t: f64 },
    /// Strip smoothing the real node: v(z) = (e^(z-rho), e^-(z+rho), 0).
    HyperbolicNodal { rho: f64 },
    /// Cylinder through the chain, written in the end-compactified chart
    /// w = e^z as u_t(w) = (w, -i w, i t), defined at w = 0.
    EllipticCylinder { t: f64 },
    /// Annulus smoothing the imaginary node on [-rho, oo) x S^1.  The map is
    /// normalised so that its boundary circle has radius sqrt(2) e^-rho and
    /// so that it converges to the rescaled t = 0 cylinder as rho -> oo.
    EllipticNodal { rho: f64 },
}

/// One member of a local-model family, ready for intersection counting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalModelFamily {
    kind: FamilyKind,
}

/// Domain of one chart of a family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum DomainKind {
    /// Upper half plane; boundary on the real axis.
    HalfPlane,
    /// Strip R x [0, pi]; boundary on both edges.
    Strip,
    /// Full plane (an end-compactification chart); no boundary.
    Plane,
    /// Half-infinite cylinder [s_min, oo) x R/2pi; boundary circle at s_min.
    Cylinder { s_min: f64 },
}

impl DomainKind {
    /// Whether (re, im) lies in the domain interior, at least `margin` away
    /// from every boundary component.
    pub(crate) fn is_interior(&self, re: f64, im: f64, margin: f64) -> bool {
        match *self {
            DomainKind::HalfPlane => im > margin,
            DomainKind::Strip => im > margin && im < std::f64::consts::PI - margin,
            DomainKind::Plane => true,
            DomainKind::Cylinder { s_min } => re > s_min + margin,
        }
    }

    /// Whether the im coordinate is periodic with period 2*pi.
    pub(crate) fn is_periodic(&self) -> bool {
        matches!(self, DomainKind::Cylinder { .. })
    }
}

/// A boundary component of one chart, parameterised by a single real tau.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BoundarySpec {
    pub chart: usize,
    pub kind: BoundaryKind,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum BoundaryKind {
    /// tau -> tau + 0i on a half plane.
    RealAxis,
    /// tau -> tau + i*theta on a strip edge (theta is 0 or pi).
    StripEdge { theta: f64 },
    /// tau -> s + i*tau on the end circle of a cylinder, tau in [0, 2pi).
    EndCircle { s: f64 },
}

impl BoundaryKind {
    pub(crate) fn point(&self, tau: f64) -> Complex64 {
        match *self {
            BoundaryKind::RealAxis => Complex64::new(tau, 0.0),
            BoundaryKind::StripEdge { theta } => Complex64::new(tau, theta),
            BoundaryKind::EndCircle { s } => Complex64::new(s, tau),
        }
    }

    /// d(point)/d(tau) as a complex number.
    pub(crate) fn speed(&self) -> Complex64 {
        match self {
            BoundaryKind::RealAxis | BoundaryKind::StripEdge { .. } => Complex64::new(1.0, 0.0),
            BoundaryKind::EndCircle { .. } => Complex64::new(0.0, 1.0),
        }
    }
}

impl LocalModelFamily {
    pub fn through_gamma(t: f64) -> Self {
        LocalModelFamily {
            kind: FamilyKind::ThroughGamma { t },
        }
    }

    /// `branch` selects the third coordinate `+z` or `-z` and must be +1 or -1.
    pub fn tangency(s: f64, branch: i8) -> Result<Self, GeometryError> {
        if branch != 1 && branch != -1 {
            return Err(GeometryError::BadParameter(
                "tangency branch must be +1 or -1".into(),
            ));
        }
        Ok(LocalModelFamily {
            kind: FamilyKind::Tangency { s, branch },
        })
    }

    pub fn hyperbolic_pair(t: f64) -> Self {
        LocalModelFamily {
            kind: FamilyKind::HyperbolicPair { t },
        }
    }

    pub fn hyperbolic_nodal(rho: f64) -> Result<Self, GeometryError> {
        if !rho.is_finite() || rho <= 0.0 {
            return Err(GeometryError::BadParameter(
                "nodal smoothing parameter rho must be positive".into(),
            ));
        }
        Ok(LocalModelFamily {
            kind: FamilyKind::HyperbolicNodal { rho },
        })
    }

    pub fn elliptic_cylinder(t: f64) -> Self {
        LocalModelFamily {
            kind: FamilyKind::EllipticCylinder { t },
        }
    }

    pub fn elliptic_nodal(rho: f64) -> Result<Self, GeometryError> {
        if !rho.is_finite() || rho <= 0.0 {
            return Err(GeometryError::BadParameter(
                "nodal smoothing parameter rho must be positive".into(),
            ));
        }
        Ok(LocalModelFamily {
            kind: FamilyKind::EllipticNodal { rho },
        })
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Domain charts covering the family member.
    pub(crate) fn charts(&self) -> Vec<DomainKind> {
        match self.kind {
            FamilyKind::ThroughGamma { .. } | FamilyKind::Tangency { .. } => {
                vec![DomainKind::HalfPlane]
            }
            FamilyKind::HyperbolicPair { .. } => vec![DomainKind::Strip, DomainKind::Strip],
            FamilyKind::HyperbolicNodal { .. } => vec![DomainKind::Strip],
            FamilyKind::EllipticCylinder { .. } => vec![DomainKind::Plane],
            FamilyKind::EllipticNodal { rho } => vec![DomainKind::Cylinder { s_min: -rho }],
        }
    }

    pub(crate) fn boundaries(&self) -> Vec<BoundarySpec> {
        match self.kind {
            FamilyKind::ThroughGamma { .. } | FamilyKind::Tangency { .. } => {
                vec![BoundarySpec {
                    chart: 0,
                    kind: BoundaryKind::RealAxis,
                }]
            }
            FamilyKind::HyperbolicPair { .. } => vec![
                BoundarySpec {
                    chart: 0,
                    kind: BoundaryKind::StripEdge { theta: 0.0 },
                },
                BoundarySpec {
                    chart: 0,
                    kind: BoundaryKind::StripEdge {
                        theta: std::f64::consts::PI,
                    },
                },
                BoundarySpec {
                    chart: 1,
                    kind: BoundaryKind::StripEdge { theta: 0.0 },
                },
                BoundarySpec {
                    chart: 1,
                    kind: BoundaryKind::StripEdge {
                        theta: std::f64::consts::PI,
                    },
                },
            ],
            FamilyKind::HyperbolicNodal { .. } => vec![
                BoundarySpec {
                    chart: 0,
                    kind: BoundaryKind::StripEdge { theta: 0.0 },
                },
                BoundarySpec {
                    chart: 0,
                    kind: BoundaryKind::StripEdge {
                        theta: std::f64::consts::PI,
                    },
                },
            ],
            FamilyKind::EllipticCylinder { .. } => vec![],
            FamilyKind::EllipticNodal { rho } => {
                vec![BoundarySpec {
                    chart: 0,
                    kind: BoundaryKind::EndCircle { s: -rho },
                }]
            }
        }
    }

    /// Value of the map on the given chart.
    pub(crate) fn eval(&self, chart: usize, p: Complex64) -> C3 {
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self.kind {
            FamilyKind::ThroughGamma { t } => [Complex64::new(t, 0.0), p, zero],
            FamilyKind::Tangency { s, branch } => {
                let b = f64::from(branch);
                [p * p, p * (p * p + s), b * p]
            }
            FamilyKind::HyperbolicPair { t } => {
                if chart == 0 {
                    [p.exp(), zero, zero]
                } else {
                    [zero, (-p).exp(), Complex64::new(t, 0.0)]
                }
            }
            FamilyKind::HyperbolicNodal { rho } => [(p - rho).exp(), (-p - rho).exp(), zero],
            FamilyKind::EllipticCylinder { t } => [p, -i * p, i * t],
            FamilyKind::EllipticNodal { rho } => {
                let c = std::f64::consts::FRAC_1_SQRT_2;
                let a = p.exp();
                let b = (-p - 2.0 * rho).exp();
                [c * (a + b), -i * c * (a - b), zero]
            }
        }
    }

    /// Complex derivative of the map with respect to the chart coordinate.
    pub(crate) fn deriv(&self, chart: usize, p: Complex64) -> C3 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self.kind {
            FamilyKind::ThroughGamma { .. } => [zero, one, zero],
            FamilyKind::Tangency { s, branch } => {
                let b = f64::from(branch);
                [2.0 * p, 3.0 * p * p + s, Complex64::new(b, 0.0)]
            }
            FamilyKind::HyperbolicPair { .. } => {
                if chart == 0 {
                    [p.exp(), zero, zero]
                } else {
                    [zero, -(-p).exp(), zero]
                }
            }
            FamilyKind::HyperbolicNodal { rho } => [(p - rho).exp(), -(-p - rho).exp(), zero],
            FamilyKind::EllipticCylinder { .. } => [one, -i, zero],
            FamilyKind::EllipticNodal { rho } => {
                let c = std::f64::consts::FRAC_1_SQRT_2;
                let a = p.exp();
                let b = (-p - 2.0 * rho).exp();
                [c * (a - b), -i * c * (a + b), zero]
            }
        }
    }
}
