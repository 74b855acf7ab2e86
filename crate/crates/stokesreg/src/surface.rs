//! Closed surfaces given as zero level sets of smooth scalar fields, with
//! analytic gradients and Hessians, outward-normal orientation, and root
//! projection along coordinate lines.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geo::{Aabb, Axis, Mat3, Vec3};

/// Tolerance to which projected surface points satisfy |phi| <= PHI_TOL.
pub const PHI_TOL: f64 = 1e-12;
const MIN_GRADIENT: f64 = 1e-12;
const LINE_SAMPLES: usize = 400;
const MAX_ROOT_ITER: usize = 100;

/// A scalar field defining a surface as its zero level set.
pub trait ImplicitField: Send + Sync {
    fn phi(&self, p: Vec3) -> f64;
    fn grad_phi(&self, p: Vec3) -> Vec3;
    fn hessian_phi(&self, p: Vec3) -> Mat3;
}

/// Built-in surface families, plus user-supplied fields.
#[derive(Clone)]
pub enum SurfaceKind {
    /// Unit sphere x1^2 + x2^2 + x3^2 - 1.
    Sphere,
    /// x1^2/a^2 + x2^2/b^2 + x3^2/c^2 - 1.
    Ellipsoid { a: f64, b: f64, c: f64 },
    /// Molecular surface: sum_k exp(-|x - x_k|^2 / r^2) - c, positive inside.
    Molecule {
        centers: Vec<Vec3>,
        radius: f64,
        level: f64,
    },
    Custom(Arc<dyn ImplicitField>),
}

impl std::fmt::Debug for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurfaceKind::Sphere => write!(f, "Sphere"),
            SurfaceKind::Ellipsoid { a, b, c } => write!(f, "Ellipsoid({a}, {b}, {c})"),
            SurfaceKind::Molecule { centers, radius, level } => write!(
                f,
                "Molecule({} centers, r={radius}, c={level})",
                centers.len()
            ),
            SurfaceKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A point on the surface with its outward unit normal.
#[derive(Clone, Copy, Debug)]
pub struct SurfacePoint {
    pub position: Vec3,
    pub normal: Vec3,
    /// Mean curvature, populated on demand via [`SurfacePoint::populate_curvature`].
    pub mean_curvature: Option<f64>,
}

impl SurfacePoint {
    pub fn populate_curvature(&mut self, surface: &LevelSetSurface) -> Result<()> {
        self.mean_curvature = Some(surface.mean_curvature(self.position)?);
        Ok(())
    }
}

/// A closed implicit surface with orientation and bounding box.
#[derive(Debug, Clone)]
pub struct LevelSetSurface {
    kind: SurfaceKind,
    orientation_sign: f64,
    bounding_box: Aabb,
    interior_point: Vec3,
}

/// Default ellipsoid semi-axes.
pub const ELLIPSOID_DEFAULT: (f64, f64, f64) = (1.0, 0.6, 0.4);

/// Default four-atom molecular surface centers (regular tetrahedron).
pub fn molecule_default_centers() -> Vec<Vec3> {
    let s3 = 3.0_f64.sqrt();
    let s6 = 6.0_f64.sqrt();
    vec![
        Vec3::new(s3 / 3.0, 0.0, -s6 / 12.0),
        Vec3::new(-s3 / 6.0, 0.5, -s6 / 12.0),
        Vec3::new(-s3 / 6.0, -0.5, -s6 / 12.0),
        Vec3::new(0.0, 0.0, s6 / 4.0),
    ]
}

pub const MOLECULE_DEFAULT_RADIUS: f64 = 0.5;
pub const MOLECULE_DEFAULT_LEVEL: f64 = 0.6;

impl LevelSetSurface {
    pub fn sphere() -> Result<Self> {
        Self::new(SurfaceKind::Sphere)
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(SurfaceKind::Ellipsoid { a, b, c })
    }

    pub fn ellipsoid_default() -> Result<Self> {
        let (a, b, c) = ELLIPSOID_DEFAULT;
        Self::ellipsoid(a, b, c)
    }

    pub fn molecule(centers: Vec<Vec3>, radius: f64, level: f64) -> Result<Self> {
        Self::new(SurfaceKind::Molecule { centers, radius, level })
    }

    pub fn molecule_default() -> Result<Self> {
        Self::molecule(
            molecule_default_centers(),
            MOLECULE_DEFAULT_RADIUS,
            MOLECULE_DEFAULT_LEVEL,
        )
    }

    /// Custom field; the caller supplies orientation, box and an interior point,
    /// which are validated like the built-ins.
    pub fn custom(
        field: Arc<dyn ImplicitField>,
        orientation_sign: f64,
        bounding_box: Aabb,
        interior_point: Vec3,
    ) -> Result<Self> {
        let s = LevelSetSurface {
            kind: SurfaceKind::Custom(field),
            orientation_sign,
            bounding_box,
            interior_point,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn new(kind: SurfaceKind) -> Result<Self> {
        let s = match kind {
            SurfaceKind::Sphere => LevelSetSurface {
                kind,
                orientation_sign: 1.0,
                bounding_box: Aabb::symmetric(Vec3::splat(1.1)),
                interior_point: Vec3::default(),
            },
            SurfaceKind::Ellipsoid { a, b, c } => {
                if a <= 0.0 || b <= 0.0 || c <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "ellipsoid semi-axes must be positive, got ({a}, {b}, {c})"
                    )));
                }
                LevelSetSurface {
                    kind,
                    orientation_sign: 1.0,
                    bounding_box: Aabb::symmetric(Vec3::new(1.1 * a, 1.1 * b, 1.1 * c)),
                    interior_point: Vec3::default(),
                }
            }
            SurfaceKind::Molecule { ref centers, radius, level } => {
                if radius <= 0.0 || level <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "molecule radius and level must be positive, got r={radius}, c={level}"
                    )));
                }
                if centers.is_empty() {
                    return Err(Error::InvalidConfig("molecule needs at least one center".into()));
                }
                for (i, a) in centers.iter().enumerate() {
                    for b in centers.iter().skip(i + 1) {
                        if (*a - *b).norm() == 0.0 {
                            return Err(Error::InvalidConfig(
                                "molecule centers must be distinct".into(),
                            ));
                        }
                    }
                }
                let n = centers.len() as f64;
                if level >= n {
                    return Err(Error::InvalidConfig(format!(
                        "molecule level c={level} has empty interior for {n} centers"
                    )));
                }
                let interior = centers.iter().fold(Vec3::default(), |s, &c| s + c) / n;
                let bounding_box = if is_default_molecule(centers, radius, level) {
                    Aabb::symmetric(Vec3::splat(1.5))
                } else {
                    // hull of the centers padded by the Gaussian reach at the level set
                    let reach = radius * (n / level).ln().sqrt() + 0.5 * radius;
                    let mut min = Vec3::splat(f64::INFINITY);
                    let mut max = Vec3::splat(f64::NEG_INFINITY);
                    for c in centers {
                        for i in 0..3 {
                            min.set_component(i, min.component(i).min(c.component(i) - reach));
                            max.set_component(i, max.component(i).max(c.component(i) + reach));
                        }
                    }
                    Aabb::new(min, max)
                };
                LevelSetSurface {
                    kind,
                    orientation_sign: -1.0,
                    bounding_box,
                    interior_point: interior,
                }
            }
            SurfaceKind::Custom(_) => {
                return Err(Error::InvalidConfig(
                    "use LevelSetSurface::custom for custom fields".into(),
                ))
            }
        };
        s.validate()?;
        Ok(s)
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn orientation_sign(&self) -> f64 {
        self.orientation_sign
    }

    pub fn bounding_box(&self) -> Aabb {
        self.bounding_box
    }

    /// A designated point strictly inside the surface.
    pub fn interior_point(&self) -> Vec3 {
        self.interior_point
    }

    pub fn phi(&self, p: Vec3) -> f64 {
        match &self.kind {
            SurfaceKind::Sphere => p.norm_squared() - 1.0,
            SurfaceKind::Ellipsoid { a, b, c } => {
                (p.x / a).powi(2) + (p.y / b).powi(2) + (p.z / c).powi(2) - 1.0
            }
            SurfaceKind::Molecule { centers, radius, level } => {
                let inv_r2 = 1.0 / (radius * radius);
                centers
                    .iter()
                    .map(|&c| (-(p - c).norm_squared() * inv_r2).exp())
                    .sum::<f64>()
                    - level
            }
            SurfaceKind::Custom(f) => f.phi(p),
        }
    }

    pub fn grad_phi(&self, p: Vec3) -> Vec3 {
        match &self.kind {
            SurfaceKind::Sphere => 2.0 * p,
            SurfaceKind::Ellipsoid { a, b, c } => {
                Vec3::new(2.0 * p.x / (a * a), 2.0 * p.y / (b * b), 2.0 * p.z / (c * c))
            }
            SurfaceKind::Molecule { centers, radius, level: _ } => {
                let inv_r2 = 1.0 / (radius * radius);
                let mut g = Vec3::default();
                for &c in centers {
                    let d = p - c;
                    let e = (-d.norm_squared() * inv_r2).exp();
                    g += d * (-2.0 * inv_r2 * e);
                }
                g
            }
            SurfaceKind::Custom(f) => f.grad_phi(p),
        }
    }

    pub fn hessian_phi(&self, p: Vec3) -> Mat3 {
        match &self.kind {
            SurfaceKind::Sphere => Mat3::identity().scale(2.0),
            SurfaceKind::Ellipsoid { a, b, c } => {
                Mat3::diagonal(Vec3::new(2.0 / (a * a), 2.0 / (b * b), 2.0 / (c * c)))
            }
            SurfaceKind::Molecule { centers, radius, level: _ } => {
                let inv_r2 = 1.0 / (radius * radius);
                let mut h = Mat3::zeros();
                for &c in centers {
                    let d = p - c;
                    let e = (-d.norm_squared() * inv_r2).exp();
                    let outer = d.outer(d).scale(4.0 * inv_r2 * inv_r2 * e);
                    let diag = -2.0 * inv_r2 * e;
                    for i in 0..3 {
                        for j in 0..3 {
                            h.rows[i][j] += outer.rows[i][j];
                        }
                        h.rows[i][i] += diag;
                    }
                }
                h
            }
            SurfaceKind::Custom(f) => f.hessian_phi(p),
        }
    }

    /// Outward unit normal at `p`.
    pub fn unit_normal(&self, p: Vec3) -> Result<Vec3> {
        let g = self.grad_phi(p);
        let n = g.norm();
        if n < MIN_GRADIENT {
            return Err(Error::Geometry(format!(
                "vanishing gradient at ({}, {}, {})",
                p.x, p.y, p.z
            )));
        }
        Ok(g * (self.orientation_sign / n))
    }

    /// Mean curvature H = (1/2) div(n) from the level-set formula, oriented so
    /// the unit sphere has H = +1.
    pub fn mean_curvature(&self, p: Vec3) -> Result<f64> {
        let g = self.grad_phi(p);
        let gn = g.norm();
        if gn < MIN_GRADIENT {
            return Err(Error::Geometry(format!(
                "vanishing gradient at ({}, {}, {})",
                p.x, p.y, p.z
            )));
        }
        let hess = self.hessian_phi(p);
        let lap = hess.trace();
        let ghg = g.dot(hess.mul_vec(g));
        Ok(self.orientation_sign * (lap * gn * gn - ghg) / (2.0 * gn * gn * gn))
    }

    /// All zero crossings of phi along the coordinate line through `base` in
    /// direction `axis`, each refined to |phi| <= 1e-12. `base`'s own `axis`
    /// component is ignored; the scan covers the bounding box.
    pub fn roots_along_line(&self, base: Vec3, axis: Axis) -> Result<Vec<SurfacePoint>> {
        let ai = axis.index();
        let lo = self.bounding_box.min.component(ai);
        let hi = self.bounding_box.max.component(ai);
        let step = (hi - lo) / LINE_SAMPLES as f64;

        let point_at = |t: f64| {
            let mut p = base;
            p.set_component(ai, t);
            p
        };

        let mut roots = Vec::new();
        let mut t_prev = lo;
        let mut f_prev = self.phi(point_at(t_prev));
        for k in 1..=LINE_SAMPLES {
            let t = lo + step * k as f64;
            let f = self.phi(point_at(t));
            if f_prev == 0.0 {
                roots.push(t_prev);
            } else if f != 0.0 && f_prev * f < 0.0 {
                roots.push(self.refine_root(base, ai, t_prev, t, f_prev)?);
            }
            t_prev = t;
            f_prev = f;
        }
        if f_prev == 0.0 {
            roots.push(t_prev);
        }

        roots
            .into_iter()
            .map(|t| {
                let position = point_at(t);
                let normal = self.unit_normal(position)?;
                Ok(SurfacePoint { position, normal, mean_curvature: None })
            })
            .collect()
    }

    /// Bisection-safeguarded Newton on a bracketed sign change.
    fn refine_root(&self, base: Vec3, ai: usize, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
        let point_at = |t: f64| {
            let mut p = base;
            p.set_component(ai, t);
            p
        };
        let sign_lo = f_lo.signum();
        let mut t = 0.5 * (lo + hi);
        for _ in 0..MAX_ROOT_ITER {
            let p = point_at(t);
            let f = self.phi(p);
            if f.abs() <= PHI_TOL {
                return Ok(t);
            }
            if f.signum() == sign_lo {
                lo = t;
            } else {
                hi = t;
            }
            let d = self.grad_phi(p).component(ai);
            let newton = t - f / d;
            t = if d != 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(Error::RootFinding(format!(
            "no convergence in {MAX_ROOT_ITER} iterations on axis {} near ({}, {}, {})",
            ai + 1,
            base.x,
            base.y,
            base.z
        )))
    }

    fn validate(&self) -> Result<()> {
        // interior point must be strictly inside: phi has the interior sign
        if self.orientation_sign * self.phi(self.interior_point) >= 0.0 {
            return Err(Error::Geometry(
                "designated interior point is not inside the surface".into(),
            ));
        }
        // ray test: first crossing outward from the interior point must have an
        // outward normal
        let crossings = self.roots_along_line(self.interior_point, Axis::X)?;
        let outward = crossings
            .iter()
            .filter(|sp| sp.position.x > self.interior_point.x)
            .min_by(|a, b| a.position.x.total_cmp(&b.position.x));
        match outward {
            Some(sp) => {
                if sp.normal.dot(sp.position - self.interior_point) <= 0.0 {
                    return Err(Error::Geometry(
                        "orientation sign does not produce outward normals".into(),
                    ));
                }
            }
            None => {
                return Err(Error::Geometry(
                    "ray from interior point does not cross the surface".into(),
                ))
            }
        }
        // the zero level set must not touch the bounding box: every face point
        // carries the exterior sign
        let b = self.bounding_box;
        for ai in 0..3 {
            let (u, v) = match ai {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            for &face in &[b.min.component(ai), b.max.component(ai)] {
                for iu in 0..=20 {
                    for iv in 0..=20 {
                        let mut p = Vec3::default();
                        p.set_component(ai, face);
                        p.set_component(
                            u,
                            b.min.component(u) + b.extent(u) * iu as f64 / 20.0,
                        );
                        p.set_component(
                            v,
                            b.min.component(v) + b.extent(v) * iv as f64 / 20.0,
                        );
                        if self.orientation_sign * self.phi(p) <= 0.0 {
                            return Err(Error::Geometry(
                                "bounding box does not enclose the zero level set".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Tangential projection (I - n n^T) grad_gamma of a field gradient.
pub fn surface_gradient(gamma_gradient: Vec3, normal: Vec3) -> Vec3 {
    gamma_gradient - normal * normal.dot(gamma_gradient)
}

fn is_default_molecule(centers: &[Vec3], radius: f64, level: f64) -> bool {
    if radius != MOLECULE_DEFAULT_RADIUS || level != MOLECULE_DEFAULT_LEVEL {
        return false;
    }
    let defaults = molecule_default_centers();
    centers.len() == defaults.len()
        && centers
            .iter()
            .zip(defaults.iter())
            .all(|(a, b)| (*a - *b).norm() < 1e-14)
}
