use std::sync::OnceLock;

use nalgebra::DVector;

use super::HalfSpace;
use crate::error::{Error, Result};
use crate::geometry::frame::LocalHalfSpace;
use crate::geometry::{Frame, Isometry, Kind, Point, Space, Tolerance};
use crate::lp::{self, Affine, Hull, Row};

/// A finite intersection of closed half-spaces.
///
/// Linear programs run in an affine [`Frame`]; the frame's ball bounds
/// every feasibility question, so a polyhedron larger than its frame is
/// only understood inside it.
#[derive(Debug)]
pub struct Polyhedron {
    space: Space,
    halfspaces: Vec<HalfSpace>,
    frame: Frame,
    tol: Tolerance,
    essential: OnceLock<Result<Vec<usize>>>,
}

impl Clone for Polyhedron {
    fn clone(&self) -> Self {
        let essential = OnceLock::new();
        if let Some(e) = self.essential.get() {
            let _ = essential.set(e.clone());
        }
        Polyhedron {
            space: self.space,
            halfspaces: self.halfspaces.clone(),
            frame: self.frame.clone(),
            tol: self.tol,
            essential,
        }
    }
}

/// Default metric radius of the frame used when none is given.
pub fn default_frame_radius(kind: Kind) -> f64 {
    match kind {
        Kind::Euclidean => 1e3,
        Kind::Spherical => 1.5,
        Kind::Hyperbolic => 6.0,
    }
}

pub(crate) fn rows_in(frame: &Frame, hs: &[&HalfSpace]) -> Option<Vec<Row>> {
    let mut rows = Vec::with_capacity(hs.len());
    for h in hs {
        match frame.half_space(h.covector()) {
            LocalHalfSpace::Row(r) => rows.push(r),
            LocalHalfSpace::Everything => {}
            LocalHalfSpace::Nothing => return None,
        }
    }
    Some(rows)
}

impl Polyhedron {
    pub fn new(space: Space, halfspaces: Vec<HalfSpace>) -> Result<Polyhedron> {
        let frame = Frame::origin(space, default_frame_radius(space.kind));
        Polyhedron::with_frame(space, halfspaces, frame, Tolerance::default())
    }

    pub fn with_frame(space: Space, halfspaces: Vec<HalfSpace>, frame: Frame, tol: Tolerance) -> Result<Polyhedron> {
        for h in &halfspaces {
            space.check_same(&h.space())?;
        }
        Ok(Polyhedron { space, halfspaces, frame, tol, essential: OnceLock::new() })
    }

    /// The whole space.
    pub fn whole(space: Space) -> Polyhedron {
        Polyhedron::new(space, vec![]).expect("no half-spaces")
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    /// Same half-spaces, LP decisions made in another frame.
    pub fn reframed(&self, frame: Frame, tol: Tolerance) -> Polyhedron {
        Polyhedron { space: self.space, halfspaces: self.halfspaces.clone(), frame, tol, essential: OnceLock::new() }
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(v, tol))
    }

    pub fn contains_point(&self, x: &Point) -> Result<bool> {
        self.space.check_same(&x.space())?;
        Ok(self.contains(x.canonical(), self.tol.point))
    }

    /// Strict interior membership with margin `tol`.
    pub fn contains_interior(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.value(v) < -tol)
    }

    pub(crate) fn rows(&self, frame: &Frame) -> Option<Vec<Row>> {
        let hs: Vec<&HalfSpace> = self.halfspaces.iter().collect();
        rows_in(frame, &hs)
    }

    fn chebyshev(&self) -> Result<f64> {
        let Some(rows) = self.rows(&self.frame) else {
            return Ok(f64::NEG_INFINITY);
        };
        Ok(lp::chebyshev(&rows, self.space.dim, self.frame.radius())?.1)
    }

    /// Whether some point satisfies every inequality strictly.
    pub fn is_thick(&self) -> Result<bool> {
        let s = self.chebyshev()?;
        if s < -self.tol.geom {
            return Err(Error::EmptyPolyhedron);
        }
        if self.space.kind == Kind::Spherical {
            self.check_hemisphere()?;
        }
        Ok(s > self.tol.geom)
    }

    /// Spherical polyhedra must stay well inside the open hemisphere of the
    /// frame center, where gnomonic coordinates are valid.
    fn check_hemisphere(&self) -> Result<()> {
        let Some(rows) = self.rows(&self.frame) else {
            return Ok(());
        };
        let dim = self.space.dim;
        let r = self.frame.radius();
        for j in 0..dim {
            for sgn in [1.0, -1.0] {
                let mut c = DVector::zeros(dim);
                c[j] = sgn;
                if let Some((_, v)) = lp::maximize(&c, &rows, r)? {
                    if v >= 0.999 * r {
                        return Err(Error::Unsupported(
                            "spherical polyhedron does not fit in the hemisphere of its frame".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Indices of the essential half-spaces (first copy of duplicates).
    pub fn essential_indices(&self) -> Result<Vec<usize>> {
        self.essential.get_or_init(|| self.compute_essential()).clone()
    }

    fn compute_essential(&self) -> Result<Vec<usize>> {
        if !self.is_thick()? {
            return Err(Error::NotThick);
        }
        let rows = self.rows(&self.frame).ok_or(Error::EmptyPolyhedron)?;
        let dim = self.space.dim;
        let r = self.frame.radius();
        let mut out: Vec<usize> = Vec::new();
        for (i, h) in self.halfspaces.iter().enumerate() {
            if out.iter().any(|&j| self.halfspaces[j].approx_eq(h, 1e-9)) {
                continue;
            }
            let LocalHalfSpace::Row(row) = self.frame.half_space(h.covector()) else {
                continue;
            };
            let Some(aff) = Affine::from_equalities(std::slice::from_ref(&row), dim, r) else {
                continue;
            };
            let Some(sub) = aff.restrict(&rows, self.tol.geom) else {
                continue;
            };
            let (_, s) = lp::chebyshev(&sub, aff.dim(), aff.radius)?;
            if s > self.tol.geom {
                out.push(i);
            }
        }
        Ok(out)
    }

    pub fn essential_halfspaces(&self) -> Result<Vec<HalfSpace>> {
        Ok(self.essential_indices()?.into_iter().map(|i| self.halfspaces[i].clone()).collect())
    }

    /// The intersection of the essential half-spaces, which equals `self` when thick.
    pub fn reduced(&self) -> Result<Polyhedron> {
        let hs = self.essential_halfspaces()?;
        let p = Polyhedron { space: self.space, halfspaces: hs, frame: self.frame.clone(), tol: self.tol, essential: OnceLock::new() };
        let _ = p.essential.set(Ok((0..p.halfspaces.len()).collect()));
        Ok(p)
    }

    /// Affine hull data in the polyhedron's frame.
    pub(crate) fn hull(&self) -> Result<Option<Hull>> {
        let Some(rows) = self.rows(&self.frame) else {
            return Ok(None);
        };
        lp::affine_hull(&rows, self.space.dim, self.frame.radius(), self.tol.geom)
    }

    /// A point in the relative interior (interior within the affine hull).
    pub fn relative_interior_point(&self) -> Result<Point> {
        let h = self.hull()?.ok_or(Error::EmptyPolyhedron)?;
        Ok(self.frame.point(&h.point))
    }

    /// Dimension of the affine hull (within the frame ball).
    pub fn hull_dim(&self) -> Result<usize> {
        Ok(self.hull()?.ok_or(Error::EmptyPolyhedron)?.dim)
    }

    /// `g(P)`; essential flags and frame move along.
    pub fn transform(&self, g: &Isometry) -> Polyhedron {
        let halfspaces = self.halfspaces.iter().map(|h| h.transform(g)).collect();
        let center = g.apply_canonical(self.frame.center());
        let frame = Frame::new(self.space, &center, self.frame.metric_radius());
        let essential = OnceLock::new();
        if let Some(e) = self.essential.get() {
            let _ = essential.set(e.clone());
        }
        Polyhedron { space: self.space, halfspaces, frame, tol: self.tol, essential }
    }
}
