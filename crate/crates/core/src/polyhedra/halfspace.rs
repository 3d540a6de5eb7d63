use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::model::{self, lorentz};
use crate::geometry::{Isometry, Kind, Point, Space};

/// A closed half-space `{v : w·v ≤ 0}` of the canonical model, stored as a
/// covector `w` normalized so that `w·v` is the sine, hyperbolic sine or
/// plain value of the signed distance to the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    space: Space,
    w: DVector<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Interior,
    Boundary,
    Outside,
}

/// External encoding `{x : ⟨normal, x⟩ ≤ offset}`: Euclidean normals have n
/// entries; spherical normals are Euclidean and hyperbolic normals Lorentzian
/// vectors in ℝⁿ⁺¹, both with offset 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(space: Space, normal: &[f64], offset: f64) -> Result<HalfSpace> {
        let n = space.dim;
        let bad = |m: &str| Err(Error::InvalidHalfSpace(m.into()));
        if normal.iter().any(|x| !x.is_finite()) || !offset.is_finite() {
            return bad("non-finite entry");
        }
        let w = match space.kind {
            Kind::Euclidean => {
                if normal.len() != n {
                    return bad("Euclidean normals have n entries");
                }
                let mut w = DVector::zeros(n + 1);
                w.rows_mut(0, n).copy_from_slice(normal);
                w[n] = -offset;
                w
            }
            Kind::Spherical | Kind::Hyperbolic => {
                if normal.len() != n + 1 {
                    return bad("normals have n+1 entries");
                }
                if offset != 0.0 {
                    return bad("offset must be 0 for linear half-spaces");
                }
                let mut w = DVector::from_column_slice(normal);
                if space.kind == Kind::Hyperbolic {
                    w[n] = -w[n];
                }
                w
            }
        };
        HalfSpace::from_covector(space, w)
    }

    pub fn from_spec(space: Space, spec: &HalfSpaceSpec) -> Result<HalfSpace> {
        HalfSpace::new(space, &spec.normal, spec.offset)
    }

    pub(crate) fn from_covector(space: Space, w: DVector<f64>) -> Result<HalfSpace> {
        let n = space.dim;
        let scale = match space.kind {
            Kind::Euclidean => w.rows(0, n).norm(),
            Kind::Spherical => w.norm(),
            Kind::Hyperbolic => {
                // wᵀ J w is the Lorentz norm of the normal J w.
                let q = lorentz(&w, &w);
                if q <= 0.0 {
                    return Err(Error::InvalidHalfSpace("normal is not space-like".into()));
                }
                q.sqrt()
            }
        };
        if !(scale > 1e-300) {
            return Err(Error::InvalidHalfSpace("normal has zero length".into()));
        }
        Ok(HalfSpace { space, w: w / scale })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn covector(&self) -> &DVector<f64> {
        &self.w
    }

    pub fn normal(&self) -> Vec<f64> {
        let n = self.space.dim;
        match self.space.kind {
            Kind::Euclidean => self.w.rows(0, n).iter().copied().collect(),
            Kind::Spherical => self.w.iter().copied().collect(),
            Kind::Hyperbolic => {
                let mut v: Vec<f64> = self.w.iter().copied().collect();
                v[n] = -v[n];
                v
            }
        }
    }

    pub fn offset(&self) -> f64 {
        match self.space.kind {
            Kind::Euclidean => -self.w[self.space.dim],
            _ => 0.0,
        }
    }

    pub fn spec(&self) -> HalfSpaceSpec {
        HalfSpaceSpec { normal: self.normal(), offset: self.offset() }
    }

    /// Normalized signed value at a canonical vector (negative inside).
    pub fn value(&self, v: &DVector<f64>) -> f64 {
        self.w.dot(v)
    }

    pub fn side_test(&self, x: &Point, tol: f64) -> Result<Side> {
        self.space.check_same(&x.space())?;
        let v = self.value(x.canonical());
        Ok(if v.abs() <= tol {
            Side::Boundary
        } else if v < 0.0 {
            Side::Interior
        } else {
            Side::Outside
        })
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.value(v) <= tol
    }

    /// Image `g(Z)`, with covector `w g⁻¹`.
    pub fn transform(&self, g: &Isometry) -> HalfSpace {
        let w = g.inverse().matrix().transpose() * &self.w;
        HalfSpace::from_covector(self.space, w).expect("isometries preserve normals")
    }

    pub fn complement(&self) -> HalfSpace {
        HalfSpace { space: self.space, w: -&self.w }
    }

    /// Reflection in the boundary hyperplane.
    pub fn reflection(&self) -> Isometry {
        Isometry::reflection_covector(self.space, &self.w)
    }

    /// Same half-space up to `tol`, relative to the covector size.
    pub fn approx_eq(&self, other: &HalfSpace, tol: f64) -> bool {
        (&self.w - &other.w).norm() <= tol * (1.0 + self.w.norm())
    }
}

/// `{z : d(z, x) ≤ d(z, y)}`.
pub fn bisector(x: &Point, y: &Point) -> Result<HalfSpace> {
    x.space().check_same(&y.space())?;
    let space = x.space();
    let (a, b) = (x.canonical(), y.canonical());
    if model::dist(space.kind, a, b) < 1e-14 {
        return Err(Error::InvalidPoint("bisector of coincident points".into()));
    }
    let n = space.dim;
    let w = match space.kind {
        Kind::Euclidean => {
            let (xa, yb) = (a.rows(0, n), b.rows(0, n));
            let mut w = DVector::zeros(n + 1);
            w.rows_mut(0, n).copy_from(&(yb - xa));
            w[n] = -(yb.norm_squared() - xa.norm_squared()) / 2.0;
            w
        }
        Kind::Spherical => {
            if (a + b).norm() < 1e-12 {
                return Err(Error::Antipodal);
            }
            b - a
        }
        Kind::Hyperbolic => {
            let mut w = b - a;
            w[n] = -w[n];
            w
        }
    };
    HalfSpace::from_covector(space, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Chart;

    #[test]
    fn side_test_examples() {
        let s = Space::euclidean(2);
        let z = HalfSpace::new(s, &[1.0, 0.0], 0.0).unwrap();
        let p = |c: [f64; 2]| Point::new(s, c.to_vec()).unwrap();
        assert_eq!(z.side_test(&p([-1.0, 0.0]), 1e-9).unwrap(), Side::Interior);
        assert_eq!(z.side_test(&p([0.0, 5.0]), 1e-9).unwrap(), Side::Boundary);
        assert_eq!(z.side_test(&p([1e-12, 0.0]), 1e-9).unwrap(), Side::Boundary);
        assert_eq!(z.side_test(&p([0.1, 0.0]), 1e-9).unwrap(), Side::Outside);
    }

    #[test]
    fn hyperbolic_value_is_sinh_of_distance() {
        let s = Space::hyperbolic(2, Chart::HalfSpace);
        // The geodesic Re z = 0 has Lorentz normal e_1.
        let z = HalfSpace::new(s, &[1.0, 0.0, 0.0], 0.0).unwrap();
        let p = Point::new(s, vec![0.0, 1.0]).unwrap();
        let q = Point::new(s, vec![0.7, 1.0]).unwrap();
        let foot = Point::new(s, vec![0.0, (0.49f64 + 1.0).sqrt()]).unwrap();
        let d = q.dist(&foot).unwrap();
        assert!(z.value(p.canonical()).abs() < 1e-15);
        assert!((z.value(q.canonical()) - d.sinh()).abs() < 1e-12);
    }

    #[test]
    fn half_plane_bisector_is_semicircle() {
        let s = Space::hyperbolic(2, Chart::HalfSpace);
        let x = Point::new(s, vec![0.0, 1.0]).unwrap();
        let y = Point::new(s, vec![0.0, 4.0]).unwrap();
        let z = bisector(&x, &y).unwrap();
        for th in [0.3f64, 1.0, 2.0] {
            let p = Point::new(s, vec![2.0 * th.cos(), 2.0 * th.sin()]).unwrap();
            assert!(z.value(p.canonical()).abs() < 1e-12);
        }
        assert_eq!(z.side_test(&x, 1e-9).unwrap(), Side::Interior);
    }

    #[test]
    fn transform_moves_boundary_with_points() {
        let s = Space::euclidean(2);
        let z = HalfSpace::new(s, &[1.0, 0.0], 0.5).unwrap();
        let g = Isometry::translation(s, &[2.0, 1.0]).unwrap();
        let gz = z.transform(&g);
        assert!((gz.offset() - 2.5).abs() < 1e-15);
        let p = Point::new(s, vec![0.5, 7.0]).unwrap();
        assert!(gz.value(g.apply(&p).unwrap().canonical()).abs() < 1e-15);
    }
}
