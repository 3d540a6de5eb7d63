use nalgebra::DVector;

use super::model;
use super::{Isometry, Kind, Point, Space};
use crate::lp::Row;

/// Affine chart centered at a point: Cartesian, gnomonic or Klein
/// coordinates after moving the center to the canonical origin. Geodesics
/// are straight and half-spaces are affine in these coordinates.
#[derive(Clone, Debug)]
pub struct Frame {
    space: Space,
    to_local: Isometry,
    center: DVector<f64>,
    metric_radius: f64,
    radius: f64,
}

/// A half-space seen in a frame.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LocalHalfSpace {
    Row(Row),
    Everything,
    Nothing,
}

impl Frame {
    pub fn new(space: Space, center: &DVector<f64>, metric_radius: f64) -> Frame {
        let to_local = Isometry::swap_with_origin(space, center);
        let radius = match space.kind {
            Kind::Euclidean => metric_radius,
            Kind::Spherical => metric_radius.min(1.5).tan(),
            Kind::Hyperbolic => metric_radius.tanh(),
        };
        Frame { space, to_local, center: center.clone(), metric_radius, radius }
    }

    pub fn at(p: &Point, metric_radius: f64) -> Frame {
        Frame::new(p.space(), p.canonical(), metric_radius)
    }

    /// Frame at the canonical origin.
    pub fn origin(space: Space, metric_radius: f64) -> Frame {
        Frame::new(space, &model::origin(space.dim), metric_radius)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn metric_radius(&self) -> f64 {
        self.metric_radius
    }

    /// Radius of the chart ball in local coordinates.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(&self, metric_radius: f64) -> Frame {
        Frame::new(self.space, &self.center, metric_radius)
    }

    /// Local coordinates of a canonical vector; `None` outside the chart domain.
    pub fn local(&self, v: &DVector<f64>) -> Option<DVector<f64>> {
        let n = self.space.dim;
        let u = self.to_local.matrix() * v;
        if u[n] <= 1e-300 {
            return None;
        }
        Some(u.rows(0, n) / u[n])
    }

    /// Canonical vector of local coordinates `k`. Hyperbolic coordinates must
    /// lie inside the unit ball.
    pub fn canonical(&self, k: &DVector<f64>) -> DVector<f64> {
        let n = self.space.dim;
        let mut u = DVector::zeros(n + 1);
        u.rows_mut(0, n).copy_from(k);
        u[n] = 1.0;
        // The swap is an involution.
        let v = self.to_local.matrix() * u;
        model::normalize(self.space.kind, &v).unwrap_or(v)
    }

    pub fn point(&self, k: &DVector<f64>) -> Point {
        Point::from_canonical(self.space, &self.canonical(k)).expect("local point in domain")
    }

    /// Affine form of the canonical half-space `{v : w·v ≤ 0}`.
    pub(crate) fn half_space(&self, w: &DVector<f64>) -> LocalHalfSpace {
        let n = self.space.dim;
        let wl = self.to_local.matrix().transpose() * w;
        let a = wl.rows(0, n).into_owned();
        let b = -wl[n];
        let na = a.norm();
        let scale = wl.norm().max(1e-300);
        if na <= 1e-12 * scale {
            return if b >= 0.0 { LocalHalfSpace::Everything } else { LocalHalfSpace::Nothing };
        }
        LocalHalfSpace::Row(Row { a: a / na, b: b / na })
    }

    /// A canonical covector expressed in local homogeneous coordinates `(k, 1)`.
    pub(crate) fn local_covector(&self, w: &DVector<f64>) -> DVector<f64> {
        self.to_local.matrix().transpose() * w
    }

    /// Canonical covector of the local hyperplane `a·k = b`.
    pub(crate) fn covector(&self, row: &Row) -> DVector<f64> {
        let n = self.space.dim;
        let mut wl = DVector::zeros(n + 1);
        wl.rows_mut(0, n).copy_from(&row.a);
        wl[n] = -row.b;
        // The swap is an involution, so (Tᵀ)⁻¹ = Tᵀ.
        self.to_local.matrix().transpose() * wl
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Chart;

    #[test]
    fn center_maps_to_local_origin() {
        let s = Space::hyperbolic(2, Chart::HalfSpace);
        let p = Point::new(s, vec![0.3, 2.0]).unwrap();
        let f = Frame::at(&p, 1.0);
        assert!(f.local(p.canonical()).unwrap().norm() < 1e-12);
        let k = DVector::from_vec(vec![0.2, -0.1]);
        let back = f.local(&f.canonical(&k)).unwrap();
        assert!((back - k).norm() < 1e-12);
    }

    #[test]
    fn local_ball_radius_matches_metric_radius() {
        let s = Space::spherical(2);
        let c = Point::new(s, vec![0.0, 0.6, 0.8]).unwrap();
        let f = Frame::at(&c, 0.7);
        let k = DVector::from_vec(vec![f.radius(), 0.0]);
        let d = model::dist(Kind::Spherical, &f.canonical(&k), c.canonical());
        assert!((d - 0.7).abs() < 1e-12);
    }
}
