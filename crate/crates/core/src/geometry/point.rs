use nalgebra::DVector;

use super::model;
use super::{Chart, Kind, Space};
use crate::error::{Error, Result};

/// A point of a model space. Keeps the chart coordinates it was given and
/// the matching canonical vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    space: Space,
    coords: DVector<f64>,
    canonical: DVector<f64>,
}

impl Point {
    pub fn new(space: Space, coords: impl Into<Vec<f64>>) -> Result<Point> {
        let coords = DVector::from_vec(coords.into());
        let canonical = model::to_canonical(&space, &coords)?;
        Ok(Point { space, coords, canonical })
    }

    /// Builds a point from any representative of a canonical vector.
    pub fn from_canonical(space: Space, v: &DVector<f64>) -> Result<Point> {
        if v.len() != space.dim + 1 {
            return Err(Error::InvalidPoint("canonical vector has the wrong length".into()));
        }
        let canonical = model::normalize(space.kind, v)
            .ok_or_else(|| Error::InvalidPoint("vector does not represent a point".into()))?;
        let coords = model::from_canonical(&space, &canonical);
        Ok(Point { space, coords, canonical })
    }

    /// The distinguished origin of the model, expressed in `space`'s chart.
    pub fn origin(space: Space) -> Point {
        Point::from_canonical(space, &model::origin(space.dim)).expect("origin")
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn canonical(&self) -> &DVector<f64> {
        &self.canonical
    }

    /// Geodesic distance, evaluated with the formula native to the chart.
    pub fn dist(&self, other: &Point) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space, other.space));
        }
        let (a, b) = (&self.coords, &other.coords);
        let n = self.space.dim;
        Ok(match self.space.chart {
            Chart::Cartesian => (a - b).norm(),
            Chart::SphereEmbedded => model::dist(Kind::Spherical, a, b),
            Chart::Hyperboloid => model::dist(Kind::Hyperbolic, a, b),
            Chart::HalfSpace => {
                let q = (a - b).norm() / (2.0 * (a[n - 1] * b[n - 1]).sqrt());
                2.0 * q.asinh()
            }
            Chart::Ball => {
                let den = ((1.0 - a.norm_squared()) * (1.0 - b.norm_squared())).sqrt();
                2.0 * ((a - b).norm() / den).asinh()
            }
            Chart::Klein => klein_dist(a, b),
        })
    }

    /// Re-expresses the point in another chart of the same geometry.
    pub fn convert(&self, chart: Chart) -> Result<Point> {
        let space = self.space.with_chart(chart)?;
        Point::from_canonical(space, &self.canonical)
    }

    /// Same point, viewed in `space` (which must share the geometry).
    pub fn in_space(&self, space: Space) -> Result<Point> {
        self.space.check_same(&space)?;
        Point::from_canonical(space, &self.canonical)
    }
}

/// Hilbert cross-ratio distance in the Klein model.
fn klein_dist(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let u = b - a;
    let uu = u.norm_squared();
    if uu < 1e-300 {
        return 0.0;
    }
    // |a + l u|^2 = 1 has roots lp <= 0 and lq >= 1.
    let p = a.dot(&u) / uu;
    let c = (a.norm_squared() - 1.0) / uu;
    let disc = (p * p - c).sqrt();
    // Stable root pair.
    let big = if p >= 0.0 { -p - disc } else { -p + disc };
    let other = c / big;
    let (lp, lq) = if big < other { (big, other) } else { (other, big) };
    0.5 * ((lq * (1.0 - lp)) / (-lp * (lq - 1.0))).ln()
}

/// Point at constant-speed parameter `t` along the geodesic from `a` to `b`.
pub fn geodesic_point(a: &Point, b: &Point, t: f64) -> Result<Point> {
    a.space.check_same(&b.space)?;
    let v = model::geodesic(a.space.kind, a.canonical(), b.canonical(), t)?;
    Point::from_canonical(a.space, &v)
}
