//! Constant-curvature spaces, charts, points and isometries.
//!
//! Every computation happens in a canonical linear model of dimension n+1:
//! affine coordinates `(x, 1)` for Euclidean space, the unit sphere for
//! spherical space and the upper sheet of the hyperboloid for hyperbolic
//! space. Charts only matter at the boundary (parsing and output).

pub(crate) mod frame;
mod isometry;
pub(crate) mod model;
mod point;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use frame::Frame;
pub use isometry::Isometry;
pub use point::{geodesic_point, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Euclidean,
    Spherical,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    Cartesian,
    SphereEmbedded,
    HalfSpace,
    Ball,
    Klein,
    Hyperboloid,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Euclidean => "euclidean",
            Kind::Spherical => "spherical",
            Kind::Hyperbolic => "hyperbolic",
        }
    }

    pub fn default_chart(self) -> Chart {
        match self {
            Kind::Euclidean => Chart::Cartesian,
            Kind::Spherical => Chart::SphereEmbedded,
            Kind::Hyperbolic => Chart::Hyperboloid,
        }
    }

    pub fn supports(self, chart: Chart) -> bool {
        matches!(
            (self, chart),
            (Kind::Euclidean, Chart::Cartesian)
                | (Kind::Spherical, Chart::SphereEmbedded)
                | (
                    Kind::Hyperbolic,
                    Chart::HalfSpace | Chart::Ball | Chart::Klein | Chart::Hyperboloid
                )
        )
    }
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::Cartesian => "cartesian",
            Chart::SphereEmbedded => "sphere-embedded",
            Chart::HalfSpace => "half-space",
            Chart::Ball => "ball",
            Chart::Klein => "klein",
            Chart::Hyperboloid => "hyperboloid",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A model space together with the chart used for its external coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub kind: Kind,
    pub dim: usize,
    pub chart: Chart,
}

impl Space {
    pub fn new(kind: Kind, dim: usize, chart: Chart) -> Result<Space> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        if !kind.supports(chart) {
            return Err(Error::IncompatibleChart {
                kind: kind.name().into(),
                chart: chart.name().into(),
            });
        }
        Ok(Space { kind, dim, chart })
    }

    pub fn euclidean(dim: usize) -> Space {
        Space { kind: Kind::Euclidean, dim, chart: Chart::Cartesian }
    }

    pub fn spherical(dim: usize) -> Space {
        Space { kind: Kind::Spherical, dim, chart: Chart::SphereEmbedded }
    }

    pub fn hyperbolic(dim: usize, chart: Chart) -> Space {
        Space::new(Kind::Hyperbolic, dim, chart).expect("hyperbolic chart")
    }

    /// Same geometry, possibly a different chart.
    pub fn same_geometry(&self, other: &Space) -> bool {
        self.kind == other.kind && self.dim == other.dim
    }

    pub fn with_chart(&self, chart: Chart) -> Result<Space> {
        Space::new(self.kind, self.dim, chart)
    }

    /// Length of chart coordinate vectors.
    pub fn coord_len(&self) -> usize {
        match self.chart {
            Chart::SphereEmbedded | Chart::Hyperboloid => self.dim + 1,
            _ => self.dim,
        }
    }

    pub(crate) fn check_same(&self, other: &Space) -> Result<()> {
        if self.same_geometry(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(*self, *other))
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} ({})", self.kind, self.dim, self.chart)
    }
}

/// Numerical tolerances: `point` for membership tests, `geom` for
/// dimension and thickness decisions made by linear programs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub point: f64,
    pub geom: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { point: 1e-9, geom: 1e-7 }
    }
}

impl Tolerance {
    /// Scales the geometric tolerance along with the point tolerance.
    pub fn from_point(point: f64) -> Tolerance {
        Tolerance { point, geom: (point * 100.0).max(1e-12) }
    }
}
