//! Orbit tilings `{g(P)}` explored inside a bounded region: tiles, cells,
//! sides, edges, edge loops and sampled verification.

mod cells;
mod explore;
mod verify;

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::{Frame, Isometry, Point};
use crate::lp::Row;
use crate::polyhedra::{rows_in, HalfSpace, Polyhedron};

pub(crate) use cells::{cell_at, cell_with, walk_loop};
pub use cells::{cell_generated_by, classify_cells, edge_loop, Cell, Complex, EdgeCell, SideCell};
pub use explore::{explicit, explore, explore_partial, explore_tiles, interior_point, Exploration, DEFAULT_TILE_CAP};
pub use verify::{verify_local_tessellation, Check, Report};

/// A member `g(P)` of the tiling.
#[derive(Clone, Debug)]
pub struct Tile {
    /// Indices into the generator list, applied left to right.
    pub word: Vec<usize>,
    pub element: Isometry,
    inverse: Isometry,
    /// `g(P)` as its essential half-spaces.
    pub polyhedron: Polyhedron,
    /// Untransformed `P`, used to test membership by pulling points back.
    base: Option<Arc<Polyhedron>>,
}

impl Tile {
    pub(crate) fn from_element(word: Vec<usize>, element: Isometry, base: &Arc<Polyhedron>) -> Tile {
        let polyhedron = base.transform(&element);
        let inverse = element.inverse();
        Tile { word, element, inverse, polyhedron, base: Some(base.clone()) }
    }

    /// A tile given directly by its half-spaces (no group action).
    pub fn from_polyhedron(polyhedron: Polyhedron) -> Result<Tile> {
        let reduced = polyhedron.reduced()?;
        let element = Isometry::identity(polyhedron.space());
        Ok(Tile { word: vec![], inverse: element.clone(), element, polyhedron: reduced, base: None })
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        self.polyhedron.halfspaces()
    }

    fn pulled<'a>(&self, v: &'a DVector<f64>) -> std::borrow::Cow<'a, DVector<f64>> {
        match self.base {
            Some(_) => std::borrow::Cow::Owned(self.inverse.apply_canonical(v)),
            None => std::borrow::Cow::Borrowed(v),
        }
    }

    fn reference(&self) -> &Polyhedron {
        self.base.as_deref().unwrap_or(&self.polyhedron)
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.reference().contains(&self.pulled(v), tol)
    }

    pub fn contains_interior(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.reference().contains_interior(&self.pulled(v), tol)
    }

    pub(crate) fn rows(&self, frame: &Frame) -> Option<Vec<Row>> {
        let hs: Vec<&HalfSpace> = self.polyhedron.halfspaces().iter().collect();
        rows_in(frame, &hs)
    }

    /// Projective parameters `s ∈ [0, 1]` of the chord `(1-s)p + s q` inside
    /// the tile, widened by `tol`.
    pub(crate) fn chord_interval(&self, p: &DVector<f64>, q: &DVector<f64>, tol: f64) -> Option<(f64, f64)> {
        let (pp, qq) = (self.pulled(p), self.pulled(q));
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for h in self.reference().halfspaces() {
            let (a, b) = (h.value(&pp), h.value(&qq));
            if a <= tol && b <= tol {
                continue;
            }
            if a > tol && b > tol {
                return None;
            }
            let s = (tol - a) / (b - a);
            if a <= tol {
                hi = hi.min(s);
            } else {
                lo = lo.max(s);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Metric ball bounding an exploration.
#[derive(Clone, Debug)]
pub struct Window {
    pub center: Point,
    pub radius: f64,
}

impl Window {
    pub fn new(center: Point, radius: f64) -> Result<Window> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Input("window radius must be positive".into()));
        }
        Ok(Window { center, radius })
    }

    pub fn frame(&self) -> Frame {
        Frame::at(&self.center, self.radius)
    }
}

/// Where tiles are collected: a metric ball or a neighbourhood of a polyline.
#[derive(Clone, Debug)]
pub enum Region {
    Ball(Window),
    Path(Vec<Point>),
}
