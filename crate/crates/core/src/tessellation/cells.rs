use std::collections::{BTreeSet, HashMap};

use nalgebra::DVector;

use super::Exploration;
use crate::error::{Error, Result};
use crate::geometry::{Frame, Point};
use crate::geometry::frame::LocalHalfSpace;
use crate::lp::{self, Row};

/// Metric radius of the frame in which the codimension of a cell is measured.
const CELL_FRAME_RADIUS: f64 = 1.0;

/// Tolerance for recognising opposite facets of neighbouring tiles.
const FACET_MATCH: f64 = 1e-6;

/// A cell of the explored tiling: the intersection of `tiles`, with
/// `representative` in its relative interior.
#[derive(Clone, Debug)]
pub struct Cell {
    /// Indices into `Exploration::tiles`, ascending.
    pub tiles: Vec<usize>,
    pub codim: usize,
    /// Canonical covectors of hyperplanes cutting out the carrier subspace.
    pub carrier: Vec<DVector<f64>>,
    pub representative: Point,
}

impl Cell {
    pub fn contains_tile(&self, t: usize) -> bool {
        self.tiles.binary_search(&t).is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct SideCell {
    pub cell: Cell,
    /// The tile across the side.
    pub partner: usize,
    /// Index of the facet (half-space of the tile) carrying the side.
    pub facet: usize,
}

#[derive(Clone, Debug)]
pub struct EdgeCell {
    pub cell: Cell,
    /// The two entries of `Complex::sides` containing the edge.
    pub sides: [usize; 2],
}

/// Sides and edges of one tile, as far as they meet the window.
#[derive(Clone, Debug)]
pub struct Complex {
    pub tile: usize,
    pub sides: Vec<SideCell>,
    pub edges: Vec<EdgeCell>,
}

/// The cell generated by `x`: the intersection of all tiles containing it.
pub fn cell_generated_by(ex: &Exploration, x: &Point) -> Result<Cell> {
    ex.space().check_same(&x.space())?;
    cell_at(ex, x.canonical())
}

pub(crate) fn cell_at(ex: &Exploration, v: &DVector<f64>) -> Result<Cell> {
    cell_with(ex, v, &[])
}

/// Like [`cell_at`], also counting `extra` among the tiles containing `v`
/// (for points known to lie on their boundary up to rounding).
pub(crate) fn cell_with(ex: &Exploration, v: &DVector<f64>, extra: &[usize]) -> Result<Cell> {
    if !ex.covers(v) {
        return Err(Error::OutsideExplored);
    }
    let mut tiles = ex.tiles_containing(v);
    tiles.extend_from_slice(extra);
    tiles.sort_unstable();
    tiles.dedup();
    if tiles.is_empty() {
        return Err(Error::OutsideExplored);
    }
    let space = ex.space();
    let representative = Point::from_canonical(space, v)?;
    if tiles.len() == 1 {
        return Ok(Cell { tiles, codim: 0, carrier: vec![], representative });
    }
    let frame = Frame::new(space, v, CELL_FRAME_RADIUS);
    let hull = ex
        .hull_of(&tiles, &frame)?
        .ok_or_else(|| Error::Incidence("tiles containing a point have empty intersection".into()))?;
    let carrier = hull.affine.normals.iter().map(|r| frame.covector(r)).collect();
    Ok(Cell { tiles, codim: space.dim - hull.dim, carrier, representative })
}

fn facet_row(frame: &Frame, w: &DVector<f64>) -> Option<Row> {
    match frame.half_space(w) {
        LocalHalfSpace::Row(r) => Some(r),
        _ => None,
    }
}

/// Sides and edges of tile `tile` meeting the exploration window.
pub fn classify_cells(ex: &Exploration, tile: usize) -> Result<Complex> {
    let n = ex.space().dim;
    if n > 3 {
        return Err(Error::Unsupported("cell classification is implemented for dimensions 2 and 3".into()));
    }
    let frame = ex.window_frame()?;
    let t = &ex.tiles[tile];
    let Some(own_rows) = t.rows(&frame) else {
        return Ok(Complex { tile, sides: vec![], edges: vec![] });
    };

    let mut sides: Vec<SideCell> = Vec::new();
    for (e, h) in t.halfspaces().iter().enumerate() {
        let opposite = h.complement();
        // Is the facet thick inside the window?
        let mut facet_rows = own_rows.clone();
        if let Some(r) = facet_row(&frame, opposite.covector()) {
            facet_rows.push(r);
        }
        let thick = matches!(
            lp::affine_hull(&facet_rows, n, frame.radius(), ex.tol.geom)?,
            Some(hull) if hull.dim + 1 == n
        );
        if !thick {
            continue;
        }
        let before = sides.len();
        for (j, other) in ex.tiles.iter().enumerate() {
            if j == tile || !other.halfspaces().iter().any(|g| g.approx_eq(&opposite, FACET_MATCH)) {
                continue;
            }
            let Some(hull) = ex.hull_of(&[tile, j], &frame)? else { continue };
            if hull.dim + 1 != n {
                continue;
            }
            let cell = cell_at(ex, &frame.canonical(&hull.point))?;
            if cell.tiles != [tile.min(j), tile.max(j)] || cell.codim != 1 {
                return Err(Error::Incidence(format!(
                    "side between tiles {tile} and {j} lies in tiles {:?} with codimension {}",
                    cell.tiles, cell.codim
                )));
            }
            sides.push(SideCell { cell, partner: j, facet: e });
        }
        if sides.len() == before {
            return Err(Error::UncoveredFacet { facet: e });
        }
    }

    let mut edges: Vec<EdgeCell> = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for a in 0..sides.len() {
        for b in a + 1..sides.len() {
            let (ta, tb) = (sides[a].partner, sides[b].partner);
            let Some(hull) = ex.hull_of(&[tile, ta, tb], &frame)? else { continue };
            if hull.dim + 2 != n {
                continue;
            }
            for rep in edge_representatives(ex, &frame, &[tile, ta, tb], &hull)? {
                let cell = cell_at(ex, &rep)?;
                if cell.codim != 2 || !cell.contains_tile(tile) || seen.contains_key(&cell.tiles) {
                    continue;
                }
                let through: Vec<usize> =
                    (0..sides.len()).filter(|&s| cell.contains_tile(sides[s].partner)).collect();
                if through.len() != 2 {
                    return Err(Error::Incidence(format!(
                        "edge in tiles {:?} lies in {} sides of tile {tile}",
                        cell.tiles,
                        through.len()
                    )));
                }
                seen.insert(cell.tiles.clone(), edges.len());
                edges.push(EdgeCell { cell, sides: [through[0], through[1]] });
            }
        }
    }
    Ok(Complex { tile, sides, edges })
}

/// Points in the relative interiors of the edges inside the codimension-2
/// set `∩ tiles`. In dimension 3 the segment is split wherever some tile
/// starts or stops containing it.
fn edge_representatives(ex: &Exploration, frame: &Frame, tiles: &[usize], hull: &lp::Hull) -> Result<Vec<DVector<f64>>> {
    let aff = &hull.affine;
    if aff.dim() == 0 {
        return Ok(vec![frame.canonical(&hull.point)]);
    }
    let tol = ex.tol.geom;
    let interval = |rows: &[Row]| -> Option<(f64, f64)> {
        let sub = aff.restrict(rows, tol)?;
        let (mut lo, mut hi) = (-aff.radius, aff.radius);
        for r in &sub {
            if r.a[0] > 0.0 {
                hi = hi.min(r.b / r.a[0]);
            } else {
                lo = lo.max(r.b / r.a[0]);
            }
        }
        (lo <= hi + tol).then_some((lo, hi))
    };
    let Some((lo, hi)) = ex.rows_of(tiles, frame).and_then(|r| interval(&r)) else {
        return Ok(vec![]);
    };
    let mut cuts = vec![lo, hi];
    for t in &ex.tiles {
        if let Some((a, b)) = t.rows(frame).and_then(|r| interval(&r)) {
            cuts.extend([a, b].into_iter().filter(|&c| c > lo + tol && c < hi - tol));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= tol);
    Ok(cuts
        .windows(2)
        .map(|w| frame.canonical(&aff.lift(&DVector::from_element(1, 0.5 * (w[0] + w[1])))))
        .collect())
}

/// The edge loop around `edge` starting in `tile` and crossing `side`
/// first: tiles `T_0 = tile, T_1, …, T_{m-1}` with consecutive tiles meeting
/// in a side through the edge and `T_m = T_0`.
pub fn edge_loop(ex: &Exploration, edge: &Cell, side: &Cell, tile: usize) -> Result<Vec<usize>> {
    if edge.codim != 2 || side.codim != 1 {
        return Err(Error::Incidence("edge_loop needs an edge and a side".into()));
    }
    if !side.contains_tile(tile) || !edge.contains_tile(tile) || side.tiles.iter().any(|t| !edge.contains_tile(*t)) {
        return Err(Error::Incidence("edge, side and tile are not nested".into()));
    }
    let first = *side.tiles.iter().find(|&&t| t != tile).ok_or_else(|| Error::Incidence("degenerate side".into()))?;
    walk_loop(ex, edge, tile, Some(first))
}

/// Walks around `edge` from `tile`, stepping first to `first` (or to the
/// lower-indexed neighbour when `None`).
pub(crate) fn walk_loop(ex: &Exploration, edge: &Cell, tile: usize, first: Option<usize>) -> Result<Vec<usize>> {
    let at = edge.representative.canonical();
    if !ex.covers(at) {
        return Err(Error::LoopLeftWindow);
    }
    let mut cache: HashMap<(usize, usize), bool> = HashMap::new();
    let mut neighbours = |t: usize| -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for &r in &edge.tiles {
            if r == t {
                continue;
            }
            let key = (t.min(r), t.max(r));
            let adj = match cache.get(&key) {
                Some(&a) => a,
                None => {
                    let a = ex.adjacent_near(t, r, at)?;
                    cache.insert(key, a);
                    a
                }
            };
            if adj {
                out.push(r);
            }
        }
        if out.len() != 2 {
            return Err(Error::Incidence(format!("tile {t} has {} sides through the edge", out.len())));
        }
        Ok(out)
    };
    let first = match first {
        Some(f) => f,
        None => neighbours(tile)?[0],
    };
    let mut out = vec![tile];
    let (mut prev, mut cur) = (tile, first);
    let mut visited = BTreeSet::from([tile]);
    while cur != tile {
        if !visited.insert(cur) {
            return Err(Error::Incidence("edge loop revisits a tile before closing".into()));
        }
        out.push(cur);
        let nb = neighbours(cur)?;
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    Ok(out)
}
