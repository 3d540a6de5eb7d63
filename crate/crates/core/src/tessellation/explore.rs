use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use log::{debug, warn};
use nalgebra::DVector;

use super::{Region, Tile, Window};
use crate::error::{Error, Result};
use crate::geometry::{model, Frame, Isometry, Point, Space, Tolerance};
use crate::lp::{self, Hull, Row};
use crate::polyhedra::Polyhedron;

pub const DEFAULT_TILE_CAP: usize = 20_000;

/// Radius of the frames used for local incidence questions.
const LOCAL_RADIUS: f64 = 0.5;

/// Entries rounded to this grid form the hash key of an element.
const KEY_GRID: f64 = 1e-6;

/// Beyond this many elements a hash miss is trusted without a linear scan.
const SCAN_LIMIT: usize = 2_000;

/// Tiles of the orbit tiling meeting a region, sorted by word length and
/// then lexicographically by word.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub base: Arc<Polyhedron>,
    pub generators: Vec<Isometry>,
    pub tiles: Vec<Tile>,
    pub region: Region,
    pub tol: Tolerance,
    /// The tile cap was hit; the tile list is incomplete.
    pub capped: bool,
    pub warnings: Vec<String>,
    registry: Registry,
}

#[derive(Clone, Debug, Default)]
struct Registry {
    map: HashMap<Vec<i64>, Vec<usize>>,
    elements: Vec<Isometry>,
}

fn key(g: &Isometry) -> Vec<i64> {
    g.matrix().iter().map(|x| (x / KEY_GRID).round() as i64).collect()
}

impl Registry {
    fn find(&self, g: &Isometry, tol: f64) -> Option<usize> {
        if let Some(ids) = self.map.get(&key(g)) {
            for &i in ids {
                if self.elements[i].probe_distance(g) <= tol {
                    return Some(i);
                }
            }
        }
        if self.elements.len() <= SCAN_LIMIT {
            return self.elements.iter().position(|h| h.probe_distance(g) <= tol);
        }
        None
    }

    fn insert(&mut self, g: Isometry) -> usize {
        let i = self.elements.len();
        self.map.entry(key(&g)).or_default().push(i);
        self.elements.push(g);
        i
    }
}

/// Tolerance for identifying group elements from their probe displacement.
fn element_tol(tol: &Tolerance) -> f64 {
    (tol.geom * 10.0).max(1e-7)
}

impl Exploration {
    pub fn space(&self) -> Space {
        self.base.space()
    }

    pub fn window(&self) -> Option<&Window> {
        match &self.region {
            Region::Ball(w) => Some(w),
            Region::Path(_) => None,
        }
    }

    /// Frame of the window, for classification questions.
    pub fn window_frame(&self) -> Result<Frame> {
        self.window()
            .map(Window::frame)
            .ok_or_else(|| Error::Unsupported("cell classification needs a ball window".into()))
    }

    /// Probe displacement below which two elements are identified.
    pub fn element_tol(&self) -> f64 {
        element_tol(&self.tol)
    }

    pub fn find(&self, g: &Isometry) -> Option<usize> {
        self.registry.find(g, element_tol(&self.tol))
    }

    /// Index of `P` itself, if it meets the region.
    pub fn base_tile(&self) -> Option<usize> {
        self.find(&Isometry::identity(self.space()))
    }

    pub fn tiles_containing(&self, v: &DVector<f64>) -> Vec<usize> {
        (0..self.tiles.len()).filter(|&i| self.tiles[i].contains(v, self.tol.point)).collect()
    }

    /// Whether `v` lies in the region where the tile list is complete.
    pub fn covers(&self, v: &DVector<f64>) -> bool {
        match &self.region {
            Region::Ball(w) => {
                model::dist(self.space().kind, w.center.canonical(), v) <= w.radius + self.tol.point
            }
            Region::Path(_) => true,
        }
    }

    pub(crate) fn local_frame(&self, v: &DVector<f64>) -> Frame {
        Frame::new(self.space(), v, LOCAL_RADIUS)
    }

    pub(crate) fn rows_of(&self, tiles: &[usize], frame: &Frame) -> Option<Vec<Row>> {
        let mut rows = Vec::new();
        for &t in tiles {
            rows.extend(self.tiles[t].rows(frame)?);
        }
        Some(rows)
    }

    /// Affine hull of the intersection of tiles inside a frame ball.
    pub(crate) fn hull_of(&self, tiles: &[usize], frame: &Frame) -> Result<Option<Hull>> {
        let Some(rows) = self.rows_of(tiles, frame) else {
            return Ok(None);
        };
        lp::affine_hull(&rows, self.space().dim, frame.radius(), self.tol.geom)
    }

    /// Whether two tiles meet in a codimension-1 set near `at`.
    pub(crate) fn adjacent_near(&self, a: usize, b: usize, at: &DVector<f64>) -> Result<bool> {
        let frame = self.local_frame(at);
        Ok(matches!(self.hull_of(&[a, b], &frame)?, Some(h) if h.dim + 1 == self.space().dim))
    }
}

fn meets(tile: &Tile, region: &Region, tol: &Tolerance) -> bool {
    match region {
        Region::Ball(w) => {
            let frame = w.frame();
            let Some(rows) = tile.rows(&frame) else {
                return false;
            };
            match lp::min_norm_point(&rows, frame.dim(), tol.point) {
                Some(k) => k.norm() <= frame.radius() + tol.point,
                None => false,
            }
        }
        Region::Path(pts) => pts
            .windows(2)
            .any(|s| tile.chord_interval(s[0].canonical(), s[1].canonical(), tol.point).is_some())
            || (pts.len() == 1 && tile.contains(pts[0].canonical(), tol.point)),
    }
}

/// Elements tried by the breadth-first fallback of [`locate`].
const LOCATE_CAP: usize = 20_000;

/// A tile containing `x`: greedy descent of the largest facet violation,
/// then a breadth-first search from wherever the descent stalls.
fn locate(base: &Arc<Polyhedron>, gens: &[Isometry], x: &DVector<f64>, tol: f64) -> Result<(Vec<usize>, Isometry)> {
    let space = base.space();
    let viol = |p: &DVector<f64>| base.halfspaces().iter().map(|h| h.value(p)).fold(f64::NEG_INFINITY, f64::max);
    let inverses: Vec<Isometry> = gens.iter().map(Isometry::inverse).collect();
    let mut word = Vec::new();
    let mut g = Isometry::identity(space);
    let mut p = x.clone();
    for _ in 0..10_000 {
        let v = viol(&p);
        if v <= tol {
            return Ok((word, g));
        }
        let best = inverses
            .iter()
            .enumerate()
            .map(|(i, ci)| {
                let q = ci.apply_canonical(&p);
                (i, viol(&q), q)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, vq, q)) if vq < v - 1e-12 => {
                word.push(i);
                g = g.compose(&gens[i]);
                p = q;
            }
            _ => break,
        }
    }
    // Reflection groups can stall the descent at a corner.
    debug!("greedy location stalled after {} steps", word.len());
    let mut seen = HashSet::new();
    seen.insert(key(&g));
    let mut queue = VecDeque::from([(word, g)]);
    while let Some((w, h)) = queue.pop_front() {
        if viol(&h.inverse().apply_canonical(x)) <= tol {
            return Ok((w, h));
        }
        for (i, gi) in gens.iter().enumerate() {
            let next = h.compose(gi);
            if seen.len() < LOCATE_CAP && seen.insert(key(&next)) {
                let mut nw = w.clone();
                nw.push(i);
                queue.push_back((nw, next));
            }
        }
    }
    Err(Error::OutsideExplored)
}

/// Explores the tiles meeting `window`; errors when the cap is exceeded.
pub fn explore_tiles(p: &Polyhedron, pairings: &[Isometry], window: &Window) -> Result<Vec<Tile>> {
    Ok(explore(p, pairings, Region::Ball(window.clone()), p.tolerance(), DEFAULT_TILE_CAP)?.tiles)
}

/// Missing inverses are appended to the generator list; tile words index
/// into `Exploration::generators`.
pub fn explore(p: &Polyhedron, gens: &[Isometry], region: Region, tol: Tolerance, cap: usize) -> Result<Exploration> {
    let ex = explore_partial(p, gens, region, tol, cap)?;
    if ex.capped {
        return Err(Error::TileCap(cap));
    }
    Ok(ex)
}

/// Like [`explore`] but returns the incomplete tile list when the cap is hit.
pub fn explore_partial(p: &Polyhedron, gens: &[Isometry], region: Region, tol: Tolerance, cap: usize) -> Result<Exploration> {
    let space = p.space();
    for g in gens {
        space.check_same(&g.space())?;
    }
    let base = Arc::new(p.reduced()?);
    let start_point: DVector<f64> = match &region {
        Region::Ball(w) => {
            space.check_same(&w.center.space())?;
            w.center.canonical().clone()
        }
        Region::Path(pts) => pts.first().ok_or_else(|| Error::Input("empty path".into()))?.canonical().clone(),
    };
    let etol = element_tol(&tol);
    let mut gens = gens.to_vec();
    for i in 0..gens.len() {
        let inv = gens[i].inverse();
        if !gens.iter().any(|g| g.probe_distance(&inv) <= etol) {
            gens.push(inv);
        }
    }
    let gens = &gens[..];
    let identity = Isometry::identity(space);
    let p_tile = Tile::from_element(vec![], identity.clone(), &base);
    let (word0, g0) = if meets(&p_tile, &region, &tol) {
        (vec![], identity.clone())
    } else {
        locate(&base, gens, &start_point, tol.point)?
    };

    let mut seen = Registry::default();
    let mut accepted: Vec<Option<usize>> = Vec::new();
    let mut tiles: Vec<Tile> = Vec::new();
    let mut warnings = Vec::new();
    let mut queue = VecDeque::new();
    let mut capped = false;

    let first = Tile::from_element(word0, g0.clone(), &base);
    seen.insert(g0);
    accepted.push(Some(0));
    tiles.push(first);
    queue.push_back(0usize);

    'bfs: while let Some(t) = queue.pop_front() {
        for (ci, c) in gens.iter().enumerate() {
            let h = tiles[t].element.compose(c);
            if seen.find(&h, etol).is_some() {
                continue;
            }
            let d = h.probe_distance(&identity);
            if d > etol && d < 1e-4 {
                let msg = format!("non-identity element moves the probe set by only {d:e}");
                warn!("{msg}");
                warnings.push(msg);
            }
            let mut word = tiles[t].word.clone();
            word.push(ci);
            let tile = Tile::from_element(word, h.clone(), &base);
            seen.insert(h);
            if meets(&tile, &region, &tol) {
                accepted.push(Some(tiles.len()));
                queue.push_back(tiles.len());
                tiles.push(tile);
                if tiles.len() > cap {
                    capped = true;
                    break 'bfs;
                }
            } else {
                accepted.push(None);
            }
        }
    }
    debug!("explored {} tiles ({} elements examined)", tiles.len(), seen.elements.len());

    tiles.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
    let mut registry = Registry::default();
    for t in &tiles {
        registry.insert(t.element.clone());
    }
    Ok(Exploration { base, generators: gens.to_vec(), tiles, region, tol, capped, warnings, registry })
}

/// Exploration over tiles given explicitly (partial tessellations without a group).
pub fn explicit(tiles: Vec<Polyhedron>, window: Window, tol: Tolerance) -> Result<Exploration> {
    let space = window.center.space();
    let base = Arc::new(Polyhedron::whole(space));
    let tiles = tiles.into_iter().map(Tile::from_polyhedron).collect::<Result<Vec<_>>>()?;
    Ok(Exploration {
        base,
        generators: vec![],
        tiles,
        region: Region::Ball(window),
        tol,
        capped: false,
        warnings: vec![],
        registry: Registry::default(),
    })
}

/// A point strictly inside `P`, preferring `hint`.
pub fn interior_point(p: &Polyhedron, hint: Option<&Point>) -> Result<Point> {
    if let Some(h) = hint {
        if p.contains_interior(h.canonical(), p.tolerance().geom) {
            return Ok(h.clone());
        }
    }
    p.relative_interior_point()
}
