use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pairing::lookup;
use super::word::Word;
use super::Presentation;
use crate::error::{Error, Result};
use crate::geometry::{model, Frame, Isometry, Point};
use crate::polyhedra::Polyhedron;
use crate::tessellation::{cell_at, cell_with, explore, walk_loop, Cell, Exploration, Region, DEFAULT_TILE_CAP};

/// Interval endpoints closer than this (in projective parameter) are merged.
const CUT_MERGE: f64 = 1e-10;

/// `κ_C(g, h)` for tiles `g`, `h` containing the cell `C`: a word for
/// `g⁻¹h` read off from crossings of sides through `C`.
///
/// For an edge the shorter way round the loop is taken; on a tie the way
/// that runs forward (in the loop order starting from the lowest tile)
/// from the lower-indexed of the two tiles. This makes `κ_C(h, g)` the
/// inverse word of `κ_C(g, h)`.
pub fn kappa(ex: &Exploration, pres: &Presentation, cell: &Cell, g: usize, h: usize) -> Result<Word> {
    if !cell.contains_tile(g) || !cell.contains_tile(h) {
        return Err(Error::Incidence(format!("tiles {g} and {h} do not both contain the cell")));
    }
    if g == h {
        return Ok(Word::empty());
    }
    match cell.codim {
        1 => Ok(Word::letter(step_letter(ex, pres, g, h)?)),
        2 => {
            let lp = walk_loop(ex, cell, cell.tiles[0], None)?;
            let m = lp.len();
            let pos = |t: usize| lp.iter().position(|&x| x == t).expect("loop covers the edge's tiles");
            let (i, j) = (pos(g), pos(h));
            let fwd = (j + m - i) % m;
            let bwd = m - fwd;
            let forward = fwd < bwd || (fwd == bwd && g < h);
            let mut path = vec![lp[i]];
            let mut at = i;
            while at != j {
                at = if forward { (at + 1) % m } else { (at + m - 1) % m };
                path.push(lp[at]);
            }
            let letters =
                path.windows(2).map(|w| step_letter(ex, pres, w[0], w[1])).collect::<Result<Vec<_>>>()?;
            Ok(Word(letters))
        }
        c => Err(Error::PathCodim { codim: c, param: f64::NAN }),
    }
}

fn step_letter(ex: &Exploration, pres: &Presentation, a: usize, b: usize) -> Result<super::Letter> {
    let step = ex.tiles[a].element.inverse().compose(&ex.tiles[b].element);
    lookup(&pres.pairings, &step, ex.element_tol())
        .map(|p| p.letter)
        .ok_or_else(|| Error::Incidence(format!("tiles {a} and {b} do not differ by a side pairing")))
}

/// An adapted list `(a_0, g_1, a_1, …, g_n, a_n)` for a piecewise-geodesic path.
#[derive(Clone, Debug)]
pub struct AdaptedList {
    pub path: Vec<Point>,
    /// `a_0 < a_1 < … < a_n`; segment `j` of the path has parameters `[j, j+1]`,
    /// traversed at constant speed.
    pub breaks: Vec<f64>,
    /// `g_1, …, g_n` as tile indices: `α([a_{i-1}, a_i]) ⊂ g_i(P)`.
    pub tiles: Vec<usize>,
    /// The cell generated by the open piece `(a_{i-1}, a_i)`.
    pub pieces: Vec<Cell>,
    /// The cell generated by `α(a_i)` for `0 < i < n`.
    pub joints: Vec<Cell>,
}

impl AdaptedList {
    /// Largest codimension met by the path.
    pub fn max_codim(&self) -> usize {
        self.pieces.iter().chain(&self.joints).map(|c| c.codim).max().unwrap_or(0)
    }
}

/// Splits `path` where the cell it passes through changes.
pub fn adapted_list(ex: &Exploration, path: &[Point]) -> Result<AdaptedList> {
    if path.len() < 2 {
        return Err(Error::Input("a path needs at least two points".into()));
    }
    let kind = ex.space().kind;
    // Open pieces as (start, end, cell), in path order.
    let mut pieces: Vec<(f64, f64, Cell)> = Vec::new();
    for (j, seg) in path.windows(2).enumerate() {
        let (p, q) = (seg[0].canonical(), seg[1].canonical());
        let mut cuts = vec![0.0, 1.0];
        for t in &ex.tiles {
            if let Some((lo, hi)) = t.chord_interval(p, q, 0.0) {
                cuts.extend([lo, hi].into_iter().filter(|&c| c > 0.0 && c < 1.0));
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= CUT_MERGE);
        for w in cuts.windows(2) {
            let mid = chord(kind, p, q, 0.5 * (w[0] + w[1]))?;
            let cell = cell_at(ex, &mid)?;
            let a = j as f64 + model::projective_to_speed(kind, p, q, w[0]);
            let b = j as f64 + model::projective_to_speed(kind, p, q, w[1]);
            match pieces.last_mut() {
                Some(last) if last.2.tiles == cell.tiles => last.1 = b,
                _ => pieces.push((a, b, cell)),
            }
        }
    }
    let mut breaks = vec![0.0];
    breaks.extend(pieces.iter().map(|p| p.1));
    let mut joints = Vec::new();
    for (i, &a) in breaks[1..breaks.len() - 1].iter().enumerate() {
        // The joint lies in the closures of both neighbouring pieces.
        let mut near = pieces[i].2.tiles.clone();
        near.extend_from_slice(&pieces[i + 1].2.tiles);
        joints.push(cell_with(ex, point_at(kind, path, a)?.canonical(), &near)?);
    }
    let tiles = pieces.iter().map(|p| p.2.tiles[0]).collect();
    Ok(AdaptedList {
        path: path.to_vec(),
        breaks,
        tiles,
        pieces: pieces.into_iter().map(|p| p.2).collect(),
        joints,
    })
}

fn chord(kind: crate::geometry::Kind, p: &DVector<f64>, q: &DVector<f64>, s: f64) -> Result<DVector<f64>> {
    model::normalize(kind, &(p * (1.0 - s) + q * s)).ok_or(Error::Antipodal)
}

/// The path point at parameter `a`.
fn point_at(kind: crate::geometry::Kind, path: &[Point], a: f64) -> Result<Point> {
    let j = (a.floor() as usize).min(path.len() - 2);
    let (p, q) = (path[j].canonical(), path[j + 1].canonical());
    let v = model::geodesic(kind, p, q, a - j as f64)?;
    Point::from_canonical(path[0].space(), &v)
}

/// `Φ = κ_{α(a_1)}(g_1, g_2) ⋯ κ_{α(a_{n-1})}(g_{n-1}, g_n)`.
pub fn phi(ex: &Exploration, pres: &Presentation, list: &AdaptedList) -> Result<Word> {
    let mut out = Word::empty();
    for (i, cell) in list.joints.iter().enumerate() {
        if cell.codim > 2 {
            return Err(Error::PathCodim { codim: cell.codim, param: list.breaks[i + 1] });
        }
        out = out.concat(&kappa(ex, pres, cell, list.tiles[i], list.tiles[i + 1])?);
    }
    Ok(out)
}

/// Explores along `path` and computes `Φ` of it.
pub fn phi_of_path(p: &Polyhedron, pres: &Presentation, path: &[Point]) -> Result<Word> {
    let ex = path_exploration(p, pres, path)?;
    let list = adapted_list(&ex, path)?;
    phi(&ex, pres, &list)
}

fn path_exploration(p: &Polyhedron, pres: &Presentation, path: &[Point]) -> Result<Exploration> {
    let gens: Vec<Isometry> = pres.generators.iter().map(|g| g.element.clone()).collect();
    explore(p, &gens, Region::Path(path.to_vec()), p.tolerance(), DEFAULT_TILE_CAP)
}

pub const FACTOR_ATTEMPTS: usize = 16;

#[derive(Clone, Debug)]
pub struct Factorization {
    pub word: Word,
    /// Paths tried before one avoided every cell of codimension ≥ 2.
    pub retries: usize,
}

/// Writes `g` as a word in the side pairings by following a path from
/// `x0` to `g(x0)` and reading off the sides it crosses.
///
/// The first path is the geodesic through its midpoint; later attempts
/// jitter the midpoint by `10·tol_geom` to avoid edges.
pub fn factor_element(p: &Polyhedron, pres: &Presentation, x0: &Point, g: &Isometry, seed: u64) -> Result<Factorization> {
    let space = p.space();
    space.check_same(&g.space())?;
    let tol = p.tolerance();
    let y = g.apply(x0)?;
    let mid = match crate::geometry::geodesic_point(x0, &y, 0.5) {
        Ok(m) => m,
        // Antipodal endpoints: go through a point a quarter turn away.
        Err(Error::Antipodal) => Frame::at(x0, 2.0).point(&DVector::from_fn(space.dim, |i, _| if i == 0 { 1.0 } else { 0.0 })),
        Err(e) => return Err(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = 10.0 * tol.geom;
    for attempt in 0..FACTOR_ATTEMPTS {
        let m = if attempt == 0 {
            mid.clone()
        } else {
            let frame = Frame::at(&mid, 1.0);
            frame.point(&DVector::from_fn(space.dim, |_, _| rng.random_range(-jitter..=jitter)))
        };
        let path = vec![x0.clone(), m, y.clone()];
        let ex = path_exploration(p, pres, &path)?;
        let list = adapted_list(&ex, &path)?;
        if list.max_codim() >= 2 {
            continue;
        }
        let word = phi(&ex, pres, &list)?.reduced(&pres.involutions());
        let residual = pres.eval(&word).probe_distance(g);
        if residual > ex.element_tol() {
            return Err(Error::FactorMismatch(residual));
        }
        return Ok(Factorization { word, retries: attempt });
    }
    Err(Error::FactorRetries(FACTOR_ATTEMPTS))
}
