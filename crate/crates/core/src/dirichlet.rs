//! Dirichlet domains `{z : d(z, x0) ≤ d(z, g x0)}` from a finite part of the orbit.

use std::collections::HashMap;

use log::debug;
use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::frame::LocalHalfSpace;
use crate::geometry::{model, Frame, Isometry, Point, Tolerance};
use crate::lp;
use crate::polyhedra::{bisector, default_frame_radius, HalfSpace, Polyhedron};
use crate::presentation::{Letter, Word};

/// Default word length for the orbit sample.
pub const DEFAULT_WORD_RADIUS: usize = 3;

/// Cap on the number of orbit elements enumerated.
const ORBIT_CAP: usize = 50_000;

#[derive(Clone, Debug)]
pub struct GroupInput {
    pub generators: Vec<Isometry>,
    pub basepoint: Point,
    pub word_radius: usize,
    pub tol: Tolerance,
}

/// A side of the domain: the bisector between `x0` and `element(x0)`.
#[derive(Clone, Debug)]
pub struct Face {
    pub element: Isometry,
    /// Letters index the input generators.
    pub word: Word,
}

#[derive(Clone, Debug)]
pub struct DirichletDomain {
    /// Essential bisectors only, framed at the basepoint.
    pub polyhedron: Polyhedron,
    /// `faces[i]` belongs to half-space `i`.
    pub faces: Vec<Face>,
    /// The domain did not change when the word radius was increased by one.
    pub stable: bool,
    pub orbit_size: usize,
}

/// Group elements given by words of length at most `radius`, shortest word first.
pub fn orbit_elements(gens: &[Isometry], radius: usize, tol: f64) -> Result<Vec<(Word, Isometry)>> {
    let space = gens.first().ok_or_else(|| Error::Input("no generators".into()))?.space();
    let inverses: Vec<Isometry> = gens.iter().map(Isometry::inverse).collect();
    let key = |g: &Isometry| -> Vec<i64> { g.matrix().iter().map(|x| (x * 1e6).round() as i64).collect() };
    let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut out: Vec<(Word, Isometry)> = vec![(Word::empty(), Isometry::identity(space))];
    index.entry(key(&out[0].1)).or_default().push(0);
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &i in &frontier {
            for (j, inv) in (0..gens.len()).flat_map(|j| [(j, false), (j, true)]) {
                let g = out[i].1.compose(if inv { &inverses[j] } else { &gens[j] });
                let k = key(&g);
                let dup = index.get(&k).is_some_and(|ids| ids.iter().any(|&t| out[t].1.probe_distance(&g) <= tol))
                    || (out.len() <= 2000 && out.iter().any(|(_, h)| h.probe_distance(&g) <= tol));
                if dup {
                    continue;
                }
                let mut w = out[i].0.clone();
                w.0.push(Letter::new(j, inv));
                index.entry(k).or_default().push(out.len());
                next.push(out.len());
                out.push((w, g));
                if out.len() > ORBIT_CAP {
                    return Err(Error::TileCap(ORBIT_CAP));
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

fn domain_for(input: &GroupInput, radius: usize) -> Result<DirichletDomain> {
    let x0 = &input.basepoint;
    let space = x0.space();
    for g in &input.generators {
        space.check_same(&g.space())?;
    }
    let tol = input.tol;
    let etol = (10.0 * tol.geom).max(1e-7);
    let orbit = orbit_elements(&input.generators, radius, etol)?;
    let mut cands: Vec<(f64, Word, Isometry, DVector<f64>)> = Vec::new();
    for (w, g) in orbit.iter().skip(1) {
        let y = g.apply_canonical(x0.canonical());
        let d = model::dist(space.kind, x0.canonical(), &y);
        if d < tol.geom {
            return Err(Error::BasepointFixed);
        }
        cands.push((d, w.clone(), g.clone(), y));
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let frame = Frame::at(x0, default_frame_radius(space.kind));
    let r = frame.radius();
    let mut hs: Vec<HalfSpace> = Vec::new();
    let mut faces: Vec<Face> = Vec::new();
    let mut rows: Vec<lp::Row> = Vec::new();
    for (_, w, g, y) in cands {
        let h = bisector(x0, &Point::from_canonical(space, &y)?)?;
        let LocalHalfSpace::Row(row) = frame.half_space(h.covector()) else { continue };
        // Keep the bisector only if it cuts the current domain.
        let cuts = match lp::maximize(&row.a, &rows, r)? {
            Some((_, v)) => v > row.b + tol.geom,
            None => false,
        };
        if cuts {
            rows.push(row);
            hs.push(h);
            faces.push(Face { element: g, word: w });
        }
    }
    let p = Polyhedron::with_frame(space, hs, frame, tol)?;
    let keep = p.essential_indices()?;
    let polyhedron = p.reduced()?;
    let faces = keep.into_iter().map(|i| faces[i].clone()).collect();
    debug!("dirichlet radius {radius}: {} orbit points, {} faces", orbit.len(), polyhedron.len());
    Ok(DirichletDomain { polyhedron, faces, stable: false, orbit_size: orbit.len() })
}

/// The Dirichlet domain of the orbit sample, compared against the next radius.
pub fn dirichlet_domain(input: &GroupInput) -> Result<DirichletDomain> {
    let mut d = domain_for(input, input.word_radius)?;
    let next = domain_for(input, input.word_radius + 1)?;
    d.stable = same_halfspaces(d.polyhedron.halfspaces(), next.polyhedron.halfspaces());
    Ok(d)
}

fn same_halfspaces(a: &[HalfSpace], b: &[HalfSpace]) -> bool {
    a.len() == b.len() && a.iter().all(|h| b.iter().any(|k| k.approx_eq(h, 1e-7)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{Chart, Space};

    fn input(f: &fixtures::Fixture, radius: usize) -> GroupInput {
        GroupInput { generators: f.isometries(), basepoint: f.basepoint.clone(), word_radius: radius, tol: Tolerance::default() }
    }

    #[test]
    fn lattice_domain_is_the_unit_square() {
        let f = fixtures::z2();
        let d = dirichlet_domain(&input(&f, 2)).unwrap();
        assert!(d.stable);
        assert_eq!(d.polyhedron.len(), 4);
        for h in f.polyhedron.halfspaces() {
            assert!(d.polyhedron.halfspaces().iter().any(|k| k.approx_eq(h, 1e-9)));
        }
        assert!(d.faces.iter().all(|fc| fc.word.len() == 1));
    }

    #[test]
    fn modular_domain_matches_classical() {
        let f = fixtures::psl2z();
        let d = dirichlet_domain(&input(&f, 2)).unwrap();
        assert!(d.stable);
        assert_eq!(d.polyhedron.len(), 3);
        for h in f.polyhedron.halfspaces() {
            assert!(d.polyhedron.halfspaces().iter().any(|k| k.approx_eq(h, 1e-9)));
        }
    }

    #[test]
    fn fixed_basepoint_is_rejected() {
        let s = Space::hyperbolic(2, Chart::HalfSpace);
        let sg = Isometry::from_sl2(s, [[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let inp = GroupInput {
            generators: vec![sg],
            basepoint: Point::new(s, vec![0.0, 1.0]).unwrap(),
            word_radius: 2,
            tol: Tolerance::default(),
        };
        assert_eq!(dirichlet_domain(&inp).unwrap_err(), Error::BasepointFixed);
    }

    #[test]
    fn orbit_words_are_shortest() {
        let f = fixtures::dihedral(3);
        let orbit = orbit_elements(&f.isometries(), 6, 1e-7).unwrap();
        assert_eq!(orbit.len(), 6);
        assert!(orbit.iter().all(|(w, _)| w.len() <= 3));
    }
}
