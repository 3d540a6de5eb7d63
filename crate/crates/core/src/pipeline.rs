//! From a job to a verified presentation.

use log::{info, warn};
use nalgebra::DVector;

use crate::dirichlet::{dirichlet_domain, GroupInput};
use crate::error::{Error, Result};
use crate::geometry::{Frame, Isometry, Kind, Point};
use crate::io::Job;
use crate::lp;
use crate::polyhedra::{default_frame_radius, rows_in, HalfSpace, Polyhedron};
use crate::presentation::{build_presentation, factor_element, side_pairings, Factorization, Presentation, Word};
use crate::tessellation::{
    classify_cells, explore, verify_local_tessellation, Complex, Exploration, Region, Report, Window, DEFAULT_TILE_CAP,
};

/// Window used when `P` is unbounded and no window was given.
const UNBOUNDED_WINDOW: f64 = 2.0;

/// How often a too-small window is enlarged by [`GROWTH`].
const ENLARGEMENTS: usize = 3;
const GROWTH: f64 = 1.5;

/// Samples drawn by the verification step.
pub const VERIFY_SAMPLES: usize = 2000;

/// A pairing candidate for one facet of `P`.
#[derive(Clone, Debug)]
pub struct Candidate {
    /// Facet index in the reduced polyhedron.
    pub facet: usize,
    pub element: Isometry,
    /// Word in the input generators.
    pub word: Word,
}

#[derive(Clone, Debug)]
pub struct DirichletInfo {
    pub stable: bool,
    pub orbit_size: usize,
}

/// Everything computed for a job.
#[derive(Clone, Debug)]
pub struct Domain {
    pub job: Job,
    /// `P` reduced to its essential half-spaces, framed at the basepoint.
    pub polyhedron: Polyhedron,
    /// `input_index[i]` is the position of half-space `i` in the input
    /// (for Dirichlet domains, in the bisector list).
    pub input_index: Vec<usize>,
    pub dirichlet: Option<DirichletInfo>,
    pub candidates: Vec<Candidate>,
    pub exploration: Exploration,
    pub complex: Complex,
    pub presentation: Presentation,
}

/// Computes only the fundamental polyhedron (given or Dirichlet).
pub fn fundamental_polyhedron(job: &Job) -> Result<(Polyhedron, Vec<usize>, Option<DirichletInfo>, Vec<Candidate>)> {
    let space = job.space;
    let frame = Frame::at(&job.basepoint, default_frame_radius(space.kind));
    match &job.polyhedron {
        Some(hs) => {
            let p = Polyhedron::with_frame(space, hs.clone(), frame, job.tol)?;
            if !p.contains_interior(job.basepoint.canonical(), job.tol.point) {
                return Err(Error::Input("basepoint is not in the interior of the polyhedron".into()));
            }
            let keep = p.essential_indices()?;
            let reduced = p.reduced()?;
            let mut cands = Vec::new();
            for (side, w) in &job.pairings {
                let facet = keep.iter().position(|k| k == side).ok_or_else(|| Error::PairingMismatch {
                    side: *side,
                    detail: "the half-space is not essential, so it carries no side".into(),
                })?;
                cands.push(Candidate { facet, element: job.eval(w), word: w.clone() });
            }
            Ok((reduced, keep, None, cands))
        }
        None => {
            let d = dirichlet_domain(&GroupInput {
                generators: job.generators.clone(),
                basepoint: job.basepoint.clone(),
                word_radius: job.word_radius,
                tol: job.tol,
            })?;
            if !d.stable {
                warn!("Dirichlet domain changed when the word radius was increased; it may be incomplete");
            }
            let cands = d
                .faces
                .iter()
                .enumerate()
                .map(|(i, f)| Candidate { facet: i, element: f.element.clone(), word: f.word.clone() })
                .collect();
            let n = d.polyhedron.len();
            Ok((d.polyhedron, (0..n).collect(), Some(DirichletInfo { stable: d.stable, orbit_size: d.orbit_size }), cands))
        }
    }
}

/// Whether `g(P)` meets `P` in a codimension-1 subset of facet `e`.
fn pairs_facet(p: &Polyhedron, e: usize, g: &Isometry) -> Result<bool> {
    let gp = p.transform(g);
    let opposite = p.halfspaces()[e].complement();
    if !gp.halfspaces().iter().any(|h| h.approx_eq(&opposite, 1e-6)) {
        return Ok(false);
    }
    let frame = p.frame();
    let hs: Vec<&HalfSpace> = p.halfspaces().iter().chain(gp.halfspaces()).collect();
    let Some(rows) = rows_in(frame, &hs) else { return Ok(false) };
    let n = p.space().dim;
    Ok(matches!(lp::affine_hull(&rows, n, frame.radius(), p.tolerance().geom)?, Some(h) if h.dim + 1 == n))
}

/// Checks explicit candidates, or finds one input generator (or inverse)
/// per facet when none were given.
fn validate_candidates(job: &Job, p: &Polyhedron, input_index: &[usize], cands: Vec<Candidate>) -> Result<Vec<Candidate>> {
    for c in &cands {
        if !pairs_facet(p, c.facet, &c.element)? {
            return Err(Error::PairingMismatch {
                side: input_index[c.facet],
                detail: format!("{} does not map P onto the neighbour across this side", c.word.render(&job.names)),
            });
        }
    }
    let mut out = cands;
    for e in 0..p.len() {
        if out.iter().any(|c| c.facet == e) {
            continue;
        }
        let mut found = None;
        'gens: for (i, g) in job.generators.iter().enumerate() {
            for (inv, h) in [(false, g.clone()), (true, g.inverse())] {
                if pairs_facet(p, e, &h)? {
                    found = Some(Candidate { facet: e, element: h, word: Word(vec![crate::presentation::Letter::new(i, inv)]) });
                    break 'gens;
                }
            }
        }
        match found {
            Some(c) => out.push(c),
            None => {
                return Err(Error::PairingMismatch {
                    side: input_index[e],
                    detail: "no generator or inverse maps P onto the neighbour across this side".into(),
                })
            }
        }
    }
    out.sort_by_key(|c| c.facet);
    Ok(out)
}

/// A window radius reaching every vertex of a bounded `P`.
fn default_window_radius(p: &Polyhedron, center: &Point) -> Result<f64> {
    let space = p.space();
    let frame = Frame::at(center, default_frame_radius(space.kind));
    let hs: Vec<&HalfSpace> = p.halfspaces().iter().collect();
    let Some(rows) = rows_in(&frame, &hs) else { return Ok(UNBOUNDED_WINDOW) };
    let r = frame.radius();
    let mut corner = DVector::zeros(space.dim);
    for j in 0..space.dim {
        let mut extent: f64 = 0.0;
        for sgn in [1.0, -1.0] {
            let mut c = DVector::zeros(space.dim);
            c[j] = sgn;
            match lp::maximize(&c, &rows, r)? {
                Some((_, v)) if v < 0.99 * r => extent = extent.max(v.abs()),
                _ => return Ok(UNBOUNDED_WINDOW),
            }
        }
        corner[j] = extent;
    }
    if space.kind == Kind::Spherical && corner.norm() >= 0.99 * r {
        return Ok(UNBOUNDED_WINDOW);
    }
    Ok(crate::geometry::model::dist(space.kind, frame.center(), &frame.canonical(&corner)) + 0.25)
}

fn enlargeable(e: &Error) -> bool {
    match e {
        Error::LoopLeftWindow | Error::UncoveredFacet { .. } | Error::OutsideExplored => true,
        Error::Cycle(msg) => msg.contains("leaves the explored window"),
        _ => false,
    }
}

/// Runs the whole pipeline: polyhedron, pairings, exploration, presentation.
pub fn run(job: &Job) -> Result<Domain> {
    let (p, input_index, dirichlet, cands) = fundamental_polyhedron(job)?;
    let cands = validate_candidates(job, &p, &input_index, cands)?;
    let mut elements: Vec<Isometry> = Vec::new();
    for c in &cands {
        if !elements.iter().any(|g| g.probe_distance(&c.element) <= 1e-7) {
            elements.push(c.element.clone());
        }
    }
    let (center, mut radius) = match &job.window {
        Some((c, r)) => (c.clone(), *r),
        None => (job.basepoint.clone(), default_window_radius(&p, &job.basepoint)?),
    };
    let mut attempt = 0;
    loop {
        let window = Window::new(center.clone(), radius)?;
        info!("exploring a window of radius {radius:.3}");
        let ex = explore(&p, &elements, Region::Ball(window), job.tol, DEFAULT_TILE_CAP)?;
        let result = (|| {
            let base = ex.base_tile().ok_or(Error::OutsideExplored)?;
            let complex = classify_cells(&ex, base)?;
            let pairings = side_pairings(&ex, &complex, &elements)?;
            let pres = build_presentation(&ex, &complex, pairings)?;
            Ok((complex, pres))
        })();
        match result {
            Ok((complex, mut presentation)) => {
                for g in &mut presentation.generators {
                    let word = cands
                        .iter()
                        .find(|c| c.element.probe_distance(&g.element) <= ex.element_tol())
                        .map(|c| c.word.clone())
                        .or_else(|| {
                            let inv = g.element.inverse();
                            cands
                                .iter()
                                .find(|c| c.element.probe_distance(&inv) <= ex.element_tol())
                                .map(|c| c.word.inverse(&[]))
                        });
                    g.source = word.map(|w| w.render(&job.names));
                }
                return Ok(Domain {
                    job: job.clone(),
                    polyhedron: p,
                    input_index,
                    dirichlet,
                    candidates: cands,
                    exploration: ex,
                    complex,
                    presentation,
                });
            }
            Err(e) if enlargeable(&e) && attempt < ENLARGEMENTS => {
                warn!("{e}; enlarging the window");
                attempt += 1;
                radius *= GROWTH;
            }
            Err(e) => return Err(e),
        }
    }
}

impl Domain {
    pub fn verify(&self, samples: usize) -> Report {
        verify_local_tessellation(&self.exploration, samples, self.job.seed)
    }

    pub fn factor(&self, g: &Isometry, seed: u64) -> Result<Factorization> {
        factor_element(&self.polyhedron, &self.presentation, &self.job.basepoint, g, seed)
    }

    /// Relation words in the input generators.
    pub fn relation_sources(&self) -> Vec<Option<Word>> {
        self.presentation
            .relations
            .iter()
            .map(|r| {
                let mut out = Word::empty();
                for l in r.word().letters() {
                    let src = crate::io::parse_word(self.presentation.generators[l.gen].source.as_deref()?, &self.job.names).ok()?;
                    out = out.concat(&if l.inv { src.inverse(&[]) } else { src });
                }
                Some(out)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::JobInput;

    fn job(src: &str) -> Job {
        Job::from_input(&JobInput::from_json(src).unwrap()).unwrap()
    }

    #[test]
    fn modular_group_from_matrices() {
        let j = job(
            r#"{"space": {"kind": "hyperbolic", "dim": 2, "chart": "half-space"},
            "generators": [{"name": "S", "matrix": [[0, -1], [1, 0]]}, {"name": "T", "matrix": [[1, 1], [0, 1]]}],
            "basepoint": [0, 2]}"#,
        );
        let d = run(&j).unwrap();
        assert!(d.dirichlet.as_ref().unwrap().stable);
        assert_eq!(d.presentation.generators.len(), 2);
        for w in d.relation_sources() {
            let m = j.eval_sl2(&w.unwrap()).unwrap();
            let s = m[0][0].signum();
            assert!((m[0][0] - s).abs() < 1e-8 && (m[1][1] - s).abs() < 1e-8 && m[0][1].abs() < 1e-8 && m[1][0].abs() < 1e-8);
        }
        assert!(d.verify(500).passed);
    }

    #[test]
    fn perturbed_pairing_names_the_side() {
        let j = job(
            r#"{"space": {"kind": "euclidean", "dim": 2},
            "generators": [
                {"name": "a", "matrix": [[1, 0, 0], [0, -1, 0], [0, 0, 1]]},
                {"name": "b", "matrix": [[-0.49, 0.8717224328879832, 0], [0.8717224328879832, 0.49, 0], [0, 0, 1]]}
            ],
            "basepoint": [0.4, 0.1],
            "polyhedron": {"halfspaces": [
                {"normal": [0, -1], "offset": 0},
                {"normal": [-0.8660254037844386, 0.5], "offset": 0}
            ]}}"#,
        );
        let e = run(&j).unwrap_err();
        assert_eq!(e.code(), "PAIRING_MISMATCH");
        assert_eq!(e.side(), Some(1));
    }

    #[test]
    fn bounded_domain_gets_a_covering_window() {
        let j = job(
            r#"{"space": {"kind": "euclidean", "dim": 2},
            "generators": [{"name": "x", "matrix": [[1, 0, 1], [0, 1, 0], [0, 0, 1]]}, {"name": "y", "matrix": [[1, 0, 0], [0, 1, 1], [0, 0, 1]]}],
            "basepoint": [0.1, 0.2]}"#,
        );
        let d = run(&j).unwrap();
        assert_eq!(d.presentation.relation_strings(), ["a*b*a^-1*b^-1"]);
        let sources: Vec<_> = d.presentation.generators.iter().map(|g| g.source.clone().unwrap()).collect();
        assert_eq!(sources.len(), 2);
    }
}
