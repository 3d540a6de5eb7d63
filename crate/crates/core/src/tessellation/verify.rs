use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{classify_cells, edge_loop, Exploration};

/// Outcome of one check, with a witness point (chart coordinates) on failure.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub passed: bool,
    pub tiles: usize,
    pub samples: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>, witness: Option<Vec<f64>>) -> Check {
    Check { name: name.into(), passed, detail: detail.into(), witness }
}

/// Samples the window uniformly in its chart ball and tests coverage and
/// interior disjointness, then the side, edge and edge-loop incidences of `P`.
pub fn verify_local_tessellation(ex: &Exploration, samples: usize, seed: u64) -> Report {
    let mut checks = Vec::new();
    checks.push(check(
        "finite-exploration",
        !ex.capped,
        if ex.capped { format!("tile cap hit at {} tiles", ex.tiles.len()) } else { format!("{} tiles", ex.tiles.len()) },
        None,
    ));
    match ex.window_frame() {
        Ok(frame) => {
            let n = frame.dim();
            let r = frame.radius();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut uncovered = None;
            let mut overlap = None;
            let mut drawn = 0;
            while drawn < samples {
                let k = DVector::from_fn(n, |_, _| rng.random_range(-r..r));
                if k.norm() >= r {
                    continue;
                }
                drawn += 1;
                let v = frame.canonical(&k);
                let chart = || frame.point(&k).coords().iter().copied().collect::<Vec<f64>>();
                if uncovered.is_none() && ex.tiles_containing(&v).is_empty() {
                    uncovered = Some(chart());
                }
                if overlap.is_none() {
                    let inside: Vec<usize> =
                        (0..ex.tiles.len()).filter(|&t| ex.tiles[t].contains_interior(&v, ex.tol.geom)).collect();
                    if inside.len() > 1 {
                        overlap = Some((chart(), inside));
                    }
                }
            }
            checks.push(match uncovered {
                None => check("coverage", true, format!("{samples} samples covered"), None),
                Some(w) => check("coverage", false, "sample point lies in no tile", Some(w)),
            });
            checks.push(match overlap {
                None => check("disjointness", true, "no sample in two tile interiors", None),
                Some((w, ts)) => check("disjointness", false, format!("sample point inside tiles {ts:?}"), Some(w)),
            });
        }
        Err(e) => checks.push(check("coverage", false, e.to_string(), None)),
    }
    checks.extend(incidence_checks(ex));
    Report { passed: checks.iter().all(|c| c.passed), tiles: ex.tiles.len(), samples, checks }
}

fn incidence_checks(ex: &Exploration) -> Vec<Check> {
    let Some(base) = ex.base_tile() else {
        return vec![check("side-incidence", false, "P does not meet the window", None)];
    };
    let complex = match classify_cells(ex, base) {
        Ok(c) => c,
        Err(e) => return vec![check("side-incidence", false, format!("{} ({})", e, e.code()), None)],
    };
    let coords = |p: &crate::Point| p.coords().iter().copied().collect::<Vec<f64>>();
    let mut out = vec![check("side-incidence", true, format!("{} sides, each in exactly two tiles", complex.sides.len()), None)];

    let mut edge_fail = None;
    let mut loop_fail = None;
    for edge in &complex.edges {
        let e = &edge.cell;
        let brute = ex.tiles_containing(e.representative.canonical());
        for &t in &e.tiles {
            let sides = e.tiles.iter().filter(|&&r| r != t).filter(|&&r| ex.adjacent_near(t, r, e.representative.canonical()).unwrap_or(false)).count();
            if sides != 2 && edge_fail.is_none() {
                edge_fail = Some((format!("tile {t} has {sides} sides through the edge"), coords(&e.representative)));
            }
        }
        let side = &complex.sides[edge.sides[0]].cell;
        match edge_loop(ex, e, side, complex.tile) {
            Ok(mut l) => {
                l.sort_unstable();
                if l != brute && loop_fail.is_none() {
                    loop_fail = Some((format!("loop tiles {l:?} differ from containing tiles {brute:?}"), coords(&e.representative)));
                }
            }
            Err(err) => {
                if loop_fail.is_none() {
                    loop_fail = Some((err.to_string(), coords(&e.representative)));
                }
            }
        }
    }
    let n = complex.edges.len();
    out.push(match edge_fail {
        None => check("edge-incidence", true, format!("{n} edges, each in exactly two sides of every containing tile"), None),
        Some((d, w)) => check("edge-incidence", false, d, Some(w)),
    });
    out.push(match loop_fail {
        None => check("edge-loops", true, format!("{n} edge loops match the containing tiles"), None),
        Some((d, w)) => check("edge-loops", false, d, Some(w)),
    });
    out
}
