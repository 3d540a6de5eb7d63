//! The job input file: a group given by matrices, optionally with a
//! fundamental polyhedron and explicit side pairings.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Chart, Isometry, Kind, Point, Space, Tolerance};
use crate::polyhedra::{HalfSpace, HalfSpaceSpec};
use crate::presentation::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub kind: Kind,
    pub dim: usize,
    #[serde(default)]
    pub chart: Option<Chart>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// `(n+1)×(n+1)` in the canonical model, or `2×2` in SL(2,ℝ) for the hyperbolic plane.
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronSpec {
    pub halfspaces: Vec<HalfSpaceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingSpec {
    pub side_index: usize,
    pub generator_word: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobInput {
    pub space: SpaceSpec,
    pub generators: Vec<GeneratorSpec>,
    pub basepoint: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyhedron: Option<PolyhedronSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairings: Option<Vec<PairingSpec>>,
    /// Point tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl JobInput {
    pub fn from_json(s: &str) -> Result<JobInput> {
        serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct Job {
    pub space: Space,
    pub names: Vec<String>,
    pub generators: Vec<Isometry>,
    /// The SL(2,ℝ) matrices, when generators were given that way.
    pub sl2: Option<Vec<[[f64; 2]; 2]>>,
    pub basepoint: Point,
    pub polyhedron: Option<Vec<HalfSpace>>,
    /// `(side index, word in the input generators)`.
    pub pairings: Vec<(usize, Word)>,
    pub tol: Tolerance,
    pub window: Option<(Point, f64)>,
    pub word_radius: usize,
    pub seed: u64,
}

impl Job {
    pub fn from_input(input: &JobInput) -> Result<Job> {
        let kind = input.space.kind;
        let space = Space::new(kind, input.space.dim, input.space.chart.unwrap_or_else(|| kind.default_chart()))?;
        let n = space.dim;
        if input.generators.is_empty() {
            return Err(Error::Input("at least one generator is required".into()));
        }
        let mut names: Vec<String> = Vec::new();
        for g in &input.generators {
            if g.name.is_empty() || names.contains(&g.name) {
                return Err(Error::Input(format!("generator names must be distinct and non-empty: {:?}", g.name)));
            }
            names.push(g.name.clone());
        }
        let sl2_form = kind == Kind::Hyperbolic && n == 2 && input.generators.iter().all(|g| g.matrix.len() == 2);
        let mut generators = Vec::new();
        let mut sl2 = Vec::new();
        for g in &input.generators {
            let rows = &g.matrix;
            let k = rows.len();
            if rows.iter().any(|r| r.len() != k) {
                return Err(Error::InvalidIsometry(format!("matrix of {} is not square", g.name)));
            }
            if sl2_form {
                let m = [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]];
                generators.push(Isometry::from_sl2(space, m)?);
                sl2.push(m);
            } else {
                let m = DMatrix::from_fn(k, k, |i, j| rows[i][j]);
                generators.push(Isometry::from_matrix(space, m)?);
            }
        }
        let basepoint = Point::new(space, input.basepoint.clone())?;
        let polyhedron = input
            .polyhedron
            .as_ref()
            .map(|p| p.halfspaces.iter().map(|h| HalfSpace::from_spec(space, h)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let mut pairings = Vec::new();
        for p in input.pairings.iter().flatten() {
            if polyhedron.as_ref().is_none_or(|hs| p.side_index >= hs.len()) {
                return Err(Error::Input(format!("pairing refers to missing side {}", p.side_index)));
            }
            pairings.push((p.side_index, parse_word(&p.generator_word, &names)?));
        }
        let tol = match input.tolerance {
            Some(t) if t > 0.0 && t.is_finite() => Tolerance::from_point(t),
            Some(t) => return Err(Error::Input(format!("tolerance must be positive, got {t}"))),
            None => Tolerance::default(),
        };
        let window = input
            .window
            .as_ref()
            .map(|w| {
                if !(w.radius > 0.0) || !w.radius.is_finite() {
                    return Err(Error::Input("window radius must be positive".into()));
                }
                Ok((Point::new(space, w.center.clone())?, w.radius))
            })
            .transpose()?;
        Ok(Job {
            space,
            names,
            generators,
            sl2: sl2_form.then_some(sl2),
            basepoint,
            polyhedron,
            pairings,
            tol,
            window,
            word_radius: input.word_radius.unwrap_or(crate::dirichlet::DEFAULT_WORD_RADIUS),
            seed: input.seed.unwrap_or(0),
        })
    }

    pub fn eval(&self, w: &Word) -> Isometry {
        w.eval(self.space, &self.generators)
    }

    /// Product of the SL(2,ℝ) matrices along `w`.
    pub fn eval_sl2(&self, w: &Word) -> Option<[[f64; 2]; 2]> {
        let ms = self.sl2.as_ref()?;
        let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
            [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ]
        };
        Some(w.letters().iter().fold([[1.0, 0.0], [0.0, 1.0]], |acc, l| {
            let m = ms[l.gen];
            // Inverse of a determinant-one matrix.
            let m = if l.inv { [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]] } else { m };
            mul(acc, m)
        }))
    }
}

/// Parses `a*b^-1*a^2` (or `1`) over the given generator names.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word> {
    let s = s.trim();
    let mut letters = Vec::new();
    if s == "1" || s.is_empty() {
        return Ok(Word(letters));
    }
    for factor in s.split('*') {
        let factor = factor.trim();
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (
                b.trim(),
                e.trim().parse::<i64>().map_err(|_| Error::Input(format!("bad exponent in {factor:?}")))?,
            ),
            None => (factor, 1),
        };
        let gen = names
            .iter()
            .position(|n| n == base)
            .ok_or_else(|| Error::Input(format!("unknown generator {base:?} in word {s:?}")))?;
        for _ in 0..exp.unsigned_abs() {
            letters.push(Letter::new(gen, exp < 0));
        }
    }
    Ok(Word(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIHEDRAL: &str = r#"{
        "space": {"kind": "euclidean", "dim": 2},
        "generators": [
            {"name": "a", "matrix": [[1, 0, 0], [0, -1, 0], [0, 0, 1]]},
            {"name": "b", "matrix": [[-0.5, 0.8660254037844386, 0], [0.8660254037844386, 0.5, 0], [0, 0, 1]]}
        ],
        "basepoint": [0.4, 0.1],
        "polyhedron": {"halfspaces": [
            {"normal": [0, -1], "offset": 0},
            {"normal": [-0.8660254037844386, 0.5], "offset": 0}
        ]}
    }"#;

    #[test]
    fn parses_a_polyhedron_job() {
        let job = Job::from_input(&JobInput::from_json(DIHEDRAL).unwrap()).unwrap();
        assert_eq!(job.names, ["a", "b"]);
        assert_eq!(job.polyhedron.as_ref().unwrap().len(), 2);
        assert_eq!(job.tol, Tolerance::default());
        assert_eq!(job.seed, 0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = DIHEDRAL.replacen("\"basepoint\"", "\"extra\": 1, \"basepoint\"", 1);
        assert!(matches!(JobInput::from_json(&bad), Err(Error::Input(_))));
    }

    #[test]
    fn words_parse() {
        let names = vec!["s".to_string(), "t".to_string()];
        let w = parse_word("s*t^-2", &names).unwrap();
        assert_eq!(w.letters(), &[Letter::new(0, false), Letter::new(1, true), Letter::new(1, true)]);
        assert_eq!(w.render(&names), "s*t^-2");
        assert!(parse_word("u", &names).is_err());
        assert!(parse_word("1", &names).unwrap().is_empty());
    }

    #[test]
    fn sl2_generators() {
        let src = r#"{"space": {"kind": "hyperbolic", "dim": 2, "chart": "half-space"},
            "generators": [{"name": "s", "matrix": [[0, -1], [1, 0]]}, {"name": "t", "matrix": [[1, 1], [0, 1]]}],
            "basepoint": [0, 2]}"#;
        let job = Job::from_input(&JobInput::from_json(src).unwrap()).unwrap();
        let w = parse_word("s*t*s*t*s*t", &job.names).unwrap();
        let m = job.eval_sl2(&w).unwrap();
        assert!((m[0][0].abs() - 1.0).abs() < 1e-12 && m[0][1].abs() < 1e-12);
        assert!(job.eval(&w).is_identity(1e-9));
    }
}
