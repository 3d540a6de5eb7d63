//! Generators and relations read off from side pairings and edge cycles,
//! plus the word map `Φ` and factorization of group elements.

mod pairing;
mod path;
mod word;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{Isometry, Space};
use crate::tessellation::{Complex, Exploration};

pub use pairing::{edge_cycle, edge_cycles, element_order, generators, side_pairings, EdgeCycle, Generator, SidePairing};
pub use path::{adapted_list, factor_element, kappa, phi, phi_of_path, AdaptedList, Factorization, FACTOR_ATTEMPTS};
pub use word::{symbol, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    /// `γ² = 1` for a side paired with itself.
    Reflection,
    /// The relation of an edge cycle.
    Cycle,
}

/// `base^exponent = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub base: Word,
    pub exponent: usize,
    pub kind: RelationKind,
}

impl Relation {
    pub fn word(&self) -> Word {
        self.base.pow(self.exponent)
    }

    pub fn render(&self, symbols: &[String]) -> String {
        let b = &self.base;
        if self.exponent == 1 {
            return b.render(symbols);
        }
        if b.letters().iter().all(|l| *l == b.letters()[0]) {
            return self.word().render(symbols);
        }
        format!("({})^{}", b.render(symbols), self.exponent)
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub space: Space,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub pairings: Vec<SidePairing>,
    pub cycles: Vec<EdgeCycle>,
}

/// Assembles the presentation: reflection relations for self-paired sides,
/// then one relation per edge cycle class. Pairing relations of distinct
/// sides are trivial once `γ_{S'}` is written as the inverse letter.
pub fn build_presentation(ex: &Exploration, complex: &Complex, pairings: Vec<SidePairing>) -> Result<Presentation> {
    let gens = generators(&pairings);
    let involutions: Vec<bool> = gens.iter().map(|g| g.involution).collect();
    let mut relations: Vec<Relation> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| g.involution)
        .map(|(i, _)| Relation { base: Word::letter(Letter::new(i, false)), exponent: 2, kind: RelationKind::Reflection })
        .collect();
    let cycles = edge_cycles(ex, complex, &pairings)?;
    for c in &cycles {
        let r = Relation { base: c.word.canonical_cycle(&involutions), exponent: c.t, kind: RelationKind::Cycle };
        // A cycle of one involution repeats its reflection relation.
        if !relations.iter().any(|q| q.word() == r.word()) {
            relations.push(r);
        }
    }
    let pres = Presentation { space: ex.space(), generators: gens, relations, pairings, cycles };
    let etol = ex.element_tol();
    for r in &pres.relations {
        let residual = pres.eval(&r.word()).probe_distance(&Isometry::identity(pres.space));
        if residual > etol {
            return Err(Error::RelationResidual { word: r.render(&pres.symbols()), residual });
        }
    }
    Ok(pres)
}

impl Presentation {
    pub fn symbols(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.symbol.clone()).collect()
    }

    pub fn involutions(&self) -> Vec<bool> {
        self.generators.iter().map(|g| g.involution).collect()
    }

    pub fn elements(&self) -> Vec<Isometry> {
        self.generators.iter().map(|g| g.element.clone()).collect()
    }

    pub fn eval(&self, w: &Word) -> Isometry {
        w.eval(self.space, &self.elements())
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.symbols())
    }

    pub fn relation_strings(&self) -> Vec<String> {
        let s = self.symbols();
        self.relations.iter().map(|r| r.render(&s)).collect()
    }

    /// A GAP session defining the finitely presented group `G`.
    pub fn to_gap(&self) -> String {
        let names: Vec<String> = self.symbols().iter().map(|s| format!("\"{s}\"")).collect();
        format!(
            "F := FreeGroup({});;\nAssignGeneratorVariables(F);;\nrels := [{}];;\nG := F / rels;;\n",
            names.join(", "),
            self.relation_strings().join(", ")
        )
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| {
                let m = g.element.matrix();
                let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
                json!({
                    "symbol": g.symbol,
                    "matrix": rows,
                    "word": g.source,
                    "involution": g.involution,
                    "sides": g.sides,
                })
            })
            .collect();
        let s = self.symbols();
        let cycles: Vec<Value> = self
            .cycles
            .iter()
            .map(|c| {
                json!({
                    "edges": c.edges,
                    "sides": c.sides,
                    "word": c.word.render(&s),
                    "k": c.k,
                    "t": c.t,
                    "m": c.m,
                })
            })
            .collect();
        json!({
            "space": { "kind": self.space.kind.name(), "dim": self.space.dim },
            "generators": gens,
            "relations": self.relation_strings(),
            "cycles": cycles,
        })
    }
}

#[cfg(test)]
mod tests;
