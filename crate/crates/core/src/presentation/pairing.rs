use std::collections::BTreeSet;

use serde::Serialize;

use super::word::{symbol, Letter, Word};
use crate::error::{Error, Result};
use crate::geometry::Isometry;
use crate::tessellation::{edge_loop, Complex, Exploration};

/// The transformation `γ_S` with `S = P ∩ γ_S(P)`, for one side `S` of `P`.
#[derive(Clone, Debug)]
pub struct SidePairing {
    /// Index into `Complex::sides`.
    pub side: usize,
    /// Facet of `P` carrying the side.
    pub facet: usize,
    pub gamma: Isometry,
    /// The side `γ_S⁻¹(S)`.
    pub partner_side: usize,
    /// Letter of `γ_S` in the folded generators.
    pub letter: Letter,
}

/// One folded generator: a pair `{S, S'}` of sides, or a single side paired
/// with itself by an involution.
#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub symbol: String,
    #[serde(skip)]
    pub element: Isometry,
    pub involution: bool,
    /// Sides with letter `symbol` (first) and its inverse (second, if any).
    pub sides: Vec<usize>,
    /// The element as a word in the input generators, when known.
    pub source: Option<String>,
}

/// Finds `γ_S` for every side of the complex.
///
/// With an empty candidate list the element of the neighbouring tile is
/// used. Otherwise exactly one candidate (up to the element tolerance) must
/// equal it.
pub fn side_pairings(ex: &Exploration, complex: &Complex, candidates: &[Isometry]) -> Result<Vec<SidePairing>> {
    let etol = ex.element_tol();
    let mut gammas = Vec::with_capacity(complex.sides.len());
    for (i, s) in complex.sides.iter().enumerate() {
        let target = &ex.tiles[s.partner].element;
        if candidates.is_empty() {
            gammas.push(target.clone());
            continue;
        }
        let mut hits: Vec<&Isometry> = Vec::new();
        for c in candidates.iter().filter(|c| c.probe_distance(target) <= etol) {
            if !hits.iter().any(|h| h.probe_distance(c) <= etol) {
                hits.push(c);
            }
        }
        match hits.len() {
            0 => return Err(Error::UnpairedSide { side: i }),
            1 => gammas.push(hits[0].clone()),
            _ => return Err(Error::AmbiguousPairing { side: i }),
        }
    }

    let mut partner = Vec::with_capacity(gammas.len());
    for (i, g) in gammas.iter().enumerate() {
        let inv = g.inverse();
        let j = gammas.iter().position(|h| h.probe_distance(&inv) <= etol).ok_or_else(|| Error::PairingMismatch {
            side: i,
            detail: "no side of P is mapped onto this one by the inverse".into(),
        })?;
        partner.push(j);
    }
    for (i, &j) in partner.iter().enumerate() {
        if partner[j] != i {
            return Err(Error::PairingMismatch { side: i, detail: format!("side {j} pairs with {}", partner[j]) });
        }
    }

    let mut letters: Vec<Option<Letter>> = vec![None; gammas.len()];
    let mut next = 0;
    for i in 0..gammas.len() {
        if letters[i].is_some() {
            continue;
        }
        letters[i] = Some(Letter::new(next, false));
        if partner[i] != i {
            letters[partner[i]] = Some(Letter::new(next, true));
        }
        next += 1;
    }
    Ok(gammas
        .into_iter()
        .enumerate()
        .map(|(i, gamma)| SidePairing {
            side: i,
            facet: complex.sides[i].facet,
            gamma,
            partner_side: partner[i],
            letter: letters[i].expect("assigned above"),
        })
        .collect())
}

/// Generators in letter order.
pub fn generators(pairings: &[SidePairing]) -> Vec<Generator> {
    let mut out: Vec<Generator> = Vec::new();
    for p in pairings.iter().filter(|p| !p.letter.inv) {
        let mut sides = vec![p.side];
        if p.partner_side != p.side {
            sides.push(p.partner_side);
        }
        out.push(Generator {
            symbol: symbol(p.letter.gen),
            element: p.gamma.clone(),
            involution: p.partner_side == p.side,
            sides,
            source: None,
        });
    }
    out
}

/// Letter and side of the pairing equal to `g`.
pub(crate) fn lookup<'a>(pairings: &'a [SidePairing], g: &Isometry, etol: f64) -> Option<&'a SidePairing> {
    pairings.iter().find(|p| p.gamma.probe_distance(g) <= etol)
}

/// The edge cycle through `(E, S)`: the edges `E_1 = E, E_2, …`, sides
/// `S_1 = S, S_2, …` and the relation `(γ_{S_1}⋯γ_{S_k})^t`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeCycle {
    /// `E_1, …, E_k` as indices into `Complex::edges`.
    pub edges: Vec<usize>,
    /// `S_1, …, S_k` as indices into `Complex::sides`.
    pub sides: Vec<usize>,
    pub word: Word,
    /// Period of the sequence `(E_i, S_i)`.
    pub k: usize,
    /// Order of `γ_{S_1}⋯γ_{S_k}`.
    pub t: usize,
    /// Length of the edge loop, `k·t`.
    pub m: usize,
}

/// Order bound when cross-checking the cycle product.
const ORDER_CAP: usize = 1000;

pub fn edge_cycle(
    ex: &Exploration,
    complex: &Complex,
    pairings: &[SidePairing],
    edge: usize,
    side: usize,
) -> Result<EdgeCycle> {
    let etol = ex.element_tol();
    let e = &complex.edges[edge];
    if !e.sides.contains(&side) {
        return Err(Error::Incidence(format!("side {side} does not contain edge {edge}")));
    }
    let lp = edge_loop(ex, &e.cell, &complex.sides[side].cell, complex.tile)?;
    let m = lp.len();
    let g: Vec<&Isometry> = lp.iter().map(|&t| &ex.tiles[t].element).collect();

    // γ_{S_i} = g_{i-1}⁻¹ g_i for i = 1..m, with g_m = g_0.
    let mut steps: Vec<&SidePairing> = Vec::with_capacity(m);
    for i in 1..=m {
        let step = g[i - 1].inverse().compose(g[i % m]);
        let p = lookup(pairings, &step, etol)
            .ok_or_else(|| Error::Cycle(format!("step {i} of the loop around edge {edge} is not a side pairing")))?;
        steps.push(p);
    }
    if steps[0].side != side {
        return Err(Error::Cycle(format!("loop around edge {edge} does not start through side {side}")));
    }

    let edge_tiles: Vec<usize> = e.cell.tiles.clone();
    // Tiles of h(E) for an element h, if all are explored.
    let image_tiles = |h: &Isometry| -> Option<Vec<usize>> {
        let mut v: Vec<usize> =
            edge_tiles.iter().map(|&t| ex.find(&h.compose(&ex.tiles[t].element))).collect::<Option<_>>()?;
        v.sort_unstable();
        Some(v)
    };

    let k = (1..=m)
        .filter(|k| m % k == 0)
        .find(|&k| steps[k % m].side == steps[0].side && image_tiles(g[k % m]).as_deref() == Some(&edge_tiles[..]))
        .unwrap_or(m);
    let t = m / k;

    let word = Word(steps[..k].iter().map(|p| p.letter).collect());
    let product = g[k % m];
    let order = element_order(product, etol);
    if order != Some(t) {
        return Err(Error::Cycle(format!(
            "cycle product at edge {edge} has order {} but the loop gives {t}",
            order.map_or("> 1000".to_string(), |o| o.to_string())
        )));
    }

    let mut edges = Vec::with_capacity(k);
    for gi in &g[..k] {
        let tiles = image_tiles(&gi.inverse())
            .ok_or_else(|| Error::Cycle(format!("an edge in the cycle of edge {edge} leaves the explored window")))?;
        let j = complex
            .edges
            .iter()
            .position(|c| c.cell.tiles == tiles)
            .ok_or_else(|| Error::Cycle(format!("an edge in the cycle of edge {edge} is not an edge of P")))?;
        edges.push(j);
    }
    Ok(EdgeCycle { edges, sides: steps[..k].iter().map(|p| p.side).collect(), word, k, t, m })
}

/// Smallest `j ≥ 1` with `g^j = 1`, up to [`ORDER_CAP`].
pub fn element_order(g: &Isometry, tol: f64) -> Option<usize> {
    let mut h = g.clone();
    for j in 1..=ORDER_CAP {
        if h.is_identity(tol) {
            return Some(j);
        }
        h = h.compose(g);
    }
    None
}

/// One edge per cycle class, in edge order, with its cycle.
pub fn edge_cycles(ex: &Exploration, complex: &Complex, pairings: &[SidePairing]) -> Result<Vec<EdgeCycle>> {
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for (i, e) in complex.edges.iter().enumerate() {
        if done.contains(&i) {
            continue;
        }
        let c = edge_cycle(ex, complex, pairings, i, e.sides[0])?;
        done.extend(c.edges.iter().copied());
        out.push(c);
    }
    Ok(out)
}
