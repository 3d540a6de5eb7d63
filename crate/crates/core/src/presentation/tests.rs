use super::*;
use crate::fixtures::{self, Fixture};
use crate::geometry::Point;
use crate::tessellation::{classify_cells, explore, Region, DEFAULT_TILE_CAP};

fn present(f: &Fixture) -> (Exploration, Presentation) {
    let ex = explore(&f.polyhedron, &f.isometries(), Region::Ball(f.window()), f.polyhedron.tolerance(), DEFAULT_TILE_CAP)
        .unwrap();
    let c = classify_cells(&ex, ex.base_tile().unwrap()).unwrap();
    let pairings = side_pairings(&ex, &c, &[]).unwrap();
    let pres = build_presentation(&ex, &c, pairings).unwrap();
    (ex, pres)
}

#[test]
fn dihedral_presentations() {
    for n in 2..=6 {
        let (_, p) = present(&fixtures::dihedral(n));
        assert_eq!(p.relation_strings(), vec!["a^2".to_string(), "b^2".into(), format!("(a*b)^{n}")]);
        assert_eq!(p.cycles.len(), 1);
        assert_eq!((p.cycles[0].k, p.cycles[0].t, p.cycles[0].m), (2, n, 2 * n));
    }
}

#[test]
fn lattice_presentation() {
    let (_, p) = present(&fixtures::z2());
    assert_eq!(p.relation_strings(), vec!["a*b*a^-1*b^-1"]);
    assert_eq!(p.cycles.len(), 1);
    assert_eq!((p.cycles[0].k, p.cycles[0].t), (4, 1));
    assert_eq!(p.cycles[0].edges.len(), 4);
}

#[test]
fn cube_lattice_has_three_commutators() {
    let (_, p) = present(&fixtures::z3());
    assert_eq!(p.generators.len(), 3);
    assert_eq!(p.relations.len(), 3);
    for c in &p.cycles {
        assert_eq!((c.k, c.t, c.edges.len()), (4, 1, 4));
    }
}

#[test]
fn modular_group_orders() {
    let (_, p) = present(&fixtures::psl2z());
    assert_eq!(p.generators.len(), 2);
    let mut orders: Vec<usize> = p.relations.iter().map(|r| r.exponent).collect();
    orders.sort();
    assert_eq!(orders, vec![2, 3]);
}

#[test]
fn tetrahedral_relations() {
    let (_, p) = present(&fixtures::tetrahedral());
    assert_eq!(p.generators.len(), 3);
    let mut orders: Vec<usize> = p.relations.iter().filter(|r| r.kind == RelationKind::Cycle).map(|r| r.exponent).collect();
    orders.sort();
    assert_eq!(orders, vec![2, 3, 3]);
}

#[test]
fn gap_output() {
    let (_, p) = present(&fixtures::dihedral(3));
    assert_eq!(
        p.to_gap(),
        "F := FreeGroup(\"a\", \"b\");;\nAssignGeneratorVariables(F);;\nrels := [a^2, b^2, (a*b)^3];;\nG := F / rels;;\n"
    );
}

#[test]
fn kappa_is_antisymmetric_at_every_cell() {
    for f in [fixtures::dihedral(3), fixtures::z2(), fixtures::psl2z()] {
        let (ex, p) = present(&f);
        let c = classify_cells(&ex, 0).unwrap();
        let inv = p.involutions();
        let cells = c.sides.iter().map(|s| &s.cell).chain(c.edges.iter().map(|e| &e.cell));
        for cell in cells {
            for &g in &cell.tiles {
                for &h in &cell.tiles {
                    let a = kappa(&ex, &p, cell, g, h).unwrap();
                    let b = kappa(&ex, &p, cell, h, g).unwrap();
                    assert_eq!(a, b.inverse(&inv), "{}", f.name);
                    let want = ex.tiles[g].element.inverse().compose(&ex.tiles[h].element);
                    assert!(p.eval(&a).probe_distance(&want) < 1e-8);
                }
            }
        }
    }
}

#[test]
fn factor_round_trips() {
    for f in fixtures::all() {
        let (_, p) = present(&f);
        let gens = p.elements();
        let words = [vec![0usize, 1, 0], vec![1, 1, 0], vec![0, 0, 1, 0, 1]];
        for w in words {
            let g = w.iter().fold(Isometry::identity(f.space()), |acc, &i| acc.compose(&gens[i % gens.len()]));
            let r = factor_element(&f.polyhedron, &p, &f.basepoint, &g, 7).unwrap();
            assert!(p.eval(&r.word).probe_distance(&g) < 1e-8, "{}", f.name);
        }
    }
}

#[test]
fn phi_through_a_vertex_matches_detour() {
    let f = fixtures::dihedral(4);
    let (_, p) = present(&f);
    let s = f.space();
    let x = f.basepoint.clone();
    let y = Point::new(s, vec![-x.coords()[0], -x.coords()[1]]).unwrap();
    let through = phi_of_path(&f.polyhedron, &p, &[x.clone(), Point::origin(s), y.clone()]).unwrap();
    let around = phi_of_path(&f.polyhedron, &p, &[x.clone(), Point::new(s, vec![0.0, 0.6]).unwrap(), y.clone()]).unwrap();
    assert!(p.eval(&through).probe_distance(&p.eval(&around)) < 1e-8);
    assert!(!through.is_empty());
}
