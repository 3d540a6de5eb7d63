//! Small groups with known fundamental polyhedra, used by tests, examples
//! and the CLI's built-in demos.

use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::{Chart, Frame, Isometry, Point, Space, Tolerance};
use crate::polyhedra::{bisector, default_frame_radius, HalfSpace, Polyhedron};
use crate::tessellation::Window;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub polyhedron: Polyhedron,
    /// Named generators; inverses are implied.
    pub generators: Vec<(String, Isometry)>,
    /// A point in the interior of the polyhedron.
    pub basepoint: Point,
    /// Radius of a window around the basepoint reaching every edge.
    pub window_radius: f64,
}

impl Fixture {
    pub fn space(&self) -> Space {
        self.polyhedron.space()
    }

    pub fn window(&self) -> Window {
        Window::new(self.basepoint.clone(), self.window_radius).expect("positive radius")
    }

    pub fn isometries(&self) -> Vec<Isometry> {
        self.generators.iter().map(|(_, g)| g.clone()).collect()
    }
}

/// The wedge of angle π/n at the origin with the reflections in its two
/// sides, generating the symmetry group of a regular n-gon.
pub fn dihedral(n: usize) -> Fixture {
    assert!(n >= 2, "dihedral groups need n >= 2");
    let s = Space::euclidean(2);
    let th = PI / n as f64;
    let s1 = HalfSpace::new(s, &[0.0, -1.0], 0.0).expect("unit normal");
    let s2 = HalfSpace::new(s, &[-th.sin(), th.cos()], 0.0).expect("unit normal");
    let generators = vec![("a".to_string(), s1.reflection()), ("b".to_string(), s2.reflection())];
    let half = th / 2.0;
    let basepoint = Point::new(s, vec![0.5 * half.cos(), 0.5 * half.sin()]).expect("finite");
    Fixture {
        name: format!("dihedral-{n}"),
        polyhedron: Polyhedron::new(s, vec![s1, s2]).expect("same space"),
        generators,
        basepoint,
        window_radius: 1.5,
    }
}

fn lattice(dim: usize) -> Fixture {
    let s = Space::euclidean(dim);
    let names = ["x", "y", "z"];
    let mut hs = Vec::new();
    let mut generators = Vec::new();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        hs.push(HalfSpace::new(s, &e, 0.5).expect("unit normal"));
        e[i] = -1.0;
        hs.push(HalfSpace::new(s, &e, 0.5).expect("unit normal"));
        e[i] = 1.0;
        generators.push((names[i].to_string(), Isometry::translation(s, &e).expect("Euclidean")));
    }
    Fixture {
        name: format!("z{dim}"),
        polyhedron: Polyhedron::new(s, hs).expect("same space"),
        generators,
        basepoint: Point::origin(s),
        window_radius: if dim == 2 { 1.1 } else { 1.0 },
    }
}

/// The unit square centred at the origin under the integer translations.
pub fn z2() -> Fixture {
    lattice(2)
}

/// The unit cube centred at the origin under the integer translations.
pub fn z3() -> Fixture {
    lattice(3)
}

/// The modular group acting on the upper half-plane, with the classical
/// domain `|Re z| ≤ 1/2, |z| ≥ 1` built as bisectors about `2i`.
pub fn psl2z() -> Fixture {
    let s = Space::hyperbolic(2, Chart::HalfSpace);
    let sg = Isometry::from_sl2(s, [[0.0, -1.0], [1.0, 0.0]]).expect("SL(2,R)");
    let tg = Isometry::from_sl2(s, [[1.0, 1.0], [0.0, 1.0]]).expect("SL(2,R)");
    let x0 = Point::new(s, vec![0.0, 2.0]).expect("upper half-plane");
    let hs = [&sg, &tg, &tg.inverse()]
        .iter()
        .map(|g| bisector(&x0, &g.apply(&x0)?))
        .collect::<Result<Vec<_>>>()
        .expect("distinct orbit points");
    Fixture {
        name: "psl2z".into(),
        polyhedron: Polyhedron::new(s, hs).expect("same space"),
        generators: vec![("s".into(), sg), ("t".into(), tg)],
        basepoint: x0,
        window_radius: 1.5,
    }
}

/// A Weyl chamber of the tetrahedral reflection group on the 2-sphere.
pub fn tetrahedral() -> Fixture {
    let s = Space::spherical(2);
    let roots = [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [0.0, 1.0, 1.0]];
    let hs: Vec<HalfSpace> = roots
        .iter()
        .map(|r| HalfSpace::new(s, &[-r[0], -r[1], -r[2]], 0.0).expect("nonzero normal"))
        .collect();
    let generators = ["a", "b", "c"].iter().zip(&hs).map(|(n, h)| (n.to_string(), h.reflection())).collect();
    let basepoint = Point::new(s, {
        let v = [3.0f64, 2.0, 0.5];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n).to_vec()
    })
    .expect("unit vector");
    let frame = Frame::at(&basepoint, default_frame_radius(s.kind));
    Fixture {
        name: "tetrahedral".into(),
        polyhedron: Polyhedron::with_frame(s, hs, frame, Tolerance::default()).expect("same space"),
        generators,
        basepoint,
        window_radius: 1.2,
    }
}

/// Every fixture, in a fixed order.
pub fn all() -> Vec<Fixture> {
    vec![dihedral(3), dihedral(4), z2(), z3(), psl2z(), tetrahedral()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basepoints_are_interior() {
        for f in all() {
            let tol = f.polyhedron.tolerance().geom;
            assert!(f.polyhedron.contains_interior(f.basepoint.canonical(), tol), "{}", f.name);
            assert_eq!(f.polyhedron.essential_indices().unwrap().len(), f.polyhedron.len(), "{}", f.name);
        }
    }

    #[test]
    fn modular_domain_boundaries() {
        let f = psl2z();
        let s = f.space();
        for (x, y) in [(0.5, 3.0), (-0.5, 1.7), (0.6f64.cos(), 0.6f64.sin())] {
            let p = Point::new(s, vec![x, y]).unwrap();
            let m = f.polyhedron.halfspaces().iter().map(|h| h.value(p.canonical()).abs()).fold(f64::MAX, f64::min);
            assert!(m < 1e-12, "({x}, {y}) off the boundary by {m}");
        }
    }
}
