use nalgebra::DVector;
use proptest::prelude::*;

use poincare::polyhedra::{bisector, HalfSpace, Polyhedron};
use poincare::presentation::{Letter, Word};
use poincare::{Chart, Frame, Isometry, Kind, Point, Space};

fn spaces() -> impl Strategy<Value = Space> {
    prop_oneof![
        Just(Space::euclidean(2)),
        Just(Space::euclidean(3)),
        Just(Space::spherical(2)),
        Just(Space::spherical(3)),
        Just(Space::hyperbolic(2, Chart::HalfSpace)),
        Just(Space::hyperbolic(3, Chart::Ball)),
    ]
}

/// A point within metric distance about 1.2 of the origin.
fn point_in(s: Space, k: &[f64]) -> Point {
    let frame = Frame::origin(s, 1.2);
    let v = DVector::from_fn(s.dim, |i, _| k[i] * frame.radius() / 2.0);
    frame.point(&v)
}

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

fn setup(count: usize) -> impl Strategy<Value = (Space, Vec<Vec<f64>>)> {
    spaces().prop_flat_map(move |s| (Just(s), prop::collection::vec(coords(3), count)))
}

/// Product of reflections in the bisectors of random point pairs.
fn isometry(s: Space, pts: &[Vec<f64>]) -> Isometry {
    let mut g = Isometry::identity(s);
    for pair in pts.chunks(2) {
        let (x, y) = (point_in(s, &pair[0]), point_in(s, &pair[1]));
        if let Ok(h) = bisector(&x, &y) {
            g = &g * &h.reflection();
        }
    }
    g
}

fn words(gens: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 0..12)
        .prop_map(|v| Word(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn triangle_inequality((s, k) in setup(3)) {
        let p: Vec<Point> = k.iter().map(|c| point_in(s, c)).collect();
        let d = |i: usize, j: usize| p[i].dist(&p[j]).unwrap();
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9);
        prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-9);
        prop_assert!(d(0, 0) < 1e-7);
    }

    #[test]
    fn isometries_preserve_distance((s, k) in setup(8)) {
        let g = isometry(s, &k[..6]);
        let (x, y) = (point_in(s, &k[6]), point_in(s, &k[7]));
        let d0 = x.dist(&y).unwrap();
        let d1 = g.apply(&x).unwrap().dist(&g.apply(&y).unwrap()).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-8, "{} vs {}", d0, d1);
        prop_assert!((&g * &g.inverse()).is_identity(1e-9));
    }

    #[test]
    fn hyperbolic_charts_round_trip(k in coords(3)) {
        let s = Space::hyperbolic(3, Chart::HalfSpace);
        let x = point_in(s, &k);
        for c in [Chart::Ball, Chart::Klein, Chart::Hyperboloid] {
            let back = x.convert(c).unwrap().convert(Chart::HalfSpace).unwrap();
            prop_assert!((back.coords() - x.coords()).norm() < 1e-9 * (1.0 + x.coords().norm()));
            let y = x.convert(c).unwrap();
            prop_assert!((y.canonical() - x.canonical()).norm() < 1e-9 * (1.0 + x.canonical().norm()));
        }
    }

    #[test]
    fn bisector_separates_its_points((s, k) in setup(3)) {
        let (x, y) = (point_in(s, &k[0]), point_in(s, &k[1]));
        prop_assume!(x.dist(&y).unwrap() > 1e-3);
        let h = bisector(&x, &y).unwrap();
        let c = h.complement();
        prop_assert!(h.contains(x.canonical(), 0.0) && !h.contains(y.canonical(), 0.0));
        prop_assert!(c.contains(y.canonical(), 0.0) && !c.contains(x.canonical(), 0.0));
        // The side of a third point follows its distances.
        let z = point_in(s, &k[2]);
        let (dx, dy) = (z.dist(&x).unwrap(), z.dist(&y).unwrap());
        if (dx - dy).abs() > 1e-6 {
            prop_assert_eq!(h.contains(z.canonical(), 0.0), dx < dy);
        }
    }

    #[test]
    fn essential_reduction_is_idempotent(normals in prop::collection::vec((0.0f64..std::f64::consts::TAU, 0.2f64..1.5), 3..10)) {
        let s = Space::euclidean(2);
        let mut hs: Vec<HalfSpace> = normals
            .iter()
            .map(|(a, o)| HalfSpace::new(s, &[a.cos(), a.sin()], *o).unwrap())
            .collect();
        // Keep it bounded.
        for (x, y) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            hs.push(HalfSpace::new(s, &[x, y], 2.0).unwrap());
        }
        let p = Polyhedron::new(s, hs).unwrap();
        let r = p.reduced().unwrap();
        let rr = r.reduced().unwrap();
        prop_assert_eq!(r.len(), rr.len());
        prop_assert!(r.len() >= 3 && r.len() <= p.len());
        // Dropping the redundant half-spaces keeps the set.
        for i in 0..=20 {
            for j in 0..=20 {
                let v = Point::new(s, vec![-2.1 + 0.21 * i as f64, -2.1 + 0.21 * j as f64]).unwrap();
                let margin = p.halfspaces().iter().map(|h| h.value(v.canonical()).abs()).fold(f64::MAX, f64::min);
                if margin > 1e-9 {
                    prop_assert_eq!(p.contains(v.canonical(), 0.0), r.contains(v.canonical(), 0.0));
                }
            }
        }
    }

    #[test]
    fn reduction_keeps_the_element(w in words(2), angle in 0.1f64..3.0) {
        let s = Space::euclidean(2);
        let gens = [Isometry::rotation(s, angle), Isometry::translation(s, &[1.0, 0.5]).unwrap()];
        let r = w.reduced(&[false, false]);
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(r.reduced(&[false, false]), r.clone());
        prop_assert!(r.eval(s, &gens).iso_eq(&w.eval(s, &gens), 1e-9).unwrap());
        prop_assert!(w.concat(&w.inverse(&[false, false])).reduced(&[false, false]).is_empty());
    }

    #[test]
    fn involution_squares_cancel(w in words(2)) {
        let inv = [true, false];
        let r = w.reduced(&inv);
        for pair in r.letters().windows(2) {
            prop_assert!(pair[0] != pair[1].inverse(&inv));
        }
    }

    #[test]
    fn canonical_cycle_is_shift_invariant(w in words(3), shift in 0usize..12) {
        prop_assume!(!w.is_empty());
        let k = shift % w.len();
        let mut v = w.letters()[k..].to_vec();
        v.extend_from_slice(&w.letters()[..k]);
        let inv = [false; 3];
        let c = w.canonical_cycle(&inv);
        prop_assert_eq!(c.clone(), Word(v).canonical_cycle(&inv));
        prop_assert_eq!(c, w.inverse(&inv).canonical_cycle(&inv));
    }
}

#[test]
fn spherical_distance_is_bounded_by_pi() {
    let s = Space::spherical(2);
    let x = Point::new(s, vec![1.0, 0.0, 0.0]).unwrap();
    let y = Point::new(s, vec![-1.0, 0.0, 0.0]).unwrap();
    assert!((x.dist(&y).unwrap() - std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(s.kind, Kind::Spherical);
}
