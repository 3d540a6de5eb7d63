//! SVG pictures of explored planar tilings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::{model, Chart, Frame, Space};
use crate::presentation::Presentation;
use crate::tessellation::Exploration;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/// Samples per drawn geodesic segment.
const SAMPLES: usize = 24;

/// Chart coordinates when the chart is planar, window-frame coordinates otherwise.
fn plane(space: Space, frame: &Frame, v: &DVector<f64>) -> (f64, f64) {
    match space.chart {
        Chart::Cartesian | Chart::HalfSpace | Chart::Ball | Chart::Klein => {
            let c = model::from_canonical(&space, v);
            (c[0], c[1])
        }
        _ => {
            let k = frame.local(v).unwrap_or_else(|| DVector::zeros(2));
            (k[0], k[1])
        }
    }
}

/// Parameter interval of the line `k0 + s d` inside `a·k ≤ b` rows and the ball.
fn clip(k0: &DVector<f64>, d: &DVector<f64>, rows: &[(DVector<f64>, f64)], radius: f64) -> Option<(f64, f64)> {
    let disc = radius * radius - k0.norm_squared();
    if disc <= 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (-disc.sqrt(), disc.sqrt());
    for (a, b) in rows {
        let ad = a.dot(d);
        let slack = b - a.dot(k0);
        if ad.abs() < 1e-14 {
            if slack < -1e-12 {
                return None;
            }
        } else if ad > 0.0 {
            hi = hi.min(slack / ad);
        } else {
            lo = lo.max(slack / ad);
        }
    }
    (hi - lo > 1e-9).then_some((lo, hi))
}

/// Tile boundaries inside the window as polylines, coloured by the
/// generator pairing the side, with the window circle in grey.
pub fn svg(ex: &Exploration, pres: Option<&Presentation>) -> Result<String> {
    let space = ex.space();
    if space.dim != 2 {
        return Err(Error::Unsupported("drawing needs a 2-dimensional space".into()));
    }
    let frame = ex.window_frame()?;
    let r = frame.radius();

    let facet_color = |e: usize| -> &'static str {
        pres.and_then(|p| p.pairings.iter().find(|s| s.facet == e))
            .map_or("#000000", |s| PALETTE[s.letter.gen % PALETTE.len()])
    };

    let mut seen = BTreeSet::new();
    let mut lines: Vec<(Vec<(f64, f64)>, &str)> = Vec::new();
    for tile in &ex.tiles {
        let mut rows: Vec<(DVector<f64>, f64)> = Vec::new();
        let mut local = Vec::new();
        for h in tile.halfspaces() {
            let wl = frame.local_covector(h.covector());
            let a = DVector::from_vec(vec![wl[0], wl[1]]);
            let na = a.norm();
            if na < 1e-12 {
                local.push(None);
                continue;
            }
            let row = (a / na, -wl[2] / na);
            rows.push(row.clone());
            local.push(Some(row));
        }
        for (e, row) in local.iter().enumerate() {
            let Some((a, b)) = row else { continue };
            let k0 = a * *b;
            let d = DVector::from_vec(vec![-a[1], a[0]]);
            let others: Vec<_> = rows.iter().filter(|(x, y)| (x - a).norm() + (y - b).abs() > 1e-12).cloned().collect();
            let Some((lo, hi)) = clip(&k0, &d, &others, r) else { continue };
            let ends = [&k0 + &d * lo, &k0 + &d * hi];
            let key = {
                let q = |k: &DVector<f64>| ((k[0] * 1e6).round() as i64, (k[1] * 1e6).round() as i64);
                let (p, q2) = (q(&ends[0]), q(&ends[1]));
                (p.min(q2), p.max(q2))
            };
            if !seen.insert(key) {
                continue;
            }
            let pts = (0..=SAMPLES)
                .map(|i| {
                    let s = lo + (hi - lo) * i as f64 / SAMPLES as f64;
                    plane(space, &frame, &frame.canonical(&(&k0 + &d * s)))
                })
                .collect();
            lines.push((pts, facet_color(e)));
        }
    }

    let circle: Vec<(f64, f64)> = (0..=128)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / 128.0;
            plane(space, &frame, &frame.canonical(&DVector::from_vec(vec![r * t.cos(), r * t.sin()])))
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &circle {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0);
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let stroke = 0.004 * w.max(h);

    let path = |pts: &[(f64, f64)]| -> String {
        pts.iter().map(|(x, y)| format!("{:.6},{:.6}", x, -y)).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        x0 - pad,
        y0 - pad,
        w,
        h
    );
    let _ = writeln!(
        out,
        "<polyline fill=\"none\" stroke=\"#999999\" stroke-width=\"{stroke:.6}\" points=\"{}\"/>",
        path(&circle)
    );
    for (pts, color) in &lines {
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke:.6}\" points=\"{}\"/>",
            path(pts)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::Point;
    use crate::tessellation::{explore, Region, Window, DEFAULT_TILE_CAP};

    fn draw(f: &fixtures::Fixture, w: Window, with_pres: bool) -> String {
        let ex = explore(&f.polyhedron, &f.isometries(), Region::Ball(w), f.polyhedron.tolerance(), DEFAULT_TILE_CAP).unwrap();
        let pres = with_pres.then(|| {
            let full = explore(&f.polyhedron, &f.isometries(), Region::Ball(f.window()), f.polyhedron.tolerance(), DEFAULT_TILE_CAP)
                .unwrap();
            let c = crate::tessellation::classify_cells(&full, 0).unwrap();
            let p = crate::presentation::side_pairings(&full, &c, &[]).unwrap();
            crate::presentation::build_presentation(&full, &c, p).unwrap()
        });
        svg(&ex, pres.as_ref()).unwrap()
    }

    fn strokes(s: &str) -> Vec<String> {
        s.lines()
            .skip(2)
            .filter_map(|l| l.split("stroke=\"").nth(1).map(|x| x[..7].to_string()))
            .collect()
    }

    #[test]
    fn hexagonal_window_has_six_walls_in_two_colours() {
        let f = fixtures::dihedral(3);
        let s = draw(&f, Window::new(Point::origin(f.space()), 1.0).unwrap(), true);
        let st = strokes(&s);
        assert_eq!(st.len(), 6);
        assert_eq!(st.iter().collect::<BTreeSet<_>>().len(), 2);
        assert_eq!(s, draw(&f, Window::new(Point::origin(f.space()), 1.0).unwrap(), true));
    }

    #[test]
    fn window_inside_p_draws_no_walls() {
        let f = fixtures::dihedral(3);
        let s = draw(&f, Window::new(f.basepoint.clone(), 0.01).unwrap(), false);
        assert_eq!(strokes(&s).len(), 0);
    }

    #[test]
    fn lattice_grid_patch() {
        let f = fixtures::z2();
        let s = draw(&f, Window::new(Point::origin(f.space()), 1.2).unwrap(), true);
        // Four grid lines x, y = ±1/2 cut into three pieces by the others, and
        // x, y = ±3/2 lie outside.
        assert_eq!(strokes(&s).len(), 12);
    }

    #[test]
    fn hyperbolic_drawing_is_finite() {
        let f = fixtures::psl2z();
        let s = draw(&f, f.window(), true);
        assert!(!s.contains("NaN") && !s.contains("inf"));
        assert!(strokes(&s).len() > 6);
    }
}
