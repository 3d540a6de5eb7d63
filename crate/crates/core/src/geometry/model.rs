//! Canonical-model arithmetic shared by points, isometries and half-spaces.

use nalgebra::{DMatrix, DVector};

use super::{Chart, Kind, Space};
use crate::error::{Error, Result};

/// Lorentz form with signature (+,...,+,-).
pub fn lorentz(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() - 1;
    a.rows(0, n).dot(&b.rows(0, n)) - a[n] * b[n]
}

/// The bilinear form whose isometries act on the canonical model.
/// For Euclidean space this is only used on direction vectors.
pub fn form(kind: Kind, dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(dim + 1, dim + 1);
    match kind {
        Kind::Hyperbolic => m[(dim, dim)] = -1.0,
        Kind::Euclidean => m[(dim, dim)] = 0.0,
        Kind::Spherical => {}
    }
    m
}

pub fn origin(dim: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim + 1);
    v[dim] = 1.0;
    v
}

/// Projects an arbitrary representative back onto the model.
pub fn normalize(kind: Kind, v: &DVector<f64>) -> Option<DVector<f64>> {
    let n = v.len() - 1;
    match kind {
        Kind::Euclidean => {
            if v[n].abs() < 1e-300 {
                return None;
            }
            let mut w = v / v[n];
            w[n] = 1.0;
            Some(w)
        }
        Kind::Spherical => {
            let r = v.norm();
            (r > 1e-300).then(|| v / r)
        }
        Kind::Hyperbolic => {
            let q = -lorentz(v, v);
            if q <= 0.0 || !q.is_finite() {
                return None;
            }
            let w = v / q.sqrt();
            Some(if w[n] < 0.0 { -w } else { w })
        }
    }
}

/// Distance between canonical points.
pub fn dist(kind: Kind, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() - 1;
    match kind {
        Kind::Euclidean => (a.rows(0, n) - b.rows(0, n)).norm(),
        Kind::Spherical => 2.0 * (a - b).norm().atan2((a + b).norm()),
        Kind::Hyperbolic => {
            let d = a - b;
            let q = lorentz(&d, &d).max(0.0);
            2.0 * (q.sqrt() / 2.0).asinh()
        }
    }
}

/// Point at constant-speed parameter `t` on the geodesic from `a` to `b`.
pub fn geodesic(kind: Kind, a: &DVector<f64>, b: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
    match kind {
        Kind::Euclidean => Ok(a * (1.0 - t) + b * t),
        Kind::Spherical => {
            if (a + b).norm() < 1e-12 {
                return Err(Error::Antipodal);
            }
            let th = dist(kind, a, b);
            let v = if th < 1e-12 {
                a * (1.0 - t) + b * t
            } else {
                (a * ((1.0 - t) * th).sin() + b * (t * th).sin()) / th.sin()
            };
            Ok(normalize(kind, &v).expect("nonzero combination"))
        }
        Kind::Hyperbolic => {
            let d = dist(kind, a, b);
            let v = if d < 1e-12 {
                a * (1.0 - t) + b * t
            } else {
                (a * ((1.0 - t) * d).sinh() + b * (t * d).sinh()) / d.sinh()
            };
            Ok(normalize(kind, &v).expect("timelike combination"))
        }
    }
}

/// Converts a projective parameter `s` on the chord `(1-s)a + s b` to the
/// constant-speed parameter of the same point.
pub fn projective_to_speed(kind: Kind, a: &DVector<f64>, b: &DVector<f64>, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    match kind {
        Kind::Euclidean => s,
        Kind::Spherical => {
            let th = dist(kind, a, b);
            if th < 1e-12 {
                return s;
            }
            (s * th.sin()).atan2((1.0 - s) + s * th.cos()) / th
        }
        Kind::Hyperbolic => {
            let d = dist(kind, a, b);
            if d < 1e-12 {
                return s;
            }
            (s * d.sinh() / ((1.0 - s) + s * d.cosh())).atanh() / d
        }
    }
}

/// Point at distance `r` from the origin in the unit direction `dir`.
pub fn exp_origin(kind: Kind, dir: &DVector<f64>, r: f64) -> DVector<f64> {
    let n = dir.len();
    let mut v = DVector::zeros(n + 1);
    let (s, c) = match kind {
        Kind::Euclidean => (r, 1.0),
        Kind::Spherical => (r.sin(), r.cos()),
        Kind::Hyperbolic => (r.sinh(), r.cosh()),
    };
    v.rows_mut(0, n).copy_from(&(dir * s));
    v[n] = c;
    v
}

/// Chart coordinates to the canonical model. Fails outside the chart domain.
pub fn to_canonical(space: &Space, x: &DVector<f64>) -> Result<DVector<f64>> {
    let n = space.dim;
    if x.len() != space.coord_len() {
        return Err(Error::InvalidPoint(format!(
            "expected {} coordinates for {}, got {}",
            space.coord_len(),
            space,
            x.len()
        )));
    }
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidPoint("non-finite coordinate".into()));
    }
    let bad = |msg: &str| Err(Error::InvalidPoint(msg.into()));
    match space.chart {
        Chart::Cartesian => {
            let mut v = DVector::zeros(n + 1);
            v.rows_mut(0, n).copy_from(x);
            v[n] = 1.0;
            Ok(v)
        }
        Chart::SphereEmbedded => {
            let r = x.norm();
            if (r - 1.0).abs() > 1e-8 {
                return bad("point is not on the unit sphere");
            }
            Ok(x / r)
        }
        Chart::Hyperboloid => {
            let q = lorentz(x, x);
            if x[n] <= 0.0 || (q + 1.0).abs() > 1e-8 * x[n] * x[n] {
                return bad("point is not on the upper hyperboloid sheet");
            }
            Ok(normalize(Kind::Hyperbolic, x).expect("timelike"))
        }
        Chart::Ball => {
            let r2 = x.norm_squared();
            if r2 >= 1.0 {
                return bad("point is not inside the unit ball");
            }
            let mut v = DVector::zeros(n + 1);
            v.rows_mut(0, n).copy_from(&(x * 2.0));
            v[n] = 1.0 + r2;
            Ok(v / (1.0 - r2))
        }
        Chart::Klein => {
            let r2 = x.norm_squared();
            if r2 >= 1.0 {
                return bad("point is not inside the unit ball");
            }
            let mut v = DVector::zeros(n + 1);
            v.rows_mut(0, n).copy_from(x);
            v[n] = 1.0;
            Ok(v / (1.0 - r2).sqrt())
        }
        Chart::HalfSpace => {
            let h = x[n - 1];
            if h <= 0.0 {
                return bad("point is not in the upper half-space");
            }
            let r2 = x.norm_squared();
            let mut v = DVector::zeros(n + 1);
            for i in 0..n - 1 {
                v[i] = x[i] / h;
            }
            v[n - 1] = (1.0 - r2) / (2.0 * h);
            v[n] = (1.0 + r2) / (2.0 * h);
            Ok(v)
        }
    }
}

/// Canonical model to chart coordinates.
pub fn from_canonical(space: &Space, v: &DVector<f64>) -> DVector<f64> {
    let n = space.dim;
    match space.chart {
        Chart::Cartesian => v.rows(0, n) / v[n],
        Chart::SphereEmbedded | Chart::Hyperboloid => v.clone(),
        Chart::Ball => v.rows(0, n) / (1.0 + v[n]),
        Chart::Klein => v.rows(0, n) / v[n],
        Chart::HalfSpace => {
            let h = 1.0 / (v[n] + v[n - 1]);
            let mut x = DVector::zeros(n);
            for i in 0..n - 1 {
                x[i] = v[i] * h;
            }
            x[n - 1] = h;
            x
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Inverse of [`projective_to_speed`].
    fn speed_to_projective(kind: Kind, a: &DVector<f64>, b: &DVector<f64>, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let (p, q) = match kind {
            Kind::Euclidean => return t,
            Kind::Spherical => {
                let th = dist(kind, a, b);
                if th < 1e-12 {
                    return t;
                }
                (((1.0 - t) * th).sin(), (t * th).sin())
            }
            Kind::Hyperbolic => {
                let d = dist(kind, a, b);
                if d < 1e-12 {
                    return t;
                }
                (((1.0 - t) * d).sinh(), (t * d).sinh())
            }
        };
        q / (p + q)
    }

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn ball_origin_is_half_space_unit_height() {
        let hs = Space::hyperbolic(2, Chart::HalfSpace);
        let p = from_canonical(&hs, &origin(2));
        assert!((p - v(&[0.0, 1.0])).norm() < 1e-15);
    }

    #[test]
    fn half_space_matches_ball_involution() {
        // b = -e_n + 2 (h + e_n) / |h + e_n|^2
        let hs = Space::hyperbolic(3, Chart::HalfSpace);
        let ball = Space::hyperbolic(3, Chart::Ball);
        let h = v(&[0.3, -1.2, 0.7]);
        let mut he = h.clone();
        he[2] += 1.0;
        let mut b = &he * (2.0 / he.norm_squared());
        b[2] -= 1.0;
        let via = from_canonical(&ball, &to_canonical(&hs, &h).unwrap());
        assert!((via - b).norm() < 1e-14);
    }

    #[test]
    fn projective_speed_roundtrip() {
        let a = exp_origin(Kind::Hyperbolic, &v(&[1.0, 0.0]), 0.4);
        let b = exp_origin(Kind::Hyperbolic, &v(&[0.0, 1.0]), 1.7);
        for &t in &[0.1, 0.37, 0.5, 0.93] {
            let s = speed_to_projective(Kind::Hyperbolic, &a, &b, t);
            let back = projective_to_speed(Kind::Hyperbolic, &a, &b, s);
            assert!((back - t).abs() < 1e-12);
            let chord = normalize(Kind::Hyperbolic, &(&a * (1.0 - s) + &b * s)).unwrap();
            let geo = geodesic(Kind::Hyperbolic, &a, &b, t).unwrap();
            assert!((chord - geo).norm() < 1e-12);
        }
    }

    #[test]
    fn antipodal_geodesic_is_an_error() {
        let a = v(&[0.0, 0.0, 1.0]);
        let b = v(&[0.0, 0.0, -1.0]);
        assert_eq!(geodesic(Kind::Spherical, &a, &b, 0.5), Err(Error::Antipodal));
    }
}
