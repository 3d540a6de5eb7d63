use std::ops::Mul;

use nalgebra::{DMatrix, DVector};

use super::model::{self, lorentz};
use super::{Chart, Kind, Point, Space};
use crate::error::{Error, Result};

/// An isometry acting linearly on the canonical model: affine matrices for
/// Euclidean space, O(n+1) for the sphere and O⁺(n,1) for hyperbolic space.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    space: Space,
    matrix: DMatrix<f64>,
}

impl Isometry {
    pub fn identity(space: Space) -> Isometry {
        Isometry { space, matrix: DMatrix::identity(space.dim + 1, space.dim + 1) }
    }

    /// Validates a canonical-model matrix.
    pub fn from_matrix(space: Space, matrix: DMatrix<f64>) -> Result<Isometry> {
        let n = space.dim;
        let bad = |msg: String| Err(Error::InvalidIsometry(msg));
        if matrix.nrows() != n + 1 || matrix.ncols() != n + 1 {
            return bad(format!("expected a {0}x{0} matrix", n + 1));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return bad("non-finite entry".into());
        }
        let scale = matrix.norm().max(1.0);
        match space.kind {
            Kind::Euclidean => {
                for j in 0..n {
                    if matrix[(n, j)].abs() > 1e-9 {
                        return bad("last row must be (0, ..., 0, 1)".into());
                    }
                }
                if (matrix[(n, n)] - 1.0).abs() > 1e-9 {
                    return bad("last row must be (0, ..., 0, 1)".into());
                }
                let a = matrix.view((0, 0), (n, n));
                let err = (a.transpose() * a - DMatrix::<f64>::identity(n, n)).norm();
                if err > 1e-8 {
                    return bad(format!("linear part is not orthogonal (defect {err:e})"));
                }
            }
            Kind::Spherical => {
                let err = (matrix.transpose() * &matrix - DMatrix::<f64>::identity(n + 1, n + 1)).norm();
                if err > 1e-8 {
                    return bad(format!("matrix is not orthogonal (defect {err:e})"));
                }
            }
            Kind::Hyperbolic => {
                let j = model::form(Kind::Hyperbolic, n);
                let err = (matrix.transpose() * &j * &matrix - &j).norm();
                if err > 1e-8 * scale * scale {
                    return bad(format!("matrix does not preserve the Lorentz form (defect {err:e})"));
                }
                if matrix[(n, n)] <= 0.0 {
                    return bad("matrix swaps the hyperboloid sheets".into());
                }
            }
        }
        Ok(Isometry { space, matrix })
    }

    /// A 2x2 real matrix acting on the upper half-plane: Möbius for positive
    /// determinant, anti-Möbius `z ↦ (a z̄ + b)/(c z̄ + d)` for negative.
    pub fn from_sl2(space: Space, m: [[f64; 2]; 2]) -> Result<Isometry> {
        if space.kind != Kind::Hyperbolic || space.dim != 2 {
            return Err(Error::InvalidIsometry("2x2 matrices act on the hyperbolic plane only".into()));
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(det.abs() > 1e-12) {
            return Err(Error::InvalidIsometry("singular 2x2 matrix".into()));
        }
        let s = det.abs().sqrt();
        let (a, b, c, d) = (m[0][0] / s, m[0][1] / s, m[1][0] / s, m[1][1] / s);
        let flip = det < 0.0;
        let hs = Space::hyperbolic(2, Chart::HalfSpace);
        let act = |x: f64, y: f64| -> (f64, f64) {
            let (x, y) = if flip { (x, -y) } else { (x, y) };
            // (a z + b)/(c z + d) with z = x + iy
            let (nr, ni) = (a * x + b, a * y);
            let (dr, di) = (c * x + d, c * y);
            let den = dr * dr + di * di;
            ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
        };
        let probes = [(0.0, 1.0), (0.5, 1.3), (-0.7, 0.6)];
        let mut x = DMatrix::zeros(3, 3);
        let mut y = DMatrix::zeros(3, 3);
        for (j, &(px, py)) in probes.iter().enumerate() {
            let (qx, qy) = act(px, py);
            if !(qy > 0.0) || !qx.is_finite() {
                return Err(Error::InvalidIsometry("matrix does not preserve the half-plane".into()));
            }
            let u = Point::new(hs, vec![px, py])?;
            let v = Point::new(hs, vec![qx, qy])?;
            x.set_column(j, u.canonical());
            y.set_column(j, v.canonical());
        }
        let inv = x.try_inverse().expect("probe points are independent");
        let l = polish_lorentz(y * inv);
        Isometry::from_matrix(Space { chart: space.chart, ..space }, l)
    }

    /// Translation of Euclidean space.
    pub fn translation(space: Space, v: &[f64]) -> Result<Isometry> {
        if space.kind != Kind::Euclidean || v.len() != space.dim {
            return Err(Error::InvalidIsometry("translation needs a Euclidean vector".into()));
        }
        let mut m = DMatrix::identity(space.dim + 1, space.dim + 1);
        for (i, x) in v.iter().enumerate() {
            m[(i, space.dim)] = *x;
        }
        Ok(Isometry { space, matrix: m })
    }

    /// Rotation by `angle` in the plane of the first two coordinates,
    /// fixing the canonical origin.
    pub fn rotation(space: Space, angle: f64) -> Isometry {
        let mut m = DMatrix::identity(space.dim + 1, space.dim + 1);
        let (s, c) = angle.sin_cos();
        m[(0, 0)] = c;
        m[(0, 1)] = -s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
        Isometry { space, matrix: m }
    }

    /// Reflection in the hyperplane `w·v = 0` of a normalized covector.
    pub(crate) fn reflection_covector(space: Space, w: &DVector<f64>) -> Isometry {
        let n = space.dim;
        let mut nu = w.clone();
        match space.kind {
            Kind::Euclidean => nu[n] = 0.0,
            Kind::Spherical => {}
            Kind::Hyperbolic => nu[n] = -nu[n],
        }
        let m = DMatrix::identity(n + 1, n + 1) - (&nu * w.transpose()) * 2.0;
        Isometry { space, matrix: m }
    }

    /// Reflection swapping the canonical origin and `c`; identity when they coincide.
    pub(crate) fn swap_with_origin(space: Space, c: &DVector<f64>) -> Isometry {
        let n = space.dim;
        let o = model::origin(n);
        let w = match space.kind {
            Kind::Euclidean => {
                let x = c.rows(0, n).into_owned();
                let r = x.norm();
                if r < 1e-15 {
                    return Isometry::identity(space);
                }
                let mut w = DVector::zeros(n + 1);
                w.rows_mut(0, n).copy_from(&(x / r));
                w[n] = -r / 2.0;
                w
            }
            Kind::Spherical => {
                let d = c - &o;
                let r = d.norm();
                if r < 1e-15 {
                    return Isometry::identity(space);
                }
                d / r
            }
            Kind::Hyperbolic => {
                let d = c - &o;
                let q = lorentz(&d, &d);
                if q < 1e-30 {
                    return Isometry::identity(space);
                }
                let mut w = d / q.sqrt();
                w[n] = -w[n];
                w
            }
        };
        Isometry::reflection_covector(space, &w)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        debug_assert!(self.space.same_geometry(&other.space));
        Isometry { space: self.space, matrix: &self.matrix * &other.matrix }
    }

    pub fn inverse(&self) -> Isometry {
        let n = self.space.dim;
        let m = &self.matrix;
        let inv = match self.space.kind {
            Kind::Spherical => m.transpose(),
            Kind::Hyperbolic => {
                let mut t = m.transpose();
                for i in 0..n {
                    t[(i, n)] = -t[(i, n)];
                    t[(n, i)] = -t[(n, i)];
                }
                t
            }
            Kind::Euclidean => {
                let at = m.view((0, 0), (n, n)).transpose();
                let b = m.view((0, n), (n, 1)).into_owned();
                let mut t = DMatrix::identity(n + 1, n + 1);
                t.view_mut((0, 0), (n, n)).copy_from(&at);
                t.view_mut((0, n), (n, 1)).copy_from(&(-(&at * b)));
                t
            }
        };
        Isometry { space: self.space, matrix: inv }
    }

    pub fn pow(&self, k: u32) -> Isometry {
        let mut r = Isometry::identity(self.space);
        for _ in 0..k {
            r = r.compose(self);
        }
        r
    }

    /// Image of a canonical vector, renormalized onto the model.
    pub fn apply_canonical(&self, v: &DVector<f64>) -> DVector<f64> {
        let w = &self.matrix * v;
        model::normalize(self.space.kind, &w).unwrap_or(w)
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.space.check_same(&x.space())?;
        Point::from_canonical(x.space(), &self.apply_canonical(x.canonical()))
    }

    /// Largest displacement between the two actions over the probe set.
    pub fn probe_distance(&self, other: &Isometry) -> f64 {
        probe_points(self.space.kind, self.space.dim)
            .iter()
            .map(|p| {
                model::dist(self.space.kind, &self.apply_canonical(p), &other.apply_canonical(p))
            })
            .fold(0.0, f64::max)
    }

    pub fn iso_eq(&self, other: &Isometry, tol: f64) -> Result<bool> {
        self.space.check_same(&other.space)?;
        Ok(self.probe_distance(other) <= tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.probe_distance(&Isometry::identity(self.space)) <= tol
    }
}

impl Mul for &Isometry {
    type Output = Isometry;
    fn mul(self, rhs: &Isometry) -> Isometry {
        self.compose(rhs)
    }
}

/// n+2 points near the canonical origin, n+1 of them affinely independent.
pub(crate) fn probe_points(kind: Kind, dim: usize) -> Vec<DVector<f64>> {
    let mut out = vec![model::origin(dim)];
    for i in 0..dim {
        let mut e = DVector::zeros(dim);
        e[i] = 1.0;
        out.push(model::exp_origin(kind, &e, 0.5));
    }
    let diag = DVector::from_element(dim, 1.0 / (dim as f64).sqrt());
    out.push(model::exp_origin(kind, &diag, 0.3));
    out
}

/// Gram–Schmidt in the Lorentz form to remove round-off from a near-Lorentz matrix.
fn polish_lorentz(m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows() - 1;
    let mut cols: Vec<DVector<f64>> = (0..=n).map(|j| m.column(j).into_owned()).collect();
    let t = cols[n].clone();
    cols[n] = &t / (-lorentz(&t, &t)).sqrt();
    for j in 0..n {
        let mut v = cols[j].clone();
        v += &cols[n] * lorentz(&v, &cols[n]);
        for c in cols.iter().take(j) {
            v -= c * lorentz(&v, c);
        }
        cols[j] = &v / lorentz(&v, &v).sqrt();
    }
    let mut out = DMatrix::zeros(n + 1, n + 1);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}
