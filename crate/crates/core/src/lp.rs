//! Linear programs over affine charts: margin maximization, implicit
//! equalities and nearest points. The simplex itself is `microlp`; the chart
//! ball `|y| ≤ r` is imposed by cutting planes.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// The affine inequality `a·y ≤ b` with `|a| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub a: DVector<f64>,
    pub b: f64,
}

const MAX_CUTS: usize = 80;

/// Relative overshoot of the ball accepted from the cutting-plane loop; the
/// ball is a soft bound, honoured up to this slack.
const BALL_SLACK: f64 = 1e-7;

/// Unit directions seeding the polyhedral outer approximation of the ball.
fn seed_directions(dim: usize) -> Vec<DVector<f64>> {
    if dim == 0 {
        return vec![];
    }
    if dim > 4 {
        let mut out = Vec::new();
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let mut e = DVector::zeros(dim);
                e[i] = s;
                out.push(e);
            }
        }
        return out;
    }
    let mut out = Vec::new();
    let total = 3usize.pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let mut v = DVector::zeros(dim);
        for i in 0..dim {
            v[i] = (c % 3) as f64 - 1.0;
            c /= 3;
        }
        let n = v.norm();
        if n > 0.0 {
            out.push(v / n);
        }
    }
    out
}

/// Maximizes `c·x` subject to `A x ≤ b` over free variables; `None` if infeasible.
fn solve(c: &[f64], rows: &[(Vec<f64>, f64)], upper: &[f64]) -> Result<Option<(Vec<f64>, f64)>> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = c
        .iter()
        .zip(upper)
        .map(|(&ci, &ub)| p.add_var(ci, (f64::NEG_INFINITY, ub)))
        .collect();
    for (a, b) in rows {
        let expr: Vec<_> = vars.iter().zip(a).filter(|(_, &x)| x != 0.0).map(|(&v, &x)| (v, x)).collect();
        if expr.is_empty() {
            if *b < 0.0 {
                return Ok(None);
            }
            continue;
        }
        p.add_constraint(expr, ComparisonOp::Le, *b);
    }
    match p.solve() {
        Ok(outcome) => {
            let sol = outcome
                .into_solution()
                .map_err(|_| Error::Lp("solver interrupted".into()))?;
            let x = vars.iter().map(|&v| sol.var_value(v)).collect();
            Ok(Some((x, sol.objective())))
        }
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(Error::Lp(e.to_string())),
    }
}

/// Largest `s` with `a_i·y + s ≤ b_i` for all rows and `|y| + s ≤ radius`.
/// Returns the maximizer; `s < 0` measures how far the set is from nonempty.
pub fn chebyshev(rows: &[Row], dim: usize, radius: f64) -> Result<(DVector<f64>, f64)> {
    if dim == 0 {
        let s = rows.iter().map(|r| r.b).fold(radius, f64::min);
        return Ok((DVector::zeros(0), s));
    }
    let mut c = vec![0.0; dim + 1];
    c[dim] = 1.0;
    let mut lp_rows: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .map(|r| {
            let mut a: Vec<f64> = r.a.iter().copied().collect();
            a.push(1.0);
            (a, r.b)
        })
        .collect();
    let cut = |u: &DVector<f64>| {
        let mut a: Vec<f64> = u.iter().copied().collect();
        a.push(1.0);
        (a, radius)
    };
    lp_rows.extend(seed_directions(dim).iter().map(cut));
    let mut upper = vec![f64::INFINITY; dim];
    upper.push(radius);
    for iter in 0.. {
        let (x, _) = solve(&c, &lp_rows, &upper)?
            .ok_or_else(|| Error::Lp("margin program reported infeasible".into()))?;
        let y = DVector::from_column_slice(&x[..dim]);
        let s = x[dim];
        let ny = y.norm();
        if ny + s <= radius + BALL_SLACK * (1.0 + radius) || iter >= MAX_CUTS {
            return Ok((y, s.min(radius - ny + BALL_SLACK * (1.0 + radius))));
        }
        lp_rows.push(cut(&(y / ny)));
    }
    unreachable!()
}

/// Maximizes `c·y` over the rows intersected with the ball `|y| ≤ radius`.
pub fn maximize(c: &DVector<f64>, rows: &[Row], radius: f64) -> Result<Option<(DVector<f64>, f64)>> {
    let dim = c.len();
    if dim == 0 {
        return Ok(rows.iter().all(|r| r.b >= 0.0).then(|| (DVector::zeros(0), 0.0)));
    }
    let mut lp_rows: Vec<(Vec<f64>, f64)> =
        rows.iter().map(|r| (r.a.iter().copied().collect(), r.b)).collect();
    let cut = |u: &DVector<f64>| (u.iter().copied().collect::<Vec<f64>>(), radius);
    lp_rows.extend(seed_directions(dim).iter().map(cut));
    let cs: Vec<f64> = c.iter().copied().collect();
    let upper = vec![f64::INFINITY; dim];
    for iter in 0.. {
        let Some((x, _)) = solve(&cs, &lp_rows, &upper)? else {
            return Ok(None);
        };
        let y = DVector::from_vec(x);
        let ny = y.norm();
        if ny <= radius + BALL_SLACK * (1.0 + radius) || iter >= MAX_CUTS {
            let y = if ny > radius { y * (radius / ny) } else { y };
            let v = c.dot(&y);
            return Ok(Some((y, v)));
        }
        lp_rows.push(cut(&(y / ny)));
    }
    unreachable!()
}

/// An affine subspace `k0 + B y` of the chart with `k0 ⟂ range(B)`.
#[derive(Clone, Debug)]
pub struct Affine {
    pub k0: DVector<f64>,
    pub basis: DMatrix<f64>,
    /// Orthonormal normals of the subspace with offsets.
    pub normals: Vec<Row>,
    /// Radius of the chart ball restricted to the subspace.
    pub radius: f64,
}

impl Affine {
    pub fn full(dim: usize, radius: f64) -> Affine {
        Affine { k0: DVector::zeros(dim), basis: DMatrix::identity(dim, dim), normals: vec![], radius }
    }

    /// The solution set of `a·k = b` over the given rows; `None` if it misses the ball.
    pub fn from_equalities(eqs: &[Row], dim: usize, radius: f64) -> Option<Affine> {
        if eqs.is_empty() {
            return Some(Affine::full(dim, radius));
        }
        let mut a = DMatrix::zeros(eqs.len(), dim);
        let mut b = DVector::zeros(eqs.len());
        for (i, r) in eqs.iter().enumerate() {
            a.set_row(i, &r.a.transpose());
            b[i] = r.b;
        }
        let eig = SymmetricEigen::new(a.transpose() * &a);
        let atb = a.transpose() * b;
        let mut k0 = DVector::zeros(dim);
        let mut normals = Vec::new();
        let mut null = Vec::new();
        for i in 0..dim {
            let v = eig.eigenvectors.column(i).into_owned();
            let lam = eig.eigenvalues[i];
            if lam > 1e-12 {
                k0 += &v * (v.dot(&atb) / lam);
                normals.push(v);
            } else {
                null.push(v);
            }
        }
        let r2 = radius * radius - k0.norm_squared();
        if r2 < 0.0 {
            return None;
        }
        let mut basis = DMatrix::zeros(dim, null.len());
        for (j, v) in null.iter().enumerate() {
            basis.set_column(j, v);
        }
        let normals = normals
            .into_iter()
            .map(|v| {
                let b = v.dot(&k0);
                Row { a: v, b }
            })
            .collect();
        Some(Affine { k0, basis, normals, radius: r2.sqrt() })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn lift(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.k0 + &self.basis * y
    }

    /// Rows in subspace coordinates; `None` if some row excludes the whole subspace.
    pub fn restrict(&self, rows: &[Row], tol: f64) -> Option<Vec<Row>> {
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let a = self.basis.transpose() * &r.a;
            let b = r.b - r.a.dot(&self.k0);
            let na = a.norm();
            if na < 1e-9 {
                if b < -tol {
                    return None;
                }
                continue;
            }
            out.push(Row { a: a / na, b: b / na });
        }
        Some(out)
    }
}

/// Affine hull data of a polyhedral set in the chart ball.
#[derive(Clone, Debug)]
pub struct Hull {
    pub dim: usize,
    /// A relative-interior point.
    pub point: DVector<f64>,
    pub affine: Affine,
}

/// Dimension, carrier and relative-interior point of `{a_i·y ≤ b_i} ∩ ball`.
/// `None` when the set is empty up to `tol`.
pub fn affine_hull(rows: &[Row], dim: usize, radius: f64, tol: f64) -> Result<Option<Hull>> {
    let (y, s) = chebyshev(rows, dim, radius)?;
    if s < -tol {
        return Ok(None);
    }
    if s > tol {
        return Ok(Some(Hull { dim, point: y, affine: Affine::full(dim, radius) }));
    }
    let relax = (-s).max(0.0) + 0.01 * tol;
    let relaxed: Vec<Row> = rows.iter().map(|r| Row { a: r.a.clone(), b: r.b + relax }).collect();
    let mut eqs = Vec::new();
    for r in rows {
        match maximize(&(-&r.a), &relaxed, radius + relax)? {
            None => return Ok(None),
            Some((_, v)) => {
                if r.b + v <= tol {
                    eqs.push(r.clone());
                }
            }
        }
    }
    let Some(aff) = Affine::from_equalities(&eqs, dim, radius) else {
        return Ok(None);
    };
    let Some(sub) = aff.restrict(rows, tol) else {
        return Ok(None);
    };
    let (z, margin) = chebyshev(&sub, aff.dim(), aff.radius)?;
    if margin < -tol {
        return Ok(None);
    }
    Ok(Some(Hull { dim: aff.dim(), point: aff.lift(&z), affine: aff }))
}

/// Nearest point to the chart origin in `{a_i·y ≤ b_i}`, by enumerating
/// active sets of size at most `dim`. `None` when no candidate is feasible.
pub fn min_norm_point(rows: &[Row], dim: usize, tol: f64) -> Option<DVector<f64>> {
    let feasible = |k: &DVector<f64>| rows.iter().all(|r| r.a.dot(k) <= r.b + tol);
    let origin = DVector::zeros(dim);
    if feasible(&origin) {
        return Some(origin);
    }
    let mut best: Option<DVector<f64>> = None;
    let m = rows.len();
    let mut subset = Vec::new();
    fn rec(
        start: usize,
        m: usize,
        left: usize,
        subset: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if !subset.is_empty() {
            visit(subset);
        }
        if left == 0 {
            return;
        }
        for i in start..m {
            subset.push(i);
            rec(i + 1, m, left - 1, subset, visit);
            subset.pop();
        }
    }
    let mut visit = |s: &[usize]| {
        let k = s.len();
        let mut a = DMatrix::zeros(k, dim);
        let mut b = DVector::zeros(k);
        for (i, &j) in s.iter().enumerate() {
            a.set_row(i, &rows[j].a.transpose());
            b[i] = rows[j].b;
        }
        let g = &a * a.transpose();
        let Some(ch) = g.cholesky() else { return };
        if ch.l().diagonal().iter().any(|d| d.abs() < 1e-7) {
            return;
        }
        let lam = ch.solve(&b);
        let x = a.transpose() * lam;
        if feasible(&x) && best.as_ref().is_none_or(|bst| x.norm() < bst.norm()) {
            best = Some(x);
        }
    };
    rec(0, m, dim.min(m), &mut subset, &mut visit);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(a: &[f64], b: f64) -> Row {
        let a = DVector::from_column_slice(a);
        let n = a.norm();
        Row { a: a / n, b: b / n }
    }

    fn square() -> Vec<Row> {
        vec![row(&[1.0, 0.0], 1.0), row(&[-1.0, 0.0], 0.0), row(&[0.0, 1.0], 1.0), row(&[0.0, -1.0], 0.0)]
    }

    #[test]
    fn chebyshev_center_of_square() {
        let (y, s) = chebyshev(&square(), 2, 10.0).unwrap();
        assert!((s - 0.5).abs() < 1e-9);
        assert!((y - DVector::from_vec(vec![0.5, 0.5])).norm() < 1e-9);
    }

    #[test]
    fn ball_limits_margin() {
        let rows = vec![row(&[1.0, 0.0], 5.0)];
        let (y, s) = chebyshev(&rows, 2, 1.0).unwrap();
        assert!(y.norm() + s <= 1.0 + 1e-9);
        assert!(s > 0.99);
    }

    #[test]
    fn hull_of_segment() {
        let rows = vec![row(&[1.0, 0.0], 0.0), row(&[-1.0, 0.0], 0.0), row(&[0.0, 1.0], 1.0), row(&[0.0, -1.0], 0.0)];
        let h = affine_hull(&rows, 2, 10.0, 1e-7).unwrap().unwrap();
        assert_eq!(h.dim, 1);
        assert!(h.point[0].abs() < 1e-9);
        assert!(h.point[1] > 0.1 && h.point[1] < 0.9);
    }

    #[test]
    fn hull_of_vertex_and_empty() {
        let rows = vec![row(&[1.0, 0.0], 0.0), row(&[0.0, 1.0], 0.0), row(&[-1.0, -1.0], 0.0)];
        let h = affine_hull(&rows, 2, 1.0, 1e-7).unwrap().unwrap();
        assert_eq!(h.dim, 0);
        assert!(h.point.norm() < 1e-9);
        let empty = vec![row(&[1.0, 0.0], -1.0), row(&[-1.0, 0.0], -1.0)];
        assert!(affine_hull(&empty, 2, 5.0, 1e-7).unwrap().is_none());
    }

    #[test]
    fn min_norm_matches_projection() {
        let rows = vec![row(&[-1.0, -1.0], -2.0)];
        let k = min_norm_point(&rows, 2, 1e-12).unwrap();
        assert!((k - DVector::from_vec(vec![1.0, 1.0])).norm() < 1e-12);
        let corner = vec![row(&[-1.0, 0.0], -1.0), row(&[0.0, -1.0], -2.0)];
        let k = min_norm_point(&corner, 2, 1e-12).unwrap();
        assert!((k - DVector::from_vec(vec![1.0, 2.0])).norm() < 1e-12);
    }
}
