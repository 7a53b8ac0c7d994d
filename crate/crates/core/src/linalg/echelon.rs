//! Row reduction, rank, inversion, kernels and incremental span tracking.
//!
//! The exact backend uses Gauss-Jordan elimination with literal zero tests.
//! The numeric backend pivots on the largest magnitude and delegates rank and
//! kernel decisions to an SVD with `rank_threshold` as the singular-value
//! cutoff.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::mat::Mat;
use super::vector::Vector;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ToleranceConfig};

/// Reduced row echelon form with zero rows dropped.
#[derive(Clone, Debug)]
pub struct Rref<S> {
    pub rows: Vec<Vec<S>>,
    pub pivots: Vec<usize>,
}

pub fn rref<S: Scalar>(m: &Mat<S>) -> Rref<S> {
    let cols = m.cols();
    let mut rows: Vec<Vec<S>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let scale = if S::EXACT { 1.0 } else { m.max_abs() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let pick = if S::EXACT {
            (r..rows.len()).find(|&i| !rows[i][c].is_zero())
        } else {
            let best =
                (r..rows.len()).max_by(|&a, &b| rows[a][c].magnitude().total_cmp(&rows[b][c].magnitude()));
            best.filter(|&i| !rows[i][c].is_negligible(scale))
        };
        let Some(p) = pick else {
            if !S::EXACT {
                for row in rows.iter_mut().skip(r) {
                    row[c] = S::zero();
                }
            }
            continue;
        };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        rows[r][c] = S::one();
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() && S::EXACT {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                x.sub_assign_mul(&f, y);
            }
            row[c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots }
}

fn svd_of<S: Scalar>(m: &Mat<S>) -> (Vec<f64>, DMatrix<Complex64>) {
    // pad to at least square so that V is complete
    let rows = m.rows().max(m.cols());
    let mut d = DMatrix::<Complex64>::zeros(rows, m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            d[(i, j)] = m[(i, j)].to_c64();
        }
    }
    let svd = d.svd(false, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    (sv, svd.v_t.expect("requested V"))
}

fn svd_cutoff(sv: &[f64]) -> f64 {
    let top = sv.iter().copied().fold(0.0, f64::max);
    ToleranceConfig::current().rank_threshold * top.max(1.0)
}

pub fn rank<S: Scalar>(m: &Mat<S>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    if S::EXACT {
        rref(m).pivots.len()
    } else {
        let (sv, _) = svd_of(m);
        let cut = svd_cutoff(&sv);
        sv.iter().filter(|&&s| s > cut).count()
    }
}

/// Basis of {x : m·x = 0}. Exact: one vector per free column of the RREF.
/// Numeric: right singular vectors below the cutoff.
pub fn kernel_vectors<S: Scalar>(m: &Mat<S>) -> Vec<Vector<S>> {
    let cols = m.cols();
    if m.rows() == 0 {
        return (0..cols).map(|j| Vector::unit(cols, j)).collect();
    }
    if S::EXACT {
        let r = rref(m);
        let mut out = Vec::new();
        let mut is_pivot = vec![false; cols];
        for &p in &r.pivots {
            is_pivot[p] = true;
        }
        for f in (0..cols).filter(|&f| !is_pivot[f]) {
            let mut v = Vector::zeros(cols);
            v[f] = S::one();
            for (row, &p) in r.rows.iter().zip(&r.pivots) {
                v[p] = -row[f].clone();
            }
            out.push(v);
        }
        out
    } else {
        let (sv, v_t) = svd_of(m);
        let cut = svd_cutoff(&sv);
        (0..cols)
            .filter(|&k| k >= sv.len() || sv[k] <= cut)
            .map(|k| Vector((0..cols).map(|j| S::from_c64(v_t[(k, j)].conj())).collect()))
            .collect()
    }
}

pub fn inverse<S: Scalar>(m: &Mat<S>) -> Result<Mat<S>> {
    if !m.is_square() {
        return Err(Error::Precondition("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Mat::zero(0));
    }
    if !S::EXACT {
        let d = m.to_dmatrix();
        let sv = d.clone().svd(false, false).singular_values;
        let top = sv.iter().copied().fold(0.0, f64::max);
        let low = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if low <= ToleranceConfig::current().rank_threshold * top.max(1.0) {
            return Err(Error::Singular);
        }
        return d
            .try_inverse()
            .map(|x| Mat::from_dmatrix(&x))
            .ok_or(Error::Singular);
    }
    let aug = Mat::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            S::one()
        } else {
            S::zero()
        }
    });
    let r = rref(&aug);
    if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(Mat::from_fn(n, n, |i, j| r.rows[i][n + j].clone()))
}

/// Some x with m·x = b, if one exists.
pub fn solve<S: Scalar>(m: &Mat<S>, b: &Vector<S>) -> Option<Vector<S>> {
    assert_eq!(m.rows(), b.dim());
    let cols = m.cols();
    if S::EXACT {
        let aug = Mat::from_fn(m.rows(), cols + 1, |i, j| {
            if j < cols {
                m[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let r = rref(&aug);
        if r.pivots.last() == Some(&cols) {
            return None;
        }
        let mut x = Vector::zeros(cols);
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            x[p] = row[cols].clone();
        }
        Some(x)
    } else {
        if cols == 0 {
            return b.is_zero().then(|| Vector::zeros(0));
        }
        let tol = ToleranceConfig::current();
        let d = m.to_dmatrix();
        let rhs = nalgebra::DVector::from_iterator(b.dim(), b.0.iter().map(|x| x.to_c64()));
        let svd = d.clone().svd(true, true);
        let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let x = svd.solve(&rhs, tol.rank_threshold * top.max(1.0)).ok()?;
        let resid = (&d * &x - &rhs).norm();
        let scale = top * x.norm() + rhs.norm();
        if resid <= tol.rank_threshold * scale.max(1.0) {
            Some(Vector(x.iter().map(|z| S::from_c64(*z)).collect()))
        } else {
            None
        }
    }
}

/// Incrementally tracks the span of inserted vectors and answers membership.
///
/// Exact: rows in echelon form with unit pivots. Numeric: an orthonormal set
/// maintained by twice-iterated modified Gram-Schmidt.
#[derive(Clone, Debug)]
pub struct SpanBuilder<S> {
    dim: usize,
    rows: Vec<Vector<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> SpanBuilder<S> {
    pub fn new(dim: usize) -> Self {
        SpanBuilder {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Echelon rows (exact) or orthonormal rows (numeric).
    pub fn vectors(&self) -> &[Vector<S>] {
        &self.rows
    }

    fn residual(&self, v: &Vector<S>) -> Vector<S> {
        let mut r = v.clone();
        if S::EXACT {
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !r[p].is_zero() {
                    let f = -r[p].clone();
                    r.axpy(&f, row);
                }
            }
        } else {
            for _ in 0..2 {
                for q in &self.rows {
                    let c = -r.inner(q);
                    r.axpy(&c, q);
                }
            }
        }
        r
    }

    fn negligible(res: &Vector<S>, scale: f64) -> bool {
        if S::EXACT {
            res.0.iter().all(|x| x.is_zero())
        } else {
            let t = ToleranceConfig::current();
            res.norm() <= t.rank_threshold * scale + t.eps_abs
        }
    }

    pub fn contains(&self, v: &Vector<S>) -> bool {
        Self::negligible(&self.residual(v), v.norm())
    }

    pub fn insert(&mut self, v: &Vector<S>) -> bool {
        self.insert_scaled(v, v.norm())
    }

    /// Inserts `v` if it is independent; `scale` is the magnitude against
    /// which the numeric residual is judged.
    pub fn insert_scaled(&mut self, v: &Vector<S>, scale: f64) -> bool {
        assert_eq!(v.dim(), self.dim, "span builder dimension mismatch");
        if self.is_full() {
            return false;
        }
        let r = self.residual(v);
        if Self::negligible(&r, scale) {
            return false;
        }
        if S::EXACT {
            let p = r.first_nonzero().expect("nonzero residual");
            let inv = S::one() / r[p].clone();
            let row = r.scale(&inv);
            let at = self.pivots.partition_point(|&q| q < p);
            self.pivots.insert(at, p);
            self.rows.insert(at, row);
        } else {
            let nrm = r.norm();
            self.rows
                .push(r.scale(&S::from_c64(Complex64::new(1.0 / nrm, 0.0))));
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cplx, GaussRat};

    type Q = GaussRat;

    #[test]
    fn rref_of_known_matrix() {
        let m = Mat::<Q>::from_i64(&[&[2, 4, 6], &[1, 2, 4], &[0, 0, 1]]);
        let r = rref(&m);
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(r.rows[0], vec![Q::one(), Q::from_i64(2), Q::zero()]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::<Q>::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(3));
        let s = Mat::<Q>::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn kernel_exact_and_numeric_agree_on_dimension() {
        let m = Mat::<Q>::from_i64(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let k = kernel_vectors(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
        let mn = Mat::<Cplx>::from_i64(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let kn = kernel_vectors(&mn);
        assert_eq!(kn.len(), 2);
        for v in &kn {
            assert!(mn.mul_vec(v).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Mat::<Q>::from_i64(&[&[1, 0], &[0, 0]]);
        assert!(solve(&m, &Vector::from_i64(&[3, 1])).is_none());
        assert_eq!(
            solve(&m, &Vector::from_i64(&[3, 0])),
            Some(Vector::from_i64(&[3, 0]))
        );
        let mn = Mat::<Cplx>::from_i64(&[&[1, 0], &[0, 0]]);
        assert!(solve(&mn, &Vector::from_i64(&[3, 1])).is_none());
    }

    #[test]
    fn span_builder_tracks_rank() {
        let mut b = SpanBuilder::<Q>::new(3);
        assert!(b.insert(&Vector::from_i64(&[0, 1, 1])));
        assert!(b.insert(&Vector::from_i64(&[1, 1, 0])));
        assert!(!b.insert(&Vector::from_i64(&[1, 3, 2])));
        assert!(b.contains(&Vector::from_i64(&[2, 0, -2])));
        assert!(b.insert(&Vector::from_i64(&[0, 0, 1])));
        assert!(b.is_full());
    }
}
