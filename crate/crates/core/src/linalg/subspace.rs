use std::cmp::Ordering;

use num_complex::Complex64;

use super::echelon::{kernel_vectors, rref, SpanBuilder};
use super::mat::Mat;
use super::vector::Vector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Linear subspace of C^n.
///
/// The basis is the reduced row echelon form of any spanning set (rows are the
/// basis vectors), so two exact subspaces are equal iff their bases are equal.
/// Numeric subspaces also keep an orthonormal basis for residual tests and
/// compare by mutual containment.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    n: usize,
    basis: Vec<Vector<S>>,
    pivots: Vec<usize>,
    ortho: Vec<Vector<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
            ortho: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        let basis: Vec<_> = (0..n).map(|i| Vector::unit(n, i)).collect();
        Subspace {
            n,
            ortho: if S::EXACT { Vec::new() } else { basis.clone() },
            basis,
            pivots: (0..n).collect(),
        }
    }

    /// span{e_i : i ∈ idx}
    pub fn coordinate(n: usize, idx: &[usize]) -> Self {
        Self::span(n, &idx.iter().map(|&i| Vector::unit(n, i)).collect::<Vec<_>>())
            .expect("coordinate vectors have the ambient dimension")
    }

    /// Canonical span of `vectors`, all of which must lie in C^n.
    pub fn span(n: usize, vectors: &[Vector<S>]) -> Result<Self> {
        for v in vectors {
            Error::check_dim(n, v.dim())?;
        }
        if vectors.is_empty() {
            return Ok(Self::zero(n));
        }
        if S::EXACT {
            let r = rref(&Mat::from_row_vectors(n, vectors));
            Ok(Subspace {
                n,
                basis: r.rows.into_iter().map(Vector).collect(),
                pivots: r.pivots,
                ortho: Vec::new(),
            })
        } else {
            let mut b = SpanBuilder::new(n);
            for v in vectors {
                b.insert(v);
            }
            let ortho = b.vectors().to_vec();
            let r = rref(&Mat::from_row_vectors(n, &ortho));
            let (basis, pivots) = if r.pivots.len() == ortho.len() {
                (r.rows.into_iter().map(Vector).collect(), r.pivots)
            } else {
                (ortho.clone(), Vec::new())
            };
            Ok(Subspace {
                n,
                basis,
                pivots,
                ortho,
            })
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    /// Canonical echelon basis.
    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    /// Pivot columns of the canonical basis.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Orthogonal basis: orthonormal in the numeric backend, orthogonal and
    /// unnormalized in the exact one.
    pub fn orthogonal_basis(&self) -> Vec<Vector<S>> {
        if S::EXACT {
            gram_schmidt(&self.basis)
                .expect("canonical basis is independent")
                .vectors
        } else {
            self.ortho.clone()
        }
    }

    fn residual(&self, v: &Vector<S>) -> Vector<S> {
        let mut r = v.clone();
        if S::EXACT {
            for (row, &p) in self.basis.iter().zip(&self.pivots) {
                if !r[p].is_zero() {
                    let f = -r[p].clone();
                    r.axpy(&f, row);
                }
            }
        } else {
            for _ in 0..2 {
                for q in &self.ortho {
                    let c = -r.inner(q);
                    r.axpy(&c, q);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector<S>) -> bool {
        assert_eq!(v.dim(), self.n, "subspace membership dimension mismatch");
        let r = self.residual(v);
        if S::EXACT {
            r.0.iter().all(|x| x.is_zero())
        } else {
            let t = crate::scalar::ToleranceConfig::current();
            r.norm() <= t.rank_threshold * v.norm() + t.eps_abs
        }
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.n == other.n && other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coords(&self, v: &Vector<S>) -> Option<Vec<S>> {
        if !self.contains(v) {
            return None;
        }
        if S::EXACT || !self.pivots.is_empty() {
            Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
        } else {
            let m = Mat::from_columns(self.n, &self.basis);
            super::echelon::solve(&m, v).map(|x| x.0)
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.n, other.n)?;
        let mut vs = self.spanning_vectors();
        vs.extend(other.spanning_vectors());
        Self::span(self.n, &vs)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.n, other.n)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        Ok(self
            .orth_complement()
            .sum(&other.orth_complement())?
            .orth_complement())
    }

    /// E⊥ with respect to ⟨x, y⟩ = Σ x_i conj(y_i).
    pub fn orth_complement(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.n);
        }
        let rows: Vec<_> = self.spanning_vectors().iter().map(|v| v.conj()).collect();
        let k = kernel_vectors(&Mat::from_row_vectors(self.n, &rows));
        Self::span(self.n, &k).expect("kernel vectors have ambient dimension")
    }

    /// E1 ⊖ E2 = E1 ∩ E2⊥, defined when E2 ⊆ E1.
    pub fn orth_difference(&self, e2: &Self) -> Result<Self> {
        Error::check_dim(self.n, e2.n)?;
        if !self.contains_subspace(e2) {
            return Err(Error::NotContained(
                "orthogonal difference requires E2 ⊆ E1".into(),
            ));
        }
        self.intersect(&e2.orth_complement())
    }

    /// Orthogonal projection onto this subspace.
    pub fn projection(&self) -> Mat<S> {
        let mut p = Mat::<S>::zero(self.n);
        if S::EXACT {
            let gs = gram_schmidt(&self.basis).expect("canonical basis is independent");
            for (u, nrm) in gs.vectors.iter().zip(&gs.sq_norms) {
                let inv = S::one() / nrm.clone();
                for i in 0..self.n {
                    let ui = u[i].clone() * inv.clone();
                    for j in 0..self.n {
                        p[(i, j)].add_assign_mul(&ui, &u[j].conj());
                    }
                }
            }
        } else {
            for q in &self.ortho {
                for i in 0..self.n {
                    for j in 0..self.n {
                        p[(i, j)].add_assign_mul(&q[i], &q[j].conj());
                    }
                }
            }
        }
        p
    }

    /// Image m·E.
    pub fn image(&self, m: &Mat<S>) -> Self {
        let vs: Vec<_> = self.spanning_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Self::span(m.rows(), &vs).expect("image vectors share a dimension")
    }

    /// m·E ⊆ E
    pub fn is_invariant_under(&self, m: &Mat<S>) -> bool {
        self.spanning_vectors()
            .iter()
            .all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Best-conditioned spanning set available.
    fn spanning_vectors(&self) -> Vec<Vector<S>> {
        if S::EXACT {
            self.basis.clone()
        } else {
            self.ortho.clone()
        }
    }

    /// Deterministic order: by dimension, then canonical basis entries.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| {
            for (a, b) in self.basis.iter().zip(&other.basis) {
                for (x, y) in a.0.iter().zip(&b.0) {
                    let o = x.total_cmp(y);
                    if o.is_ne() {
                        return o;
                    }
                }
            }
            Ordering::Equal
        })
    }

    pub fn same(&self, other: &Self) -> bool {
        if self.n != other.n || self.dim() != other.dim() {
            return false;
        }
        if S::EXACT {
            self.basis == other.basis
        } else {
            self.contains_subspace(other) && other.contains_subspace(self)
        }
    }
}

impl<S: Scalar> PartialEq for Subspace<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

/// Result of Gram-Schmidt: orthogonal vectors and their squared norms.
#[derive(Clone, Debug)]
pub struct GramSchmidt<S> {
    pub vectors: Vec<Vector<S>>,
    pub sq_norms: Vec<S>,
}

/// Orthogonalizes an ordered independent list, preserving every prefix span.
///
/// The exact backend returns unnormalized vectors (normalization needs square
/// roots); the numeric backend returns orthonormal vectors with unit norms.
pub fn gram_schmidt<S: Scalar>(ordered: &[Vector<S>]) -> Result<GramSchmidt<S>> {
    let mut vectors: Vec<Vector<S>> = Vec::with_capacity(ordered.len());
    let mut sq_norms: Vec<S> = Vec::with_capacity(ordered.len());
    for (k, v) in ordered.iter().enumerate() {
        let mut u = v.clone();
        let passes = if S::EXACT { 1 } else { 2 };
        for _ in 0..passes {
            for (w, nw) in vectors.iter().zip(&sq_norms) {
                let c = -(u.inner(w) / nw.clone());
                u.axpy(&c, w);
            }
        }
        let dependent = if S::EXACT {
            u.0.iter().all(|x| x.is_zero())
        } else {
            let t = crate::scalar::ToleranceConfig::current();
            u.norm() <= t.rank_threshold * v.norm() + t.eps_abs
        };
        if dependent {
            return Err(Error::RankDeficient {
                rank: k,
                expected: ordered.len(),
            });
        }
        if S::EXACT {
            sq_norms.push(u.norm_sqr());
            vectors.push(u);
        } else {
            let nrm = u.norm();
            vectors.push(u.scale(&S::from_c64(Complex64::new(1.0 / nrm, 0.0))));
            sq_norms.push(S::one());
        }
    }
    Ok(GramSchmidt { vectors, sq_norms })
}

/// Orthonormal Gram-Schmidt. The exact backend succeeds only when every
/// squared norm is a rational square.
pub fn orthonormalize<S: Scalar>(ordered: &[Vector<S>]) -> Result<Vec<Vector<S>>> {
    let gs = gram_schmidt(ordered)?;
    if !S::EXACT {
        return Ok(gs.vectors);
    }
    gs.vectors
        .iter()
        .zip(&gs.sq_norms)
        .map(|(u, n)| {
            let r = n
                .try_sqrt()
                .ok_or_else(|| Error::Unsupported("orthonormalization leaves the exact field".into()))?;
            Ok(u.scale(&(S::one() / r)))
        })
        .collect()
}

/// Spec-level entry points.
pub fn canonical_basis<S: Scalar>(n: usize, vectors: &[Vector<S>]) -> Result<Subspace<S>> {
    Subspace::span(n, vectors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
    OrthComplement,
    OrthDifference,
}

/// `OrthComplement` ignores `e2`.
pub fn subspace_op<S: Scalar>(e1: &Subspace<S>, e2: &Subspace<S>, op: SubspaceOp) -> Result<Subspace<S>> {
    match op {
        SubspaceOp::Sum => e1.sum(e2),
        SubspaceOp::Intersect => e1.intersect(e2),
        SubspaceOp::OrthComplement => Ok(e1.orth_complement()),
        SubspaceOp::OrthDifference => e1.orth_difference(e2),
    }
}

pub fn orth_projection<S: Scalar>(e: &Subspace<S>) -> Mat<S> {
    e.projection()
}

pub fn kernel<S: Scalar>(m: &Mat<S>) -> Subspace<S> {
    Subspace::span(m.cols(), &kernel_vectors(m)).expect("kernel vectors have ambient dimension")
}

/// Column space of `m`.
pub fn range<S: Scalar>(m: &Mat<S>) -> Subspace<S> {
    Subspace::span(m.rows(), &m.columns()).expect("columns have ambient dimension")
}
