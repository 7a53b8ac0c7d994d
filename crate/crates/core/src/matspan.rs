//! Spans of matrices and operator algebras.

use rand::Rng;

use crate::error::{Error, Result};
use crate::families::Preorder;
use crate::linalg::{lincomb, Mat, SpanBuilder, Subspace, Vector};
use crate::scalar::Scalar;
use crate::triangular::BlockOrderedBasis;

/// Linear subspace of M_n, stored as a subspace of C^{n²} under row-major
/// vectorization.
#[derive(Clone, Debug)]
pub struct MatSpan<S> {
    n: usize,
    space: Subspace<S>,
    mats: Vec<Mat<S>>,
}

impl<S: Scalar> MatSpan<S> {
    pub fn span(n: usize, mats: &[Mat<S>]) -> Result<Self> {
        for m in mats {
            if !m.is_square() {
                return Err(Error::Precondition("matrices must be square".into()));
            }
            Error::check_dim(n, m.rows())?;
        }
        let vs: Vec<_> = mats.iter().map(|m| m.vectorize()).collect();
        Ok(Self::from_space(n, Subspace::span(n * n, &vs)?))
    }

    fn from_space(n: usize, space: Subspace<S>) -> Self {
        let mats = space.basis().iter().map(|v| Mat::from_vectorized(n, v)).collect();
        MatSpan { n, space, mats }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_space(n, Subspace::zero(n * n))
    }

    /// C·I
    pub fn scalars(n: usize) -> Self {
        Self::span(n, &[Mat::identity(n)]).expect("identity is square")
    }

    pub fn full(n: usize) -> Self {
        Self::from_space(n, Subspace::full(n * n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    /// Canonical basis (vectorized echelon form).
    pub fn basis(&self) -> &[Mat<S>] {
        &self.mats
    }

    /// Orthogonal basis under the Frobenius inner product.
    pub fn orthogonal_basis(&self) -> Vec<Mat<S>> {
        self.space
            .orthogonal_basis()
            .iter()
            .map(|v| Mat::from_vectorized(self.n, v))
            .collect()
    }

    pub fn space(&self) -> &Subspace<S> {
        &self.space
    }

    pub fn contains(&self, m: &Mat<S>) -> bool {
        m.is_square() && m.rows() == self.n && self.space.contains(&m.vectorize())
    }

    /// Coefficients of `m` in the canonical basis.
    pub fn coords(&self, m: &Mat<S>) -> Option<Vec<S>> {
        if m.rows() != self.n {
            return None;
        }
        self.space.coords(&m.vectorize())
    }

    pub fn element(&self, coeffs: &[S]) -> Mat<S> {
        if self.mats.is_empty() {
            return Mat::zero(self.n);
        }
        lincomb(coeffs, &self.mats)
    }

    pub fn adjoint(&self) -> Self {
        let adj: Vec<_> = self.mats.iter().map(|m| m.adjoint()).collect();
        Self::span(self.n, &adj).expect("same dimension")
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.n, other.n)?;
        Ok(Self::from_space(self.n, self.space.intersect(&other.space)?))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.n, other.n)?;
        Ok(Self::from_space(self.n, self.space.sum(&other.space)?))
    }

    pub fn contains_span(&self, other: &Self) -> bool {
        self.n == other.n && self.space.contains_subspace(&other.space)
    }

    pub fn same(&self, other: &Self) -> bool {
        self.n == other.n && self.space.same(&other.space)
    }

    /// S·B·S⁻¹ over the basis.
    pub fn conjugate(&self, s: &Mat<S>) -> Result<Self> {
        Error::check_dim(self.n, s.rows())?;
        let inv = s.inverse()?;
        let conj: Vec<_> = self.mats.iter().map(|b| &(s * b) * &inv).collect();
        Self::span(self.n, &conj)
    }

    /// Every product of basis elements stays in the span.
    pub fn is_product_stable(&self) -> bool {
        self.first_unstable_product().is_none()
    }

    pub fn first_unstable_product(&self) -> Option<(usize, usize)> {
        for (i, a) in self.mats.iter().enumerate() {
            for (j, b) in self.mats.iter().enumerate() {
                if !self.contains(&(a * b)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Seeded random element: small integer coefficients (exact) or uniform
    /// complex coefficients in the unit square (numeric).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Mat<S> {
        let coeffs: Vec<S> = (0..self.dim()).map(|_| random_coefficient(rng)).collect();
        self.element(&coeffs)
    }
}

pub(crate) fn random_coefficient<S: Scalar, R: Rng>(rng: &mut R) -> S {
    if S::EXACT {
        S::from_i64(rng.gen_range(-3..=3))
    } else {
        S::from_c64(num_complex::Complex64::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ))
    }
}

impl<S: Scalar> PartialEq for MatSpan<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

/// Where an algebra came from. Family provenances carry the parameters that
/// determine their invariant-subspace lattice exactly.
#[derive(Clone, Debug)]
pub enum Provenance<S> {
    Generic,
    Tn,
    Dv {
        basis: Vec<Vector<S>>,
    },
    Jv {
        basis: BlockOrderedBasis<S>,
    },
    PreorderAlg {
        preorder: Preorder,
        basis: Vec<Vector<S>>,
    },
}

impl<S> Provenance<S> {
    pub fn kind(&self) -> &'static str {
        match self {
            Provenance::Generic => "generic",
            Provenance::Tn => "tn",
            Provenance::Dv { .. } => "dv",
            Provenance::Jv { .. } => "jv",
            Provenance::PreorderAlg { .. } => "preorder",
        }
    }
}

/// Product-stable span of matrices.
#[derive(Clone, Debug)]
pub struct OperatorAlgebra<S> {
    span: MatSpan<S>,
    unital: bool,
    provenance: Provenance<S>,
}

impl<S: Scalar> OperatorAlgebra<S> {
    /// Wraps a span after checking product stability (and I ∈ span when unital).
    pub fn from_span(span: MatSpan<S>, unital: bool, provenance: Provenance<S>) -> Result<Self> {
        if let Some((i, j)) = span.first_unstable_product() {
            return Err(Error::Precondition(format!(
                "span is not product stable (basis pair {i}, {j})"
            )));
        }
        if unital && !span.contains(&Mat::identity(span.n())) {
            return Err(Error::Precondition("unital algebra must contain I".into()));
        }
        Ok(OperatorAlgebra {
            span,
            unital,
            provenance,
        })
    }

    pub(crate) fn from_parts_unchecked(span: MatSpan<S>, unital: bool, provenance: Provenance<S>) -> Self {
        OperatorAlgebra {
            span,
            unital,
            provenance,
        }
    }

    pub fn span(&self) -> &MatSpan<S> {
        &self.span
    }

    pub fn n(&self) -> usize {
        self.span.n()
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn basis(&self) -> &[Mat<S>] {
        self.span.basis()
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn provenance(&self) -> &Provenance<S> {
        &self.provenance
    }

    pub fn with_provenance(mut self, p: Provenance<S>) -> Self {
        self.provenance = p;
        self
    }

    pub fn contains(&self, m: &Mat<S>) -> bool {
        self.span.contains(m)
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n() * self.n()
    }

    /// The algebra A* (product stable because (AB)* = B*A*).
    pub fn adjoint(&self) -> Self {
        OperatorAlgebra {
            span: self.span.adjoint(),
            unital: self.unital,
            provenance: Provenance::Generic,
        }
    }

    /// S·A·S⁻¹. Family tags are dropped since the classifications are tied to
    /// the original basis.
    pub fn conjugate(&self, s: &Mat<S>) -> Result<Self> {
        Ok(OperatorAlgebra {
            span: self.span.conjugate(s)?,
            unital: self.unital,
            provenance: Provenance::Generic,
        })
    }

    /// Closure of A ∪ {I}.
    pub fn unitization(&self) -> Self {
        let mut g = self.basis().to_vec();
        g.push(Mat::identity(self.n()));
        close_algebra(self.n(), &g, true).expect("same dimension")
    }
}

/// Smallest product-stable span containing `generators` (and I when
/// `unital`).
///
/// Semi-naive saturation: each newly admitted basis element is multiplied on
/// both sides against every element admitted before it, so every pair is
/// formed exactly once. Stops early once the span is all of M_n.
pub fn close_algebra<S: Scalar>(n: usize, generators: &[Mat<S>], unital: bool) -> Result<OperatorAlgebra<S>> {
    for g in generators {
        if !g.is_square() {
            return Err(Error::Precondition("generators must be square".into()));
        }
        Error::check_dim(n, g.rows())?;
    }
    let mut sb = SpanBuilder::new(n * n);
    let mut elems: Vec<Mat<S>> = Vec::new();
    let admit = |sb: &mut SpanBuilder<S>, elems: &mut Vec<Mat<S>>, m: &Mat<S>, scale: f64| {
        if sb.insert_scaled(&m.vectorize(), scale) {
            // numeric: keep the orthonormalized direction to avoid growth
            if S::EXACT {
                elems.push(m.clone());
            } else {
                let row = sb.vectors().last().expect("just inserted");
                elems.push(Mat::from_vectorized(n, row));
            }
        }
    };
    if unital {
        admit(&mut sb, &mut elems, &Mat::identity(n), 1.0);
    }
    for g in generators {
        admit(&mut sb, &mut elems, g, g.frobenius());
    }
    let mut i = 0;
    while i < elems.len() && !sb.is_full() {
        for j in 0..=i {
            let (a, b) = (elems[i].clone(), elems[j].clone());
            let scale = a.frobenius() * b.frobenius();
            admit(&mut sb, &mut elems, &(&a * &b), scale);
            if i != j {
                admit(&mut sb, &mut elems, &(&b * &a), scale);
            }
            if sb.is_full() {
                break;
            }
        }
        i += 1;
    }
    let span = if sb.is_full() {
        MatSpan::full(n)
    } else {
        MatSpan::span(n, &elems)?
    };
    Ok(OperatorAlgebra::from_parts_unchecked(
        span,
        unital,
        Provenance::Generic,
    ))
}

/// Product-stability plus idempotence of closure.
pub fn is_closed<S: Scalar>(a: &OperatorAlgebra<S>) -> bool {
    a.span().is_product_stable()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    type Q = GaussRat;

    fn shift(n: usize) -> Mat<Q> {
        Mat::from_fn(n, n, |i, j| if j == i + 1 { Q::one() } else { Q::zero() })
    }

    #[test]
    fn shift_generates_its_powers() {
        let a = close_algebra(3, &[shift(3)], true).unwrap();
        assert_eq!(a.dim(), 3);
        let s = shift(3);
        assert!(a.contains(&Mat::identity(3)));
        assert!(a.contains(&s));
        assert!(a.contains(&(&s * &s)));
    }

    #[test]
    fn matrix_units_generate_m2() {
        let a = close_algebra(2, &[Mat::<Q>::unit(2, 0, 1), Mat::unit(2, 1, 0)], true).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.is_full());
    }

    #[test]
    fn empty_generators() {
        assert_eq!(close_algebra::<Q>(3, &[], false).unwrap().dim(), 0);
        assert_eq!(close_algebra::<Q>(3, &[], true).unwrap().dim(), 1);
    }

    #[test]
    fn adjoint_and_intersection() {
        let e12 = MatSpan::span(2, &[Mat::<Q>::unit(2, 0, 1)]).unwrap();
        let e21 = MatSpan::span(2, &[Mat::<Q>::unit(2, 1, 0)]).unwrap();
        assert_eq!(e12.adjoint(), e21);
        assert_eq!(e12.intersect(&e21).unwrap().dim(), 0);
        let d1 = MatSpan::span(2, &[Mat::<Q>::unit(2, 0, 0)]).unwrap();
        let d2 = MatSpan::span(2, &[Mat::<Q>::unit(2, 1, 1)]).unwrap();
        assert_eq!(d1.intersect(&d2).unwrap().dim(), 0);
        assert_eq!(d1.intersect(&d1).unwrap(), d1);
    }

    #[test]
    fn membership() {
        let s = MatSpan::scalars(3);
        assert!(s.contains(&Mat::<Q>::scalar(3, Q::from_i64(3))));
        let e12 = MatSpan::span(2, &[Mat::<Q>::unit(2, 0, 1)]).unwrap();
        assert!(!e12.contains(&Mat::unit(2, 1, 0)));
    }

    #[test]
    fn swap_conjugation_preserves_diagonals() {
        let d = close_algebra(2, &[Mat::<Q>::unit(2, 0, 0), Mat::unit(2, 1, 1)], false).unwrap();
        let swap = Mat::<Q>::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(d.conjugate(&swap).unwrap().span().same(d.span()));
        assert!(d.conjugate(&Mat::identity(2)).unwrap().span().same(d.span()));
    }
}
