use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ToleranceConfig};

/// Column vector in C^n.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S>(pub Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Vector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![S::zero(); n])
    }

    /// Standard basis vector e_i (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = S::one();
        v
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&x| S::from_i64(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.0
    }

    /// ⟨self, other⟩ = Σ self_i · conj(other_i).
    pub fn inner(&self, other: &Self) -> S {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = S::zero();
        for (x, y) in self.0.iter().zip(&other.0) {
            acc.add_assign_mul(x, &y.conj());
        }
        acc
    }

    pub fn norm_sqr(&self) -> S {
        let mut acc = S::zero();
        for x in &self.0 {
            acc = acc + x.norm_sqr();
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// self += c·other
    pub fn axpy(&mut self, c: &S, other: &Self) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            x.add_assign_mul(c, y);
        }
    }

    pub fn conj(&self) -> Self {
        Vector(self.0.iter().map(|x| x.conj()).collect())
    }

    /// Literal zero (exact) or norm below `eps_abs` (numeric).
    pub fn is_zero(&self) -> bool {
        if S::EXACT {
            self.0.iter().all(|x| x.is_zero())
        } else {
            self.norm() <= ToleranceConfig::current().eps_abs
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.approx_eq(b))
    }

    /// Unit vector in the same direction. Only available when the field has
    /// the square root; the exact backend returns `None` for irrational norms.
    pub fn normalized(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let r = self
            .norm_sqr()
            .try_sqrt()
            .ok_or_else(|| Error::Unsupported("norm is irrational in the exact field".into()))?;
        Ok(self.scale(&(S::one() / r)))
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }
}

impl<S: Scalar> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> IndexMut<usize> for Vector<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;
    fn add(self, o: &Vector<S>) -> Vector<S> {
        Vector(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;
    fn sub(self, o: &Vector<S>) -> Vector<S> {
        Vector(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;
    fn neg(self) -> Vector<S> {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }
}
