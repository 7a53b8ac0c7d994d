//! Eigenvalues of single matrices.
//!
//! Numeric: diagonal of the complex Schur form, clustered, with each cluster
//! confirmed by the dimension of its generalized eigenspace.
//! Exact: candidate values (rationalized Schur eigenvalues, diagonal entries,
//! trace/n and 0) are accepted only if they pass an exact rank test, so the
//! result is always correct but may be incomplete when the spectrum leaves
//! the Gaussian rationals.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::echelon::rank;
use super::mat::Mat;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distinct eigenvalues with algebraic multiplicities.
#[derive(Clone, Debug)]
pub struct Spectrum<S> {
    pub values: Vec<(S, usize)>,
    /// Multiplicities add up to n.
    pub complete: bool,
}

impl<S: Scalar> Spectrum<S> {
    pub fn distinct(&self) -> impl Iterator<Item = &S> {
        self.values.iter().map(|(v, _)| v)
    }
}

const SCHUR_ITERATIONS: usize = 10_000;

/// Empty if the QR iteration fails to converge even after shifting.
pub fn schur_eigenvalues<S: Scalar>(m: &Mat<S>) -> Vec<Complex64> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let d = m.to_dmatrix();
    let scale = d.iter().map(|z| z.norm()).fold(1.0, f64::max);
    // nalgebra's unbounded iteration can stall forever on defective matrices;
    // a complex shift of the whole matrix usually gets it moving again.
    for k in 0..4 {
        let c = Complex64::new(0.37, 0.21) * (k as f64 * scale);
        let shifted = &d + DMatrix::identity(n, n) * c;
        if let Some(s) = Schur::try_new(shifted, f64::EPSILON, SCHUR_ITERATIONS) {
            let (_, t) = s.unpack();
            return (0..n).map(|i| t[(i, i)] - c).collect();
        }
    }
    Vec::new()
}

fn shifted<S: Scalar>(m: &Mat<S>, lambda: &S) -> Mat<S> {
    m - &Mat::scalar(m.rows(), lambda.clone())
}

/// dim ker (m − λ)^k
fn generalized_nullity<S: Scalar>(m: &Mat<S>, lambda: &S, k: usize) -> usize {
    let n = m.rows();
    n - rank(&shifted(m, lambda).pow(k))
}

fn clusters(raw: &[Complex64], radius: f64) -> Vec<Vec<Complex64>> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut used = vec![false; raw.len()];
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut g = vec![raw[i]];
        let mut k = 0;
        while k < g.len() {
            let c = g[k];
            for j in 0..raw.len() {
                if !used[j] && (raw[j] - c).norm() <= radius {
                    used[j] = true;
                    g.push(raw[j]);
                }
            }
            k += 1;
        }
        groups.push(g);
    }
    groups
}

fn mean(g: &[Complex64]) -> Complex64 {
    g.iter().sum::<Complex64>() / g.len() as f64
}

pub fn spectrum<S: Scalar>(m: &Mat<S>) -> Result<Spectrum<S>> {
    assert!(m.is_square());
    let n = m.rows();
    let raw = schur_eigenvalues(m);
    let scale = raw.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut values: Vec<(S, usize)> = Vec::new();
    if S::EXACT {
        let mut cands: Vec<S> = Vec::new();
        for radius in [1e-9, 1e-6, 1e-3] {
            for g in clusters(&raw, radius * scale) {
                if let Some(q) = S::rationalize(mean(&g)) {
                    cands.push(q);
                }
            }
        }
        for i in 0..n {
            cands.push(m[(i, i)].clone());
        }
        if n > 0 {
            cands.push(m.trace() / S::from_i64(n as i64));
        }
        cands.push(S::zero());
        cands.sort_by(|a, b| a.total_cmp(b));
        cands.dedup_by(|a, b| a.approx_eq(b));
        for c in cands {
            let mult = generalized_nullity(m, &c, n.max(1));
            if mult > 0 {
                values.push((c, mult));
            }
        }
    } else {
        let mut accepted = None;
        for radius in [1e-9, 1e-7, 1e-5, 1e-3, 1e-2] {
            let groups = clusters(&raw, radius * scale);
            let ok = groups.iter().all(|g| {
                let mu = S::from_c64(mean(g));
                generalized_nullity(m, &mu, g.len()) == g.len()
            });
            if ok {
                accepted = Some(groups);
                break;
            }
        }
        let groups = accepted.ok_or(Error::EigenvalueAmbiguity)?;
        for g in groups {
            values.push((S::from_c64(mean(&g)), g.len()));
        }
        values.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let total: usize = values.iter().map(|(_, k)| k).sum();
    Ok(Spectrum {
        complete: total == n,
        values,
    })
}

/// Some eigenvalue of `m` in the field, if one can be certified.
pub fn any_eigenvalue<S: Scalar>(m: &Mat<S>) -> Option<S> {
    spectrum(m).ok()?.values.into_iter().next().map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cplx, GaussRat};

    #[test]
    fn stalling_schur_input_still_terminates() {
        // Unshifted QR iteration never converges on this defective matrix.
        let h = GaussRat::from_ratio(1, 2);
        let m = Mat::from_rows(vec![
            vec![GaussRat::zero(), GaussRat::one(), GaussRat::zero()],
            vec![-h.clone(), GaussRat::from_i64(-2), h],
            vec![GaussRat::zero(), -GaussRat::one(), GaussRat::zero()],
        ])
        .unwrap();
        let s = spectrum(&m).unwrap();
        assert!(s.complete);
        assert_eq!(s.values, vec![(GaussRat::from_i64(-1), 2), (GaussRat::zero(), 1)]);
    }

    #[test]
    fn exact_spectrum_of_triangular_matrix() {
        let m = Mat::<GaussRat>::from_i64(&[&[2, 1, 0], &[0, 2, 5], &[0, 0, -3]]);
        let s = spectrum(&m).unwrap();
        assert!(s.complete);
        assert_eq!(s.values.len(), 2);
        assert_eq!(s.values[0], (GaussRat::from_i64(-3), 1));
        assert_eq!(s.values[1], (GaussRat::from_i64(2), 2));
    }

    #[test]
    fn exact_spectrum_flags_irrational_roots() {
        // x^2 - 2
        let m = Mat::<GaussRat>::from_i64(&[&[0, 2], &[1, 0]]);
        let s = spectrum(&m).unwrap();
        assert!(!s.complete);
        assert!(s.values.is_empty());
    }

    #[test]
    fn numeric_spectrum_groups_jordan_blocks() {
        let m = Mat::<Cplx>::from_i64(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 0], &[0, 0, 0, 4]]);
        let s = spectrum(&m).unwrap();
        assert!(s.complete);
        assert_eq!(s.values.len(), 2);
        assert_eq!(s.values[0].1, 3);
        assert!((s.values[0].0.to_c64() - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn gaussian_eigenvalues_are_found() {
        // rotation generator has eigenvalues ±i
        let m = Mat::<GaussRat>::from_i64(&[&[0, -1], &[1, 0]]);
        let s = spectrum(&m).unwrap();
        assert!(s.complete);
        assert_eq!(s.values.len(), 2);
    }
}
