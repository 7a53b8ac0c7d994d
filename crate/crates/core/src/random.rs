//! Seeded generators for test inputs and fixtures.
//!
//! Exact draws use small integers so closures stay cheap; numeric draws use
//! uniform complex entries in the unit square.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::families::Preorder;
use crate::linalg::{gram_schmidt, Mat, Vector};
use crate::matspan::{close_algebra, random_coefficient, OperatorAlgebra};
use crate::scalar::Scalar;
use crate::triangular::BlockOrderedBasis;

const MAX_RETRIES: usize = 1000;

pub fn random_vector<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> Vector<S> {
    Vector((0..n).map(|_| random_coefficient(rng)).collect())
}

/// Each entry is nonzero with probability `density`.
pub fn random_matrix<S: Scalar, R: Rng>(rng: &mut R, n: usize, density: f64) -> Mat<S> {
    Mat::from_fn(n, n, |_, _| {
        if rng.gen_bool(density) {
            random_coefficient(rng)
        } else {
            S::zero()
        }
    })
}

/// Between 1 and 3 sparse generators.
pub fn random_generators<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> Vec<Mat<S>> {
    let count = rng.gen_range(1..=3);
    let density = rng.gen_range(0.15..0.6);
    (0..count).map(|_| random_matrix(rng, n, density)).collect()
}

/// Invertible matrix whose columns are a random basis.
pub fn random_basis<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> Vec<Vector<S>> {
    for _ in 0..MAX_RETRIES {
        let v: Vec<Vector<S>> = (0..n).map(|_| random_vector(rng, n)).collect();
        if Mat::from_columns(n, &v).rank() == n {
            return v;
        }
    }
    panic!("no invertible draw in {MAX_RETRIES} attempts");
}

/// Basis with entries in {−1, 0, 1}, so exact orthogonalities are common.
pub fn random_sparse_basis<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> Vec<Vector<S>> {
    for _ in 0..MAX_RETRIES {
        let v: Vec<Vector<S>> = (0..n)
            .map(|_| Vector((0..n).map(|_| S::from_i64(rng.gen_range(-1..=1))).collect()))
            .collect();
        if Mat::from_columns(n, &v).rank() == n {
            return v;
        }
    }
    panic!("no invertible draw in {MAX_RETRIES} attempts");
}

/// Cayley transform (I − H)(I + H)^{-1} of a random skew-Hermitian H. Unitary
/// in both backends, and rational in the exact one.
pub fn random_unitary<S: Scalar, R: Rng>(rng: &mut R, m: usize) -> Mat<S> {
    let x: Mat<S> = Mat::from_fn(m, m, |_, _| random_coefficient(rng));
    let h = &x - &x.adjoint();
    let id = Mat::identity(m);
    let inv = (&id + &h)
        .inverse()
        .expect("I + H is invertible for skew-Hermitian H");
    &(&id - &h) * &inv
}

/// Integer matrix with determinant 1: a product of random elementary shears.
pub fn random_unimodular<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> Mat<S> {
    let mut m = Mat::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = S::from_i64(*[-1i64, 1, 2].choose(rng).expect("nonempty"));
        let mut e = Mat::identity(n);
        e[(i, j)] = c;
        m = &e * &m;
    }
    m
}

/// Composition of n into k positive parts.
pub fn random_sizes<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(1 <= k && k <= n, "need 1 ≤ k ≤ n");
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts[..k - 1].to_vec();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        sizes.push(c - prev);
        prev = c;
    }
    sizes
}

/// Block-diagonal, each block upper triangular with constant diagonal; the
/// block eigenvalues are distinct nonzero integers.
pub fn random_jordanesque<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> (Mat<S>, Vec<usize>) {
    let k = rng.gen_range(1..=n);
    let sizes = random_sizes(rng, n, k);
    let mut pool: Vec<i64> = (-6..=6).filter(|&x| x != 0).collect();
    pool.shuffle(rng);
    let mut m = Mat::zero(n);
    let mut start = 0;
    for (b, &s) in sizes.iter().enumerate() {
        for i in start..start + s {
            m[(i, i)] = S::from_i64(pool[b]);
            for j in i + 1..start + s {
                if rng.gen_bool(0.6) {
                    m[(i, j)] = S::from_i64(rng.gen_range(-3..=3));
                }
            }
        }
        start += s;
    }
    (m, sizes)
}

/// Closure of strictly upper triangular generators, conjugated by a random
/// change of basis (unimodular for the exact backend, unitary otherwise).
pub fn random_nilpotent_algebra<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> OperatorAlgebra<S> {
    let count = rng.gen_range(1..=3);
    let density = rng.gen_range(0.2..0.7);
    let gens: Vec<Mat<S>> = (0..count)
        .map(|_| {
            Mat::from_fn(n, n, |i, j| {
                if j > i && rng.gen_bool(density) {
                    random_coefficient(rng)
                } else {
                    S::zero()
                }
            })
        })
        .collect();
    let a = close_algebra(n, &gens, false).expect("square generators");
    let s = if S::EXACT {
        random_unimodular(rng, n)
    } else {
        random_unitary(rng, n)
    };
    a.conjugate(&s).expect("change of basis is invertible")
}

/// Block-orthogonal block ordered basis with the given block sizes. Each
/// block is Gram-Schmidt applied to random vectors (orthonormal numerically).
pub fn random_block_basis<S: Scalar, R: Rng>(rng: &mut R, sizes: &[usize]) -> BlockOrderedBasis<S> {
    let n: usize = sizes.iter().sum();
    for _ in 0..MAX_RETRIES {
        let raw = random_basis::<S, _>(rng, n);
        let mut vectors = Vec::with_capacity(n);
        let mut start = 0;
        for &s in sizes {
            let gs = gram_schmidt(&raw[start..start + s]).expect("independent block");
            vectors.extend(gs.vectors);
            start += s;
        }
        if let Ok(b) = BlockOrderedBasis::new(vectors, sizes.to_vec()) {
            return b;
        }
    }
    panic!("no block basis in {MAX_RETRIES} attempts");
}

/// Reflexive transitive closure of random pairs.
pub fn random_preorder<R: Rng>(rng: &mut R, n: usize) -> Preorder {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .filter(|_| rng.gen_bool(0.25))
        .collect();
    Preorder::closure(n, &pairs).expect("indices are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cplx, GaussRat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_have_the_promised_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let u = random_unitary::<GaussRat, _>(&mut rng, 3);
            assert_eq!(&u.adjoint() * &u, Mat::identity(3));
            let u = random_unitary::<Cplx, _>(&mut rng, 3);
            assert!((&u.adjoint() * &u).within(&Mat::identity(3), 1e-12));
            let s = random_sizes(&mut rng, 6, 3);
            assert_eq!(s.len(), 3);
            assert_eq!(s.iter().sum::<usize>(), 6);
            let b = random_block_basis::<GaussRat, _>(&mut rng, &s);
            assert!(b.is_block_orthogonal());
            let (j, sizes) = random_jordanesque::<GaussRat, _>(&mut rng, 5);
            let blocks = BlockOrderedBasis::new((0..5).map(|i| Vector::unit(5, i)).collect(), sizes).unwrap();
            assert!(crate::triangular::jordanesque_check(&j, &blocks).unwrap().ok);
            let a = random_nilpotent_algebra::<GaussRat, _>(&mut rng, 4);
            assert!(crate::qposet::is_nilpotent_algebra(&a));
            let p = random_preorder(&mut rng, 4);
            assert!(p.validate().is_ok());
            assert_eq!(random_unimodular::<GaussRat, _>(&mut rng, 3).rank(), 3);
        }
    }
}
