//! Kraus channels and the reachability algebra they generate.
//!
//! A transition from state v to state w is possible under some sequence of
//! available channels iff ⟨A·v, w⟩ ≠ 0 for some A in the unital algebra
//! generated by all Kraus matrices. Invariant subspaces of that algebra are
//! traps: nothing starting inside can leave.

use rand::Rng;

use crate::error::{Error, Result};
use crate::invariant::{invariant_lattice, Lattice};
use crate::linalg::{Mat, Vector};
use crate::matspan::{close_algebra, OperatorAlgebra};
use crate::random::random_unitary;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct KrausChannel<S> {
    pub n: usize,
    pub kraus: Vec<Mat<S>>,
    /// Largest entry of Σ K_i*·K_i − I.
    pub cptp_residual: f64,
}

/// Checks Σ K_i*·K_i = I: literally in the exact backend, within the active
/// tolerance numerically.
pub fn validate_channel<S: Scalar>(kraus: Vec<Mat<S>>) -> Result<KrausChannel<S>> {
    let Some(first) = kraus.first() else {
        return Err(Error::InvalidInput(
            "a channel needs at least one Kraus matrix".into(),
        ));
    };
    let n = first.rows();
    for k in &kraus {
        if !k.is_square() {
            return Err(Error::InvalidInput("Kraus matrices must be square".into()));
        }
        Error::check_dim(n, k.rows())?;
    }
    let id = Mat::identity(n);
    let sum = kraus
        .iter()
        .fold(Mat::zero(n), |acc, k| &acc + &(&k.adjoint() * k));
    let residual = (&sum - &id).max_abs();
    if !sum.approx_eq(&id) {
        return Err(Error::CptpViolation(residual));
    }
    Ok(KrausChannel {
        n,
        kraus,
        cptp_residual: residual,
    })
}

#[derive(Clone, Debug)]
pub struct ReachabilityAlgebra<S> {
    pub algebra: OperatorAlgebra<S>,
}

/// Unital closure of every Kraus matrix of every channel.
pub fn reachability_algebra<S: Scalar>(channels: &[KrausChannel<S>]) -> Result<ReachabilityAlgebra<S>> {
    let Some(first) = channels.first() else {
        return Err(Error::InvalidInput("no channels given".into()));
    };
    let n = first.n;
    for c in channels {
        Error::check_dim(n, c.n)?;
    }
    let gens: Vec<Mat<S>> = channels.iter().flat_map(|c| c.kraus.iter().cloned()).collect();
    Ok(ReachabilityAlgebra {
        algebra: close_algebra(n, &gens, true)?,
    })
}

fn normalized<S: Scalar>(v: &Vector<S>) -> Result<Vector<S>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if S::EXACT {
        // exact nonvanishing does not depend on scale
        Ok(v.clone())
    } else {
        v.normalized()
    }
}

/// First basis element B with ⟨B·v, w⟩ ≠ 0.
pub fn transition_witness<S: Scalar>(
    r: &ReachabilityAlgebra<S>,
    v: &Vector<S>,
    w: &Vector<S>,
) -> Result<Option<Mat<S>>> {
    let n = r.algebra.n();
    Error::check_dim(n, v.dim())?;
    Error::check_dim(n, w.dim())?;
    let (v, w) = (normalized(v)?, normalized(w)?);
    Ok(r.algebra
        .basis()
        .iter()
        .find(|b| !w.inner(&b.mul_vec(&v)).is_negligible(b.frobenius()))
        .cloned())
}

pub fn can_transition<S: Scalar>(r: &ReachabilityAlgebra<S>, v: &Vector<S>, w: &Vector<S>) -> Result<bool> {
    Ok(transition_witness(r, v, w)?.is_some())
}

/// The same query for a composite system C^n ⊗ C^k, where the algebra acts
/// as A ⊗ I_k on the first factor.
pub fn can_transition_lifted<S: Scalar>(
    r: &ReachabilityAlgebra<S>,
    k: usize,
    v: &Vector<S>,
    w: &Vector<S>,
) -> Result<bool> {
    let nk = r.algebra.n() * k;
    Error::check_dim(nk, v.dim())?;
    Error::check_dim(nk, w.dim())?;
    let (v, w) = (normalized(v)?, normalized(w)?);
    Ok(r.algebra.basis().iter().any(|b| {
        let lifted = b.kron_identity(k);
        !w.inner(&lifted.mul_vec(&v)).is_negligible(b.frobenius())
    }))
}

/// Invariant subspaces of the reachability algebra.
pub fn trap_subspaces<S: Scalar>(r: &ReachabilityAlgebra<S>, seed: u64, budget: usize) -> Lattice<S> {
    invariant_lattice(&r.algebra, seed, budget)
}

/// K′_j = Σ_i u_ji·K_i for a random unitary u: another Kraus representation
/// of the same channel.
pub fn random_unitary_mix<S: Scalar, R: Rng>(c: &KrausChannel<S>, rng: &mut R) -> Result<KrausChannel<S>> {
    let m = c.kraus.len();
    let u: Mat<S> = random_unitary(rng, m);
    let mixed: Vec<Mat<S>> = (0..m)
        .map(|j| (0..m).fold(Mat::zero(c.n), |acc, i| &acc + &c.kraus[i].scale(&u[(j, i)])))
        .collect();
    validate_channel(mixed)
}

/// Channel {(3/5)·U_1, (4/5)·U_2} with random unitaries; exact in both
/// backends.
pub fn random_channel<S: Scalar, R: Rng>(rng: &mut R, n: usize) -> KrausChannel<S> {
    let u1: Mat<S> = random_unitary(rng, n);
    let u2: Mat<S> = random_unitary(rng, n);
    validate_channel(vec![
        u1.scale(&S::from_ratio(3, 5)),
        u2.scale(&S::from_ratio(4, 5)),
    ])
    .expect("(3/5)² + (4/5)² = 1")
}

/// Random channel on C^{n1} ⊕ C^{n2} that never mixes the two summands.
pub fn random_block_channel<S: Scalar, R: Rng>(rng: &mut R, n1: usize, n2: usize) -> KrausChannel<S> {
    let a = random_channel::<S, R>(rng, n1);
    let b = random_channel::<S, R>(rng, n2);
    let n = n1 + n2;
    let kraus = a
        .kraus
        .iter()
        .zip(&b.kraus)
        .map(|(x, y)| {
            Mat::from_fn(n, n, |i, j| match (i < n1, j < n1) {
                (true, true) => x[(i, j)].clone(),
                (false, false) => y[(i - n1, j - n1)].clone(),
                _ => S::zero(),
            })
        })
        .collect();
    validate_channel(kraus).expect("direct sum of channels")
}

/// Random Kraus set normalized by right-multiplying with (Σ K_i*·K_i)^{-1/2}.
/// Numeric backend only: the inverse square root is rarely rational.
pub fn random_normalized_channel<S: Scalar, R: Rng>(
    rng: &mut R,
    n: usize,
    count: usize,
) -> Result<KrausChannel<S>> {
    if S::EXACT {
        return Err(Error::Unsupported(
            "inverse square roots need the numeric backend".into(),
        ));
    }
    let raw: Vec<Mat<S>> = (0..count)
        .map(|_| Mat::from_fn(n, n, |_, _| crate::matspan::random_coefficient(rng)))
        .collect();
    let sum = raw.iter().fold(Mat::zero(n), |acc, k| &acc + &(&k.adjoint() * k));
    let eig = sum.to_dmatrix().symmetric_eigen();
    let inv_sqrt_diag = nalgebra::DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|x| num_complex::Complex64::new(1.0 / x.sqrt(), 0.0)),
    );
    let q = &eig.eigenvectors;
    let inv_sqrt = Mat::from_dmatrix(&(q * inv_sqrt_diag * q.adjoint()));
    validate_channel(raw.iter().map(|k| k * &inv_sqrt).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::is_invariant;
    use crate::linalg::Subspace;
    use crate::scalar::{Cplx, GaussRat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = GaussRat;

    /// v ⊗ e_t in C^n ⊗ C^k.
    fn lift(v: &Vector<Q>, k: usize, t: usize) -> Vector<Q> {
        let mut out = Vector::zeros(v.dim() * k);
        for i in 0..v.dim() {
            out[i * k + t] = v[i].clone();
        }
        out
    }

    #[test]
    fn validation() {
        let id = validate_channel(vec![Mat::<Q>::identity(2)]).unwrap();
        assert_eq!(id.cptp_residual, 0.0);
        let x = Mat::<Cplx>::from_i64(&[&[0, 1], &[1, 0]]);
        let h = Cplx::from_c64(num_complex::Complex64::new(0.5f64.sqrt(), 0.0));
        assert!(validate_channel(vec![Mat::identity(2).scale(&h), x.scale(&h)]).is_ok());
        assert!(matches!(
            validate_channel(vec![Mat::<Q>::identity(2), Mat::identity(2)]),
            Err(Error::CptpViolation(_))
        ));
        assert!(validate_channel::<Q>(vec![]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_normalized_channel::<Cplx, _>(&mut rng, 3, 2).unwrap();
        assert!(c.cptp_residual < 1e-10);
    }

    #[test]
    fn reachability_examples() {
        let id = validate_channel(vec![Mat::<Q>::identity(3)]).unwrap();
        let r = reachability_algebra(&[id]).unwrap();
        assert_eq!(r.algebra.dim(), 1);
        let e = Vector::<Q>::from_i64(&[1, 2, 0]);
        assert!(can_transition(&r, &e, &e).unwrap());
        assert!(matches!(
            can_transition(&r, &e, &Vector::zeros(3)),
            Err(Error::ZeroVector)
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = random_block_channel::<Q, _>(&mut rng, 2, 2);
        let r = reachability_algebra(&[c]).unwrap();
        for b in r.algebra.basis() {
            for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (3, 1)] {
                assert!(b[(i, j)].is_zero());
            }
        }
        let v = Vector::<Q>::from_i64(&[1, -1, 0, 0]);
        let w = Vector::<Q>::from_i64(&[0, 0, 2, 1]);
        assert!(!can_transition(&r, &v, &w).unwrap());
        assert!(can_transition_lifted(&r, 2, &lift(&v, 2, 0), &lift(&v, 2, 0)).unwrap());
        assert!(!can_transition_lifted(&r, 2, &lift(&v, 2, 0), &lift(&v, 2, 1)).unwrap());
        let traps = trap_subspaces(&r, 0, 50);
        assert!(traps.subspaces.contains(&Subspace::coordinate(4, &[0, 1])));
        assert!(traps.subspaces.contains(&Subspace::coordinate(4, &[2, 3])));
        for t in &traps.subspaces {
            assert!(is_invariant(&r.algebra, t));
        }

        let full = reachability_algebra(&[random_channel::<Q, _>(&mut rng, 3)]).unwrap();
        assert!(full.algebra.is_full());
        let traps = trap_subspaces(&full, 0, 50);
        assert_eq!(traps.subspaces.len(), 2);
    }

    #[test]
    fn upper_triangular_kraus_keep_the_flag() {
        // diag(1, 3/5) and (4/5)·E12 satisfy Σ K*K = I
        let k1 = Mat::<Q>::diag(&[Q::one(), Q::from_ratio(3, 5)]);
        let k2 = Mat::<Q>::unit(2, 0, 1).scale(&Q::from_ratio(4, 5));
        let r = reachability_algebra(&[validate_channel(vec![k1, k2]).unwrap()]).unwrap();
        let traps = trap_subspaces(&r, 0, 50);
        assert!(traps.subspaces.contains(&Subspace::coordinate(2, &[0])));
    }

    #[test]
    fn unitary_mixes_preserve_the_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_block_channel::<Q, _>(&mut rng, 1, 2);
        let r = reachability_algebra(std::slice::from_ref(&c)).unwrap();
        let mixed = random_unitary_mix(&c, &mut rng).unwrap();
        let r2 = reachability_algebra(&[mixed]).unwrap();
        assert!(r.algebra.span().same(r2.algebra.span()));
    }
}
