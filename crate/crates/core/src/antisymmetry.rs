//! Antisymmetry (A ∩ A* ⊆ C·I), Hermitian parts, projection search and the
//! hereditary verdict over a lattice of invariant subspaces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::invariant::{compress_span, is_invariant, SemiInvariantSpec};
use crate::linalg::{kernel_vectors, spectrum, Mat, SpanBuilder, Subspace, Vector};
use crate::matspan::{MatSpan, OperatorAlgebra};
use crate::scalar::Scalar;
use crate::triangular::idempotent_polynomial;

#[derive(Clone, Debug)]
pub struct AntisymmetryReport<S> {
    pub antisymmetric: bool,
    /// Self-adjoint, in the algebra, not a multiple of the unit.
    pub witness: Option<Mat<S>>,
    pub method_notes: String,
}

/// `m` = c·`unit` for some scalar c.
pub(crate) fn is_multiple_of<S: Scalar>(m: &Mat<S>, unit: &Mat<S>) -> bool {
    let tu = unit.trace();
    if tu.is_zero() {
        return m.is_zero();
    }
    let c = m.trace() / tu;
    m.approx_eq(&unit.scale(&c))
}

fn half<S: Scalar>() -> S {
    S::from_ratio(1, 2)
}

/// Antisymmetry of a span relative to `unit` (I for algebras on C^n, the
/// projection P for compressions supported on a subspace).
pub fn antisymmetry_of_span<S: Scalar>(span: &MatSpan<S>, unit: &Mat<S>) -> AntisymmetryReport<S> {
    let d = span
        .intersect(&span.adjoint())
        .expect("span and adjoint share dimension");
    for b in d.basis() {
        if is_multiple_of(b, unit) {
            continue;
        }
        let bs = b.adjoint();
        let re = (b + &bs).scale(&half());
        let im = (b - &bs).scale(&(half::<S>() / S::i()));
        let w = if !is_multiple_of(&re, unit) { re } else { im };
        return AntisymmetryReport {
            antisymmetric: false,
            witness: Some(w),
            method_notes: format!(
                "A ∩ A* has dimension {}; witness is the real or imaginary part of a non-scalar element",
                d.dim()
            ),
        };
    }
    AntisymmetryReport {
        antisymmetric: true,
        witness: None,
        method_notes: format!("A ∩ A* has dimension {} and lies in C·I", d.dim()),
    }
}

pub fn is_antisymmetric<S: Scalar>(a: &OperatorAlgebra<S>) -> AntisymmetryReport<S> {
    antisymmetry_of_span(a.span(), &Mat::identity(a.n()))
}

/// Checks the witness certificate independently of how it was produced.
pub fn witness_is_valid<S: Scalar>(span: &MatSpan<S>, unit: &Mat<S>, w: &Mat<S>) -> bool {
    w.is_hermitian() && span.contains(w) && !is_multiple_of(w, unit)
}

/// Real-linear basis of {M ∈ A : M = M*}.
///
/// Writing M = Σ (x_k + i·y_k) B_k over the canonical basis, M − M* = 0 is a
/// real system Σ x_k (B_k − B_k*) + y_k·i(B_k + B_k*) = 0 in (x, y); each
/// complex entry contributes its real and imaginary parts as two equations.
pub fn hermitian_part<S: Scalar>(a: &OperatorAlgebra<S>) -> Vec<Mat<S>> {
    hermitian_part_of_span(a.span())
}

pub fn hermitian_part_of_span<S: Scalar>(span: &MatSpan<S>) -> Vec<Mat<S>> {
    let d = span.dim();
    if d == 0 {
        return Vec::new();
    }
    let n = span.n();
    let mut cols: Vec<Mat<S>> = Vec::with_capacity(2 * d);
    for b in span.basis() {
        cols.push(b - &b.adjoint());
    }
    for b in span.basis() {
        cols.push((b + &b.adjoint()).scale(&S::i()));
    }
    let rows = 2 * n * n;
    let sys = Mat::from_fn(rows, 2 * d, |r, c| {
        let z = &cols[c].entries()[r / 2];
        if r % 2 == 0 {
            z.re()
        } else {
            z.im()
        }
    });
    let kernel = real_kernel(&sys);
    kernel
        .iter()
        .map(|v| {
            let coeffs: Vec<S> = (0..d).map(|k| v[k].clone() + v[d + k].clone() * S::i()).collect();
            span.element(&coeffs)
        })
        .collect()
}

/// Kernel of a real matrix as real vectors. The numeric SVD may return
/// complex phases, so real and imaginary parts are separated and reduced.
fn real_kernel<S: Scalar>(m: &Mat<S>) -> Vec<Vector<S>> {
    let k = kernel_vectors(m);
    if S::EXACT {
        return k;
    }
    let cols = m.cols();
    let mut sb = SpanBuilder::new(cols);
    for v in &k {
        let re = Vector(v.0.iter().map(|x| x.re()).collect());
        let im = Vector(v.0.iter().map(|x| x.im()).collect());
        sb.insert(&re);
        sb.insert(&im);
    }
    sb.vectors().to_vec()
}

/// Result of the projection search.
#[derive(Clone, Debug)]
pub enum ProjectionSearch<S> {
    Found {
        projection: Mat<S>,
        /// The algebra element whose spectrum produced it.
        source: Mat<S>,
        eigenvalue: S,
    },
    /// Every sampled element had a single eigenvalue. Not a certificate.
    AbsentSampled { samples: usize },
}

pub const DEFAULT_SAMPLES: usize = 20;

/// Looks for P ∈ A with P² = P, P ∉ {0, I}, among idempotents obtained from
/// elements with at least two eigenvalues: the basis, then `samples` seeded
/// random combinations.
pub fn find_nonscalar_projection<S: Scalar>(
    a: &OperatorAlgebra<S>,
    seed: u64,
    samples: usize,
) -> Result<ProjectionSearch<S>> {
    let n = a.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elems: Vec<Mat<S>> = a.basis().to_vec();
    for _ in 0..samples {
        elems.push(a.span().sample(&mut rng));
    }
    let total = elems.len();
    for b in elems {
        let spec = spectrum(&b)?;
        if !spec.complete || spec.values.len() < 2 {
            continue;
        }
        let Some((lambda, _)) = spec.values.iter().find(|(v, _)| !v.is_zero()).cloned() else {
            continue;
        };
        let p = idempotent_polynomial(&b, &lambda, &spec)?;
        if p.is_zero() || p.approx_eq(&Mat::identity(n)) || !(&p * &p).approx_eq(&p) {
            continue;
        }
        return Ok(ProjectionSearch::Found {
            projection: p,
            source: b,
            eigenvalue: lambda,
        });
    }
    Ok(ProjectionSearch::AbsentSampled { samples: total })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct HereditaryCounterexample<S> {
    pub e1: Subspace<S>,
    pub e2: Subspace<S>,
    pub compressed_witness: Mat<S>,
}

#[derive(Clone, Debug)]
pub struct HereditaryVerdict<S> {
    pub status: Verdict,
    pub counterexample: Option<HereditaryCounterexample<S>>,
    pub lattice_complete: bool,
    pub pairs_checked: usize,
}

/// Every subquotient E1 ⊖ E2 over lattice pairs E2 ⊆ E1 is antisymmetric.
///
/// Pairs are visited in the lattice's canonical order so the reported
/// counterexample is the first failing pair. Subquotients of dimension ≤ 1
/// are skipped since they are always scalar.
pub fn is_hereditarily_antisymmetric<S: Scalar>(
    a: &OperatorAlgebra<S>,
    lattice: &[Subspace<S>],
    lattice_complete: bool,
) -> Result<HereditaryVerdict<S>> {
    for e in lattice {
        if !is_invariant(a, e) {
            return Err(Error::Precondition(
                "lattice contains a subspace that is not invariant".into(),
            ));
        }
    }
    let mut sorted: Vec<Subspace<S>> = lattice.to_vec();
    sorted.sort_by(|x, y| x.canonical_cmp(y));
    let mut pairs = 0;
    for e1 in &sorted {
        for e2 in &sorted {
            if e1.dim() < e2.dim() + 2 || !e1.contains_subspace(e2) {
                continue;
            }
            pairs += 1;
            let spec = SemiInvariantSpec::new(a, e1.clone(), e2.clone())?;
            let c = compress_span(a.span(), &spec.e);
            let rep = antisymmetry_of_span(&c.span, &c.projection);
            if let Some(w) = rep.witness {
                return Ok(HereditaryVerdict {
                    status: Verdict::No,
                    counterexample: Some(HereditaryCounterexample {
                        e1: e1.clone(),
                        e2: e2.clone(),
                        compressed_witness: w,
                    }),
                    lattice_complete,
                    pairs_checked: pairs,
                });
            }
        }
    }
    Ok(HereditaryVerdict {
        status: if lattice_complete {
            Verdict::Yes
        } else {
            Verdict::Unknown
        },
        counterexample: None,
        lattice_complete,
        pairs_checked: pairs,
    })
}

/// Re-checks a counterexample: invariance, containment, and that the witness
/// is a self-adjoint non-scalar element of the compression.
pub fn counterexample_is_valid<S: Scalar>(a: &OperatorAlgebra<S>, cx: &HereditaryCounterexample<S>) -> bool {
    let Ok(spec) = SemiInvariantSpec::new(a, cx.e1.clone(), cx.e2.clone()) else {
        return false;
    };
    let c = compress_span(a.span(), &spec.e);
    witness_is_valid(&c.span, &c.projection, &cx.compressed_witness)
}
