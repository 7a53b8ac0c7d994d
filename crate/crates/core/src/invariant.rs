//! Invariant, coinvariant and semi-invariant subspaces; compressions to them;
//! companion subspaces and the natural projection.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::families;
use crate::linalg::{spectrum, Mat, SpanBuilder, Subspace, Vector};
use crate::matspan::{MatSpan, OperatorAlgebra, Provenance};
use crate::scalar::Scalar;

/// E·v ⊆ E for every basis element.
pub fn is_invariant<S: Scalar>(a: &OperatorAlgebra<S>, e: &Subspace<S>) -> bool {
    e.ambient() == a.n() && a.basis().iter().all(|b| e.is_invariant_under(b))
}

/// Invariant under A*, equivalently E⊥ is invariant under A.
pub fn is_coinvariant<S: Scalar>(a: &OperatorAlgebra<S>, e: &Subspace<S>) -> bool {
    e.ambient() == a.n() && a.basis().iter().all(|b| e.is_invariant_under(&b.adjoint()))
}

/// Smallest invariant subspace containing every vector of `seed`.
pub fn orbit<S: Scalar>(mats: &[Mat<S>], n: usize, seed: &[Vector<S>]) -> Subspace<S> {
    let mut sb = SpanBuilder::new(n);
    let mut queue: Vec<Vector<S>> = Vec::new();
    for v in seed {
        if sb.insert(v) {
            queue.push(v.clone());
        }
    }
    let mut k = 0;
    while k < queue.len() && !sb.is_full() {
        let w = queue[k].clone();
        for b in mats {
            let bw = b.mul_vec(&w);
            if sb.insert_scaled(&bw, b.frobenius() * w.norm()) {
                queue.push(bw);
            }
        }
        k += 1;
    }
    Subspace::span(n, &queue).expect("orbit vectors share a dimension")
}

/// Outcome of the randomized search.
#[derive(Clone, Debug)]
pub enum SearchOutcome<S> {
    Found(Subspace<S>),
    /// The algebra is all of M_n (or n = 1), so no proper nonzero invariant
    /// subspace exists.
    NoneExists,
    Unknown,
}

pub const DEFAULT_BUDGET: usize = 50;

fn proper<S: Scalar>(e: &Subspace<S>) -> bool {
    !e.is_zero() && !e.is_full()
}

fn pick_smallest<S: Scalar>(mut found: Vec<Subspace<S>>) -> Option<Subspace<S>> {
    found.sort_by(|a, b| a.canonical_cmp(b));
    found.into_iter().next()
}

/// Proper invariant subspaces obtained from one algebra element: orbits of
/// eigenvectors of `b` under `mats`.
fn eigen_orbits<S: Scalar>(mats: &[Mat<S>], n: usize, b: &Mat<S>) -> Vec<Subspace<S>> {
    let Ok(spec) = spectrum(b) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (lambda, _) in &spec.values {
        let shifted = b - &Mat::scalar(n, lambda.clone());
        for v in crate::linalg::kernel_vectors(&shifted) {
            let o = orbit(mats, n, &[v]);
            if proper(&o) {
                out.push(o);
            }
        }
    }
    out
}

/// Randomized search for a proper nonzero invariant subspace.
///
/// Each round draws a seeded random element, takes eigenvectors of it and
/// grows their orbits under A; the same is done under A*, whose proper
/// invariant subspaces have invariant orthocomplements. The smallest
/// subspace found in the first successful round is returned.
pub fn find_nontrivial_invariant_subspace<S: Scalar>(
    a: &OperatorAlgebra<S>,
    seed: u64,
    budget: usize,
) -> SearchOutcome<S> {
    let n = a.n();
    if n <= 1 || a.is_full() {
        return SearchOutcome::NoneExists;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = a.basis().to_vec();
    let adj: Vec<_> = mats.iter().map(|m| m.adjoint()).collect();
    let adj_span = a.span().adjoint();
    for round in 0..budget {
        let b = if round == 0 && a.dim() > 0 {
            // a basis element first: cheap and often enough
            mats[0].clone()
        } else {
            a.span().sample(&mut rng)
        };
        let mut found = eigen_orbits(&mats, n, &b);
        let bstar = if round == 0 && a.dim() > 0 {
            adj[0].clone()
        } else {
            adj_span.sample(&mut rng)
        };
        for w in eigen_orbits(&adj, n, &bstar) {
            let c = w.orth_complement();
            if proper(&c) {
                found.push(c);
            }
        }
        if let Some(e) = pick_smallest(found) {
            debug_assert!(is_invariant(a, &e));
            return SearchOutcome::Found(e);
        }
    }
    SearchOutcome::Unknown
}

/// A pair E2 ⊆ E1 of invariant subspaces with E = E1 ⊖ E2.
#[derive(Clone, Debug)]
pub struct SemiInvariantSpec<S> {
    pub e1: Subspace<S>,
    pub e2: Subspace<S>,
    pub e: Subspace<S>,
}

impl<S: Scalar> SemiInvariantSpec<S> {
    pub fn new(a: &OperatorAlgebra<S>, e1: Subspace<S>, e2: Subspace<S>) -> Result<Self> {
        if !is_invariant(a, &e1) {
            return Err(Error::Precondition("E1 is not invariant".into()));
        }
        if !is_invariant(a, &e2) {
            return Err(Error::Precondition("E2 is not invariant".into()));
        }
        let e = e1.orth_difference(&e2)?;
        Ok(SemiInvariantSpec { e1, e2, e })
    }

    /// Subobject on an invariant subspace.
    pub fn subobject(a: &OperatorAlgebra<S>, e1: Subspace<S>) -> Result<Self> {
        let n = e1.ambient();
        Self::new(a, e1, Subspace::zero(n))
    }

    pub fn whole(n: usize) -> Self {
        SemiInvariantSpec {
            e1: Subspace::full(n),
            e2: Subspace::zero(n),
            e: Subspace::full(n),
        }
    }
}

/// P·A·P for P the orthogonal projection onto a semi-invariant subspace,
/// kept as n×n matrices supported on E.
#[derive(Clone, Debug)]
pub struct Compression<S> {
    pub support: Subspace<S>,
    pub projection: Mat<S>,
    pub span: MatSpan<S>,
}

impl<S: Scalar> Compression<S> {
    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    /// All of B(E): dimension dim(E)².
    pub fn is_full(&self) -> bool {
        let d = self.support.dim();
        self.span.dim() == d * d
    }

    pub fn is_product_stable(&self) -> bool {
        self.span.is_product_stable()
    }

    /// Matrices of the compressed basis in the given basis of E (columns of
    /// the returned matrices index `basis`).
    pub fn in_basis(&self, basis: &[Vector<S>]) -> Result<Vec<Mat<S>>> {
        let n = self.support.ambient();
        let v = Mat::from_columns(n, basis);
        let vstar = v.adjoint();
        let left = (&vstar * &v).inverse()? * &vstar;
        Ok(self.span.basis().iter().map(|b| &(&left * b) * &v).collect())
    }
}

/// Compression of a span of matrices to the subspace `e`.
pub fn compress_span<S: Scalar>(span: &MatSpan<S>, e: &Subspace<S>) -> Compression<S> {
    let p = e.projection();
    let mats: Vec<_> = span.basis().iter().map(|b| &(&p * b) * &p).collect();
    Compression {
        support: e.clone(),
        span: MatSpan::span(span.n(), &mats).expect("same dimension"),
        projection: p,
    }
}

/// Compression of A to the semi-invariant subspace of `spec`.
pub fn compress<S: Scalar>(a: &OperatorAlgebra<S>, spec: &SemiInvariantSpec<S>) -> Result<Compression<S>> {
    if !is_invariant(a, &spec.e1) || !is_invariant(a, &spec.e2) {
        return Err(Error::Precondition("spec subspaces are not invariant".into()));
    }
    let c = compress_span(a.span(), &spec.e);
    debug_assert!(c.is_product_stable());
    Ok(c)
}

/// P·Bi·Bj·P = (P·Bi·P)(P·Bj·P) for all basis pairs.
pub fn is_semi_invariant<S: Scalar>(a: &OperatorAlgebra<S>, e: &Subspace<S>) -> bool {
    let p = e.projection();
    let comp: Vec<_> = a.basis().iter().map(|b| &(&p * b) * &p).collect();
    for (bi, ci) in a.basis().iter().zip(&comp) {
        for (bj, cj) in a.basis().iter().zip(&comp) {
            let lhs = &(&p * &(bi * bj)) * &p;
            if !lhs.approx_eq(&(ci * cj)) {
                return false;
            }
        }
    }
    true
}

/// Range F, kernel E2 ⊕ E1⊥.
#[derive(Clone, Debug)]
pub struct CompanionProjection<S> {
    pub f: Subspace<S>,
    pub q: Mat<S>,
}

pub fn natural_projection<S: Scalar>(
    spec: &SemiInvariantSpec<S>,
    f: &Subspace<S>,
) -> Result<CompanionProjection<S>> {
    let n = spec.e1.ambient();
    Error::check_dim(n, f.ambient())?;
    if !spec.e1.contains_subspace(f) {
        return Err(Error::Precondition("F must lie in E1".into()));
    }
    if f.dim() + spec.e2.dim() != spec.e1.dim() || !f.intersect(&spec.e2)?.is_zero() {
        return Err(Error::Precondition(
            "F must be a direct complement of E2 in E1".into(),
        ));
    }
    let mut cols: Vec<Vector<S>> = f.basis().to_vec();
    cols.extend(spec.e2.basis().iter().cloned());
    cols.extend(spec.e1.orth_complement().basis().iter().cloned());
    let s = Mat::from_columns(n, &cols);
    let sinv = s.inverse()?;
    let mut d = Mat::zero(n);
    for i in 0..f.dim() {
        d[(i, i)] = S::one();
    }
    let q = &(&s * &d) * &sinv;
    Ok(CompanionProjection { f: f.clone(), q })
}

/// Matrix of the operator `m` (which maps `basis`'s span into itself) in
/// `basis`.
fn restricted<S: Scalar>(m: &Mat<S>, basis: &[Vector<S>]) -> Result<Mat<S>> {
    let n = m.rows();
    let v = Mat::from_columns(n, basis);
    let vstar = v.adjoint();
    let left = &(&vstar * &v).inverse()? * &vstar;
    Ok(&(&left * m) * &v)
}

/// Checks Φ(QBQ) = PBP on every basis element, where Φ(X) = P0·X·P0⁻¹ and P0
/// is the restriction of the orthogonal projection onto E to F.
pub fn compression_isomorphism_check<S: Scalar>(
    a: &OperatorAlgebra<S>,
    spec: &SemiInvariantSpec<S>,
    companion: &CompanionProjection<S>,
) -> Result<bool> {
    let n = a.n();
    let f = companion.f.basis().to_vec();
    let e = spec.e.basis().to_vec();
    if f.len() != e.len() {
        return Err(Error::Precondition("dim F must equal dim E".into()));
    }
    if e.is_empty() {
        return Ok(true);
    }
    let p = spec.e.projection();
    // P0 : F → E in the chosen bases
    let pf: Vec<_> = f.iter().map(|x| p.mul_vec(x)).collect();
    let ev = Mat::from_columns(n, &e);
    let evs = ev.adjoint();
    let e_left = &(&evs * &ev).inverse()? * &evs;
    let p0 = &e_left * &Mat::from_columns(n, &pf);
    let p0_inv = p0
        .inverse()
        .map_err(|_| Error::ConstructionFailure("restriction of P to F is singular".into()))?;
    let q = &companion.q;
    for b in a.basis() {
        let x = restricted(&(&(q * b) * q), &f)?;
        let y = restricted(&(&(&p * b) * &p), &e)?;
        let phi = &(&p0 * &x) * &p0_inv;
        if !phi.approx_eq(&y) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariant subspaces with a completeness flag.
#[derive(Clone, Debug)]
pub struct Lattice<S> {
    pub subspaces: Vec<Subspace<S>>,
    pub complete: bool,
}

/// Sums and intersections of searched subspaces can generate an infinite
/// lattice (four lines in general position in a plane already do), so the
/// closure stops growing at this size.
const LATTICE_CAP: usize = 128;

/// Sorts, deduplicates and closes under sums and intersections, up to
/// `LATTICE_CAP` members.
pub fn close_lattice<S: Scalar>(n: usize, mut subs: Vec<Subspace<S>>) -> Vec<Subspace<S>> {
    subs.push(Subspace::zero(n));
    subs.push(Subspace::full(n));
    let dedup = |v: &mut Vec<Subspace<S>>| {
        v.sort_by(|a, b| a.canonical_cmp(b));
        let mut out: Vec<Subspace<S>> = Vec::new();
        for s in v.drain(..) {
            if !out.iter().any(|t| t.same(&s)) {
                out.push(s);
            }
        }
        *v = out;
    };
    dedup(&mut subs);
    loop {
        let before = subs.len();
        let mut extra = Vec::new();
        'pairs: for i in 0..subs.len() {
            for j in i + 1..subs.len() {
                for c in [
                    subs[i].sum(&subs[j]).expect("same ambient"),
                    subs[i].intersect(&subs[j]).expect("same ambient"),
                ] {
                    if !subs.iter().chain(&extra).any(|t| t.same(&c)) {
                        extra.push(c);
                        if subs.len() + extra.len() >= LATTICE_CAP {
                            break 'pairs;
                        }
                    }
                }
            }
        }
        subs.extend(extra);
        dedup(&mut subs);
        if subs.len() == before || subs.len() >= LATTICE_CAP {
            return subs;
        }
    }
}

/// Invariant-subspace lattice: exact for family provenances, otherwise the
/// meet/join closure of everything the randomized search and the eigenvector
/// orbits of basis elements turn up (complete only for M_n itself).
pub fn invariant_lattice<S: Scalar>(a: &OperatorAlgebra<S>, seed: u64, budget: usize) -> Lattice<S> {
    if !matches!(a.provenance(), Provenance::Generic) {
        if let Ok(l) = families::classify_invariants(a) {
            return l;
        }
    }
    let n = a.n();
    if n <= 1 || a.is_full() {
        return Lattice {
            subspaces: close_lattice(n, Vec::new()),
            complete: true,
        };
    }
    let mats = a.basis().to_vec();
    let adj: Vec<_> = mats.iter().map(|m| m.adjoint()).collect();
    let mut found = Vec::new();
    for b in &mats {
        found.extend(eigen_orbits(&mats, n, b));
    }
    for b in &adj {
        found.extend(eigen_orbits(&adj, n, b).into_iter().map(|w| w.orth_complement()));
    }
    for k in 0..budget as u64 {
        if let SearchOutcome::Found(e) = find_nontrivial_invariant_subspace(a, seed.wrapping_add(k), 1) {
            found.push(e);
        }
    }
    found.retain(|e| is_invariant(a, e));
    Lattice {
        subspaces: close_lattice(n, found),
        complete: false,
    }
}

/// First pair E2 ⊂ E1 (in lattice order) whose compression is all of B(E1 ⊖ E2)
/// with dim(E1 ⊖ E2) ≥ 2.
pub fn full_subquotient_witness<S: Scalar>(
    a: &OperatorAlgebra<S>,
    lattice: &[Subspace<S>],
) -> Option<SemiInvariantSpec<S>> {
    for e1 in lattice {
        for e2 in lattice {
            if e1.dim() < e2.dim() + 2 || !e1.contains_subspace(e2) {
                continue;
            }
            let Ok(spec) = SemiInvariantSpec::new(a, e1.clone(), e2.clone()) else {
                continue;
            };
            if compress_span(a.span(), &spec.e).is_full() {
                return Some(spec);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::make_tn;
    use crate::matspan::close_algebra;
    use crate::scalar::GaussRat;

    type Q = GaussRat;

    fn span_of(n: usize, idx: &[usize]) -> Subspace<Q> {
        Subspace::coordinate(n, idx)
    }

    #[test]
    fn tn_invariance() {
        let t = make_tn::<Q>(3);
        assert!(is_invariant(&t, &span_of(3, &[0, 1])));
        assert!(!is_invariant(&t, &span_of(3, &[1])));
        assert!(is_invariant(&t, &Subspace::zero(3)));
        assert!(is_invariant(&t, &Subspace::full(3)));
    }

    #[test]
    fn search_on_full_and_triangular() {
        let m3 = close_algebra::<Q>(
            3,
            &[Mat::unit(3, 0, 1), Mat::unit(3, 1, 2), Mat::unit(3, 2, 0)],
            true,
        )
        .unwrap();
        assert!(matches!(
            find_nontrivial_invariant_subspace(&m3, 0, 10),
            SearchOutcome::NoneExists
        ));
        let t = make_tn::<Q>(3);
        match find_nontrivial_invariant_subspace(&t, 0, 10) {
            SearchOutcome::Found(e) => assert!(e == span_of(3, &[0]) || e == span_of(3, &[0, 1])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semi_invariance() {
        let t = make_tn::<Q>(3);
        assert!(is_semi_invariant(&t, &span_of(3, &[1])));
        let m2 = close_algebra::<Q>(2, &[Mat::unit(2, 0, 1), Mat::unit(2, 1, 0)], true).unwrap();
        assert!(!is_semi_invariant(&m2, &span_of(2, &[0])));
    }

    #[test]
    fn tn_compression_is_t2_shaped() {
        let t = make_tn::<Q>(4);
        let spec = SemiInvariantSpec::new(&t, span_of(4, &[0, 1, 2]), span_of(4, &[0])).unwrap();
        let c = compress(&t, &spec).unwrap();
        assert_eq!(c.dim(), 2);
        let mats = c.in_basis(&[Vector::unit(4, 1), Vector::unit(4, 2)]).unwrap();
        for m in mats {
            assert!(m.is_upper_triangular());
            assert_eq!(m[(0, 0)], m[(1, 1)]);
        }
    }

    #[test]
    fn natural_projection_on_t2() {
        let t = make_tn::<Q>(2);
        let spec = SemiInvariantSpec::new(&t, Subspace::full(2), span_of(2, &[0])).unwrap();
        let f = Subspace::span(2, &[Vector::from_i64(&[1, 1])]).unwrap();
        let cp = natural_projection(&spec, &f).unwrap();
        assert_eq!(cp.q.mul_vec(&Vector::unit(2, 1)), Vector::from_i64(&[1, 1]));
        assert!(cp.q.mul_vec(&Vector::unit(2, 0)).is_zero());
        assert!(compression_isomorphism_check(&t, &spec, &cp).unwrap());
    }
}
