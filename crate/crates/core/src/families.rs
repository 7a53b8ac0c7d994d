//! The structured families T_n, D_v, J_v and A_⪯, with their exact
//! invariant-subspace lattices and the combinatorial conditions that decide
//! (hereditary) antisymmetry for them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::{is_invariant, Lattice};
use crate::linalg::{Mat, Subspace, Vector};
use crate::matspan::{random_coefficient, MatSpan, OperatorAlgebra, Provenance};
use crate::scalar::Scalar;
use crate::triangular::{jordanesque_check, BlockOrderedBasis};

/// Largest n for subset enumerations (anti-orthogonality, lower sets).
pub const ENUMERATION_GUARD: usize = 16;

/// Upper triangular matrices constant on the diagonal.
pub fn make_tn<S: Scalar>(n: usize) -> OperatorAlgebra<S> {
    let mut mats = vec![Mat::identity(n)];
    for i in 0..n {
        for j in i + 1..n {
            mats.push(Mat::unit(n, i, j));
        }
    }
    let span = MatSpan::span(n, &mats).expect("units have the ambient size");
    OperatorAlgebra::from_parts_unchecked(span, true, Provenance::Tn)
}

fn basis_matrix<S: Scalar>(v: &[Vector<S>]) -> Result<(Mat<S>, Mat<S>)> {
    let n = v.len();
    for x in v {
        Error::check_dim(n, x.dim())?;
    }
    let m = Mat::from_columns(n, v);
    let inv = m.inverse().map_err(|_| Error::RankDeficient {
        rank: m.rank(),
        expected: n,
    })?;
    Ok((m, inv))
}

/// The operator whose matrix in the basis v is the unit E_ij, i.e. v_j ↦ v_i.
fn v_unit<S: Scalar>(vm: &Mat<S>, vinv: &Mat<S>, i: usize, j: usize) -> Mat<S> {
    let n = vm.rows();
    Mat::from_fn(n, n, |r, c| vm[(r, i)].clone() * vinv[(j, c)].clone())
}

/// The operator v_j ↦ v_i (other basis vectors to 0), as a matrix in the
/// standard basis.
pub fn basis_unit<S: Scalar>(v: &[Vector<S>], i: usize, j: usize) -> Result<Mat<S>> {
    let (vm, vinv) = basis_matrix(v)?;
    if i >= v.len() || j >= v.len() {
        return Err(Error::InvalidInput(format!(
            "index out of range for a basis of {}",
            v.len()
        )));
    }
    Ok(v_unit(&vm, &vinv, i, j))
}

/// Operators diagonal in the basis v.
pub fn make_dv<S: Scalar>(v: &[Vector<S>]) -> Result<OperatorAlgebra<S>> {
    let (vm, vinv) = basis_matrix(v)?;
    let n = v.len();
    let mats: Vec<_> = (0..n).map(|i| v_unit(&vm, &vinv, i, i)).collect();
    let span = MatSpan::span(n, &mats)?;
    Ok(OperatorAlgebra::from_parts_unchecked(
        span,
        true,
        Provenance::Dv { basis: v.to_vec() },
    ))
}

fn nonzero_inner<S: Scalar>(x: &Vector<S>, y: &Vector<S>) -> (bool, f64) {
    let g = x.inner(y);
    let scale = x.norm() * y.norm();
    let rel = if scale > 0.0 { g.magnitude() / scale } else { 0.0 };
    (!g.is_negligible(scale), rel)
}

/// Edge i-j iff ⟨v_i, v_j⟩ ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonorthGraph {
    pub n: usize,
    pub adjacency: Vec<bool>,
}

impl NonorthGraph {
    pub fn edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..self.n {
                if !seen[j] && self.edge(i, j) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn nonorth_graph<S: Scalar>(v: &[Vector<S>]) -> NonorthGraph {
    let n = v.len();
    let mut adjacency = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                adjacency[i * n + j] = nonzero_inner(&v[i], &v[j]).0;
            }
        }
    }
    NonorthGraph { n, adjacency }
}

pub fn is_connected(g: &NonorthGraph) -> bool {
    g.is_connected()
}

/// Result of an exhaustive projection-inner-product enumeration.
#[derive(Clone, Debug)]
pub struct NonorthReport<V> {
    pub holds: bool,
    /// First failing configuration in enumeration order.
    pub violation: Option<V>,
    /// Smallest |⟨Pv, w⟩| / (‖v‖‖w‖) seen; a stability indicator for the
    /// numeric backend.
    pub min_margin: f64,
}

/// (i, j, X) with ⟨P v_i, v_j⟩ = 0 for P the projection onto span{v_k : k ∈ X}⊥.
pub type AntiOrthViolation = (usize, usize, Vec<usize>);

/// For every i < j and X ⊆ {1..n} ∖ {i, j}: ⟨P v_i, v_j⟩ ≠ 0 with P the
/// orthogonal projection onto span{v_k : k ∈ X}⊥. Subsets are visited in
/// increasing bitmask order, so X = ∅ comes first for each pair.
pub fn is_anti_orthogonal<S: Scalar>(v: &[Vector<S>]) -> Result<NonorthReport<AntiOrthViolation>> {
    let n = v.len();
    if n > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded {
            what: "anti-orthogonality enumeration size",
            value: n,
            limit: ENUMERATION_GUARD,
        });
    }
    for x in v {
        Error::check_dim(n, x.dim())?;
    }
    let mut min_margin = f64::INFINITY;
    let mut violation = None;
    let id = Mat::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
            for mask in 0u32..(1u32 << rest.len()) {
                let x: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &k)| k)
                    .collect();
                let sub: Vec<_> = x.iter().map(|&k| v[k].clone()).collect();
                let p = &id - &Subspace::span(n, &sub)?.projection();
                let (ok, margin) = nonzero_inner(&p.mul_vec(&v[i]), &v[j]);
                let margin = margin * p.mul_vec(&v[i]).norm() / v[i].norm().max(f64::MIN_POSITIVE);
                min_margin = min_margin.min(margin);
                if !ok && violation.is_none() {
                    violation = Some((i, j, x));
                }
            }
        }
    }
    Ok(NonorthReport {
        holds: violation.is_none(),
        violation,
        min_margin,
    })
}

/// All operators that are Jordanesque in the block ordered basis b.
pub fn make_jv<S: Scalar>(b: &BlockOrderedBasis<S>) -> Result<OperatorAlgebra<S>> {
    let n = b.n();
    let (vm, vinv) = basis_matrix(b.vectors())?;
    let mut mats = Vec::new();
    for j in 0..b.k() {
        let r = b.block_range(j);
        let mut d = Mat::zero(n);
        for p in r.clone() {
            d = &d + &v_unit(&vm, &vinv, p, p);
        }
        mats.push(d);
        for p in r.clone() {
            for q in p + 1..r.end {
                mats.push(v_unit(&vm, &vinv, p, q));
            }
        }
    }
    let span = MatSpan::span(n, &mats)?;
    Ok(OperatorAlgebra::from_parts_unchecked(
        span,
        true,
        Provenance::Jv { basis: b.clone() },
    ))
}

/// Prefix tuple m and the pair of blocks j < j′ failing the condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuitabilityViolation {
    pub m: Vec<usize>,
    pub j: usize,
    pub j2: usize,
}

/// Largest number of prefix tuples enumerated.
pub const PREFIX_GUARD: usize = 1 << 16;

fn prefix_tuples(sizes: &[usize]) -> Result<Vec<Vec<usize>>> {
    let count = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s + 1))
        .unwrap_or(usize::MAX);
    if count > PREFIX_GUARD {
        return Err(Error::GuardExceeded {
            what: "prefix tuple count",
            value: count,
            limit: PREFIX_GUARD,
        });
    }
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=s).map(move |m| {
                    let mut t = t.clone();
                    t.push(m);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// For every prefix tuple (m_1..m_k) and blocks j < j′ that are not
/// exhausted: ⟨P v^j_{m_j+1}, v^{j′}_{m_{j′}+1}⟩ ≠ 0, P the projection onto
/// the orthocomplement of the (m_1..m_k) subspace.
///
/// The condition is unchanged by rescaling basis vectors, so block
/// orthogonality is all that is required of b.
pub fn is_suitably_nonorthogonal<S: Scalar>(
    b: &BlockOrderedBasis<S>,
) -> Result<NonorthReport<SuitabilityViolation>> {
    if !b.is_block_orthogonal() {
        return Err(Error::Precondition("blocks must be orthogonal".into()));
    }
    let n = b.n();
    let id = Mat::identity(n);
    let mut min_margin = f64::INFINITY;
    let mut violation = None;
    for m in prefix_tuples(b.block_sizes())? {
        let open: Vec<usize> = (0..b.k()).filter(|&j| m[j] < b.block_sizes()[j]).collect();
        if open.len() < 2 {
            continue;
        }
        let p = &id - &b.prefix_subspace(&m)?.projection();
        for (a, &j) in open.iter().enumerate() {
            for &j2 in &open[a + 1..] {
                let x = &b.block(j)[m[j]];
                let y = &b.block(j2)[m[j2]];
                let (ok, margin) = nonzero_inner(&p.mul_vec(x), y);
                let margin = margin * p.mul_vec(x).norm() / x.norm();
                min_margin = min_margin.min(margin);
                if !ok && violation.is_none() {
                    violation = Some(SuitabilityViolation { m: m.clone(), j, j2 });
                }
            }
        }
    }
    Ok(NonorthReport {
        holds: violation.is_none(),
        violation,
        min_margin,
    })
}

/// Every pair of blocks carries different diagonal values for some element.
pub fn distinguishes_blocks<S: Scalar>(a: &OperatorAlgebra<S>, b: &BlockOrderedBasis<S>) -> Result<bool> {
    let mut values = Vec::with_capacity(a.dim());
    for m in a.basis() {
        let chk = jordanesque_check(m, b)?;
        if let Some((row, col)) = chk.violation {
            return Err(Error::NotJordanesque { row, col });
        }
        values.push(chk.block_eigenvalues());
    }
    let k = b.k();
    Ok((0..k).all(|j| (j + 1..k).all(|j2| values.iter().any(|d| !d[j].approx_eq(&d[j2])))))
}

/// A relation i ⪯ j on {0..n-1}, stored as an n×n table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preorder {
    n: usize,
    rel: Vec<bool>,
}

impl Preorder {
    /// Wraps a relation table without validating it.
    pub fn new(n: usize, rel: Vec<bool>) -> Result<Self> {
        if rel.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: rel.len(),
            });
        }
        Ok(Preorder { n, rel })
    }

    /// The listed pairs plus the diagonal; transitivity is checked.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("pair ({i}, {j}) out of range")));
            }
            rel[i * n + j] = true;
        }
        let p = Preorder { n, rel };
        p.validate()?;
        Ok(p)
    }

    /// Reflexive-transitive closure of the pairs.
    pub fn closure(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("pair ({i}, {j}) out of range")));
            }
            rel[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Ok(Preorder { n, rel })
    }

    pub fn equality(n: usize) -> Self {
        Self::closure(n, &[]).expect("no pairs")
    }

    /// i ⪯ j iff i ≤ j.
    pub fn total(n: usize) -> Self {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                rel[i * n + j] = true;
            }
        }
        Preorder { n, rel }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.n + j]
    }

    /// Off-diagonal related pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.le(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.le(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|k| !self.le(i, k) || (0..n).all(|j| !self.le(k, j) || self.le(i, j))))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_reflexive() {
            return Err(Error::InvalidInput("preorder is not reflexive".into()));
        }
        if !self.is_transitive() {
            return Err(Error::InvalidInput("preorder is not transitive".into()));
        }
        Ok(())
    }

    /// Every pair of this preorder is in `other`.
    pub fn is_contained_in(&self, other: &Preorder) -> bool {
        self.n == other.n && self.rel.iter().zip(&other.rel).all(|(a, b)| !a || *b)
    }

    /// Sets L with j ∈ L whenever j ⪯ i for some i ∈ L, in bitmask order.
    pub fn lower_sets(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.n;
        if n > ENUMERATION_GUARD {
            return Err(Error::GuardExceeded {
                what: "lower-set enumeration size",
                value: n,
                limit: ENUMERATION_GUARD,
            });
        }
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let inside = |i: usize| mask >> i & 1 == 1;
            let lower = (0..n).all(|i| !inside(i) || (0..n).all(|j| !self.le(j, i) || inside(j)));
            if lower {
                out.push((0..n).filter(|&i| inside(i)).collect());
            }
        }
        Ok(out)
    }
}

/// span{E_ij : i ⪯ j} for the matrix units of the basis v.
pub fn make_preorder_algebra<S: Scalar>(p: &Preorder, v: &[Vector<S>]) -> Result<OperatorAlgebra<S>> {
    p.validate()?;
    Error::check_dim(p.n(), v.len())?;
    let (vm, vinv) = basis_matrix(v)?;
    let n = v.len();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if p.le(i, j) {
                mats.push(v_unit(&vm, &vinv, i, j));
            }
        }
    }
    let span = MatSpan::span(n, &mats)?;
    Ok(OperatorAlgebra::from_parts_unchecked(
        span,
        true,
        Provenance::PreorderAlg {
            preorder: p.clone(),
            basis: v.to_vec(),
        },
    ))
}

/// The preorder of an algebra containing D_v: i ⪯ j iff E_ii·B·E_jj ≠ 0 for
/// some element B.
pub fn extract_preorder<S: Scalar>(a: &OperatorAlgebra<S>, v: &[Vector<S>]) -> Result<Preorder> {
    let n = a.n();
    Error::check_dim(n, v.len())?;
    let (vm, vinv) = basis_matrix(v)?;
    for i in 0..n {
        if !a.contains(&v_unit(&vm, &vinv, i, i)) {
            return Err(Error::Precondition(format!(
                "the algebra does not contain the diagonal unit {i} of the basis"
            )));
        }
    }
    let mut rel = vec![false; n * n];
    for b in a.basis() {
        let c = &(&vinv * b) * &vm;
        let scale = c.max_abs();
        for i in 0..n {
            for j in 0..n {
                if !c[(i, j)].is_negligible(scale) {
                    rel[i * n + j] = true;
                }
            }
        }
    }
    let p = Preorder::new(n, rel)?;
    p.validate()?;
    Ok(p)
}

fn checked_lattice<S: Scalar>(a: &OperatorAlgebra<S>, mut subs: Vec<Subspace<S>>) -> Result<Lattice<S>> {
    for e in &subs {
        if !is_invariant(a, e) {
            return Err(Error::ConstructionFailure(
                "family lattice contains a non-invariant subspace".into(),
            ));
        }
    }
    subs.sort_by(|x, y| x.canonical_cmp(y));
    Ok(Lattice {
        subspaces: subs,
        complete: true,
    })
}

/// Exact invariant-subspace lattice of a family algebra: chain spans for
/// T_n, coordinate spans in v for D_v, lower sets of ⪯ for A_⪯ and prefix
/// subspaces for J_v.
pub fn classify_invariants<S: Scalar>(a: &OperatorAlgebra<S>) -> Result<Lattice<S>> {
    let n = a.n();
    let subs = match a.provenance() {
        Provenance::Generic => {
            return Err(Error::Unsupported(
                "no exact classification for a generic algebra".into(),
            ))
        }
        Provenance::Tn => (0..=n)
            .map(|k| Subspace::coordinate(n, &(0..k).collect::<Vec<_>>()))
            .collect(),
        Provenance::Dv { basis } => {
            let p = Preorder::equality(n);
            lower_set_spans(&p, basis)?
        }
        Provenance::PreorderAlg { preorder, basis } => lower_set_spans(preorder, basis)?,
        Provenance::Jv { basis } => prefix_tuples(basis.block_sizes())?
            .iter()
            .map(|m| basis.prefix_subspace(m))
            .collect::<Result<Vec<_>>>()?,
    };
    checked_lattice(a, subs)
}

fn lower_set_spans<S: Scalar>(p: &Preorder, v: &[Vector<S>]) -> Result<Vec<Subspace<S>>> {
    let n = v.len();
    p.lower_sets()?
        .into_iter()
        .map(|l| Subspace::span(n, &l.iter().map(|&i| v[i].clone()).collect::<Vec<_>>()))
        .collect()
}

/// The pair (i, j) for enlarging D_v by E_ij while keeping antisymmetry: an
/// orthogonal pair if there is one, else the pair minimizing |⟨v_i, v_j⟩|
/// after normalizing.
pub fn enlargement_pair<S: Scalar>(v: &[Vector<S>]) -> Option<(usize, usize)> {
    let n = v.len();
    let mut best: Option<((usize, usize), f64)> = None;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (nonzero, rel) = nonzero_inner(&v[i], &v[j]);
            if !nonzero {
                return Some((i, j));
            }
            if best.is_none_or(|(_, b)| rel < b) {
                best = Some(((i, j), rel));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Preorder with 0 ⪯ 1 and 1 ⪯ 0 only, on four points.
pub fn fullsubex_preorder() -> Preorder {
    Preorder::from_pairs(4, &[(0, 1), (1, 0)]).expect("valid preorder")
}

/// Seeded search for a basis of C^4 with every ⟨v_i, v_j⟩ ≠ 0 and
/// span{v_1, v_2} ∩ span{v_3, v_4}⊥ = {0}, and the algebra
/// D_v + span{E_12, E_21} on it.
pub fn make_fullsubex_fixture<S: Scalar>(
    seed: u64,
    attempts: usize,
) -> Result<(Vec<Vector<S>>, OperatorAlgebra<S>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let v: Vec<Vector<S>> = (0..4)
            .map(|_| Vector((0..4).map(|_| random_coefficient(&mut rng)).collect()))
            .collect();
        if fullsubex_constraints_hold(&v) {
            let a = make_preorder_algebra(&fullsubex_preorder(), &v)?;
            return Ok((v, a));
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no admissible basis in {attempts} attempts"
    )))
}

/// The constraints on the four-vector basis used by the fixture.
pub fn fullsubex_constraints_hold<S: Scalar>(v: &[Vector<S>]) -> bool {
    if v.len() != 4 || Mat::from_columns(4, v).rank() != 4 {
        return false;
    }
    let g = nonorth_graph(v);
    if (0..4).any(|i| (0..4).any(|j| i != j && !g.edge(i, j))) {
        return false;
    }
    let (Ok(e), Ok(f)) = (Subspace::span(4, &v[..2]), Subspace::span(4, &v[2..])) else {
        return false;
    };
    e.intersect(&f.orth_complement()).is_ok_and(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisymmetry::{is_antisymmetric, is_hereditarily_antisymmetric, Verdict};
    use crate::scalar::GaussRat;

    type Q = GaussRat;

    fn vs(rows: &[&[i64]]) -> Vec<Vector<Q>> {
        rows.iter().map(|r| Vector::from_i64(r)).collect()
    }

    #[test]
    fn tn_dimensions_and_shift() {
        assert_eq!(make_tn::<Q>(1).dim(), 1);
        assert_eq!(make_tn::<Q>(3).dim(), 4);
        assert_eq!(make_tn::<Q>(5).dim(), 11);
        let t = make_tn::<Q>(4);
        let shift = Mat::from_fn(4, 4, |i, j| if j == i + 1 { Q::one() } else { Q::zero() });
        assert!(t.contains(&shift));
        assert!(!t.contains(&shift.transpose()));
    }

    #[test]
    fn dv_standard_and_skew() {
        let d = make_dv(&vs(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(d.contains(&Mat::diag(&[Q::from_i64(3), Q::from_i64(-1)])));
        assert_eq!(d.dim(), 2);
        let v = vs(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 2]]);
        let d = make_dv(&v).unwrap();
        assert_eq!(d.dim(), 3);
        assert!(d.contains(&Mat::identity(3)));
        assert!(make_dv(&vs(&[&[1, 1], &[2, 2]])).is_err());
    }

    #[test]
    fn graph_examples() {
        let g = nonorth_graph(&vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert!(g.edges().is_empty() && !g.is_connected());
        // path 1-2-3 with ⟨v1, v3⟩ = 0
        let v = vs(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 1]]);
        let g = nonorth_graph(&v);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!(g.is_connected());
        let r = is_anti_orthogonal(&v).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violation, Some((0, 2, vec![])));
        let d = make_dv(&v).unwrap();
        assert!(is_antisymmetric(&d).antisymmetric);
        let lat = classify_invariants(&d).unwrap();
        assert_eq!(lat.subspaces.len(), 8);
        let h = is_hereditarily_antisymmetric(&d, &lat.subspaces, true).unwrap();
        assert_eq!(h.status, Verdict::No);
    }

    #[test]
    fn anti_orthogonal_basis() {
        let v = vs(&[&[1, 1, 1], &[1, 2, 0], &[2, 0, 1]]);
        assert!(is_anti_orthogonal(&v).unwrap().holds);
        let d = make_dv(&v).unwrap();
        let lat = classify_invariants(&d).unwrap();
        let h = is_hereditarily_antisymmetric(&d, &lat.subspaces, true).unwrap();
        assert_eq!(h.status, Verdict::Yes);
    }

    #[test]
    fn jv_single_block_is_tn() {
        let b = BlockOrderedBasis::single_block(vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let j = make_jv(&b).unwrap();
        assert!(j.span().same(make_tn::<Q>(3).span()));
        assert!(is_suitably_nonorthogonal(&b).unwrap().holds);
        assert_eq!(classify_invariants(&j).unwrap().subspaces.len(), 4);
    }

    #[test]
    fn jv_lattice_and_blocks() {
        let b = BlockOrderedBasis::new(
            vs(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, 1, 0], &[1, -1, 0, 1]]),
            vec![2, 2],
        )
        .unwrap();
        let j = make_jv(&b).unwrap();
        assert_eq!(j.dim(), 4);
        assert_eq!(classify_invariants(&j).unwrap().subspaces.len(), 9);
        assert!(distinguishes_blocks(&j, &b).unwrap());
        let scal = crate::matspan::close_algebra(4, &[Mat::<Q>::identity(4)], true).unwrap();
        assert!(!distinguishes_blocks(&scal, &b).unwrap());
    }

    #[test]
    fn singleton_blocks_match_anti_orthogonality() {
        for v in [
            vs(&[&[1, 1, 1], &[1, 2, 0], &[2, 0, 1]]),
            vs(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 1]]),
        ] {
            let b = BlockOrderedBasis::singletons(v.clone()).unwrap();
            assert_eq!(
                is_suitably_nonorthogonal(&b).unwrap().holds,
                is_anti_orthogonal(&v).unwrap().holds
            );
        }
    }

    #[test]
    fn preorders() {
        assert!(Preorder::from_pairs(3, &[(0, 1), (1, 2)]).is_err());
        let p = Preorder::closure(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.le(0, 2));
        assert!(Preorder::new(2, vec![false, false, false, true])
            .unwrap()
            .validate()
            .is_err());
        let p = Preorder::from_pairs(3, &[(0, 1)]).unwrap();
        assert_eq!(
            p.lower_sets().unwrap(),
            vec![vec![], vec![0], vec![0, 1], vec![2], vec![0, 2], vec![0, 1, 2]]
        );
    }

    #[test]
    fn preorder_algebra_round_trip() {
        let v = vs(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 2]]);
        let eq = make_preorder_algebra(&Preorder::equality(3), &v).unwrap();
        assert!(eq.span().same(make_dv(&v).unwrap().span()));
        let std = vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let up = make_preorder_algebra(&Preorder::total(3), &std).unwrap();
        assert_eq!(up.dim(), 6);
        assert_eq!(extract_preorder(&up, &std).unwrap(), Preorder::total(3));
        let p = Preorder::closure(3, &[(2, 0)]).unwrap();
        let a = make_preorder_algebra(&p, &v).unwrap();
        assert_eq!(extract_preorder(&a, &v).unwrap(), p);
        assert!(extract_preorder(&make_tn::<Q>(3), &std).is_err());
        let not_reflexive = Preorder::new(
            3,
            vec![true, true, false, false, false, false, false, false, true],
        )
        .unwrap();
        assert!(make_preorder_algebra(&not_reflexive, &v).is_err());
    }

    #[test]
    fn fullsubex_fixture() {
        let (v, a) = make_fullsubex_fixture::<Q>(7, 200).unwrap();
        assert!(fullsubex_constraints_hold(&v));
        assert!(is_antisymmetric(&a).antisymmetric);
        let e = Subspace::span(4, &v[..2]).unwrap();
        assert!(is_invariant(&a, &e));
        assert_eq!(crate::invariant::compress_span(a.span(), &e).dim(), 4);
    }
}
