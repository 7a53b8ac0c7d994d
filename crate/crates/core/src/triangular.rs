//! Simultaneous upper triangularization, spectral idempotents built from
//! polynomials in a single matrix, the diagonal + nilpotent split of a
//! Jordanesque algebra, and the Jordanesque structure basis.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::families;
use crate::invariant::{
    find_nontrivial_invariant_subspace, full_subquotient_witness, Lattice, SearchOutcome, SemiInvariantSpec,
};
use crate::linalg::{gram_schmidt, kernel_vectors, lincomb, solve, Mat, Spectrum, Subspace, Vector};
use crate::matspan::{MatSpan, OperatorAlgebra, Provenance};
use crate::scalar::Scalar;

/// An ordered basis of C^n cut into consecutive blocks.
#[derive(Clone, Debug)]
pub struct BlockOrderedBasis<S> {
    vectors: Vec<Vector<S>>,
    block_sizes: Vec<usize>,
}

impl<S: Scalar> BlockOrderedBasis<S> {
    pub fn new(vectors: Vec<Vector<S>>, block_sizes: Vec<usize>) -> Result<Self> {
        let n = vectors.len();
        for v in &vectors {
            Error::check_dim(n, v.dim())?;
        }
        if block_sizes.contains(&0) {
            return Err(Error::InvalidInput("block sizes must be positive".into()));
        }
        let total: usize = block_sizes.iter().sum();
        if total != n {
            return Err(Error::InvalidInput(format!(
                "block sizes sum to {total}, expected {n}"
            )));
        }
        let rank = Mat::from_columns(n, &vectors).rank();
        if rank != n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        Ok(BlockOrderedBasis { vectors, block_sizes })
    }

    pub fn single_block(vectors: Vec<Vector<S>>) -> Result<Self> {
        let n = vectors.len();
        Self::new(vectors, vec![n])
    }

    /// Every vector its own block.
    pub fn singletons(vectors: Vec<Vector<S>>) -> Result<Self> {
        let n = vectors.len();
        Self::new(vectors, vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn vectors(&self) -> &[Vector<S>] {
        &self.vectors
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn block_range(&self, j: usize) -> Range<usize> {
        let start: usize = self.block_sizes[..j].iter().sum();
        start..start + self.block_sizes[j]
    }

    pub fn block(&self, j: usize) -> &[Vector<S>] {
        &self.vectors[self.block_range(j)]
    }

    /// Block containing position `i`.
    pub fn block_of(&self, i: usize) -> usize {
        block_index(&self.block_sizes)[i]
    }

    /// The basis vectors as columns.
    pub fn matrix(&self) -> Mat<S> {
        Mat::from_columns(self.n(), &self.vectors)
    }

    /// V⁻¹·M·V for V = [v_1 | … | v_n].
    pub fn matrix_in_basis(&self, m: &Mat<S>) -> Result<Mat<S>> {
        Error::check_dim(self.n(), m.rows())?;
        m.in_basis(&self.matrix())
    }

    /// Inverse of [`Self::matrix_in_basis`].
    pub fn from_coordinates(&self, m: &Mat<S>) -> Result<Mat<S>> {
        let v = self.matrix();
        Ok(&(&v * m) * &v.inverse()?)
    }

    fn gram_ok(&self, unit_norms: bool) -> bool {
        (0..self.k()).all(|j| {
            let b = self.block(j);
            b.iter().enumerate().all(|(p, x)| {
                b.iter().enumerate().all(|(q, y)| {
                    let g = x.inner(y);
                    if p != q {
                        g.is_negligible(x.norm() * y.norm())
                    } else {
                        !unit_norms || g.approx_eq(&S::one())
                    }
                })
            })
        })
    }

    /// Each block orthonormal.
    pub fn is_normalized(&self) -> bool {
        self.gram_ok(true)
    }

    /// Each block orthogonal. This is the exact backend's stand-in for
    /// normalization, which would need square roots.
    pub fn is_block_orthogonal(&self) -> bool {
        self.gram_ok(false)
    }

    /// Gram-Schmidt inside every block. The span of each block prefix is
    /// unchanged, so the Jordanesque algebra of the basis is unchanged too.
    pub fn orthogonalize_blocks(&self) -> Result<Self> {
        let mut vectors = Vec::with_capacity(self.n());
        for j in 0..self.k() {
            vectors.extend(gram_schmidt(self.block(j))?.vectors);
        }
        Self::new(vectors, self.block_sizes.clone())
    }

    /// The (m_1, …, m_k) subspace: the first m_j vectors of every block.
    pub fn prefix_subspace(&self, m: &[usize]) -> Result<Subspace<S>> {
        if m.len() != self.k() || m.iter().zip(&self.block_sizes).any(|(a, b)| a > b) {
            return Err(Error::InvalidInput(format!(
                "prefix {m:?} does not fit block sizes {:?}",
                self.block_sizes
            )));
        }
        let mut vs = Vec::new();
        for (j, &mj) in m.iter().enumerate() {
            vs.extend(self.block(j)[..mj].iter().cloned());
        }
        Subspace::span(self.n(), &vs)
    }
}

fn block_index(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(j, &s)| std::iter::repeat_n(j, s))
        .collect()
}

/// First entry (row-major) breaking the Jordanesque pattern of a coordinate
/// matrix: off-block or below-diagonal entries must vanish and each block
/// must be constant on its diagonal.
fn jordanesque_violation<S: Scalar>(m: &Mat<S>, sizes: &[usize]) -> Option<(usize, usize)> {
    let block = block_index(sizes);
    let mut start = Vec::with_capacity(block.len());
    let mut acc = 0;
    for &s in sizes {
        start.extend(std::iter::repeat_n(acc, s));
        acc += s;
    }
    let scale = m.max_abs();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = &m[(r, c)];
            let bad = if block[r] != block[c] || r > c {
                !x.is_negligible(scale)
            } else if r == c {
                let s = start[r];
                !x.approx_eq(&m[(s, s)])
            } else {
                false
            };
            if bad {
                return Some((r, c));
            }
        }
    }
    None
}

/// Outcome of testing one operator against a block ordered basis.
#[derive(Clone, Debug)]
pub struct JordanesqueCheck<S> {
    /// The operator's matrix in the basis.
    pub matrix: Mat<S>,
    pub basis: BlockOrderedBasis<S>,
    pub ok: bool,
    pub violation: Option<(usize, usize)>,
}

impl<S: Scalar> JordanesqueCheck<S> {
    /// Diagonal value of each block (meaningful when `ok`).
    pub fn block_eigenvalues(&self) -> Vec<S> {
        (0..self.basis.k())
            .map(|j| {
                let s = self.basis.block_range(j).start;
                self.matrix[(s, s)].clone()
            })
            .collect()
    }
}

pub fn jordanesque_check<S: Scalar>(m: &Mat<S>, b: &BlockOrderedBasis<S>) -> Result<JordanesqueCheck<S>> {
    let matrix = b.matrix_in_basis(m)?;
    let violation = jordanesque_violation(&matrix, b.block_sizes());
    Ok(JordanesqueCheck {
        matrix,
        basis: b.clone(),
        ok: violation.is_none(),
        violation,
    })
}

/// The spectral idempotent of `a` for the nonzero eigenvalue λ, written as a
/// polynomial in `a` without constant term.
///
/// With μ_1..μ_k the other nonzero eigenvalues, m(·) the algebraic
/// multiplicities and m(0) = 0 when 0 is not an eigenvalue,
/// C = Π_μ ((A² − μA)/(λ(λ−μ)))^{max(m(μ), m(0))} vanishes on every other
/// generalized eigenspace and is unipotent on the one for λ; when k = 0 the
/// product is empty and C = (A/λ)^{max(m(0), 1)} is used instead so that a
/// zero eigenvalue is still killed. Writing C = I + N on the λ-part,
/// T_0 = C and T_j = C·T_{j−1} − T_{j−1} = N^j + N^{j+1}, so the alternating
/// sum of T_0..T_{m(λ)−1} telescopes to the identity there.
///
/// The multiplicities bound every nilpotency index, so they can stand in
/// for n; small exponents keep the numeric evaluation accurate.
pub fn idempotent_polynomial<S: Scalar>(a: &Mat<S>, lambda: &S, spec: &Spectrum<S>) -> Result<Mat<S>> {
    if lambda.is_zero() {
        return Err(Error::ZeroEigenvalue);
    }
    if !spec.complete {
        return Err(Error::Precondition("the spectrum is incomplete".into()));
    }
    let Some(&(_, m_lambda)) = spec.values.iter().find(|(v, _)| v.approx_eq(lambda)) else {
        return Err(Error::EigenvalueNotFound(format!("{lambda}")));
    };
    let n = a.n();
    let m_zero = spec
        .values
        .iter()
        .find(|(v, _)| v.is_zero())
        .map_or(0, |&(_, m)| m);
    let others: Vec<(S, usize)> = spec
        .values
        .iter()
        .filter(|(mu, _)| !mu.is_zero() && !mu.approx_eq(lambda))
        .cloned()
        .collect();
    let c = if others.is_empty() {
        a.scale(&(S::one() / lambda.clone())).pow(m_zero.max(1))
    } else {
        let a2 = a * a;
        let mut prod = Mat::identity(n);
        for (mu, m_mu) in &others {
            let f =
                (&a2 - &a.scale(mu)).scale(&(S::one() / (lambda.clone() * (lambda.clone() - mu.clone()))));
            prod = &prod * &f.pow((*m_mu).max(m_zero));
        }
        prod
    };
    let mut t = c.clone();
    let mut p = c.clone();
    for j in 1..m_lambda {
        t = &(&c * &t) - &t;
        p = if j % 2 == 1 { &p - &t } else { &p + &t };
    }
    if !S::EXACT {
        p = refine_idempotent(p);
    }
    Ok(p)
}

/// Newton steps P ← 3P² − 2P³ toward the nearest idempotent. High powers of
/// A lose digits in floating point; the refined P is still a polynomial in A.
fn refine_idempotent<S: Scalar>(mut p: Mat<S>) -> Mat<S> {
    let defect = |p: &Mat<S>| (&(p * p) - p).max_abs();
    let mut d = defect(&p);
    for _ in 0..8 {
        if d < 1e-15 * p.max_abs().max(1.0) {
            break;
        }
        let p2 = &p * &p;
        let next = &p2.scale(&S::from_i64(3)) - &(&p2 * &p).scale(&S::from_i64(2));
        let dn = defect(&next);
        if dn >= d {
            break;
        }
        p = next;
        d = dn;
    }
    p
}

/// Distinct main-diagonal values of a coordinate matrix with multiplicities.
fn diagonal_spectrum<S: Scalar>(m: &Mat<S>) -> Spectrum<S> {
    let mut values: Vec<(S, usize)> = Vec::new();
    for i in 0..m.rows() {
        let x = &m[(i, i)];
        match values.iter_mut().find(|(v, _)| v.approx_eq(x)) {
            Some((_, c)) => *c += 1,
            None => values.push((x.clone(), 1)),
        }
    }
    Spectrum {
        values,
        complete: true,
    }
}

fn require_jordanesque<S: Scalar>(m: &Mat<S>, b: &BlockOrderedBasis<S>) -> Result<JordanesqueCheck<S>> {
    let chk = jordanesque_check(m, b)?;
    match chk.violation {
        Some((row, col)) => Err(Error::NotJordanesque { row, col }),
        None => Ok(chk),
    }
}

/// The idempotent that is 1 on the blocks of `b` where `a` has diagonal λ
/// and 0 elsewhere, obtained from [`idempotent_polynomial`] with the
/// spectrum read off the Jordanesque matrix.
pub fn spectral_idempotent_poly<S: Scalar>(
    a: &Mat<S>,
    b: &BlockOrderedBasis<S>,
    lambda: &S,
) -> Result<Mat<S>> {
    let chk = require_jordanesque(a, b)?;
    if lambda.is_zero() {
        return Err(Error::ZeroEigenvalue);
    }
    let spec = diagonal_spectrum(&chk.matrix);
    if S::EXACT {
        idempotent_polynomial(a, lambda, &spec)
    } else {
        // Same polynomial, evaluated where the matrix is block triangular
        // so that rounding in the high powers stays local.
        b.from_coordinates(&idempotent_polynomial(&chk.matrix, lambda, &spec)?)
    }
}

/// The element of the algebra generated by `a` whose matrix in `b` is the
/// diagonal of a's matrix: Σ λ·P_λ over the nonzero diagonal values.
pub fn diagonal_part<S: Scalar>(a: &Mat<S>, b: &BlockOrderedBasis<S>) -> Result<Mat<S>> {
    let chk = require_jordanesque(a, b)?;
    let spec = diagonal_spectrum(&chk.matrix);
    let mut d = Mat::zero(a.n());
    for (lambda, _) in &spec.values {
        if lambda.is_zero() {
            continue;
        }
        let p = idempotent_polynomial(a, lambda, &spec)?;
        d = &d + &p.scale(lambda);
    }
    Ok(d)
}

/// A = A_diag + A_nil for an algebra of Jordanesque matrices.
#[derive(Clone, Debug)]
pub struct DiagNilSplit<S> {
    /// Elements diagonal in the basis.
    pub diag: OperatorAlgebra<S>,
    /// Elements strictly upper triangular in the basis; an ideal.
    pub nil: MatSpan<S>,
}

pub fn diag_nil_decompose<S: Scalar>(
    a: &OperatorAlgebra<S>,
    b: &BlockOrderedBasis<S>,
) -> Result<DiagNilSplit<S>> {
    let n = a.n();
    let mut diags = Vec::with_capacity(a.dim());
    let mut nils = Vec::with_capacity(a.dim());
    for m in a.basis() {
        let d = diagonal_part(m, b)?;
        if !a.contains(&d) {
            return Err(Error::ConstructionFailure(
                "diagonal part is not in the algebra".into(),
            ));
        }
        let rest = m - &d;
        let coords = b.matrix_in_basis(&rest)?;
        if (0..n).any(|i| !coords[(i, i)].is_negligible(coords.max_abs())) {
            return Err(Error::ConstructionFailure(
                "remainder is not strictly upper triangular".into(),
            ));
        }
        diags.push(d);
        nils.push(rest);
    }
    let diag_span = MatSpan::span(n, &diags)?;
    let nil = MatSpan::span(n, &nils)?;
    if !diag_span.sum(&nil)?.same(a.span()) {
        return Err(Error::ConstructionFailure("A ≠ A_diag + A_nil".into()));
    }
    for x in a.basis() {
        for y in nil.basis() {
            if !nil.contains(&(x * y)) || !nil.contains(&(y * x)) {
                return Err(Error::ConstructionFailure("A_nil is not an ideal".into()));
            }
        }
    }
    let diag = OperatorAlgebra::from_span(diag_span, a.is_unital(), Provenance::Generic)?;
    Ok(DiagNilSplit { diag, nil })
}

/// An element with real diagonal (in the triangular basis `w`) whose
/// diagonal entries agree exactly where they agree for every element.
///
/// The diagonals of A form a subalgebra of l∞_n: all functions constant on
/// the classes of i ~ j (d_k[i] = d_k[j] for every basis element k),
/// possibly forced to vanish on one class. The target takes 0 on that class
/// and the values 1, 2, 3, … on the others.
pub fn separating_element<S: Scalar>(a: &OperatorAlgebra<S>, w: &[Vector<S>]) -> Result<Mat<S>> {
    let n = a.n();
    Error::check_dim(n, w.len())?;
    let wm = Mat::from_columns(n, w);
    let mut diags: Vec<Vec<S>> = Vec::with_capacity(a.dim());
    for m in a.basis() {
        let c = m.in_basis(&wm)?;
        if let Some((row, col)) = c.first_below_diagonal() {
            return Err(Error::Precondition(format!(
                "element is not upper triangular in the basis (entry {row}, {col})"
            )));
        }
        diags.push((0..n).map(|i| c[(i, i)].clone()).collect());
    }
    let same = |i: usize, j: usize| diags.iter().all(|d| d[i].approx_eq(&d[j]));
    let mut class = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        if let Some(c) = reps.iter().position(|&r| same(r, i)) {
            class[i] = c;
        } else {
            class[i] = reps.len();
            reps.push(i);
        }
    }
    let zero_class = reps.iter().position(|&r| diags.iter().all(|d| d[r].is_zero()));
    let mut label = vec![S::zero(); reps.len()];
    let mut next = 1;
    for (c, l) in label.iter_mut().enumerate() {
        if Some(c) != zero_class {
            *l = S::from_i64(next);
            next += 1;
        }
    }
    let target = Vector((0..n).map(|i| label[class[i]].clone()).collect());
    let sys = Mat::from_fn(n, diags.len(), |i, k| diags[k][i].clone());
    let coeffs = solve(&sys, &target)
        .ok_or_else(|| Error::ConstructionFailure("diagonals do not form a subalgebra of l∞".into()))?;
    Ok(lincomb(&coeffs.0, a.basis()))
}

#[derive(Clone, Debug)]
pub enum Triangularization<S> {
    /// Ordered basis (orthonormal, or orthogonal in the exact backend) in
    /// which every element is upper triangular.
    Basis(Vec<Vector<S>>),
    /// A subquotient of dimension ≥ 2 whose compression is all of B(E).
    Obstruction(SemiInvariantSpec<S>),
    /// The invariant-subspace search ran out of budget at some node.
    Unknown,
}

enum NodeOutcome<S> {
    Done,
    Obstruction(SemiInvariantSpec<S>),
    Unknown,
}

/// Matrices of the compression of A to span(u) in the basis u.
fn coordinate_algebra<S: Scalar>(a: &OperatorAlgebra<S>, u: &[Vector<S>]) -> Result<OperatorAlgebra<S>> {
    let n = a.n();
    let um = Mat::from_columns(n, u);
    let us = um.adjoint();
    let left = &(&us * &um).inverse()? * &us;
    let mats: Vec<_> = a.basis().iter().map(|b| &(&left * b) * &um).collect();
    let span = MatSpan::span(u.len(), &mats)?;
    Ok(OperatorAlgebra::from_parts_unchecked(
        span,
        false,
        Provenance::Generic,
    ))
}

/// Splits E1 ⊖ E2 along an invariant subspace of the compression, E-part
/// first, appending one vector per one-dimensional leaf.
fn triangularize_node<S: Scalar>(
    a: &OperatorAlgebra<S>,
    e1: Subspace<S>,
    e2: Subspace<S>,
    seed: &mut u64,
    budget: usize,
    out: &mut Vec<Vector<S>>,
) -> Result<NodeOutcome<S>> {
    let n = a.n();
    let v = e1.orth_difference(&e2)?;
    match v.dim() {
        0 => return Ok(NodeOutcome::Done),
        1 => {
            out.push(v.basis()[0].clone());
            return Ok(NodeOutcome::Done);
        }
        _ => {}
    }
    let u = v.orthogonal_basis();
    let coord = coordinate_algebra(a, &u)?;
    if coord.is_full() {
        return Ok(NodeOutcome::Obstruction(SemiInvariantSpec::new(a, e1, e2)?));
    }
    let found = find_nontrivial_invariant_subspace(&coord, *seed, budget);
    *seed = seed.wrapping_add(1);
    let sub = match found {
        SearchOutcome::Found(s) => s,
        SearchOutcome::Unknown => return Ok(NodeOutcome::Unknown),
        SearchOutcome::NoneExists => {
            return Err(Error::ConstructionFailure(
                "search reported no invariant subspace for a proper compression".into(),
            ))
        }
    };
    let um = Mat::from_columns(n, &u);
    let image: Vec<_> = sub.basis().iter().map(|x| um.mul_vec(x)).collect();
    let mid = e2.sum(&Subspace::span(n, &image)?)?;
    match triangularize_node(a, mid.clone(), e2, seed, budget, out)? {
        NodeOutcome::Done => triangularize_node(a, e1, mid, seed, budget, out),
        other => Ok(other),
    }
}

/// Flag of +1 steps through a complete lattice, choosing the smallest cover
/// at each step. None if some cover jumps by two or more.
fn lattice_flag<S: Scalar>(n: usize, lattice: &[Subspace<S>]) -> Result<Option<Vec<Vector<S>>>> {
    let mut cur = Subspace::zero(n);
    let mut out = Vec::with_capacity(n);
    while cur.dim() < n {
        let next = lattice
            .iter()
            .filter(|e| e.dim() > cur.dim() && e.contains_subspace(&cur))
            .min_by(|x, y| x.canonical_cmp(y));
        let Some(next) = next else {
            return Ok(None);
        };
        if next.dim() != cur.dim() + 1 {
            return Ok(None);
        }
        out.push(next.orth_difference(&cur)?.basis()[0].clone());
        cur = next.clone();
    }
    Ok(Some(out))
}

fn verified_basis<S: Scalar>(a: &OperatorAlgebra<S>, ordered: &[Vector<S>]) -> Result<Vec<Vector<S>>> {
    let w = gram_schmidt(ordered)?.vectors;
    let wm = Mat::from_columns(a.n(), &w);
    for (k, m) in a.basis().iter().enumerate() {
        if let Some((r, c)) = m.in_basis(&wm)?.first_below_diagonal() {
            return Err(Error::ConstructionFailure(format!(
                "basis element {k} is not upper triangular in the computed basis (entry {r}, {c})"
            )));
        }
    }
    Ok(w)
}

/// Upper triangularizes A or exhibits a full subquotient of dimension ≥ 2.
///
/// With a complete lattice the answer is read off it: the first full
/// subquotient if any, otherwise a maximal flag. Without one, the space is
/// split recursively along invariant subspaces of compressions found by the
/// randomized search, the invariant part first.
pub fn upper_triangularize<S: Scalar>(
    a: &OperatorAlgebra<S>,
    lattice: Option<&Lattice<S>>,
    seed: u64,
    budget: usize,
) -> Result<Triangularization<S>> {
    let n = a.n();
    if let Some(l) = lattice.filter(|l| l.complete) {
        let mut subs = l.subspaces.clone();
        subs.sort_by(|x, y| x.canonical_cmp(y));
        if let Some(spec) = full_subquotient_witness(a, &subs) {
            return Ok(Triangularization::Obstruction(spec));
        }
        if let Some(flag) = lattice_flag(n, &subs)? {
            return Ok(Triangularization::Basis(verified_basis(a, &flag)?));
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut s = seed;
    match triangularize_node(a, Subspace::full(n), Subspace::zero(n), &mut s, budget, &mut out)? {
        NodeOutcome::Done => Ok(Triangularization::Basis(verified_basis(a, &out)?)),
        NodeOutcome::Obstruction(spec) => Ok(Triangularization::Obstruction(spec)),
        NodeOutcome::Unknown => Ok(Triangularization::Unknown),
    }
}

/// ⟨Sv, v⟩ / ⟨v, v⟩; the block eigenvalue when v opens a Jordanesque block.
fn rayleigh<S: Scalar>(s: &Mat<S>, v: &Vector<S>) -> S {
    s.mul_vec(v).inner(v) / v.inner(v)
}

/// Block ordered basis in which every element of a hereditarily
/// antisymmetric algebra is Jordanesque.
///
/// Triangularize (after unitizing), fix a separating element S, then grow the
/// basis one triangular vector w_m at a time. The block whose eigenvalue for
/// S equals S's (m, m) entry is moved last (a new empty block is opened if
/// none does); with F spanned by the other blocks and w_m, the compression
/// of S to F along the last block has that entry as a simple eigenvalue, and
/// its eigenvector extends the last block. Blocks are orthogonalized at the
/// end. Failures mean the input was not hereditarily antisymmetric.
pub fn jordanesque_basis<S: Scalar>(
    a: &OperatorAlgebra<S>,
    seed: u64,
    budget: usize,
) -> Result<BlockOrderedBasis<S>> {
    let n = a.n();
    if n == 0 {
        return Err(Error::InvalidInput("empty ambient space".into()));
    }
    let unital;
    let u = if a.is_unital() {
        a
    } else {
        unital = a.unitization();
        &unital
    };
    let lattice = match u.provenance() {
        Provenance::Generic => None,
        _ => families::classify_invariants(u).ok(),
    };
    let w = match upper_triangularize(u, lattice.as_ref(), seed, budget)? {
        Triangularization::Basis(w) => w,
        Triangularization::Obstruction(_) => {
            return Err(Error::ConstructionFailure(
                "the algebra has a full subquotient of dimension ≥ 2".into(),
            ))
        }
        Triangularization::Unknown => return Err(Error::BudgetExhausted("triangularization search".into())),
    };
    let s = separating_element(u, &w)?;
    let sd = s.in_basis(&Mat::from_columns(n, &w))?;

    let mut blocks: Vec<Vec<Vector<S>>> = vec![vec![w[0].clone()]];
    for m in 1..n {
        let lambda = sd[(m, m)].clone();
        match blocks.iter().position(|b| rayleigh(&s, &b[0]).approx_eq(&lambda)) {
            Some(j) => {
                let b = blocks.remove(j);
                blocks.push(b);
            }
            None => blocks.push(Vec::new()),
        }
        let last = blocks.last().expect("at least one block").clone();
        let mut f: Vec<Vector<S>> = blocks[..blocks.len() - 1].iter().flatten().cloned().collect();
        f.push(w[m].clone());
        let nf = f.len();
        let mut t = f.clone();
        t.extend(last.iter().cloned());
        let tm = Mat::from_columns(n, &t);
        let ts = tm.adjoint();
        let coords = &(&(&(&ts * &tm).inverse()? * &ts) * &s) * &tm;
        let shifted = Mat::from_fn(nf, nf, |i, j| {
            let x = coords[(i, j)].clone();
            if i == j {
                x - lambda.clone()
            } else {
                x
            }
        });
        let ker = kernel_vectors(&shifted);
        if ker.len() != 1 {
            return Err(Error::ConstructionFailure(format!(
                "eigenvalue {lambda} of the compressed separating element has multiplicity {} at step {m}",
                ker.len()
            )));
        }
        let fm = Mat::from_columns(n, &f);
        let mut v = fm.mul_vec(&ker[0]);
        if !S::EXACT {
            v = v.normalized()?;
        }
        blocks.last_mut().expect("at least one block").push(v);
    }
    let sizes = blocks.iter().map(Vec::len).collect();
    let basis = BlockOrderedBasis::new(blocks.into_iter().flatten().collect(), sizes)?;
    let basis = basis.orthogonalize_blocks()?;
    for (k, m) in a.basis().iter().enumerate() {
        let chk = jordanesque_check(m, &basis)?;
        if let Some((r, c)) = chk.violation {
            return Err(Error::ConstructionFailure(format!(
                "basis element {k} is not Jordanesque in the constructed basis (entry {r}, {c})"
            )));
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_dv, make_tn};
    use crate::linalg::spectrum;
    use crate::matspan::close_algebra;
    use crate::scalar::GaussRat;

    type Q = GaussRat;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn std_basis(n: usize, sizes: Vec<usize>) -> BlockOrderedBasis<Q> {
        BlockOrderedBasis::new((0..n).map(|i| Vector::unit(n, i)).collect(), sizes).unwrap()
    }

    #[test]
    fn basis_validation() {
        assert!(BlockOrderedBasis::<Q>::new(vec![Vector::unit(2, 0), Vector::unit(2, 0)], vec![2]).is_err());
        assert!(
            BlockOrderedBasis::<Q>::new(vec![Vector::unit(2, 0), Vector::unit(2, 1)], vec![1, 0, 1]).is_err()
        );
        assert!(BlockOrderedBasis::<Q>::new(vec![Vector::unit(2, 0), Vector::unit(2, 1)], vec![1]).is_err());
        let b = BlockOrderedBasis::<Q>::new(
            vec![
                Vector::from_i64(&[1, 1, 0]),
                Vector::from_i64(&[0, 1, 0]),
                Vector::unit(3, 2),
            ],
            vec![2, 1],
        )
        .unwrap();
        assert!(!b.is_block_orthogonal());
        let o = b.orthogonalize_blocks().unwrap();
        assert!(o.is_block_orthogonal());
        assert_eq!(o.block_of(2), 1);
        assert_eq!(
            o.prefix_subspace(&[1, 0]).unwrap(),
            Subspace::span(3, &[Vector::from_i64(&[1, 1, 0])]).unwrap()
        );
    }

    #[test]
    fn jordanesque_pattern() {
        let b = std_basis(3, vec![2, 1]);
        let good = Mat::<Q>::from_i64(&[&[2, 5, 0], &[0, 2, 0], &[0, 0, 7]]);
        assert!(jordanesque_check(&good, &b).unwrap().ok);
        assert_eq!(
            jordanesque_check(&good, &b).unwrap().block_eigenvalues(),
            vec![q(2), q(7)]
        );
        let off = Mat::<Q>::from_i64(&[&[2, 5, 1], &[0, 2, 0], &[0, 0, 7]]);
        assert_eq!(jordanesque_check(&off, &b).unwrap().violation, Some((0, 2)));
        let diag = Mat::<Q>::from_i64(&[&[2, 5, 0], &[0, 3, 0], &[0, 0, 7]]);
        assert_eq!(jordanesque_check(&diag, &b).unwrap().violation, Some((1, 1)));
    }

    #[test]
    fn idempotent_examples() {
        let a = Mat::<Q>::diag(&[q(2), q(0)]);
        let b = std_basis(2, vec![1, 1]);
        assert_eq!(
            spectral_idempotent_poly(&a, &b, &q(2)).unwrap(),
            Mat::unit(2, 0, 0)
        );
        assert_eq!(
            spectral_idempotent_poly(&a, &b, &q(0)),
            Err(Error::ZeroEigenvalue)
        );
        assert!(matches!(
            spectral_idempotent_poly(&a, &b, &q(5)),
            Err(Error::EigenvalueNotFound(_))
        ));

        let j = Mat::<Q>::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            spectral_idempotent_poly(&j, &std_basis(2, vec![2]), &q(1)).unwrap(),
            Mat::identity(2)
        );

        let a = Mat::<Q>::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 3]]);
        let p = spectral_idempotent_poly(&a, &std_basis(3, vec![2, 1]), &q(2)).unwrap();
        assert_eq!(p, Mat::diag(&[q(1), q(1), q(0)]));
        assert!(close_algebra(3, &[a], false).unwrap().contains(&p));
    }

    #[test]
    fn idempotent_needs_jordanesque_input() {
        let a = Mat::<Q>::from_i64(&[&[1, 0], &[1, 2]]);
        assert!(matches!(
            spectral_idempotent_poly(&a, &std_basis(2, vec![1, 1]), &q(1)),
            Err(Error::NotJordanesque { .. })
        ));
        // basis-free form works on any matrix with a rational spectrum
        let spec = spectrum(&a).unwrap();
        let p = idempotent_polynomial(&a, &q(1), &spec).unwrap();
        assert_eq!(&p * &p, p);
        assert_eq!(&a * &p, &p * &a);
    }

    #[test]
    fn diag_nil_of_diagonal_algebra_and_tn() {
        let a = close_algebra(2, &[Mat::<Q>::diag(&[q(1), q(2)])], true).unwrap();
        let split = diag_nil_decompose(&a, &std_basis(2, vec![1, 1])).unwrap();
        assert!(split.diag.span().same(a.span()));
        assert_eq!(split.nil.dim(), 0);

        let t = make_tn::<Q>(3);
        let split = diag_nil_decompose(&t, &std_basis(3, vec![3])).unwrap();
        assert!(split.diag.span().same(&MatSpan::scalars(3)));
        assert_eq!(split.nil.dim(), 3);
    }

    #[test]
    fn separating_examples() {
        let std: Vec<Vector<Q>> = (0..3).map(|i| Vector::unit(3, i)).collect();
        let scal = close_algebra(3, &[Mat::<Q>::identity(3)], true).unwrap();
        assert_eq!(separating_element(&scal, &std).unwrap(), Mat::identity(3));

        let d = close_algebra(3, &[Mat::<Q>::identity(3), Mat::diag(&[q(1), q(1), q(0)])], true).unwrap();
        let s = separating_element(&d, &std).unwrap();
        assert!(s[(0, 0)] == s[(1, 1)] && s[(0, 0)] != s[(2, 2)]);
        assert!((0..3).all(|i| s[(i, i)].is_real()));

        let s = separating_element(&make_tn::<Q>(3), &std).unwrap();
        assert!(s.is_upper_triangular() && s[(0, 0)] == s[(2, 2)]);
    }

    #[test]
    fn triangularize_tn_and_obstruct_m2() {
        let t = make_tn::<Q>(3);
        match upper_triangularize(&t, None, 0, 20).unwrap() {
            Triangularization::Basis(w) => {
                let wm = Mat::from_columns(3, &w);
                assert!(t
                    .basis()
                    .iter()
                    .all(|b| b.in_basis(&wm).unwrap().is_upper_triangular()));
            }
            other => panic!("{other:?}"),
        }
        let m2 = close_algebra::<Q>(2, &[Mat::unit(2, 0, 1), Mat::unit(2, 1, 0)], true).unwrap();
        assert!(matches!(
            upper_triangularize(&m2, None, 0, 20).unwrap(),
            Triangularization::Obstruction(_)
        ));
    }

    #[test]
    fn jordanesque_basis_of_tn_and_dv() {
        let b = jordanesque_basis(&make_tn::<Q>(3), 0, 20).unwrap();
        assert_eq!(b.block_sizes(), &[3]);

        let v: Vec<Vector<Q>> = vec![
            Vector::from_i64(&[1, 1, 1]),
            Vector::from_i64(&[1, 2, 0]),
            Vector::from_i64(&[2, 0, 1]),
        ];
        let dv = make_dv(&v).unwrap();
        let b = jordanesque_basis(&dv, 0, 20).unwrap();
        assert_eq!(b.block_sizes(), &[1, 1, 1]);
        for x in b.vectors() {
            assert!(v
                .iter()
                .any(|y| Mat::from_columns(3, &[x.clone(), y.clone()]).rank() == 1));
        }
    }
}
