use opalg::invariant::Lattice;
use opalg::io::{
    decode_subspace, encode_subspace, from_json, to_json, AlgebraDoc, BasisDoc, ChainDoc, ChannelsDoc,
    LatticeDoc, MatrixDoc, PartitionDoc, PreorderDoc, SubspaceDoc, VectorDoc,
};
use opalg::qposet::{example_unordered_gap, max_quantum_chain, top_down_partition};
use opalg::random::{random_block_basis, random_matrix, random_preorder, random_sizes, random_vector};
use opalg::{Cplx, Error, GaussRat, Mat, Scalar, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = GaussRat;
type C = Cplx;

/// Gaussian rationals with assorted denominators and signs.
fn messy_matrix(rng: &mut ChaCha8Rng, n: usize) -> Mat<Q> {
    Mat::from_fn(n, n, |_, _| {
        let re = Q::from_ratio(rng.gen_range(-50..50), rng.gen_range(1..40));
        let im = Q::from_ratio(rng.gen_range(-50..50), rng.gen_range(1..40));
        re + im * Q::i()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matrices_round_trip(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = messy_matrix(&mut rng, n);
        let text = to_json(&MatrixDoc::encode(&m));
        let back: Mat<Q> = from_json::<MatrixDoc>(&text).unwrap().decode().unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(to_json(&MatrixDoc::encode(&back)), text);
    }

    #[test]
    fn numeric_matrices_round_trip_bit_exactly(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Mat::<C>::from_fn(n, n, |_, _| C::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e-3..1e-3)));
        let back: Mat<C> = from_json::<MatrixDoc>(&to_json(&MatrixDoc::encode(&m))).unwrap().decode().unwrap();
        for (x, y) in back.entries().iter().zip(m.entries()) {
            prop_assert_eq!(x.0.re.to_bits(), y.0.re.to_bits());
            prop_assert_eq!(x.0.im.to_bits(), y.0.im.to_bits());
        }
    }

    #[test]
    fn vectors_and_subspaces_round_trip(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_vector::<Q, _>(&mut rng, n);
        let back = from_json::<VectorDoc>(&to_json(&VectorDoc::encode(&v))).unwrap().decode::<Q>().unwrap();
        prop_assert_eq!(&back, &v);
        let e = Subspace::span(n, &[v, random_vector(&mut rng, n)]).unwrap();
        let doc: SubspaceDoc = from_json(&to_json(&encode_subspace(&e))).unwrap();
        prop_assert!(decode_subspace::<Q>(n, &doc).unwrap().same(&e));
    }

    #[test]
    fn algebras_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = vec![random_matrix::<Q, _>(&mut rng, n, 0.4), random_matrix(&mut rng, n, 0.4)];
        let a = opalg::matspan::close_algebra(n, &gens, rng.gen_bool(0.5)).unwrap();
        let back = from_json::<AlgebraDoc>(&to_json(&AlgebraDoc::encode(&a))).unwrap().decode::<Q>().unwrap();
        prop_assert!(back.span().same(a.span()));
        prop_assert_eq!(back.is_unital(), a.is_unital());
    }

    #[test]
    fn preorders_and_bases_round_trip(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_preorder(&mut rng, n);
        prop_assert_eq!(from_json::<PreorderDoc>(&to_json(&PreorderDoc::encode(&p))).unwrap().decode().unwrap(), p);
        let k = rng.gen_range(1..=n);
        let sizes = random_sizes(&mut rng, n, k);
        let b = random_block_basis::<Q, _>(&mut rng, &sizes);
        let back = from_json::<BasisDoc>(&to_json(&BasisDoc::encode(&b))).unwrap().decode::<Q>().unwrap();
        prop_assert_eq!(back.vectors(), b.vectors());
        prop_assert_eq!(back.block_sizes(), b.block_sizes());
    }
}

#[test]
fn chains_partitions_and_lattices_round_trip() {
    let a = example_unordered_gap::<Q>();
    let chain = max_quantum_chain(&a, 0).unwrap();
    let back = from_json::<ChainDoc>(&to_json(&ChainDoc::encode(&chain)))
        .unwrap()
        .decode::<Q>()
        .unwrap();
    assert_eq!(back.vectors, chain.vectors);
    assert_eq!(back.witnesses, chain.witnesses);

    let p = top_down_partition(&a).unwrap();
    let back = from_json::<PartitionDoc>(&to_json(&PartitionDoc::encode(a.n(), &p)))
        .unwrap()
        .decode::<Q>()
        .unwrap();
    assert_eq!(back.ordered, p.ordered);
    assert!(back.parts.iter().zip(&p.parts).all(|(x, y)| x.same(y)));

    let l = Lattice {
        subspaces: vec![
            Subspace::<Q>::zero(3),
            Subspace::coordinate(3, &[0]),
            Subspace::full(3),
        ],
        complete: true,
    };
    let back = from_json::<LatticeDoc>(&to_json(&LatticeDoc::encode(3, &l)))
        .unwrap()
        .decode::<Q>()
        .unwrap();
    assert!(back.complete);
    assert_eq!(back.subspaces.len(), 3);
}

#[test]
fn entry_forms() {
    let doc: MatrixDoc = from_json(r#"{"n": 2, "entries": [["1/2+3/4 i", [0.5, -1]], [2, "-i"]]}"#).unwrap();
    let m: Mat<Q> = doc.decode().unwrap();
    assert_eq!(m[(0, 0)], Q::from_ratio(1, 2) + Q::from_ratio(3, 4) * Q::i());
    assert_eq!(m[(0, 1)], Q::from_ratio(1, 2) - Q::i());
    assert_eq!(m[(1, 0)], Q::from_i64(2));
    assert_eq!(m[(1, 1)], -Q::i());
}

#[test]
fn malformed_documents_are_parse_errors() {
    assert!(matches!(
        from_json::<MatrixDoc>("{\"n\": 2"),
        Err(Error::Parse(_))
    ));
    let doc: MatrixDoc = from_json(r#"{"n": 2, "entries": [["1", "2"]]}"#).unwrap();
    assert!(doc.decode::<Q>().is_err());
    let doc: MatrixDoc = from_json(r#"{"n": 1, "entries": [["1/0"]]}"#).unwrap();
    assert!(doc.decode::<Q>().is_err());
    let many: ChannelsDoc = from_json(r#"[{"n": 1, "kraus": [{"n": 1, "entries": [["1"]]}]}]"#).unwrap();
    assert_eq!(many.decode::<Q>().unwrap().len(), 1);
    let bad: ChannelsDoc = from_json(r#"{"n": 1, "kraus": [{"n": 1, "entries": [["2"]]}]}"#).unwrap();
    assert!(matches!(bad.decode::<Q>(), Err(Error::CptpViolation(_))));
}

#[test]
fn family_tags_survive_and_are_checked() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b = random_block_basis::<Q, _>(&mut rng, &[2, 1]);
    let a = opalg::families::make_jv(&b).unwrap();
    let doc = AlgebraDoc::encode(&a);
    let back = from_json::<AlgebraDoc>(&to_json(&doc))
        .unwrap()
        .decode::<Q>()
        .unwrap();
    assert_eq!(back.provenance().kind(), "jv");
    assert!(back.span().same(a.span()));

    let mut forged = AlgebraDoc::encode(&opalg::families::make_tn::<Q>(3));
    forged.generators.pop();
    assert!(matches!(forged.decode::<Q>(), Err(Error::InvalidInput(_))));
}
