use opalg::channels::{
    can_transition, random_block_channel, random_channel, random_unitary_mix, reachability_algebra,
    transition_witness, trap_subspaces,
};
use opalg::invariant::{is_invariant, is_semi_invariant};
use opalg::qposet::{
    bottom_up_partition, chain_is_valid, chain_partition_is_valid, dilworth_chain_partition,
    is_quantum_antichain, max_quantum_chain, partition_is_valid, power_filtration, prune_chains,
    top_down_partition, verify_quantum_chain,
};
use opalg::random::{random_nilpotent_algebra, random_vector};
use opalg::{Cplx, GaussRat, Mat, Scalar, Subspace, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = GaussRat;
type C = Cplx;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_filtration_descends(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nilpotent_algebra::<Q, _>(&mut rng, n);
        let f = power_filtration(&a).unwrap();
        prop_assert!(f.spans.last().unwrap().is_zero());
        prop_assert_eq!(f.spans.len(), f.nilpotency_index + 1);
        for w in f.spans.windows(2) {
            prop_assert!(w[0].dim() > w[1].dim());
            prop_assert!(w[0].contains_subspace(&w[1]));
            for b in a.basis() {
                for x in w[0].basis() {
                    prop_assert!(w[1].contains(&b.mul_vec(x)));
                }
            }
        }
    }

    #[test]
    fn mirsky_equality(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nilpotent_algebra::<Q, _>(&mut rng, n);
        let r = power_filtration(&a).unwrap().nilpotency_index;
        let chain = max_quantum_chain(&a, seed).unwrap();
        prop_assert_eq!(chain.len(), r);
        prop_assert!(chain_is_valid(&a, &chain));
        let td = top_down_partition(&a).unwrap();
        let bu = bottom_up_partition(&a).unwrap();
        prop_assert_eq!(td.size(), r);
        prop_assert_eq!(bu.size(), r);
        prop_assert!(partition_is_valid(&a, &td));
        prop_assert!(partition_is_valid(&a, &bu));
    }

    #[test]
    fn antichains_are_semi_invariant(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nilpotent_algebra::<Q, _>(&mut rng, n);
        let mut parts = top_down_partition(&a).unwrap().parts;
        parts.extend(bottom_up_partition(&a).unwrap().parts);
        let k = rng.gen_range(1..=n);
        let vs: Vec<Vector<Q>> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
        parts.push(Subspace::span(n, &vs).unwrap());
        for e in parts.iter().filter(|e| !e.is_zero()) {
            if is_quantum_antichain(&a, e).unwrap() {
                prop_assert!(is_semi_invariant(&a, e));
            }
        }
    }

    #[test]
    fn dilworth_partitions_verify(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nilpotent_algebra::<Q, _>(&mut rng, n);
        let dp = dilworth_chain_partition(&a, seed, 16).unwrap();
        prop_assert!(chain_partition_is_valid(&a, &dp.chains));
        prop_assert!(dp.chains.len() <= dp.bound);
        let total: usize = dp.chains.iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, n);
    }

    #[test]
    fn numeric_dilworth_partitions_verify(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nilpotent_algebra::<C, _>(&mut rng, n);
        let dp = dilworth_chain_partition(&a, seed, 32).unwrap();
        prop_assert!(chain_partition_is_valid(&a, &dp.chains));
        prop_assert!(dp.chains.len() <= dp.bound);
    }

    #[test]
    fn pruning_keeps_chains_valid(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nilpotent_algebra::<Q, _>(&mut rng, n);
        let r = power_filtration(&a).unwrap().nilpotency_index;
        // Starting at the standard basis keeps the union spanning.
        let chains: Vec<_> = (0..n)
            .map(|i| {
                let mut v = vec![Vector::<Q>::unit(n, i)];
                for _ in 1..r {
                    let m = a.span().sample(&mut rng);
                    let next = m.mul_vec(v.last().unwrap());
                    v.push(next);
                }
                while v.last().is_some_and(|x| x.is_zero()) {
                    v.pop();
                }
                verify_quantum_chain(&a, &v).unwrap()
            })
            .collect();
        let pruned = prune_chains(n, &chains).unwrap();
        prop_assert!(chain_partition_is_valid(&a, &pruned));
    }

    #[test]
    fn reachability_contains_kraus_and_products(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_channel::<Q, _>(&mut rng, n);
        let r = reachability_algebra(std::slice::from_ref(&c)).unwrap();
        prop_assert!(r.algebra.contains(&Mat::identity(n)));
        for k in &c.kraus {
            prop_assert!(r.algebra.contains(k));
        }
        let v = random_vector::<Q, _>(&mut rng, n);
        let w = random_vector::<Q, _>(&mut rng, n);
        let u = random_vector::<Q, _>(&mut rng, n);
        prop_assume!(!v.is_zero() && !w.is_zero() && !u.is_zero());
        prop_assert!(can_transition(&r, &v, &v).unwrap());
        if let (Some(x), Some(y)) = (transition_witness(&r, &v, &w).unwrap(), transition_witness(&r, &w, &u).unwrap()) {
            prop_assert!(r.algebra.contains(&(&y * &x)));
        }
    }

    #[test]
    fn kraus_mixing_keeps_reachability(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_channel::<Q, _>(&mut rng, n);
        let mixed = random_unitary_mix(&c, &mut rng).unwrap();
        let r1 = reachability_algebra(&[c]).unwrap();
        let r2 = reachability_algebra(&[mixed]).unwrap();
        prop_assert!(r1.algebra.span().same(r2.algebra.span()));
    }

    #[test]
    fn traps_cannot_be_left(seed in any::<u64>(), n1 in 1usize..3, n2 in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_block_channel::<Q, _>(&mut rng, n1, n2);
        let n = n1 + n2;
        let r = reachability_algebra(&[c]).unwrap();
        let traps = trap_subspaces(&r, seed, 20);
        prop_assert!(traps.subspaces.iter().any(|e| e.dim() == n1));
        for e in traps.subspaces.iter().filter(|e| !e.is_zero() && !e.is_full()) {
            prop_assert!(is_invariant(&r.algebra, e));
            let perp = e.orth_complement();
            let v = e.basis().iter().fold(Vector::zeros(n), |mut acc, x| {
                acc.axpy(&Q::from_i64(rng.gen_range(1..4)), x);
                acc
            });
            for w in perp.basis() {
                prop_assert!(!can_transition(&r, &v, w).unwrap());
            }
        }
    }
}
