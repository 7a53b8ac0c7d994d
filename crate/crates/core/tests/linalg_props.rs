use opalg::linalg::{canonical_basis, gram_schmidt, orth_projection, Spectrum};
use opalg::random::{random_basis, random_matrix, random_vector};
use opalg::{Cplx, GaussRat, Mat, Scalar, Subspace, Vector};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = GaussRat;
type C = Cplx;

fn numeric_vec(v: &Vector<Q>) -> Vector<C> {
    Vector::new(v.entries().iter().map(|x| C::from_c64(x.to_c64())).collect())
}

fn numeric(m: &Mat<Q>) -> Mat<C> {
    Mat::from_fn(m.rows(), m.cols(), |i, j| C::from_c64(m[(i, j)].to_c64()))
}

/// Between 1 and n vectors, possibly dependent.
fn some_vectors(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vector<Q>> {
    let k = rng.gen_range(1..=n);
    let mut vs: Vec<Vector<Q>> = (0..k).map(|_| random_vector(rng, n)).collect();
    if k > 1 && rng.gen_bool(0.5) {
        let mut w = vs[0].clone();
        w.axpy(&Q::from_i64(rng.gen_range(-3..=3)), &vs[k - 1]);
        vs.push(w);
    }
    vs
}

fn some_subspace(rng: &mut ChaCha8Rng, n: usize) -> Subspace<Q> {
    if rng.gen_bool(0.15) {
        return Subspace::zero(n);
    }
    Subspace::span(n, &some_vectors(rng, n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_ignores_order_and_scaling(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs = some_vectors(&mut rng, n);
        let mut shuffled: Vec<Vector<Q>> = vs
            .iter()
            .map(|v| {
                let c = Q::from_i64(rng.gen_range(1..5)) + Q::i() * Q::from_i64(rng.gen_range(-2..3));
                v.scale(&c)
            })
            .collect();
        shuffled.shuffle(&mut rng);
        let a = canonical_basis(n, &vs).unwrap();
        let b = canonical_basis(n, &shuffled).unwrap();
        prop_assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn dimension_formula(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e1 = some_subspace(&mut rng, n);
        let e2 = some_subspace(&mut rng, n);
        let sum = e1.sum(&e2).unwrap();
        let cap = e1.intersect(&e2).unwrap();
        prop_assert_eq!(e1.dim() + e2.dim(), sum.dim() + cap.dim());
        prop_assert!(sum.contains_subspace(&e1) && sum.contains_subspace(&e2));
        prop_assert!(e1.contains_subspace(&cap) && e2.contains_subspace(&cap));
    }

    #[test]
    fn projection_is_orthogonal_idempotent(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = some_subspace(&mut rng, n);
        let p = orth_projection(&e);
        prop_assert_eq!(&(&p * &p), &p);
        prop_assert_eq!(&p.adjoint(), &p);
        for v in e.basis() {
            prop_assert_eq!(&p.mul_vec(v), v);
        }
        let pn = orth_projection(&Subspace::span(n, &e.basis().iter().map(numeric_vec).collect::<Vec<_>>()).unwrap());
        prop_assert!((&pn * &pn).within(&pn, 1e-9));
        prop_assert!(pn.within(&numeric(&p), 1e-9));
    }

    #[test]
    fn gram_schmidt_keeps_prefix_spans(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_basis::<Q, _>(&mut rng, n);
        let k = rng.gen_range(1..=n);
        let gs = gram_schmidt(&b[..k]).unwrap();
        for i in 0..k {
            let lhs = Subspace::span(n, &b[..=i]).unwrap();
            let rhs = Subspace::span(n, &gs.vectors[..=i]).unwrap();
            prop_assert!(lhs.same(&rhs));
            for j in 0..i {
                prop_assert!(gs.vectors[i].inner(&gs.vectors[j]).is_zero());
            }
            prop_assert_eq!(&gs.vectors[i].norm_sqr(), &gs.sq_norms[i]);
        }
        let gn = gram_schmidt(&b[..k].iter().map(numeric_vec).collect::<Vec<_>>()).unwrap();
        for (x, y) in gn.vectors.iter().zip(&gs.vectors) {
            prop_assert!((x.norm() - 1.0).abs() < 1e-9);
            let cos = x.inner(&numeric_vec(y)).magnitude() / y.norm();
            prop_assert!((cos - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn backends_agree_on_rational_input(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let density = rng.gen_range(0.2..1.0);
        let m = random_matrix::<Q, _>(&mut rng, n, density);
        let mn = numeric(&m);
        prop_assert_eq!(m.rank(), mn.rank());
        match (m.inverse(), mn.inverse()) {
            (Ok(inv), Ok(invn)) => prop_assert!(invn.within(&numeric(&inv), 1e-8 * (1.0 + inv.max_abs()))),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "inverse disagreement: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
        let e = Subspace::span(n, &m.columns()).unwrap();
        let en = Subspace::span(n, &mn.columns()).unwrap();
        prop_assert_eq!(e.dim(), en.dim());
        prop_assert_eq!(e.orth_complement().dim(), en.orth_complement().dim());
        let v = random_vector::<Q, _>(&mut rng, n);
        prop_assert_eq!(e.contains(&v), en.contains(&numeric_vec(&v)));
        let k = opalg::linalg::kernel(&m);
        let kn = opalg::linalg::kernel(&mn);
        prop_assert_eq!(k.dim(), kn.dim());
    }

    #[test]
    fn exact_spectrum_matches_triangular_diagonal(seed in any::<u64>(), n in 1usize..5) {
        // the eigenvalues of S·T·S⁻¹ are the diagonal of the triangular T
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Mat::from_fn(n, n, |i, j| if i <= j { Q::from_i64(rng.gen_range(-3..=3)) } else { Q::zero() });
        let s = opalg::random::random_unimodular::<Q, _>(&mut rng, n);
        let a = &(&s * &t) * &s.inverse().unwrap();
        let spec: Spectrum<Q> = opalg::linalg::spectrum(&a).unwrap();
        prop_assert!(spec.complete);
        for i in 0..n {
            let d = &t[(i, i)];
            let expected = (0..n).filter(|&j| t[(j, j)] == *d).count();
            let got = spec.values.iter().find(|(v, _)| v == d).map(|&(_, m)| m);
            prop_assert_eq!(got, Some(expected));
        }
    }
}
