use freesum_core::exactlat::{
    hnf, is_unimodular_element, quotient_is_torsionfree, saturate, IntMatrix, IntVector, Lattice, SmithForm,
};
use freesum_core::oracle;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(move |rows| {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            IntMatrix::from_i64_rows(&refs)
        })
    })
}

fn vectors(n: usize, max_count: usize, bound: i64) -> impl Strategy<Value = Vec<IntVector>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, n), 1..=max_count)
        .prop_map(|vs| vs.iter().map(|v| IntVector::from_i64s(v)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_reconstructs(m in matrix(6, 6, 20)) {
        let f = SmithForm::compute(&m);
        prop_assert_eq!(f.u.mul(&m).mul(&f.v), f.s.clone());
        prop_assert!(f.u.determinant().abs().is_one());
        prop_assert!(f.v.determinant().abs().is_one());
        prop_assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(f.v_inv.mul(&f.v), IntMatrix::identity(m.cols()));
        let d = f.invariant_factors();
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(d.iter().all(|x| x.is_positive()));
        prop_assert_eq!(d.len(), m.rank());
    }

    #[test]
    fn hnf_is_idempotent(m in matrix(5, 5, 9)) {
        let (h, u) = hnf(&m);
        prop_assert_eq!(u.mul(&m), h.clone());
        prop_assert!(u.determinant().abs().is_one());
        prop_assert_eq!(hnf(&h).0, h);
    }

    #[test]
    fn single_vector_torsion_matches_unimodularity(
        gens in vectors(4, 4, 6),
        coeffs in prop::collection::vec(-4i64..=4, 4),
    ) {
        let l = Lattice::from_vectors(&gens, 4).unwrap();
        prop_assume!(l.rank() > 0);
        let c: Vec<BigInt> = coeffs[..l.rank()].iter().map(|&x| BigInt::from(x)).collect();
        let v = l.point(&c);
        prop_assume!(!v.is_zero());
        let single = quotient_is_torsionfree(&l, std::slice::from_ref(&v)).unwrap();
        prop_assert_eq!(single, is_unimodular_element(&v, &l).unwrap());
        prop_assert_eq!(single, IntVector(c).content().is_one());
    }

    #[test]
    fn saturation(gens in vectors(4, 4, 6)) {
        let l = Lattice::from_vectors(&gens, 4).unwrap();
        let s = saturate(&l);
        prop_assert_eq!(saturate(&s), s.clone());
        prop_assert!(s.contains_lattice(&l));
        prop_assert_eq!(s.rank(), l.rank());
        prop_assert!(s.is_saturated());
    }

    #[test]
    fn coordinates_round_trip(gens in vectors(3, 4, 8), coeffs in prop::collection::vec(-5i64..=5, 3)) {
        let l = Lattice::from_vectors(&gens, 3).unwrap();
        let c: Vec<BigInt> = coeffs[..l.rank()].iter().map(|&x| BigInt::from(x)).collect();
        let v = l.point(&c);
        prop_assert_eq!(l.coordinates(&v), Some(c));
        for g in &gens {
            prop_assert!(l.contains(g));
            prop_assert!(oracle::in_lattice(&gens, g).unwrap());
        }
    }

    #[test]
    fn membership_agrees_with_oracle(gens in vectors(3, 3, 5), v in prop::collection::vec(-6i64..=6, 3)) {
        let l = Lattice::from_vectors(&gens, 3).unwrap();
        let v = IntVector::from_i64s(&v);
        prop_assert_eq!(l.contains(&v), oracle::in_lattice(&gens, &v).unwrap());
    }
}

#[test]
fn torsion_of_diagonal() {
    let l = Lattice::full(2);
    let vs = [IntVector::from_i64s(&[2, 0]), IntVector::from_i64s(&[0, 3])];
    assert!(!quotient_is_torsionfree(&l, &vs).unwrap());
    let (w, p) = oracle::torsion_witness(&vs, 2, 2, 3).unwrap().expect("torsion");
    assert!(!oracle::in_lattice(&vs, &w).unwrap());
    assert!(p == 2 || p == 3);
}
