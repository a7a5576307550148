use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use storagecode::{
    coset_matrix, is_triangle_free, mult_operator_matrix, AlgebraElement, BitMatrix, BitVector,
    ConnectionSet, IdealHandle, Monomial,
};

fn element(n: u32, bits: &[bool]) -> AlgebraElement {
    AlgebraElement::from_coeffs(n, BitVector::from_bools(&bits[..1 << n])).unwrap()
}

fn elements(max_n: u32, count: usize) -> impl Strategy<Value = (u32, Vec<AlgebraElement>)> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), 1 << n), count)
            .prop_map(move |vs| (n, vs.iter().map(|b| element(n, b)).collect()))
    })
}

/// XOR convolution over the supports.
fn naive_mul(f: &AlgebraElement, g: &AlgebraElement) -> Vec<bool> {
    let mut out = vec![false; f.dimension()];
    for a in f.support() {
        for b in g.support() {
            out[(a ^ b) as usize] ^= true;
        }
    }
    out
}

fn bools(f: &AlgebraElement) -> Vec<bool> {
    (0..f.dimension()).map(|m| f.coeff(Monomial(m as u64))).collect()
}

fn principal_dim(f: &AlgebraElement) -> usize {
    IdealHandle::principal(f.clone()).dim().unwrap()
}

fn matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    BitMatrix::random(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((_, v) in elements(10, 3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        prop_assert_eq!(a.mul(&b.mul(c).unwrap()).unwrap(), a.mul(b).unwrap().mul(c).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(c).unwrap()).unwrap(),
            a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&AlgebraElement::one(a.arity()).unwrap()).unwrap(), a.clone());
    }

    #[test]
    fn mul_matches_convolution((_, v) in elements(8, 2)) {
        prop_assert_eq!(bools(&v[0].mul(&v[1]).unwrap()), naive_mul(&v[0], &v[1]));
    }

    #[test]
    fn b2_round_trip((_, v) in elements(12, 1)) {
        prop_assert_eq!(v[0].to_b2().from_b2(), v[0].clone());
    }

    #[test]
    fn b2_coordinates_reconstruct((n, v) in elements(6, 1)) {
        let b2 = v[0].to_b2();
        let mut sum = AlgebraElement::zero(n).unwrap();
        for s in b2.support() {
            let vars: Vec<u32> = (1..=n).filter(|i| s >> (i - 1) & 1 == 1).collect();
            sum = sum.add(&AlgebraElement::shifted_product(n, &vars).unwrap()).unwrap();
        }
        prop_assert_eq!(sum, v[0].clone());
    }

    #[test]
    fn operator_is_symmetric_coset_matrix(
        n in 1u32..=8,
        picks in proptest::collection::vec(any::<u64>(), 0..12),
    ) {
        let masks = picks.iter().map(|m| m & ((1 << n) - 1));
        let s = ConnectionSet::new(n, std::iter::once(0).chain(masks)).unwrap();
        let op = mult_operator_matrix(&s.to_element()).unwrap();
        prop_assert!(op.is_symmetric());
        prop_assert_eq!(op, coset_matrix(&s).unwrap());
    }

    #[test]
    fn triangle_free_matches_neighbourhoods(
        n in 1u32..=10,
        picks in proptest::collection::vec(any::<u64>(), 0..10),
    ) {
        let masks = picks.iter().map(|m| m & ((1 << n) - 1));
        let s = ConnectionSet::new(n, std::iter::once(0).chain(masks)).unwrap();
        // an edge u-v lies on a triangle iff the neighbourhoods of u and v meet
        let mut tri = false;
        for u in 0..1u64 << n {
            for v in s.neighbors(u) {
                let nu: Vec<u64> = s.neighbors(u).collect();
                tri |= s.neighbors(v).any(|w| nu.contains(&w));
            }
        }
        prop_assert_eq!(is_triangle_free(&s), !tri);
    }

    #[test]
    fn rank_permutation_and_transpose(rows in 1usize..96, cols in 1usize..96, seed: u64) {
        let m = matrix(rows, cols, seed);
        let rank = m.rank();
        prop_assert_eq!(rank, m.transpose().rank());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut order: Vec<usize> = (0..rows).collect();
        order.shuffle(&mut rng);
        let permuted: Vec<BitVector> = order.iter().map(|&r| m.row_vector(r)).collect();
        prop_assert_eq!(BitMatrix::from_rows(cols, &permuted).unwrap().rank(), rank);
        prop_assert_eq!(m.reverse_columns().rank(), rank);
    }

    #[test]
    fn kernel_rank_nullity(rows in 1usize..80, cols in 1usize..80, seed: u64) {
        let m = matrix(rows, cols, seed);
        let k = m.kernel();
        prop_assert_eq!(k.dim() + m.rank(), cols);
        for v in k.vectors() {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Disjoint variables multiply ideal dimensions: dim<fg> 2^n = dim<f> dim<g>.
    #[test]
    fn disjoint_product_dims(
        a in 1u32..=3,
        b in 1u32..=4,
        fb in proptest::collection::vec(any::<bool>(), 8),
        gb in proptest::collection::vec(any::<bool>(), 16),
    ) {
        let n = a + b;
        let f = element(a, &fb).embed(n, 0).unwrap();
        let g = element(b, &gb).embed(n, a).unwrap();
        let fg = f.mul(&g).unwrap();
        prop_assert_eq!(principal_dim(&fg) << n, principal_dim(&f) * principal_dim(&g));
    }
}

#[test]
fn rank_equals_transpose_rank_at_512() {
    for (rows, cols, seed) in [(512, 512, 1), (512, 300, 2), (200, 512, 3)] {
        let m = matrix(rows, cols, seed);
        assert_eq!(m.rank(), m.transpose().rank());
    }
    // low-rank product of thin factors
    let a = matrix(512, 40, 4);
    let b = matrix(40, 512, 5);
    let rows: Vec<BitVector> = (0..512).map(|r| b.vec_mul(&a.row_vector(r)).unwrap()).collect();
    let p = BitMatrix::from_rows(512, &rows).unwrap();
    assert!(p.rank() <= 40);
    assert_eq!(p.rank(), p.transpose().rank());
}
