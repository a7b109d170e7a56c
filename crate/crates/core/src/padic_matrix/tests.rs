use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::padic_ring::make_context;
use crate::sampling::Sampler;

fn ring(p: u64, m: usize, n: u32) -> Arc<RingContext> {
    make_context(p, m, n, None).unwrap()
}

fn setup() -> impl Strategy<Value = (Arc<RingContext>, usize, u64)> {
    (
        prop_oneof![Just((5u64, 1usize, 8u32)), Just((3, 2, 10)), Just((7, 2, 6))],
        1usize..=3,
        any::<u64>(),
    )
        .prop_map(|((p, m, n), dim, seed)| (ring(p, m, n), dim, seed))
}

/// Leibniz formula over all permutations: an oracle independent of both det paths.
fn det_leibniz(a: &PMatrix) -> RingElement {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = a.n();
    let mut acc = a.ring().zero();
    for perm in perms(n) {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let term = (0..n).fold(a.ring().one(), |t, i| t * a.get(i, perm[i]));
        acc = if inversions % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[test]
fn identity_basics() {
    let r = ring(5, 2, 6);
    let id = PMatrix::identity(&r, 3);
    assert_eq!(id.inverse().unwrap(), id);
    assert_eq!(id.pow_p_entrywise(), id);
    assert!(id.det().is_one());
    let singular = PMatrix::from_ints(&r, 2, &[1, 2, 5, 10]).unwrap();
    assert_eq!(singular.inverse().unwrap_err(), crate::Error::NotInGl);
    assert!(!in_gl(&singular));
}

#[test]
fn elimination_det_matches_leibniz() {
    let r = ring(3, 1, 8);
    let mut s = Sampler::new(5);
    for n in [5usize, 6] {
        for _ in 0..4 {
            let a = s.matrix(&r, n);
            assert_eq!(a.det(), det_leibniz(&a));
            let b = a.mul_p();
            assert_eq!(b.det(), det_leibniz(&b));
        }
    }
    for _ in 0..20 {
        let a = s.matrix(&r, 3);
        assert_eq!(a.det(), det_leibniz(&a));
    }
}

#[test]
fn permutation_and_diagonal_maps() {
    let r = ring(7, 2, 5);
    let c = PMatrix::permutation(&r, &[2, 0, 1]);
    assert_eq!(c.pow_p_entrywise(), c);
    assert!(c.is_monomial());
    assert_eq!(c.get(2, 0), &r.one());
    let a = r.generator();
    let b = r.from_int(3) + r.generator();
    let d = PMatrix::diagonal(&r, &[a.clone(), b.clone()]);
    assert_eq!(d.pow_p_entrywise(), PMatrix::diagonal(&r, &[a.pow(7), b.pow(7)]));
    assert!(!PMatrix::from_ints(&r, 2, &[1, 1, 0, 1]).unwrap().is_monomial());
}

#[test]
fn teichmueller_matrix_has_zero_delta() {
    let r = ring(5, 2, 6);
    let res = r.residues();
    let t = PMatrix::from_fn(&r, 2, |i, j| r.teichmueller(&res[3 * i + 5 * j + 1]));
    assert!(t.delta_entrywise().unwrap().is_zero());
    let r1 = ring(5, 1, 6);
    let mut s = Sampler::new(1);
    let a = s.matrix(&r1, 3);
    assert_eq!(a.frobenius_entrywise(), a);
}

#[test]
fn symplectic_unipotent_is_in_so_delta() {
    let r = ring(5, 1, 8);
    let q = PMatrix::from_ints(&r, 2, &[0, 1, -1, 0]).unwrap();
    let alpha = PMatrix::from_ints(&r, 2, &[0, 1, 0, 0]).unwrap();
    // alpha^t q + q alpha + p alpha^t q alpha, checked by hand: [[0,0],[1,0]]q = [[0,0],[0,1]],
    // q alpha = [[0,0],[0,-1]], the quadratic term vanishes.
    let lin = &(&alpha.transpose() * &q) + &(&q * &alpha);
    let quad = (&(&alpha.transpose() * &q) * &alpha).mul_p();
    assert!((&lin + &quad).is_zero());
    assert!(in_so_delta(&alpha, &q));
    assert!(in_sl_delta(&alpha));
    assert!(in_sl_delta(&PMatrix::zero(&r, 3)));
}

#[test]
fn matrix_binomial_trivial_cases() {
    let r = ring(5, 2, 6);
    let id = PMatrix::identity(&r, 2);
    let half = Exponent::ratio(&r, 1, 2).unwrap();
    assert_eq!(id.one_plus_pt_pow(half).unwrap(), id);
    let mut s = Sampler::new(9);
    let m = s.matrix(&r, 2).one_plus_p();
    assert_eq!(m.one_plus_pt_pow(Exponent::integer(&r, 1)).unwrap(), m);
    assert!(PMatrix::from_ints(&r, 2, &[2, 0, 0, 1])
        .unwrap()
        .one_plus_pt_pow(half)
        .is_err());
}

proptest! {
    #[test]
    fn det_is_multiplicative((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let a = s.matrix(&r, n);
        let b = s.matrix(&r, n);
        prop_assert_eq!((&a * &b).det(), a.det() * b.det());
        prop_assert_eq!(a.det(), det_leibniz(&a));
    }

    #[test]
    fn inverse_is_two_sided((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let a = s.gl(&r, n);
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_identity());
        prop_assert!((&inv * &a).is_identity());
    }

    #[test]
    fn frobenius_splits_as_power_plus_p_delta((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let a = s.matrix(&r, n);
        let rhs = &a.pow_p_entrywise() + &a.delta_entrywise().unwrap().mul_p();
        prop_assert_eq!(a.frobenius_entrywise(), rhs);
    }

    #[test]
    fn frobenius_is_multiplicative_on_matrices((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let a = s.matrix(&r, n);
        let b = s.matrix(&r, n);
        prop_assert_eq!((&a * &b).frobenius_entrywise(), a.frobenius_entrywise() * b.frobenius_entrywise());
        prop_assert_eq!(a.det().frobenius(), a.frobenius_entrywise().det());
    }

    #[test]
    fn power_map_is_right_multiplicative_for_monomials((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let a = s.matrix(&r, n);
        let perm = s.permutation(n);
        let diag: Vec<RingElement> = (0..n).map(|_| s.unit(&r)).collect();
        let c = &PMatrix::permutation(&r, &perm) * &PMatrix::diagonal(&r, &diag);
        prop_assert!(c.is_monomial());
        prop_assert_eq!((&a * &c).pow_p_entrywise(), a.pow_p_entrywise() * c.pow_p_entrywise());
    }

    #[test]
    fn delta_addition_group_law((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let a = s.matrix(&r, n);
        let b = s.matrix(&r, n);
        let zero = PMatrix::zero(&r, n);
        prop_assert_eq!(a.delta_add(&zero).unwrap(), a.clone());
        prop_assert!(a.delta_add(&a.delta_inverse()).unwrap().is_zero());
        // 1 + p(a + b + pab) = 1 + pa + pb + p^2 ab = (1 + pa)(1 + pb)
        prop_assert_eq!(a.delta_add(&b).unwrap().one_plus_p(), a.one_plus_p() * b.one_plus_p());
        prop_assert_eq!(a.one_plus_p().pow(2).one_plus_pt_pow(Exponent::ratio(&r, 1, 2).unwrap()).unwrap(), a.one_plus_p());
    }

    #[test]
    fn matrix_square_root((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let m = s.matrix(&r, n).one_plus_p();
        let half = Exponent::ratio(&r, 1, 2).unwrap();
        let root = m.one_plus_pt_pow(half).unwrap();
        prop_assert_eq!(&root * &root, m.clone());
        let three = Exponent::integer(&r, 3);
        prop_assert_eq!(m.one_plus_pt_pow(three).unwrap(), m.pow(3));
    }

    #[test]
    fn sl_delta_samples((r, n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let alpha = s.alpha_sl(&r, n, false);
        prop_assert!(in_sl_delta(&alpha));
        prop_assert!(alpha.one_plus_p().det().is_one());
    }

    #[test]
    fn symplectic_two_by_two_is_special_linear((r, _n, seed) in setup()) {
        let mut s = Sampler::new(seed);
        let q = PMatrix::from_ints(&r, 2, &[0, 1, -1, 0]).unwrap();
        let alpha = s.alpha_so(&q, false);
        prop_assert!(in_so_delta(&alpha, &q));
        prop_assert!(in_sl_delta(&alpha));
        let g = s.so(&q);
        prop_assert!(in_so(&g, &q));
    }
}
