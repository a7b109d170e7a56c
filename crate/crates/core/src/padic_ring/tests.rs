use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use super::*;
use crate::error::Error;

fn ring(p: u64, m: usize, n: u32) -> Arc<RingContext> {
    make_context(p, m, n, None).unwrap()
}

fn ring_strategy() -> impl Strategy<Value = Arc<RingContext>> {
    prop_oneof![
        Just((5u64, 2usize, 8u32)),
        Just((3, 2, 12)),
        Just((7, 1, 8)),
        Just((13, 2, 6)),
        Just((3, 3, 7)),
    ]
    .prop_map(|(p, m, n)| ring(p, m, n))
}

fn elem(r: &Arc<RingContext>, raw: &[u64]) -> RingElement {
    r.from_coords(&raw[..r.degree()]).unwrap()
}

fn unit(r: &Arc<RingContext>, raw: &[u64]) -> RingElement {
    let mut a = elem(r, raw);
    if !a.is_unit() {
        a = a + r.one();
    }
    if !a.is_unit() {
        a = a + r.one();
    }
    a
}

fn raw() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 3)
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Hensel/Newton lift of a simple root of X^d - 1 in Z/p^k, independent of the ring code.
fn hensel_root_of_unity(start: i128, d: u32, p: i128, k: u32) -> i128 {
    let modulus = p.pow(k);
    let inv = |a: i128| -> i128 {
        let (mut r0, mut r1, mut s0, mut s1) = (modulus, a.rem_euclid(modulus), 0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(modulus)
    };
    let pw = |a: i128, e: u32| (0..e).fold(1i128, |acc, _| acc * a % modulus);
    let mut x = start;
    for _ in 0..k {
        let f = (pw(x, d) - 1).rem_euclid(modulus);
        let df = (d as i128 * pw(x, d - 1)).rem_euclid(modulus);
        x = (x - f * inv(df) % modulus).rem_euclid(modulus);
    }
    x
}

/// Residue of a rational with p-free denominator, modulo p^k.
fn rational_mod(q: &BigRational, p: u64, k: u32) -> u64 {
    let modulus = BigInt::from(p).pow(k);
    let num = ((q.numer() % &modulus) + &modulus) % &modulus;
    let den = ((q.denom() % &modulus) + &modulus) % &modulus;
    let den_inv = den.modpow(&(BigInt::from(p).pow(k - 1) * (p - 1) - 1), &modulus);
    ((num * den_inv) % &modulus).to_u64().unwrap()
}

#[test]
fn rejects_bad_parameters() {
    assert_eq!(make_context(4, 1, 5, None).unwrap_err(), Error::NotOddPrime(4));
    assert_eq!(make_context(2, 1, 5, None).unwrap_err(), Error::NotOddPrime(2));
    assert!(make_context(5, 0, 5, None).is_err());
    assert!(make_context(5, 1, 1, None).is_err());
    assert!(make_context(5, 2, 8, Some(&[2, 4, 1][..])).is_ok());
    // x^2 + 1 = (x - 2)(x + 2) over F_5
    assert!(matches!(
        make_context(5, 2, 8, Some(&[1, 0, 1][..])),
        Err(Error::Reducible(_))
    ));
    assert!(matches!(
        make_context(3, 1, 40, None),
        Err(Error::PrecisionTooLarge { .. })
    ));
    assert!(make_context(3, 1, 39, None).is_ok());
    assert_eq!(make_context(4, 1, 5, None).unwrap_err().to_string(), "p must be an odd prime (got 4)");
}

#[test]
fn m1_frobenius_is_identity() {
    let r = ring(5, 1, 10);
    let mut s = crate::sampling::Sampler::new(3);
    for _ in 0..50 {
        let a = s.element(&r);
        assert_eq!(a.frobenius(), a);
        assert_eq!(a.frobenius_inverse(), a);
    }
}

#[test]
fn explicit_modulus_frobenius_has_order_two() {
    let r = make_context(5, 2, 8, Some(&[2, 4, 1][..])).unwrap();
    let y = r.from_coords(r.frobenius_image()).unwrap();
    let x = r.generator();
    assert!(y.congruent(&x.pow(5), 1));
    let fy = r.modulus().iter().rev().fold(r.zero(), |acc, &c| acc * &y + r.from_int(c as i64));
    assert!(fy.is_zero());
    let mut s = crate::sampling::Sampler::new(11);
    for _ in 0..100 {
        let a = s.element(&r);
        assert_eq!(a.frobenius().frobenius(), a);
    }
}

#[test]
fn invert_basics() {
    let r = ring(5, 2, 8);
    assert_eq!(r.one().inverse().unwrap(), r.one());
    assert_eq!(r.from_int(5).inverse().unwrap_err(), Error::NotUnit);
    assert_eq!(Error::NotUnit.to_string(), "not a unit (valuation >= 1)");
}

#[test]
fn delta_of_two_mod_five() {
    let r = ring(5, 1, 10);
    let d = r.from_int(2).delta().unwrap();
    // -6, stored reduced modulo the 9 known digits
    assert_eq!(d.known_prec(), 9);
    assert_eq!(d.coords()[0], 5u64.pow(9) - 6);
    assert_eq!(d, r.from_int(-6).truncate(9));
    assert!(r.one().delta().unwrap().is_zero());
    assert!(r.one().truncate(1).delta().is_err());
}

#[test]
fn is_constant_examples() {
    let r = ring(7, 2, 6);
    assert!(r.one().is_constant().unwrap());
    assert!(!r.from_int(8).is_constant().unwrap());
    for g in r.residues() {
        let t = r.teichmueller(&g);
        assert!(t.is_constant().unwrap(), "residue {g:?}");
        assert!(t.psi().map(|v| v.is_zero()).unwrap_or(g.is_zero()));
    }
}

#[test]
fn teichmueller_of_two_against_hensel() {
    // Frozen from the Newton lift of X^4 - 1 at 2: 7^4 = 2401 = 1 + 96 * 25.
    assert_eq!(hensel_root_of_unity(2, 4, 5, 2), 7);
    for k in [2u32, 5, 12] {
        let r = ring(5, 1, k);
        let t = r.teichmueller(&r.from_int(2));
        assert_eq!(t.coords()[0] as i128, hensel_root_of_unity(2, 4, 5, k));
        assert!(t.pow(4).is_one());
    }
    let r = ring(5, 1, 2);
    assert_eq!(r.teichmueller(&r.from_int(2)).coords()[0], 7);
    assert!(r.teichmueller(&r.zero()).is_zero());
    assert!(r.teichmueller(&r.one()).is_one());
}

#[test]
fn frobenius_moves_teichmueller_lifts_by_p_th_power() {
    let r = ring(5, 2, 8);
    for g in r.residues() {
        let t = r.teichmueller(&g);
        assert_eq!(t.frobenius(), r.teichmueller(&g.pow(5)));
        assert_eq!(t.pow(25), t);
        assert!(t.congruent(&g, 1));
    }
}

#[test]
fn log_of_six_mod_125() {
    let r = ring(5, 1, 3);
    // log(1 + 5) = sum (-1)^(n+1) 5^n / n with exact rational arithmetic.
    let mut sum = BigRational::zero();
    let mut pw = BigInt::one();
    for n in 1..40i64 {
        pw *= 5;
        let term = BigRational::new(pw.clone(), BigInt::from(n));
        sum = if n % 2 == 1 { sum + term } else { sum - term };
    }
    assert_eq!(rational_mod(&sum, 5, 3), 55);
    let l = r.from_int(6).log_p().unwrap();
    assert_eq!(l.coords()[0], 55);
    assert_eq!(r.from_int(55).exp_p().unwrap(), r.from_int(6));
    assert!(r.zero().exp_p().unwrap().is_one());
    assert!(r.one().log_p().unwrap().is_zero());
    assert!(r.from_int(2).log_p().is_err());
    assert!(r.from_int(1).exp_p().is_err());
}

#[test]
fn exp_series_against_rational_oracle() {
    let p = 3u64;
    let k = 9u32;
    let r = ring(p, 1, k);
    for a in [3i64, 6, 9, 12, 21, -3] {
        let mut sum = BigRational::one();
        let mut term = BigRational::one();
        for n in 1..80i64 {
            term = term * BigRational::from_integer(BigInt::from(a)) / BigRational::from_integer(BigInt::from(n));
            sum += term.clone();
        }
        assert_eq!(r.from_int(a).exp_p().unwrap().coords()[0], rational_mod(&sum, p, k), "a = {a}");
    }
}

#[test]
fn pow_padic_small_cases() {
    let r = ring(5, 1, 8);
    let six = r.from_int(6);
    assert_eq!(six.pow_padic(Exponent::integer(&r, 1)).unwrap(), six);
    assert_eq!(six.pow_padic(Exponent::integer(&r, 3)).unwrap(), r.from_int(216));
    let quarter = Exponent::ratio(&r, -1, 4).unwrap();
    let u = six.pow_padic(quarter).unwrap();
    assert!((u.pow(4) * &six).is_one());
    assert!(u.congruent(&r.one(), 1));
    assert!(Exponent::ratio(&r, 1, 5).is_err());
    assert!(r.from_int(2).pow_padic(Exponent::integer(&r, 2)).is_err());
}

#[test]
fn default_modulus_is_stable() {
    assert_eq!(ring(5, 2, 4).modulus(), &[2, 0, 1]);
    assert_eq!(ring(3, 2, 4).modulus(), &[1, 0, 1]);
    assert_eq!(ring(13, 2, 4).modulus(), &[2, 0, 1]);
    assert_eq!(ring(7, 1, 4).modulus(), &[0, 1]);
}

#[test]
fn digits_and_expansion() {
    let r = ring(5, 1, 3);
    let a = r.from_int(1 + 2 * 5 + 4 * 25);
    assert_eq!(a.digits(), vec![vec![1, 2, 4]]);
    assert_eq!(a.expansion(), "1 + 2*5 + 4*5^2");
    assert_eq!(r.from_int(-1).expansion(), "4 + 4*5 + 4*5^2");
    assert_eq!(r.zero().expansion(), "0");
    assert_eq!(a.valuation(), Valuation::Finite(0));
    assert_eq!(r.from_int(50).valuation(), Valuation::Finite(2));
    assert_eq!(r.zero().valuation(), Valuation::Infinite);
}

proptest! {
    #[test]
    fn frobenius_is_ring_automorphism(r in ring_strategy(), x in raw(), y in raw()) {
        let a = elem(&r, &x);
        let b = elem(&r, &y);
        prop_assert_eq!((&a * &b).frobenius(), a.frobenius() * b.frobenius());
        prop_assert_eq!((&a + &b).frobenius(), a.frobenius() + b.frobenius());
        prop_assert!(a.frobenius().congruent(&a.pow(r.p()), 1));
        prop_assert_eq!(a.frobenius().frobenius_inverse(), a.clone());
        prop_assert_eq!(a.frobenius_pow(r.degree()), a.clone());
        let u = unit(&r, &x);
        prop_assert!(u.frobenius().is_unit());
    }

    #[test]
    fn inverse_is_inverse(r in ring_strategy(), x in raw()) {
        let u = unit(&r, &x);
        prop_assert!((&u * u.inverse().unwrap()).is_one());
    }

    #[test]
    fn delta_definitional_identity(r in ring_strategy(), x in raw()) {
        let a = elem(&r, &x);
        let d = a.delta().unwrap();
        prop_assert_eq!(d.known_prec(), r.precision() - 1);
        prop_assert_eq!(a.frobenius(), a.pow(r.p()) + d.mul_p());
    }

    #[test]
    fn delta_product_rule(r in ring_strategy(), x in raw(), y in raw()) {
        let p = r.p();
        let (a, b) = (elem(&r, &x), elem(&r, &y));
        let (da, db) = (a.delta().unwrap(), b.delta().unwrap());
        let rhs = a.pow(p) * &db + b.pow(p) * &da + (&da * &db).mul_p();
        prop_assert_eq!((&a * &b).delta().unwrap(), rhs.truncate(r.precision() - 1));
    }

    #[test]
    fn delta_sum_rule(r in ring_strategy(), x in raw(), y in raw()) {
        let p = r.p();
        let (a, b) = (elem(&r, &x), elem(&r, &y));
        let mut rhs = a.delta().unwrap() + b.delta().unwrap();
        for i in 1..p {
            rhs = rhs - (a.pow(i) * b.pow(p - i)).scale(binom(p, i) / p);
        }
        prop_assert_eq!((&a + &b).delta().unwrap(), rhs.truncate(r.precision() - 1));
    }

    #[test]
    fn teichmueller_is_multiplicative(r in ring_strategy(), i in any::<usize>(), j in any::<usize>()) {
        let res = r.residues();
        let (g, h) = (&res[i % res.len()], &res[j % res.len()]);
        let q = r.residue_field_size() as u64;
        let prod = r.teichmueller(g) * r.teichmueller(h);
        prop_assert_eq!(&prod, &r.teichmueller(&(g * h)));
        prop_assert_eq!(prod.pow(q), prod.clone());
        prop_assert!(prod.delta().unwrap().is_zero());
    }

    #[test]
    fn exp_log_inverse_pair(r in ring_strategy(), x in raw(), y in raw()) {
        let a = elem(&r, &x).mul_p();
        let b = elem(&r, &y).mul_p();
        let ea = a.exp_p().unwrap();
        prop_assert!(ea.congruent(&r.one(), 1));
        prop_assert_eq!(ea.log_p().unwrap(), a.clone());
        prop_assert_eq!((&a + &b).exp_p().unwrap(), &ea * b.exp_p().unwrap());
        let u = r.one() + elem(&r, &y).mul_p();
        prop_assert_eq!(u.log_p().unwrap().exp_p().unwrap(), u);
    }

    #[test]
    fn binomial_powers(r in ring_strategy(), x in raw(), a in -20i64..20, b in -20i64..20) {
        let u = r.one() + elem(&r, &x).mul_p();
        let ea = Exponent::integer(&r, a);
        let eb = Exponent::integer(&r, b);
        let eab = Exponent::integer(&r, a * b);
        prop_assert_eq!(u.pow_padic(ea).unwrap().pow_padic(eb).unwrap(), u.pow_padic(eab).unwrap());
        prop_assert_eq!(u.pow_padic(Exponent::integer(&r, 2)).unwrap(), &u * &u);
        let direct = if a >= 0 { u.pow(a as u64) } else { u.inverse().unwrap().pow((-a) as u64) };
        prop_assert_eq!(u.pow_padic(ea).unwrap(), direct);
        let half = Exponent::ratio(&r, 1, 2).unwrap();
        prop_assert_eq!(u.pow_padic(half).unwrap().pow_padic(Exponent::integer(&r, 2)).unwrap(), u);
    }

    #[test]
    fn psi_is_homomorphism_and_matches_series(r in ring_strategy(), x in raw(), y in raw()) {
        let u = unit(&r, &x);
        let v = unit(&r, &y);
        let pu = u.psi().unwrap();
        prop_assert_eq!(pu.known_prec(), r.precision() - 1);
        prop_assert_eq!((&u * &v).psi().unwrap(), &pu + v.psi().unwrap());
        prop_assert_eq!(u.psi_series().unwrap(), pu);
    }

    #[test]
    fn psi_equation_equivalence(r in ring_strategy(), x in raw(), y in raw()) {
        let u = unit(&r, &x);
        let beta = u.psi().unwrap();
        prop_assert_eq!(u.frobenius(), beta.mul_p().exp_p().unwrap() * u.pow(r.p()));
        let other = elem(&r, &y).truncate(r.precision() - 1);
        let holds = u.frobenius() == other.mul_p().exp_p().unwrap() * u.pow(r.p());
        prop_assert_eq!(holds, other == beta);
    }
}
