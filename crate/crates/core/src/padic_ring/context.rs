use std::fmt;
use std::sync::Arc;

use super::element::RingElement;
use super::residue;
use crate::error::{Error, Result};

/// Coefficient arithmetic in (Z/p^N)[x] / (modulus), on raw coordinate slices.
#[derive(Clone, Debug)]
pub(crate) struct Arith {
    pub(crate) p: u64,
    pub(crate) m: usize,
    /// p^N
    pub(crate) pn: u64,
    /// Monic, m + 1 coefficients, lowest first.
    pub(crate) modulus: Vec<u64>,
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// Inverse of an integer unit modulo `n` (any modulus, `gcd(a, n) = 1`).
pub(crate) fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(n as i128) as u64)
}

impl Arith {
    pub(crate) fn zero(&self) -> Vec<u64> {
        vec![0; self.m]
    }

    pub(crate) fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1 % self.pn;
        v
    }

    pub(crate) fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let s = x as u128 + y as u128;
                (s % self.pn as u128) as u64
            })
            .collect()
    }

    pub(crate) fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| if x >= y { x - y } else { self.pn - (y - x) })
            .collect()
    }

    pub(crate) fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|&x| if x == 0 { 0 } else { self.pn - x })
            .collect()
    }

    pub(crate) fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        let c = c % self.pn;
        a.iter().map(|&x| mulmod(x, c, self.pn)).collect()
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m;
        let n = self.pn;
        if m == 1 {
            return vec![mulmod(a[0], b[0], n)];
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let t = mulmod(x, y, n);
                let s = prod[i + j] + t;
                prod[i + j] = if s >= n { s - n } else { s };
            }
        }
        // Reduce x^k for k >= m using x^m = -(c_0 + ... + c_{m-1} x^{m-1}).
        for k in (m..2 * m - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            for j in 0..m {
                let t = mulmod(top, self.modulus[j], n);
                let idx = k - m + j;
                prod[idx] = if prod[idx] >= t {
                    prod[idx] - t
                } else {
                    n - (t - prod[idx])
                };
            }
        }
        prod.truncate(m);
        prod
    }

    pub(crate) fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub(crate) fn is_unit(&self, a: &[u64]) -> bool {
        a.iter().any(|&x| x % self.p != 0)
    }

    /// Inverse of a unit: residue-field inverse as a^(p^m - 2), then Newton
    /// b <- b(2 - ab), doubling the number of correct digits each step.
    pub(crate) fn inv(&self, a: &[u64], prec: u32) -> Option<Vec<u64>> {
        if !self.is_unit(a) {
            return None;
        }
        let q = (self.p as u128).pow(self.m as u32);
        let mut b = self.pow(a, q - 2);
        let two = self.scale(&self.one(), 2);
        let mut correct = 1u32;
        while correct < prec {
            let ab = self.mul(a, &b);
            b = self.mul(&b, &self.sub(&two, &ab));
            correct *= 2;
        }
        Some(b)
    }

    /// Evaluate the modulus polynomial at `y`.
    fn eval_modulus(&self, y: &[u64]) -> Vec<u64> {
        self.modulus
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| {
                let mut next = self.mul(&acc, y);
                next[0] = (next[0] + c) % self.pn;
                next
            })
    }

    fn eval_modulus_derivative(&self, y: &[u64]) -> Vec<u64> {
        let deriv: Vec<u64> = self
            .modulus
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| mulmod(c, k as u64, self.pn))
            .collect();
        deriv.iter().rev().fold(self.zero(), |acc, &c| {
            let mut next = self.mul(&acc, y);
            next[0] = (next[0] + c) % self.pn;
            next
        })
    }
}

/// The truncated unramified ring W(F_{p^m}) / p^N, realized as
/// (Z/p^N)[x] / (f) for a monic lift f of an irreducible residue polynomial,
/// together with its Frobenius lift.
///
/// Immutable after construction; share it through an `Arc`.
pub struct RingContext {
    pub(crate) arith: Arith,
    prec: u32,
    pow_p: Vec<u64>,
    frob_image: Vec<u64>,
    /// `frob[i]` holds the coordinates of the Frobenius image of x^i.
    frob: Vec<Vec<u64>>,
    frob_inv: Vec<Vec<u64>>,
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingContext")
            .field("p", &self.arith.p)
            .field("m", &self.arith.m)
            .field("N", &self.prec)
            .field("modulus", &self.arith.modulus)
            .finish()
    }
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        self.arith.p == other.arith.p
            && self.prec == other.prec
            && self.arith.modulus == other.arith.modulus
    }
}

impl Eq for RingContext {}

fn validate_params(p: u64, m: usize, prec: u32) -> Result<u64> {
    if p < 3 || !residue::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    if prec < 2 {
        return Err(Error::PrecisionTooSmall(prec));
    }
    let mut pn: u64 = 1;
    for _ in 0..prec {
        pn = pn
            .checked_mul(p)
            .filter(|&v| v < (1u64 << 63))
            .ok_or(Error::PrecisionTooLarge { p, prec })?;
    }
    Ok(pn)
}

/// Build O_N = W(F_{p^m}) / p^N. Without `residue_poly` the first monic irreducible
/// polynomial of degree `m` (lexicographic on c_{m-1}, ..., c_0) is used; its
/// coefficients, already in [0, p), serve as the lift.
pub fn make_context(
    p: u64,
    m: usize,
    prec: u32,
    residue_poly: Option<&[u64]>,
) -> Result<Arc<RingContext>> {
    validate_params(p, m, prec)?;
    let poly = match residue_poly {
        Some(f) => {
            let f: Vec<u64> = f.iter().map(|c| c % p).collect();
            if f.len() != m + 1 || !residue::is_irreducible(&f, p) {
                return Err(Error::Reducible(f));
            }
            f
        }
        None => residue::first_irreducible(p, m),
    };
    RingContext::with_modulus(p, prec, &poly)
}

impl RingContext {
    /// Build the ring from an explicit monic modulus over Z/p^N whose reduction mod p
    /// is irreducible.
    pub fn with_modulus(p: u64, prec: u32, modulus: &[u64]) -> Result<Arc<Self>> {
        if modulus.len() < 2 {
            return Err(Error::ZeroDegree);
        }
        let m = modulus.len() - 1;
        let pn = validate_params(p, m, prec)?;
        let modulus: Vec<u64> = modulus.iter().map(|c| c % pn).collect();
        let residue: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if modulus[m] != 1 || !residue::is_irreducible(&residue, p) {
            return Err(Error::Reducible(residue));
        }
        let arith = Arith { p, m, pn, modulus };
        let pow_p: Vec<u64> = (0..=prec).map(|k| p.pow(k)).collect();

        let frob_image = if m == 1 {
            // Z/p^N: the generator is -c_0 and the Frobenius is the identity.
            arith.neg(&arith.modulus[..1])
        } else {
            let mut gen = arith.zero();
            gen[1] = 1;
            let mut y = arith.pow(&gen, p as u128);
            // Newton on the modulus; the residue polynomial is separable, so f'(y) is a unit.
            for _ in 0..=prec {
                let fy = arith.eval_modulus(&y);
                if fy.iter().all(|&c| c == 0) {
                    break;
                }
                let dfy = arith.eval_modulus_derivative(&y);
                let inv = arith
                    .inv(&dfy, prec)
                    .expect("separable residue polynomial has a unit derivative at its roots");
                y = arith.sub(&y, &arith.mul(&fy, &inv));
            }
            debug_assert!(arith.eval_modulus(&y).iter().all(|&c| c == 0));
            y
        };

        let mut frob = Vec::with_capacity(m);
        let mut acc = arith.one();
        for _ in 0..m {
            frob.push(acc.clone());
            acc = arith.mul(&acc, &frob_image);
        }

        let mut ctx = RingContext {
            arith,
            prec,
            pow_p,
            frob_image,
            frob_inv: Vec::new(),
            frob,
        };
        let frob_inv = (0..m)
            .map(|i| {
                let mut v = ctx.arith.zero();
                v[i] = 1;
                for _ in 0..m - 1 {
                    v = ctx.frob_raw(&v);
                }
                v
            })
            .collect();
        ctx.frob_inv = frob_inv;
        Ok(Arc::new(ctx))
    }

    pub fn p(&self) -> u64 {
        self.arith.p
    }

    /// Residue degree m.
    pub fn degree(&self) -> usize {
        self.arith.m
    }

    /// Working precision N.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// p^k for 0 <= k <= N.
    pub fn p_pow(&self, k: u32) -> u64 {
        self.pow_p[k as usize]
    }

    /// Size of the residue field, p^m.
    pub fn residue_field_size(&self) -> u128 {
        (self.arith.p as u128).pow(self.arith.m as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.arith.modulus
    }

    /// Coordinates of the image of the generator under the Frobenius lift.
    pub fn frobenius_image(&self) -> &[u64] {
        &self.frob_image
    }

    pub(crate) fn frob_raw(&self, a: &[u64]) -> Vec<u64> {
        Self::apply_linear(&self.arith, &self.frob, a)
    }

    pub(crate) fn frob_inv_raw(&self, a: &[u64]) -> Vec<u64> {
        Self::apply_linear(&self.arith, &self.frob_inv, a)
    }

    fn apply_linear(arith: &Arith, columns: &[Vec<u64>], a: &[u64]) -> Vec<u64> {
        if arith.m == 1 {
            return a.to_vec();
        }
        let mut out = arith.zero();
        for (&ai, col) in a.iter().zip(columns) {
            if ai == 0 {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(col) {
                *o = ((*o as u128 + mulmod(ai, c, arith.pn) as u128) % arith.pn as u128) as u64;
            }
        }
        out
    }

    pub fn zero(self: &Arc<Self>) -> RingElement {
        RingElement::from_raw(self.clone(), self.arith.zero(), self.prec)
    }

    pub fn one(self: &Arc<Self>) -> RingElement {
        RingElement::from_raw(self.clone(), self.arith.one(), self.prec)
    }

    /// The class of x in (Z/p^N)[x] / (f).
    pub fn generator(self: &Arc<Self>) -> RingElement {
        let mut v = self.arith.zero();
        if self.arith.m == 1 {
            v[0] = self.frob_image[0];
        } else {
            v[1] = 1;
        }
        RingElement::from_raw(self.clone(), v, self.prec)
    }

    /// Integer embedded at full precision; negative values wrap to p^N - |v|.
    pub fn from_int(self: &Arc<Self>, v: i64) -> RingElement {
        let pn = self.arith.pn as i128;
        let r = (v as i128).rem_euclid(pn) as u64;
        let mut coords = self.arith.zero();
        coords[0] = r;
        RingElement::from_raw(self.clone(), coords, self.prec)
    }

    /// Element from basis coordinates (reduced mod p^N), at full precision.
    pub fn from_coords(self: &Arc<Self>, coords: &[u64]) -> Result<RingElement> {
        self.from_coords_with_prec(coords, self.prec)
    }

    pub fn from_coords_with_prec(
        self: &Arc<Self>,
        coords: &[u64],
        prec: u32,
    ) -> Result<RingElement> {
        if coords.len() != self.arith.m {
            return Err(Error::Dimension(format!(
                "expected {} coordinates, got {}",
                self.arith.m,
                coords.len()
            )));
        }
        if prec > self.prec {
            return Err(Error::Domain(format!(
                "precision {prec} exceeds ring precision {}",
                self.prec
            )));
        }
        let v = coords.iter().map(|c| c % self.arith.pn).collect();
        Ok(RingElement::from_raw(self.clone(), v, prec))
    }

    /// Every residue of F_{p^m} as a precision-1 element, in lexicographic
    /// coordinate order (coordinate 0 least significant).
    pub fn residues(self: &Arc<Self>) -> Vec<RingElement> {
        let p = self.arith.p;
        let m = self.arith.m;
        let q = self.residue_field_size() as u64;
        (0..q)
            .map(|code| {
                let coords: Vec<u64> = (0..m).map(|i| (code / p.pow(i as u32)) % p).collect();
                RingElement::from_raw(self.clone(), coords, 1)
            })
            .collect()
    }

    /// The Teichmueller (multiplicative) lift of the residue of `residue`:
    /// iterate t <- t^(p^m) N times; each step gains at least one digit.
    pub fn teichmueller(self: &Arc<Self>, residue: &RingElement) -> RingElement {
        let q = self.residue_field_size();
        let mut t: Vec<u64> = residue.coords().iter().map(|c| c % self.arith.p).collect();
        for _ in 0..self.prec {
            t = self.arith.pow(&t, q);
        }
        RingElement::from_raw(self.clone(), t, self.prec)
    }
}
