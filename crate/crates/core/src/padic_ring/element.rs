use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::context::RingContext;
use crate::error::{Error, Result};

/// p-adic valuation of an element known to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    /// Zero at the known precision.
    Infinite,
}

impl Valuation {
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// An element of O_N in the basis 1, x, ..., x^{m-1}, trusted modulo p^known_prec.
///
/// Coordinates are stored reduced into [0, p^known_prec), so equal classes have equal
/// representations. Ring operations return the minimum of the input precisions;
/// [`RingElement::delta`] and [`RingElement::div_p`] cost one digit and
/// [`RingElement::mul_p`] gains one.
#[derive(Clone)]
pub struct RingElement {
    ring: Arc<RingContext>,
    coords: Vec<u64>,
    prec: u32,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.coords == other.coords && *self.ring == *other.ring
    }
}

impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(p^{})", self.expansion(), self.prec)
    }
}

impl RingElement {
    pub(crate) fn from_raw(ring: Arc<RingContext>, mut coords: Vec<u64>, prec: u32) -> Self {
        let modulus = ring.p_pow(prec);
        if prec < ring.precision() {
            for c in coords.iter_mut() {
                *c %= modulus;
            }
        }
        RingElement {
            ring,
            coords,
            prec,
        }
    }

    fn derived(&self, coords: Vec<u64>, prec: u32) -> Self {
        RingElement::from_raw(self.ring.clone(), coords, prec)
    }

    fn check_ring(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "elements from different rings"
        );
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn known_prec(&self) -> u32 {
        self.prec
    }

    /// Forget digits beyond `prec` (no-op if already coarser).
    pub fn truncate(&self, prec: u32) -> Self {
        self.derived(self.coords.clone(), prec.min(self.prec))
    }

    /// Claim full ring precision for these coordinates, i.e. pick the lift whose
    /// unknown digits are zero.
    pub fn lift_to_full(&self) -> Self {
        self.derived(self.coords.clone(), self.ring.precision())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one().truncate(self.prec)
    }

    pub fn is_unit(&self) -> bool {
        self.prec >= 1 && self.ring.arith.is_unit(&self.coords)
    }

    /// Equality modulo p^k; both sides must be known to at least k digits for a
    /// `true` answer to mean anything, which callers are expected to arrange.
    pub fn congruent(&self, other: &Self, k: u32) -> bool {
        let modulus = self.ring.p_pow(k.min(self.ring.precision()));
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a % modulus == b % modulus)
    }

    pub fn valuation(&self) -> Valuation {
        let p = self.ring.p();
        let v = self
            .coords
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut c = c;
                let mut v = 0;
                while c % p == 0 {
                    c /= p;
                    v += 1;
                }
                v
            })
            .min();
        match v {
            Some(v) if v < self.prec => Valuation::Finite(v),
            _ => Valuation::Infinite,
        }
    }

    /// Little-endian base-p digits of each coordinate, `known_prec` digits each.
    pub fn digits(&self) -> Vec<Vec<u64>> {
        let p = self.ring.p();
        self.coords
            .iter()
            .map(|&c| {
                let mut c = c;
                (0..self.prec)
                    .map(|_| {
                        let d = c % p;
                        c /= p;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    /// Human-readable expansion, "d0 + d1*p + ..." per coordinate.
    pub fn expansion(&self) -> String {
        let p = self.ring.p();
        let coord_str = |digits: &[u64]| -> String {
            let terms: Vec<String> = digits
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != 0)
                .map(|(i, &d)| match i {
                    0 => format!("{d}"),
                    1 => format!("{d}*{p}"),
                    _ => format!("{d}*{p}^{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let digits = self.digits();
        if digits.len() == 1 {
            return coord_str(&digits[0]);
        }
        digits
            .iter()
            .enumerate()
            .map(|(i, d)| match i {
                0 => format!("({})", coord_str(d)),
                1 => format!("({})*x", coord_str(d)),
                _ => format!("({})*x^{i}", coord_str(d)),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Multiply by an integer (taken mod p^N); precision unchanged.
    pub fn scale(&self, c: u64) -> Self {
        self.derived(self.ring.arith.scale(&self.coords, c), self.prec)
    }

    pub fn scale_int(&self, c: i64) -> Self {
        let pn = self.ring.arith.pn as i128;
        self.scale((c as i128).rem_euclid(pn) as u64)
    }

    pub fn pow(&self, e: u64) -> Self {
        self.derived(self.ring.arith.pow(&self.coords, e as u128), self.prec)
    }

    /// Multiplicative inverse of a unit, to the element's precision.
    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .ring
            .arith
            .inv(&self.coords, self.prec.max(1))
            .filter(|_| self.prec >= 1)
            .ok_or(Error::NotUnit)?;
        Ok(self.derived(inv, self.prec))
    }

    /// Exact division by p as a digit shift; the result is known to one digit less.
    pub fn div_p(&self) -> Result<Self> {
        let p = self.ring.p();
        if self.prec == 0 {
            return Err(Error::PrecisionExhausted { needed: 1, have: 0 });
        }
        if self.coords.iter().any(|&c| c % p != 0) {
            return Err(Error::InexactDivision);
        }
        Ok(self.derived(self.coords.iter().map(|&c| c / p).collect(), self.prec - 1))
    }

    /// Multiplication by p as a digit shift; the result is known to one more digit
    /// (capped at the ring precision).
    pub fn mul_p(&self) -> Self {
        let prec = (self.prec + 1).min(self.ring.precision());
        self.derived(self.ring.arith.scale(&self.coords, self.ring.p()), prec)
    }

    /// The Frobenius lift, a ring automorphism of order m.
    pub fn frobenius(&self) -> Self {
        self.derived(self.ring.frob_raw(&self.coords), self.prec)
    }

    pub fn frobenius_inverse(&self) -> Self {
        self.derived(self.ring.frob_inv_raw(&self.coords), self.prec)
    }

    /// Frobenius applied `k` times (reduced mod m).
    pub fn frobenius_pow(&self, k: usize) -> Self {
        let m = self.ring.degree();
        (0..k % m).fold(self.clone(), |acc, _| acc.frobenius())
    }

    /// Fermat quotient (phi(a) - a^p) / p.
    pub fn delta(&self) -> Result<Self> {
        if self.prec < 2 {
            return Err(Error::PrecisionExhausted {
                needed: 2,
                have: self.prec,
            });
        }
        let numerator = &self.frobenius() - &self.pow(self.ring.p());
        numerator.div_p()
    }

    /// Whether delta vanishes at precision known_prec - 1, i.e. the element is 0 or a
    /// root of unity to that precision.
    pub fn is_constant(&self) -> Result<bool> {
        Ok(self.delta()?.is_zero())
    }

    /// Whether the element lies in the image of Z/p^N (all higher coordinates zero).
    pub fn is_integral_scalar(&self) -> bool {
        self.coords.iter().skip(1).all(|&c| c == 0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $raw:ident) => {
        impl $trait<&RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.check_ring(rhs);
                let prec = self.prec.min(rhs.prec);
                self.derived(self.ring.arith.$raw(&self.coords, &rhs.coords), prec)
            }
        }

        impl $trait<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                (&self).$method(rhs)
            }
        }

        impl $trait<RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.derived(self.ring.arith.neg(&self.coords), self.prec)
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}
