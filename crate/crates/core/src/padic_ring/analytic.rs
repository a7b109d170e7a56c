//! Truncated p-adic power series on O_N: exp on pO, log on 1 + pO, powers
//! (1 + pt)^a for p-adic integer exponents a, and the logarithmic-derivative
//! analogue psi.
//!
//! Every series is summed in the form p^e * y^n / w with y = x / p and w a
//! p-adic unit, so no division by p is ever approximated: the term is exact
//! modulo p^k as soon as y is known modulo p^(k-1).

use super::context::{inv_mod, mulmod, RingContext};
use super::element::RingElement;
use crate::error::{Error, Result};

/// A p-adic integer exponent, truncated to Z/p^N like every other quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    residue: u64,
}

impl Exponent {
    pub fn integer(ring: &RingContext, a: i64) -> Self {
        let pn = ring.p_pow(ring.precision()) as i128;
        Exponent {
            residue: (a as i128).rem_euclid(pn) as u64,
        }
    }

    /// num / den in Z_p; `den` must be prime to p.
    pub fn ratio(ring: &RingContext, num: i64, den: i64) -> Result<Self> {
        let pn = ring.p_pow(ring.precision());
        let d = (den as i128).rem_euclid(pn as i128) as u64;
        let inv = inv_mod(d, pn).ok_or_else(|| {
            Error::Domain(format!("exponent denominator {den} is divisible by p"))
        })?;
        let n = Exponent::integer(ring, num).residue;
        Ok(Exponent {
            residue: mulmod(n, inv, pn),
        })
    }

    /// An exponent given as an element of the Z_p subring, known to full precision.
    pub fn from_element(a: &RingElement) -> Result<Self> {
        if !a.is_integral_scalar() || a.known_prec() < a.ring().precision() {
            return Err(Error::Domain(
                "exponent must be a full-precision element of Z/p^N".into(),
            ));
        }
        Ok(Exponent {
            residue: a.coords()[0],
        })
    }

    /// Representative in [0, p^N).
    pub fn residue(&self) -> u64 {
        self.residue
    }
}

/// (v_p(n), n / p^v_p(n)).
pub(crate) fn split_p(mut n: u64, p: u64) -> (u32, u64) {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

fn floor_log(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut t = n;
    while t >= p {
        t /= p;
        k += 1;
    }
    k
}

fn require_divisible_by_p(x: &RingElement, what: &str) -> Result<()> {
    if x.known_prec() == 0 {
        return Err(Error::PrecisionExhausted { needed: 1, have: 0 });
    }
    if x.coords().iter().any(|&c| c % x.ring().p() != 0) {
        return Err(Error::Domain(what.to_string()));
    }
    Ok(())
}

impl RingElement {
    fn raw_series_sum(
        &self,
        y: &RingElement,
        terms: impl Iterator<Item = (i64, u32, u64)>,
        start: Vec<u64>,
        prec: u32,
    ) -> RingElement {
        // terms: (sign, e, w) for consecutive n = 1, 2, ...; y^n accumulated here.
        let ring = self.ring().clone();
        let arith = &ring.arith;
        let pn = arith.pn;
        let mut sum = start;
        let mut ypow = arith.one();
        for (sign, e, w) in terms {
            ypow = arith.mul(&ypow, y.coords());
            if e >= prec {
                continue;
            }
            let winv = inv_mod(w % pn, pn).expect("series denominators are p-adic units");
            let c = mulmod(ring.p_pow(e), winv, pn);
            let term = arith.scale(&ypow, c);
            sum = if sign > 0 {
                arith.add(&sum, &term)
            } else {
                arith.sub(&sum, &term)
            };
        }
        RingElement::from_raw(ring.clone(), sum, prec)
    }

    /// p-adic exponential pO -> 1 + pO.
    pub fn exp_p(&self) -> Result<RingElement> {
        require_divisible_by_p(self, "exp_p needs an argument of valuation >= 1")?;
        let ring = self.ring().clone();
        let p = ring.p();
        let pn = ring.arith.pn;
        let prec = self.known_prec();
        let y = self.div_p()?;
        let mut fact_v = 0u32;
        let mut fact_unit = 1u64;
        let mut n = 0u64;
        let terms = std::iter::from_fn(|| {
            n += 1;
            if n * (p - 2) + 1 >= prec as u64 * (p - 1) {
                return None;
            }
            let (v, w) = split_p(n, p);
            fact_v += v;
            fact_unit = mulmod(fact_unit, w % pn, pn);
            Some((1i64, n as u32 - fact_v, fact_unit))
        });
        Ok(self.raw_series_sum(&y, terms, ring.arith.one(), prec))
    }

    /// p-adic logarithm 1 + pO -> pO.
    pub fn log_p(&self) -> Result<RingElement> {
        let ring = self.ring().clone();
        let x = self - &ring.one();
        require_divisible_by_p(&x, "log_p needs an argument congruent to 1 mod p")?;
        let p = ring.p();
        let prec = self.known_prec();
        let y = x.div_p()?;
        let mut n = 0u64;
        let terms = std::iter::from_fn(|| {
            n += 1;
            if n - floor_log(n, p) as u64 >= prec as u64 {
                return None;
            }
            let (v, w) = split_p(n, p);
            let sign = if n % 2 == 1 { 1 } else { -1 };
            Some((sign, n as u32 - v, w))
        });
        Ok(self.raw_series_sum(&y, terms, ring.arith.zero(), prec))
    }

    /// u^a = exp(a log u) for u = 1 (mod p) and a p-adic integer exponent a.
    pub fn pow_padic(&self, a: Exponent) -> Result<RingElement> {
        let l = self.log_p().map_err(|_| {
            Error::Domain("(1 + pt)^a needs a base congruent to 1 mod p".into())
        })?;
        l.scale(a.residue()).exp_p()
    }

    /// psi(u) = (1/p) log(phi(u) / u^p), a homomorphism from units to O.
    /// Known to one digit less than `u`.
    pub fn psi(&self) -> Result<RingElement> {
        let ratio = &self.frobenius() * &self.pow(self.ring().p()).inverse()?;
        ratio.log_p()?.div_p()
    }

    /// psi through its expansion sum_{n>=1} (-1)^(n-1) (p^(n-1)/n) (delta(u)/u^p)^n.
    pub fn psi_series(&self) -> Result<RingElement> {
        let ring = self.ring().clone();
        let p = ring.p();
        let t = &self.delta()? * &self.pow(p).inverse()?;
        let prec = t.known_prec();
        let arith = &ring.arith;
        let pn = arith.pn;
        let mut sum = arith.zero();
        let mut tpow = arith.one();
        let mut n = 1u64;
        while (n - 1) - (floor_log(n, p) as u64) < prec as u64 {
            tpow = arith.mul(&tpow, t.coords());
            let (v, w) = split_p(n, p);
            let e = (n - 1) as u32 - v;
            if e < prec {
                let c = mulmod(ring.p_pow(e), inv_mod(w % pn, pn).unwrap(), pn);
                let term = arith.scale(&tpow, c);
                sum = if n % 2 == 1 {
                    arith.add(&sum, &term)
                } else {
                    arith.sub(&sum, &term)
                };
            }
            n += 1;
        }
        Ok(RingElement::from_raw(ring.clone(), sum, prec))
    }
}
