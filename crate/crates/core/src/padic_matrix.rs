//! n x n matrices over O_N: ring operations, entrywise Frobenius / delta / p-th
//! power maps, the delta-addition group law, the binomial series (1 + pT)^a,
//! and membership predicates for GL_n, SL_n, SO(q) and their delta-Lie algebras.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic_ring::{inv_mod, mulmod, split_p, Exponent, RingContext, RingElement, Valuation};

/// Dimension cap used by callers that accept user-supplied n.
pub const DEFAULT_MAX_DIM: usize = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct PMatrix {
    ring: Arc<RingContext>,
    n: usize,
    entries: Vec<RingElement>,
}

impl fmt::Debug for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).expansion()).collect())
            .collect();
        write!(f, "PMatrix{rows:?}")
    }
}

impl PMatrix {
    pub fn new(ring: &Arc<RingContext>, n: usize, entries: Vec<RingElement>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "{n}x{n} matrix needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(PMatrix {
            ring: ring.clone(),
            n,
            entries,
        })
    }

    pub fn from_fn(
        ring: &Arc<RingContext>,
        n: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        PMatrix {
            ring: ring.clone(),
            n,
            entries,
        }
    }

    pub fn from_ints(ring: &Arc<RingContext>, n: usize, values: &[i64]) -> Result<Self> {
        let entries = values.iter().map(|&v| ring.from_int(v)).collect();
        PMatrix::new(ring, n, entries)
    }

    pub fn identity(ring: &Arc<RingContext>, n: usize) -> Self {
        PMatrix::from_fn(ring, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn zero(ring: &Arc<RingContext>, n: usize) -> Self {
        PMatrix::from_fn(ring, n, |_, _| ring.zero())
    }

    pub fn diagonal(ring: &Arc<RingContext>, diag: &[RingElement]) -> Self {
        let n = diag.len();
        PMatrix::from_fn(ring, n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                ring.zero()
            }
        })
    }

    /// The identity with its columns permuted: column j is the basis vector e_{perm[j]}.
    pub fn permutation(ring: &Arc<RingContext>, perm: &[usize]) -> Self {
        let n = perm.len();
        PMatrix::from_fn(ring, n, |i, j| {
            if perm[j] == i {
                ring.one()
            } else {
                ring.zero()
            }
        })
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RingElement) {
        self.entries[i * self.n + j] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    /// Minimum known precision over the entries.
    pub fn known_prec(&self) -> u32 {
        self.entries
            .iter()
            .map(RingElement::known_prec)
            .min()
            .unwrap_or(self.ring.precision())
    }

    pub fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Self {
        PMatrix {
            ring: self.ring.clone(),
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&RingElement) -> Result<RingElement>) -> Result<Self> {
        Ok(PMatrix {
            ring: self.ring.clone(),
            n: self.n,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn truncate(&self, prec: u32) -> Self {
        self.map(|e| e.truncate(prec))
    }

    pub fn lift_to_full(&self) -> Self {
        self.map(RingElement::lift_to_full)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(k, e)| {
            if k / self.n == k % self.n {
                e.is_one()
            } else {
                e.is_zero()
            }
        })
    }

    /// Entrywise agreement modulo p^k.
    pub fn congruent(&self, other: &PMatrix, k: u32) -> bool {
        self.n == other.n
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.congruent(b, k))
    }

    /// Minimum entry valuation (infinite for the zero matrix at its precision).
    pub fn valuation(&self) -> Valuation {
        self.entries
            .iter()
            .map(RingElement::valuation)
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Concatenated coordinates, for deterministic ordering of candidate lists.
    pub fn sort_key(&self) -> Vec<u64> {
        self.entries
            .iter()
            .flat_map(|e| e.coords().iter().copied())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        PMatrix::from_fn(&self.ring, self.n, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        self.map(|e| e * c)
    }

    pub fn mul_p(&self) -> Self {
        self.map(RingElement::mul_p)
    }

    pub fn div_p(&self) -> Result<Self> {
        self.try_map(RingElement::div_p)
    }

    /// u^(p): entrywise p-th power.
    pub fn pow_p_entrywise(&self) -> Self {
        let p = self.ring.p();
        self.map(|e| e.pow(p))
    }

    pub fn frobenius_entrywise(&self) -> Self {
        self.map(RingElement::frobenius)
    }

    pub fn frobenius_inverse_entrywise(&self) -> Self {
        self.map(RingElement::frobenius_inverse)
    }

    pub fn frobenius_pow_entrywise(&self, k: usize) -> Self {
        self.map(|e| e.frobenius_pow(k))
    }

    pub fn delta_entrywise(&self) -> Result<Self> {
        self.try_map(RingElement::delta)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = PMatrix::identity(&self.ring, self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// One nonzero entry in every row and every column.
    pub fn is_monomial(&self) -> bool {
        let n = self.n;
        let rows_ok = (0..n).all(|i| (0..n).filter(|&j| !self.get(i, j).is_zero()).count() == 1);
        let cols_ok = (0..n).all(|j| (0..n).filter(|&i| !self.get(i, j).is_zero()).count() == 1);
        rows_ok && cols_ok
    }

    pub fn det(&self) -> RingElement {
        if self.n <= 4 {
            return self.det_cofactor();
        }
        self.det_elimination().unwrap_or_else(|| self.det_cofactor())
    }

    fn det_cofactor(&self) -> RingElement {
        let cols: Vec<usize> = (0..self.n).collect();
        self.minor_det(0, &cols)
    }

    /// Laplace expansion along `row` over the remaining `cols`.
    fn minor_det(&self, row: usize, cols: &[usize]) -> RingElement {
        match cols.len() {
            0 => self.ring.one(),
            1 => self.get(row, cols[0]).clone(),
            2 => {
                self.get(row, cols[0]) * self.get(row + 1, cols[1])
                    - self.get(row, cols[1]) * self.get(row + 1, cols[0])
            }
            _ => {
                let mut acc = self.ring.zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(row, c);
                    if entry.is_zero() && entry.known_prec() == self.ring.precision() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = entry * self.minor_det(row + 1, &rest);
                    acc = if k % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    /// Gaussian elimination with unit pivots; `None` if some column has no unit pivot.
    fn det_elimination(&self) -> Option<RingElement> {
        let n = self.n;
        let mut rows: Vec<Vec<RingElement>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = self.ring.one();
        for k in 0..n {
            let r = (k..n).find(|&r| rows[r][k].is_unit())?;
            if r != k {
                rows.swap(r, k);
                det = -det;
            }
            let pivot_inv = rows[k][k].inverse().ok()?;
            det = &det * &rows[k][k];
            for r in k + 1..n {
                let factor = &rows[r][k] * &pivot_inv;
                for c in k..n {
                    let t = &factor * &rows[k][c];
                    rows[r][c] = &rows[r][c] - &t;
                }
            }
        }
        Some(det)
    }

    /// Gauss-Jordan inverse with unit pivots.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a: Vec<Vec<RingElement>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut inv: Vec<Vec<RingElement>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { self.ring.one() } else { self.ring.zero() })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let r = (k..n).find(|&r| a[r][k].is_unit()).ok_or(Error::NotInGl)?;
            a.swap(r, k);
            inv.swap(r, k);
            let pivot_inv = a[k][k].inverse()?;
            for c in 0..n {
                a[k][c] = &a[k][c] * &pivot_inv;
                inv[k][c] = &inv[k][c] * &pivot_inv;
            }
            for r in 0..n {
                if r == k || a[r][k].is_zero() {
                    continue;
                }
                let factor = a[r][k].clone();
                for c in 0..n {
                    let t = &factor * &a[k][c];
                    a[r][c] = &a[r][c] - &t;
                    let t = &factor * &inv[k][c];
                    inv[r][c] = &inv[r][c] - &t;
                }
            }
        }
        PMatrix::new(&self.ring, n, inv.into_iter().flatten().collect())
    }

    /// a +_delta b = a + b + p a b; 1 + p(a +_delta b) = (1 + pa)(1 + pb).
    pub fn delta_add(&self, other: &PMatrix) -> Result<Self> {
        self.check_dims(other)?;
        Ok(&(self + other) + &(self * other).mul_p())
    }

    /// The inverse for +_delta: -a (1 + pa)^{-1}.
    pub fn delta_inverse(&self) -> Self {
        let eps = self.one_plus_p();
        let eps_inv = eps
            .inverse()
            .expect("1 + pa is congruent to 1 mod p, hence invertible");
        -(self * &eps_inv)
    }

    /// 1 + p * self.
    pub fn one_plus_p(&self) -> Self {
        &PMatrix::identity(&self.ring, self.n) + &self.mul_p()
    }

    /// The binomial series sum_k binom(a, k) (M - 1)^k for M = 1 mod p.
    ///
    /// With M - 1 = pS the k-th term is a(a-1)...(a-k+1) * p^(k - v_p(k!)) / w_k * S^k,
    /// w_k the unit part of k!, so every coefficient is an exact integer mod p^N.
    pub fn one_plus_pt_pow(&self, a: Exponent) -> Result<Self> {
        let ring = self.ring.clone();
        let n = self.n;
        let p = ring.p();
        let pn = ring.p_pow(ring.precision());
        let prec = self.known_prec();
        let id = PMatrix::identity(&ring, n);
        let t = self - &id;
        if prec == 0 || t.entries.iter().any(|e| e.coords().iter().any(|&c| c % p != 0)) {
            return Err(Error::Domain(
                "(1 + pT)^a needs a matrix congruent to 1 mod p".into(),
            ));
        }
        let s = t.div_p()?.lift_to_full();
        let mut sum = id.clone();
        let mut spow = id;
        let mut falling = 1u64;
        let mut fact_v = 0u32;
        let mut fact_unit = 1u64;
        let mut k = 0u64;
        loop {
            k += 1;
            if k * (p - 2) + 1 >= prec as u64 * (p - 1) {
                break;
            }
            falling = mulmod(falling, (a.residue() + pn - (k - 1) % pn) % pn, pn);
            let (v, w) = split_p(k, p);
            fact_v += v;
            fact_unit = mulmod(fact_unit, w % pn, pn);
            spow = &spow * &s;
            let e = k as u32 - fact_v;
            if e >= prec {
                continue;
            }
            let c = mulmod(
                mulmod(falling, ring.p_pow(e), pn),
                inv_mod(fact_unit, pn).expect("unit part of k! is a unit"),
                pn,
            );
            if c != 0 {
                sum = &sum + &spow.map(|x| x.scale(c));
            }
        }
        Ok(sum.truncate(prec))
    }

    fn check_dims(&self, other: &PMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }
}

pub fn in_gl(a: &PMatrix) -> bool {
    a.det().is_unit()
}

pub fn in_sl(a: &PMatrix) -> bool {
    a.det().is_one()
}

/// x^t q x = q together with det x = 1, which singles out the identity component.
pub fn in_so(a: &PMatrix, q: &PMatrix) -> bool {
    a.n() == q.n() && (&(&a.transpose() * q) * a - q).is_zero() && in_sl(a)
}

/// 1 + p alpha in SL_n.
pub fn in_sl_delta(alpha: &PMatrix) -> bool {
    in_sl(&alpha.one_plus_p())
}

/// (1 + p alpha)^t q (1 + p alpha) = q.
pub fn in_so_delta(alpha: &PMatrix, q: &PMatrix) -> bool {
    let eps = alpha.one_plus_p();
    alpha.n() == q.n() && (&(&eps.transpose() * q) * &eps - q).is_zero()
}

impl Mul<&PMatrix> for &PMatrix {
    type Output = PMatrix;
    fn mul(self, rhs: &PMatrix) -> PMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let n = self.n;
        PMatrix::from_fn(&self.ring, n, |i, j| {
            let mut acc = self.get(i, 0) * rhs.get(0, j);
            for k in 1..n {
                acc = acc + self.get(i, k) * rhs.get(k, j);
            }
            acc
        })
    }
}

impl Add<&PMatrix> for &PMatrix {
    type Output = PMatrix;
    fn add(self, rhs: &PMatrix) -> PMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        PMatrix {
            ring: self.ring.clone(),
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&PMatrix> for &PMatrix {
    type Output = PMatrix;
    fn sub(self, rhs: &PMatrix) -> PMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        PMatrix {
            ring: self.ring.clone(),
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &PMatrix {
    type Output = PMatrix;
    fn neg(self) -> PMatrix {
        self.map(|e| -e)
    }
}

impl Neg for PMatrix {
    type Output = PMatrix;
    fn neg(self) -> PMatrix {
        -&self
    }
}

macro_rules! owned_matrix_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<PMatrix> for PMatrix {
            type Output = PMatrix;
            fn $method(self, rhs: PMatrix) -> PMatrix {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PMatrix> for PMatrix {
            type Output = PMatrix;
            fn $method(self, rhs: &PMatrix) -> PMatrix {
                (&self).$method(rhs)
            }
        }
        impl $trait<PMatrix> for &PMatrix {
            type Output = PMatrix;
            fn $method(self, rhs: PMatrix) -> PMatrix {
                self.$method(&rhs)
            }
        }
    };
}

owned_matrix_binop!(Mul, mul);
owned_matrix_binop!(Add, add);
owned_matrix_binop!(Sub, sub);

#[cfg(test)]
mod tests;
