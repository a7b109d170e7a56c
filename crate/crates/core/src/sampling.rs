//! Seeded sampling of ring elements, matrices, group elements and delta-Lie
//! algebra elements.
//!
//! The generator is SplitMix64 (Steele, Lea, Flood 2014): state advances by
//! 0x9e3779b97f4a7c15 and each output is the state passed through the mix
//! `z = (z ^ z>>30) * 0xbf58476d1ce4e5b9; z = (z ^ z>>27) * 0x94d049bb133111eb; z ^ z>>31`.
//! A value below `b` is drawn by rejecting outputs `>= floor(2^64-1 / b) * b` and
//! reducing the rest mod `b`. Independent streams come from [`Sampler::stream`].

use std::sync::Arc;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::padic_matrix::{in_gl, PMatrix};
use crate::padic_ring::{RingContext, RingElement};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// A stream keyed by `seed` and a path of tags: each tag t replaces the running
    /// key h by the first SplitMix64 output from state h ^ (t * 0x9e3779b97f4a7c15).
    pub fn stream(seed: u64, tags: &[u64]) -> Self {
        let mut h = seed;
        for &t in tags {
            h = SplitMix64::seed_from_u64(h ^ t.wrapping_mul(GOLDEN)).next_u64();
        }
        Sampler::new(h)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in [0, bound).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let limit = (u64::MAX / bound) * bound;
        loop {
            let x = self.next_u64();
            if x < limit {
                return x % bound;
            }
        }
    }

    /// Uniform element of O_N at full precision.
    pub fn element(&mut self, ring: &Arc<RingContext>) -> RingElement {
        let pn = ring.p_pow(ring.precision());
        let coords: Vec<u64> = (0..ring.degree()).map(|_| self.below(pn)).collect();
        ring.from_coords(&coords).expect("coordinate count matches")
    }

    /// Uniform element of the Z/p^N subring.
    pub fn subring_element(&mut self, ring: &Arc<RingContext>) -> RingElement {
        let pn = ring.p_pow(ring.precision());
        ring.from_int(self.below(pn) as i64)
    }

    pub fn unit(&mut self, ring: &Arc<RingContext>) -> RingElement {
        loop {
            let a = self.element(ring);
            if a.is_unit() {
                return a;
            }
        }
    }

    pub fn p_multiple(&mut self, ring: &Arc<RingContext>) -> RingElement {
        self.element(ring).mul_p()
    }

    /// 1 + p * (uniform element).
    pub fn one_plus_p(&mut self, ring: &Arc<RingContext>) -> RingElement {
        ring.one() + self.p_multiple(ring)
    }

    /// Uniform nonzero residue, at precision 1.
    pub fn nonzero_residue(&mut self, ring: &Arc<RingContext>) -> RingElement {
        let residues = ring.residues();
        let k = 1 + self.below(residues.len() as u64 - 1) as usize;
        residues[k].clone()
    }

    /// Teichmueller lift of a uniform nonzero residue: a root of unity.
    pub fn constant_unit(&mut self, ring: &Arc<RingContext>) -> RingElement {
        let r = self.nonzero_residue(ring);
        ring.teichmueller(&r)
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        perm
    }

    pub fn matrix(&mut self, ring: &Arc<RingContext>, n: usize) -> PMatrix {
        PMatrix::from_fn(ring, n, |_, _| self.element(ring))
    }

    pub fn subring_matrix(&mut self, ring: &Arc<RingContext>, n: usize) -> PMatrix {
        PMatrix::from_fn(ring, n, |_, _| self.subring_element(ring))
    }

    /// Uniform matrix resampled until its determinant is a unit.
    pub fn gl(&mut self, ring: &Arc<RingContext>, n: usize) -> PMatrix {
        loop {
            let a = self.matrix(ring, n);
            if in_gl(&a) {
                return a;
            }
        }
    }

    pub fn gl_subring(&mut self, ring: &Arc<RingContext>, n: usize) -> PMatrix {
        loop {
            let a = self.subring_matrix(ring, n);
            if in_gl(&a) {
                return a;
            }
        }
    }

    /// A GL_n sample with its first column divided by the determinant.
    pub fn sl(&mut self, ring: &Arc<RingContext>, n: usize) -> PMatrix {
        normalize_det(self.gl(ring, n))
    }

    pub fn sl_subring(&mut self, ring: &Arc<RingContext>, n: usize) -> PMatrix {
        normalize_det(self.gl_subring(ring, n))
    }

    /// A uniform n x n matrix in the Lie algebra {Y : Y^t q + q Y = 0} of the form q.
    /// Y = q^{-1} A with A antisymmetric for symmetric q and symmetric for antisymmetric q.
    pub fn form_lie_algebra(&mut self, q: &PMatrix, subring: bool) -> PMatrix {
        let ring = q.ring().clone();
        let n = q.n();
        let symmetric_q = *q == q.transpose();
        let mut a = PMatrix::zero(&ring, n);
        for i in 0..n {
            for j in i..n {
                if i == j && symmetric_q {
                    continue;
                }
                let v = if subring {
                    self.subring_element(&ring)
                } else {
                    self.element(&ring)
                };
                a.set(i, j, v.clone());
                a.set(j, i, if symmetric_q { -v } else { v });
            }
        }
        &q.inverse().expect("q is invertible") * &a
    }

    /// An element of SO(q) as a Cayley transform (1 + Y)(1 - Y)^{-1}, Y in the Lie
    /// algebra of q with 1 - Y invertible. Such elements have determinant 1.
    pub fn so(&mut self, q: &PMatrix) -> PMatrix {
        self.so_impl(q, false)
    }

    pub fn so_subring(&mut self, q: &PMatrix) -> PMatrix {
        self.so_impl(q, true)
    }

    fn so_impl(&mut self, q: &PMatrix, subring: bool) -> PMatrix {
        let id = PMatrix::identity(q.ring(), q.n());
        loop {
            let y = self.form_lie_algebra(q, subring);
            if let Ok(inv) = (&id - &y).inverse() {
                return &(&id + &y) * &inv;
            }
        }
    }

    /// alpha with 1 + p alpha uniform in the congruence subgroup.
    pub fn alpha_gl(&mut self, ring: &Arc<RingContext>, n: usize) -> PMatrix {
        self.matrix(ring, n)
    }

    /// alpha in sl_{n,delta}: 1 + p R rescaled in its first column by det^{-1}.
    pub fn alpha_sl(&mut self, ring: &Arc<RingContext>, n: usize, subring: bool) -> PMatrix {
        let r = if subring {
            self.subring_matrix(ring, n)
        } else {
            self.matrix(ring, n)
        };
        let eps = normalize_det(r.one_plus_p());
        let id = PMatrix::identity(ring, n);
        (&eps - &id)
            .div_p()
            .expect("eps is congruent to 1 mod p")
            .lift_to_full()
    }

    /// alpha in so(q)_delta as 2X(1 - pX)^{-1}, X in the Lie algebra of q, so that
    /// 1 + p alpha = (1 + pX)(1 - pX)^{-1}.
    pub fn alpha_so(&mut self, q: &PMatrix, subring: bool) -> PMatrix {
        let x = self.form_lie_algebra(q, subring);
        let id = PMatrix::identity(q.ring(), q.n());
        let denom = (&id - &x.mul_p())
            .inverse()
            .expect("1 - pX is congruent to 1 mod p");
        (&x * &denom).map(|e| e.scale(2))
    }
}

/// Divide the first column by the determinant, giving determinant 1.
pub fn normalize_det(a: PMatrix) -> PMatrix {
    let d_inv = a.det().inverse().expect("matrix is in GL_n");
    let mut out = a;
    for i in 0..out.n() {
        let v = out.get(i, 0) * &d_inv;
        out.set(i, 0, v);
    }
    out
}
