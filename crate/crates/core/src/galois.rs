//! Certified bounds on delta-Galois groups: the solution set G_u of
//! phi(v) = Phi(u)^{-1} Phi(u v), the monomial constants N^delta inside it, the
//! prime-integral constraints on its members, and the order-two counterexample
//! showing G_u can leave N.

use std::sync::Arc;

use rayon::prelude::*;

use crate::equations::{EquationKind, EquationType};
use crate::error::{Error, Result};
use crate::padic_matrix::{in_so, PMatrix};
use crate::padic_ring::{make_context, RingContext, RingElement};
use crate::sampling::Sampler;

/// Default bound on n! * d^n for enumerations.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// Membership in G_u for a fixed u, with Phi(u)^{-1} computed once.
pub struct GaloisBound<'a> {
    etype: &'a EquationType,
    u: &'a PMatrix,
    phi_u_inv: PMatrix,
}

impl<'a> GaloisBound<'a> {
    pub fn new(etype: &'a EquationType, u: &'a PMatrix) -> Result<Self> {
        let phi_u_inv = etype.twisted_power(u)?.inverse()?;
        Ok(GaloisBound { etype, u, phi_u_inv })
    }

    /// Phi_u(v) = Phi(u)^{-1} Phi(u v).
    pub fn translated_power(&self, v: &PMatrix) -> Result<PMatrix> {
        Ok(&self.phi_u_inv * &self.etype.twisted_power(&(self.u * v))?)
    }

    /// phi(v) = Phi_u(v) at working precision.
    pub fn contains(&self, v: &PMatrix) -> Result<bool> {
        Ok(v.frobenius_entrywise() == self.translated_power(v)?)
    }

    /// The unique member congruent to `v0` mod p, by N steps of
    /// v <- phi^{-1}(Phi_u(v)) (same contraction as the solver).
    pub fn member_from(&self, v0: &PMatrix) -> Result<PMatrix> {
        let mut v = v0.lift_to_full();
        for _ in 0..self.etype.ring().precision() {
            v = self.translated_power(&v)?.frobenius_inverse_entrywise();
        }
        Ok(v)
    }

    /// delta(det v), and delta(v^t q v) for the SO type, for v in G_u.
    pub fn constancy(&self, v: &PMatrix) -> Result<Constancy> {
        if !self.contains(v)? {
            return Err(Error::Precondition(
                "v is not in G_u: phi(v) != Phi(u)^-1 Phi(u v)".into(),
            ));
        }
        let det_delta = v.det().delta()?;
        Ok(match self.etype.kind() {
            EquationKind::Gl => Constancy {
                det_delta,
                form_delta: None,
                claimed: false,
            },
            EquationKind::Sl => Constancy {
                det_delta,
                form_delta: None,
                claimed: true,
            },
            EquationKind::So(_) => {
                let q = self.etype.q().expect("SO type carries q");
                let form = &(&v.transpose() * q) * v;
                Constancy {
                    det_delta,
                    form_delta: Some(form.delta_entrywise()?),
                    claimed: in_so(self.u, q),
                }
            }
        })
    }
}

pub fn in_galois_bound(etype: &EquationType, u: &PMatrix, v: &PMatrix) -> Result<bool> {
    GaloisBound::new(etype, u)?.contains(v)
}

pub fn bound_member_from(etype: &EquationType, u: &PMatrix, v0: &PMatrix) -> Result<PMatrix> {
    GaloisBound::new(etype, u)?.member_from(v0)
}

/// Teichmueller units of order dividing d, sorted by coordinates.
pub fn torsion_units(ring: &Arc<RingContext>, d: u64) -> Result<Vec<RingElement>> {
    let q1 = ring.residue_field_size() - 1;
    if d == 0 || !q1.is_multiple_of(d as u128) {
        return Err(Error::Precondition(format!(
            "torsion order {d} must divide p^m - 1 = {q1}"
        )));
    }
    let mut out: Vec<RingElement> = ring
        .residues()
        .iter()
        .filter(|g| !g.is_zero() && g.pow(d).is_one())
        .map(|g| ring.teichmueller(g))
        .collect();
    out.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for k in 0..n {
            let mut p = rest.clone();
            p.insert(k, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// All products (permutation matrix) * diag(units of order dividing d): the
/// d-torsion part of N^delta. Sorted, pairwise distinct.
pub fn enumerate_monomial_constants(
    ring: &Arc<RingContext>,
    n: usize,
    d: u64,
    cap: u128,
) -> Result<Vec<PMatrix>> {
    let units = torsion_units(ring, d)?;
    let fact: u128 = (1..=n as u128).product();
    let count = (units.len() as u128)
        .checked_pow(n as u32)
        .and_then(|t| t.checked_mul(fact))
        .unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let diagonals: Vec<Vec<usize>> = (0..units.len().pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let k = code % units.len();
                    code /= units.len();
                    k
                })
                .collect()
        })
        .collect();
    let mut out: Vec<PMatrix> = permutations(n)
        .par_iter()
        .flat_map_iter(|perm| {
            let w = PMatrix::permutation(ring, perm);
            diagonals
                .iter()
                .map(|idx| {
                    let t: Vec<RingElement> = idx.iter().map(|&k| units[k].clone()).collect();
                    &w * &PMatrix::diagonal(ring, &t)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by_key(PMatrix::sort_key);
    Ok(out)
}

/// Monomial with delta-constant entries.
pub fn in_n_delta(c: &PMatrix) -> bool {
    c.is_monomial()
        && c
            .delta_entrywise()
            .map(|d| d.is_zero())
            .unwrap_or(false)
}

/// Smallest k in 1..=cap with c^k = 1.
pub fn order(c: &PMatrix, cap: u64) -> Option<u64> {
    let mut acc = c.clone();
    for k in 1..=cap {
        if acc.is_identity() {
            return Some(k);
        }
        acc = &acc * c;
    }
    None
}

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub holds: bool,
    pub samples: usize,
    /// First (a, c) with Phi(a c) != Phi(a) c^(p).
    pub witness: Option<(PMatrix, PMatrix)>,
}

/// Phi(a c) = Phi(a) c^(p) for random a in GL_n and random monomial c.
pub fn check_right_compatibility(
    etype: &EquationType,
    samples: usize,
    rng: &mut Sampler,
) -> Result<CompatibilityReport> {
    let ring = etype.ring().clone();
    let n = etype.n();
    for _ in 0..samples {
        let a = rng.gl(&ring, n);
        let perm = rng.permutation(n);
        let diag: Vec<RingElement> = (0..n).map(|_| rng.unit(&ring)).collect();
        let c = &PMatrix::permutation(&ring, &perm) * &PMatrix::diagonal(&ring, &diag);
        let lhs = etype.twisted_power(&(&a * &c))?;
        let rhs = &etype.twisted_power(&a)? * &c.pow_p_entrywise();
        if lhs != rhs {
            return Ok(CompatibilityReport {
                holds: false,
                samples,
                witness: Some((a, c)),
            });
        }
    }
    Ok(CompatibilityReport {
        holds: true,
        samples,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constancy {
    pub det_delta: RingElement,
    /// delta(v^t q v) for the SO type.
    pub form_delta: Option<PMatrix>,
    /// Whether vanishing is predicted: never for GL, for SO only when u is in SO(q).
    pub claimed: bool,
}

impl Constancy {
    /// The predicted values vanish (vacuous for GL).
    pub fn holds(&self) -> bool {
        match &self.form_delta {
            _ if !self.claimed => true,
            Some(f) => f.is_zero(),
            None => self.det_delta.is_zero(),
        }
    }
}

pub fn constancy_on_bound(etype: &EquationType, u: &PMatrix, v: &PMatrix) -> Result<Constancy> {
    GaloisBound::new(etype, u)?.constancy(v)
}

/// The d-torsion units c with c in G_u, for a scalar GL-type solution u.
pub fn scalar_galois_bound(etype: &EquationType, u: &PMatrix, d: u64) -> Result<Vec<RingElement>> {
    if etype.n() != 1 || u.n() != 1 {
        return Err(Error::Dimension("the scalar bound needs n = 1".into()));
    }
    let ring = etype.ring().clone();
    let bound = GaloisBound::new(etype, u)?;
    let mut out = Vec::new();
    for c in torsion_units(&ring, d)? {
        let cm = PMatrix::diagonal(&ring, std::slice::from_ref(&c));
        if bound.contains(&cm)? {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Note {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct GaloisReport {
    pub candidate: PMatrix,
    pub in_gu: bool,
    pub in_n_delta: bool,
    pub constancy: Option<Constancy>,
    pub order: Option<u64>,
    pub notes: Vec<Note>,
}

impl GaloisReport {
    pub fn passed(&self) -> bool {
        self.notes.iter().all(|n| n.passed)
    }
}

/// Membership, N^delta status, constancy and order for one candidate c.
pub fn galois_report(
    etype: &EquationType,
    u: &PMatrix,
    c: &PMatrix,
    order_cap: u64,
) -> Result<GaloisReport> {
    GaloisBound::new(etype, u)?.report(c, order_cap)
}

impl GaloisBound<'_> {
    /// Monomial constants must lie in G_u; members must keep the prime integrals.
    pub fn report(&self, c: &PMatrix, order_cap: u64) -> Result<GaloisReport> {
        let in_gu = self.contains(c)?;
        let constancy = if in_gu {
            Some(self.constancy(c)?)
        } else {
            None
        };
        let in_nd = in_n_delta(c);
        let mut notes = Vec::new();
        if in_nd {
            notes.push(Note {
                name: "monomial constant lies in G_u".into(),
                passed: in_gu,
            });
        }
        if let Some(k) = &constancy {
            notes.push(Note {
                name: "prime integrals are constant on G_u".into(),
                passed: k.holds(),
            });
        }
        Ok(GaloisReport {
            candidate: c.clone(),
            in_gu,
            in_n_delta: in_nd,
            constancy,
            order: order(c, order_cap),
            notes,
        })
    }
}

/// Teichmueller lifts of the primitive cube roots of unity mod p, sorted.
pub fn cube_roots_of_unity(ring: &Arc<RingContext>) -> Vec<RingElement> {
    ring.residues()
        .iter()
        .filter(|g| !g.is_one() && g.pow(3).is_one())
        .map(|g| ring.teichmueller(g))
        .collect()
}

/// The two-by-two GL-type example with u = [[1, z], [1, z^2]] for a primitive cube
/// root of unity z in Z_p (p = 1 mod 3) and c = [[1, -1], [0, -1]]: c lies in G_u,
/// is not monomial, swaps z and z^2 in u, and has order two.
///
/// `zeta_residue` picks the cube root by its residue mod p (default: the smaller).
pub fn order_two_counterexample(p: u64, prec: u32, zeta_residue: Option<u64>) -> Result<GaloisReport> {
    if p % 3 != 1 {
        return Err(Error::Precondition(format!(
            "p must be congruent to 1 mod 3 so that Z_p contains a primitive cube root of unity (p = {p})"
        )));
    }
    let ring = make_context(p, 1, prec, None)?;
    let roots = cube_roots_of_unity(&ring);
    let zeta = match zeta_residue {
        None => roots[0].clone(),
        Some(z) => roots
            .iter()
            .find(|t| t.coords()[0] % p == z % p)
            .cloned()
            .ok_or_else(|| {
                Error::Precondition(format!("{z} is not a primitive cube root of unity mod {p}"))
            })?,
    };
    let z2 = zeta.pow(2);
    let one = ring.one();
    let u = PMatrix::new(&ring, 2, vec![one.clone(), zeta.clone(), one.clone(), z2.clone()])?;
    let c = PMatrix::from_ints(&ring, 2, &[1, -1, 0, -1])?;
    let swapped = PMatrix::new(&ring, 2, vec![one.clone(), z2.clone(), one, zeta])?;
    let etype = EquationType::new(&ring, EquationKind::Gl, 2)?;

    let mut report = galois_report(&etype, &u, &c, 16)?;
    let uc = &u * &c;
    report.notes = vec![
        Note {
            name: "det u = zeta^2 - zeta is a unit".into(),
            passed: u.det().is_unit(),
        },
        Note {
            name: "delta(u) = 0, so u solves the GL equation with alpha = 0".into(),
            passed: u.delta_entrywise()?.is_zero(),
        },
        Note {
            name: "c lies in G_u".into(),
            passed: report.in_gu,
        },
        Note {
            name: "c is not in N (not monomial)".into(),
            passed: !c.is_monomial(),
        },
        Note {
            name: "u c equals u with zeta and zeta^2 exchanged".into(),
            passed: uc == swapped,
        },
        Note {
            name: "c^2 = 1".into(),
            passed: (&c * &c).is_identity(),
        },
    ];
    Ok(report)
}
