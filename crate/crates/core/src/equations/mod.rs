//! Arithmetic linear differential equations phi(u) = (1 + p alpha) Phi(u) for the
//! GL_n, SL_n and SO(q) types, their solver, prime integrals and the scalar
//! closed forms.

mod scalar;
mod solver;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic_matrix::PMatrix;
use crate::padic_ring::{Exponent, RingContext, RingElement};

pub use scalar::{solve_scalar_closed_form, solve_scalar_exp};
pub use solver::{
    fixedness_order, frobenius_fixedness, lang_map, recover_alpha, EquationSpec, PrimeIntegral,
    SolveOptions, SolveReport,
};

/// The three quadratic forms q: symplectic, split even orthogonal, split odd orthogonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuadricVariant {
    Sp,
    SoEven,
    SoOdd,
}

impl QuadricVariant {
    pub const ALL: [QuadricVariant; 3] = [QuadricVariant::Sp, QuadricVariant::SoEven, QuadricVariant::SoOdd];

    pub fn name(self) -> &'static str {
        match self {
            QuadricVariant::Sp => "sp",
            QuadricVariant::SoEven => "so_even",
            QuadricVariant::SoOdd => "so_odd",
        }
    }

    pub fn fits(self, n: usize) -> bool {
        match self {
            QuadricVariant::Sp | QuadricVariant::SoEven => n >= 2 && n.is_multiple_of(2),
            QuadricVariant::SoOdd => n >= 3 && n % 2 == 1,
        }
    }
}

impl fmt::Display for QuadricVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuadricVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sp" => Ok(QuadricVariant::Sp),
            "so_even" => Ok(QuadricVariant::SoEven),
            "so_odd" => Ok(QuadricVariant::SoOdd),
            _ => Err(Error::Parse(format!(
                "unknown form variant {s:?} (expected sp, so_even or so_odd)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquationKind {
    Gl,
    Sl,
    So(QuadricVariant),
}

impl EquationKind {
    pub fn name(self) -> &'static str {
        match self {
            EquationKind::Gl => "gl",
            EquationKind::Sl => "sl",
            EquationKind::So(_) => "so",
        }
    }

    pub fn variant(self) -> Option<QuadricVariant> {
        match self {
            EquationKind::So(v) => Some(v),
            _ => None,
        }
    }

    /// Parse "gl" / "sl" / "so" with an optional variant (required for "so").
    pub fn parse(kind: &str, variant: Option<&str>) -> Result<Self> {
        match kind {
            "gl" => Ok(EquationKind::Gl),
            "sl" => Ok(EquationKind::Sl),
            "so" => {
                let v = variant.ok_or_else(|| {
                    Error::Parse("kind so needs a variant (sp, so_even or so_odd)".into())
                })?;
                Ok(EquationKind::So(v.parse()?))
            }
            _ => Err(Error::Parse(format!(
                "unknown equation kind {kind:?} (expected gl, sl or so)"
            ))),
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationKind::So(v) => write!(f, "so/{v}"),
            k => f.write_str(k.name()),
        }
    }
}

/// The quadratic form matrix: [[0, 1_r], [-1_r, 0]], [[0, 1_r], [1_r, 0]] or
/// [[1, 0, 0], [0, 0, 1_r], [0, 1_r, 0]].
pub fn build_q(ring: &Arc<RingContext>, variant: QuadricVariant, n: usize) -> Result<PMatrix> {
    if !variant.fits(n) {
        return Err(Error::Parity {
            variant: variant.name(),
            n,
            expected: match variant {
                QuadricVariant::SoOdd => "n = 2r + 1 with r >= 1",
                _ => "n = 2r with r >= 1",
            },
        });
    }
    let mut q = PMatrix::zero(ring, n);
    match variant {
        QuadricVariant::Sp | QuadricVariant::SoEven => {
            let r = n / 2;
            let sign = if variant == QuadricVariant::Sp { -1 } else { 1 };
            for i in 0..r {
                q.set(i, r + i, ring.one());
                q.set(r + i, i, ring.from_int(sign));
            }
        }
        QuadricVariant::SoOdd => {
            let r = (n - 1) / 2;
            q.set(0, 0, ring.one());
            for i in 0..r {
                q.set(1 + i, 1 + r + i, ring.one());
                q.set(1 + r + i, 1 + i, ring.one());
            }
        }
    }
    Ok(q)
}

/// (det(x^(p)) / det(x)^p)^(-1/n), so that lambda^n det(x^(p)) = det(x)^p.
pub fn det_normalizer(x: &PMatrix, exponent: Exponent) -> Result<RingElement> {
    let d = x.det();
    let base = x.pow_p_entrywise().det() * d.pow(x.ring().p()).inverse().map_err(|_| Error::NotInGl)?;
    base.pow_padic(exponent)
}

/// (((x^(p))^t q x^(p))^{-1} (x^t q x)^(p))^{1/2}.
pub fn form_normalizer(x: &PMatrix, q: &PMatrix) -> Result<PMatrix> {
    let xp = x.pow_p_entrywise();
    let b = &(&xp.transpose() * q) * &xp;
    let c = (&(&x.transpose() * q) * x).pow_p_entrywise();
    let base = &b.inverse()? * &c;
    base.one_plus_pt_pow(Exponent::ratio(x.ring(), 1, 2)?)
}

/// A validated equation type: the kind, the dimension, and for SO(q) the form q.
/// Determines the map Phi(x) = x^(p) + p Delta(x).
#[derive(Clone, Debug)]
pub struct EquationType {
    ring: Arc<RingContext>,
    kind: EquationKind,
    n: usize,
    q: Option<PMatrix>,
}

impl EquationType {
    pub fn new(ring: &Arc<RingContext>, kind: EquationKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("n must be at least 1".into()));
        }
        let q = match kind {
            EquationKind::Gl => None,
            EquationKind::Sl => {
                if (n as u64).is_multiple_of(ring.p()) {
                    return Err(Error::PDividesN { p: ring.p(), n });
                }
                None
            }
            EquationKind::So(v) => Some(build_q(ring, v, n)?),
        };
        Ok(EquationType {
            ring: ring.clone(),
            kind,
            n,
            q,
        })
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> Option<&PMatrix> {
        self.q.as_ref()
    }

    fn check_dim(&self, x: &PMatrix) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::Dimension(format!(
                "expected a {n}x{n} matrix, got {m}x{m}",
                n = self.n,
                m = x.n()
            )));
        }
        Ok(())
    }

    /// Phi(x): x^(p) (GL), lambda(x) x^(p) (SL), x^(p) Lambda(x) (SO).
    pub fn twisted_power(&self, x: &PMatrix) -> Result<PMatrix> {
        self.check_dim(x)?;
        match self.kind {
            EquationKind::Gl => Ok(x.pow_p_entrywise()),
            EquationKind::Sl => {
                let lambda = det_normalizer(x, Exponent::ratio(&self.ring, -1, self.n as i64)?)?;
                Ok(x.pow_p_entrywise().scale(&lambda))
            }
            EquationKind::So(_) => {
                let q = self.q.as_ref().expect("SO type carries q");
                Ok(&x.pow_p_entrywise() * &form_normalizer(x, q)?)
            }
        }
    }

    /// Delta(x) = (Phi(x) - x^(p)) / p.
    pub fn correction(&self, x: &PMatrix) -> Result<PMatrix> {
        (&self.twisted_power(x)? - &x.pow_p_entrywise()).div_p()
    }

    /// lambda(x) for this dimension (SL type normalizer; defined whenever p does not divide n).
    pub fn det_normalizer(&self, x: &PMatrix) -> Result<RingElement> {
        det_normalizer(x, Exponent::ratio(&self.ring, -1, self.n as i64)?)
    }

    /// Phi_u(x) = Phi(u)^{-1} Phi(u x).
    pub fn translated_power(&self, u: &PMatrix, x: &PMatrix) -> Result<PMatrix> {
        Ok(&self.twisted_power(u)?.inverse()? * &self.twisted_power(&(u * x))?)
    }
}
