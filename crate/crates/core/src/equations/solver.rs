use std::sync::Arc;

use serde::Serialize;

use super::{EquationKind, EquationType};
use crate::error::{Error, Result};
use crate::padic_matrix::{in_gl, PMatrix};
use crate::padic_ring::{RingContext, RingElement, Valuation};

/// One prime integral evaluated at a solution: its value and the entrywise delta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIntegral {
    pub name: &'static str,
    pub value: Vec<RingElement>,
    pub delta: Vec<RingElement>,
}

impl PrimeIntegral {
    pub fn vanishes(&self) -> bool {
        self.delta.iter().all(RingElement::is_zero)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveOptions {
    /// Stop once an iterate reproduces itself exactly (off by default).
    pub early_exit: bool,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: PMatrix,
    pub iterations: u32,
    pub residual_valuation: Valuation,
    pub integral_values: Vec<PrimeIntegral>,
    /// Smallest nu in 1..=m with phi^nu(u) = u.
    pub fixedness: Option<usize>,
}

/// phi(u) = (1 + p alpha) Phi(u) for a fixed equation type.
#[derive(Clone, Debug)]
pub struct EquationSpec {
    etype: EquationType,
    alpha: PMatrix,
    epsilon: PMatrix,
}

impl EquationSpec {
    /// `alpha` must be known to at least N - 1 digits: p alpha, and hence
    /// epsilon = 1 + p alpha, is then exact modulo p^N.
    pub fn new(etype: EquationType, alpha: PMatrix) -> Result<Self> {
        if alpha.n() != etype.n() {
            return Err(Error::Dimension(format!(
                "alpha is {m}x{m}, the equation is {n}x{n}",
                m = alpha.n(),
                n = etype.n()
            )));
        }
        let need = etype.ring().precision() - 1;
        if alpha.known_prec() < need {
            return Err(Error::Precondition(format!(
                "alpha must be known to at least N - 1 = {need} digits (got {})",
                alpha.known_prec()
            )));
        }
        let epsilon = alpha.one_plus_p();
        Ok(EquationSpec {
            etype,
            alpha,
            epsilon,
        })
    }

    pub fn equation_type(&self) -> &EquationType {
        &self.etype
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        self.etype.ring()
    }

    pub fn kind(&self) -> EquationKind {
        self.etype.kind()
    }

    pub fn n(&self) -> usize {
        self.etype.n()
    }

    pub fn alpha(&self) -> &PMatrix {
        &self.alpha
    }

    pub fn epsilon(&self) -> &PMatrix {
        &self.epsilon
    }

    /// phi(u) - epsilon Phi(u).
    pub fn residual(&self, u: &PMatrix) -> Result<PMatrix> {
        Ok(&u.frobenius_entrywise() - &(&self.epsilon * &self.etype.twisted_power(u)?))
    }

    /// One step u <- phi^{-1}(epsilon Phi(u)).
    pub fn step(&self, u: &PMatrix) -> Result<PMatrix> {
        Ok((&self.epsilon * &self.etype.twisted_power(u)?).frobenius_inverse_entrywise())
    }

    fn start(&self, u0: &PMatrix) -> Result<PMatrix> {
        if u0.n() != self.n() {
            return Err(Error::Dimension(format!(
                "u0 is {m}x{m}, the equation is {n}x{n}",
                m = u0.n(),
                n = self.n()
            )));
        }
        if !in_gl(u0) {
            return Err(Error::NotInGl);
        }
        // Only the class of u0 mod p matters; take the lift with zero unknown digits.
        Ok(u0.lift_to_full())
    }

    /// The iterates u_0, u_1, ..., u_N; u_k agrees with the solution mod p^(k+1).
    pub fn trajectory(&self, u0: &PMatrix) -> Result<Vec<PMatrix>> {
        let mut u = self.start(u0)?;
        let mut out = vec![u.clone()];
        for _ in 0..self.ring().precision() {
            u = self.step(&u)?;
            out.push(u.clone());
        }
        Ok(out)
    }

    pub fn solve(&self, u0: &PMatrix) -> Result<SolveReport> {
        self.solve_with(u0, &SolveOptions::default())
    }

    /// Exactly N contraction steps: each gains one p-adic digit, so the result is
    /// the unique solution congruent to u0 mod p, exact modulo p^N.
    pub fn solve_with(&self, u0: &PMatrix, opts: &SolveOptions) -> Result<SolveReport> {
        let mut u = self.start(u0)?;
        let mut iterations = 0;
        for _ in 0..self.ring().precision() {
            let next = self.step(&u)?;
            iterations += 1;
            let stationary = next == u;
            u = next;
            if opts.early_exit && stationary {
                break;
            }
        }
        let residual_valuation = self.residual(&u)?.valuation();
        let integral_values = self.prime_integrals(&u)?;
        let fixedness = fixedness_order(&u);
        Ok(SolveReport {
            solution: u,
            iterations,
            residual_valuation,
            integral_values,
            fixedness,
        })
    }

    /// det(u) for the SL type, u^t q u for the SO type; none for GL.
    pub fn prime_integrals(&self, u: &PMatrix) -> Result<Vec<PrimeIntegral>> {
        Ok(match self.kind() {
            EquationKind::Gl => Vec::new(),
            EquationKind::Sl => {
                let d = u.det();
                let dd = d.delta()?;
                vec![PrimeIntegral {
                    name: "det",
                    value: vec![d],
                    delta: vec![dd],
                }]
            }
            EquationKind::So(_) => {
                let q = self.etype.q().expect("SO type carries q");
                let form = &(&u.transpose() * q) * u;
                let delta = form.delta_entrywise()?;
                vec![PrimeIntegral {
                    name: "form",
                    value: form.entries().to_vec(),
                    delta: delta.entries().to_vec(),
                }]
            }
        })
    }
}

/// alpha = (phi(u) Phi(u)^{-1} - 1) / p, the unique alpha making u a solution.
/// Known to N - 1 digits, which is all `EquationSpec::new` requires.
pub fn recover_alpha(etype: &EquationType, u: &PMatrix) -> Result<PMatrix> {
    let ratio = &u.frobenius_entrywise() * &etype.twisted_power(u)?.inverse()?;
    (&ratio - &PMatrix::identity(etype.ring(), u.n())).div_p()
}

/// a -> phi(a) (a^(p))^{-1}; its fiber over 1 + p alpha is the solution set of the
/// GL type equation.
pub fn lang_map(a: &PMatrix) -> Result<PMatrix> {
    Ok(&a.frobenius_entrywise() * &a.pow_p_entrywise().inverse()?)
}

/// phi^nu(u) = u entrywise.
pub fn frobenius_fixedness(u: &PMatrix, nu: usize) -> bool {
    u.frobenius_pow_entrywise(nu) == *u
}

pub fn fixedness_order(u: &PMatrix) -> Option<usize> {
    let m = u.ring().degree();
    let mut cur = u.clone();
    for nu in 1..=m {
        cur = cur.frobenius_entrywise();
        if cur == *u {
            return Some(nu);
        }
    }
    None
}
