//! Closed forms for the scalar GL_1 equation phi(u) = epsilon u^p.

use crate::error::{Error, Result};
use crate::padic_ring::RingElement;

fn require_constant(zeta: &RingElement) -> Result<()> {
    if !zeta.is_unit() || !zeta.is_constant()? {
        return Err(Error::Precondition(
            "zeta must be a root of unity (delta(zeta) = 0)".into(),
        ));
    }
    Ok(())
}

/// u = zeta * prod_{i=1..terms} phi^{-i}(epsilon)^(p^(i-1)).
///
/// The i-th factor is 1 mod p^i, so `terms = N` already gives u exactly.
pub fn solve_scalar_closed_form(
    zeta: &RingElement,
    epsilon: &RingElement,
    terms: u32,
) -> Result<RingElement> {
    require_constant(zeta)?;
    let ring = zeta.ring().clone();
    if !epsilon.congruent(&ring.one(), 1) {
        return Err(Error::Domain("epsilon must be congruent to 1 mod p".into()));
    }
    let p = ring.p();
    let mut u = zeta.lift_to_full();
    let mut twisted = epsilon.clone();
    let mut power = 1u64;
    for i in 0..terms {
        twisted = twisted.frobenius_inverse();
        // Once p^i >= p^N the factor is 1 to working precision.
        if i >= ring.precision() {
            break;
        }
        u = &u * &twisted.pow(power);
        power = power.saturating_mul(p);
    }
    Ok(u)
}

/// u = zeta * exp(sum_{n>=1} p^n phi^{-n}(beta)), the solution of psi(u) = beta
/// congruent to zeta mod p.
pub fn solve_scalar_exp(zeta: &RingElement, beta: &RingElement) -> Result<RingElement> {
    require_constant(zeta)?;
    let ring = zeta.ring().clone();
    let big_n = ring.precision();
    let mut sum = ring.zero();
    let mut term = beta.lift_to_full();
    for k in 1..big_n {
        term = term.frobenius_inverse();
        let mut scaled = term.clone();
        for _ in 0..k {
            scaled = scaled.mul_p();
        }
        sum = sum + scaled;
    }
    Ok(zeta.lift_to_full() * sum.exp_p()?)
}
