//! The truncated unramified ring O_N = W(F_{p^m}) / p^N.
//!
//! Elements are coordinate vectors over Z/p^N in the power basis of
//! (Z/p^N)[x] / (f), where f is any monic lift of an irreducible residue
//! polynomial; all such lifts give isomorphic rings. The Frobenius lift sends x
//! to the unique root of f congruent to x^p, found by Newton iteration.

mod analytic;
mod context;
mod element;
pub(crate) mod residue;

pub use analytic::Exponent;
pub use context::{make_context, RingContext};
pub use element::{RingElement, Valuation};

pub(crate) use analytic::split_p;
pub(crate) use context::{inv_mod, mulmod};

#[cfg(test)]
mod tests;
