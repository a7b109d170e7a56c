//! Exact arithmetic over truncated unramified p-adic rings and solvers for
//! arithmetic linear differential equations phi(u) = (1 + p alpha) Phi(u).

pub mod equations;
pub mod error;
pub mod galois;
pub mod json;
pub mod padic_matrix;
pub mod padic_ring;
pub mod sampling;
pub mod selftest;

pub use equations::{EquationKind, EquationSpec, EquationType, QuadricVariant};
pub use error::{Error, Result};
pub use padic_matrix::PMatrix;
pub use padic_ring::{make_context, Exponent, RingContext, RingElement, Valuation};
pub use sampling::Sampler;
