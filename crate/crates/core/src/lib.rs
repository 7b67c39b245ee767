//! Exact computer algebra for reflection equation algebras, quantum moment
//! maps, braided module categories and truncated quantum Hamiltonian
//! reduction, with coefficients in the rational function field Q(q, t).

pub mod braidedmod;
pub mod charvar;
pub mod field;
pub mod hamred;
pub mod linalg;
pub mod ncalg;
pub mod report;
pub mod scalars;
pub mod tensorcalc;
pub mod text;
pub mod uq;

pub use field::{Field, Params, Rat};
pub use report::{CheckReport, Status};
pub use scalars::{LaurentPoly, RationalScalar, ScalarError};
