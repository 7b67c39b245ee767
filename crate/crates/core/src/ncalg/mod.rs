//! Finitely presented graded algebras over a coefficient field: words,
//! degree-truncated rewriting, graded dimensions, homomorphism checks,
//! twisted tensor products and quotients.
//!
//! Words are ordered degree-lexicographically: weighted degree first, then
//! lexicographically by generator index, so the generator order of a
//! presentation fixes its normal forms.

mod format;
mod morphism;
mod poly;
mod presentation;
mod rewrite;
mod schema;

pub use format::{parse_ncpoly, parse_presentation, parse_presentation_parts, render_presentation};
pub use morphism::GeneratorMap;
pub use poly::{cmp_words, find_subword, word_degree, NCPoly, PolyMatrix, Word};
pub use presentation::{AlgebraPresentation, Generator, MAX_GENERATORS};
pub use rewrite::RewriteSystem;
pub use schema::{convolve, twisted_product, twisted_tensor, Factor, MatrixSchema, RMatrices};

use thiserror::Error;

use crate::field::{Params, Rat};
use crate::report::CheckReport;
use crate::scalars::{RationalScalar, ScalarError};

/// Default truncation degree.
pub const DEFAULT_BOUND: u32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NcError {
    #[error("degree {degree} exceeds the truncation bound {bound}")]
    DegreeExceeded { degree: u32, bound: u32 },
    #[error("confluence failure: {0}")]
    Confluence(String),
    #[error("flatness failure in degree {degree}: expected dimension {expected}, found {found}")]
    Flatness {
        degree: u32,
        expected: usize,
        found: usize,
    },
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("invalid relation schema: {0}")]
    Schema(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Quotient by the two-sided ideal generated by `ideal_gens`, with its
/// quotient map.
pub fn quotient<F: crate::field::Field>(
    a: &std::sync::Arc<AlgebraPresentation<F>>,
    ideal_gens: &[NCPoly<F>],
) -> Result<(std::sync::Arc<AlgebraPresentation<F>>, GeneratorMap<F>), NcError> {
    let q = std::sync::Arc::new(a.quotient(ideal_gens)?);
    let map = GeneratorMap::by_name(a.clone(), q.clone())?;
    Ok((q, map))
}

/// Specialize at `q = 1` and the given `t`, complete again and check that
/// all generators commute. The dimensions at `q = 1` are recorded and
/// compared with those of `a`.
pub fn classical_limit_commutativity(
    a: &AlgebraPresentation<RationalScalar>,
    bound: u32,
    t0: &Rat,
) -> Result<CheckReport, NcError> {
    let p = Params::at(Rat::from_integer(1.into()), t0.clone());
    let c = a.with_bound(bound)?.specialize(&p)?;
    let mut rep = c.commutativity_report()?;
    rep.name = "classical_limit".into();
    rep.config("bound", bound).config("t", t0);
    let dims = c.graded_dims(bound)?;
    rep.detail("dims_at_q_1", dims.clone());
    let generic = a.with_bound(bound)?.graded_dims(bound)?;
    if dims != generic {
        rep.residual(
            "graded dimensions",
            format!("{generic:?} generically, {dims:?} at q = 1"),
        );
    }
    Ok(rep)
}
