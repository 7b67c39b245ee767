//! Truncated quantum Hamiltonian reduction and its comparison targets.
//!
//! Everything uses the polynomial grading: each matrix generator has
//! degree 1 and no inverses are adjoined. The reduction of `A` along a
//! moment map with ideal `I ⊂ O_q` is computed degree by degree:
//!
//! 1. the left ideal `A·μ(I)` is spanned in the filtration piece `F_D`
//!    (with one degree of slack when the generators are inhomogeneous);
//! 2. the invariants of `F_D / (A·μ(I) ∩ F_D)` are the joint kernel of
//!    `E`, `F` and `K - 1`;
//! 3. products of invariant classes are reduced back into the invariant
//!    basis, giving exact structure constants.
//!
//! The oracles are the algebra of `S_2`-invariant q-difference operators
//! ([`dqh_w_oracle`]) and the spherical DAHA of `GL_2` in its polynomial
//! representation ([`daha_oracle_gl2`]).

mod compare;
mod daha;
mod diffop;
mod reduction;
mod relative;
#[cfg(test)]
mod tests;

use thiserror::Error;

pub use compare::{compare_reduction_to_daha, Orientation};
pub use daha::{
    daha_oracle_gl2, macdonald_operator, matching_daha_params, BiPoly, DahaFragment, DahaGen,
};
pub use diffop::{dqh_w_oracle, DifferenceOperator, DqhWOracle, LaurentVec};
pub use reduction::{hamiltonian_reduction, invariants, ReductionAlgebra};
pub use relative::{
    counit_action, moment_right_action, regular_left_action, regular_right_action,
    relative_tensor_dims, GradedAction,
};

use crate::charvar::{self, handle_matrices, quantum_trace_of, torus_denominator, torus_monodromy};
use crate::field::{Field, Params};
use crate::ncalg::{AlgebraPresentation, GeneratorMap, NCPoly, NcError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamredError {
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error("the action does not preserve the relations: {0}")]
    Equivariance(String),
    #[error("degree {degree} needs a presentation bound of at least {needed}, found {bound}")]
    Bound {
        degree: u32,
        needed: u32,
        bound: u32,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Images of the counit kernel generators `a_ij - δ_ij` under a moment
/// map, with denominators cleared to degree one.
pub fn moment_ideal<F: Field>(mu: &GeneratorMap<F>) -> Result<Vec<NCPoly<F>>, HamredError> {
    let src = &mu.source;
    let mut out = Vec::new();
    for (g, gen) in src.generators().iter().enumerate() {
        let (i, j) = gen.legs.ok_or_else(|| {
            HamredError::Unsupported("moment map source needs matrix generators".into())
        })?;
        let mut x = NCPoly::gen(g as u8);
        if i == j {
            x.add_term(Vec::new(), &F::one().neg());
        }
        let img = mu.apply_cleared_to(&x, 1)?;
        if !img.is_zero() {
            out.push(img);
        }
    }
    Ok(out)
}

/// Marking of the punctured torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusMarking {
    /// `I = ker ε`: the entries of `μ̃ - q^4 c I`.
    Unmarked,
    /// The mirabolic ideal: `(1 + t^2) c - t q^-4 tr_q(μ̃)`.
    Mirabolic,
}

/// Generators of `A·μ(I)` in `D_q(GL_2)` with the denominator `c` of the
/// boundary moment map cleared, where `μ̃ = A adj(B) adj(A) B` and
/// `c = det_q(A) det_q(B)`.
///
/// For the mirabolic marking the cleared image of `det_q - t tr_q + t^2` is
/// `c` times the generator returned here; since `c` is invertible after
/// localization, the smaller generator is used.
pub fn torus_ideal<F: Field>(
    dq: &AlgebraPresentation<F>,
    p: &Params<F>,
    marking: TorusMarking,
) -> Result<Vec<NCPoly<F>>, HamredError> {
    let (a, b) = handle_matrices(dq, 1, 1)?;
    if a.n != 2 {
        return Err(HamredError::Unsupported(
            "torus reduction is implemented for N = 2".into(),
        ));
    }
    let mu = torus_monodromy(&a, &b, p);
    let c = torus_denominator(&a, &b, p);
    let q4 = p.qp(4);
    let gens = match marking {
        TorusMarking::Unmarked => {
            let mut out = Vec::new();
            for i in 0..2 {
                for j in 0..2 {
                    let mut x = mu.get(i, j).clone();
                    if i == j {
                        x.add_scaled(&q4.neg(), &c);
                    }
                    out.push(x);
                }
            }
            out
        }
        TorusMarking::Mirabolic => {
            let tr = quantum_trace_of(&mu, p);
            let mut x = c.scale(&F::one().add(&p.t.mul(&p.t)));
            x.add_scaled(&p.t.mul(&p.qp(-4)).neg(), &tr);
            vec![x]
        }
    };
    gens.iter().map(|g| Ok(dq.normal_form(g)?)).collect()
}

/// The reduction of the punctured torus, `D_q(GL_2)` along the boundary
/// moment map, truncated at degree `d`.
pub fn torus_reduction<F: Field>(
    p: &Params<F>,
    marking: TorusMarking,
    d: u32,
) -> Result<ReductionAlgebra<F>, HamredError> {
    let dq = charvar::dq(2, p, d.max(4))?;
    let ideal = torus_ideal(&dq, p, marking)?;
    let act = crate::uq::AdjointAction::on_matrix_generators(&dq, p)?;
    hamiltonian_reduction(&dq, &ideal, &act, d)
}

/// Bidegree `(A-degree, B-degree)` of each `D_q` generator.
pub fn handle_bidegree<F: Field>(alg: &AlgebraPresentation<F>) -> Vec<(u32, u32)> {
    alg.generators()
        .iter()
        .map(|g| {
            if g.name.starts_with('b') {
                (0, 1)
            } else {
                (1, 0)
            }
        })
        .collect()
}
