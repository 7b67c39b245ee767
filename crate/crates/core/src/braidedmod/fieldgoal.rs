use std::collections::HashMap;

use super::{BraidedError, ModuleRep};
use crate::field::{Field, Params};
use crate::linalg::Matrix;
use crate::ncalg::{word_degree, AlgebraPresentation, NCPoly, NcError, Word};
use crate::uq::{braiding_of, AdjointAction, Chevalley, UqRep};

/// `O_{≤D}`: the regular module truncated at degree `D`, with left
/// multiplication and the adjoint `U_q(gl_2)` action.
#[derive(Clone, Debug)]
pub struct RegularModule<F: Field> {
    pub degree: u32,
    pub basis: Vec<Word>,
    pub left: ModuleRep<F>,
    pub uq: UqRep<F>,
    index: HashMap<Word, usize>,
}

impl<F: Field> RegularModule<F> {
    /// Coordinates of a normal-form polynomial, dropping terms above the
    /// truncation.
    pub fn coords(&self, p: &NCPoly<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.basis.len()];
        for (w, c) in p.terms() {
            if let Some(&i) = self.index.get(w) {
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn word_degree(&self, i: usize) -> u32 {
        self.basis[i].len() as u32
    }
}

fn column_matrix<F: Field>(cols: &[Vec<F>]) -> Matrix<F> {
    let n = cols.len();
    Matrix::from_fn(n, n, |i, j| cols[j][i].clone())
}

/// Build `O_{≤D}` for an algebra generated by one `2 × 2` matrix of degree-1
/// generators in row-major order.
pub fn regular_module<F: Field>(
    alg: &AlgebraPresentation<F>,
    degree: u32,
    p: &Params<F>,
) -> Result<RegularModule<F>, NcError> {
    let degs = alg.degrees();
    if alg.ngens() != 4 || degs.iter().any(|&d| d != 1) {
        return Err(NcError::Presentation(
            "the regular module is built for one 2x2 matrix of degree-1 generators".into(),
        ));
    }
    let mut basis = Vec::new();
    for d in 0..=degree {
        basis.extend(alg.normal_words(d)?);
    }
    let index: HashMap<Word, usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let act = AdjointAction::on_matrix_generators(alg, p)?;
    let mut m = RegularModule {
        degree,
        basis: basis.clone(),
        left: ModuleRep::counit(2),
        uq: UqRep::trivial(0),
        index,
    };
    let mut images = Vec::new();
    for g in 0..4u8 {
        let mut cols = Vec::new();
        for w in &basis {
            if w.len() as u32 + 1 > degree {
                cols.push(vec![F::zero(); basis.len()]);
                continue;
            }
            let prod = alg.mul(&NCPoly::gen(g), &NCPoly::word(w.clone()))?;
            cols.push(m.coords(&prod));
        }
        images.push(column_matrix(&cols));
    }
    m.left =
        ModuleRep::new(2, basis.len(), images).map_err(|e| NcError::Presentation(e.to_string()))?;
    let on = |x: Chevalley| -> Result<Matrix<F>, NcError> {
        let cols = basis
            .iter()
            .map(|w| Ok(m.coords(&alg.normal_form(&act.act(x, &NCPoly::word(w.clone())))?)))
            .collect::<Result<Vec<_>, NcError>>()?;
        Ok(column_matrix(&cols))
    };
    let e = on(Chevalley::E)?;
    let f = on(Chevalley::F)?;
    let weights = basis
        .iter()
        .map(|w| {
            w.iter().fold((0, 0), |(a, b), &g| {
                (
                    a + act.gens.weights[g as usize].0,
                    b + act.gens.weights[g as usize].1,
                )
            })
        })
        .collect();
    debug_assert!(basis.iter().all(|w| word_degree(w, &degs) <= degree));
    m.uq = UqRep { e, f, weights };
    Ok(m)
}

/// How the module strand crosses the two legs of `V* ⊗ V`: over is the
/// braiding `σ_{M,X}`, under is `σ_{X,M}^-1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldGoalVariant {
    OverOver,
    #[default]
    OverUnder,
    UnderOver,
    UnderUnder,
}

impl FieldGoalVariant {
    pub const ALL: [FieldGoalVariant; 4] = [
        FieldGoalVariant::OverOver,
        FieldGoalVariant::OverUnder,
        FieldGoalVariant::UnderOver,
        FieldGoalVariant::UnderUnder,
    ];
}

fn crossing<F: Field>(
    m: &UqRep<F>,
    x: &UqRep<F>,
    over: bool,
    p: &Params<F>,
) -> Result<Matrix<F>, BraidedError> {
    if over {
        Ok(braiding_of(m, x, p))
    } else {
        braiding_of(x, m, p)
            .inverse()
            .ok_or_else(|| BraidedError::Singular("braiding".into()))
    }
}

/// Right action `m ◁ a_kl = act_L(Φ(m ⊗ f_k ⊗ e_l))` where
/// `Φ: M ⊗ V* ⊗ V → V* ⊗ V ⊗ M` moves the module strand across both legs.
///
/// Only [`FieldGoalVariant::OverUnder`] yields a right action commuting
/// with the left one; on the regular module it is right multiplication.
pub fn field_goal<F: Field>(
    left: &ModuleRep<F>,
    uq_m: &UqRep<F>,
    p: &Params<F>,
    variant: FieldGoalVariant,
) -> Result<ModuleRep<F>, BraidedError> {
    if left.rank() != 2 {
        return Err(BraidedError::Rank(left.rank()));
    }
    let m = left.dim();
    if uq_m.dim() != m {
        return Err(BraidedError::Dimension(
            "quantum group action and module differ in dimension".into(),
        ));
    }
    let v = UqRep::vector();
    let vd = v.dual(p);
    let (o1, o2) = match variant {
        FieldGoalVariant::OverOver => (true, true),
        FieldGoalVariant::OverUnder => (true, false),
        FieldGoalVariant::UnderOver => (false, true),
        FieldGoalVariant::UnderUnder => (false, false),
    };
    let c1 = crossing(uq_m, &vd, o1, p)?;
    let c2 = crossing(uq_m, &v, o2, p)?;
    let phi = Matrix::identity(2)
        .kron(&c2)
        .mul(&c1.kron(&Matrix::identity(2)));
    let images = (0..4)
        .map(|kl| {
            let mut r: Matrix<F> = Matrix::zeros(m, m);
            for b in 0..m {
                let col = b * 4 + kl;
                for ij in 0..4 {
                    let l = left.generator(ij / 2, ij % 2);
                    for a in 0..m {
                        let c = phi.get(ij * m + a, col);
                        if c.is_zero() {
                            continue;
                        }
                        for row in 0..m {
                            let x = l.get(row, a);
                            if !x.is_zero() {
                                let cur = r.get(row, b).add(&c.mul(x));
                                r.set(row, b, cur);
                            }
                        }
                    }
                }
            }
            r
        })
        .collect();
    ModuleRep::new(2, m, images)
}
