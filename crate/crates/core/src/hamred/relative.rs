use super::HamredError;
use crate::braidedmod::{field_goal, FieldGoalVariant, ModuleRep, RegularModule};
use crate::field::{Field, Params};
use crate::linalg::{axpy, Echelon, Matrix, SparseVec};
use crate::ncalg::{word_degree, AlgebraPresentation, NCPoly};

/// A filtered module with one operator per `O_q` generator, stored column
/// by column.
///
/// Each operator raises degree by at most `op_degree`, and is exact on
/// basis vectors of degree at most `top - op_degree`. An optional `scale`
/// (with its degree) multiplies the module side of the left term in the
/// coequalizer; it carries the cleared denominator of a moment map.
#[derive(Clone, Debug)]
pub struct GradedAction<F: Field> {
    pub degrees: Vec<u32>,
    pub ops: Vec<Vec<SparseVec<F>>>,
    pub op_degree: u32,
    pub top: u32,
    pub scale: Option<(Vec<SparseVec<F>>, u32)>,
}

fn columns<F: Field>(m: &Matrix<F>) -> Vec<SparseVec<F>> {
    (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .filter(|&i| !m.get(i, j).is_zero())
                .map(|i| (i, m.get(i, j).clone()))
                .collect()
        })
        .collect()
}

fn from_module<F: Field>(
    m: &ModuleRep<F>,
    degrees: Vec<u32>,
    op_degree: u32,
    top: u32,
) -> GradedAction<F> {
    GradedAction {
        degrees,
        ops: m.images().iter().map(columns).collect(),
        op_degree,
        top,
        scale: None,
    }
}

/// `O_{≤D}` acting on itself from the right through the field goal.
pub fn regular_right_action<F: Field>(
    reg: &RegularModule<F>,
    p: &Params<F>,
) -> Result<GradedAction<F>, HamredError> {
    let right = field_goal(&reg.left, &reg.uq, p, FieldGoalVariant::OverUnder)
        .map_err(|e| HamredError::Dimension(e.to_string()))?;
    let degrees = (0..reg.basis.len()).map(|i| reg.word_degree(i)).collect();
    Ok(from_module(&right, degrees, 1, reg.degree))
}

/// `O_{≤D}` acting on itself from the left.
pub fn regular_left_action<F: Field>(reg: &RegularModule<F>) -> GradedAction<F> {
    let degrees = (0..reg.basis.len()).map(|i| reg.word_degree(i)).collect();
    from_module(&reg.left, degrees, 1, reg.degree)
}

/// The one-dimensional module `ε` in degree 0.
pub fn counit_action<F: Field>(n: usize) -> GradedAction<F> {
    from_module(&ModuleRep::counit(n), vec![0], 0, 0)
}

/// `A_{≤top}` as a right `O_q`-module through a moment map with cleared
/// denominator: generator `g` acts by right multiplication with
/// `images[g]`, and `scale` is right multiplication by the denominator.
pub fn moment_right_action<F: Field>(
    alg: &AlgebraPresentation<F>,
    images: &[NCPoly<F>],
    scale: Option<&NCPoly<F>>,
    top: u32,
) -> Result<GradedAction<F>, HamredError> {
    let degs = alg.degrees();
    let mut basis = Vec::new();
    for k in 0..=top {
        basis.extend(alg.normal_words(k)?);
    }
    let index: std::collections::HashMap<_, _> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let degrees: Vec<u32> = basis.iter().map(|w| word_degree(w, &degs)).collect();
    let right_mult = |x: &NCPoly<F>| -> Result<(Vec<SparseVec<F>>, u32), HamredError> {
        let dx = x.degree(&degs).unwrap_or(0);
        let mut cols = Vec::with_capacity(basis.len());
        for (i, w) in basis.iter().enumerate() {
            if degrees[i] + dx > top {
                cols.push(SparseVec::new());
                continue;
            }
            let prod = alg.mul(&NCPoly::word(w.clone()), x)?;
            let mut v = SparseVec::new();
            for (u, c) in prod.terms() {
                let k = index
                    .get(u)
                    .ok_or_else(|| HamredError::Dimension("product beyond the basis".into()))?;
                v.insert(*k, c.clone());
            }
            cols.push(v);
        }
        Ok((cols, dx))
    };
    let mut ops = Vec::new();
    let mut op_degree = 0;
    for x in images {
        let (cols, dx) = right_mult(x)?;
        op_degree = op_degree.max(dx);
        ops.push(cols);
    }
    let scale = scale.map(right_mult).transpose()?;
    Ok(GradedAction {
        degrees,
        ops,
        op_degree,
        top,
        scale,
    })
}

/// Filtered dimensions of `M ⊗_{O_q} N` through degree `d`: the cokernel of
/// `m ◁ g ⊗ n - s(m) ⊗ g ▷ n` on `M ⊗ N`, with relations spanned through
/// degree `d + 1` wherever the truncated operators are exact.
pub fn relative_tensor_dims<F: Field>(
    right: &GradedAction<F>,
    left: &GradedAction<F>,
    d: u32,
) -> Result<Vec<usize>, HamredError> {
    if right.ops.len() != left.ops.len() {
        return Err(HamredError::Dimension(format!(
            "{} right operators against {} left operators",
            right.ops.len(),
            left.ops.len()
        )));
    }
    let top = d + 1;
    let mut pairs: Vec<(u32, usize, usize)> = Vec::new();
    for (i, &a) in right.degrees.iter().enumerate() {
        for (j, &b) in left.degrees.iter().enumerate() {
            if a + b <= top {
                pairs.push((a + b, i, j));
            }
        }
    }
    pairs.sort();
    let index: std::collections::HashMap<(usize, usize), usize> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(_, i, j))| ((i, j), k))
        .collect();
    let sdeg = right.scale.as_ref().map_or(0, |s| s.1);
    let span = right.op_degree.max(sdeg + left.op_degree);
    let lookup = |i: usize, j: usize| -> Result<usize, HamredError> {
        index
            .get(&(i, j))
            .copied()
            .ok_or_else(|| HamredError::Dimension("relation term beyond the truncation".into()))
    };
    let mut e = Echelon::new();
    for &(deg, i, j) in &pairs {
        let (di, dj) = (right.degrees[i], left.degrees[j]);
        if deg + span > top
            || di + right.op_degree.max(sdeg) > right.top
            || dj + left.op_degree > left.top
        {
            continue;
        }
        let s_col: SparseVec<F> = match &right.scale {
            Some((cols, _)) => cols[i].clone(),
            None => std::iter::once((i, F::one())).collect(),
        };
        for g in 0..right.ops.len() {
            let mut v = SparseVec::new();
            for (&k, c) in &right.ops[g][i] {
                axpy(
                    &mut v,
                    c,
                    &std::iter::once((lookup(k, j)?, F::one())).collect(),
                );
            }
            for (&k, c) in &s_col {
                for (&l, x) in &left.ops[g][j] {
                    axpy(
                        &mut v,
                        &c.mul(x).neg(),
                        &std::iter::once((lookup(k, l)?, F::one())).collect(),
                    );
                }
            }
            e.insert(v);
        }
    }
    let mut dims = vec![0usize; d as usize + 1];
    for &(deg, _, _) in &pairs {
        if deg <= d {
            dims[deg as usize] += 1;
        }
    }
    for &p in e.pivots() {
        let deg = pairs[p].0;
        if deg <= d {
            dims[deg as usize] -= 1;
        }
    }
    Ok(dims)
}
