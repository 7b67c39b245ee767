//! Matrix-form relation schemas such as `R21 A1 R12 A2 = A2 R21 A1 R12`,
//! and twisted tensor products built from them.

use std::fmt;
use std::str::FromStr;

use super::poly::{NCPoly, PolyMatrix};
use super::presentation::{AlgebraPresentation, Generator};
use super::NcError;
use crate::field::{Field, Params};
use crate::linalg::Matrix;
use crate::tensorcalc::{flip_matrix, r_matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    R12,
    R21,
    R12Inv,
    R21Inv,
    /// Generator matrix `A` or `B` placed on leg 1 or 2.
    Mat {
        which: char,
        leg: u8,
    },
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::R12 => f.write_str("R12"),
            Factor::R21 => f.write_str("R21"),
            Factor::R12Inv => f.write_str("R12^-1"),
            Factor::R21Inv => f.write_str("R21^-1"),
            Factor::Mat { which, leg } => write!(f, "{which}{leg}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSchema {
    pub lhs: Vec<Factor>,
    pub rhs: Vec<Factor>,
}

impl FromStr for MatrixSchema {
    type Err = NcError;

    fn from_str(s: &str) -> Result<Self, NcError> {
        let bad = |m: String| NcError::Schema(m);
        let (l, r) = s
            .split_once('=')
            .ok_or_else(|| bad("schema needs '='".into()))?;
        let side = |t: &str| -> Result<Vec<Factor>, NcError> {
            let v = t
                .split_whitespace()
                .map(|tok| match tok {
                    "R12" => Ok(Factor::R12),
                    "R21" => Ok(Factor::R21),
                    "R12^-1" => Ok(Factor::R12Inv),
                    "R21^-1" => Ok(Factor::R21Inv),
                    "A1" | "A2" | "B1" | "B2" => {
                        let b = tok.as_bytes();
                        Ok(Factor::Mat {
                            which: b[0] as char,
                            leg: b[1] - b'0',
                        })
                    }
                    _ => Err(bad(format!("unknown schema factor {tok:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if v.is_empty() || v.len() > 16 {
                return Err(bad("each side needs between 1 and 16 factors".into()));
            }
            Ok(v)
        };
        Ok(Self {
            lhs: side(l)?,
            rhs: side(r)?,
        })
    }
}

impl fmt::Display for MatrixSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Factor]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} = {}", j(&self.lhs), j(&self.rhs))
    }
}

/// Scalar matrices `R12, R21` and inverses for the standard R-matrix.
pub struct RMatrices<F: Field> {
    pub r12: Matrix<F>,
    pub r21: Matrix<F>,
    pub r12_inv: Matrix<F>,
    pub r21_inv: Matrix<F>,
}

impl<F: Field> RMatrices<F> {
    pub fn new(n: usize, p: &Params<F>) -> Result<Self, NcError> {
        let r = r_matrix(n, p)
            .map_err(|e| NcError::Schema(e.to_string()))?
            .into_matrix();
        let pm = flip_matrix::<F>(n, n);
        let r21 = pm.mul(&r).mul(&pm);
        let r12_inv = r
            .inverse()
            .ok_or_else(|| NcError::Schema("R is singular at this point".into()))?;
        let r21_inv = r21
            .inverse()
            .ok_or_else(|| NcError::Schema("R21 is singular at this point".into()))?;
        Ok(Self {
            r12: r,
            r21,
            r12_inv,
            r21_inv,
        })
    }
}

impl MatrixSchema {
    pub fn uses(&self, which: char) -> bool {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .any(|f| matches!(f, Factor::Mat { which: w, .. } if *w == which))
    }

    /// Expand into the `n^4` scalar relations `lhs - rhs`.
    pub fn expand<F: Field>(
        &self,
        rm: &RMatrices<F>,
        a: &PolyMatrix<F>,
        b: Option<&PolyMatrix<F>>,
    ) -> Result<Vec<NCPoly<F>>, NcError> {
        let n = a.n;
        let side = |fs: &[Factor]| -> Result<PolyMatrix<F>, NcError> {
            let mut acc = PolyMatrix::identity(n * n);
            for f in fs {
                let m = match f {
                    Factor::R12 => PolyMatrix::from_scalars(&rm.r12),
                    Factor::R21 => PolyMatrix::from_scalars(&rm.r21),
                    Factor::R12Inv => PolyMatrix::from_scalars(&rm.r12_inv),
                    Factor::R21Inv => PolyMatrix::from_scalars(&rm.r21_inv),
                    Factor::Mat { which, leg } => {
                        let x = match which {
                            'A' => a,
                            _ => b.ok_or_else(|| {
                                NcError::Schema(
                                    "schema uses B but only one matrix was given".into(),
                                )
                            })?,
                        };
                        if *leg == 1 {
                            x.leg1()
                        } else {
                            x.leg2()
                        }
                    }
                };
                acc = acc.mul(&m);
            }
            Ok(acc)
        };
        let l = side(&self.lhs)?;
        let r = side(&self.rhs)?;
        Ok(l.sub(&r)
            .entries
            .into_iter()
            .filter(|p| !p.is_zero())
            .collect())
    }
}

/// Coefficients of the product of Hilbert series, truncated at `d`.
pub fn convolve(a: &[usize], b: &[usize], d: usize) -> Vec<usize> {
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| a.get(i).copied().unwrap_or(0) * b.get(k - i).copied().unwrap_or(0))
                .sum()
        })
        .collect()
}

/// Twisted product of several matrix algebras. `crosses` lists, for pairs
/// `(i, j)` with `i < j`, the schema relating factor `i` (as `A`) with
/// factor `j` (as `B`). Pairs without a schema commute.
///
/// The result is accepted only if its graded dimensions up to the bound
/// equal those of the untwisted tensor product.
pub fn twisted_product<F: Field>(
    factors: &[&AlgebraPresentation<F>],
    crosses: &[(usize, usize, MatrixSchema)],
    p: &Params<F>,
    bound: u32,
) -> Result<AlgebraPresentation<F>, NcError> {
    let mut gens: Vec<Generator> = Vec::new();
    let mut rels = Vec::new();
    let mut offsets = Vec::new();
    for f in factors {
        let off = gens.len();
        if off + f.ngens() > super::presentation::MAX_GENERATORS {
            return Err(NcError::Presentation("too many generators".into()));
        }
        offsets.push(off as u8);
        gens.extend(f.generators().iter().cloned());
        for r in f.relations() {
            rels.push(offset_poly(r, off as u8));
        }
    }
    let mats = factors
        .iter()
        .zip(&offsets)
        .map(|(f, &o)| {
            f.matrix()
                .ok()
                .map(|m| m.map_entries(|x| offset_poly(x, o)))
        })
        .collect::<Vec<_>>();
    let mut rm: Option<RMatrices<F>> = None;
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            match crosses.iter().find(|(a, b, _)| *a == i && *b == j) {
                Some((_, _, s)) => {
                    let (Some(mi), Some(mj)) = (&mats[i], &mats[j]) else {
                        return Err(NcError::Schema(
                            "cross relations need matrix factors".into(),
                        ));
                    };
                    if mi.n != mj.n {
                        return Err(NcError::Schema(
                            "factors have different matrix sizes".into(),
                        ));
                    }
                    if rm.is_none() {
                        rm = Some(RMatrices::new(mi.n, p)?);
                    }
                    rels.extend(s.expand(rm.as_ref().expect("built"), mi, Some(mj))?);
                }
                None => {
                    for x in offsets[i]..offsets[i] + factors[i].ngens() as u8 {
                        for y in offsets[j]..offsets[j] + factors[j].ngens() as u8 {
                            rels.push(NCPoly::word(vec![y, x]).sub(&NCPoly::word(vec![x, y])));
                        }
                    }
                }
            }
        }
    }
    let out = AlgebraPresentation::new(gens, rels, bound)?;
    let mut expected = vec![1usize];
    for f in factors {
        let d = f.graded_dims(bound)?;
        expected = convolve(&expected, &d, bound as usize);
    }
    for (d, &e) in expected.iter().enumerate() {
        let found = out.graded_dimension(d as u32)?;
        if found != e {
            return Err(NcError::Flatness {
                degree: d as u32,
                expected: e,
                found,
            });
        }
    }
    Ok(out)
}

/// Twisted tensor product of two matrix algebras.
pub fn twisted_tensor<F: Field>(
    a: &AlgebraPresentation<F>,
    b: &AlgebraPresentation<F>,
    cross: &MatrixSchema,
    p: &Params<F>,
) -> Result<AlgebraPresentation<F>, NcError> {
    twisted_product(
        &[a, b],
        &[(0, 1, cross.clone())],
        p,
        a.bound().min(b.bound()),
    )
}

pub(crate) fn offset_poly<F: Field>(p: &NCPoly<F>, by: u8) -> NCPoly<F> {
    NCPoly::from_terms(
        p.terms()
            .iter()
            .map(|(w, c)| (w.iter().map(|&g| g + by).collect(), c.clone())),
    )
}
