//! JSON for operator families, module representations and balancing data.
//!
//! ```text
//! family:  {"m": 2, "n": 2, "e": [<operator>, ...], "e_shift": <operator>?}
//! module:  {"n": 2, "dim": 3, "images": [[<scalar>, ...], ...]}
//! balance: {"phi_m": [<scalar>, ...], "phi_mv": [<scalar>, ...]?}
//! ```
//!
//! Operators use the tensor operator format; `images` lists one row-major
//! matrix per generator `a11, a12, ...`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BalancingData, EOperatorFamily, ModuleRep};
use crate::field::{Embed, Field};
use crate::linalg::Matrix;
use crate::scalars::{parse_coefficient, RationalScalar};
use crate::tensorcalc::{LegSignature, TensorOperator, MAX_INPUT_DIM};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("malformed braided module data: {0}")]
pub struct FamilyJsonError(pub String);

fn err(s: impl Into<String>) -> FamilyJsonError {
    FamilyJsonError(s.into())
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    m: usize,
    n: usize,
    e: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e_shift: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    n: usize,
    dim: usize,
    images: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct BalanceJson {
    phi_m: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi_mv: Option<Vec<String>>,
}

fn render<F: Field>(m: &Matrix<F>) -> Vec<String> {
    m.entries().iter().map(|x| x.render()).collect()
}

fn parse_square<F: Field>(
    entries: &[String],
    dim: usize,
    p: &(impl Embed<F> + ?Sized),
) -> Result<Matrix<F>, FamilyJsonError> {
    if entries.len() != dim * dim {
        return Err(err(format!(
            "expected {} entries, found {}",
            dim * dim,
            entries.len()
        )));
    }
    let vals = entries
        .iter()
        .map(|e| {
            let s: RationalScalar = parse_coefficient(e).map_err(|x| err(x.to_string()))?;
            p.embed(&s).map_err(|x| err(x.to_string()))
        })
        .collect::<Result<Vec<F>, _>>()?;
    Ok(Matrix::from_rows(
        vals.chunks(dim).map(|c| c.to_vec()).collect(),
    ))
}

fn check_dims(m: usize, n: usize, levels: usize) -> Result<(), FamilyJsonError> {
    if m == 0 || !(2..=3).contains(&n) {
        return Err(err("need m >= 1 and n in 2..=3"));
    }
    let mut total = m;
    for _ in 0..levels.max(2) {
        total = total
            .checked_mul(n)
            .filter(|t| *t <= MAX_INPUT_DIM)
            .ok_or_else(|| err("total dimension too large"))?;
    }
    Ok(())
}

impl<F: Field> EOperatorFamily<F> {
    pub fn to_json(&self) -> serde_json::Value {
        let op = |k: usize, m: &Matrix<F>| {
            TensorOperator::new(LegSignature::with_module(self.m, self.n, k), m.clone())
                .expect("sizes match")
                .to_json()
        };
        let j = FamilyJson {
            m: self.m,
            n: self.n,
            e: self
                .e
                .iter()
                .enumerate()
                .map(|(i, x)| op(i + 1, x))
                .collect(),
            e_shift: self.e_shift.as_ref().map(|x| op(2, x)),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(
        v: &serde_json::Value,
        p: &(impl Embed<F> + ?Sized),
    ) -> Result<Self, FamilyJsonError> {
        let j: FamilyJson = serde_json::from_value(v.clone()).map_err(|e| err(e.to_string()))?;
        if j.e.is_empty() {
            return Err(err("at least E_1 is required"));
        }
        check_dims(j.m, j.n, j.e.len())?;
        let read = |k: usize, x: &serde_json::Value| -> Result<Matrix<F>, FamilyJsonError> {
            let op =
                TensorOperator::<RationalScalar>::from_json(x).map_err(|e| err(e.to_string()))?;
            if op.signature().dims() != LegSignature::with_module(j.m, j.n, k).dims() {
                return Err(err(format!(
                    "operator {k} has legs {:?}",
                    op.signature().dims()
                )));
            }
            Ok(op.embed(p).map_err(|e| err(e.to_string()))?.into_matrix())
        };
        let e =
            j.e.iter()
                .enumerate()
                .map(|(i, x)| read(i + 1, x))
                .collect::<Result<Vec<_>, _>>()?;
        let e_shift = j.e_shift.as_ref().map(|x| read(2, x)).transpose()?;
        Ok(Self {
            m: j.m,
            n: j.n,
            e,
            e_shift,
        })
    }

    pub fn from_json_str(s: &str, p: &(impl Embed<F> + ?Sized)) -> Result<Self, FamilyJsonError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| err(e.to_string()))?;
        Self::from_json(&v, p)
    }
}

impl<F: Field> ModuleRep<F> {
    pub fn to_json(&self) -> serde_json::Value {
        let j = ModuleJson {
            n: self.rank(),
            dim: self.dim(),
            images: self.images().iter().map(render).collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json_str(s: &str, p: &(impl Embed<F> + ?Sized)) -> Result<Self, FamilyJsonError> {
        let j: ModuleJson = serde_json::from_str(s).map_err(|e| err(e.to_string()))?;
        check_dims(j.dim, j.n, 1)?;
        let images = j
            .images
            .iter()
            .map(|x| parse_square(x, j.dim, p))
            .collect::<Result<Vec<_>, _>>()?;
        ModuleRep::new(j.n, j.dim, images).map_err(|e| err(e.to_string()))
    }
}

impl<F: Field> BalancingData<F> {
    pub fn to_json(&self) -> serde_json::Value {
        let j = BalanceJson {
            phi_m: render(&self.phi_m),
            phi_mv: self.phi_mv.as_ref().map(render),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json_str(
        s: &str,
        m: usize,
        n: usize,
        p: &(impl Embed<F> + ?Sized),
    ) -> Result<Self, FamilyJsonError> {
        let j: BalanceJson = serde_json::from_str(s).map_err(|e| err(e.to_string()))?;
        check_dims(m, n, 1)?;
        let phi_m = parse_square(&j.phi_m, m, p)?;
        let phi_mv = j
            .phi_mv
            .as_ref()
            .map(|x| parse_square(x, m * n, p))
            .transpose()?;
        Ok(Self { phi_m, phi_mv })
    }
}
