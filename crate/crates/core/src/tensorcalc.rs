//! Leg-indexed operators on tensor products of finite-dimensional spaces.
//!
//! Basis vectors of a product are multi-indices with the first leg varying
//! slowest. The R-matrix on `V ⊗ V` is
//!
//! ```text
//! R = q Σ E_ii⊗E_ii + Σ_{i≠j} E_ii⊗E_jj + (q - q^-1) Σ_{i<j} E_ij⊗E_ji
//! ```
//!
//! and the braiding is `σ = P R` with `P` the flip, so `σ` has eigenvalues
//! `q` and `-q^-1`.
//!
//! Pivotal convention: duals are right duals and the partial trace over a
//! vector leg is weighted by `w_i = q^(N+1-2i)` (1-based `i`). With these
//! weights closing the second leg of `σ` gives `θ_V = q^N` times the identity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Embed, Field, Params};
use crate::linalg::Matrix;
use crate::report::CheckReport;
use crate::scalars::{parse_coefficient, RationalScalar};

/// Largest total dimension accepted from external input.
pub const MAX_INPUT_DIM: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unknown leg {0:?}")]
    UnknownLeg(String),
    #[error("rank N must be at least 2, got {0}")]
    Rank(usize),
    #[error("operator is not invertible")]
    Singular,
    #[error("malformed operator data: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub label: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Leg>", into = "Vec<Leg>")]
pub struct LegSignature {
    legs: Vec<Leg>,
}

impl TryFrom<Vec<Leg>> for LegSignature {
    type Error = TensorError;
    fn try_from(legs: Vec<Leg>) -> Result<Self, TensorError> {
        Self::new(legs)
    }
}

impl From<LegSignature> for Vec<Leg> {
    fn from(s: LegSignature) -> Self {
        s.legs
    }
}

impl LegSignature {
    pub fn new(legs: Vec<Leg>) -> Result<Self, TensorError> {
        for (i, l) in legs.iter().enumerate() {
            if l.dim == 0 {
                return Err(TensorError::Signature(format!(
                    "leg {:?} has dimension 0",
                    l.label
                )));
            }
            if legs[..i].iter().any(|o| o.label == l.label) {
                return Err(TensorError::Signature(format!(
                    "duplicate label {:?}",
                    l.label
                )));
            }
        }
        let mut total: usize = 1;
        for l in &legs {
            total = total
                .checked_mul(l.dim)
                .filter(|t| *t <= 1 << 20)
                .ok_or_else(|| TensorError::Signature("total dimension too large".into()))?;
        }
        Ok(Self { legs })
    }

    /// `k` vector legs of dimension `n`, labelled `1..=k`.
    pub fn vector(n: usize, k: usize) -> Self {
        Self::new(
            (1..=k)
                .map(|i| Leg {
                    label: i.to_string(),
                    dim: n,
                })
                .collect(),
        )
        .expect("valid")
    }

    /// A module leg `M` of dimension `m` followed by `k` vector legs.
    pub fn with_module(m: usize, n: usize, k: usize) -> Self {
        let mut legs = vec![Leg {
            label: "M".into(),
            dim: m,
        }];
        legs.extend((1..=k).map(|i| Leg {
            label: i.to_string(),
            dim: n,
        }));
        Self::new(legs).expect("valid")
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.legs.iter().map(|l| l.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.legs.iter().map(|l| l.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize, TensorError> {
        self.legs
            .iter()
            .position(|l| l.label == label)
            .ok_or_else(|| TensorError::UnknownLeg(label.into()))
    }

    fn split(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.legs.len()];
        for (k, l) in self.legs.iter().enumerate().rev() {
            out[k] = idx % l.dim;
            idx /= l.dim;
        }
        out
    }

    fn join(&self, multi: &[usize]) -> usize {
        self.legs
            .iter()
            .zip(multi)
            .fold(0, |acc, (l, i)| acc * l.dim + i)
    }

    fn without(&self, k: usize) -> Self {
        let mut legs = self.legs.clone();
        legs.remove(k);
        Self { legs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator<F: Field> {
    signature: LegSignature,
    matrix: Matrix<F>,
}

impl<F: Field> TensorOperator<F> {
    pub fn new(signature: LegSignature, matrix: Matrix<F>) -> Result<Self, TensorError> {
        let n = signature.total_dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(TensorError::Dimension(format!(
                "signature has total dimension {n}, matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { signature, matrix })
    }

    pub fn identity(signature: LegSignature) -> Self {
        let n = signature.total_dim();
        Self {
            signature,
            matrix: Matrix::identity(n),
        }
    }

    pub fn signature(&self) -> &LegSignature {
        &self.signature
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<F> {
        self.matrix
    }

    fn same_shape(&self, o: &Self) -> Result<(), TensorError> {
        if self.signature != o.signature {
            return Err(TensorError::Signature(
                "operators act on different signatures".into(),
            ));
        }
        Ok(())
    }

    /// `self ∘ o`: apply `o` first.
    pub fn compose(&self, o: &Self) -> Result<Self, TensorError> {
        self.same_shape(o)?;
        Ok(Self {
            signature: self.signature.clone(),
            matrix: self.matrix.mul(&o.matrix),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, TensorError> {
        self.same_shape(o)?;
        Ok(Self {
            signature: self.signature.clone(),
            matrix: self.matrix.sub(&o.matrix),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self, TensorError> {
        self.same_shape(o)?;
        Ok(Self {
            signature: self.signature.clone(),
            matrix: self.matrix.add(&o.matrix),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            signature: self.signature.clone(),
            matrix: self.matrix.scale(c),
        }
    }

    pub fn inverse(&self) -> Result<Self, TensorError> {
        let m = self.matrix.inverse().ok_or(TensorError::Singular)?;
        Ok(Self {
            signature: self.signature.clone(),
            matrix: m,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn relabel(&self, signature: LegSignature) -> Result<Self, TensorError> {
        if signature.dims() != self.signature.dims() {
            return Err(TensorError::Dimension(
                "relabel must keep leg dimensions".into(),
            ));
        }
        Ok(Self {
            signature,
            matrix: self.matrix.clone(),
        })
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> TensorOperator<G> {
        TensorOperator {
            signature: self.signature.clone(),
            matrix: self.matrix.map(f),
        }
    }

    /// Locate nonzero entries, rendered for reports.
    pub fn nonzero_locations(&self) -> Vec<(String, String)> {
        self.matrix
            .nonzero_entries()
            .into_iter()
            .map(|(i, j, v)| {
                let (a, b) = (self.signature.split(i), self.signature.split(j));
                (format!("row {a:?} col {b:?}"), v.render())
            })
            .collect()
    }
}

/// The coefficients of the R-matrix in a field.
pub fn r_matrix<F: Field>(n: usize, p: &Params<F>) -> Result<TensorOperator<F>, TensorError> {
    if n < 2 {
        return Err(TensorError::Rank(n));
    }
    let mut m = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m.set(
                i * n + j,
                i * n + j,
                if i == j { p.q.clone() } else { F::one() },
            );
            if i < j {
                m.set(i * n + j, j * n + i, p.qdiff());
            }
        }
    }
    TensorOperator::new(LegSignature::vector(n, 2), m)
}

/// The standard R-matrix with symbolic `q`.
pub fn standard_r_matrix(n: usize) -> Result<TensorOperator<RationalScalar>, TensorError> {
    r_matrix(n, &Params::symbolic())
}

/// The flip `X ⊗ Y → Y ⊗ X` as a matrix, for dimensions `a` and `b`.
pub fn flip_matrix<F: Field>(a: usize, b: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(a * b, a * b);
    for i in 0..a {
        for j in 0..b {
            m.set(j * a + i, i * b + j, F::one());
        }
    }
    m
}

pub fn flip<F: Field>(n: usize) -> TensorOperator<F> {
    TensorOperator {
        signature: LegSignature::vector(n, 2),
        matrix: flip_matrix(n, n),
    }
}

/// `σ = P R`.
pub fn braiding_from_r<F: Field>(r: &TensorOperator<F>) -> Result<TensorOperator<F>, TensorError> {
    let n = two_leg_dim(r)?;
    Ok(TensorOperator {
        signature: r.signature.clone(),
        matrix: flip_matrix::<F>(n, n).mul(&r.matrix),
    })
}

/// `σ` for the standard R-matrix in a field.
pub fn braiding<F: Field>(n: usize, p: &Params<F>) -> Result<TensorOperator<F>, TensorError> {
    braiding_from_r(&r_matrix(n, p)?)
}

fn two_leg_dim<F: Field>(r: &TensorOperator<F>) -> Result<usize, TensorError> {
    let d = r.signature.dims();
    if d.len() != 2 || d[0] != d[1] {
        return Err(TensorError::Signature(
            "expected an operator on V ⊗ V".into(),
        ));
    }
    Ok(d[0])
}

/// Embed `op` into `big`, acting on the legs at positions `legs` (in the
/// order of `op`'s own legs) and as the identity elsewhere.
pub fn apply_on_legs<F: Field>(
    op: &TensorOperator<F>,
    big: &LegSignature,
    legs: &[usize],
) -> Result<TensorOperator<F>, TensorError> {
    if legs.len() != op.signature.len() {
        return Err(TensorError::Dimension(format!(
            "operator has {} legs, {} positions given",
            op.signature.len(),
            legs.len()
        )));
    }
    for (k, &l) in legs.iter().enumerate() {
        if l >= big.len() {
            return Err(TensorError::Dimension(format!(
                "leg position {l} out of range"
            )));
        }
        if legs[..k].contains(&l) {
            return Err(TensorError::Dimension(format!("leg position {l} repeated")));
        }
        if big.legs[l].dim != op.signature.legs[k].dim {
            return Err(TensorError::Dimension(format!(
                "leg {:?} has dimension {}",
                big.legs[l].label, big.legs[l].dim
            )));
        }
    }
    let n = big.total_dim();
    let od = op.signature.total_dim();
    let mut m = Matrix::zeros(n, n);
    for col in 0..n {
        let jm = big.split(col);
        let sub_j: Vec<usize> = legs.iter().map(|&l| jm[l]).collect();
        let sj = op.signature.join(&sub_j);
        for si in 0..od {
            let v = op.matrix.get(si, sj);
            if v.is_zero() {
                continue;
            }
            let sub_i = op.signature.split(si);
            let mut im = jm.clone();
            for (k, &l) in legs.iter().enumerate() {
                im[l] = sub_i[k];
            }
            m.set(big.join(&im), col, v.clone());
        }
    }
    Ok(TensorOperator {
        signature: big.clone(),
        matrix: m,
    })
}

/// Apply by leg labels.
pub fn apply_on_labels<F: Field>(
    op: &TensorOperator<F>,
    big: &LegSignature,
    labels: &[&str],
) -> Result<TensorOperator<F>, TensorError> {
    let pos = labels
        .iter()
        .map(|l| big.position(l))
        .collect::<Result<Vec<_>, _>>()?;
    apply_on_legs(op, big, &pos)
}

/// Balancing on the vector representation and the rank it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct RibbonData<F: Field> {
    pub theta_v: F,
    pub n: usize,
    /// Pivotal weights on the basis of `V`.
    pub weights: Vec<F>,
}

impl<F: Field> RibbonData<F> {
    pub fn standard(n: usize, p: &Params<F>) -> Self {
        let weights = (1..=n as i32).map(|i| p.qp(n as i32 + 1 - 2 * i)).collect();
        Self {
            theta_v: p.qp(n as i32),
            n,
            weights,
        }
    }

    /// The symmetric (`q = 1`) structure: trivial twist and weights.
    pub fn trivial(n: usize) -> Self {
        Self {
            theta_v: F::one(),
            n,
            weights: vec![F::one(); n],
        }
    }

    pub fn quantum_dimension(&self) -> F {
        self.weights.iter().fold(F::zero(), |a, w| a.add(w))
    }
}

/// Partial quantum trace over one vector leg.
pub fn quantum_trace<F: Field>(
    op: &TensorOperator<F>,
    leg: &str,
    ribbon: &RibbonData<F>,
) -> Result<TensorOperator<F>, TensorError> {
    let k = op.signature.position(leg)?;
    if op.signature.legs[k].dim != ribbon.n {
        return Err(TensorError::Dimension(format!(
            "leg {leg:?} is not a vector leg of dimension {}",
            ribbon.n
        )));
    }
    let small = op.signature.without(k);
    let n = small.total_dim();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let mut im = small.split(i);
        im.insert(k, 0);
        for j in 0..n {
            let mut jm = small.split(j);
            jm.insert(k, 0);
            let mut acc = F::zero();
            for (s, w) in ribbon.weights.iter().enumerate() {
                im[k] = s;
                jm[k] = s;
                let v = op
                    .matrix
                    .get(op.signature.join(&im), op.signature.join(&jm));
                if !v.is_zero() {
                    acc = acc.add(&v.mul(w));
                }
            }
            m.set(i, j, acc);
        }
    }
    Ok(TensorOperator {
        signature: small,
        matrix: m,
    })
}

fn report_nonzero<F: Field>(rep: &mut CheckReport, what: &str, op: &TensorOperator<F>) {
    for (loc, v) in op.nonzero_locations() {
        rep.residual(format!("{what} {loc}"), v);
    }
}

/// Exact residual `R12 R13 R23 - R23 R13 R12` on `V^{⊗3}`.
pub fn check_qybe<F: Field>(r: &TensorOperator<F>) -> Result<CheckReport, TensorError> {
    let n = two_leg_dim(r)?;
    let big = LegSignature::vector(n, 3);
    let r12 = apply_on_legs(r, &big, &[0, 1])?;
    let r13 = apply_on_legs(r, &big, &[0, 2])?;
    let r23 = apply_on_legs(r, &big, &[1, 2])?;
    let lhs = r12.compose(&r13)?.compose(&r23)?;
    let rhs = r23.compose(&r13)?.compose(&r12)?;
    let res = lhs.sub(&rhs)?;
    let mut rep = CheckReport::new("qybe");
    rep.config("n", n);
    report_nonzero(&mut rep, "R12 R13 R23 - R23 R13 R12 at", &res);
    Ok(rep)
}

/// Exact residual `(σ - q)(σ + q^-1)` for `σ = P R`.
pub fn check_hecke<F: Field>(r: &TensorOperator<F>, q: &F) -> Result<CheckReport, TensorError> {
    let n = two_leg_dim(r)?;
    let s = braiding_from_r(r)?;
    let id = TensorOperator::identity(r.signature.clone());
    let qi = q.inv().ok_or(TensorError::Singular)?;
    let res = s.sub(&id.scale(q))?.compose(&s.add(&id.scale(&qi))?)?;
    let mut rep = CheckReport::new("hecke");
    rep.config("n", n);
    report_nonzero(&mut rep, "(σ - q)(σ + q^-1) at", &res);
    Ok(rep)
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    signature: LegSignature,
    entries: Vec<String>,
}

impl<F: Field> TensorOperator<F> {
    /// Serialize as a signature and a row-major list of scalar strings.
    pub fn to_json(&self) -> serde_json::Value {
        let j = OperatorJson {
            signature: self.signature.clone(),
            entries: self.matrix.entries().iter().map(|x| x.render()).collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }
}

impl TensorOperator<RationalScalar> {
    pub fn from_json_str(s: &str) -> Result<Self, TensorError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| TensorError::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, TensorError> {
        let j: OperatorJson =
            serde_json::from_value(v.clone()).map_err(|e| TensorError::Parse(e.to_string()))?;
        let n = j.signature.total_dim();
        if n > MAX_INPUT_DIM {
            return Err(TensorError::Parse(format!(
                "total dimension {n} exceeds {MAX_INPUT_DIM}"
            )));
        }
        if j.entries.len() != n * n {
            return Err(TensorError::Parse(format!(
                "expected {} entries, found {}",
                n * n,
                j.entries.len()
            )));
        }
        let data = j
            .entries
            .iter()
            .map(|e| parse_coefficient(e).map_err(|err| TensorError::Parse(err.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = data.chunks(n).map(|c| c.to_vec()).collect();
        Self::new(j.signature, Matrix::from_rows(rows))
    }

    pub fn embed<F: Field>(
        &self,
        p: &(impl Embed<F> + ?Sized),
    ) -> Result<TensorOperator<F>, crate::scalars::ScalarError> {
        Ok(TensorOperator {
            signature: self.signature.clone(),
            matrix: self.matrix.try_map(|x| p.embed(x))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn rs(s: &str) -> RationalScalar {
        crate::scalars::parse_scalar(s).unwrap()
    }

    #[test]
    fn r_matrix_n2_entries() {
        let r = standard_r_matrix(2).unwrap();
        let m = r.matrix();
        let diag: Vec<_> = (0..4).map(|i| m.get(i, i).clone()).collect();
        assert_eq!(diag, vec![rs("q"), rs("1"), rs("1"), rs("q")]);
        assert_eq!(m.get(1, 2), &rs("q - q^-1"));
        assert_eq!(m.nonzero_entries().len(), 5);
        assert!(standard_r_matrix(1).is_err());
    }

    #[test]
    fn qybe_and_hecke_symbolic() {
        for n in [2, 3] {
            let r = standard_r_matrix(n).unwrap();
            assert!(check_qybe(&r).unwrap().passed());
            assert!(check_hecke(&r, &RationalScalar::q()).unwrap().passed());
        }
    }

    #[test]
    fn perturbed_r_fails_qybe_with_location() {
        let r = standard_r_matrix(2).unwrap();
        let mut m = r.matrix().clone();
        m.set(0, 3, RationalScalar::one());
        let bad = TensorOperator::new(r.signature().clone(), m).unwrap();
        let rep = check_qybe(&bad).unwrap();
        assert!(!rep.passed());
        assert!(rep.residuals[0].location.contains("row"));
    }

    #[test]
    fn identity_solves_qybe_and_flip_is_hecke_at_one() {
        let id = TensorOperator::<Rat>::identity(LegSignature::vector(2, 2));
        assert!(check_qybe(&id).unwrap().passed());
        // σ = P when R = id, and P^2 = 1 is Hecke at q = 1
        assert!(check_hecke(&id, &Rat::from_i64(1)).unwrap().passed());
    }

    #[test]
    fn classical_limit_is_flip() {
        let s = braiding(2, &Params::<Rat>::at_i64((1, 1), (2, 1))).unwrap();
        assert_eq!(s, flip(2));
    }

    #[test]
    fn braid_relation_and_disjoint_commute() {
        let s = braiding(2, &Params::symbolic()).unwrap();
        let b3 = LegSignature::vector(2, 3);
        let s12 = apply_on_legs(&s, &b3, &[0, 1]).unwrap();
        let s23 = apply_on_legs(&s, &b3, &[1, 2]).unwrap();
        assert_eq!(
            s12.compose(&s23).unwrap().compose(&s12).unwrap(),
            s23.compose(&s12).unwrap().compose(&s23).unwrap()
        );
        let b4 = LegSignature::vector(2, 4);
        let a = apply_on_legs(&s, &b4, &[0, 1]).unwrap();
        let b = apply_on_legs(&s, &b4, &[2, 3]).unwrap();
        assert_eq!(a.compose(&b).unwrap(), b.compose(&a).unwrap());
    }

    #[test]
    fn traces() {
        let p = Params::symbolic();
        let rib = RibbonData::standard(2, &p);
        let id = TensorOperator::identity(LegSignature::vector(2, 1));
        let t = quantum_trace(&id, "1", &rib).unwrap();
        assert_eq!(t.matrix().get(0, 0), &rs("q + q^-1"));
        let s = braiding(2, &p).unwrap();
        let closed = quantum_trace(&s, "2", &rib).unwrap();
        assert_eq!(
            closed,
            TensorOperator::identity(LegSignature::vector(2, 1)).scale(&rs("q^2"))
        );
        let s2 = s.compose(&s).unwrap();
        let closed2 = quantum_trace(&s2, "2", &rib).unwrap();
        assert_eq!(closed2.matrix().get(0, 0), &rs("q^3 + q^-1"));
        assert!(closed2.matrix().get(0, 1).is_zero());
        let pt = Params::<Rat>::at_i64((1, 1), (1, 1));
        let t1 = quantum_trace(
            &id.map(|x| pt.embed(x).unwrap()),
            "1",
            &RibbonData::standard(2, &pt),
        )
        .unwrap();
        assert_eq!(t1.matrix().get(0, 0), &Rat::from_i64(2));
    }

    #[test]
    fn json_round_trip() {
        let r = standard_r_matrix(2).unwrap();
        let s = r.to_json().to_string();
        assert_eq!(TensorOperator::from_json_str(&s).unwrap(), r);
        assert!(TensorOperator::from_json_str(
            "{\"signature\":[{\"label\":\"1\",\"dim\":2}],\"entries\":[\"1\"]}"
        )
        .is_err());
    }
}
