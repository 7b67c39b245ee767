//! Braided module categories over `Rep U_q(gl_N)` realized by K-matrices.
//!
//! A module object `M` is a finite-dimensional vector space and a braided
//! module structure is recorded by the family `E_k = E_{M, V^{⊗k}}` acting
//! on `M ⊗ V^{⊗k}` (module leg first). `S_i` denotes the braiding `σ` of
//! vector legs `i, i+1`, and `E1leg` is `E_1` acting on `M` and the first
//! vector leg.
//!
//! Axioms in this realization:
//!
//! ```text
//! DKM        E_k = E_{k-1} · C · E1leg · C^-1,   C = S_{k-1} ⋯ S_1
//! octagon    E_{M⊗V,V} = S · E1leg · S
//! DMcat      E_2 = E1leg · E_{M⊗V,V} · S^-1 · S^-1
//! naturality E_k commutes with every S_i
//! ```
//!
//! Given the octagon the DKM and DMcat forms coincide. The operator
//! `E_{M⊗V,V}` is either stored (`e_shift`) or taken from the octagon.
//!
//! The dictionary with `O_q(GL_N)`-modules: `ρ(a_ij)` is the `M`-block of
//! `E_1` at vector indices `(N+1-i, N+1-j)`. Under this reading `ρ`
//! satisfies the reflection equation relations exactly when `E1leg S E1leg S^-1`
//! is natural; [`natural_part`] and [`check_dkm`] test this.

mod fieldgoal;
mod json;
mod module;

pub use fieldgoal::{field_goal, regular_module, FieldGoalVariant, RegularModule};
pub use json::FamilyJsonError;
pub use module::ModuleRep;

use thiserror::Error;

use crate::field::{Field, Params};
use crate::linalg::Matrix;
use crate::report::CheckReport;
use crate::tensorcalc::{braiding, RibbonData};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BraidedError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operator is not invertible: {0}")]
    Singular(String),
    #[error("rank N must be 2 or 3, got {0}")]
    Rank(usize),
}

/// `E_{M, V^{⊗k}}` for `k = 1..=K`, with an optional explicit `E_{M⊗V,V}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EOperatorFamily<F: Field> {
    pub m: usize,
    pub n: usize,
    /// `e[k-1]` acts on `M ⊗ V^{⊗k}`.
    pub e: Vec<Matrix<F>>,
    pub e_shift: Option<Matrix<F>>,
}

fn pow_usize(b: usize, k: usize) -> usize {
    b.pow(k as u32)
}

fn inverse<F: Field>(m: &Matrix<F>, what: &str) -> Result<Matrix<F>, BraidedError> {
    m.inverse()
        .ok_or_else(|| BraidedError::Singular(what.to_string()))
}

/// Braid data on `M ⊗ V^{⊗k}`: `S_i` and inverses.
#[derive(Clone, Debug)]
pub struct Strands<F: Field> {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub s: Vec<Matrix<F>>,
    pub s_inv: Vec<Matrix<F>>,
}

impl<F: Field> Strands<F> {
    pub fn new(m: usize, n: usize, k: usize, p: &Params<F>) -> Result<Self, BraidedError> {
        if !(2..=3).contains(&n) {
            return Err(BraidedError::Rank(n));
        }
        let sigma = braiding(n, p)
            .map_err(|e| BraidedError::Dimension(e.to_string()))?
            .into_matrix();
        let sigma_inv = inverse(&sigma, "braiding")?;
        let lift = |x: &Matrix<F>, i: usize| {
            Matrix::identity(m * pow_usize(n, i - 1))
                .kron(x)
                .kron(&Matrix::identity(pow_usize(n, k - i - 1)))
        };
        let s = (1..k).map(|i| lift(&sigma, i)).collect();
        let s_inv = (1..k).map(|i| lift(&sigma_inv, i)).collect();
        Ok(Self { m, n, k, s, s_inv })
    }

    pub fn dim(&self) -> usize {
        self.m * pow_usize(self.n, self.k)
    }

    /// An operator on `M ⊗ V^{⊗j}` extended by the identity on the remaining
    /// legs.
    pub fn lift(&self, op: &Matrix<F>) -> Matrix<F> {
        let rest = self.dim() / op.rows();
        op.kron(&Matrix::identity(rest))
    }

    /// `S_1 ⋯ S_j` (rightmost applied first), the braiding `σ_{V^{⊗j}, V}`.
    pub fn up(&self, j: usize) -> Matrix<F> {
        (0..j).fold(Matrix::identity(self.dim()), |acc, i| acc.mul(&self.s[i]))
    }

    /// `S_j ⋯ S_1`, the braiding `σ_{V, V^{⊗j}}`.
    pub fn down(&self, j: usize) -> Matrix<F> {
        (0..j)
            .rev()
            .fold(Matrix::identity(self.dim()), |acc, i| acc.mul(&self.s[i]))
    }

    pub fn down_inv(&self, j: usize) -> Matrix<F> {
        (0..j).fold(Matrix::identity(self.dim()), |acc, i| {
            acc.mul(&self.s_inv[i])
        })
    }

    /// `θ_{V^{⊗k}}` on `M ⊗ V^{⊗k}`, built by `θ_{X⊗V} = σ_{V,X} σ_{X,V} (θ_X ⊗ θ_V)`.
    pub fn twist(&self, theta_v: &F) -> Matrix<F> {
        let mut acc = Matrix::identity(self.dim()).scale(theta_v);
        for j in 1..self.k {
            acc = self.down(j).mul(&self.up(j)).mul(&acc).scale(theta_v);
        }
        acc
    }
}

impl<F: Field> EOperatorFamily<F> {
    pub fn new(m: usize, n: usize, e1: Matrix<F>) -> Result<Self, BraidedError> {
        if e1.rows() != m * n || e1.cols() != m * n {
            return Err(BraidedError::Dimension(format!(
                "E_1 must be {0}x{0}",
                m * n
            )));
        }
        Ok(Self {
            m,
            n,
            e: vec![e1],
            e_shift: None,
        })
    }

    pub fn e1(&self) -> &Matrix<F> {
        &self.e[0]
    }

    pub fn levels(&self) -> usize {
        self.e.len()
    }

    /// `E_{V,V} = σ^2`, the double braiding: `V` as an object of the
    /// category acting on itself.
    pub fn double_braiding(n: usize, p: &Params<F>) -> Result<Self, BraidedError> {
        let s = Strands::new(1, n, 2, p)?;
        Self::new(n, n, s.s[0].mul(&s.s[0]))
    }

    /// Extend through level `k` by the DKM formula.
    pub fn extended(&self, k: usize, p: &Params<F>) -> Result<Self, BraidedError> {
        let mut out = self.clone();
        while out.e.len() < k {
            let j = out.e.len() + 1;
            let next = dkm_rhs(&out, j, p)?;
            out.e.push(next);
        }
        Ok(out)
    }

    /// Replace `E_k` by `E_k · θ_{V^{⊗k}}^twist`.
    pub fn twisted(&self, twist: i32, theta_v: &F, p: &Params<F>) -> Result<Self, BraidedError> {
        if twist == 0 {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        for (i, e) in out.e.iter_mut().enumerate() {
            let st = Strands::new(self.m, self.n, i + 1, p)?;
            let th = st.twist(theta_v);
            let th = if twist < 0 {
                inverse(&th, "twist")?
            } else {
                th
            };
            let mut acc = e.clone();
            for _ in 0..twist.unsigned_abs() {
                acc = acc.mul(&th);
            }
            *e = acc;
        }
        if let Some(es) = &out.e_shift {
            let th = Matrix::identity(es.rows()).scale(
                &theta_v
                    .powi(twist)
                    .ok_or_else(|| BraidedError::Singular("theta".into()))?,
            );
            out.e_shift = Some(es.mul(&th));
        }
        Ok(out)
    }
}

/// `E_{j-1} · C · E1leg · C^-1` on `M ⊗ V^{⊗j}`.
fn dkm_rhs<F: Field>(
    fam: &EOperatorFamily<F>,
    j: usize,
    p: &Params<F>,
) -> Result<Matrix<F>, BraidedError> {
    let st = Strands::new(fam.m, fam.n, j, p)?;
    let prev = st.lift(&fam.e[j - 2]);
    let e1 = st.lift(fam.e1());
    Ok(prev.mul(&st.down(j - 1)).mul(&e1).mul(&st.down_inv(j - 1)))
}

/// `S · E1leg · S` on `M ⊗ V ⊗ V`.
pub fn octagon_shift<F: Field>(
    fam: &EOperatorFamily<F>,
    p: &Params<F>,
) -> Result<Matrix<F>, BraidedError> {
    let st = Strands::new(fam.m, fam.n, 2, p)?;
    let e1 = st.lift(fam.e1());
    Ok(st.s[0].mul(&e1).mul(&st.s[0]))
}

fn report_matrix<F: Field>(rep: &mut CheckReport, what: &str, m: &Matrix<F>) {
    for (i, j, v) in m.nonzero_entries() {
        rep.residual(format!("{what} at ({i},{j})"), v.render());
    }
}

fn untwisted<F: Field>(
    fam: &EOperatorFamily<F>,
    twist: i32,
    p: &Params<F>,
) -> Result<EOperatorFamily<F>, BraidedError> {
    let theta = RibbonData::standard(fam.n, p).theta_v;
    fam.twisted(-twist, &theta, p)
}

/// Octagon residual on `(M ⊗ V) ⊗ V`. Without a stored `E_{M⊗V,V}` it is
/// read off from `E_2` through DMcat, which needs `E_2`.
pub fn check_octagon<F: Field>(
    fam: &EOperatorFamily<F>,
    p: &Params<F>,
    twist: i32,
) -> Result<CheckReport, BraidedError> {
    let fam = untwisted(fam, twist, p)?;
    let mut rep = CheckReport::new("octagon");
    rep.config("m", fam.m)
        .config("n", fam.n)
        .config("framing_twist", twist);
    let st = Strands::new(fam.m, fam.n, 2, p)?;
    let shift = match (&fam.e_shift, fam.e.get(1)) {
        (Some(es), _) => {
            rep.detail("shift_source", "stored");
            es.clone()
        }
        (None, Some(e2)) => {
            rep.detail("shift_source", "DMcat");
            let Some(e1_inv) = st.lift(fam.e1()).inverse() else {
                rep.partial("E_1 is singular, so E_{M⊗V,V} cannot be read off from E_2");
                return Ok(rep);
            };
            e1_inv.mul(e2).mul(&st.s[0]).mul(&st.s[0])
        }
        (None, None) => {
            rep.partial("family has neither E_2 nor E_{M⊗V,V}");
            return Ok(rep);
        }
    };
    if shift.rows() != st.dim() {
        return Err(BraidedError::Dimension(
            "E_{M⊗V,V} has the wrong size".into(),
        ));
    }
    report_matrix(
        &mut rep,
        "E_{M⊗V,V} - S E1 S",
        &shift.sub(&octagon_shift(&fam, p)?),
    );
    Ok(rep)
}

/// DKM residuals at every stored level, naturality of each level, and the
/// DMcat residual at level 2.
pub fn check_dkm<F: Field>(
    fam: &EOperatorFamily<F>,
    p: &Params<F>,
    twist: i32,
) -> Result<CheckReport, BraidedError> {
    let fam = untwisted(fam, twist, p)?;
    let mut rep = CheckReport::new("dkm");
    rep.config("m", fam.m)
        .config("n", fam.n)
        .config("framing_twist", twist)
        .config("levels", fam.levels());
    if fam.levels() < 2 {
        rep.partial("only E_1 is stored; nothing to compare");
        return Ok(rep);
    }
    for j in 2..=fam.levels() {
        let st = Strands::new(fam.m, fam.n, j, p)?;
        let e = &fam.e[j - 1];
        if e.rows() != st.dim() {
            return Err(BraidedError::Dimension(format!("E_{j} has the wrong size")));
        }
        report_matrix(
            &mut rep,
            &format!("E_{j} - E_{} C E1 C^-1", j - 1),
            &e.sub(&dkm_rhs(&fam, j, p)?),
        );
        for (i, s) in st.s.iter().enumerate() {
            report_matrix(&mut rep, &format!("[E_{j}, S_{}]", i + 1), &e.commutator(s));
        }
    }
    let st = Strands::new(fam.m, fam.n, 2, p)?;
    let shift = match &fam.e_shift {
        Some(es) => es.clone(),
        None => octagon_shift(&fam, p)?,
    };
    let dmcat = st
        .lift(fam.e1())
        .mul(&shift)
        .mul(&st.s_inv[0])
        .mul(&st.s_inv[0]);
    let dm_res = fam.e[1].sub(&dkm_rhs(&fam, 2, p)?);
    let cat_res = fam.e[1].sub(&dmcat);
    report_matrix(&mut rep, "E_2 - E1 E_{M⊗V,V} S^-1 S^-1", &cat_res);
    let octagon_holds = fam
        .e_shift
        .as_ref()
        .map_or(Ok(true), |es| octagon_shift(&fam, p).map(|o| o == *es))?;
    rep.detail("octagon_holds", octagon_holds);
    rep.detail("forms_agree", dm_res == cat_res);
    if octagon_holds && dm_res != cat_res {
        rep.residual("DKM and DMcat forms", "differ although the octagon holds");
    }
    Ok(rep)
}

/// Projection onto operators commuting with `S`: `P_+ X P_+ + P_- X P_-`
/// for the two spectral projectors of the Hecke braiding.
pub fn natural_part<F: Field>(
    x: &Matrix<F>,
    m: usize,
    n: usize,
    p: &Params<F>,
) -> Result<Matrix<F>, BraidedError> {
    let st = Strands::new(m, n, 2, p)?;
    let id = Matrix::identity(st.dim());
    let s = &st.s[0];
    let norm =
        p.q.add(&p.q_inv())
            .inv()
            .ok_or_else(|| BraidedError::Singular("q + q^-1".into()))?;
    let plus = s.add(&id.scale(&p.q_inv())).scale(&norm);
    let minus = id.scale(&p.q).sub(s).scale(&norm);
    Ok(plus.mul(x).mul(&plus).add(&minus.mul(x).mul(&minus)))
}

/// The family generated by `E_1` whose `E_2` is the natural part of the DKM
/// candidate. It satisfies DKM exactly when the candidate is already
/// natural.
pub fn project_family<F: Field>(
    e1: Matrix<F>,
    m: usize,
    n: usize,
    p: &Params<F>,
) -> Result<EOperatorFamily<F>, BraidedError> {
    let mut fam = EOperatorFamily::new(m, n, e1)?;
    let cand = dkm_rhs(&fam, 2, p)?;
    fam.e.push(natural_part(&cand, m, n, p)?);
    Ok(fam)
}

fn rev(n: usize, i: usize) -> usize {
    n - 1 - i
}

/// The assembled operator `L_A` on `M ⊗ V` whose block at vector indices
/// `(N+1-i, N+1-j)` is `ρ(a_ij)`; this is `E_1`.
pub fn l_operator<F: Field>(rho: &ModuleRep<F>) -> Result<Matrix<F>, BraidedError> {
    let (m, n) = (rho.dim(), rho.rank());
    let mut l = Matrix::zeros(m * n, m * n);
    for i in 0..n {
        for j in 0..n {
            let r = rho.generator(i, j);
            for a in 0..m {
                for b in 0..m {
                    l.set(a * n + rev(n, i), b * n + rev(n, j), r.get(a, b).clone());
                }
            }
        }
    }
    Ok(l)
}

/// Inverse of [`l_operator`].
pub fn from_l_operator<F: Field>(
    l: &Matrix<F>,
    m: usize,
    n: usize,
) -> Result<ModuleRep<F>, BraidedError> {
    if l.rows() != m * n || l.cols() != m * n {
        return Err(BraidedError::Dimension(format!("L must be {0}x{0}", m * n)));
    }
    let images = (0..n * n)
        .map(|g| {
            let (i, j) = (g / n, g % n);
            Matrix::from_fn(m, m, |a, b| {
                l.get(a * n + rev(n, i), b * n + rev(n, j)).clone()
            })
        })
        .collect();
    ModuleRep::new(n, m, images)
}

/// `ρ` from `E_1`.
pub fn e_to_rho<F: Field>(fam: &EOperatorFamily<F>) -> Result<ModuleRep<F>, BraidedError> {
    from_l_operator(fam.e1(), fam.m, fam.n)
}

/// `E_1 = L_A` from `ρ`, extended to `E_2` by DKM.
pub fn rho_to_e<F: Field>(
    rho: &ModuleRep<F>,
    p: &Params<F>,
) -> Result<EOperatorFamily<F>, BraidedError> {
    EOperatorFamily::new(rho.dim(), rho.rank(), l_operator(rho)?)?.extended(2, p)
}

/// A balancing automorphism: `φ_M` and optionally `φ_{M⊗V}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BalancingData<F: Field> {
    pub phi_m: Matrix<F>,
    pub phi_mv: Option<Matrix<F>>,
}

/// The balancing determined by `φ_M`: `φ_{M⊗V} = E_1 (φ_M ⊗ θ_V)`.
pub fn canonical_balancing<F: Field>(
    fam: &EOperatorFamily<F>,
    phi_m: Matrix<F>,
    ribbon: &RibbonData<F>,
) -> BalancingData<F> {
    let phi_mv = fam
        .e1()
        .mul(&phi_m.kron(&Matrix::identity(fam.n)).scale(&ribbon.theta_v));
    BalancingData {
        phi_m,
        phi_mv: Some(phi_mv),
    }
}

/// Residuals of `φ_{M⊗X} = E_{M,X} (φ_M ⊗ θ_X)` for `X = V` and, through
/// `φ_{(M⊗V)⊗V}`, the compatibility at `X = V ⊗ V`.
pub fn check_balanced<F: Field>(
    fam: &EOperatorFamily<F>,
    bal: &BalancingData<F>,
    ribbon: &RibbonData<F>,
    p: &Params<F>,
) -> Result<CheckReport, BraidedError> {
    let mut rep = CheckReport::new("balanced");
    rep.config("m", fam.m)
        .config("n", fam.n)
        .config("theta_v", ribbon.theta_v.render());
    if bal.phi_m.rows() != fam.m || bal.phi_m.cols() != fam.m {
        return Err(BraidedError::Dimension("φ_M has the wrong size".into()));
    }
    if bal.phi_m.inverse().is_none() {
        rep.residual("φ_M", "not invertible");
    }
    let idv = Matrix::identity(fam.n);
    let expected = fam.e1().mul(&bal.phi_m.kron(&idv).scale(&ribbon.theta_v));
    let phi_mv = match &bal.phi_mv {
        Some(x) => {
            if x.rows() != fam.m * fam.n {
                return Err(BraidedError::Dimension("φ_{M⊗V} has the wrong size".into()));
            }
            report_matrix(&mut rep, "φ_{M⊗V} - E_1 (φ_M ⊗ θ_V)", &x.sub(&expected));
            x.clone()
        }
        None => expected,
    };
    if let Some(e2) = fam.e.get(1) {
        let st = Strands::new(fam.m, fam.n, 2, p)?;
        let shift = match &fam.e_shift {
            Some(es) => es.clone(),
            None => octagon_shift(fam, p)?,
        };
        let theta_vv = st.twist(&ribbon.theta_v);
        let via_vv = e2.mul(&st.lift(&bal.phi_m)).mul(&theta_vv);
        let via_shift = shift.mul(&phi_mv.kron(&idv).scale(&ribbon.theta_v));
        report_matrix(
            &mut rep,
            "E_2 (φ_M ⊗ θ_{V⊗V}) - E_{M⊗V,V} (φ_{M⊗V} ⊗ θ_V)",
            &via_vv.sub(&via_shift),
        );
    } else {
        rep.partial("level 2 compatibility needs E_2");
    }
    Ok(rep)
}

/// Annular braid group representation on `M ⊗ V^{⊗k}`: `τ ↦ E1leg`,
/// `σ_i ↦ S_i`.
#[derive(Clone, Debug)]
pub struct AnnularRep<F: Field> {
    pub tau: Matrix<F>,
    pub sigma: Vec<Matrix<F>>,
}

pub fn annular_braid_rep<F: Field>(
    fam: &EOperatorFamily<F>,
    strands: usize,
    p: &Params<F>,
) -> Result<AnnularRep<F>, BraidedError> {
    if strands == 0 {
        return Err(BraidedError::Dimension("at least one strand".into()));
    }
    let st = Strands::new(fam.m, fam.n, strands, p)?;
    Ok(AnnularRep {
        tau: st.lift(fam.e1()),
        sigma: st.s,
    })
}

impl<F: Field> AnnularRep<F> {
    /// Residuals of the affine braid relations, named by relation.
    pub fn check(&self) -> CheckReport {
        let mut rep = CheckReport::new("annular_braid");
        rep.config("strands", self.sigma.len() + 1);
        let (t, s) = (&self.tau, &self.sigma);
        if let Some(s1) = s.first() {
            let lhs = t.mul(s1).mul(t).mul(s1);
            let rhs = s1.mul(t).mul(s1).mul(t);
            report_matrix(&mut rep, "τ σ1 τ σ1 = σ1 τ σ1 τ", &lhs.sub(&rhs));
        }
        for (i, si) in s.iter().enumerate().skip(1) {
            report_matrix(
                &mut rep,
                &format!("τ σ{0} = σ{0} τ", i + 1),
                &t.commutator(si),
            );
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if j == i + 1 {
                    let lhs = s[i].mul(&s[j]).mul(&s[i]);
                    let rhs = s[j].mul(&s[i]).mul(&s[j]);
                    report_matrix(
                        &mut rep,
                        &format!("σ{0} σ{1} σ{0} = σ{1} σ{0} σ{1}", i + 1, j + 1),
                        &lhs.sub(&rhs),
                    );
                } else {
                    report_matrix(
                        &mut rep,
                        &format!("σ{} σ{} = σ{} σ{}", i + 1, j + 1, j + 1, i + 1),
                        &s[i].commutator(&s[j]),
                    );
                }
            }
        }
        rep
    }
}

#[cfg(test)]
mod tests;
