//! Finite-dimensional weight representations of `U_q(gl_2)` and the
//! adjoint action on algebras generated by matrix coefficients.
//!
//! Conventions: `K` acts on a vector of `gl_2` weight `(λ1, λ2)` by
//! `q^(λ1 - λ2)`, and
//!
//! ```text
//! Δ(E) = E ⊗ K + 1 ⊗ E,   Δ(F) = F ⊗ 1 + K^-1 ⊗ F,   Δ(K) = K ⊗ K
//! S(E) = -E K^-1,         S(F) = -K F
//! ```
//!
//! The universal braiding is `σ_{X,Y} = P ∘ q^{(wt, wt)} ∘ Θ` with
//! `Θ = Σ_n q^(n(n-1)/2) (q - q^-1)^n / [n]! E^n ⊗ F^n`. On `V ⊗ V` it is
//! the braiding of [`crate::tensorcalc::braiding`].
//!
//! A matrix generator `a_ij` spans a copy of `V* ⊗ V` with `a_ij ↔ f_i ⊗ e_j`
//! (`f` the dual basis); algebras act on by extending along the iterated
//! coproduct.

use crate::field::{Field, Params};
use crate::linalg::Matrix;
use crate::ncalg::{AlgebraPresentation, NCPoly, NcError};
use crate::report::CheckReport;
use crate::tensorcalc::flip_matrix;

/// A Chevalley generator of `U_q(sl_2) ⊂ U_q(gl_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chevalley {
    E,
    F,
    K,
    KInv,
}

/// A weight representation: `E`, `F` matrices plus a `gl_2` weight for each
/// basis vector. `K` is determined by the weights.
#[derive(Clone, Debug, PartialEq)]
pub struct UqRep<F: Field> {
    pub e: Matrix<F>,
    pub f: Matrix<F>,
    pub weights: Vec<(i32, i32)>,
}

impl<F: Field> UqRep<F> {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The vector representation `V` with basis `e_1, e_2`.
    pub fn vector() -> Self {
        let mut e = Matrix::zeros(2, 2);
        e.set(0, 1, F::one());
        let mut f = Matrix::zeros(2, 2);
        f.set(1, 0, F::one());
        Self {
            e,
            f,
            weights: vec![(1, 0), (0, 1)],
        }
    }

    /// `dim` copies of the trivial representation.
    pub fn trivial(dim: usize) -> Self {
        Self {
            e: Matrix::zeros(dim, dim),
            f: Matrix::zeros(dim, dim),
            weights: vec![(0, 0); dim],
        }
    }

    pub fn k(&self, p: &Params<F>) -> Matrix<F> {
        diag(self.weights.iter().map(|&(a, b)| p.qp(a - b)))
    }

    pub fn k_inv(&self, p: &Params<F>) -> Matrix<F> {
        diag(self.weights.iter().map(|&(a, b)| p.qp(b - a)))
    }

    pub fn matrix(&self, x: Chevalley, p: &Params<F>) -> Matrix<F> {
        match x {
            Chevalley::E => self.e.clone(),
            Chevalley::F => self.f.clone(),
            Chevalley::K => self.k(p),
            Chevalley::KInv => self.k_inv(p),
        }
    }

    /// The dual, on which `x` acts by `S(x)^T`.
    pub fn dual(&self, p: &Params<F>) -> Self {
        let e = self
            .e
            .mul(&self.k_inv(p))
            .scale(&F::one().neg())
            .transpose();
        let f = self.k(p).mul(&self.f).scale(&F::one().neg()).transpose();
        Self {
            e,
            f,
            weights: self.weights.iter().map(|&(a, b)| (-a, -b)).collect(),
        }
    }

    /// `self ⊗ o` through the coproduct.
    pub fn tensor(&self, o: &Self, p: &Params<F>) -> Self {
        let e = self
            .e
            .kron(&o.k(p))
            .add(&Matrix::identity(self.dim()).kron(&o.e));
        let f = self
            .f
            .kron(&Matrix::identity(o.dim()))
            .add(&self.k_inv(p).kron(&o.f));
        let weights = self
            .weights
            .iter()
            .flat_map(|&(a, b)| o.weights.iter().map(move |&(c, d)| (a + c, b + d)))
            .collect();
        Self { e, f, weights }
    }

    /// Direct sum.
    pub fn sum(&self, o: &Self) -> Self {
        let n = self.dim() + o.dim();
        let block = |a: &Matrix<F>, b: &Matrix<F>| {
            Matrix::from_fn(n, n, |i, j| {
                let s = self.dim();
                match (i < s, j < s) {
                    (true, true) => a.get(i, j).clone(),
                    (false, false) => b.get(i - s, j - s).clone(),
                    _ => F::zero(),
                }
            })
        };
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&o.weights);
        Self {
            e: block(&self.e, &o.e),
            f: block(&self.f, &o.f),
            weights,
        }
    }

    /// Check `[E, F] = (K - K^-1)/(q - q^-1)` and that `E`, `F` shift
    /// weights by `±(1, -1)`.
    pub fn check(&self, p: &Params<F>) -> CheckReport {
        let mut rep = CheckReport::new("uq_representation");
        let lhs = self.e.commutator(&self.f).scale(&p.qdiff());
        let rhs = self.k(p).sub(&self.k_inv(p));
        for (i, j, v) in lhs.sub(&rhs).nonzero_entries() {
            rep.residual(format!("[E,F] at ({i},{j})"), v.render());
        }
        for (name, m, shift) in [("E", &self.e, (1, -1)), ("F", &self.f, (-1, 1))] {
            for (i, j, _) in m.nonzero_entries() {
                let (a, b) = self.weights[j];
                if self.weights[i] != (a + shift.0, b + shift.1) {
                    rep.residual(format!("{name} weight at ({i},{j})"), "wrong weight shift");
                }
            }
        }
        rep
    }
}

fn diag<F: Field>(d: impl Iterator<Item = F>) -> Matrix<F> {
    let d: Vec<F> = d.collect();
    Matrix::from_fn(d.len(), d.len(), |i, j| {
        if i == j {
            d[i].clone()
        } else {
            F::zero()
        }
    })
}

/// `V* ⊗ V`, the span of the matrix coefficients of one generator matrix.
pub fn adjoint_rep<F: Field>(p: &Params<F>) -> UqRep<F> {
    let v = UqRep::vector();
    v.dual(p).tensor(&v, p)
}

/// The universal R-matrix `q^{(wt,wt)} Θ` on `x ⊗ y`.
pub fn universal_r<F: Field>(x: &UqRep<F>, y: &UqRep<F>, p: &Params<F>) -> Matrix<F> {
    let (dx, dy) = (x.dim(), y.dim());
    let n_max = dx.max(dy);
    let mut theta = Matrix::identity(dx * dy);
    let mut en = Matrix::identity(dx);
    let mut fn_ = Matrix::identity(dy);
    let mut fact = F::one();
    for n in 1..n_max {
        en = en.mul(&x.e);
        fn_ = fn_.mul(&y.f);
        if en.is_zero() || fn_.is_zero() {
            break;
        }
        fact = fact.mul(&p.qint(n as i32));
        let c = p
            .qp((n * (n - 1) / 2) as i32)
            .mul(&p.qdiff().powi(n as i32).expect("integer power"))
            .div(&fact)
            .expect("[n]! is nonzero at generic q");
        theta = theta.add(&en.kron(&fn_).scale(&c));
    }
    let cartan = diag(
        x.weights
            .iter()
            .flat_map(|&(a, b)| y.weights.iter().map(move |&(c, d)| a * c + b * d))
            .map(|e| p.qp(e)),
    );
    cartan.mul(&theta)
}

/// `σ_{X,Y}: X ⊗ Y → Y ⊗ X`.
pub fn braiding_of<F: Field>(x: &UqRep<F>, y: &UqRep<F>, p: &Params<F>) -> Matrix<F> {
    flip_matrix(x.dim(), y.dim()).mul(&universal_r(x, y, p))
}

/// Does `op: from → to` commute with `E`, `F`, `K`?
pub fn is_intertwiner<F: Field>(
    op: &Matrix<F>,
    from: &UqRep<F>,
    to: &UqRep<F>,
    p: &Params<F>,
) -> bool {
    [Chevalley::E, Chevalley::F, Chevalley::K]
        .iter()
        .all(|&x| op.mul(&from.matrix(x, p)) == to.matrix(x, p).mul(op))
}

/// The action of `U_q(gl_2)` on an algebra whose generators carry a
/// representation `gens` (one basis vector per generator), extended to
/// words along the iterated coproduct.
#[derive(Clone, Debug)]
pub struct AdjointAction<F: Field> {
    pub gens: UqRep<F>,
    pub params: Params<F>,
    e_img: Vec<NCPoly<F>>,
    f_img: Vec<NCPoly<F>>,
    k_scalar: Vec<F>,
}

impl<F: Field> AdjointAction<F> {
    pub fn new(gens: UqRep<F>, params: Params<F>) -> Self {
        let n = gens.dim();
        let col = |m: &Matrix<F>, j: usize| {
            NCPoly::from_terms(
                (0..n)
                    .filter(|&i| !m.get(i, j).is_zero())
                    .map(|i| (vec![i as u8], m.get(i, j).clone())),
            )
        };
        let e_img = (0..n).map(|j| col(&gens.e, j)).collect();
        let f_img = (0..n).map(|j| col(&gens.f, j)).collect();
        let k_scalar = gens
            .weights
            .iter()
            .map(|&(a, b)| params.qp(a - b))
            .collect();
        Self {
            gens,
            params,
            e_img,
            f_img,
            k_scalar,
        }
    }

    /// The action on an algebra generated by matrices of coefficients: each
    /// block of generators with matrix positions spans `V* ⊗ V`; generators
    /// without positions are invariant.
    pub fn on_matrix_generators(
        alg: &AlgebraPresentation<F>,
        p: &Params<F>,
    ) -> Result<Self, NcError> {
        let adj = adjoint_rep(p);
        let n = alg.ngens();
        let mut e = Matrix::zeros(n, n);
        let mut f = Matrix::zeros(n, n);
        let mut weights = vec![(0, 0); n];
        let gens = alg.generators();
        let idx = |i: usize, j: usize| (i - 1) * 2 + (j - 1);
        for (g, gen) in gens.iter().enumerate() {
            let Some((i, j)) = gen.legs else { continue };
            if i > 2 || j > 2 {
                return Err(NcError::Presentation(
                    "the quantum group action is implemented for 2x2 generator matrices".into(),
                ));
            }
            weights[g] = adj.weights[idx(i, j)];
            // generators of the same matrix share the name prefix
            let prefix = &gen.name[..gen.name.len() - 2];
            for (h, other) in gens.iter().enumerate() {
                let Some((k, l)) = other.legs else { continue };
                if other.name.len() == gen.name.len() && other.name.starts_with(prefix) {
                    e.set(h, g, adj.e.get(idx(k, l), idx(i, j)).clone());
                    f.set(h, g, adj.f.get(idx(k, l), idx(i, j)).clone());
                }
            }
        }
        Ok(Self::new(UqRep { e, f, weights }, p.clone()))
    }

    fn k_word(&self, w: &[u8], inverse: bool) -> F {
        let mut c = F::one();
        for &g in w {
            let k = &self.k_scalar[g as usize];
            c = c.mul(&if inverse {
                k.inv().expect("q is nonzero")
            } else {
                k.clone()
            });
        }
        c
    }

    /// `x ▷ p` in the free algebra.
    pub fn act(&self, x: Chevalley, p: &NCPoly<F>) -> NCPoly<F> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            match x {
                Chevalley::K | Chevalley::KInv => {
                    out.add_term(w.clone(), &c.mul(&self.k_word(w, x == Chevalley::KInv)));
                }
                Chevalley::E => {
                    for i in 0..w.len() {
                        let s = c.mul(&self.k_word(&w[i + 1..], false));
                        for (v, d) in self.e_img[w[i] as usize].terms() {
                            let mut word = w[..i].to_vec();
                            word.extend_from_slice(v);
                            word.extend_from_slice(&w[i + 1..]);
                            out.add_term(word, &s.mul(d));
                        }
                    }
                }
                Chevalley::F => {
                    for i in 0..w.len() {
                        let s = c.mul(&self.k_word(&w[..i], true));
                        for (v, d) in self.f_img[w[i] as usize].terms() {
                            let mut word = w[..i].to_vec();
                            word.extend_from_slice(v);
                            word.extend_from_slice(&w[i + 1..]);
                            out.add_term(word, &s.mul(d));
                        }
                    }
                }
            }
        }
        out
    }

    /// `(K - 1) ▷ p`.
    pub fn act_k_minus_one(&self, p: &NCPoly<F>) -> NCPoly<F> {
        self.act(Chevalley::K, p).sub(p)
    }

    /// Check that the relations of `alg` span a stable subspace: `E`, `F`
    /// applied to each relation reduce to zero, and each relation is a
    /// weight vector.
    pub fn check_equivariance(&self, alg: &AlgebraPresentation<F>) -> Result<CheckReport, NcError> {
        let mut rep = CheckReport::new("equivariance");
        for (i, r) in alg.relations().iter().enumerate() {
            for x in [Chevalley::E, Chevalley::F] {
                let img = alg.normal_form(&self.act(x, r))?;
                if !img.is_zero() {
                    rep.residual(
                        format!("{x:?} on relation {i}: {}", alg.render(r)),
                        alg.render(&img),
                    );
                }
            }
            let ws: std::collections::BTreeSet<(i32, i32)> = r
                .terms()
                .keys()
                .map(|w| {
                    w.iter().fold((0, 0), |(a, b), &g| {
                        (
                            a + self.gens.weights[g as usize].0,
                            b + self.gens.weights[g as usize].1,
                        )
                    })
                })
                .collect();
            if ws.len() > 1 {
                rep.residual(
                    format!("relation {i} is not a weight vector"),
                    alg.render(r),
                );
            }
        }
        rep.detail("relations", alg.relations().len());
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;
    use crate::tensorcalc::braiding;

    fn p() -> Params<Rat> {
        Params::at_i64((3, 5), (7, 2))
    }

    #[test]
    fn representations_satisfy_relations() {
        let p = p();
        let v = UqRep::<Rat>::vector();
        for r in [
            v.clone(),
            v.dual(&p),
            v.tensor(&v, &p),
            adjoint_rep(&p),
            adjoint_rep(&p).tensor(&v.dual(&p), &p),
        ] {
            assert!(r.check(&p).passed(), "{}", r.check(&p));
        }
    }

    #[test]
    fn braiding_on_vv_is_standard() {
        let p = p();
        let v = UqRep::<Rat>::vector();
        let s = braiding_of(&v, &v, &p);
        assert_eq!(&s, braiding(2, &p).unwrap().matrix());
    }

    #[test]
    fn braiding_is_equivariant() {
        let p = p();
        let v = UqRep::<Rat>::vector();
        let reps = [v.clone(), v.dual(&p), adjoint_rep(&p), v.tensor(&v, &p)];
        for x in &reps {
            for y in &reps {
                let s = braiding_of(x, y, &p);
                assert!(is_intertwiner(&s, &x.tensor(y, &p), &y.tensor(x, &p), &p));
            }
        }
    }

    #[test]
    fn presentations_are_equivariant() {
        let p = p();
        let o = crate::charvar::rea(2, &p, 3).unwrap();
        let act = AdjointAction::on_matrix_generators(&o, &p).unwrap();
        assert!(act.check_equivariance(&o).unwrap().passed());
        let d = crate::charvar::dq(2, &p, 3).unwrap();
        let act = AdjointAction::on_matrix_generators(&d, &p).unwrap();
        let rep = act.check_equivariance(&d).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn evaluation_is_equivariant() {
        // ev: V* ⊗ V → 1, f_i ⊗ e_j ↦ δ_ij
        let p = p();
        let v = UqRep::<Rat>::vector();
        let ev = Matrix::from_fn(1, 4, |_, j| {
            if j == 0 || j == 3 {
                <Rat as Field>::one()
            } else {
                <Rat as Field>::zero()
            }
        });
        assert!(is_intertwiner(
            &ev,
            &v.dual(&p).tensor(&v, &p),
            &UqRep::trivial(1),
            &p
        ));
    }
}
