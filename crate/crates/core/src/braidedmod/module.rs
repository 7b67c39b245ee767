use super::BraidedError;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::ncalg::{AlgebraPresentation, NCPoly};
use crate::report::CheckReport;

/// A finite-dimensional module over an algebra generated by an `N × N`
/// matrix of generators: one matrix per generator, in row-major order of
/// matrix positions (`a11, a12, ...`).
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleRep<F: Field> {
    n: usize,
    dim: usize,
    images: Vec<Matrix<F>>,
}

impl<F: Field> ModuleRep<F> {
    pub fn new(n: usize, dim: usize, images: Vec<Matrix<F>>) -> Result<Self, BraidedError> {
        if images.len() != n * n {
            return Err(BraidedError::Dimension(format!(
                "{} images for {} generators",
                images.len(),
                n * n
            )));
        }
        if images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(BraidedError::Dimension(format!(
                "images must be {dim}x{dim}"
            )));
        }
        Ok(Self { n, dim, images })
    }

    /// The one-dimensional module `a_ij ↦ δ_ij`.
    pub fn counit(n: usize) -> Self {
        let images = (0..n * n)
            .map(|g| {
                Matrix::from_fn(
                    1,
                    1,
                    |_, _| if g / n == g % n { F::one() } else { F::zero() },
                )
            })
            .collect();
        Self { n, dim: 1, images }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// `ρ(a_{i+1, j+1})`.
    pub fn generator(&self, i: usize, j: usize) -> &Matrix<F> {
        &self.images[i * self.n + j]
    }

    pub fn images(&self) -> &[Matrix<F>] {
        &self.images
    }

    /// Conjugate by `g`: `ρ'(x) = g ρ(x) g^-1`.
    pub fn conjugate(&self, g: &Matrix<F>) -> Result<Self, BraidedError> {
        let gi = g
            .inverse()
            .ok_or_else(|| BraidedError::Singular("conjugating matrix".into()))?;
        Ok(Self {
            n: self.n,
            dim: self.dim,
            images: self.images.iter().map(|x| g.mul(x).mul(&gi)).collect(),
        })
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self, BraidedError> {
        if self.n != o.n {
            return Err(BraidedError::Dimension(
                "modules over different ranks".into(),
            ));
        }
        let d = self.dim + o.dim;
        let images = self
            .images
            .iter()
            .zip(&o.images)
            .map(|(a, b)| {
                Matrix::from_fn(d, d, |i, j| match (i < self.dim, j < self.dim) {
                    (true, true) => a.get(i, j).clone(),
                    (false, false) => b.get(i - self.dim, j - self.dim).clone(),
                    _ => F::zero(),
                })
            })
            .collect();
        Ok(Self {
            n: self.n,
            dim: d,
            images,
        })
    }

    /// Image of a polynomial whose generator indices are the row-major
    /// matrix positions.
    pub fn eval(&self, p: &NCPoly<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (w, c) in p.terms() {
            let mut acc = Matrix::identity(self.dim).scale(c);
            for &g in w {
                acc = acc.mul(&self.images[g as usize]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Evaluate every defining relation of `alg`, whose generators must be
    /// one `N × N` matrix in row-major order.
    pub fn check(&self, alg: &AlgebraPresentation<F>) -> Result<CheckReport, BraidedError> {
        let mut rep = CheckReport::new("module_relations");
        rep.config("n", self.n).config("dim", self.dim);
        let gens = alg.generators();
        let row_major = gens.len() == self.n * self.n
            && gens
                .iter()
                .enumerate()
                .all(|(g, x)| x.legs == Some((g / self.n + 1, g % self.n + 1)));
        if !row_major {
            return Err(BraidedError::Dimension(
                "algebra generators are not an N x N matrix in row-major order".into(),
            ));
        }
        for (i, r) in alg.relations().iter().enumerate() {
            for (a, b, v) in self.eval(r).nonzero_entries() {
                rep.residual(
                    format!("relation {i} ({}) at ({a},{b})", alg.render(r)),
                    v.render(),
                );
            }
        }
        rep.detail("relations", alg.relations().len());
        Ok(rep)
    }
}
