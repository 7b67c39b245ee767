use std::sync::Arc;

use serde::Serialize;

use super::poly::{NCPoly, PolyMatrix, Word};
use super::rewrite::RewriteSystem;
use super::NcError;
use crate::field::{Embed, Field};
use crate::report::CheckReport;
use crate::scalars::RationalScalar;

pub const MAX_GENERATORS: usize = 255;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Matrix position `(i, j)`, 1-based, for generators arranged as a matrix.
    pub legs: Option<(usize, usize)>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            legs: None,
        }
    }

    pub fn matrix(name: impl Into<String>, degree: u32, i: usize, j: usize) -> Self {
        Self {
            name: name.into(),
            degree,
            legs: Some((i, j)),
        }
    }
}

pub(crate) fn valid_name(s: &str) -> bool {
    let mut it = s.chars();
    matches!(it.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        && s != "q"
        && s != "t"
}

/// A finitely presented algebra together with its completed rewriting
/// system. Immutable once built.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation<F: Field> {
    generators: Vec<Generator>,
    relations: Vec<NCPoly<F>>,
    system: Arc<RewriteSystem<F>>,
}

impl<F: Field> AlgebraPresentation<F> {
    /// Validate and complete up to weighted degree `bound`.
    pub fn new(
        generators: Vec<Generator>,
        relations: Vec<NCPoly<F>>,
        bound: u32,
    ) -> Result<Self, NcError> {
        if generators.len() > MAX_GENERATORS {
            return Err(NcError::Presentation(format!(
                "at most {MAX_GENERATORS} generators are supported"
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(NcError::Presentation(format!(
                    "invalid generator name {:?}",
                    g.name
                )));
            }
            if g.degree == 0 {
                return Err(NcError::Presentation(format!(
                    "generator {} has degree 0",
                    g.name
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(NcError::Presentation(format!(
                    "duplicate generator {}",
                    g.name
                )));
            }
        }
        let n = generators.len();
        for r in &relations {
            if r.terms().keys().flatten().any(|&x| x as usize >= n) {
                return Err(NcError::Presentation(
                    "relation uses an unknown generator".into(),
                ));
            }
        }
        let degrees: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let system = RewriteSystem::complete(&degrees, &relations, bound)?;
        Ok(Self {
            generators,
            relations,
            system: Arc::new(system),
        })
    }

    /// Free algebra on the given generators.
    pub fn free(generators: Vec<Generator>, bound: u32) -> Result<Self, NcError> {
        Self::new(generators, Vec::new(), bound)
    }

    /// Commutative polynomial ring on `k` degree-one generators `x1..xk`.
    pub fn polynomial_ring(k: usize, bound: u32) -> Result<Self, NcError> {
        let gens = (1..=k)
            .map(|i| Generator::new(format!("x{i}"), 1))
            .collect();
        let mut rels = Vec::new();
        for i in 0..k as u8 {
            for j in i + 1..k as u8 {
                rels.push(NCPoly::word(vec![j, i]).sub(&NCPoly::word(vec![i, j])));
            }
        }
        Self::new(gens, rels, bound)
    }

    /// The ground field: no generators.
    pub fn ground(bound: u32) -> Self {
        Self::new(Vec::new(), Vec::new(), bound).expect("empty presentation")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[NCPoly<F>] {
        &self.relations
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn index(&self, name: &str) -> Option<u8> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u8)
    }

    pub fn gen(&self, name: &str) -> NCPoly<F> {
        NCPoly::gen(
            self.index(name)
                .unwrap_or_else(|| panic!("no generator {name}")),
        )
    }

    pub fn system(&self) -> &RewriteSystem<F> {
        &self.system
    }

    pub fn bound(&self) -> u32 {
        self.system.bound()
    }

    pub fn is_complete(&self) -> bool {
        self.system.is_complete()
    }

    /// Rebuild with a different truncation bound.
    pub fn with_bound(&self, bound: u32) -> Result<Self, NcError> {
        Self::new(self.generators.clone(), self.relations.clone(), bound)
    }

    pub fn normal_form(&self, p: &NCPoly<F>) -> Result<NCPoly<F>, NcError> {
        self.system.normal_form(p)
    }

    /// Product of normal forms, returned in normal form.
    pub fn mul(&self, a: &NCPoly<F>, b: &NCPoly<F>) -> Result<NCPoly<F>, NcError> {
        self.system.mul_normal(a, b)
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.system.is_normal(w)
    }

    pub fn normal_words(&self, d: u32) -> Result<Vec<Word>, NcError> {
        self.system.normal_words(d)
    }

    pub fn graded_dimension(&self, d: u32) -> Result<usize, NcError> {
        self.system.graded_dimension(d)
    }

    /// Dimensions of degrees `0..=d`.
    pub fn graded_dims(&self, d: u32) -> Result<Vec<usize>, NcError> {
        (0..=d).map(|e| self.graded_dimension(e)).collect()
    }

    /// The matrix of generators with the given indices, placed by their legs.
    pub fn generator_matrix(&self, gens: &[u8]) -> Result<PolyMatrix<F>, NcError> {
        let n = (gens.len() as f64).sqrt().round() as usize;
        if n * n != gens.len() || n == 0 {
            return Err(NcError::Presentation(
                "matrix factor needs a square number of generators".into(),
            ));
        }
        let mut m = PolyMatrix::zeros(n);
        let mut seen = vec![false; n * n];
        for &g in gens {
            let gen = self
                .generators
                .get(g as usize)
                .ok_or_else(|| NcError::Presentation("bad generator index".into()))?;
            let (i, j) = gen.legs.ok_or_else(|| {
                NcError::Presentation(format!("generator {} has no matrix position", gen.name))
            })?;
            if i == 0 || j == 0 || i > n || j > n || seen[(i - 1) * n + j - 1] {
                return Err(NcError::Presentation(format!(
                    "generator {} has a bad matrix position",
                    gen.name
                )));
            }
            seen[(i - 1) * n + j - 1] = true;
            m.set(i - 1, j - 1, NCPoly::gen(g));
        }
        Ok(m)
    }

    /// Matrix of all generators, when the whole algebra is one matrix factor.
    pub fn matrix(&self) -> Result<PolyMatrix<F>, NcError> {
        let all: Vec<u8> = (0..self.ngens() as u8).collect();
        self.generator_matrix(&all)
    }

    pub fn render(&self, p: &NCPoly<F>) -> String {
        p.render(&self.names())
    }

    /// Map coefficients into another field and complete again.
    pub fn embed<G: Field>(
        &self,
        f: impl Fn(&F) -> Result<G, crate::scalars::ScalarError>,
    ) -> Result<AlgebraPresentation<G>, NcError> {
        let rels = self
            .relations
            .iter()
            .map(|r| r.try_map(&f))
            .collect::<Result<Vec<_>, _>>()?;
        AlgebraPresentation::new(self.generators.clone(), rels, self.bound())
    }

    /// Append relations (a quotient by the two-sided ideal they generate).
    pub fn quotient(&self, ideal_gens: &[NCPoly<F>]) -> Result<Self, NcError> {
        let mut rels = self.relations.clone();
        rels.extend(ideal_gens.iter().cloned());
        Self::new(self.generators.clone(), rels, self.bound())
    }

    /// Verify that all pairwise generator commutators vanish.
    pub fn commutativity_report(&self) -> Result<CheckReport, NcError> {
        let mut rep = CheckReport::new("commutativity");
        let names = self.names();
        for i in 0..self.ngens() as u8 {
            for j in i + 1..self.ngens() as u8 {
                let c = NCPoly::<F>::word(vec![i, j]).sub(&NCPoly::word(vec![j, i]));
                let r = self.normal_form(&c)?;
                if !r.is_zero() {
                    rep.residual(
                        format!("[{}, {}]", names[i as usize], names[j as usize]),
                        self.render(&r),
                    );
                }
            }
        }
        Ok(rep)
    }
}

impl AlgebraPresentation<RationalScalar> {
    /// Specialize symbolic coefficients through `p` (for example at a
    /// rational point).
    pub fn specialize<G: Field>(
        &self,
        p: &impl Embed<G>,
    ) -> Result<AlgebraPresentation<G>, NcError> {
        self.embed(|c| p.embed(c))
    }
}
