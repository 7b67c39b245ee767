use std::sync::Arc;

use super::poly::NCPoly;
use super::presentation::AlgebraPresentation;
use super::NcError;
use crate::field::Field;
use crate::report::CheckReport;

/// Longest rendered residual kept in a report.
const MAX_RENDER: usize = 400;

fn clip(s: String) -> String {
    if s.len() <= MAX_RENDER {
        return s;
    }
    let mut cut = MAX_RENDER;
    while !s.is_char_boundary(cut) {
        cut -= 1;
    }
    format!("{} ...", &s[..cut])
}

/// An assignment of target polynomials to source generators.
///
/// With a `denominator` `c` the map sends a generator `x` to
/// `images[x] * c^-1`, read in the localization at `c`. This requires `c` to
/// commute with every image, which is checked. A relation of degree `k` is
/// then checked after clearing denominators: a term of length `j`
/// contributes its image product times `c^(k-j)`.
#[derive(Clone, Debug)]
pub struct GeneratorMap<F: Field> {
    pub source: Arc<AlgebraPresentation<F>>,
    pub target: Arc<AlgebraPresentation<F>>,
    pub images: Vec<NCPoly<F>>,
    pub denominator: Option<NCPoly<F>>,
}

impl<F: Field> GeneratorMap<F> {
    pub fn new(
        source: Arc<AlgebraPresentation<F>>,
        target: Arc<AlgebraPresentation<F>>,
        images: Vec<NCPoly<F>>,
    ) -> Result<Self, NcError> {
        if images.len() != source.ngens() {
            return Err(NcError::Presentation(format!(
                "{} images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        let nt = target.ngens();
        if images
            .iter()
            .any(|p| p.terms().keys().flatten().any(|&g| g as usize >= nt))
        {
            return Err(NcError::Presentation(
                "image uses an unknown target generator".into(),
            ));
        }
        Ok(Self {
            source,
            target,
            images,
            denominator: None,
        })
    }

    pub fn with_denominator(mut self, c: NCPoly<F>) -> Self {
        self.denominator = Some(c);
        self
    }

    /// Identity on a presentation.
    pub fn identity(a: Arc<AlgebraPresentation<F>>) -> Self {
        let images = (0..a.ngens() as u8).map(NCPoly::gen).collect();
        Self {
            source: a.clone(),
            target: a,
            images,
            denominator: None,
        }
    }

    /// The map sending every generator to the same-named generator of
    /// `target` (for quotient maps).
    pub fn by_name(
        source: Arc<AlgebraPresentation<F>>,
        target: Arc<AlgebraPresentation<F>>,
    ) -> Result<Self, NcError> {
        let images = source
            .generators()
            .iter()
            .map(|g| {
                target
                    .index(&g.name)
                    .map(NCPoly::gen)
                    .ok_or_else(|| NcError::Presentation(format!("target lacks {}", g.name)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, images)
    }

    fn normal_images(&self) -> Result<Vec<NCPoly<F>>, NcError> {
        self.images
            .iter()
            .map(|p| self.target.normal_form(p))
            .collect()
    }

    /// Image of a polynomial, in normal form, with denominators cleared to
    /// degree `k` (`k` is ignored when there is no denominator).
    fn apply_cleared(
        &self,
        p: &NCPoly<F>,
        k: usize,
        imgs: &[NCPoly<F>],
        den_pows: &[NCPoly<F>],
    ) -> Result<NCPoly<F>, NcError> {
        let t = &self.target;
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let mut acc = NCPoly::constant(c.clone());
            for &g in w {
                acc = t.mul(&acc, &imgs[g as usize])?;
            }
            if self.denominator.is_some() {
                let e = k.checked_sub(w.len()).ok_or_else(|| {
                    NcError::Presentation("relation longer than its degree".into())
                })?;
                acc = t.mul(&acc, &den_pows[e])?;
            }
            out.add_scaled(&F::one(), &acc);
        }
        Ok(out)
    }

    /// Image of a polynomial without a denominator.
    pub fn apply(&self, p: &NCPoly<F>) -> Result<NCPoly<F>, NcError> {
        if self.denominator.is_some() {
            return Err(NcError::Presentation(
                "map has a denominator; use apply_cleared".into(),
            ));
        }
        let imgs = self.normal_images()?;
        self.apply_cleared(p, 0, &imgs, &[])
    }

    /// Image of `p` with denominators cleared to degree `k`: a term of
    /// length `j` picks up `c^(k-j)`. Without a denominator this is the
    /// plain image.
    pub fn apply_cleared_to(&self, p: &NCPoly<F>, k: usize) -> Result<NCPoly<F>, NcError> {
        let imgs = self.normal_images()?;
        let mut den_pows = vec![NCPoly::one()];
        if let Some(c) = &self.denominator {
            let c = self.target.normal_form(c)?;
            for _ in 0..k {
                let last = den_pows.last().expect("nonempty").clone();
                den_pows.push(self.target.mul(&last, &c)?);
            }
        }
        self.apply_cleared(p, k, &imgs, &den_pows)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &GeneratorMap<F>) -> Result<GeneratorMap<F>, NcError> {
        if self.denominator.is_some() || g.denominator.is_some() {
            return Err(NcError::Presentation(
                "composition of maps with denominators is not supported".into(),
            ));
        }
        let images = g
            .images
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<Vec<_>, _>>()?;
        GeneratorMap::new(g.source.clone(), self.target.clone(), images)
    }

    /// Check that every source relation of degree at most `bound` maps to
    /// zero in the target.
    pub fn verify(&self, bound: u32) -> Result<CheckReport, NcError> {
        let mut rep = CheckReport::new("homomorphism");
        rep.config("bound", bound);
        let src_deg = self.source.degrees();
        let imgs = self.normal_images()?;
        let mut den_pows = vec![NCPoly::one()];
        if let Some(c) = &self.denominator {
            let c = self.target.normal_form(c)?;
            if c.is_zero() {
                rep.residual("denominator", "zero");
                return Ok(rep);
            }
            let names = self.source.names();
            for (g, x) in imgs.iter().enumerate() {
                let comm = self.target.mul(&c, x)?.sub(&self.target.mul(x, &c)?);
                if !comm.is_zero() {
                    rep.residual(
                        format!("denominator commutator with the image of {}", names[g]),
                        clip(self.target.render(&comm)),
                    );
                }
            }
            let kmax = self
                .source
                .relations()
                .iter()
                .filter_map(|r| r.terms().keys().map(|w| w.len()).max())
                .max()
                .unwrap_or(0);
            for _ in 0..kmax {
                let last = den_pows.last().expect("nonempty").clone();
                den_pows.push(self.target.mul(&last, &c)?);
            }
        }
        let mut checked = 0usize;
        for (i, r) in self.source.relations().iter().enumerate() {
            match r.degree(&src_deg) {
                Some(d) if d <= bound => {}
                _ => continue,
            }
            let k = r.terms().keys().map(|w| w.len()).max().unwrap_or(0);
            let img = self.apply_cleared(r, k, &imgs, &den_pows)?;
            checked += 1;
            if !img.is_zero() {
                rep.residual(
                    format!("relation {i}: {}", clip(self.source.render(r))),
                    clip(self.target.render(&img)),
                );
            }
        }
        rep.detail("relations_checked", checked);
        Ok(rep)
    }
}
