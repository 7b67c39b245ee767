use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::field::Field;

/// A word in generator indices.
pub type Word = Vec<u8>;

/// Weighted degree of a word.
pub fn word_degree(w: &[u8], degrees: &[u32]) -> u32 {
    w.iter().map(|&g| degrees[g as usize]).sum()
}

/// Degree-lexicographic order: weighted degree first, then lexicographic
/// on generator indices.
pub fn cmp_words(a: &[u8], b: &[u8], degrees: &[u32]) -> Ordering {
    word_degree(a, degrees)
        .cmp(&word_degree(b, degrees))
        .then_with(|| a.cmp(b))
}

/// Position of the first occurrence of `pat` in `w`.
pub fn find_subword(w: &[u8], pat: &[u8]) -> Option<usize> {
    if pat.len() > w.len() {
        return None;
    }
    (0..=w.len() - pat.len()).find(|&i| &w[i..i + pat.len()] == pat)
}

/// Noncommutative polynomial: a finite map from words to nonzero
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NCPoly<F: Field> {
    terms: BTreeMap<Word, F>,
}

impl<F: Field> Default for NCPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> NCPoly<F> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(Word::new(), c)
    }

    pub fn gen(i: u8) -> Self {
        Self::term(vec![i], F::one())
    }

    pub fn term(w: Word, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, F::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Word, F)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, &c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Word, F> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, F> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    /// The constant term if the polynomial is a scalar.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&Word::new()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e = e.add(c);
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    /// Overwrite one coefficient.
    pub fn set_coeff(&mut self, w: Word, c: F) {
        if c.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
    }

    /// `self += c * o`.
    pub fn add_scaled(&mut self, c: &F, o: &Self) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &o.terms {
            self.add_term(w.clone(), &c.mul(x));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(&F::one(), o);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(&F::one().neg(), o);
        r
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x.mul(c)))
                .collect(),
        }
    }

    /// Free-algebra product (concatenation).
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                r.add_term(w, &x.mul(y));
            }
        }
        r
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> NCPoly<G> {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<NCPoly<G>, E> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c)?);
        }
        Ok(out)
    }

    /// Substitute polynomials for generators.
    pub fn substitute(&self, images: &[NCPoly<F>]) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for &g in w {
                t = t.mul(&images[g as usize]);
            }
            r.add_scaled(&F::one(), &t);
        }
        r
    }

    /// Largest weighted degree of a term; `None` for zero.
    pub fn degree(&self, degrees: &[u32]) -> Option<u32> {
        self.terms.keys().map(|w| word_degree(w, degrees)).max()
    }

    pub fn is_homogeneous(&self, degrees: &[u32]) -> bool {
        let mut it = self.terms.keys().map(|w| word_degree(w, degrees));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Component of weighted degree `d`.
    pub fn homogeneous_part(&self, d: u32, degrees: &[u32]) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| word_degree(w, degrees) == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest word in the degree-lexicographic order.
    pub fn leading(&self, degrees: &[u32]) -> Option<(&Word, &F)> {
        self.terms
            .iter()
            .max_by(|a, b| cmp_words(a.0, b.0, degrees))
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self, degrees: &[u32]) -> Self {
        match self.leading(degrees) {
            None => Self::zero(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Render with generator names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        // highest terms first reads more naturally
        for (w, c) in self.terms.iter().rev() {
            let coeff = c.render();
            let simple = coeff.chars().all(|ch| ch.is_ascii_digit());
            let mut factors = Vec::new();
            if w.is_empty() || !c.is_one() {
                factors.push(if simple { coeff } else { format!("({coeff})") });
            }
            factors.extend(w.iter().map(|&g| names[g as usize].clone()));
            parts.push(factors.join(" * "));
        }
        parts.join(" + ")
    }
}

/// Square matrices with polynomial entries, used to expand matrix-form
/// relation schemas.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<F: Field> {
    pub n: usize,
    pub entries: Vec<NCPoly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![NCPoly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = NCPoly::one();
        }
        m
    }

    pub fn from_scalars(m: &crate::linalg::Matrix<F>) -> Self {
        assert!(m.is_square());
        Self {
            n: m.rows(),
            entries: m
                .entries()
                .iter()
                .map(|c| NCPoly::constant(c.clone()))
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPoly<F> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: NCPoly<F>) {
        self.entries[i * self.n + j] = p;
    }

    /// Product; entries are multiplied in the order written.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut r = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &o.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.mul(b);
                    r.entries[i * n + j].add_scaled(&F::one(), &p);
                }
            }
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// `X ⊗ 1` on `V ⊗ V`.
    pub fn leg1(&self) -> Self {
        let n = self.n;
        let mut r = Self::zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    r.set(i * n + k, j * n + k, self.get(i, j).clone());
                }
            }
        }
        r
    }

    /// `1 ⊗ X` on `V ⊗ V`.
    pub fn leg2(&self) -> Self {
        let n = self.n;
        let mut r = Self::zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    r.set(k * n + i, k * n + j, self.get(i, j).clone());
                }
            }
        }
        r
    }

    pub fn map_entries(&self, f: impl Fn(&NCPoly<F>) -> NCPoly<F>) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    #[test]
    fn order_is_degree_first() {
        let d = [1, 1, 2];
        assert_eq!(cmp_words(&[2], &[1, 1], &d), Ordering::Greater);
        assert_eq!(cmp_words(&[0, 1], &[1, 0], &d), Ordering::Less);
        assert_eq!(cmp_words(&[1], &[0, 0], &d), Ordering::Less);
    }

    #[test]
    fn products_and_cancellation() {
        let a = NCPoly::<Rat>::gen(0);
        let b = NCPoly::<Rat>::gen(1);
        let c = a.mul(&b).sub(&b.mul(&a));
        assert_eq!(c.len(), 2);
        assert!(c.add(&b.mul(&a)).sub(&a.mul(&b)).is_zero());
        assert_eq!(find_subword(&[0, 1, 2, 1], &[2, 1]), Some(2));
    }
}
