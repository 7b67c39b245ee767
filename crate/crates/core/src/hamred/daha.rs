use std::collections::BTreeMap;

use crate::field::{Field, Params};
use crate::linalg::{Echelon, SparseVec};
use crate::report::CheckReport;

/// A polynomial in `x_1, x_2`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BiPoly<F: Field> {
    terms: BTreeMap<(u32, u32), F>,
}

impl<F: Field> BiPoly<F> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, F::one())
    }

    pub fn monomial(a: u32, b: u32, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    /// The monomial symmetric polynomial `m_{(a, b)}`, `a >= b`.
    pub fn monomial_symmetric(a: u32, b: u32) -> Self {
        let mut p = Self::monomial(a, b, F::one());
        if a != b {
            p.add_term(b, a, F::one());
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> F {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    fn add_term(&mut self, a: u32, b: u32, c: F) {
        let v = self.terms.get(&(a, b)).map_or(c.clone(), |x| x.add(&c));
        if v.is_zero() {
            self.terms.remove(&(a, b));
        } else {
            self.terms.insert((a, b), v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&(a, b), c) in &o.terms {
            p.add_term(a, b, c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut p = Self::zero();
        for (&(a, b), x) in &self.terms {
            p.add_term(a, b, x.mul(c));
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &o.terms {
                p.add_term(a + c, b + d, x.mul(y));
            }
        }
        p
    }

    /// `f(λ x_1, μ x_2)`.
    pub fn rescale(&self, l: &F, m: &F) -> Self {
        let mut p = Self::zero();
        for (&(a, b), x) in &self.terms {
            let c = x
                .mul(&l.powi(a as i32).expect("finite"))
                .mul(&m.powi(b as i32).expect("finite"));
            p.add_term(a, b, c);
        }
        p
    }

    pub fn swap(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.clone()))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap()
    }

    /// Exact quotient by `x_1 - x_2`, or `None` if it does not divide.
    pub fn div_by_difference(&self) -> Option<Self> {
        let mut out = Self::zero();
        let mut by_degree: BTreeMap<u32, Vec<(u32, F)>> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            by_degree.entry(a + b).or_default().push((a, c.clone()));
        }
        for (n, cs) in by_degree {
            let coeff = |a: u32| {
                cs.iter()
                    .find(|(e, _)| *e == a)
                    .map_or(F::zero(), |(_, c)| c.clone())
            };
            // coefficient of x1^a x2^(n-a) in (x1 - x2) Q is d_{a-1} - d_a
            let mut prev = F::zero();
            for a in 0..n {
                let d = prev.sub(&coeff(a));
                out.add_term(a, n - 1 - a, d.clone());
                prev = d;
            }
            if prev != coeff(n) {
                return None;
            }
        }
        Some(out)
    }
}

/// `D f = [(t x_1 - x_2) f(q x_1, x_2) - (t x_2 - x_1) f(x_1, q x_2)] / (x_1 - x_2)`.
pub fn macdonald_operator<F: Field>(f: &BiPoly<F>, p: &Params<F>) -> Option<BiPoly<F>> {
    let one = F::one();
    let tx1_x2 = BiPoly::monomial(1, 0, p.t.clone()).add(&BiPoly::monomial(0, 1, one.neg()));
    let tx2_x1 = BiPoly::monomial(0, 1, p.t.clone()).add(&BiPoly::monomial(1, 0, one.neg()));
    let num = tx1_x2
        .mul(&f.rescale(&p.q, &one))
        .sub(&tx2_x1.mul(&f.rescale(&one, &p.q)));
    num.div_by_difference()
}

/// Generators of the polynomial fragment of the spherical DAHA, with their
/// bidegrees `(x-degree, shift-degree)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DahaGen {
    /// Multiplication by `x_1 + x_2`.
    E1,
    /// Multiplication by `x_1 x_2`.
    E2,
    /// The Macdonald operator.
    D1,
    /// `T_1 T_2`.
    D2,
}

impl DahaGen {
    pub const ALL: [DahaGen; 4] = [DahaGen::E1, DahaGen::E2, DahaGen::D1, DahaGen::D2];

    pub fn bidegree(self) -> (u32, u32) {
        match self {
            DahaGen::E1 => (1, 0),
            DahaGen::E2 => (2, 0),
            DahaGen::D1 => (0, 1),
            DahaGen::D2 => (0, 2),
        }
    }

    pub fn apply<F: Field>(self, f: &BiPoly<F>, p: &Params<F>) -> BiPoly<F> {
        match self {
            DahaGen::E1 => f.mul(&BiPoly::monomial_symmetric(1, 0)),
            DahaGen::E2 => f.mul(&BiPoly::monomial(1, 1, F::one())),
            DahaGen::D1 => macdonald_operator(f, p).expect("symmetric input"),
            DahaGen::D2 => f.rescale(&p.q, &p.q),
        }
    }
}

/// An operator, stored as its images of the test basis.
type Op<F> = Vec<BiPoly<F>>;

/// The filtered pieces `F_{a,b}` of the algebra generated by
/// [`DahaGen::ALL`] acting on symmetric polynomials, for `a + b <= d`.
///
/// `F_{a,b}` is spanned by words of x-degree at most `a` and shift-degree
/// at most `b`. Operators are represented by their action on monomial
/// symmetric polynomials of degree at most `d + 2`; the bigraded
/// dimensions are recomputed with one more test degree as a faithfulness
/// check.
#[derive(Clone, Debug)]
pub struct DahaFragment<F: Field> {
    pub degree: u32,
    pub params: Params<F>,
    /// `dim gr_n = Σ_{a+b=n} dim gr_{a,b}`.
    pub dims: Vec<usize>,
    pub bigraded: BTreeMap<(u32, u32), usize>,
    pub report: CheckReport,
    test: Vec<BiPoly<F>>,
    width: usize,
    spans: Spans<F>,
}

/// Spanning operators and their echelon form, per bidegree.
type Spans<F> = BTreeMap<(u32, u32), (Vec<Op<F>>, Echelon<F>)>;

fn test_basis<F: Field>(k: u32) -> Vec<BiPoly<F>> {
    let mut out = Vec::new();
    for n in 0..=k {
        for b in 0..=n / 2 {
            out.push(BiPoly::monomial_symmetric(n - b, b));
        }
    }
    out
}

fn tri(a: u32, b: u32) -> usize {
    let n = (a + b) as usize;
    n * (n + 1) / 2 + b as usize
}

fn lower<F: Field>(spans: &Spans<F>, a: u32, b: u32) -> Vec<Op<F>> {
    let mut ops = Vec::new();
    if a > 0 {
        ops.extend(spans[&(a - 1, b)].0.iter().cloned());
    }
    if b > 0 {
        ops.extend(spans[&(a, b - 1)].0.iter().cloned());
    }
    ops
}

impl<F: Field> DahaFragment<F> {
    fn build(p: &Params<F>, d: u32, k: u32) -> Self {
        let test = test_basis(k);
        let width = tri(0, k + 2 * d) + 1;
        let mut s = Self {
            degree: d,
            params: p.clone(),
            dims: vec![0; d as usize + 1],
            bigraded: BTreeMap::new(),
            report: CheckReport::new("daha_fragment"),
            test,
            width,
            spans: BTreeMap::new(),
        };
        for n in 0..=d {
            for a in 0..=n {
                let b = n - a;
                let mut cands = lower(&s.spans, a, b);
                let low_dim = {
                    let mut e = Echelon::new();
                    for op in &cands {
                        e.insert(s.vectorize(op));
                    }
                    e.rank()
                };
                if n == 0 {
                    cands.push(s.test.clone());
                }
                for g in DahaGen::ALL {
                    let (ga, gb) = g.bidegree();
                    if ga > a || gb > b {
                        continue;
                    }
                    for op in s.spans[&(a - ga, b - gb)].0.clone() {
                        cands.push(op.iter().map(|f| g.apply(f, p)).collect());
                    }
                }
                let mut e = Echelon::new();
                let mut basis = Vec::new();
                for op in cands {
                    if e.insert(s.vectorize(&op)).is_some() {
                        basis.push(op);
                    }
                }
                let gr = e.rank() - low_dim;
                s.bigraded.insert((a, b), gr);
                s.dims[n as usize] += gr;
                s.spans.insert((a, b), (basis, e));
            }
        }
        s
    }

    fn vectorize(&self, op: &Op<F>) -> SparseVec<F> {
        let mut v = SparseVec::new();
        for (i, f) in op.iter().enumerate() {
            for (&(a, b), c) in f.terms() {
                v.insert(i * self.width + tri(a, b), c.clone());
            }
        }
        v
    }

    /// Apply a word, rightmost letter first.
    pub fn word_operator(&self, word: &[DahaGen]) -> Vec<BiPoly<F>> {
        self.test
            .iter()
            .map(|f| {
                word.iter()
                    .rev()
                    .fold(f.clone(), |acc, g| g.apply(&acc, &self.params))
            })
            .collect()
    }

    /// Classes of words of bidegree `(a, b)` in `gr_{a,b}`, as reduced
    /// vectors modulo `F_{a-1,b} + F_{a,b-1}`.
    pub fn word_classes(&self, words: &[Vec<DahaGen>], a: u32, b: u32) -> Vec<SparseVec<F>> {
        let mut low = Echelon::new();
        for op in lower(&self.spans, a, b) {
            low.insert(self.vectorize(&op));
        }
        words
            .iter()
            .map(|w| low.reduce(&self.vectorize(&self.word_operator(w))))
            .collect()
    }
}

/// DAHA parameters matching a reduction computed at `(q, t)`: the shift
/// parameter is `q^2`, and `t` is unchanged.
pub fn matching_daha_params<F: Field>(p: &Params<F>) -> Params<F> {
    Params {
        q: p.q.mul(&p.q),
        t: p.t.clone(),
    }
}

/// The filtered fragment of the spherical DAHA through degree `d`.
pub fn daha_oracle_gl2<F: Field>(p: &Params<F>, d: u32) -> DahaFragment<F> {
    let mut frag = DahaFragment::build(p, d, d + 2);
    let check = DahaFragment::build(p, d, d + 3);
    frag.report.config("degree", d).config("test_degree", d + 2);
    if check.bigraded != frag.bigraded {
        frag.report
            .partial("test basis not faithful: dimensions change with one more test degree");
    }
    frag.report.detail("dims", frag.dims.clone());
    frag
}
