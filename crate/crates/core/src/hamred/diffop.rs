use std::collections::{BTreeMap, BTreeSet};

use crate::field::Field;

/// A Laurent polynomial in `x_1..x_N`, keyed by exponent vectors.
pub type LaurentVec<F> = BTreeMap<Vec<i32>, F>;

/// `Σ c · x^a T^b` with `T_i x_j = q^{δ_ij} x_j T_i`, written with all
/// multiplications to the left of all shifts.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceOperator<F: Field> {
    pub n: usize,
    pub q: F,
    terms: BTreeMap<(Vec<i32>, Vec<i32>), F>,
}

fn dot(a: &[i32], b: &[i32]) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn add_vec(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<F: Field> DifferenceOperator<F> {
    pub fn zero(n: usize, q: F) -> Self {
        Self {
            n,
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, q: F) -> Self {
        Self::monomial(n, q, vec![0; n], vec![0; n], F::one())
    }

    pub fn monomial(n: usize, q: F, x: Vec<i32>, t: Vec<i32>, c: F) -> Self {
        let mut s = Self::zero(n, q);
        s.add_term(x, t, c);
        s
    }

    /// Multiplication by `x_i`.
    pub fn x(n: usize, q: F, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(n, q, e, vec![0; n], F::one())
    }

    /// The shift `T_i: x_i ↦ q x_i`.
    pub fn shift(n: usize, q: F, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(n, q, vec![0; n], e, F::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Vec<i32>, &F)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, x: Vec<i32>, t: Vec<i32>, c: F) {
        let key = (x, t);
        let v = self.terms.get(&key).map_or(c.clone(), |e| e.add(&c));
        if v.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for ((a, b), c) in &o.terms {
            s.add_term(a.clone(), b.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut s = Self::zero(self.n, self.q.clone());
        for ((a, b), x) in &self.terms {
            s.add_term(a.clone(), b.clone(), x.mul(c));
        }
        s
    }

    fn qpow(&self, k: i32) -> F {
        self.q.powi(k).expect("q is nonzero")
    }

    /// Composition `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut s = Self::zero(self.n, self.q.clone());
        for ((a, b), c) in &self.terms {
            for ((x, t), d) in &o.terms {
                s.add_term(
                    add_vec(a, x),
                    add_vec(b, t),
                    c.mul(d).mul(&self.qpow(dot(b, x))),
                );
            }
        }
        s
    }

    pub fn apply(&self, f: &LaurentVec<F>) -> LaurentVec<F> {
        let mut out = LaurentVec::new();
        for ((a, b), c) in &self.terms {
            for (e, v) in f {
                let k = add_vec(a, e);
                let x = c.mul(v).mul(&self.qpow(dot(b, e)));
                let y = out.get(&k).map_or(x.clone(), |z: &F| z.add(&x));
                if y.is_zero() {
                    out.remove(&k);
                } else {
                    out.insert(k, y);
                }
            }
        }
        out
    }

    /// Conjugate by a permutation of the variables: `x_i ↦ x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mv = |v: &[i32]| {
            let mut w = vec![0; v.len()];
            for (i, &e) in v.iter().enumerate() {
                w[perm[i]] = e;
            }
            w
        };
        let mut s = Self::zero(self.n, self.q.clone());
        for ((a, b), c) in &self.terms {
            s.add_term(mv(a), mv(b), c.clone());
        }
        s
    }

    /// Total degree of the highest term, with `x_i` and `T_i` of degree 1.
    pub fn degree(&self) -> Option<i32> {
        self.terms
            .keys()
            .map(|(a, b)| a.iter().chain(b).sum())
            .max()
    }
}

/// Basis and dimensions of `S_2`-invariant q-difference operators with
/// polynomial coefficients and nonnegative shifts, graded by
/// `|a| + |b|` for `x^a T^b`.
#[derive(Clone, Debug)]
pub struct DqhWOracle<F: Field> {
    pub dims: Vec<usize>,
    /// Orbit sums of `x^a T^b`, one list per degree.
    pub basis: Vec<Vec<DifferenceOperator<F>>>,
}

/// Enumerate orbit sums `x^a T^b + x^{σa} T^{σb}` of degree at most `d`.
pub fn dqh_w_oracle<F: Field>(q: F, d: u32) -> DqhWOracle<F> {
    let mut basis = Vec::new();
    for k in 0..=d as i32 {
        let mut seen = BTreeSet::new();
        let mut level = Vec::new();
        for a1 in 0..=k {
            for a2 in 0..=k - a1 {
                for b1 in 0..=k - a1 - a2 {
                    let b2 = k - a1 - a2 - b1;
                    let m = (vec![a1, a2], vec![b1, b2]);
                    let sw = (vec![a2, a1], vec![b2, b1]);
                    if seen.contains(&m) {
                        continue;
                    }
                    seen.insert(m.clone());
                    seen.insert(sw.clone());
                    let mut op = DifferenceOperator::monomial(
                        2,
                        q.clone(),
                        m.0.clone(),
                        m.1.clone(),
                        F::one(),
                    );
                    if sw != m {
                        op = op.add(&DifferenceOperator::monomial(
                            2,
                            q.clone(),
                            sw.0,
                            sw.1,
                            F::one(),
                        ));
                    }
                    level.push(op);
                }
            }
        }
        basis.push(level);
    }
    DqhWOracle {
        dims: basis.iter().map(|l| l.len()).collect(),
        basis,
    }
}
