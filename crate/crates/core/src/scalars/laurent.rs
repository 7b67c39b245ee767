use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ScalarError;

/// Exponent pair `(e_q, e_t)`.
pub type Exp = (i32, i32);

/// Largest coefficient, in bits, that a power of a rational may produce.
pub(crate) const MAX_POWER_BITS: u64 = 1 << 16;

/// Laurent polynomial in `q` and `t` with rational coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration is lexicographic in
/// `(e_q, e_t)` and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Exp, BigRational>,
}

/// Largest exponent magnitude of `q` or `t`.
pub const MAX_EXPONENT: i32 = 1 << 30;

fn bounded(x: Option<i32>) -> Result<i32, ScalarError> {
    x.filter(|x| x.unsigned_abs() <= MAX_EXPONENT as u32)
        .ok_or(ScalarError::ExponentOverflow)
}

fn checked_exp(a: Exp, b: Exp) -> Result<Exp, ScalarError> {
    Ok((
        bounded(a.0.checked_add(b.0))?,
        bounded(a.1.checked_add(b.1))?,
    ))
}

/// `e * k`, within the exponent bound.
pub(crate) fn scaled_exp(e: Exp, k: i32) -> Result<Exp, ScalarError> {
    Ok((bounded(e.0.checked_mul(k))?, bounded(e.1.checked_mul(k))?))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn monomial(c: BigRational, e: Exp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn q() -> Self {
        Self::monomial(BigRational::one(), (1, 0))
    }

    pub fn t() -> Self {
        Self::monomial(BigRational::one(), (0, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, BigRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// The constant value, if the polynomial has no non-constant term.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, e: Exp) -> BigRational {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Largest term in lexicographic order.
    pub fn leading(&self) -> Option<(Exp, &BigRational)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn uses_t(&self) -> bool {
        self.terms.keys().any(|e| e.1 != 0)
    }

    pub fn add_term(&mut self, e: Exp, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Componentwise minimum of exponents; `(0, 0)` for the zero polynomial.
    pub fn min_exps(&self) -> Exp {
        let mut it = self.terms.keys();
        let Some(&first) = it.next() else {
            return (0, 0);
        };
        it.fold(first, |m, e| (m.0.min(e.0), m.1.min(e.1)))
    }

    pub fn max_exps(&self) -> Exp {
        let mut it = self.terms.keys();
        let Some(&first) = it.next() else {
            return (0, 0);
        };
        it.fold(first, |m, e| (m.0.max(e.0), m.1.max(e.1)))
    }

    pub fn shift(&self, by: Exp) -> Result<Self, ScalarError> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(checked_exp(*e, by)?, c.clone());
        }
        Ok(Self { terms })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c);
        }
        r
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        // multiply integer numerators and divide once per term
        let (a, da) = self.integral();
        let (b, db) = o.integral();
        let mut acc: BTreeMap<Exp, BigInt> = BTreeMap::new();
        for (e1, c1) in &a {
            for (e2, c2) in &b {
                *acc.entry(checked_exp(*e1, *e2)?).or_default() += c1 * c2;
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, BigRational::new(c, den.clone())))
            .collect();
        Ok(Self { terms })
    }

    /// Integer coefficients `c * d` with `d` the lcm of all denominators.
    fn integral(&self) -> (Vec<(Exp, BigInt)>, BigInt) {
        let d = self
            .terms
            .values()
            .fold(BigInt::one(), |d, c| d.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.numer() * (&d / c.denom())))
            .collect();
        (terms, d)
    }

    /// Exact evaluation at `(q0, t0)`. Fails if a negative power meets zero.
    pub fn eval(&self, q0: &BigRational, t0: &BigRational) -> Result<BigRational, ScalarError> {
        let mut acc = BigRational::zero();
        for ((eq, et), c) in &self.terms {
            acc += c * rpow(q0, *eq)? * rpow(t0, *et)?;
        }
        Ok(acc)
    }

    /// Render in the `c * q^a * t^b` grammar.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| render_term(c, *e)).collect();
        parts.join(" + ")
    }
}

pub(crate) fn rpow(x: &BigRational, e: i32) -> Result<BigRational, ScalarError> {
    if e == 0 {
        return Ok(BigRational::one());
    }
    if x.is_zero() {
        return if e < 0 {
            Err(ScalarError::Pole)
        } else {
            Ok(BigRational::zero())
        };
    }
    let k = e.unsigned_abs() as u64;
    let bits = x.numer().bits() + x.denom().bits();
    if bits > 2 && bits.saturating_mul(k) > MAX_POWER_BITS {
        return Err(ScalarError::ExponentOverflow);
    }
    let x = if e < 0 { x.recip() } else { x.clone() };
    // powers of coprime integers stay coprime
    let (n, d) = x.into_raw();
    Ok(BigRational::new_raw(
        num_traits::pow(n, k as usize),
        num_traits::pow(d, k as usize),
    ))
}

pub(crate) fn render_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_term(c: &BigRational, e: Exp) -> String {
    let mut s = render_rational(c);
    for (name, k) in [("q", e.0), ("t", e.1)] {
        match k {
            0 => {}
            1 => s.push_str(&format!(" * {name}")),
            k => s.push_str(&format!(" * {name}^{k}")),
        }
    }
    s
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.render())
    }
}

/// Sign of the leading coefficient, used by normalization.
pub(crate) fn leading_is_negative(p: &LaurentPoly) -> bool {
    p.leading().is_some_and(|(_, c)| c.is_negative())
}
