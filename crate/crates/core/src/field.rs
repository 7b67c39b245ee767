//! Coefficient fields used by the generic algorithms.
//!
//! Everything downstream of the scalars is generic over [`Field`]. Symbolic
//! work uses [`RationalScalar`]; checks at a rational specialization of
//! `(q, t)` use [`Rat`], which is far cheaper.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::scalars::{RationalScalar, ScalarError};

pub type Rat = BigRational;

pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    fn powi(&self, k: i32) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }

    /// Render in the scalar text grammar.
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Field for RationalScalar {
    fn zero() -> Self {
        RationalScalar::zero()
    }
    fn one() -> Self {
        RationalScalar::one()
    }
    fn from_i64(n: i64) -> Self {
        RationalScalar::from_i64(n)
    }
    fn is_zero(&self) -> bool {
        RationalScalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        RationalScalar::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Option<Self> {
        self.try_inv().ok()
    }
    fn powi(&self, k: i32) -> Option<Self> {
        self.try_pow(k as i64).ok()
    }
}

impl Field for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn render(&self) -> String {
        crate::scalars::LaurentPoly::constant(self.clone()).render()
    }
}

/// The deformation parameters in a particular coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub struct Params<F: Field> {
    pub q: F,
    pub t: F,
}

impl<F: Field> Params<F> {
    pub fn q_inv(&self) -> F {
        self.q.inv().expect("q is invertible")
    }

    /// `q^k`.
    pub fn qp(&self, k: i32) -> F {
        self.q.powi(k).expect("q is invertible")
    }

    /// `q - q^{-1}`.
    pub fn qdiff(&self) -> F {
        self.q.sub(&self.q_inv())
    }

    /// Quantum integer `[n] = (q^n - q^{-n}) / (q - q^{-1})`, computed as a sum.
    pub fn qint(&self, n: i32) -> F {
        let mut acc = F::zero();
        let mut k = -(n - 1);
        while k < n {
            acc = acc.add(&self.qp(k));
            k += 2;
        }
        acc
    }
}

impl Params<RationalScalar> {
    pub fn symbolic() -> Self {
        Self {
            q: RationalScalar::q(),
            t: RationalScalar::t(),
        }
    }
}

impl Params<Rat> {
    pub fn at(q: Rat, t: Rat) -> Self {
        Self { q, t }
    }

    pub fn at_i64(q: (i64, i64), t: (i64, i64)) -> Self {
        let r = |(a, b): (i64, i64)| Rat::new(BigInt::from(a), BigInt::from(b));
        Self { q: r(q), t: r(t) }
    }

    /// A random rational point with denominators at most `max_den`, avoiding
    /// `q` and `t` at roots of unity of small order and at zero.
    pub fn random<R: Rng>(rng: &mut R, max_den: i64) -> Self {
        loop {
            let mut pick = || {
                let den = rng.gen_range(2..=max_den);
                let num = rng.gen_range(1..=3 * max_den);
                Rat::new(BigInt::from(num), BigInt::from(den))
            };
            let (q, t) = (pick(), pick());
            let one = <Rat as One>::one();
            if q != one && t != one && q != t && q.clone() * &t != one {
                return Self { q, t };
            }
        }
    }
}

/// Map a symbolic scalar into a coefficient field.
pub trait Embed<F: Field> {
    fn embed(&self, s: &RationalScalar) -> Result<F, ScalarError>;
}

impl Embed<RationalScalar> for Params<RationalScalar> {
    fn embed(&self, s: &RationalScalar) -> Result<RationalScalar, ScalarError> {
        Ok(s.clone())
    }
}

impl Embed<Rat> for Params<Rat> {
    fn embed(&self, s: &RationalScalar) -> Result<Rat, ScalarError> {
        s.specialize(&self.q, &self.t)
    }
}
