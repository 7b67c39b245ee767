//! Exact coefficients: Laurent polynomials and rational functions in `q, t`.

mod laurent;
mod modgcd;
mod poly;
mod rational;

pub use laurent::{Exp, LaurentPoly, MAX_EXPONENT};
pub use poly::{div_exact, gcd};
pub use rational::RationalScalar;

use num_rational::BigRational;
use thiserror::Error;

use crate::text::{eval, parse_expr, ExprTarget, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at the specialization point")]
    Pole,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("expression too large")]
    TooLarge,
    #[error("internal normalization failure: {0}")]
    Internal(&'static str),
}

/// Largest total coefficient size, in bits, of a parsed scalar.
const MAX_PARSED_BITS: u64 = 1 << 14;

/// Largest product of term counts the parser will multiply out, counting
/// a fraction as its numerator terms times its denominator terms.
const MAX_PARSED_WORK: u64 = 1 << 16;

/// Largest exponent span of a parsed scalar other than a monomial.
const MAX_PARSED_SPAN: u64 = 1 << 10;

/// Reject operands whose combination would exceed the parser budget.
/// `fraction` marks results that go through gcd normalization.
fn budget(
    a: &RationalScalar,
    b: &RationalScalar,
    fraction: bool,
    pos: usize,
) -> Result<(), ParseError> {
    let work = a.weight().saturating_mul(b.weight());
    let span = if fraction {
        a.exponent_span() + b.exponent_span()
    } else {
        0
    };
    // inputs get twice the room of results so that any accepted value
    // reparses from its rendering
    if a.size_bits().saturating_add(b.size_bits()) > 2 * MAX_PARSED_BITS
        || work > MAX_PARSED_WORK
        || span > MAX_PARSED_SPAN
    {
        return Err(ParseError::new(pos, ScalarError::TooLarge.to_string()));
    }
    Ok(())
}

fn sum_budget(a: &RationalScalar, b: &RationalScalar) -> Result<(), ParseError> {
    let fraction = !(a.is_laurent() && b.is_laurent());
    if fraction && a.sum_span(b) > MAX_PARSED_SPAN {
        return Err(ParseError::new(0, ScalarError::TooLarge.to_string()));
    }
    budget(a, b, fraction, 0)
}

fn bounded(
    r: Result<RationalScalar, ScalarError>,
    pos: usize,
) -> Result<RationalScalar, ParseError> {
    let r = r.map_err(|e| ParseError::new(pos, e.to_string()))?;
    // accepted values must reparse from their rendering under `budget`
    let fraction = !r.is_laurent() && r.weight() > MAX_PARSED_WORK;
    // spans of sparse Laurent sums are cheap here but not once inverted
    let wide = !r.is_monomial() && r.exponent_span() > MAX_PARSED_SPAN;
    if r.size_bits() > MAX_PARSED_BITS || fraction || wide {
        return Err(ParseError::new(pos, ScalarError::TooLarge.to_string()));
    }
    Ok(r)
}

impl ExprTarget for RationalScalar {
    fn from_num(n: &BigRational) -> Self {
        RationalScalar::from_rational(n.clone())
    }

    fn add(self, o: Self) -> Result<Self, ParseError> {
        sum_budget(&self, &o)?;
        bounded(self.try_add_owned(&o), 0)
    }

    fn sub(self, o: Self) -> Result<Self, ParseError> {
        sum_budget(&self, &o)?;
        bounded(self.try_add_owned(&o.neg_ref()), 0)
    }

    fn mul(self, o: Self, pos: usize) -> Result<Self, ParseError> {
        budget(&self, &o, !(self.is_laurent() && o.is_laurent()), pos)?;
        bounded(self.try_mul(&o), pos)
    }

    fn div(self, o: Self, pos: usize) -> Result<Self, ParseError> {
        budget(&self, &o, !(self.is_laurent() && o.is_monomial()), pos)?;
        bounded(self.try_div(&o), pos)
    }

    fn neg(self) -> Self {
        self.neg_ref()
    }

    fn pow(self, k: i64, pos: usize) -> Result<Self, ParseError> {
        if !self.is_monomial() && self.power_size(k.unsigned_abs()) > 4 * MAX_PARSED_BITS {
            return Err(ParseError::new(pos, ScalarError::TooLarge.to_string()));
        }
        bounded(self.try_pow(k), pos)
    }
}

/// Resolve the parameter symbols `q` and `t`.
pub fn scalar_symbol(name: &str) -> Option<RationalScalar> {
    match name {
        "q" => Some(RationalScalar::q()),
        "t" => Some(RationalScalar::t()),
        _ => None,
    }
}

/// Parse a scalar in the `c * q^a * t^b` grammar (sums, products, quotients,
/// integer powers and parentheses are accepted).
pub fn parse_scalar(s: &str) -> Result<RationalScalar, ParseError> {
    let e = parse_expr(s)?;
    let v: RationalScalar = eval(&e, &|name, pos| {
        scalar_symbol(name).ok_or_else(|| {
            ParseError::new(pos, format!("unknown symbol {name:?}; scalars use q and t"))
        })
    })?;
    Ok(v)
}

/// Largest exponent of `q` or `t` in a coefficient of a presentation or
/// an operator. Normalizing sums of wider monomials gets expensive.
pub const MAX_COEFFICIENT_EXPONENT: i32 = 1 << 12;

/// Error unless every exponent of `c` is at most `MAX_COEFFICIENT_EXPONENT`
/// in size.
pub fn check_coefficient(c: &RationalScalar) -> Result<(), ParseError> {
    let wide = [c.numerator(), c.denominator()].iter().any(|p| {
        let (lo, hi) = (p.min_exps(), p.max_exps());
        [lo.0, lo.1, hi.0, hi.1]
            .iter()
            .any(|e| e.unsigned_abs() > MAX_COEFFICIENT_EXPONENT as u32)
    });
    if wide {
        return Err(ParseError::new(0, "exponent too large for a coefficient"));
    }
    Ok(())
}

/// `parse_scalar`, limited to exponents accepted by `check_coefficient`.
pub fn parse_coefficient(s: &str) -> Result<RationalScalar, ParseError> {
    let c = parse_scalar(s)?;
    check_coefficient(&c)?;
    Ok(c)
}

/// Parse a Laurent polynomial; rejects genuine fractions.
pub fn parse_laurent(s: &str) -> Result<LaurentPoly, ParseError> {
    let v = parse_scalar(s)?;
    if !v.is_laurent() {
        return Err(ParseError::new(0, "expected a Laurent polynomial"));
    }
    Ok(v.numerator().clone())
}
