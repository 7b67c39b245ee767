//! Expression grammar shared by the scalar and noncommutative polynomial
//! text formats.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' '-'? integer)?
//! primary := integer | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

const MAX_DEPTH: usize = 128;
/// Largest exponent accepted on a base that is not a single monomial.
pub const MAX_EXPANDED_POWER: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        Self {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Sym(String, usize),
    /// Terms with a flag marking subtraction.
    Sum(Vec<(bool, Expr)>),
    /// Factors with a flag marking division and the operator position.
    Prod(Vec<(bool, Expr, usize)>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64, usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[st..i]
                .parse()
                .map_err(|_| ParseError::new(st, "bad integer"))?;
            out.push((Tok::Int(n), st));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'.') {
                i += 1;
            }
            out.push((Tok::Ident(s[st..i].to_string()), st));
        } else if b"+-*/^()".contains(&c) {
            out.push((Tok::Op(c as char), i));
            i += 1;
        } else {
            return Err(ParseError::new(
                i,
                format!(
                    "unexpected character {:?}",
                    s[i..].chars().next().unwrap_or('?')
                ),
            ));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.i) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.1).unwrap_or(self.end)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.pos(), "nesting too deep"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let first = self.term()?;
        let mut terms = vec![(false, first)];
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.i += 1;
            terms.push((c == '-', self.term()?));
        }
        self.depth -= 1;
        Ok(if terms.len() == 1 {
            terms.pop().unwrap().1
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let first = self.unary()?;
        let mut factors = vec![(false, first, 0)];
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            let at = self.pos();
            self.i += 1;
            factors.push((c == '/', self.unary()?, at));
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap().1
        } else {
            Expr::Prod(factors)
        })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_op() == Some('-') {
            self.i += 1;
            self.enter()?;
            let e = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(e.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        let at = self.pos();
        self.i += 1;
        let neg = if self.peek_op() == Some('-') {
            self.i += 1;
            true
        } else {
            false
        };
        match self.toks.get(self.i) {
            Some((Tok::Int(n), p)) => {
                let k: i64 = i64::try_from(n.clone())
                    .ok()
                    .filter(|k| *k <= i64::from(crate::scalars::MAX_EXPONENT))
                    .ok_or_else(|| ParseError::new(*p, "exponent too large"))?;
                self.i += 1;
                Ok(Expr::Pow(base.into(), if neg { -k } else { k }, at))
            }
            _ => Err(ParseError::new(self.pos(), "expected integer exponent")),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.toks.get(self.i).cloned() {
            Some((Tok::Int(n), _)) => {
                self.i += 1;
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Some((Tok::Ident(s), p)) => {
                self.i += 1;
                Ok(Expr::Sym(s, p))
            }
            Some((Tok::Op('('), _)) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(ParseError::new(self.pos(), "expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            _ => Err(ParseError::new(pos, "expected a number, symbol or '('")),
        }
    }
}

/// Parse a complete expression.
pub fn parse_expr(s: &str) -> Result<Expr, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: s.len(),
        depth: 0,
    };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return Err(ParseError::new(p.pos(), "trailing input"));
    }
    Ok(e)
}

/// Values an [`Expr`] can be evaluated into.
pub trait ExprTarget: Sized {
    fn from_num(n: &BigRational) -> Self;
    fn add(self, o: Self) -> Result<Self, ParseError>;
    fn sub(self, o: Self) -> Result<Self, ParseError>;
    fn mul(self, o: Self, pos: usize) -> Result<Self, ParseError>;
    fn div(self, o: Self, pos: usize) -> Result<Self, ParseError>;
    fn neg(self) -> Self;
    fn pow(self, k: i64, pos: usize) -> Result<Self, ParseError>;
}

/// Evaluate `e`, resolving identifiers with `sym`.
pub fn eval<T: ExprTarget>(
    e: &Expr,
    sym: &dyn Fn(&str, usize) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    Ok(match e {
        Expr::Num(n) => T::from_num(n),
        Expr::Sym(s, p) => sym(s, *p)?,
        Expr::Sum(ts) => {
            let mut it = ts.iter();
            let (neg, first) = it.next().expect("nonempty sum");
            let mut acc = eval::<T>(first, sym)?;
            if *neg {
                acc = acc.neg();
            }
            for (neg, x) in it {
                let v = eval::<T>(x, sym)?;
                acc = if *neg { acc.sub(v)? } else { acc.add(v)? };
            }
            acc
        }
        Expr::Prod(fs) => {
            let mut it = fs.iter();
            let (_, first, _) = it.next().expect("nonempty product");
            let mut acc = eval::<T>(first, sym)?;
            for (div, x, p) in it {
                let v = eval::<T>(x, sym)?;
                acc = if *div {
                    acc.div(v, *p)?
                } else {
                    acc.mul(v, *p)?
                };
            }
            acc
        }
        Expr::Neg(a) => eval::<T>(a, sym)?.neg(),
        Expr::Pow(a, k, p) => eval::<T>(a, sym)?.pow(*k, *p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_expr("-q^2 + 3*t").unwrap();
        match e {
            Expr::Sum(ts) => assert!(matches!(ts[0].1, Expr::Neg(_))),
            _ => panic!("{e:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("q +").is_err());
        assert!(parse_expr("(q").is_err());
        assert!(parse_expr("q ^ x").is_err());
        assert!(parse_expr("q $ 2").is_err());
        assert!(parse_expr("q^99999999999999999999").is_err());
        assert!(parse_expr(&"(".repeat(1000)).is_err());
    }
}
