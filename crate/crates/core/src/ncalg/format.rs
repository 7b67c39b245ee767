//! Text format for presentations.
//!
//! ```text
//! generators:
//! a11 1 [1,1]
//! x 2
//! relations:
//! a11 * x - q^2 * x * a11
//! ```
//!
//! Lines starting with `#` are comments. Relations use the scalar grammar
//! extended by generator names; products are noncommutative and taken in
//! the order written.

use num_rational::BigRational;

use super::poly::NCPoly;
use super::presentation::{AlgebraPresentation, Generator};
use super::NcError;
use crate::field::Field;
use crate::scalars::{check_coefficient, scalar_symbol, RationalScalar};
use crate::text::{eval, parse_expr, ExprTarget, ParseError, MAX_EXPANDED_POWER};

/// Cap on intermediate term counts while parsing.
pub const MAX_PARSE_TERMS: usize = 20_000;

struct Np(NCPoly<RationalScalar>);

fn cap(p: NCPoly<RationalScalar>, pos: usize) -> Result<Np, ParseError> {
    if p.len() > MAX_PARSE_TERMS {
        return Err(ParseError::new(pos, "expression expands to too many terms"));
    }
    Ok(Np(p))
}

impl ExprTarget for Np {
    fn from_num(n: &BigRational) -> Self {
        Np(NCPoly::constant(RationalScalar::from_rational(n.clone())))
    }

    fn add(self, o: Self) -> Result<Self, ParseError> {
        let mut out = self.0;
        for (w, c) in o.0.terms() {
            let s = ExprTarget::add(out.coeff(w), c.clone())?;
            out.set_coeff(w.clone(), s);
        }
        cap(out, 0)
    }

    fn sub(self, o: Self) -> Result<Self, ParseError> {
        self.add(Np(o.0.neg()))
    }

    fn mul(self, o: Self, pos: usize) -> Result<Self, ParseError> {
        if self.0.len().saturating_mul(o.0.len()) > MAX_PARSE_TERMS {
            return Err(ParseError::new(pos, "expression expands to too many terms"));
        }
        // coefficients go through the scalar parser's size budget
        let mut out: NCPoly<RationalScalar> = NCPoly::zero();
        for (a, x) in self.0.terms() {
            for (b, y) in o.0.terms() {
                let c = ExprTarget::mul(x.clone(), y.clone(), pos)?;
                let mut w = a.clone();
                w.extend_from_slice(b);
                if w.len() > 64 {
                    return Err(ParseError::new(pos, "word too long"));
                }
                let s = ExprTarget::add(out.coeff(&w), c)?;
                out.set_coeff(w, s);
            }
        }
        Ok(Np(out))
    }

    fn div(self, o: Self, pos: usize) -> Result<Self, ParseError> {
        let c =
            o.0.as_constant()
                .ok_or_else(|| ParseError::new(pos, "can only divide by a scalar"))?;
        let inv = ExprTarget::div(RationalScalar::one(), c, pos)?;
        Np(self.0).mul(Np(NCPoly::constant(inv)), pos)
    }

    fn neg(self) -> Self {
        Np(self.0.neg())
    }

    fn pow(self, k: i64, pos: usize) -> Result<Self, ParseError> {
        if let Some(c) = self.0.as_constant() {
            let v = ExprTarget::pow(c, k, pos)?;
            return Ok(Np(NCPoly::constant(v)));
        }
        if k < 0 {
            return Err(ParseError::new(pos, "negative power of a non-scalar"));
        }
        if k > MAX_EXPANDED_POWER {
            return Err(ParseError::new(pos, "exponent too large for expansion"));
        }
        let mut acc = Np(NCPoly::one());
        for _ in 0..k {
            acc = acc.mul(Np(self.0.clone()), pos)?;
        }
        Ok(acc)
    }
}

/// Parse a polynomial over the given generator names.
pub fn parse_ncpoly(s: &str, names: &[String]) -> Result<NCPoly<RationalScalar>, ParseError> {
    let e = parse_expr(s)?;
    let v = eval::<Np>(&e, &|name, pos| {
        if let Some(i) = names.iter().position(|n| n == name) {
            return Ok(Np(NCPoly::gen(i as u8)));
        }
        scalar_symbol(name)
            .map(|c| Np(NCPoly::constant(c)))
            .ok_or_else(|| ParseError::new(pos, format!("unknown symbol {name:?}")))
    })?;
    for c in v.0.terms().values() {
        check_coefficient(c)?;
    }
    Ok(v.0)
}

fn parse_generator(line: &str, lineno: usize) -> Result<Generator, NcError> {
    let err = |m: &str| NcError::Format {
        line: lineno,
        msg: m.to_string(),
    };
    let (head, legs) = match line.find('[') {
        Some(i) => {
            let rest = line[i..].trim();
            if !rest.ends_with(']') {
                return Err(err("unterminated matrix position"));
            }
            (&line[..i], Some(&rest[1..rest.len() - 1]))
        }
        None => (line, None),
    };
    let mut parts = head.split_whitespace();
    let name = parts.next().ok_or_else(|| err("missing generator name"))?;
    let degree: u32 = parts
        .next()
        .ok_or_else(|| err("missing degree"))?
        .parse()
        .map_err(|_| err("degree must be a positive integer"))?;
    if parts.next().is_some() {
        return Err(err("unexpected text after degree"));
    }
    if degree == 0 || degree > 64 {
        return Err(err("degree must be between 1 and 64"));
    }
    let legs = match legs {
        None => None,
        Some(l) => {
            let v: Vec<&str> = l.split(',').map(str::trim).collect();
            if v.len() != 2 {
                return Err(err("matrix position must be [i,j]"));
            }
            let i: usize = v[0].parse().map_err(|_| err("bad row index"))?;
            let j: usize = v[1].parse().map_err(|_| err("bad column index"))?;
            if i == 0 || j == 0 || i > 16 || j > 16 {
                return Err(err("matrix indices must be between 1 and 16"));
            }
            Some((i, j))
        }
    };
    Ok(Generator {
        name: name.to_string(),
        degree,
        legs,
    })
}

/// Parse the generator and relation lists without completing.
pub fn parse_presentation_parts(
    s: &str,
) -> Result<(Vec<Generator>, Vec<NCPoly<RationalScalar>>), NcError> {
    #[derive(PartialEq)]
    enum Sec {
        None,
        Gens,
        Rels,
    }
    let mut sec = Sec::None;
    let mut gens = Vec::new();
    let mut rel_lines = Vec::new();
    for (k, raw) in s.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "generators:" => {
                if sec != Sec::None {
                    return Err(NcError::Format {
                        line: k + 1,
                        msg: "generators: must come first".into(),
                    });
                }
                sec = Sec::Gens;
            }
            "relations:" => {
                if sec != Sec::Gens {
                    return Err(NcError::Format {
                        line: k + 1,
                        msg: "relations: must follow generators:".into(),
                    });
                }
                sec = Sec::Rels;
            }
            _ => match sec {
                Sec::None => {
                    return Err(NcError::Format {
                        line: k + 1,
                        msg: "expected generators:".into(),
                    })
                }
                Sec::Gens => gens.push(parse_generator(line, k + 1)?),
                Sec::Rels => rel_lines.push((k + 1, line)),
            },
        }
        if gens.len() > super::presentation::MAX_GENERATORS {
            return Err(NcError::Format {
                line: k + 1,
                msg: "too many generators".into(),
            });
        }
    }
    for (i, g) in gens.iter().enumerate() {
        if !super::presentation::valid_name(&g.name) || gens[..i].iter().any(|h| h.name == g.name) {
            return Err(NcError::Presentation(format!(
                "invalid or duplicate generator name {:?}",
                g.name
            )));
        }
    }
    let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let rels = rel_lines
        .into_iter()
        .map(|(k, l)| {
            parse_ncpoly(l, &names).map_err(|e| NcError::Format {
                line: k,
                msg: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((gens, rels))
}

/// Parse and complete a presentation.
pub fn parse_presentation(
    s: &str,
    bound: u32,
) -> Result<AlgebraPresentation<RationalScalar>, NcError> {
    let (g, r) = parse_presentation_parts(s)?;
    AlgebraPresentation::new(g, r, bound)
}

pub fn render_presentation<F: Field>(p: &AlgebraPresentation<F>) -> String {
    let mut out = String::from("generators:\n");
    for g in p.generators() {
        out.push_str(&format!("{} {}", g.name, g.degree));
        if let Some((i, j)) = g.legs {
            out.push_str(&format!(" [{i},{j}]"));
        }
        out.push('\n');
    }
    out.push_str("relations:\n");
    for r in p.relations() {
        out.push_str(&p.render(r));
        out.push('\n');
    }
    out
}
