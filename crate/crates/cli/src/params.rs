use qcv_core::field::Embed;
use qcv_core::scalars::{parse_scalar, ScalarError};
use qcv_core::{Params, Rat, RationalScalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::UsageError;

/// A deformation parameter: a formal variable or a rational value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Formal,
    Rational(Rat),
}

impl Value {
    pub fn parse(s: &str, formal: &str, name: &str) -> Result<Self, UsageError> {
        let s = s.trim();
        if s == formal {
            return Ok(Value::Formal);
        }
        let x = parse_scalar(s)
            .ok()
            .and_then(|x| x.as_rational())
            .ok_or_else(|| {
                UsageError(format!(
                    "--{name} expects `{formal}` or a rational number, got `{s}`"
                ))
            })?;
        Ok(Value::Rational(x))
    }

    fn render(&self, formal: &str) -> String {
        match self {
            Value::Formal => formal.to_string(),
            Value::Rational(x) => RationalScalar::from_rational(x.clone()).render(),
        }
    }
}

/// The `(q, t)` selection from the command line.
#[derive(Clone, Debug)]
pub struct Mode {
    pub q: Value,
    pub t: Value,
}

/// Substitutes the rational coordinates into symbolic input data.
pub struct Substitution {
    q: Option<Rat>,
    t: Option<Rat>,
}

impl Embed<RationalScalar> for Substitution {
    fn embed(&self, s: &RationalScalar) -> Result<RationalScalar, ScalarError> {
        s.substitute(self.q.as_ref(), self.t.as_ref())
    }
}

/// Where a generic-parameter computation runs.
pub enum Ground {
    Exact(Params<Rat>),
    Symbolic(Params<RationalScalar>, Substitution),
}

impl Mode {
    pub fn new(q: &str, t: &str) -> Result<Self, UsageError> {
        let q = Value::parse(q, "symbolic", "q")?;
        if q == Value::Rational(Rat::from_integer(0.into())) {
            return Err(UsageError("--q must be nonzero".into()));
        }
        Ok(Self {
            q,
            t: Value::parse(t, "generic", "t")?,
        })
    }

    pub fn describe(&self) -> (String, String) {
        (self.q.render("symbolic"), self.t.render("generic"))
    }

    /// Exact arithmetic when both values are rational, otherwise rational
    /// functions with the given values substituted.
    pub fn ground(&self) -> Ground {
        match (&self.q, &self.t) {
            (Value::Rational(q), Value::Rational(t)) => {
                Ground::Exact(Params::at(q.clone(), t.clone()))
            }
            _ => {
                let pick = |v: &Value, var: RationalScalar| match v {
                    Value::Formal => (var, None),
                    Value::Rational(x) => {
                        (RationalScalar::from_rational(x.clone()), Some(x.clone()))
                    }
                };
                let (q, q0) = pick(&self.q, RationalScalar::q());
                let (t, t0) = pick(&self.t, RationalScalar::t());
                Ground::Symbolic(Params { q, t }, Substitution { q: q0, t: t0 })
            }
        }
    }

    /// Rational sample points: the given point if both values are
    /// rational, else `n` seeded random points keeping any fixed value.
    pub fn samples(&self, n: usize, seed: u64) -> Vec<Params<Rat>> {
        if let (Value::Rational(q), Value::Rational(t)) = (&self.q, &self.t) {
            return vec![Params::at(q.clone(), t.clone())];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let mut p = Params::random(&mut rng, 50);
                if let Value::Rational(q) = &self.q {
                    p.q = q.clone();
                }
                if let Value::Rational(t) = &self.t {
                    p.t = t.clone();
                }
                p
            })
            .collect()
    }
}

pub fn point_label(p: &Params<Rat>) -> String {
    let r = |x: &Rat| RationalScalar::from_rational(x.clone()).render();
    format!("q={}, t={}", r(&p.q), r(&p.t))
}
