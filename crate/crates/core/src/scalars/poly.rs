//! Polynomial gcd and exact division for polynomials in `q` and `t`.
//!
//! Inputs are `LaurentPoly` values whose exponents are all non-negative. The
//! bivariate gcd views a polynomial as an element of `Q[t][q]` and runs a
//! primitive pseudo-remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::laurent::LaurentPoly;
use super::modgcd::gcd_modular;

/// Exact polynomial quotient `a / b`, or `None` if `b` does not divide `a`.
pub fn div_exact(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let (lb, cb) = b.leading()?;
    let inv = cb.recip();
    let mut rem = a.clone();
    let mut quo = LaurentPoly::zero();
    while let Some((la, ca)) = rem.leading() {
        let e = (la.0 - lb.0, la.1 - lb.1);
        if e.0 < 0 || e.1 < 0 {
            return None;
        }
        let f = ca * &inv;
        for (eb, c) in b.terms() {
            let at = (eb.0.checked_add(e.0)?, eb.1.checked_add(e.1)?);
            rem.add_term(at, -(&f * c));
        }
        quo.add_term(e, f);
    }
    Some(quo)
}

fn degree_t(p: &LaurentPoly) -> Option<i32> {
    p.terms().map(|(e, _)| e.1).max()
}

fn lead_t(p: &LaurentPoly) -> BigRational {
    // univariate in t: the leading term is the last in lex order
    p.leading()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(BigRational::zero)
}

fn monic_t(p: &LaurentPoly) -> LaurentPoly {
    let c = lead_t(p);
    if c.is_zero() {
        return p.clone();
    }
    p.scale(&c.recip())
}

fn rem_t(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let db = degree_t(b).expect("division by zero polynomial");
    let cb = lead_t(b);
    let mut r = a.clone();
    while let Some(dr) = degree_t(&r) {
        if dr < db {
            break;
        }
        let c = r.coeff((0, dr)) / &cb;
        let term = LaurentPoly::monomial(c, (0, dr - db));
        r = r.sub(&term.try_mul(b).expect("small exponents"));
    }
    r
}

/// Monic gcd of two polynomials in `t` alone.
pub fn gcd_t(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = rem_t(&a, &b);
        a = b;
        b = r;
    }
    monic_t(&a)
}

type QT = Vec<LaurentPoly>;

fn to_qt(p: &LaurentPoly) -> QT {
    let dq = p.max_exps().0.max(0) as usize;
    let mut v = vec![LaurentPoly::zero(); dq + 1];
    for ((eq, et), c) in p.terms() {
        v[*eq as usize].add_term((0, *et), c.clone());
    }
    trim(&mut v);
    v
}

fn from_qt(v: &QT) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (i, c) in v.iter().enumerate() {
        for ((_, et), x) in c.terms() {
            p.add_term((i as i32, *et), x.clone());
        }
    }
    p
}

fn trim(v: &mut QT) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn content(v: &QT) -> LaurentPoly {
    let mut g = LaurentPoly::zero();
    for c in v {
        g = gcd_t(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn div_content(v: &QT, c: &LaurentPoly) -> QT {
    v.iter()
        .map(|x| div_exact(x, c).expect("content divides"))
        .collect()
}

fn primitive(v: &QT) -> QT {
    if v.is_empty() {
        return v.clone();
    }
    let c = content(v);
    div_content(v, &c)
}

fn mul_t(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a.try_mul(b).expect("small exponents")
}

/// Pseudo-remainder of `a` by `b` in the variable `q`.
fn prem(a: &QT, b: &QT) -> QT {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x = mul_t(x, lb);
        }
        for (i, bc) in b.iter().enumerate() {
            let sub = mul_t(&lr, bc);
            r[i + shift] = r[i + shift].sub(&sub);
        }
        trim(&mut r);
    }
    r
}

/// Greatest common divisor of two polynomials in `q, t`, up to a rational
/// unit. Both arguments must have non-negative exponents.
///
/// # Panics
///
/// If either argument is too wide to handle densely. Parsed coefficients
/// are kept well below this.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return LaurentPoly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let (x, y) = (a.min_exps(), b.min_exps());
        let (m, n) = if a.is_monomial() {
            (a.max_exps(), y)
        } else {
            (b.max_exps(), x)
        };
        return LaurentPoly::monomial(BigRational::one(), (m.0.min(n.0), m.1.min(n.1)));
    }
    assert!(
        dense_size(a) <= MAX_DENSE && dense_size(b) <= MAX_DENSE,
        "polynomial too wide for a gcd"
    );
    match (free_in(a, b, false), free_in(a, b, true)) {
        (true, true) => return LaurentPoly::one(),
        (true, false) if !a.uses_t() && !b.uses_t() => return LaurentPoly::one(),
        _ => {}
    }
    if let Some(g) = gcd_modular(a, b) {
        return g;
    }
    if !a.uses_t() && !b.uses_t() {
        return gcd_univariate_q(a, b);
    }
    let (va, vb) = (to_qt(a), to_qt(b));
    let c = gcd_t(&content(&va), &content(&vb));
    let mut x = primitive(&va);
    let mut y = primitive(&vb);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    let g = loop {
        if y.is_empty() {
            break x;
        }
        if y.len() == 1 {
            break vec![LaurentPoly::one()];
        }
        let r = prem(&x, &y);
        x = y;
        y = primitive(&r);
    };
    let g = primitive(&g);
    from_qt(&g.iter().map(|x| mul_t(x, &c)).collect())
}

/// Largest number of dense coefficients a gcd may allocate.
const MAX_DENSE: u64 = 1 << 24;

fn dense_size(p: &LaurentPoly) -> u64 {
    let (lo, hi) = (p.min_exps(), p.max_exps());
    let side = |a: i32, b: i32| (i64::from(b) - i64::from(a) + 1) as u64;
    side(lo.0, hi.0).saturating_mul(side(lo.1, hi.1))
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut r, mut base, mut e) = (1, a, PRIME - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    r
}

fn rational_mod(c: &BigRational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = c.numer().mod_floor(&p).to_u64()?;
    let d = c.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| mul_mod(n, inv_mod(d)))
}

/// Image of `p` in `F_p[x]` after setting the other variable to `at`, with
/// `x = t` if `swap`. `None` if a denominator or the leading coefficient
/// vanishes.
fn specialize_mod(p: &LaurentPoly, at: u64, swap: bool) -> Option<Vec<u64>> {
    let mut v = Vec::new();
    for ((eq, et), c) in p.terms() {
        let (main, other) = if swap { (*et, *eq) } else { (*eq, *et) };
        let mut x = rational_mod(c)?;
        for _ in 0..other {
            x = mul_mod(x, at);
        }
        let i = main as usize;
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = (v[i] + x) % PRIME;
    }
    (*v.last()? != 0).then_some(v)
}

fn rem_mod(a: &mut Vec<u64>, b: &[u64]) {
    let inv = inv_mod(*b.last().expect("nonzero divisor"));
    while a.len() >= b.len() {
        let f = mul_mod(*a.last().expect("nonempty"), inv);
        let shift = a.len() - b.len();
        for (i, y) in b.iter().enumerate() {
            a[i + shift] = (a[i + shift] + PRIME - mul_mod(f, *y)) % PRIME;
        }
        while a.last() == Some(&0) {
            a.pop();
        }
    }
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    while !b.is_empty() {
        rem_mod(&mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True if `gcd(a, b)` is certainly free of `q` (of `t` if `swap`). A
/// specialization keeping both leading coefficients can only raise the
/// degree of the gcd, so degree 0 there is a proof.
fn free_in(a: &LaurentPoly, b: &LaurentPoly, swap: bool) -> bool {
    for at in [3, 1_000_003, 987_654_321_987] {
        if let (Some(x), Some(y)) = (specialize_mod(a, at, swap), specialize_mod(b, at, swap)) {
            return gcd_degree_mod(x, y) == 0;
        }
    }
    false
}

fn swap_qt(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|((a, b), c)| ((*b, *a), c.clone())))
}

fn gcd_univariate_q(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    swap_qt(&gcd_t(&swap_qt(a), &swap_qt(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_laurent;

    fn p(s: &str) -> LaurentPoly {
        parse_laurent(s).unwrap()
    }

    #[test]
    fn exact_division() {
        let a = p("q^2 - 1");
        let b = p("q - 1");
        assert_eq!(div_exact(&a, &b).unwrap(), p("q + 1"));
        assert!(div_exact(&p("q^2 + 1"), &b).is_none());
    }

    #[test]
    fn bivariate_gcd_recovers_common_factor() {
        let f = p("q*t - 1");
        let a = f.try_mul(&p("q + t^2")).unwrap();
        let b = f.try_mul(&p("q^3 - 2*t")).unwrap();
        let g = gcd(&a, &b);
        assert!(div_exact(&g, &f).is_some() && div_exact(&f, &g).is_some());
    }

    #[test]
    fn coprime_gives_unit() {
        let g = gcd(&p("q + t"), &p("q - t"));
        assert!(g.as_constant().is_some());
    }

    #[test]
    fn common_factors_in_one_variable() {
        let f = p("t^2 + 3");
        let g = gcd(
            &f.try_mul(&p("q + t")).unwrap(),
            &f.try_mul(&p("q^2 - t")).unwrap(),
        );
        assert_eq!(g, f);
        let f = p("q - 2");
        let g = gcd(
            &f.try_mul(&p("q*t + 1")).unwrap(),
            &f.try_mul(&p("t^3 - q")).unwrap(),
        );
        assert_eq!(g, f);
    }

    #[test]
    fn large_coprime_inputs_are_fast() {
        let a = p("5 + q*t");
        let mut x = p("1");
        for _ in 0..12 {
            x = x.try_mul(&a).unwrap();
        }
        let y = p("q").add(&p("t").try_mul(&x).unwrap());
        assert!(gcd(&x, &y.try_mul(&y).unwrap()).as_constant().is_some());
    }

    #[test]
    fn monomial_and_constant_arguments() {
        assert_eq!(gcd(&p("3"), &p("q^500 - 7")), p("1"));
        assert_eq!(gcd(&p("2*q^3*t"), &p("q^5*t^2 + q^2")), p("q^2"));
        assert_eq!(gcd(&p("q^4 + q*t^3"), &p("q^2*t^5")), p("q"));
        assert_eq!(gcd(&p("q^4*t + q*t^3"), &p("q^2*t^5")), p("q*t"));
    }

    #[test]
    fn univariate_q_gcd() {
        let g = gcd(&p("q^4 - 1"), &p("q^2 - 2*q + 1"));
        assert_eq!(g, p("q - 1"));
    }
}
