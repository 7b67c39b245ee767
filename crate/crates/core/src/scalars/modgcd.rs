//! Modular gcd in `Q[q, t]`.
//!
//! Images of the gcd in `F_p[t][q]` come from univariate gcds at points
//! `t = a` and interpolation in `t`. Images from several primes are joined
//! by Chinese remaindering and rational reconstruction, and a candidate is
//! accepted once it divides both inputs exactly.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::laurent::LaurentPoly;
use super::poly::div_exact;

/// Primes tried before giving up.
const MAX_PRIMES: usize = 64;

type Up = Vec<u64>;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The largest primes below `2^62`, descending.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_PRIMES);
        let mut n = (1u64 << 62) - 1;
        while out.len() < MAX_PRIMES {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn trim(v: &mut Up) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn eval(v: &[u64], a: u64, p: u64) -> u64 {
    v.iter()
        .rev()
        .fold(0, |acc, c| (mul_mod(acc, a, p) + c) % p)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Up {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mul_mod(*x, *y, p)) % p;
        }
    }
    trim(&mut r);
    r
}

/// Quotient and remainder of `a` by nonzero `b`.
fn divrem(a: &[u64], b: &[u64], p: u64) -> (Up, Up) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let f = mul_mod(*r.last().expect("nonempty"), inv, p);
        let shift = r.len() - b.len();
        q[shift] = f;
        for (i, y) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - mul_mod(f, *y, p)) % p;
        }
        trim(&mut r);
    }
    (q, r)
}

fn monic(mut v: Up, p: u64) -> Up {
    if let Some(&l) = v.last() {
        let inv = inv_mod(l, p);
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
    }
    v
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Up {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    monic(a, p)
}

/// A polynomial in `F_p[t][q]`: `v[i]` is the coefficient of `q^i`.
type Bp = Vec<Up>;

fn content(v: &Bp, p: u64) -> Up {
    v.iter().fold(Vec::new(), |g, c| gcd(&g, c, p))
}

fn div_content(v: &Bp, c: &[u64], p: u64) -> Bp {
    v.iter().map(|x| divrem(x, c, p).0).collect()
}

/// Image of `x` mod `p` with exponents `(q, t)`, or `None` if a
/// denominator vanishes or a leading degree drops.
fn reduce(x: &LaurentPoly, p: u64) -> Option<Bp> {
    let pb = BigInt::from(p);
    let (dq, dt) = x.max_exps();
    let mut v = vec![vec![0; dt as usize + 1]; dq as usize + 1];
    for ((i, j), c) in x.terms() {
        let n = c.numer().mod_floor(&pb).to_u64()?;
        let d = c.denom().mod_floor(&pb).to_u64()?;
        if d == 0 {
            return None;
        }
        v[*i as usize][*j as usize] = mul_mod(n, inv_mod(d, p), p);
    }
    for c in v.iter_mut() {
        trim(c);
    }
    let top_t = v.iter().map(|c| c.len()).max().unwrap_or(0);
    if v.last()?.is_empty() || top_t != dt as usize + 1 {
        return None;
    }
    Some(v)
}

/// Monic-in-`q` gcd of `a(q, s)` and `b(q, s)` at a point.
fn gcd_at(a: &Bp, b: &Bp, s: u64, p: u64) -> Up {
    let ea: Up = a.iter().map(|c| eval(c, s, p)).collect();
    let eb: Up = b.iter().map(|c| eval(c, s, p)).collect();
    gcd(&ea, &eb, p)
}

/// Newton interpolation of `values[k]` at `points[k]`.
fn interpolate(points: &[u64], values: &[u64], p: u64) -> Up {
    let mut poly: Up = Vec::new();
    let mut basis: Up = vec![1];
    for (&x, &y) in points.iter().zip(values) {
        let diff = (y + p - eval(&poly, x, p)) % p;
        let scale = mul_mod(diff, inv_mod(eval(&basis, x, p), p), p);
        let term: Up = basis.iter().map(|c| mul_mod(*c, scale, p)).collect();
        if poly.len() < term.len() {
            poly.resize(term.len(), 0);
        }
        for (i, c) in term.iter().enumerate() {
            poly[i] = (poly[i] + c) % p;
        }
        basis = mul(&basis, &[(p - x) % p, 1], p);
    }
    trim(&mut poly);
    poly
}

/// Image of `gcd(a, b)` in `F_p[t][q]`, scaled so its leading term is 1.
fn gcd_mod(a: &Bp, b: &Bp, p: u64) -> Option<Bp> {
    let (ca, cb) = (content(a, p), content(b, p));
    let c = gcd(&ca, &cb, p);
    let (a, b) = (div_content(a, &ca, p), div_content(b, &cb, p));
    let (la, lb) = (a.last()?, b.last()?);
    let gamma = gcd(la, lb, p);
    let deg_t = |v: &Bp| v.iter().map(|c| c.len()).max().unwrap_or(1) - 1;
    let need = gamma.len() - 1 + deg_t(&a).min(deg_t(&b)) + 1;
    let mut points = Vec::new();
    let mut images: Vec<Up> = Vec::new();
    let mut deg = usize::MAX;
    // points spread over F_p, so an unlucky point does not recur for every prime
    let step = 0x9E37_79B9_7F4A_7C15 % p;
    let mut k = 0;
    while points.len() < need {
        k += 1;
        if k > 4 * need as u64 + 16 {
            return None;
        }
        let s = mul_mod(k, step, p);
        if eval(la, s, p) == 0 || eval(lb, s, p) == 0 {
            continue;
        }
        let g = gcd_at(&a, &b, s, p);
        let d = g.len() - 1;
        if d > deg {
            continue;
        }
        if d < deg {
            deg = d;
            points.clear();
            images.clear();
        }
        let scale = eval(&gamma, s, p);
        images.push(g.iter().map(|x| mul_mod(*x, scale, p)).collect());
        points.push(s);
    }
    let mut g: Bp = (0..=deg)
        .map(|i| {
            let vals: Up = images.iter().map(|im| im[i]).collect();
            interpolate(&points, &vals, p)
        })
        .collect();
    let cg = content(&g, p);
    g = div_content(&g, &cg, p);
    let mut g: Bp = g.iter().map(|x| mul(x, &c, p)).collect();
    let lead = *g.last()?.last()?;
    let inv = inv_mod(lead, p);
    for row in g.iter_mut() {
        for x in row.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
    }
    Some(g)
}

fn shape(g: &Bp) -> (usize, usize) {
    (g.len(), g.iter().map(|c| c.len()).max().unwrap_or(0))
}

/// Rational `n / d` congruent to `u` mod `m` with `|n|, d` below `sqrt(m / 2)`.
fn reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Shape, residues by monomial, and modulus of the images joined so far.
type Joined = ((usize, usize), BTreeMap<(usize, usize), BigInt>, BigInt);

/// `gcd(a, b)` up to a rational unit, for nonzero `a, b` with non-negative
/// exponents. `None` if no prime gave a verified answer.
pub fn gcd_modular(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let mut acc: Option<Joined> = None;
    let mut last: Option<LaurentPoly> = None;
    for &p in primes() {
        let (Some(ap), Some(bp)) = (reduce(a, p), reduce(b, p)) else {
            continue;
        };
        let Some(g) = gcd_mod(&ap, &bp, p) else {
            continue;
        };
        let sh = shape(&g);
        let residues = || {
            let mut m = BTreeMap::new();
            for (i, row) in g.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if *x != 0 {
                        m.insert((i, j), BigInt::from(*x));
                    }
                }
            }
            m
        };
        acc = match acc.take() {
            // a smaller image means every earlier prime was unlucky
            Some((s, _, _)) if sh < s => Some((sh, residues(), BigInt::from(p))),
            Some((s, r, m)) if sh > s => Some((s, r, m)),
            Some((s, r, m)) => {
                let new = residues();
                let pb = BigInt::from(p);
                let inv = (m.mod_floor(&pb)).modpow(&(&pb - 2u32), &pb);
                let keys: Vec<_> = r.keys().chain(new.keys()).cloned().collect();
                let mut out = BTreeMap::new();
                for k in keys {
                    let u = r.get(&k).cloned().unwrap_or_default();
                    let v = new.get(&k).cloned().unwrap_or_default();
                    // u + m * ((v - u) / m mod p)
                    let h = ((v - &u) * &inv).mod_floor(&pb);
                    out.insert(k, u + &m * h);
                }
                Some((s, out, m * pb))
            }
            None => Some((sh, residues(), BigInt::from(p))),
        };
        let (_, r, m) = acc.as_ref().expect("just set");
        let terms: Option<Vec<_>> = r
            .iter()
            .filter(|(_, u)| !u.is_zero())
            .map(|((i, j), u)| Some(((*i as i32, *j as i32), reconstruct(u, m)?)))
            .collect();
        let Some(terms) = terms else { continue };
        let cand = LaurentPoly::from_terms(terms);
        if last.as_ref() == Some(&cand)
            && div_exact(a, &cand).is_some()
            && div_exact(b, &cand).is_some()
        {
            return Some(cand);
        }
        last = Some(cand);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_laurent;

    fn p(s: &str) -> LaurentPoly {
        parse_laurent(s).unwrap()
    }

    fn pow(x: &LaurentPoly, k: usize) -> LaurentPoly {
        (0..k).fold(LaurentPoly::one(), |acc, _| acc.try_mul(x).unwrap())
    }

    fn same_up_to_unit(a: &LaurentPoly, b: &LaurentPoly) -> bool {
        div_exact(a, b).is_some_and(|x| x.as_constant().is_some())
    }

    #[test]
    fn primes_are_prime() {
        assert!(primes().iter().all(|&n| is_prime(n) && n < 1 << 62));
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime((1 << 61) - 1));
    }

    #[test]
    fn reconstructs_rationals() {
        let p = BigInt::from(998_244_353u64);
        let x = BigRational::new(BigInt::from(-7), BigInt::from(12));
        let u = (x.numer() * x.denom().modpow(&(&p - 2), &p)).mod_floor(&p);
        assert_eq!(reconstruct(&u, &p), Some(x));
    }

    #[test]
    fn shared_powers() {
        let f = p("5 + q*t");
        let a = pow(&f, 5).try_mul(&p("q - t^2 + 3")).unwrap();
        let b = pow(&f, 3).try_mul(&p("q^2*t + 1/7")).unwrap();
        let g = gcd_modular(&a, &b).unwrap();
        assert!(same_up_to_unit(&g, &pow(&f, 3)));
    }

    #[test]
    fn mixed_content_and_primitive_factors() {
        let f = p("t^2 + 3").try_mul(&p("q*t - 2/3")).unwrap();
        let a = f.try_mul(&p("q + t")).unwrap();
        let b = f
            .try_mul(&p("q^2 - t"))
            .unwrap()
            .try_mul(&p("t - 1"))
            .unwrap();
        let g = gcd_modular(&a, &b).unwrap();
        assert!(same_up_to_unit(&g, &f));
    }

    #[test]
    fn images_agree_at_small_points() {
        // both images at t = 1 share q - 1
        let g = gcd_modular(&p("-2 + 4*t - 2*q"), &p("-2*t + 2*q*t")).unwrap();
        assert!(g.as_constant().is_some());
    }

    #[test]
    fn coprime_inputs() {
        let g = gcd_modular(&p("q + t"), &p("q - t")).unwrap();
        assert!(g.as_constant().is_some());
    }

    fn small_poly() -> impl proptest::strategy::Strategy<Value = LaurentPoly> {
        use proptest::prelude::*;
        prop::collection::vec(((0i32..3, 0i32..3), -4i64..=4), 1..4).prop_map(|ts| {
            LaurentPoly::from_terms(
                ts.into_iter()
                    .map(|(e, c)| (e, BigRational::from_integer(c.into()))),
            )
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(256))]

        #[test]
        fn common_factor_divides_the_gcd(f in small_poly(), g in small_poly(), h in small_poly()) {
            proptest::prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            let (a, b) = (f.try_mul(&g).unwrap(), f.try_mul(&h).unwrap());
            let d = gcd_modular(&a, &b).unwrap();
            proptest::prop_assert!(div_exact(&a, &d).is_some() && div_exact(&b, &d).is_some());
            proptest::prop_assert!(div_exact(&d, &f).is_some());
        }
    }
}
