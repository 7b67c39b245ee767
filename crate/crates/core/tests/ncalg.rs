use std::sync::Arc;

use proptest::prelude::*;
use qcv_core::charvar;
use qcv_core::ncalg::{
    classical_limit_commutativity, parse_ncpoly, parse_presentation, quotient, render_presentation,
    AlgebraPresentation, Generator, GeneratorMap, NCPoly, NcError,
};
use qcv_core::{Field, Params, Rat, RationalScalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QUANTUM_PLANE: &str = "generators:\nx 1\ny 1\nrelations:\ny*x - q*x*y\n";

fn rat(a: i64, b: i64) -> Rat {
    Rat::new(a.into(), b.into())
}

#[test]
fn free_and_polynomial_dims() {
    let free =
        AlgebraPresentation::<Rat>::free(vec![Generator::new("a", 1), Generator::new("b", 1)], 5)
            .unwrap();
    assert_eq!(free.graded_dims(5).unwrap(), vec![1, 2, 4, 8, 16, 32]);
    let poly = AlgebraPresentation::<Rat>::polynomial_ring(3, 4).unwrap();
    assert_eq!(poly.graded_dims(4).unwrap(), vec![1, 3, 6, 10, 15]);
    // weighted generators: a of degree 1, b of degree 2, commuting
    let g = vec![Generator::new("a", 1), Generator::new("b", 2)];
    let rel = NCPoly::word(vec![1, 0]).sub(&NCPoly::word(vec![0, 1]));
    let w = AlgebraPresentation::<Rat>::new(g, vec![rel], 6).unwrap();
    assert_eq!(w.graded_dims(6).unwrap(), vec![1, 1, 2, 2, 3, 3, 4]);
    assert_eq!(
        AlgebraPresentation::<Rat>::ground(3)
            .graded_dims(3)
            .unwrap(),
        vec![1, 0, 0, 0]
    );
}

#[test]
fn truncation_is_enforced() {
    // a finite completion answers in every degree
    let poly = AlgebraPresentation::<Rat>::polynomial_ring(2, 2).unwrap();
    assert!(poly.is_complete());
    assert_eq!(poly.graded_dims(6).unwrap(), vec![1, 2, 3, 4, 5, 6, 7]);
    // the braid relation has an infinite completion
    let braid =
        parse_presentation("generators:\nx 1\ny 1\nrelations:\ny*x*y - x*y*x\n", 5).unwrap();
    assert!(!braid.is_complete());
    // growth series 1 / (1 - 2s + s^3) of the positive braid monoid
    assert_eq!(braid.graded_dims(5).unwrap(), vec![1, 2, 4, 7, 12, 20]);
    assert!(matches!(
        braid.graded_dims(6),
        Err(NcError::DegreeExceeded {
            degree: 6,
            bound: 5
        })
    ));
}

#[test]
fn quantum_plane_has_pbw_basis() {
    let a = parse_presentation(QUANTUM_PLANE, 5).unwrap();
    assert_eq!(a.graded_dims(5).unwrap(), vec![1, 2, 3, 4, 5, 6]);
    let (x, y) = (a.gen("x"), a.gen("y"));
    let yx = a.mul(&y, &x).unwrap();
    assert_eq!(yx, a.mul(&x, &y).unwrap().scale(&RationalScalar::q()));
    assert!(a.system().check_confluence().passed());
}

#[test]
fn overlap_ambiguities_are_resolved() {
    // relations without a PBW basis collapse degree 3: the overlap zyx
    // forces the extra relation xyz = 0 at a generic point
    let s = "generators:\nx 1\ny 1\nz 1\nrelations:\ny*x - 2*x*y\nz*y - 3*y*z\nz*x - 5*x*z\n";
    let a = parse_presentation(s, 3).unwrap();
    assert_eq!(a.graded_dims(3).unwrap(), vec![1, 3, 6, 10]);
    let s = "generators:\nx 1\ny 1\nrelations:\nx*x - y*y\nx*y\n";
    let b = parse_presentation(s, 4).unwrap();
    // x^2 = y^2 and xy = 0 force y^3 = x^2 y = 0
    assert_eq!(b.graded_dims(4).unwrap(), vec![1, 2, 2, 0, 0]);
}

#[test]
fn presentation_round_trip() {
    let o = charvar::rea(2, &Params::symbolic(), 3).unwrap();
    let text = render_presentation(&o);
    let back = parse_presentation(&text, 3).unwrap();
    assert_eq!(back.names(), o.names());
    assert_eq!(back.relations(), o.relations());
    assert_eq!(back.graded_dims(3).unwrap(), vec![1, 4, 10, 20]);
    assert_eq!(render_presentation(&back), text);
    assert_eq!(back.generators()[0].legs, Some((1, 1)));
}

#[test]
fn malformed_presentations_are_rejected() {
    for bad in [
        "relations:\nx\n",
        "generators:\nx 0\n",
        "generators:\nx 1\nx 1\n",
        "generators:\nq 1\n",
        "generators:\nx 1\nrelations:\nx*y\n",
        "generators:\nx 1 [1,2\n",
        "generators:\nx 1\nrelations:\nx^-1\n",
        "generators:\nx 1\nrelations:\nx/(x)\n",
        "generators:\nx 1\nrelations:\nq^5000*x - 1\n",
    ] {
        assert!(parse_presentation(bad, 2).is_err(), "{bad:?}");
    }
    match parse_presentation("generators:\nx 1\nrelations:\nx +\n", 2) {
        Err(NcError::Format { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn homomorphisms_are_verified() {
    let a = Arc::new(parse_presentation(QUANTUM_PLANE, 3).unwrap());
    let id = GeneratorMap::identity(a.clone());
    assert!(id.verify(3).unwrap().passed());
    // x ↦ y, y ↦ x only respects the relation when q^2 = 1
    let swap = GeneratorMap::new(a.clone(), a.clone(), vec![a.gen("y"), a.gen("x")]).unwrap();
    let rep = swap.verify(3).unwrap();
    assert!(!rep.passed());
    assert!(rep.residuals[0].location.starts_with("relation 0"));
    // x ↦ x, y ↦ 0 is fine
    let kill = GeneratorMap::new(a.clone(), a.clone(), vec![a.gen("x"), NCPoly::zero()]).unwrap();
    assert!(kill.verify(3).unwrap().passed());
    assert!(id.compose(&kill).unwrap().verify(3).unwrap().passed());
    assert!(GeneratorMap::new(a.clone(), a, vec![NCPoly::one()]).is_err());
}

#[test]
fn quotients_and_their_maps() {
    let a = Arc::new(parse_presentation(QUANTUM_PLANE, 4).unwrap());
    let (b, map) = quotient(&a, &[a.gen("x")]).unwrap();
    assert_eq!(b.graded_dims(4).unwrap(), vec![1, 1, 1, 1, 1]);
    assert!(map.verify(4).unwrap().passed());
    let x2 = a.mul(&a.gen("x"), &a.gen("x")).unwrap();
    let (c, _) = quotient(&a, &[x2]).unwrap();
    assert_eq!(c.graded_dims(4).unwrap(), vec![1, 2, 2, 2, 2]);
}

#[test]
fn classical_limit_of_the_quantum_plane() {
    let a = parse_presentation(QUANTUM_PLANE, 3).unwrap();
    let rep = classical_limit_commutativity(&a, 3, &rat(2, 5)).unwrap();
    assert!(rep.passed(), "{rep}");
    let skew = parse_presentation("generators:\nx 1\ny 1\nrelations:\ny*x + x*y\n", 3).unwrap();
    assert!(!classical_limit_commutativity(&skew, 3, &rat(2, 5))
        .unwrap()
        .passed());
    // q-dependent dimensions: x*y = 0 only after dividing by q - 1
    let jump = parse_presentation(
        "generators:\nx 1\ny 1\nrelations:\ny*x - x*y\n(q - 1)*x*x\n",
        3,
    )
    .unwrap();
    let rep = classical_limit_commutativity(&jump, 3, &rat(2, 5)).unwrap();
    assert!(!rep.passed());
}

#[test]
fn specialization_matches_generic_dims() {
    let o = charvar::rea(2, &Params::symbolic(), 3).unwrap();
    let p = Params::at_i64((3, 7), (2, 5));
    let at = o.specialize(&p).unwrap();
    let direct = charvar::rea(2, &p, 3).unwrap();
    assert_eq!(at.graded_dims(3).unwrap(), direct.graded_dims(3).unwrap());
    assert_eq!(at.relations(), direct.relations());
}

fn rea_at(q: (i64, i64)) -> AlgebraPresentation<Rat> {
    charvar::rea(2, &Params::at_i64(q, (2, 5)), 3).unwrap()
}

fn small_poly(a: &AlgebraPresentation<Rat>, coeffs: &[(i64, usize, usize)]) -> NCPoly<Rat> {
    let n = a.ngens() as u8;
    let mut p = NCPoly::zero();
    for &(c, i, j) in coeffs {
        p.add_term(vec![i as u8 % n, j as u8 % n], &Rat::from_i64(c));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_forms_ignore_reduction_order(
        coeffs in prop::collection::vec((-5i64..=5, 0usize..4, 0usize..4), 1..5),
        extra in 0usize..4,
        seed in any::<u64>(),
    ) {
        let a = rea_at((3, 7));
        let p = small_poly(&a, &coeffs).mul(&NCPoly::gen(extra as u8));
        let nf = a.normal_form(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(&a.system().reduce_randomly(&p, &mut rng), &nf);
        prop_assert_eq!(&a.normal_form(&nf).unwrap(), &nf);
        prop_assert!(nf.terms().keys().all(|w| a.is_normal(w)));
    }

    #[test]
    fn multiplication_is_associative(
        x in prop::collection::vec((-3i64..=3, 0usize..4, 0usize..4), 1..3),
        y in 0usize..4,
        z in 0usize..4,
    ) {
        let a = charvar::rea(2, &Params::at_i64((5, 2), (2, 5)), 4).unwrap();
        let x = a.normal_form(&small_poly(&a, &x)).unwrap();
        let (y, z) = (NCPoly::gen(y as u8), NCPoly::gen(z as u8));
        let left = a.mul(&a.mul(&y, &x).unwrap(), &z).unwrap();
        let right = a.mul(&y, &a.mul(&x, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rendered_polynomials_parse_back(coeffs in prop::collection::vec((-9i64..=9, 0usize..3, 0usize..3), 0..6)) {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut p = NCPoly::<RationalScalar>::zero();
        for (c, i, j) in coeffs {
            p.add_term(vec![i as u8, j as u8], &RationalScalar::from_i64(c).mul(&RationalScalar::q()));
        }
        let back = parse_ncpoly(&p.render(&names), &names).unwrap();
        prop_assert_eq!(back, p);
    }
}
