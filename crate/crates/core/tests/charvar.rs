use std::sync::Arc;

use proptest::prelude::*;
use qcv_core::charvar::{self, binomial, MarkingKind, SurfaceSpec};
use qcv_core::ncalg::{AlgebraPresentation, NCPoly};
use qcv_core::{Params, Rat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly_dims(k: usize, d: usize) -> Vec<usize> {
    (0..=d).map(|j| binomial(j + k - 1, j)).collect()
}

fn central(a: &AlgebraPresentation<Rat>, z: &NCPoly<Rat>) -> bool {
    (0..a.ngens() as u8).all(|g| {
        let x = NCPoly::gen(g);
        a.mul(z, &x).unwrap() == a.mul(&x, z).unwrap()
    })
}

#[test]
fn rea_dims_are_polynomial() {
    let o = charvar::rea(2, &Params::symbolic(), 4).unwrap();
    assert_eq!(o.graded_dims(4).unwrap(), vec![1, 4, 10, 20, 35]);
    let o3 = charvar::rea(3, &Params::at_i64((3, 7), (2, 5)), 3).unwrap();
    assert_eq!(o3.graded_dims(3).unwrap(), poly_dims(9, 3));
    assert_eq!(o3.ngens(), 9);
}

#[test]
fn dq_and_higher_genus_dims() {
    let p = Params::at_i64((3, 7), (2, 5));
    let d = charvar::dq(2, &p, 4).unwrap();
    assert_eq!(d.graded_dims(4).unwrap(), vec![1, 8, 36, 120, 330]);
    let g2 = charvar::moduli_algebra(&SurfaceSpec::closed_minus_disc(2), 2, &p, 2).unwrap();
    assert_eq!(g2.graded_dims(2).unwrap(), vec![1, 16, 136]);
    let g0 = charvar::moduli_algebra(&SurfaceSpec::closed_minus_disc(0), 2, &p, 3).unwrap();
    assert_eq!(g0.graded_dims(3).unwrap(), vec![1, 0, 0, 0]);
}

#[test]
fn quantum_det_and_trace_are_central() {
    let p = Params::at_i64((5, 3), (2, 5));
    let o = charvar::rea(2, &p, 4).unwrap();
    let a = o.matrix().unwrap();
    let det = o.normal_form(&charvar::quantum_det(&a, &p)).unwrap();
    let tr = o.normal_form(&charvar::quantum_trace_of(&a, &p)).unwrap();
    assert!(central(&o, &tr));
    assert!(central(&o, &det));
    // a plain matrix entry is not
    assert!(!central(&o, &NCPoly::gen(1)));
}

#[test]
fn counit_and_torus_moment_map() {
    let p = Params::at_i64((3, 7), (2, 5));
    let o = Arc::new(charvar::rea(2, &p, 2).unwrap());
    assert!(charvar::counit(o.clone())
        .unwrap()
        .verify(2)
        .unwrap()
        .passed());
    let spec = SurfaceSpec::closed_minus_disc(1);
    let target = Arc::new(charvar::dq(2, &p, 8).unwrap());
    let mu = charvar::boundary_moment_map(&spec, 2, &p, o.clone(), target.clone()).unwrap();
    let rep = mu.verify(2).unwrap();
    assert!(rep.passed(), "{rep}");
    // shifting one off-diagonal image by a constant breaks the relations
    let mut bad = mu.clone();
    bad.images[1] = bad.images[1].add(&NCPoly::one());
    assert!(!bad.verify(2).unwrap().passed());
    assert!(
        charvar::boundary_moment_map(&SurfaceSpec::closed_minus_disc(2), 2, &p, o, target).is_err()
    );
}

#[test]
fn mirabolic_quotient_dims() {
    let p = Params::at_i64((3, 7), (2, 5));
    let (a, map) = charvar::mirabolic_quotient(&p, 4).unwrap();
    let expected: Vec<usize> = (0..=4).map(|k| (k + 1) * (k + 1)).collect();
    assert_eq!(a.graded_dims(4).unwrap(), expected);
    assert!(map.verify(4).unwrap().passed());
    let sym = Params::symbolic();
    let (a, _) = charvar::mirabolic_quotient(&sym, 3).unwrap();
    assert_eq!(a.graded_dims(3).unwrap(), vec![1, 4, 9, 16]);
}

#[test]
fn markings_compile() {
    let spec: SurfaceSpec = "genus=1 markings=[a:mirabolic, b:mirabolic]"
        .parse()
        .unwrap();
    assert_eq!(spec.boundary, 1);
    assert_eq!(spec.euler_characteristic(), -1);
    let ms = charvar::compile_markings(&spec, &Params::at_i64((3, 7), (2, 5)), 2).unwrap();
    assert_eq!(
        ms.iter().map(|m| m.label.as_str()).collect::<Vec<_>>(),
        ["a", "b"]
    );
    assert!(ms.iter().all(|m| m.moment_map.verify(2).unwrap().passed()));
    let unlabeled: SurfaceSpec = "genus=0 boundary=2 markings=[mirabolic]".parse().unwrap();
    assert_eq!(
        unlabeled.markings,
        vec![("p1".to_string(), MarkingKind::Mirabolic)]
    );
    assert_eq!(unlabeled.euler_characteristic(), 0);
}

#[test]
fn classical_limits_commute() {
    let t0 = Rat::new(2.into(), 5.into());
    let o = charvar::rea(2, &Params::symbolic(), 3).unwrap();
    let rep = qcv_core::ncalg::classical_limit_commutativity(&o, 3, &t0).unwrap();
    assert!(rep.passed(), "{rep}");
    assert_eq!(
        rep.details["dims_at_q_1"],
        serde_json::json!([1, 4, 10, 20])
    );
    let d = charvar::dq(2, &Params::symbolic(), 2).unwrap();
    assert!(qcv_core::ncalg::classical_limit_commutativity(&d, 2, &t0)
        .unwrap()
        .passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn rea_is_flat_at_random_points(seed in any::<u64>()) {
        let p = Params::random(&mut ChaCha8Rng::seed_from_u64(seed), 20);
        let o = charvar::rea(2, &p, 3).unwrap();
        prop_assert_eq!(o.graded_dims(3).unwrap(), vec![1, 4, 10, 20]);
        let a = o.matrix().unwrap();
        let det = o.normal_form(&charvar::quantum_det(&a, &p)).unwrap();
        prop_assert!(central(&o, &det));
    }

    #[test]
    fn mirabolic_quotient_is_flat_at_random_points(seed in any::<u64>()) {
        let p = Params::random(&mut ChaCha8Rng::seed_from_u64(seed), 20);
        let (a, _) = charvar::mirabolic_quotient(&p, 3).unwrap();
        prop_assert_eq!(a.graded_dims(3).unwrap(), vec![1, 4, 9, 16]);
    }
}
