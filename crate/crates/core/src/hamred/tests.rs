use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::braidedmod::regular_module;
use crate::charvar::{self, mirabolic_generator, quantum_det, rea};
use crate::field::{Params, Rat};
use crate::ncalg::AlgebraPresentation;
use crate::uq::AdjointAction;

fn samples(n: usize, seed: u64) -> Vec<Params<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Params::random(&mut rng, 50)).collect()
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

#[test]
fn invariants_of_o_q() {
    for p in samples(2, 1) {
        let o = rea(2, &p, 3).unwrap();
        let act = AdjointAction::on_matrix_generators(&o, &p).unwrap();
        let inv = invariants(&o, &act, 3).unwrap();
        // classical oracle: invariants are C[tr, det], so dim = floor(k/2) + 1
        let oracle: Vec<usize> = (0..4).map(|k| k / 2 + 1).collect();
        assert_eq!(inv.dims, oracle);
        assert!(inv.report.passed(), "{}", inv.report);
        // the degree-1 invariant is the quantum trace
        let tr = charvar::quantum_trace_of(&o.matrix().unwrap(), &p);
        assert!(inv.coords(&o.normal_form(&tr).unwrap()).is_some());
    }
}

#[test]
fn disc_and_annulus_reduce_to_the_ground_field() {
    let p = Params::at(rat(3, 7), rat(2, 5));
    let ground = AlgebraPresentation::ground(3);
    let act = AdjointAction::on_matrix_generators(&ground, &p).unwrap();
    let disc = hamiltonian_reduction(&ground, &[], &act, 2).unwrap();
    assert_eq!(disc.dims, vec![1, 0, 0]);

    let o = Arc::new(rea(2, &p, 5).unwrap());
    let act = AdjointAction::on_matrix_generators(&o, &p).unwrap();
    let ideal = moment_ideal(&crate::ncalg::GeneratorMap::identity(o.clone())).unwrap();
    let ann = hamiltonian_reduction(&o, &ideal, &act, 3).unwrap();
    assert_eq!(ann.dims, vec![1, 0, 0, 0]);
    assert_eq!(ann.quotient_dims, vec![1, 0, 0, 0]);
    assert!(ann.report.passed(), "{}", ann.report);
}

#[test]
fn monodromy_determinant_is_c_squared() {
    let p = Params::at(rat(5, 3), rat(2, 7));
    let dq = charvar::dq(2, &p, 8).unwrap();
    let (a, b) = charvar::handle_matrices(&dq, 1, 1).unwrap();
    let mu = charvar::torus_monodromy(&a, &b, &p);
    let c = charvar::torus_denominator(&a, &b, &p);
    let lhs = dq.normal_form(&quantum_det(&mu, &p)).unwrap();
    let rhs = dq.mul(&c, &c).unwrap().scale(&p.qp(8));
    assert_eq!(lhs, rhs);
}

#[test]
fn mirabolic_pullback_is_c_times_generator() {
    let p = Params::at(rat(5, 3), rat(2, 7));
    let dq = Arc::new(charvar::dq(2, &p, 8).unwrap());
    let o = Arc::new(rea(2, &p, 2).unwrap());
    let spec = crate::charvar::SurfaceSpec::closed_minus_disc(1);
    let mu = charvar::boundary_moment_map(&spec, 2, &p, o.clone(), dq.clone()).unwrap();
    let g = mirabolic_generator(&o, &p).unwrap();
    let cleared = mu.apply_cleared_to(&g, 2).unwrap();
    let m = torus_ideal(&dq, &p, TorusMarking::Mirabolic)
        .unwrap()
        .remove(0);
    let (a, b) = charvar::handle_matrices(&dq, 1, 1).unwrap();
    let c = dq
        .normal_form(&charvar::torus_denominator(&a, &b, &p))
        .unwrap();
    assert_eq!(cleared, dq.mul(&c, &m).unwrap());
}

#[test]
fn unmarked_torus_matches_difference_operators() {
    for p in samples(3, 2) {
        let red = torus_reduction(&p, TorusMarking::Unmarked, 2).unwrap();
        let oracle = dqh_w_oracle(p.q.clone(), 2);
        assert_eq!(red.dims, oracle.dims);
        assert_eq!(red.dims, vec![1, 2, 6]);
        assert!(red.report.passed(), "{}", red.report);
    }
}

#[test]
fn dqh_oracle_dims_and_invariance() {
    let q = rat(3, 2);
    let o = dqh_w_oracle(q.clone(), 4);
    assert_eq!(o.dims, vec![1, 2, 6, 10, 19]);
    assert_eq!(dqh_w_oracle(Rat::from_i64(1), 4).dims, o.dims);
    for level in &o.basis {
        for op in level {
            assert_eq!(op.permute(&[1, 0]), *op);
        }
    }
}

#[test]
fn macdonald_operator_on_one_and_at_t_one() {
    let p = Params::at(rat(3, 5), rat(7, 2));
    let one = BiPoly::one();
    assert_eq!(
        macdonald_operator(&one, &p).unwrap(),
        BiPoly::monomial(0, 0, rat(9, 2))
    );
    // t = 1: D = T_1 + T_2
    let p1 = Params::at(rat(3, 5), Rat::from_i64(1));
    let f = BiPoly::monomial_symmetric(3, 1).add(&BiPoly::monomial_symmetric(2, 0));
    let shifts = f
        .rescale(&p1.q, &Rat::from_i64(1))
        .add(&f.rescale(&Rat::from_i64(1), &p1.q));
    assert_eq!(macdonald_operator(&f, &p1).unwrap(), shifts);
    // preserves symmetry and degree
    let g = macdonald_operator(&f, &p).unwrap();
    assert!(g.is_symmetric());
    assert_eq!(g.degree(), Some(4));
}

#[test]
fn daha_fragment_dims() {
    let p = Params::at(rat(3, 5), rat(7, 2));
    let frag = daha_oracle_gl2(&p, 4);
    assert_eq!(frag.dims, vec![1, 2, 6, 10, 19]);
    assert!(frag.report.passed(), "{}", frag.report);
    // e1 commutes with itself
    let w = frag.word_operator(&[DahaGen::E1, DahaGen::E1]);
    assert_eq!(w, frag.word_operator(&[DahaGen::E1, DahaGen::E1]));
}

#[test]
fn mirabolic_torus_matches_daha() {
    for p in samples(3, 3) {
        let red = torus_reduction(&p, TorusMarking::Mirabolic, 4).unwrap();
        assert!(red.report.passed(), "{}", red.report);
        assert_eq!(red.dims, vec![1, 2, 6, 10, 19]);
        let dq = charvar::dq(2, &p, 1).unwrap();
        let frag = daha_oracle_gl2(&matching_daha_params(&p), 4);
        let rep = compare_reduction_to_daha(&red, &handle_bidegree(&dq), &frag, 4);
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.details["orientation"], "direct");
        assert_eq!(rep.details["relations_2_2"], 1);
        // the degree-4 relation pins the shift parameter
        let wrong = daha_oracle_gl2(&p, 4);
        let rep = compare_reduction_to_daha(&red, &handle_bidegree(&dq), &wrong, 4);
        assert!(!rep.passed());
        assert!(
            rep.residuals.iter().any(|r| r.location.contains("(2, 2)")),
            "{rep}"
        );
    }
}

#[test]
fn perturbed_mirabolic_ideal_is_detected() {
    let p = Params::at(rat(3, 7), rat(2, 5));
    let dq = charvar::dq(2, &p, 4).unwrap();
    let mut g = torus_ideal(&dq, &p, TorusMarking::Mirabolic)
        .unwrap()
        .remove(0);
    let (w, c) = g
        .terms()
        .iter()
        .next()
        .map(|(w, c)| (w.clone(), c.clone()))
        .unwrap();
    g.set_coeff(w, c.add(&Rat::from_i64(1)));
    let act = AdjointAction::on_matrix_generators(&dq, &p).unwrap();
    let bad = hamiltonian_reduction(&dq, &[g], &act, 4).unwrap();
    let frag = daha_oracle_gl2(&matching_daha_params(&p), 4);
    let rep = compare_reduction_to_daha(&bad, &handle_bidegree(&dq), &frag, 4);
    assert!(!rep.passed());
    assert!(
        rep.residuals
            .iter()
            .any(|r| r.location.contains("ideal not stable") && r.location.contains("degree 4")),
        "{rep}"
    );
}

#[test]
fn classical_limit_of_mirabolic_torus() {
    let p = Params::at(Rat::from_i64(1), rat(2, 5));
    let red = torus_reduction(&p, TorusMarking::Mirabolic, 4).unwrap();
    assert!(red.report.passed(), "{}", red.report);
    assert_eq!(red.dims, dqh_w_oracle(Rat::from_i64(1), 4).dims);
}

#[test]
fn relative_tensor_examples() {
    let p = Params::at(rat(3, 7), rat(2, 5));
    let o = rea(2, &p, 5).unwrap();
    let reg = regular_module(&o, 4, &p).unwrap();
    let r = regular_right_action(&reg, &p).unwrap();
    assert_eq!(
        relative_tensor_dims::<Rat>(&counit_action(2), &counit_action(2), 2).unwrap(),
        vec![1, 0, 0]
    );
    assert_eq!(
        relative_tensor_dims(&r, &counit_action(2), 3).unwrap(),
        vec![1, 0, 0, 0]
    );
    assert_eq!(
        relative_tensor_dims(&r, &regular_left_action(&reg), 3).unwrap(),
        vec![1, 4, 10, 20]
    );
}

#[test]
fn relative_tensor_agrees_with_torus_quotient() {
    let p = Params::at(rat(3, 7), rat(2, 5));
    let dq = charvar::dq(2, &p, 4).unwrap();
    let (a, b) = charvar::handle_matrices(&dq, 1, 1).unwrap();
    let mu = charvar::torus_monodromy(&a, &b, &p);
    let images: Vec<_> = (0..4)
        .map(|g| dq.normal_form(mu.get(g / 2, g % 2)).unwrap())
        .collect();
    let c = dq
        .normal_form(&charvar::torus_denominator(&a, &b, &p))
        .unwrap()
        .scale(&p.qp(4));
    let m = moment_right_action(&dq, &images, Some(&c), 4).unwrap();
    let rel = relative_tensor_dims(&m, &counit_action(2), 3).unwrap();
    let red = torus_reduction(&p, TorusMarking::Unmarked, 3).unwrap();
    assert_eq!(rel, red.quotient_dims);
}

fn small_op() -> impl Strategy<Value = DifferenceOperator<Rat>> {
    prop::collection::vec((0i32..3, 0i32..3, -1i32..2, 0i32..2, -3i64..4), 1..4).prop_map(|ts| {
        let q = rat(3, 2);
        ts.into_iter().fold(
            DifferenceOperator::zero(2, q.clone()),
            |acc, (a, b, s, u, c)| {
                acc.add(&DifferenceOperator::monomial(
                    2,
                    q.clone(),
                    vec![a, b],
                    vec![s, u],
                    Rat::from_i64(c),
                ))
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn prop_composition_is_associative(a in small_op(), b in small_op(), c in small_op()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn prop_composition_matches_action(a in small_op(), b in small_op(), e in 0i32..3, f in 0i32..3) {
        let x: LaurentVec<Rat> = [(vec![e, f], Rat::from_i64(1))].into_iter().collect();
        prop_assert_eq!(a.compose(&b).apply(&x), a.apply(&b.apply(&x)));
    }
}
