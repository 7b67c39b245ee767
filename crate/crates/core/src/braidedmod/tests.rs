use super::*;
use crate::charvar::rea;
use crate::field::Rat;
use crate::ncalg::NCPoly;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p() -> Params<Rat> {
    Params::at_i64((3, 5), (7, 2))
}

fn int_matrix(v: &[i64], n: usize) -> Matrix<Rat> {
    Matrix::from_fn(n, n, |i, j| Rat::from_integer(v[i * n + j].into()))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rat> {
    let v: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-3..=3)).collect();
    int_matrix(&v, n)
}

fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rat> {
    loop {
        let g = random_matrix(rng, n);
        if g.inverse().is_some() {
            return g;
        }
    }
}

/// Conjugate `E_1` by `g ⊗ 1`.
fn conj(e1: &Matrix<Rat>, g: &Matrix<Rat>, n: usize) -> Matrix<Rat> {
    let gg = g.kron(&Matrix::identity(n));
    gg.mul(e1).mul(&gg.inverse().unwrap())
}

#[test]
fn double_braiding_is_a_braided_module() {
    let p = p();
    for n in [2, 3] {
        let fam = EOperatorFamily::double_braiding(n, &p)
            .unwrap()
            .extended(3, &p)
            .unwrap();
        assert!(check_dkm(&fam, &p, 0).unwrap().passed());
        assert!(check_octagon(&fam, &p, 0).unwrap().passed());
        assert!(annular_braid_rep(&fam, 3, &p).unwrap().check().passed());
        let o = rea(n, &p, 2).unwrap();
        let rho = e_to_rho(&fam).unwrap();
        assert!(
            rho.check(&o).unwrap().passed(),
            "{}",
            rho.check(&o).unwrap()
        );
    }
}

#[test]
fn dictionary_round_trip() {
    let p = p();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (m, n) in [(1, 2), (3, 2), (2, 3)] {
        let images = (0..n * n).map(|_| random_matrix(&mut rng, m)).collect();
        let rho = ModuleRep::new(n, m, images).unwrap();
        let fam = rho_to_e(&rho, &p).unwrap();
        assert_eq!(fam.levels(), 2);
        assert_eq!(e_to_rho(&fam).unwrap(), rho);
        let again = rho_to_e(&e_to_rho(&fam).unwrap(), &p).unwrap();
        assert_eq!(again, fam);
    }
}

/// Naturality of the DKM candidate and the reflection equation relations
/// for the induced action agree, on valid and invalid inputs alike.
#[test]
fn naturality_iff_reflection_equation() {
    let p = p();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3] {
        let o = rea(n, &p, 2).unwrap();
        let db = EOperatorFamily::double_braiding(n, &p)
            .unwrap()
            .e1()
            .clone();
        let counit = rho_to_e(&ModuleRep::counit(n), &p).unwrap().e1().clone();
        let sum = rho_to_e(
            &e_to_rho(&EOperatorFamily::new(n, n, db.clone()).unwrap())
                .unwrap()
                .direct_sum(&ModuleRep::counit(n))
                .unwrap(),
            &p,
        )
        .unwrap()
        .e1()
        .clone();
        let mut cases = vec![
            (db.clone(), n),
            (counit, 1),
            (sum.clone(), n + 1),
            (conj(&db, &invertible(&mut rng, n), n), n),
            (conj(&sum, &invertible(&mut rng, n + 1), n), n + 1),
        ];
        let mut bad = db.clone();
        bad.set(0, 1, bad.get(0, 1).add(&Rat::from_integer(1.into())));
        cases.push((bad, n));
        for m in 1..=2 {
            cases.push((random_matrix(&mut rng, m * n), m));
        }
        let mut seen = (false, false);
        for (e1, m) in cases {
            let fam = project_family(e1, m, n, &p).unwrap();
            let nat = check_dkm(&fam, &p, 0).unwrap().passed();
            let rel = e_to_rho(&fam).unwrap().check(&o).unwrap().passed();
            assert_eq!(nat, rel, "n={n} m={m}");
            if nat {
                seen.0 = true;
            } else {
                seen.1 = true;
            }
        }
        assert!(seen.0 && seen.1);
    }
}

#[test]
fn octagon_against_stored_shift() {
    let p = p();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut fam = EOperatorFamily::double_braiding(2, &p)
        .unwrap()
        .extended(2, &p)
        .unwrap();
    fam.e_shift = Some(octagon_shift(&fam, &p).unwrap());
    assert!(check_octagon(&fam, &p, 0).unwrap().passed());
    let r = check_dkm(&fam, &p, 0).unwrap();
    assert!(r.passed());
    assert_eq!(r.details["forms_agree"], serde_json::json!(true));
    fam.e_shift = Some(random_matrix(&mut rng, 8));
    assert!(!check_octagon(&fam, &p, 0).unwrap().passed());
    assert!(!check_dkm(&fam, &p, 0).unwrap().passed());
    // shift read off from E_2 through DMcat
    let bad = project_family(invertible(&mut rng, 2), 1, 2, &p).unwrap();
    let r = check_octagon(&bad, &p, 0).unwrap();
    assert!(!r.passed());
    assert_eq!(r.details["shift_source"], serde_json::json!("DMcat"));
}

#[test]
fn vacuum_is_balanced() {
    let p = p();
    let ribbon = RibbonData::standard(2, &p);
    let fam = rho_to_e(&ModuleRep::counit(2), &p).unwrap();
    assert_eq!(fam.e1(), &Matrix::identity(2));
    let bal = canonical_balancing(&fam, Matrix::identity(1), &ribbon);
    assert!(check_balanced(&fam, &bal, &ribbon, &p).unwrap().passed());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let wrong = BalancingData {
        phi_m: Matrix::identity(1),
        phi_mv: Some(random_matrix(&mut rng, 2)),
    };
    assert!(!check_balanced(&fam, &wrong, &ribbon, &p).unwrap().passed());
    // a family that is not balanced for any φ_M fails at level two
    let bad = project_family(random_matrix(&mut rng, 2), 1, 2, &p).unwrap();
    let bal = canonical_balancing(&bad, Matrix::identity(1), &ribbon);
    assert!(!check_balanced(&bad, &bal, &ribbon, &p).unwrap().passed());

    let p1 = Params::at_i64((1, 1), (7, 2));
    let triv = RibbonData::trivial(2);
    let fam = rho_to_e(&ModuleRep::counit(2), &p1).unwrap();
    let bal = BalancingData {
        phi_m: Matrix::identity(1),
        phi_mv: Some(Matrix::identity(2)),
    };
    assert!(check_balanced(&fam, &bal, &triv, &p1).unwrap().passed());
}

#[test]
fn double_braiding_balanced_by_twist() {
    let p = p();
    let ribbon = RibbonData::standard(2, &p);
    let fam = EOperatorFamily::double_braiding(2, &p)
        .unwrap()
        .extended(2, &p)
        .unwrap();
    let phi = Matrix::identity(2).scale(&ribbon.theta_v);
    let bal = canonical_balancing(&fam, phi, &ribbon);
    assert!(check_balanced(&fam, &bal, &ribbon, &p).unwrap().passed());
}

#[test]
fn framing_twist_is_a_parameter() {
    let p = p();
    let theta = RibbonData::standard(2, &p).theta_v;
    let fam = EOperatorFamily::double_braiding(2, &p)
        .unwrap()
        .extended(3, &p)
        .unwrap();
    for k in [-1, 1, 2] {
        let tw = fam.twisted(k, &theta, &p).unwrap();
        assert!(check_dkm(&tw, &p, k).unwrap().passed());
        assert!(!check_dkm(&tw, &p, 0).unwrap().passed());
        assert_eq!(tw.twisted(-k, &theta, &p).unwrap(), fam);
    }
}

#[test]
fn annular_rep_names_the_failing_relation() {
    let p = p();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fam = EOperatorFamily::new(1, 2, random_matrix(&mut rng, 2)).unwrap();
    let r = annular_braid_rep(&fam, 3, &p).unwrap().check();
    assert!(!r.passed());
    assert!(r
        .residuals
        .iter()
        .all(|x| x.location.starts_with("τ σ1 τ σ1")));
}

#[test]
fn field_goal_gives_right_multiplication() {
    let p = p();
    let o = rea(2, &p, 3).unwrap();
    let reg = regular_module(&o, 3, &p).unwrap();
    assert!(reg.uq.check(&p).passed());
    let n = reg.basis.len();
    for v in FieldGoalVariant::ALL {
        let r = field_goal(&reg.left, &reg.uq, &p, v).unwrap();
        let mut commute = true;
        for a in reg.left.images() {
            for b in r.images() {
                let c = a.commutator(b);
                commute &= (0..n)
                    .filter(|&j| reg.word_degree(j) <= 1)
                    .all(|j| (0..n).all(|i| c.get(i, j).is_zero()));
            }
        }
        assert_eq!(commute, v == FieldGoalVariant::OverUnder, "{v:?}");
    }
    let r = field_goal(&reg.left, &reg.uq, &p, FieldGoalVariant::default()).unwrap();
    for g in 0..4u8 {
        for j in (0..n).filter(|&j| reg.word_degree(j) <= 2) {
            let prod = o
                .mul(&NCPoly::word(reg.basis[j].clone()), &NCPoly::gen(g))
                .unwrap();
            let want = reg.coords(&prod);
            assert!((0..n).all(|i| *r.images()[g as usize].get(i, j) == want[i]));
        }
    }
}

#[test]
fn field_goal_at_q_one_is_the_flip() {
    let p1 = Params::at_i64((1, 1), (7, 2));
    let o = rea(2, &p1, 2).unwrap();
    let reg = regular_module(&o, 2, &p1).unwrap();
    for v in FieldGoalVariant::ALL {
        let r = field_goal(&reg.left, &reg.uq, &p1, v).unwrap();
        assert_eq!(&r, &reg.left);
    }
}

/// The action recovered from `L_A` on `O_{≤2}` sends `x ↦ x · 1`.
#[test]
fn l_a_recovers_the_regular_action() {
    let p = p();
    let o = rea(2, &p, 2).unwrap();
    let reg = regular_module(&o, 2, &p).unwrap();
    assert_eq!(reg.basis.len(), 15);
    let fam = rho_to_e(&reg.left, &p).unwrap();
    let rho = e_to_rho(&fam).unwrap();
    let one = reg.basis.iter().position(|w| w.is_empty()).unwrap();
    for (k, w) in reg.basis.iter().enumerate() {
        let m = rho.eval(&NCPoly::word(w.clone()));
        for i in 0..reg.basis.len() {
            let want = if i == k {
                Rat::from_integer(1.into())
            } else {
                Rat::from_integer(0.into())
            };
            assert_eq!(m.get(i, one), &want);
        }
    }
}

#[test]
fn json_round_trip() {
    let p = p();
    let fam = EOperatorFamily::double_braiding(2, &p)
        .unwrap()
        .extended(2, &p)
        .unwrap();
    let sym = crate::field::Params::symbolic();
    let fam_s = EOperatorFamily::double_braiding(2, &sym)
        .unwrap()
        .extended(2, &sym)
        .unwrap();
    let text = fam_s.to_json().to_string();
    let back: EOperatorFamily<Rat> = EOperatorFamily::from_json_str(&text, &p).unwrap();
    assert_eq!(back, fam);
    let rho = e_to_rho(&fam_s).unwrap();
    let back: ModuleRep<Rat> = ModuleRep::from_json_str(&rho.to_json().to_string(), &p).unwrap();
    assert_eq!(back, e_to_rho(&fam).unwrap());
    let bal = canonical_balancing(&fam_s, Matrix::identity(2), &RibbonData::standard(2, &sym));
    let back: BalancingData<Rat> =
        BalancingData::from_json_str(&bal.to_json().to_string(), 2, 2, &p).unwrap();
    assert_eq!(
        back,
        canonical_balancing(&fam, Matrix::identity(2), &RibbonData::standard(2, &p))
    );
    for bad in [
        "{}",
        r#"{"m":1,"n":2,"e":[]}"#,
        r#"{"m":0,"n":2,"e":[1]}"#,
        r#"{"m":1,"n":9,"e":[1]}"#,
    ] {
        assert!(
            EOperatorFamily::<Rat>::from_json_str(bad, &p).is_err(),
            "{bad}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_naturality_iff_relations(v in proptest::collection::vec(-2i64..=2, 16), diag in any::<bool>()) {
        let p = p();
        let o = rea(2, &p, 2).unwrap();
        let mut e1 = int_matrix(&v, 4);
        if diag {
            // start from a valid family and perturb one entry
            e1 = EOperatorFamily::double_braiding(2, &p).unwrap().e1().add(&Matrix::from_fn(4, 4, |i, j| {
                if i == 0 && j == 3 { Rat::from_integer(v[0].into()) } else { Rat::from_integer(0.into()) }
            }));
        }
        let fam = project_family(e1, 2, 2, &p).unwrap();
        let nat = check_dkm(&fam, &p, 0).unwrap().passed();
        let rel = e_to_rho(&fam).unwrap().check(&o).unwrap().passed();
        prop_assert_eq!(nat, rel);
    }

    #[test]
    fn prop_valid_families_satisfy_annular_relations(v in proptest::collection::vec(-2i64..=2, 4)) {
        let p = p();
        let g = int_matrix(&v, 2);
        prop_assume!(g.inverse().is_some());
        let db = EOperatorFamily::double_braiding(2, &p).unwrap();
        let fam = EOperatorFamily::new(2, 2, conj(db.e1(), &g, 2)).unwrap().extended(2, &p).unwrap();
        prop_assert!(annular_braid_rep(&fam, 3, &p).unwrap().check().passed());
        prop_assert!(check_dkm(&fam, &p, 0).unwrap().passed());
        prop_assert!(check_octagon(&fam, &p, 0).unwrap().passed());
    }
}
