//! The eleven acceptance criteria. Each prints one pass/fail line with its
//! wall time against a pinned limit; the test fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use qcv_core::braidedmod::{
    annular_braid_rep, canonical_balancing, check_balanced, check_dkm, check_octagon, e_to_rho,
    field_goal, octagon_shift, project_family, regular_module, rho_to_e, BalancingData,
    EOperatorFamily, FieldGoalVariant, ModuleRep,
};
use qcv_core::charvar::{self, binomial, SurfaceSpec};
use qcv_core::hamred::{
    compare_reduction_to_daha, counit_action, daha_oracle_gl2, dqh_w_oracle, hamiltonian_reduction,
    handle_bidegree, matching_daha_params, moment_ideal, moment_right_action, regular_right_action,
    relative_tensor_dims, torus_ideal, torus_reduction, TorusMarking,
};
use qcv_core::linalg::Matrix;
use qcv_core::ncalg::{classical_limit_commutativity, GeneratorMap, NCPoly};
use qcv_core::tensorcalc::{check_hecke, check_qybe, r_matrix, RibbonData, TensorOperator};
use qcv_core::uq::AdjointAction;
use qcv_core::{CheckReport, Field, Params, Rat, RationalScalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Limit for each rank in the first criterion.
const RMATRIX_LIMIT: Duration = Duration::from_secs(10);
const MINUTE: Duration = Duration::from_secs(60);

/// Denominator bound and seed of the random rational parameter samples.
const MAX_DEN: i64 = 50;
const SEED: u64 = 20_261_015;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn passed(rep: &CheckReport, what: &str) -> Result<(), String> {
    ensure!(rep.passed(), "{what}: {rep}");
    Ok(())
}

fn samples(n: usize) -> Vec<Params<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..n).map(|_| Params::random(&mut rng, MAX_DEN)).collect()
}

fn label(p: &Params<Rat>) -> String {
    format!("q={} t={}", p.q, p.t)
}

fn rat(a: i64, b: i64) -> Rat {
    Rat::new(a.into(), b.into())
}

fn int_matrix(rng: &mut ChaCha8Rng, rows: usize) -> Matrix<Rat> {
    let v: Vec<i64> = (0..rows * rows).map(|_| rng.gen_range(-3..=3)).collect();
    Matrix::from_fn(rows, rows, |i, j| Rat::from_i64(v[i * rows + j]))
}

fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rat> {
    loop {
        let g = int_matrix(rng, n);
        if g.inverse().is_some() {
            return g;
        }
    }
}

/// `E_1` conjugated by `g ⊗ 1`.
fn conj(e1: &Matrix<Rat>, g: &Matrix<Rat>, n: usize) -> Matrix<Rat> {
    let gg = g.kron(&Matrix::identity(n));
    gg.mul(e1).mul(&gg.inverse().expect("invertible"))
}

fn c1_rmatrix() -> Outcome {
    let p = Params::symbolic();
    let mut times = Vec::new();
    for n in [2, 3] {
        let start = Instant::now();
        let r = r_matrix(n, &p).map_err(|e| e.to_string())?;
        passed(
            &check_qybe(&r).map_err(|e| e.to_string())?,
            &format!("qybe N={n}"),
        )?;
        passed(
            &check_hecke(&r, &p.q).map_err(|e| e.to_string())?,
            &format!("hecke N={n}"),
        )?;
        let t = start.elapsed();
        ensure!(t < RMATRIX_LIMIT, "N={n} took {:.1} s", t.as_secs_f64());
        times.push(format!("N={n} {:.2} s", t.as_secs_f64()));
    }
    Ok(format!("symbolic, {}", times.join(", ")))
}

fn c2_flatness() -> Outcome {
    let o = charvar::rea(2, &Params::symbolic(), 4).map_err(|e| e.to_string())?;
    let dims = o.graded_dims(4).map_err(|e| e.to_string())?;
    let oracle: Vec<usize> = (0..=4).map(|d| binomial(d + 3, 3)).collect();
    ensure!(oracle == [1, 4, 10, 20, 35], "oracle {oracle:?}");
    ensure!(dims == oracle, "dims {dims:?}, expected {oracle:?}");
    Ok(format!("dims {dims:?}"))
}

fn c3_classical() -> Outcome {
    let sym = Params::symbolic();
    let t0 = rat(2, 5);
    let algebras = [
        ("O_q(GL_2)", charvar::rea(2, &sym, 3)),
        ("D_q(GL_2)", charvar::dq(2, &sym, 3)),
        (
            "genus 2",
            charvar::moduli_algebra(&SurfaceSpec::closed_minus_disc(2), 2, &sym, 3),
        ),
    ];
    let mut out = Vec::new();
    for (name, a) in algebras {
        let a = a.map_err(|e| e.to_string())?;
        let rep = classical_limit_commutativity(&a, 3, &t0).map_err(|e| e.to_string())?;
        passed(&rep, name)?;
        out.push(format!("{name} {}", rep.details["dims_at_q_1"]));
    }
    Ok(out.join(", "))
}

fn c4_moment_maps() -> Outcome {
    let p = Params::symbolic();
    let o = Arc::new(charvar::rea(2, &p, 3).map_err(|e| e.to_string())?);
    let eps = charvar::counit(o.clone()).map_err(|e| e.to_string())?;
    passed(&eps.verify(3).map_err(|e| e.to_string())?, "counit")?;
    // relations are quadratic; images have degree 4, so the target needs 8
    let target = Arc::new(charvar::dq(2, &p, 8).map_err(|e| e.to_string())?);
    let mu = charvar::boundary_moment_map(&SurfaceSpec::closed_minus_disc(1), 2, &p, o, target)
        .map_err(|e| e.to_string())?;
    let rep = mu.verify(3).map_err(|e| e.to_string())?;
    passed(&rep, "torus boundary moment map")?;
    Ok(format!(
        "symbolic, {} relations checked",
        rep.details["relations_checked"]
    ))
}

fn c5_iff() -> Outcome {
    let p = Params::at_i64((3, 5), (7, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut valid, mut invalid) = (0, 0);
    for n in [2, 3] {
        let o = charvar::rea(n, &p, 2).map_err(|e| e.to_string())?;
        let db = EOperatorFamily::double_braiding(n, &p)
            .map_err(|e| e.to_string())?
            .e1()
            .clone();
        let counit = rho_to_e(&ModuleRep::counit(n), &p)
            .map_err(|e| e.to_string())?
            .e1()
            .clone();
        let sum_rep = e_to_rho(&EOperatorFamily::new(n, n, db.clone()).unwrap())
            .unwrap()
            .direct_sum(&ModuleRep::counit(n))
            .unwrap();
        let sum = rho_to_e(&sum_rep, &p)
            .map_err(|e| e.to_string())?
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
        bad.set(0, 1, bad.get(0, 1).add(&Rat::from_i64(1)));
        cases.push((bad, n));
        for m in [1, 2, 2] {
            cases.push((int_matrix(&mut rng, m * n), m));
        }
        for (k, (e1, m)) in cases.into_iter().enumerate() {
            let fam = project_family(e1, m, n, &p).map_err(|e| e.to_string())?;
            let nat = check_dkm(&fam, &p, 0).map_err(|e| e.to_string())?.passed();
            let rel = e_to_rho(&fam)
                .map_err(|e| e.to_string())?
                .check(&o)
                .map_err(|e| e.to_string())?
                .passed();
            ensure!(nat == rel, "N={n} family {k}: dkm {nat}, relations {rel}");
            if nat {
                valid += 1;
            } else {
                invalid += 1;
            }
        }
    }
    ensure!(
        valid >= 1 && invalid >= 1,
        "need both outcomes, got {valid} valid and {invalid} invalid"
    );
    // exact round trips
    for (m, n) in [(1, 2), (3, 2), (2, 3), (4, 3)] {
        let images = (0..n * n).map(|_| int_matrix(&mut rng, m)).collect();
        let rho = ModuleRep::new(n, m, images).map_err(|e| e.to_string())?;
        let fam = rho_to_e(&rho, &p).map_err(|e| e.to_string())?;
        ensure!(e_to_rho(&fam).unwrap() == rho, "ρ → E → ρ, m={m} n={n}");
        ensure!(
            rho_to_e(&e_to_rho(&fam).unwrap(), &p).unwrap() == fam,
            "E → ρ → E, m={m} n={n}"
        );
    }
    // L_A on O_{≤2}: the recovered action sends x to x · 1
    let o = charvar::rea(2, &p, 2).map_err(|e| e.to_string())?;
    let reg = regular_module(&o, 2, &p).map_err(|e| e.to_string())?;
    let rho = e_to_rho(&rho_to_e(&reg.left, &p).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let one = reg
        .basis
        .iter()
        .position(|w| w.is_empty())
        .expect("unit in basis");
    for (k, w) in reg.basis.iter().enumerate() {
        let m = rho.eval(&NCPoly::word(w.clone()));
        for i in 0..reg.basis.len() {
            let want = if i == k {
                Rat::from_i64(1)
            } else {
                Rat::from_i64(0)
            };
            ensure!(*m.get(i, one) == want, "L_A on basis word {k}, row {i}");
        }
    }
    Ok(format!(
        "{} families ({valid} valid, {invalid} invalid), L_A identity on dim {}",
        valid + invalid,
        reg.basis.len()
    ))
}

fn axioms(
    name: &str,
    fam: &EOperatorFamily<Rat>,
    phi_m: Matrix<Rat>,
    p: &Params<Rat>,
) -> Result<(), String> {
    let ribbon = RibbonData::standard(fam.n, p);
    let fam3 = fam.extended(3, p).map_err(|e| e.to_string())?;
    passed(
        &check_dkm(&fam3, p, 0).map_err(|e| e.to_string())?,
        &format!("{name}: dkm"),
    )?;
    passed(
        &check_octagon(&fam3, p, 0).map_err(|e| e.to_string())?,
        &format!("{name}: octagon"),
    )?;
    let bal = canonical_balancing(fam, phi_m, &ribbon);
    passed(
        &check_balanced(&fam3, &bal, &ribbon, p).map_err(|e| e.to_string())?,
        &format!("{name}: balanced"),
    )?;
    for strands in 1..=3 {
        let rep = annular_braid_rep(fam, strands, p)
            .map_err(|e| e.to_string())?
            .check();
        passed(&rep, &format!("{name}: annular, {strands} strands"))?;
    }
    Ok(())
}

fn c6_braided_modules() -> Outcome {
    let p = Params::at_i64((3, 5), (7, 2));
    let theta = RibbonData::standard(2, &p).theta_v;
    let vacuum = rho_to_e(&ModuleRep::counit(2), &p).map_err(|e| e.to_string())?;
    axioms("vacuum", &vacuum, Matrix::identity(1), &p)?;
    // L_A of V ⊕ vacuum: E_1 is invertible, so the octagon is read off from E_2
    let db = EOperatorFamily::double_braiding(2, &p).map_err(|e| e.to_string())?;
    let sum_rep = e_to_rho(&db)
        .unwrap()
        .direct_sum(&ModuleRep::counit(2))
        .unwrap();
    let sum = rho_to_e(&sum_rep, &p).map_err(|e| e.to_string())?;
    let phi = Matrix::from_fn(3, 3, |i, j| {
        if i != j {
            Rat::from_i64(0)
        } else if i < 2 {
            theta.clone()
        } else {
            Rat::from_i64(1)
        }
    });
    axioms("L_A(V ⊕ 1)", &sum, phi, &p)?;
    // L_A of O_{≤2}: E_1 is singular, so E_{M⊗V,V} is taken from the octagon
    // and DKM checks it against E_2
    let o = charvar::rea(2, &p, 2).map_err(|e| e.to_string())?;
    let reg = regular_module(&o, 2, &p).map_err(|e| e.to_string())?;
    let mut la = rho_to_e(&reg.left, &p).map_err(|e| e.to_string())?;
    la.e_shift = Some(octagon_shift(&la, &p).map_err(|e| e.to_string())?);
    let rep = check_dkm(&la, &p, 0).map_err(|e| e.to_string())?;
    passed(&rep, "L_A(O_≤2): dkm")?;
    ensure!(
        rep.details["forms_agree"] == serde_json::json!(true),
        "L_A(O_≤2): DKM and DMcat forms differ"
    );
    let ribbon = RibbonData::standard(2, &p);
    let bal = canonical_balancing(&la, Matrix::identity(la.m), &ribbon);
    passed(
        &check_balanced(&la, &bal, &ribbon, &p).map_err(|e| e.to_string())?,
        "L_A(O_≤2): balanced",
    )?;
    for strands in 1..=3 {
        passed(
            &annular_braid_rep(&la, strands, &p)
                .map_err(|e| e.to_string())?
                .check(),
            &format!("L_A(O_≤2): annular, {strands} strands"),
        )?;
    }
    Ok("vacuum, L_A(V ⊕ 1), L_A(O_≤2); 1 to 3 strands".into())
}

fn c7_field_goal() -> Outcome {
    let p = Params::at_i64((3, 5), (7, 2));
    let o = charvar::rea(2, &p, 3).map_err(|e| e.to_string())?;
    let reg = regular_module(&o, 3, &p).map_err(|e| e.to_string())?;
    let right = field_goal(&reg.left, &reg.uq, &p, FieldGoalVariant::default())
        .map_err(|e| e.to_string())?;
    let n = reg.basis.len();
    // a product of two generators leaves O_{≤3} from degree 2 on
    let cols: Vec<usize> = (0..n).filter(|&j| reg.word_degree(j) <= 1).collect();
    for (x, a) in reg.left.images().iter().enumerate() {
        for (y, b) in right.images().iter().enumerate() {
            let c = a.commutator(b);
            for &j in &cols {
                ensure!(
                    (0..n).all(|i| c.get(i, j).is_zero()),
                    "left {x} and right {y} differ on basis word {j}"
                );
            }
        }
    }
    Ok(format!("O_≤3, dim {n}"))
}

fn c8_unmarked_torus() -> Outcome {
    let mut dims = Vec::new();
    for p in samples(3) {
        let red = torus_reduction(&p, TorusMarking::Unmarked, 2).map_err(|e| e.to_string())?;
        passed(&red.report, &label(&p))?;
        let oracle = dqh_w_oracle(p.q.clone(), 2).dims;
        ensure!(
            red.dims == oracle,
            "{}: reduction {:?}, oracle {oracle:?}",
            label(&p),
            red.dims
        );
        dims = red.dims;
    }
    Ok(format!("3 samples, dims {dims:?}"))
}

fn c9_mirabolic_torus() -> Outcome {
    // degree 4 carries the relation that fixes the DAHA shift parameter
    let d = 4;
    let mut dims = Vec::new();
    for p in samples(3) {
        let red = torus_reduction(&p, TorusMarking::Mirabolic, d).map_err(|e| e.to_string())?;
        passed(&red.report, &format!("{} associativity", label(&p)))?;
        let frag = daha_oracle_gl2(&matching_daha_params(&p), d);
        passed(&frag.report, &format!("{} DAHA fragment", label(&p)))?;
        let dq = charvar::dq(2, &p, 1).map_err(|e| e.to_string())?;
        passed(
            &compare_reduction_to_daha(&red, &handle_bidegree(&dq), &frag, d),
            &label(&p),
        )?;
        dims = red.dims;
    }
    Ok(format!("3 samples through degree {d}, dims {dims:?}"))
}

fn c10_relative_tensor() -> Outcome {
    let d = 3;
    let mut out = Vec::new();
    for p in samples(2) {
        let o = Arc::new(charvar::rea(2, &p, d + 2).map_err(|e| e.to_string())?);
        let act = AdjointAction::on_matrix_generators(&o, &p).map_err(|e| e.to_string())?;
        let ideal = moment_ideal(&GeneratorMap::identity(o.clone())).map_err(|e| e.to_string())?;
        let ann = hamiltonian_reduction(&o, &ideal, &act, d).map_err(|e| e.to_string())?;
        let reg = regular_module(&o, d + 1, &p).map_err(|e| e.to_string())?;
        let rel = relative_tensor_dims(
            &regular_right_action(&reg, &p).map_err(|e| e.to_string())?,
            &counit_action(2),
            d,
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            rel == ann.quotient_dims,
            "annulus {}: {rel:?} vs {:?}",
            label(&p),
            ann.quotient_dims
        );

        let top = d + 1;
        let dq = charvar::dq(2, &p, top.max(4)).map_err(|e| e.to_string())?;
        let (a, b) = charvar::handle_matrices(&dq, 1, 1).map_err(|e| e.to_string())?;
        let mu = charvar::torus_monodromy(&a, &b, &p);
        let images = (0..4)
            .map(|g| dq.normal_form(mu.get(g / 2, g % 2)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let c = dq
            .normal_form(&charvar::torus_denominator(&a, &b, &p))
            .map_err(|e| e.to_string())?
            .scale(&p.qp(4));
        let m = moment_right_action(&dq, &images, Some(&c), top).map_err(|e| e.to_string())?;
        let rel_t = relative_tensor_dims(&m, &counit_action(2), d).map_err(|e| e.to_string())?;
        let tor = torus_reduction(&p, TorusMarking::Unmarked, d).map_err(|e| e.to_string())?;
        ensure!(
            rel_t == tor.quotient_dims,
            "torus {}: {rel_t:?} vs {:?}",
            label(&p),
            tor.quotient_dims
        );
        out = vec![format!("annulus {rel:?}"), format!("torus {rel_t:?}")];
    }
    Ok(format!("2 samples, degrees 0..{d}: {}", out.join(", ")))
}

/// A failing report whose residuals all name a location.
fn located(rep: &CheckReport, what: &str) -> Result<String, String> {
    ensure!(!rep.passed(), "{what}: perturbation not detected");
    ensure!(!rep.residuals.is_empty(), "{what}: no residuals");
    ensure!(
        rep.residuals.iter().all(|r| !r.location.is_empty()),
        "{what}: residual without a location"
    );
    Ok(format!("{what} at {}", rep.residuals[0].location))
}

fn c11_negative_controls() -> Outcome {
    let sym = Params::symbolic();
    let p = Params::at_i64((3, 7), (2, 5));
    let mut found = Vec::new();

    let r = r_matrix(2, &sym).map_err(|e| e.to_string())?;
    let mut m = r.matrix().clone();
    m.set(1, 2, m.get(1, 2).add(&RationalScalar::one()));
    let bad = TensorOperator::new(r.signature().clone(), m).map_err(|e| e.to_string())?;
    found.push(located(
        &check_qybe(&bad).map_err(|e| e.to_string())?,
        "qybe",
    )?);

    let o = Arc::new(charvar::rea(2, &p, 2).map_err(|e| e.to_string())?);
    let mut eps = charvar::counit(o).map_err(|e| e.to_string())?;
    eps.images[0] = eps.images[0].add(&NCPoly::one());
    found.push(located(
        &eps.verify(2).map_err(|e| e.to_string())?,
        "homomorphism",
    )?);

    let mut fam = EOperatorFamily::double_braiding(2, &p)
        .and_then(|f| f.extended(2, &p))
        .map_err(|e| e.to_string())?;
    let x = fam.e[1].get(3, 5).add(&Rat::from_i64(1));
    fam.e[1].set(3, 5, x);
    found.push(located(
        &check_dkm(&fam, &p, 0).map_err(|e| e.to_string())?,
        "dkm",
    )?);

    let ribbon = RibbonData::standard(2, &p);
    let fam = EOperatorFamily::double_braiding(2, &p)
        .and_then(|f| f.extended(2, &p))
        .map_err(|e| e.to_string())?;
    let good = canonical_balancing(&fam, Matrix::identity(2).scale(&ribbon.theta_v), &ribbon);
    let mut phi = good
        .phi_mv
        .clone()
        .expect("canonical balancing sets φ_{M⊗V}");
    phi.set(0, 0, phi.get(0, 0).add(&Rat::from_i64(1)));
    let bad = BalancingData {
        phi_m: good.phi_m,
        phi_mv: Some(phi),
    };
    found.push(located(
        &check_balanced(&fam, &bad, &ribbon, &p).map_err(|e| e.to_string())?,
        "balanced",
    )?);

    let dq = charvar::dq(2, &p, 4).map_err(|e| e.to_string())?;
    let mut g = torus_ideal(&dq, &p, TorusMarking::Mirabolic)
        .map_err(|e| e.to_string())?
        .remove(0);
    let (w, c) = g
        .terms()
        .iter()
        .next()
        .map(|(w, c)| (w.clone(), c.clone()))
        .expect("nonzero generator");
    g.set_coeff(w, c.add(&Rat::from_i64(1)));
    let act = AdjointAction::on_matrix_generators(&dq, &p).map_err(|e| e.to_string())?;
    let red = hamiltonian_reduction(&dq, &[g], &act, 4).map_err(|e| e.to_string())?;
    let frag = daha_oracle_gl2(&matching_daha_params(&p), 4);
    found.push(located(
        &compare_reduction_to_daha(&red, &handle_bidegree(&dq), &frag, 4),
        "comparison",
    )?);
    Ok(found.join("; "))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        name: "QYBE and Hecke",
        limit: Duration::from_secs(20),
        run: c1_rmatrix,
    },
    Criterion {
        id: 2,
        name: "REA flatness",
        limit: MINUTE,
        run: c2_flatness,
    },
    Criterion {
        id: 3,
        name: "classical limits",
        limit: Duration::from_secs(300),
        run: c3_classical,
    },
    Criterion {
        id: 4,
        name: "moment maps",
        limit: Duration::from_secs(300),
        run: c4_moment_maps,
    },
    Criterion {
        id: 5,
        name: "naturality iff relations",
        limit: MINUTE,
        run: c5_iff,
    },
    Criterion {
        id: 6,
        name: "braided module axioms",
        limit: MINUTE,
        run: c6_braided_modules,
    },
    Criterion {
        id: 7,
        name: "field-goal bimodule",
        limit: MINUTE,
        run: c7_field_goal,
    },
    Criterion {
        id: 8,
        name: "unmarked torus vs difference operators",
        limit: Duration::from_secs(600),
        run: c8_unmarked_torus,
    },
    Criterion {
        id: 9,
        name: "mirabolic torus vs spherical DAHA",
        limit: Duration::from_secs(1800),
        run: c9_mirabolic_torus,
    },
    Criterion {
        id: 10,
        name: "relative tensor vs quotient",
        limit: Duration::from_secs(600),
        run: c10_relative_tensor,
    },
    Criterion {
        id: 11,
        name: "negative controls",
        limit: Duration::from_secs(600),
        run: c11_negative_controls,
    },
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.limit => Err(format!(
                "took {:.1} s, limit {} s",
                elapsed.as_secs_f64(),
                c.limit.as_secs()
            )),
            x => x,
        };
        let secs = elapsed.as_secs_f64();
        match &outcome {
            Ok(note) => println!(
                "criterion {:>2} PASS  {} ({secs:.1} s of {} s): {note}",
                c.id,
                c.name,
                c.limit.as_secs()
            ),
            Err(why) => {
                println!(
                    "criterion {:>2} FAIL  {} ({secs:.1} s of {} s): {why}",
                    c.id,
                    c.name,
                    c.limit.as_secs()
                );
                failed.push(c.id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
