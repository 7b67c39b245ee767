use std::sync::Arc;
use std::time::Instant;

use qcv_core::braidedmod::regular_module;
use qcv_core::charvar;
use qcv_core::hamred::{
    compare_reduction_to_daha, counit_action, daha_oracle_gl2, dqh_w_oracle, hamiltonian_reduction,
    handle_bidegree, matching_daha_params, moment_ideal, moment_right_action, regular_right_action,
    relative_tensor_dims, torus_ideal, GradedAction, HamredError, ReductionAlgebra, TorusMarking,
};
use qcv_core::ncalg::{AlgebraPresentation, GeneratorMap, NCPoly};
use qcv_core::uq::AdjointAction;
use qcv_core::{CheckReport, Field, Params, Rat};

use crate::algebra::error_report;
use crate::output::Outcome;
use crate::params::{point_label, Mode};
use crate::{DahaArgs, HamredArgs, Marking, RelativeArgs, Sampling, SurfaceKind, UsageError};

fn only_rank_two(n: usize) -> Result<(), UsageError> {
    if n == 2 {
        Ok(())
    } else {
        Err(UsageError(format!(
            "reductions are implemented for N = 2, got {n}"
        )))
    }
}

fn samples(mode: &Mode, s: &Sampling, out: &mut Outcome) -> Vec<Params<Rat>> {
    let pts = mode.samples(s.samples, s.seed);
    if pts.len() > 1 || s.samples != 3 {
        out.config("samples", pts.len());
        out.config("seed", s.seed);
    }
    pts
}

fn surface_name(s: SurfaceKind) -> &'static str {
    match s {
        SurfaceKind::Disc => "disc",
        SurfaceKind::Annulus => "annulus",
        SurfaceKind::Torus => "torus",
    }
}

/// Add one to the first coefficient of the first generator.
fn perturb_first(ideal: &mut [NCPoly<Rat>]) {
    if let Some(g) = ideal.first_mut() {
        if let Some((w, c)) = g.terms().iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            g.set_coeff(w, c.add(&Rat::from_i64(1)));
        }
    }
}

/// The algebra and ideal generators of a reduction.
struct Setup {
    alg: AlgebraPresentation<Rat>,
    ideal: Vec<NCPoly<Rat>>,
}

fn setup(
    surface: SurfaceKind,
    marking: Marking,
    p: &Params<Rat>,
    d: u32,
) -> Result<Setup, HamredError> {
    Ok(match surface {
        SurfaceKind::Disc => Setup {
            alg: AlgebraPresentation::ground(d + 2),
            ideal: Vec::new(),
        },
        SurfaceKind::Annulus => {
            let o = Arc::new(charvar::rea(2, p, d + 2)?);
            let ideal = moment_ideal(&GeneratorMap::identity(o.clone()))?;
            Setup {
                alg: Arc::unwrap_or_clone(o),
                ideal,
            }
        }
        SurfaceKind::Torus => {
            let dq = charvar::dq(2, p, d.max(4))?;
            let m = if marking == Marking::Mirabolic {
                TorusMarking::Mirabolic
            } else {
                TorusMarking::Unmarked
            };
            let ideal = torus_ideal(&dq, p, m)?;
            Setup { alg: dq, ideal }
        }
    })
}

fn reduce(s: &Setup, p: &Params<Rat>, d: u32) -> Result<ReductionAlgebra<Rat>, HamredError> {
    let act = AdjointAction::on_matrix_generators(&s.alg, p)?;
    hamiltonian_reduction(&s.alg, &s.ideal, &act, d)
}

fn reduction_report(red: &ReductionAlgebra<Rat>, label: &str) -> CheckReport {
    let mut rep = red.report.clone();
    rep.name = format!("reduction [{label}]");
    rep.detail("dims", red.dims.clone())
        .detail("quotient_dims", red.quotient_dims.clone());
    rep
}

fn dims_against(name: String, found: &[usize], expected: &[usize]) -> CheckReport {
    let mut rep = CheckReport::new(name);
    for (k, (a, b)) in found.iter().zip(expected).enumerate() {
        if a != b {
            rep.residual(format!("degree {k}"), format!("reduction {a}, oracle {b}"));
        }
    }
    rep.detail("oracle_dims", expected.to_vec());
    rep
}

pub fn hamred(a: &HamredArgs, d: u32, mode: &Mode, out: &mut Outcome) -> Result<(), UsageError> {
    only_rank_two(a.n)?;
    if a.marking == Marking::Mirabolic && a.surface != SurfaceKind::Torus {
        return Err(UsageError(
            "the mirabolic marking is available on the torus".into(),
        ));
    }
    out.config("n", a.n);
    out.config("surface", surface_name(a.surface));
    out.config(
        "marking",
        if a.marking == Marking::Mirabolic {
            "mirabolic"
        } else {
            "none"
        },
    );
    if a.perturb {
        out.config("perturb", true);
    }
    for p in samples(mode, &a.sampling, out) {
        let label = point_label(&p);
        let start = Instant::now();
        let red = setup(a.surface, a.marking, &p, d).and_then(|mut s| {
            if a.perturb {
                perturb_first(&mut s.ideal);
            }
            Ok((reduce(&s, &p, d)?, s.alg))
        });
        let (red, alg) = match red {
            Ok(x) => x,
            Err(e) => {
                out.failed(&format!("reduction [{label}]"), e);
                continue;
            }
        };
        out.record(reduction_report(&red, &label), start.elapsed());
        let name = format!("comparison [{label}]");
        match (a.surface, a.marking) {
            (SurfaceKind::Torus, Marking::None) => {
                out.check(|| dims_against(name, &red.dims, &dqh_w_oracle(p.q.clone(), d).dims));
            }
            (SurfaceKind::Torus, Marking::Mirabolic) => out.check(|| {
                let frag = daha_oracle_gl2(&matching_daha_params(&p), d);
                let mut rep = compare_reduction_to_daha(&red, &handle_bidegree(&alg), &frag, d);
                rep.name = name;
                rep
            }),
            _ => {
                let ground: Vec<usize> = (0..=d).map(|k| usize::from(k == 0)).collect();
                out.check(|| dims_against(name, &red.dims, &ground));
            }
        }
    }
    Ok(())
}

pub fn daha_compare(
    a: &DahaArgs,
    d: u32,
    mode: &Mode,
    out: &mut Outcome,
) -> Result<(), UsageError> {
    only_rank_two(a.n)?;
    out.config("n", a.n);
    out.config("daha_shift", if a.unmatched { "q" } else { "q^2" });
    if a.perturb {
        out.config("perturb", true);
    }
    for p in samples(mode, &a.sampling, out) {
        let label = point_label(&p);
        let daha_p = if a.unmatched {
            p.clone()
        } else {
            matching_daha_params(&p)
        };
        let start = Instant::now();
        let frag = daha_oracle_gl2(&daha_p, d);
        let mut rep = frag.report.clone();
        rep.name = format!("daha [{label}]");
        let bi: serde_json::Map<_, _> = frag
            .bigraded
            .iter()
            .map(|((x, y), v)| (format!("{x},{y}"), serde_json::Value::from(*v as u64)))
            .collect();
        rep.detail("bigraded", bi);
        out.record(rep, start.elapsed());
        let run = || -> Result<CheckReport, HamredError> {
            let mut s = setup(SurfaceKind::Torus, Marking::Mirabolic, &p, d)?;
            if a.perturb {
                perturb_first(&mut s.ideal);
            }
            let red = reduce(&s, &p, d)?;
            Ok(compare_reduction_to_daha(
                &red,
                &handle_bidegree(&s.alg),
                &frag,
                d,
            ))
        };
        let name = format!("comparison [{label}]");
        out.check(|| {
            let mut rep = run().unwrap_or_else(|e| error_report("", e));
            rep.name = name;
            rep
        });
    }
    Ok(())
}

/// The counit, or with `perturb` the map that doubles the value on the
/// first generator (no longer a module).
fn epsilon(perturb: bool) -> GradedAction<Rat> {
    let mut e = counit_action(2);
    if perturb {
        e.ops[0][0] = std::iter::once((0, Rat::from_i64(2))).collect();
    }
    e
}

/// `A ⊗_{O_q} ε` for the boundary moment map of the surface.
fn relative_dims(
    surface: SurfaceKind,
    p: &Params<Rat>,
    d: u32,
    perturb: bool,
) -> Result<Vec<usize>, HamredError> {
    let eps = epsilon(perturb);
    match surface {
        SurfaceKind::Disc => relative_tensor_dims(&counit_action(2), &eps, d),
        SurfaceKind::Annulus => {
            let o = charvar::rea(2, p, d + 2)?;
            let reg = regular_module(&o, d + 1, p)?;
            relative_tensor_dims(&regular_right_action(&reg, p)?, &eps, d)
        }
        SurfaceKind::Torus => {
            let top = d + 1;
            let dq = charvar::dq(2, p, top.max(4))?;
            let (a, b) = charvar::handle_matrices(&dq, 1, 1)?;
            let mu = charvar::torus_monodromy(&a, &b, p);
            let images = (0..4)
                .map(|g| dq.normal_form(mu.get(g / 2, g % 2)))
                .collect::<Result<Vec<_>, _>>()?;
            let c = dq
                .normal_form(&charvar::torus_denominator(&a, &b, p))?
                .scale(&p.qp(4));
            let m = moment_right_action(&dq, &images, Some(&c), top)?;
            relative_tensor_dims(&m, &eps, d)
        }
    }
}

pub fn relative_tensor(
    a: &RelativeArgs,
    d: u32,
    mode: &Mode,
    out: &mut Outcome,
) -> Result<(), UsageError> {
    only_rank_two(a.n)?;
    out.config("n", a.n);
    out.config("surface", surface_name(a.surface));
    if a.perturb {
        out.config("perturb", true);
    }
    for p in samples(mode, &a.sampling, out) {
        let label = point_label(&p);
        let run = || -> Result<CheckReport, HamredError> {
            let rel = relative_dims(a.surface, &p, d, a.perturb)?;
            let red = reduce(&setup(a.surface, Marking::None, &p, d)?, &p, d)?;
            let mut rep = dims_against(String::new(), &rel, &red.quotient_dims);
            rep.details.remove("oracle_dims");
            rep.detail("relative_dims", rel)
                .detail("quotient_dims", red.quotient_dims);
            Ok(rep)
        };
        let name = format!("relative tensor [{label}]");
        out.check(|| {
            let mut rep = run().unwrap_or_else(|e| error_report("", e));
            rep.name = name;
            rep
        });
    }
    Ok(())
}
