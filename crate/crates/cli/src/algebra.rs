use std::path::Path;
use std::sync::Arc;

use qcv_core::charvar::{self, binomial, MarkingKind, SurfaceSpec};
use qcv_core::field::Embed;
use qcv_core::ncalg::{
    classical_limit_commutativity, render_presentation, AlgebraPresentation, NCPoly, NcError,
};
use qcv_core::tensorcalc::{check_hecke, check_qybe, r_matrix, TensorOperator};
use qcv_core::{CheckReport, Field, Params, Rat, RationalScalar};

use crate::output::Outcome;
use crate::params::{Mode, Value};
use crate::{
    Marking, MomentArgs, ReaArgs, ReaCheck, RmatrixArgs, RmatrixCheck, SurfaceArgs, SurfaceCheck,
    UsageError,
};

pub fn read_input(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

pub fn check_rank(n: usize) -> Result<(), UsageError> {
    if (2..=3).contains(&n) {
        Ok(())
    } else {
        Err(UsageError(format!("--n must be 2 or 3, got {n}")))
    }
}

/// `t` for checks at `q = 1`: the given value, or `2/5`.
fn classical_t(mode: &Mode) -> Rat {
    match &mode.t {
        Value::Rational(t) => t.clone(),
        Value::Formal => Rat::new(2.into(), 5.into()),
    }
}

/// Graded dimensions of a free commutative algebra on `k` degree-1
/// generators, `binomial(d + k - 1, d)`.
fn polynomial_dims(k: usize, d: u32) -> Vec<usize> {
    (0..=d as usize)
        .map(|j| {
            if k == 0 {
                usize::from(j == 0)
            } else {
                binomial(j + k - 1, j)
            }
        })
        .collect()
}

fn dims_report(name: &str, dims: Result<Vec<usize>, NcError>, expected: Vec<usize>) -> CheckReport {
    let mut rep = CheckReport::new(name);
    match dims {
        Ok(dims) => {
            for (k, (a, b)) in dims.iter().zip(&expected).enumerate() {
                if a != b {
                    rep.residual(format!("degree {k}"), format!("expected {b}, found {a}"));
                }
            }
            rep.detail("dims", dims);
        }
        Err(NcError::Flatness {
            degree,
            expected,
            found,
        }) => rep.residual(
            format!("degree {degree}"),
            format!("expected {expected}, found {found}"),
        ),
        Err(e) => rep.residual("error", e.to_string()),
    }
    rep.detail("expected", expected);
    rep
}

pub fn rmatrix(a: &RmatrixArgs, mode: &Mode, out: &mut Outcome) -> Result<(), UsageError> {
    let input = a.input.as_deref().map(read_input).transpose()?;
    if input.is_none() {
        check_rank(a.n)?;
        out.config("n", a.n);
    }
    with_ground!(mode, |p, e| rmatrix_in(a, input.as_deref(), p, e, out))
}

fn rmatrix_in<F: Field>(
    a: &RmatrixArgs,
    input: Option<&str>,
    p: &Params<F>,
    e: &impl Embed<F>,
    out: &mut Outcome,
) -> Result<(), UsageError> {
    let r = match input {
        Some(s) => {
            let r = TensorOperator::<RationalScalar>::from_json_str(s)
                .map_err(|x| UsageError(x.to_string()))?;
            r.embed(e).map_err(|x| UsageError(x.to_string()))?
        }
        None => r_matrix(a.n, p).map_err(|x| UsageError(x.to_string()))?,
    };
    for c in &a.check {
        match c {
            RmatrixCheck::Qybe => {
                out.check(|| check_qybe(&r).unwrap_or_else(|x| error_report("qybe", x)))
            }
            RmatrixCheck::Hecke => {
                out.check(|| check_hecke(&r, &p.q).unwrap_or_else(|x| error_report("hecke", x)))
            }
        }
    }
    Ok(())
}

pub fn error_report(name: &str, e: impl std::fmt::Display) -> CheckReport {
    let mut rep = CheckReport::new(name);
    rep.residual("error", e.to_string());
    rep
}

/// The same presentation with `1` added to its first relation.
fn perturbed<F: Field>(
    alg: &AlgebraPresentation<F>,
    d: u32,
) -> Result<AlgebraPresentation<F>, NcError> {
    let mut rels = alg.relations().to_vec();
    if let Some(r) = rels.first_mut() {
        r.add_term(Vec::new(), &F::one());
    }
    AlgebraPresentation::new(alg.generators().to_vec(), rels, d)
}

pub fn rea(a: &ReaArgs, d: u32, mode: &Mode, out: &mut Outcome) -> Result<(), UsageError> {
    check_rank(a.n)?;
    out.config("n", a.n);
    if a.perturb {
        out.config("perturb", true);
    }
    if a.check.contains(&ReaCheck::Flatness) {
        with_ground!(mode, |p, _e| out.check(|| {
            let dims = charvar::rea(a.n, p, d).and_then(|o| {
                if a.perturb {
                    perturbed(&o, d)?.graded_dims(d)
                } else {
                    o.graded_dims(d)
                }
            });
            dims_report("flatness", dims, polynomial_dims(a.n * a.n, d))
        }));
    }
    if a.check.contains(&ReaCheck::Classical) {
        let t0 = classical_t(mode);
        out.check(|| {
            let bound = d.min(3);
            charvar::rea(a.n, &Params::symbolic(), bound)
                .and_then(|o| classical_limit_commutativity(&o, bound, &t0))
                .unwrap_or_else(|x| error_report("classical_limit", x))
        });
    }
    Ok(())
}

fn surface_spec(genus: usize, marking: Marking) -> SurfaceSpec {
    let mut spec = SurfaceSpec::closed_minus_disc(genus);
    if marking == Marking::Mirabolic {
        spec.markings.push(("p".into(), MarkingKind::Mirabolic));
    }
    spec
}

pub fn surface(a: &SurfaceArgs, d: u32, mode: &Mode, out: &mut Outcome) -> Result<(), UsageError> {
    let spec = match &a.describe {
        Some(path) => read_input(path)?
            .parse::<SurfaceSpec>()
            .map_err(|e| UsageError(e.to_string()))?,
        None => surface_spec(a.genus, a.marking),
    };
    check_rank(a.n)?;
    out.config("n", a.n);
    out.config("surface", &spec);
    if a.perturb {
        out.config("perturb", true);
    }
    let all = a.check.contains(&SurfaceCheck::All);
    let wants = |c: SurfaceCheck| all || a.check.contains(&c);
    with_ground!(mode, |p, _e| {
        let start = std::time::Instant::now();
        let alg = match charvar::moduli_algebra(&spec, a.n, p, d).and_then(|x| {
            if a.perturb {
                perturbed(&x, d)
            } else {
                Ok(x)
            }
        }) {
            Ok(alg) => alg,
            Err(x) => {
                out.failed("surface", x);
                return Ok(());
            }
        };
        if let Some(path) = &a.output {
            std::fs::write(path, render_presentation(&alg))
                .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
        }
        let mut rep = CheckReport::new("surface");
        rep.detail("generators", alg.ngens() as u64)
            .detail("relations", alg.relations().len() as u64)
            .detail("euler_characteristic", spec.euler_characteristic());
        out.record(rep, start.elapsed());
        if wants(SurfaceCheck::Flatness) {
            let k = 2 * spec.genus * a.n * a.n;
            out.check(|| dims_report("flatness", alg.graded_dims(d), polynomial_dims(k, d)));
        }
        let markings = charvar::compile_markings(&spec, p, d);
        if wants(SurfaceCheck::Flatness) {
            match &markings {
                Ok(ms) => {
                    for m in ms {
                        // O_q(GL_2) modulo one degree-2 relation: (k + 1)^2
                        let expected = (0..=d as usize).map(|k| (k + 1) * (k + 1)).collect();
                        out.check(|| {
                            dims_report(
                                &format!("marking {} flatness", m.label),
                                m.algebra.graded_dims(d),
                                expected,
                            )
                        });
                    }
                }
                Err(x) => out.failed("markings", x),
            }
        }
        if wants(SurfaceCheck::Moment) {
            moment_maps(&spec, a.n, p, d, false, out);
            if let Ok(ms) = &markings {
                for m in ms {
                    out.check(|| {
                        named(
                            m.moment_map.verify(d),
                            &format!("marking {} moment map", m.label),
                        )
                    });
                }
            }
        }
        if wants(SurfaceCheck::Classical) {
            let t0 = classical_t(mode);
            out.check(|| {
                let bound = d.min(3);
                charvar::moduli_algebra(&spec, a.n, &Params::symbolic(), bound)
                    .and_then(|o| classical_limit_commutativity(&o, bound, &t0))
                    .unwrap_or_else(|x| error_report("classical_limit", x))
            });
        }
        Ok(())
    })
}

fn named(r: Result<CheckReport, NcError>, name: &str) -> CheckReport {
    let mut rep = r.unwrap_or_else(|x| error_report(name, x));
    rep.name = name.to_string();
    rep
}

/// Bound on the target needed to check relations of degree `d` through a
/// map whose images have degree at most `k`, denominators included.
fn target_bound(d: u32, k: u32) -> u32 {
    d * k
}

/// Verify the counit and, for genus 1, the boundary moment map.
fn moment_maps<F: Field>(
    spec: &SurfaceSpec,
    n: usize,
    p: &Params<F>,
    d: u32,
    perturb: bool,
    out: &mut Outcome,
) {
    let build = |genus: usize| -> Result<qcv_core::ncalg::GeneratorMap<F>, NcError> {
        let s = SurfaceSpec::closed_minus_disc(genus);
        // relations of O_q are quadratic, so only degree 2 is ever checked
        let rel = d.min(2);
        let image_degree = if genus == 0 { 0 } else { 4 };
        let o = Arc::new(charvar::rea(n, p, rel)?);
        let target = Arc::new(if genus == 0 {
            AlgebraPresentation::ground(rel)
        } else {
            charvar::moduli_algebra(&s, n, p, target_bound(rel, image_degree))?
        });
        let mut mu = charvar::boundary_moment_map(&s, n, p, o, target)?;
        if perturb {
            mu.images[0] = mu.images[0].add(&NCPoly::one());
        }
        Ok(mu)
    };
    out.check(|| named(build(0).and_then(|m| m.verify(d)), "counit"));
    if spec.genus == 1 && n == 2 {
        out.check(|| {
            named(
                build(spec.genus).and_then(|m| m.verify(d)),
                "boundary moment map",
            )
        });
    } else if spec.genus > 0 {
        let mut rep = CheckReport::new("boundary moment map");
        rep.partial(format!(
            "not available for genus {} with N = {n}",
            spec.genus
        ));
        out.check(|| rep);
    }
}

pub fn moment_check(
    a: &MomentArgs,
    d: u32,
    mode: &Mode,
    out: &mut Outcome,
) -> Result<(), UsageError> {
    check_rank(a.n)?;
    out.config("n", a.n);
    out.config("genus", a.genus);
    if a.perturb {
        out.config("perturb", true);
    }
    let spec = surface_spec(a.genus, a.marking);
    with_ground!(mode, |p, _e| {
        moment_maps(&spec, a.n, p, d, a.perturb, out);
        match charvar::compile_markings(&spec, p, d) {
            Ok(ms) => {
                for m in ms {
                    out.check(|| {
                        named(
                            m.moment_map.verify(d),
                            &format!("marking {} moment map", m.label),
                        )
                    });
                }
            }
            Err(x) => out.failed("markings", x),
        }
    });
    Ok(())
}
