use qcv_core::braidedmod::{
    annular_braid_rep, canonical_balancing, check_balanced, check_dkm, check_octagon, e_to_rho,
    rho_to_e, BalancingData, EOperatorFamily, ModuleRep,
};
use qcv_core::charvar;
use qcv_core::field::Embed;
use qcv_core::linalg::Matrix;
use qcv_core::tensorcalc::RibbonData;
use qcv_core::{CheckReport, Field, Params};

use crate::algebra::{check_rank, error_report, read_input};
use crate::output::Outcome;
use crate::params::Mode;
use crate::{BalancedArgs, BraidedArgs, BraidedCheckKind, UsageError};

fn usage(e: impl std::fmt::Display) -> UsageError {
    UsageError(e.to_string())
}

fn relabel(mut rep: CheckReport, prefix: &str) -> CheckReport {
    rep.name = format!("{prefix}: {}", rep.name);
    rep
}

/// Vacuum, double braiding, and the family of a sum of the two modules.
fn builtin_families<F: Field>(
    n: usize,
    p: &Params<F>,
) -> Result<Vec<(&'static str, EOperatorFamily<F>)>, UsageError> {
    let vacuum = rho_to_e(&ModuleRep::counit(n), p).map_err(usage)?;
    let db = EOperatorFamily::double_braiding(n, p).map_err(usage)?;
    let sum_rep = e_to_rho(&db)
        .and_then(|r| r.direct_sum(&ModuleRep::counit(n)))
        .map_err(usage)?;
    let sum = rho_to_e(&sum_rep, p).map_err(usage)?;
    let db = db.extended(3, p).map_err(usage)?;
    Ok(vec![
        ("vacuum", vacuum),
        ("double braiding", db),
        ("sum", sum),
    ])
}

pub fn braided_check(a: &BraidedArgs, mode: &Mode, out: &mut Outcome) -> Result<(), UsageError> {
    let family = a.input.as_deref().map(read_input).transpose()?;
    let module = a.module.as_deref().map(read_input).transpose()?;
    if family.is_none() && module.is_none() {
        check_rank(a.n)?;
        out.config("n", a.n);
    }
    out.config("framing_twist", a.framing_twist);
    out.config("strands", a.strands);
    if a.strands == 0 {
        return Err(UsageError("--strands must be at least 1".into()));
    }
    with_ground!(mode, |p, e| braided_in(
        a,
        family.as_deref(),
        module.as_deref(),
        p,
        e,
        out
    ))
}

fn braided_in<F: Field>(
    a: &BraidedArgs,
    family: Option<&str>,
    module: Option<&str>,
    p: &Params<F>,
    e: &impl Embed<F>,
    out: &mut Outcome,
) -> Result<(), UsageError> {
    let fams = if let Some(s) = family {
        vec![(
            "input",
            EOperatorFamily::from_json_str(s, e).map_err(usage)?,
        )]
    } else if let Some(s) = module {
        let rho = ModuleRep::from_json_str(s, e).map_err(usage)?;
        vec![("input", rho_to_e(&rho, p).map_err(usage)?)]
    } else {
        let theta = RibbonData::standard(a.n, p).theta_v;
        builtin_families(a.n, p)?
            .into_iter()
            .map(|(name, f)| {
                Ok((
                    name,
                    if a.framing_twist == 0 {
                        f
                    } else {
                        f.twisted(a.framing_twist, &theta, p).map_err(usage)?
                    },
                ))
            })
            .collect::<Result<Vec<_>, UsageError>>()?
    };
    for (name, fam) in &fams {
        for c in &a.check {
            let rep = match c {
                BraidedCheckKind::Dkm => {
                    check_dkm(fam, p, a.framing_twist).unwrap_or_else(|x| error_report("dkm", x))
                }
                BraidedCheckKind::Octagon => check_octagon(fam, p, a.framing_twist)
                    .unwrap_or_else(|x| error_report("octagon", x)),
                BraidedCheckKind::Annular => annular_braid_rep(fam, a.strands, p)
                    .map(|r| r.check())
                    .unwrap_or_else(|x| error_report("annular_braid", x)),
                BraidedCheckKind::Relations => relations(fam, p),
            };
            out.check(|| relabel(rep, name));
        }
    }
    Ok(())
}

/// Whether the action read off `E_1` satisfies the reflection equation
/// relations.
fn relations<F: Field>(fam: &EOperatorFamily<F>, p: &Params<F>) -> CheckReport {
    let run = || -> Result<CheckReport, String> {
        let rho = e_to_rho(fam).map_err(|e| e.to_string())?;
        let o = charvar::rea(fam.n, p, 2).map_err(|e| e.to_string())?;
        let mut rep = rho.check(&o).map_err(|e| e.to_string())?;
        rep.name = "relations".into();
        Ok(rep)
    };
    run().unwrap_or_else(|x| error_report("relations", x))
}

pub fn balanced_check(a: &BalancedArgs, mode: &Mode, out: &mut Outcome) -> Result<(), UsageError> {
    let family = a.input.as_deref().map(read_input).transpose()?;
    let balance = a.balance.as_deref().map(read_input).transpose()?;
    if family.is_none() {
        check_rank(a.n)?;
        out.config("n", a.n);
    }
    if a.perturb {
        out.config("perturb", true);
    }
    with_ground!(mode, |p, e| balanced_in(
        a,
        family.as_deref(),
        balance.as_deref(),
        p,
        e,
        out
    ))
}

/// A named family with its balancing and ribbon data.
type Case<F> = (
    &'static str,
    EOperatorFamily<F>,
    BalancingData<F>,
    RibbonData<F>,
);

fn balanced_in<F: Field>(
    a: &BalancedArgs,
    family: Option<&str>,
    balance: Option<&str>,
    p: &Params<F>,
    e: &impl Embed<F>,
    out: &mut Outcome,
) -> Result<(), UsageError> {
    let cases: Vec<Case<F>> = match family {
        Some(s) => {
            let fam = EOperatorFamily::from_json_str(s, e).map_err(usage)?;
            let ribbon = RibbonData::standard(fam.n, p);
            let bal = match balance {
                Some(b) => BalancingData::from_json_str(b, fam.m, fam.n, e).map_err(usage)?,
                None => canonical_balancing(&fam, Matrix::identity(fam.m), &ribbon),
            };
            vec![("input", fam, bal, ribbon)]
        }
        None => {
            let ribbon = RibbonData::standard(a.n, p);
            let vacuum = rho_to_e(&ModuleRep::counit(a.n), p).map_err(usage)?;
            let vb = canonical_balancing(&vacuum, Matrix::identity(1), &ribbon);
            let db = EOperatorFamily::double_braiding(a.n, p)
                .and_then(|f| f.extended(2, p))
                .map_err(usage)?;
            // V itself is balanced by θ_V
            let dbb =
                canonical_balancing(&db, Matrix::identity(a.n).scale(&ribbon.theta_v), &ribbon);
            vec![
                ("vacuum", vacuum, vb, ribbon.clone()),
                ("double braiding", db, dbb, ribbon),
            ]
        }
    };
    for (name, fam, mut bal, ribbon) in cases {
        if a.perturb {
            let mut phi = bal.phi_mv.take().unwrap_or_else(|| {
                fam.e1().mul(
                    &bal.phi_m
                        .kron(&Matrix::identity(fam.n))
                        .scale(&ribbon.theta_v),
                )
            });
            let x = phi.get(0, 0).add(&F::one());
            phi.set(0, 0, x);
            bal.phi_mv = Some(phi);
        }
        let rep =
            check_balanced(&fam, &bal, &ribbon, p).unwrap_or_else(|x| error_report("balanced", x));
        out.check(|| relabel(rep, name));
    }
    Ok(())
}
