use std::collections::{BTreeMap, HashMap};

use super::HamredError;
use crate::field::Field;
use crate::linalg::{axpy, kernel_of_rows, Echelon, SparseVec};
use crate::ncalg::{word_degree, AlgebraPresentation, NCPoly, Word};
use crate::report::CheckReport;
use crate::uq::{AdjointAction, Chevalley};

/// Invariant classes of `A / A·μ(I)` through degree `D`, with exact
/// structure constants.
///
/// Basis elements are ordered by filtration degree. `mult[(i, j)]` holds
/// the coordinates of `e_i e_j` whenever `deg e_i + deg e_j <= D`.
#[derive(Clone, Debug)]
pub struct ReductionAlgebra<F: Field> {
    pub degree: u32,
    /// Graded dimensions of the quotient before taking invariants.
    pub quotient_dims: Vec<usize>,
    /// Graded dimensions of the invariants.
    pub dims: Vec<usize>,
    /// Normal-form representatives of the basis classes.
    pub basis: Vec<NCPoly<F>>,
    pub basis_degree: Vec<u32>,
    pub mult: BTreeMap<(usize, usize), Vec<F>>,
    /// Well-definedness, unit and associativity checks.
    pub report: CheckReport,
    ctx: Context<F>,
}

#[derive(Clone, Debug)]
struct Context<F: Field> {
    degrees: Vec<u32>,
    cols: Vec<Word>,
    index: HashMap<Word, usize>,
    ideal: Echelon<F>,
    inv: Echelon<F>,
}

impl<F: Field> Context<F> {
    fn vec_of(&self, p: &NCPoly<F>) -> Option<SparseVec<F>> {
        let mut v = SparseVec::new();
        for (w, c) in p.terms() {
            v.insert(*self.index.get(w)?, c.clone());
        }
        Some(v)
    }

    fn poly_of(&self, v: &SparseVec<F>) -> NCPoly<F> {
        NCPoly::from_terms(v.iter().map(|(&k, c)| (self.cols[k].clone(), c.clone())))
    }

    fn col_degree(&self, k: usize) -> u32 {
        word_degree(&self.cols[k], &self.degrees)
    }

    fn vec_degree(&self, v: &SparseVec<F>) -> u32 {
        v.keys().next_back().map_or(0, |&k| self.col_degree(k))
    }
}

impl<F: Field> ReductionAlgebra<F> {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis indices of filtration degree exactly `k`.
    pub fn degree_indices(&self, k: u32) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis_degree[i] == k)
            .collect()
    }

    pub fn product(&self, i: usize, j: usize) -> Option<&Vec<F>> {
        self.mult.get(&(i, j))
    }

    /// Coordinates of the class of a normal-form element of degree at most
    /// `D`, or `None` when the class is not invariant.
    pub fn coords(&self, p: &NCPoly<F>) -> Option<Vec<F>> {
        let v = self.ctx.ideal.reduce(&self.ctx.vec_of(p)?);
        let (rem, combo) = self.ctx.inv.reduce_tracked(&v);
        if !rem.is_empty() {
            return None;
        }
        let mut out = vec![F::zero(); self.basis.len()];
        for (k, c) in combo {
            out[k] = c;
        }
        Some(out)
    }

    /// Multiply two coordinate vectors using the table; `None` if a needed
    /// product lies beyond the truncation.
    pub fn mul_coords(&self, x: &[F], y: &[F]) -> Option<Vec<F>> {
        let mut out = vec![F::zero(); self.basis.len()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let m = self.mult.get(&(i, j))?;
                let ab = a.mul(b);
                for (k, c) in m.iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&ab.mul(c));
                    }
                }
            }
        }
        Some(out)
    }

    /// Multidegree of a basis representative under a generator grading, or
    /// `None` if the representative is not homogeneous for it.
    pub fn multidegree(&self, i: usize, grading: &[(u32, u32)]) -> Option<(u32, u32)> {
        let mut out = None;
        for w in self.basis[i].terms().keys() {
            let d = w.iter().fold((0, 0), |(a, b), &g| {
                (a + grading[g as usize].0, b + grading[g as usize].1)
            });
            match out {
                None => out = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        out
    }

    /// Structure constants rendered as `(i, j) -> [c_0, c_1, ...]`.
    pub fn table_json(&self) -> serde_json::Value {
        let m: serde_json::Map<String, serde_json::Value> = self
            .mult
            .iter()
            .map(|((i, j), v)| {
                (
                    format!("{i},{j}"),
                    v.iter().map(|c| c.render()).collect::<Vec<_>>().into(),
                )
            })
            .collect();
        m.into()
    }
}

fn ideal_echelon<F: Field>(
    alg: &AlgebraPresentation<F>,
    gens: &[NCPoly<F>],
    ctx: &Context<F>,
    top: u32,
) -> Result<Echelon<F>, HamredError> {
    let mut e = Echelon::new();
    for g in gens {
        let dg = g.degree(&ctx.degrees).unwrap_or(0);
        for w in ctx
            .cols
            .iter()
            .filter(|w| word_degree(w, &ctx.degrees) + dg <= top)
        {
            let prod = alg.mul(&NCPoly::word(w.clone()), g)?;
            let v = ctx.vec_of(&prod).ok_or_else(|| {
                HamredError::Dimension("ideal element beyond the column range".into())
            })?;
            e.insert(v);
        }
    }
    Ok(e)
}

fn ideal_profile<F: Field>(e: &Echelon<F>, ctx: &Context<F>, d: u32) -> Vec<usize> {
    let mut out = vec![0; d as usize + 1];
    for &p in e.pivots() {
        let k = ctx.col_degree(p);
        if k <= d {
            out[k as usize] += 1;
        }
    }
    out
}

/// Invariants of `A` itself through degree `d`.
pub fn invariants<F: Field>(
    alg: &AlgebraPresentation<F>,
    act: &AdjointAction<F>,
    d: u32,
) -> Result<ReductionAlgebra<F>, HamredError> {
    hamiltonian_reduction(alg, &[], act, d)
}

/// Reduce `A` by the left ideal generated by `ideal` (the image `μ(I)`,
/// already in `A`), take invariants, and build the multiplication table
/// through degree `d`.
///
/// Inhomogeneous generators are spanned through degree `d + 1`, and, when
/// the presentation allows it, compared against degree `d + 2`; a change in
/// the ideal below degree `d` marks the result partial.
pub fn hamiltonian_reduction<F: Field>(
    alg: &AlgebraPresentation<F>,
    ideal: &[NCPoly<F>],
    act: &AdjointAction<F>,
    d: u32,
) -> Result<ReductionAlgebra<F>, HamredError> {
    let eq = act.check_equivariance(alg)?;
    if let Some(r) = eq.residuals.first() {
        return Err(HamredError::Equivariance(r.location.clone()));
    }
    let degrees = alg.degrees();
    let gens: Vec<NCPoly<F>> = ideal
        .iter()
        .map(|g| alg.normal_form(g))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|g| !g.is_zero())
        .collect();
    let homogeneous = gens.iter().all(|g| g.is_homogeneous(&degrees));
    let top = if homogeneous { d } else { d + 1 };
    if alg.bound() < top {
        return Err(HamredError::Bound {
            degree: d,
            needed: top,
            bound: alg.bound(),
        });
    }
    let mut report = CheckReport::new("hamiltonian_reduction");
    report
        .config("degree", d)
        .config("ideal_generators", gens.len());

    let cols_to = |t: u32| -> Result<Vec<Word>, HamredError> {
        let mut cols = Vec::new();
        for k in 0..=t {
            cols.extend(alg.normal_words(k)?);
        }
        Ok(cols)
    };
    let make_ctx = |cols: Vec<Word>| Context {
        degrees: degrees.clone(),
        index: cols
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect(),
        cols,
        ideal: Echelon::new(),
        inv: Echelon::tracked(),
    };
    let mut ctx = make_ctx(cols_to(top)?);
    ctx.ideal = ideal_echelon(alg, &gens, &ctx, top)?;
    if !homogeneous {
        if alg.bound() > top {
            let mut wide = make_ctx(cols_to(top + 1)?);
            wide.ideal = ideal_echelon(alg, &gens, &wide, top + 1)?;
            let (a, b) = (
                ideal_profile(&ctx.ideal, &ctx, d),
                ideal_profile(&wide.ideal, &wide, d),
            );
            if a != b {
                let k = a.iter().zip(&b).position(|(x, y)| x != y).unwrap_or(0);
                report.partial(format!(
                    "ideal not stable at degree {k} when spanned one degree higher"
                ));
            }
        } else {
            report.partial(
                "stability against degree d + 2 not checked: presentation bound too small",
            );
        }
    }

    // standard monomials of degree <= d
    let std: Vec<usize> = (0..ctx.cols.len())
        .filter(|&k| ctx.col_degree(k) <= d && !ctx.ideal.is_pivot(k))
        .collect();
    let pos: HashMap<usize, usize> = std.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut quotient_dims = vec![0; d as usize + 1];
    for &k in &std {
        quotient_dims[ctx.col_degree(k) as usize] += 1;
    }

    // invariants: joint kernel of E, F, K - 1 on the quotient
    let apply = |x: Option<Chevalley>, p: &NCPoly<F>| -> Result<NCPoly<F>, HamredError> {
        let y = match x {
            Some(c) => act.act(c, p),
            None => act.act_k_minus_one(p),
        };
        Ok(alg.normal_form(&y)?)
    };
    let ops = [Some(Chevalley::E), Some(Chevalley::F), None];
    let mut eqs: BTreeMap<(usize, usize), SparseVec<F>> = BTreeMap::new();
    for (si, &k) in std.iter().enumerate() {
        let w = NCPoly::word(ctx.cols[k].clone());
        for (oi, &x) in ops.iter().enumerate() {
            let y = apply(x, &w)?;
            let v = ctx
                .vec_of(&y)
                .ok_or_else(|| HamredError::Dimension("action leaves the column range".into()))?;
            for (c, val) in ctx.ideal.reduce(&v) {
                eqs.entry((oi, c)).or_default().insert(si, val);
            }
        }
    }
    let eq_rows: Vec<SparseVec<F>> = eqs.into_values().collect();
    let kernel = kernel_of_rows(eq_rows.len(), std.len(), |i| eq_rows[i].clone());
    let mut inv_e = Echelon::new();
    for v in kernel {
        let sv: SparseVec<F> = v
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (std[i], c))
            .collect();
        inv_e.insert(sv);
    }
    let rows = inv_e.fully_reduced_rows();
    let mut basis_vecs = Vec::new();
    let mut basis_degree = Vec::new();
    let mut dims = vec![0; d as usize + 1];
    for (p, r) in rows {
        let k = ctx.col_degree(p);
        dims[k as usize] += 1;
        basis_degree.push(k);
        ctx.inv.insert(r.clone());
        basis_vecs.push(r);
    }
    let basis: Vec<NCPoly<F>> = basis_vecs.iter().map(|v| ctx.poly_of(v)).collect();
    debug_assert!(basis_vecs
        .iter()
        .all(|v| v.keys().all(|k| pos.contains_key(k))));

    // the ideal must be stable under the action
    let mut unstable = 0usize;
    for (&p, r) in ctx
        .ideal
        .fully_reduced_rows()
        .iter()
        .filter(|(p, _)| ctx.col_degree(**p) <= d)
    {
        let poly = ctx.poly_of(r);
        for (oi, &x) in ops.iter().enumerate() {
            let y = apply(x, &poly)?;
            let v = ctx
                .vec_of(&y)
                .ok_or_else(|| HamredError::Dimension("action leaves the column range".into()))?;
            if !ctx.ideal.reduce(&v).is_empty() {
                unstable += 1;
                report.residual(
                    format!(
                        "ideal not stable under {} at degree {}",
                        ["E", "F", "K - 1"][oi],
                        ctx.col_degree(p)
                    ),
                    alg.render(&poly),
                );
            }
        }
    }
    report.detail("ideal_stable", unstable == 0);

    // J · v ⊂ J for invariant v, so products of classes are well defined
    let ideal_rows = ctx.ideal.fully_reduced_rows();
    for (bi, v) in basis.iter().enumerate() {
        for r in ideal_rows.values() {
            if ctx.vec_degree(r) + basis_degree[bi] > d {
                continue;
            }
            let prod = alg.mul(&ctx.poly_of(r), v)?;
            let pv = ctx
                .vec_of(&prod)
                .ok_or_else(|| HamredError::Dimension("product beyond the column range".into()))?;
            if !ctx.ideal.reduce(&pv).is_empty() {
                report.residual(
                    format!(
                        "ideal times invariant {bi} leaves the ideal (degree {})",
                        basis_degree[bi]
                    ),
                    alg.render(&prod),
                );
            }
        }
    }

    // structure constants
    let n = basis.len();
    let mut mult = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let deg = basis_degree[i] + basis_degree[j];
            if deg > d {
                continue;
            }
            let prod = alg.mul(&basis[i], &basis[j])?;
            let v =
                ctx.ideal.reduce(&ctx.vec_of(&prod).ok_or_else(|| {
                    HamredError::Dimension("product beyond the column range".into())
                })?);
            let (rem, combo) = ctx.inv.reduce_tracked(&v);
            if !rem.is_empty() {
                report.residual(
                    format!("product of invariants {i}, {j} is not invariant (degree {deg})"),
                    alg.render(&ctx.poly_of(&rem)),
                );
                continue;
            }
            let mut c = vec![F::zero(); n];
            for (k, x) in combo {
                c[k] = x;
            }
            mult.insert((i, j), c);
        }
    }

    let mut red = ReductionAlgebra {
        degree: d,
        quotient_dims,
        dims,
        basis,
        basis_degree,
        mult,
        report,
        ctx,
    };
    check_unit(&mut red);
    check_associativity(&mut red);
    red.report
        .detail("dims", red.dims.clone())
        .detail("quotient_dims", red.quotient_dims.clone());
    Ok(red)
}

fn unit_vector<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

fn check_unit<F: Field>(red: &mut ReductionAlgebra<F>) {
    let n = red.len();
    if n == 0 {
        red.report.detail("unit", false);
        return;
    }
    let one = NCPoly::one();
    if red.basis[0] != one {
        red.report.residual(
            "basis element 0 is not the unit",
            format!("{:?}", red.basis[0].terms().len()),
        );
        return;
    }
    let mut bad = Vec::new();
    for j in 0..n {
        let e = unit_vector(n, j);
        for key in [(0, j), (j, 0)] {
            if red.mult.get(&key).is_some_and(|m| *m != e) {
                bad.push(key);
            }
        }
    }
    for (a, b) in &bad {
        red.report.residual(
            format!("unit law at ({a}, {b})"),
            "product differs from the basis element",
        );
    }
    red.report.detail("unit", bad.is_empty());
}

fn check_associativity<F: Field>(red: &mut ReductionAlgebra<F>) {
    let n = red.len();
    let d = red.degree;
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if red.basis_degree[i] + red.basis_degree[j] + red.basis_degree[k] > d {
                    continue;
                }
                let (Some(ij), Some(jk)) = (red.mult.get(&(i, j)), red.mult.get(&(j, k))) else {
                    continue;
                };
                let lhs = red.mul_coords(ij, &unit_vector(n, k));
                let rhs = red.mul_coords(&unit_vector(n, i), jk);
                checked += 1;
                match (lhs, rhs) {
                    (Some(l), Some(r)) if l == r => {}
                    (Some(l), Some(r)) => {
                        let diff: SparseVec<F> = {
                            let mut x: SparseVec<F> = l
                                .into_iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_zero())
                                .collect();
                            let y: SparseVec<F> = r
                                .into_iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_zero())
                                .collect();
                            axpy(&mut x, &F::one().neg(), &y);
                            x
                        };
                        failures.push((i, j, k, format!("{} nonzero coordinates", diff.len())));
                    }
                    _ => failures.push((i, j, k, "product missing from the table".into())),
                }
            }
        }
    }
    for (i, j, k, why) in &failures {
        red.report
            .residual(format!("associativity ({i} {j}) {k}"), why.clone());
    }
    red.report
        .detail("associativity_triples", checked as u64)
        .detail("associative", failures.is_empty());
}
