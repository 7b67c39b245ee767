use std::collections::BTreeMap;

use super::{DahaFragment, DahaGen, ReductionAlgebra};
use crate::field::Field;
use crate::linalg::{kernel_of_rows, Echelon, SparseVec};
use crate::report::CheckReport;

/// Which side of the reduction is matched with multiplication operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `A`-degree ↔ x-degree, `B`-degree ↔ shift-degree.
    Direct,
    Swapped,
}

impl Orientation {
    fn map(self, (a, b): (u32, u32)) -> (u32, u32) {
        match self {
            Orientation::Direct => (a, b),
            Orientation::Swapped => (b, a),
        }
    }
}

/// Words with `a` letters `u` (false) and `b` letters `v` (true).
fn words(a: u32, b: u32) -> Vec<Vec<bool>> {
    let n = (a + b) as usize;
    (0u32..1 << n)
        .filter(|m| m.count_ones() == b)
        .map(|m| (0..n).map(|i| m >> (n - 1 - i) & 1 == 1).collect())
        .collect()
}

fn kernel<F: Field>(vecs: &[SparseVec<F>]) -> Echelon<F> {
    // rows of the matrix whose columns are the vectors
    let mut rows: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
    for (j, v) in vecs.iter().enumerate() {
        for (&k, c) in v {
            rows.entry(k).or_default().insert(j, c.clone());
        }
    }
    let rows: Vec<SparseVec<F>> = rows.into_values().collect();
    let mut e = Echelon::new();
    for k in kernel_of_rows(rows.len(), vecs.len(), |i| rows[i].clone()) {
        e.insert(
            k.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        );
    }
    e
}

fn same_span<F: Field>(a: &Echelon<F>, b: &Echelon<F>) -> bool {
    a.rank() == b.rank() && a.fully_reduced_rows() == b.fully_reduced_rows()
}

fn attempt<F: Field>(
    red: &ReductionAlgebra<F>,
    grading: &[(u32, u32)],
    daha: &DahaFragment<F>,
    d: u32,
    o: Orientation,
) -> CheckReport {
    let mut rep = CheckReport::new(format!("alignment_{o:?}").to_lowercase());
    let n = red.len();
    let bideg: Vec<Option<(u32, u32)>> = (0..n)
        .map(|i| red.multidegree(i, grading).map(|x| o.map(x)))
        .collect();
    let mut red_bi: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (i, b) in bideg.iter().enumerate() {
        match b {
            Some(b) if b.0 + b.1 <= d => *red_bi.entry(*b).or_default() += 1,
            Some(_) => {}
            None => rep.residual(
                format!("basis element {i} is not bihomogeneous"),
                "mixed bidegrees",
            ),
        }
    }
    for (&(a, b), &m) in daha.bigraded.iter().filter(|((a, b), _)| a + b <= d) {
        let r = red_bi.get(&(a, b)).copied().unwrap_or(0);
        if r != m {
            rep.residual(
                format!("bigraded dimension at ({a}, {b})"),
                format!("reduction {r}, daha {m}"),
            );
        }
    }
    if !rep.passed() || d == 0 {
        return rep;
    }
    // degree-1 alignment: both pieces are lines, so it is unique up to scaling
    let find = |t: (u32, u32)| -> Option<usize> {
        let v: Vec<usize> = (0..n).filter(|&i| bideg[i] == Some(t)).collect();
        (v.len() == 1).then(|| v[0])
    };
    let (Some(u), Some(v)) = (find((1, 0)), find((0, 1))) else {
        rep.residual(
            "degree-1 alignment",
            "degree-1 pieces are not one-dimensional lines",
        );
        return rep;
    };
    let unit = |i: usize| {
        let mut x = vec![F::zero(); n];
        x[i] = F::one();
        x
    };
    for total in 2..=d {
        for a in 0..=total {
            let b = total - a;
            let ws = words(a, b);
            let red_vecs: Option<Vec<SparseVec<F>>> = ws
                .iter()
                .map(|w| {
                    let mut acc = unit(if w[0] { v } else { u });
                    for &l in &w[1..] {
                        acc = red.mul_coords(&acc, &unit(if l { v } else { u }))?;
                    }
                    Some(
                        acc.into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect(),
                    )
                })
                .collect();
            let Some(red_vecs) = red_vecs else {
                rep.partial(format!("products beyond the reduction table at ({a}, {b})"));
                continue;
            };
            let daha_words: Vec<Vec<DahaGen>> = ws
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|&l| if l { DahaGen::D1 } else { DahaGen::E1 })
                        .collect()
                })
                .collect();
            let daha_vecs = daha.word_classes(&daha_words, a, b);
            let (kr, kd) = (kernel(&red_vecs), kernel(&daha_vecs));
            rep.detail(format!("relations_{a}_{b}"), kr.rank() as u64);
            if !same_span(&kr, &kd) {
                rep.residual(
                    format!("relations among degree-1 words at ({a}, {b})"),
                    format!("reduction rank {}, daha rank {}", kr.rank(), kd.rank()),
                );
            }
        }
    }
    rep
}

/// Compare a bigraded reduction algebra with the associated graded of the
/// DAHA fragment through degree `d`.
///
/// Checks per-degree and per-bidegree dimensions, then aligns the two
/// degree-1 lines (unique up to scaling, which every check below is
/// invariant under) and compares, for each bidegree, the space of linear
/// relations among words in the two degree-1 generators. The direct
/// orientation is tried first, then the swapped one.
pub fn compare_reduction_to_daha<F: Field>(
    red: &ReductionAlgebra<F>,
    grading: &[(u32, u32)],
    daha: &DahaFragment<F>,
    d: u32,
) -> CheckReport {
    let mut rep = CheckReport::new("compare_reduction_to_daha");
    rep.config("degree", d);
    if red.degree < d || daha.degree < d {
        rep.partial(format!("inputs truncated below degree {d}"));
    }
    let top = d.min(red.degree).min(daha.degree);
    for k in 0..=top as usize {
        let (a, b) = (red.dims[k], daha.dims[k]);
        if a != b {
            rep.residual(
                format!("dimension at degree {k}"),
                format!("reduction {a}, daha {b}"),
            );
        }
    }
    rep.detail("reduction_dims", red.dims[..=top as usize].to_vec())
        .detail("daha_dims", daha.dims[..=top as usize].to_vec());
    rep.absorb(&red.report);
    rep.absorb(&daha.report);
    if !rep.passed() {
        rep.detail("reduction_table", red.table_json());
        rep.detail("daha_bigraded", bigraded_json(&daha.bigraded));
        return rep;
    }
    let mut tried = Vec::new();
    for o in [Orientation::Direct, Orientation::Swapped] {
        let a = attempt(red, grading, daha, top, o);
        if a.passed() {
            rep.detail("orientation", format!("{o:?}").to_lowercase());
            for (k, v) in a.details {
                rep.detail(k, v);
            }
            return rep;
        }
        tried.push(a);
    }
    rep.absorb(&tried[0]);
    if rep.passed() {
        rep.residual("basis alignment", "no orientation aligns the two sides");
    }
    rep.detail("reduction_table", red.table_json());
    rep.detail("daha_bigraded", bigraded_json(&daha.bigraded));
    rep
}

fn bigraded_json(m: &BTreeMap<(u32, u32), usize>) -> serde_json::Value {
    m.iter()
        .map(|((a, b), v)| (format!("{a},{b}"), serde_json::Value::from(*v as u64)))
        .collect::<serde_json::Map<_, _>>()
        .into()
}
