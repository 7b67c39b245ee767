//! Surface-to-algebra compiler: the reflection equation algebra, moduli
//! algebras of punctured surfaces as twisted products of copies of it,
//! boundary moment maps, the counit and the mirabolic quotient.
//!
//! Cross relations ship as data (`data/schemas.json`) and are accepted only
//! after the flatness gate in [`twisted_product`] passes.

mod surface;

pub use surface::{MarkingKind, MarkingRef, SurfaceError, SurfaceSpec};

use std::sync::{Arc, OnceLock};

use serde::Deserialize;

use crate::field::{Field, Params};
use crate::ncalg::{
    quotient, twisted_product, AlgebraPresentation, Generator, GeneratorMap, MatrixSchema, NCPoly,
    NcError, PolyMatrix, RMatrices,
};

#[derive(Debug, Deserialize)]
pub struct Schemas {
    pub reflection_equation: String,
    pub handle_cross: String,
    pub pants_cross: String,
}

pub fn schemas() -> &'static Schemas {
    static S: OnceLock<Schemas> = OnceLock::new();
    S.get_or_init(|| {
        serde_json::from_str(include_str!("../../data/schemas.json"))
            .expect("bundled schema file parses")
    })
}

fn schema(s: &str) -> MatrixSchema {
    s.parse().expect("bundled schema parses")
}

/// `binomial(n, k)` as usize.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Generator names `{prefix}{i}{j}` with matrix positions.
fn matrix_generators(n: usize, prefix: &str) -> Vec<Generator> {
    let mut g = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            g.push(Generator::matrix(format!("{prefix}{i}{j}"), 1, i, j));
        }
    }
    g
}

/// The reflection equation algebra `O_q(GL_N)` on generators
/// `{prefix}ij`, gated on flatness up to `bound`.
pub fn rea_with_prefix<F: Field>(
    n: usize,
    p: &Params<F>,
    bound: u32,
    prefix: &str,
) -> Result<AlgebraPresentation<F>, NcError> {
    if !(2..=3).contains(&n) {
        return Err(NcError::Presentation(format!("N must be 2 or 3, got {n}")));
    }
    let gens = matrix_generators(n, prefix);
    let free = AlgebraPresentation::<F>::free(gens.clone(), 0)?;
    let a = free.matrix()?;
    let rm = RMatrices::new(n, p)?;
    let rels = schema(&schemas().reflection_equation).expand(&rm, &a, None)?;
    let alg = AlgebraPresentation::new(gens, rels, bound)?;
    let k = n * n;
    for d in 0..=bound {
        let expected = binomial(d as usize + k - 1, d as usize);
        let found = alg.graded_dimension(d)?;
        if found != expected {
            return Err(NcError::Flatness {
                degree: d,
                expected,
                found,
            });
        }
    }
    Ok(alg)
}

pub fn rea<F: Field>(
    n: usize,
    p: &Params<F>,
    bound: u32,
) -> Result<AlgebraPresentation<F>, NcError> {
    rea_with_prefix(n, p, bound, "a")
}

/// Quantum adjugate for `N = 2`: `A · adj(A) = adj(A) · A = det_q(A) · 1`.
pub fn adjugate<F: Field>(a: &PolyMatrix<F>, p: &Params<F>) -> PolyMatrix<F> {
    assert_eq!(a.n, 2, "quantum adjugate is implemented for N = 2");
    let q2 = p.qp(2);
    let mut m = PolyMatrix::zeros(2);
    m.set(
        0,
        0,
        a.get(0, 0)
            .scale(&F::one().sub(&q2))
            .add(&a.get(1, 1).scale(&q2)),
    );
    m.set(0, 1, a.get(0, 1).scale(&q2.neg()));
    m.set(1, 0, a.get(1, 0).scale(&q2.neg()));
    m.set(1, 1, a.get(0, 0).clone());
    m
}

/// `det_q(A) = (A · adj(A))_{11}`.
pub fn quantum_det<F: Field>(a: &PolyMatrix<F>, p: &Params<F>) -> NCPoly<F> {
    a.mul(&adjugate(a, p)).get(0, 0).clone()
}

/// Central quantum trace `Σ q^(2i-N-1) a_ii`.
pub fn quantum_trace_of<F: Field>(a: &PolyMatrix<F>, p: &Params<F>) -> NCPoly<F> {
    let n = a.n as i32;
    let mut t = NCPoly::zero();
    for i in 0..a.n {
        t.add_scaled(&p.qp(2 * (i as i32 + 1) - n - 1), a.get(i, i));
    }
    t
}

/// The counit `a_ij ↦ δ_ij` into the ground field.
pub fn counit<F: Field>(rea: Arc<AlgebraPresentation<F>>) -> Result<GeneratorMap<F>, NcError> {
    let ground = Arc::new(AlgebraPresentation::ground(rea.bound()));
    let images = rea
        .generators()
        .iter()
        .map(|g| match g.legs {
            Some((i, j)) if i == j => Ok(NCPoly::one()),
            Some(_) => Ok(NCPoly::zero()),
            None => Err(NcError::Presentation(
                "counit needs matrix generators".into(),
            )),
        })
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorMap::new(rea, ground, images)
}

/// Generator prefixes of handle `k` (1-based) out of `g`.
fn handle_prefixes(g: usize, k: usize) -> (String, String) {
    if g == 1 {
        ("a".into(), "b".into())
    } else {
        (format!("a{k}_"), format!("b{k}_"))
    }
}

/// `A_{S°}` for a surface of genus `g` with one boundary circle: the
/// twisted product of `2g` copies of the reflection equation algebra.
pub fn moduli_algebra<F: Field>(
    spec: &SurfaceSpec,
    n: usize,
    p: &Params<F>,
    bound: u32,
) -> Result<AlgebraPresentation<F>, NcError> {
    if spec.boundary != 1 {
        return Err(NcError::Presentation(
            "moduli algebras are built for surfaces with exactly one boundary circle".into(),
        ));
    }
    let g = spec.genus;
    if g == 0 {
        return Ok(AlgebraPresentation::ground(bound));
    }
    let mut factors = Vec::new();
    for k in 1..=g {
        let (pa, pb) = handle_prefixes(g, k);
        factors.push(rea_with_prefix(n, p, bound, &pa)?);
        factors.push(rea_with_prefix(n, p, bound, &pb)?);
    }
    let handle = schema(&schemas().handle_cross);
    let pants = schema(&schemas().pants_cross);
    let mut crosses = Vec::new();
    for k in 0..g {
        crosses.push((2 * k, 2 * k + 1, handle.clone()));
        for l in k + 1..g {
            for x in [2 * k, 2 * k + 1] {
                for y in [2 * l, 2 * l + 1] {
                    crosses.push((x, y, pants.clone()));
                }
            }
        }
    }
    let refs: Vec<&AlgebraPresentation<F>> = factors.iter().collect();
    twisted_product(&refs, &crosses, p, bound)
}

/// `D_q(GL_N)`, the moduli algebra of the punctured torus.
pub fn dq<F: Field>(
    n: usize,
    p: &Params<F>,
    bound: u32,
) -> Result<AlgebraPresentation<F>, NcError> {
    moduli_algebra(&SurfaceSpec::closed_minus_disc(1), n, p, bound)
}

/// Handle matrices `(A_k, B_k)` of a moduli algebra.
pub fn handle_matrices<F: Field>(
    alg: &AlgebraPresentation<F>,
    g: usize,
    k: usize,
) -> Result<(PolyMatrix<F>, PolyMatrix<F>), NcError> {
    let (pa, pb) = handle_prefixes(g, k);
    let pick = |pre: &str| -> Vec<u8> {
        alg.generators()
            .iter()
            .enumerate()
            .filter(|(_, gen)| {
                gen.name
                    .strip_prefix(pre)
                    .is_some_and(|r| r.len() == 2 && r.bytes().all(|b| b.is_ascii_digit()))
            })
            .map(|(i, _)| i as u8)
            .collect()
    };
    Ok((
        alg.generator_matrix(&pick(&pa))?,
        alg.generator_matrix(&pick(&pb))?,
    ))
}

/// Unnormalized torus monodromy `A · adj(B) · adj(A) · B`, of degree 4.
pub fn torus_monodromy<F: Field>(
    a: &PolyMatrix<F>,
    b: &PolyMatrix<F>,
    p: &Params<F>,
) -> PolyMatrix<F> {
    a.mul(&adjugate(b, p)).mul(&adjugate(a, p)).mul(b)
}

/// `c = det_q(A) det_q(B)`, which clears denominators of the torus moment
/// map. It is not central (`c a = q^2 a c`, `c b = q^-2 b c`) but commutes
/// with every entry of the monodromy.
pub fn torus_denominator<F: Field>(
    a: &PolyMatrix<F>,
    b: &PolyMatrix<F>,
    p: &Params<F>,
) -> NCPoly<F> {
    quantum_det(a, p).mul(&quantum_det(b, p))
}

/// Boundary moment map `O_q(GL_N) → A_{S°}`.
///
/// Genus 0 gives the counit. For the torus (`N = 2`) the generator matrix
/// maps to `q^-4 · A adj(B) adj(A) B · c^-1` with `c = det_q(A) det_q(B)`,
/// stored as the map's denominator. With this normalization `det_q` maps
/// to one.
pub fn boundary_moment_map<F: Field>(
    spec: &SurfaceSpec,
    n: usize,
    p: &Params<F>,
    rea_alg: Arc<AlgebraPresentation<F>>,
    target: Arc<AlgebraPresentation<F>>,
) -> Result<GeneratorMap<F>, NcError> {
    match spec.genus {
        0 => counit(rea_alg),
        1 if n == 2 => {
            let (a, b) = handle_matrices(&target, 1, 1)?;
            let mu = torus_monodromy(&a, &b, p).scale(&p.qp(-4));
            let images = rea_alg
                .generators()
                .iter()
                .map(|g| {
                    let (i, j) = g.legs.ok_or_else(|| {
                        NcError::Presentation("source needs matrix generators".into())
                    })?;
                    Ok(mu.get(i - 1, j - 1).clone())
                })
                .collect::<Result<Vec<_>, NcError>>()?;
            Ok(GeneratorMap::new(rea_alg, target, images)?
                .with_denominator(torus_denominator(&a, &b, p)))
        }
        _ => Err(NcError::Presentation(
            "boundary moment maps are built for genus 0, and for genus 1 with N = 2".into(),
        )),
    }
}

/// Generator of the mirabolic ideal `I_t` in `O_q(GL_2)`:
/// `det_q(A) - t tr_q(A) + t^2`.
pub fn mirabolic_generator<F: Field>(
    rea_alg: &AlgebraPresentation<F>,
    p: &Params<F>,
) -> Result<NCPoly<F>, NcError> {
    let a = rea_alg.matrix()?;
    if a.n != 2 {
        return Err(NcError::Presentation(
            "the mirabolic ideal is implemented for N = 2".into(),
        ));
    }
    let mut g = quantum_det(&a, p);
    g.add_scaled(&p.t.neg(), &quantum_trace_of(&a, p));
    g.add_term(Vec::new(), &p.t.mul(&p.t));
    Ok(g)
}

/// `A_t = O_q(GL_2) / I_t` with its quotient moment map.
pub fn mirabolic_quotient<F: Field>(
    p: &Params<F>,
    bound: u32,
) -> Result<(Arc<AlgebraPresentation<F>>, GeneratorMap<F>), NcError> {
    let o = Arc::new(rea(2, p, bound)?);
    let g = mirabolic_generator(&o, p)?;
    quotient(&o, &[g])
}

/// Moment maps of the marked points of a surface.
pub fn compile_markings<F: Field>(
    spec: &SurfaceSpec,
    p: &Params<F>,
    bound: u32,
) -> Result<Vec<MarkingRef<F>>, NcError> {
    spec.markings
        .iter()
        .map(|(label, kind)| match kind {
            MarkingKind::Mirabolic => {
                let (alg, map) = mirabolic_quotient(p, bound)?;
                Ok(MarkingRef {
                    label: label.clone(),
                    algebra: alg,
                    moment_map: map,
                })
            }
        })
        .collect()
}
