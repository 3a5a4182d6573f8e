//! The poset construction `D(P)`.
//!
//! For a finite poset with least element `0̂`, degree `i >= 1` of `D(P)` is
//! the direct sum over `α` of the reduced homology `H̃_{i-2}(Δ_α)`, where
//! `Δ_α` is the order complex of the open interval `(0̂, α)`, and degree 0 is
//! one-dimensional. The map out of the `α` summand is the sum over lower
//! covers `λ ⋖ α` of the Mayer–Vietoris connecting map for
//! `Δ_α = D_λ ∪ (⋃_{β ≠ λ} D_β)` followed by the inclusion into `Δ_λ`.
//!
//! The connecting map is computed on cycle representatives: split a cycle
//! `z` of `Δ_α` as `Σ_λ z_λ` by assigning every face to a lower cover of `α`
//! lying above its top element; the `λ` component of the image is the class
//! of `d(z_λ)` in `Δ_λ`. The class does not depend on the assignment.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainComplexOverField, HomologyResult, Selection};
use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::matrix::FieldMatrix;
use crate::poset::Poset;
use crate::simplicial::{boundary_faces, Face, SimplicialComplex};

/// Which lower cover a face is charged to when several qualify.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverStrategy {
    #[default]
    SmallestId,
    LargestId,
}

/// Assignment of the elements of `(0̂, α)` to lower covers of `α` above them.
///
/// A face of `Δ_α` is charged to the cover assigned to its top element, so the
/// fibres partition `(0̂, α)` into blocks each lying below its cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverAssignment {
    pub alpha: usize,
    assigned: BTreeMap<usize, usize>,
}

impl CoverAssignment {
    pub fn cover_of(&self, element: usize) -> Option<usize> {
        self.assigned.get(&element).copied()
    }

    /// `(element, cover)` pairs in element order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assigned.iter().map(|(&e, &c)| (e, c))
    }

    /// Cover charged with a face of `Δ_α`; `None` for the empty face.
    pub fn cover_of_face(&self, p: &Poset, face: &[usize]) -> Option<usize> {
        let top = *face.last()?;
        self.cover_of(p.linear_extension()[top])
    }
}

pub fn cover_assignment(
    p: &Poset,
    alpha: usize,
    strategy: CoverStrategy,
) -> Result<CoverAssignment> {
    let bottom = p.least_element().ok_or(Error::NoLeastElement)?;
    let covers = p.lower_covers(alpha);
    let mut assigned = BTreeMap::new();
    for x in p.open_interval_elements(bottom, alpha) {
        let mut candidates = covers.iter().copied().filter(|&l| p.leq(x, l));
        let pick = match strategy {
            CoverStrategy::SmallestId => candidates.next(),
            CoverStrategy::LargestId => candidates.next_back(),
        };
        assigned.insert(
            x,
            pick.expect("every element below alpha lies below a lower cover"),
        );
    }
    Ok(CoverAssignment { alpha, assigned })
}

/// Order complex of `(0̂, α)` with its reduced homology.
#[derive(Clone, Debug)]
pub struct IntervalHomology {
    pub element: usize,
    pub complex: SimplicialComplex,
    pub chain: ChainComplexOverField,
    pub homology: HomologyResult,
}

/// Interval homology for every element; `None` at `0̂`.
pub fn interval_homology_table(
    p: &Poset,
    field: FieldConfig,
) -> Result<Vec<Option<IntervalHomology>>> {
    let bottom = p.least_element().ok_or(Error::NoLeastElement)?;
    (0..p.len())
        .into_par_iter()
        .map(|alpha| {
            if alpha == bottom {
                return Ok(None);
            }
            let complex = p.order_complex_on(&p.open_interval_elements(bottom, alpha));
            let chain = complex.reduced_chain_complex(field);
            let homology = chain.homology()?;
            Ok(Some(IntervalHomology {
                element: alpha,
                complex,
                chain,
                homology,
            }))
        })
        .collect()
}

fn entry(table: &[Option<IntervalHomology>], x: usize) -> &IntervalHomology {
    table[x]
        .as_ref()
        .expect("table covers every element above the bottom")
}

/// Adds `coef * d(face)` into `acc`.
fn accumulate_boundary(
    field: FieldConfig,
    acc: &mut HashMap<Face, Scalar>,
    face: &[usize],
    coef: &Scalar,
) {
    for (sign, sub) in boundary_faces(face) {
        let term = field.mul(coef, &field.from_int(sign));
        let slot = acc.entry(sub).or_insert_with(Scalar::zero);
        *slot = field.add(slot, &term);
    }
}

/// Coordinates of the class of the chain `acc` (a cycle of degree `degree`)
/// in the stored homology basis of `Δ_target`.
fn coordinates_in(
    table: &[Option<IntervalHomology>],
    target: usize,
    degree: i32,
    acc: &HashMap<Face, Scalar>,
) -> Result<Vec<Scalar>> {
    let interval = entry(table, target);
    let faces = interval.complex.faces(degree);
    let mut v = vec![Scalar::zero(); faces.len()];
    for (face, coef) in acc {
        if coef.is_zero() {
            continue;
        }
        let i = interval.complex.face_index(face).ok_or_else(|| {
            Error::CoordinateSolveFailed(format!(
                "image face outside the interval below element {target}"
            ))
        })?;
        v[i] = coef.clone();
    }
    match interval.homology.degree(degree) {
        Some(h) => h.expand(&v).map_err(|e| match e {
            Error::NotACycle(d) => {
                Error::CoordinateSolveFailed(format!("image is not a cycle in degree {d}"))
            }
            other => other,
        }),
        None => Ok(Vec::new()),
    }
}

/// The `λ` component of the connecting map applied to the class of `z`, a
/// cycle of degree `degree` in `Δ_α`, as coordinates in the homology basis
/// of `Δ_λ` one degree lower.
///
/// For an atom `α` (where `Δ_α = {∅}`) the map is the identity onto the
/// degree-zero summand and the single coordinate of `z` is returned.
pub fn connecting_map(
    p: &Poset,
    table: &[Option<IntervalHomology>],
    alpha: usize,
    lambda: usize,
    degree: i32,
    z: &[Scalar],
    assignment: &CoverAssignment,
) -> Result<Vec<Scalar>> {
    if !p.covered_by(lambda, alpha) {
        return Err(Error::NotComparable {
            a: p.id(lambda).into(),
            b: p.id(alpha).into(),
        });
    }
    let source = entry(table, alpha);
    let field = source.chain.field();
    let faces = source.complex.faces(degree);
    if z.len() != faces.len() {
        return Err(Error::DimensionMismatch(format!(
            "chain of length {} in degree {degree} with {} faces",
            z.len(),
            faces.len()
        )));
    }
    if !source
        .chain
        .diff(degree)
        .mul_vec(z)?
        .iter()
        .all(Scalar::is_zero)
    {
        return Err(Error::NotACycle(degree));
    }
    if degree == -1 {
        return Ok(vec![z[0].clone()]);
    }
    let mut acc = HashMap::new();
    for (face, coef) in faces.iter().zip(z) {
        if !coef.is_zero() && assignment.cover_of_face(p, face) == Some(lambda) {
            accumulate_boundary(field, &mut acc, face, coef);
        }
    }
    coordinates_in(table, lambda, degree - 1, &acc)
}

/// The sequence `D(P)` with its basis bookkeeping.
#[derive(Clone, Debug)]
pub struct DSequence {
    pub complex: ChainComplexOverField,
    /// Per degree, `(element, homology basis index)` for each basis vector.
    pub basis: Vec<Vec<(usize, usize)>>,
    pub bottom: usize,
    pub is_complex: bool,
    pub strategy: CoverStrategy,
    pub table: Vec<Option<IntervalHomology>>,
    positions: Vec<HashMap<(usize, usize), usize>>,
}

impl DSequence {
    pub fn max_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    /// Map out of degree `i`.
    pub fn phi(&self, i: usize) -> FieldMatrix {
        self.complex.diff(i as i32)
    }

    /// Position of `(element, k)` in degree `i`.
    pub fn position(&self, i: usize, element: usize, k: usize) -> Option<usize> {
        self.positions
            .get(i)
            .and_then(|m| m.get(&(element, k)).copied())
    }

    /// Basis positions in degree `i` belonging to `element`.
    pub fn summand(&self, i: usize, element: usize) -> Vec<usize> {
        self.basis
            .get(i)
            .map(|b| {
                b.iter()
                    .enumerate()
                    .filter(|(_, &(e, _))| e == element)
                    .map(|(j, _)| j)
                    .collect()
            })
            .unwrap_or_default()
    }
}

pub fn d_construction(p: &Poset, field: FieldConfig, strategy: CoverStrategy) -> Result<DSequence> {
    let table = interval_homology_table(p, field)?;
    d_construction_from_table(p, table, strategy)
}

pub fn d_construction_from_table(
    p: &Poset,
    table: Vec<Option<IntervalHomology>>,
    strategy: CoverStrategy,
) -> Result<DSequence> {
    let bottom = p.least_element().ok_or(Error::NoLeastElement)?;
    let field = table
        .iter()
        .flatten()
        .next()
        .map_or(FieldConfig::Rationals, |t| t.chain.field());

    let top_degree = table
        .iter()
        .flatten()
        .flat_map(|t| {
            t.homology
                .degrees
                .iter()
                .filter(|h| h.betti > 0)
                .map(|h| h.degree + 2)
        })
        .max()
        .unwrap_or(0)
        .max(0) as usize;

    let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); top_degree + 1];
    basis[0].push((bottom, 0));
    for alpha in (0..p.len()).filter(|&a| a != bottom) {
        for h in &entry(&table, alpha).homology.degrees {
            for k in 0..h.betti {
                basis[(h.degree + 2) as usize].push((alpha, k));
            }
        }
    }
    let positions: Vec<HashMap<(usize, usize), usize>> = basis
        .iter()
        .map(|b| b.iter().enumerate().map(|(j, &key)| (key, j)).collect())
        .collect();

    let assignments: HashMap<usize, CoverAssignment> = (0..p.len())
        .filter(|&a| a != bottom)
        .map(|a| Ok((a, cover_assignment(p, a, strategy)?)))
        .collect::<Result<_>>()?;

    let mut diffs = Vec::with_capacity(top_degree);
    for i in 1..=top_degree {
        let mut m = FieldMatrix::zeros(field, basis[i - 1].len(), basis[i].len());
        let columns: Vec<Vec<(usize, Scalar)>> = basis[i]
            .par_iter()
            .map(|&(alpha, k)| {
                let degree = i as i32 - 2;
                let z = &entry(&table, alpha)
                    .homology
                    .degree(degree)
                    .expect("basis degree exists")
                    .cycle_basis[k];
                let mut col = Vec::new();
                for &lambda in p.lower_covers(alpha) {
                    let coords =
                        connecting_map(p, &table, alpha, lambda, degree, z, &assignments[&alpha])?;
                    for (j, c) in coords.into_iter().enumerate() {
                        if !c.is_zero() {
                            let target = if i == 1 { (bottom, 0) } else { (lambda, j) };
                            col.push((positions[i - 1][&target], c));
                        }
                    }
                }
                Ok(col)
            })
            .collect::<Result<_>>()?;
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                m.add_to(r, c, &v);
            }
        }
        diffs.push(m);
    }

    let labels = basis
        .iter()
        .map(|b| {
            b.iter()
                .map(|&(e, k)| {
                    let single = b.iter().filter(|&&(x, _)| x == e).count() == 1;
                    if single {
                        p.id(e).to_string()
                    } else {
                        format!("{}#{k}", p.id(e))
                    }
                })
                .collect()
        })
        .collect();
    let complex = ChainComplexOverField::new(field, 0, labels, diffs)?;
    let is_complex = complex.is_complex();
    Ok(DSequence {
        complex,
        basis,
        bottom,
        is_complex,
        strategy,
        table,
        positions,
    })
}

/// Union of the closed lower intervals `(0̂, γ]` over `γ <= α` with
/// `rank(γ) = rank(α) - j`.
pub fn skeletal_filtration(p: &Poset, alpha: usize, j: usize) -> Result<SimplicialComplex> {
    let rank = p.compute_rank()?;
    let bottom = p.least_element().ok_or(Error::NoLeastElement)?;
    let Some(target) = rank.rank(alpha).checked_sub(j) else {
        return Ok(p.order_complex_on(&[]));
    };
    let tops: Vec<usize> = (0..p.len())
        .filter(|&g| p.leq(g, alpha) && rank.rank(g) == target)
        .collect();
    let ideal: Vec<usize> = (0..p.len())
        .filter(|&x| x != bottom && tops.iter().any(|&g| p.leq(x, g)))
        .collect();
    Ok(p.order_complex_on(&ideal))
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationCheck {
    pub element: String,
    pub j: usize,
    pub holds: bool,
    pub classes_checked: usize,
    /// Degrees of relative classes where the two routes disagree.
    pub failing_degrees: Vec<i32>,
}

/// Reindexing of a chain supported off the next filtration stage: group by
/// top element `β`, take `d` of each group and read it in `H̃(Δ_β)`, placing
/// the coordinates into degree `degree + 1` of `D(P)`.
fn reindex(
    p: &Poset,
    d: &DSequence,
    field: FieldConfig,
    faces: &[Face],
    chain: &[Scalar],
    degree: i32,
) -> Result<Vec<Scalar>> {
    let target = (degree + 1) as usize;
    let mut out = vec![Scalar::zero(); d.basis.get(target).map_or(0, Vec::len)];
    let mut groups: BTreeMap<usize, HashMap<Face, Scalar>> = BTreeMap::new();
    for (face, coef) in faces.iter().zip(chain) {
        if coef.is_zero() {
            continue;
        }
        let top = p.linear_extension()[*face.last().expect("relative chains have nonempty faces")];
        accumulate_boundary(field, groups.entry(top).or_default(), face, coef);
    }
    for (beta, acc) in groups {
        let coords = coordinates_in(&d.table, beta, degree - 1, &acc)?;
        for (k, c) in coords.into_iter().enumerate() {
            let pos = d.position(target, beta, k).ok_or_else(|| {
                Error::CoordinateSolveFailed(format!(
                    "no D-basis vector for {} in degree {target}",
                    p.id(beta)
                ))
            })?;
            out[pos] = c;
        }
    }
    Ok(out)
}

/// Checks that the connecting map of the triple of filtration stages
/// `j+2 ⊂ j+1 ⊂ j` below `α` agrees with `φ` after reindexing, on a basis of
/// the relative homology in every degree `>= 1`.
pub fn check_filtration_square(
    p: &Poset,
    d: &DSequence,
    alpha: usize,
    j: usize,
) -> Result<FiltrationCheck> {
    let field = d.complex.field();
    let stage = skeletal_filtration(p, alpha, j)?;
    let next = skeletal_filtration(p, alpha, j + 1)?;
    let after = skeletal_filtration(p, alpha, j + 2)?;

    let chain = stage.reduced_chain_complex(field);
    let mask = (-1..=stage.dim())
        .map(|deg| stage.faces(deg).iter().map(|f| next.contains(f)).collect())
        .collect();
    let relative = chain.relative_homology(&Selection::from_mask(mask))?;

    let mut classes_checked = 0;
    let mut failing_degrees = Vec::new();
    for h in relative
        .homology
        .degrees
        .iter()
        .filter(|h| h.degree >= 1 && h.betti > 0)
    {
        let i = h.degree;
        let k = (i + 1) as usize;
        let faces = stage.faces(i);
        for w in &h.cycle_basis {
            classes_checked += 1;
            let mut lifted = vec![Scalar::zero(); faces.len()];
            for (q, &orig) in relative.kept[k].iter().enumerate() {
                lifted[orig] = w[q].clone();
            }

            // reindex, then φ
            let x = reindex(p, d, field, faces, &lifted, i)?;
            let via_phi = d.phi((i + 1) as usize).mul_vec(&x)?;

            // connecting map of the triple, then reindex
            let mut boundary: HashMap<Face, Scalar> = HashMap::new();
            for (face, coef) in faces.iter().zip(&lifted) {
                if !coef.is_zero() {
                    accumulate_boundary(field, &mut boundary, face, coef);
                }
            }
            let lower_faces: Vec<Face> = stage
                .faces(i - 1)
                .iter()
                .filter(|f| !after.contains(f))
                .cloned()
                .collect();
            let projected: Vec<Scalar> = lower_faces
                .iter()
                .map(|f| boundary.get(f).cloned().unwrap_or_else(Scalar::zero))
                .collect();
            let via_connecting = reindex(p, d, field, &lower_faces, &projected, i - 1)?;

            if via_phi != via_connecting {
                failing_degrees.push(i);
            }
        }
    }
    failing_degrees.dedup();
    Ok(FiltrationCheck {
        element: p.id(alpha).to_string(),
        j,
        holds: failing_degrees.is_empty(),
        classes_checked,
        failing_degrees,
    })
}

/// Runs [`check_filtration_square`] for every element above `0̂` and every
/// `j` from 0 to its rank.
pub fn check_all_filtration_squares(p: &Poset, d: &DSequence) -> Result<Vec<FiltrationCheck>> {
    let rank = p.compute_rank()?;
    let bottom = d.bottom;
    let jobs: Vec<(usize, usize)> = (0..p.len())
        .filter(|&a| a != bottom)
        .flat_map(|a| (0..=rank.rank(a)).map(move |j| (a, j)))
        .collect();
    jobs.par_iter()
        .map(|&(a, j)| check_filtration_square(p, d, a, j))
        .collect()
}
