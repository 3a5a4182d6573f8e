//! Chain complexes of finite-dimensional vector spaces and their homology.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::matrix::{FieldMatrix, SpanSolver};

/// A bounded chain complex `C_hi -> ... -> C_lo`.
///
/// `diffs[k]` maps degree `lo + k` to degree `lo + k - 1`; the lowest
/// differential is the zero map to the zero space.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplexOverField {
    field: FieldConfig,
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<FieldMatrix>,
    labels: Vec<Vec<String>>,
}

impl ChainComplexOverField {
    /// Builds a complex from the differentials of degrees `lo + 1 ..= lo + dims.len() - 1`.
    ///
    /// `diffs[k]` must be a `dims[k] x dims[k + 1]` matrix.
    pub fn new(
        field: FieldConfig,
        lo: i32,
        labels: Vec<Vec<String>>,
        upper_diffs: Vec<FieldMatrix>,
    ) -> Result<Self> {
        let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
        if upper_diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                upper_diffs.len()
            )));
        }
        for (k, labs) in labels.iter().enumerate() {
            let mut seen = HashSet::new();
            for l in labs {
                if !seen.insert(l) {
                    return Err(Error::DuplicateLabel {
                        degree: lo + k as i32,
                        label: l.clone(),
                    });
                }
            }
        }
        let mut diffs = Vec::with_capacity(dims.len());
        diffs.push(FieldMatrix::zeros(
            field,
            0,
            dims.first().copied().unwrap_or(0),
        ));
        for (k, d) in upper_diffs.into_iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] || d.field() != field {
                return Err(Error::DimensionMismatch(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lo + k as i32 + 1,
                    d.rows(),
                    d.cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
            diffs.push(d);
        }
        Ok(ChainComplexOverField {
            field,
            lo,
            dims,
            diffs,
            labels,
        })
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree; `lo - 1` for a complex with no degrees.
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> {
        self.lo..=self.hi()
    }

    fn index(&self, degree: i32) -> Option<usize> {
        (degree >= self.lo && degree <= self.hi()).then(|| (degree - self.lo) as usize)
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.index(degree).map_or(0, |k| self.dims[k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.index(degree)
            .map_or(&[], |k| self.labels[k].as_slice())
    }

    /// Differential out of `degree`, a `dim(degree - 1) x dim(degree)` matrix.
    pub fn diff(&self, degree: i32) -> FieldMatrix {
        match self.index(degree) {
            Some(k) => self.diffs[k].clone(),
            None => FieldMatrix::zeros(self.field, self.dim(degree - 1), 0),
        }
    }

    pub fn diff_ref(&self, degree: i32) -> Option<&FieldMatrix> {
        self.index(degree).map(|k| &self.diffs[k])
    }

    /// Rank of the differential out of `degree`.
    pub fn diff_rank(&self, degree: i32) -> usize {
        self.diff_ref(degree).map_or(0, FieldMatrix::rank)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(d) as i64)
            .sum()
    }

    /// First nonzero entry of a composition `diff(i - 1) * diff(i)`, as
    /// `(i, row, col)`, or `None` when the sequence is a complex.
    pub fn verify(&self) -> Option<(i32, usize, usize)> {
        for k in 1..self.diffs.len() {
            let comp = self.diffs[k - 1]
                .mul(&self.diffs[k])
                .expect("shapes checked at construction");
            let first = comp.nonzeros().next().map(|(r, c, _)| (r, c));
            if let Some((r, c)) = first {
                return Some((self.lo + k as i32, r, c));
            }
        }
        None
    }

    pub fn is_complex(&self) -> bool {
        self.verify().is_none()
    }

    pub fn ensure_complex(&self) -> Result<()> {
        match self.verify() {
            Some((degree, row, col)) => Err(Error::NotAComplex { degree, row, col }),
            None => Ok(()),
        }
    }

    /// Homology in every degree with explicit cycle representatives.
    pub fn homology(&self) -> Result<HomologyResult> {
        self.ensure_complex()?;
        let degrees = self
            .degrees()
            .map(|d| self.homology_in_degree(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomologyResult {
            lo: self.lo,
            degrees,
        })
    }

    fn homology_in_degree(&self, degree: i32) -> Result<HomologyDegree> {
        let f = self.field;
        let dim = self.dim(degree);
        let out = self.diff(degree);
        let cycles = out.kernel_basis();
        let incoming = self.diff(degree + 1);
        let boundaries: Vec<Vec<Scalar>> = incoming
            .pivot_columns()
            .into_iter()
            .map(|c| incoming.column(c))
            .collect();
        let nb = boundaries.len();

        let mut columns = boundaries.clone();
        columns.extend(cycles.iter().cloned());
        let stacked = FieldMatrix::from_columns(f, dim, &columns);
        let mut cycle_basis: Vec<Vec<Scalar>> = stacked
            .pivot_columns()
            .into_iter()
            .filter(|&c| c >= nb)
            .map(|c| cycles[c - nb].clone())
            .collect();
        for z in &mut cycle_basis {
            normalize_leading(f, z);
        }

        let solver = if dim == 0 {
            None
        } else {
            let mut cols = boundaries;
            cols.extend(cycle_basis.iter().cloned());
            Some(SpanSolver::new(FieldMatrix::from_columns(f, dim, &cols))?)
        };
        Ok(HomologyDegree {
            degree,
            betti: cycle_basis.len(),
            cycle_basis,
            boundary_rank: nb,
            differential: out,
            solver,
        })
    }

    /// The quotient by a subcomplex and its homology.
    pub fn relative_homology(&self, sub: &Selection) -> Result<RelativeHomology> {
        self.ensure_complex()?;
        if sub.mask.len() != self.dims.len()
            || sub.mask.iter().zip(&self.dims).any(|(m, &d)| m.len() != d)
        {
            return Err(Error::DimensionMismatch(
                "selection shape does not match the complex".into(),
            ));
        }
        // Closed under the differential: selected columns only hit selected rows.
        for k in 1..self.dims.len() {
            for (r, c, _) in self.diffs[k].nonzeros() {
                if sub.mask[k][c] && !sub.mask[k - 1][r] {
                    return Err(Error::NotASubcomplex {
                        degree: self.lo + k as i32,
                        label: self.labels[k][c].clone(),
                    });
                }
            }
        }
        let kept: Vec<Vec<usize>> = sub
            .mask
            .iter()
            .map(|m| (0..m.len()).filter(|&i| !m[i]).collect())
            .collect();
        let labels = kept
            .iter()
            .enumerate()
            .map(|(k, idx)| idx.iter().map(|&i| self.labels[k][i].clone()).collect())
            .collect();
        let diffs = (1..self.dims.len())
            .map(|k| self.diffs[k].select(&kept[k - 1], &kept[k]))
            .collect();
        let quotient = ChainComplexOverField::new(self.field, self.lo, labels, diffs)?;
        let homology = quotient.homology()?;
        Ok(RelativeHomology {
            quotient,
            kept,
            homology,
        })
    }

    /// The same complex with its lowest degree moved to `lo`.
    pub fn shifted(&self, lo: i32) -> ChainComplexOverField {
        ChainComplexOverField { lo, ..self.clone() }
    }

    /// The subcomplex on the given basis elements (assumed closed).
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<ChainComplexOverField> {
        let labels = keep
            .iter()
            .enumerate()
            .map(|(k, idx)| idx.iter().map(|&i| self.labels[k][i].clone()).collect())
            .collect();
        let diffs = (1..self.dims.len())
            .map(|k| self.diffs[k].select(&keep[k - 1], &keep[k]))
            .collect();
        ChainComplexOverField::new(self.field, self.lo, labels, diffs)
    }
}

fn normalize_leading(f: FieldConfig, v: &mut [Scalar]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        let inv = f.inv(&lead);
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = f.mul(x, &inv);
            }
        }
    }
}

/// Subset of the basis of a complex, one mask per degree.
#[derive(Clone, Debug)]
pub struct Selection {
    mask: Vec<Vec<bool>>,
}

impl Selection {
    pub fn from_mask(mask: Vec<Vec<bool>>) -> Self {
        Selection { mask }
    }

    /// Selects basis elements by `(degree, label)`.
    pub fn from_labels<'a>(
        c: &ChainComplexOverField,
        picks: impl IntoIterator<Item = (i32, &'a str)>,
    ) -> Result<Self> {
        let mut mask: Vec<Vec<bool>> = c.dims.iter().map(|&d| vec![false; d]).collect();
        for (degree, label) in picks {
            let k = c
                .index(degree)
                .ok_or_else(|| Error::UnknownElement(format!("degree {degree}")))?;
            let i = c.labels[k]
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::UnknownElement(label.to_string()))?;
            mask[k][i] = true;
        }
        Ok(Selection { mask })
    }

    pub fn everything(c: &ChainComplexOverField) -> Self {
        Selection {
            mask: c.dims.iter().map(|&d| vec![true; d]).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelativeHomology {
    pub quotient: ChainComplexOverField,
    /// For each degree, the original basis indices surviving in the quotient.
    pub kept: Vec<Vec<usize>>,
    pub homology: HomologyResult,
}

/// Homology of one degree with a cycle basis and an expansion solver.
#[derive(Clone, Debug)]
pub struct HomologyDegree {
    pub degree: i32,
    pub betti: usize,
    /// Cycles whose classes form a basis of homology, each scaled so its
    /// first nonzero coordinate is one.
    pub cycle_basis: Vec<Vec<Scalar>>,
    pub boundary_rank: usize,
    differential: FieldMatrix,
    solver: Option<SpanSolver>,
}

impl HomologyDegree {
    /// Coordinates of the class of `z` in the cycle basis.
    pub fn expand(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.differential.mul_vec(z)?.iter().all(Scalar::is_zero) {
            return Err(Error::NotACycle(self.degree));
        }
        let Some(solver) = &self.solver else {
            return Ok(Vec::new());
        };
        let coords = solver.solve(z)?.ok_or_else(|| {
            Error::CoordinateSolveFailed(format!(
                "cycle in degree {} outside cycle span",
                self.degree
            ))
        })?;
        Ok(coords[self.boundary_rank..].to_vec())
    }
}

#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub lo: i32,
    pub degrees: Vec<HomologyDegree>,
}

impl HomologyResult {
    pub fn degree(&self, d: i32) -> Option<&HomologyDegree> {
        let k = d - self.lo;
        (k >= 0).then(|| self.degrees.get(k as usize)).flatten()
    }

    pub fn betti(&self, d: i32) -> usize {
        self.degree(d).map_or(0, |h| h.betti)
    }

    /// `(degree, betti)` for every degree of the complex.
    pub fn betti_numbers(&self) -> Vec<(i32, usize)> {
        self.degrees.iter().map(|h| (h.degree, h.betti)).collect()
    }

    pub fn total(&self) -> usize {
        self.degrees.iter().map(|h| h.betti).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|h| if h.degree.rem_euclid(2) == 0 { 1 } else { -1 } * h.betti as i64)
            .sum()
    }
}

/// Outcome of comparing two complexes by dimension and rank data.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub isomorphic: bool,
    /// `(degree of C, dim C_i, dim D_{i+shift})`.
    pub dims: Vec<(i32, usize, usize)>,
    /// `(degree of C, rank of C's differential, rank of D's differential)`.
    pub ranks: Vec<(i32, usize, usize)>,
    pub reason: Option<String>,
}

/// Decides whether `c` and `d` are isomorphic with `c_i` matched to `d_{i+shift}`.
///
/// Complexes of finite-dimensional vector spaces are classified up to
/// isomorphism by their dimensions and the ranks of their differentials.
pub fn compare_complexes(
    c: &ChainComplexOverField,
    d: &ChainComplexOverField,
    shift: i32,
) -> Comparison {
    let lo = c.lo().min(d.lo() - shift);
    let hi = c.hi().max(d.hi() - shift);
    let mut dims = Vec::new();
    let mut ranks = Vec::new();
    let mut reason = None;
    if !c.is_complex() || !d.is_complex() {
        reason = Some("input is not a chain complex".to_string());
    }
    for i in lo..=hi {
        let (a, b) = (c.dim(i), d.dim(i + shift));
        dims.push((i, a, b));
        if a != b && reason.is_none() {
            reason = Some(format!("dimension differs in degree {i}: {a} vs {b}"));
        }
        let (ra, rb) = (c.diff_rank(i), d.diff_rank(i + shift));
        ranks.push((i, ra, rb));
        if ra != rb && reason.is_none() {
            reason = Some(format!(
                "differential rank differs in degree {i}: {ra} vs {rb}"
            ));
        }
    }
    Comparison {
        isomorphic: reason.is_none(),
        dims,
        ranks,
        reason,
    }
}

/// Looks for signs `s` on the basis of `a` such that
/// `b[r][c] = s_r * a[r][c] * s_c` for every differential, with degrees of
/// `a` matched to degrees of `b` shifted by `shift`. Returns the signs per
/// degree of `a` when they exist.
pub fn sign_equivalence(
    a: &ChainComplexOverField,
    b: &ChainComplexOverField,
    shift: i32,
) -> Option<Vec<Vec<i8>>> {
    let f = a.field();
    if a.lo() + shift != b.lo() || a.dims() != b.dims() {
        return None;
    }
    let offsets: Vec<usize> = a
        .dims()
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let total: usize = a.dims().iter().sum();
    let mut uf = ParityUnionFind::new(total);
    for k in 1..a.dims().len() {
        let degree = a.lo() + k as i32;
        let (da, db) = (a.diff(degree), b.diff(degree + shift));
        for r in 0..da.rows() {
            for c in 0..da.cols() {
                let (x, y) = (da.get(r, c), db.get(r, c));
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => continue,
                    (true, false) | (false, true) => return None,
                    _ => {}
                }
                let parity = if *y == *x {
                    false
                } else if *y == f.neg(x) {
                    true
                } else {
                    return None;
                };
                if !uf.union(offsets[k - 1] + r, offsets[k] + c, parity) {
                    return None;
                }
            }
        }
    }
    Some(
        a.dims()
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                (0..d)
                    .map(|i| {
                        if uf.parity_to_root(offsets[k] + i).1 {
                            -1
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    fn parity_to_root(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, p) = self.parity_to_root(self.parent[x]);
        self.parent[x] = root;
        self.parity[x] ^= p;
        (root, self.parity[x])
    }

    /// Records `s_x * s_y = (-1)^parity`; false on contradiction.
    fn union(&mut self, x: usize, y: usize, parity: bool) -> bool {
        let (rx, px) = self.parity_to_root(x);
        let (ry, py) = self.parity_to_root(y);
        if rx == ry {
            return px ^ py == parity;
        }
        self.parent[rx] = ry;
        self.parity[rx] = px ^ py ^ parity;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldConfig = FieldConfig::Rationals;

    fn labels(n: usize, prefix: &str) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn m(rows: &[Vec<i64>], cols: usize) -> FieldMatrix {
        FieldMatrix::from_int_rows_with_cols(Q, rows, cols).unwrap()
    }

    /// Reduced chain complex of the hollow triangle on vertices 0,1,2.
    fn hollow_triangle() -> ChainComplexOverField {
        ChainComplexOverField::new(
            Q,
            -1,
            vec![
                vec!["{}".into()],
                labels(3, "v"),
                vec!["01".into(), "02".into(), "12".into()],
            ],
            vec![
                m(&[vec![1, 1, 1]], 3),
                m(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]], 3),
            ],
        )
        .unwrap()
    }

    #[test]
    fn koszul_at_scalars_is_complex() {
        let c = ChainComplexOverField::new(
            Q,
            0,
            vec![labels(1, "a"), labels(2, "b"), labels(1, "c")],
            vec![m(&[vec![1, 1]], 2), m(&[vec![1], vec![-1]], 1)],
        )
        .unwrap();
        assert!(c.is_complex());
    }

    #[test]
    fn non_complex_reports_witness() {
        let c = ChainComplexOverField::new(
            Q,
            0,
            vec![labels(1, "a"), labels(1, "b"), labels(1, "c")],
            vec![m(&[vec![1]], 1), m(&[vec![1]], 1)],
        )
        .unwrap();
        assert_eq!(c.verify(), Some((2, 0, 0)));
        assert!(matches!(
            c.homology(),
            Err(Error::NotAComplex { degree: 2, .. })
        ));
    }

    #[test]
    fn shape_and_label_validation() {
        let bad = ChainComplexOverField::new(
            Q,
            0,
            vec![labels(1, "a"), labels(2, "b")],
            vec![m(&[vec![1]], 1)],
        );
        assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
        let dup = ChainComplexOverField::new(Q, 0, vec![vec!["x".into(), "x".into()]], vec![]);
        assert!(matches!(dup, Err(Error::DuplicateLabel { .. })));
    }

    #[test]
    fn hollow_triangle_homology() {
        let h = hollow_triangle().homology().unwrap();
        assert_eq!(h.betti_numbers(), vec![(-1, 0), (0, 0), (1, 1)]);
        let z = &h.degree(1).unwrap().cycle_basis[0];
        assert_eq!(z[0], Scalar::one());
    }

    #[test]
    fn empty_complex_has_minus_one_homology() {
        let c = ChainComplexOverField::new(Q, -1, vec![vec!["{}".into()]], vec![]).unwrap();
        assert_eq!(c.homology().unwrap().betti_numbers(), vec![(-1, 1)]);
    }

    #[test]
    fn full_simplex_is_acyclic() {
        let c = ChainComplexOverField::new(
            Q,
            -1,
            vec![
                vec!["{}".into()],
                labels(3, "v"),
                labels(3, "e"),
                labels(1, "t"),
            ],
            vec![
                m(&[vec![1, 1, 1]], 3),
                m(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]], 3),
                m(&[vec![1], vec![-1], vec![1]], 1),
            ],
        )
        .unwrap();
        assert_eq!(c.homology().unwrap().total(), 0);
    }

    #[test]
    fn expansion_modulo_boundaries() {
        let c = hollow_triangle();
        let h = c.homology().unwrap();
        let h1 = h.degree(1).unwrap();
        let twice: Vec<Scalar> = h1.cycle_basis[0]
            .iter()
            .map(|x| Q.mul(x, &Scalar::from_int(2)))
            .collect();
        assert_eq!(h1.expand(&twice).unwrap(), vec![Scalar::from_int(2)]);
        // v1 - v0 is a boundary, so its class in reduced H_0 is zero.
        let h0 = h.degree(0).unwrap();
        let b = vec![Scalar::from_int(-1), Scalar::one(), Scalar::zero()];
        assert_eq!(h0.expand(&b).unwrap(), Vec::<Scalar>::new());
        let not_cycle = vec![Scalar::one(), Scalar::zero(), Scalar::zero()];
        assert!(matches!(h0.expand(&not_cycle), Err(Error::NotACycle(0))));
    }

    #[test]
    fn relative_homology_of_edge_mod_endpoints() {
        let edge = ChainComplexOverField::new(
            Q,
            -1,
            vec![
                vec!["{}".into()],
                vec!["u".into(), "v".into()],
                vec!["uv".into()],
            ],
            vec![m(&[vec![1, 1]], 2), m(&[vec![-1], vec![1]], 1)],
        )
        .unwrap();
        let sel = Selection::from_labels(&edge, [(-1, "{}"), (0, "u"), (0, "v")]).unwrap();
        let rel = edge.relative_homology(&sel).unwrap();
        assert_eq!(rel.homology.betti_numbers(), vec![(-1, 0), (0, 0), (1, 1)]);

        let all = edge
            .relative_homology(&Selection::everything(&edge))
            .unwrap();
        assert_eq!(all.homology.total(), 0);

        let open = Selection::from_labels(&edge, [(0, "u"), (0, "v")]).unwrap();
        assert!(matches!(
            edge.relative_homology(&open),
            Err(Error::NotASubcomplex { .. })
        ));
    }

    #[test]
    fn compare_and_sign_equivalence() {
        let c = hollow_triangle();
        assert!(compare_complexes(&c, &c, 0).isomorphic);
        let flipped = ChainComplexOverField::new(
            Q,
            -1,
            vec![
                vec!["{}".into()],
                labels(3, "v"),
                vec!["01".into(), "02".into(), "12".into()],
            ],
            vec![
                m(&[vec![1, 1, 1]], 3),
                m(&[vec![1, -1, 0], vec![-1, 0, -1], vec![0, 1, 1]], 3),
            ],
        )
        .unwrap();
        let signs = sign_equivalence(&c, &flipped, 0).unwrap();
        assert_eq!(signs[2], vec![-1, 1, 1]);
        let shifted = ChainComplexOverField::new(
            Q,
            0,
            vec![vec!["{}".into()], labels(3, "v"), labels(3, "e")],
            vec![c.diff(0), c.diff(1)],
        )
        .unwrap();
        assert!(compare_complexes(&c, &shifted, 1).isomorphic);
        assert!(!compare_complexes(&c, &shifted, 0).isomorphic);
    }

    fn arb_complex() -> impl Strategy<Value = ChainComplexOverField> {
        // A random map followed by the inclusion of its kernel.
        (
            1usize..5,
            1usize..5,
            proptest::collection::vec(-2i64..=2, 16),
        )
            .prop_map(|(a, b, seed)| {
                let rows: Vec<Vec<i64>> = (0..a)
                    .map(|r| (0..b).map(|c| seed[(r * b + c) % 16]).collect())
                    .collect();
                let top = m(&rows, b);
                let kernel = top.kernel_basis();
                let k = FieldMatrix::from_columns(Q, b, &kernel);
                ChainComplexOverField::new(
                    Q,
                    0,
                    vec![labels(a, "a"), labels(b, "b"), labels(kernel.len(), "c")],
                    vec![top, k],
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn euler_characteristic_is_preserved(c in arb_complex()) {
            let h = c.homology().unwrap();
            prop_assert_eq!(c.euler_characteristic(), h.euler_characteristic());
            for hd in &h.degrees {
                for z in &hd.cycle_basis {
                    let dz = c.diff(hd.degree).mul_vec(z).unwrap();
                    prop_assert!(dz.iter().all(Scalar::is_zero));
                }
            }
        }

        #[test]
        fn betti_numbers_survive_basis_reordering(c in arb_complex(), rot in 0usize..4) {
            // Reverse the middle basis.
            let b = c.dim(1);
            let perm: Vec<usize> = (0..b).rev().map(|i| (i + rot) % b).collect();
            let d1 = c.diff(1);
            let d2 = c.diff(2);
            let rows0: Vec<usize> = (0..c.dim(0)).collect();
            let cols2: Vec<usize> = (0..c.dim(2)).collect();
            let p = ChainComplexOverField::new(
                Q,
                0,
                vec![labels(c.dim(0), "a"), labels(b, "b"), labels(c.dim(2), "c")],
                vec![d1.select(&rows0, &perm), d2.select(&perm, &cols2)],
            ).unwrap();
            prop_assert_eq!(c.homology().unwrap().betti_numbers(), p.homology().unwrap().betti_numbers());
        }
    }
}
