//! Dense matrices over a [`FieldConfig`] with exact elimination.
//!
//! Elimination always pivots on the leftmost remaining column and, within it,
//! the smallest row index holding a nonzero entry, so every derived basis is
//! reproducible.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    field: FieldConfig,
    data: Vec<Scalar>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FieldMatrix {}x{} over {}",
            self.rows,
            self.cols,
            self.field.name()
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of reduced row echelon elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FieldMatrix,
    /// `(row, col)` of each pivot, in increasing order.
    pub pivots: Vec<(usize, usize)>,
}

impl FieldMatrix {
    pub fn zeros(field: FieldConfig, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            field,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldConfig, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from integer rows, mapping every entry into the field.
    pub fn from_int_rows(field: FieldConfig, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_int_rows_with_cols(field, rows, cols)
    }

    /// Like [`FieldMatrix::from_int_rows`] but with an explicit column count,
    /// so `0 x n` matrices can be expressed.
    pub fn from_int_rows_with_cols(
        field: FieldConfig,
        rows: &[Vec<i64>],
        cols: usize,
    ) -> Result<Self> {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, field.from_int(*v));
            }
        }
        Ok(m)
    }

    /// Builds a matrix from arbitrary rationals, mapping every entry into the field.
    pub fn from_scalar_rows(field: FieldConfig, rows: &[Vec<Scalar>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, field.element(v)?);
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldConfig, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let idx = r * self.cols + c;
        self.data[idx] = self.field.add(&self.data[idx], v);
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (i / self.cols.max(1), i % self.cols.max(1), v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for (r, c, v) in self.nonzeros() {
            t.set(c, r, v.clone());
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for (r, k, a) in self.nonzeros() {
            for c in 0..other.cols {
                let b = other.get(k, c);
                if !b.is_zero() {
                    out.add_to(r, c, &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = self.field;
        let mut out = vec![Scalar::zero(); self.rows];
        for (r, c, a) in self.nonzeros() {
            if !v[c].is_zero() {
                out[r] = f.add(&out[r], &f.mul(a, &v[c]));
            }
        }
        Ok(out)
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FieldMatrix {
        let mut m = Self::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} rows beside {} rows",
                self.rows, other.rows
            )));
        }
        let mut m = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            if next_row == m.rows {
                break;
            }
            let Some(p) = (next_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, next_row);
            let inv = f.inv(m.get(next_row, col));
            let support: Vec<usize> = (col..m.cols)
                .filter(|&c| !m.get(next_row, c).is_zero())
                .collect();
            for &c in &support {
                let v = f.mul(m.get(next_row, c), &inv);
                m.set(next_row, c, v);
            }
            for r in 0..m.rows {
                if r == next_row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for &c in &support {
                    let delta = f.mul(&factor, m.get(next_row, c));
                    let v = f.sub(m.get(r, c), &delta);
                    m.set(r, c, v);
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows < self.cols {
            self.transpose().rref().pivots.len()
        } else {
            self.rref().pivots.len()
        }
    }

    /// Basis of the null space, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let Rref { matrix, pivots } = self.rref();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_cols.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for &(r, c) in &pivots {
                let e = matrix.get(r, free);
                if !e.is_zero() {
                    v[c] = f.neg(e);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Indices of a maximal set of linearly independent columns (the pivot
    /// columns of the echelon form).
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().pivots.into_iter().map(|(_, c)| c).collect()
    }
}

/// Solves `m * c = v`. Returns `Ok(None)` when `v` is not in the column span.
/// Free variables are set to zero.
pub fn solve_in_span(m: &FieldMatrix, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} against {} rows",
            v.len(),
            m.rows()
        )));
    }
    let f = m.field();
    let aug = m.hstack(&FieldMatrix::from_columns(f, m.rows(), &[v.to_vec()]))?;
    let Rref {
        matrix: aug,
        pivots,
    } = aug.rref();
    let last = m.cols();
    if pivots.iter().any(|&(_, c)| c == last) {
        return Ok(None);
    }
    let mut out = vec![Scalar::zero(); m.cols()];
    for (r, c) in pivots {
        out[c] = aug.get(r, last).clone();
    }
    Ok(Some(out))
}

/// Repeated solver for `m * c = v` where `m` has linearly independent columns.
///
/// Precomputes an invertible square block of `m`; each solve is then a small
/// product plus a consistency check against the full matrix.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    matrix: FieldMatrix,
    rows: Vec<usize>,
    inverse: FieldMatrix,
}

impl SpanSolver {
    pub fn new(matrix: FieldMatrix) -> Result<Self> {
        let f = matrix.field();
        let k = matrix.cols();
        let rows = matrix.transpose().pivot_columns();
        if rows.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "span solver needs independent columns, rank {} of {k}",
                rows.len()
            )));
        }
        let cols: Vec<usize> = (0..k).collect();
        let block = matrix.select(&rows, &cols);
        let aug = block.hstack(&FieldMatrix::identity(f, k))?.rref().matrix;
        let inverse = aug.select(&cols, &(k..2 * k).collect::<Vec<_>>());
        Ok(SpanSolver {
            matrix,
            rows,
            inverse,
        })
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    /// Coordinates of `v` in the column basis, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                v.len(),
                self.matrix.rows()
            )));
        }
        let restricted: Vec<Scalar> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.inverse.mul_vec(&restricted)?;
        if self.matrix.mul_vec(&c)? == v {
            Ok(Some(c))
        } else {
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldConfig = FieldConfig::Rationals;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FieldMatrix::identity(Q, 2).rank(), 2);
        assert_eq!(FieldMatrix::zeros(Q, 3, 4).rank(), 0);
        // vertices x edges of a triangle: edges 01, 02, 12
        let triangle =
            FieldMatrix::from_int_rows(Q, &[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]])
                .unwrap();
        assert_eq!(triangle.rank(), 2);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let m = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(FieldMatrix::from_int_rows(Q, &m).unwrap().rank(), 2);
        let gf2 = FieldConfig::prime(2).unwrap();
        assert_eq!(FieldMatrix::from_int_rows(gf2, &m).unwrap().rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let id = FieldMatrix::identity(Q, 2);
        assert_eq!(
            solve_in_span(&id, &ints(&[3, 5])).unwrap(),
            Some(ints(&[3, 5]))
        );
        let col = FieldMatrix::from_int_rows(Q, &[vec![1], vec![1]]).unwrap();
        assert_eq!(
            solve_in_span(&col, &ints(&[2, 2])).unwrap(),
            Some(ints(&[2]))
        );
        let e1 = FieldMatrix::from_int_rows(Q, &[vec![1], vec![0]]).unwrap();
        assert_eq!(solve_in_span(&e1, &ints(&[0, 1])).unwrap(), None);
        assert!(matches!(
            solve_in_span(&e1, &ints(&[0, 1, 2])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn span_solver_matches_general_solver() {
        let m = FieldMatrix::from_int_rows(Q, &[vec![1, 0], vec![2, 1], vec![0, 3]]).unwrap();
        let s = SpanSolver::new(m.clone()).unwrap();
        let v = m.mul_vec(&ints(&[4, -1])).unwrap();
        assert_eq!(s.solve(&v).unwrap(), Some(ints(&[4, -1])));
        assert_eq!(s.solve(&ints(&[1, 0, 0])).unwrap(), None);
        let dependent = FieldMatrix::from_int_rows(Q, &[vec![1, 2], vec![1, 2]]).unwrap();
        assert!(SpanSolver::new(dependent).is_err());
    }

    #[test]
    fn kernel_of_triangle_boundary() {
        let d = FieldMatrix::from_int_rows(Q, &[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]])
            .unwrap();
        let k = d.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(d.mul_vec(&k[0]).unwrap().iter().all(Scalar::is_zero));
        assert_eq!(k[0], ints(&[1, -1, 1]));
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(rows in arb_matrix(), p in prop_oneof![Just(0u64), Just(2), Just(3), Just(101)]) {
            let field = if p == 0 { Q } else { FieldConfig::prime(p).unwrap() };
            let m = FieldMatrix::from_int_rows(field, &rows).unwrap();
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        }

        #[test]
        fn solve_recovers_a_preimage(rows in arb_matrix(), seed in proptest::collection::vec(-3i64..=3, 6)) {
            let m = FieldMatrix::from_int_rows(Q, &rows).unwrap();
            let x: Vec<Scalar> = seed.iter().take(m.cols()).map(|&v| Scalar::from_int(v)).collect();
            let x = if x.len() < m.cols() { vec![Scalar::zero(); m.cols()] } else { x };
            let v = m.mul_vec(&x).unwrap();
            let c = solve_in_span(&m, &v).unwrap().expect("image vector lies in the span");
            prop_assert_eq!(m.mul_vec(&c).unwrap(), v);
        }
    }
}
