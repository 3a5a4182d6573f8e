//! Regular CW-complexes described by their cells and facets.
//!
//! The combinatorics of a regular CW-complex is its face poset, and the
//! incidence numbers are read off the poset construction rather than from
//! orientation data.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::chain::ChainComplexOverField;
use crate::construction::{d_construction, CoverStrategy, DSequence};
use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::fixtures::EMPTY;
use crate::matrix::FieldMatrix;
use crate::monomial::Monomial;
use crate::poset::{Poset, RankFunction};
use crate::simplicial::{boundary_faces, SimplicialComplex};

/// A cell as given in input: facets by id, the empty cell implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub id: String,
    pub dim: i32,
    #[serde(default)]
    pub facets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mdeg: Option<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: i32,
    /// Indices of codimension-one faces; the empty cell for vertices.
    pub facets: Vec<usize>,
    pub mdeg: Option<Monomial>,
}

/// Cell 0 is always the empty cell of dimension -1.
#[derive(Clone, Debug)]
pub struct RegularCWComplex {
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    poset: Poset,
}

/// Face poset with its rank function `dim + 1`.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub poset: Poset,
    pub rank: RankFunction,
}

impl RegularCWComplex {
    /// Validates cells and checks that the face poset is a CW-poset.
    pub fn new(specs: Vec<CellSpec>, field: FieldConfig) -> Result<Self> {
        let x = Self::from_specs(specs)?;
        let report = x.poset.is_cw_poset(field);
        if !report.is_cw {
            return Err(Error::NotCwPoset {
                witness: report.witness,
                reason: report.reason.unwrap_or_default(),
            });
        }
        Ok(x)
    }

    /// Validates everything except the sphere condition on intervals.
    fn from_specs(specs: Vec<CellSpec>) -> Result<Self> {
        let mut index = HashMap::from([(EMPTY.to_string(), 0)]);
        for (i, s) in specs.iter().enumerate() {
            if index.insert(s.id.clone(), i + 1).is_some() {
                return Err(Error::DuplicateId(s.id.clone()));
            }
        }
        let mut cells = vec![Cell {
            id: EMPTY.into(),
            dim: -1,
            facets: Vec::new(),
            mdeg: None,
        }];
        let mut nvars = None;
        for s in specs {
            let invalid = |reason: String| Error::InvalidCell {
                id: s.id.clone(),
                reason,
            };
            if s.dim < 0 {
                return Err(invalid(format!("dimension {} is negative", s.dim)));
            }
            let mut facets = Vec::with_capacity(s.facets.len());
            for f in &s.facets {
                let j = *index
                    .get(f)
                    .ok_or_else(|| Error::UnknownElement(f.clone()))?;
                if facets.contains(&j) {
                    return Err(invalid(format!("facet {f:?} listed twice")));
                }
                facets.push(j);
            }
            if s.dim == 0 {
                if facets.iter().any(|&j| j != 0) {
                    return Err(invalid(
                        "a vertex can only have the empty cell as facet".into(),
                    ));
                }
                facets = vec![0];
            } else if facets.is_empty() {
                return Err(invalid("a positive-dimensional cell needs facets".into()));
            }
            if let Some(m) = &s.mdeg {
                match nvars {
                    None => nvars = Some(m.nvars()),
                    Some(n) if n != m.nvars() => {
                        return Err(Error::VariableCountMismatch {
                            expected: n,
                            got: m.nvars(),
                        })
                    }
                    _ => {}
                }
            }
            cells.push(Cell {
                id: s.id,
                dim: s.dim,
                facets,
                mdeg: s.mdeg,
            });
        }
        for c in &cells[1..] {
            for &f in &c.facets {
                if cells[f].dim != c.dim - 1 {
                    return Err(Error::InvalidCell {
                        id: c.id.clone(),
                        reason: format!("facet {:?} has dimension {}", cells[f].id, cells[f].dim),
                    });
                }
            }
        }
        let poset = Self::build_poset(&cells)?;
        Ok(RegularCWComplex {
            cells,
            index,
            poset,
        })
    }

    /// Builds from cells known to form a regular CW-complex.
    fn from_cells(cells: Vec<Cell>) -> Self {
        let index = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), i))
            .collect();
        let poset = Self::build_poset(&cells).expect("cells of a valid complex");
        RegularCWComplex {
            cells,
            index,
            poset,
        }
    }

    fn build_poset(cells: &[Cell]) -> Result<Poset> {
        let ids: Vec<&str> = cells.iter().map(|c| c.id.as_str()).collect();
        let names = &ids;
        let covers: Vec<(&str, &str)> = cells
            .iter()
            .flat_map(|c| c.facets.iter().map(move |&f| (names[f], c.id.as_str())))
            .collect();
        Poset::build(&ids, &covers)
    }

    /// Cells are the elements above `0̂`, `dim = rank - 1` and facets are
    /// lower covers.
    pub fn from_face_poset(p: &Poset, field: FieldConfig) -> Result<Self> {
        Self::from_face_poset_graded(p, field, None)
    }

    /// Like [`RegularCWComplex::from_face_poset`], attaching `eta[x]` as the
    /// multidegree of the cell of element `x`.
    pub fn from_face_poset_graded(
        p: &Poset,
        field: FieldConfig,
        eta: Option<&[Monomial]>,
    ) -> Result<Self> {
        let report = p.is_cw_poset(field);
        if !report.is_cw {
            return Err(Error::NotCwPoset {
                witness: report.witness,
                reason: report.reason.unwrap_or_default(),
            });
        }
        let bottom = p.least_element().ok_or(Error::NoLeastElement)?;
        let rank = p.compute_rank()?;
        let mut cell_of = vec![0usize; p.len()];
        let mut order: Vec<usize> = (0..p.len()).filter(|&x| x != bottom).collect();
        order.sort_by_key(|&x| rank.rank(x));
        for (i, &x) in order.iter().enumerate() {
            cell_of[x] = i + 1;
        }
        let mut cells = vec![Cell {
            id: EMPTY.into(),
            dim: -1,
            facets: Vec::new(),
            mdeg: eta.map(|e| e[bottom].clone()),
        }];
        for &x in &order {
            if p.id(x) == EMPTY {
                return Err(Error::DuplicateId(EMPTY.into()));
            }
            cells.push(Cell {
                id: p.id(x).to_string(),
                dim: rank.rank(x) as i32 - 1,
                facets: p.lower_covers(x).iter().map(|&l| cell_of[l]).collect(),
                mdeg: eta.map(|e| e[x].clone()),
            });
        }
        Ok(Self::from_cells(cells))
    }

    /// One cell per nonempty face, named by its face label.
    pub fn from_simplicial(k: &SimplicialComplex) -> Self {
        Self::from_simplicial_labeled(k, |_| None)
    }

    /// Like [`RegularCWComplex::from_simplicial`] with a multidegree per face.
    pub fn from_simplicial_labeled(
        k: &SimplicialComplex,
        mdeg: impl Fn(&[usize]) -> Option<Monomial>,
    ) -> Self {
        let mut cells = vec![Cell {
            id: EMPTY.into(),
            dim: -1,
            facets: Vec::new(),
            mdeg: None,
        }];
        let mut cell_of: HashMap<Vec<usize>, usize> = HashMap::from([(Vec::new(), 0)]);
        for d in 0..=k.dim() {
            for face in k.faces(d) {
                let facets = boundary_faces(face).map(|(_, f)| cell_of[&f]).collect();
                cell_of.insert(face.clone(), cells.len());
                cells.push(Cell {
                    id: k.face_label(face),
                    dim: d,
                    facets,
                    mdeg: mdeg(face),
                });
            }
        }
        Self::from_cells(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    /// Number of cells including the empty cell.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn dim(&self) -> i32 {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(-1)
    }

    /// Cell indices of dimension `d` in input order.
    pub fn cells_of_dim(&self, d: i32) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].dim == d)
            .collect()
    }

    /// Cell counts from dimension -1 upward.
    pub fn f_vector(&self) -> Vec<usize> {
        (-1..=self.dim())
            .map(|d| self.cells_of_dim(d).len())
            .collect()
    }

    pub fn has_multidegrees(&self) -> bool {
        self.cells[1..].iter().all(|c| c.mdeg.is_some())
    }

    /// Multidegrees of all cells, the empty cell getting `1`.
    pub fn multidegrees(&self) -> Result<Vec<Monomial>> {
        let nvars = self.cells[1..]
            .iter()
            .find_map(|c| c.mdeg.as_ref().map(Monomial::nvars))
            .ok_or_else(|| {
                Error::MissingMultidegrees(self.cells.get(1).map_or(EMPTY, |c| &c.id).to_string())
            })?;
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| match &c.mdeg {
                Some(m) => Ok(m.clone()),
                None if i == 0 => Ok(Monomial::one(nvars)),
                None => Err(Error::MissingMultidegrees(c.id.clone())),
            })
            .collect()
    }

    /// Relabels every cell by the lcm of the labels of its vertices.
    pub fn with_vertex_multidegrees(&self) -> Result<Self> {
        let mut cells = self.cells.clone();
        let vertices = self.cells_of_dim(0);
        for v in &vertices {
            if cells[*v].mdeg.is_none() {
                return Err(Error::MissingMultidegrees(cells[*v].id.clone()));
            }
        }
        let nvars = vertices
            .first()
            .and_then(|&v| cells[v].mdeg.as_ref())
            .map_or(0, Monomial::nvars);
        for (i, cell) in cells.iter_mut().enumerate().skip(1) {
            if cell.dim > 0 {
                let m = vertices
                    .iter()
                    .filter(|&&v| self.poset.leq(v, i))
                    .fold(Monomial::one(nvars), |acc, &v| {
                        acc.lcm(self.cells[v].mdeg.as_ref().expect("checked"))
                    });
                cell.mdeg = Some(m);
            }
        }
        Ok(Self::from_cells(cells))
    }

    pub fn face_poset(&self) -> FacePoset {
        let rank = self.poset.compute_rank().expect("face posets are ranked");
        FacePoset {
            poset: self.poset.clone(),
            rank,
        }
    }

    /// Poset on the cells; element `i` is cell `i`.
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Cells that survive `keep`, which must be closed under facets.
    fn restrict(&self, keep: impl Fn(&Cell) -> bool) -> Result<Self> {
        let kept: Vec<usize> = (0..self.cells.len())
            .filter(|&i| i == 0 || keep(&self.cells[i]))
            .collect();
        let mut new_index = vec![usize::MAX; self.cells.len()];
        for (n, &i) in kept.iter().enumerate() {
            new_index[i] = n;
        }
        let mut cells = Vec::with_capacity(kept.len());
        for &i in &kept {
            let c = &self.cells[i];
            let mut facets = Vec::with_capacity(c.facets.len());
            for &f in &c.facets {
                if new_index[f] == usize::MAX {
                    return Err(Error::NonMonotoneLabels {
                        cell: c.id.clone(),
                        face: self.cells[f].id.clone(),
                    });
                }
                facets.push(new_index[f]);
            }
            cells.push(Cell {
                facets,
                ..c.clone()
            });
        }
        Ok(Self::from_cells(cells))
    }

    /// The cells of dimension at most `i`.
    pub fn skeleton(&self, i: i32) -> Self {
        self.restrict(|c| c.dim <= i)
            .expect("skeleta are closed under facets")
    }

    /// The cells whose multidegree divides `b`.
    pub fn restrict_to_multidegree(&self, b: &Monomial) -> Result<Self> {
        let mdeg = self.multidegrees()?;
        if mdeg.iter().any(|m| m.nvars() != b.nvars()) {
            return Err(Error::VariableCountMismatch {
                expected: mdeg[0].nvars(),
                got: b.nvars(),
            });
        }
        self.restrict(|c| c.mdeg.as_ref().is_some_and(|m| m.divides(b)))
    }

    /// Back to input form, omitting the empty cell.
    pub fn to_specs(&self) -> Vec<CellSpec> {
        self.cells[1..]
            .iter()
            .map(|c| CellSpec {
                id: c.id.clone(),
                dim: c.dim,
                facets: if c.dim == 0 {
                    Vec::new()
                } else {
                    c.facets.iter().map(|&f| self.cells[f].id.clone()).collect()
                },
                mdeg: c.mdeg.clone(),
            })
            .collect()
    }
}

/// Incidence numbers `c_{σ,τ}` for facets `τ` of `σ`, by cell index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceNumbers {
    entries: BTreeMap<(usize, usize), i8>,
}

impl IncidenceNumbers {
    /// `c_{σ,τ}`; zero when `τ` is not a facet of `σ`.
    pub fn get(&self, sigma: usize, tau: usize) -> i8 {
        self.entries.get(&(sigma, tau)).copied().unwrap_or(0)
    }

    /// Nonzero entries as `((σ, τ), value)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), i8)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }
}

/// Reads incidence numbers off `D` of the face poset: the map out of the
/// summand at `σ` hits the summand at each facet `τ` with `c_{σ,τ}`.
pub fn incidence_numbers(x: &RegularCWComplex, field: FieldConfig) -> Result<IncidenceNumbers> {
    let d = d_construction(x.poset(), field, CoverStrategy::SmallestId)?;
    incidence_from_d(x, &d)
}

pub fn incidence_from_d(x: &RegularCWComplex, d: &DSequence) -> Result<IncidenceNumbers> {
    let field = d.complex.field();
    let mut entries = BTreeMap::new();
    for sigma in 1..x.len() {
        let cell = x.cell(sigma);
        let r = (cell.dim + 1) as usize;
        let col = single_position(x, d, r, sigma)?;
        let phi = d.phi(r);
        for tau in x.cells_of_dim(cell.dim - 1) {
            let row = single_position(x, d, r - 1, tau)?;
            let value = phi.get(row, col);
            let is_facet = cell.facets.contains(&tau);
            let sign = field.as_sign(value).filter(|&s| (s != 0) == is_facet);
            match sign {
                Some(0) => {}
                Some(s) => {
                    entries.insert((sigma, tau), s);
                }
                None => {
                    return Err(Error::EntryNotUnit {
                        sigma: cell.id.clone(),
                        tau: x.cell(tau).id.clone(),
                        value: value.to_string(),
                    })
                }
            }
        }
    }
    Ok(IncidenceNumbers { entries })
}

fn single_position(
    x: &RegularCWComplex,
    d: &DSequence,
    degree: usize,
    cell: usize,
) -> Result<usize> {
    match d.summand(degree, cell).as_slice() {
        [p] => Ok(*p),
        other => Err(Error::DimensionMismatch(format!(
            "cell {:?} has {} basis vectors in degree {degree}",
            x.cell(cell).id,
            other.len()
        ))),
    }
}

/// `C(X)` in degrees `-1..=dim X`, bases in input order within each dimension.
pub fn cellular_chain_complex(
    x: &RegularCWComplex,
    field: FieldConfig,
) -> Result<ChainComplexOverField> {
    let inc = incidence_numbers(x, field)?;
    Ok(chain_from_incidence(x, &inc, field))
}

pub fn chain_from_incidence(
    x: &RegularCWComplex,
    inc: &IncidenceNumbers,
    field: FieldConfig,
) -> ChainComplexOverField {
    let by_dim: Vec<Vec<usize>> = (-1..=x.dim()).map(|d| x.cells_of_dim(d)).collect();
    let labels = by_dim
        .iter()
        .map(|cs| cs.iter().map(|&c| x.cell(c).id.clone()).collect())
        .collect();
    let diffs = (1..by_dim.len())
        .map(|k| {
            let mut m = FieldMatrix::zeros(field, by_dim[k - 1].len(), by_dim[k].len());
            for (col, &sigma) in by_dim[k].iter().enumerate() {
                for (row, &tau) in by_dim[k - 1].iter().enumerate() {
                    let c = inc.get(sigma, tau);
                    if c != 0 {
                        m.set(row, col, field.from_int(c as i64));
                    }
                }
            }
            m
        })
        .collect();
    ChainComplexOverField::new(field, -1, labels, diffs).expect("shapes follow cell counts")
}

/// Mod-2 face incidence matrix from dimension `d` to `d - 1`.
pub fn facet_incidence_mod2(x: &RegularCWComplex, d: i32) -> FieldMatrix {
    let field = FieldConfig::PrimeField(2);
    let rows = x.cells_of_dim(d - 1);
    let cols = x.cells_of_dim(d);
    let mut m = FieldMatrix::zeros(field, rows.len(), cols.len());
    for (c, &sigma) in cols.iter().enumerate() {
        for (r, &tau) in rows.iter().enumerate() {
            if x.cell(sigma).facets.contains(&tau) {
                m.set(r, c, Scalar::one());
            }
        }
    }
    m
}
