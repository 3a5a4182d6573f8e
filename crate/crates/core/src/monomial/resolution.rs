//! Multigraded complexes of free modules and the resolution checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::chain::ChainComplexOverField;
use crate::construction::DSequence;
use crate::cw::{cellular_chain_complex, RegularCWComplex};
use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::matrix::FieldMatrix;
use crate::poset::Poset;

use super::{lcm_closure, lcm_lattice, scarf_complex, Monomial, MonomialIdeal};

/// Free modules `F_i` with a multidegree per basis element and a scalar
/// frame; the entry from basis element `c` of `F_i` to `r` of `F_{i-1}` is
/// `frame[r][c] * x^(m_c - m_r)`.
#[derive(Clone, Debug)]
pub struct MultigradedComplex {
    frame: ChainComplexOverField,
    multidegrees: Vec<Vec<Monomial>>,
    nvars: usize,
}

/// A nonzero differential entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    #[serde(with = "scalar_string")]
    pub scalar: Scalar,
    pub monomial: Monomial,
}

mod scalar_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::field::Scalar;

    pub fn serialize<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Scalar, D::Error> {
        String::deserialize(de)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl MultigradedComplex {
    /// Checks shapes and homogeneity; the frame's lowest degree becomes 0.
    pub fn new(frame: ChainComplexOverField, multidegrees: Vec<Vec<Monomial>>) -> Result<Self> {
        let frame = frame.shifted(0);
        if multidegrees.len() != frame.dims().len()
            || multidegrees
                .iter()
                .zip(frame.dims())
                .any(|(m, &d)| m.len() != d)
        {
            return Err(Error::DimensionMismatch(
                "multidegrees do not match the frame".into(),
            ));
        }
        let nvars = multidegrees
            .iter()
            .flatten()
            .next()
            .map_or(0, Monomial::nvars);
        if let Some(m) = multidegrees.iter().flatten().find(|m| m.nvars() != nvars) {
            return Err(Error::VariableCountMismatch {
                expected: nvars,
                got: m.nvars(),
            });
        }
        for k in 1..multidegrees.len() {
            for (r, c, _) in frame
                .diff_ref(k as i32)
                .expect("degree in range")
                .nonzeros()
            {
                if !multidegrees[k - 1][r].divides(&multidegrees[k][c]) {
                    return Err(Error::NotHomogeneous {
                        degree: k,
                        row: r,
                        col: c,
                    });
                }
            }
        }
        Ok(MultigradedComplex {
            frame,
            multidegrees,
            nvars,
        })
    }

    pub fn frame(&self) -> &ChainComplexOverField {
        &self.frame
    }

    pub fn field(&self) -> FieldConfig {
        self.frame.field()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn multidegrees(&self, i: usize) -> &[Monomial] {
        self.multidegrees.get(i).map_or(&[], Vec::as_slice)
    }

    /// `rank F_i` for `i = 0..`.
    pub fn ranks(&self) -> Vec<usize> {
        self.frame.dims().to_vec()
    }

    pub fn max_degree(&self) -> usize {
        self.multidegrees.len().saturating_sub(1)
    }

    /// Nonzero entries of `∂_i : F_i -> F_{i-1}`.
    pub fn entries(&self, i: usize) -> Vec<Entry> {
        let Some(m) = self.frame.diff_ref(i as i32).filter(|_| i > 0) else {
            return Vec::new();
        };
        m.nonzeros()
            .map(|(row, col, s)| Entry {
                row,
                col,
                scalar: s.clone(),
                monomial: self.multidegrees[i - 1][row]
                    .quotient_of(&self.multidegrees[i][col])
                    .expect("homogeneity checked at construction"),
            })
            .collect()
    }

    /// Subcomplex of the frame on basis elements whose multidegree divides `b`.
    pub fn strand(&self, b: &Monomial) -> ChainComplexOverField {
        let keep: Vec<Vec<usize>> = self
            .multidegrees
            .iter()
            .map(|ms| (0..ms.len()).filter(|&j| ms[j].divides(b)).collect())
            .collect();
        self.frame
            .restrict(&keep)
            .expect("strands are subcomplexes of a homogeneous complex")
    }

    pub fn to_export(&self) -> ResolutionExport {
        ResolutionExport {
            field: self.field().name(),
            nvars: self.nvars,
            degrees: (0..self.multidegrees.len())
                .map(|i| DegreeExport {
                    degree: i,
                    labels: self.frame.labels(i as i32).to_vec(),
                    multidegrees: self.multidegrees[i].clone(),
                })
                .collect(),
            differentials: (1..self.multidegrees.len())
                .map(|i| DifferentialExport {
                    degree: i,
                    entries: self.entries(i),
                })
                .collect(),
        }
    }

    pub fn from_export(e: &ResolutionExport) -> Result<Self> {
        let field = FieldConfig::parse(&e.field)?;
        let labels: Vec<Vec<String>> = e.degrees.iter().map(|d| d.labels.clone()).collect();
        let multidegrees: Vec<Vec<Monomial>> =
            e.degrees.iter().map(|d| d.multidegrees.clone()).collect();
        for (i, d) in e.degrees.iter().enumerate() {
            if d.degree != i || d.labels.len() != d.multidegrees.len() {
                return Err(Error::Parse(format!("degree entry {i} is malformed")));
            }
        }
        let mut diffs: Vec<FieldMatrix> = (1..labels.len())
            .map(|i| FieldMatrix::zeros(field, labels[i - 1].len(), labels[i].len()))
            .collect();
        for d in &e.differentials {
            let m = d
                .degree
                .checked_sub(1)
                .and_then(|k| diffs.get_mut(k))
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "differential out of degree {} has no target",
                        d.degree
                    ))
                })?;
            for entry in &d.entries {
                if entry.row >= m.rows() || entry.col >= m.cols() {
                    return Err(Error::Parse(format!(
                        "entry ({}, {}) out of range in degree {}",
                        entry.row, entry.col, d.degree
                    )));
                }
                let expected = multidegrees[d.degree - 1][entry.row]
                    .quotient_of(&multidegrees[d.degree][entry.col]);
                if expected.as_ref() != Some(&entry.monomial) {
                    return Err(Error::NotHomogeneous {
                        degree: d.degree,
                        row: entry.row,
                        col: entry.col,
                    });
                }
                m.set(entry.row, entry.col, field.element(&entry.scalar)?);
            }
        }
        let frame = ChainComplexOverField::new(field, 0, labels, diffs)?;
        let f = Self::new(frame, multidegrees)?;
        if f.nvars != e.nvars && f.multidegrees.iter().flatten().next().is_some() {
            return Err(Error::VariableCountMismatch {
                expected: e.nvars,
                got: f.nvars,
            });
        }
        Ok(f)
    }
}

impl Serialize for MultigradedComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_export().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionExport {
    pub field: String,
    pub nvars: usize,
    pub degrees: Vec<DegreeExport>,
    pub differentials: Vec<DifferentialExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeExport {
    pub degree: usize,
    pub labels: Vec<String>,
    pub multidegrees: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialExport {
    pub degree: usize,
    pub entries: Vec<Entry>,
}

/// `F_X`: the cellular complex with the empty cell in degree 0 and cell
/// `σ` in degree `dim σ + 1` at multidegree `m_σ`.
pub fn homogenize_cellular(x: &RegularCWComplex, field: FieldConfig) -> Result<MultigradedComplex> {
    let mdeg = x.multidegrees()?;
    for (i, c) in x.cells().iter().enumerate() {
        for &f in &c.facets {
            if !mdeg[f].divides(&mdeg[i]) {
                return Err(Error::NonMonotoneLabels {
                    cell: c.id.clone(),
                    face: x.cell(f).id.clone(),
                });
            }
        }
    }
    let frame = cellular_chain_complex(x, field)?;
    let multidegrees = (-1..=x.dim())
        .map(|d| x.cells_of_dim(d).iter().map(|&c| mdeg[c].clone()).collect())
        .collect();
    MultigradedComplex::new(frame, multidegrees)
}

/// `F(η)`: the summand of `D(P)` at `α` sits at multidegree `η(α)`.
pub fn homogenize_d(p: &Poset, d: &DSequence, eta: &[Monomial]) -> Result<MultigradedComplex> {
    d.complex.ensure_complex()?;
    if eta.len() != p.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} grades for {} elements",
            eta.len(),
            p.len()
        )));
    }
    for &(a, b) in p.covers() {
        if !eta[a].divides(&eta[b]) {
            return Err(Error::NonMonotoneGrading {
                lower: p.id(a).into(),
                upper: p.id(b).into(),
            });
        }
    }
    let multidegrees = d
        .basis
        .iter()
        .map(|b| b.iter().map(|&(e, _)| eta[e].clone()).collect())
        .collect();
    MultigradedComplex::new(d.complex.clone(), multidegrees)
}

#[derive(Clone, Debug, Serialize)]
pub struct StrandFailure {
    pub b: String,
    pub multidegree: Monomial,
    pub in_ideal: bool,
    /// Homology of the strand by homological degree.
    pub betti: Vec<(i32, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionVerdict {
    pub is_resolution: bool,
    pub is_complex: bool,
    pub multidegrees_checked: usize,
    pub failures: Vec<StrandFailure>,
}

/// Checks that every strand is exact, except for a one-dimensional `H_0`
/// at multidegrees outside the ideal.
///
/// The test set is the lcm-closure of the lattice and the basis
/// multidegrees: any `b` has the same strand and the same membership in
/// the ideal as the lcm of the test elements dividing it.
pub fn is_resolution(f: &MultigradedComplex, ideal: &MonomialIdeal) -> Result<ResolutionVerdict> {
    if f.nvars != ideal.nvars() && f.multidegrees.iter().flatten().next().is_some() {
        return Err(Error::VariableCountMismatch {
            expected: ideal.nvars(),
            got: f.nvars,
        });
    }
    if !f.frame.is_complex() {
        return Ok(ResolutionVerdict {
            is_resolution: false,
            is_complex: false,
            multidegrees_checked: 0,
            failures: Vec::new(),
        });
    }
    let lattice = lcm_lattice(ideal);
    let tests: Vec<Monomial> = lcm_closure(
        lattice
            .monomials
            .iter()
            .cloned()
            .chain(f.multidegrees.iter().flatten().cloned()),
    )
    .into_iter()
    .collect();
    let failures: Vec<StrandFailure> = tests
        .par_iter()
        .map(|b| {
            let h = f.strand(b).homology()?;
            let in_ideal = ideal.contains(b);
            let expected = |d: i32| usize::from(d == 0 && !in_ideal);
            let ok = h.degrees.iter().all(|d| d.betti == expected(d.degree))
                && (in_ideal || h.betti(0) == 1);
            Ok((!ok).then(|| StrandFailure {
                b: b.to_string(),
                multidegree: b.clone(),
                in_ideal,
                betti: h.betti_numbers(),
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(ResolutionVerdict {
        is_resolution: failures.is_empty(),
        is_complex: true,
        multidegrees_checked: tests.len(),
        failures,
    })
}

/// No nonzero entry has monomial `1`.
pub fn is_minimal(f: &MultigradedComplex) -> bool {
    (1..=f.max_degree()).all(|i| f.entries(i).iter().all(|e| !e.monomial.is_one()))
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverWitness {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeLinearity {
    pub lattice_linear: bool,
    pub minimal: bool,
    /// Entries whose multidegrees do not form a cover in the lcm-lattice.
    pub witnesses: Vec<CoverWitness>,
}

/// Every nonzero entry joins multidegrees `m' ⋖ m` of the lcm-lattice.
pub fn is_lattice_linear(f: &MultigradedComplex, ideal: &MonomialIdeal) -> LatticeLinearity {
    let lattice = lcm_lattice(ideal);
    let mut witnesses = Vec::new();
    for i in 1..=f.max_degree() {
        for e in f.entries(i) {
            let (from, to) = (&f.multidegrees[i][e.col], &f.multidegrees[i - 1][e.row]);
            if !lattice.is_cover(to, from) {
                witnesses.push(CoverWitness {
                    degree: i,
                    row: e.row,
                    col: e.col,
                    from: from.to_string(),
                    to: to.to_string(),
                });
            }
        }
    }
    LatticeLinearity {
        lattice_linear: witnesses.is_empty(),
        minimal: is_minimal(f),
        witnesses,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CwLatticeReport {
    pub is_cw: bool,
    pub witness: Option<String>,
    pub reason: Option<String>,
    /// The lattice is CW and its cellular resolution is minimal.
    pub lattice_linear_certified: bool,
    pub minimal_cellular: Option<MultigradedComplex>,
    pub resolution: Option<ResolutionVerdict>,
    pub minimal: Option<bool>,
    /// Direct lattice-linearity check on the Scarf complex, present when
    /// that complex is a minimal resolution.
    pub scarf_lattice_linear: Option<bool>,
}

/// When the lcm-lattice is a CW-poset, homogenizes the complex it is the
/// face poset of and checks that it is a minimal resolution.
pub fn cw_lattice_report(ideal: &MonomialIdeal, field: FieldConfig) -> Result<CwLatticeReport> {
    let lattice = lcm_lattice(ideal);
    let cw = lattice.poset.is_cw_poset(field);

    let scarf = homogenize_cellular(&scarf_complex(ideal), field)?;
    let scarf_lattice_linear = (is_minimal(&scarf) && is_resolution(&scarf, ideal)?.is_resolution)
        .then(|| is_lattice_linear(&scarf, ideal).lattice_linear);

    let mut report = CwLatticeReport {
        is_cw: cw.is_cw,
        witness: cw.witness,
        reason: cw.reason,
        lattice_linear_certified: false,
        minimal_cellular: None,
        resolution: None,
        minimal: None,
        scarf_lattice_linear,
    };
    if cw.is_cw {
        let x = RegularCWComplex::from_face_poset_graded(
            &lattice.poset,
            field,
            Some(&lattice.monomials),
        )?;
        let f = homogenize_cellular(&x, field)?;
        let verdict = is_resolution(&f, ideal)?;
        let minimal = is_minimal(&f);
        report.lattice_linear_certified = verdict.is_resolution && minimal;
        report.resolution = Some(verdict);
        report.minimal = Some(minimal);
        report.minimal_cellular = Some(f);
    }
    Ok(report)
}
