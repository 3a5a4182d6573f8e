//! Monomial ideals, lcm-lattices and cellular resolutions.

mod complexes;
mod resolution;

pub use complexes::{lyubeznik_complex, scarf_complex, taylor_complex};
pub use resolution::{
    cw_lattice_report, homogenize_cellular, homogenize_d, is_lattice_linear, is_minimal,
    is_resolution, CoverWitness, CwLatticeReport, DegreeExport, DifferentialExport, Entry,
    LatticeLinearity, MultigradedComplex, ResolutionExport, ResolutionVerdict, StrandFailure,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::construction::interval_homology_table;
use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::poset::Poset;

/// A monomial `x^a` stored as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }
}

/// Lcm of a nonempty family.
pub fn lcm<'a>(ms: impl IntoIterator<Item = &'a Monomial>) -> Option<Monomial> {
    ms.into_iter().fold(None, |acc: Option<Monomial>, m| {
        Some(acc.map_or_else(|| m.clone(), |a| a.lcm(m)))
    })
}

pub fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.divides(b)
}

/// `x`, `y`, `z` for up to three variables, `x1 .. xn` beyond that.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match self.0.len() {
                n if n <= 3 => write!(f, "{}", ["x", "y", "z"][i])?,
                _ => write!(f, "x{}", i + 1)?,
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A monomial ideal stored by its minimal generators, in input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Drops duplicates and generators divisible by others.
    pub fn minimalize(nvars: usize, gens: Vec<Monomial>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGeneratorList);
        }
        if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::VariableCountMismatch {
                expected: nvars,
                got: g.nvars(),
            });
        }
        let mut kept: Vec<Monomial> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let redundant = gens
                .iter()
                .enumerate()
                .any(|(j, h)| j != i && h.divides(g) && (h != g || j < i));
            if !redundant {
                kept.push(g.clone());
            }
        }
        Ok(MonomialIdeal {
            nvars,
            generators: kept,
        })
    }

    pub fn from_exponents(nvars: usize, gens: &[Vec<u32>]) -> Result<Self> {
        Self::minimalize(nvars, gens.iter().cloned().map(Monomial::new).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }
}

/// The lcm-lattice with `1` at index 0.
#[derive(Clone, Debug)]
pub struct LcmLattice {
    pub poset: Poset,
    /// Monomial of each element, indexed like the poset.
    pub monomials: Vec<Monomial>,
}

impl LcmLattice {
    pub fn element_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.iter().position(|x| x == m)
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Whether `lower ⋖ upper` in the lattice.
    pub fn is_cover(&self, lower: &Monomial, upper: &Monomial) -> bool {
        match (self.element_of(lower), self.element_of(upper)) {
            (Some(a), Some(b)) => self.poset.covered_by(a, b),
            _ => false,
        }
    }
}

/// Closure of `ms` under pairwise lcm.
pub(crate) fn lcm_closure(ms: impl IntoIterator<Item = Monomial>) -> BTreeSet<Monomial> {
    let mut all: BTreeSet<Monomial> = BTreeSet::new();
    for m in ms {
        let new: Vec<Monomial> = all.iter().map(|a| a.lcm(&m)).collect();
        all.insert(m);
        all.extend(new);
    }
    all
}

/// Elements ordered by total degree, then by decreasing exponent vector.
pub fn lcm_lattice(ideal: &MonomialIdeal) -> LcmLattice {
    let mut monomials: Vec<Monomial> = lcm_closure(ideal.generators().iter().cloned())
        .into_iter()
        .collect();
    monomials.push(Monomial::one(ideal.nvars()));
    monomials.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    monomials.dedup();
    let ids = monomials.iter().map(|m| m.to_string()).collect();
    let poset = Poset::from_relation(ids, vec![None; monomials.len()], |a, b| {
        monomials[a].divides(&monomials[b])
    })
    .expect("divisibility is a partial order");
    LcmLattice { poset, monomials }
}

/// Multigraded betti numbers of `R/N`, `β_{i,m} = dim H̃_{i-2}((1, m))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    /// Nonzero entries ordered by `(i, m)`.
    pub entries: Vec<BettiEntry>,
    /// `Σ_m β_{i,m}` for `i = 0..`.
    pub total: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiEntry {
    pub i: usize,
    pub label: String,
    pub multidegree: Monomial,
    pub dim: usize,
}

impl BettiTable {
    pub fn get(&self, i: usize, m: &Monomial) -> usize {
        self.entries
            .iter()
            .find(|e| e.i == i && &e.multidegree == m)
            .map_or(0, |e| e.dim)
    }
}

pub fn gpw_betti(ideal: &MonomialIdeal, field: FieldConfig) -> Result<BettiTable> {
    let lattice = lcm_lattice(ideal);
    let table = interval_homology_table(&lattice.poset, field)?;
    let mut entries = BTreeMap::from([((0, Monomial::one(ideal.nvars())), 1)]);
    for interval in table.iter().flatten() {
        for h in interval.homology.degrees.iter().filter(|h| h.betti > 0) {
            let i = (h.degree + 2) as usize;
            entries.insert((i, lattice.monomials[interval.element].clone()), h.betti);
        }
    }
    let top = entries.keys().map(|(i, _)| *i).max().unwrap_or(0);
    let mut total = vec![0; top + 1];
    for ((i, _), b) in &entries {
        total[*i] += b;
    }
    let entries = entries
        .into_iter()
        .map(|((i, m), dim)| BettiEntry {
            i,
            label: m.to_string(),
            multidegree: m,
            dim,
        })
        .collect();
    Ok(BettiTable { entries, total })
}
