//! Face posets of regular CW-complexes, the poset construction `D(P)`, and
//! cellular and poset resolutions of monomial ideals, over exact fields.

pub mod chain;
pub mod cli;
pub mod construction;
pub mod cw;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod io;
pub mod matrix;
pub mod monomial;
pub mod poset;
pub mod simplicial;

pub use chain::{
    compare_complexes, sign_equivalence, ChainComplexOverField, Comparison, HomologyResult,
};
pub use construction::{d_construction, CoverStrategy, DSequence};
pub use cw::{cellular_chain_complex, incidence_numbers, RegularCWComplex};
pub use error::{Error, Result};
pub use field::{FieldConfig, Scalar};
pub use matrix::FieldMatrix;
pub use monomial::{lcm_lattice, Monomial, MonomialIdeal};
pub use poset::Poset;
pub use simplicial::SimplicialComplex;
