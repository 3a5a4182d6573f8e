//! JSON file formats.
//!
//! - poset: `{"elements": [id..], "covers": [[lo, hi]..], "labels": {id: str}}`
//! - CW-complex: `{"cells": [{"id", "dim", "facets": [id..], "mdeg": [e..]?}..]}`,
//!   the empty cell implicit
//! - simplicial complex: `{"facets": [[v..]..]}` with string or integer vertices
//! - ideal: `{"vars": n, "generators": [[e1..en]..]}`
//! - resolution: see [`ResolutionExport`]

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cw::{CellSpec, RegularCWComplex};
use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::monomial::MonomialIdeal;
pub use crate::monomial::ResolutionExport;
use crate::poset::Poset;
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
}

impl PosetFile {
    pub fn build(&self) -> Result<Poset> {
        let labels = self
            .labels
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Poset::build_labeled(&self.elements, &self.covers, &labels)
    }

    pub fn from_poset(p: &Poset) -> Self {
        PosetFile {
            elements: p.ids().to_vec(),
            covers: p
                .covers()
                .iter()
                .map(|&(a, b)| (p.id(a).to_string(), p.id(b).to_string()))
                .collect(),
            labels: (0..p.len())
                .filter_map(|x| p.label(x).map(|l| (p.id(x).to_string(), l.to_string())))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwFile {
    pub cells: Vec<CellSpec>,
}

impl CwFile {
    /// When every vertex has a multidegree and some higher cell does not,
    /// the missing ones are filled in as lcms of vertex labels.
    pub fn build(&self, field: FieldConfig) -> Result<RegularCWComplex> {
        let x = RegularCWComplex::new(self.cells.clone(), field)?;
        let vertices_labeled = self
            .cells
            .iter()
            .filter(|c| c.dim == 0)
            .all(|c| c.mdeg.is_some());
        let some_missing = self.cells.iter().any(|c| c.mdeg.is_none());
        if vertices_labeled && some_missing && self.cells.iter().any(|c| c.mdeg.is_some()) {
            return x.with_vertex_multidegrees();
        }
        Ok(x)
    }

    pub fn from_complex(x: &RegularCWComplex) -> Self {
        CwFile {
            cells: x.to_specs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexName {
    Int(i64),
    Name(String),
}

impl std::fmt::Display for VertexName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexName::Int(i) => write!(f, "{i}"),
            VertexName::Name(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub facets: Vec<Vec<VertexName>>,
}

impl ComplexFile {
    /// Vertices are numbered in order of first appearance.
    pub fn build(&self) -> SimplicialComplex {
        let mut names: Vec<String> = Vec::new();
        let mut key = |v: &VertexName| {
            let s = v.to_string();
            match names.iter().position(|n| *n == s) {
                Some(i) => i,
                None => {
                    names.push(s);
                    names.len() - 1
                }
            }
        };
        let facets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| f.iter().map(&mut key).collect())
            .collect();
        SimplicialComplex::from_facets(names, facets)
    }

    pub fn from_complex(k: &SimplicialComplex) -> Self {
        ComplexFile {
            facets: k
                .facets()
                .into_iter()
                .map(|f| {
                    f.iter()
                        .map(|&v| VertexName::Name(k.vertex_labels()[v].clone()))
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    pub vars: usize,
    pub generators: Vec<Vec<u32>>,
}

impl IdealFile {
    pub fn build(&self) -> Result<MonomialIdeal> {
        MonomialIdeal::from_exponents(self.vars, &self.generators)
    }
}

/// Hex sha256 of a byte string.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parsed file with the digest of its raw bytes.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, String)> {
    let bytes = std::fs::read(path)?;
    let value = serde_json::from_slice(&bytes)?;
    Ok((value, digest(&bytes)))
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn poset_round_trip() {
        let p = fixtures::triangle_square_poset();
        let file = PosetFile::from_poset(&p);
        let json = serde_json::to_string(&file).unwrap();
        let back: PosetFile = parse_json(&json).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.build().unwrap().covers(), p.covers());
        let labeled: PosetFile = parse_json(
            r#"{"elements": ["a", "b"], "covers": [["a", "b"]], "labels": {"b": "top"}}"#,
        )
        .unwrap();
        assert_eq!(labeled.build().unwrap().display(1), "top");
    }

    #[test]
    fn cw_files() {
        let file: CwFile = parse_json(
            r#"{"cells": [
                {"id": "u", "dim": 0, "facets": [], "mdeg": [1, 0]},
                {"id": "v", "dim": 0, "mdeg": [0, 1]},
                {"id": "e", "dim": 1, "facets": ["u", "v"]}
            ]}"#,
        )
        .unwrap();
        let x = file.build(FieldConfig::Rationals).unwrap();
        assert_eq!(x.cell(3).mdeg.as_ref().unwrap().exponents(), &[1, 1]);
        let back = CwFile::from_complex(&fixtures::triangle_square_cw());
        assert_eq!(back.cells.len(), 11);
        assert!(matches!(
            parse_json::<CwFile>(r#"{"cells": [{"id": 3}]}"#),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn complex_files() {
        let file: ComplexFile = parse_json(r#"{"facets": [[1, 2], [2, "c"]]}"#).unwrap();
        let k = file.build();
        assert_eq!(k.f_vector(), vec![1, 3, 2]);
        assert_eq!(ComplexFile::from_complex(&k).facets.len(), 2);
        let empty: ComplexFile = parse_json(r#"{"facets": []}"#).unwrap();
        assert_eq!(empty.build().f_vector(), vec![1]);
    }

    #[test]
    fn ideal_files_and_digests() {
        let file: IdealFile =
            parse_json(r#"{"vars": 3, "generators": [[1,1,0],[0,1,1],[1,0,1]]}"#).unwrap();
        assert_eq!(file.build().unwrap().generators().len(), 3);
        assert!(matches!(
            IdealFile {
                vars: 2,
                generators: vec![]
            }
            .build(),
            Err(Error::EmptyGeneratorList)
        ));
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
