//! Small named examples shared by tests, the CLI and the Python bindings.

use crate::cw::{CellSpec, RegularCWComplex};
use crate::field::FieldConfig;
use crate::poset::Poset;

/// Id of the empty cell / least element in face posets.
pub const EMPTY: &str = "∅";

const TRIANGLE_SQUARE_CELLS: &[(&str, i32, &[&str])] = &[
    ("1", 0, &[]),
    ("2", 0, &[]),
    ("3", 0, &[]),
    ("4", 0, &[]),
    ("12", 1, &["1", "2"]),
    ("13", 1, &["1", "3"]),
    ("23", 1, &["2", "3"]),
    ("14", 1, &["1", "4"]),
    ("24", 1, &["2", "4"]),
    ("123", 2, &["12", "13", "23"]),
    ("1234", 2, &["13", "23", "14", "24"]),
];

/// Face poset of the two-cell complex: a triangle and a square glued along
/// two edges.
pub fn triangle_square_poset() -> Poset {
    let mut elements = vec![EMPTY];
    let mut covers = Vec::new();
    for &(id, _, facets) in TRIANGLE_SQUARE_CELLS {
        elements.push(id);
        if facets.is_empty() {
            covers.push((EMPTY, id));
        }
        covers.extend(facets.iter().map(|&f| (f, id)));
    }
    Poset::build(&elements, &covers).expect("fixture is a valid poset")
}

pub fn triangle_square_cw() -> RegularCWComplex {
    let specs = TRIANGLE_SQUARE_CELLS
        .iter()
        .map(|&(id, dim, facets)| CellSpec {
            id: id.into(),
            dim,
            facets: facets.iter().map(|s| s.to_string()).collect(),
            mdeg: None,
        })
        .collect();
    RegularCWComplex::new(specs, FieldConfig::Rationals).expect("fixture is a regular CW-complex")
}

/// Boundary of a triangle as a CW-complex.
pub fn hollow_triangle() -> RegularCWComplex {
    let cell = |id: &str, dim: i32, facets: &[&str]| CellSpec {
        id: id.into(),
        dim,
        facets: facets.iter().map(|s| s.to_string()).collect(),
        mdeg: None,
    };
    RegularCWComplex::new(
        vec![
            cell("a", 0, &[]),
            cell("b", 0, &[]),
            cell("c", 0, &[]),
            cell("ab", 1, &["a", "b"]),
            cell("ac", 1, &["a", "c"]),
            cell("bc", 1, &["b", "c"]),
        ],
        FieldConfig::Rationals,
    )
    .expect("fixture is a regular CW-complex")
}
