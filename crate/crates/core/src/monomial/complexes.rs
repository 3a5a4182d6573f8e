//! Simplicial complexes on the minimal generators labeled by lcms.

use std::collections::HashMap;

use crate::cw::RegularCWComplex;
use crate::error::{Error, Result};
use crate::simplicial::{Face, SimplicialComplex};

use super::{lcm, Monomial, MonomialIdeal};

fn subsets(n: usize) -> impl Iterator<Item = Face> {
    (1u64..(1u64 << n)).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

fn face_lcm(ideal: &MonomialIdeal, face: &[usize]) -> Monomial {
    lcm(face.iter().map(|&i| &ideal.generators()[i]))
        .unwrap_or_else(|| Monomial::one(ideal.nvars()))
}

/// Vertex `i` is generator `i + 1`; cells are named like `{1,2}`.
fn labeled(ideal: &MonomialIdeal, faces: Vec<Face>) -> RegularCWComplex {
    let names = (1..=ideal.generators().len())
        .map(|i| i.to_string())
        .collect();
    let k = SimplicialComplex::from_facets(names, faces);
    RegularCWComplex::from_simplicial_labeled(&k, |f| Some(face_lcm(ideal, f)))
}

/// The full simplex on the generators.
pub fn taylor_complex(ideal: &MonomialIdeal) -> RegularCWComplex {
    labeled(ideal, vec![(0..ideal.generators().len()).collect()])
}

/// Faces whose lcm is the lcm of no other subset of generators.
pub fn scarf_complex(ideal: &MonomialIdeal) -> RegularCWComplex {
    let n = ideal.generators().len();
    let mut count: HashMap<Monomial, usize> = HashMap::new();
    for f in subsets(n) {
        *count.entry(face_lcm(ideal, &f)).or_default() += 1;
    }
    let faces = subsets(n)
        .filter(|f| count[&face_lcm(ideal, f)] == 1)
        .collect();
    labeled(ideal, faces)
}

/// Faces `{i_1 < .. < i_s}` (positions in `order`) such that no generator
/// earlier than `i_t` divides `lcm(m_{i_t}, .., m_{i_s})` for any `t`.
///
/// `order` lists generator indices; `None` means input order.
pub fn lyubeznik_complex(
    ideal: &MonomialIdeal,
    order: Option<&[usize]>,
) -> Result<RegularCWComplex> {
    let n = ideal.generators().len();
    let order: Vec<usize> = order.map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::Parse(format!(
            "generator order {order:?} is not a permutation of 0..{n}"
        )));
    }
    let gens: Vec<&Monomial> = order.iter().map(|&i| &ideal.generators()[i]).collect();
    let faces = subsets(n)
        .filter(|f| {
            (0..f.len()).all(|t| {
                let tail = lcm(f[t..].iter().map(|&p| gens[p])).expect("nonempty tail");
                gens[..f[t]].iter().all(|g| !g.divides(&tail))
            })
        })
        .map(|f| {
            let mut face: Face = f.iter().map(|&p| order[p]).collect();
            face.sort_unstable();
            face
        })
        .collect();
    Ok(labeled(ideal, faces))
}
