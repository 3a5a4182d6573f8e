//! Shared fixtures for the integration tests: a corpus of small simplicial
//! complexes, small monomial ideals, and an independent homology oracle.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cwres::simplicial::SimplicialComplex;
use cwres::MonomialIdeal;

/// Faces as bitmasks over vertices `0..n`.
pub type Masks = Vec<u32>;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|v| v.to_string()).collect()
}

fn faces_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|v| mask >> v & 1 == 1).collect()
}

pub fn complex_from_masks(n: usize, masks: &[u32]) -> SimplicialComplex {
    SimplicialComplex::from_facets(names(n), masks.iter().map(|&m| faces_of(m)))
}

/// Every downward-closed family of subsets of `{0,..,3}` containing the
/// empty set. Complexes on fewer vertices appear as the ones not using
/// every vertex.
pub fn all_on_four_vertices() -> Vec<Masks> {
    let mut out = Vec::new();
    for family in 1u32..(1 << 16) {
        if family & 1 == 0 {
            continue;
        }
        let closed = (0..16u32).filter(|s| family >> s & 1 == 1).all(|s| {
            (0..4)
                .filter(|v| s >> v & 1 == 1)
                .all(|v| family >> (s & !(1 << v)) & 1 == 1)
        });
        if closed {
            out.push((0..16u32).filter(|s| family >> s & 1 == 1).collect());
        }
    }
    out
}

/// Downward closure of a few random subsets of `{0,..,4}`.
pub fn random_on_five_vertices(count: usize, seed: u64) -> Vec<Masks> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=6);
            let tops: Vec<u32> = (0..k).map(|_| rng.random_range(1..32u32)).collect();
            let mut masks: Vec<u32> = (0..32u32)
                .filter(|s| tops.iter().any(|t| s & t == *s))
                .collect();
            masks.sort_unstable();
            masks
        })
        .collect()
}

/// The complexes of the comparison sweep: all on at most four vertices plus
/// sixty random ones on five.
pub fn corpus() -> Vec<(usize, Masks)> {
    let mut out: Vec<(usize, Masks)> = all_on_four_vertices().into_iter().map(|m| (4, m)).collect();
    out.extend(random_on_five_vertices(60, 7).into_iter().map(|m| (5, m)));
    out
}

pub fn corpus_complexes() -> Vec<SimplicialComplex> {
    corpus()
        .iter()
        .map(|(n, m)| complex_from_masks(*n, m))
        .collect()
}

const P: u64 = 1_000_000_007;

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % P;
        }
        a = a * a % P;
        e >>= 1;
    }
    r
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = pow(rows[rank][c], P - 2);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % P;
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + P - f * y % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced betti numbers in degrees `-1..=dim` from raw face masks, by
/// boundary ranks over a large prime. No complex on at most five vertices
/// has torsion, so these are the rational betti numbers.
pub fn oracle_reduced_betti(masks: &[u32]) -> Vec<usize> {
    let dim = masks
        .iter()
        .map(|m| m.count_ones() as i32 - 1)
        .max()
        .unwrap_or(-1);
    let by_dim: Vec<Vec<u32>> = (-1..=dim)
        .map(|d| {
            masks
                .iter()
                .copied()
                .filter(|m| m.count_ones() as i32 - 1 == d)
                .collect()
        })
        .collect();
    // ranks[k] = rank of the boundary from by_dim[k] to by_dim[k - 1]
    let mut ranks = vec![0; by_dim.len() + 1];
    for k in 1..by_dim.len() {
        let rows: Vec<Vec<u64>> = by_dim[k - 1]
            .iter()
            .map(|&tau| {
                by_dim[k]
                    .iter()
                    .map(|&sigma| {
                        if sigma & tau != tau {
                            return 0;
                        }
                        let v = (sigma & !tau).trailing_zeros();
                        let below = (sigma & ((1 << v) - 1)).count_ones();
                        if below % 2 == 0 {
                            1
                        } else {
                            P - 1
                        }
                    })
                    .collect()
            })
            .collect();
        ranks[k] = rank_mod_p(rows);
    }
    (0..by_dim.len())
        .map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

pub fn ideal(gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(
        gens[0].len(),
        &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>(),
    )
    .unwrap()
}

/// Named small ideals plus random ones in three variables.
pub fn ideal_corpus() -> Vec<MonomialIdeal> {
    let mut out = vec![
        ideal(&[&[1, 0], &[0, 1]]),
        ideal(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
        ideal(&[&[2, 0], &[1, 1], &[0, 2]]),
        ideal(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        ideal(&[&[3, 0], &[2, 1], &[0, 2]]),
        ideal(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    while out.len() < 30 {
        let k = rng.random_range(2..=4);
        let gens: Vec<Vec<u32>> = (0..k)
            .map(|_| (0..3).map(|_| rng.random_range(0..3)).collect())
            .collect();
        if let Ok(i) = MonomialIdeal::from_exponents(3, &gens) {
            if i.generators().iter().all(|g| !g.is_one()) {
                out.push(i);
            }
        }
    }
    out
}

#[test]
fn oracle_on_known_spaces() {
    // hollow triangle: a circle
    assert_eq!(oracle_reduced_betti(&[0, 1, 2, 4, 3, 5, 6]), vec![0, 0, 1]);
    // two points
    assert_eq!(oracle_reduced_betti(&[0, 1, 2]), vec![0, 1]);
    assert_eq!(oracle_reduced_betti(&[0]), vec![1]);
    // boundary of the tetrahedron
    let sphere: Vec<u32> = (0..15u32).collect();
    assert_eq!(oracle_reduced_betti(&sphere), vec![0, 0, 0, 1]);
    assert_eq!(all_on_four_vertices().len(), 167);
}
