//! Finite posets given by their cover relations.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::simplicial::SimplicialComplex;

/// A finite poset stored as its Hasse diagram plus the order relation.
///
/// Elements are addressed by index (their position in the input list); ids
/// are the user-facing names.
#[derive(Clone, Debug)]
pub struct Poset {
    ids: Vec<String>,
    labels: Vec<Option<String>>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    /// `below[x]` holds every `y <= x`.
    below: Vec<FixedBitSet>,
    /// A linear extension: smallest available index first.
    linear: Vec<usize>,
    position: Vec<usize>,
}

impl Poset {
    /// Validates and builds a poset from ids and `(lower, upper)` cover pairs.
    pub fn build<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let ids: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let pairs = covers
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indexed(ids, vec![None; elements.len()], pairs)
    }

    /// Like [`Poset::build`] with display labels per element.
    pub fn build_labeled<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
        labels: &HashMap<String, String>,
    ) -> Result<Self> {
        let mut p = Self::build(elements, covers)?;
        for (id, label) in labels {
            let i = p.index_of(id)?;
            p.labels[i] = Some(label.clone());
        }
        Ok(p)
    }

    pub(crate) fn from_indexed(
        ids: Vec<String>,
        labels: Vec<Option<String>>,
        covers: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = ids.len();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in &covers {
            if a == b {
                return Err(Error::CycleDetected(ids[a].clone()));
            }
            if upper[a].contains(&b) {
                return Err(Error::DuplicateCover {
                    lower: ids[a].clone(),
                    upper: ids[b].clone(),
                });
            }
            upper[a].push(b);
            lower[b].push(a);
        }
        for v in upper.iter_mut().chain(lower.iter_mut()) {
            v.sort_unstable();
        }

        // Kahn's algorithm, smallest index first.
        let mut indegree: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut linear = Vec::with_capacity(n);
        while let Some(Reverse(x)) = heap.pop() {
            linear.push(x);
            for &y in &upper[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    heap.push(Reverse(y));
                }
            }
        }
        if linear.len() != n {
            let stuck = (0..n)
                .find(|&i| indegree[i] > 0)
                .expect("some element is on a cycle");
            return Err(Error::CycleDetected(ids[stuck].clone()));
        }
        let mut position = vec![0; n];
        for (p, &x) in linear.iter().enumerate() {
            position[x] = p;
        }

        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for &x in &linear {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &l in &lower[x] {
                set.union_with(&below[l]);
            }
            below[x] = set;
        }

        for &(a, b) in &covers {
            if upper[a].iter().any(|&c| c != b && below[b].contains(c)) {
                return Err(Error::TransitiveCover {
                    lower: ids[a].clone(),
                    upper: ids[b].clone(),
                });
            }
        }

        let index = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Poset {
            ids,
            labels,
            index,
            covers,
            upper,
            lower,
            below,
            linear,
            position,
        })
    }

    /// Poset on `elements` ordered by `leq`, with covers computed from scratch.
    pub(crate) fn from_relation(
        ids: Vec<String>,
        labels: Vec<Option<String>>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let n = ids.len();
        let lt = |a: usize, b: usize| a != b && leq(a, b);
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    covers.push((a, b));
                }
            }
        }
        Self::from_indexed(ids, labels, covers)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn label(&self, x: usize) -> Option<&str> {
        self.labels[x].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// Label if present, id otherwise.
    pub fn display(&self, x: usize) -> &str {
        self.label(x).unwrap_or(&self.ids[x])
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements covering `x`, ascending by index.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    /// Elements covered by `x`, ascending by index.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn covered_by(&self, a: usize, b: usize) -> bool {
        self.upper[a].binary_search(&b).is_ok()
    }

    /// Elements in a fixed linear extension of the order.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    pub fn position(&self, x: usize) -> usize {
        self.position[x]
    }

    pub fn least_element(&self) -> Option<usize> {
        let first = *self.linear.first()?;
        (self.below.iter().all(|b| b.contains(first))).then_some(first)
    }

    /// Elements `x` with `a < x < b`, ascending by index.
    pub fn open_interval_elements(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.lt(a, x) && self.lt(x, b))
            .collect()
    }

    /// Elements `x` with `a < x <= b`, ascending by index.
    pub fn half_closed_interval_elements(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.lt(a, x) && self.leq(x, b))
            .collect()
    }

    /// The induced subposet on `elements`, covers recomputed.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let ids = elements.iter().map(|&x| self.ids[x].clone()).collect();
        let labels = elements.iter().map(|&x| self.labels[x].clone()).collect();
        Poset::from_relation(ids, labels, |i, j| self.leq(elements[i], elements[j]))
            .expect("induced subposets of a valid poset are valid")
    }

    fn strictly_below(&self, a: &str, b: &str) -> Result<(usize, usize)> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        if !self.lt(ia, ib) {
            return Err(Error::NotComparable {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        Ok((ia, ib))
    }

    pub fn open_interval(&self, a: &str, b: &str) -> Result<Poset> {
        let (ia, ib) = self.strictly_below(a, b)?;
        Ok(self.induced(&self.open_interval_elements(ia, ib)))
    }

    pub fn half_closed_interval(&self, a: &str, b: &str) -> Result<Poset> {
        let (ia, ib) = self.strictly_below(a, b)?;
        Ok(self.induced(&self.half_closed_interval_elements(ia, ib)))
    }

    /// Order complex of the whole poset.
    pub fn order_complex(&self) -> SimplicialComplex {
        self.order_complex_on(&(0..self.len()).collect::<Vec<_>>())
    }

    /// Order complex of the subposet on `subset`.
    ///
    /// Vertex keys are positions in this poset's linear extension, so faces
    /// of complexes built from different subsets of the same poset are
    /// directly comparable and every face lists its chain bottom to top.
    pub fn order_complex_on(&self, subset: &[usize]) -> SimplicialComplex {
        let mut members: Vec<usize> = subset.to_vec();
        members.sort_by_key(|&x| self.position[x]);
        members.dedup();
        let mut faces: Vec<Vec<usize>> = vec![Vec::new()];
        let mut stack: Vec<Vec<usize>> = members.iter().rev().map(|&x| vec![x]).collect();
        while let Some(chain) = stack.pop() {
            let top = *chain.last().expect("chains are nonempty");
            for &y in members.iter().rev() {
                if self.position[y] > self.position[top] && self.lt(top, y) {
                    let mut next = chain.clone();
                    next.push(y);
                    stack.push(next);
                }
            }
            faces.push(chain.iter().map(|&x| self.position[x]).collect());
        }
        let vertex_labels = self
            .linear
            .iter()
            .map(|&x| self.display(x).to_string())
            .collect();
        SimplicialComplex::from_closed_faces(vertex_labels, faces, "<")
    }

    /// Length of the longest chain from a minimal element to each element.
    fn longest_chain_lengths(&self) -> Vec<usize> {
        let mut len = vec![0usize; self.len()];
        for &x in &self.linear {
            len[x] = self.lower[x].iter().map(|&l| len[l] + 1).max().unwrap_or(0);
        }
        len
    }

    fn longest_chain_to(&self, x: usize, len: &[usize]) -> Vec<usize> {
        let mut chain = vec![x];
        let mut cur = x;
        while let Some(&l) = self.lower[cur].iter().find(|&&l| len[l] + 1 == len[cur]) {
            chain.push(l);
            cur = l;
        }
        chain.reverse();
        chain
    }

    /// Rank function, or `NotRanked` with two maximal chains of different
    /// lengths ending at the same element.
    pub fn compute_rank(&self) -> Result<RankFunction> {
        self.least_element().ok_or(Error::NoLeastElement)?;
        let len = self.longest_chain_lengths();
        for &x in &self.linear {
            if let Some(&l) = self.lower[x].iter().find(|&&l| len[l] + 1 != len[x]) {
                let names = |c: Vec<usize>| c.into_iter().map(|e| self.ids[e].clone()).collect();
                let mut short = self.longest_chain_to(l, &len);
                short.push(x);
                return Err(Error::NotRanked {
                    element: self.ids[x].clone(),
                    short: names(short),
                    long: names(self.longest_chain_to(x, &len)),
                });
            }
        }
        Ok(RankFunction { ranks: len })
    }

    /// Checks the CW-poset conditions, certifying each lower interval as a
    /// homology sphere of the right dimension.
    pub fn is_cw_poset(&self, field: FieldConfig) -> CwPosetReport {
        let mut report = CwPosetReport {
            certification: "homology-sphere",
            is_cw: false,
            least_element: None,
            nontrivial: self.len() > 1,
            ranked: false,
            thin: false,
            intervals: Vec::new(),
            witness: None,
            reason: None,
        };
        let Some(bottom) = self.least_element() else {
            report.reason = Some("no least element".into());
            return report;
        };
        report.least_element = Some(self.ids[bottom].clone());
        if !report.nontrivial {
            report.reason = Some("poset has a single element".into());
            return report;
        }
        let rank = match self.compute_rank() {
            Ok(r) => r,
            Err(Error::NotRanked { element, .. }) => {
                report.reason = Some(format!("not ranked at {element}"));
                report.witness = Some(element);
                return report;
            }
            Err(e) => {
                report.reason = Some(e.to_string());
                return report;
            }
        };
        report.ranked = true;

        // Tops of length-two intervals without exactly two middle elements.
        let mut thin_failures = vec![false; self.len()];
        for x in 0..self.len() {
            let mut middle_counts: HashMap<usize, usize> = HashMap::new();
            for &z in &self.upper[x] {
                for &y in &self.upper[z] {
                    *middle_counts.entry(y).or_default() += 1;
                }
            }
            for (y, count) in middle_counts {
                if count != 2 {
                    thin_failures[y] = true;
                }
            }
        }
        report.thin = !thin_failures.iter().any(|&b| b);

        let elements: Vec<usize> = self
            .linear
            .iter()
            .copied()
            .filter(|&x| x != bottom)
            .collect();
        report.intervals = elements
            .par_iter()
            .map(|&x| {
                let complex = self.order_complex_on(&self.open_interval_elements(bottom, x));
                let homology = complex
                    .reduced_chain_complex(field)
                    .homology()
                    .expect("simplicial boundaries compose to zero");
                let sphere_dim = rank.rank(x) as i32 - 2;
                let betti = homology.betti_numbers();
                let sphere = betti
                    .iter()
                    .all(|&(d, b)| b == usize::from(d == sphere_dim))
                    && homology.betti(sphere_dim) == 1;
                IntervalVerdict {
                    element: self.ids[x].clone(),
                    rank: rank.rank(x),
                    betti,
                    sphere,
                }
            })
            .collect();

        let failing = elements
            .iter()
            .zip(&report.intervals)
            .find(|(&x, v)| thin_failures[x] || !v.sphere);
        match failing {
            Some((&x, v)) => {
                report.witness = Some(self.ids[x].clone());
                report.reason = Some(if !v.sphere {
                    format!(
                        "interval below {} is not a homology {}-sphere",
                        self.ids[x],
                        v.rank as i32 - 2
                    )
                } else {
                    format!("a length-two interval below {} is not thin", self.ids[x])
                });
            }
            None => report.is_cw = true,
        }
        report
    }
}

/// Rank of each element, indexed like the poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankFunction {
    ranks: Vec<usize>,
}

impl RankFunction {
    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalVerdict {
    pub element: String,
    pub rank: usize,
    /// Reduced betti numbers of the open lower interval, by degree.
    pub betti: Vec<(i32, usize)>,
    pub sphere: bool,
}

/// Outcome of the CW-poset test. Sphere recognition is replaced by the
/// homology-sphere certificate named in `certification`.
#[derive(Clone, Debug, Serialize)]
pub struct CwPosetReport {
    pub certification: &'static str,
    pub is_cw: bool,
    pub least_element: Option<String>,
    pub nontrivial: bool,
    pub ranked: bool,
    pub thin: bool,
    pub intervals: Vec<IntervalVerdict>,
    pub witness: Option<String>,
    pub reason: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn poset(elements: &[&str], covers: &[(&str, &str)]) -> Result<Poset> {
        Poset::build(elements, covers)
    }

    #[test]
    fn build_validation() {
        let chain = poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(chain.lt(0, 1));
        assert!(matches!(
            poset(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::CycleDetected(_))
        ));
        assert!(matches!(
            poset(&["a", "a"], &[]),
            Err(Error::DuplicateId(_))
        ));
        assert!(matches!(
            poset(&["a"], &[("a", "z")]),
            Err(Error::UnknownElement(_))
        ));
        assert!(matches!(
            poset(&["0", "a", "c"], &[("0", "a"), ("a", "c"), ("0", "c")]),
            Err(Error::TransitiveCover { .. })
        ));
    }

    #[test]
    fn triangle_square_intervals() {
        let p = fixtures::triangle_square_poset();
        assert_eq!(p.len(), 12);
        let open = p.open_interval("∅", "123").unwrap();
        let mut ids = open.ids().to_vec();
        ids.sort();
        assert_eq!(ids, ["1", "12", "13", "2", "23", "3"]);
        let half = p.half_closed_interval("∅", "12").unwrap();
        assert_eq!(half.ids(), ["1", "2", "12"]);
        let chain = poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(chain.open_interval("a", "c").unwrap().ids(), ["b"]);
        assert!(matches!(
            p.open_interval("1", "2"),
            Err(Error::NotComparable { .. })
        ));
    }

    #[test]
    fn interval_covers_are_recomputed() {
        let p = fixtures::triangle_square_poset();
        let open = p.open_interval("∅", "1234").unwrap();
        assert_eq!(open.len(), 8);
        assert_eq!(open.covers().len(), 8);
    }

    #[test]
    fn order_complex_examples() {
        let anti = poset(&["x", "y"], &[]).unwrap();
        assert_eq!(anti.order_complex().f_vector(), vec![1, 2]);
        let p = fixtures::triangle_square_poset();
        let hexagon = p.open_interval("∅", "123").unwrap().order_complex();
        assert_eq!(hexagon.f_vector(), vec![1, 6, 6]);
        let chain = poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(chain.order_complex().f_vector(), vec![1, 2, 1]);
    }

    #[test]
    fn ranks() {
        let p = fixtures::triangle_square_poset();
        let r = p.compute_rank().unwrap();
        for (id, expect) in [
            ("∅", 0),
            ("1", 1),
            ("4", 1),
            ("24", 2),
            ("123", 3),
            ("1234", 3),
        ] {
            assert_eq!(r.rank(p.index_of(id).unwrap()), expect, "{id}");
        }
        let chain = poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(chain.compute_rank().unwrap().ranks(), [0, 1]);

        let skew = poset(
            &["0", "a", "b", "c", "d"],
            &[("0", "a"), ("a", "b"), ("0", "c"), ("c", "d"), ("d", "b")],
        )
        .unwrap();
        match skew.compute_rank() {
            Err(Error::NotRanked {
                element,
                short,
                long,
            }) => {
                assert_eq!(element, "b");
                assert_eq!(short, ["0", "a", "b"]);
                assert_eq!(long, ["0", "c", "d", "b"]);
            }
            other => panic!("expected NotRanked, got {other:?}"),
        }
        let no_bottom = poset(&["a", "b"], &[]).unwrap();
        assert!(matches!(
            no_bottom.compute_rank(),
            Err(Error::NoLeastElement)
        ));
    }

    #[test]
    fn cw_poset_examples() {
        let q = FieldConfig::Rationals;
        let report = fixtures::triangle_square_poset().is_cw_poset(q);
        assert!(report.is_cw, "{report:?}");
        assert!(report.thin);

        // lcm-lattice of (xy, yz, xz)
        let tri = poset(
            &["1", "xy", "yz", "xz", "xyz"],
            &[
                ("1", "xy"),
                ("1", "yz"),
                ("1", "xz"),
                ("xy", "xyz"),
                ("yz", "xyz"),
                ("xz", "xyz"),
            ],
        )
        .unwrap();
        let report = tri.is_cw_poset(q);
        assert!(!report.is_cw);
        assert_eq!(report.witness.as_deref(), Some("xyz"));
        let top = report
            .intervals
            .iter()
            .find(|v| v.element == "xyz")
            .unwrap();
        assert_eq!(top.betti, vec![(-1, 0), (0, 2)]);

        let edge = poset(
            &["1", "x", "y", "xy"],
            &[("1", "x"), ("1", "y"), ("x", "xy"), ("y", "xy")],
        )
        .unwrap();
        assert!(edge.is_cw_poset(q).is_cw);

        let single = poset(&["0"], &[]).unwrap();
        assert!(!single.is_cw_poset(q).nontrivial);
    }

    #[test]
    fn cw_rank_one_and_two_intervals() {
        let p = fixtures::triangle_square_poset();
        let r = p.compute_rank().unwrap();
        let bottom = p.least_element().unwrap();
        for x in 0..p.len() {
            let size = p.open_interval_elements(bottom, x).len();
            match r.rank(x) {
                1 => assert_eq!(size, 0),
                2 => assert_eq!(size, 2),
                _ => {}
            }
        }
    }
}
