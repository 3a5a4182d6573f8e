//! Abstract simplicial complexes with the empty face.

use std::collections::{BTreeSet, HashMap};

use crate::chain::ChainComplexOverField;
use crate::field::FieldConfig;
use crate::matrix::FieldMatrix;

/// A face is an increasing list of vertex keys.
pub type Face = Vec<usize>;

/// A simplicial complex closed under subsets, always containing the empty face.
///
/// Vertex keys index `vertex_labels`; not every key needs to be used, which
/// lets complexes built over the same vertex table share face identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_labels: Vec<String>,
    separator: &'static str,
    /// `faces[d + 1]` are the `d`-faces in lexicographic order.
    faces: Vec<Vec<Face>>,
    lookup: Vec<HashMap<Face, usize>>,
}

impl SimplicialComplex {
    /// Closure of the given facets.
    pub fn from_facets(vertex_labels: Vec<String>, facets: impl IntoIterator<Item = Face>) -> Self {
        let mut all = BTreeSet::new();
        all.insert(Vec::new());
        for mut facet in facets {
            facet.sort_unstable();
            facet.dedup();
            let n = facet.len();
            for mask in 1u64..(1u64 << n) {
                all.insert(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| facet[i])
                        .collect(),
                );
            }
        }
        Self::from_closed_faces(vertex_labels, all, ",")
    }

    /// Builds from a family already closed under subsets.
    pub(crate) fn from_closed_faces(
        vertex_labels: Vec<String>,
        faces: impl IntoIterator<Item = Face>,
        separator: &'static str,
    ) -> Self {
        let mut by_dim: Vec<BTreeSet<Face>> = vec![BTreeSet::new()];
        by_dim[0].insert(Vec::new());
        for face in faces {
            debug_assert!(face.windows(2).all(|w| w[0] < w[1]));
            let k = face.len();
            if by_dim.len() <= k {
                by_dim.resize_with(k + 1, BTreeSet::new);
            }
            by_dim[k].insert(face);
        }
        let faces: Vec<Vec<Face>> = by_dim
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        let lookup = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
            .collect();
        let complex = SimplicialComplex {
            vertex_labels,
            separator,
            faces,
            lookup,
        };
        debug_assert!(complex.is_closed());
        complex
    }

    fn is_closed(&self) -> bool {
        self.faces.iter().flatten().all(|f| {
            (0..f.len()).all(|skip| {
                let sub: Face = f
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                self.contains(&sub)
            })
        })
    }

    /// Dimension; `-1` for the complex `{∅}`.
    pub fn dim(&self) -> i32 {
        self.faces.len() as i32 - 2
    }

    /// Number of faces of each dimension from `-1` upward.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn faces(&self, d: i32) -> &[Face] {
        usize::try_from(d + 1)
            .ok()
            .and_then(|k| self.faces.get(k))
            .map_or(&[], Vec::as_slice)
    }

    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        self.lookup
            .get(face.len())
            .and_then(|m| m.get(face).copied())
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.face_index(face).is_some()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    /// Vertex keys in use.
    pub fn vertices(&self) -> Vec<usize> {
        self.faces(0).iter().map(|f| f[0]).collect()
    }

    pub fn face_label(&self, face: &[usize]) -> String {
        let names: Vec<&str> = face
            .iter()
            .map(|&v| self.vertex_labels[v].as_str())
            .collect();
        format!("{{{}}}", names.join(self.separator))
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().flatten()
    }

    /// Nonempty faces contained in no larger face, by dimension then
    /// lexicographically.
    pub fn facets(&self) -> Vec<&Face> {
        self.faces
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(k, fs)| {
                fs.iter().filter(move |f| {
                    self.faces
                        .get(k + 1)
                        .is_none_or(|up| up.iter().all(|g| !f.iter().all(|v| g.contains(v))))
                })
            })
            .collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.all_faces().all(|f| other.contains(f))
    }

    /// Reduced simplicial chain complex in degrees `-1..=dim`, faces oriented
    /// by increasing vertex key: `d[v0..vk] = sum (-1)^j [v0..^vj..vk]`.
    pub fn reduced_chain_complex(&self, field: FieldConfig) -> ChainComplexOverField {
        let labels: Vec<Vec<String>> = self
            .faces
            .iter()
            .map(|fs| fs.iter().map(|f| self.face_label(f)).collect())
            .collect();
        let diffs = (1..self.faces.len())
            .map(|k| {
                let mut m = FieldMatrix::zeros(field, self.faces[k - 1].len(), self.faces[k].len());
                for (c, face) in self.faces[k].iter().enumerate() {
                    for (sign, sub) in boundary_faces(face) {
                        let r = self.lookup[k - 1][&sub];
                        m.set(r, c, field.from_int(sign));
                    }
                }
                m
            })
            .collect();
        ChainComplexOverField::new(field, -1, labels, diffs).expect("face counts define the shapes")
    }
}

/// `((-1)^j, face without its j-th vertex)` for every codimension-one face.
pub fn boundary_faces(face: &[usize]) -> impl Iterator<Item = (i64, Face)> + '_ {
    (0..face.len()).map(move |j| {
        let sub = face
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &v)| v)
            .collect();
        (if j % 2 == 0 { 1 } else { -1 }, sub)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn closure_and_f_vector() {
        let k = SimplicialComplex::from_facets(labels(3), [vec![0, 1, 2]]);
        assert_eq!(k.f_vector(), vec![1, 3, 3, 1]);
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&[0, 2]));
        assert_eq!(k.facets(), vec![&vec![0, 1, 2]]);
        let k = SimplicialComplex::from_facets(labels(4), [vec![0, 1], vec![2]]);
        assert_eq!(k.facets(), vec![&vec![2], &vec![0, 1]]);
        let empty = SimplicialComplex::from_facets(labels(0), []);
        assert_eq!(empty.f_vector(), vec![1]);
        assert_eq!(empty.dim(), -1);
    }

    #[test]
    fn reduced_homology_of_small_complexes() {
        let q = FieldConfig::Rationals;
        let hollow =
            SimplicialComplex::from_facets(labels(3), [vec![0, 1], vec![0, 2], vec![1, 2]]);
        let h = hollow.reduced_chain_complex(q).homology().unwrap();
        assert_eq!(h.betti_numbers(), vec![(-1, 0), (0, 0), (1, 1)]);
        let points = SimplicialComplex::from_facets(labels(3), [vec![0], vec![1], vec![2]]);
        assert_eq!(
            points.reduced_chain_complex(q).homology().unwrap().betti(0),
            2
        );
        let empty = SimplicialComplex::from_facets(labels(0), []);
        assert_eq!(
            empty
                .reduced_chain_complex(q)
                .homology()
                .unwrap()
                .betti_numbers(),
            vec![(-1, 1)]
        );
    }

    #[test]
    fn labels_use_vertex_names() {
        let k = SimplicialComplex::from_facets(vec!["a".into(), "b".into()], [vec![0, 1]]);
        assert_eq!(k.face_label(&[0, 1]), "{a,b}");
        assert_eq!(k.face_label(&[]), "{}");
    }
}
