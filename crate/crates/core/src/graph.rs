//! Plumbing graphs: vertices weighted by (genus, Euler number), undirected
//! multi-edges, no loops, connected.

use std::collections::VecDeque;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Weights carried by one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub genus: u32,
    pub euler: i64,
}

/// Graph file representation, as read from and written to disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGraph {
    pub vertices: Vec<RawVertex>,
    #[serde(default)]
    pub edges: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVertex {
    pub id: i64,
    pub genus: i64,
    pub euler: i64,
}

/// A validated plumbing graph.
///
/// Vertex ids are `0..r`. Edges are kept in input order with each pair
/// normalized to `(low, high)`; repeated pairs are multi-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    multiplicity: Vec<Vec<u32>>,
}

impl PlumbingGraph {
    /// Builds and validates a graph from weights and an edge list.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let raw = RawGraph {
            vertices: vertices
                .iter()
                .enumerate()
                .map(|(id, v)| RawVertex {
                    id: id as i64,
                    genus: i64::from(v.genus),
                    euler: v.euler,
                })
                .collect(),
            edges: edges.iter().map(|&(a, b)| [a as i64, b as i64]).collect(),
        };
        validate_graph(&raw)
    }

    /// Convenience constructor from `(genus, euler)` pairs.
    pub fn from_weights(weights: &[(u32, i64)], edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(
            weights
                .iter()
                .map(|&(genus, euler)| Vertex { genus, euler })
                .collect(),
            edges.to_vec(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges joining `i` and `j` (zero on the diagonal).
    pub fn edge_multiplicity(&self, i: usize, j: usize) -> u32 {
        self.multiplicity[i][j]
    }

    /// `v_i = E_i·(E − E_i)`: edge ends at `i`, counted with multiplicity.
    pub fn valency(&self, i: usize) -> u32 {
        self.multiplicity[i].iter().sum()
    }

    /// `K·E_i = 2g_i − 2 − e_i`, by adjunction.
    pub fn canonical_degree(&self, i: usize) -> i64 {
        let v = self.vertices[i];
        2 * i64::from(v.genus) - 2 - v.euler
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        let r = self.vertex_count();
        let mut entries = vec![0i64; r * r];
        for i in 0..r {
            for j in 0..r {
                entries[i * r + j] = if i == j {
                    self.vertices[i].euler
                } else {
                    i64::from(self.multiplicity[i][j])
                };
            }
        }
        IntersectionMatrix { dim: r, entries }
    }

    /// Milnor fillable iff the intersection form is negative definite.
    pub fn is_milnor_fillable(&self) -> bool {
        self.intersection_matrix().is_negative_definite()
    }

    /// Relabels vertices: old vertex `i` becomes `perm.image(i)`.
    pub fn relabeled(&self, perm: &VertexPermutation) -> Self {
        assert_eq!(perm.len(), self.vertex_count(), "permutation size mismatch");
        let mut vertices = self.vertices.clone();
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[perm.image(i)] = *v;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm.image(a), perm.image(b)))
            .collect();
        Self::new(vertices, edges).expect("relabeling preserves validity")
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| RawVertex {
                    id: id as i64,
                    genus: i64::from(v.genus),
                    euler: v.euler,
                })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a as i64, b as i64]).collect(),
        }
    }

    /// Parses the JSON graph file format.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: RawGraph = serde_json::from_str(text).map_err(|e| GraphError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        validate_graph(&raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("graph serialization cannot fail")
    }

    /// All weight- and multiplicity-preserving vertex permutations, in
    /// lexicographic order of their image vectors. The identity comes first.
    pub fn automorphism_group(&self) -> Vec<VertexPermutation> {
        let labels: Vec<_> = (0..self.vertex_count())
            .map(|i| (self.vertices[i], self.valency(i)))
            .collect();
        matchings(&labels, &self.multiplicity, &labels, &self.multiplicity, false)
            .into_iter()
            .map(VertexPermutation::from_images_unchecked)
            .collect()
    }
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}:(g={}, e={})", v.genus, v.euler)?;
        }
        write!(f, "]")?;
        for (a, b) in &self.edges {
            write!(f, " {a}-{b}")?;
        }
        Ok(())
    }
}

/// Checks every graph invariant and produces a [`PlumbingGraph`].
pub fn validate_graph(raw: &RawGraph) -> Result<PlumbingGraph, GraphError> {
    let r = raw.vertices.len();
    if r == 0 {
        return Err(GraphError::Empty);
    }
    let mut slots: Vec<Option<Vertex>> = vec![None; r];
    for rv in &raw.vertices {
        if rv.id < 0 || rv.id as usize >= r || slots[rv.id as usize].is_some() {
            return Err(GraphError::NonContiguousIds { id: rv.id });
        }
        if rv.genus < 0 {
            return Err(GraphError::NegativeGenus {
                vertex: rv.id as usize,
                genus: rv.genus,
            });
        }
        let genus = u32::try_from(rv.genus).map_err(|_| GraphError::NegativeGenus {
            vertex: rv.id as usize,
            genus: rv.genus,
        })?;
        slots[rv.id as usize] = Some(Vertex {
            genus,
            euler: rv.euler,
        });
    }
    let vertices: Vec<Vertex> = slots.into_iter().map(|v| v.expect("all ids filled")).collect();

    let mut multiplicity = vec![vec![0u32; r]; r];
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (index, &[a, b]) in raw.edges.iter().enumerate() {
        for end in [a, b] {
            if end < 0 || end as usize >= r {
                return Err(GraphError::UnknownVertex { edge: index, vertex: end });
            }
        }
        if a == b {
            return Err(GraphError::LoopEdge {
                edge: index,
                vertex: a as usize,
            });
        }
        let (a, b) = (a as usize, b as usize);
        multiplicity[a][b] += 1;
        multiplicity[b][a] += 1;
        edges.push((a.min(b), a.max(b)));
    }

    let mut seen = vec![false; r];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..r {
            if multiplicity[i][j] > 0 && !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    if let Some(vertex) = seen.iter().position(|s| !s) {
        return Err(GraphError::Disconnected { vertex });
    }

    Ok(PlumbingGraph {
        vertices,
        edges,
        multiplicity,
    })
}

/// Symmetric integer matrix `I(Γ)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntersectionMatrix {
    /// Builds from rows. Panics on a non-square or asymmetric input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "intersection matrix must be square");
            entries.extend_from_slice(row);
        }
        let m = Self { dim, entries };
        assert!(m.is_symmetric(), "intersection matrix must be symmetric");
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `(I·m)_i`, i.e. `D·E_i` for `D = Σ m_j E_j`.
    pub fn apply(&self, m: &[i64]) -> Vec<i64> {
        assert_eq!(m.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(m).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Simultaneous row/column permutation: entry `(σi, σj)` of the result
    /// is entry `(i, j)` of `self`.
    pub fn permuted(&self, perm: &VertexPermutation) -> Self {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm.image(i) * n + perm.image(j)] = self.get(i, j);
            }
        }
        Self { dim: n, entries }
    }

    /// Exact test via symmetric Gaussian elimination over the rationals.
    ///
    /// A symmetric matrix is negative definite iff elimination without
    /// pivoting meets only strictly negative pivots.
    pub fn is_negative_definite(&self) -> bool {
        let n = self.dim;
        if n == 0 {
            return false;
        }
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        for k in 0..n {
            if !a[k][k].is_negative() {
                return false;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let factor = &a[i][k] / &a[k][k];
                for j in k..n {
                    let delta = &factor * &a[k][j];
                    a[i][j] -= delta;
                }
            }
        }
        true
    }
}

impl fmt::Display for IntersectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub fn intersection_matrix(g: &PlumbingGraph) -> IntersectionMatrix {
    g.intersection_matrix()
}

pub fn is_negative_definite(m: &IntersectionMatrix) -> bool {
    m.is_negative_definite()
}

pub fn is_milnor_fillable(g: &PlumbingGraph) -> bool {
    g.is_milnor_fillable()
}

pub fn valency(g: &PlumbingGraph, i: usize) -> u32 {
    g.valency(i)
}

pub fn canonical_degree(g: &PlumbingGraph, i: usize) -> i64 {
    g.canonical_degree(i)
}

pub fn automorphism_group(g: &PlumbingGraph) -> Vec<VertexPermutation> {
    g.automorphism_group()
}

/// A permutation of vertex ids; `images[i]` is where vertex `i` goes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPermutation {
    images: Vec<usize>,
}

impl VertexPermutation {
    pub fn identity(r: usize) -> Self {
        Self {
            images: (0..r).collect(),
        }
    }

    /// Returns `None` unless `images` is a bijection of `0..len`.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut hit = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut hit[i], true) {
                return None;
            }
        }
        Some(Self { images })
    }

    fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::new(images.clone()).is_some());
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    /// Moves per-vertex data along the permutation: `out[σ(i)] = values[i]`.
    pub fn act<T: Clone>(&self, values: &[T]) -> Vec<T> {
        assert_eq!(values.len(), self.len());
        let mut out = values.to_vec();
        for (i, v) in values.iter().enumerate() {
            out[self.images[i]] = v.clone();
        }
        out
    }

    /// True if the permutation preserves weights and edge multiplicities.
    pub fn is_automorphism_of(&self, g: &PlumbingGraph) -> bool {
        let r = g.vertex_count();
        self.len() == r
            && (0..r).all(|i| {
                g.vertex(i) == g.vertex(self.image(i))
                    && (0..r).all(|j| {
                        g.edge_multiplicity(i, j) == g.edge_multiplicity(self.image(i), self.image(j))
                    })
            })
    }
}

impl fmt::Display for VertexPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// Backtracking search for bijections `a → b` preserving vertex labels and
/// edge multiplicities. Labels act as the pruning classes.
pub(crate) fn matchings<L: PartialEq>(
    a_labels: &[L],
    a_mult: &[Vec<u32>],
    b_labels: &[L],
    b_mult: &[Vec<u32>],
    first_only: bool,
) -> Vec<Vec<usize>> {
    let r = a_labels.len();
    let mut found = Vec::new();
    if b_labels.len() != r {
        return found;
    }
    let mut images = vec![usize::MAX; r];
    let mut used = vec![false; r];
    extend_matching(
        0,
        a_labels,
        a_mult,
        b_labels,
        b_mult,
        &mut images,
        &mut used,
        first_only,
        &mut found,
    );
    found
}

#[allow(clippy::too_many_arguments)]
fn extend_matching<L: PartialEq>(
    depth: usize,
    a_labels: &[L],
    a_mult: &[Vec<u32>],
    b_labels: &[L],
    b_mult: &[Vec<u32>],
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    first_only: bool,
    found: &mut Vec<Vec<usize>>,
) {
    let r = a_labels.len();
    if depth == r {
        found.push(images.clone());
        return;
    }
    for target in 0..r {
        if used[target] || a_labels[depth] != b_labels[target] {
            continue;
        }
        let consistent = (0..depth).all(|prev| a_mult[depth][prev] == b_mult[target][images[prev]]);
        if !consistent {
            continue;
        }
        images[depth] = target;
        used[target] = true;
        extend_matching(
            depth + 1,
            a_labels,
            a_mult,
            b_labels,
            b_mult,
            images,
            used,
            first_only,
            found,
        );
        used[target] = false;
        images[depth] = usize::MAX;
        if first_only && !found.is_empty() {
            return;
        }
    }
}

/// Small named graphs used throughout the tests and docs.
pub mod examples {
    use super::PlumbingGraph;

    pub fn single(genus: u32, euler: i64) -> PlumbingGraph {
        PlumbingGraph::from_weights(&[(genus, euler)], &[]).unwrap()
    }

    /// Chain `0 - 1 - … - (k-1)` of rational curves.
    pub fn chain(eulers: &[i64]) -> PlumbingGraph {
        let weights: Vec<_> = eulers.iter().map(|&e| (0, e)).collect();
        let edges: Vec<_> = (1..eulers.len()).map(|i| (i - 1, i)).collect();
        PlumbingGraph::from_weights(&weights, &edges).unwrap()
    }

    /// Star with center 0 and `legs` single-vertex legs, all `(0, −2)`.
    pub fn star(legs: usize) -> PlumbingGraph {
        let weights = vec![(0, -2); legs + 1];
        let edges: Vec<_> = (1..=legs).map(|i| (0, i)).collect();
        PlumbingGraph::from_weights(&weights, &edges).unwrap()
    }

    pub fn d4() -> PlumbingGraph {
        star(3)
    }

    /// The E8 tree: a chain of seven (−2)-curves with an eighth attached to
    /// the third vertex of the chain. This is the resolution graph of
    /// `z0² + z1³ + z2⁵ = 0`.
    pub fn e8() -> PlumbingGraph {
        let weights = vec![(0, -2); 8];
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
        PlumbingGraph::from_weights(&weights, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn raw(vertices: &[(i64, i64, i64)], edges: &[[i64; 2]]) -> RawGraph {
        RawGraph {
            vertices: vertices
                .iter()
                .map(|&(id, genus, euler)| RawVertex { id, genus, euler })
                .collect(),
            edges: edges.to_vec(),
        }
    }

    #[test]
    fn validation_accepts_single_vertex() {
        let g = validate_graph(&raw(&[(0, 0, -2)], &[])).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn validation_errors_name_the_culprit() {
        assert_eq!(
            validate_graph(&raw(&[(0, 0, -2), (1, 0, -2)], &[[0, 0]])),
            Err(GraphError::LoopEdge { edge: 0, vertex: 0 })
        );
        assert_eq!(
            validate_graph(&raw(&[(0, 0, -2), (1, 0, -2), (2, 0, -2)], &[[0, 1]])),
            Err(GraphError::Disconnected { vertex: 2 })
        );
        assert_eq!(
            validate_graph(&raw(&[(0, -1, -2)], &[])),
            Err(GraphError::NegativeGenus { vertex: 0, genus: -1 })
        );
        assert_eq!(
            validate_graph(&raw(&[(0, 0, -2), (2, 0, -2)], &[[0, 2]])),
            Err(GraphError::NonContiguousIds { id: 2 })
        );
        assert_eq!(
            validate_graph(&raw(&[(0, 0, -2), (0, 0, -2)], &[])),
            Err(GraphError::NonContiguousIds { id: 0 })
        );
        assert_eq!(
            validate_graph(&raw(&[(0, 0, -2)], &[[0, 5]])),
            Err(GraphError::UnknownVertex { edge: 0, vertex: 5 })
        );
        assert_eq!(validate_graph(&raw(&[], &[])), Err(GraphError::Empty));
    }

    #[test]
    fn ids_may_arrive_out_of_order() {
        let g = validate_graph(&raw(&[(1, 1, -3), (0, 0, -2)], &[[1, 0]])).unwrap();
        assert_eq!(g.vertex(0), Vertex { genus: 0, euler: -2 });
        assert_eq!(g.vertex(1), Vertex { genus: 1, euler: -3 });
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn intersection_matrix_examples() {
        assert_eq!(single(0, -2).intersection_matrix().rows(), vec![vec![-2]]);
        assert_eq!(chain(&[-2, -3]).intersection_matrix().rows(), vec![vec![-2, 1], vec![1, -3]]);
        let double = PlumbingGraph::from_weights(&[(0, -3), (0, -3)], &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(double.intersection_matrix().rows(), vec![vec![-3, 2], vec![2, -3]]);
    }

    #[test]
    fn definiteness_examples() {
        assert!(IntersectionMatrix::from_rows(&[vec![-2]]).is_negative_definite());
        assert!(!IntersectionMatrix::from_rows(&[vec![0]]).is_negative_definite());
        assert!(IntersectionMatrix::from_rows(&[vec![-2, 1], vec![1, -2]]).is_negative_definite());
        assert!(!IntersectionMatrix::from_rows(&[vec![-1, 1], vec![1, -1]]).is_negative_definite());
        // leading minor -1 < 0 but det = 1 - 4 < 0
        assert!(!IntersectionMatrix::from_rows(&[vec![-1, 2], vec![2, -1]]).is_negative_definite());
    }

    #[test]
    fn fillability_examples() {
        assert!(single(0, -1).is_milnor_fillable());
        assert!(!single(0, 1).is_milnor_fillable());
        assert!(!single(0, 0).is_milnor_fillable());
        assert!(e8().is_milnor_fillable());
        assert!(d4().is_milnor_fillable());
        // affine E8 (nine -2 curves) is only semidefinite
        let mut weights = vec![(0, -2); 9];
        weights[8] = (0, -2);
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 8)];
        let affine = PlumbingGraph::from_weights(&weights, &edges).unwrap();
        assert!(!affine.is_milnor_fillable());
    }

    #[test]
    fn valency_counts_multiplicity() {
        assert_eq!(single(0, -2).valency(0), 0);
        assert_eq!(chain(&[-2, -2, -2]).valency(1), 2);
        let double = PlumbingGraph::from_weights(&[(0, -3), (0, -3)], &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(double.valency(0), 2);
    }

    #[test]
    fn canonical_degree_examples() {
        assert_eq!(single(0, -2).canonical_degree(0), 0);
        assert_eq!(single(0, -1).canonical_degree(0), -1);
        assert_eq!(single(1, -1).canonical_degree(0), 1);
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(chain(&[-2, -3]).automorphism_group().len(), 1);
        assert_eq!(chain(&[-2, -2]).automorphism_group().len(), 2);
        let group = d4().automorphism_group();
        assert_eq!(group.len(), 6);
        assert!(group[0].is_identity());
        assert!(group.iter().all(|s| s.image(0) == 0));
        assert_eq!(e8().automorphism_group().len(), 1);
    }

    #[test]
    fn json_round_trip_keeps_multi_edges() {
        let g = PlumbingGraph::from_weights(&[(0, -3), (1, -3)], &[(0, 1), (1, 0)]).unwrap();
        let text = g.to_json();
        let back = PlumbingGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.edge_multiplicity(0, 1), 2);
    }

    #[test]
    fn json_parse_error_has_position() {
        let err = PlumbingGraph::from_json("{\n  \"vertices\": [ {\"id\": 0,}\n]}").unwrap_err();
        match err {
            GraphError::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn permutation_algebra() {
        let s = VertexPermutation::new(vec![1, 2, 0]).unwrap();
        let t = VertexPermutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(s.compose(&s.inverse()), VertexPermutation::identity(3));
        assert_eq!(s.compose(&t).images(), &[1, 0, 2]);
        assert_eq!(s.act(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
        assert!(VertexPermutation::new(vec![0, 0]).is_none());
        assert!(VertexPermutation::new(vec![2, 0]).is_none());
    }
}
