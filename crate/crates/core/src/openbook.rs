//! Decorated link graphs and the canonical open book pipeline.

use serde::Serialize;

use crate::divisor::{
    binding_multiplicities, check_theorem_conditions, minimal_divisor, Divisor, MultiplicityVector,
};
use crate::error::OpenBookError;
use crate::graph::{matchings, PlumbingGraph, Vertex};

/// A plumbing graph with `n_i` arrowheads (binding circles) at vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedLinkGraph {
    base: PlumbingGraph,
    arrowheads: Vec<u64>,
}

impl DecoratedLinkGraph {
    pub fn base(&self) -> &PlumbingGraph {
        &self.base
    }

    pub fn arrowheads(&self) -> &[u64] {
        &self.arrowheads
    }

    pub fn binding_components(&self) -> u64 {
        self.arrowheads.iter().sum()
    }

    /// Vertices without arrowheads. With any such vertex the decorated graph
    /// need not determine the open book up to isomorphism.
    pub fn bare_vertices(&self) -> Vec<usize> {
        (0..self.arrowheads.len()).filter(|&i| self.arrowheads[i] == 0).collect()
    }

    fn labels(&self) -> Vec<(Vertex, u32, u64)> {
        (0..self.base.vertex_count())
            .map(|i| (self.base.vertex(i), self.base.valency(i), self.arrowheads[i]))
            .collect()
    }

    fn multiplicities(&self) -> Vec<Vec<u32>> {
        let r = self.base.vertex_count();
        (0..r)
            .map(|i| (0..r).map(|j| self.base.edge_multiplicity(i, j)).collect())
            .collect()
    }

    /// Graphviz description with `(genus, euler, arrows)` vertex labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph decorated_link {\n");
        for (i, v) in self.base.vertices().iter().enumerate() {
            out.push_str(&format!(
                "  v{i} [label=\"({}, {}, {})\"];\n",
                v.genus, v.euler, self.arrowheads[i]
            ));
        }
        for &(a, b) in self.base.edges() {
            out.push_str(&format!("  v{a} -- v{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Attaches `n_i` arrowheads to each vertex.
pub fn decorate(g: &PlumbingGraph, n: &MultiplicityVector) -> Result<DecoratedLinkGraph, OpenBookError> {
    if n.len() != g.vertex_count() {
        return Err(OpenBookError::DimensionMismatch {
            expected: g.vertex_count(),
            found: n.len(),
        });
    }
    if let Some((vertex, &count)) = n.counts().iter().enumerate().find(|(_, &c)| c < 0) {
        return Err(OpenBookError::NegativeCount { vertex, count });
    }
    if n.counts().iter().all(|&c| c == 0) {
        return Err(OpenBookError::AllZero);
    }
    Ok(DecoratedLinkGraph {
        base: g.clone(),
        arrowheads: n.counts().iter().map(|&c| c as u64).collect(),
    })
}

/// True iff a vertex bijection preserves genus, Euler weight, edge
/// multiplicities and arrowhead counts.
pub fn decorated_isomorphic(a: &DecoratedLinkGraph, b: &DecoratedLinkGraph) -> bool {
    let (la, lb) = (a.labels(), b.labels());
    let mut sa = la.clone();
    let mut sb = lb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    !matchings(&la, &a.multiplicities(), &lb, &b.multiplicities(), true).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSummary {
    pub vertex: usize,
    pub valency: u32,
    pub genus: u32,
    pub euler: i64,
    pub multiplicity: u64,
    pub arrows: i64,
    pub slack: i64,
}

/// Everything the canonical open book pipeline certifies about a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBookReport {
    pub graph: DecoratedLinkGraph,
    pub divisor: Divisor,
    pub multiplicities: MultiplicityVector,
    pub binding_components: u64,
    pub per_vertex: Vec<VertexSummary>,
    pub fillable: bool,
    pub aut_invariant: bool,
    pub automorphism_count: usize,
    /// Every `n_i ≥ 1`, so the decorated graph determines the horizontal
    /// open book with this binding up to isomorphism.
    pub determined_by_decoration: bool,
}

/// fillability → least divisor → `n_i` → arrowheads → symmetry check.
pub fn ubiquitous_open_book(g: &PlumbingGraph) -> Result<OpenBookReport, OpenBookError> {
    if !g.is_milnor_fillable() {
        return Err(OpenBookError::NotMilnorFillable);
    }
    let divisor = minimal_divisor(g)?;
    let multiplicities = binding_multiplicities(g, &divisor)?;
    let certificate = check_theorem_conditions(g, &divisor)?;
    let graph = decorate(g, &multiplicities)?;
    let automorphism_count = g.automorphism_group().len();
    let per_vertex = (0..g.vertex_count())
        .map(|i| VertexSummary {
            vertex: i,
            valency: g.valency(i),
            genus: g.vertex(i).genus,
            euler: g.vertex(i).euler,
            multiplicity: divisor.multiplicities()[i],
            arrows: multiplicities.counts()[i],
            slack: certificate.slack[i],
        })
        .collect();
    Ok(OpenBookReport {
        binding_components: graph.binding_components(),
        determined_by_decoration: graph.bare_vertices().is_empty(),
        graph,
        divisor,
        multiplicities,
        per_vertex,
        fillable: true,
        aut_invariant: certificate.aut_invariant,
        automorphism_count,
    })
}
