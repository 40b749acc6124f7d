//! Open graph states: an undirected graph together with input/output subsets
//! and a measurement label on every non-output vertex.
//!
//! Vertices keep their declaration order; that order fixes every bitmask
//! layout and every tensor ordering downstream, so results are reproducible
//! across runs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Measurement plane of a non-Pauli measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Plane {
    XY,
    XZ,
    YZ,
}

/// Pauli measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Label of a measured qubit: either a free-angle plane or a fixed Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasLabel {
    Plane(Plane),
    Pauli(Axis),
}

impl MeasLabel {
    pub fn is_pauli(&self) -> bool {
        matches!(self, MeasLabel::Pauli(_))
    }

    /// Canonical plane/angle embedding of the label. Pauli axes measure at a
    /// fixed angle: X as (XY, 0), Y as (XY, pi/2), Z as (XZ, 0).
    pub fn plane_angle(&self, free_angle: f64) -> (Plane, f64) {
        match self {
            MeasLabel::Plane(p) => (*p, free_angle),
            MeasLabel::Pauli(Axis::X) => (Plane::XY, 0.0),
            MeasLabel::Pauli(Axis::Y) => (Plane::XY, std::f64::consts::FRAC_PI_2),
            MeasLabel::Pauli(Axis::Z) => (Plane::XZ, 0.0),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            MeasLabel::Plane(Plane::XY) => "XY",
            MeasLabel::Plane(Plane::XZ) => "XZ",
            MeasLabel::Plane(Plane::YZ) => "YZ",
            MeasLabel::Pauli(Axis::X) => "X",
            MeasLabel::Pauli(Axis::Y) => "Y",
            MeasLabel::Pauli(Axis::Z) => "Z",
        }
    }

    pub fn parse(s: &str) -> Option<MeasLabel> {
        Some(match s {
            "XY" => MeasLabel::Plane(Plane::XY),
            "XZ" => MeasLabel::Plane(Plane::XZ),
            "YZ" => MeasLabel::Plane(Plane::YZ),
            "X" => MeasLabel::Pauli(Axis::X),
            "Y" => MeasLabel::Pauli(Axis::Y),
            "Z" => MeasLabel::Pauli(Axis::Z),
        _ => return None,
        })
    }
}

impl fmt::Display for MeasLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Subset of the vertices of one [`OpenGraph`], as a bitmask over the
/// declaration order. Set algebra is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1 << v)
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> VertexSet {
        let mut m = 0u64;
        for v in iter {
            m |= 1 << v;
        }
        VertexSet(m)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn union(&self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(&self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn symmetric_difference(&self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 ^ other.0)
    }

    pub fn is_subset_of(&self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Iterate members in ascending vertex index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge endpoint `{0}` is not a declared vertex")]
    UnknownEndpoint(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),
    #[error("input `{0}` is not a declared vertex")]
    UnknownInput(String),
    #[error("output `{0}` is not a declared vertex")]
    UnknownOutput(String),
    #[error("measured qubit `{0}` has no measurement label")]
    MissingLabel(String),
    #[error("label supplied on output qubit `{0}`")]
    LabelOnOutput(String),
    #[error("label `{1}` on qubit `{0}` is not one of XY, XZ, YZ, X, Y, Z")]
    BadLabel(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graphs are limited to 64 vertices, got {0}")]
    TooManyVertices(usize),
}

/// JSON interchange form of an open graph.
///
/// `{"vertices": [...], "edges": [[u,v],...], "inputs": [...],
///   "outputs": [...], "labels": {"v": "XY"|"XZ"|"YZ"|"X"|"Y"|"Z"}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
}

/// An open graph state `(G, I, O, lambda)`.
///
/// Inputs and outputs may overlap: a qubit is measured iff it is not an
/// output, and prepared iff it is not an input.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Adjacency masks, one per vertex.
    adj: Vec<VertexSet>,
    /// Edge list in declaration order, endpoints as declared.
    edges: Vec<(usize, usize)>,
    inputs: VertexSet,
    outputs: VertexSet,
    labels: Vec<Option<MeasLabel>>,
}

impl OpenGraph {
    /// Validate a graph description and fix the vertex ordering to the
    /// declaration order.
    pub fn build(spec: &GraphSpec) -> Result<OpenGraph, GraphError> {
        if spec.vertices.len() > 64 {
            return Err(GraphError::TooManyVertices(spec.vertices.len()));
        }
        let mut index = BTreeMap::new();
        for (i, name) in spec.vertices.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let n = spec.vertices.len();
        let mut adj = vec![VertexSet::EMPTY; n];
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (a, b) in &spec.edges {
            let ia = *index
                .get(a)
                .ok_or_else(|| GraphError::UnknownEndpoint(a.clone()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| GraphError::UnknownEndpoint(b.clone()))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a.clone()));
            }
            if adj[ia].contains(ib) {
                return Err(GraphError::DuplicateEdge(a.clone(), b.clone()));
            }
            adj[ia].insert(ib);
            adj[ib].insert(ia);
            edges.push((ia, ib));
        }
        let mut inputs = VertexSet::EMPTY;
        for name in &spec.inputs {
            let i = *index
                .get(name)
                .ok_or_else(|| GraphError::UnknownInput(name.clone()))?;
            inputs.insert(i);
        }
        let mut outputs = VertexSet::EMPTY;
        for name in &spec.outputs {
            let i = *index
                .get(name)
                .ok_or_else(|| GraphError::UnknownOutput(name.clone()))?;
            outputs.insert(i);
        }
        let mut labels = vec![None; n];
        for (name, text) in &spec.labels {
            let i = *index
                .get(name)
                .ok_or_else(|| GraphError::UnknownVertex(name.clone()))?;
            if outputs.contains(i) {
                return Err(GraphError::LabelOnOutput(name.clone()));
            }
            let label = MeasLabel::parse(text)
                .ok_or_else(|| GraphError::BadLabel(name.clone(), text.clone()))?;
            labels[i] = Some(label);
        }
        for i in 0..n {
            if !outputs.contains(i) && labels[i].is_none() {
                return Err(GraphError::MissingLabel(spec.vertices[i].clone()));
            }
        }
        Ok(OpenGraph {
            names: spec.vertices.clone(),
            index,
            adj,
            edges,
            inputs,
            outputs,
            labels,
        })
    }

    /// Canonical interchange form: edges sorted lexicographically by name,
    /// endpoints in ascending name order.
    pub fn to_spec(&self) -> GraphSpec {
        let mut edges: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.names[a].clone(), self.names[b].clone());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        edges.sort();
        GraphSpec {
            vertices: self.names.clone(),
            edges,
            inputs: self.inputs.iter().map(|i| self.names[i].clone()).collect(),
            outputs: self.outputs.iter().map(|i| self.names[i].clone()).collect(),
            labels: self
                .labels
                .iter()
                .enumerate()
                .filter_map(|(i, l)| l.map(|l| (self.names[i].clone(), l.as_str().to_string())))
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        if self.names.is_empty() {
            VertexSet::EMPTY
        } else {
            VertexSet(u64::MAX >> (64 - self.names.len()))
        }
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn inputs(&self) -> VertexSet {
        self.inputs
    }

    pub fn outputs(&self) -> VertexSet {
        self.outputs
    }

    /// Measured qubits `O^c`.
    pub fn measured(&self) -> VertexSet {
        self.all_vertices().difference(self.outputs)
    }

    /// Prepared qubits `I^c`.
    pub fn prepared(&self) -> VertexSet {
        self.all_vertices().difference(self.inputs)
    }

    pub fn label(&self, v: usize) -> Option<MeasLabel> {
        self.labels.get(v).copied().flatten()
    }

    pub fn neighborhood(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Edges in declaration order with declared endpoint orientation.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Odd neighborhood of `K`: the vertices adjacent to an odd number of
    /// members of `K`. Linear over symmetric difference because each member
    /// contributes its neighborhood mod 2.
    pub fn odd_neighborhood(&self, k: VertexSet) -> VertexSet {
        let mut odd = VertexSet::EMPTY;
        for v in k.iter() {
            odd = odd.symmetric_difference(self.adj[v]);
        }
        odd
    }

    pub fn mask_names(&self, k: VertexSet) -> Vec<String> {
        k.iter().map(|v| self.names[v].to_string()).collect()
    }
}

/// Convenience constructor used by tests and fixtures.
pub fn graph_from_parts(
    vertices: &[&str],
    edges: &[(&str, &str)],
    inputs: &[&str],
    outputs: &[&str],
    labels: &[(&str, MeasLabel)],
) -> Result<OpenGraph, GraphError> {
    OpenGraph::build(&GraphSpec {
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        edges: edges
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        inputs: inputs.iter().map(|s| s.to_string()).collect(),
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
        labels: labels
            .iter()
            .map(|(v, l)| (v.to_string(), l.as_str().to_string()))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> MeasLabel {
        MeasLabel::Plane(Plane::XY)
    }

    /// The six-vertex path used throughout: a-d-b-e-c-f with inputs a,b,c.
    pub fn path_graph() -> OpenGraph {
        graph_from_parts(
            &["a", "b", "c", "d", "e", "f"],
            &[("a", "d"), ("d", "b"), ("b", "e"), ("e", "c"), ("c", "f")],
            &["a", "b", "c"],
            &["d", "e", "f"],
            &[("a", xy()), ("b", xy()), ("c", xy())],
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_input_output() {
        let g = graph_from_parts(&["v"], &[], &["v"], &["v"], &[]).unwrap();
        assert!(g.measured().is_empty());
        assert!(g.prepared().is_empty());
    }

    #[test]
    fn minimal_measured_graph() {
        let g = graph_from_parts(&["a", "d"], &[("a", "d")], &["a"], &["d"], &[("a", xy())])
            .unwrap();
        assert_eq!(g.measured().len(), 1);
        assert_eq!(g.neighborhood(0), VertexSet::singleton(1));
    }

    #[test]
    fn path_graph_builds() {
        let g = path_graph();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edges().len(), 5);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            graph_from_parts(&["a", "a"], &[], &[], &[], &[]),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            graph_from_parts(&["a"], &[("a", "b")], &[], &["a"], &[]),
            Err(GraphError::UnknownEndpoint(_))
        ));
        // label missing on a measured qubit
        assert!(matches!(
            graph_from_parts(&["a", "b"], &[("a", "b")], &["a"], &["b"], &[]),
            Err(GraphError::MissingLabel(_))
        ));
        // label supplied on an output
        let res = OpenGraph::build(&GraphSpec {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![("a".into(), "b".into())],
            inputs: vec!["a".into()],
            outputs: vec!["b".into()],
            labels: [("a".into(), "XY".into()), ("b".into(), "XY".into())]
                .into_iter()
                .collect(),
        });
        assert!(matches!(res, Err(GraphError::LabelOnOutput(_))));
    }

    #[test]
    fn odd_neighborhood_basics() {
        let g = path_graph();
        assert_eq!(g.odd_neighborhood(VertexSet::EMPTY), VertexSet::EMPTY);
        // singleton collapses to the neighborhood
        let d = g.lookup("d").unwrap();
        assert_eq!(g.odd_neighborhood(VertexSet::singleton(d)), g.neighborhood(d));
        // frozen from counting neighbors on the declared edge list: Odd({d}) = {a, b}
        let expect = VertexSet::from_iter([g.lookup("a").unwrap(), g.lookup("b").unwrap()]);
        assert_eq!(g.odd_neighborhood(VertexSet::singleton(d)), expect);
    }

    /// Definitional oracle: count incident edges into K per vertex.
    fn odd_by_counting(g: &OpenGraph, k: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for u in 0..g.vertex_count() {
            let deg = g.neighborhood(u).intersection(k).len();
            if deg % 2 == 1 {
                out.insert(u);
            }
        }
        out
    }

    #[test]
    fn odd_neighborhood_matches_counting_oracle() {
        let g = path_graph();
        for k in 0..(1u64 << 6) {
            let k = VertexSet(k);
            assert_eq!(g.odd_neighborhood(k), odd_by_counting(&g, k));
        }
    }

    #[test]
    fn canonical_spec_sorts_edges() {
        let g = path_graph();
        let spec = g.to_spec();
        let mut sorted = spec.edges.clone();
        sorted.sort();
        assert_eq!(spec.edges, sorted);
        // round-trip preserves the graph
        let g2 = OpenGraph::build(&spec).unwrap();
        assert_eq!(g2.measured(), g.measured());
        for v in 0..6 {
            assert_eq!(g2.neighborhood(v), g.neighborhood(v));
        }
    }
}
