//! Correction structures and the flow / generalized-flow / Pauli-flow
//! condition checkers.
//!
//! A correction structure assigns each measured qubit a correcting set and
//! carries a strict partial order. Verification checks the defining
//! conditions (F1-F3, G1-G5, P1-P9) and additionally that the correction
//! targets admit an execution schedule: the digraph with an arc `i -> j` for
//! every correction target `j` of `i`, merged with the order, must be
//! acyclic. Without that check a structure can satisfy the letter of the
//! conditions while its compiled pattern would have to correct a qubit that
//! was already measured.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Axis, MeasLabel, OpenGraph, Plane, VertexSet};
use crate::order::{depth_of, OrderError, PartialOrder};

/// Which family of conditions a structure claims to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowKind {
    Flow,
    GFlow,
    #[serde(rename = "pauli")]
    PauliFlow,
}

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("correcting-set domain must be exactly the measured qubits; `{0}` is {1}")]
    BadDomain(String, &'static str),
    #[error("correcting set of `{0}` contains input `{1}`")]
    InputInCorrectingSet(String, String),
    #[error("flow structures need singleton correcting sets; `{0}` has {1} members")]
    NotSingleton(String, usize),
    #[error("unknown vertex `{0}` in structure")]
    UnknownVertex(String),
    #[error("flow undefined for non-XY labels (qubit `{0}` is {1})")]
    NonXyLabel(String, MeasLabel),
    #[error("Pauli label on `{0}`: use verify_pauli_flow for mixed Pauli/plane labels")]
    PauliLabelPresent(String),
    #[error("structure kind is {0:?}, expected {1:?}")]
    KindMismatch(FlowKind, FlowKind),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// JSON interchange form of a correction structure. The order is given
/// either as layers (product order) or as explicit relation pairs; both are
/// merged when present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureSpec {
    pub kind: FlowKind,
    pub corr: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layers: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<(String, String)>,
}

/// A correcting-set map plus a strict partial order, bound to a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionStructure {
    pub kind: FlowKind,
    corr: Vec<Option<VertexSet>>,
    pub order: PartialOrder,
}

impl CorrectionStructure {
    /// Bind and validate: the domain must be exactly `O^c`, every correcting
    /// set must avoid the inputs, and flow-kind sets must be singletons.
    pub fn build(
        g: &OpenGraph,
        kind: FlowKind,
        corr: &BTreeMap<usize, VertexSet>,
        order: PartialOrder,
    ) -> Result<CorrectionStructure, FlowError> {
        let n = g.vertex_count();
        let mut table = vec![None; n];
        for (&i, &set) in corr {
            if i >= n {
                return Err(FlowError::UnknownVertex(i.to_string()));
            }
            if g.outputs().contains(i) {
                return Err(FlowError::BadDomain(g.name(i).into(), "an output"));
            }
            for j in set.intersection(g.inputs()).iter() {
                return Err(FlowError::InputInCorrectingSet(
                    g.name(i).into(),
                    g.name(j).into(),
                ));
            }
            if kind == FlowKind::Flow && set.len() != 1 {
                return Err(FlowError::NotSingleton(g.name(i).into(), set.len()));
            }
            table[i] = Some(set);
        }
        for i in g.measured().iter() {
            if table[i].is_none() {
                return Err(FlowError::BadDomain(g.name(i).into(), "missing"));
            }
        }
        Ok(CorrectionStructure {
            kind,
            corr: table,
            order,
        })
    }

    pub fn from_spec(g: &OpenGraph, spec: &StructureSpec) -> Result<CorrectionStructure, FlowError> {
        let resolve = |name: &str| {
            g.lookup(name)
                .ok_or_else(|| FlowError::UnknownVertex(name.to_string()))
        };
        let mut corr = BTreeMap::new();
        for (i, set) in &spec.corr {
            let i = resolve(i)?;
            let mut mask = VertexSet::EMPTY;
            for j in set {
                mask.insert(resolve(j)?);
            }
            corr.insert(i, mask);
        }
        let mut layers = Vec::new();
        for layer in &spec.layers {
            layers.push(layer.iter().map(|v| resolve(v)).collect::<Result<Vec<_>, _>>()?);
        }
        let mut order = PartialOrder::from_layers(g.vertex_count(), &layers)?;
        if !spec.relations.is_empty() {
            let rel = spec
                .relations
                .iter()
                .map(|(a, b)| Ok((resolve(a)?, resolve(b)?)))
                .collect::<Result<Vec<_>, FlowError>>()?;
            order = order.merged_with(&rel)?;
        }
        Self::build(g, spec.kind, &corr, order)
    }

    pub fn to_spec(&self, g: &OpenGraph) -> StructureSpec {
        StructureSpec {
            kind: self.kind,
            corr: self
                .corr
                .iter()
                .enumerate()
                .filter_map(|(i, set)| set.map(|s| (g.name(i).to_string(), g.mask_names(s))))
                .collect(),
            layers: self
                .order
                .coarsest_layers()
                .iter()
                .map(|layer| layer.iter().map(|&v| g.name(v).to_string()).collect())
                .collect(),
            relations: Vec::new(),
        }
    }

    /// Correcting set of a measured qubit.
    pub fn correcting_set(&self, i: usize) -> Option<VertexSet> {
        self.corr.get(i).copied().flatten()
    }

    pub fn measured_domain(&self) -> impl Iterator<Item = (usize, VertexSet)> + '_ {
        self.corr
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|s| (i, s)))
    }

    /// Same sets under a different kind tag (flow structures are gflow
    /// structures, plane gflow structures are Pauli-flow structures).
    pub fn with_kind(&self, kind: FlowKind) -> CorrectionStructure {
        CorrectionStructure {
            kind,
            corr: self.corr.clone(),
            order: self.order.clone(),
        }
    }
}

/// Identifier of a violated condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cond {
    F1,
    F2,
    F3,
    G1,
    G2,
    G3,
    G4,
    G5,
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    #[serde(rename = "RUN")]
    Run,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Cond,
    pub vertex: String,
    pub explanation: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<Violation>) -> VerificationReport {
        VerificationReport {
            valid: violations.is_empty(),
            violations,
        }
    }
}

fn violation(g: &OpenGraph, condition: Cond, vertex: usize, explanation: String) -> Violation {
    Violation {
        condition,
        vertex: g.name(vertex).to_string(),
        explanation,
    }
}

/// Check F1-F3 for a flow structure. Labels must all be XY.
pub fn verify_flow(g: &OpenGraph, s: &CorrectionStructure) -> Result<VerificationReport, FlowError> {
    if s.kind != FlowKind::Flow {
        return Err(FlowError::KindMismatch(s.kind, FlowKind::Flow));
    }
    for i in g.measured().iter() {
        match g.label(i) {
            Some(MeasLabel::Plane(Plane::XY)) => {}
            Some(l) => return Err(FlowError::NonXyLabel(g.name(i).into(), l)),
            None => unreachable!("measured qubits are labeled"),
        }
    }
    let mut violations = Vec::new();
    for (i, set) in s.measured_domain() {
        let fi = set.iter().next().expect("singleton checked at build");
        if !g.adjacent(i, fi) {
            violations.push(violation(
                g,
                Cond::F1,
                i,
                format!("f({}) = {} is not a neighbor", g.name(i), g.name(fi)),
            ));
        }
        if !s.order.less(i, fi) {
            violations.push(violation(
                g,
                Cond::F2,
                i,
                format!("{} < f({}) = {} does not hold", g.name(i), g.name(i), g.name(fi)),
            ));
        }
        for k in g.neighborhood(fi).iter() {
            if k != i && !s.order.less(i, k) {
                violations.push(violation(
                    g,
                    Cond::F3,
                    i,
                    format!(
                        "{} < {} required (neighbor of f({}) = {})",
                        g.name(i),
                        g.name(k),
                        g.name(i),
                        g.name(fi)
                    ),
                ));
            }
        }
    }
    Ok(VerificationReport::from_violations(violations))
}

/// The arcs a compiled pattern needs honored: `i` before each of its
/// correction targets. `absorbed` decides which targets are dropped by the
/// Pauli-measurement absorption rules instead of being emitted.
fn runnability_violations(
    g: &OpenGraph,
    s: &CorrectionStructure,
    absorbed: impl Fn(usize, usize) -> bool,
) -> Vec<Violation> {
    let mut arcs = Vec::new();
    for (i, set) in s.measured_domain() {
        let targets = set.union(g.odd_neighborhood(set));
        for j in targets.iter() {
            if j != i && !absorbed(i, j) {
                arcs.push((i, j));
            }
        }
    }
    match s.order.merged_with(&arcs) {
        Ok(_) => Vec::new(),
        Err(OrderError::Cycle(v)) => vec![violation(
            g,
            Cond::Run,
            v,
            "correction targets and order form a cycle; no execution schedule exists".into(),
        )],
        Err(e) => vec![violation(g, Cond::Run, 0, e.to_string())],
    }
}

/// Check G1-G5 plus schedulability for a generalized-flow structure.
/// Plane labels only; Pauli labels belong to `verify_pauli_flow`.
pub fn verify_gflow(g: &OpenGraph, s: &CorrectionStructure) -> Result<VerificationReport, FlowError> {
    if s.kind != FlowKind::GFlow {
        return Err(FlowError::KindMismatch(s.kind, FlowKind::GFlow));
    }
    for i in g.measured().iter() {
        if g.label(i).is_some_and(|l| l.is_pauli()) {
            return Err(FlowError::PauliLabelPresent(g.name(i).into()));
        }
    }
    let mut violations = Vec::new();
    for (i, set) in s.measured_domain() {
        let odd = g.odd_neighborhood(set);
        for j in set.iter() {
            if j != i && !s.order.less(i, j) {
                violations.push(violation(
                    g,
                    Cond::G1,
                    i,
                    format!("{} in g({}) but {} < {} fails", g.name(j), g.name(i), g.name(i), g.name(j)),
                ));
            }
        }
        for j in odd.iter() {
            if j != i && s.order.less(j, i) {
                violations.push(violation(
                    g,
                    Cond::G2,
                    i,
                    format!("{} <= {} lies in Odd(g({}))", g.name(j), g.name(i), g.name(i)),
                ));
            }
        }
        let (cond, in_set, in_odd) = match g.label(i) {
            Some(MeasLabel::Plane(Plane::XY)) => (Cond::G3, false, true),
            Some(MeasLabel::Plane(Plane::XZ)) => (Cond::G4, true, true),
            Some(MeasLabel::Plane(Plane::YZ)) => (Cond::G5, true, false),
            _ => unreachable!("plane labels checked above"),
        };
        if set.contains(i) != in_set || odd.contains(i) != in_odd {
            violations.push(violation(
                g,
                cond,
                i,
                format!(
                    "{} measured {}: need i{}g(i) and i{}Odd(g(i)); got i{}g(i), i{}Odd(g(i))",
                    g.name(i),
                    g.label(i).unwrap(),
                    if in_set { " in " } else { " not in " },
                    if in_odd { " in " } else { " not in " },
                    if set.contains(i) { " in " } else { " not in " },
                    if odd.contains(i) { " in " } else { " not in " },
                ),
            ));
        }
    }
    violations.extend(runnability_violations(g, s, |_, _| false));
    Ok(VerificationReport::from_violations(violations))
}

/// Component of the stabilizer correction landing on target `j`, and whether
/// one of the absorption rules `M^X X = M^X`, `M^Y Y = M^Y`, `M^Z Z = M^Z`
/// swallows it.
fn absorbable(g: &OpenGraph, j: usize, in_set: bool, in_odd: bool) -> bool {
    match (g.label(j), in_set, in_odd) {
        (Some(MeasLabel::Pauli(Axis::X)), true, false) => true,
        (Some(MeasLabel::Pauli(Axis::Y)), true, true) => true,
        (Some(MeasLabel::Pauli(Axis::Z)), false, true) => true,
        _ => false,
    }
}

/// Check P1-P9 plus schedulability restricted to non-absorbed corrections.
pub fn verify_pauli_flow(
    g: &OpenGraph,
    s: &CorrectionStructure,
) -> Result<VerificationReport, FlowError> {
    if s.kind != FlowKind::PauliFlow {
        return Err(FlowError::KindMismatch(s.kind, FlowKind::PauliFlow));
    }
    let mut violations = Vec::new();
    for (i, set) in s.measured_domain() {
        let odd = g.odd_neighborhood(set);
        for j in set.iter() {
            let lj = g.label(j);
            let xy_pauli = matches!(
                lj,
                Some(MeasLabel::Pauli(Axis::X)) | Some(MeasLabel::Pauli(Axis::Y))
            );
            if j != i && !xy_pauli && !s.order.less(i, j) {
                violations.push(violation(
                    g,
                    Cond::P1,
                    i,
                    format!("{} in p({}) is not X/Y-measured and not after {}", g.name(j), g.name(i), g.name(i)),
                ));
            }
            if j != i
                && s.order.less(j, i)
                && lj == Some(MeasLabel::Pauli(Axis::Y))
                && !odd.contains(j)
            {
                violations.push(violation(
                    g,
                    Cond::P3,
                    i,
                    format!("past Y-measured {} in p({}) must lie in Odd(p({}))", g.name(j), g.name(i), g.name(i)),
                ));
            }
        }
        for j in odd.iter() {
            let lj = g.label(j);
            let yz_pauli = matches!(
                lj,
                Some(MeasLabel::Pauli(Axis::Y)) | Some(MeasLabel::Pauli(Axis::Z))
            );
            if j != i && s.order.less(j, i) && !yz_pauli {
                violations.push(violation(
                    g,
                    Cond::P2,
                    i,
                    format!("{} <= {} lies in Odd(p({})) and is not Y/Z-measured", g.name(j), g.name(i), g.name(i)),
                ));
            }
        }
        let in_set = set.contains(i);
        let in_odd = odd.contains(i);
        let bad = |cond: Cond, msg: &str| violation(g, cond, i, format!("{} {}", g.name(i), msg));
        match g.label(i).expect("measured qubits are labeled") {
            MeasLabel::Plane(Plane::XY) => {
                if in_set || !in_odd {
                    violations.push(bad(Cond::P4, "is XY-measured: need i not in p(i), i in Odd(p(i))"));
                }
            }
            MeasLabel::Plane(Plane::XZ) => {
                if !in_set || !in_odd {
                    violations.push(bad(Cond::P5, "is XZ-measured: need i in p(i) and i in Odd(p(i))"));
                }
            }
            MeasLabel::Plane(Plane::YZ) => {
                if !in_set || in_odd {
                    violations.push(bad(Cond::P6, "is YZ-measured: need i in p(i), i not in Odd(p(i))"));
                }
            }
            MeasLabel::Pauli(Axis::X) => {
                if !in_odd {
                    violations.push(bad(Cond::P7, "is X-measured: need i in Odd(p(i))"));
                }
            }
            MeasLabel::Pauli(Axis::Z) => {
                if !in_set {
                    violations.push(bad(Cond::P8, "is Z-measured: need i in p(i)"));
                }
            }
            MeasLabel::Pauli(Axis::Y) => {
                if !(in_set ^ in_odd) {
                    violations.push(bad(
                        Cond::P9,
                        "is Y-measured: need exactly one of i in p(i), i in Odd(p(i))",
                    ));
                }
            }
        }
    }
    violations.extend(runnability_violations(g, s, |i, j| {
        let set = s.correcting_set(i).unwrap();
        let odd = g.odd_neighborhood(set);
        absorbable(g, j, set.contains(j), odd.contains(j))
    }));
    Ok(VerificationReport::from_violations(violations))
}

/// Verify a structure against the checker matching its kind tag.
pub fn verify(g: &OpenGraph, s: &CorrectionStructure) -> Result<VerificationReport, FlowError> {
    match s.kind {
        FlowKind::Flow => verify_flow(g, s),
        FlowKind::GFlow => verify_gflow(g, s),
        FlowKind::PauliFlow => verify_pauli_flow(g, s),
    }
}

/// Depth of the structure's order: total coarsest layers, and layers holding
/// at least one measured qubit.
pub fn depth_metrics(g: &OpenGraph, s: &CorrectionStructure) -> (usize, usize) {
    depth_of(&s.order, g.measured())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_parts;

    fn xy() -> MeasLabel {
        MeasLabel::Plane(Plane::XY)
    }

    fn path_graph() -> OpenGraph {
        graph_from_parts(
            &["a", "b", "c", "d", "e", "f"],
            &[("a", "d"), ("d", "b"), ("b", "e"), ("e", "c"), ("c", "f")],
            &["a", "b", "c"],
            &["d", "e", "f"],
            &[("a", xy()), ("b", xy()), ("c", xy())],
        )
        .unwrap()
    }

    fn path_flow(g: &OpenGraph, order: PartialOrder) -> CorrectionStructure {
        let m = |v: &str| g.lookup(v).unwrap();
        let corr: BTreeMap<usize, VertexSet> = [
            (m("a"), VertexSet::singleton(m("d"))),
            (m("b"), VertexSet::singleton(m("e"))),
            (m("c"), VertexSet::singleton(m("f"))),
        ]
        .into_iter()
        .collect();
        CorrectionStructure::build(g, FlowKind::Flow, &corr, order).unwrap()
    }

    #[test]
    fn path_flow_valid_with_caption_layers() {
        let g = path_graph();
        let m = |v: &str| g.lookup(v).unwrap();
        let order = PartialOrder::from_layers(
            6,
            &[
                vec![m("a")],
                vec![m("b"), m("d")],
                vec![m("e"), m("c")],
                vec![m("f")],
            ],
        )
        .unwrap();
        let s = path_flow(&g, order);
        let report = verify_flow(&g, &s).unwrap();
        assert!(report.valid, "{:?}", report.violations);
    }

    #[test]
    fn path_flow_invalid_under_empty_order() {
        let g = path_graph();
        let s = path_flow(&g, PartialOrder::empty(6));
        let report = verify_flow(&g, &s).unwrap();
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == Cond::F2 && v.vertex == "a"));
    }

    #[test]
    fn all_outputs_vacuously_valid() {
        let g = graph_from_parts(&["u", "v"], &[("u", "v")], &["u", "v"], &["u", "v"], &[]).unwrap();
        let s =
            CorrectionStructure::build(&g, FlowKind::Flow, &BTreeMap::new(), PartialOrder::empty(2))
                .unwrap();
        assert!(verify_flow(&g, &s).unwrap().valid);
        assert!(verify_gflow(&g, &s.with_kind(FlowKind::GFlow)).unwrap().valid);
        assert!(verify_pauli_flow(&g, &s.with_kind(FlowKind::PauliFlow)).unwrap().valid);
    }

    #[test]
    fn flow_rejects_non_xy_labels() {
        let g = graph_from_parts(
            &["a", "d"],
            &[("a", "d")],
            &["a"],
            &["d"],
            &[("a", MeasLabel::Plane(Plane::XZ))],
        )
        .unwrap();
        let corr = [(0usize, VertexSet::singleton(1))].into_iter().collect();
        let s = CorrectionStructure::build(
            &g,
            FlowKind::Flow,
            &corr,
            PartialOrder::from_relations(2, &[(0, 1)]).unwrap(),
        )
        .unwrap();
        assert!(matches!(verify_flow(&g, &s), Err(FlowError::NonXyLabel(..))));
    }

    #[test]
    fn structure_build_rejects_inputs_in_sets() {
        let g = path_graph();
        let m = |v: &str| g.lookup(v).unwrap();
        let corr: BTreeMap<usize, VertexSet> = [
            (m("a"), VertexSet::singleton(m("b"))), // b is an input
            (m("b"), VertexSet::singleton(m("e"))),
            (m("c"), VertexSet::singleton(m("f"))),
        ]
        .into_iter()
        .collect();
        assert!(matches!(
            CorrectionStructure::build(&g, FlowKind::Flow, &corr, PartialOrder::empty(6)),
            Err(FlowError::InputInCorrectingSet(..))
        ));
    }

    #[test]
    fn flow_reinterpreted_as_gflow_stays_valid() {
        let g = path_graph();
        let m = |v: &str| g.lookup(v).unwrap();
        let order = PartialOrder::from_layers(
            6,
            &[
                vec![m("a")],
                vec![m("b"), m("d")],
                vec![m("e"), m("c")],
                vec![m("f")],
            ],
        )
        .unwrap();
        let s = path_flow(&g, order).with_kind(FlowKind::GFlow);
        assert!(verify_gflow(&g, &s).unwrap().valid);
        // and further weakened to a Pauli-flow claim
        assert!(verify_pauli_flow(&g, &s.with_kind(FlowKind::PauliFlow)).unwrap().valid);
    }

    #[test]
    fn gflow_directs_pauli_labels_elsewhere() {
        let g = graph_from_parts(
            &["a", "d"],
            &[("a", "d")],
            &["a"],
            &["d"],
            &[("a", MeasLabel::Pauli(Axis::X))],
        )
        .unwrap();
        let corr = [(0usize, VertexSet::singleton(1))].into_iter().collect();
        let s = CorrectionStructure::build(
            &g,
            FlowKind::GFlow,
            &corr,
            PartialOrder::from_relations(2, &[(0, 1)]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            verify_gflow(&g, &s),
            Err(FlowError::PauliLabelPresent(_))
        ));
    }

    #[test]
    fn pauli_flow_empty_set_violates_p7() {
        // X-measured qubit with p(i) = {} has empty odd neighborhood
        let g = graph_from_parts(
            &["a", "d"],
            &[("a", "d")],
            &[],
            &["d"],
            &[("a", MeasLabel::Pauli(Axis::X))],
        )
        .unwrap();
        let corr = [(0usize, VertexSet::EMPTY)].into_iter().collect();
        let s = CorrectionStructure::build(
            &g,
            FlowKind::PauliFlow,
            &corr,
            PartialOrder::from_relations(2, &[(0, 1)]).unwrap(),
        )
        .unwrap();
        let report = verify_pauli_flow(&g, &s).unwrap();
        assert!(!report.valid);
        assert!(report.violations.iter().any(|v| v.condition == Cond::P7));
    }

    #[test]
    fn pauli_z_self_membership() {
        // single edge a-d, lambda(a) = Z, p(a) = {a}: P8 satisfied
        let g = graph_from_parts(
            &["a", "d"],
            &[("a", "d")],
            &[],
            &["d"],
            &[("a", MeasLabel::Pauli(Axis::Z))],
        )
        .unwrap();
        let corr = [(0usize, VertexSet::singleton(0))].into_iter().collect();
        let s = CorrectionStructure::build(
            &g,
            FlowKind::PauliFlow,
            &corr,
            PartialOrder::from_relations(2, &[(0, 1)]).unwrap(),
        )
        .unwrap();
        let report = verify_pauli_flow(&g, &s).unwrap();
        assert!(report.valid, "{:?}", report.violations);
    }

    #[test]
    fn runnability_cycle_detected() {
        // two XY-measured qubits whose correcting sets put each other in the
        // odd neighborhood with no usable order: the closed 4-cycle
        // a-d-b-e-a gives Odd({d}) = {a,b} and Odd({e}) = {a,b}
        let g = graph_from_parts(
            &["a", "b", "d", "e"],
            &[("a", "d"), ("d", "b"), ("b", "e"), ("e", "a")],
            &["a", "b"],
            &["d", "e"],
            &[("a", xy()), ("b", xy())],
        )
        .unwrap();
        let m = |v: &str| g.lookup(v).unwrap();
        let corr: BTreeMap<usize, VertexSet> = [
            (m("a"), VertexSet::singleton(m("d"))),
            (m("b"), VertexSet::singleton(m("e"))),
        ]
        .into_iter()
        .collect();
        let order = PartialOrder::from_layers(4, &[vec![m("a"), m("b")], vec![m("d"), m("e")]])
            .unwrap();
        let s = CorrectionStructure::build(&g, FlowKind::GFlow, &corr, order).unwrap();
        let report = verify_gflow(&g, &s).unwrap();
        assert!(!report.valid);
        assert!(report.violations.iter().any(|v| v.condition == Cond::Run));
    }

    #[test]
    fn structure_spec_round_trip() {
        let g = path_graph();
        let m = |v: &str| g.lookup(v).unwrap();
        let order = PartialOrder::from_layers(
            6,
            &[vec![m("a")], vec![m("b"), m("d")], vec![m("e"), m("c")], vec![m("f")]],
        )
        .unwrap();
        let s = path_flow(&g, order);
        let spec = s.to_spec(&g);
        let json = serde_json::to_string(&spec).unwrap();
        let back: StructureSpec = serde_json::from_str(&json).unwrap();
        let s2 = CorrectionStructure::from_spec(&g, &back).unwrap();
        assert!(verify_flow(&g, &s2).unwrap().valid);
        assert_eq!(s2.correcting_set(m("a")), s.correcting_set(m("a")));
    }
}
