//! Compile a verified correction structure into a deterministic measurement
//! pattern, and compute the unitary embedding the pattern realizes.
//!
//! Per measured qubit `i` the emitted corrections are the stabilizer product
//! of the correcting set with the self-components consumed by the
//! measurement: X on `corr(i) \ {i}`, Z on `Odd(corr(i)) \ {i}`, every
//! target scheduled strictly after `i`. For Pauli flows, components landing
//! on suitably Pauli-measured qubits are never emitted (the measurement
//! absorbs them).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::flow::{
    verify_flow, verify_gflow, verify_pauli_flow, CorrectionStructure, FlowError, FlowKind,
    VerificationReport,
};
use crate::graph::{Axis, MeasLabel, OpenGraph, VertexSet};
use crate::linalg::CMat;
use crate::order::OrderError;
use crate::pattern::{Angle, Command, MeasureCmd, Pattern, PatternError, Signals};
use crate::sim::{graph_state_columns, measurement_bra};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("structure fails verification: {0:?}")]
    InvalidStructure(Vec<String>),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("no angle assigned to measured qubit `{0}`")]
    MissingAngle(String),
    #[error("angle for `{0}` is symbolic; bind it before numeric use")]
    SymbolicAngle(String),
    #[error("projection annihilates every input state (zero map)")]
    ZeroMap,
}

fn invalid(report: &VerificationReport) -> SynthError {
    SynthError::InvalidStructure(
        report
            .violations
            .iter()
            .map(|v| format!("{:?} at {}: {}", v.condition, v.vertex, v.explanation))
            .collect(),
    )
}

/// Measurement angles for the measured qubits. Pauli labels override any
/// assigned angle with their fixed embedding.
#[derive(Debug, Clone, Default)]
pub struct AngleAssignment {
    map: BTreeMap<usize, Angle>,
}

impl AngleAssignment {
    pub fn new() -> AngleAssignment {
        AngleAssignment::default()
    }

    pub fn set(&mut self, qubit: usize, angle: Angle) {
        self.map.insert(qubit, angle);
    }

    pub fn from_named(g: &OpenGraph, pairs: &[(&str, Angle)]) -> Result<AngleAssignment, SynthError> {
        let mut out = AngleAssignment::new();
        for (name, angle) in pairs {
            let q = g
                .lookup(name)
                .ok_or_else(|| SynthError::MissingAngle((*name).to_string()))?;
            out.set(q, angle.clone());
        }
        Ok(out)
    }

    /// Constant angle on every free (plane-labeled) measured qubit.
    pub fn uniform(g: &OpenGraph, angle: f64) -> AngleAssignment {
        let mut out = AngleAssignment::new();
        for i in g.measured().iter() {
            out.set(i, Angle::Num(angle));
        }
        out
    }

    /// The effective angle of qubit `i`: the canonical fixed angle for Pauli
    /// labels, the assigned angle otherwise.
    pub fn angle_at(&self, g: &OpenGraph, i: usize) -> Result<Angle, SynthError> {
        match g.label(i) {
            Some(l) if l.is_pauli() => Ok(Angle::Num(l.plane_angle(0.0).1)),
            _ => self
                .map
                .get(&i)
                .cloned()
                .ok_or_else(|| SynthError::MissingAngle(g.name(i).to_string())),
        }
    }

    fn numeric(&self, g: &OpenGraph, i: usize) -> Result<f64, SynthError> {
        match self.angle_at(g, i)? {
            Angle::Num(x) => Ok(x),
            Angle::Sym { .. } => Err(SynthError::SymbolicAngle(g.name(i).to_string())),
        }
    }
}

fn preparation_and_entanglement(g: &OpenGraph) -> Vec<Command> {
    let mut commands = Vec::new();
    let mut preps: Vec<usize> = g.prepared().iter().collect();
    preps.reverse(); // rightmost in the printed form comes first
    commands.extend(preps.into_iter().map(Command::Prepare));
    commands.extend(
        g.edges()
            .iter()
            .rev()
            .map(|&(u, v)| Command::Entangle(u, v)),
    );
    commands
}

/// Measured qubits in a linear extension of the order merged with the
/// correction arcs, so every emitted correction lands before its target's
/// measurement. Layered coarsely, ties by vertex index.
fn measurement_schedule(
    g: &OpenGraph,
    s: &CorrectionStructure,
    arcs: &[(usize, usize)],
) -> Result<Vec<usize>, SynthError> {
    let merged = s.order.merged_with(arcs)?;
    Ok(merged
        .linear_extension()
        .into_iter()
        .filter(|&v| g.measured().contains(v))
        .collect())
}

struct Emission {
    x_targets: VertexSet,
    z_targets: VertexSet,
}

fn gflow_emission(g: &OpenGraph, set: VertexSet, i: usize) -> Emission {
    let odd = g.odd_neighborhood(set);
    Emission {
        x_targets: {
            let mut t = set;
            t.remove(i);
            t
        },
        z_targets: {
            let mut t = odd;
            t.remove(i);
            t
        },
    }
}

/// Pauli-flow emission drops the components a Pauli measurement absorbs.
fn pauli_emission(g: &OpenGraph, set: VertexSet, i: usize) -> Emission {
    let odd = g.odd_neighborhood(set);
    let mut x_targets = VertexSet::EMPTY;
    let mut z_targets = VertexSet::EMPTY;
    for j in set.union(odd).iter() {
        if j == i {
            continue;
        }
        let in_set = set.contains(j);
        let in_odd = odd.contains(j);
        let absorbed = matches!(
            (g.label(j), in_set, in_odd),
            (Some(MeasLabel::Pauli(Axis::X)), true, false)
                | (Some(MeasLabel::Pauli(Axis::Y)), true, true)
                | (Some(MeasLabel::Pauli(Axis::Z)), false, true)
        );
        if absorbed {
            continue;
        }
        if in_set {
            x_targets.insert(j);
        }
        if in_odd {
            z_targets.insert(j);
        }
    }
    Emission {
        x_targets,
        z_targets,
    }
}

fn emit_pattern(
    g: &OpenGraph,
    s: &CorrectionStructure,
    a: &AngleAssignment,
    emission: impl Fn(&OpenGraph, VertexSet, usize) -> Emission,
) -> Result<Pattern, SynthError> {
    let mut arcs = Vec::new();
    for (i, set) in s.measured_domain() {
        let e = emission(g, set, i);
        for j in e.x_targets.union(e.z_targets).intersection(g.measured()).iter() {
            arcs.push((i, j));
        }
    }
    let schedule = measurement_schedule(g, s, &arcs)?;
    let mut commands = preparation_and_entanglement(g);
    for &i in &schedule {
        let set = s.correcting_set(i).expect("schedule holds measured qubits");
        commands.push(Command::Measure(MeasureCmd {
            qubit: i,
            label: g.label(i).expect("measured qubits are labeled"),
            angle: a.angle_at(g, i)?,
            x_signals: Signals::NONE,
            z_signals: Signals::NONE,
        }));
        let e = emission(g, set, i);
        let signal = Signals::of(VertexSet::singleton(i));
        for j in e.z_targets.iter() {
            commands.push(Command::CorrectZ {
                qubit: j,
                signals: signal,
            });
        }
        for j in e.x_targets.iter() {
            commands.push(Command::CorrectX {
                qubit: j,
                signals: signal,
            });
        }
    }
    let p = Pattern::new(g.names().to_vec(), commands)?;
    let report = p.check_runnable();
    if let Some((idx, reason)) = report.violation {
        return Err(PatternError::NotRunnable(format!("command {}: {}", idx, reason)).into());
    }
    Ok(p)
}

/// Compile a flow or gflow structure into its deterministic pattern.
pub fn synthesize_from_gflow(
    g: &OpenGraph,
    s: &CorrectionStructure,
    a: &AngleAssignment,
) -> Result<Pattern, SynthError> {
    let report = match s.kind {
        FlowKind::Flow => verify_flow(g, s)?,
        FlowKind::GFlow => verify_gflow(g, s)?,
        FlowKind::PauliFlow => {
            return Err(FlowError::KindMismatch(s.kind, FlowKind::GFlow).into())
        }
    };
    if !report.valid {
        return Err(invalid(&report));
    }
    emit_pattern(g, s, a, gflow_emission)
}

/// Compile a Pauli-flow structure; corrections absorbed by Pauli
/// measurements are never emitted.
pub fn synthesize_from_pauli_flow(
    g: &OpenGraph,
    s: &CorrectionStructure,
    a: &AngleAssignment,
) -> Result<Pattern, SynthError> {
    if s.kind != FlowKind::PauliFlow {
        return Err(FlowError::KindMismatch(s.kind, FlowKind::PauliFlow).into());
    }
    let report = verify_pauli_flow(g, s)?;
    if !report.valid {
        return Err(invalid(&report));
    }
    emit_pattern(g, s, a, pauli_emission)
}

/// Build the pattern shape of the determinism theorems from an arbitrary
/// correcting-set map without any verification, measuring in the given
/// sequence. Correction targets that are neither outputs nor measured later
/// in the sequence are dropped to keep the pattern runnable. Intended for
/// counterexample searches.
pub fn synthesize_raw(
    g: &OpenGraph,
    corr: &BTreeMap<usize, VertexSet>,
    sequence: &[usize],
    a: &AngleAssignment,
) -> Result<Pattern, SynthError> {
    let mut commands = preparation_and_entanglement(g);
    let mut remaining: VertexSet = VertexSet::from_iter(sequence.iter().copied());
    for &i in sequence {
        remaining.remove(i);
        commands.push(Command::Measure(MeasureCmd {
            qubit: i,
            label: g.label(i).expect("measured qubits are labeled"),
            angle: a.angle_at(g, i)?,
            x_signals: Signals::NONE,
            z_signals: Signals::NONE,
        }));
        let Some(&set) = corr.get(&i) else { continue };
        let odd = g.odd_neighborhood(set);
        let allowed = g.outputs().union(remaining);
        let signal = Signals::of(VertexSet::singleton(i));
        for j in odd.intersection(allowed).iter() {
            commands.push(Command::CorrectZ { qubit: j, signals: signal });
        }
        for j in set.intersection(allowed).iter() {
            commands.push(Command::CorrectX { qubit: j, signals: signal });
        }
    }
    Ok(Pattern::new(g.names().to_vec(), commands)?)
}

/// The target map `U` of a geometry with angles: project every measured
/// qubit of the entangled state onto its outcome-0 state and rescale by
/// `2^(n/2)`, so a deterministic pattern's branch maps equal
/// `U * 2^(-n/2)` up to phase.
#[derive(Debug, Clone)]
pub struct UnitaryEmbedding {
    pub matrix: CMat,
    /// Output qubits indexing the rows, most significant first.
    pub row_qubits: Vec<String>,
    /// Input qubits indexing the columns, most significant first.
    pub col_qubits: Vec<String>,
    /// Columns orthonormal within `norm_defect`.
    pub isometry: bool,
    pub norm_defect: f64,
}

pub fn expected_unitary(
    g: &OpenGraph,
    a: &AngleAssignment,
    tolerance: f64,
) -> Result<UnitaryEmbedding, SynthError> {
    let mut state = graph_state_columns(g);
    let mut n = 0u32;
    for i in g.measured().iter() {
        let angle = a.numeric(g, i)?;
        let (plane, alpha) = g.label(i).expect("measured").plane_angle(angle);
        let (b0, b1) = measurement_bra(plane, alpha, false);
        state = state.project_out(i, b0, b1);
        n += 1;
    }
    let outputs: Vec<usize> = g.outputs().iter().collect();
    let matrix = state
        .as_matrix(&outputs)
        .scale(num_complex::Complex64::new(2f64.powf(n as f64 / 2.0), 0.0));
    if matrix.frobenius() <= tolerance {
        return Err(SynthError::ZeroMap);
    }
    let gram = matrix.dagger().mul(&matrix);
    let norm_defect = gram.max_abs_diff(&CMat::identity(matrix.cols));
    Ok(UnitaryEmbedding {
        matrix,
        row_qubits: outputs.iter().map(|&q| g.name(q).to_string()).collect(),
        col_qubits: g.inputs().iter().map(|q| g.name(q).to_string()).collect(),
        isometry: norm_defect <= tolerance,
        norm_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_from_parts, Plane};
    use crate::linalg::{equal_up_to_phase, proportional};
    use crate::order::PartialOrder;
    use crate::pattern::print_pattern;
    use crate::sim::{enumerate_branch_maps, SimOptions};

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

    fn path_flow(g: &OpenGraph) -> CorrectionStructure {
        let m = |v: &str| g.lookup(v).unwrap();
        let corr: BTreeMap<usize, VertexSet> = [
            (m("a"), VertexSet::singleton(m("d"))),
            (m("b"), VertexSet::singleton(m("e"))),
            (m("c"), VertexSet::singleton(m("f"))),
        ]
        .into_iter()
        .collect();
        let order = PartialOrder::from_relations(
            6,
            &[
                (m("a"), m("d")),
                (m("a"), m("b")),
                (m("b"), m("e")),
                (m("b"), m("c")),
                (m("c"), m("f")),
            ],
        )
        .unwrap();
        CorrectionStructure::build(g, FlowKind::Flow, &corr, order).unwrap()
    }

    #[test]
    fn path_flow_synthesizes_displayed_pattern() {
        let g = path_graph();
        let s = path_flow(&g);
        let a = AngleAssignment::from_named(
            &g,
            &[("a", Angle::sym("α")), ("b", Angle::sym("β")), ("c", Angle::sym("γ"))],
        )
        .unwrap();
        let p = synthesize_from_gflow(&g, &s, &a).unwrap();
        assert_eq!(
            print_pattern(&p),
            "X[f]^{sc} M[c;XY;γ] X[e]^{sb} Z[c]^{sb} M[b;XY;β] X[d]^{sa} Z[b]^{sa} M[a;XY;α] \
             E[a,d] E[d,b] E[b,e] E[e,c] E[c,f] N[d] N[e] N[f]"
        );
    }

    #[test]
    fn all_output_graph_synthesizes_prep_and_entangle_only() {
        let g = graph_from_parts(&["u", "v"], &[("u", "v")], &["u"], &["u", "v"], &[]).unwrap();
        let s = CorrectionStructure::build(
            &g,
            FlowKind::GFlow,
            &BTreeMap::new(),
            PartialOrder::empty(2),
        )
        .unwrap();
        let p = synthesize_from_gflow(&g, &s, &AngleAssignment::new()).unwrap();
        assert_eq!(print_pattern(&p), "E[u,v] N[v]");
    }

    #[test]
    fn single_edge_expected_unitary_is_hadamard() {
        let g = graph_from_parts(&["a", "d"], &[("a", "d")], &["a"], &["d"], &[("a", xy())])
            .unwrap();
        let u = expected_unitary(&g, &AngleAssignment::uniform(&g, 0.0), 1e-9).unwrap();
        assert!(u.isometry);
        let mut h = CMat::zeros(2, 2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        h[(0, 0)] = num_complex::Complex64::new(s, 0.0);
        h[(0, 1)] = num_complex::Complex64::new(s, 0.0);
        h[(1, 0)] = num_complex::Complex64::new(s, 0.0);
        h[(1, 1)] = num_complex::Complex64::new(-s, 0.0);
        assert!(equal_up_to_phase(&u.matrix, &h, 1e-9));
    }

    #[test]
    fn identity_embedding_without_measurements() {
        let g = graph_from_parts(&["q"], &[], &["q"], &["q"], &[]).unwrap();
        let u = expected_unitary(&g, &AngleAssignment::new(), 1e-9).unwrap();
        assert!(u.matrix.max_abs_diff(&CMat::identity(2)) < 1e-12);
    }

    #[test]
    fn pauli_z_single_edge_pattern_is_deterministic() {
        // lambda(a) = Z with p(a) = {a}: measurement collapses, the output
        // correction keeps both branches proportional
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
        let p = synthesize_from_pauli_flow(&g, &s, &AngleAssignment::new()).unwrap();
        let branches = enumerate_branch_maps(&p, &SimOptions::default()).unwrap();
        assert_eq!(branches.len(), 2);
        assert!(proportional(&branches[0].map, &branches[1].map, 1e-9));
    }
}
