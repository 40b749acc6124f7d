//! Translate flow-annotated geometries into gate circuits.
//!
//! Each measured qubit `i` with singleton correcting set `{j}` becomes a
//! phase gate `P(-alpha_i)` followed by a Hadamard on `i`'s wire, which then
//! carries `j`; every remaining graph edge becomes a controlled-Z placed at
//! the earliest slot where both endpoints are carried by wires. Correcting
//! sets of size two or more cannot continue a single wire, so gflow-only
//! geometries yield a structured acausality report instead of a circuit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{verify, CorrectionStructure, FlowError, FlowKind};
use crate::graph::{MeasLabel, OpenGraph, Plane};
use crate::linalg::CMat;
use crate::synth::{AngleAssignment, SynthError};
use crate::sim::StateVector;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("extraction requires XY labels only; `{0}` is {1}")]
    NonXyLabel(String, MeasLabel),
    #[error("structure fails verification; extract only verified flow/gflow structures")]
    Unverified,
    #[error("extraction is restricted to |I| = |O| geometries (got {inputs} inputs, {outputs} outputs)")]
    UnequalIo { inputs: usize, outputs: usize },
    #[error("Pauli-flow structures have no direct circuit substitution")]
    PauliKind,
    #[error("circuit has {wires} wires, over the simulation bound {max}")]
    TooManyWires { wires: usize, max: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Gate {
    #[serde(rename = "CZ")]
    Cz { wires: (usize, usize) },
    #[serde(rename = "P")]
    Phase { wire: usize, theta: f64 },
    #[serde(rename = "H")]
    H { wire: usize },
}

/// A gate list over named wires, applied first to last.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Circuit {
    /// Wire names: the input vertices, in declaration order.
    pub wires: Vec<String>,
    pub gates: Vec<Gate>,
}

/// Why the direct substitution produced no causal circuit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcausalReport {
    /// Measured qubits whose correcting sets cannot continue a single wire,
    /// with the offending sets.
    pub offenders: Vec<(String, Vec<String>)>,
    pub explanation: String,
}

#[derive(Debug, Clone)]
pub enum Extraction {
    Circuit(Circuit),
    Acausal(AcausalReport),
}

/// Direct circuit substitution for a verified flow structure; a verified
/// gflow structure with wider correcting sets yields an [`AcausalReport`].
pub fn extract_circuit(
    g: &OpenGraph,
    s: &CorrectionStructure,
    a: &AngleAssignment,
) -> Result<Extraction, ExtractError> {
    for i in g.measured().iter() {
        match g.label(i) {
            Some(MeasLabel::Plane(Plane::XY)) => {}
            Some(l) => return Err(ExtractError::NonXyLabel(g.name(i).into(), l)),
            None => unreachable!(),
        }
    }
    if s.kind == FlowKind::PauliFlow {
        return Err(ExtractError::PauliKind);
    }
    let (inputs, outputs) = (g.inputs().len(), g.outputs().len());
    if inputs != outputs {
        return Err(ExtractError::UnequalIo { inputs, outputs });
    }
    match verify(g, s) {
        Ok(report) if report.valid => {}
        Ok(_) => return Err(ExtractError::Unverified),
        Err(FlowError::NonXyLabel(..)) | Err(FlowError::PauliLabelPresent(_)) => unreachable!(),
        Err(e) => return Err(e.into()),
    }

    let offenders: Vec<(String, Vec<String>)> = s
        .measured_domain()
        .filter(|(_, set)| set.len() != 1)
        .map(|(i, set)| (g.name(i).to_string(), g.mask_names(set)))
        .collect();
    if !offenders.is_empty() {
        return Ok(Extraction::Acausal(AcausalReport {
            offenders,
            explanation: "a correcting set wider than one qubit cannot continue a single wire; \
                          removing the auxiliary qubits would require corrections on positions \
                          already consumed"
                .into(),
        }));
    }

    let wire_names: Vec<usize> = g.inputs().iter().collect();
    let mut carried: Vec<usize> = wire_names.clone(); // carried[w] = vertex on wire w
    let wire_of = |carried: &[usize], v: usize| carried.iter().position(|&x| x == v);

    // non-flow edges become CZ gates; flow edges are consumed by the J steps
    let mut remaining: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            !s.measured_domain().any(|(i, set)| {
                let fi = set.iter().next().unwrap();
                (u, v) == (i, fi) || (v, u) == (i, fi)
            })
        })
        .collect();

    let mut gates = Vec::new();
    let mut emit_live_czs = |carried: &[usize], gates: &mut Vec<Gate>, remaining: &mut Vec<(usize, usize)>| {
        remaining.retain(|&(u, v)| {
            match (wire_of(carried, u), wire_of(carried, v)) {
                (Some(wu), Some(wv)) => {
                    gates.push(Gate::Cz { wires: (wu, wv) });
                    false
                }
                _ => true,
            }
        });
    };

    emit_live_czs(&carried, &mut gates, &mut remaining);
    let schedule: Vec<usize> = s
        .order
        .linear_extension()
        .into_iter()
        .filter(|&v| g.measured().contains(v))
        .collect();
    for i in schedule {
        let target = s.correcting_set(i).unwrap().iter().next().unwrap();
        let Some(w) = wire_of(&carried, i) else {
            // cannot happen for verified |I| = |O| flows: f is a bijection,
            // so every measured vertex is carried before its turn
            return Ok(Extraction::Acausal(AcausalReport {
                offenders: vec![(g.name(i).to_string(), g.mask_names(s.correcting_set(i).unwrap()))],
                explanation: format!("qubit `{}` is never carried by a wire", g.name(i)),
            }));
        };
        gates.push(Gate::Phase {
            wire: w,
            theta: -a_numeric(g, a, i)?,
        });
        gates.push(Gate::H { wire: w });
        carried[w] = target;
        emit_live_czs(&carried, &mut gates, &mut remaining);
    }
    debug_assert!(remaining.is_empty(), "all edges placed for a verified flow");

    Ok(Extraction::Circuit(Circuit {
        wires: wire_names.iter().map(|&v| g.name(v).to_string()).collect(),
        gates,
    }))
}

fn a_numeric(g: &OpenGraph, a: &AngleAssignment, i: usize) -> Result<f64, ExtractError> {
    let assignment = a.clone();
    // AngleAssignment::numeric is private to synth; reuse expected path
    match assignment.angle_at(g, i)? {
        crate::pattern::Angle::Num(x) => Ok(x),
        crate::pattern::Angle::Sym { .. } => Err(ExtractError::Synth(SynthError::SymbolicAngle(
            g.name(i).to_string(),
        ))),
    }
}

/// Dense unitary of a circuit by direct gate application.
pub fn circuit_unitary(c: &Circuit, max_wires: usize) -> Result<CMat, ExtractError> {
    let w = c.wires.len();
    if w > max_wires {
        return Err(ExtractError::TooManyWires { wires: w, max: max_wires });
    }
    // reuse the simulator register: wires as qubits 0..w
    let qubits: Vec<usize> = (0..w).collect();
    let mut state = StateVector::input_columns(&qubits);
    for gate in &c.gates {
        match gate {
            Gate::Cz { wires: (u, v) } => state.cz(*u, *v),
            Gate::Phase { wire, theta } => state.phase(*wire, *theta),
            Gate::H { wire } => state.hadamard(*wire),
        }
    }
    Ok(state.as_matrix(&qubits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_parts;
    use crate::linalg::equal_up_to_phase;
    use crate::pattern::Angle;
    use crate::synth::expected_unitary;

    fn xy() -> MeasLabel {
        MeasLabel::Plane(Plane::XY)
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit {
            wires: vec!["a".into(), "b".into()],
            gates: vec![],
        };
        let u = circuit_unitary(&c, 12).unwrap();
        assert!(u.max_abs_diff(&CMat::identity(4)) < 1e-12);
    }

    #[test]
    fn single_h_is_hadamard() {
        let c = Circuit {
            wires: vec!["a".into()],
            gates: vec![Gate::H { wire: 0 }],
        };
        let u = circuit_unitary(&c, 12).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut h = CMat::identity(2);
        h[(0, 0)] = num_complex::Complex64::new(s, 0.0);
        h[(0, 1)] = num_complex::Complex64::new(s, 0.0);
        h[(1, 0)] = num_complex::Complex64::new(s, 0.0);
        h[(1, 1)] = num_complex::Complex64::new(-s, 0.0);
        assert!(u.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn single_edge_extraction_matches_expected_unitary() {
        let g = graph_from_parts(&["a", "d"], &[("a", "d")], &["a"], &["d"], &[("a", xy())])
            .unwrap();
        let flow = crate::find::find_flow(&g, &Default::default()).unwrap().structure.unwrap();
        let a = AngleAssignment::from_named(&g, &[("a", Angle::Num(0.8))]).unwrap();
        let Extraction::Circuit(c) = extract_circuit(&g, &flow, &a).unwrap() else {
            panic!("expected a circuit");
        };
        assert_eq!(c.wires, vec!["a"]);
        assert_eq!(c.gates.len(), 2);
        let u = circuit_unitary(&c, 12).unwrap();
        let expect = expected_unitary(&g, &a, 1e-9).unwrap();
        assert!(equal_up_to_phase(&u, &expect.matrix, 1e-9));
    }

    #[test]
    fn unequal_io_rejected() {
        let g = graph_from_parts(
            &["a", "d", "e"],
            &[("a", "d"), ("a", "e")],
            &["a"],
            &["d", "e"],
            &[("a", xy())],
        )
        .unwrap();
        let corr = [(0usize, crate::graph::VertexSet::singleton(1))]
            .into_iter()
            .collect();
        let s = CorrectionStructure::build(
            &g,
            FlowKind::Flow,
            &corr,
            crate::order::PartialOrder::from_relations(3, &[(0, 1), (0, 2)]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            extract_circuit(&g, &s, &AngleAssignment::uniform(&g, 0.0)),
            Err(ExtractError::UnequalIo { .. })
        ));
    }

    #[test]
    fn circuit_json_round_trip() {
        let c = Circuit {
            wires: vec!["a".into(), "b".into()],
            gates: vec![
                Gate::Cz { wires: (0, 1) },
                Gate::Phase { wire: 0, theta: -0.5 },
                Gate::H { wire: 0 },
            ],
        };
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"kind\":\"CZ\""));
        let back: Circuit = serde_json::from_str(&json).unwrap();
        assert_eq!(back.gates.len(), 3);
    }
}
