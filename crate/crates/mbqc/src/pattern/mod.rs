//! The measurement-calculus pattern language: preparations, entanglers,
//! dependent measurements and dependent corrections.
//!
//! Command lists are stored in execution order (index 0 runs first). The
//! text form follows the usual product notation and is applied right to
//! left, so the printer reverses the list; see [`text`].
//!
//! Measurements carry two signal sets. The x-set negates the measurement
//! angle per odd parity, the z-set adds pi, each composed according to the
//! measured plane. This keeps the commutation rules closed under rewriting
//! without enumerating branches: absorbing a correction into a measurement
//! is a symmetric-difference update of the corresponding set.

mod standard;
mod text;

pub use standard::{absorb_pauli_corrections, standardize};
pub use text::{parse_pattern, print_pattern};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{MeasLabel, Plane, VertexSet};

/// A measurement angle: a literal value in radians or a named symbol bound
/// later (optionally negated / shifted by pi as written in the source text).
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Num(f64),
    Sym {
        name: String,
        negated: bool,
        plus_pi: bool,
    },
}

impl Angle {
    pub fn sym(name: &str) -> Angle {
        Angle::Sym {
            name: name.to_string(),
            negated: false,
            plus_pi: false,
        }
    }

    pub fn resolve(&self, bindings: &BTreeMap<String, f64>) -> Result<f64, PatternError> {
        match self {
            Angle::Num(x) => Ok(*x),
            Angle::Sym {
                name,
                negated,
                plus_pi,
            } => {
                let base = *bindings
                    .get(name)
                    .ok_or_else(|| PatternError::UnboundAngle(name.clone()))?;
                let signed = if *negated { -base } else { base };
                Ok(signed + if *plus_pi { std::f64::consts::PI } else { 0.0 })
            }
        }
    }
}

/// A signal expression: odd parity of the listed measurement outcomes, plus
/// an optional constant flip (`plus_one`) so unconditioned corrections fit
/// the same shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Signals {
    pub mask: VertexSet,
    pub plus_one: bool,
}

impl Signals {
    pub const NONE: Signals = Signals {
        mask: VertexSet::EMPTY,
        plus_one: false,
    };

    pub const ALWAYS: Signals = Signals {
        mask: VertexSet::EMPTY,
        plus_one: true,
    };

    pub fn of(mask: VertexSet) -> Signals {
        Signals {
            mask,
            plus_one: false,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.mask.is_empty() && !self.plus_one
    }

    /// Parity under a concrete outcome assignment.
    pub fn evaluate(&self, outcomes: VertexSet) -> bool {
        (self.mask.intersection(outcomes).len() % 2 == 1) ^ self.plus_one
    }

    /// Mod-2 sum of two signal expressions.
    pub fn xor(&self, other: Signals) -> Signals {
        Signals {
            mask: self.mask.symmetric_difference(other.mask),
            plus_one: self.plus_one ^ other.plus_one,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureCmd {
    pub qubit: usize,
    pub label: MeasLabel,
    /// Free angle for plane labels; ignored for Pauli labels (their angle is
    /// fixed by the canonical embedding).
    pub angle: Angle,
    pub x_signals: Signals,
    pub z_signals: Signals,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// `Nِ[q]`: prepare `q` in `|+>`.
    Prepare(usize),
    /// `E[q,r]`: controlled-Z between `q` and `r` (endpoints as written).
    Entangle(usize, usize),
    /// `M[q;label;angle]{x:..}{z:..}`.
    Measure(MeasureCmd),
    /// `X[q]^{..}`.
    CorrectX { qubit: usize, signals: Signals },
    /// `Z[q]^{..}`.
    CorrectZ { qubit: usize, signals: Signals },
}

impl Command {
    /// The qubit this command acts on, for corrections and measurements.
    pub fn acted_qubit(&self) -> Option<usize> {
        match self {
            Command::Prepare(q) => Some(*q),
            Command::Measure(m) => Some(m.qubit),
            Command::CorrectX { qubit, .. } | Command::CorrectZ { qubit, .. } => Some(*qubit),
            Command::Entangle(..) => None,
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        match self {
            Command::Entangle(a, b) => *a == q || *b == q,
            other => other.acted_qubit() == Some(q),
        }
    }
}

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("patterns are limited to 64 qubits")]
    TooManyQubits,
    #[error("angle symbol `{0}` is unbound; bind it with --angles")]
    UnboundAngle(String),
    #[error("pattern is not runnable: {0}")]
    NotRunnable(String),
    #[error("unknown qubit `{0}`")]
    UnknownQubit(String),
}

/// Why a pattern fails to run, with the offending command index
/// (execution order).
#[derive(Debug, Clone, PartialEq)]
pub struct RunnabilityReport {
    pub runnable: bool,
    pub violation: Option<(usize, String)>,
}

/// An ordered command sequence over a named qubit register.
///
/// The input set is derived: a qubit is an input iff it is never prepared,
/// and an output iff it is never measured.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    commands: Vec<Command>,
}

impl Pattern {
    pub fn new(names: Vec<String>, commands: Vec<Command>) -> Result<Pattern, PatternError> {
        if names.len() > 64 {
            return Err(PatternError::TooManyQubits);
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(Pattern {
            names,
            index,
            commands,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn qubit_count(&self) -> usize {
        self.names.len()
    }

    /// Commands in execution order.
    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    pub fn all_qubits(&self) -> VertexSet {
        if self.names.is_empty() {
            VertexSet::EMPTY
        } else {
            VertexSet(u64::MAX >> (64 - self.names.len()))
        }
    }

    pub fn prepared_set(&self) -> VertexSet {
        VertexSet::from_iter(self.commands.iter().filter_map(|c| match c {
            Command::Prepare(q) => Some(*q),
            _ => None,
        }))
    }

    pub fn measured_set(&self) -> VertexSet {
        VertexSet::from_iter(self.commands.iter().filter_map(|c| match c {
            Command::Measure(m) => Some(m.qubit),
            _ => None,
        }))
    }

    /// Inputs: qubits never prepared.
    pub fn inputs(&self) -> VertexSet {
        self.all_qubits().difference(self.prepared_set())
    }

    /// Outputs: qubits never measured.
    pub fn outputs(&self) -> VertexSet {
        self.all_qubits().difference(self.measured_set())
    }

    pub fn measure_of(&self, q: usize) -> Option<&MeasureCmd> {
        self.commands.iter().find_map(|c| match c {
            Command::Measure(m) if m.qubit == q => Some(m),
            _ => None,
        })
    }

    /// Replace every symbolic angle by its binding.
    pub fn bind_angles(&self, bindings: &BTreeMap<String, f64>) -> Result<Pattern, PatternError> {
        let mut out = self.clone();
        for c in &mut out.commands {
            if let Command::Measure(m) = c {
                if let Angle::Sym { .. } = m.angle {
                    m.angle = Angle::Num(m.angle.resolve(bindings)?);
                }
            }
        }
        Ok(out)
    }

    /// Substitute the free angle of each plane-labeled measurement
    /// (Pauli-labeled ones keep their fixed angle). Missing entries keep the
    /// existing angle.
    pub fn with_angles(&self, angles: &BTreeMap<usize, f64>) -> Pattern {
        let mut out = self.clone();
        for c in &mut out.commands {
            if let Command::Measure(m) = c {
                if !m.label.is_pauli() {
                    if let Some(&a) = angles.get(&m.qubit) {
                        m.angle = Angle::Num(a);
                    }
                }
            }
        }
        out
    }

    /// Check the runnability clauses: no command on an unprepared or
    /// already-measured qubit, no dependency on an outcome not yet measured,
    /// single preparation and measurement per qubit.
    pub fn check_runnable(&self) -> RunnabilityReport {
        let inputs = self.inputs();
        let mut live = inputs;
        let mut prepared = VertexSet::EMPTY;
        let mut measured = VertexSet::EMPTY;
        let fail = |idx: usize, msg: String| RunnabilityReport {
            runnable: false,
            violation: Some((idx, msg)),
        };
        for (idx, c) in self.commands.iter().enumerate() {
            let check_live = |q: usize| -> Option<String> {
                if measured.contains(q) {
                    Some(format!("qubit `{}` was already measured", self.names[q]))
                } else if !live.contains(q) {
                    Some(format!("qubit `{}` is not yet prepared", self.names[q]))
                } else {
                    None
                }
            };
            let check_signals = |s: &Signals| -> Option<String> {
                let missing = s.mask.difference(measured);
                missing.iter().next().map(|q| {
                    format!(
                        "signal s{} depends on an outcome not yet measured",
                        self.names[q]
                    )
                })
            };
            match c {
                Command::Prepare(q) => {
                    if prepared.contains(*q) {
                        return fail(idx, format!("qubit `{}` prepared twice", self.names[*q]));
                    }
                    prepared.insert(*q);
                    live.insert(*q);
                }
                Command::Entangle(a, b) => {
                    if a == b {
                        return fail(idx, "entangler endpoints must differ".into());
                    }
                    for q in [*a, *b] {
                        if let Some(msg) = check_live(q) {
                            return fail(idx, msg);
                        }
                    }
                }
                Command::Measure(m) => {
                    if let Some(msg) = check_live(m.qubit) {
                        return fail(idx, msg);
                    }
                    if let Some(msg) = check_signals(&m.x_signals).or_else(|| check_signals(&m.z_signals)) {
                        return fail(idx, msg);
                    }
                    measured.insert(m.qubit);
                }
                Command::CorrectX { qubit, signals } | Command::CorrectZ { qubit, signals } => {
                    if let Some(msg) = check_live(*qubit) {
                        return fail(idx, msg);
                    }
                    if let Some(msg) = check_signals(signals) {
                        return fail(idx, msg);
                    }
                }
            }
        }
        RunnabilityReport {
            runnable: true,
            violation: None,
        }
    }
}

/// Angle transformation absorbed with an X correction on the given plane.
pub fn flip_x(plane: Plane, a: f64) -> f64 {
    use std::f64::consts::PI;
    match plane {
        Plane::XY => -a,
        Plane::XZ => PI - a,
        Plane::YZ => a + PI,
    }
}

/// Angle transformation absorbed with a Z correction on the given plane.
pub fn flip_z(plane: Plane, a: f64) -> f64 {
    use std::f64::consts::PI;
    match plane {
        Plane::XY => a + PI,
        Plane::XZ => -a,
        Plane::YZ => -a,
    }
}

/// Plane and effective angle of a measurement given the parities of its two
/// signal sets under some branch.
pub fn effective_plane_angle(
    m: &MeasureCmd,
    resolved_angle: f64,
    x_parity: bool,
    z_parity: bool,
) -> (Plane, f64) {
    let (plane, mut a) = m.label.plane_angle(resolved_angle);
    if x_parity {
        a = flip_x(plane, a);
    }
    if z_parity {
        a = flip_z(plane, a);
    }
    (plane, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Axis;

    fn q(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn context_derivation() {
        // N[b] E[a,b] M[a;XY;0]  (execution order)
        let p = Pattern::new(
            q(&["a", "b"]),
            vec![
                Command::Prepare(1),
                Command::Entangle(0, 1),
                Command::Measure(MeasureCmd {
                    qubit: 0,
                    label: MeasLabel::Plane(Plane::XY),
                    angle: Angle::Num(0.0),
                    x_signals: Signals::NONE,
                    z_signals: Signals::NONE,
                }),
            ],
        )
        .unwrap();
        assert_eq!(p.inputs(), VertexSet::singleton(0));
        assert_eq!(p.outputs(), VertexSet::singleton(1));
        assert!(p.check_runnable().runnable);
    }

    #[test]
    fn measurement_before_signal_source_rejected() {
        // correction depends on b before b is measured
        let p = Pattern::new(
            q(&["a", "b"]),
            vec![
                Command::Prepare(1),
                Command::Entangle(0, 1),
                Command::CorrectZ {
                    qubit: 0,
                    signals: Signals::of(VertexSet::singleton(1)),
                },
                Command::Measure(MeasureCmd {
                    qubit: 1,
                    label: MeasLabel::Plane(Plane::XY),
                    angle: Angle::Num(0.0),
                    x_signals: Signals::NONE,
                    z_signals: Signals::NONE,
                }),
            ],
        )
        .unwrap();
        let report = p.check_runnable();
        assert!(!report.runnable);
        assert_eq!(report.violation.unwrap().0, 2);
    }

    #[test]
    fn acting_on_measured_qubit_rejected() {
        let p = Pattern::new(
            q(&["a", "b"]),
            vec![
                Command::Prepare(1),
                Command::Measure(MeasureCmd {
                    qubit: 0,
                    label: MeasLabel::Pauli(Axis::X),
                    angle: Angle::Num(0.0),
                    x_signals: Signals::NONE,
                    z_signals: Signals::NONE,
                }),
                Command::Entangle(0, 1),
            ],
        )
        .unwrap();
        assert!(!p.check_runnable().runnable);
    }

    #[test]
    fn signal_parity_evaluation() {
        let s = Signals {
            mask: VertexSet::from_iter([0, 2]),
            plus_one: true,
        };
        assert!(s.evaluate(VertexSet::EMPTY));
        assert!(!s.evaluate(VertexSet::singleton(0)));
        assert!(s.evaluate(VertexSet::from_iter([0, 2])));
    }

    #[test]
    fn flip_rules_are_involutions_mod_2pi() {
        use std::f64::consts::TAU;
        for plane in [Plane::XY, Plane::XZ, Plane::YZ] {
            for k in 0..20 {
                let a = 0.37 * k as f64;
                let twice_x = flip_x(plane, flip_x(plane, a));
                let twice_z = flip_z(plane, flip_z(plane, a));
                assert!(((twice_x - a) / TAU).rem_euclid(1.0) < 1e-12 || ((twice_x - a) / TAU).rem_euclid(1.0) > 1.0 - 1e-12);
                assert!(((twice_z - a) / TAU).rem_euclid(1.0) < 1e-12 || ((twice_z - a) / TAU).rem_euclid(1.0) > 1.0 - 1e-12);
            }
        }
    }
}
