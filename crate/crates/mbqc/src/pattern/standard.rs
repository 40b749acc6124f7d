//! Standardization: rewrite a runnable pattern into the order
//! preparations, entanglers, measurements, corrections (rightmost first in
//! the text form), preserving every branch map up to a global phase.
//!
//! The rewrite is small-step over adjacent command pairs:
//!
//! * a correction followed by an entangler commutes across it; an X
//!   correction on an endpoint additionally spawns a Z on the other endpoint
//!   (`E_ij X_i^s = X_i^s Z_j^s E_ij`),
//! * a correction followed by the measurement of the same qubit is absorbed
//!   into the measurement's signal sets (the six plane rules, signal-lifted),
//! * measurements commute across later entanglers (always disjoint in a
//!   runnable pattern), and preparations move to the front.
//!
//! Each step strictly decreases a lexicographic measure, which is asserted,
//! so the loop terminates.

use super::{Command, Pattern, PatternError, Signals};
use crate::graph::{Axis, MeasLabel};

/// Lexicographic termination measure. The first component charges each
/// correction exponentially in the number of entanglers/measurements still
/// ahead of it (an X crossing an entangler spawns a Z, so linear counts do
/// not decrease); the second counts measurement/entangler inversions; the
/// third counts commands ahead of preparations.
fn measure(commands: &[Command]) -> (u128, u64, u64) {
    let n = commands.len();
    let mut em_after = vec![0u32; n + 1];
    for i in (0..n).rev() {
        em_after[i] = em_after[i + 1]
            + matches!(commands[i], Command::Entangle(..) | Command::Measure(_)) as u32;
    }
    let mut m1: u128 = 0;
    for (i, c) in commands.iter().enumerate() {
        let weight = match c {
            Command::CorrectX { .. } => 2u128,
            Command::CorrectZ { .. } => 1u128,
            _ => continue,
        };
        m1 = m1.saturating_add(weight.saturating_mul(3u128.saturating_pow(em_after[i + 1])));
    }
    let mut m2 = 0u64;
    let mut measures_seen = 0u64;
    for c in commands {
        match c {
            Command::Measure(_) => measures_seen += 1,
            Command::Entangle(..) => m2 += measures_seen,
            _ => {}
        }
    }
    let mut m3 = 0u64;
    let mut non_prep_seen = 0u64;
    for c in commands {
        match c {
            Command::Prepare(_) => m3 += non_prep_seen,
            _ => non_prep_seen += 1,
        }
    }
    (m1, m2, m3)
}

/// Apply the first matching adjacent rewrite, scanning left to right.
/// Returns false at the normal form.
fn step(commands: &mut Vec<Command>) -> bool {
    for i in 0..commands.len().saturating_sub(1) {
        let (a, b) = (&commands[i], &commands[i + 1]);
        match (a, b) {
            // correction then entangler
            (Command::CorrectX { qubit, signals }, Command::Entangle(u, v)) => {
                let (qubit, signals) = (*qubit, *signals);
                let (u, v) = (*u, *v);
                let e = commands.remove(i + 1);
                commands.insert(i, e);
                if qubit == u || qubit == v {
                    let other = if qubit == u { v } else { u };
                    commands.insert(
                        i + 2,
                        Command::CorrectZ {
                            qubit: other,
                            signals,
                        },
                    );
                }
                return true;
            }
            (Command::CorrectZ { .. }, Command::Entangle(..)) => {
                commands.swap(i, i + 1);
                return true;
            }
            // correction then measurement
            (Command::CorrectX { qubit, signals }, Command::Measure(m)) => {
                if *qubit == m.qubit {
                    let signals = *signals;
                    commands.remove(i);
                    if let Command::Measure(m) = &mut commands[i] {
                        m.x_signals = m.x_signals.xor(signals);
                    }
                } else {
                    commands.swap(i, i + 1);
                }
                return true;
            }
            (Command::CorrectZ { qubit, signals }, Command::Measure(m)) => {
                if *qubit == m.qubit {
                    let signals = *signals;
                    commands.remove(i);
                    if let Command::Measure(m) = &mut commands[i] {
                        m.z_signals = m.z_signals.xor(signals);
                    }
                } else {
                    commands.swap(i, i + 1);
                }
                return true;
            }
            // measurement then entangler (disjoint in runnable patterns)
            (Command::Measure(_), Command::Entangle(..)) => {
                commands.swap(i, i + 1);
                return true;
            }
            // anything except a preparation, then a preparation
            (a, Command::Prepare(_)) if !matches!(a, Command::Prepare(_)) => {
                commands.swap(i, i + 1);
                return true;
            }
            _ => {}
        }
    }
    false
}

/// Canonical layout of the four blocks: preparations printed in ascending
/// qubit order, entanglers deduplicated mod 2 and printed ascending with
/// normalized endpoints, measurement order preserved, corrections merged per
/// qubit and kind.
fn canonicalize(commands: Vec<Command>) -> Vec<Command> {
    let mut preps = Vec::new();
    let mut entangles: Vec<(usize, usize)> = Vec::new();
    let mut measures = Vec::new();
    let mut corrections: Vec<(usize, u8, Signals)> = Vec::new();
    for c in commands {
        match c {
            Command::Prepare(q) => preps.push(q),
            Command::Entangle(a, b) => {
                let key = (a.min(b), a.max(b));
                // CZ is an involution: cancel pairs
                if let Some(pos) = entangles.iter().position(|&e| e == key) {
                    entangles.remove(pos);
                } else {
                    entangles.push(key);
                }
            }
            Command::Measure(m) => measures.push(Command::Measure(m)),
            Command::CorrectX { qubit, signals } => {
                merge_correction(&mut corrections, qubit, 1, signals)
            }
            Command::CorrectZ { qubit, signals } => {
                merge_correction(&mut corrections, qubit, 0, signals)
            }
        }
    }
    preps.sort_unstable_by(|a, b| b.cmp(a));
    entangles.sort_unstable_by(|a, b| b.cmp(a));
    corrections.sort_unstable_by_key(|&(q, kind, s)| (q, kind, s.mask, s.plus_one));
    let mut out = Vec::new();
    out.extend(preps.into_iter().map(Command::Prepare));
    out.extend(entangles.into_iter().map(|(a, b)| Command::Entangle(a, b)));
    out.extend(measures);
    out.extend(corrections.into_iter().map(|(qubit, kind, signals)| {
        if kind == 1 {
            Command::CorrectX { qubit, signals }
        } else {
            Command::CorrectZ { qubit, signals }
        }
    }));
    out
}

fn merge_correction(list: &mut Vec<(usize, u8, Signals)>, qubit: usize, kind: u8, signals: Signals) {
    if let Some(entry) = list.iter_mut().find(|(q, k, _)| *q == qubit && *k == kind) {
        entry.2 = entry.2.xor(signals);
    } else {
        list.push((qubit, kind, signals));
    }
    list.retain(|(_, _, s)| !s.is_trivial());
}

/// True when the command list is already in N* E* M* C* execution order.
pub fn is_standard_form(p: &Pattern) -> bool {
    let rank = |c: &Command| match c {
        Command::Prepare(_) => 0,
        Command::Entangle(..) => 1,
        Command::Measure(_) => 2,
        _ => 3,
    };
    p.commands().windows(2).all(|w| rank(&w[0]) <= rank(&w[1]))
}

/// Rewrite into standard form. Fails on non-runnable input.
pub fn standardize(p: &Pattern) -> Result<Pattern, PatternError> {
    let report = p.check_runnable();
    if let Some((idx, reason)) = report.violation {
        return Err(PatternError::NotRunnable(format!(
            "command {}: {}",
            idx, reason
        )));
    }
    let mut commands = p.commands().to_vec();
    let mut prev = measure(&commands);
    while step(&mut commands) {
        let next = measure(&commands);
        assert!(
            next < prev,
            "standardization measure must decrease: {:?} -> {:?}",
            prev,
            next
        );
        prev = next;
    }
    let out = Pattern::new(p.names().to_vec(), canonicalize(commands))?;
    debug_assert!(is_standard_form(&out));
    Ok(out)
}

/// Drop signal dependencies a Pauli measurement absorbs:
/// `M^X X = M^X` and `M^Z Z = M^Z` remove the whole x- (z-) set, and on a
/// Y measurement a simultaneous x and z dependency on the same outcome is
/// absorbed jointly (`M^Y Y = M^Y`; the leftover phase is per branch and
/// tracked only by the simulator).
pub fn absorb_pauli_corrections(p: &Pattern) -> Pattern {
    let mut out = p.clone();
    let commands = out.commands.iter_mut();
    for c in commands {
        let Command::Measure(m) = c else { continue };
        match m.label {
            MeasLabel::Pauli(Axis::X) => m.x_signals = Signals::NONE,
            MeasLabel::Pauli(Axis::Z) => m.z_signals = Signals::NONE,
            MeasLabel::Pauli(Axis::Y) => {
                let common = m.x_signals.mask.intersection(m.z_signals.mask);
                m.x_signals.mask = m.x_signals.mask.difference(common);
                m.z_signals.mask = m.z_signals.mask.difference(common);
                if m.x_signals.plus_one && m.z_signals.plus_one {
                    m.x_signals.plus_one = false;
                    m.z_signals.plus_one = false;
                }
            }
            MeasLabel::Plane(_) => {}
        }
    }
    out
}
