//! Dense state-vector execution of patterns: single-branch runs, exhaustive
//! branch enumeration, and determinism classification.
//!
//! The register holds one column per input basis state, so a run produces
//! the whole branch map (the linear map from the input space to the output
//! space along one outcome string) in a single pass. Measured qubits are
//! contracted out immediately, keeping memory at `2^(live qubits)` per
//! column.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{OpenGraph, Plane, VertexSet};
use crate::linalg::{equal_up_to_phase, proportional, C64, CMat};
use crate::pattern::{effective_plane_angle, Angle, Command, Pattern, PatternError};
use crate::pauli::{PauliOp, PauliString};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("pattern is not runnable: {0}")]
    NotRunnable(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("outcome string has {got} bits, pattern measures {expected} qubits")]
    OutcomeLength { expected: usize, got: usize },
    #[error("{measured} measured qubits exceed the branch enumeration bound {bound}")]
    BranchBound { measured: usize, bound: usize },
    #[error("pauli support mismatch: {0}")]
    SupportMismatch(String),
}

/// Simulation limits and tolerances.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    /// Maximum number of measured qubits for exhaustive branch enumeration.
    pub max_branch_qubits: usize,
    pub tolerance: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            max_branch_qubits: 12,
            tolerance: 1e-9,
        }
    }
}

/// State over the currently-live qubits, stacked as one column per input
/// basis state. Bit `k` of a row index is the basis state of `live[k]`.
#[derive(Debug, Clone)]
pub struct StateVector {
    live: Vec<usize>,
    pub ncols: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Register holding the identity embedding on `inputs` (one column per
    /// basis state of the listed qubits, most significant bit first).
    pub fn input_columns(inputs: &[usize]) -> StateVector {
        let m = inputs.len();
        let ncols = 1usize << m;
        let mut amps = vec![C64::new(0.0, 0.0); ncols * ncols];
        for c in 0..ncols {
            let mut r = 0usize;
            for (j, _) in inputs.iter().enumerate() {
                if c >> (m - 1 - j) & 1 == 1 {
                    r |= 1 << j;
                }
            }
            amps[r * ncols + c] = C64::new(1.0, 0.0);
        }
        StateVector {
            live: inputs.to_vec(),
            ncols,
            amps,
        }
    }

    pub fn live(&self) -> &[usize] {
        &self.live
    }

    pub fn bit_of(&self, q: usize) -> Option<usize> {
        self.live.iter().position(|&v| v == q)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn rows(&self) -> usize {
        1usize << self.live.len()
    }

    /// Adjoin a fresh qubit prepared in `|+>` as the new top bit.
    pub fn prepare_plus(&mut self, q: usize) {
        let rows = self.rows();
        let mut amps = vec![C64::new(0.0, 0.0); rows * 2 * self.ncols];
        for r in 0..rows {
            for c in 0..self.ncols {
                let v = self.amps[r * self.ncols + c] * FRAC_1_SQRT_2;
                amps[r * self.ncols + c] = v;
                amps[(r + rows) * self.ncols + c] = v;
            }
        }
        self.live.push(q);
        self.amps = amps;
    }

    pub fn cz(&mut self, u: usize, v: usize) {
        let (bu, bv) = (self.bit_of(u).unwrap(), self.bit_of(v).unwrap());
        for r in 0..self.rows() {
            if r >> bu & 1 == 1 && r >> bv & 1 == 1 {
                for c in 0..self.ncols {
                    self.amps[r * self.ncols + c] = -self.amps[r * self.ncols + c];
                }
            }
        }
    }

    pub fn pauli_x(&mut self, q: usize) {
        let b = self.bit_of(q).unwrap();
        for r in 0..self.rows() {
            if r >> b & 1 == 0 {
                let (lo, hi) = (r, r | 1 << b);
                for c in 0..self.ncols {
                    self.amps.swap(lo * self.ncols + c, hi * self.ncols + c);
                }
            }
        }
    }

    pub fn pauli_z(&mut self, q: usize) {
        let b = self.bit_of(q).unwrap();
        for r in 0..self.rows() {
            if r >> b & 1 == 1 {
                for c in 0..self.ncols {
                    self.amps[r * self.ncols + c] = -self.amps[r * self.ncols + c];
                }
            }
        }
    }

    /// `Y = i X Z` with the phase applied.
    pub fn pauli_y(&mut self, q: usize) {
        let b = self.bit_of(q).unwrap();
        let i = C64::new(0.0, 1.0);
        for r in 0..self.rows() {
            if r >> b & 1 == 0 {
                let (lo, hi) = (r * self.ncols, (r | 1 << b) * self.ncols);
                for c in 0..self.ncols {
                    let a0 = self.amps[lo + c];
                    let a1 = self.amps[hi + c];
                    self.amps[lo + c] = -i * a1;
                    self.amps[hi + c] = i * a0;
                }
            }
        }
    }

    pub fn hadamard(&mut self, q: usize) {
        let b = self.bit_of(q).unwrap();
        for r in 0..self.rows() {
            if r >> b & 1 == 0 {
                let (lo, hi) = (r * self.ncols, (r | 1 << b) * self.ncols);
                for c in 0..self.ncols {
                    let a0 = self.amps[lo + c];
                    let a1 = self.amps[hi + c];
                    self.amps[lo + c] = (a0 + a1) * FRAC_1_SQRT_2;
                    self.amps[hi + c] = (a0 - a1) * FRAC_1_SQRT_2;
                }
            }
        }
    }

    /// `diag(1, e^{i theta})` on one qubit.
    pub fn phase(&mut self, q: usize, theta: f64) {
        let b = self.bit_of(q).unwrap();
        let ph = (C64::new(0.0, 1.0) * theta).exp();
        for r in 0..self.rows() {
            if r >> b & 1 == 1 {
                for c in 0..self.ncols {
                    self.amps[r * self.ncols + c] *= ph;
                }
            }
        }
    }

    pub fn scale(&mut self, s: C64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// Project qubit `q` onto the bra with coefficients `(b0, b1)` (already
    /// conjugated) and drop it from the register.
    pub fn project_out(&self, q: usize, b0: C64, b1: C64) -> StateVector {
        let k = self.bit_of(q).expect("projected qubit must be live");
        let rows_out = self.rows() >> 1;
        let mut amps = vec![C64::new(0.0, 0.0); rows_out * self.ncols];
        let low_mask = (1usize << k) - 1;
        for r in 0..rows_out {
            let r0 = ((r & !low_mask) << 1) | (r & low_mask);
            let r1 = r0 | 1 << k;
            for c in 0..self.ncols {
                amps[r * self.ncols + c] =
                    b0 * self.amps[r0 * self.ncols + c] + b1 * self.amps[r1 * self.ncols + c];
            }
        }
        let mut live = self.live.clone();
        live.remove(k);
        StateVector {
            live,
            ncols: self.ncols,
            amps,
        }
    }

    /// Contract the columns against an input vector, leaving a single column.
    pub fn apply_input_vector(&self, psi: &[C64]) -> StateVector {
        assert_eq!(psi.len(), self.ncols);
        let rows = self.rows();
        let mut amps = vec![C64::new(0.0, 0.0); rows];
        for r in 0..rows {
            for c in 0..self.ncols {
                amps[r] += self.amps[r * self.ncols + c] * psi[c];
            }
        }
        StateVector {
            live: self.live.clone(),
            ncols: 1,
            amps,
        }
    }

    /// Extract the matrix with rows ordered by the given qubit list (most
    /// significant first). The listed qubits must be exactly the live ones.
    pub fn as_matrix(&self, row_order: &[usize]) -> CMat {
        assert_eq!(row_order.len(), self.live.len());
        let m = row_order.len();
        let mut out = CMat::zeros(1 << m, self.ncols);
        let bits: Vec<usize> = row_order
            .iter()
            .map(|&q| self.bit_of(q).expect("row qubit must be live"))
            .collect();
        for ro in 0..1usize << m {
            let mut r = 0usize;
            for (j, &b) in bits.iter().enumerate() {
                if ro >> (m - 1 - j) & 1 == 1 {
                    r |= 1 << b;
                }
            }
            for c in 0..self.ncols {
                out[(ro, c)] = self.amps[r * self.ncols + c];
            }
        }
        out
    }

    fn as_flat_cmat(&self) -> CMat {
        CMat {
            rows: self.amps.len(),
            cols: 1,
            data: self.amps.clone(),
        }
    }
}

/// Bra coefficients (conjugated) of the outcome state of a measurement in
/// `plane` at angle `a`: outcome 0 projects onto `|+_{plane,a}>`, outcome 1
/// onto `|-_{plane,a}>`.
pub fn measurement_bra(plane: Plane, a: f64, outcome: bool) -> (C64, C64) {
    let i = C64::new(0.0, 1.0);
    match (plane, outcome) {
        (Plane::XY, false) => (
            C64::new(FRAC_1_SQRT_2, 0.0),
            (i * (-a)).exp() * FRAC_1_SQRT_2,
        ),
        (Plane::XY, true) => (
            C64::new(FRAC_1_SQRT_2, 0.0),
            -(i * (-a)).exp() * FRAC_1_SQRT_2,
        ),
        (Plane::XZ, false) => (
            C64::new((a / 2.0).cos(), 0.0),
            C64::new((a / 2.0).sin(), 0.0),
        ),
        (Plane::XZ, true) => (
            C64::new((a / 2.0).sin(), 0.0),
            C64::new(-(a / 2.0).cos(), 0.0),
        ),
        (Plane::YZ, false) => (
            C64::new((a / 2.0).cos(), 0.0),
            -i * (a / 2.0).sin(),
        ),
        (Plane::YZ, true) => (
            C64::new((a / 2.0).sin(), 0.0),
            i * (a / 2.0).cos(),
        ),
    }
}

/// The branch map along one outcome string: the linear map from the input
/// space to the output space, rows and columns in declaration order.
#[derive(Debug, Clone)]
pub struct BranchMap {
    /// One bit per measurement, in execution order.
    pub outcomes: Vec<bool>,
    pub map: CMat,
}

impl BranchMap {
    pub fn outcome_string(&self) -> String {
        self.outcomes.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// A pattern checked runnable with all angles resolved, ready to execute.
pub struct Executable<'p> {
    pattern: &'p Pattern,
    /// (command index, qubit, plane+angle resolver inputs) per measurement,
    /// execution order.
    measures: Vec<usize>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl<'p> Executable<'p> {
    pub fn new(pattern: &'p Pattern) -> Result<Executable<'p>, SimError> {
        let report = pattern.check_runnable();
        if let Some((idx, reason)) = report.violation {
            return Err(SimError::NotRunnable(format!("command {}: {}", idx, reason)));
        }
        for c in pattern.commands() {
            if let Command::Measure(m) = c {
                if let Angle::Sym { name, .. } = &m.angle {
                    if !m.label.is_pauli() {
                        return Err(PatternError::UnboundAngle(name.clone()).into());
                    }
                }
            }
        }
        let measures = pattern
            .commands()
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, Command::Measure(_)))
            .map(|(i, _)| i)
            .collect();
        let inputs = pattern.inputs().iter().collect();
        let outputs = pattern.outputs().iter().collect();
        Ok(Executable {
            pattern,
            measures,
            inputs,
            outputs,
        })
    }

    pub fn measurement_count(&self) -> usize {
        self.measures.len()
    }

    fn initial_state(&self) -> StateVector {
        StateVector::input_columns(&self.inputs)
    }

    /// Apply one non-measurement command in place.
    fn apply(&self, state: &mut StateVector, c: &Command, outcomes: VertexSet) {
        match c {
            Command::Prepare(q) => state.prepare_plus(*q),
            Command::Entangle(u, v) => state.cz(*u, *v),
            Command::CorrectX { qubit, signals } => {
                if signals.evaluate(outcomes) {
                    state.pauli_x(*qubit);
                }
            }
            Command::CorrectZ { qubit, signals } => {
                if signals.evaluate(outcomes) {
                    state.pauli_z(*qubit);
                }
            }
            Command::Measure(_) => unreachable!("measurements handled by the caller"),
        }
    }

    fn measure_into(
        &self,
        state: &StateVector,
        cmd_idx: usize,
        outcome: bool,
        outcomes: VertexSet,
    ) -> StateVector {
        let Command::Measure(m) = &self.pattern.commands()[cmd_idx] else {
            unreachable!()
        };
        let resolved = match &m.angle {
            Angle::Num(x) => *x,
            Angle::Sym { .. } => 0.0, // pauli labels ignore the stored angle
        };
        let x_par = m.x_signals.evaluate(outcomes);
        let z_par = m.z_signals.evaluate(outcomes);
        let (plane, a) = effective_plane_angle(m, resolved, x_par, z_par);
        let (b0, b1) = measurement_bra(plane, a, outcome);
        state.project_out(m.qubit, b0, b1)
    }

    /// Run one branch given an outcome bit per measurement (execution order).
    pub fn run_branch(&self, outcome_bits: &[bool]) -> Result<BranchMap, SimError> {
        if outcome_bits.len() != self.measures.len() {
            return Err(SimError::OutcomeLength {
                expected: self.measures.len(),
                got: outcome_bits.len(),
            });
        }
        let mut state = self.initial_state();
        let mut outcomes = VertexSet::EMPTY;
        let mut next_measure = 0usize;
        for (idx, c) in self.pattern.commands().iter().enumerate() {
            if let Command::Measure(m) = c {
                let bit = outcome_bits[next_measure];
                state = self.measure_into(&state, idx, bit, outcomes);
                if bit {
                    outcomes.insert(m.qubit);
                }
                next_measure += 1;
            } else {
                self.apply(&mut state, c, outcomes);
            }
        }
        Ok(BranchMap {
            outcomes: outcome_bits.to_vec(),
            map: state.as_matrix(&self.outputs),
        })
    }

    /// All `2^n` branch maps by depth-first enumeration (shared prefixes are
    /// computed once).
    pub fn enumerate_branches(&self, opts: &SimOptions) -> Result<Vec<BranchMap>, SimError> {
        if self.measures.len() > opts.max_branch_qubits {
            return Err(SimError::BranchBound {
                measured: self.measures.len(),
                bound: opts.max_branch_qubits,
            });
        }
        let mut out = Vec::with_capacity(1 << self.measures.len());
        let state = self.initial_state();
        self.enum_rec(state, 0, VertexSet::EMPTY, &mut Vec::new(), &mut out);
        Ok(out)
    }

    fn enum_rec(
        &self,
        mut state: StateVector,
        mut idx: usize,
        outcomes: VertexSet,
        bits: &mut Vec<bool>,
        out: &mut Vec<BranchMap>,
    ) {
        let commands = self.pattern.commands();
        while idx < commands.len() {
            if let Command::Measure(m) = &commands[idx] {
                for outcome in [false, true] {
                    let child = self.measure_into(&state, idx, outcome, outcomes);
                    let mut child_outcomes = outcomes;
                    if outcome {
                        child_outcomes.insert(m.qubit);
                    }
                    bits.push(outcome);
                    self.enum_rec(child, idx + 1, child_outcomes, bits, out);
                    bits.pop();
                }
                return;
            }
            self.apply(&mut state, &commands[idx], outcomes);
            idx += 1;
        }
        out.push(BranchMap {
            outcomes: bits.clone(),
            map: state.as_matrix(&self.outputs),
        });
    }
}

pub fn run_branch(p: &Pattern, outcome_bits: &[bool]) -> Result<BranchMap, SimError> {
    Executable::new(p)?.run_branch(outcome_bits)
}

pub fn enumerate_branch_maps(p: &Pattern, opts: &SimOptions) -> Result<Vec<BranchMap>, SimError> {
    Executable::new(p)?.enumerate_branches(opts)
}

/// `max |sum_s A_s^dag A_s - I|`, which must vanish for any runnable pattern.
pub fn kraus_defect(branches: &[BranchMap]) -> f64 {
    let dim = branches[0].map.cols;
    let mut acc = CMat::zeros(dim, dim);
    for b in branches {
        acc.add_assign(&b.map.dagger().mul(&b.map));
    }
    acc.max_abs_diff(&CMat::identity(dim))
}

/// Exact action of a Pauli string on a state vector, including the global
/// phase. The string is indexed by the same qubit ids as the register.
pub fn apply_pauli(state: &mut StateVector, p: &PauliString) -> Result<(), SimError> {
    for (v, &letter) in p.letters().iter().enumerate() {
        if letter == PauliOp::I {
            continue;
        }
        if state.bit_of(v).is_none() {
            return Err(SimError::SupportMismatch(format!(
                "letter {:?} on dead qubit {}",
                letter, v
            )));
        }
        match letter {
            PauliOp::X => state.pauli_x(v),
            PauliOp::Y => state.pauli_y(v),
            PauliOp::Z => state.pauli_z(v),
            PauliOp::I => unreachable!(),
        }
    }
    state.scale(p.phase().as_complex());
    Ok(())
}

/// The graph state as a stacked register: columns index the input basis,
/// non-inputs prepared in `|+>`, all edges entangled. Live qubits are the
/// graph vertices in declaration order.
pub fn graph_state_columns(g: &OpenGraph) -> StateVector {
    let inputs: Vec<usize> = g.inputs().iter().collect();
    let mut state = StateVector::input_columns(&inputs);
    for v in 0..g.vertex_count() {
        if !g.inputs().contains(v) {
            state.prepare_plus(v);
        }
    }
    for &(u, v) in g.edges() {
        state.cz(u, v);
    }
    state
}

/// How the angle grid for uniformity checks is sampled.
#[derive(Debug, Clone)]
pub struct AnglePolicy {
    pub seed: u64,
    /// Take the full `{0, pi/2, pi}^n` grid when at most this many free
    /// angles, otherwise sample `grid_samples` random grid points.
    pub full_grid_max: usize,
    pub grid_samples: usize,
    pub random_vectors: usize,
    pub tolerance: f64,
}

impl Default for AnglePolicy {
    fn default() -> Self {
        AnglePolicy {
            seed: 0x6d62_7163,
            full_grid_max: 6,
            grid_samples: 200,
            random_vectors: 20,
            tolerance: 1e-9,
        }
    }
}

impl AnglePolicy {
    /// Angle vectors over `free` qubits per the policy.
    pub fn assignments(&self, free: &[usize]) -> Vec<BTreeMap<usize, f64>> {
        use std::f64::consts::{FRAC_PI_2, PI};
        let grid = [0.0, FRAC_PI_2, PI];
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::new();
        if free.len() <= self.full_grid_max {
            let total = 3usize.pow(free.len() as u32);
            for mut k in 0..total {
                let mut a = BTreeMap::new();
                for &q in free {
                    a.insert(q, grid[k % 3]);
                    k /= 3;
                }
                out.push(a);
            }
        } else {
            for _ in 0..self.grid_samples {
                out.push(
                    free.iter()
                        .map(|&q| (q, grid[rng.gen_range(0..3)]))
                        .collect(),
                );
            }
        }
        for _ in 0..self.random_vectors {
            out.push(
                free.iter()
                    .map(|&q| (q, rng.gen_range(0.0..std::f64::consts::TAU)))
                    .collect(),
            );
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformWitness {
    pub angles: Vec<(String, f64)>,
    pub branches: (String, String),
}

#[derive(Debug, Clone, Serialize)]
pub struct DeterminismClass {
    /// All nonzero branch maps pairwise proportional.
    pub deterministic: bool,
    /// All branch maps equal up to a global phase.
    pub strong: bool,
    /// Deterministic for every sampled angle assignment.
    pub uniform: bool,
    /// Deterministic after each measurement plus the corrections in its
    /// segment (up to the next measurement), along the reference branch.
    pub stepwise: bool,
    pub deterministic_witness: Option<(String, String)>,
    pub strong_witness: Option<(String, String)>,
    pub uniform_witness: Option<UniformWitness>,
    pub stepwise_witness: Option<String>,
    /// Description of the angle policy uniformity was certified on.
    pub policy: String,
}

fn branch_pair_check(
    branches: &[BranchMap],
    tol: f64,
    strong: bool,
) -> Option<(String, String)> {
    let reference = branches.iter().find(|b| b.map.frobenius() > tol)?;
    for b in branches {
        if !strong && b.map.frobenius() <= tol {
            continue; // zero branches never occur
        }
        let ok = if strong {
            equal_up_to_phase(&reference.map, &b.map, tol)
        } else {
            proportional(&reference.map, &b.map, tol)
        };
        if !ok {
            return Some((reference.outcome_string(), b.outcome_string()));
        }
    }
    None
}

/// Stepwise check: walk the pattern, and at each measurement execute both
/// outcomes together with the commands up to the next measurement; the two
/// resulting states must be proportional. Continues along the outcome-0
/// branch (or the surviving branch when one has zero amplitude).
fn stepwise_check(exec: &Executable, tol: f64) -> Option<String> {
    let commands = exec.pattern.commands();
    let mut state = exec.initial_state();
    let mut outcomes = VertexSet::EMPTY;
    let mut idx = 0usize;
    let mut spine = String::new();
    while idx < commands.len() {
        let Command::Measure(m) = &commands[idx] else {
            exec.apply(&mut state, &commands[idx], outcomes);
            idx += 1;
            continue;
        };
        let seg_end = (idx + 1..commands.len())
            .find(|&j| matches!(commands[j], Command::Measure(_)))
            .unwrap_or(commands.len());
        let mut children = Vec::new();
        for outcome in [false, true] {
            let mut child = exec.measure_into(&state, idx, outcome, outcomes);
            let mut child_outcomes = outcomes;
            if outcome {
                child_outcomes.insert(m.qubit);
            }
            for j in idx + 1..seg_end {
                exec.apply(&mut child, &commands[j], child_outcomes);
            }
            children.push((child, child_outcomes));
        }
        let n0 = children[0].0.norm();
        let n1 = children[1].0.norm();
        let keep = if n0 <= tol {
            1
        } else if n1 <= tol {
            0
        } else {
            if !proportional(
                &children[0].0.as_flat_cmat(),
                &children[1].0.as_flat_cmat(),
                tol,
            ) {
                return Some(format!(
                    "branches differ after measuring `{}` (prior outcomes `{}`)",
                    exec.pattern.name(m.qubit),
                    spine
                ));
            }
            0
        };
        spine.push(if keep == 1 { '1' } else { '0' });
        let (child, child_outcomes) = children.swap_remove(keep);
        state = child;
        outcomes = child_outcomes;
        idx = seg_end;
    }
    None
}

/// Classify determinism of a runnable pattern: plain/strong at its own
/// angles, stepwise along segments, and uniform over the angle policy.
pub fn classify_determinism(
    p: &Pattern,
    policy: &AnglePolicy,
    opts: &SimOptions,
) -> Result<DeterminismClass, SimError> {
    let tol = policy.tolerance;
    let exec = Executable::new(p)?;
    let branches = exec.enumerate_branches(opts)?;
    let deterministic_witness = branch_pair_check(&branches, tol, false);
    let strong_witness = branch_pair_check(&branches, tol, true);
    let stepwise_witness = stepwise_check(&exec, tol);

    let free: Vec<usize> = p
        .commands()
        .iter()
        .filter_map(|c| match c {
            Command::Measure(m) if !m.label.is_pauli() => Some(m.qubit),
            _ => None,
        })
        .collect();
    let assignments = policy.assignments(&free);
    let policy_desc = if free.len() <= policy.full_grid_max {
        format!(
            "full {{0,pi/2,pi}}^{} grid plus {} random vectors (seed {})",
            free.len(),
            policy.random_vectors,
            policy.seed
        )
    } else {
        format!(
            "{} sampled grid points plus {} random vectors (seed {})",
            policy.grid_samples, policy.random_vectors, policy.seed
        )
    };
    let mut uniform_witness = None;
    for assignment in &assignments {
        let q = p.with_angles(assignment);
        let branches = enumerate_branch_maps(&q, opts)?;
        if let Some(pair) = branch_pair_check(&branches, tol, false) {
            uniform_witness = Some(UniformWitness {
                angles: assignment
                    .iter()
                    .map(|(&q, &a)| (p.name(q).to_string(), a))
                    .collect(),
                branches: pair,
            });
            break;
        }
    }

    Ok(DeterminismClass {
        deterministic: deterministic_witness.is_none(),
        strong: strong_witness.is_none(),
        uniform: uniform_witness.is_none(),
        stepwise: stepwise_witness.is_none(),
        deterministic_witness,
        strong_witness,
        uniform_witness,
        stepwise_witness,
        policy: policy_desc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// One-qubit teleport: N[b] E[a,b] M[a;XY;0] X[b]^{sa}. Outcome 0 gives
    /// H/sqrt(2); frozen from the 4-dimensional computation
    /// <+|_a CZ (|psi>_a |+>_b).
    #[test]
    fn teleport_branch_maps() {
        let p = parse_pattern("X[b]^{sa} M[a;XY;0] E[a,b] N[b]").unwrap();
        let b0 = run_branch(&p, &[false]).unwrap();
        let mut expect = CMat::zeros(2, 2);
        expect[(0, 0)] = c(0.5, 0.0);
        expect[(0, 1)] = c(0.5, 0.0);
        expect[(1, 0)] = c(0.5, 0.0);
        expect[(1, 1)] = c(-0.5, 0.0);
        assert!(b0.map.max_abs_diff(&expect) < 1e-12);

        // outcome 1 equals the same map up to a global phase
        let b1 = run_branch(&p, &[true]).unwrap();
        assert!(equal_up_to_phase(&b0.map, &b1.map, 1e-12));
    }

    #[test]
    fn empty_pattern_is_identity() {
        let p = parse_pattern("E[a,a2] E[a,a2]").unwrap(); // touches both, no prep/measure
        let b = run_branch(&p, &[]).unwrap();
        assert!(b.map.max_abs_diff(&CMat::identity(4)) < 1e-12);
    }

    #[test]
    fn projective_pair_is_kraus_complete() {
        let p = parse_pattern("M[a;XY;0.7]").unwrap();
        let branches = enumerate_branch_maps(&p, &SimOptions::default()).unwrap();
        assert_eq!(branches.len(), 2);
        assert!(kraus_defect(&branches) < 1e-12);
    }

    #[test]
    fn branch_bound_enforced() {
        let p = parse_pattern("M[a;XY;0] M[b;XY;0]").unwrap();
        let opts = SimOptions {
            max_branch_qubits: 1,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_branch_maps(&p, &opts),
            Err(SimError::BranchBound { .. })
        ));
    }

    #[test]
    fn teleport_classifies_fully_deterministic() {
        let p = parse_pattern("X[b]^{sa} M[a;XY;0.35] E[a,b] N[b]").unwrap();
        let class =
            classify_determinism(&p, &AnglePolicy::default(), &SimOptions::default()).unwrap();
        assert!(class.deterministic && class.strong && class.uniform && class.stepwise);
    }

    #[test]
    fn broken_teleport_fails_uniformity() {
        // dropped correction: not deterministic away from angle 0
        let p = parse_pattern("M[a;XY;0.9] E[a,b] N[b]").unwrap();
        let class =
            classify_determinism(&p, &AnglePolicy::default(), &SimOptions::default()).unwrap();
        assert!(!class.deterministic);
        assert!(!class.uniform);
        assert!(class.uniform_witness.is_some());
    }

    #[test]
    fn pauli_application_is_exact() {
        // X on |0> gives |1>
        let mut s = StateVector::input_columns(&[0]);
        s.pauli_x(0);
        let m = s.as_matrix(&[0]);
        assert!(m[(1, 0)].norm() > 0.99 && m[(0, 0)].norm() < 1e-12);

        // identity string leaves the state alone
        let mut s = StateVector::input_columns(&[0, 1]);
        let before = s.as_matrix(&[0, 1]);
        apply_pauli(&mut s, &PauliString::identity(2)).unwrap();
        assert!(s.as_matrix(&[0, 1]).max_abs_diff(&before) < 1e-15);
    }

    #[test]
    fn measurement_bras_are_orthonormal() {
        for plane in [Plane::XY, Plane::XZ, Plane::YZ] {
            for k in 0..24 {
                let a = 0.3 * k as f64;
                let (p0, p1) = measurement_bra(plane, a, false);
                let (m0, m1) = measurement_bra(plane, a, true);
                let norm0 = p0.norm_sqr() + p1.norm_sqr();
                let norm1 = m0.norm_sqr() + m1.norm_sqr();
                // bras are conjugated, so orthogonality is p . conj(m)
                let ip = p0 * m0.conj() + p1 * m1.conj();
                assert!((norm0 - 1.0).abs() < 1e-12);
                assert!((norm1 - 1.0).abs() < 1e-12);
                assert!(ip.norm() < 1e-12);
            }
        }
    }
}
