//! Desk-scale searches for flow, generalized flow, and Pauli flow.
//!
//! The flow finder is exhaustive backtracking over candidate correction
//! functions with cycle checking. The gflow and Pauli-flow finders build
//! layers backward from the outputs: a vertex joins the next layer when a
//! GF(2) system over the already-layered candidates solves its membership
//! constraints (odd-neighborhood membership is linear over symmetric
//! difference). Correctness rests on post-hoc verification; every returned
//! structure passes the matching verifier.

use std::collections::BTreeMap;
use std::time::Instant;

use thiserror::Error;

use crate::flow::{verify, CorrectionStructure, FlowError, FlowKind};
use crate::gf2::{gf2_solve, Gf2System};
use crate::graph::{
    graph_from_parts, Axis, GraphError, MeasLabel, OpenGraph, Plane, VertexSet,
};
use crate::order::PartialOrder;

#[derive(Debug, Error)]
pub enum FindError {
    #[error("flow search requires XY labels only; `{0}` is {1}")]
    NonXyLabel(String, MeasLabel),
    #[error("gflow search requires plane labels; `{0}` is Pauli-measured")]
    PauliLabel(String),
    #[error("graph has {n} vertices, over the configured bound {max}")]
    TooLarge { n: usize, max: usize },
    #[error("family size must be at least 1")]
    EmptyFamily,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Vertex bound for the Pauli-flow search.
    pub max_vertices: usize,
    /// Wall-clock budget; exceeding it returns `found = false` with the
    /// budget flag set instead of a silent wrong negative.
    pub budget_ms: Option<u64>,
    /// Nullspace enumeration bound when picking the minimum-popcount
    /// correcting set.
    pub max_nullspace_bits: u32,
    /// Per-vertex exhaustive subset search bound (candidate count in bits)
    /// for the Pauli-flow fallback.
    pub max_subset_bits: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_vertices: 14,
            budget_ms: None,
            max_nullspace_bits: 16,
            max_subset_bits: 12,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    /// Backtracking nodes or GF(2)/subset solves explored.
    pub nodes: u64,
    /// Layers built by the layered searches.
    pub layers: usize,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone)]
pub struct FindResult {
    pub found: bool,
    pub structure: Option<CorrectionStructure>,
    pub budget_exceeded: bool,
    pub stats: SearchStats,
}

impl FindResult {
    fn not_found(stats: SearchStats, budget_exceeded: bool) -> FindResult {
        FindResult {
            found: false,
            structure: None,
            budget_exceeded,
            stats,
        }
    }
}

struct Budget {
    start: Instant,
    limit_ms: Option<u64>,
}

impl Budget {
    fn new(limit_ms: Option<u64>) -> Budget {
        Budget {
            start: Instant::now(),
            limit_ms,
        }
    }

    fn exceeded(&self) -> bool {
        self.limit_ms
            .is_some_and(|ms| self.start.elapsed().as_millis() > ms as u128)
    }

    fn elapsed_ms(&self) -> u128 {
        self.start.elapsed().as_millis()
    }
}

/// Relations forced by the flow conditions for `f(i) = fi`.
fn flow_relations(g: &OpenGraph, i: usize, fi: usize) -> Vec<(usize, usize)> {
    let mut rel = vec![(i, fi)];
    for k in g.neighborhood(fi).iter() {
        if k != i {
            rel.push((i, k));
        }
    }
    rel
}

/// Exhaustive backtracking flow search. Returns the unique flow function on
/// `|I| = |O|` geometries when one exists; the order is the transitive
/// closure of the relations F2 and F3 force.
pub fn find_flow(g: &OpenGraph, cfg: &SearchConfig) -> Result<FindResult, FindError> {
    for i in g.measured().iter() {
        match g.label(i) {
            Some(MeasLabel::Plane(Plane::XY)) => {}
            Some(l) => return Err(FindError::NonXyLabel(g.name(i).into(), l)),
            None => unreachable!(),
        }
    }
    let budget = Budget::new(cfg.budget_ms);
    let measured: Vec<usize> = g.measured().iter().collect();
    let candidates: Vec<Vec<usize>> = measured
        .iter()
        .map(|&i| {
            g.neighborhood(i)
                .intersection(g.prepared())
                .iter()
                .collect()
        })
        .collect();
    let mut stats = SearchStats::default();
    let mut assignment: Vec<usize> = Vec::new();
    let mut relations: Vec<(usize, usize)> = Vec::new();

    fn rec(
        g: &OpenGraph,
        measured: &[usize],
        candidates: &[Vec<usize>],
        assignment: &mut Vec<usize>,
        relations: &mut Vec<(usize, usize)>,
        stats: &mut SearchStats,
        budget: &Budget,
    ) -> Result<bool, bool> {
        // Err(true) signals budget exhaustion
        if budget.exceeded() {
            return Err(true);
        }
        let depth = assignment.len();
        if depth == measured.len() {
            return Ok(true);
        }
        let i = measured[depth];
        for &fi in &candidates[depth] {
            stats.nodes += 1;
            let forced = flow_relations(g, i, fi);
            let mut all = relations.clone();
            all.extend_from_slice(&forced);
            // forward check: the accumulated relations must stay acyclic
            if PartialOrder::from_relations(g.vertex_count(), &all).is_ok() {
                assignment.push(fi);
                let saved = relations.len();
                relations.extend_from_slice(&forced);
                if rec(g, measured, candidates, assignment, relations, stats, budget)? {
                    return Ok(true);
                }
                relations.truncate(saved);
                assignment.pop();
            }
        }
        Ok(false)
    }

    let outcome = rec(
        g,
        &measured,
        &candidates,
        &mut assignment,
        &mut relations,
        &mut stats,
        &budget,
    );
    stats.elapsed_ms = budget.elapsed_ms();
    match outcome {
        Err(_) => Ok(FindResult::not_found(stats, true)),
        Ok(false) => Ok(FindResult::not_found(stats, false)),
        Ok(true) => {
            let order = PartialOrder::from_relations(g.vertex_count(), &relations)
                .expect("checked acyclic during search");
            let corr: BTreeMap<usize, VertexSet> = measured
                .iter()
                .zip(&assignment)
                .map(|(&i, &fi)| (i, VertexSet::singleton(fi)))
                .collect();
            let structure = CorrectionStructure::build(g, FlowKind::Flow, &corr, order)?;
            debug_assert!(verify(g, &structure).map_or(false, |r| r.valid));
            Ok(FindResult {
                found: true,
                structure: Some(structure),
                budget_exceeded: false,
                stats,
            })
        }
    }
}

/// Solve the correcting-set constraints of vertex `i` against the layered
/// candidates `cols` (ascending vertex ids): rows force `Odd(K)` membership
/// to 0 outside `done + {i}` and to `target_i` at `i`; `forced` adds `i`
/// itself to the set.
fn solve_vertex(
    g: &OpenGraph,
    done: VertexSet,
    i: usize,
    cols: &[usize],
    target_i: bool,
    forced: bool,
    rows_free: VertexSet,
    max_nullspace_bits: u32,
) -> Option<VertexSet> {
    let mut sys = Gf2System::new(cols.len()).ok()?;
    for u in 0..g.vertex_count() {
        let constrained = if u == i {
            true
        } else {
            !done.contains(u) && !rows_free.contains(u)
        };
        if !constrained {
            continue;
        }
        let mut row = 0u64;
        for (c, &j) in cols.iter().enumerate() {
            if g.adjacent(u, j) {
                row |= 1 << c;
            }
        }
        let mut rhs = u == i && target_i;
        if forced && g.adjacent(u, i) {
            rhs ^= true;
        }
        sys.push_row(row, rhs);
    }
    let sol = gf2_solve(&sys).ok()??;
    let pick = sol.canonical(max_nullspace_bits);
    let mut k = VertexSet::EMPTY;
    for (c, &j) in cols.iter().enumerate() {
        if pick >> c & 1 == 1 {
            k.insert(j);
        }
    }
    if forced {
        k.insert(i);
    }
    Some(k)
}

/// Layered backward gflow search (maximally delayed under this policy).
pub fn find_gflow(g: &OpenGraph, cfg: &SearchConfig) -> Result<FindResult, FindError> {
    for i in g.measured().iter() {
        if g.label(i).is_some_and(|l| l.is_pauli()) {
            return Err(FindError::PauliLabel(g.name(i).into()));
        }
    }
    let budget = Budget::new(cfg.budget_ms);
    let mut stats = SearchStats::default();
    let mut done = g.outputs();
    let mut corr: BTreeMap<usize, VertexSet> = BTreeMap::new();
    let mut rounds: Vec<Vec<usize>> = Vec::new();
    loop {
        if budget.exceeded() {
            stats.elapsed_ms = budget.elapsed_ms();
            return Ok(FindResult::not_found(stats, true));
        }
        let mut admitted = Vec::new();
        for i in g.measured().difference(done).iter() {
            stats.nodes += 1;
            let (target_i, forced) = match g.label(i) {
                Some(MeasLabel::Plane(Plane::XY)) => (true, false),
                Some(MeasLabel::Plane(Plane::XZ)) => (true, true),
                Some(MeasLabel::Plane(Plane::YZ)) => (false, true),
                _ => unreachable!(),
            };
            if forced && g.inputs().contains(i) {
                continue; // i must belong to its own correcting set but cannot
            }
            let cols: Vec<usize> = done.difference(g.inputs()).iter().collect();
            if let Some(k) = solve_vertex(
                g,
                done,
                i,
                &cols,
                target_i,
                forced,
                VertexSet::EMPTY,
                cfg.max_nullspace_bits,
            ) {
                admitted.push((i, k));
            }
        }
        if admitted.is_empty() {
            break;
        }
        stats.layers += 1;
        let mut layer = Vec::new();
        for (i, k) in admitted {
            done.insert(i);
            corr.insert(i, k);
            layer.push(i);
        }
        rounds.push(layer);
        if done == g.all_vertices() {
            break;
        }
    }
    stats.elapsed_ms = budget.elapsed_ms();
    if done != g.all_vertices() {
        return Ok(FindResult::not_found(stats, false));
    }
    let mut layers: Vec<Vec<usize>> = rounds.into_iter().rev().collect();
    layers.push(g.outputs().iter().collect());
    let order = PartialOrder::from_layers(g.vertex_count(), &layers)?;
    let structure = CorrectionStructure::build(g, FlowKind::GFlow, &corr, order)?;
    debug_assert!(verify(g, &structure).map_or(false, |r| r.valid));
    Ok(FindResult {
        found: true,
        structure: Some(structure),
        budget_exceeded: false,
        stats,
    })
}

/// The layered-policy admission check for a candidate Pauli correcting set:
/// every touched vertex that is not yet layered must be absorbable by its
/// own Pauli measurement (X in the set only, Y in both, Z odd only), and `i`
/// itself must satisfy its label condition.
fn pauli_ok(g: &OpenGraph, done: VertexSet, i: usize, k: VertexSet) -> bool {
    let odd = g.odd_neighborhood(k);
    for u in k.union(odd).iter() {
        if u == i || done.contains(u) {
            continue;
        }
        let ok = match g.label(u) {
            Some(MeasLabel::Pauli(Axis::X)) => k.contains(u) && !odd.contains(u),
            Some(MeasLabel::Pauli(Axis::Y)) => k.contains(u) && odd.contains(u),
            Some(MeasLabel::Pauli(Axis::Z)) => !k.contains(u) && odd.contains(u),
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    let in_k = k.contains(i);
    let in_odd = odd.contains(i);
    match g.label(i).expect("measured") {
        MeasLabel::Plane(Plane::XY) => !in_k && in_odd,
        MeasLabel::Plane(Plane::XZ) => in_k && in_odd,
        MeasLabel::Plane(Plane::YZ) => in_k && !in_odd,
        MeasLabel::Pauli(Axis::X) => in_odd,
        MeasLabel::Pauli(Axis::Z) => in_k,
        MeasLabel::Pauli(Axis::Y) => in_k ^ in_odd,
    }
}

/// Layered Pauli-flow search. Candidate correcting sets may reach past
/// X/Y-measured qubits; the linear pass keeps the constraints affine by
/// excluding past Y columns, and a per-vertex exhaustive subset search picks
/// up the rest below `2^max_subset_bits` candidates.
pub fn find_pauli_flow(g: &OpenGraph, cfg: &SearchConfig) -> Result<FindResult, FindError> {
    if g.vertex_count() > cfg.max_vertices {
        return Err(FindError::TooLarge {
            n: g.vertex_count(),
            max: cfg.max_vertices,
        });
    }
    let budget = Budget::new(cfg.budget_ms);
    let mut stats = SearchStats::default();
    let mut done = g.outputs();
    let mut corr: BTreeMap<usize, VertexSet> = BTreeMap::new();
    let mut rounds: Vec<Vec<usize>> = Vec::new();
    loop {
        if budget.exceeded() {
            stats.elapsed_ms = budget.elapsed_ms();
            return Ok(FindResult::not_found(stats, true));
        }
        let mut admitted: Vec<(usize, VertexSet)> = Vec::new();
        for i in g.measured().difference(done).iter() {
            stats.nodes += 1;
            if let Some(k) = pauli_candidate(g, done, i, cfg) {
                admitted.push((i, k));
            }
        }
        if admitted.is_empty() {
            break;
        }
        stats.layers += 1;
        let mut layer = Vec::new();
        for (i, k) in admitted {
            done.insert(i);
            corr.insert(i, k);
            layer.push(i);
        }
        rounds.push(layer);
        if done == g.all_vertices() {
            break;
        }
    }
    stats.elapsed_ms = budget.elapsed_ms();
    if done != g.all_vertices() {
        return Ok(FindResult::not_found(stats, false));
    }
    let mut layers: Vec<Vec<usize>> = rounds.into_iter().rev().collect();
    layers.push(g.outputs().iter().collect());
    let order = PartialOrder::from_layers(g.vertex_count(), &layers)?;
    let structure = CorrectionStructure::build(g, FlowKind::PauliFlow, &corr, order)?;
    debug_assert!(verify(g, &structure).map_or(false, |r| r.valid));
    Ok(FindResult {
        found: true,
        structure: Some(structure),
        budget_exceeded: false,
        stats,
    })
}

fn pauli_candidate(
    g: &OpenGraph,
    done: VertexSet,
    i: usize,
    cfg: &SearchConfig,
) -> Option<VertexSet> {
    let label = g.label(i).expect("measured");
    let is_input = g.inputs().contains(i);
    // full candidate pool: layered vertices plus past X/Y-measured qubits
    let mut pool = VertexSet::EMPTY;
    for j in 0..g.vertex_count() {
        if j == i || g.inputs().contains(j) {
            continue;
        }
        let past_pauli = matches!(
            g.label(j),
            Some(MeasLabel::Pauli(Axis::X)) | Some(MeasLabel::Pauli(Axis::Y))
        );
        if done.contains(j) || past_pauli {
            pool.insert(j);
        }
    }

    // linear pass: exclude not-yet-layered Y columns (their membership
    // constraint couples set and odd membership), force rows to 0 on
    // every non-absorbable vertex
    let (target_i, forced) = match label {
        MeasLabel::Plane(Plane::XY) => (true, false),
        MeasLabel::Plane(Plane::XZ) => (true, true),
        MeasLabel::Plane(Plane::YZ) => (false, true),
        MeasLabel::Pauli(Axis::X) => (true, false),
        MeasLabel::Pauli(Axis::Z) => (true, true), // odd_i free handled below
        MeasLabel::Pauli(Axis::Y) => (true, false), // first branch of P9
    };
    if !(forced && is_input) {
        let mut cols: Vec<usize> = pool
            .iter()
            .filter(|&j| {
                done.contains(j) || g.label(j) != Some(MeasLabel::Pauli(Axis::Y))
            })
            .collect();
        cols.retain(|&j| j != i);
        // rows free on layered vertices and on past Z-measured qubits (their
        // measurement absorbs a lone Z); for an X column outside the layers
        // the zero row is exactly the absorbability condition
        let mut rows_free = done;
        for u in 0..g.vertex_count() {
            if g.label(u) == Some(MeasLabel::Pauli(Axis::Z)) && !done.contains(u) && u != i {
                rows_free.insert(u);
            }
        }
        // a Z-measured vertex has no odd constraint on itself
        let solved = if label == MeasLabel::Pauli(Axis::Z) {
            // only membership is forced; try both odd parities at i
            solve_vertex(g, done, i, &cols, true, true, rows_free, cfg.max_nullspace_bits)
                .or_else(|| {
                    solve_vertex(g, done, i, &cols, false, true, rows_free, cfg.max_nullspace_bits)
                })
        } else {
            solve_vertex(g, done, i, &cols, target_i, forced, rows_free, cfg.max_nullspace_bits)
        };
        if let Some(k) = solved {
            if pauli_ok(g, done, i, k) {
                return Some(k);
            }
        }
        // Y label: second branch of P9 (i in the set, not in the odd set)
        if label == MeasLabel::Pauli(Axis::Y) && !is_input {
            if let Some(k) =
                solve_vertex(g, done, i, &cols, false, true, rows_free, cfg.max_nullspace_bits)
            {
                if pauli_ok(g, done, i, k) {
                    return Some(k);
                }
            }
        }
    }

    // exhaustive fallback over the full pool (including i where allowed)
    let mut members: Vec<usize> = pool.iter().collect();
    if !is_input {
        members.push(i);
    }
    if members.len() as u32 > cfg.max_subset_bits {
        return None;
    }
    let mut best: Option<VertexSet> = None;
    for bits in 0..(1u64 << members.len()) {
        let mut k = VertexSet::EMPTY;
        for (c, &j) in members.iter().enumerate() {
            if bits >> c & 1 == 1 {
                k.insert(j);
            }
        }
        if pauli_ok(g, done, i, k) {
            let better = match best {
                None => true,
                Some(b) => (k.len(), k.0) < (b.len(), b.0),
            };
            if better {
                best = Some(k);
            }
        }
    }
    best
}

/// The 3n-vertex depth family: inputs `a1..an`, middles `b1..bn`, outputs
/// `c1..cn` with edges `a_i-b_i`, `b_i-c_i` and `b_i-a_{i+1}`, all
/// measurements in the XY plane. Its unique flow has n+1 measured layers
/// while a generalized flow reaches every input in one round.
pub fn family_3n(n: usize) -> Result<OpenGraph, FindError> {
    if n == 0 {
        return Err(FindError::EmptyFamily);
    }
    let name = |p: char, k: usize| format!("{}{}", p, k + 1);
    let vertices: Vec<String> = "abc"
        .chars()
        .flat_map(|p| (0..n).map(move |k| name(p, k)))
        .collect();
    let mut edges = Vec::new();
    for k in 0..n {
        edges.push((name('a', k), name('b', k)));
        edges.push((name('b', k), name('c', k)));
        if k + 1 < n {
            edges.push((name('b', k), name('a', k + 1)));
        }
    }
    let vert_refs: Vec<&str> = vertices.iter().map(|s| s.as_str()).collect();
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let inputs: Vec<String> = (0..n).map(|k| name('a', k)).collect();
    let outputs: Vec<String> = (0..n).map(|k| name('c', k)).collect();
    let input_refs: Vec<&str> = inputs.iter().map(|s| s.as_str()).collect();
    let output_refs: Vec<&str> = outputs.iter().map(|s| s.as_str()).collect();
    let labels: Vec<(String, MeasLabel)> = vertices
        .iter()
        .filter(|v| !outputs.contains(v))
        .map(|v| (v.clone(), MeasLabel::Plane(Plane::XY)))
        .collect();
    let label_refs: Vec<(&str, MeasLabel)> =
        labels.iter().map(|(v, l)| (v.as_str(), *l)).collect();
    Ok(graph_from_parts(
        &vert_refs,
        &edge_refs,
        &input_refs,
        &output_refs,
        &label_refs,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::depth_metrics;

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

    #[test]
    fn path_flow_found_with_expected_function() {
        let g = path_graph();
        let r = find_flow(&g, &SearchConfig::default()).unwrap();
        assert!(r.found);
        let s = r.structure.unwrap();
        let m = |v: &str| g.lookup(v).unwrap();
        assert_eq!(s.correcting_set(m("a")), Some(VertexSet::singleton(m("d"))));
        assert_eq!(s.correcting_set(m("b")), Some(VertexSet::singleton(m("e"))));
        assert_eq!(s.correcting_set(m("c")), Some(VertexSet::singleton(m("f"))));
        // caption layering: {a} < {b,d} < {e,c} < {f}
        let layers = s.order.coarsest_layers();
        assert_eq!(layers.len(), 4);
        assert_eq!(layers[0], vec![m("a")]);
    }

    #[test]
    fn single_edge_flow() {
        let g = graph_from_parts(&["a", "d"], &[("a", "d")], &["a"], &["d"], &[("a", xy())])
            .unwrap();
        let r = find_flow(&g, &SearchConfig::default()).unwrap();
        assert!(r.found);
        assert_eq!(
            r.structure.unwrap().correcting_set(0),
            Some(VertexSet::singleton(1))
        );
    }

    #[test]
    fn flow_uniqueness_on_equal_io() {
        let g = path_graph();
        let a = find_flow(&g, &SearchConfig::default()).unwrap();
        let b = find_flow(&g, &SearchConfig::default()).unwrap();
        assert_eq!(a.structure, b.structure);
    }

    #[test]
    fn gflow_found_on_path_with_shallow_depth() {
        let g = path_graph();
        let r = find_gflow(&g, &SearchConfig::default()).unwrap();
        assert!(r.found);
        let s = r.structure.unwrap();
        let flow = find_flow(&g, &SearchConfig::default()).unwrap().structure.unwrap();
        let (_, gflow_measured) = depth_metrics(&g, &s);
        let (_, flow_measured) = depth_metrics(&g, &flow);
        assert!(gflow_measured <= flow_measured);
    }

    #[test]
    fn family_depths() {
        for n in 1..=5 {
            let g = family_3n(n).unwrap();
            assert_eq!(g.vertex_count(), 3 * n);
            let flow = find_flow(&g, &SearchConfig::default()).unwrap();
            assert!(flow.found, "family {} must have flow", n);
            let (total, measured) = depth_metrics(&g, flow.structure.as_ref().unwrap());
            assert!(measured >= n + 1, "flow depth_measured {} < {}", measured, n + 1);
            assert_eq!(total, n + 2);
            let gflow = find_gflow(&g, &SearchConfig::default()).unwrap();
            assert!(gflow.found);
            let (_, gm) = depth_metrics(&g, gflow.structure.as_ref().unwrap());
            assert_eq!(gm, if n == 1 { 2 } else { 2 });
        }
        assert!(matches!(family_3n(0), Err(FindError::EmptyFamily)));
    }

    #[test]
    fn figure6_flow_order_matches_caption() {
        let g = family_3n(3).unwrap();
        let r = find_flow(&g, &SearchConfig::default()).unwrap();
        let s = r.structure.unwrap();
        let layers = s.order.coarsest_layers();
        let names: Vec<Vec<String>> = layers
            .iter()
            .map(|l| l.iter().map(|&v| g.name(v).to_string()).collect())
            .collect();
        assert_eq!(
            names,
            vec![
                vec!["a1".to_string()],
                vec!["a2".to_string(), "b1".to_string()],
                vec!["a3".to_string(), "b2".to_string(), "c1".to_string()],
                vec!["b3".to_string(), "c2".to_string()],
                vec!["c3".to_string()],
            ]
        );
    }

    #[test]
    fn pauli_finder_subsumes_gflow() {
        let g = path_graph();
        let r = find_pauli_flow(&g, &SearchConfig::default()).unwrap();
        assert!(r.found);
    }

    #[test]
    fn pauli_size_bound() {
        let g = family_3n(5).unwrap(); // 15 vertices
        assert!(matches!(
            find_pauli_flow(&g, &SearchConfig::default()),
            Err(FindError::TooLarge { .. })
        ));
    }

    #[test]
    fn budget_flag_on_exhaustion() {
        let g = family_3n(4).unwrap();
        let cfg = SearchConfig {
            budget_ms: Some(0),
            ..Default::default()
        };
        let r = find_flow(&g, &cfg).unwrap();
        assert!(!r.found);
        assert!(r.budget_exceeded);
    }
}
