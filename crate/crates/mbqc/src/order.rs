//! Strict partial orders over the vertices of an open graph, built either
//! from explicit relation pairs or from a layer list (layers induce the
//! product order: everything in an earlier layer precedes everything in a
//! later one).

use crate::graph::VertexSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrderError {
    #[error("relations contain a cycle through vertex index {0}")]
    Cycle(usize),
    #[error("vertex index {0} out of range (n = {1})")]
    OutOfRange(usize, usize),
    #[error("vertex index {0} appears in more than one layer")]
    DuplicateLayerMember(usize),
}

/// Reachability form of a strict partial order: `after[i]` is the set of
/// vertices strictly greater than `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialOrder {
    n: usize,
    after: Vec<VertexSet>,
}

impl PartialOrder {
    pub fn empty(n: usize) -> PartialOrder {
        PartialOrder {
            n,
            after: vec![VertexSet::EMPTY; n],
        }
    }

    /// Transitive closure of the given relation pairs `(i, j)` meaning `i < j`.
    /// Fails on cycles.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<PartialOrder, OrderError> {
        let mut direct = vec![VertexSet::EMPTY; n];
        for &(i, j) in relations {
            if i >= n {
                return Err(OrderError::OutOfRange(i, n));
            }
            if j >= n {
                return Err(OrderError::OutOfRange(j, n));
            }
            direct[i].insert(j);
        }
        Self::close(n, direct)
    }

    /// Product order induced by layers: `layer(i) < layer(j)` implies `i < j`.
    /// Vertices missing from every layer are unrelated to everything.
    pub fn from_layers(n: usize, layers: &[Vec<usize>]) -> Result<PartialOrder, OrderError> {
        let mut seen = VertexSet::EMPTY;
        let mut direct = vec![VertexSet::EMPTY; n];
        let mut later = VertexSet::EMPTY;
        for layer in layers {
            for &v in layer {
                if v >= n {
                    return Err(OrderError::OutOfRange(v, n));
                }
                if seen.contains(v) {
                    return Err(OrderError::DuplicateLayerMember(v));
                }
                seen.insert(v);
            }
        }
        for layer in layers.iter().rev() {
            let here = VertexSet::from_iter(layer.iter().copied());
            for &v in layer {
                direct[v] = later;
            }
            later = later.union(here);
        }
        Self::close(n, direct)
    }

    fn close(n: usize, direct: Vec<VertexSet>) -> Result<PartialOrder, OrderError> {
        let mut after = direct;
        // iterate to fixpoint; n <= 64 keeps this cheap
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = after[i];
                for j in after[i].iter() {
                    acc = acc.union(after[j]);
                }
                if acc != after[i] {
                    after[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            if after[i].contains(i) {
                return Err(OrderError::Cycle(i));
            }
        }
        Ok(PartialOrder { n, after })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `i < j` in the strict order.
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.after[i].contains(j)
    }

    /// Set of vertices strictly greater than `i`.
    pub fn strictly_after(&self, i: usize) -> VertexSet {
        self.after[i]
    }

    /// Set of vertices strictly smaller than `i`.
    pub fn strictly_before(&self, i: usize) -> VertexSet {
        VertexSet::from_iter((0..self.n).filter(|&j| self.less(j, i)))
    }

    /// Merge in extra relations, failing if the union is cyclic.
    pub fn merged_with(&self, relations: &[(usize, usize)]) -> Result<PartialOrder, OrderError> {
        let mut direct = self.after.clone();
        for &(i, j) in relations {
            if i >= self.n {
                return Err(OrderError::OutOfRange(i, self.n));
            }
            if j >= self.n {
                return Err(OrderError::OutOfRange(j, self.n));
            }
            direct[i].insert(j);
        }
        Self::close(self.n, direct)
    }

    /// Coarsest layering: vertex `v` goes to layer `1 + max(layer of anything
    /// below it)`, so the number of layers equals the longest chain length.
    pub fn coarsest_layers(&self) -> Vec<Vec<usize>> {
        if self.n == 0 {
            return Vec::new();
        }
        let mut layer = vec![0usize; self.n];
        // longest path over the DAG of the order; process by increasing
        // number of predecessors is unnecessary since we can iterate to
        // fixpoint over the closed relation
        loop {
            let mut changed = false;
            for i in 0..self.n {
                for j in self.after[i].iter() {
                    if layer[j] < layer[i] + 1 {
                        layer[j] = layer[i] + 1;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let depth = layer.iter().max().copied().unwrap_or(0) + 1;
        let mut out = vec![Vec::new(); depth];
        for v in 0..self.n {
            out[layer[v]].push(v);
        }
        out
    }

    /// A linear extension ordered by coarsest layer, ties by vertex index.
    pub fn linear_extension(&self) -> Vec<usize> {
        self.coarsest_layers().into_iter().flatten().collect()
    }

    /// All strict relation pairs, for serialization.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in self.after[i].iter() {
                out.push((i, j));
            }
        }
        out
    }
}

/// Depth of an order over a graph: total number of coarsest layers, and the
/// number of layers containing at least one measured qubit.
pub fn depth_of(order: &PartialOrder, measured: VertexSet) -> (usize, usize) {
    let layers = order.coarsest_layers();
    let total = layers.len();
    let with_measured = layers
        .iter()
        .filter(|layer| layer.iter().any(|&v| measured.contains(v)))
        .count();
    (total, with_measured)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_order_depth() {
        let o = PartialOrder::empty(4);
        let (total, measured) = depth_of(&o, VertexSet::from_iter([0, 1]));
        assert_eq!(total, 1);
        assert_eq!(measured, 1);
        let (_, none) = depth_of(&o, VertexSet::EMPTY);
        assert_eq!(none, 0);
    }

    #[test]
    fn layers_induce_product_order() {
        let o = PartialOrder::from_layers(5, &[vec![0, 1], vec![2], vec![3, 4]]).unwrap();
        assert!(o.less(0, 2));
        assert!(o.less(0, 4));
        assert!(o.less(2, 3));
        assert!(!o.less(0, 1));
        assert!(!o.less(2, 0));
        assert_eq!(o.coarsest_layers().len(), 3);
    }

    #[test]
    fn cycle_detected() {
        assert!(matches!(
            PartialOrder::from_relations(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(OrderError::Cycle(_))
        ));
    }

    #[test]
    fn refining_never_decreases_depth() {
        let o = PartialOrder::from_relations(4, &[(0, 1), (2, 3)]).unwrap();
        let (before, _) = depth_of(&o, VertexSet::EMPTY);
        let refined = o.merged_with(&[(1, 2)]).unwrap();
        let (after, _) = depth_of(&refined, VertexSet::EMPTY);
        assert!(after >= before);
    }
}
