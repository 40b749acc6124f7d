//! Pauli strings with exact phase tracking, and graph stabilizers.
//!
//! The phase convention is pinned to the standard matrix representation,
//! so `X * Z = -i Y`. Every multiplication composes phases exactly.

use std::fmt;

use crate::graph::{OpenGraph, VertexSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

/// Global phase as a power of `i`: phase = i^exp with exp in 0..4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn as_complex(self) -> num_complex::Complex64 {
        match self.0 {
            0 => num_complex::Complex64::new(1.0, 0.0),
            1 => num_complex::Complex64::new(0.0, 1.0),
            2 => num_complex::Complex64::new(-1.0, 0.0),
            _ => num_complex::Complex64::new(0.0, -1.0),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Single-site product `a * b`, returning the resulting letter and the phase
/// power of `i` it contributes.
fn site_mul(a: PauliOp, b: PauliOp) -> (PauliOp, u8) {
    use PauliOp::*;
    match (a, b) {
        (I, p) | (p, I) => (p, 0),
        (X, X) | (Y, Y) | (Z, Z) => (I, 0),
        (X, Y) => (Z, 1),
        (Y, X) => (Z, 3),
        (Y, Z) => (X, 1),
        (Z, Y) => (X, 3),
        (Z, X) => (Y, 1),
        (X, Z) => (Y, 3),
    }
}

#[derive(Debug, Error)]
pub enum PauliError {
    #[error("pauli strings act on different vertex counts ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("unknown vertex index {0}")]
    UnknownVertex(usize),
}

/// A Pauli operator on the vertices of an open graph: one letter per vertex
/// plus a global phase in {+1, +i, -1, -i}.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    letters: Vec<PauliOp>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString {
            letters: vec![PauliOp::I; n],
            phase: Phase::ONE,
        }
    }

    pub fn from_letters(letters: Vec<PauliOp>, phase: Phase) -> PauliString {
        PauliString { letters, phase }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letter(&self, v: usize) -> PauliOp {
        self.letters[v]
    }

    pub fn letters(&self) -> &[PauliOp] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.phase == Phase::ONE && self.letters.iter().all(|&l| l == PauliOp::I)
    }

    /// Vertices carrying an X component (X or Y).
    pub fn x_support(&self) -> VertexSet {
        VertexSet::from_iter(
            self.letters
                .iter()
                .enumerate()
                .filter(|(_, l)| matches!(l, PauliOp::X | PauliOp::Y))
                .map(|(v, _)| v),
        )
    }

    /// Vertices carrying a Z component (Z or Y).
    pub fn z_support(&self) -> VertexSet {
        VertexSet::from_iter(
            self.letters
                .iter()
                .enumerate()
                .filter(|(_, l)| matches!(l, PauliOp::Z | PauliOp::Y))
                .map(|(v, _)| v),
        )
    }

    /// Product `self * other` (self applied after other), phase-exact.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        if self.len() != other.len() {
            return Err(PauliError::LengthMismatch(self.len(), other.len()));
        }
        let mut phase = self.phase.mul(other.phase);
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (c, k) = site_mul(a, b);
                phase = phase.mul(Phase(k));
                c
            })
            .collect();
        Ok(PauliString { letters, phase })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.phase)?;
        for l in &self.letters {
            write!(f, "{:?}", l)?;
        }
        Ok(())
    }
}

/// Graph stabilizer `K_i = X_i prod_{j in N(i)} Z_j`.
pub fn graph_stabilizer(g: &OpenGraph, i: usize) -> Result<PauliString, PauliError> {
    if i >= g.vertex_count() {
        return Err(PauliError::UnknownVertex(i));
    }
    let mut letters = vec![PauliOp::I; g.vertex_count()];
    letters[i] = PauliOp::X;
    for j in g.neighborhood(i).iter() {
        letters[j] = PauliOp::Z;
    }
    Ok(PauliString {
        letters,
        phase: Phase::ONE,
    })
}

/// Product `prod_{u in K} K_u`, taken in ascending vertex order. The factors
/// pairwise commute, so the order does not affect the result.
pub fn stabilizer_of_set(g: &OpenGraph, k: VertexSet) -> PauliString {
    let mut acc = PauliString::identity(g.vertex_count());
    for u in k.iter() {
        acc = acc.mul(&graph_stabilizer(g, u).expect("member of a vertex set")).unwrap();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_parts;
    use crate::graph::{MeasLabel, Plane};

    fn path_graph() -> OpenGraph {
        let xy = MeasLabel::Plane(Plane::XY);
        graph_from_parts(
            &["a", "b", "c", "d", "e", "f"],
            &[("a", "d"), ("d", "b"), ("b", "e"), ("e", "c"), ("c", "f")],
            &["a", "b", "c"],
            &["d", "e", "f"],
            &[("a", xy), ("b", xy), ("c", xy)],
        )
        .unwrap()
    }

    #[test]
    fn convention_xz_is_minus_i_y() {
        let x = PauliString::from_letters(vec![PauliOp::X], Phase::ONE);
        let z = PauliString::from_letters(vec![PauliOp::Z], Phase::ONE);
        let xz = x.mul(&z).unwrap();
        assert_eq!(xz.letter(0), PauliOp::Y);
        assert_eq!(xz.phase(), Phase(3)); // -i
    }

    #[test]
    fn stabilizer_isolated_vertex() {
        let g = graph_from_parts(&["v"], &[], &["v"], &["v"], &[]).unwrap();
        let k = graph_stabilizer(&g, 0).unwrap();
        assert_eq!(k.letter(0), PauliOp::X);
        assert_eq!(k.phase(), Phase::ONE);
    }

    #[test]
    fn stabilizer_of_d_on_path() {
        let g = path_graph();
        let d = g.lookup("d").unwrap();
        let k = graph_stabilizer(&g, d).unwrap();
        assert_eq!(k.letter(d), PauliOp::X);
        // neighbors read off the declared edge list: a and b
        assert_eq!(k.letter(g.lookup("a").unwrap()), PauliOp::Z);
        assert_eq!(k.letter(g.lookup("b").unwrap()), PauliOp::Z);
        assert_eq!(k.letter(g.lookup("c").unwrap()), PauliOp::I);

        // involution: K_d * K_d = identity with phase +1
        let sq = k.mul(&k).unwrap();
        assert!(sq.is_identity());
    }

    #[test]
    fn stabilizer_of_set_supports() {
        let g = path_graph();
        let k = VertexSet::from_iter([g.lookup("d").unwrap(), g.lookup("f").unwrap()]);
        let s = stabilizer_of_set(&g, k);
        // X-support equals K, Z-support outside K equals Odd(K) \ K
        assert_eq!(s.x_support(), k);
        assert_eq!(
            s.z_support().difference(k),
            g.odd_neighborhood(k).difference(k)
        );
        assert_eq!(stabilizer_of_set(&g, VertexSet::EMPTY).is_identity(), true);
    }
}
