//! Dense GF(2) linear systems over at most 64 columns, stored as bitmask rows.
//!
//! Gaussian elimination with deterministic lowest-index pivoting; solving
//! yields one particular solution plus a nullspace basis, which is enough to
//! enumerate the full solution set of the correcting-set constraints.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Gf2Error {
    #[error("system has {0} columns, limit is 64")]
    TooManyColumns(usize),
    #[error("row {0} has bits beyond the declared column count")]
    RowOutOfRange(usize),
}

/// A linear system `A x = b` over GF(2). Row `i` of `A` is `rows[i]` with bit
/// `j` the coefficient of column `j`; `rhs` bit `i` is `b_i`.
#[derive(Debug, Clone)]
pub struct Gf2System {
    pub cols: usize,
    pub rows: Vec<u64>,
    pub rhs: Vec<bool>,
}

impl Gf2System {
    pub fn new(cols: usize) -> Result<Gf2System, Gf2Error> {
        if cols > 64 {
            return Err(Gf2Error::TooManyColumns(cols));
        }
        Ok(Gf2System {
            cols,
            rows: Vec::new(),
            rhs: Vec::new(),
        })
    }

    pub fn push_row(&mut self, row: u64, rhs: bool) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    fn validate(&self) -> Result<(), Gf2Error> {
        let mask = if self.cols == 64 {
            u64::MAX
        } else {
            (1u64 << self.cols) - 1
        };
        for (i, &r) in self.rows.iter().enumerate() {
            if r & !mask != 0 {
                return Err(Gf2Error::RowOutOfRange(i));
            }
        }
        Ok(())
    }
}

/// Outcome of a consistent solve: one solution and a basis of the nullspace.
#[derive(Debug, Clone)]
pub struct Gf2Solution {
    pub particular: u64,
    pub nullspace: Vec<u64>,
}

impl Gf2Solution {
    /// Enumerate every solution when the nullspace is small enough, and pick
    /// the minimum-popcount one, ties broken by numeric (lexicographic) order.
    /// Falls back to the particular solution for large nullspaces.
    pub fn canonical(&self, max_enum_bits: u32) -> u64 {
        if self.nullspace.len() as u32 > max_enum_bits {
            return self.particular;
        }
        let mut best = self.particular;
        for combo in 0..(1u64 << self.nullspace.len()) {
            let mut x = self.particular;
            for (k, &v) in self.nullspace.iter().enumerate() {
                if combo >> k & 1 == 1 {
                    x ^= v;
                }
            }
            if (x.count_ones(), x) < (best.count_ones(), best) {
                best = x;
            }
        }
        best
    }
}

/// Gaussian elimination. Returns `None` when the system is inconsistent.
pub fn gf2_solve(sys: &Gf2System) -> Result<Option<Gf2Solution>, Gf2Error> {
    sys.validate()?;
    let mut rows = sys.rows.clone();
    let mut rhs = sys.rhs.clone();
    let m = rows.len();
    // pivot_row[c] = row index owning pivot column c
    let mut pivot_row = vec![usize::MAX; sys.cols];
    let mut next = 0usize;
    for col in 0..sys.cols {
        let Some(p) = (next..m).find(|&r| rows[r] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(next, p);
        rhs.swap(next, p);
        for r in 0..m {
            if r != next && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[next];
                let flip = rhs[next];
                rhs[r] ^= flip;
            }
        }
        pivot_row[col] = next;
        next += 1;
    }
    // inconsistent iff a zero row has rhs 1
    for r in next..m {
        if rows[r] == 0 && rhs[r] {
            return Ok(None);
        }
    }
    let mut particular = 0u64;
    for col in 0..sys.cols {
        if pivot_row[col] != usize::MAX && rhs[pivot_row[col]] {
            particular |= 1 << col;
        }
    }
    // one basis vector per free column
    let mut nullspace = Vec::new();
    for free in 0..sys.cols {
        if pivot_row[free] != usize::MAX {
            continue;
        }
        let mut v = 1u64 << free;
        for col in 0..sys.cols {
            let pr = pivot_row[col];
            if pr != usize::MAX && rows[pr] >> free & 1 == 1 {
                v |= 1 << col;
            }
        }
        nullspace.push(v);
    }
    Ok(Some(Gf2Solution {
        particular,
        nullspace,
    }))
}
