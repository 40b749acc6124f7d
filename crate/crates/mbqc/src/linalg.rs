//! Small dense complex matrices for branch maps and unitaries, with the
//! phase-insensitive comparisons the determinism checks are built on.

use num_complex::Complex64;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> CMat {
        CMat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &CMat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn argmax_abs(&self) -> usize {
        let mut best = 0;
        let mut best_v = -1.0;
        for (i, a) in self.data.iter().enumerate() {
            let v = a.norm();
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        best
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Normalize to unit Frobenius norm and rotate so the entry at `anchor`
/// is real positive. Returns `None` for a (numerically) zero matrix or a
/// vanishing anchor entry.
fn normal_form(m: &CMat, anchor: usize, tol: f64) -> Option<CMat> {
    let n = m.frobenius();
    if n <= tol {
        return None;
    }
    let a = m.data[anchor] / n;
    let mag = a.norm();
    if mag <= tol {
        return None;
    }
    let rot = a.conj() / mag;
    Some(m.scale(rot / n))
}

/// Are the two matrices proportional (equal after normalizing scale and
/// global phase)? The phase is fixed on the largest-magnitude entry of `a`,
/// shared by both sides so near-ties cannot pick different anchors.
pub fn proportional(a: &CMat, b: &CMat, tol: f64) -> bool {
    let za = a.frobenius() <= tol;
    let zb = b.frobenius() <= tol;
    if za || zb {
        return za && zb;
    }
    let anchor = a.argmax_abs();
    match (normal_form(a, anchor, tol), normal_form(b, anchor, tol)) {
        (Some(na), Some(nb)) => na.max_abs_diff(&nb) <= tol,
        _ => false,
    }
}

/// Equal up to a single global phase: proportional with matching norms.
pub fn equal_up_to_phase(a: &CMat, b: &CMat, tol: f64) -> bool {
    let (na, nb) = (a.frobenius(), b.frobenius());
    (na - nb).abs() <= tol * na.max(1.0) && proportional(a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn proportional_mod_phase_and_scale() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = c(0.5, 0.0);
        a[(0, 1)] = c(0.5, 0.0);
        a[(1, 0)] = c(0.5, 0.0);
        a[(1, 1)] = c(-0.5, 0.0);
        let b = a.scale(c(0.0, 3.0)); // times 3i
        assert!(proportional(&a, &b, 1e-9));
        assert!(!equal_up_to_phase(&a, &b, 1e-9));
        assert!(equal_up_to_phase(&a, &a.scale(c(0.0, -1.0)), 1e-9));
        let mut d = a.clone();
        d[(1, 1)] = c(0.5, 0.0);
        assert!(!proportional(&a, &d, 1e-9));
    }

    #[test]
    fn matmul_and_dagger() {
        let mut h = CMat::zeros(2, 2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        h[(0, 0)] = c(s, 0.0);
        h[(0, 1)] = c(s, 0.0);
        h[(1, 0)] = c(s, 0.0);
        h[(1, 1)] = c(-s, 0.0);
        let hh = h.mul(&h);
        assert!(hh.max_abs_diff(&CMat::identity(2)) < 1e-12);
        let hdh = h.dagger().mul(&h);
        assert!(hdh.max_abs_diff(&CMat::identity(2)) < 1e-12);
    }
}
