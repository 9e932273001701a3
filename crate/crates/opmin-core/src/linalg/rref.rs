//! Exact reduced row-echelon form over the rationals, computed blockwise per
//! parity, with deterministic first-suitable-pivot selection in the fixed
//! basis order.

use std::sync::Arc;

use num::Zero;

use super::{GradedMap, GradedSpace, LinError, Parity, Result, Scalar, Vector};

/// Output of [`GradedMap::rref`]: the reduced matrix, pivot source columns,
/// a kernel basis (source vectors) and an image basis (target vectors, the
/// columns of the original matrix at the pivots).
#[derive(Debug, Clone)]
pub struct RrefResult {
    pub reduced: GradedMap,
    pub pivots: Vec<usize>,
    pub kernel: Vec<Vector>,
    pub image: Vec<Vector>,
}

impl RrefResult {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl GradedMap {
    /// Exact RREF. The matrix of a parity-homogeneous map decomposes into two
    /// blocks (even sources and odd sources); each block is reduced
    /// independently with the first-nonzero pivot rule, so identical inputs
    /// give bit-identical outputs.
    pub fn rref(&self) -> RrefResult {
        let src = self.source();
        let tgt = self.target();
        let mut reduced = GradedMap::zero(src, tgt, self.parity());
        let mut pivots = Vec::new();
        let mut kernel = Vec::new();
        let mut image = Vec::new();

        for block in [Parity::Even, Parity::Odd] {
            let cols: Vec<usize> = (0..src.dim()).filter(|&i| src.parity(i) == block).collect();
            let rows: Vec<usize> = (0..tgt.dim())
                .filter(|&i| tgt.parity(i) == block + self.parity())
                .collect();
            // dense block copy
            let mut m: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| self.entry(r, c)).collect())
                .collect();
            let (nr, nc) = (rows.len(), cols.len());
            let mut block_pivots: Vec<(usize, usize)> = Vec::new(); // (row, col) in block coords
            let mut prow = 0usize;
            for pc in 0..nc {
                let Some(pr) = (prow..nr).find(|&r| !m[r][pc].is_zero()) else {
                    continue;
                };
                m.swap(prow, pr);
                let inv = m[prow][pc].recip();
                for c in 0..nc {
                    let v = &m[prow][c] * &inv;
                    m[prow][c] = v;
                }
                for r in 0..nr {
                    if r != prow && !m[r][pc].is_zero() {
                        let f = m[r][pc].clone();
                        for c in 0..nc {
                            let v = &m[r][c] - &f * &m[prow][c];
                            m[r][c] = v;
                        }
                    }
                }
                block_pivots.push((prow, pc));
                prow += 1;
                if prow == nr {
                    break;
                }
            }
            // write the reduced block back in global coordinates
            for (r, row) in m.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        reduced.set(rows[r], cols[c], v.clone()).expect("rref parity");
                    }
                }
            }
            // kernel vectors: one per free column, with -entry at pivots
            let pivot_cols: Vec<usize> = block_pivots.iter().map(|&(_, c)| c).collect();
            for fc in 0..nc {
                if pivot_cols.contains(&fc) {
                    continue;
                }
                let mut v = Vector::zero(src);
                v.add_term(cols[fc] as u16, Scalar::from_integer(1.into()));
                for &(pr, pc) in &block_pivots {
                    let coef = &m[pr][fc];
                    if !coef.is_zero() {
                        v.add_term(cols[pc] as u16, -coef.clone());
                    }
                }
                kernel.push(v);
            }
            for &(_, pc) in &block_pivots {
                pivots.push(cols[pc]);
            }
        }
        pivots.sort_unstable();
        image.extend(pivots.iter().map(|&p| self.column(p)));
        // kernel vectors sorted by leading free column for determinism
        kernel.sort_by_key(|v| v.coords().keys().next().copied().unwrap_or(u16::MAX));
        RrefResult {
            reduced,
            pivots,
            kernel,
            image,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Exact inverse of a square even map whose columns form a basis.
    pub fn inverse(&self) -> Result<GradedMap> {
        if self.source().dim() != self.target().dim() {
            return Err(LinError::DimensionMismatch("inverse of non-square map".into()));
        }
        let n = self.source().dim();
        // Gauss-Jordan on [M | I] over the full (ungraded) index set; parity
        // structure of the inverse is inherited from the forward map.
        let mut m: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row: Vec<Scalar> = (0..n).map(|c| self.entry(r, c)).collect();
                row.extend((0..n).map(|c| {
                    if c == r {
                        Scalar::from_integer(1.into())
                    } else {
                        Scalar::zero()
                    }
                }));
                row
            })
            .collect();
        let mut prow = 0usize;
        for pc in 0..n {
            let Some(pr) = (prow..n).find(|&r| !m[r][pc].is_zero()) else {
                return Err(LinError::Singular);
            };
            m.swap(prow, pr);
            let inv = m[prow][pc].recip();
            for c in 0..2 * n {
                let v = &m[prow][c] * &inv;
                m[prow][c] = v;
            }
            for r in 0..n {
                if r != prow && !m[r][pc].is_zero() {
                    let f = m[r][pc].clone();
                    for c in 0..2 * n {
                        let v = &m[r][c] - &f * &m[prow][c];
                        m[r][c] = v;
                    }
                }
            }
            prow += 1;
        }
        let mut out = GradedMap::zero(self.target(), self.source(), self.parity());
        for r in 0..n {
            for c in 0..n {
                let v = &m[r][n + c];
                if !v.is_zero() {
                    out.set(r, c, v.clone())?;
                }
            }
        }
        Ok(out)
    }
}

/// Solve `A x = b` exactly, where the columns of `A` are the given vectors.
/// Returns the deterministic particular solution with free coordinates zero,
/// or `None` if the system is inconsistent.
pub fn solve(columns: &[Vector], b: &Vector) -> Option<Vec<Scalar>> {
    let space: &Arc<GradedSpace> = b.space();
    let nr = space.dim();
    let nc = columns.len();
    let mut m: Vec<Vec<Scalar>> = (0..nr)
        .map(|r| {
            let mut row: Vec<Scalar> = columns.iter().map(|col| col.coeff(r)).collect();
            row.push(b.coeff(r));
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0usize;
    for pc in 0..nc {
        let Some(pr) = (prow..nr).find(|&r| !m[r][pc].is_zero()) else {
            continue;
        };
        m.swap(prow, pr);
        let inv = m[prow][pc].recip();
        for c in 0..=nc {
            let v = &m[prow][c] * &inv;
            m[prow][c] = v;
        }
        for r in 0..nr {
            if r != prow && !m[r][pc].is_zero() {
                let f = m[r][pc].clone();
                for c in 0..=nc {
                    let v = &m[r][c] - &f * &m[prow][c];
                    m[r][c] = v;
                }
            }
        }
        pivots.push((prow, pc));
        prow += 1;
        if prow == nr {
            break;
        }
    }
    // inconsistent iff some zero row has nonzero rhs
    for r in prow..nr {
        if !m[r][nc].is_zero() {
            return None;
        }
    }
    let mut x = vec![Scalar::zero(); nc];
    for &(pr, pc) in &pivots {
        x[pc] = m[pr][nc].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    #[test]
    fn zero_map_full_kernel_empty_image() {
        let v = GradedSpace::from_pairs(&[("a", 0), ("b", 1), ("c", 0)]);
        let z = GradedMap::zero(&v, &v, Parity::Odd);
        let r = z.rref();
        assert_eq!(r.rank(), 0);
        assert_eq!(r.kernel.len(), 3);
        assert!(r.image.is_empty());
    }

    #[test]
    fn differential_on_two_elements() {
        // d(x) = y on span{x (odd), y (even)}: kernel = {y}, image = {y}
        let v = GradedSpace::from_pairs(&[("x", 1), ("y", 0)]);
        let d = GradedMap::from_named(&v, &v, Parity::Odd, &[("y", "x", scalar(1, 1))]).unwrap();
        let r = d.rref();
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.kernel.len(), 1);
        assert_eq!(r.kernel[0], Vector::basis(&v, 1));
        assert_eq!(r.image.len(), 1);
        assert_eq!(r.image[0], Vector::basis(&v, 1));
    }

    #[test]
    fn rref_is_deterministic() {
        let v = GradedSpace::from_pairs(&[("a", 0), ("b", 0), ("c", 0)]);
        let entries: Vec<(&str, &str, Scalar)> = vec![
            ("a", "a", scalar(2, 1)),
            ("a", "b", scalar(4, 1)),
            ("b", "a", scalar(1, 1)),
            ("b", "b", scalar(2, 1)),
            ("c", "c", scalar(0, 1)),
        ];
        let m = GradedMap::from_named(&v, &v, Parity::Even, &entries).unwrap();
        let r1 = m.rref();
        let r2 = m.rref();
        assert_eq!(r1.reduced, r2.reduced);
        assert_eq!(r1.pivots, r2.pivots);
        assert_eq!(r1.kernel, r2.kernel);
    }

    #[test]
    fn rank_matches_minor_oracle_on_random_matrices() {
        // independent oracle: rank = size of the largest nonvanishing minor
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(91);
        let names = ["a", "b", "c", "d", "e"];
        let v = GradedSpace::from_pairs(&names.map(|n| (n, 0)));
        for _ in 0..8 {
            let mut entries = Vec::new();
            for o in 0..5 {
                for i in 0..5 {
                    let num = rng.gen_range(-2i64..=2);
                    if num != 0 {
                        entries.push((names[o], names[i], scalar(num, 1)));
                    }
                }
            }
            let m = GradedMap::from_named(&v, &v, Parity::Even, &entries).unwrap();
            assert_eq!(m.rank(), minor_rank(&m, 5));
        }
    }

    fn minor_rank(m: &GradedMap, n: usize) -> usize {
        for size in (1..=n).rev() {
            for rows in combinations(n, size) {
                for cols in combinations(n, size) {
                    if !det(m, &rows, &cols).is_zero() {
                        return size;
                    }
                }
            }
        }
        0
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..=(n - k) {
            for mut rest in combinations(n - first - 1, k - 1) {
                for r in rest.iter_mut() {
                    *r += first + 1;
                }
                let mut c = vec![first];
                c.extend(rest);
                out.push(c);
            }
        }
        out
    }

    fn det(m: &GradedMap, rows: &[usize], cols: &[usize]) -> Scalar {
        // Laplace expansion; fine for size <= 5
        if rows.len() == 1 {
            return m.entry(rows[0], cols[0]);
        }
        let mut acc = Scalar::zero();
        let mut sign = 1i64;
        for (k, &r) in rows.iter().enumerate() {
            let sub_rows: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, &x)| x)
                .collect();
            let e = m.entry(r, cols[0]);
            if !e.is_zero() {
                acc += scalar(sign, 1) * e * det(m, &sub_rows, &cols[1..]);
            }
            sign = -sign;
        }
        acc
    }

    #[test]
    fn solve_finds_exact_solution() {
        let v = GradedSpace::from_pairs(&[("a", 0), ("b", 0)]);
        let c1 = Vector::from_coords(&v, &[(0, scalar(1, 1)), (1, scalar(1, 1))]);
        let c2 = Vector::from_coords(&v, &[(0, scalar(1, 1)), (1, scalar(-1, 1))]);
        let b = Vector::from_coords(&v, &[(0, scalar(3, 1)), (1, scalar(1, 1))]);
        let x = solve(&[c1.clone(), c2.clone()], &b).unwrap();
        assert_eq!(x, vec![scalar(2, 1), scalar(1, 1)]);
        let inconsistent = solve(&[c1.clone()], &Vector::basis(&v, 0));
        assert!(inconsistent.is_none());
    }
}
