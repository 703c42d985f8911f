use std::fmt;

use num_traits::{One, Zero};

use super::rational::{pivot_key, Rational};

/// Dense row-major matrix over ℚ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of exact Gauss–Jordan elimination.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub rank: usize,
    /// Reduced row echelon form of the input.
    pub rref: Matrix,
    /// Pivot column of each nonzero row of `rref`, increasing.
    pub pivot_cols: Vec<usize>,
    /// Kernel basis, one vector (length `cols`) per free column.
    pub kernel: Vec<Vec<Rational>>,
    /// Column space basis: the input's pivot columns.
    pub image: Vec<Vec<Rational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Builds a `rows × cols` matrix from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| super::rational::int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Gauss–Jordan elimination.
    ///
    /// Columns are processed left to right. Among the remaining rows with a
    /// nonzero entry in the current column the pivot is the entry with the
    /// smallest denominator, then the smallest numerator magnitude, then the
    /// smallest row index. Output bases are therefore deterministic.
    pub fn reduce(&self) -> Reduction {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pivot = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by(|&a, &b| pivot_key(&m[(a, c)]).cmp(&pivot_key(&m[(b, c)])).then(a.cmp(&b)));
            let Some(p) = pivot else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let delta = &f * &m[(r, j)];
                    m[(i, j)] -= delta;
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let rank = pivot_cols.len();
        let mut kernel = Vec::new();
        let mut is_pivot = vec![false; m.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        for f in (0..m.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                if !m[(i, f)].is_zero() {
                    v[pc] = -m[(i, f)].clone();
                }
            }
            kernel.push(v);
        }
        let image = pivot_cols.iter().map(|&c| self.column(c)).collect();
        Reduction { rank, rref: m, pivot_cols, kernel, image }
    }

    /// Rank by sparse row elimination; much cheaper than [`Matrix::reduce`]
    /// on the large, mostly-zero differentials of free Lie algebras.
    pub fn rank(&self) -> usize {
        sparse_rank(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(j, v)| (j, v.clone()))
                        .collect()
                })
                .collect(),
        )
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let red = aug.reduce();
        if red.pivot_cols.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &pc) in red.pivot_cols.iter().enumerate() {
            x[pc] = red.rref[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let red = self.hstack(&Matrix::identity(n)).reduce();
        if red.pivot_cols.len() < n || red.pivot_cols[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = red.rref[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Rank of a matrix given as sparse rows `(column, value)`, sorted by column.
pub fn sparse_rank(rows: Vec<Vec<(usize, Rational)>>) -> usize {
    let mut pivots: std::collections::BTreeMap<usize, Vec<(usize, Rational)>> = Default::default();
    for mut row in rows {
        row.retain(|(_, v)| !v.is_zero());
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else { break };
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let f = &lead_val / &p[0].1;
                    row = axpy_sparse(&row, p, &f);
                }
            }
        }
    }
    pivots.len()
}

/// `a - f * b` for sorted sparse rows.
fn axpy_sparse(a: &[(usize, Rational)], b: &[(usize, Rational)], f: &Rational) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::rational::int;
    use proptest::prelude::*;

    #[test]
    fn identity_has_full_rank_and_no_kernel() {
        let r = Matrix::identity(2).reduce();
        assert_eq!(r.rank, 2);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let r = Matrix::zeros(3, 4).reduce();
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.len(), 4);
        assert!(r.image.is_empty());
    }

    #[test]
    fn rank_one_example() {
        // brute force: the only 2x2 minor is 1*4 - 2*2 = 0 and some entry is
        // nonzero, so the rank is exactly 1.
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let det = &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)];
        assert!(det.is_zero());
        let r = m.reduce();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel, vec![vec![int(-2), int(1)]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn empty_matrices() {
        assert_eq!(Matrix::zeros(0, 3).reduce().kernel.len(), 3);
        assert_eq!(Matrix::zeros(3, 0).reduce().rank, 0);
        assert_eq!(Matrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&[int(3), int(2)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).solve(&[int(1), int(0)]).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                let rows = v.chunks(c).map(|ch| ch.iter().map(|&x| int(x)).collect()).collect();
                Matrix::from_rows(rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let r = m.reduce();
            prop_assert_eq!(r.rank + r.kernel.len(), m.cols());
            prop_assert_eq!(r.rank, m.rank());
            for k in &r.kernel {
                prop_assert!(m.apply(k).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn rank_invariant_under_column_permutation(m in small_matrix(), seed in 0u64..1000) {
            let c = m.cols();
            let mut perm: Vec<usize> = (0..c).collect();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..c).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let cols: Vec<_> = perm.iter().map(|&j| m.column(j)).collect();
            let p = Matrix::from_columns(m.rows(), &cols);
            prop_assert_eq!(p.reduce().rank, m.reduce().rank);
        }
    }
}
