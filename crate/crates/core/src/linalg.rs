//! Exact linear algebra over the rationals.
//!
//! Two representations are provided: a dense row-major matrix of
//! `BigRational` entries used by the general homology routines (deterministic
//! row-reduction with pivoting by fixed column order), and sparse integer
//! columns with fraction-free elimination used for rank/kernel computations on
//! large boundary matrices. No floating point anywhere.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type Int = BigInt;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational from numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Dense row-major matrix of rationals. `rows` or `cols` may be zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl core::fmt::Debug for Mat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_i(x)).collect())
                .collect(),
        )
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut t = Rat::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    /// Reduced row echelon form with pivots chosen by fixed column order:
    /// columns are scanned left to right, and within a column the first row
    /// (in row order) with a nonzero entry is the pivot. Returns the reduced
    /// matrix and the pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0usize;
        for col in 0..m.cols {
            if next_row >= m.rows {
                break;
            }
            let Some(pr) = (next_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if pr != next_row {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, next_row * m.cols + j);
                }
            }
            let inv = m[(next_row, col)].recip();
            for j in col..m.cols {
                let v = &m[(next_row, j)] * &inv;
                m[(next_row, j)] = v;
            }
            for r in 0..m.rows {
                if r != next_row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for j in col..m.cols {
                        let v = &m[(r, j)] - &factor * &m[(next_row, j)];
                        m[(r, j)] = v;
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column, in free-column
    /// order. Each vector has a 1 in its free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b`, if consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = {
            let (r, p) = aug.rref();
            aug = r;
            (aug, p)
        };
        if pivots.last() == Some(&self.cols) {
            return None; // inconsistent: pivot in the augmented column
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j == n + i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Rat::zero();
            };
            if pr != col {
                for j in 0..n {
                    m.data.swap(pr * n + j, col * n + j);
                }
                det = -det;
            }
            det *= &m[(col, col)];
            let inv = m[(col, col)].recip();
            for r in col + 1..n {
                if !m[(r, col)].is_zero() {
                    let factor = &m[(r, col)] * &inv;
                    for j in col..n {
                        let v = &m[(r, j)] - &factor * &m[(col, j)];
                        m[(r, j)] = v;
                    }
                }
            }
        }
        det
    }

    /// Leading principal minors are all positive (Sylvester's criterion).
    pub fn is_positive_definite(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        (1..=self.rows).all(|k| {
            let minor = Mat::from_fn(k, k, |i, j| self[(i, j)].clone());
            minor.det().is_positive()
        })
    }
}

/// Incrementally maintained row span (echelon rows keyed by leading column).
/// Used to pick homology representatives deterministically.
#[derive(Clone, Debug, Default)]
pub struct RowSpan {
    rows: Vec<Vec<Rat>>, // echelon rows, leading columns strictly increasing
}

impl RowSpan {
    pub fn new() -> RowSpan {
        RowSpan { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Rat]) {
        for row in &self.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let factor = &v[lead] / &row[lead];
                for j in lead..v.len() {
                    let val = &v[j] - &factor * &row[j];
                    v[j] = val;
                }
            }
        }
    }

    /// Insert `v`; returns true if the rank grew (v was independent).
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(lead) => {
                let pos = self
                    .rows
                    .iter()
                    .position(|r| r.iter().position(|x| !x.is_zero()).unwrap() > lead)
                    .unwrap_or(self.rows.len());
                self.rows.insert(pos, v);
                true
            }
        }
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| x.is_zero())
    }
}

/// Sparse integer vector: (index, nonzero entry) pairs, indices strictly
/// increasing.
pub type SparseVec = Vec<(u32, Int)>;

/// `a*x - b*y` on sparse vectors, followed by division by the gcd of the
/// result's entries (fraction-free update).
fn sv_combine(a: &Int, x: &SparseVec, b: &Int, y: &SparseVec) -> SparseVec {
    let mut out: SparseVec = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < x.len() || j < y.len() {
        let xi = x.get(i).map(|p| p.0);
        let yj = y.get(j).map(|p| p.0);
        match (xi, yj) {
            (Some(p), Some(q)) if p == q => {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((p, v));
                }
                i += 1;
                j += 1;
            }
            (Some(p), Some(q)) if p < q => {
                out.push((p, a * &x[i].1));
                i += 1;
            }
            (Some(_), Some(_)) => {
                out.push((yj.unwrap(), -(b * &y[j].1)));
                j += 1;
            }
            (Some(p), None) => {
                out.push((p, a * &x[i].1));
                i += 1;
            }
            (None, Some(q)) => {
                out.push((q, -(b * &y[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn sv_content(v: &SparseVec) -> Int {
    let mut g = Int::zero();
    for (_, c) in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn sv_divide(v: &mut SparseVec, g: &Int) {
    if g.is_one() || g.is_zero() {
        return;
    }
    for (_, c) in v.iter_mut() {
        *c = &*c / g;
    }
}

/// Sparse integer matrix stored by columns.
#[derive(Clone, Debug)]
pub struct SparseIntMat {
    pub rows: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseIntMat {
    pub fn zero(rows: usize, cols: usize) -> SparseIntMat {
        SparseIntMat {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn push_entry(&mut self, row: usize, col: usize, v: i64) {
        if v == 0 {
            return;
        }
        let col = &mut self.cols[col];
        let row = row as u32;
        match col.binary_search_by_key(&row, |p| p.0) {
            Ok(k) => {
                col[k].1 += Int::from(v);
                if col[k].1.is_zero() {
                    col.remove(k);
                }
            }
            Err(k) => col.insert(k, (row, Int::from(v))),
        }
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zero(self.rows, self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m[(*i as usize, j)] = Rat::from_integer(v.clone());
            }
        }
        m
    }

    pub fn from_dense(m: &Mat) -> SparseIntMat {
        // Clear denominators column by column (column scaling preserves rank
        // and kernel support but not the kernel itself; use only for rank).
        let mut s = SparseIntMat::zero(m.rows, m.cols);
        for j in 0..m.cols {
            let mut denom = Int::one();
            for i in 0..m.rows {
                denom = denom.lcm(m[(i, j)].denom());
            }
            for i in 0..m.rows {
                let v = &m[(i, j)] * Rat::from_integer(denom.clone());
                debug_assert!(v.denom().is_one());
                if !v.numer().is_zero() {
                    s.cols[j].push((i as u32, v.numer().clone()));
                }
            }
        }
        s
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.ncols(), v.len());
        let mut out = vec![Int::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, c) in col {
                out[*i as usize] += c * &v[j];
            }
        }
        out
    }

    /// Rank, by left-to-right column reduction (fraction-free). Columns are
    /// reduced against previously found pivot columns keyed by their lowest
    /// (largest-index) nonzero row.
    pub fn rank(&self) -> usize {
        self.reduce(false).0
    }

    /// Rank and a basis of the integer kernel. Kernel vectors are primitive
    /// (content 1) and deterministic.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<Int>>) {
        let (rank, kernel) = self.reduce(true);
        (rank, kernel)
    }

    fn reduce(&self, track_kernel: bool) -> (usize, Vec<Vec<Int>>) {
        let n = self.ncols();
        // pivot low-row -> (reduced column, combination column)
        let mut pivots: alloc::collections::BTreeMap<u32, (SparseVec, SparseVec)> =
            alloc::collections::BTreeMap::new();
        let mut kernel = Vec::new();
        let mut rank = 0usize;
        for j in 0..n {
            let mut r = self.cols[j].clone();
            let mut v: SparseVec = if track_kernel {
                vec![(j as u32, Int::one())]
            } else {
                Vec::new()
            };
            loop {
                let Some(&(low, _)) = r.last() else {
                    if track_kernel {
                        let mut dense = vec![Int::zero(); n];
                        let g = sv_content(&v);
                        sv_divide(&mut v, &g);
                        for (i, c) in v {
                            dense[i as usize] = c;
                        }
                        kernel.push(dense);
                    }
                    break;
                };
                let Some((pr, pv)) = pivots.get(&low) else {
                    rank += 1;
                    pivots.insert(low, (r, v));
                    break;
                };
                let a = &pr.last().unwrap().1.clone();
                let b = &r.last().unwrap().1.clone();
                let mut new_r = sv_combine(a, &r, b, pr);
                let mut new_v = if track_kernel {
                    sv_combine(a, &v, b, pv)
                } else {
                    Vec::new()
                };
                // joint content reduction keeps new_r = A*new_v
                let mut g = sv_content(&new_r);
                if track_kernel {
                    g = g.gcd(&sv_content(&new_v));
                }
                sv_divide(&mut new_r, &g);
                sv_divide(&mut new_v, &g);
                r = new_r;
                v = new_v;
            }
        }
        (rank, kernel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_rank_kernel() {
        let m = Mat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_int_rows(&[&[2, -1], &[-1, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        let b = [rat_i(1), rat_i(1)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b.to_vec());
        // Inconsistent system
        let s = Mat::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(s.solve(&[rat_i(0), rat_i(1)]).is_none());
    }

    #[test]
    fn det_and_posdef() {
        let m = Mat::from_int_rows(&[&[2, -1], &[-1, 2]]);
        assert_eq!(m.det(), rat_i(3));
        assert!(m.is_positive_definite());
        let n = Mat::from_int_rows(&[&[1, 2], &[2, 1]]);
        assert!(!n.is_positive_definite());
    }

    #[test]
    fn row_span() {
        let mut span = RowSpan::new();
        assert!(span.insert(&[rat_i(1), rat_i(1), rat_i(0)]));
        assert!(span.insert(&[rat_i(0), rat_i(1), rat_i(1)]));
        assert!(!span.insert(&[rat_i(1), rat_i(2), rat_i(1)]));
        assert!(span.contains(&[rat_i(2), rat_i(3), rat_i(1)]));
        assert!(!span.contains(&[rat_i(0), rat_i(0), rat_i(1)]));
    }

    #[test]
    fn sparse_matches_dense() {
        let m = Mat::from_int_rows(&[&[1, 2, 3, 1], &[2, 4, 6, 2], &[1, 1, 1, 1]]);
        let s = SparseIntMat::from_dense(&m);
        assert_eq!(s.rank(), m.rank());
        let (rank, kernel) = s.rank_and_kernel();
        assert_eq!(rank, 2);
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            assert!(s.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn int_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
            })
        }

        fn to_mat(rows: &[Vec<i64>]) -> Mat {
            Mat::from_fn(rows.len(), rows[0].len(), |i, j| rat_i(rows[i][j]))
        }

        proptest! {
            #[test]
            fn rank_is_transpose_invariant(rows in int_matrix(5)) {
                let m = to_mat(&rows);
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn kernel_vectors_annihilate(rows in int_matrix(5)) {
                let m = to_mat(&rows);
                let kernel = m.kernel_basis();
                prop_assert_eq!(m.rank() + kernel.len(), rows[0].len());
                for v in &kernel {
                    prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
                }
            }

            #[test]
            fn sparse_rank_matches_dense(rows in int_matrix(5)) {
                let m = to_mat(&rows);
                let s = SparseIntMat::from_dense(&m);
                prop_assert_eq!(s.rank(), m.rank());
                let (rank, kernel) = s.rank_and_kernel();
                prop_assert_eq!(rank + kernel.len(), rows[0].len());
                for v in &kernel {
                    prop_assert!(s.mul_vec(v).iter().all(|x| x.is_zero()));
                }
            }

            #[test]
            fn det_multiplicative_and_inverse(a in int_matrix(4), b in int_matrix(4)) {
                let n = a.len().min(a[0].len()).min(b.len()).min(b[0].len());
                let am = Mat::from_fn(n, n, |i, j| rat_i(a[i][j]));
                let bm = Mat::from_fn(n, n, |i, j| rat_i(b[i][j]));
                prop_assert_eq!(am.mul(&bm).det(), am.det() * bm.det());
                match am.inverse() {
                    Some(inv) => {
                        prop_assert!(!am.det().is_zero());
                        prop_assert_eq!(am.mul(&inv), Mat::identity(n));
                    }
                    None => prop_assert!(am.det().is_zero()),
                }
            }

            #[test]
            fn solve_solutions_check_out(rows in int_matrix(4), v in proptest::collection::vec(-9i64..=9, 1..=4)) {
                let m = to_mat(&rows);
                let b: Vec<Rat> = (0..rows.len()).map(|i| rat_i(v[i % v.len()])).collect();
                if let Some(x) = m.solve(&b) {
                    prop_assert_eq!(m.mul_vec(&x), b);
                }
            }
        }
    }
}
