//! Dense matrices over arbitrary-precision integers and rationals.
//!
//! Everything here is exact. The integer routines (Bareiss determinant, Smith
//! and Hermite normal forms) carry the lattice module; the rational routines
//! (rank, inverse, symmetric reduction) back signatures and coordinate changes.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1)).take(self.rows)).finish()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows. Returns `None` when the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return None;
        }
        Some(Matrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let (r, c) = (self.rows, self.cols);
        Matrix::from_fn(r + other.rows, c + other.cols, |i, j| match (i < r, j < c) {
            (true, true) => self[(i, j)].clone(),
            (false, false) => other[(i - r, j - c)].clone(),
            _ => T::zero(),
        })
    }

    /// Matrix product. Panics on shape mismatch.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

/// `uᵀ·M·v` for a square matrix.
pub fn bilinear<T: Clone + Zero + One>(m: &Matrix<T>, u: &[T], v: &[T]) -> T {
    u.iter().zip(m.mul_vec(v)).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
}

pub fn to_rational(m: &Matrix<BigInt>) -> Matrix<BigRational> {
    m.map(|x| BigRational::from_integer(x.clone()))
}

/// Converts a rational matrix to an integer one if every entry is integral.
pub fn to_integer(m: &Matrix<BigRational>) -> Option<Matrix<BigInt>> {
    if m.data.iter().all(|x| x.is_integer()) {
        Some(m.map(|x| x.to_integer()))
    } else {
        None
    }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(m: &Matrix<BigInt>) -> BigInt {
    assert!(m.is_square());
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Rank over the rationals.
pub fn rank(m: &Matrix<BigRational>) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
        a.swap_rows(r, p);
        let pivot = a[(r, c)].clone();
        for i in r + 1..a.rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &pivot;
            for j in c..a.cols {
                let v = &a[(r, j)] * &f;
                a[(i, j)] -= v;
            }
        }
        r += 1;
        if r == a.rows {
            break;
        }
    }
    r
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn inverse(m: &Matrix<BigRational>) -> Option<Matrix<BigRational>> {
    assert!(m.is_square());
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = Matrix::<BigRational>::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&i| !a[(i, c)].is_zero())?;
        a.swap_rows(c, p);
        inv.swap_rows(c, p);
        let pivot = a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = &a[(c, j)] / &pivot;
            inv[(c, j)] = &inv[(c, j)] / &pivot;
        }
        for i in 0..n {
            if i == c || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..n {
                let (x, y) = (&a[(c, j)] * &f, &inv[(c, j)] * &f);
                a[(i, j)] -= x;
                inv[(i, j)] -= y;
            }
        }
    }
    Some(inv)
}

/// Counts of positive, negative and zero eigenvalue signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Sylvester inertia of a symmetric rational matrix by congruence reduction.
pub fn inertia(m: &Matrix<BigRational>) -> Inertia {
    assert!(m.is_symmetric());
    let n = m.rows;
    let mut a = m.clone();
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                a.swap_rows(k, i);
                a.swap_cols(k, i);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // e_i -> e_i + e_j makes the diagonal entry 2·a_ij.
                for c in 0..n {
                    let v = a[(j, c)].clone();
                    a[(i, c)] += v;
                }
                for r in 0..n {
                    let v = a[(r, j)].clone();
                    a[(r, i)] += v;
                }
                a.swap_rows(k, i);
                a.swap_cols(k, i);
            } else {
                out.zero += n - k;
                return out;
            }
        }
        let pivot = a[(k, k)].clone();
        if pivot.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &pivot;
            for j in k..n {
                let v = &a[(k, j)] * &f;
                a[(i, j)] -= v;
            }
            for r in k..n {
                let v = &a[(r, k)] * &f;
                a[(r, i)] -= v;
            }
        }
    }
    out
}

/// Smith normal form `U·A·V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal of `D`, length `min(rows, cols)`, in divisibility order with zeros last.
    pub diagonal: Vec<BigInt>,
    pub u: Matrix<BigInt>,
    pub u_inv: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Nonzero diagonal entries that are not units.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    /// Z-basis of the integer kernel of `A` (saturated), as columns.
    pub fn kernel(&self) -> Matrix<BigInt> {
        let r = self.rank();
        let idx: Vec<usize> = (r..self.v.cols).collect();
        self.v.select_columns(&idx)
    }

    /// Z-basis of the column span of `A`, as columns.
    pub fn column_span(&self) -> Matrix<BigInt> {
        let r = self.rank();
        Matrix::from_fn(self.u_inv.rows, r, |i, j| &self.u_inv[(i, j)] * &self.diagonal[j])
    }
}

struct SmithCalc {
    a: Matrix<BigInt>,
    u: Matrix<BigInt>,
    u_inv: Matrix<BigInt>,
    v: Matrix<BigInt>,
}

impl SmithCalc {
    // row_i -= q·row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols {
                let v = &m[(t, j)] * q;
                m[(i, j)] -= v;
            }
        }
        for r in 0..self.u_inv.rows {
            let v = &self.u_inv[(r, i)] * q;
            self.u_inv[(r, t)] += v;
        }
    }

    // col_j -= q·col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows {
                let v = &m[(r, t)] * q;
                m[(r, j)] -= v;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols {
            self.a[(i, j)] = -self.a[(i, j)].clone();
        }
        for j in 0..self.u.cols {
            self.u[(i, j)] = -self.u[(i, j)].clone();
        }
        for r in 0..self.u_inv.rows {
            self.u_inv[(r, i)] = -self.u_inv[(r, i)].clone();
        }
    }

    fn run(mut self) -> Smith {
        let (m, n) = (self.a.rows, self.a.cols);
        for t in 0..m.min(n) {
            loop {
                // Smallest nonzero entry of the trailing block becomes the pivot.
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        let x = &self.a[(i, j)];
                        if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return self.finish();
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..m {
                    let q = self.a[(i, t)].div_floor(&pivot);
                    self.row_sub(i, t, &q);
                    dirty |= !self.a[(i, t)].is_zero();
                }
                for j in t + 1..n {
                    let q = self.a[(t, j)].div_floor(&pivot);
                    self.col_sub(j, t, &q);
                    dirty |= !self.a[(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&pivot)));
                match bad {
                    Some(i) => {
                        // row_t += row_i, then repeat the reduction
                        self.row_sub(t, i, &-BigInt::one());
                    }
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
        self.finish()
    }

    fn finish(self) -> Smith {
        let k = self.a.rows.min(self.a.cols);
        Smith { diagonal: (0..k).map(|i| self.a[(i, i)].clone()).collect(), u: self.u, u_inv: self.u_inv, v: self.v }
    }
}

pub fn smith(a: &Matrix<BigInt>) -> Smith {
    SmithCalc {
        a: a.clone(),
        u: Matrix::identity(a.rows),
        u_inv: Matrix::identity(a.rows),
        v: Matrix::identity(a.cols),
    }
    .run()
}

/// Column-style Hermite normal form of a full-row-rank integer matrix.
///
/// Returns the square lower-triangular basis of the column span, with positive
/// diagonal and entries left of the diagonal reduced into `[0, pivot)`.
/// `None` if the rows are dependent.
pub fn hermite_column_basis(a: &Matrix<BigInt>) -> Option<Matrix<BigInt>> {
    let (m, n) = (a.rows, a.cols);
    let mut h = a.clone();
    for i in 0..m {
        // Euclid across columns i..n in row i.
        loop {
            let nz: Vec<usize> = (i..n).filter(|&j| !h[(i, j)].is_zero()).collect();
            if nz.is_empty() {
                return None;
            }
            let p = *nz.iter().min_by_key(|&&j| h[(i, j)].abs()).unwrap();
            h.swap_cols(i, p);
            if nz.len() == 1 {
                break;
            }
            let pivot = h[(i, i)].clone();
            for j in i + 1..n {
                let q = h[(i, j)].div_floor(&pivot);
                if !q.is_zero() {
                    for r in 0..m {
                        let v = &h[(r, i)] * &q;
                        h[(r, j)] -= v;
                    }
                }
            }
        }
        if h[(i, i)].is_negative() {
            for r in 0..m {
                h[(r, i)] = -h[(r, i)].clone();
            }
        }
        let pivot = h[(i, i)].clone();
        for j in 0..i {
            let q = h[(i, j)].div_floor(&pivot);
            if !q.is_zero() {
                for r in 0..m {
                    let v = &h[(r, i)] * &q;
                    h[(r, j)] -= v;
                }
            }
        }
    }
    let idx: Vec<usize> = (0..m).collect();
    Some(h.select_columns(&idx))
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn int_matrix(rows: &[&[i64]]) -> Matrix<BigInt> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
        .expect("ragged matrix literal")
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

/// Smallest positive `n` with `n·v` integral.
pub fn denominator_lcm(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn check_smith(a: &Matrix<BigInt>) -> Smith {
        let s = smith(a);
        let d = s.u.mul(a).mul(&s.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i == j {
                    assert_eq!(d[(i, j)], s.diagonal[i]);
                } else {
                    assert!(d[(i, j)].is_zero());
                }
            }
        }
        assert_eq!(s.u.mul(&s.u_inv), Matrix::identity(a.rows()));
        assert!(determinant(&s.v).abs().is_one());
        for w in s.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let a = int_matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(determinant(&a), int(4));
        let b = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&b), int(-1));
        let z = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&z), int(0));
    }

    #[test]
    fn smith_known_forms() {
        let s = check_smith(&int_matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.diagonal, vec![int(2), int(6), int(12)]);
        let s = check_smith(&int_matrix(&[&[0, 2], &[2, 0]]));
        assert_eq!(s.diagonal, vec![int(2), int(2)]);
        let s = check_smith(&int_matrix(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(s.rank(), 1);
        let k = s.kernel();
        assert_eq!(k.cols(), 2);
        let prod = int_matrix(&[&[1, 2, 3], &[2, 4, 6]]).mul(&k);
        assert!(prod.to_rows().iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn hermite_basis_spans_same_lattice() {
        let a = int_matrix(&[&[2, 0, 1], &[0, 2, 1]]);
        let h = hermite_column_basis(&a).unwrap();
        assert_eq!(determinant(&h).abs(), int(2));
        assert_eq!(h, int_matrix(&[&[1, 0], &[1, 2]]));
    }

    #[test]
    fn inertia_of_hyperbolic_plane_and_zero_diagonal() {
        let u = to_rational(&int_matrix(&[&[0, 1], &[1, 0]]));
        assert_eq!(inertia(&u), Inertia { positive: 1, negative: 1, zero: 0 });
        let d = to_rational(&int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]));
        assert_eq!(inertia(&d), Inertia { positive: 1, negative: 1, zero: 1 });
    }

    #[test]
    fn inverse_round_trip() {
        let a = to_rational(&int_matrix(&[&[2, 1], &[1, 1]]));
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(inverse(&to_rational(&int_matrix(&[&[1, 1], &[1, 1]]))).is_none());
    }
}
