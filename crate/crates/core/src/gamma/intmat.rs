//! Dense matrices over the integers with exact (arbitrary-precision)
//! entries, and the normal forms used throughout the crate: column echelon
//! form with tracked transforms, diagonalisation, and column Hermite form
//! saturated at a prime.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = &self[(r, c)];
                    if r == c { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out[(self.rows + r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                out[(i, c)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * q;
            if !v.is_zero() {
                self[(dst, c)] -= v;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * q;
            if !v.is_zero() {
                self[(r, dst)] -= v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

/// Column echelon form `E = A V` of an integer matrix together with the
/// unimodular transform `V` and its inverse.
///
/// Columns `0..rank` of `E` are in echelon form (strictly increasing pivot
/// rows); columns `rank..` are zero, so the matching columns of `V` form a
/// Z-basis of the integer kernel of `A`.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub echelon: IntMatrix,
    pub transform: IntMatrix,
    pub inverse: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let mut e = a.clone();
    let n = a.cols();
    let mut v = IntMatrix::identity(n);
    let mut vinv = IntMatrix::identity(n);
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for r in 0..e.rows() {
        if pc == n {
            break;
        }
        loop {
            let best = (pc..n)
                .filter(|&j| !e[(r, j)].is_zero())
                .min_by(|&x, &y| e[(r, x)].abs().cmp(&e[(r, y)].abs()));
            let Some(j) = best else { break };
            e.swap_cols(pc, j);
            v.swap_cols(pc, j);
            vinv.swap_rows(pc, j);
            let mut clean = true;
            for j in pc + 1..n {
                if e[(r, j)].is_zero() {
                    continue;
                }
                let q = e[(r, j)].div_floor(&e[(r, pc)]);
                if !q.is_zero() {
                    e.col_axpy(j, pc, &q);
                    v.col_axpy(j, pc, &q);
                    // V' = V (I - q e_pc e_j^T)  =>  V'^-1 = (I + q e_pc e_j^T) V^-1
                    vinv.row_axpy(pc, j, &-q);
                }
                if !e[(r, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if e[(r, pc)].is_negative() {
                    e.negate_col(pc);
                    v.negate_col(pc);
                    vinv.negate_row(pc);
                }
                pivot_rows.push(r);
                pc += 1;
                break;
            }
        }
    }
    ColumnEchelon { echelon: e, transform: v, inverse: vinv, pivot_rows }
}

/// Saturated Z-basis of the integer kernel of `a` (as columns) together
/// with a left inverse `L` (`L K = I`) that reads off kernel coordinates.
pub fn kernel_basis(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let ce = column_echelon(a);
    let idx: Vec<usize> = (ce.rank()..a.cols()).collect();
    (ce.transform.select_cols(&idx), ce.inverse.select_rows(&idx))
}

/// Diagonal form `U A V = diag(d_0, ..., d_{k-1}, 0, ...)` with `d_i > 0`.
/// Only the left transform and its inverse are kept.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub left_inverse: IntMatrix,
}

pub fn diagonalize(a: &IntMatrix) -> Diagonalization {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut u = IntMatrix::identity(rows);
    let mut uinv = IntMatrix::identity(rows);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| m[(i, j)].abs() < m[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else {
                return Diagonalization { diagonal, left: u, left_inverse: uinv };
            };
            m.swap_rows(t, i);
            u.swap_rows(t, i);
            uinv.swap_cols(t, i);
            m.swap_cols(t, j);
            let mut clean = true;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = m[(i, t)].div_floor(&m[(t, t)]);
                if !q.is_zero() {
                    m.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                    // U' = (I - q e_i e_t^T) U  =>  U'^-1 = U^-1 (I + q e_i e_t^T)
                    uinv.col_axpy(t, i, &-q);
                }
                if !m[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = m[(t, j)].div_floor(&m[(t, t)]);
                if !q.is_zero() {
                    m.col_axpy(j, t, &q);
                }
                if !m[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if m[(t, t)].is_negative() {
                    m.negate_row(t);
                    u.negate_row(t);
                    uinv.negate_col(t);
                }
                diagonal.push(m[(t, t)].clone());
                break;
            }
        }
    }
    Diagonalization { diagonal, left: u, left_inverse: uinv }
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// Column Hermite normal form of the p-saturation of the column span of
/// `cols`, i.e. of `(span ⊗ Z_(p)) ∩ Z^m`.
///
/// Prime-to-p parts of the elementary divisors are discarded before the
/// echelon step, so for full-rank input every pivot is a power of `p`.
/// The result is lower-triangular in the echelon sense, pivots positive and
/// entries left of each pivot reduced into `[0, pivot)`.
pub fn hnf_p_saturated(cols: &IntMatrix, p: u64) -> IntMatrix {
    let d = diagonalize(cols);
    let pb = BigInt::from(p);
    let mut gens = Vec::with_capacity(d.diagonal.len());
    for (i, di) in d.diagonal.iter().enumerate() {
        let scale = num_traits::pow(pb.clone(), valuation(di, p) as usize);
        let col: Vec<BigInt> = d.left_inverse.column(i).into_iter().map(|x| x * &scale).collect();
        gens.push(col);
    }
    let basis = IntMatrix::from_columns(cols.rows(), &gens);
    hermite_columns(&basis)
}

/// Column Hermite normal form of the span of the columns of `a`.
pub fn hermite_columns(a: &IntMatrix) -> IntMatrix {
    let ce = column_echelon(a);
    let rank = ce.rank();
    let mut h = ce.echelon.select_cols(&(0..rank).collect::<Vec<_>>());
    for (c, &r) in ce.pivot_rows.iter().enumerate() {
        let piv = h[(r, c)].clone();
        for c2 in 0..c {
            let q = h[(r, c2)].div_floor(&piv);
            if !q.is_zero() {
                h.col_axpy(c2, c, &q);
            }
        }
    }
    h
}

/// Solves `B x = v` for a column-echelon `B` with the given pivot rows.
/// Returns `None` when no integral solution exists.
pub fn solve_echelon(b: &IntMatrix, pivot_rows: &[usize], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut x = Vec::with_capacity(b.cols());
    for (c, &r) in pivot_rows.iter().enumerate() {
        let mut rhs = v[r].clone();
        for (c2, xc) in x.iter().enumerate() {
            rhs -= &b[(r, c2)] * xc;
        }
        let (q, rem) = rhs.div_rem(&b[(r, c)]);
        if !rem.is_zero() {
            return None;
        }
        x.push(q);
    }
    (b.mul_vec(&x) == v).then_some(x)
}

/// Pivot rows of a matrix already in column echelon form.
pub fn echelon_pivots(b: &IntMatrix) -> Vec<usize> {
    (0..b.cols())
        .map(|c| (0..b.rows()).find(|&r| !b[(r, c)].is_zero()).expect("zero column in echelon basis"))
        .collect()
}
