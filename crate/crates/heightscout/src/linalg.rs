//! Exact integer linear algebra: dense arbitrary-precision matrices,
//! fraction-free determinants, Hermite normal forms and integer kernels.
//!
//! Everything here works over `BigInt`; no floating point is used anywhere,
//! so results are exact for inputs of any size.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interchange::parse_bigint;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    /// Convenience constructor from machine-integer rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(r > 0 && c > 0, "from_rows needs a nonempty rectangle");
        assert!(rows.iter().all(|row| row.len() == c));
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| BigInt::from(v)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    /// Convenience constructor from machine-integer columns.
    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        assert!(r > 0 && c > 0, "from_columns needs a nonempty rectangle");
        assert!(cols.iter().all(|col| col.len() == r));
        let mut m = IntMatrix::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(*v);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * rhs.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (i, acc) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    *acc += self.at(i, j) * x;
                }
            }
        }
        Ok(out)
    }

    /// Square submatrix formed by the given rows (all columns kept).
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zero(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                *m.at_mut(i, c) = self.at(r, c).clone();
            }
        }
        m
    }

    /// Square submatrix formed by the given columns (all rows kept).
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                *m.at_mut(r, j) = self.at(r, c).clone();
            }
        }
        m
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, c).clone();
            *self.at_mut(r, c) = v;
        }
    }

    /// col_dst += q * col_src
    fn addmul_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = self.at(r, src) * q;
            *self.at_mut(r, dst) += add;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row_dst += q * row_src
    fn addmul_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = self.at(src, c) * q;
            *self.at_mut(dst, c) += add;
        }
    }
}

/// Wire format: `{"rows": N, "cols": J, "data": [["1","2"],["3","4"]]}`
/// with entries as decimal strings.
#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<Vec<String>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let data = (0..self.rows)
            .map(|r| self.row(r).iter().map(|v| v.to_string()).collect())
            .collect();
        MatrixWire {
            rows: self.rows,
            cols: self.cols,
            data,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(d)?;
        if wire.data.len() != wire.rows {
            return Err(serde::de::Error::custom(format!(
                "matrix declares {} rows but data has {}",
                wire.rows,
                wire.data.len()
            )));
        }
        let mut data = Vec::with_capacity(wire.rows * wire.cols);
        for row in &wire.data {
            if row.len() != wire.cols {
                return Err(serde::de::Error::custom(format!(
                    "matrix declares {} cols but a row has {}",
                    wire.cols,
                    row.len()
                )));
            }
            for s in row {
                data.push(parse_bigint(s).map_err(serde::de::Error::custom)?);
            }
        }
        IntMatrix::new(wire.rows, wire.cols, data).map_err(serde::de::Error::custom)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination with row
/// pivoting; every intermediate value stays an integer.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m.at(k, k).is_zero() {
            match (k + 1..n).find(|&r| !m.at(r, k).is_zero()) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                *m.at_mut(i, j) = q;
            }
            *m.at_mut(i, k) = BigInt::zero();
        }
        prev = m.at(k, k).clone();
    }
    let det = m.at(n - 1, n - 1).clone();
    Ok(if sign < 0 { -det } else { det })
}

/// Floor division quotient, used to reduce entries into `[0, d)` for `d > 0`.
fn floor_div(a: &BigInt, d: &BigInt) -> BigInt {
    a.div_floor(d)
}

/// Hermite normal form of a nonsingular square basis matrix under
/// unimodular column operations: upper triangular, positive diagonal and
/// every off-diagonal entry of row `n` reduced into `[0, a_nn)`.
///
/// The column span (the lattice) is unchanged and `|det|` is preserved.
pub fn hnf_upper_triangular(b: &IntMatrix) -> Result<IntMatrix> {
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.rows,
            cols: b.cols,
        });
    }
    let n = b.rows;
    let mut h = b.clone();

    // Triangularize from the bottom row up; row `p` may only use columns 0..=p.
    for p in (0..n).rev() {
        loop {
            // Concentrate the gcd of row p among columns 0..=p into column p.
            let mut best: Option<usize> = None;
            for j in 0..=p {
                if h.at(p, j).is_zero() {
                    continue;
                }
                best = match best {
                    Some(b) if h.at(p, b).abs() <= h.at(p, j).abs() => Some(b),
                    _ => Some(j),
                };
            }
            let Some(j) = best else {
                return Err(Error::Singular);
            };
            h.swap_cols(j, p);
            let mut done = true;
            for j in 0..p {
                if h.at(p, j).is_zero() {
                    continue;
                }
                let q = -floor_div(h.at(p, j), h.at(p, p));
                h.addmul_col(j, p, &q);
                if !h.at(p, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.at(p, p).is_negative() {
            h.negate_col(p);
        }
    }

    // Reduce the entries right of each pivot; proceeding from the bottom row
    // up keeps already reduced rows untouched.
    for p in (0..n).rev() {
        for j in p + 1..n {
            let q = -floor_div(h.at(p, j), h.at(p, p));
            h.addmul_col(j, p, &q);
        }
    }
    Ok(h)
}

/// Column Hermite form of an `N x J` matrix of independent columns together
/// with the pivot rows: the unique basis of the same column span with
/// strictly increasing pivot rows, positive pivots, zero entries right of
/// each pivot and earlier-column entries on a pivot row reduced mod the
/// pivot. Returns a rank error when the columns are dependent.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub basis: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

pub fn column_echelon(x: &IntMatrix) -> Result<ColumnEchelon> {
    let (n, j) = (x.rows, x.cols);
    let mut h = x.clone();
    let mut pivot_rows = Vec::with_capacity(j);
    let mut next = 0usize; // next pivot column
    for row in 0..n {
        if next == j {
            break;
        }
        // Concentrate the gcd of this row among the free columns into `next`.
        loop {
            let mut best: Option<usize> = None;
            for c in next..j {
                if h.at(row, c).is_zero() {
                    continue;
                }
                best = match best {
                    Some(b) if h.at(row, b).abs() <= h.at(row, c).abs() => Some(b),
                    _ => Some(c),
                };
            }
            let Some(c) = best else { break };
            h.swap_cols(c, next);
            let mut done = true;
            for c in next + 1..j {
                if h.at(row, c).is_zero() {
                    continue;
                }
                let q = -floor_div(h.at(row, c), h.at(row, next));
                h.addmul_col(c, next, &q);
                if !h.at(row, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.at(row, next).is_zero() {
            continue; // no pivot in this row
        }
        if h.at(row, next).is_negative() {
            h.negate_col(next);
        }
        // Canonical reduction of the earlier columns on this pivot row.
        let pivot = h.at(row, next).clone();
        for c in 0..next {
            let q = -floor_div(h.at(row, c), &pivot);
            h.addmul_col(c, next, &q);
        }
        pivot_rows.push(row);
        next += 1;
    }
    if next < j {
        return Err(Error::RankDeficient(format!(
            "columns span rank {next}, expected {j}"
        )));
    }
    Ok(ColumnEchelon {
        basis: h,
        pivot_rows,
    })
}

/// Basis of the left-kernel lattice of `x`: an `(N-J) x N` integer matrix of
/// full row rank with `A x = 0`, saturated (so the gcd of all entries is 1),
/// each row normalized to have positive leading entry.
///
/// `x` must have `J < N` independent columns.
pub fn kernel_matrix(x: &IntMatrix) -> Result<IntMatrix> {
    let (n, j) = (x.rows, x.cols);
    if j >= n {
        return Err(Error::EmptyKernel);
    }
    // Row-reduce [x] while tracking the unimodular transform u.
    let mut e = x.clone();
    let mut u = IntMatrix::identity(n);
    let mut pivot = 0usize;
    for col in 0..j {
        loop {
            let mut best: Option<usize> = None;
            for r in pivot..n {
                if e.at(r, col).is_zero() {
                    continue;
                }
                best = match best {
                    Some(b) if e.at(b, col).abs() <= e.at(r, col).abs() => Some(b),
                    _ => Some(r),
                };
            }
            let Some(r) = best else { break };
            e.swap_rows(r, pivot);
            u.swap_rows(r, pivot);
            let mut done = true;
            for r in pivot + 1..n {
                if e.at(r, col).is_zero() {
                    continue;
                }
                let q = -floor_div(e.at(r, col), e.at(pivot, col));
                e.addmul_row(r, pivot, &q);
                u.addmul_row(r, pivot, &q);
                if !e.at(r, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if e.at(pivot, col).is_zero() {
            return Err(Error::RankDeficient(format!(
                "columns of the {n}x{j} matrix are dependent (column {col})"
            )));
        }
        pivot += 1;
    }
    debug_assert_eq!(pivot, j);
    // Rows pivot..n of u annihilate every column of x.
    let mut out = IntMatrix::zero(n - j, n);
    for (i, r) in (j..n).enumerate() {
        let mut row: Vec<BigInt> = u.row(r).to_vec();
        if let Some(first) = row.iter().find(|v| !v.is_zero()) {
            if first.is_negative() {
                for v in &mut row {
                    *v = -v.clone();
                }
            }
        }
        for (c, v) in row.into_iter().enumerate() {
            *out.at_mut(i, c) = v;
        }
    }
    Ok(out)
}

/// All size-`k` subsets of `{0, .., n-1}` in lexicographic order.
pub fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=n - need {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}
