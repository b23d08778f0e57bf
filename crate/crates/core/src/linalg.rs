//! Dense exact linear algebra over a [`Field`].
//!
//! Row-major matrices, reduced row echelon form with the first nonzero entry
//! in each column chosen as pivot, and the solvers built on it. Null-space
//! bases come out in canonical order: one vector per free column, with a `1`
//! in that column.

use crate::error::{Error, Result};
use crate::field::{ElemRepr, Field, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

pub fn dot(a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    assert_eq!(a.len(), b.len(), "dot product of mismatched lengths");
    let mut acc = match a.first() {
        Some(x) => x.field().zero(),
        None => panic!("dot product of empty vectors has no field"),
    };
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// `a + k * b`, coordinate-wise.
pub fn axpy(a: &[FieldElem], k: &FieldElem, b: &[FieldElem]) -> Vec<FieldElem> {
    a.iter().zip(b).map(|(x, y)| x + &(k * y)).collect()
}

pub fn scale(k: &FieldElem, v: &[FieldElem]) -> Vec<FieldElem> {
    v.iter().map(|x| k * x).collect()
}

pub fn hamming_weight(v: &[FieldElem]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

pub fn hamming_distance(a: &[FieldElem], b: &[FieldElem]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElem>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix { field, rows: nrows, cols, data }
    }

    /// Row-major element representations.
    pub fn to_repr(&self) -> Vec<Vec<ElemRepr>> {
        (0..self.rows).map(|i| self.row(i).iter().map(FieldElem::to_repr).collect()).collect()
    }

    /// Inverse of [`Matrix::to_repr`]; `cols` fixes the shape of empty matrices.
    pub fn from_repr(field: Field, rows: &[Vec<ElemRepr>], cols: usize) -> Result<Self> {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Parse(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            for (j, c) in r.iter().enumerate() {
                m.set(i, j, field.parse(c)?);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `A v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `v^T A` for a row vector `v`: the linear combination of rows.
    pub fn vec_mul(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![self.field.zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += &(c * a);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows(self.field, idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let rows = (0..self.rows).map(|i| idx.iter().map(|&j| self.get(i, j).clone()).collect()).collect();
        let mut m = Matrix::from_rows(self.field, rows);
        m.cols = idx.len();
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            let pivot_row: Vec<FieldElem> = self.row(r)[c..].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (off, pv) in pivot_row.iter().enumerate() {
                    if pv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, c + off) - &(&f * pv);
                    self.set(i, c + off, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}` in canonical order.
    pub fn null_space(&self) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, free);
            }
            out.push(v);
        }
        out
    }

    /// Basis of `{y : y^T A = 0}`.
    pub fn left_null_space(&self) -> Vec<Vec<FieldElem>> {
        self.transpose().null_space()
    }

    /// Some solution of `A x = b` (free variables set to zero), or `None` if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// The unique solution of `x^T A = b^T`, i.e. coordinates of `b` in the
    /// row space, or `None` if `b` is outside it or the rows are dependent.
    pub fn solve_left_unique(&self, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let t = self.transpose();
        if t.rank() != self.rows {
            return None;
        }
        t.solve(b)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = (0..n).map(|i| aug.row(i)[n..].to_vec()).collect();
        Some(Matrix::from_rows(self.field, rows))
    }

    /// Indices of the first maximal set of linearly independent rows, scanning
    /// rows in order.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut basis: Vec<(usize, Vec<FieldElem>)> = Vec::new();
        let mut chosen = Vec::new();
        for i in 0..self.rows {
            let mut v = self.row(i).to_vec();
            for (pc, b) in &basis {
                if !v[*pc].is_zero() {
                    let f = v[*pc].clone();
                    v = axpy(&v, &-f, b);
                }
            }
            if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
                let inv = v[pc].inv().expect("nonzero");
                let v = scale(&inv, &v);
                // keep earlier basis vectors reduced against the new pivot
                for (_, b) in basis.iter_mut() {
                    if !b[pc].is_zero() {
                        let f = b[pc].clone();
                        *b = axpy(b, &-f, &v);
                    }
                }
                basis.push((pc, v));
                chosen.push(i);
                if chosen.len() == self.cols {
                    break;
                }
            }
        }
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn m(f: Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(f, rows.iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect())
    }

    #[test]
    fn null_space_of_small_code() {
        let f = make_field(5, 1).unwrap();
        let g = m(f, &[&[1, 1, 1], &[3, 3, 4]]);
        let ns = g.null_space();
        assert_eq!(ns.len(), 1);
        // (1, 4, 0) spans the kernel
        assert_eq!(ns[0], vec![f.from_int(4), f.from_int(1), f.from_int(0)]);
        assert!(g.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = make_field(7, 1).unwrap();
        let a = m(f, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(f, 2));
        assert!(m(f, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn inconsistent_system() {
        let f = make_field(5, 1).unwrap();
        let a = m(f, &[&[1, 1], &[2, 2]]);
        assert!(a.solve(&[f.from_int(1), f.from_int(1)]).is_none());
        let x = a.solve(&[f.from_int(1), f.from_int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![f.from_int(1), f.from_int(2)]);
    }

    #[test]
    fn independent_rows_skip_dependents() {
        let f = make_field(5, 1).unwrap();
        let a = m(f, &[&[1, 2], &[2, 4], &[0, 1], &[1, 1]]);
        assert_eq!(a.independent_rows(), vec![0, 2]);
    }
}
