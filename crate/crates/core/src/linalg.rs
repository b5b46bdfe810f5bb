//! Dense matrices over a [`FieldSpec`] and exact Gaussian elimination.

use crate::finite_field::{FieldElement, FieldSpec};

/// Row-major dense matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    /// Builds a matrix from rows of equal length. An empty list gives a
    /// `0 x cols` matrix.
    pub fn from_rows(rows: Vec<Vec<FieldElement>>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElement] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn push_row(&mut self, row: &[FieldElement]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        self.iter_rows().map(|r| r.to_vec()).collect()
    }

    /// Restriction to the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(0, self.cols);
        for &r in rows {
            out.push_row(self.row(r));
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self * other`.
    pub fn mul(&self, field: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = field.add(*d, field.mul(a, b));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, field: &FieldSpec, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            axpy(field, &mut out, c, self.row(i));
        }
        out
    }
}

/// `dst += c * src`.
#[inline]
pub fn axpy(field: &FieldSpec, dst: &mut [FieldElement], c: FieldElement, src: &[FieldElement]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = field.add(*d, field.mul(c, s));
        }
    }
}

pub fn dot(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows end up at the bottom.
pub fn rref(field: &FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        for v in m.row_mut(r) {
            *v = field.mul(*v, inv);
        }
        let pivot_row = m.row(r).to_vec();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c);
            if !f.is_zero() {
                axpy(field, m.row_mut(i), field.neg(f), &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &FieldSpec, m: &Matrix) -> usize {
    let mut basis = EchelonBasis::new(m.cols);
    m.iter_rows()
        .filter(|r| basis.insert(field, r.to_vec()))
        .count()
}

/// Basis of the right null space `{x : m x = 0}`, one vector per row.
pub fn null_space(field: &FieldSpec, m: &Matrix) -> Matrix {
    let mut e = m.clone();
    let pivots = rref(field, &mut e);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Matrix::zeros(0, m.cols);
    for &f in &free {
        let mut v = vec![FieldElement::ZERO; m.cols];
        v[f] = FieldElement::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(e.get(r, f));
        }
        out.push_row(&v);
    }
    out
}

/// One solution of `m x = b`, or `None` if the system is inconsistent.
pub fn solve(field: &FieldSpec, m: &Matrix, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    assert_eq!(b.len(), m.rows);
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        aug.row_mut(i)[..m.cols].copy_from_slice(m.row(i));
        aug.set(i, m.cols, b[i]);
    }
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![FieldElement::ZERO; m.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, m.cols);
    }
    Some(x)
}

/// A growing set of independent vectors kept in echelon form, so that
/// membership and independence tests are one reduction each.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Rows are reduced against their
    /// predecessors on insertion, so one pass in insertion order suffices.
    pub fn reduce(&self, field: &FieldSpec, mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        debug_assert_eq!(v.len(), self.len);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                axpy(field, &mut v, field.neg(c), row);
            }
        }
        v
    }

    pub fn contains(&self, field: &FieldSpec, v: &[FieldElement]) -> bool {
        self.reduce(field, v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns false (and leaves the basis unchanged) if it was
    /// already in the span.
    pub fn insert(&mut self, field: &FieldSpec, v: Vec<FieldElement>) -> bool {
        let mut v = self.reduce(field, v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = field.inv(v[p]).expect("nonzero");
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.rows.clone(), self.len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::make_field;

    fn fe(f: &FieldSpec, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.element(x).unwrap()).collect()
    }

    #[test]
    fn rank_and_null_space_gf4() {
        let f = make_field(2, 2).unwrap();
        let m = Matrix::from_rows(vec![fe(&f, &[1, 2, 3]), fe(&f, &[2, 3, 1])], 3);
        // second row is the generator times the first
        assert_eq!(rank(&f, &m), 1);
        let ns = null_space(&f, &m);
        assert_eq!(ns.rows(), 2);
        for v in ns.iter_rows() {
            for r in m.iter_rows() {
                assert!(dot(&f, v, r).is_zero());
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = make_field(3, 1).unwrap();
        let m = Matrix::from_rows(vec![fe(&f, &[1, 1]), fe(&f, &[1, 2])], 2);
        let x = solve(&f, &m, &fe(&f, &[2, 0])).unwrap();
        assert_eq!(m.transpose().left_mul_vec(&f, &x), fe(&f, &[2, 0]));
        let sing = Matrix::from_rows(vec![fe(&f, &[1, 1]), fe(&f, &[2, 2])], 2);
        assert!(solve(&f, &sing, &fe(&f, &[1, 1])).is_none());
    }

    #[test]
    fn echelon_basis_membership() {
        let f = make_field(2, 3).unwrap();
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&f, fe(&f, &[0, 1, 5])));
        assert!(b.insert(&f, fe(&f, &[3, 1, 0])));
        assert!(!b.insert(&f, fe(&f, &[0, 0, 0])));
        let sum: Vec<_> = fe(&f, &[0, 1, 5])
            .into_iter()
            .zip(fe(&f, &[3, 1, 0]))
            .map(|(a, c)| f.add(a, c))
            .collect();
        assert!(b.contains(&f, &sum));
        assert!(!b.insert(&f, sum));
        assert_eq!(b.dim(), 2);
    }

    #[test]
    fn rref_is_idempotent() {
        let f = make_field(5, 1).unwrap();
        let mut m = Matrix::from_rows(
            vec![fe(&f, &[1, 2, 3, 4]), fe(&f, &[2, 4, 1, 3]), fe(&f, &[3, 1, 4, 2])],
            4,
        );
        let p1 = rref(&f, &mut m);
        let snapshot = m.clone();
        let p2 = rref(&f, &mut m);
        assert_eq!(p1, p2);
        assert_eq!(m, snapshot);
    }
}
