//! Dense exact matrices over a single [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, FieldScalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldScalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Right null space basis: one vector per non-pivot column.
    pub fn kernel(&self) -> Vec<Vec<FieldScalar>> {
        let m = &self.matrix;
        let field = m.field;
        let mut is_pivot = vec![false; m.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..m.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![field.zero(); m.cols];
                v[free] = field.one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = -m.get(r, free);
                }
                v
            })
            .collect()
    }

    /// The nonzero rows.
    pub fn row_basis(&self) -> ExactMatrix {
        self.matrix.select_rows(&(0..self.rank()).collect::<Vec<_>>())
    }
}

impl ExactMatrix {
    /// Builds a matrix from row-major entries; every entry must lie in `field`.
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<FieldScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            field.check(e)?;
        }
        Ok(ExactMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Builds from rows, inferring the field from the first entry.
    pub fn from_rows(field: Field, rows: Vec<Vec<FieldScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldScalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldScalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldScalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<FieldScalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldScalar::is_zero)
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn select_rows(&self, idx: &[usize]) -> ExactMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            entries.extend_from_slice(self.row(r));
        }
        ExactMatrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            entries,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> ExactMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            for &c in idx {
                entries.push(self.get(r, c).clone());
            }
        }
        ExactMatrix {
            field: self.field,
            rows: self.rows,
            cols: idx.len(),
            entries,
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot stack {} and {} columns",
                self.cols, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(ExactMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn mul(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, o.field)));
        }
        let mut out = Self::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| dot(self.row(r), v, self.field))
            .collect()
    }

    pub fn scale(&self, s: &FieldScalar) -> ExactMatrix {
        ExactMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn add(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Shape("cannot add matrices of different shapes".into()));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, o.field)));
        }
        Ok(ExactMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        self.add(&o.scale(&-self.field.one()))
    }

    /// Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().unwrap();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let sub = &factor * m.get(row, c);
                    if !sub.is_zero() {
                        let idx = r * m.cols + c;
                        m.entries[idx] -= &sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Exact rank and a basis of the right null space; `rank + kernel.len() == cols`.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<FieldScalar>>) {
        let r = self.rref();
        (r.rank(), r.kernel())
    }

    pub fn kernel(&self) -> Vec<Vec<FieldScalar>> {
        self.rref().kernel()
    }

    /// Canonical basis of the row space (RREF with zero rows dropped).
    pub fn row_space(&self) -> ExactMatrix {
        self.rref().row_basis()
    }

    pub fn same_row_space(&self, o: &ExactMatrix) -> bool {
        self.cols == o.cols && self.field == o.field && self.row_space() == o.row_space()
    }

    pub fn det(&self) -> Result<FieldScalar> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().unwrap();
            for r in col + 1..n {
                let factor = m.get(r, col) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let sub = &factor * m.get(col, c);
                    let idx = r * n + c;
                    m.entries[idx] -= &sub;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let rref = aug.rref();
        if rref.pivots.len() < n || rref.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(rref.matrix.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Some solution `x` of `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in rref.pivots.iter().enumerate() {
            x[p] = rref.matrix.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Reinterprets an integer-valued rational matrix modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<ExactMatrix> {
        let target = Field::prime(p)?;
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                FieldScalar::Rational(q) => target.from_rational(q),
                FieldScalar::Prime { .. } => Err(Error::FieldMismatch(
                    "reduction modulo p needs a rational matrix".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::new(target, self.rows, self.cols, entries)
    }
}

pub(crate) fn dot(a: &[FieldScalar], b: &[FieldScalar], field: Field) -> FieldScalar {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
