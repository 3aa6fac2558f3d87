//! Sparse integer matrices and sparse vector arithmetic over a [`Domain`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::int::Int;
use crate::ring::Domain;

/// Sparse vector: `(index, value)` pairs sorted by index, no explicit zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `x += q * y`.
pub fn axpy<D: Domain>(d: &D, x: &mut SparseVec<D::Elem>, q: &D::Elem, y: &SparseVec<D::Elem>) {
    if d.is_zero(q) || y.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, d.mul(q, &y[j].1)));
            j += 1;
        } else {
            let v = d.add(&x[i].1, &d.mul(q, &y[j].1));
            if !d.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *x = out;
}

pub fn scale<D: Domain>(d: &D, x: &mut SparseVec<D::Elem>, q: &D::Elem) {
    for e in x.iter_mut() {
        e.1 = d.mul(q, &e.1);
    }
    x.retain(|e| !d.is_zero(&e.1));
}

pub fn lookup<'a, E>(x: &'a SparseVec<E>, idx: usize) -> Option<&'a E> {
    x.binary_search_by_key(&idx, |e| e.0).ok().map(|p| &x[p].1)
}

pub fn dot<D: Domain>(d: &D, x: &SparseVec<D::Elem>, y: &SparseVec<D::Elem>) -> D::Elem {
    let mut acc = d.zero();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = d.add(&acc, &d.mul(&x[i].1, &y[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Sparse integer matrix stored by columns.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<Int>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        IntMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, Int::ONE)]).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.columns[j].push((i, Int::from(v)));
                }
            }
        }
        m
    }

    /// Builds a matrix from sorted sparse columns.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec<Int>>) -> IntMatrix {
        debug_assert!(columns
            .iter()
            .all(|c| c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|e| e.0 < rows)));
        IntMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn column(&self, j: usize) -> &SparseVec<Int> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<Int>] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        lookup(&self.columns[j], i).cloned().unwrap_or(Int::ZERO)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        let col = &mut self.columns[j];
        match col.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => {
                if v.is_zero() {
                    col.remove(p);
                } else {
                    col[p].1 = v;
                }
            }
            Err(p) => {
                if !v.is_zero() {
                    col.insert(p, (i, v));
                }
            }
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut cols: Vec<SparseVec<Int>> = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                cols[*i].push((j, v.clone()));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: cols,
        }
    }

    /// Row-major copy, reduced into the domain.
    pub fn to_rows<D: Domain>(&self, d: &D) -> Vec<SparseVec<D::Elem>> {
        let mut rows: Vec<SparseVec<D::Elem>> = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                let e = d.from_int(v);
                if !d.is_zero(&e) {
                    rows[*i].push((j, e));
                }
            }
        }
        rows
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::ZERO; self.cols]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Int::ZERO; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in c {
                out[*i] = &out[*i] + &(v * &x[j]);
            }
        }
        out
    }

    /// Sparse column vector times matrix.
    pub fn mul_sparse<D: Domain>(&self, d: &D, x: &SparseVec<D::Elem>) -> SparseVec<D::Elem> {
        let mut acc: SparseVec<D::Elem> = Vec::new();
        for (j, q) in x {
            let col: SparseVec<D::Elem> = self.columns[*j]
                .iter()
                .map(|(i, v)| (*i, d.from_int(v)))
                .filter(|e| !d.is_zero(&e.1))
                .collect();
            axpy(d, &mut acc, q, &col);
        }
        acc
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let columns = other
            .columns
            .iter()
            .map(|c| self.mul_sparse(&crate::ring::Zz, c))
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    pub fn select_rows(&self, keep: &[usize]) -> IntMatrix {
        let mut map = vec![usize::MAX; self.rows];
        for (n, &r) in keep.iter().enumerate() {
            map[r] = n;
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut v: SparseVec<Int> = c
                    .iter()
                    .filter(|(i, _)| map[*i] != usize::MAX)
                    .map(|(i, x)| (map[*i], x.clone()))
                    .collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        IntMatrix {
            rows: keep.len(),
            cols: self.cols,
            columns,
        }
    }

    pub fn select_cols(&self, keep: &[usize]) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: keep.len(),
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        IntMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows * self.cols <= 400 {
            writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
            write!(f, "]")
        } else {
            write!(f, "IntMatrix {}x{} ({} nonzeros)", self.rows, self.cols, self.nnz())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Fp, Zz};

    #[test]
    fn axpy_cancels() {
        let mut x: SparseVec<Int> = vec![(0, Int::from(2)), (3, Int::from(1))];
        let y: SparseVec<Int> = vec![(0, Int::from(1)), (2, Int::from(5))];
        axpy(&Zz, &mut x, &Int::from(-2), &y);
        assert_eq!(x, vec![(2, Int::from(-10)), (3, Int::from(1))]);
        let mut a: SparseVec<u64> = vec![(1, 1)];
        axpy(&Fp::new(2), &mut a, &1, &vec![(1, 1)]);
        assert!(a.is_empty());
    }

    #[test]
    fn transpose_and_product() {
        let m = IntMatrix::from_dense(&[vec![1, 2, 0], vec![0, -1, 3]]);
        let t = m.transpose();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.get(2, 1), Int::from(3));
        let p = m.mul(&t);
        assert_eq!(p.to_dense(), vec![vec![Int::from(5), Int::from(-2)], vec![Int::from(-2), Int::from(10)]]);
        assert_eq!(m.mul_vec(&[Int::ONE, Int::ONE, Int::ONE]), vec![Int::from(3), Int::from(2)]);
    }
}
