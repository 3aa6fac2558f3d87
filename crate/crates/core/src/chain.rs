//! Cellular chain complexes of complexes and pairs.

use crate::complex::{CellRef, DeltaComplex, Subcomplex, VertexId};
use crate::error::Result;
use crate::int::Int;
use crate::matrix::{IntMatrix, SparseVec};

/// A finite chain complex of free abelian groups with a chosen cell basis.
///
/// `boundary[k]` is `∂_k : C_k → C_{k-1}`; `boundary[0]` has zero rows unless
/// the complex is augmented.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub boundary: Vec<IntMatrix>,
    /// For each degree, the cell of the underlying complex behind each basis element.
    pub basis: Vec<Vec<CellRef>>,
    /// Whether `boundary[0]` is the augmentation onto a single generator.
    pub augmented: bool,
}

impl ChainComplex {
    /// Cellular chains of `x`.
    pub fn of(x: &DeltaComplex) -> ChainComplex {
        ChainComplex::restricted(x, |_| true)
    }

    /// Chains of the pair `(x, a)`: the quotient `C(x)/C(a)`.
    pub fn relative(x: &DeltaComplex, a: &Subcomplex) -> ChainComplex {
        ChainComplex::restricted(x, |r| !a.contains(r))
    }

    /// Chains of `(x, x ∖ open star of v)`; the basis is the cells containing `v`.
    pub fn local(x: &DeltaComplex, v: VertexId) -> ChainComplex {
        ChainComplex::restricted(x, |r| x.cell(r).contains(v))
    }

    /// Augmented chains of `x`, computing reduced homology. The empty complex
    /// has a single generator in degree -1, stored as `boundary[0]`'s row.
    pub fn reduced(x: &DeltaComplex) -> ChainComplex {
        let mut c = ChainComplex::of(x);
        let n0 = x.n_vertices();
        c.boundary[0] = IntMatrix::from_columns(1, (0..n0).map(|_| vec![(0, Int::ONE)]).collect());
        c.augmented = true;
        c
    }

    /// Keeps the cells satisfying `keep`; faces that are dropped are treated as zero.
    pub fn restricted(x: &DeltaComplex, keep: impl Fn(CellRef) -> bool) -> ChainComplex {
        let n = x.dimension().map_or(0, |d| d + 1);
        let mut basis: Vec<Vec<CellRef>> = Vec::with_capacity(n);
        let mut index: Vec<Vec<usize>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut b = Vec::new();
            let mut idx = vec![usize::MAX; x.cells(k).len()];
            for i in 0..x.cells(k).len() {
                if keep((k, i)) {
                    idx[i] = b.len();
                    b.push((k, i));
                }
            }
            basis.push(b);
            index.push(idx);
        }
        let mut boundary = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                boundary.push(IntMatrix::zeros(0, basis[0].len()));
                continue;
            }
            let mut cols = Vec::with_capacity(basis[k].len());
            for &(_, i) in &basis[k] {
                let cell = &x.cells(k)[i];
                let mut col: SparseVec<Int> = Vec::with_capacity(k + 1);
                for (j, &f) in cell.faces.iter().enumerate() {
                    let row = index[k - 1][f];
                    if row == usize::MAX {
                        continue;
                    }
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    col.push((row, Int::from(s)));
                }
                col.sort_by_key(|e| e.0);
                // merge repeated faces (possible in non-regular cells)
                let mut merged: SparseVec<Int> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    match merged.last_mut() {
                        Some(last) if last.0 == r => last.1 = &last.1 + &v,
                        _ => merged.push((r, v)),
                    }
                }
                merged.retain(|e| !e.1.is_zero());
                cols.push(merged);
            }
            boundary.push(IntMatrix::from_columns(basis[k - 1].len(), cols));
        }
        ChainComplex {
            boundary,
            basis,
            augmented: false,
        }
    }

    /// Number of degrees (top degree + 1).
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, |b| b.len())
    }

    /// `∂_k`, with an empty matrix outside the stored range.
    pub fn d(&self, k: usize) -> IntMatrix {
        if k < self.boundary.len() {
            self.boundary[k].clone()
        } else if k == self.boundary.len() {
            IntMatrix::zeros(self.rank(k - 1), 0)
        } else {
            IntMatrix::zeros(0, 0)
        }
    }

    /// Index of a cell in the degree-`k` basis, if present.
    pub fn position(&self, r: CellRef) -> Option<usize> {
        self.basis.get(r.0)?.iter().position(|&c| c == r)
    }

    /// Chain of this complex restricted from a chain over cells of the
    /// underlying complex (cells outside the basis are dropped).
    pub fn project(&self, k: usize, chain: &[(usize, Int)]) -> Result<SparseVec<Int>> {
        let mut pos = std::collections::HashMap::new();
        for (n, &(_, i)) in self.basis.get(k).map(|b| b.as_slice()).unwrap_or(&[]).iter().enumerate() {
            pos.insert(i, n);
        }
        let mut out: SparseVec<Int> = chain
            .iter()
            .filter_map(|(i, v)| pos.get(i).map(|&n| (n, v.clone())))
            .filter(|e| !e.1.is_zero())
            .collect();
        out.sort_by_key(|e| e.0);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_squares_to_zero() {
        let x = DeltaComplex::from_facets(&[vec![0, 1, 2, 3]]).unwrap();
        let c = ChainComplex::of(&x);
        for k in 2..c.len() {
            assert!(c.boundary[k - 1].mul(&c.boundary[k]).is_zero());
        }
    }

    #[test]
    fn local_complex_keeps_star() {
        let x = DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2]]).unwrap();
        let c = ChainComplex::local(&x, VertexId(1));
        assert_eq!(c.rank(0), 1);
        assert_eq!(c.rank(1), 2);
    }
}
