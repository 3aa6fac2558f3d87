//! Cap products on ordered complexes.
//!
//! For an oriented `n`-cell `σ = [v_0, …, v_n]` and a `k`-cochain `φ`,
//! `σ ⌢ φ = φ([v_0, …, v_k]) · [v_k, …, v_n]`, so that
//! `∂(σ ⌢ φ) = (-1)^k (∂σ ⌢ φ − σ ⌢ δφ)`.

use std::collections::BTreeMap;

use crate::chain::ChainComplex;
use crate::complex::{DeltaComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::homology::{HomologyBasis, InducedMap};
use crate::int::Int;
use crate::matrix::{lookup, SparseVec};
use crate::ring::{Ring, Zz};

/// Front `k`-face and back `(n-k)`-face of an `n`-cell.
pub fn front_back(x: &DeltaComplex, n: usize, i: usize, k: usize) -> (usize, usize) {
    let front = (1u64 << (k + 1)) - 1;
    let back = ((1u64 << (n + 1)) - 1) & !((1u64 << k) - 1);
    (x.face_by_mask((n, i), front).1, x.face_by_mask((n, i), back).1)
}

/// `z ⌢ φ` for an `n`-chain and a `k`-cochain, both indexed by cell index.
pub fn cap_chain(x: &DeltaComplex, n: usize, z: &SparseVec<Int>, k: usize, phi: &SparseVec<Int>) -> SparseVec<Int> {
    let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
    for (i, a) in z {
        let (f, b) = front_back(x, n, *i, k);
        if let Some(val) = lookup(phi, f) {
            let e = acc.entry(b).or_insert(Int::ZERO);
            *e = &*e + &(a * val);
        }
    }
    acc.into_iter().filter(|e| !e.1.is_zero()).collect()
}

fn to_cells(c: &ChainComplex, k: usize, v: &SparseVec<Int>) -> SparseVec<Int> {
    let mut out: SparseVec<Int> = v.iter().map(|(i, val)| (c.basis[k][*i].1, val.clone())).collect();
    out.sort_by_key(|e| e.0);
    out
}

/// `φ ↦ z ⌢ φ` on `H^k(X, A) → H_{n−k}(X)` for a relative cycle `z` of `(X, A)`.
/// With `A` empty this is the absolute cap product with a cycle.
pub fn relative_cap_product(
    x: &DeltaComplex,
    a: Option<&Subcomplex>,
    z: &SparseVec<Int>,
    k: usize,
    ring: Ring,
) -> Result<InducedMap> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    if k > n {
        return Err(Error::Precondition(format!("degree {k} exceeds dimension {n}")));
    }
    let abs = ChainComplex::of(x);
    let pair = match a {
        Some(a) => ChainComplex::relative(x, a),
        None => abs.clone(),
    };
    // z must be a cycle relative to A
    let zp = pair.project(n, z)?;
    let bd = pair.d(n).mul_sparse(&Zz, &zp);
    let reduce = |v: &Int| match ring {
        Ring::PrimeField(p) => v.rem_euclid_u64(p) != 0,
        _ => !v.is_zero(),
    };
    if bd.iter().any(|(_, v)| reduce(v)) {
        return Err(Error::NotACycle);
    }
    let source = HomologyBasis::cohomology(&pair, k, ring);
    let target = HomologyBasis::homology(&abs, n - k, ring);
    let images: Vec<SparseVec<Int>> = source
        .generators
        .iter()
        .map(|g| cap_chain(x, n, z, k, &to_cells(&pair, k, &g.chain)))
        .collect();
    InducedMap::from_images(&source, &target, &images)
}

/// `D = z ⌢ − : H^k(X) → H_{n−k}(X)`.
pub fn cap_product(x: &DeltaComplex, z: &SparseVec<Int>, k: usize, ring: Ring) -> Result<InducedMap> {
    relative_cap_product(x, None, z, k, ring)
}

/// Coboundary of a `k`-cochain, indexed by cell index.
pub fn coboundary(x: &DeltaComplex, k: usize, phi: &SparseVec<Int>) -> SparseVec<Int> {
    let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
    for (i, cell) in x.cells(k + 1).iter().enumerate() {
        let mut s = Int::ZERO;
        for (j, f) in cell.faces.iter().enumerate() {
            if let Some(v) = lookup(phi, *f) {
                s = if j % 2 == 0 { &s + v } else { &s - v };
            }
        }
        if !s.is_zero() {
            acc.insert(i, s);
        }
    }
    acc.into_iter().collect()
}

/// Boundary of a `k`-chain, indexed by cell index.
pub fn boundary(x: &DeltaComplex, k: usize, z: &SparseVec<Int>) -> SparseVec<Int> {
    let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
    if k == 0 {
        return Vec::new();
    }
    for (i, a) in z {
        for (j, f) in x.cells(k)[*i].faces.iter().enumerate() {
            let e = acc.entry(*f).or_insert(Int::ZERO);
            *e = if j % 2 == 0 { &*e + a } else { &*e - a };
        }
    }
    acc.into_iter().filter(|e| !e.1.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::MapClass;

    fn sphere2() -> DeltaComplex {
        DeltaComplex::from_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    fn fundamental(x: &DeltaComplex) -> SparseVec<Int> {
        // [012] - [013] + [023] - [123] is a cycle on the tetrahedron boundary
        let n = x.dim();
        let mut z = Vec::new();
        for (i, c) in x.cells(n).iter().enumerate() {
            let missing = (0..=n + 1).find(|v| !c.vertices.iter().any(|w| w.0 == *v)).unwrap();
            z.push((i, Int::from(if missing % 2 == 0 { 1 } else { -1 })));
        }
        z
    }

    #[test]
    fn duality_on_sphere() {
        let x = sphere2();
        let z = fundamental(&x);
        assert!(boundary(&x, 2, &z).is_empty());
        for k in 0..=2 {
            let d = cap_product(&x, &z, k, Ring::Q).unwrap();
            assert_eq!(d.classification, MapClass::Iso, "k={k}");
        }
    }

    #[test]
    fn leibniz_rule() {
        let x = sphere2();
        let z: SparseVec<Int> = vec![(0, Int::from(2)), (2, Int::from(-1))];
        let phi: SparseVec<Int> = vec![(0, Int::from(1)), (3, Int::from(5)), (4, Int::from(-2))];
        let k = 1;
        let lhs = boundary(&x, 1, &cap_chain(&x, 2, &z, 1, &phi));
        let a = cap_chain(&x, 1, &boundary(&x, 2, &z), 1, &phi);
        let b = cap_chain(&x, 2, &z, 2, &coboundary(&x, 1, &phi));
        let mut rhs: BTreeMap<usize, Int> = BTreeMap::new();
        let sign = if k % 2 == 0 { Int::ONE } else { Int::from(-1) };
        for (i, v) in a {
            *rhs.entry(i).or_insert(Int::ZERO) = &rhs.get(&i).cloned().unwrap_or(Int::ZERO) + &(&sign * &v);
        }
        for (i, v) in b {
            *rhs.entry(i).or_insert(Int::ZERO) = &rhs.get(&i).cloned().unwrap_or(Int::ZERO) - &(&sign * &v);
        }
        let rhs: SparseVec<Int> = rhs.into_iter().filter(|e| !e.1.is_zero()).collect();
        assert_eq!(lhs, rhs);
    }
}
