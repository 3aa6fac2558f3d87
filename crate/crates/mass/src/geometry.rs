//! Euclidean simplices from their edge lengths.

use nalgebra::{DMatrix, DVector};

use crate::error::{MassError, Result};

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Squared volume of a `k`-simplex from its `(k+1)×(k+1)` distance matrix,
/// by the Cayley–Menger determinant.
pub fn cayley_menger_squared(d: &DMatrix<f64>) -> f64 {
    let n = d.nrows();
    if n <= 1 {
        return 1.0;
    }
    let k = n - 1;
    let mut cm = DMatrix::from_element(n + 1, n + 1, 1.0);
    cm[(0, 0)] = 0.0;
    for i in 0..n {
        for j in 0..n {
            cm[(i + 1, j + 1)] = d[(i, j)] * d[(i, j)];
        }
    }
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    sign * cm.determinant() / (2f64.powi(k as i32) * factorial(k).powi(2))
}

/// Volume of the simplex with the given pairwise distances.
pub fn simplex_volume(d: &DMatrix<f64>) -> Result<f64> {
    let v2 = cayley_menger_squared(d);
    let scale = d.iter().fold(0.0f64, |m, x| m.max(*x)).powi(2 * (d.nrows() as i32 - 1));
    if !(v2 > 1e-14 * scale.max(f64::MIN_POSITIVE)) {
        return Err(MassError::Degenerate(format!("Cayley–Menger volume² = {v2}")));
    }
    Ok(v2.sqrt())
}

/// Points in `R^k` with the given pairwise distances: the first at the origin,
/// the rest from a Cholesky factor of the Gram matrix.
pub fn realize(d: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let n = d.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let k = n - 1;
    let gram = DMatrix::from_fn(k, k, |i, j| {
        let (a, b, c) = (d[(0, i + 1)], d[(0, j + 1)], d[(i + 1, j + 1)]);
        (a * a + b * b - c * c) / 2.0
    });
    let chol = gram
        .cholesky()
        .ok_or_else(|| MassError::Degenerate(format!("no Euclidean simplex with distances {d}")))?;
    let l = chol.l();
    let mut pts = vec![DVector::zeros(k)];
    for i in 0..k {
        pts.push(l.row(i).transpose());
    }
    Ok(pts)
}

/// Volume of the simplex spanned by points of any ambient dimension.
pub fn point_simplex_volume(points: &[DVector<f64>]) -> f64 {
    let k = points.len().saturating_sub(1);
    if k == 0 {
        return 1.0;
    }
    let e = DMatrix::from_fn(points[0].len(), k, |r, c| points[c + 1][r] - points[0][r]);
    let g = e.transpose() * e;
    g.determinant().max(0.0).sqrt() / factorial(k)
}

pub fn distance_matrix(points: &[DVector<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(points.len(), points.len(), |i, j| (&points[i] - &points[j]).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral() {
        let d = DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!((simplex_volume(&d).unwrap() - 3f64.sqrt() / 4.0).abs() < 1e-15);
        let t = DMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!((simplex_volume(&t).unwrap() - 1.0 / (6.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn realization_matches_gram_volume() {
        let d = DMatrix::from_row_slice(4, 4, &[0.0, 1.0, 1.2, 0.9, 1.0, 0.0, 1.1, 1.3, 1.2, 1.1, 0.0, 1.0, 0.9, 1.3, 1.0, 0.0]);
        let p = realize(&d).unwrap();
        assert!((distance_matrix(&p) - &d).abs().max() < 1e-12);
        assert!((point_simplex_volume(&p) - simplex_volume(&d).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_lengths() {
        let d = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0]);
        assert!(simplex_volume(&d).is_err());
        let bad = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0]);
        assert!(realize(&bad).is_err());
    }
}
