//! Piecewise-affine maps and integral chains of them.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{MassError, Result};
use crate::geometry::point_simplex_volume;
use crate::seminorm::{rank_deficient, Seminorm};

/// A map affine on each simplex of a triangulated domain.
///
/// Pieces index into `points` and are oriented as listed; `images[i]` is the
/// image of `points[i]`, so pieces agree on shared faces by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PLMap {
    pub points: Vec<Vec<f64>>,
    pub pieces: Vec<Vec<usize>>,
    pub images: Vec<Vec<f64>>,
    /// The simplex triangulated by the pieces, when it is not a single piece.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<Vec<Vec<f64>>>,
    /// Target chart: maps into different charts never coincide.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<usize>,
}

/// The affine piece `x ↦ y0 + L·Qᵀ(x − x0)`.
#[derive(Clone, Debug)]
pub struct LinearPart {
    /// Orthonormal basis of the piece's tangent plane, `d×k`.
    pub tangent: DMatrix<f64>,
    /// Linear part in that basis, `m×k`.
    pub map: DMatrix<f64>,
    pub volume: f64,
}

impl LinearPart {
    pub fn ambient(&self) -> DMatrix<f64> {
        &self.map * self.tangent.transpose()
    }
}

pub(crate) fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(v)
}

fn same_len(rows: &[Vec<f64>], what: &str) -> Result<usize> {
    let d = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != d) {
        return Err(MassError::Dimension(format!("{what} of different lengths")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(MassError::Dimension(format!("non-finite {what}")));
    }
    Ok(d)
}

impl PLMap {
    pub fn new(
        points: Vec<Vec<f64>>,
        pieces: Vec<Vec<usize>>,
        images: Vec<Vec<f64>>,
        outer: Option<Vec<Vec<f64>>>,
    ) -> Result<PLMap> {
        let d = same_len(&points, "domain points")?;
        same_len(&images, "image points")?;
        if points.len() != images.len() {
            return Err(MassError::Dimension(format!("{} points but {} images", points.len(), images.len())));
        }
        let k1 = pieces.first().map_or(0, Vec::len);
        if k1 == 0 || pieces.iter().any(|p| p.len() != k1) {
            return Err(MassError::Dimension("pieces must be nonempty simplices of one degree".into()));
        }
        if let Some(bad) = pieces.iter().flatten().find(|&&i| i >= points.len()) {
            return Err(MassError::Dimension(format!("piece vertex {bad} out of range")));
        }
        if let Some(o) = &outer {
            if o.len() != k1 || same_len(o, "outer vertices")? != d {
                return Err(MassError::Dimension("outer simplex does not match the pieces".into()));
            }
        }
        Ok(PLMap {
            points,
            pieces,
            images,
            outer,
            chart: None,
        })
    }

    /// A single affine simplex.
    pub fn simplex(domain: Vec<Vec<f64>>, images: Vec<Vec<f64>>) -> Result<PLMap> {
        let piece = (0..domain.len()).collect();
        PLMap::new(domain, vec![piece], images, None)
    }

    /// The affine map `x ↦ A x + b` on one simplex.
    pub fn affine(domain: Vec<Vec<f64>>, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<PLMap> {
        let images = domain.iter().map(|p| (a * dvec(p) + b).iter().copied().collect()).collect();
        PLMap::simplex(domain, images)
    }

    pub fn with_chart(mut self, chart: usize) -> PLMap {
        self.chart = Some(chart);
        self
    }

    pub fn degree(&self) -> usize {
        self.pieces[0].len() - 1
    }

    pub fn domain_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn target_dim(&self) -> usize {
        self.images[0].len()
    }

    pub fn outer_simplex(&self) -> Option<Vec<Vec<f64>>> {
        match (&self.outer, self.pieces.len()) {
            (Some(o), _) => Some(o.clone()),
            (None, 1) => Some(self.pieces[0].iter().map(|&i| self.points[i].clone()).collect()),
            _ => None,
        }
    }

    pub fn piece_points(&self, piece: usize) -> Result<Vec<DVector<f64>>> {
        let p = self.pieces.get(piece).ok_or(MassError::NoSuchPiece(piece))?;
        Ok(p.iter().map(|&i| dvec(&self.points[i])).collect())
    }

    pub fn piece_images(&self, piece: usize) -> Result<Vec<DVector<f64>>> {
        let p = self.pieces.get(piece).ok_or(MassError::NoSuchPiece(piece))?;
        Ok(p.iter().map(|&i| dvec(&self.images[i])).collect())
    }

    pub fn linear_part(&self, piece: usize) -> Result<LinearPart> {
        let x = self.piece_points(piece)?;
        let y = self.piece_images(piece)?;
        let k = self.degree();
        let (d, m) = (self.domain_dim(), self.target_dim());
        let e = DMatrix::from_fn(d, k, |r, c| x[c + 1][r] - x[0][r]);
        let f = DMatrix::from_fn(m, k, |r, c| y[c + 1][r] - y[0][r]);
        if k > 0 && rank_deficient(&e) {
            return Err(MassError::Degenerate(format!("domain piece {piece}")));
        }
        let qr = e.qr();
        let (q, r) = (qr.q(), qr.r());
        let rinv = r
            .try_inverse()
            .ok_or_else(|| MassError::Degenerate(format!("domain piece {piece}")))?;
        Ok(LinearPart {
            tangent: q,
            map: f * rinv,
            volume: point_simplex_volume(&x),
        })
    }

    /// Maximal operator norm over the pieces.
    pub fn lipschitz(&self) -> Result<f64> {
        let mut best = 0.0f64;
        for p in 0..self.pieces.len() {
            let l = self.linear_part(p)?.map;
            if l.ncols() > 0 {
                best = best.max(l.svd(false, false).singular_values.max());
            }
        }
        Ok(best)
    }

    pub fn scaled(&self, lambda: f64) -> PLMap {
        let mut out = self.clone();
        for y in &mut out.images {
            y.iter_mut().for_each(|v| *v *= lambda);
        }
        out
    }

    /// Barycentric subdivision of every piece, keeping the listed orientations.
    pub fn subdivided(&self) -> PLMap {
        let k = self.degree();
        let mut points = self.points.clone();
        let mut images = self.images.clone();
        let mut index: HashMap<Vec<usize>, usize> = (0..points.len()).map(|i| (vec![i], i)).collect();
        let mut pieces = Vec::new();
        for piece in &self.pieces {
            for perm in permutations(k + 1) {
                let mut child = Vec::with_capacity(k + 1);
                for i in 0..=k {
                    let mut face: Vec<usize> = perm[..=i].iter().map(|&j| piece[j]).collect();
                    face.sort_unstable();
                    let id = *index.entry(face.clone()).or_insert_with(|| {
                        points.push(mean(face.iter().map(|&v| &self.points[v])));
                        images.push(mean(face.iter().map(|&v| &self.images[v])));
                        points.len() - 1
                    });
                    child.push(id);
                }
                if k > 0 && permutation_sign(&perm) < 0 {
                    child.swap(k - 1, k);
                }
                pieces.push(child);
            }
        }
        PLMap {
            points,
            pieces,
            images,
            outer: self.outer.clone(),
            chart: self.chart,
        }
    }

    pub fn subdivided_n(&self, rounds: usize) -> PLMap {
        (0..rounds).fold(self.clone(), |f, _| f.subdivided())
    }
}

fn mean<'a>(rows: impl Iterator<Item = &'a Vec<f64>>) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    let mut n = 0.0;
    for r in rows {
        if acc.is_empty() {
            acc = vec![0.0; r.len()];
        }
        acc.iter_mut().zip(r).for_each(|(a, b)| *a += b);
        n += 1.0;
    }
    acc.into_iter().map(|a| a / n).collect()
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub(crate) fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn metric_derivative(f: &PLMap, piece: usize, u: &[f64]) -> Result<f64> {
    if u.len() != f.domain_dim() {
        return Err(MassError::Dimension(format!("direction in R^{} for a domain in R^{}", u.len(), f.domain_dim())));
    }
    Ok((f.linear_part(piece)?.ambient() * dvec(u)).norm())
}

/// `md(f, x)` for `x` interior to the piece, in orthonormal tangent coordinates.
pub fn metric_derivative_seminorm(f: &PLMap, piece: usize) -> Result<Seminorm> {
    Ok(Seminorm::Matrix(f.linear_part(piece)?.map))
}

/// A finite integral combination of PL maps of one degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PLChain {
    pub degree: usize,
    pub terms: Vec<(i64, PLMap)>,
}

type SimplexKey = (Option<usize>, Vec<(Vec<u64>, Vec<u64>)>);

impl PLChain {
    pub fn zero(degree: usize) -> PLChain {
        PLChain {
            degree,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(terms: Vec<(i64, PLMap)>) -> Result<PLChain> {
        let degree = terms
            .first()
            .map(|t| t.1.degree())
            .ok_or_else(|| MassError::Dimension("an empty chain has no degree; use PLChain::zero".into()))?;
        let mut c = PLChain::zero(degree);
        for (a, f) in terms {
            c.push(a, f)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, a: i64, f: PLMap) -> Result<()> {
        if f.degree() != self.degree {
            return Err(MassError::Dimension(format!(
                "a {}-simplex in a {}-chain",
                f.degree(),
                self.degree
            )));
        }
        self.terms.push((a, f));
        Ok(())
    }

    pub fn extend(&mut self, other: PLChain, sign: i64) -> Result<()> {
        for (a, f) in other.terms {
            self.push(sign * a, f)?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.0 == 0)
    }

    /// Piece count over all terms.
    pub fn piece_count(&self) -> usize {
        self.terms.iter().map(|t| t.1.pieces.len()).sum()
    }

    pub fn scaled(&self, lambda: f64) -> PLChain {
        PLChain {
            degree: self.degree,
            terms: self.terms.iter().map(|(a, f)| (*a, f.scaled(lambda))).collect(),
        }
    }

    pub fn subdivided(&self) -> PLChain {
        PLChain {
            degree: self.degree,
            terms: self.terms.iter().map(|(a, f)| (*a, f.subdivided())).collect(),
        }
    }

    /// Splits every term into its affine pieces, one simplex per term.
    pub fn simplices(&self) -> PLChain {
        let mut out = PLChain::zero(self.degree);
        for (a, f) in &self.terms {
            for piece in &f.pieces {
                let domain = piece.iter().map(|&i| f.points[i].clone()).collect();
                let images = piece.iter().map(|&i| f.images[i].clone()).collect();
                let mut g = PLMap::simplex(domain, images).expect("faces of a valid map");
                g.chart = f.chart;
                out.terms.push((*a, g));
            }
        }
        out
    }

    /// Merges equal affine simplices up to reordering and drops zero terms.
    pub fn normalize(&self) -> PLChain {
        let mut merged: BTreeMap<SimplexKey, (i64, PLMap)> = BTreeMap::new();
        for (a, f) in &self.simplices().terms {
            let verts: Vec<(Vec<u64>, Vec<u64>)> = (0..f.points.len())
                .map(|i| (bits(&f.points[i]), bits(&f.images[i])))
                .collect();
            let mut order: Vec<usize> = (0..verts.len()).collect();
            order.sort_by(|&i, &j| verts[i].cmp(&verts[j]));
            let sign = permutation_sign(&order);
            let key: SimplexKey = (f.chart, order.iter().map(|&i| verts[i].clone()).collect());
            let mut canonical = PLMap::simplex(
                order.iter().map(|&i| f.points[i].clone()).collect(),
                order.iter().map(|&i| f.images[i].clone()).collect(),
            )
            .expect("reordered simplex");
            canonical.chart = f.chart;
            merged.entry(key).or_insert((0, canonical)).0 += sign * a;
        }
        PLChain {
            degree: self.degree,
            terms: merged.into_values().filter(|t| t.0 != 0).collect(),
        }
    }

    pub fn boundary(&self) -> Result<PLChain> {
        if self.degree == 0 {
            return Err(MassError::Dimension("boundary of a 0-chain".into()));
        }
        let mut out = PLChain::zero(self.degree - 1);
        for (a, f) in &self.simplices().terms {
            for j in 0..=self.degree {
                let keep = |i: &usize| *i != j;
                let domain = (0..f.points.len()).filter(keep).map(|i| f.points[i].clone()).collect();
                let images = (0..f.points.len()).filter(keep).map(|i| f.images[i].clone()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let mut face = PLMap::simplex(domain, images)?;
                face.chart = f.chart;
                out.terms.push((sign * a, face));
            }
        }
        Ok(out.normalize())
    }
}

fn bits(v: &[f64]) -> Vec<u64> {
    // -0.0 and 0.0 are the same point
    v.iter().map(|x| (x + 0.0).to_bits()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]
    }

    #[test]
    fn derivative_examples() {
        let id = PLMap::simplex(triangle(), triangle()).unwrap();
        assert!((metric_derivative(&id, 0, &[0.6, 0.8]).unwrap() - 1.0).abs() < 1e-12);
        let twice = id.scaled(2.0);
        assert!((metric_derivative(&twice, 0, &[0.6, 0.8]).unwrap() - 2.0).abs() < 1e-12);
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0]));
        let f = PLMap::affine(triangle(), &a, &DVector::zeros(2)).unwrap();
        assert!((metric_derivative(&f, 0, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((metric_derivative(&f, 0, &[0.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);
        let s = metric_derivative_seminorm(&f, 0).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(metric_derivative(&f, 1, &[1.0, 0.0]), Err(MassError::NoSuchPiece(1)));
    }

    #[test]
    fn subdivision_orientation() {
        let id = PLMap::simplex(triangle(), triangle()).unwrap();
        let sd = id.subdivided();
        assert_eq!(sd.pieces.len(), 6);
        assert_eq!(sd.points.len(), 7);
        for p in 0..6 {
            let x = sd.piece_points(p).unwrap();
            let det = (&x[1] - &x[0]).perp(&(&x[2] - &x[0]));
            assert!(det > 0.0, "piece {p} reversed");
        }
        let c = PLChain::from_terms(vec![(1, id.clone())]).unwrap();
        let b = c.subdivided().boundary().unwrap();
        // the six boundary edges of the refined triangle
        assert_eq!(b.terms.len(), 6);
        assert_eq!(c.boundary().unwrap().terms.len(), 3);
    }

    #[test]
    fn boundary_squared() {
        let t = PLMap::simplex(
            vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let c = PLChain::from_terms(vec![(3, t)]).unwrap();
        let b = c.boundary().unwrap();
        assert_eq!(b.terms.len(), 4);
        assert!(b.boundary().unwrap().is_zero());
    }
}
