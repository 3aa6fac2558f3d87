//! Masses of PL chains: the Jacobian integral, the current mass of the
//! pushforward, and the experimental tilde-mass.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{MassError, Result};
use crate::geometry::point_simplex_volume;
use crate::plmap::{dvec, permutations, PLChain, PLMap};
use crate::seminorm::{jacobian_estimate, JacobianMethod, Seminorm};

/// `∫ J(md f) dH^k` over the domain.
pub fn map_mass(f: &PLMap, method: JacobianMethod) -> Result<f64> {
    let k = f.degree();
    let mut total = 0.0;
    for p in 0..f.pieces.len() {
        let lp = match f.linear_part(p) {
            Ok(lp) => lp,
            // a degenerate piece is H^k-null
            Err(MassError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        let j = if k == 0 {
            1.0
        } else {
            jacobian_estimate(&Seminorm::Matrix(lp.map), k, method)?.value
        };
        total += j * lp.volume;
    }
    Ok(total)
}

/// `Σ |a_i| mass(f_i)` with analytic Jacobians.
pub fn chain_mass(c: &PLChain) -> f64 {
    chain_mass_with(c, JacobianMethod::Analytic).expect("analytic Jacobians of matrix seminorms")
}

pub fn chain_mass_with(c: &PLChain, method: JacobianMethod) -> Result<f64> {
    let mut total = 0.0;
    for (a, f) in &c.terms {
        if *a != 0 {
            total += a.unsigned_abs() as f64 * map_mass(f, method)?;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentMass {
    pub value: f64,
    /// The image pieces are pairwise non-overlapping, so `value` is the mass.
    pub exact: bool,
    /// Overlapping pairs of image pieces, in chain piece order.
    pub overlaps: Vec<(usize, usize)>,
}

struct ImagePiece {
    weight: f64,
    points: Vec<DVector<f64>>,
}

fn image_pieces(c: &PLChain) -> Vec<ImagePiece> {
    let mut out = Vec::new();
    for (a, f) in &c.terms {
        for p in 0..f.pieces.len() {
            let points = f.piece_images(p).expect("piece in range");
            let weight = a.unsigned_abs() as f64 * point_simplex_volume(&points);
            out.push(ImagePiece { weight, points });
        }
    }
    out
}

fn scale_of(points: &[DVector<f64>]) -> f64 {
    points.iter().map(|p| p.amax()).fold(1.0, f64::max)
}

/// Orthonormal coordinates of `points` in the affine hull of `base`, or `None`
/// when some point leaves that hull.
fn plane_coords(base: &[DVector<f64>], points: &[DVector<f64>], tol: f64) -> Option<Vec<DVector<f64>>> {
    let k = base.len() - 1;
    let m = base[0].len();
    let e = DMatrix::from_fn(m, k, |r, c| base[c + 1][r] - base[0][r]);
    let q = e.qr().q();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let v = p - &base[0];
        let t = q.transpose() * &v;
        if (&v - &q * &t).norm() > tol {
            return None;
        }
        out.push(t);
    }
    Some(out)
}

/// Whether two convex polygons in the plane share interior points, by separating axes.
fn polygons_overlap(a: &[DVector<f64>], b: &[DVector<f64>], tol: f64) -> bool {
    for poly in [a, b] {
        for i in 0..poly.len() {
            let e = &poly[(i + 1) % poly.len()] - &poly[i];
            let axis = DVector::from_vec(vec![-e[1], e[0]]);
            let proj = |pts: &[DVector<f64>]| {
                pts.iter()
                    .map(|p| p.dot(&axis))
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
            };
            let (alo, ahi) = proj(a);
            let (blo, bhi) = proj(b);
            let t = tol * axis.norm();
            if ahi <= blo + t || bhi <= alo + t {
                return false;
            }
        }
    }
    true
}

/// `None` when the pair cannot be decided.
fn overlap(p: &ImagePiece, q: &ImagePiece, k: usize) -> Option<bool> {
    let tol = 1e-10 * scale_of(&p.points).max(scale_of(&q.points));
    if k == 0 {
        return Some((&p.points[0] - &q.points[0]).norm() <= tol);
    }
    let coords = plane_coords(&p.points, &q.points, tol)?;
    let own = plane_coords(&p.points, &p.points, tol)?;
    match k {
        1 => {
            let (a0, a1) = (own[0][0].min(own[1][0]), own[0][0].max(own[1][0]));
            let (b0, b1) = (coords[0][0].min(coords[1][0]), coords[0][0].max(coords[1][0]));
            Some(a1.min(b1) - a0.max(b0) > tol)
        }
        2 => Some(polygons_overlap(&own, &coords, tol)),
        _ => None,
    }
}

/// Pieces not in a common affine `k`-plane meet in an `H^k`-null set; coplanar
/// pieces are tested for interior overlap in degrees up to two.
pub fn current_mass(c: &PLChain) -> CurrentMass {
    let k = c.degree;
    let pieces = image_pieces(c);
    let value = pieces.iter().map(|p| p.weight).sum();
    let mut overlaps = Vec::new();
    let mut undecided = false;
    let live: Vec<usize> = (0..pieces.len()).filter(|&i| pieces[i].weight > 0.0).collect();
    for (x, &i) in live.iter().enumerate() {
        for &j in &live[x + 1..] {
            let coplanar = k == 0 || {
                let tol = 1e-10 * scale_of(&pieces[i].points).max(scale_of(&pieces[j].points));
                plane_coords(&pieces[i].points, &pieces[j].points, tol).is_some()
            };
            if !coplanar {
                continue;
            }
            match overlap(&pieces[i], &pieces[j], k) {
                Some(true) => overlaps.push((i, j)),
                Some(false) => {}
                None => undecided = true,
            }
        }
    }
    CurrentMass {
        value,
        exact: overlaps.is_empty() && !undecided,
        overlaps,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassLipReport {
    pub degree: usize,
    pub mass: f64,
    pub current_mass: f64,
    pub current_exact: bool,
    /// `√k^k`, with `0^0 = 1`.
    pub factor: f64,
    pub holds: bool,
}

pub fn mass_lip_factor(k: usize) -> f64 {
    (k as f64).sqrt().powi(k as i32)
}

/// Checks `√k^k · mass(c) ≥ M([c])`.
pub fn mass_lip_check(c: &PLChain) -> MassLipReport {
    let mass = chain_mass(c);
    let cm = current_mass(c);
    let factor = mass_lip_factor(c.degree);
    let holds = factor * mass >= cm.value * (1.0 - 1e-12) - 1e-300;
    MassLipReport {
        degree: c.degree,
        mass,
        current_mass: cm.value,
        current_exact: cm.exact,
        factor,
        holds,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TildeMassReport {
    /// Lower approximations for rounds `0..=r`.
    pub values: Vec<f64>,
    pub mass: f64,
    pub gap: f64,
    pub experimental: bool,
}

/// `Σ_τ H^k(f(τ))` over the `r`-th barycentric subdivision of the outer simplex.
pub fn tilde_mass(f: &PLMap, rounds: usize) -> Result<f64> {
    let frame = Frame::new(f)?;
    let mut cells = vec![standard_simplex(frame.k)];
    for _ in 0..rounds {
        cells = cells.iter().flat_map(|c| barycentric_children(c)).collect();
    }
    let mut total = 0.0;
    for tau in &cells {
        total += frame.image_measure(tau);
    }
    Ok(total)
}

pub fn tilde_mass_report(f: &PLMap, rounds: usize) -> Result<TildeMassReport> {
    let values = (0..=rounds).map(|r| tilde_mass(f, r)).collect::<Result<Vec<_>>>()?;
    let mass = map_mass(f, JacobianMethod::Analytic)?;
    Ok(TildeMassReport {
        gap: mass - values[rounds],
        values,
        mass,
        experimental: true,
    })
}

/// Pieces of `f` in barycentric coordinates of its outer simplex.
struct Frame {
    k: usize,
    /// Each piece as a simplex in `R^k` with the affine map to the target.
    pieces: Vec<(Vec<DVector<f64>>, DMatrix<f64>, DVector<f64>)>,
}

impl Frame {
    fn new(f: &PLMap) -> Result<Frame> {
        let k = f.degree();
        if !(1..=2).contains(&k) {
            return Err(MassError::Unsupported(format!("tilde-mass in degree {k}")));
        }
        let outer: Vec<DVector<f64>> = f
            .outer_simplex()
            .ok_or_else(|| MassError::Dimension("a triangulated domain needs its outer simplex".into()))?
            .iter()
            .map(|p| dvec(p))
            .collect();
        let d = f.domain_dim();
        let e = DMatrix::from_fn(d, k, |r, c| outer[c + 1][r] - outer[0][r]);
        let pinv = (e.transpose() * &e)
            .try_inverse()
            .ok_or_else(|| MassError::Degenerate("outer simplex".into()))?
            * e.transpose();
        let to_local = |x: &DVector<f64>| &pinv * (x - &outer[0]);
        let mut pieces = Vec::new();
        for p in 0..f.pieces.len() {
            let t: Vec<DVector<f64>> = f.piece_points(p)?.iter().map(to_local).collect();
            let y = f.piece_images(p)?;
            let tm = DMatrix::from_fn(k, k, |r, c| t[c + 1][r] - t[0][r]);
            let Some(tinv) = tm.try_inverse() else { continue };
            let fm = DMatrix::from_fn(f.target_dim(), k, |r, c| y[c + 1][r] - y[0][r]);
            let a = fm * tinv;
            let b = &y[0] - &a * &t[0];
            pieces.push((t, a, b));
        }
        Ok(Frame { k, pieces })
    }

    fn image_measure(&self, tau: &[DVector<f64>]) -> f64 {
        let mut images: Vec<Vec<DVector<f64>>> = Vec::new();
        for (piece, a, b) in &self.pieces {
            let clipped = if self.k == 1 {
                clip_interval(tau, piece)
            } else {
                clip_polygon(tau, piece)
            };
            if let Some(poly) = clipped {
                images.push(poly.iter().map(|t| a * t + b).collect());
            }
        }
        if self.k == 1 {
            union_length(&images)
        } else {
            union_area(&images)
        }
    }
}

fn standard_simplex(k: usize) -> Vec<DVector<f64>> {
    let mut out = vec![DVector::zeros(k)];
    for i in 0..k {
        let mut e = DVector::zeros(k);
        e[i] = 1.0;
        out.push(e);
    }
    out
}

fn barycentric_children(s: &[DVector<f64>]) -> Vec<Vec<DVector<f64>>> {
    permutations(s.len())
        .into_iter()
        .map(|perm| {
            let mut acc = DVector::zeros(s[0].len());
            perm.iter()
                .enumerate()
                .map(|(i, &j)| {
                    acc += &s[j];
                    &acc / (i + 1) as f64
                })
                .collect()
        })
        .collect()
}

fn clip_interval(a: &[DVector<f64>], b: &[DVector<f64>]) -> Option<Vec<DVector<f64>>> {
    let lo = a[0][0].min(a[1][0]).max(b[0][0].min(b[1][0]));
    let hi = a[0][0].max(a[1][0]).min(b[0][0].max(b[1][0]));
    (hi - lo > 1e-14).then(|| vec![DVector::from_element(1, lo), DVector::from_element(1, hi)])
}

fn cross(o: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn ccw(poly: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut p = poly.to_vec();
    if signed_area(&p) < 0.0 {
        p.reverse();
    }
    p
}

fn signed_area(poly: &[DVector<f64>]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

/// Intersection of two convex polygons in the plane.
fn clip_polygon(subject: &[DVector<f64>], clip: &[DVector<f64>]) -> Option<Vec<DVector<f64>>> {
    let clip = ccw(clip);
    let mut out = ccw(subject);
    for i in 0..clip.len() {
        let (c0, c1) = (&clip[i], &clip[(i + 1) % clip.len()]);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (p, q) = (&input[j], &input[(j + 1) % input.len()]);
            let (sp, sq) = (cross(c0, c1, p), cross(c0, c1, q));
            if sp >= 0.0 {
                out.push(p.clone());
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push(p + (q - p) * t);
            }
        }
        if out.len() < 3 {
            return None;
        }
    }
    (signed_area(&out).abs() > 1e-14).then_some(out)
}

/// Groups pieces by their affine hull, returning in-plane coordinates.
fn coplanar_groups(pieces: &[Vec<DVector<f64>>], k: usize) -> Vec<Vec<Vec<DVector<f64>>>> {
    let mut groups: Vec<(Vec<DVector<f64>>, Vec<Vec<DVector<f64>>>)> = Vec::new();
    for poly in pieces {
        let Some(base) = spanning_simplex(poly, k) else { continue };
        let tol = 1e-10 * scale_of(poly);
        let slot = groups
            .iter()
            .position(|(b, _)| plane_coords(b, poly, tol).is_some() && plane_coords(b, &base, tol).is_some());
        let slot = slot.unwrap_or_else(|| {
            groups.push((base, Vec::new()));
            groups.len() - 1
        });
        let coords = plane_coords(&groups[slot].0, poly, f64::INFINITY).expect("unbounded tolerance");
        groups[slot].1.push(coords);
    }
    groups.into_iter().map(|g| g.1).collect()
}

/// `k + 1` affinely independent vertices of `poly`, if any.
fn spanning_simplex(poly: &[DVector<f64>], k: usize) -> Option<Vec<DVector<f64>>> {
    let scale = scale_of(poly);
    let mut base = vec![poly[0].clone()];
    for p in &poly[1..] {
        let mut trial = base.clone();
        trial.push(p.clone());
        if point_simplex_volume(&trial) > 1e-12 * scale.powi(trial.len() as i32 - 1) {
            base = trial;
        }
        if base.len() == k + 1 {
            return Some(base);
        }
    }
    None
}

fn union_length(pieces: &[Vec<DVector<f64>>]) -> f64 {
    let mut total = 0.0;
    for group in coplanar_groups(pieces, 1) {
        let mut iv: Vec<(f64, f64)> = group.iter().map(|s| (s[0][0].min(s[1][0]), s[0][0].max(s[1][0]))).collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (mut lo, mut hi) = iv[0];
        for &(a, b) in &iv[1..] {
            if a > hi {
                total += hi - lo;
                (lo, hi) = (a, b);
            } else {
                hi = hi.max(b);
            }
        }
        total += hi - lo;
    }
    total
}

/// Inclusion–exclusion over nonempty intersections, per plane.
fn union_area(pieces: &[Vec<DVector<f64>>]) -> f64 {
    fn go(group: &[Vec<DVector<f64>>], start: usize, current: &[DVector<f64>], depth: usize) -> f64 {
        let mut total = 0.0;
        for i in start..group.len() {
            let Some(meet) = clip_polygon(current, &group[i]) else { continue };
            let sign = if depth % 2 == 1 { -1.0 } else { 1.0 };
            total += sign * signed_area(&meet).abs() + go(group, i + 1, &meet, depth + 1);
        }
        total
    }
    let mut total = 0.0;
    for group in coplanar_groups(pieces, 2) {
        for (i, poly) in group.iter().enumerate() {
            total += signed_area(poly).abs() + go(&group, i + 1, poly, 1);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(points: &[[f64; 2]]) -> Vec<Vec<f64>> {
        points.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn examples() {
        let unit = tri(&[[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]]);
        let id = PLMap::simplex(unit.clone(), unit.clone()).unwrap();
        let area = 3f64.sqrt() / 4.0;
        assert!((map_mass(&id, JacobianMethod::Analytic).unwrap() - area).abs() < 1e-15);
        let lifted = unit.iter().map(|p| vec![2.0 * p[0], 2.0 * p[1], 0.0]).collect();
        let f = PLMap::simplex(unit.clone(), lifted).unwrap();
        let c = PLChain::from_terms(vec![(1, f)]).unwrap();
        assert!((chain_mass(&c) - 4.0 * area).abs() < 1e-14);
        let cm = current_mass(&c);
        assert!(cm.exact);
        assert!((cm.value - chain_mass(&c)).abs() < 1e-14);
    }

    #[test]
    fn cancellation_is_inexact() {
        let t = tri(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let f = PLMap::simplex(t.clone(), t.clone()).unwrap();
        let shifted = PLMap::simplex(t.clone(), t.iter().map(|p| vec![p[0] + 2.0, p[1]]).collect()).unwrap();
        let both = PLChain::from_terms(vec![(1, f.clone()), (-1, shifted)]).unwrap();
        let cm = current_mass(&both);
        assert!(cm.exact);
        assert!((cm.value - 1.0).abs() < 1e-15);
        let cancel = PLChain::from_terms(vec![(1, f.clone()), (-1, f)]).unwrap();
        let cm = current_mass(&cancel);
        assert!(!cm.exact);
        assert_eq!(cm.overlaps, vec![(0, 1)]);
        assert!((cm.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn touching_triangles_do_not_overlap() {
        let pts = tri(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let f = PLMap::new(pts.clone(), vec![vec![0, 1, 2], vec![1, 3, 2]], pts, None).unwrap();
        let c = PLChain::from_terms(vec![(1, f)]).unwrap();
        assert!(current_mass(&c).exact);
    }

    #[test]
    fn lip_check_degree_zero() {
        let p = PLMap::simplex(vec![vec![0.0]], vec![vec![3.0, 4.0]]).unwrap();
        let c = PLChain::from_terms(vec![(2, p.clone()), (-1, p)]).unwrap();
        let r = mass_lip_check(&c);
        assert_eq!(r.factor, 1.0);
        assert_eq!(r.mass, 3.0);
        assert!(r.holds);
        assert!(!r.current_exact);
    }

    fn reflect(p: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy);
        let foot = [a[0] + t * dx, a[1] + t * dy];
        vec![2.0 * foot[0] - p[0], 2.0 * foot[1] - p[1]]
    }

    #[test]
    fn tilde_mass_fold() {
        let pts = tri(&[[0.0, 0.0], [0.7, 0.0], [1.0, 1.0], [2.0, 0.0]]);
        let mut img = pts.clone();
        img[3] = reflect(&pts[3], &pts[1], &pts[2]);
        let outer = Some(tri(&[[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]));
        let fold = PLMap::new(pts, vec![vec![0, 1, 2], vec![1, 3, 2]], img.clone(), outer).unwrap();
        let r = tilde_mass_report(&fold, 3).unwrap();
        assert!((r.mass - 1.0).abs() < 1e-14);
        // the image of the whole domain, by rasterization
        let inside = |t: &[&Vec<f64>; 3], x: f64, y: f64| {
            let s = |a: &Vec<f64>, b: &Vec<f64>| (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
            let (u, v, w) = (s(t[0], t[1]), s(t[1], t[2]), s(t[2], t[0]));
            (u >= 0.0 && v >= 0.0 && w >= 0.0) || (u <= 0.0 && v <= 0.0 && w <= 0.0)
        };
        let (left, right) = ([&img[0], &img[1], &img[2]], [&img[1], &img[3], &img[2]]);
        let n = 1500;
        let (x0, x1, y0) = (-0.5, 1.5, -0.5);
        let h = (x1 - x0) / n as f64;
        let mut hits = 0usize;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (x0 + (i as f64 + 0.5) * h, y0 + (j as f64 + 0.5) * h);
                if inside(&left, x, y) || inside(&right, x, y) {
                    hits += 1;
                }
            }
        }
        let oracle = hits as f64 * h * h;
        assert!((r.values[0] - oracle).abs() < 5e-3, "{r:?} vs {oracle}");
        for w in r.values.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        assert!(r.gap > 0.0);
        assert!(r.values[3] <= r.mass + 1e-12);
    }

    #[test]
    fn tilde_mass_injective() {
        let t = tri(&[[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]]);
        let img: Vec<Vec<f64>> = t.iter().map(|p| vec![p[0] + p[1], 2.0 * p[1], p[0] - p[1]]).collect();
        let f = PLMap::simplex(t, img).unwrap();
        let m = map_mass(&f, JacobianMethod::Analytic).unwrap();
        assert!((tilde_mass(&f, 0).unwrap() - m).abs() < 1e-12 * m);
        assert!((tilde_mass(&f, 2).unwrap() - m).abs() < 1e-12 * m);
    }
}
