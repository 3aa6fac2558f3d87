//! Recognition of NB-spaces, boundary loci and local homology profiles.
//!
//! An `n`-dimensional complex is an NB-space when every vertex link is a
//! compact connected NB-space of dimension `n - 1` (two points when `n = 1`).
//! With boundary, links may also be closed cones over such spaces. Only
//! definite failures give `NotNb`; anything undecided gives `Unknown`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{DeltaComplex, Subcomplex, VertexId};
use crate::error::{Error, Result};
use crate::homology::{local_homology, reduced_homology, HomologyGroup};
use crate::ring::Ring;
use crate::sphere::{SphereBudget, SphereRecognizer, SphereVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NbStatus {
    NbWithoutBoundary,
    NbWithBoundary,
    NotNb,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkClass {
    /// A compact connected NB-space without boundary.
    Closed,
    /// A closed cone over one.
    ClosedCone,
    Failed,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexVerdict {
    pub vertex: VertexId,
    pub label: String,
    pub class: LinkClass,
    pub reason: String,
    /// Verdict on the link, kept only on failing or undecided branches.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link: Option<Box<NbVerdict>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbVerdict {
    pub status: NbStatus,
    pub dimension: usize,
    pub reason: String,
    pub vertices: Vec<VertexVerdict>,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug)]
struct GenResult {
    outcome: Outcome,
    reason: String,
    sub: Option<NbVerdict>,
    depth: usize,
}

impl GenResult {
    fn new(outcome: Outcome, reason: impl Into<String>) -> Self {
        GenResult {
            outcome,
            reason: reason.into(),
            sub: None,
            depth: 0,
        }
    }
}

/// Recursive recognizer; verdicts on links are cached by exact structure hash.
#[derive(Debug)]
pub struct NbRecognizer {
    pub max_depth: usize,
    closed_cache: HashMap<String, GenResult>,
    verdict_cache: HashMap<String, NbVerdict>,
}

impl Default for NbRecognizer {
    fn default() -> Self {
        NbRecognizer::new(8)
    }
}

impl NbRecognizer {
    pub fn new(max_depth: usize) -> Self {
        NbRecognizer {
            max_depth,
            closed_cache: HashMap::new(),
            verdict_cache: HashMap::new(),
        }
    }

    /// Verdict on all of `x`.
    pub fn is_nb(&mut self, x: &DeltaComplex) -> Result<NbVerdict> {
        self.verdict(x, None, 0)
    }

    /// Verdict on the open subset `X ∖ A` for a full subcomplex `A`: only
    /// vertices outside `A` are examined.
    pub fn is_nb_outside(&mut self, x: &DeltaComplex, a: &Subcomplex) -> Result<NbVerdict> {
        self.verdict(x, Some(a), 0)
    }

    fn verdict(&mut self, x: &DeltaComplex, removed: Option<&Subcomplex>, depth: usize) -> Result<NbVerdict> {
        let n = x
            .dimension()
            .ok_or_else(|| Error::Precondition("empty complex".into()))?;
        x.require_pure()?;
        if n == 0 {
            return Err(Error::Precondition("NB-spaces have positive dimension".into()));
        }
        if !x.is_regular() {
            let mut v = self.verdict(&x.ensure_simplicial(), None, depth)?;
            v.reason = format!("on the barycentric subdivision; {}", v.reason);
            return Ok(v);
        }
        let key = removed.is_none().then(|| x.structure_hash());
        if let Some(v) = key.as_ref().and_then(|k| self.verdict_cache.get(k)) {
            return Ok(v.clone());
        }
        let mut vertices = Vec::new();
        let mut max_depth = depth;
        for v in x.vertices() {
            if removed.is_some_and(|a| a.contains((0, v.0))) {
                continue;
            }
            let lk = x.link(v)?;
            let closed = self.closed_generator(&lk, n - 1, depth + 1);
            let (class, res) = if closed.outcome == Outcome::Pass {
                (LinkClass::Closed, closed)
            } else {
                let cone = self.cone_generator(&lk, n - 1, depth + 1);
                match (closed.outcome, cone.outcome) {
                    (_, Outcome::Pass) => (LinkClass::ClosedCone, cone),
                    (Outcome::Fail, Outcome::Fail) => {
                        let reason = format!("{}; not a closed cone: {}", closed.reason, cone.reason);
                        (LinkClass::Failed, GenResult { reason, ..closed })
                    }
                    (Outcome::Unknown, _) => (LinkClass::Unknown, closed),
                    _ => (LinkClass::Unknown, cone),
                }
            };
            max_depth = max_depth.max(res.depth);
            let keep = matches!(class, LinkClass::Failed | LinkClass::Unknown);
            vertices.push(VertexVerdict {
                vertex: v,
                label: x.label(v),
                class,
                reason: res.reason,
                link: if keep { res.sub.map(Box::new) } else { None },
            });
        }
        let count = |c: LinkClass| vertices.iter().filter(|v| v.class == c).count();
        let (status, reason) = if count(LinkClass::Failed) > 0 {
            let w = vertices.iter().find(|v| v.class == LinkClass::Failed).unwrap();
            (NbStatus::NotNb, format!("vertex {}: {}", w.label, w.reason))
        } else if count(LinkClass::Unknown) > 0 {
            let w = vertices.iter().find(|v| v.class == LinkClass::Unknown).unwrap();
            (NbStatus::Unknown, format!("vertex {}: {}", w.label, w.reason))
        } else if count(LinkClass::ClosedCone) > 0 {
            (
                NbStatus::NbWithBoundary,
                format!("{} closed-cone links", count(LinkClass::ClosedCone)),
            )
        } else {
            (NbStatus::NbWithoutBoundary, "every link is a closed generator".into())
        };
        let out = NbVerdict {
            status,
            dimension: n,
            reason,
            vertices,
            depth: max_depth,
        };
        if let Some(k) = key {
            self.verdict_cache.insert(k, out.clone());
        }
        Ok(out)
    }

    /// Whether `l` is a compact connected NB-space of dimension `m` (two points for `m = 0`).
    fn closed_generator(&mut self, l: &DeltaComplex, m: usize, depth: usize) -> GenResult {
        let key = l.structure_hash();
        if let Some(r) = self.closed_cache.get(&key) {
            return r.clone();
        }
        let r = self.closed_generator_uncached(l, m, depth);
        self.closed_cache.insert(key, r.clone());
        r
    }

    fn closed_generator_uncached(&mut self, l: &DeltaComplex, m: usize, depth: usize) -> GenResult {
        if l.dimension() != Some(m) {
            return GenResult::new(Outcome::Fail, format!("link has dimension {:?}, expected {m}", l.dimension()));
        }
        if m == 0 {
            let k = l.n_vertices();
            return if k == 2 {
                GenResult::new(Outcome::Pass, "two points")
            } else {
                GenResult::new(Outcome::Fail, format!("link has {k} points"))
            };
        }
        if !l.is_connected() {
            return GenResult::new(Outcome::Fail, "disconnected link");
        }
        if m == 1 {
            return match l.vertex_degrees().into_iter().find(|&(_, d)| d != 2) {
                None => GenResult::new(Outcome::Pass, "cycle"),
                Some((v, d)) => GenResult::new(Outcome::Fail, format!("1-dimensional link with a vertex {v} of degree {d}")),
            };
        }
        if depth >= self.max_depth {
            return GenResult::new(Outcome::Unknown, "recursion depth exhausted");
        }
        let sub = match self.verdict(l, None, depth) {
            Ok(s) => s,
            Err(e) => return GenResult::new(Outcome::Fail, e.to_string()),
        };
        let (outcome, reason) = match sub.status {
            NbStatus::NbWithoutBoundary => (Outcome::Pass, "connected NB link".to_string()),
            NbStatus::NbWithBoundary => (Outcome::Fail, "link has boundary".to_string()),
            NbStatus::NotNb => (Outcome::Fail, format!("link is not NB: {}", sub.reason)),
            NbStatus::Unknown => (Outcome::Unknown, format!("link undecided: {}", sub.reason)),
        };
        GenResult {
            outcome,
            reason,
            depth: sub.depth,
            sub: Some(sub),
        }
    }

    /// Whether `l` is a closed cone over a closed generator of dimension `m - 1`
    /// (a point for `m = 0`).
    fn cone_generator(&mut self, l: &DeltaComplex, m: usize, depth: usize) -> GenResult {
        if l.dimension() != Some(m) {
            return GenResult::new(Outcome::Fail, format!("link has dimension {:?}, expected {m}", l.dimension()));
        }
        if m == 0 {
            let k = l.n_vertices();
            return if k == 1 {
                GenResult::new(Outcome::Pass, "one point")
            } else {
                GenResult::new(Outcome::Fail, format!("link has {k} points"))
            };
        }
        if !l.is_connected() {
            return GenResult::new(Outcome::Fail, "disconnected link");
        }
        let red = reduced_homology(l, Ring::Z2);
        if red.0.iter().any(|g| !g.is_zero()) {
            return GenResult::new(Outcome::Fail, "link is not Z2-acyclic");
        }
        let degrees = l.vertex_degrees();
        if m == 1 {
            let ends = degrees.values().filter(|&&d| d == 1).count();
            return match degrees.iter().find(|&(_, &d)| d > 2) {
                Some((v, d)) => GenResult::new(Outcome::Fail, format!("vertex {v} of degree {d}")),
                None if ends == 2 => GenResult::new(Outcome::Pass, "arc"),
                None => GenResult::new(Outcome::Fail, "not an arc"),
            };
        }
        let maximal = l.maximal_cells();
        let mut apexes: Vec<VertexId> = l.vertices().collect();
        for r in &maximal {
            let c = l.cell(*r);
            apexes.retain(|v| c.contains(*v));
        }
        let mut last = None;
        for c in apexes {
            let Ok(base) = l.link(c) else { continue };
            let r = self.closed_generator(&base, m - 1, depth);
            if r.outcome == Outcome::Pass {
                return GenResult {
                    reason: format!("closed cone with apex {}", l.label(c)),
                    ..r
                };
            }
            last = Some(r);
        }
        if m == 2 && is_disk(l) {
            return GenResult::new(Outcome::Pass, "2-disk");
        }
        match last {
            Some(r) => GenResult {
                outcome: Outcome::Unknown,
                reason: format!("cone base is not certified: {}", r.reason),
                ..r
            },
            None => GenResult::new(Outcome::Unknown, "no literal cone vertex"),
        }
    }
}

/// Connected surface with nonempty boundary and Euler characteristic 1.
fn is_disk(l: &DeltaComplex) -> bool {
    if !l.is_regular() || !l.is_connected() {
        return false;
    }
    let mut free = false;
    for v in l.vertices() {
        let Ok(lk) = l.link(v) else { return false };
        if !lk.is_connected() || lk.dimension() != Some(1) {
            return false;
        }
        let deg = lk.vertex_degrees();
        if deg.values().any(|&d| d > 2) {
            return false;
        }
        free |= deg.values().any(|&d| d == 1);
    }
    free && l.euler_characteristic() == 1
}

/// One-shot recognition with default depth.
pub fn is_nb(x: &DeltaComplex) -> Result<NbVerdict> {
    NbRecognizer::default().is_nb(x)
}

/// Verdict on `X ∖ A`; with `A` the base of a closed cone this is the open cone.
pub fn is_nb_interior(x: &DeltaComplex, a: &Subcomplex) -> Result<NbVerdict> {
    NbRecognizer::default().is_nb_outside(x, a)
}

/// `∂X = {v : H_n(X|v; Z2) = 0}` at the vertex level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLocus {
    pub vertices: Vec<VertexId>,
    /// Full subcomplex spanned by the boundary vertices.
    #[serde(skip)]
    pub subcomplex: Option<Subcomplex>,
    /// Whether the subcomplex is the closure of the `(n-1)`-cells with one coface.
    pub matches_free_faces: bool,
}

pub fn boundary_locus(x: &DeltaComplex) -> Result<BoundaryLocus> {
    x.require_pure()?;
    let n = x.dim();
    let mut vertices = Vec::new();
    for v in x.vertices() {
        if local_homology(x, v, Ring::Z2)?[n].is_zero() {
            vertices.push(v);
        }
    }
    let sets = span(x, &vertices);
    let sub = Subcomplex::from_vertex_sets(x, &sets)?;
    let free: Vec<(usize, usize)> = if n == 0 {
        vec![]
    } else {
        x.cofaces(n - 1)
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() == 1)
            .map(|(i, _)| (n - 1, i))
            .collect()
    };
    let closure = Subcomplex::closure(x, free);
    Ok(BoundaryLocus {
        matches_free_faces: closure == sub,
        vertices,
        subcomplex: Some(sub),
    })
}

/// Vertex sets of all cells whose vertices all lie in `vs`.
fn span(x: &DeltaComplex, vs: &[VertexId]) -> Vec<Vec<VertexId>> {
    let set: BTreeSet<VertexId> = vs.iter().copied().collect();
    let mut out = Vec::new();
    for k in 0..x.f_vector().len() {
        for c in x.cells(k) {
            if c.vertices.iter().all(|v| set.contains(v)) {
                out.push(c.vertices.clone());
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopClass {
    /// `(H_n, H_{n-1}) = (Z, 0)`.
    Oriented,
    /// `(H_n, H_{n-1}) = (0, Z2)`.
    Twisted,
    /// `H_n(X|v; Z2) = 0`.
    Boundary,
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexProfile {
    pub vertex: VertexId,
    pub label: String,
    /// `H_k(X|v; Z)` for `k = 0..=n`.
    pub z: Vec<HomologyGroup>,
    /// `H_k(X|v; Z2)` for `k = 0..=n`.
    pub z2: Vec<HomologyGroup>,
    pub boundary: bool,
    pub locally_orientable: bool,
    pub class: TopClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalHomologyProfile {
    pub dimension: usize,
    pub vertices: Vec<VertexProfile>,
}

impl LocalHomologyProfile {
    /// Vertices outside the two classes `(Z, 0)` and `(0, Z2)`.
    pub fn dichotomy_violations(&self) -> Vec<&VertexProfile> {
        self.vertices
            .iter()
            .filter(|p| !matches!(p.class, TopClass::Oriented | TopClass::Twisted))
            .collect()
    }
}

pub fn local_homology_profile(x: &DeltaComplex) -> Result<LocalHomologyProfile> {
    x.require_pure()?;
    let n = x.dim();
    let mut vertices = Vec::new();
    for v in x.vertices() {
        let z = local_homology(x, v, Ring::Z)?;
        let z2 = local_homology(x, v, Ring::Z2)?;
        let top = &z[n];
        let below = if n == 0 { HomologyGroup::zero(Ring::Z) } else { z[n - 1].clone() };
        let boundary = z2[n].is_zero();
        let class = if *top == HomologyGroup::z(1, &[]) && below.is_zero() {
            TopClass::Oriented
        } else if top.is_zero() && below == HomologyGroup::z(0, &[2]) {
            TopClass::Twisted
        } else if boundary {
            TopClass::Boundary
        } else {
            TopClass::Other
        };
        vertices.push(VertexProfile {
            vertex: v,
            label: x.label(v),
            locally_orientable: *top == HomologyGroup::z(1, &[]),
            boundary,
            class,
            z,
            z2,
        });
    }
    Ok(LocalHomologyProfile { dimension: n, vertices })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldClass {
    /// The link is a certified PL sphere.
    CertifiedManifold,
    /// Local homology of a sphere without a PL certificate.
    HomologyManifoldOnly,
    /// Local homology vanishes mod 2.
    Boundary,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldPartCertificate {
    pub vertices: Vec<(VertexId, String, ManifoldClass)>,
    /// Whether every `(n-1)`-cell has exactly two cofaces.
    pub pseudomanifold: bool,
    /// Dimension of the complex spanned by singular vertices.
    pub singular_dimension: Option<usize>,
    /// `singular_dimension ≤ n - 3` and the pseudomanifold property, where applicable.
    pub codimension_ok: bool,
}

pub fn manifold_part_certificate(x: &DeltaComplex, budget: SphereBudget) -> Result<ManifoldPartCertificate> {
    x.require_pure()?;
    if !x.is_regular() {
        return manifold_part_certificate(&x.ensure_simplicial(), budget);
    }
    if is_nb(x)?.status == NbStatus::NotNb {
        return Err(Error::Precondition("not an NB-space".into()));
    }
    let n = x.dim();
    let mut spheres = SphereRecognizer::new(budget);
    let mut vertices = Vec::new();
    let mut singular = Vec::new();
    let sphere_like = |g: &[HomologyGroup]| {
        g.iter()
            .enumerate()
            .all(|(k, h)| if k == n { *h == HomologyGroup::z(1, &[]) } else { h.is_zero() })
    };
    for v in x.vertices() {
        let lh = local_homology(x, v, Ring::Z)?;
        let class = if sphere_like(&lh) {
            match spheres.recognize(&x.link(v)?) {
                SphereVerdict::Sphere(_) => ManifoldClass::CertifiedManifold,
                _ => ManifoldClass::HomologyManifoldOnly,
            }
        } else if local_homology(x, v, Ring::Z2)?[n].is_zero() {
            ManifoldClass::Boundary
        } else {
            singular.push(v);
            ManifoldClass::Singular
        };
        vertices.push((v, x.label(v), class));
    }
    let pseudomanifold = n == 0 || x.cofaces(n - 1).iter().all(|c| c.len() == 2);
    let spanned = span(x, &singular);
    let singular_dimension = spanned.iter().map(|c| c.len() - 1).max();
    let has_boundary = vertices.iter().any(|v| v.2 == ManifoldClass::Boundary);
    let codimension_ok = has_boundary
        || (pseudomanifold && singular_dimension.is_none_or(|d| n >= 3 && d <= n - 3));
    Ok(ManifoldPartCertificate {
        vertices,
        pseudomanifold,
        singular_dimension,
        codimension_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{closed_cone, cone, disjoint_union, suspension};
    use crate::corpus::*;

    fn status(x: &DeltaComplex) -> NbStatus {
        is_nb(x).unwrap().status
    }

    #[test]
    fn graphs() {
        assert_eq!(status(&circle(4)), NbStatus::NbWithoutBoundary);
        assert_eq!(status(&wedge_of_circles()), NbStatus::NotNb);
        let path = DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(status(&path), NbStatus::NbWithBoundary);
    }

    #[test]
    fn cones() {
        assert_eq!(status(&cone(&t2_7())), NbStatus::NbWithBoundary);
        let (c, base) = closed_cone(&t2_7());
        assert_eq!(is_nb_interior(&c, &base).unwrap().status, NbStatus::NbWithoutBoundary);
        let two = disjoint_union(&circle(3), &circle(3));
        let v = is_nb(&cone(&two)).unwrap();
        assert_eq!(v.status, NbStatus::NotNb);
        assert!(v.reason.contains("disconnected"), "{}", v.reason);
    }

    #[test]
    fn suspensions() {
        assert_eq!(status(&suspension(&t2_7())), NbStatus::NbWithoutBoundary);
        assert_eq!(status(&suspension(&rp2_6())), NbStatus::NbWithoutBoundary);
        assert_eq!(status(&sphere(3)), NbStatus::NbWithoutBoundary);
    }

    #[test]
    fn boundary_of_closed_cone() {
        let (c, base) = closed_cone(&rp2_6());
        let b = boundary_locus(&c).unwrap();
        assert_eq!(b.subcomplex.as_ref(), Some(&base));
        assert!(b.matches_free_faces);
        assert!(boundary_locus(&sphere(3)).unwrap().vertices.is_empty());
        let d = boundary_locus(&disk()).unwrap();
        assert_eq!(d.vertices.len(), 5);
    }

    #[test]
    fn profile_of_suspended_rp2() {
        let x = suspension(&rp2_6());
        let p = local_homology_profile(&x).unwrap();
        for vp in &p.vertices[..2] {
            assert_eq!(vp.class, TopClass::Twisted);
            assert_eq!(vp.z2[3], HomologyGroup::free(Ring::Z2, 1));
        }
        assert!(p.vertices[2..].iter().all(|v| v.class == TopClass::Oriented));
        assert!(p.dichotomy_violations().is_empty());
    }

    #[test]
    fn manifold_part() {
        let t = manifold_part_certificate(&t2_7(), SphereBudget::default()).unwrap();
        assert!(t.vertices.iter().all(|v| v.2 == ManifoldClass::CertifiedManifold));
        let x = suspension(&rp3());
        let m = manifold_part_certificate(&x, SphereBudget::default()).unwrap();
        assert_eq!(m.vertices[0].2, ManifoldClass::Singular);
        assert_eq!(m.vertices[1].2, ManifoldClass::Singular);
        assert_eq!(m.singular_dimension, Some(0));
        assert!(m.codimension_ok);
    }
}
