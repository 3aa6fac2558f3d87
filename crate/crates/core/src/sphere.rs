//! Combinatorial recognition of PL spheres.
//!
//! A complex is certified when it is the boundary of a simplex, a cycle graph,
//! a closed surface with the homology of `S²`, or when it reduces to the
//! boundary of a simplex. Reduction first checks that every vertex link is
//! itself a certified sphere (so the complex is a PL manifold), then contracts
//! edges satisfying `lk u ∩ lk v = lk uv` and applies bistellar moves.
//! Every step preserves the PL type, so reaching `∂Δ^{d+1}` is a proof.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::DeltaComplex;
use crate::homology::reduced_homology;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereCertificate {
    Empty,
    SimplexBoundary,
    Cycle,
    Surface,
    Reduced { contractions: usize, flips: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "detail")]
pub enum SphereVerdict {
    Sphere(SphereCertificate),
    NotSphere(String),
    Unknown(String),
}

impl SphereVerdict {
    pub fn is_sphere(&self) -> bool {
        matches!(self, SphereVerdict::Sphere(_))
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SphereBudget {
    /// Number of times the greedy reduction may get stuck and be perturbed.
    pub flip_rounds: usize,
    pub seed: u64,
}

impl Default for SphereBudget {
    fn default() -> Self {
        SphereBudget {
            flip_rounds: 60,
            seed: 0x5eed,
        }
    }
}

/// Sphere recognizer with a cache keyed by the exact structure hash.
#[derive(Debug, Default)]
pub struct SphereRecognizer {
    pub budget: SphereBudget,
    cache: HashMap<String, SphereVerdict>,
}

impl SphereRecognizer {
    pub fn new(budget: SphereBudget) -> Self {
        SphereRecognizer {
            budget,
            cache: HashMap::new(),
        }
    }

    pub fn recognize(&mut self, x: &DeltaComplex) -> SphereVerdict {
        let key = x.structure_hash();
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let v = self.recognize_uncached(x);
        self.cache.insert(key, v.clone());
        v
    }

    fn recognize_uncached(&mut self, x: &DeltaComplex) -> SphereVerdict {
        let Some(d) = x.dimension() else {
            return SphereVerdict::Sphere(SphereCertificate::Empty);
        };
        if !x.is_simplicial() {
            return self.recognize(&x.ensure_simplicial());
        }
        if !x.is_pure() {
            return SphereVerdict::NotSphere("not pure".into());
        }
        let h = reduced_homology(x, Ring::Z);
        for k in 0..=d {
            let expect = if k == d { 1 } else { 0 };
            let g = h.degree(k as isize);
            if g.rank != expect || !g.torsion.is_empty() {
                return SphereVerdict::NotSphere(format!("reduced H_{k} = {g}"));
            }
        }
        let f = x.f_vector();
        if f[0] == d + 2 && f[d] == d + 2 {
            return SphereVerdict::Sphere(SphereCertificate::SimplexBoundary);
        }
        let cof = if d > 0 { x.cofaces(d - 1) } else { vec![] };
        if let Some(bad) = cof.iter().position(|c| c.len() != 2) {
            return SphereVerdict::NotSphere(format!(
                "ridge {bad} has {} cofaces",
                cof[bad].len()
            ));
        }
        match d {
            0 => return SphereVerdict::Sphere(SphereCertificate::SimplexBoundary),
            1 => return SphereVerdict::Sphere(SphereCertificate::Cycle),
            _ => {}
        }
        let mut link_unknown = None;
        for v in x.vertices() {
            let lk = x.link(v).expect("simplicial complexes have links");
            match self.recognize(&lk) {
                SphereVerdict::Sphere(_) => {}
                SphereVerdict::NotSphere(why) => {
                    return SphereVerdict::NotSphere(format!("link of {v} is not a PL sphere: {why}"))
                }
                SphereVerdict::Unknown(_) => link_unknown = Some(v),
            }
        }
        if let Some(v) = link_unknown {
            return SphereVerdict::Unknown(format!("link of {v} is not certified"));
        }
        if d == 2 {
            return SphereVerdict::Sphere(SphereCertificate::Surface);
        }
        reduce(x, self.budget)
    }
}

/// One-shot recognition with the default budget.
pub fn recognize_sphere(x: &DeltaComplex) -> SphereVerdict {
    SphereRecognizer::new(SphereBudget::default()).recognize(x)
}

type Face = Vec<u32>;

struct Work {
    d: usize,
    facets: BTreeSet<Face>,
    star: HashMap<u32, BTreeSet<Face>>,
}

impl Work {
    fn new(x: &DeltaComplex) -> Work {
        let mut w = Work {
            d: x.dim(),
            facets: BTreeSet::new(),
            star: HashMap::new(),
        };
        for f in x.facet_vertex_lists() {
            w.insert(f.into_iter().map(|v| v as u32).collect());
        }
        w
    }

    fn insert(&mut self, f: Face) {
        for &v in &f {
            self.star.entry(v).or_default().insert(f.clone());
        }
        self.facets.insert(f);
    }

    fn remove(&mut self, f: &Face) {
        for v in f {
            if let Some(s) = self.star.get_mut(v) {
                s.remove(f);
                if s.is_empty() {
                    self.star.remove(v);
                }
            }
        }
        self.facets.remove(f);
    }

    fn containing(&self, a: &[u32]) -> Vec<Face> {
        let Some(s) = self.star.get(&a[0]) else {
            return vec![];
        };
        s.iter()
            .filter(|f| a.iter().all(|v| f.binary_search(v).is_ok()))
            .cloned()
            .collect()
    }

    fn is_simplex_boundary(&self) -> bool {
        self.star.len() == self.d + 2 && self.facets.len() == self.d + 2
    }

    fn link_faces(&self, a: &[u32]) -> HashSet<Face> {
        let mut out = HashSet::new();
        for f in self.containing(a) {
            let rest: Vec<u32> = f.into_iter().filter(|v| !a.contains(v)).collect();
            for mask in 0u32..(1 << rest.len()) {
                let sub: Face = rest
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                out.insert(sub);
            }
        }
        out
    }

    fn link_condition(&self, u: u32, v: u32) -> bool {
        let lu = self.link_faces(&[u]);
        let lv = self.link_faces(&[v]);
        let mut e = [u, v];
        e.sort_unstable();
        let luv = self.link_faces(&e);
        let meet: HashSet<&Face> = lu.iter().filter(|f| lv.contains(*f)).collect();
        meet.len() == luv.len() && luv.iter().all(|f| meet.contains(f))
    }

    /// Contracts `v` into `u`.
    fn contract(&mut self, u: u32, v: u32) {
        let star_v: Vec<Face> = self.star.get(&v).map(|s| s.iter().cloned().collect()).unwrap_or_default();
        for f in star_v {
            self.remove(&f);
            if f.binary_search(&u).is_err() {
                let mut g: Face = f.into_iter().map(|w| if w == v { u } else { w }).collect();
                g.sort_unstable();
                self.insert(g);
            }
        }
    }

    fn try_contract(&mut self) -> bool {
        let mut verts: Vec<(usize, u32)> = self.star.iter().map(|(v, s)| (s.len(), *v)).collect();
        verts.sort_unstable();
        for &(_, v) in &verts {
            let mut nbrs: BTreeSet<u32> = BTreeSet::new();
            for f in &self.star[&v] {
                nbrs.extend(f.iter().copied().filter(|&w| w != v));
            }
            for u in nbrs {
                if self.link_condition(u, v) {
                    self.contract(u, v);
                    return true;
                }
            }
        }
        false
    }

    /// Bistellar moves `(A, B)` with `lk A = ∂B` and `B` not a face, excluding
    /// stellar subdivisions of facets.
    fn moves(&self) -> Vec<(Face, Face)> {
        let mut faces: BTreeSet<Face> = BTreeSet::new();
        for f in &self.facets {
            let n = f.len();
            for mask in 1u32..(1 << n) - 1 {
                faces.insert(f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        let mut out = Vec::new();
        for a in faces {
            let i = a.len() - 1;
            let lk: Vec<Face> = self
                .containing(&a)
                .into_iter()
                .map(|f| f.into_iter().filter(|v| !a.contains(v)).collect())
                .collect();
            let bsize = self.d - i + 1;
            if lk.len() != bsize {
                continue;
            }
            let b: BTreeSet<u32> = lk.iter().flatten().copied().collect();
            if b.len() != bsize {
                continue;
            }
            let b: Face = b.into_iter().collect();
            if bsize > 1 && !self.containing(&b).is_empty() {
                continue;
            }
            out.push((a, b));
        }
        out
    }

    fn apply(&mut self, a: &Face, b: &Face) {
        for f in self.containing(a) {
            self.remove(&f);
        }
        for skip in 0..a.len() {
            let mut g: Face = a.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
            g.extend(b.iter().copied());
            g.sort_unstable();
            self.insert(g);
        }
    }
}

struct Outcome {
    reached: bool,
    contractions: usize,
    flips: usize,
    rounds: usize,
    best: BTreeSet<Face>,
}

/// Greedy contraction and facet-reducing moves, perturbed by random moves when
/// stuck; stops early once `done` holds. Remembers the smallest complex seen.
fn simplify(w: &mut Work, budget: SphereBudget, done: impl Fn(&Work) -> bool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = Outcome {
        reached: false,
        contractions: 0,
        flips: 0,
        rounds: 0,
        best: w.facets.clone(),
    };
    let mut best_size = (w.star.len(), w.facets.len());
    loop {
        let size = (w.star.len(), w.facets.len());
        if size < best_size {
            best_size = size;
            out.best = w.facets.clone();
        }
        if done(w) {
            out.reached = true;
            return out;
        }
        if w.try_contract() {
            out.contractions += 1;
            continue;
        }
        let moves = w.moves();
        // a move on an i-face trades |B| = d-i+1 facets for |A| = i+1
        if let Some((a, b)) = moves.iter().filter(|(a, b)| a.len() < b.len()).min_by_key(|(a, _)| a.len()) {
            let (a, b) = (a.clone(), b.clone());
            w.apply(&a, &b);
            out.flips += 1;
            continue;
        }
        if out.rounds >= budget.flip_rounds || moves.is_empty() {
            return out;
        }
        out.rounds += 1;
        let heat = 1 + out.rounds % 4;
        for _ in 0..heat {
            let moves = w.moves();
            let Some((a, b)) = moves.choose(&mut rng) else { break };
            let (a, b) = (a.clone(), b.clone());
            w.apply(&a, &b);
            out.flips += 1;
        }
    }
}

fn reduce(x: &DeltaComplex, budget: SphereBudget) -> SphereVerdict {
    let mut w = Work::new(x);
    let o = simplify(&mut w, budget, Work::is_simplex_boundary);
    if o.reached {
        SphereVerdict::Sphere(SphereCertificate::Reduced {
            contractions: o.contractions,
            flips: o.flips,
        })
    } else {
        SphereVerdict::Unknown(format!(
            "stuck at {} vertices, {} facets after {} perturbations",
            w.star.len(),
            w.facets.len(),
            o.rounds
        ))
    }
}

/// Reduces the vertex count of a closed combinatorial manifold by moves that
/// preserve its PL type, returning the smallest triangulation found.
pub fn reduce_vertices(x: &DeltaComplex, budget: SphereBudget, target: usize) -> crate::Result<DeltaComplex> {
    if !x.is_simplicial() {
        return Err(crate::Error::NotSimplicial);
    }
    let mut w = Work::new(x);
    let o = simplify(&mut w, budget, |w| w.star.len() <= target);
    let facets: Vec<Vec<usize>> = o.best.iter().map(|f| f.iter().map(|&v| v as usize).collect()).collect();
    DeltaComplex::from_facets(&facets)
}

/// Whether a simplicial complex is literally the boundary of a simplex.
pub fn is_simplex_boundary(x: &DeltaComplex) -> bool {
    match x.dimension() {
        Some(d) => {
            let f = x.f_vector();
            x.is_simplicial() && f[0] == d + 2 && f[d] == d + 2 && x.is_pure()
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{join, suspension};

    fn boundary_simplex(n: usize) -> DeltaComplex {
        let facets: Vec<Vec<usize>> = (0..n + 2)
            .map(|skip| (0..n + 2).filter(|&v| v != skip).collect())
            .collect();
        DeltaComplex::from_facets(&facets).unwrap()
    }

    fn octahedral(n: usize) -> DeltaComplex {
        let s0 = DeltaComplex::from_facets(&[vec![0], vec![1]]).unwrap();
        let mut x = s0.clone();
        for _ in 0..n {
            x = join(&x, &s0);
        }
        x
    }

    #[test]
    fn simplex_boundaries() {
        for n in 0..5 {
            assert_eq!(
                recognize_sphere(&boundary_simplex(n)),
                SphereVerdict::Sphere(SphereCertificate::SimplexBoundary)
            );
        }
    }

    #[test]
    fn cross_polytopes_reduce() {
        for n in 1..5 {
            assert!(recognize_sphere(&octahedral(n)).is_sphere(), "n={n}");
        }
    }

    #[test]
    fn suspended_spheres() {
        let s = suspension(&suspension(&boundary_simplex(2)));
        assert!(recognize_sphere(&s).is_sphere());
    }

    #[test]
    fn torus_rejected() {
        let t: Vec<Vec<usize>> = (0..7)
            .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
            .collect();
        let t = DeltaComplex::from_facets(&t).unwrap();
        assert!(matches!(recognize_sphere(&t), SphereVerdict::NotSphere(_)));
    }

    #[test]
    fn suspension_of_torus_link_fails() {
        let t: Vec<Vec<usize>> = (0..7)
            .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
            .collect();
        let t = DeltaComplex::from_facets(&t).unwrap();
        assert!(matches!(recognize_sphere(&suspension(&t)), SphereVerdict::NotSphere(_)));
    }

    #[test]
    fn bistellar_moves_preserve_sphere() {
        let x = octahedral(3);
        let mut w = Work::new(&x);
        let moves = w.moves();
        assert!(!moves.is_empty());
        let (a, b) = moves[0].clone();
        let before = w.facets.len();
        w.apply(&a, &b);
        assert_eq!(w.facets.len(), before + a.len() - b.len());
        let facets: Vec<Vec<usize>> = w.facets.iter().map(|f| f.iter().map(|&v| v as usize).collect()).collect();
        let y = DeltaComplex::from_facets(&facets).unwrap();
        assert!(recognize_sphere(&y).is_sphere());
    }
}
