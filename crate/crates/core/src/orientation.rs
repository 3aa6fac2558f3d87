//! Orientability conditions, fundamental classes and duality maps.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cap::{cap_product, relative_cap_product};
use crate::chain::ChainComplex;
use crate::complex::{CellRef, DeltaComplex, Subcomplex, VertexId};
use crate::error::{Error, Result};
use crate::homology::{
    cohomology, cyclic_coefficient_homology, homology, transfer, HomologyBasis, HomologyGroup, InducedMap, MapClass,
    SimplicialMap,
};
use crate::int::Int;
use crate::matrix::SparseVec;
use crate::ring::Ring;

/// A sign per top cell, relative to the stored vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationAssignment {
    pub signs: Vec<i8>,
}

impl OrientationAssignment {
    pub fn chain(&self) -> SparseVec<Int> {
        self.signs.iter().enumerate().map(|(i, &s)| (i, Int::from(s as i64))).collect()
    }
}

/// A closed path of top cells, consecutive ones sharing the listed ridge,
/// along which the propagated orientation comes back reversed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversingLoop {
    pub cells: Vec<usize>,
    pub ridges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coherence {
    Coherent(OrientationAssignment),
    Reversing(ReversingLoop),
}

impl Coherence {
    pub fn assignment(&self) -> Option<&OrientationAssignment> {
        match self {
            Coherence::Coherent(a) => Some(a),
            Coherence::Reversing(_) => None,
        }
    }
}

/// Propagates signs across ridges so that induced orientations cancel.
pub fn coherent_orientation(x: &DeltaComplex) -> Result<Coherence> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    x.require_pure()?;
    let m = x.cells(n).len();
    if n == 0 {
        return Ok(Coherence::Coherent(OrientationAssignment { signs: vec![1; m] }));
    }
    let cofaces = x.cofaces(n - 1);
    // adjacency: (neighbour, ridge, required sign ratio)
    let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); m];
    for (r, cf) in cofaces.iter().enumerate() {
        match cf.as_slice() {
            [] | [_] => {}
            [(a, j), (b, l)] => {
                let ratio = if (j + l) % 2 == 0 { -1 } else { 1 };
                if a == b {
                    if ratio == -1 {
                        return Ok(Coherence::Reversing(ReversingLoop {
                            cells: vec![*a, *a],
                            ridges: vec![r],
                        }));
                    }
                    continue;
                }
                adj[*a].push((*b, r, ratio));
                adj[*b].push((*a, r, ratio));
            }
            more => return Err(Error::Branching { cofaces: more.len() }),
        }
    }
    let mut signs = vec![0i8; m];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; m];
    for root in 0..m {
        if signs[root] != 0 {
            continue;
        }
        signs[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &(b, r, ratio) in &adj[a] {
                let want = signs[a] * ratio;
                if signs[b] == 0 {
                    signs[b] = want;
                    parent[b] = Some((a, r));
                    queue.push_back(b);
                } else if signs[b] != want {
                    return Ok(Coherence::Reversing(reversing_loop(&parent, a, b, r)));
                }
            }
        }
    }
    Ok(Coherence::Coherent(OrientationAssignment { signs }))
}

fn reversing_loop(parent: &[Option<(usize, usize)>], a: usize, b: usize, r: usize) -> ReversingLoop {
    let path = |mut c: usize| {
        let mut cells = vec![c];
        let mut ridges = Vec::new();
        while let Some((p, rr)) = parent[c] {
            ridges.push(rr);
            cells.push(p);
            c = p;
        }
        (cells, ridges)
    };
    let (ca, ra) = path(a);
    let (cb, rb) = path(b);
    // strip the common tail towards the root
    let mut i = ca.len();
    let mut j = cb.len();
    while i > 1 && j > 1 && ca[i - 2] == cb[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut cells: Vec<usize> = ca[..i].to_vec();
    let mut ridges: Vec<usize> = ra[..i - 1].to_vec();
    let mut back: Vec<usize> = cb[..j - 1].to_vec();
    back.reverse();
    let mut back_r: Vec<usize> = rb[..j - 1].to_vec();
    back_r.reverse();
    cells.extend(back);
    ridges.extend(back_r);
    ridges.push(r);
    cells.push(a);
    ReversingLoop { cells, ridges }
}

fn is_unit(ring: Ring, v: &Int) -> bool {
    match ring {
        Ring::Integers => v.is_unit(),
        Ring::Rationals => !v.is_zero(),
        Ring::PrimeField(p) => v.rem_euclid_u64(p) != 0,
    }
}

fn top_homology(x: &DeltaComplex, ring: Ring) -> HomologyGroup {
    homology(x, ring)
        .pop()
        .unwrap_or_else(|| HomologyGroup::zero(ring))
}

/// A generator of `H_n(X; R)` given by a signed sum of all top cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalClass {
    pub ring: Ring,
    pub chain: SparseVec<Int>,
    pub local_iso_vertices_checked: usize,
}

/// Builds `[X]_R` from a coherent orientation (all ones over `Z_2`) and checks
/// that it generates `H_n(X; R)` and maps to a generator of every `H_n(X|v; R)`.
pub fn fundamental_class(x: &DeltaComplex, ring: Ring) -> Result<FundamentalClass> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    if !x.is_connected() {
        return Err(Error::Precondition("complex is not connected".into()));
    }
    let chain = if ring.characteristic() == 2 {
        x.cells(n).iter().enumerate().map(|(i, _)| (i, Int::ONE)).collect()
    } else {
        match coherent_orientation(x)? {
            Coherence::Coherent(a) => a.chain(),
            Coherence::Reversing(_) => return Err(Error::NotOrientable(ring)),
        }
    };
    let whole = ChainComplex::of(x);
    let basis = HomologyBasis::homology(&whole, n, ring);
    if !basis.group.is_ring() {
        return Err(Error::NotOrientable(ring));
    }
    let coords = basis.coordinates(&chain).map_err(|_| Error::NotOrientable(ring))?;
    if !is_unit(ring, &coords[0]) {
        return Err(Error::Inconsistency(format!(
            "signed sum of top cells is {} times a generator",
            coords[0]
        )));
    }
    let mut checked = 0;
    for v in x.vertices() {
        let local = ChainComplex::local(x, v);
        let lb = HomologyBasis::homology(&local, n, ring);
        let img = transfer(&whole, &local, n, &chain);
        let c = lb.coordinates(&img)?;
        if !lb.group.is_ring() || !is_unit(ring, &c[0]) {
            return Err(Error::Inconsistency(format!(
                "fundamental class does not generate H_{n}(X|{}) = {}",
                x.label(v),
                lb.group
            )));
        }
        checked += 1;
    }
    Ok(FundamentalClass {
        ring,
        chain,
        local_iso_vertices_checked: checked,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub status: ConditionStatus,
    pub witness: String,
}

impl ConditionResult {
    fn of(pass: bool, witness: impl Into<String>) -> Self {
        ConditionResult {
            status: if pass { ConditionStatus::Pass } else { ConditionStatus::Fail },
            witness: witness.into(),
        }
    }
}

/// Outcomes of conditions (a) to (h) over one ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReport {
    pub ring: Ring,
    pub conditions: BTreeMap<char, ConditionResult>,
    pub orientable: bool,
    /// Whether (a), (b), (d), (e), (f), (g), (h) all agree.
    pub agree: bool,
    pub fundamental_class: Option<FundamentalClassSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalClassSummary {
    pub present: bool,
    pub local_iso_vertices_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientabilityReport {
    pub dimension: usize,
    pub has_boundary: bool,
    pub rings: Vec<RingReport>,
    pub notes: Vec<String>,
    pub falsifications: Vec<String>,
}

impl OrientabilityReport {
    pub fn ring(&self, ring: Ring) -> Option<&RingReport> {
        self.rings.iter().find(|r| r.ring == ring)
    }
}

pub const DEFAULT_RINGS: [Ring; 4] = [Ring::Integers, Ring::Rationals, Ring::PrimeField(2), Ring::PrimeField(3)];

/// Evaluates every condition over each ring and records disagreements.
/// The equivalence is only asserted for complexes without boundary.
pub fn orientability_report(x: &DeltaComplex, rings: &[Ring]) -> Result<OrientabilityReport> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    x.require_pure()?;
    if !x.is_connected() {
        return Err(Error::Precondition("complex is not connected".into()));
    }
    let coherence = coherent_orientation(x)?;
    let mut has_boundary = false;
    for v in x.vertices() {
        let lb = HomologyBasis::homology(&ChainComplex::local(x, v), n, Ring::Z2);
        has_boundary |= lb.group.is_zero();
    }
    let pts = LocalPoints::of(x);
    let mut rings_out = Vec::new();
    let mut falsifications = Vec::new();
    for &ring in rings {
        let r = ring_report(x, n, ring, &coherence, &pts)?;
        if !has_boundary && !r.agree {
            let summary: Vec<String> = r.conditions.iter().map(|(c, v)| format!("{c}={:?}", v.status)).collect();
            falsifications.push(format!("conditions disagree over {ring}: {}", summary.join(", ")));
        }
        rings_out.push(r);
    }
    let z = rings_out.iter().find(|r| r.ring == Ring::Integers).map(|r| r.orientable);
    for r in &rings_out {
        match r.ring.characteristic() {
            2 if !has_boundary && !r.orientable => {
                falsifications.push(format!("not {}-orientable", r.ring));
            }
            2 => {}
            _ => {
                if let Some(z) = z.filter(|&z| z != r.orientable && !has_boundary) {
                    falsifications.push(format!("Z-orientable = {z} but {}-orientable = {}", r.ring, r.orientable));
                }
            }
        }
    }
    Ok(OrientabilityReport {
        dimension: n,
        has_boundary,
        rings: rings_out,
        notes: vec![
            "(b) uses H^n(X|x) -> H^n(X), the compact specialization, at every cell barycenter".into(),
            "(c) is read off from (b)".into(),
        ],
        falsifications,
    })
}

fn ring_report(x: &DeltaComplex, n: usize, ring: Ring, coherence: &Coherence, pts: &LocalPoints) -> Result<RingReport> {
    let mut c = BTreeMap::new();
    let a = if ring.characteristic() == 2 {
        ConditionResult::of(true, "every manifold is orientable mod 2")
    } else {
        match coherence {
            Coherence::Coherent(_) => ConditionResult::of(true, "coherent orientation of the top cells"),
            Coherence::Reversing(l) => {
                ConditionResult::of(false, format!("orientation-reversing loop through top cells {:?}", l.cells))
            }
        }
    };
    c.insert('a', a);
    let whole = ChainComplex::of(x);
    let h = top_homology(x, ring);
    let co = cohomology(x, None, ring)?;
    let hco = co[n].clone();
    let b = condition_b(x, n, ring, &whole, pts)?;
    c.insert('b', b.clone());
    c.insert(
        'c',
        ConditionResult {
            status: b.status,
            witness: "same local-to-global cohomology maps as (b)".into(),
        },
    );
    c.insert('d', condition_d(x, n, ring, pts)?);
    c.insert('e', ConditionResult::of(h.is_ring(), format!("H_{n} = {h}")));
    c.insert('f', ConditionResult::of(!h.is_zero(), format!("H_{n} = {h}")));
    c.insert('g', ConditionResult::of(hco.is_ring(), format!("H^{n} = {hco}")));
    c.insert('h', ConditionResult::of(hco.rank > 0, format!("rank H^{n} = {}", hco.rank)));
    let verdicts: Vec<bool> = ['a', 'b', 'd', 'e', 'f', 'g', 'h']
        .iter()
        .map(|k| c[k].status == ConditionStatus::Pass)
        .collect();
    let agree = verdicts.iter().all(|&v| v == verdicts[0]);
    let orientable = c[&'e'].status == ConditionStatus::Pass;
    let fundamental = if orientable {
        match fundamental_class(x, ring) {
            Ok(f) => Some(FundamentalClassSummary {
                present: true,
                local_iso_vertices_checked: f.local_iso_vertices_checked,
            }),
            Err(Error::NotOrientable(_)) => Some(FundamentalClassSummary {
                present: false,
                local_iso_vertices_checked: 0,
            }),
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(RingReport {
        ring,
        conditions: c,
        orientable,
        agree,
        fundamental_class: fundamental,
    })
}

/// Local pairs `(X, X ∖ x)` for `x` the barycenter of each cell, as the cells
/// of the open star. Every point of `X` has the local homology of one of these.
pub struct LocalPoints {
    pub cells: Vec<CellRef>,
    pub open_stars: Vec<HashSet<CellRef>>,
}

impl LocalPoints {
    pub fn of(x: &DeltaComplex) -> LocalPoints {
        let mut index: HashMap<CellRef, usize> = HashMap::new();
        let mut cells = Vec::new();
        for k in 0..x.f_vector().len() {
            for i in 0..x.cells(k).len() {
                index.insert((k, i), cells.len());
                cells.push((k, i));
            }
        }
        let mut open_stars = vec![HashSet::new(); cells.len()];
        for r in x.maximal_cells() {
            let full = (1u64 << (r.0 + 1)) - 1;
            for mask in 1..=full {
                let tau = x.face_by_mask(r, mask);
                let mut sub = mask;
                while sub > 0 {
                    let rho = x.face_by_mask(r, sub);
                    open_stars[index[&rho]].insert(tau);
                    sub = (sub - 1) & mask;
                }
            }
        }
        LocalPoints { cells, open_stars }
    }

    fn chains(&self, x: &DeltaComplex, p: usize) -> ChainComplex {
        ChainComplex::restricted(x, |r| self.open_stars[p].contains(&r))
    }
}

fn describe(x: &DeltaComplex, r: CellRef) -> String {
    let vs: Vec<String> = x.cell(r).vertices.iter().map(|&v| x.label(v)).collect();
    format!("[{}]", vs.join(","))
}

/// `H^n(X|x; R) → H^n(X; R)` is an isomorphism at every point.
fn condition_b(x: &DeltaComplex, n: usize, ring: Ring, whole: &ChainComplex, pts: &LocalPoints) -> Result<ConditionResult> {
    let target = HomologyBasis::cohomology(whole, n, ring);
    for (p, &cell) in pts.cells.iter().enumerate() {
        let local = pts.chains(x, p);
        let source = HomologyBasis::cohomology(&local, n, ring);
        let images: Vec<SparseVec<Int>> = source
            .generators
            .iter()
            .map(|g| transfer(&local, whole, n, &g.chain))
            .collect();
        let m = InducedMap::from_images(&source, &target, &images)?;
        if m.classification != MapClass::Iso || source.group.is_zero() {
            return Ok(ConditionResult::of(
                false,
                format!(
                    "at the barycenter of {}: H^{n}(X|x) = {} -> H^{n}(X) = {} is {}",
                    describe(x, cell),
                    m.source,
                    m.target,
                    m.classification
                ),
            ));
        }
    }
    Ok(ConditionResult::of(true, "local-to-global map is an isomorphism at every point"))
}

/// A compatible choice of local generators `o_x ∈ H_n(X|x; R)`, one per cell
/// barycenter, propagated from each cell to its facets and compared on shared top cells.
fn condition_d(x: &DeltaComplex, n: usize, ring: Ring, pts: &LocalPoints) -> Result<ConditionResult> {
    let mut local: Vec<BTreeMap<usize, Int>> = Vec::with_capacity(pts.cells.len());
    for (p, &cell) in pts.cells.iter().enumerate() {
        let lc = pts.chains(x, p);
        let lb = HomologyBasis::homology(&lc, n, ring);
        if !lb.group.is_ring() {
            return Ok(ConditionResult::of(
                false,
                format!("H_{n}(X|x) = {} has no generator at the barycenter of {}", lb.group, describe(x, cell)),
            ));
        }
        local.push(normalize(ring, lb.generators[0].chain.iter().map(|(i, c)| (lc.basis[n][*i].1, c.clone()))));
    }
    let index: HashMap<CellRef, usize> = pts.cells.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); pts.cells.len()];
    for (p, &(k, i)) in pts.cells.iter().enumerate() {
        if k == 0 {
            continue;
        }
        for &f in &x.cells(k)[i].faces {
            let q = index[&(k - 1, f)];
            adj[p].push(q);
            adj[q].push(p);
        }
    }
    let mut scale: Vec<Option<Int>> = vec![None; pts.cells.len()];
    for root in 0..pts.cells.len() {
        if scale[root].is_some() {
            continue;
        }
        scale[root] = Some(Int::ONE);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let su = scale[u].clone().unwrap();
            for &v in &adj[u] {
                let (cu, cv) = (&local[u], &local[v]);
                let shared: Vec<usize> = cu.keys().filter(|k| cv.contains_key(k)).copied().collect();
                let Some(&first) = shared.first() else { continue };
                let want = ratio(ring, &(&su * &cu[&first]), &cv[&first]);
                let clash = shared.iter().any(|s| mul(ring, &want, &cv[s]) != mul(ring, &su, &cu[s]));
                let inconsistent = scale[v].as_ref().is_some_and(|w| *w != want);
                if clash || inconsistent {
                    return Ok(ConditionResult::of(
                        false,
                        format!(
                            "local generators at {} and {} cannot be matched",
                            describe(x, pts.cells[u]),
                            describe(x, pts.cells[v])
                        ),
                    ));
                }
                if scale[v].is_none() {
                    scale[v] = Some(want);
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(ConditionResult::of(true, "compatible local generators at every point"))
}

fn normalize(ring: Ring, it: impl Iterator<Item = (usize, Int)>) -> BTreeMap<usize, Int> {
    let mut m: BTreeMap<usize, Int> = match ring {
        Ring::PrimeField(p) => it
            .map(|(i, c)| (i, Int::from(c.rem_euclid_u64(p) as i64)))
            .filter(|e| !e.1.is_zero())
            .collect(),
        _ => it.filter(|e| !e.1.is_zero()).collect(),
    };
    if !matches!(ring, Ring::PrimeField(_)) {
        let g = m.values().fold(Int::ZERO, |g, c| g.gcd(c));
        if !g.is_zero() {
            for c in m.values_mut() {
                *c = c.div_mod_floor(&g).0;
            }
        }
    }
    m
}

fn mul(ring: Ring, a: &Int, b: &Int) -> Int {
    match ring {
        Ring::PrimeField(p) => Int::from((a * b).rem_euclid_u64(p) as i64),
        _ => a * b,
    }
}

/// `a / b` in the unit group: `±1` for `Z` and `Q` (primitive vectors), `F_p^×` otherwise.
fn ratio(ring: Ring, a: &Int, b: &Int) -> Int {
    match ring {
        Ring::PrimeField(p) => {
            let inv = Int::from(mod_inverse(b.rem_euclid_u64(p), p) as i64);
            mul(ring, a, &inv)
        }
        _ => Int::from((a.signum() * b.signum()) as i64),
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r, mut e, mut b) = (1u64, p - 2, a % p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityRow {
    pub k: usize,
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    pub classification: MapClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityTable {
    pub ring: Ring,
    pub relative: bool,
    pub rows: Vec<DualityRow>,
}

impl DualityTable {
    pub fn at(&self, k: usize) -> Option<MapClass> {
        self.rows.iter().find(|r| r.k == k).map(|r| r.classification)
    }
}

fn orientation_chain(x: &DeltaComplex, n: usize, field: Ring) -> Result<SparseVec<Int>> {
    if field.characteristic() == 2 {
        return Ok(x.cells(n).iter().enumerate().map(|(i, _)| (i, Int::ONE)).collect());
    }
    match coherent_orientation(x)? {
        Coherence::Coherent(a) => Ok(a.chain()),
        Coherence::Reversing(_) => Err(Error::NotOrientable(field)),
    }
}

/// `D = [X] ⌢ − : H^k(X) → H_{n-k}(X)` for every `k`.
pub fn duality_table(x: &DeltaComplex, field: Ring) -> Result<DualityTable> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    let z = orientation_chain(x, n, field)?;
    let mut rows = Vec::new();
    for k in 0..=n {
        let m = cap_product(x, &z, k, field).map_err(|e| match e {
            Error::NotACycle => Error::NotOrientable(field),
            e => e,
        })?;
        rows.push(DualityRow {
            k,
            source: m.source,
            target: m.target,
            classification: m.classification,
        });
    }
    Ok(DualityTable {
        ring: field,
        relative: false,
        rows,
    })
}

/// `[X, ∂X] ⌢ − : H^k(X, ∂X) → H_{n-k}(X)` for every `k`.
pub fn lefschetz_table(x: &DeltaComplex, boundary: &Subcomplex, field: Ring) -> Result<DualityTable> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    let z = orientation_chain(x, n, field)?;
    let mut rows = Vec::new();
    for k in 0..=n {
        let m = relative_cap_product(x, Some(boundary), &z, k, field)?;
        rows.push(DualityRow {
            k,
            source: m.source,
            target: m.target,
            classification: m.classification,
        });
    }
    Ok(DualityTable {
        ring: field,
        relative: true,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonOrientableProfile {
    pub checks: Vec<ProfileCheck>,
    pub ok: bool,
}

fn orders(v: &[u64]) -> String {
    if v.is_empty() {
        "0".into()
    } else {
        v.iter().map(|o| format!("Z{o}")).collect::<Vec<_>>().join("+")
    }
}

/// `H_n(X; G) ≅ {g : 2g = 0}`, `tors H_{n-1}(X; Z) ≅ Z_2` and `H^n(X; G) ≅ G/2G`
/// for `G` among `Z`, `Z_2`, `Z_3`, `Z_4`.
pub fn check_nonorientable_profile(x: &DeltaComplex) -> Result<NonOrientableProfile> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    if n == 0 || !x.is_connected() {
        return Err(Error::Precondition("needs a connected complex of positive dimension".into()));
    }
    if coherent_orientation(x)?.assignment().is_some() {
        return Err(Error::Precondition("complex is orientable".into()));
    }
    let hz = homology(x, Ring::Z);
    let co = cohomology(x, None, Ring::Z)?;
    let mut checks = Vec::new();
    let mut push = |name: String, expected: String, actual: String| {
        let ok = expected == actual;
        checks.push(ProfileCheck {
            name,
            expected,
            actual,
            ok,
        });
    };
    push(format!("H_{n}(Z)"), "0".into(), hz[n].to_string());
    for m in [2u64, 3, 4] {
        let two_torsion = if m % 2 == 0 { vec![2] } else { vec![] };
        push(
            format!("H_{n}(Z{m})"),
            orders(&two_torsion),
            orders(&cyclic_coefficient_homology(&hz, n, m)),
        );
        push(
            format!("H^{n}(Z{m})"),
            orders(&two_torsion),
            orders(&cyclic_coefficient_cohomology(&hz, n, m)),
        );
    }
    let field = |p: u64| top_homology(x, Ring::PrimeField(p)).rank;
    push(format!("dim H_{n}(F2)"), "1".into(), field(2).to_string());
    push(format!("dim H_{n}(F3)"), "0".into(), field(3).to_string());
    push(format!("tors H_{}(Z)", n - 1), "[2]".into(), format!("{:?}", hz[n - 1].torsion_i64()));
    push(format!("H^{n}(Z)"), HomologyGroup::z(0, &[2]).to_string(), co[n].to_string());
    let ok = checks.iter().all(|c| c.ok);
    Ok(NonOrientableProfile { checks, ok })
}

/// Invariant factors of `H^k(−; Z/m)`: `Hom(H_k, Z/m) ⊕ Ext(H_{k-1}, Z/m)`, which
/// agrees factor by factor with the homology formula.
pub fn cyclic_coefficient_cohomology(hz: &[HomologyGroup], k: usize, m: u64) -> Vec<u64> {
    cyclic_coefficient_homology(hz, k, m)
}

/// Whether a simplicial automorphism carries `[X]` to itself rather than `−[X]`.
pub fn orientation_preserving(x: &DeltaComplex, permutation: &[usize]) -> Result<bool> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    if !x.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let z = match coherent_orientation(x)? {
        Coherence::Coherent(a) => a.chain(),
        Coherence::Reversing(_) => return Err(Error::NotOrientable(Ring::Z)),
    };
    let f = SimplicialMap::new(x, x, permutation.iter().map(|&v| VertexId(v)).collect())?;
    let img = f.chain_image(n, &z);
    if img == z {
        return Ok(true);
    }
    let neg: SparseVec<Int> = z.iter().map(|(i, c)| (*i, -c)).collect();
    if img == neg {
        return Ok(false);
    }
    Err(Error::Inconsistency(
        "image of the fundamental class is neither +[X] nor -[X]; is X connected?".into(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingEntry {
    pub vertex: VertexId,
    pub label: String,
    pub ring: Ring,
    pub group: HomologyGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub dimension: usize,
    pub entries: Vec<VanishingEntry>,
    pub ok: bool,
}

/// `H_n` of each deleted star, the compact model of `X ∖ {v}`.
pub fn vanishing_check(x: &DeltaComplex, rings: &[Ring]) -> Result<VanishingReport> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    let mut entries = Vec::new();
    for v in x.vertices() {
        let sub = x.deleted_star_subcomplex(v)?;
        let c = ChainComplex::restricted(x, |r| sub.contains(r));
        for &ring in rings {
            let group = HomologyBasis::homology(&c, n, ring).group;
            entries.push(VanishingEntry {
                vertex: v,
                label: x.label(v),
                ring,
                group,
            });
        }
    }
    let ok = entries.iter().all(|e| e.group.is_zero());
    Ok(VanishingReport {
        dimension: n,
        entries,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{closed_cone, suspension};
    use crate::corpus::*;

    /// Brute force over all sign vectors.
    fn exhaustive_orientable(x: &DeltaComplex) -> bool {
        let n = x.dim();
        let m = x.cells(n).len();
        let cof = x.cofaces(n - 1);
        (0u64..1 << m).any(|mask| {
            let s = |i: usize| if mask >> i & 1 == 1 { 1 } else { -1 };
            cof.iter().all(|c| match c.as_slice() {
                [(a, j), (b, l)] => {
                    let sj = if j % 2 == 0 { 1 } else { -1 };
                    let sl = if l % 2 == 0 { 1 } else { -1 };
                    s(*a) * sj + s(*b) * sl == 0
                }
                _ => true,
            })
        })
    }

    #[test]
    fn coherent_small() {
        let s = sphere(2);
        assert!(coherent_orientation(&s).unwrap().assignment().is_some());
        assert!(exhaustive_orientable(&s));
        let rp = rp2_6();
        let Coherence::Reversing(l) = coherent_orientation(&rp).unwrap() else {
            panic!("RP2 orientable")
        };
        assert!(!exhaustive_orientable(&rp));
        assert_eq!(l.cells.first(), l.cells.last());
        assert_eq!(l.ridges.len() + 1, l.cells.len());
        let cof = rp.cofaces(1);
        for (w, r) in l.cells.windows(2).zip(&l.ridges) {
            let cells: Vec<usize> = cof[*r].iter().map(|c| c.0).collect();
            assert!(cells.contains(&w[0]) && cells.contains(&w[1]));
        }
    }

    #[test]
    fn fundamental_classes() {
        let f = fundamental_class(&sphere(2), Ring::Z).unwrap();
        assert_eq!(f.chain.len(), 4);
        assert!(f.chain.iter().all(|(_, c)| c.is_unit()));
        let g = fundamental_class(&rp2_6(), Ring::Z2).unwrap();
        assert_eq!(g.chain.len(), 10);
        assert_eq!(fundamental_class(&rp2_6(), Ring::Z), Err(Error::NotOrientable(Ring::Z)));
    }

    #[test]
    fn report_on_suspensions() {
        let r = orientability_report(&suspension(&t2_7()), &DEFAULT_RINGS).unwrap();
        assert!(r.falsifications.is_empty(), "{:?}", r.falsifications);
        assert!(r.rings.iter().all(|x| x.orientable));
        let w = orientability_report(&suspension(&rp2_6()), &DEFAULT_RINGS).unwrap();
        assert!(w.falsifications.is_empty(), "{:?}", w.falsifications);
        for rr in &w.rings {
            let expect = rr.ring == Ring::Z2;
            assert!(rr.conditions.values().all(|c| (c.status == ConditionStatus::Pass) == expect), "{rr:?}");
        }
    }

    #[test]
    fn klein_bottle() {
        let k = klein_8();
        let r = orientability_report(&k, &[Ring::Z]).unwrap();
        assert_eq!(r.rings[0].conditions[&'a'].status, ConditionStatus::Fail);
        assert_eq!(r.rings[0].conditions[&'f'].status, ConditionStatus::Fail);
        let p = check_nonorientable_profile(&k).unwrap();
        assert!(p.ok, "{p:?}");
    }

    #[test]
    fn nonorientable_profiles() {
        for x in [rp2_6(), suspension(&rp2_6())] {
            let p = check_nonorientable_profile(&x).unwrap();
            assert!(p.ok, "{p:?}");
        }
    }

    #[test]
    fn duality_on_spheres_and_suspensions() {
        let d = duality_table(&sphere(4), Ring::Q).unwrap();
        assert!(d.rows.iter().all(|r| r.classification == MapClass::Iso));
        let t = duality_table(&suspension(&t2_7()), Ring::Q).unwrap();
        assert_eq!(t.at(3), Some(MapClass::Iso));
        assert_eq!(t.at(2), Some(MapClass::Zero));
    }

    #[test]
    fn automorphism_degrees() {
        let s3 = cross_polytope_sphere(3);
        let anti = cross_polytope_antipode(3);
        assert!(orientation_preserving(&s3, &anti).unwrap());
        let (ico, a) = icosahedron();
        assert!(!orientation_preserving(&ico, &a).unwrap());
        let id: Vec<usize> = (0..ico.n_vertices()).collect();
        assert!(orientation_preserving(&ico, &id).unwrap());
    }

    #[test]
    fn vanishing() {
        for x in [sphere(2), t2_7(), suspension(&rp3())] {
            let v = vanishing_check(&x, &DEFAULT_RINGS).unwrap();
            assert!(v.ok);
        }
    }

    #[test]
    fn lefschetz_on_cone() {
        let (c, base) = closed_cone(&t2_7());
        let t = lefschetz_table(&c, &base, Ring::Q).unwrap();
        assert_eq!(t.at(3), Some(MapClass::Iso));
    }
}
