//! Homology and cohomology groups, adapted bases and induced maps.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::ChainComplex;
use crate::complex::{CellRef, DeltaComplex, Subcomplex, VertexId};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::matrix::{dot, IntMatrix, SparseVec};
use crate::ring::{Domain, Fp, Ring, Zz};
use crate::snf::{row_times, smith, smith_rows, Track};

/// A finitely generated module `R^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_m` with `d_1 | … | d_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<Int>,
    pub ring: Ring,
}

impl HomologyGroup {
    pub fn zero(ring: Ring) -> HomologyGroup {
        HomologyGroup {
            rank: 0,
            torsion: Vec::new(),
            ring,
        }
    }

    pub fn free(ring: Ring, rank: usize) -> HomologyGroup {
        HomologyGroup {
            rank,
            torsion: Vec::new(),
            ring,
        }
    }

    /// Integer group with the given torsion, e.g. `HomologyGroup::z(1, &[2])` is `Z ⊕ Z/2`.
    pub fn z(rank: usize, torsion: &[i64]) -> HomologyGroup {
        HomologyGroup {
            rank,
            torsion: torsion.iter().map(|&t| Int::from(t)).collect(),
            ring: Ring::Integers,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// `≅ R` as an `R`-module.
    pub fn is_ring(&self) -> bool {
        self.rank == 1 && self.torsion.is_empty()
    }

    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion.iter().map(|t| t.to_i64().unwrap_or(i64::MAX)).collect()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push(self.ring.to_string()),
            r => parts.push(format!("{}^{r}", self.ring)),
        }
        for t in &self.torsion {
            parts.push(format!("Z{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Per-matrix data needed for group computations: rank and non-unit
/// invariant factors (integers only).
struct MatrixData {
    rank: usize,
    factors: Vec<Int>,
}

fn matrix_data(m: &IntMatrix, ring: Ring) -> MatrixData {
    match ring {
        Ring::Integers | Ring::Rationals => {
            let diag = smith(&Zz, m, Track::NONE).diagonal();
            MatrixData {
                rank: diag.len(),
                factors: diag.into_iter().filter(|d| !d.is_unit()).collect(),
            }
        }
        Ring::PrimeField(p) => MatrixData {
            rank: smith(&Fp::new(p), m, Track::NONE).rank(),
            factors: Vec::new(),
        },
    }
}

fn group(ring: Ring, rank: usize, factors: Vec<Int>) -> HomologyGroup {
    HomologyGroup {
        rank,
        torsion: if ring == Ring::Integers { factors } else { Vec::new() },
        ring,
    }
}

/// Homology of a chain complex in degrees `0..len` (and degree -1 first when augmented).
pub fn chain_homology(c: &ChainComplex, ring: Ring) -> Vec<HomologyGroup> {
    let n = c.len();
    let data: Vec<MatrixData> = (0..=n).map(|k| matrix_data(&c.d(k), ring)).collect();
    let mut out = Vec::with_capacity(n + 1);
    if c.augmented {
        // C_{-1} is one copy of the ring, ∂_0 the augmentation
        out.push(group(ring, 1 - data[0].rank, Vec::new()));
    }
    for k in 0..n {
        let rank = c.rank(k) - data[k].rank - data[k + 1].rank;
        out.push(group(ring, rank, data[k + 1].factors.clone()));
    }
    out
}

/// Cohomology of a chain complex, as homology of the dual complex.
pub fn chain_cohomology(c: &ChainComplex, ring: Ring) -> Vec<HomologyGroup> {
    let n = c.len();
    let data: Vec<MatrixData> = (0..=n)
        .map(|k| matrix_data(&c.d(k).transpose(), ring))
        .collect();
    (0..n)
        .map(|k| {
            let rank = c.rank(k) - data[k + 1].rank - if k == 0 && !c.augmented { 0 } else { data[k].rank };
            let factors = if k == 0 && !c.augmented { Vec::new() } else { data[k].factors.clone() };
            group(ring, rank, factors)
        })
        .collect()
}

/// `H_k(X; R)` for `k = 0..=dim X`.
pub fn homology(x: &DeltaComplex, ring: Ring) -> Vec<HomologyGroup> {
    chain_homology(&ChainComplex::of(x), ring)
}

fn check_mask(x: &DeltaComplex, a: &Subcomplex) -> Result<()> {
    let m = a.mask();
    let shape_ok = (0..m.len().max(x.f_vector().len()))
        .all(|k| m.get(k).map_or(0, |l| l.len()) == x.cells(k).len());
    if shape_ok {
        Ok(())
    } else {
        Err(Error::NotSubcomplex("subcomplex belongs to a different complex".into()))
    }
}

/// `H_k(X, A; R)`.
pub fn relative_homology(x: &DeltaComplex, a: &Subcomplex, ring: Ring) -> Result<Vec<HomologyGroup>> {
    check_mask(x, a)?;
    Ok(chain_homology(&ChainComplex::relative(x, a), ring))
}

/// Reduced homology, indexed from degree -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedHomology(pub Vec<HomologyGroup>);

impl ReducedHomology {
    /// `H̃_k`, zero outside the computed range.
    pub fn degree(&self, k: isize) -> HomologyGroup {
        let ring = self.0[0].ring;
        usize::try_from(k + 1)
            .ok()
            .and_then(|i| self.0.get(i).cloned())
            .unwrap_or_else(|| HomologyGroup::zero(ring))
    }
}

pub fn reduced_homology(x: &DeltaComplex, ring: Ring) -> ReducedHomology {
    if x.is_empty() {
        return ReducedHomology(vec![HomologyGroup::free(ring, 1)]);
    }
    ReducedHomology(chain_homology(&ChainComplex::reduced(x), ring))
}

/// `H_k(X | v; R) = H_k(X, X ∖ v; R)` for `k = 0..=dim X`, cross-checked against
/// the reduced homology of the link shifted by one degree.
pub fn local_homology(x: &DeltaComplex, v: VertexId, ring: Ring) -> Result<Vec<HomologyGroup>> {
    x.check_vertex(v)?;
    let local = chain_homology(&ChainComplex::local(x, v), ring);
    let link = x.link(v)?;
    let red = reduced_homology(&link, ring);
    for (k, g) in local.iter().enumerate() {
        let expect = red.degree(k as isize - 1);
        if *g != expect {
            return Err(Error::Inconsistency(format!(
                "local homology at {v} in degree {k} is {g} but the link gives {expect}"
            )));
        }
    }
    Ok(local)
}

/// `H^k(X, A; R)`, cross-checked with the universal coefficient theorem.
pub fn cohomology(x: &DeltaComplex, a: Option<&Subcomplex>, ring: Ring) -> Result<Vec<HomologyGroup>> {
    let c = match a {
        Some(a) => {
            check_mask(x, a)?;
            ChainComplex::relative(x, a)
        }
        None => ChainComplex::of(x),
    };
    let co = chain_cohomology(&c, ring);
    let hz = chain_homology(&c, Ring::Integers);
    for (k, g) in co.iter().enumerate() {
        let expect = uct_cohomology(&hz, k, ring);
        if *g != expect {
            return Err(Error::Inconsistency(format!(
                "H^{k} over {ring} is {g}, universal coefficients give {expect}"
            )));
        }
    }
    Ok(co)
}

fn count_divisible(t: &[Int], p: u64) -> usize {
    t.iter().filter(|d| d.rem_euclid_u64(p) == 0).count()
}

/// `H^k(−; R)` from integral homology.
pub fn uct_cohomology(hz: &[HomologyGroup], k: usize, ring: Ring) -> HomologyGroup {
    let prev: &[Int] = if k == 0 { &[] } else { &hz[k - 1].torsion };
    match ring {
        Ring::Integers => HomologyGroup {
            rank: hz[k].rank,
            torsion: prev.to_vec(),
            ring,
        },
        Ring::Rationals => HomologyGroup::free(ring, hz[k].rank),
        Ring::PrimeField(p) => HomologyGroup::free(
            ring,
            hz[k].rank + count_divisible(&hz[k].torsion, p) + count_divisible(prev, p),
        ),
    }
}

/// `H_k(−; R)` from integral homology.
pub fn uct_homology(hz: &[HomologyGroup], k: usize, ring: Ring) -> HomologyGroup {
    match ring {
        Ring::Integers => hz[k].clone(),
        Ring::Rationals => HomologyGroup::free(ring, hz[k].rank),
        Ring::PrimeField(p) => {
            let prev = if k == 0 { 0 } else { count_divisible(&hz[k - 1].torsion, p) };
            HomologyGroup::free(ring, hz[k].rank + count_divisible(&hz[k].torsion, p) + prev)
        }
    }
}

/// Invariant factors of `H_k(−; Z/m)` computed from integral homology:
/// `H_k ⊗ Z/m ⊕ Tor(H_{k-1}, Z/m)`.
pub fn cyclic_coefficient_homology(hz: &[HomologyGroup], k: usize, m: u64) -> Vec<u64> {
    let mut parts: Vec<u64> = Vec::new();
    parts.extend(std::iter::repeat_n(m, hz[k].rank));
    let gcd = |a: u64, b: u64| {
        let (mut a, mut b) = (a, b);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    for t in &hz[k].torsion {
        parts.push(gcd(t.rem_euclid_u64(m), m));
    }
    if k > 0 {
        for t in &hz[k - 1].torsion {
            parts.push(gcd(t.rem_euclid_u64(m), m));
        }
    }
    invariant_form(parts)
}

/// Rewrites a product of cyclic groups in invariant-factor form (trivial factors dropped).
pub fn invariant_form(orders: Vec<u64>) -> Vec<u64> {
    // split into prime powers, then regroup
    let mut prime_powers: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for mut n in orders.into_iter().filter(|&n| n > 1) {
        let mut p = 2;
        while n > 1 {
            if p * p > n {
                prime_powers.entry(n).or_default().push(n);
                break;
            }
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            if q > 1 {
                prime_powers.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let longest = prime_powers.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; longest];
    for v in prime_powers.values_mut() {
        v.sort_unstable();
        let off = longest - v.len();
        for (i, q) in v.iter().enumerate() {
            out[off + i] *= q;
        }
    }
    out
}

/// A generator of a homology module: a cycle and its order (`None` when free).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub chain: SparseVec<Int>,
    pub order: Option<Int>,
}

/// Adapted basis of `H_k` of a chain complex: explicit generating cycles plus
/// the data to express any cycle in them.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub ring: Ring,
    pub degree: usize,
    pub group: HomologyGroup,
    pub generators: Vec<Generator>,
    /// The outgoing differential; a chain is a cycle iff it maps to zero.
    outgoing: IntMatrix,
    /// Rows of `V⁻¹` spanning coordinates on the cycle lattice.
    kernel_coords: Vec<SparseVec<Int>>,
    /// Rows of the second left transform selecting each generator.
    generator_rows: Vec<SparseVec<Int>>,
}

impl HomologyBasis {
    /// Basis of `H_k` of the chain complex.
    pub fn homology(c: &ChainComplex, k: usize, ring: Ring) -> HomologyBasis {
        basis(c.d(k), c.d(k + 1), k, ring)
    }

    /// Basis of `H^k`, with cocycles written in the dual cell basis.
    pub fn cohomology(c: &ChainComplex, k: usize, ring: Ring) -> HomologyBasis {
        let outgoing = c.d(k + 1).transpose();
        let incoming = if k == 0 {
            IntMatrix::zeros(c.rank(0), if c.augmented { 1 } else { 0 })
        } else {
            c.d(k).transpose()
        };
        basis(outgoing, incoming, k, ring)
    }

    pub fn reduce(&self, v: Int) -> Int {
        match self.ring {
            Ring::PrimeField(p) => Int::from(v.rem_euclid_u64(p) as i64),
            _ => v,
        }
    }

    pub fn is_cycle(&self, z: &SparseVec<Int>) -> bool {
        let img = self.outgoing.mul_sparse(&Zz, z);
        img.iter().all(|(_, v)| self.reduce(v.clone()).is_zero())
    }

    /// Coordinates of the class of a cycle; torsion coordinates are reduced
    /// modulo their order, prime-field coordinates modulo `p`.
    pub fn coordinates(&self, z: &SparseVec<Int>) -> Result<Vec<Int>> {
        if !self.is_cycle(z) {
            return Err(Error::NotACycle);
        }
        let y: SparseVec<Int> = self
            .kernel_coords
            .iter()
            .enumerate()
            .map(|(t, row)| (t, self.reduce(dot(&Zz, row, z))))
            .filter(|e| !e.1.is_zero())
            .collect();
        Ok(self
            .generator_rows
            .iter()
            .zip(&self.generators)
            .map(|(row, g)| {
                let c = self.reduce(dot(&Zz, row, &y));
                match &g.order {
                    Some(o) => c.div_mod_floor(o).1,
                    None => c,
                }
            })
            .collect())
    }
}

fn basis(a: IntMatrix, b: IntMatrix, k: usize, ring: Ring) -> HomologyBasis {
    match ring {
        Ring::Integers | Ring::Rationals => basis_generic(&Zz, a, b, k, ring),
        Ring::PrimeField(p) => basis_generic(&Fp::new(p), a, b, k, ring),
    }
}

fn to_int_vec<D: Domain>(d: &D, v: &SparseVec<D::Elem>) -> SparseVec<Int> {
    v.iter().map(|(i, e)| (*i, d.to_int(e))).collect()
}

fn basis_generic<D: Domain>(d: &D, a: IntMatrix, b: IntMatrix, k: usize, ring: Ring) -> HomologyBasis {
    let fa = smith(d, &a, Track::RIGHT);
    let kernel_cols = fa.free_cols();
    let v = fa.v.as_ref().expect("tracked");
    let v_inv = fa.v_inv.as_ref().expect("tracked");
    let b_rows = b.to_rows(d);
    let bp: Vec<SparseVec<D::Elem>> = kernel_cols
        .iter()
        .map(|&c| row_times(d, &v_inv[c], &b_rows))
        .collect();
    let fb = smith_rows(d, kernel_cols.len(), b.cols(), bp, Track::LEFT);
    let u2 = fb.u.as_ref().expect("tracked");
    let u2_inv = fb.u_inv.as_ref().expect("tracked");
    let mut rows: Vec<(usize, Option<Int>)> = Vec::new();
    if ring == Ring::Integers {
        for (r, _, dv) in &fb.pivots {
            if !d.is_unit(dv) {
                rows.push((*r, Some(d.to_int(dv))));
            }
        }
    }
    for r in fb.free_rows() {
        rows.push((r, None));
    }
    let mut generators = Vec::with_capacity(rows.len());
    let mut generator_rows = Vec::with_capacity(rows.len());
    for (r, order) in &rows {
        let mut chain: SparseVec<D::Elem> = Vec::new();
        for (t, coef) in &u2_inv[*r] {
            crate::matrix::axpy(d, &mut chain, coef, &v[kernel_cols[*t]]);
        }
        generators.push(Generator {
            chain: to_int_vec(d, &chain),
            order: order.clone(),
        });
        generator_rows.push(to_int_vec(d, &u2[*r]));
    }
    let torsion: Vec<Int> = rows.iter().filter_map(|r| r.1.clone()).collect();
    let rank = rows.len() - torsion.len();
    HomologyBasis {
        ring,
        degree: k,
        group: HomologyGroup {
            rank,
            torsion,
            ring,
        },
        generators,
        outgoing: a,
        kernel_coords: kernel_cols.iter().map(|&c| to_int_vec(d, &v_inv[c])).collect(),
        generator_rows,
    }
}

/// Classification of a homomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapClass {
    Iso,
    Mono,
    Epi,
    Zero,
    Other,
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapClass::Iso => "iso",
            MapClass::Mono => "mono",
            MapClass::Epi => "epi",
            MapClass::Zero => "zero",
            MapClass::Other => "other",
        };
        write!(f, "{s}")
    }
}

/// A homomorphism between homology modules in adapted bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedMap {
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    /// `matrix[i][j]`: coordinate `i` of the image of source generator `j`.
    pub matrix: Vec<Vec<Int>>,
    pub classification: MapClass,
    pub injective: bool,
    pub surjective: bool,
}

impl InducedMap {
    /// Builds the map from the images of the source generators.
    pub fn from_images(source: &HomologyBasis, target: &HomologyBasis, images: &[SparseVec<Int>]) -> Result<InducedMap> {
        let mut matrix = vec![vec![Int::ZERO; source.generators.len()]; target.generators.len()];
        for (j, img) in images.iter().enumerate() {
            let c = target.coordinates(img)?;
            for (i, v) in c.into_iter().enumerate() {
                matrix[i][j] = v;
            }
        }
        let src_orders: Vec<Option<Int>> = source.generators.iter().map(|g| g.order.clone()).collect();
        let tgt_orders: Vec<Option<Int>> = target.generators.iter().map(|g| g.order.clone()).collect();
        let (injective, surjective) = classify(&matrix, &src_orders, &tgt_orders, source.ring);
        let zero = matrix.iter().all(|r| r.iter().all(|v| v.is_zero()));
        Ok(InducedMap {
            source: source.group.clone(),
            target: target.group.clone(),
            classification: MapClass::from_flags(
                source.group.is_zero(),
                target.group.is_zero(),
                zero,
                injective,
                surjective,
            ),
            matrix,
            injective,
            surjective,
        })
    }
}

impl MapClass {
    pub fn from_flags(src_zero: bool, tgt_zero: bool, zero: bool, injective: bool, surjective: bool) -> MapClass {
        if src_zero && tgt_zero {
            MapClass::Iso
        } else if zero {
            MapClass::Zero
        } else if injective && surjective {
            MapClass::Iso
        } else if injective {
            MapClass::Mono
        } else if surjective {
            MapClass::Epi
        } else {
            MapClass::Other
        }
    }
}

/// Injectivity and surjectivity of `x ↦ M x` from `⊕ Z/s_j` to `⊕ Z/d_i`
/// (free summands have order `None`), or of a linear map over a field.
fn classify(m: &[Vec<Int>], src: &[Option<Int>], tgt: &[Option<Int>], ring: Ring) -> (bool, bool) {
    let rows = tgt.len();
    let cols = src.len();
    let mut mat = IntMatrix::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            mat.set(i, j, v.clone());
        }
    }
    match ring {
        Ring::Rationals | Ring::PrimeField(_) => {
            let r = crate::snf::rank_over(&mat, ring);
            (r == cols, r == rows)
        }
        Ring::Integers => {
            // relations of the target: d_i e_i
            let mut rel = IntMatrix::zeros(rows, rows);
            for (i, o) in tgt.iter().enumerate() {
                if let Some(o) = o {
                    rel.set(i, i, o.clone());
                }
            }
            let aug = mat.hcat(&rel);
            let f = smith(&Zz, &aug, Track::NONE);
            let surjective = f.rank() == rows && f.diagonal().iter().all(|d| d.is_unit());
            // kernel of [M | -D]: its x-part must lie in the source relations
            let neg_rel = IntMatrix::from_columns(
                rows,
                rel.columns()
                    .iter()
                    .map(|c| c.iter().map(|(i, v)| (*i, -v)).collect())
                    .collect(),
            );
            let k = mat.hcat(&neg_rel);
            let fk = smith(&Zz, &k, Track::RIGHT);
            let v = fk.v.as_ref().unwrap();
            let injective = fk.free_cols().iter().all(|&c| {
                v[c].iter().filter(|(i, _)| *i < cols).all(|(i, val)| match &src[*i] {
                    Some(o) => val.div_mod_floor(o).1.is_zero(),
                    None => val.is_zero(),
                })
            });
            (injective, surjective)
        }
    }
}

/// Chain transfer between two chain complexes built from the same complex:
/// a basis cell is sent to the same cell when present in the target basis.
pub fn transfer(src: &ChainComplex, tgt: &ChainComplex, k: usize, chain: &SparseVec<Int>) -> SparseVec<Int> {
    let pos: std::collections::HashMap<CellRef, usize> = tgt
        .basis
        .get(k)
        .map(|b| b.iter().enumerate().map(|(n, &c)| (c, n)).collect())
        .unwrap_or_default();
    let mut out: SparseVec<Int> = chain
        .iter()
        .filter_map(|(i, v)| pos.get(&src.basis[k][*i]).map(|&n| (n, v.clone())))
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Map on `H_k` induced by a transfer of cells (inclusion of pairs).
pub fn induced_by_transfer(src: &ChainComplex, tgt: &ChainComplex, k: usize, ring: Ring) -> Result<InducedMap> {
    let a = HomologyBasis::homology(src, k, ring);
    let b = HomologyBasis::homology(tgt, k, ring);
    let images: Vec<SparseVec<Int>> = a.generators.iter().map(|g| transfer(src, tgt, k, &g.chain)).collect();
    InducedMap::from_images(&a, &b, &images)
}

/// Map on `H^k` induced by a transfer of cells (extension by zero of relative cochains).
pub fn induced_on_cohomology(src: &ChainComplex, tgt: &ChainComplex, k: usize, ring: Ring) -> Result<InducedMap> {
    let a = HomologyBasis::cohomology(src, k, ring);
    let b = HomologyBasis::cohomology(tgt, k, ring);
    let images: Vec<SparseVec<Int>> = a.generators.iter().map(|g| transfer(src, tgt, k, &g.chain)).collect();
    InducedMap::from_images(&a, &b, &images)
}

/// `H_k(X) → H_k(X | v)`.
pub fn local_map(x: &DeltaComplex, v: VertexId, k: usize, ring: Ring) -> Result<InducedMap> {
    x.check_vertex(v)?;
    induced_by_transfer(&ChainComplex::of(x), &ChainComplex::local(x, v), k, ring)
}

/// A vertex map between complexes that sends every cell onto a cell.
#[derive(Clone, Debug)]
pub struct SimplicialMap<'a> {
    pub source: &'a DeltaComplex,
    pub target: &'a DeltaComplex,
    pub vertex_map: Vec<VertexId>,
}

impl<'a> SimplicialMap<'a> {
    pub fn new(source: &'a DeltaComplex, target: &'a DeltaComplex, vertex_map: Vec<VertexId>) -> Result<Self> {
        if !source.is_simplicial() || !target.is_simplicial() {
            return Err(Error::NotSimplicialMap("both complexes must be simplicial".into()));
        }
        if vertex_map.len() != source.n_vertices() {
            return Err(Error::NotSimplicialMap("vertex map has the wrong length".into()));
        }
        for &w in &vertex_map {
            target.check_vertex(w).map_err(|_| Error::NotSimplicialMap(format!("{w} not in target")))?;
        }
        let m = SimplicialMap {
            source,
            target,
            vertex_map,
        };
        for r in source.maximal_cells() {
            let mut img: Vec<VertexId> = source.cell(r).vertices.iter().map(|v| m.vertex_map[v.0]).collect();
            img.sort();
            img.dedup();
            if target.find_cell(&img).is_none() {
                return Err(Error::NotSimplicialMap(format!("image of {r:?} is not a cell")));
            }
        }
        Ok(m)
    }

    /// Image of a single oriented cell: `±` a target cell, or zero when degenerate.
    pub fn cell_image(&self, (k, i): CellRef) -> Option<(usize, i64)> {
        let img: Vec<VertexId> = self.source.cells(k)[i].vertices.iter().map(|v| self.vertex_map[v.0]).collect();
        let sign = permutation_sign(&img)?;
        let mut sorted = img;
        sorted.sort();
        self.target.find_cell(&sorted).map(|(_, j)| (j, sign))
    }

    pub fn chain_image(&self, k: usize, chain: &SparseVec<Int>) -> SparseVec<Int> {
        let mut acc: std::collections::BTreeMap<usize, Int> = Default::default();
        for (i, v) in chain {
            if let Some((j, s)) = self.cell_image((k, *i)) {
                let e = acc.entry(j).or_insert(Int::ZERO);
                *e = &*e + &(v * &Int::from(s));
            }
        }
        acc.into_iter().filter(|e| !e.1.is_zero()).collect()
    }

    /// Induced map on `H_k`.
    pub fn induced(&self, k: usize, ring: Ring) -> Result<InducedMap> {
        let a = HomologyBasis::homology(&ChainComplex::of(self.source), k, ring);
        let b = HomologyBasis::homology(&ChainComplex::of(self.target), k, ring);
        let images: Vec<SparseVec<Int>> = a.generators.iter().map(|g| self.chain_image(k, &g.chain)).collect();
        InducedMap::from_images(&a, &b, &images)
    }
}

/// Sign of the permutation sorting `v`, `None` when `v` has repeats.
pub fn permutation_sign<T: Ord + Clone>(v: &[T]) -> Option<i64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].cmp(&v[b]));
    if idx.windows(2).any(|w| v[w[0]] == v[w[1]]) {
        return None;
    }
    let mut seen = vec![false; v.len()];
    let mut sign = 1;
    for s in 0..v.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = idx[c];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    Some(sign)
}

/// Alternating sum of Betti numbers over a field.
pub fn euler_from_betti(groups: &[HomologyGroup]) -> i64 {
    groups
        .iter()
        .enumerate()
        .map(|(k, g)| if k % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> DeltaComplex {
        DeltaComplex::from_facets(&[
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 2, 6],
            vec![2, 3, 5],
            vec![2, 4, 5],
            vec![2, 4, 6],
            vec![3, 4, 6],
            vec![3, 5, 6],
        ])
        .unwrap()
    }

    fn sphere2() -> DeltaComplex {
        DeltaComplex::from_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn sphere_homology() {
        let h = homology(&sphere2(), Ring::Z);
        assert_eq!(h, vec![HomologyGroup::z(1, &[]), HomologyGroup::z(0, &[]), HomologyGroup::z(1, &[])]);
    }

    #[test]
    fn projective_plane() {
        let x = rp2();
        assert_eq!(x.f_vector(), vec![6, 15, 10]);
        assert_eq!(homology(&x, Ring::Z), vec![HomologyGroup::z(1, &[]), HomologyGroup::z(0, &[2]), HomologyGroup::z(0, &[])]);
        let z2: Vec<usize> = homology(&x, Ring::PrimeField(2)).iter().map(|g| g.rank).collect();
        assert_eq!(z2, vec![1, 1, 1]);
        let co = cohomology(&x, None, Ring::Z).unwrap();
        assert_eq!(co[2], HomologyGroup::z(0, &[2]));
        assert_eq!(co[1], HomologyGroup::z(0, &[]));
    }

    #[test]
    fn local_homology_of_sphere_vertex() {
        let h = local_homology(&sphere2(), VertexId(0), Ring::Z).unwrap();
        assert_eq!(h, vec![HomologyGroup::z(0, &[]), HomologyGroup::z(0, &[]), HomologyGroup::z(1, &[])]);
    }

    #[test]
    fn relative_to_everything_vanishes() {
        let x = sphere2();
        let h = relative_homology(&x, &Subcomplex::full(&x), Ring::Z).unwrap();
        assert!(h.iter().all(|g| g.is_zero()));
    }

    #[test]
    fn fundamental_map_is_iso() {
        let x = sphere2();
        let m = local_map(&x, VertexId(2), 2, Ring::Z).unwrap();
        assert_eq!(m.classification, MapClass::Iso);
        let m1 = local_map(&x, VertexId(2), 1, Ring::Z).unwrap();
        assert_eq!(m1.classification, MapClass::Iso);
    }

    #[test]
    fn torsion_generator_coordinates() {
        let x = rp2();
        let c = ChainComplex::of(&x);
        let b = HomologyBasis::homology(&c, 1, Ring::Z);
        assert_eq!(b.group, HomologyGroup::z(0, &[2]));
        let g = &b.generators[0];
        assert_eq!(b.coordinates(&g.chain).unwrap(), vec![Int::ONE]);
        let twice: SparseVec<Int> = g.chain.iter().map(|(i, v)| (*i, v + v)).collect();
        assert_eq!(b.coordinates(&twice).unwrap(), vec![Int::ZERO]);
    }

    #[test]
    fn degree_two_map_on_circle() {
        // hexagon wrapped twice around a triangle
        let hex = DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![0, 5]]).unwrap();
        let tri = DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let f = SimplicialMap::new(&hex, &tri, (0..6).map(|i| VertexId(i % 3)).collect()).unwrap();
        let m = f.induced(1, Ring::Z).unwrap();
        assert_eq!(m.matrix[0][0].abs(), Int::from(2));
        assert_eq!(m.classification, MapClass::Mono);
        assert_eq!(f.induced(1, Ring::Q).unwrap().classification, MapClass::Iso);
        assert_eq!(f.induced(1, Ring::PrimeField(2)).unwrap().classification, MapClass::Zero);
    }

    #[test]
    fn invariant_form_regroups() {
        assert_eq!(invariant_form(vec![2, 3]), vec![6]);
        assert_eq!(invariant_form(vec![2, 2, 4]), vec![2, 2, 4]);
        assert_eq!(invariant_form(vec![1, 4, 6]), vec![2, 12]);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[1, 2, 3]), Some(1));
        assert_eq!(permutation_sign(&[2, 1, 3]), Some(-1));
        assert_eq!(permutation_sign(&[3, 1, 2]), Some(1));
        assert_eq!(permutation_sign(&[1, 1]), None);
    }
}
