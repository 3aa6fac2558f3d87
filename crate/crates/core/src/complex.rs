//! Finite delta complexes.
//!
//! A [`DeltaComplex`] stores cells degree by degree. Every cell carries its
//! ordered vertex tuple and the indices of its codimension-one faces, where
//! `faces[j]` is the face obtained by deleting the `j`-th vertex. Simplicial
//! complexes are the special case in which a cell is determined by its vertex
//! set.
//!
//! Vertex tuples of cells are non-decreasing in [`VertexId`]; they are strictly
//! increasing exactly when the complex is *regular* (no cell repeats a vertex).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Vertex identifier; the integer order is the global vertex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Position of a cell: `(degree, index within degree)`.
pub type CellRef = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub vertices: Vec<VertexId>,
    pub faces: Vec<usize>,
}

impl Cell {
    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    cells: Vec<Vec<Cell>>,
    labels: Option<Vec<String>>,
    is_simplicial: bool,
    is_regular: bool,
}

/// A subcomplex of a fixed complex, stored as a membership mask per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    mask: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn empty(x: &DeltaComplex) -> Subcomplex {
        Subcomplex {
            mask: x.cells.iter().map(|c| vec![false; c.len()]).collect(),
        }
    }

    pub fn full(x: &DeltaComplex) -> Subcomplex {
        Subcomplex {
            mask: x.cells.iter().map(|c| vec![true; c.len()]).collect(),
        }
    }

    /// Builds a subcomplex from a mask, failing unless it is closed under faces.
    pub fn new(x: &DeltaComplex, mask: Vec<Vec<bool>>) -> Result<Subcomplex> {
        if mask.len() != x.cells.len()
            || mask.iter().zip(&x.cells).any(|(m, c)| m.len() != c.len())
        {
            return Err(Error::NotSubcomplex("mask shape does not match complex".into()));
        }
        for k in 1..x.cells.len() {
            for (i, cell) in x.cells[k].iter().enumerate() {
                if mask[k][i] {
                    if let Some(&f) = cell.faces.iter().find(|&&f| !mask[k - 1][f]) {
                        return Err(Error::NotSubcomplex(format!(
                            "cell ({k},{i}) present but its face ({},{f}) is missing",
                            k - 1
                        )));
                    }
                }
            }
        }
        Ok(Subcomplex { mask })
    }

    /// Closure of a set of cells.
    pub fn closure(x: &DeltaComplex, generators: impl IntoIterator<Item = CellRef>) -> Subcomplex {
        let mut sub = Subcomplex::empty(x);
        let mut stack: Vec<CellRef> = generators.into_iter().collect();
        while let Some((k, i)) = stack.pop() {
            if sub.mask[k][i] {
                continue;
            }
            sub.mask[k][i] = true;
            if k > 0 {
                for &f in &x.cells[k][i].faces {
                    stack.push((k - 1, f));
                }
            }
        }
        sub
    }

    /// Subcomplex of a simplicial complex given by vertex sets of cells.
    pub fn from_vertex_sets(x: &DeltaComplex, sets: &[Vec<VertexId>]) -> Result<Subcomplex> {
        if !x.is_simplicial {
            return Err(Error::NotSimplicial);
        }
        let mut gens = Vec::with_capacity(sets.len());
        for s in sets {
            let mut s = s.clone();
            s.sort();
            let r = x
                .find_cell(&s)
                .ok_or_else(|| Error::NotSubcomplex(format!("{s:?} is not a cell")))?;
            gens.push(r);
        }
        Ok(Subcomplex::closure(x, gens))
    }

    pub fn contains(&self, (k, i): CellRef) -> bool {
        self.mask.get(k).is_some_and(|m| m[i])
    }

    pub fn mask(&self) -> &[Vec<bool>] {
        &self.mask
    }

    pub fn count(&self, k: usize) -> usize {
        self.mask.get(k).map_or(0, |m| m.iter().filter(|&&b| b).count())
    }

    pub fn is_empty(&self) -> bool {
        self.mask.iter().all(|m| m.iter().all(|&b| !b))
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.mask
            .first()
            .map(|m| {
                m.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| VertexId(i))
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// A vertex link together with the correspondence back to the parent complex.
#[derive(Clone, Debug)]
pub struct LinkData {
    pub complex: DeltaComplex,
    /// For each link vertex, the vertex of the parent it came from.
    pub vertex_origin: Vec<VertexId>,
    /// Parent coface `(k, i)` of the vertex ↦ link cell `(k - 1, j)`.
    pub cell_map: HashMap<CellRef, CellRef>,
}

impl DeltaComplex {
    /// Builds the simplicial complex generated by a list of maximal cells.
    ///
    /// Vertex ids may be arbitrary non-negative integers; they are renumbered
    /// densely in increasing order and kept as labels.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<DeltaComplex> {
        let mut seen = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for f in facets {
            if f.is_empty() {
                return Err(Error::EmptyCell);
            }
            let mut s = f.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex(f.clone()));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::DuplicateCell(s));
            }
            ids.extend(s);
        }
        let dense: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels = ids.iter().map(|v| v.to_string()).collect();
        let sets: Vec<Vec<VertexId>> = seen
            .into_iter()
            .map(|s| s.into_iter().map(|v| VertexId(dense[&v])).collect())
            .collect();
        let mut x = DeltaComplex::from_vertex_sets(ids.len(), &sets);
        x.labels = Some(labels);
        Ok(x)
    }

    /// Downward closure of vertex sets over the dense vertex range `0..n`.
    /// Sets must be sorted and free of repeats.
    pub(crate) fn from_vertex_sets(n_vertices: usize, sets: &[Vec<VertexId>]) -> DeltaComplex {
        let dim = sets.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut by_degree: Vec<BTreeSet<Vec<VertexId>>> = vec![BTreeSet::new(); dim.max(1)];
        for v in 0..n_vertices {
            by_degree[0].insert(vec![VertexId(v)]);
        }
        for s in sets {
            debug_assert!(s.windows(2).all(|w| w[0] < w[1]));
            let k = s.len();
            // all non-empty subsets
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<VertexId> =
                    (0..k).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
                by_degree[sub.len() - 1].insert(sub);
            }
        }
        if n_vertices == 0 && sets.is_empty() {
            return DeltaComplex::empty();
        }
        let index: Vec<HashMap<&Vec<VertexId>, usize>> = by_degree
            .iter()
            .map(|d| d.iter().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(by_degree.len());
        for (k, d) in by_degree.iter().enumerate() {
            let mut level = Vec::with_capacity(d.len());
            for s in d {
                let faces = if k == 0 {
                    Vec::new()
                } else {
                    (0..s.len())
                        .map(|j| {
                            let mut f = s.clone();
                            f.remove(j);
                            index[k - 1][&f]
                        })
                        .collect()
                };
                level.push(Cell {
                    vertices: s.clone(),
                    faces,
                });
            }
            cells.push(level);
        }
        while cells.last().is_some_and(|c| c.is_empty()) {
            cells.pop();
        }
        DeltaComplex {
            cells,
            labels: None,
            is_simplicial: true,
            is_regular: true,
        }
    }

    /// Builds a complex from explicit cells, validating the face structure.
    pub fn from_cells(cells: Vec<Vec<Cell>>, labels: Option<Vec<String>>) -> Result<DeltaComplex> {
        let mut cells = cells;
        while cells.last().is_some_and(|c| c.is_empty()) {
            cells.pop();
        }
        for (k, level) in cells.iter().enumerate() {
            for (i, c) in level.iter().enumerate() {
                if c.vertices.len() != k + 1 {
                    return Err(Error::Inconsistency(format!(
                        "cell ({k},{i}) has {} vertices",
                        c.vertices.len()
                    )));
                }
                if k == 0 {
                    if c.vertices[0] != VertexId(i) || !c.faces.is_empty() {
                        return Err(Error::Inconsistency(format!("vertex {i} is not canonical")));
                    }
                    continue;
                }
                if c.faces.len() != k + 1 {
                    return Err(Error::Inconsistency(format!(
                        "cell ({k},{i}) has {} faces",
                        c.faces.len()
                    )));
                }
                if c.vertices.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::Inconsistency(format!(
                        "cell ({k},{i}) vertex tuple is not ordered"
                    )));
                }
                for (j, &f) in c.faces.iter().enumerate() {
                    let face = cells[k - 1].get(f).ok_or_else(|| {
                        Error::Inconsistency(format!("cell ({k},{i}) has dangling face {f}"))
                    })?;
                    let mut expect = c.vertices.clone();
                    expect.remove(j);
                    if face.vertices != expect {
                        return Err(Error::Inconsistency(format!(
                            "face {j} of cell ({k},{i}) has the wrong vertices"
                        )));
                    }
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != cells.first().map_or(0, |c| c.len()) {
                return Err(Error::Inconsistency("label count mismatch".into()));
            }
        }
        let mut x = DeltaComplex {
            cells,
            labels,
            is_simplicial: false,
            is_regular: false,
        };
        x.refresh_flags();
        Ok(x)
    }

    pub fn empty() -> DeltaComplex {
        DeltaComplex {
            cells: Vec::new(),
            labels: None,
            is_simplicial: true,
            is_regular: true,
        }
    }

    fn refresh_flags(&mut self) {
        self.is_regular = self
            .cells
            .iter()
            .all(|l| l.iter().all(|c| c.vertices.windows(2).all(|w| w[0] < w[1])));
        self.is_simplicial = self.is_regular
            && self.cells.iter().all(|l| {
                let mut seen = BTreeSet::new();
                l.iter().all(|c| seen.insert(&c.vertices))
            });
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Dimension, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    /// Dimension, with the empty complex reported as 0.
    pub fn dim(&self) -> usize {
        self.dimension().unwrap_or(0)
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_simplicial
    }

    pub fn is_regular(&self) -> bool {
        self.is_regular
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.cells.get(k).map_or(&[], |c| c.as_slice())
    }

    pub fn cell(&self, (k, i): CellRef) -> &Cell {
        &self.cells[k][i]
    }

    pub fn n_vertices(&self) -> usize {
        self.cells(0).len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n_vertices()).map(VertexId)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: VertexId) -> String {
        match &self.labels {
            Some(l) => l[v.0].clone(),
            None => v.0.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> DeltaComplex {
        assert_eq!(labels.len(), self.n_vertices());
        self.labels = Some(labels);
        self
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.n_vertices() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Locates a cell of a simplicial complex by its sorted vertex set.
    pub fn find_cell(&self, verts: &[VertexId]) -> Option<CellRef> {
        let k = verts.len().checked_sub(1)?;
        let level = self.cells.get(k)?;
        // cells of a simplicial complex built here are sorted lexicographically,
        // but derived complexes need not be; fall back to a scan.
        match level.binary_search_by(|c| c.vertices.as_slice().cmp(verts)) {
            Ok(i) => Some((k, i)),
            Err(_) => level.iter().position(|c| c.vertices == verts).map(|i| (k, i)),
        }
    }

    /// Top-dimensional cells not properly contained in a larger cell, and
    /// whether all maximal cells have the top dimension.
    pub fn maximal_cells(&self) -> Vec<CellRef> {
        let mut has_coface: Vec<Vec<bool>> =
            self.cells.iter().map(|c| vec![false; c.len()]).collect();
        for k in 1..self.cells.len() {
            for c in &self.cells[k] {
                for &f in &c.faces {
                    has_coface[k - 1][f] = true;
                }
            }
        }
        let mut out = Vec::new();
        for (k, level) in has_coface.iter().enumerate() {
            for (i, &h) in level.iter().enumerate() {
                if !h {
                    out.push((k, i));
                }
            }
        }
        out
    }

    pub fn is_pure(&self) -> bool {
        let n = self.dim();
        self.maximal_cells().iter().all(|&(k, _)| k == n)
    }

    pub fn require_pure(&self) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            let bad: Vec<CellRef> = self
                .maximal_cells()
                .into_iter()
                .filter(|&(k, _)| k != self.dim())
                .take(3)
                .collect();
            Err(Error::NotPure(format!("lower-dimensional maximal cells {bad:?}")))
        }
    }

    /// Cofaces of every `k`-cell among the `(k+1)`-cells, with multiplicity
    /// one per incidence.
    pub fn cofaces(&self, k: usize) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.cells(k).len()];
        for (i, c) in self.cells(k + 1).iter().enumerate() {
            for (j, &f) in c.faces.iter().enumerate() {
                out[f].push((i, j));
            }
        }
        out
    }

    /// Connected components of the 1-skeleton, as a component id per vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.n_vertices();
        let mut adj = vec![Vec::new(); n];
        for e in self.cells(1) {
            let (a, b) = (e.vertices[0].0, e.vertices[1].0);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 == 1
    }

    /// Every cell that has `v` as a vertex.
    pub fn star_cells(&self, v: VertexId) -> Vec<CellRef> {
        let mut out = Vec::new();
        for (k, level) in self.cells.iter().enumerate() {
            for (i, c) in level.iter().enumerate() {
                if c.contains(v) {
                    out.push((k, i));
                }
            }
        }
        out
    }

    /// Subcomplex of all cells not containing `v` (compact model of `X ∖ {v}`).
    pub fn deleted_star_subcomplex(&self, v: VertexId) -> Result<Subcomplex> {
        self.check_vertex(v)?;
        Ok(Subcomplex {
            mask: self
                .cells
                .iter()
                .map(|l| l.iter().map(|c| !c.contains(v)).collect())
                .collect(),
        })
    }

    /// The deleted star as a complex in its own right.
    pub fn deleted_star(&self, v: VertexId) -> Result<DeltaComplex> {
        let sub = self.deleted_star_subcomplex(v)?;
        Ok(self.extract(&sub).0)
    }

    /// Closed star of `v`: closure of all cells containing it.
    pub fn closed_star_subcomplex(&self, v: VertexId) -> Result<Subcomplex> {
        self.check_vertex(v)?;
        Ok(Subcomplex::closure(self, self.star_cells(v)))
    }

    /// Copies a subcomplex into a standalone complex, renumbering vertices
    /// monotonically. Returns the complex and the old→new cell index maps.
    pub fn extract(&self, sub: &Subcomplex) -> (DeltaComplex, Vec<HashMap<usize, usize>>) {
        let mut maps: Vec<HashMap<usize, usize>> = Vec::new();
        let mut cells: Vec<Vec<Cell>> = Vec::new();
        let mut vmap: HashMap<VertexId, VertexId> = HashMap::new();
        for (k, level) in self.cells.iter().enumerate() {
            let mut m = HashMap::new();
            let mut out = Vec::new();
            for (i, c) in level.iter().enumerate() {
                if !sub.mask[k][i] {
                    continue;
                }
                m.insert(i, out.len());
                if k == 0 {
                    vmap.insert(VertexId(i), VertexId(out.len()));
                    out.push(Cell {
                        vertices: vec![VertexId(out.len())],
                        faces: Vec::new(),
                    });
                } else {
                    out.push(Cell {
                        vertices: c.vertices.iter().map(|v| vmap[v]).collect(),
                        faces: c.faces.iter().map(|f| maps[k - 1][f]).collect(),
                    });
                }
            }
            maps.push(m);
            cells.push(out);
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut kept: Vec<(VertexId, VertexId)> = vmap.iter().map(|(a, b)| (*a, *b)).collect();
            kept.sort_by_key(|p| p.1);
            kept.iter().map(|(old, _)| l[old.0].clone()).collect()
        });
        let x = DeltaComplex::from_cells(cells, labels).expect("subcomplex extraction is valid");
        (x, maps)
    }

    /// Link of a vertex: one cell per coface of `v`, namely the face opposite
    /// to `v`. Requires a regular complex.
    pub fn link_data(&self, v: VertexId) -> Result<LinkData> {
        self.check_vertex(v)?;
        if !self.is_regular {
            return Err(Error::NotRegular);
        }
        // link vertices are the edges at v, ordered by their other endpoint
        let mut edges: Vec<(VertexId, usize)> = self
            .cells(1)
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(v))
            .map(|(i, e)| (if e.vertices[0] == v { e.vertices[1] } else { e.vertices[0] }, i))
            .collect();
        edges.sort();
        let mut cell_map: HashMap<CellRef, CellRef> = HashMap::new();
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new()];
        let mut vertex_origin = Vec::new();
        for (w, e) in &edges {
            let id = VertexId(cells[0].len());
            cell_map.insert((1, *e), (0, id.0));
            cells[0].push(Cell {
                vertices: vec![id],
                faces: Vec::new(),
            });
            vertex_origin.push(*w);
        }
        for k in 2..self.cells.len() {
            let mut level = Vec::new();
            for (i, c) in self.cells[k].iter().enumerate() {
                let Some(pos) = c.vertices.iter().position(|&u| u == v) else {
                    continue;
                };
                // faces of the link cell: delete each other vertex of c
                let mut faces = Vec::with_capacity(k);
                for j in 0..c.vertices.len() {
                    if j == pos {
                        continue;
                    }
                    let parent_face = (k - 1, c.faces[j]);
                    faces.push(cell_map[&parent_face].1);
                }
                let vertices: Vec<VertexId> = faces_to_vertices(&cells, k - 1, &faces);
                cell_map.insert((k, i), (k - 1, level.len()));
                level.push(Cell { vertices, faces });
            }
            cells.push(level);
        }
        if edges.is_empty() {
            cells.clear();
        }
        let labels = Some(vertex_origin.iter().map(|&w| self.label(w)).collect());
        let complex = DeltaComplex::from_cells(cells, labels)?;
        Ok(LinkData {
            complex,
            vertex_origin,
            cell_map,
        })
    }

    pub fn link(&self, v: VertexId) -> Result<DeltaComplex> {
        Ok(self.link_data(v)?.complex)
    }

    /// Link of an arbitrary cell, by iterating vertex links.
    pub fn cell_link(&self, (k, i): CellRef) -> Result<DeltaComplex> {
        let first = self.cells[k][i].vertices[0];
        let data = self.link_data(first)?;
        if k == 0 {
            return Ok(data.complex);
        }
        let inner = data.cell_map[&(k, i)];
        data.complex.cell_link(inner)
    }

    /// Barycentric subdivision. Vertices of the result are the cells of `self`
    /// in degree-major order; a `k`-simplex is a chain `c0 < c1 < … < ck` of
    /// cells together with the face positions realising each inclusion.
    pub fn barycentric_subdivision(&self) -> DeltaComplex {
        if self.is_empty() {
            return DeltaComplex::empty();
        }
        let offsets: Vec<usize> = self
            .cells
            .iter()
            .scan(0usize, |acc, l| {
                let o = *acc;
                *acc += l.len();
                Some(o)
            })
            .collect();
        let total: usize = self.cells.iter().map(|l| l.len()).sum();
        // key: (top degree, top index, chain of position bitmasks below the top)
        type Key = (usize, usize, Vec<u64>);
        let mut index: Vec<HashMap<Key, usize>> = vec![HashMap::new(); self.cells.len()];
        let mut out: Vec<Vec<Cell>> = vec![Vec::new(); self.cells.len()];
        for v in 0..total {
            out[0].push(Cell {
                vertices: vec![VertexId(v)],
                faces: Vec::new(),
            });
        }
        for (k, level) in self.cells.iter().enumerate() {
            for i in 0..level.len() {
                index[0].insert((k, i, Vec::new()), offsets[k] + i);
            }
        }
        // simplices of sd with `m` vertices, built in increasing m
        for m in 1..self.cells.len() {
            for (k, level) in self.cells.iter().enumerate() {
                if k < m {
                    continue;
                }
                for i in 0..level.len() {
                    let full = (1u64 << (k + 1)) - 1;
                    for chain in proper_chains(full, m) {
                        let key = (k, i, chain.clone());
                        let mut verts = Vec::with_capacity(m + 1);
                        for &mask in &chain {
                            let c = self.face_by_mask((k, i), mask);
                            verts.push(VertexId(offsets[c.0] + c.1));
                        }
                        verts.push(VertexId(offsets[k] + i));
                        let mut faces = Vec::with_capacity(m + 1);
                        for drop in 0..=m {
                            let fkey = if drop < m {
                                let mut c = chain.clone();
                                c.remove(drop);
                                (k, i, c)
                            } else {
                                let top_mask = chain[m - 1];
                                let (tk, ti) = self.face_by_mask((k, i), top_mask);
                                let c = chain[..m - 1]
                                    .iter()
                                    .map(|&sub| compress_mask(sub, top_mask))
                                    .collect();
                                (tk, ti, c)
                            };
                            faces.push(index[m - 1][&fkey]);
                        }
                        index[m].insert(key, out[m].len());
                        out[m].push(Cell {
                            vertices: verts,
                            faces,
                        });
                    }
                }
            }
        }
        let labels = (0..self.cells.len())
            .flat_map(|k| {
                (0..self.cells[k].len()).map(move |i| (k, i))
            })
            .map(|(k, i)| {
                if k == 0 {
                    self.label(VertexId(i))
                } else {
                    let names: Vec<String> =
                        self.cells[k][i].vertices.iter().map(|&v| self.label(v)).collect();
                    format!("b({})", names.join(","))
                }
            })
            .collect();
        DeltaComplex::from_cells(out, Some(labels)).expect("subdivision is a valid complex")
    }

    /// Face of a cell spanned by the positions set in `mask`.
    pub fn face_by_mask(&self, (k, i): CellRef, mask: u64) -> CellRef {
        let mut cur = (k, i);
        for p in (0..=k).rev() {
            if mask >> p & 1 == 0 {
                let f = self.cells[cur.0][cur.1].faces[p];
                cur = (cur.0 - 1, f);
            }
        }
        cur
    }

    /// Subdivides until the complex is simplicial (at most twice).
    pub fn ensure_simplicial(&self) -> DeltaComplex {
        let mut x = self.clone();
        while !x.is_simplicial {
            x = x.barycentric_subdivision();
        }
        x
    }

    /// Maximal cells as vertex-id lists (labels ignored).
    pub fn facet_vertex_lists(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .maximal_cells()
            .into_iter()
            .map(|r| self.cell(r).vertices.iter().map(|v| v.0).collect())
            .collect();
        out.sort();
        out
    }

    /// Digest of the exact cell structure (vertex numbering included).
    pub fn structure_hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, level) in self.cells.iter().enumerate() {
            h.update(format!("d{k}:{};", level.len()).as_bytes());
            for c in level {
                for v in &c.vertices {
                    h.update(v.0.to_le_bytes());
                }
                for f in &c.faces {
                    h.update(f.to_le_bytes());
                }
            }
        }
        hex::encode(h.finalize())
    }

    /// Relabeling-invariant digest: vertex colours are refined by their
    /// incidences until stable, then the multiset of cells written in colours
    /// is hashed. Equal complexes hash equal; distinct complexes may collide.
    pub fn canonical_hash(&self) -> String {
        let n = self.n_vertices();
        let mut colors: Vec<u64> = vec![0; n];
        let mut classes = 0usize;
        for _round in 0..=n {
            let mut sigs: Vec<Vec<u8>> = vec![Vec::new(); n];
            for (k, level) in self.cells.iter().enumerate().skip(1) {
                for c in level {
                    let mut cc: Vec<u64> = c.vertices.iter().map(|v| colors[v.0]).collect();
                    cc.sort_unstable();
                    let mut token = (k as u64).to_le_bytes().to_vec();
                    for x in &cc {
                        token.extend_from_slice(&x.to_le_bytes());
                    }
                    let digest = short_hash(&token);
                    for v in &c.vertices {
                        sigs[v.0].extend_from_slice(&digest.to_le_bytes());
                    }
                }
            }
            let mut next = Vec::with_capacity(n);
            for (v, sig) in sigs.iter().enumerate() {
                let mut chunks: Vec<u64> = sig
                    .chunks(8)
                    .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
                    .collect();
                chunks.sort_unstable();
                let mut token = colors[v].to_le_bytes().to_vec();
                for x in chunks {
                    token.extend_from_slice(&x.to_le_bytes());
                }
                next.push(short_hash(&token));
            }
            let distinct = next.iter().collect::<BTreeSet<_>>().len();
            colors = next;
            if distinct == classes {
                break;
            }
            classes = distinct;
        }
        let mut cellwords: Vec<(usize, Vec<u64>)> = Vec::new();
        for (k, level) in self.cells.iter().enumerate() {
            for c in level {
                let mut cc: Vec<u64> = c.vertices.iter().map(|v| colors[v.0]).collect();
                cc.sort_unstable();
                cellwords.push((k, cc));
            }
        }
        cellwords.sort();
        let mut h = Sha256::new();
        for (k, cc) in cellwords {
            h.update((k as u64).to_le_bytes());
            for x in cc {
                h.update(x.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// Applies a vertex relabeling to a simplicial complex.
    pub fn relabeled(&self, perm: &[usize]) -> Result<DeltaComplex> {
        if !self.is_simplicial {
            return Err(Error::NotSimplicial);
        }
        let facets: Vec<Vec<usize>> = self
            .maximal_cells()
            .into_iter()
            .map(|r| self.cell(r).vertices.iter().map(|v| perm[v.0]).collect())
            .collect();
        DeltaComplex::from_facets(&facets)
    }

    /// Map from sorted vertex set to cell for simplicial complexes.
    pub fn vertex_set_index(&self) -> Vec<HashMap<Vec<VertexId>, usize>> {
        self.cells
            .iter()
            .map(|l| {
                l.iter()
                    .enumerate()
                    .map(|(i, c)| (c.vertices.clone(), i))
                    .collect()
            })
            .collect()
    }

    /// Degree-wise incidence counts of each vertex, used for diagnostics.
    pub fn vertex_degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut out = BTreeMap::new();
        for e in self.cells(1) {
            for v in &e.vertices {
                *out.entry(*v).or_insert(0) += 1;
            }
        }
        out
    }
}

fn faces_to_vertices(cells: &[Vec<Cell>], d: usize, faces: &[usize]) -> Vec<VertexId> {
    // the face deleting the last position carries the first d vertices, the
    // face deleting position 0 ends with the last vertex
    let mut v = cells[d - 1][faces[d]].vertices.clone();
    v.push(*cells[d - 1][faces[0]].vertices.last().unwrap());
    v
}

/// Chains `m_0 ⊂ m_1 ⊂ … ⊂ m_{len-1} ⊊ full` of non-empty proper submasks.
fn proper_chains(full: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(upper: u64, remaining: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 0 {
            let mut c = cur.clone();
            c.reverse();
            out.push(c);
            return;
        }
        // proper non-empty submasks of `upper`
        let mut sub = (upper - 1) & upper;
        while sub > 0 {
            if sub.count_ones() as usize >= remaining {
                cur.push(sub);
                rec(sub, remaining - 1, cur, out);
                cur.pop();
            }
            sub = (sub - 1) & upper;
        }
    }
    rec(full, len, &mut cur, &mut out);
    out.sort();
    out
}

/// Re-indexes the bits of `sub` relative to the set bits of `within`.
fn compress_mask(sub: u64, within: u64) -> u64 {
    let mut out = 0u64;
    let mut pos = 0;
    for b in 0..64 {
        if within >> b & 1 == 1 {
            if sub >> b & 1 == 1 {
                out |= 1 << pos;
            }
            pos += 1;
        }
    }
    out
}

fn short_hash(bytes: &[u8]) -> u64 {
    let d = Sha256::digest(bytes);
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle3() -> DeltaComplex {
        DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    fn tetra_boundary() -> DeltaComplex {
        DeltaComplex::from_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap()
    }

    #[test]
    fn builds_circle() {
        let c = circle3();
        assert_eq!(c.f_vector(), vec![3, 3]);
        assert_eq!(c.euler_characteristic(), 0);
        assert!(c.is_simplicial() && c.is_pure());
    }

    #[test]
    fn builds_sphere() {
        let s = tetra_boundary();
        assert_eq!(s.f_vector(), vec![4, 6, 4]);
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            DeltaComplex::from_facets(&[vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicateCell(vec![0, 1]))
        );
        assert_eq!(DeltaComplex::from_facets(&[vec![]]), Err(Error::EmptyCell));
        assert!(matches!(
            DeltaComplex::from_facets(&[vec![0, 0]]),
            Err(Error::RepeatedVertex(_))
        ));
    }

    #[test]
    fn mixed_dimensions_are_flagged_not_pure() {
        let x = DeltaComplex::from_facets(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert!(!x.is_pure());
        assert!(x.require_pure().is_err());
    }

    #[test]
    fn link_of_sphere_vertex_is_circle() {
        let s = tetra_boundary();
        let l = s.link(VertexId(0)).unwrap();
        assert_eq!(l.f_vector(), vec![3, 3]);
        assert!(l.is_simplicial());
        assert!(s.link(VertexId(9)).is_err());
    }

    #[test]
    fn deleted_star_of_sphere_is_disk() {
        let s = tetra_boundary();
        let d = s.deleted_star(VertexId(3)).unwrap();
        assert_eq!(d.f_vector(), vec![3, 3, 1]);
        let c = circle3().deleted_star(VertexId(0)).unwrap();
        assert_eq!(c.f_vector(), vec![2, 1]);
    }

    #[test]
    fn subdivision_counts() {
        let edge = DeltaComplex::from_facets(&[vec![0, 1]]).unwrap();
        assert_eq!(edge.barycentric_subdivision().f_vector(), vec![3, 2]);
        let hex = circle3().barycentric_subdivision();
        assert_eq!(hex.f_vector(), vec![6, 6]);
        let sd = tetra_boundary().barycentric_subdivision();
        assert_eq!(sd.f_vector(), vec![14, 36, 24]);
        assert!(sd.is_simplicial());
        assert_eq!(sd.euler_characteristic(), 2);
    }

    #[test]
    fn subdivision_of_non_regular_cells() {
        // one vertex, one loop edge: the circle as a delta complex
        let cells = vec![
            vec![Cell {
                vertices: vec![VertexId(0)],
                faces: vec![],
            }],
            vec![Cell {
                vertices: vec![VertexId(0), VertexId(0)],
                faces: vec![0, 0],
            }],
        ];
        let loop_ = DeltaComplex::from_cells(cells, None).unwrap();
        assert!(!loop_.is_regular());
        let sd = loop_.barycentric_subdivision();
        assert_eq!(sd.f_vector(), vec![2, 2]);
        assert!(sd.is_regular());
        assert!(!sd.is_simplicial());
        let sd2 = loop_.ensure_simplicial();
        assert_eq!(sd2.f_vector(), vec![4, 4]);
    }

    #[test]
    fn canonical_hash_ignores_order_and_labels() {
        let a = DeltaComplex::from_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap();
        let b = DeltaComplex::from_facets(&[vec![13, 12, 11], vec![10, 13, 12], vec![11, 10, 13], vec![12, 11, 10]])
            .unwrap();
        assert_eq!(a.canonical_hash(), b.canonical_hash());
        assert_ne!(a.canonical_hash(), circle3().canonical_hash());
        assert_eq!(a.canonical_hash(), a.canonical_hash());
    }

    #[test]
    fn subcomplex_must_be_closed() {
        let s = tetra_boundary();
        let mut mask: Vec<Vec<bool>> = s.cells.iter().map(|l| vec![false; l.len()]).collect();
        mask[2][0] = true;
        assert!(Subcomplex::new(&s, mask).is_err());
        let sub = Subcomplex::closure(&s, [(2, 0)]);
        assert_eq!(sub.count(0), 3);
        assert!(Subcomplex::new(&s, sub.mask().to_vec()).is_ok());
    }

    #[test]
    fn chains_enumeration() {
        // chains of proper non-empty subsets of a 3-set of length 2: 6 flags
        assert_eq!(proper_chains(0b111, 2).len(), 6);
        assert_eq!(proper_chains(0b111, 1).len(), 6);
        assert_eq!(compress_mask(0b1010, 0b1110), 0b101);
    }
}
