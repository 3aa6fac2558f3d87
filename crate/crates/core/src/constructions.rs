//! Cones, joins, products, gluings, doubles and quotients by finite group actions.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::complex::{Cell, CellRef, DeltaComplex, Subcomplex, VertexId};
use crate::error::{Error, Result};

fn side_labels(x: &DeltaComplex, prefix: &str) -> Vec<String> {
    x.vertices().map(|v| format!("{prefix}{}", x.label(v))).collect()
}

/// Join `X ∗ Y`. Vertices of `X` come first, so every cell `σ ∗ τ` lists the
/// vertices of `σ` followed by those of `τ`.
pub fn join(x: &DeltaComplex, y: &DeltaComplex) -> DeltaComplex {
    join_labeled(x, y, side_labels(x, "L."), side_labels(y, "R."))
}

fn join_labeled(x: &DeltaComplex, y: &DeltaComplex, lx: Vec<String>, ly: Vec<String>) -> DeltaComplex {
    if x.is_empty() {
        return y.clone();
    }
    if y.is_empty() {
        return x.clone();
    }
    let (px, py) = (x.dim() + 1, y.dim() + 1);
    let nx = x.n_vertices();
    let top = px + py; // number of degrees in the join
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top];
    // index of the X-cell (k, i): offset_x[k] + i in degree k; similarly for Y and products
    let mut x_index: Vec<Vec<usize>> = Vec::new();
    let mut y_index: Vec<Vec<usize>> = Vec::new();
    // products σ∗τ, σ of degree p, τ of degree q → degree p+q+1
    let mut p_index: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    // degree 0: X vertices then Y vertices
    for k in 0..top {
        let mut xi = Vec::new();
        if k < px {
            for c in x.cells(k) {
                xi.push(cells[k].len());
                let faces = if k == 0 {
                    vec![]
                } else {
                    c.faces.iter().map(|&f| x_index[k - 1][f]).collect()
                };
                cells[k].push(Cell {
                    vertices: c.vertices.clone(),
                    faces,
                });
            }
        }
        x_index.push(xi);
        let mut yi = Vec::new();
        if k < py {
            for c in y.cells(k) {
                yi.push(cells[k].len());
                let faces = if k == 0 {
                    vec![]
                } else {
                    c.faces.iter().map(|&f| y_index[k - 1][f]).collect()
                };
                cells[k].push(Cell {
                    vertices: c.vertices.iter().map(|v| VertexId(v.0 + nx)).collect(),
                    faces,
                });
            }
        }
        y_index.push(yi);
        if k == 0 {
            // vertices must be numbered consecutively
            for (i, c) in cells[0].iter_mut().enumerate() {
                c.vertices = vec![VertexId(i)];
            }
            continue;
        }
        for p in 0..px.min(k) {
            let q = k - 1 - p;
            if q >= py {
                continue;
            }
            for (si, s) in x.cells(p).iter().enumerate() {
                for (ti, t) in y.cells(q).iter().enumerate() {
                    let mut vertices = s.vertices.clone();
                    vertices.extend(t.vertices.iter().map(|v| VertexId(v.0 + nx)));
                    let mut faces = Vec::with_capacity(k + 1);
                    for j in 0..=p {
                        faces.push(if p == 0 {
                            y_index[q][ti]
                        } else {
                            p_index[&(p - 1, s.faces[j], q, ti)]
                        });
                    }
                    for j in 0..=q {
                        faces.push(if q == 0 {
                            x_index[p][si]
                        } else {
                            p_index[&(p, si, q - 1, t.faces[j])]
                        });
                    }
                    p_index.insert((p, si, q, ti), cells[k].len());
                    cells[k].push(Cell { vertices, faces });
                }
            }
        }
    }
    let mut labels = lx;
    labels.extend(ly);
    DeltaComplex::from_cells(cells, Some(labels)).expect("join is a valid complex")
}

fn points(labels: &[&str]) -> DeltaComplex {
    let facets: Vec<Vec<usize>> = (0..labels.len()).map(|i| vec![i]).collect();
    DeltaComplex::from_facets(&facets)
        .unwrap()
        .with_labels(labels.iter().map(|s| s.to_string()).collect())
}

/// Cone with a new apex, vertex 0.
pub fn cone(x: &DeltaComplex) -> DeltaComplex {
    let apex = points(&["apex"]);
    join_labeled(&apex, x, vec!["apex".into()], side_labels(x, ""))
}

/// Closed cone, with the base copy of `X` as the boundary-carrying subcomplex.
pub fn closed_cone(x: &DeltaComplex) -> (DeltaComplex, Subcomplex) {
    let c = cone(x);
    let base = c.deleted_star_subcomplex(VertexId(0)).expect("apex exists");
    (c, base)
}

/// Suspension `S⁰ ∗ X`; the suspension points are vertices 0 and 1.
pub fn suspension(x: &DeltaComplex) -> DeltaComplex {
    let s0 = points(&["north", "south"]);
    join_labeled(&s0, x, vec!["north".into(), "south".into()], side_labels(x, ""))
}

/// Disjoint union, vertices of `Y` shifted past those of `X`.
pub fn disjoint_union(x: &DeltaComplex, y: &DeltaComplex) -> DeltaComplex {
    let nx = x.n_vertices();
    let n = x.f_vector().len().max(y.f_vector().len());
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut level: Vec<Cell> = x.cells(k).to_vec();
        let off_below = if k == 0 { 0 } else { x.cells(k - 1).len() };
        for c in y.cells(k) {
            level.push(Cell {
                vertices: c.vertices.iter().map(|v| VertexId(v.0 + nx)).collect(),
                faces: c.faces.iter().map(|f| f + off_below).collect(),
            });
        }
        cells.push(level);
    }
    let mut labels = side_labels(x, "L.");
    labels.extend(side_labels(y, "R."));
    DeltaComplex::from_cells(cells, Some(labels)).expect("disjoint union is valid")
}

/// Staircase triangulation of `|X| × |Y|` on vertex pairs ordered lexicographically.
pub fn product(x: &DeltaComplex, y: &DeltaComplex) -> Result<DeltaComplex> {
    if !x.is_simplicial() || !y.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let ny = y.n_vertices();
    let mut facets = Vec::new();
    for fx in x.facet_vertex_lists() {
        for fy in y.facet_vertex_lists() {
            let (p, q) = (fx.len() - 1, fy.len() - 1);
            // monotone lattice paths from (0,0) to (p,q)
            for mask in 0u64..(1u64 << (p + q)) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                let (mut i, mut j) = (0, 0);
                let mut simplex = vec![fx[0] * ny + fy[0]];
                for step in 0..p + q {
                    if mask >> step & 1 == 1 {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    simplex.push(fx[i] * ny + fy[j]);
                }
                facets.push(simplex);
            }
        }
    }
    facets.sort();
    facets.dedup();
    let out = DeltaComplex::from_facets(&facets)?;
    // vertex ids were dense pairs; keep readable labels
    let used: BTreeSet<usize> = facets.iter().flatten().copied().collect();
    let labels = used
        .iter()
        .map(|&id| format!("({},{})", x.label(VertexId(id / ny)), y.label(VertexId(id % ny))))
        .collect();
    Ok(out.with_labels(labels))
}

/// A simplicial isomorphism between a subcomplex of `X` and a subcomplex of `Y`,
/// given on vertices as `y ↦ x`.
#[derive(Clone, Debug)]
pub struct GluingMap {
    pub x_sub: Subcomplex,
    pub y_sub: Subcomplex,
    pub y_to_x: BTreeMap<VertexId, VertexId>,
}

/// Pushout `X ∪_h Y`: `Y`'s subcomplex is identified with `X`'s via `h`.
pub fn glue(x: &DeltaComplex, y: &DeltaComplex, h: &GluingMap) -> Result<DeltaComplex> {
    if !x.is_regular() || !y.is_regular() {
        return Err(Error::NotRegular);
    }
    let yv = h.y_sub.vertices();
    let xv = h.x_sub.vertices();
    if yv.len() != xv.len() || h.y_to_x.len() != yv.len() {
        return Err(Error::BadGluing("vertex sets differ in size".into()));
    }
    for v in &yv {
        match h.y_to_x.get(v) {
            Some(w) if h.x_sub.contains((0, w.0)) => {}
            _ => return Err(Error::BadGluing(format!("{v} is not mapped into the subcomplex"))),
        }
    }
    let images: HashSet<VertexId> = h.y_to_x.values().copied().collect();
    if images.len() != yv.len() {
        return Err(Error::BadGluing("vertex map is not injective".into()));
    }
    // vertex ids of the result
    let nx = x.n_vertices();
    let mut vmap: Vec<VertexId> = vec![VertexId(usize::MAX); y.n_vertices()];
    let mut next = nx;
    for v in y.vertices() {
        vmap[v.0] = match h.y_to_x.get(&v) {
            Some(w) => *w,
            None => {
                next += 1;
                VertexId(next - 1)
            }
        };
    }
    // cell correspondence on the glued part, by vertex set
    let n = x.f_vector().len().max(y.f_vector().len());
    let mut x_by_set: Vec<HashMap<Vec<VertexId>, usize>> = vec![HashMap::new(); n];
    for (k, by_set) in x_by_set.iter_mut().enumerate() {
        for (i, c) in x.cells(k).iter().enumerate() {
            if h.x_sub.contains((k, i)) && by_set.insert(c.vertices.clone(), i).is_some() {
                return Err(Error::BadGluing("subcomplex of X is not simplicial".into()));
            }
        }
    }
    let mut cells: Vec<Vec<Cell>> = (0..n).map(|k| x.cells(k).to_vec()).collect();
    let mut y_index: Vec<Vec<usize>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut idx = Vec::with_capacity(y.cells(k).len());
        let mut matched = 0;
        for (i, c) in y.cells(k).iter().enumerate() {
            let mut verts: Vec<VertexId> = c.vertices.iter().map(|v| vmap[v.0]).collect();
            if h.y_sub.contains((k, i)) {
                verts.sort();
                let target = x_by_set[k]
                    .get(&verts)
                    .ok_or_else(|| Error::BadGluing(format!("image of cell ({k},{i}) is not a cell")))?;
                idx.push(*target);
                matched += 1;
                continue;
            }
            if k == 0 {
                idx.push(cells[0].len());
                cells[0].push(Cell {
                    vertices: verts,
                    faces: vec![],
                });
                continue;
            }
            // reorder vertices; the face opposite a vertex moves with it
            let mut order: Vec<usize> = (0..verts.len()).collect();
            order.sort_by_key(|&p| verts[p]);
            let vertices: Vec<VertexId> = order.iter().map(|&p| verts[p]).collect();
            let faces: Vec<usize> = order.iter().map(|&p| y_index[k - 1][c.faces[p]]).collect();
            idx.push(cells[k].len());
            cells[k].push(Cell { vertices, faces });
        }
        if matched != h.x_sub.count(k) {
            return Err(Error::BadGluing(format!("degree {k}: subcomplexes differ in size")));
        }
        y_index.push(idx);
    }
    let mut labels = side_labels(x, "");
    let extra: Vec<(VertexId, String)> = y
        .vertices()
        .filter(|v| !h.y_to_x.contains_key(v))
        .map(|v| (vmap[v.0], format!("{}'", y.label(v))))
        .collect();
    labels.extend(extra.into_iter().map(|e| e.1));
    DeltaComplex::from_cells(cells, Some(labels))
}

/// Double `D(X) = X ∪_{∂X} X`.
pub fn double(x: &DeltaComplex, boundary: &Subcomplex) -> Result<DeltaComplex> {
    let h = GluingMap {
        x_sub: boundary.clone(),
        y_sub: boundary.clone(),
        y_to_x: boundary.vertices().into_iter().map(|v| (v, v)).collect(),
    };
    glue(x, x, &h)
}

/// A finite group of simplicial automorphisms given by generating vertex permutations.
#[derive(Clone, Debug)]
pub struct SimplicialAction {
    pub generators: Vec<Vec<usize>>,
    pub elements: Vec<Vec<usize>>,
}

impl SimplicialAction {
    /// Closes the generators under composition, failing past `bound` elements
    /// or when a generator is not an automorphism of `x`.
    pub fn new(x: &DeltaComplex, generators: Vec<Vec<usize>>, bound: usize) -> Result<SimplicialAction> {
        if !x.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let n = x.n_vertices();
        for g in &generators {
            check_automorphism(x, g)?;
        }
        let id: Vec<usize> = (0..n).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in &generators {
                let prod: Vec<usize> = e.iter().map(|&v| g[v]).collect();
                if seen.insert(prod.clone()) {
                    if elements.len() >= bound {
                        return Err(Error::GroupTooLarge(bound));
                    }
                    elements.push(prod.clone());
                    queue.push_back(prod);
                }
            }
        }
        Ok(SimplicialAction {
            generators,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Checks that a vertex permutation maps every cell onto a cell.
pub fn check_automorphism(x: &DeltaComplex, g: &[usize]) -> Result<()> {
    let n = x.n_vertices();
    if g.len() != n {
        return Err(Error::NotAutomorphism(format!("permutation has length {} for {n} vertices", g.len())));
    }
    let mut hit = vec![false; n];
    for &v in g {
        if v >= n || hit[v] {
            return Err(Error::NotAutomorphism("not a permutation".into()));
        }
        hit[v] = true;
    }
    let maximal: HashSet<CellRef> = x.maximal_cells().into_iter().collect();
    for &r in &maximal {
        let mut img: Vec<VertexId> = x.cell(r).vertices.iter().map(|v| VertexId(g[v.0])).collect();
        img.sort();
        match x.find_cell(&img) {
            Some(s) if maximal.contains(&s) => {}
            _ => return Err(Error::NotAutomorphism(format!("cell {r:?} is not mapped to a cell"))),
        }
    }
    Ok(())
}

/// Result of a quotient: the orbit complex and the simplicial projection onto it
/// from `source`, which is `X` or its barycentric subdivision.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: DeltaComplex,
    pub source: DeltaComplex,
    pub projection: Vec<VertexId>,
    pub subdivided: bool,
    pub group_order: usize,
}

/// `|X| / G`. When vertex orbits already give a simplicial complex whose cells
/// are exactly the cell orbits, that complex is returned; otherwise the action
/// is lifted to the barycentric subdivision, whose flag orbits form a regular
/// delta complex.
pub fn quotient_by_action(x: &DeltaComplex, g: &SimplicialAction) -> Result<Quotient> {
    if g.order() == 1 {
        return Ok(Quotient {
            complex: x.clone(),
            source: x.clone(),
            projection: x.vertices().collect(),
            subdivided: false,
            group_order: 1,
        });
    }
    if let Some(q) = direct_quotient(x, g) {
        return Ok(q);
    }
    flag_quotient(x, g)
}

fn vertex_orbits(n: usize, g: &SimplicialAction) -> Vec<usize> {
    let mut orbit = vec![usize::MAX; n];
    let mut count = 0;
    for v in 0..n {
        if orbit[v] != usize::MAX {
            continue;
        }
        for e in &g.elements {
            orbit[e[v]] = count;
        }
        count += 1;
    }
    orbit
}

fn direct_quotient(x: &DeltaComplex, g: &SimplicialAction) -> Option<Quotient> {
    let orbit = vertex_orbits(x.n_vertices(), g);
    for k in 1..x.f_vector().len() {
        // image set → the cell orbit that produced it
        let mut seen: HashMap<Vec<usize>, BTreeSet<Vec<VertexId>>> = HashMap::new();
        for c in x.cells(k) {
            let mut img: Vec<usize> = c.vertices.iter().map(|v| orbit[v.0]).collect();
            img.sort_unstable();
            if img.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            let cell_orbit: BTreeSet<Vec<VertexId>> = g
                .elements
                .iter()
                .map(|e| {
                    let mut s: Vec<VertexId> = c.vertices.iter().map(|v| VertexId(e[v.0])).collect();
                    s.sort();
                    s
                })
                .collect();
            match seen.get(&img) {
                Some(o) if *o != cell_orbit => return None,
                Some(_) => {}
                None => {
                    seen.insert(img, cell_orbit);
                }
            }
        }
    }
    let facets: Vec<Vec<usize>> = x
        .facet_vertex_lists()
        .into_iter()
        .map(|f| f.into_iter().map(|v| orbit[v]).collect())
        .collect::<BTreeSet<Vec<usize>>>()
        .into_iter()
        .map(|mut f| {
            f.sort_unstable();
            f
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let complex = DeltaComplex::from_facets(&facets).ok()?;
    // from_facets renumbers densely in increasing order, matching orbit ids
    let labels: Vec<String> = {
        let mut first = vec![None; complex.n_vertices()];
        for v in x.vertices() {
            if first[orbit[v.0]].is_none() {
                first[orbit[v.0]] = Some(format!("[{}]", x.label(v)));
            }
        }
        first.into_iter().map(|s| s.unwrap_or_default()).collect()
    };
    Some(Quotient {
        complex: complex.with_labels(labels),
        source: x.clone(),
        projection: orbit.into_iter().map(VertexId).collect(),
        subdivided: false,
        group_order: g.order(),
    })
}

fn flag_quotient(x: &DeltaComplex, g: &SimplicialAction) -> Result<Quotient> {
    let sd = x.barycentric_subdivision();
    // sd vertex id ↔ cell of x, degree-major
    let f = x.f_vector();
    let offsets: Vec<usize> = f
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let set_index = x.vertex_set_index();
    let act_on_sd = |e: &[usize], s: usize| -> usize {
        let k = offsets.iter().rposition(|&o| o <= s).unwrap();
        let cell = &x.cells(k)[s - offsets[k]];
        let mut img: Vec<VertexId> = cell.vertices.iter().map(|v| VertexId(e[v.0])).collect();
        img.sort();
        offsets[k] + set_index[k][&img]
    };
    let n_sd = sd.n_vertices();
    // orbits of sd vertices; ids increase with the degree of the originating cell
    let mut orbit = vec![usize::MAX; n_sd];
    let mut count = 0;
    for s in 0..n_sd {
        if orbit[s] != usize::MAX {
            continue;
        }
        for e in &g.elements {
            orbit[act_on_sd(e, s)] = count;
        }
        count += 1;
    }
    // orbit of each sd cell, keyed by the lexicographically least image tuple
    let n = sd.f_vector().len();
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); n];
    let mut cell_orbit: Vec<Vec<usize>> = Vec::with_capacity(n);
    let sd_sets = sd.vertex_set_index();
    for k in 0..n {
        let mut orb = vec![usize::MAX; sd.cells(k).len()];
        for (i, c) in sd.cells(k).iter().enumerate() {
            if orb[i] != usize::MAX {
                continue;
            }
            let id = cells[k].len();
            let verts: Vec<usize> = c.vertices.iter().map(|v| v.0).collect();
            for e in &g.elements {
                let img: Vec<VertexId> = verts.iter().map(|&s| VertexId(act_on_sd(e, s))).collect();
                let j = sd_sets[k][&img];
                if orb[j] != usize::MAX && orb[j] != id {
                    return Err(Error::Inconsistency("flag orbits overlap".into()));
                }
                orb[j] = id;
            }
            let faces = if k == 0 {
                vec![]
            } else {
                c.faces.iter().map(|&fc| cell_orbit[k - 1][fc]).collect()
            };
            let vertices: Vec<VertexId> = c.vertices.iter().map(|v| VertexId(orbit[v.0])).collect();
            cells[k].push(Cell { vertices, faces });
        }
        cell_orbit.push(orb);
    }
    // vertex cells must be numbered by orbit id
    let mut vcells = vec![Cell {
        vertices: vec![],
        faces: vec![],
    }; count];
    for c in &cells[0] {
        vcells[c.vertices[0].0] = c.clone();
    }
    let remap: Vec<usize> = cells[0].iter().map(|c| c.vertices[0].0).collect();
    cells[0] = vcells;
    if n > 1 {
        for c in cells[1].iter_mut() {
            for fc in c.faces.iter_mut() {
                *fc = remap[*fc];
            }
        }
    }
    let labels: Vec<String> = {
        let mut first = vec![None; count];
        for s in sd.vertices() {
            if first[orbit[s.0]].is_none() {
                first[orbit[s.0]] = Some(format!("[{}]", sd.label(s)));
            }
        }
        first.into_iter().map(|s| s.unwrap_or_default()).collect()
    };
    let complex = DeltaComplex::from_cells(cells, Some(labels))?;
    Ok(Quotient {
        complex,
        source: sd,
        projection: orbit.into_iter().map(VertexId).collect(),
        subdivided: true,
        group_order: g.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology, HomologyGroup};
    use crate::ring::Ring;

    fn circle() -> DeltaComplex {
        DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    fn square_circle() -> DeltaComplex {
        DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
    }

    #[test]
    fn cone_over_circle_is_disk() {
        let c = cone(&circle());
        assert_eq!(c.f_vector(), vec![4, 6, 3]);
        let h = homology(&c, Ring::Z);
        assert_eq!(h, vec![HomologyGroup::z(1, &[]), HomologyGroup::z(0, &[]), HomologyGroup::z(0, &[])]);
        assert!(c.is_simplicial());
        assert_eq!(c.link(VertexId(0)).unwrap().f_vector(), vec![3, 3]);
    }

    #[test]
    fn suspension_of_square_is_octahedron() {
        let s = suspension(&square_circle());
        assert_eq!(s.f_vector(), vec![6, 12, 8]);
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn join_counts() {
        let x = circle();
        let y = square_circle();
        let j = join(&x, &y);
        assert_eq!(j.f_vector(), vec![7, 3 + 4 + 3 * 4, 3 * 4 + 3 * 4, 3 * 4]);
        assert!(j.is_simplicial());
    }

    #[test]
    fn torus_product() {
        let t = product(&circle(), &circle()).unwrap();
        assert_eq!(t.f_vector(), vec![9, 27, 18]);
        assert_eq!(
            homology(&t, Ring::Z),
            vec![HomologyGroup::z(1, &[]), HomologyGroup::z(2, &[]), HomologyGroup::z(1, &[])]
        );
    }

    #[test]
    fn gluing_two_triangles_gives_sphere() {
        let d = DeltaComplex::from_facets(&[vec![0, 1, 2]]).unwrap();
        let rim = Subcomplex::closure(&d, [(1, 0), (1, 1), (1, 2)]);
        let s = double(&d, &rim).unwrap();
        assert_eq!(s.f_vector(), vec![3, 3, 2]);
        assert!(!s.is_simplicial());
        assert_eq!(homology(&s, Ring::Z)[2], HomologyGroup::z(1, &[]));
    }

    #[test]
    fn trivial_group_quotient() {
        let x = circle();
        let g = SimplicialAction::new(&x, vec![], 10).unwrap();
        let q = quotient_by_action(&x, &g).unwrap();
        assert_eq!(q.complex, x);
    }

    #[test]
    fn rotation_of_hexagon() {
        let hex = DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![0, 5]]).unwrap();
        let rot: Vec<usize> = (0..6).map(|i| (i + 2) % 6).collect();
        let g = SimplicialAction::new(&hex, vec![rot], 10).unwrap();
        assert_eq!(g.order(), 3);
        let q = quotient_by_action(&hex, &g).unwrap();
        assert_eq!(homology(&q.complex, Ring::Z)[1], HomologyGroup::z(1, &[]));
        assert_eq!(q.complex.euler_characteristic() * 3, hex.euler_characteristic());
    }

    #[test]
    fn bad_permutation_rejected() {
        let x = square_circle();
        assert!(SimplicialAction::new(&x, vec![vec![0, 2, 1, 3]], 10).is_err());
    }
}
