//! Built-in triangulations.

use std::collections::BTreeSet;

use crate::complex::DeltaComplex;
use crate::constructions::{quotient_by_action, SimplicialAction};
use crate::error::Result;

/// Boundary of the `(n+1)`-simplex.
pub fn sphere(n: usize) -> DeltaComplex {
    let facets: Vec<Vec<usize>> = (0..n + 2)
        .rev()
        .map(|skip| (0..n + 2).filter(|&v| v != skip).collect())
        .collect();
    DeltaComplex::from_facets(&facets).expect("simplex boundary")
}

/// Boundary of the `(n+1)`-dimensional cross-polytope; vertex `2i` is `+e_i`
/// and `2i+1` is `-e_i`.
pub fn cross_polytope_sphere(n: usize) -> DeltaComplex {
    let facets: Vec<Vec<usize>> = (0u64..1 << (n + 1))
        .map(|signs| (0..=n).map(|i| 2 * i + (signs >> i & 1) as usize).collect())
        .collect();
    let labels = (0..=n)
        .flat_map(|i| [format!("+e{i}"), format!("-e{i}")])
        .collect();
    DeltaComplex::from_facets(&facets).expect("cross-polytope").with_labels(labels)
}

/// The vertex permutation `v ↦ -v` of the cross-polytope sphere.
pub fn cross_polytope_antipode(n: usize) -> Vec<usize> {
    (0..2 * (n + 1)).map(|v| v ^ 1).collect()
}

/// Polygon with `n ≥ 3` vertices.
pub fn circle(n: usize) -> DeltaComplex {
    let facets: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    DeltaComplex::from_facets(&facets).expect("polygon")
}

/// Two triangles sharing a vertex.
pub fn wedge_of_circles() -> DeltaComplex {
    DeltaComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 3], vec![3, 4], vec![0, 4]])
        .expect("bouquet")
}

/// Cone over a pentagon.
pub fn disk() -> DeltaComplex {
    let facets: Vec<Vec<usize>> = (0..5).map(|i| vec![0, 1 + i, 1 + (i + 1) % 5]).collect();
    DeltaComplex::from_facets(&facets).expect("disk")
}

pub fn rp2_6() -> DeltaComplex {
    let facets = [
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 2, 6],
        [2, 3, 5],
        [2, 4, 5],
        [2, 4, 6],
        [3, 4, 6],
        [3, 5, 6],
    ];
    DeltaComplex::from_facets(&facets.map(|f| f.to_vec())).expect("RP2")
}

/// Möbius's 7-vertex torus.
pub fn t2_7() -> DeltaComplex {
    let facets: Vec<Vec<usize>> = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    DeltaComplex::from_facets(&facets).expect("torus")
}

/// Klein bottle on 8 vertices, obtained from a twisted 4×4 grid by contracting
/// edges that satisfy the link condition.
pub fn klein_8() -> DeltaComplex {
    let facets = [
        [0, 1, 4],
        [0, 1, 7],
        [0, 2, 3],
        [0, 2, 6],
        [0, 3, 4],
        [0, 6, 7],
        [1, 2, 5],
        [1, 2, 6],
        [1, 3, 6],
        [1, 3, 7],
        [1, 4, 5],
        [2, 3, 5],
        [3, 4, 7],
        [3, 5, 6],
        [4, 5, 7],
        [5, 6, 7],
    ];
    DeltaComplex::from_facets(&facets.map(|f| f.to_vec())).expect("Klein bottle")
}

/// Twisted `m × n` grid: `(x, 0) ~ (x, n)` and `(0, y) ~ (m, n - y)`.
pub fn klein_grid(m: usize, n: usize) -> Result<DeltaComplex> {
    let id = |i: usize, j: usize| -> usize {
        if i == m {
            (n - j % n) % n
        } else {
            i * n + j % n
        }
    };
    let mut facets = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            facets.push(vec![a, b, c]);
            facets.push(vec![a, d, c]);
        }
    }
    DeltaComplex::from_facets(&facets)
}

/// Kühnel's 9-vertex complex projective plane.
pub fn cp2_kuehnel_9() -> DeltaComplex {
    let facets = [
        [1, 2, 3, 4, 5],
        [1, 2, 3, 4, 7],
        [1, 2, 3, 5, 8],
        [1, 2, 3, 7, 8],
        [1, 2, 4, 5, 6],
        [1, 2, 4, 6, 7],
        [1, 2, 5, 6, 8],
        [1, 2, 6, 7, 9],
        [1, 2, 6, 8, 9],
        [1, 2, 7, 8, 9],
        [1, 3, 4, 5, 9],
        [1, 3, 4, 7, 8],
        [1, 3, 4, 8, 9],
        [1, 3, 5, 6, 8],
        [1, 3, 5, 6, 9],
        [1, 3, 6, 8, 9],
        [1, 4, 5, 6, 7],
        [1, 4, 5, 7, 9],
        [1, 4, 7, 8, 9],
        [1, 5, 6, 7, 9],
        [2, 3, 4, 5, 9],
        [2, 3, 4, 6, 7],
        [2, 3, 4, 6, 9],
        [2, 3, 5, 7, 8],
        [2, 3, 5, 7, 9],
        [2, 3, 6, 7, 9],
        [2, 4, 5, 6, 8],
        [2, 4, 5, 8, 9],
        [2, 4, 6, 8, 9],
        [2, 5, 7, 8, 9],
        [3, 4, 6, 7, 8],
        [3, 4, 6, 8, 9],
        [3, 5, 6, 7, 8],
        [3, 5, 6, 7, 9],
        [4, 5, 6, 7, 8],
        [4, 5, 7, 8, 9],
    ];
    DeltaComplex::from_facets(&facets.map(|f| f.to_vec())).expect("CP2")
}

/// `RP³` as the antipodal quotient of the 16-cell boundary.
pub fn rp3() -> DeltaComplex {
    let s3 = cross_polytope_sphere(3);
    let g = SimplicialAction::new(&s3, vec![cross_polytope_antipode(3)], 2).expect("antipode is an automorphism");
    quotient_by_action(&s3, &g).expect("free action").complex
}

const PHI: f64 = 1.618_033_988_749_895;

/// Regular icosahedron: vertices `(0, ±1, ±φ)` and cyclic permutations,
/// edges at distance 2.
pub fn icosahedron() -> (DeltaComplex, Vec<usize>) {
    let mut pts: Vec<[f64; 3]> = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [PHI, -PHI] {
            pts.push([0.0, s1, s2]);
            pts.push([s1, s2, 0.0]);
            pts.push([s2, 0.0, s1]);
        }
    }
    let dist2 = |a: &[f64; 3], b: &[f64; 3]| (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>();
    let adj = |i: usize, j: usize| (dist2(&pts[i], &pts[j]) - 4.0).abs() < 1e-9;
    let mut facets = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if adj(a, b) && adj(b, c) && adj(a, c) {
                    facets.push(vec![a, b, c]);
                }
            }
        }
    }
    let antipode = (0..12)
        .map(|i| {
            let neg = pts[i].map(|x| -x);
            (0..12).find(|&j| dist2(&pts[j], &neg) < 1e-9).unwrap()
        })
        .collect();
    (DeltaComplex::from_facets(&facets).expect("icosahedron"), antipode)
}

/// Unit quaternions of the binary icosahedral group.
pub fn binary_icosahedral() -> Vec<[f64; 4]> {
    let mut out: Vec<[f64; 4]> = Vec::new();
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut q = [0.0; 4];
            q[i] = s;
            out.push(q);
        }
    }
    for signs in 0..16 {
        out.push(std::array::from_fn(|i| if signs >> i & 1 == 1 { -0.5 } else { 0.5 }));
    }
    let even = [[0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2], [1, 0, 3, 2], [1, 2, 0, 3], [1, 3, 2, 0],
        [2, 0, 1, 3], [2, 1, 3, 0], [2, 3, 0, 1], [3, 0, 2, 1], [3, 1, 0, 2], [3, 2, 1, 0]];
    let base = [0.0, 0.5, 0.5 / PHI, 0.5 * PHI];
    for p in even {
        for signs in 0..8 {
            let mut q = [0.0; 4];
            let mut bit = 0;
            for (slot, &src) in p.iter().enumerate() {
                let mut v = base[src];
                if src != 0 {
                    if signs >> bit & 1 == 1 {
                        v = -v;
                    }
                    bit += 1;
                }
                q[slot] = v;
            }
            out.push(q);
        }
    }
    out
}

fn qmul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

/// Boundary of the 600-cell on the binary icosahedral group, with the left
/// multiplication action as vertex permutations.
pub fn cell_600() -> (DeltaComplex, Vec<Vec<usize>>) {
    let q = binary_icosahedral();
    let n = q.len();
    let dot = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|i| a[i] * b[i]).sum::<f64>();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| (dot(&q[i], &q[j]) - PHI / 2.0).abs() < 1e-9).collect())
        .collect();
    let mut facets = Vec::new();
    for a in 0..n {
        for b in (a + 1..n).filter(|&b| adj[a][b]) {
            for c in (b + 1..n).filter(|&c| adj[a][c] && adj[b][c]) {
                for d in (c + 1..n).filter(|&d| adj[a][d] && adj[b][d] && adj[c][d]) {
                    facets.push(vec![a, b, c, d]);
                }
            }
        }
    }
    let find = |p: &[f64; 4]| (0..n).find(|&j| (0..4).all(|i| (q[j][i] - p[i]).abs() < 1e-9)).unwrap();
    let action = q
        .iter()
        .map(|g| q.iter().map(|h| find(&qmul(g, h))).collect())
        .collect();
    (DeltaComplex::from_facets(&facets).expect("600-cell"), action)
}

/// Poincaré homology sphere: the 600-cell modulo the binary icosahedral group,
/// made simplicial by subdivision and then reduced.
pub fn poincare_from_600_cell(budget: crate::sphere::SphereBudget, target: usize) -> Result<DeltaComplex> {
    let (x, action) = cell_600();
    let g = SimplicialAction::new(&x, action, 120)?;
    let q = quotient_by_action(&x, &g)?;
    let fine = q.complex.barycentric_subdivision();
    crate::sphere::reduce_vertices(&fine, budget, target)
}

/// Frozen output of [`poincare_from_600_cell`].
pub fn poincare_16() -> DeltaComplex {
    DeltaComplex::from_facets(&POINCARE_FACETS.iter().map(|f| f.to_vec()).collect::<Vec<_>>())
        .expect("Poincaré sphere")
}

const POINCARE_FACETS: &[[usize; 4]] = &[
    [0, 1, 2, 3],
    [0, 1, 2, 13],
    [0, 1, 3, 11],
    [0, 1, 11, 15],
    [0, 1, 13, 15],
    [0, 2, 3, 4],
    [0, 2, 4, 10],
    [0, 2, 10, 13],
    [0, 3, 4, 5],
    [0, 3, 5, 12],
    [0, 3, 11, 12],
    [0, 4, 5, 14],
    [0, 4, 9, 10],
    [0, 4, 9, 14],
    [0, 5, 12, 14],
    [0, 7, 9, 11],
    [0, 7, 9, 14],
    [0, 7, 11, 12],
    [0, 7, 12, 14],
    [0, 9, 10, 13],
    [0, 9, 11, 15],
    [0, 9, 13, 15],
    [1, 2, 3, 6],
    [1, 2, 6, 12],
    [1, 2, 7, 12],
    [1, 2, 7, 14],
    [1, 2, 13, 14],
    [1, 3, 6, 10],
    [1, 3, 8, 9],
    [1, 3, 8, 11],
    [1, 3, 9, 10],
    [1, 5, 7, 10],
    [1, 5, 7, 15],
    [1, 5, 8, 9],
    [1, 5, 8, 15],
    [1, 5, 9, 10],
    [1, 6, 10, 12],
    [1, 7, 10, 12],
    [1, 7, 13, 14],
    [1, 7, 13, 15],
    [1, 8, 11, 15],
    [2, 3, 4, 6],
    [2, 4, 6, 8],
    [2, 4, 8, 10],
    [2, 5, 8, 9],
    [2, 5, 8, 14],
    [2, 5, 9, 12],
    [2, 5, 12, 14],
    [2, 6, 8, 9],
    [2, 6, 9, 12],
    [2, 7, 12, 14],
    [2, 8, 10, 11],
    [2, 8, 11, 14],
    [2, 10, 11, 13],
    [2, 11, 13, 14],
    [3, 4, 5, 6],
    [3, 5, 6, 13],
    [3, 5, 12, 13],
    [3, 6, 10, 15],
    [3, 6, 13, 14],
    [3, 6, 14, 15],
    [3, 7, 8, 9],
    [3, 7, 8, 13],
    [3, 7, 9, 14],
    [3, 7, 13, 14],
    [3, 8, 11, 12],
    [3, 8, 12, 13],
    [3, 9, 10, 14],
    [3, 10, 14, 15],
    [4, 5, 6, 7],
    [4, 5, 7, 15],
    [4, 5, 14, 15],
    [4, 6, 7, 8],
    [4, 7, 8, 13],
    [4, 7, 13, 15],
    [4, 8, 10, 12],
    [4, 8, 12, 13],
    [4, 9, 10, 14],
    [4, 10, 12, 15],
    [4, 10, 14, 15],
    [4, 12, 13, 15],
    [5, 6, 7, 11],
    [5, 6, 11, 13],
    [5, 7, 10, 11],
    [5, 8, 14, 15],
    [5, 9, 10, 13],
    [5, 9, 12, 13],
    [5, 10, 11, 13],
    [6, 7, 8, 9],
    [6, 7, 9, 11],
    [6, 9, 11, 15],
    [6, 9, 12, 15],
    [6, 10, 12, 15],
    [6, 11, 13, 14],
    [6, 11, 14, 15],
    [7, 10, 11, 12],
    [8, 10, 11, 12],
    [8, 11, 14, 15],
    [9, 12, 13, 15],
];

/// Names accepted by [`by_name`].
pub fn names() -> Vec<&'static str> {
    vec![
        "sphere(n)",
        "cross_polytope_sphere(n)",
        "circle(n)",
        "RP2_6",
        "T2_7",
        "klein_8",
        "CP2_kuehnel_9",
        "poincare_16",
        "RP3",
        "icosahedron",
        "disk",
        "wedge_of_circles",
    ]
}

fn arg(name: &str, head: &str) -> Option<usize> {
    let rest = name.strip_prefix(head)?;
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')'));
    inner.or_else(|| rest.strip_prefix('_'))?.trim().parse().ok()
}

/// Looks up a built-in complex.
pub fn by_name(name: &str) -> Option<DeltaComplex> {
    if let Some(n) = arg(name, "sphere") {
        return Some(sphere(n));
    }
    if let Some(n) = arg(name, "cross_polytope_sphere") {
        return Some(cross_polytope_sphere(n));
    }
    if let Some(n) = arg(name, "circle") {
        return (n >= 3).then(|| circle(n));
    }
    Some(match name {
        "RP2_6" => rp2_6(),
        "T2_7" => t2_7(),
        "klein_8" => klein_8(),
        "CP2_kuehnel_9" => cp2_kuehnel_9(),
        "poincare_16" => poincare_16(),
        "RP3" => rp3(),
        "icosahedron" => icosahedron().0,
        "disk" => disk(),
        "wedge_of_circles" => wedge_of_circles(),
        _ => return None,
    })
}

/// Facet lists, for diffing generated triangulations.
pub fn facet_set(x: &DeltaComplex) -> BTreeSet<Vec<usize>> {
    x.facet_vertex_lists().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology, HomologyGroup};
    use crate::ring::Ring;
    use crate::sphere::recognize_sphere;

    fn z(r: usize, t: &[i64]) -> HomologyGroup {
        HomologyGroup::z(r, t)
    }

    #[test]
    fn small_surfaces() {
        assert_eq!(rp2_6().f_vector(), vec![6, 15, 10]);
        assert_eq!(homology(&rp2_6(), Ring::Z), vec![z(1, &[]), z(0, &[2]), z(0, &[])]);
        assert_eq!(t2_7().f_vector(), vec![7, 21, 14]);
        assert_eq!(homology(&t2_7(), Ring::Z), vec![z(1, &[]), z(2, &[]), z(1, &[])]);
        assert_eq!(klein_8().f_vector(), vec![8, 24, 16]);
        assert_eq!(homology(&klein_8(), Ring::Z), vec![z(1, &[]), z(1, &[2]), z(0, &[])]);
    }

    #[test]
    fn klein_grid_reduces_to_eight_vertices() {
        let g = klein_grid(4, 4).unwrap();
        assert_eq!(homology(&g, Ring::Z)[1], z(1, &[2]));
        let r = crate::sphere::reduce_vertices(&g, Default::default(), 8).unwrap();
        assert_eq!(r.n_vertices(), 8);
        assert_eq!(homology(&r, Ring::Z)[1], z(1, &[2]));
    }

    #[test]
    fn kuehnel_cp2() {
        let x = cp2_kuehnel_9();
        assert_eq!(x.f_vector(), vec![9, 36, 84, 90, 36]);
        assert_eq!(homology(&x, Ring::Z), vec![z(1, &[]), z(0, &[]), z(1, &[]), z(0, &[]), z(1, &[])]);
        for v in x.vertices() {
            assert!(recognize_sphere(&x.link(v).unwrap()).is_sphere());
        }
    }

    #[test]
    fn icosahedral_rp2() {
        let (ico, antipode) = icosahedron();
        assert_eq!(ico.f_vector(), vec![12, 30, 20]);
        let g = SimplicialAction::new(&ico, vec![antipode], 2).unwrap();
        let q = quotient_by_action(&ico, &g).unwrap();
        assert!(!q.subdivided);
        assert_eq!(q.complex.f_vector(), vec![6, 15, 10]);
        assert_eq!(homology(&q.complex, Ring::Z)[1], z(0, &[2]));
    }

    #[test]
    fn rp3_from_16_cell() {
        let x = rp3();
        assert_eq!(x.f_vector(), vec![40, 232, 384, 192]);
        assert!(x.is_regular());
        assert_eq!(homology(&x, Ring::Z), vec![z(1, &[]), z(0, &[2]), z(0, &[]), z(1, &[])]);
    }

    #[test]
    fn poincare_sphere() {
        let p = poincare_16();
        assert_eq!(p.n_vertices(), 16);
        assert_eq!(p.euler_characteristic(), 0);
        assert_eq!(homology(&p, Ring::Z), vec![z(1, &[]), z(0, &[]), z(0, &[]), z(1, &[])]);
        for v in p.vertices() {
            assert!(recognize_sphere(&p.link(v).unwrap()).is_sphere());
        }
        assert!(!recognize_sphere(&p).is_sphere());
    }

    #[test]
    fn binary_icosahedral_quotient() {
        let (x, action) = cell_600();
        assert_eq!(x.f_vector(), vec![120, 720, 1200, 600]);
        let g = SimplicialAction::new(&x, action, 120).unwrap();
        assert_eq!(g.order(), 120);
        let q = quotient_by_action(&x, &g).unwrap();
        assert!(q.subdivided);
        assert_eq!(q.complex.f_vector(), vec![22, 142, 240, 120]);
        assert_eq!(homology(&q.complex, Ring::Z), vec![z(1, &[]), z(0, &[]), z(0, &[]), z(1, &[])]);
    }

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("sphere(3)").unwrap().f_vector(), vec![5, 10, 10, 5]);
        assert_eq!(by_name("sphere_1").unwrap().f_vector(), vec![3, 3]);
        assert_eq!(by_name("cross_polytope_sphere(2)").unwrap().f_vector(), vec![6, 12, 8]);
        assert!(by_name("nonsense").is_none());
    }
}

