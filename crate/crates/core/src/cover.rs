//! The ramified orientation double cover.
//!
//! Over a cell `ρ` the cover has one cell per class of pairs `(σ, o)`, where `σ`
//! is a top cell containing `ρ` and `o = ±1`; pairs are glued across ridges
//! containing `ρ` whenever their induced orientations cancel. An orientable
//! star gives two classes, a non-orientable one a single class.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CellRef, DeltaComplex, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CoverComplex {
    pub complex: DeltaComplex,
    /// The base actually covered; a subdivision when the input was not simplicial.
    pub base: DeltaComplex,
    pub subdivided: bool,
    /// Base vertex under each cover vertex.
    pub projection: Vec<usize>,
    /// The deck involution on vertices.
    pub involution: Vec<usize>,
    /// The deck involution on cells of every degree.
    pub cell_involution: Vec<Vec<usize>>,
    /// Base cell under each cover cell.
    pub cell_projection: Vec<Vec<usize>>,
    /// Base vertices with a single preimage.
    pub ramification: Vec<VertexId>,
    /// Base cells with a single preimage, by degree.
    pub ramified_cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSummary {
    pub f_vector: Vec<usize>,
    pub base_f_vector: Vec<usize>,
    pub subdivided: bool,
    pub ramification: Vec<String>,
    pub euler_characteristic: i64,
    pub base_euler_characteristic: i64,
    /// `Σ (-1)^k` over ramified cells.
    pub ramification_euler_characteristic: i64,
}

impl CoverComplex {
    pub fn summary(&self) -> CoverSummary {
        let chi_ram = self
            .ramified_cells
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum();
        CoverSummary {
            f_vector: self.complex.f_vector(),
            base_f_vector: self.base.f_vector(),
            subdivided: self.subdivided,
            ramification: self.ramification.iter().map(|&v| self.base.label(v)).collect(),
            euler_characteristic: self.complex.euler_characteristic(),
            base_euler_characteristic: self.base.euler_characteristic(),
            ramification_euler_characteristic: chi_ram,
        }
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = a;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Per base cell: the top cells containing it and the class of each `(σ, o)`.
struct Fiber {
    /// top cell index → position in the star
    pos: HashMap<usize, usize>,
    /// class of node `2 * pos + (o == -1)`
    class: Vec<usize>,
    classes: usize,
}

impl Fiber {
    fn class_of(&self, top: usize, sign: i8) -> usize {
        self.class[2 * self.pos[&top] + usize::from(sign < 0)]
    }
}

pub fn ramified_double_cover(x: &DeltaComplex) -> Result<CoverComplex> {
    let n = x.dimension().ok_or_else(|| Error::Precondition("empty complex".into()))?;
    x.require_pure()?;
    if n == 0 {
        return Err(Error::Precondition("needs positive dimension".into()));
    }
    let subdivided = !x.is_simplicial();
    let base = x.ensure_simplicial();
    let x = &base;
    let ridge_cofaces = x.cofaces(n - 1);
    if let Some(c) = ridge_cofaces.iter().find(|c| c.len() > 2) {
        return Err(Error::Branching { cofaces: c.len() });
    }
    let full = (1u64 << (n + 1)) - 1;
    // star of each cell as (top cell, mask of positions)
    let mut star: Vec<Vec<Vec<(usize, u64)>>> = (0..=n).map(|k| vec![Vec::new(); x.cells(k).len()]).collect();
    for s in 0..x.cells(n).len() {
        for mask in 1..=full {
            let (k, i) = x.face_by_mask((n, s), mask);
            star[k][i].push((s, mask));
        }
    }
    let mut fibers: Vec<Vec<Fiber>> = Vec::with_capacity(n + 1);
    for (k, level) in star.iter().enumerate() {
        let mut out = Vec::with_capacity(level.len());
        for entries in level {
            let pos: HashMap<usize, usize> = entries.iter().enumerate().map(|(p, e)| (e.0, p)).collect();
            let mut dsu = Dsu((0..2 * entries.len()).collect());
            if k < n {
                for &(s, mask) in entries {
                    for j in (0..=n).filter(|j| mask >> j & 1 == 0) {
                        let ridge = x.cells(n)[s].faces[j];
                        for &(t, l) in &ridge_cofaces[ridge] {
                            if t == s {
                                continue;
                            }
                            // (s, o) ~ (t, o') when o (-1)^j + o' (-1)^l = 0
                            let flip = (j + l) % 2 == 0;
                            let (a, b) = (2 * pos[&s], 2 * pos[&t]);
                            if flip {
                                dsu.union(a, b + 1);
                                dsu.union(a + 1, b);
                            } else {
                                dsu.union(a, b);
                                dsu.union(a + 1, b + 1);
                            }
                        }
                    }
                }
            }
            let mut ids: HashMap<usize, usize> = HashMap::new();
            let mut class = Vec::with_capacity(2 * entries.len());
            for node in 0..2 * entries.len() {
                let r = dsu.find(node);
                let next = ids.len();
                class.push(*ids.entry(r).or_insert(next));
            }
            let classes = ids.len();
            out.push(Fiber { pos, class, classes });
        }
        fibers.push(out);
    }
    // cover cells ordered by (base cell, class)
    let offsets: Vec<Vec<usize>> = fibers
        .iter()
        .map(|level| {
            level
                .iter()
                .scan(0usize, |acc, f| {
                    let o = *acc;
                    *acc += f.classes;
                    Some(o)
                })
                .collect()
        })
        .collect();
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); n + 1];
    let mut cell_projection: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut cell_involution: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for k in 0..=n {
        for (i, fib) in fibers[k].iter().enumerate() {
            for c in 0..fib.classes {
                let node = fib.class.iter().position(|&cl| cl == c).unwrap();
                let (s, _) = star[k][i][node / 2];
                let sign: i8 = if node % 2 == 0 { 1 } else { -1 };
                let lift = |r: CellRef| -> usize {
                    let f = &fibers[r.0][r.1];
                    offsets[r.0][r.1] + f.class_of(s, sign)
                };
                let base_cell = &x.cells(k)[i];
                let vertices: Vec<VertexId> = base_cell.vertices.iter().map(|v| VertexId(lift((0, v.0)))).collect();
                let faces: Vec<usize> = if k == 0 {
                    Vec::new()
                } else {
                    base_cell.faces.iter().map(|&f| lift((k - 1, f))).collect()
                };
                cells[k].push(Cell { vertices, faces });
                cell_projection[k].push(i);
                cell_involution[k].push(offsets[k][i] + fib.class_of(s, -sign));
            }
        }
    }
    let labels: Vec<String> = (0..cells[0].len())
        .map(|v| {
            let b = cell_projection[0][v];
            let tag = if fibers[0][b].classes == 1 {
                String::new()
            } else if v == offsets[0][b] {
                "+".into()
            } else {
                "-".into()
            };
            format!("{}{tag}", x.label(VertexId(b)))
        })
        .collect();
    let complex = DeltaComplex::from_cells(cells, Some(labels))?;
    let ramification = (0..x.n_vertices())
        .filter(|&v| fibers[0][v].classes == 1)
        .map(VertexId)
        .collect();
    let ramified_cells = fibers.iter().map(|l| l.iter().filter(|f| f.classes == 1).count()).collect();
    Ok(CoverComplex {
        projection: cell_projection[0].clone(),
        involution: cell_involution[0].clone(),
        complex,
        subdivided,
        cell_involution,
        cell_projection,
        ramification,
        ramified_cells,
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::suspension;
    use crate::corpus::*;
    use crate::homology::{homology, HomologyGroup};
    use crate::orientation::coherent_orientation;
    use crate::ring::Ring;

    fn check_structure(c: &CoverComplex) {
        let x = &c.complex;
        for k in 0..x.f_vector().len() {
            for (i, cell) in x.cells(k).iter().enumerate() {
                let j = c.cell_involution[k][i];
                assert_eq!(c.cell_involution[k][j], i);
                assert_eq!(c.cell_projection[k][j], c.cell_projection[k][i]);
                let img: Vec<usize> = cell.vertices.iter().map(|v| c.involution[v.0]).collect();
                let mut sorted = img.clone();
                sorted.sort();
                assert_eq!(x.cells(k)[j].vertices.iter().map(|v| v.0).collect::<Vec<_>>(), sorted);
            }
        }
        for v in 0..x.n_vertices() {
            let fixed = c.involution[v] == v;
            assert_eq!(fixed, c.ramification.contains(&VertexId(c.projection[v])));
        }
        let s = c.summary();
        assert_eq!(
            s.euler_characteristic,
            2 * s.base_euler_characteristic - s.ramification_euler_characteristic
        );
    }

    #[test]
    fn suspended_rp2() {
        let x = suspension(&rp2_6());
        let c = ramified_double_cover(&x).unwrap();
        check_structure(&c);
        assert_eq!(c.ramification, vec![VertexId(0), VertexId(1)]);
        let h = homology(&c.complex, Ring::Z);
        assert_eq!(
            h,
            vec![HomologyGroup::z(1, &[]), HomologyGroup::z(0, &[]), HomologyGroup::z(0, &[]), HomologyGroup::z(1, &[])]
        );
        assert_eq!(c.complex.euler_characteristic(), 2 * x.euler_characteristic() - 2);
        for v in x.vertices() {
            let orientable = coherent_orientation(&x.link(v).unwrap()).unwrap().assignment().is_some();
            assert_eq!(!orientable, c.ramification.contains(&v));
        }
    }

    #[test]
    fn manifold_covers() {
        let c = ramified_double_cover(&rp2_6()).unwrap();
        check_structure(&c);
        assert!(c.ramification.is_empty());
        assert_eq!(c.complex.f_vector(), vec![12, 30, 20]);
        assert!(c.complex.is_connected());
        assert_eq!(homology(&c.complex, Ring::Z)[2], HomologyGroup::z(1, &[]));
        let t = ramified_double_cover(&t2_7()).unwrap();
        check_structure(&t);
        assert_eq!(t.complex.components().0, 2);
        let k = ramified_double_cover(&klein_8()).unwrap();
        assert!(k.complex.is_connected());
        assert_eq!(homology(&k.complex, Ring::Z)[1], HomologyGroup::z(2, &[]));
    }
}
