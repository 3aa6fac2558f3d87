//! Smith normal form over a Euclidean domain.
//!
//! Elimination runs in two phases. Unit pivots are eliminated sparsely, cheapest
//! column first, which disposes of almost all of a boundary matrix. Whatever is
//! left has no unit entries and is reduced densely with extended-gcd row and
//! column operations. Both phases can record the unimodular transforms and their
//! inverses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::matrix::{axpy, dot, lookup, scale, IntMatrix, SparseVec};
use crate::ring::{Domain, Fp, Ring, Zz};

/// Which transforms to record.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Track {
    pub left: bool,
    pub right: bool,
}

impl Track {
    pub const NONE: Track = Track {
        left: false,
        right: false,
    };
    pub const BOTH: Track = Track {
        left: true,
        right: true,
    };
    pub const LEFT: Track = Track {
        left: true,
        right: false,
    };
    pub const RIGHT: Track = Track {
        left: false,
        right: true,
    };
}

/// `U·A·V = S`, where `S` is zero except `S[row_t][col_t] = d_t` for the
/// pivots `(row_t, col_t, d_t)`, listed so that `d_0 | d_1 | …`.
#[derive(Clone, Debug)]
pub struct SmithForm<D: Domain> {
    pub rows: usize,
    pub cols: usize,
    pub pivots: Vec<(usize, usize, D::Elem)>,
    /// Rows of `U`.
    pub u: Option<Vec<SparseVec<D::Elem>>>,
    /// Columns of `U⁻¹`.
    pub u_inv: Option<Vec<SparseVec<D::Elem>>>,
    /// Columns of `V`.
    pub v: Option<Vec<SparseVec<D::Elem>>>,
    /// Rows of `V⁻¹`.
    pub v_inv: Option<Vec<SparseVec<D::Elem>>>,
}

impl<D: Domain> SmithForm<D> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn diagonal(&self) -> Vec<D::Elem> {
        self.pivots.iter().map(|p| p.2.clone()).collect()
    }

    pub fn pivot_of_row(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.rows];
        for (t, p) in self.pivots.iter().enumerate() {
            out[p.0] = Some(t);
        }
        out
    }

    pub fn free_cols(&self) -> Vec<usize> {
        let mut used = vec![false; self.cols];
        for p in &self.pivots {
            used[p.1] = true;
        }
        (0..self.cols).filter(|&j| !used[j]).collect()
    }

    pub fn free_rows(&self) -> Vec<usize> {
        let mut used = vec![false; self.rows];
        for p in &self.pivots {
            used[p.0] = true;
        }
        (0..self.rows).filter(|&i| !used[i]).collect()
    }
}

/// Full factorization with row and column transforms.
pub fn smith<D: Domain>(d: &D, m: &IntMatrix, track: Track) -> SmithForm<D> {
    smith_rows(d, m.rows(), m.cols(), m.to_rows(d), track)
}

/// Factorization of a matrix given by sparse rows over the domain.
pub fn smith_rows<D: Domain>(
    d: &D,
    n_rows: usize,
    n_cols: usize,
    rows: Vec<SparseVec<D::Elem>>,
    track: Track,
) -> SmithForm<D> {
    let mut w = Work::new(d.clone(), n_rows, n_cols, rows, track);
    w.unit_phase();
    w.dense_phase();
    w.finish()
}

/// Nonzero invariant factors of an integer matrix.
pub fn invariant_factors(m: &IntMatrix) -> Vec<Int> {
    smith(&Zz, m, Track::NONE).diagonal()
}

/// Rank over the given coefficient ring.
pub fn rank_over(m: &IntMatrix, ring: Ring) -> usize {
    match ring {
        Ring::Integers | Ring::Rationals => smith(&Zz, m, Track::NONE).rank(),
        Ring::PrimeField(p) => smith(&Fp::new(p), m, Track::NONE).rank(),
    }
}

/// Dense integer Smith normal form `U·M·V = S` with `S` diagonal in the usual
/// position, `d_1 | d_2 | …`, `U` and `V` unimodular. The factorization is
/// checked before it is returned.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithNormalForm> {
    let f = smith(&Zz, m, Track::BOTH);
    let (r, c) = (m.rows(), m.cols());
    // order rows and columns so that pivots sit on the diagonal
    let mut row_order: Vec<usize> = f.pivots.iter().map(|p| p.0).collect();
    row_order.extend(f.free_rows());
    let mut col_order: Vec<usize> = f.pivots.iter().map(|p| p.1).collect();
    col_order.extend(f.free_cols());
    let u_rows = f.u.as_ref().unwrap();
    let u_inv_cols = f.u_inv.as_ref().unwrap();
    let v_cols = f.v.as_ref().unwrap();
    let v_inv_rows = f.v_inv.as_ref().unwrap();
    let u = IntMatrix::from_columns(r, row_order.iter().map(|&i| u_rows[i].clone()).collect())
        .transpose();
    let u_inv = IntMatrix::from_columns(r, row_order.iter().map(|&i| u_inv_cols[i].clone()).collect());
    let v = IntMatrix::from_columns(c, col_order.iter().map(|&j| v_cols[j].clone()).collect());
    let v_inv =
        IntMatrix::from_columns(c, col_order.iter().map(|&j| v_inv_rows[j].clone()).collect())
            .transpose();
    let mut s = IntMatrix::zeros(r, c);
    for (t, p) in f.pivots.iter().enumerate() {
        s.set(t, t, p.2.clone());
    }
    let out = SmithNormalForm {
        u,
        s,
        v,
        u_inv,
        v_inv,
    };
    check_factorization(m, &out)?;
    Ok(out)
}

/// Probabilistic check of `U·M·V = S`, `U·U⁻¹ = I`, `V·V⁻¹ = I` and the
/// divisibility chain, by multiplying with fixed pseudo-random vectors.
pub fn check_factorization(m: &IntMatrix, f: &SmithNormalForm) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rv = |n: usize, rng: &mut ChaCha8Rng| -> Vec<Int> {
        (0..n).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect()
    };
    for _ in 0..3 {
        let x = rv(m.cols(), &mut rng);
        let lhs = f.u.mul_vec(&m.mul_vec(&f.v.mul_vec(&x)));
        if lhs != f.s.mul_vec(&x) {
            return Err(Error::Inconsistency("U·M·V differs from S".into()));
        }
        if f.v.mul_vec(&f.v_inv.mul_vec(&x)) != x {
            return Err(Error::Inconsistency("V is not invertible".into()));
        }
        let y = rv(m.rows(), &mut rng);
        if f.u.mul_vec(&f.u_inv.mul_vec(&y)) != y {
            return Err(Error::Inconsistency("U is not invertible".into()));
        }
    }
    let diag: Vec<Int> = (0..m.rows().min(m.cols()))
        .map(|t| f.s.get(t, t))
        .take_while(|v| !v.is_zero())
        .collect();
    for w in diag.windows(2) {
        if !w[1].div_mod_floor(&w[0]).1.is_zero() || w[0].is_negative() {
            return Err(Error::Inconsistency("divisibility chain broken".into()));
        }
    }
    Ok(())
}

struct Work<D: Domain> {
    d: D,
    n_rows: usize,
    n_cols: usize,
    rows: Vec<SparseVec<D::Elem>>,
    col_rows: Vec<Vec<usize>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    pivots: Vec<(usize, usize, D::Elem)>,
    u: Option<Vec<SparseVec<D::Elem>>>,
    u_inv: Option<Vec<SparseVec<D::Elem>>>,
    v: Option<Vec<SparseVec<D::Elem>>>,
    v_inv: Option<Vec<SparseVec<D::Elem>>>,
}

fn identity<D: Domain>(d: &D, n: usize) -> Vec<SparseVec<D::Elem>> {
    (0..n).map(|i| vec![(i, d.one())]).collect()
}

impl<D: Domain> Work<D> {
    fn new(d: D, n_rows: usize, n_cols: usize, rows: Vec<SparseVec<D::Elem>>, track: Track) -> Self {
        let mut col_rows = vec![Vec::new(); n_cols];
        for (i, r) in rows.iter().enumerate() {
            for (j, _) in r {
                col_rows[*j].push(i);
            }
        }
        let u = track.left.then(|| identity(&d, n_rows));
        let u_inv = track.left.then(|| identity(&d, n_rows));
        let v = track.right.then(|| identity(&d, n_cols));
        let v_inv = track.right.then(|| identity(&d, n_cols));
        Work {
            d,
            n_rows,
            n_cols,
            rows,
            col_rows,
            row_alive: vec![true; n_rows],
            col_alive: vec![true; n_cols],
            pivots: Vec::new(),
            u,
            u_inv,
            v,
            v_inv,
        }
    }

    /// `row_l -= q * row_i` in the matrix and in the left transforms.
    fn row_sub(&mut self, l: usize, i: usize, q: &D::Elem) {
        let neg = self.d.neg(q);
        let src = self.rows[i].clone();
        let before: Vec<usize> = src
            .iter()
            .map(|e| e.0)
            .filter(|&c| lookup(&self.rows[l], c).is_some())
            .collect();
        axpy(&self.d, &mut self.rows[l], &neg, &src);
        for (c, _) in &src {
            let had = before.binary_search(c).is_ok();
            let has = lookup(&self.rows[l], *c).is_some();
            if had && !has {
                if let Some(p) = self.col_rows[*c].iter().position(|&x| x == l) {
                    self.col_rows[*c].swap_remove(p);
                }
            } else if !had && has {
                self.col_rows[*c].push(l);
            }
        }
        if let Some(u) = &mut self.u {
            let src = u[i].clone();
            axpy(&self.d, &mut u[l], &neg, &src);
        }
        if let Some(ui) = &mut self.u_inv {
            let src = ui[l].clone();
            axpy(&self.d, &mut ui[i], q, &src);
        }
    }

    fn unit_phase(&mut self) {
        loop {
            let mut order: Vec<usize> = (0..self.n_cols)
                .filter(|&j| self.col_alive[j] && !self.col_rows[j].is_empty())
                .collect();
            order.sort_by_key(|&j| (self.col_rows[j].len(), j));
            let mut progressed = false;
            for j in order {
                if !self.col_alive[j] || self.col_rows[j].is_empty() {
                    continue;
                }
                let mut best: Option<(usize, usize)> = None;
                for &i in &self.col_rows[j] {
                    let e = lookup(&self.rows[i], j).expect("column index consistent");
                    if self.d.is_unit(e) {
                        let len = self.rows[i].len();
                        if best.is_none_or(|b| (len, i) < b) {
                            best = Some((len, i));
                        }
                    }
                }
                if let Some((_, i)) = best {
                    self.eliminate_unit(i, j);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
    }

    fn eliminate_unit(&mut self, i: usize, j: usize) {
        let a = lookup(&self.rows[i], j).unwrap().clone();
        let a_inv = self.d.unit_inverse(&a);
        let mut others: Vec<usize> = self.col_rows[j].iter().copied().filter(|&l| l != i).collect();
        others.sort_unstable();
        for l in others {
            let q = self.d.mul(lookup(&self.rows[l], j).unwrap(), &a_inv);
            self.row_sub(l, i, &q);
        }
        // column operations clear the rest of row i; only the transforms change
        let row = std::mem::take(&mut self.rows[i]);
        for (c, val) in &row {
            if let Some(p) = self.col_rows[*c].iter().position(|&x| x == i) {
                self.col_rows[*c].swap_remove(p);
            }
            if *c == j {
                continue;
            }
            let q = self.d.mul(val, &a_inv);
            if let Some(v) = &mut self.v {
                let src = v[j].clone();
                let neg = self.d.neg(&q);
                axpy(&self.d, &mut v[*c], &neg, &src);
            }
            if let Some(vi) = &mut self.v_inv {
                let src = vi[*c].clone();
                axpy(&self.d, &mut vi[j], &q, &src);
            }
        }
        debug_assert!(self.col_rows[j].is_empty());
        self.row_alive[i] = false;
        self.col_alive[j] = false;
        // normalize the pivot by scaling row i
        let unit = self.d.normalizing_unit(&a);
        let dval = self.d.mul(&unit, &a);
        if let Some(u) = &mut self.u {
            scale(&self.d, &mut u[i], &unit);
        }
        if let Some(ui) = &mut self.u_inv {
            let inv = self.d.unit_inverse(&unit);
            scale(&self.d, &mut ui[i], &inv);
        }
        self.pivots.push((i, j, dval));
    }

    fn dense_phase(&mut self) {
        let rs: Vec<usize> = (0..self.n_rows)
            .filter(|&i| self.row_alive[i] && !self.rows[i].is_empty())
            .collect();
        let cs: Vec<usize> = (0..self.n_cols)
            .filter(|&j| self.col_alive[j] && !self.col_rows[j].is_empty())
            .collect();
        if rs.is_empty() || cs.is_empty() {
            return;
        }
        let mut col_pos = vec![usize::MAX; self.n_cols];
        for (b, &j) in cs.iter().enumerate() {
            col_pos[j] = b;
        }
        let mut a = vec![vec![self.d.zero(); cs.len()]; rs.len()];
        for (x, &i) in rs.iter().enumerate() {
            for (j, v) in &self.rows[i] {
                a[x][col_pos[*j]] = v.clone();
            }
        }
        let track = Track {
            left: self.u.is_some(),
            right: self.v.is_some(),
        };
        let dense = DenseSnf::run(&self.d, a, track);
        let d = &self.d;
        if let (Some(u), Some(ul)) = (&mut self.u, &dense.u) {
            let old: Vec<SparseVec<D::Elem>> = rs.iter().map(|&i| u[i].clone()).collect();
            for (x, &i) in rs.iter().enumerate() {
                let mut acc = Vec::new();
                for (y, coef) in ul[x].iter().enumerate() {
                    axpy(d, &mut acc, coef, &old[y]);
                }
                u[i] = acc;
            }
        }
        if let (Some(ui), Some(uli)) = (&mut self.u_inv, &dense.u_inv) {
            let old: Vec<SparseVec<D::Elem>> = rs.iter().map(|&i| ui[i].clone()).collect();
            for (x, &i) in rs.iter().enumerate() {
                let mut acc = Vec::new();
                for (y, row) in uli.iter().enumerate() {
                    axpy(d, &mut acc, &row[x], &old[y]);
                }
                ui[i] = acc;
            }
        }
        if let (Some(v), Some(vl)) = (&mut self.v, &dense.v) {
            let old: Vec<SparseVec<D::Elem>> = cs.iter().map(|&j| v[j].clone()).collect();
            for (x, &j) in cs.iter().enumerate() {
                let mut acc = Vec::new();
                for (y, row) in vl.iter().enumerate() {
                    axpy(d, &mut acc, &row[x], &old[y]);
                }
                v[j] = acc;
            }
        }
        if let (Some(vi), Some(vli)) = (&mut self.v_inv, &dense.v_inv) {
            let old: Vec<SparseVec<D::Elem>> = cs.iter().map(|&j| vi[j].clone()).collect();
            for (x, &j) in cs.iter().enumerate() {
                let mut acc = Vec::new();
                for (y, coef) in vli[x].iter().enumerate() {
                    axpy(d, &mut acc, coef, &old[y]);
                }
                vi[j] = acc;
            }
        }
        for (t, dval) in dense.diag.into_iter().enumerate() {
            self.pivots.push((rs[t], cs[t], dval));
        }
        for &i in &rs {
            self.rows[i].clear();
        }
    }

    fn finish(self) -> SmithForm<D> {
        SmithForm {
            rows: self.n_rows,
            cols: self.n_cols,
            pivots: self.pivots,
            u: self.u,
            u_inv: self.u_inv,
            v: self.v,
            v_inv: self.v_inv,
        }
    }
}

/// Dense Smith normal form of a small block, pivots end up on the diagonal.
struct DenseSnf<D: Domain> {
    d: D,
    a: Vec<Vec<D::Elem>>,
    u: Option<Vec<Vec<D::Elem>>>,
    u_inv: Option<Vec<Vec<D::Elem>>>,
    v: Option<Vec<Vec<D::Elem>>>,
    v_inv: Option<Vec<Vec<D::Elem>>>,
    diag: Vec<D::Elem>,
}

fn dense_identity<D: Domain>(d: &D, n: usize) -> Vec<Vec<D::Elem>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { d.one() } else { d.zero() }).collect())
        .collect()
}

impl<D: Domain> DenseSnf<D> {
    fn run(d: &D, a: Vec<Vec<D::Elem>>, track: Track) -> DenseSnf<D> {
        let m = a.len();
        let n = a.first().map_or(0, |r| r.len());
        let mut s = DenseSnf {
            d: d.clone(),
            a,
            u: track.left.then(|| dense_identity(d, m)),
            u_inv: track.left.then(|| dense_identity(d, m)),
            v: track.right.then(|| dense_identity(d, n)),
            v_inv: track.right.then(|| dense_identity(d, n)),
            diag: Vec::new(),
        };
        s.reduce(m, n);
        s
    }

    /// Rows `(t, i)` ← `[[s, x], [y, z]]·(t, i)`; the 2×2 matrix must be invertible.
    fn row_op(&mut self, t: usize, i: usize, s: &D::Elem, x: &D::Elem, y: &D::Elem, z: &D::Elem) {
        let d = self.d.clone();
        let comb = |rt: &[D::Elem], ri: &[D::Elem]| -> (Vec<D::Elem>, Vec<D::Elem>) {
            let nt = rt
                .iter()
                .zip(ri)
                .map(|(p, q)| d.add(&d.mul(s, p), &d.mul(x, q)))
                .collect();
            let ni = rt
                .iter()
                .zip(ri)
                .map(|(p, q)| d.add(&d.mul(y, p), &d.mul(z, q)))
                .collect();
            (nt, ni)
        };
        let (nt, ni) = comb(&self.a[t], &self.a[i]);
        self.a[t] = nt;
        self.a[i] = ni;
        if let Some(u) = &mut self.u {
            let (nt, ni) = comb(&u[t], &u[i]);
            u[t] = nt;
            u[i] = ni;
        }
        if let Some(ui) = &mut self.u_inv {
            let det = d.sub(&d.mul(s, z), &d.mul(x, y));
            let inv = d.unit_inverse(&det);
            for row in ui.iter_mut() {
                let (ct, ci) = (row[t].clone(), row[i].clone());
                row[t] = d.mul(&inv, &d.sub(&d.mul(z, &ct), &d.mul(y, &ci)));
                row[i] = d.mul(&inv, &d.sub(&d.mul(s, &ci), &d.mul(x, &ct)));
            }
        }
    }

    /// Columns: `col_t ← s·col_t + x·col_j`, `col_j ← y·col_t + z·col_j`.
    fn col_op(&mut self, t: usize, j: usize, s: &D::Elem, x: &D::Elem, y: &D::Elem, z: &D::Elem) {
        let d = self.d.clone();
        let apply = |mat: &mut Vec<Vec<D::Elem>>| {
            for row in mat.iter_mut() {
                let (ct, cj) = (row[t].clone(), row[j].clone());
                row[t] = d.add(&d.mul(s, &ct), &d.mul(x, &cj));
                row[j] = d.add(&d.mul(y, &ct), &d.mul(z, &cj));
            }
        };
        apply(&mut self.a);
        if let Some(v) = &mut self.v {
            apply(v);
        }
        if let Some(vi) = &mut self.v_inv {
            let det = d.sub(&d.mul(s, z), &d.mul(x, y));
            let inv = d.unit_inverse(&det);
            let (rt, rj) = (vi[t].clone(), vi[j].clone());
            vi[t] = rt
                .iter()
                .zip(&rj)
                .map(|(p, q)| d.mul(&inv, &d.sub(&d.mul(z, p), &d.mul(y, q))))
                .collect();
            vi[j] = rt
                .iter()
                .zip(&rj)
                .map(|(p, q)| d.mul(&inv, &d.sub(&d.mul(s, q), &d.mul(x, p))))
                .collect();
        }
    }

    fn reduce(&mut self, m: usize, n: usize) {
        let d = self.d.clone();
        let (zero, one) = (d.zero(), d.one());
        for t in 0..m.min(n) {
            // smallest remaining entry becomes the pivot
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let sz = d.size(&self.a[i][j]);
                    if sz != u64::MAX && best.is_none_or(|b| sz < b.0) {
                        best = Some((sz, i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            if bi != t {
                self.row_op(t, bi, &zero, &one, &one, &zero);
            }
            if bj != t {
                self.col_op(t, bj, &zero, &one, &one, &zero);
            }
            loop {
                for i in t + 1..m {
                    if d.is_zero(&self.a[i][t]) {
                        continue;
                    }
                    let (p, b) = (self.a[t][t].clone(), self.a[i][t].clone());
                    let (q, r) = d.div_rem(&b, &p);
                    if d.is_zero(&r) {
                        let nq = d.neg(&q);
                        self.row_op(t, i, &one, &zero, &nq, &one);
                    } else {
                        let (g, s, x) = d.ext_gcd(&p, &b);
                        let (bg, _) = d.div_rem(&b, &g);
                        let (pg, _) = d.div_rem(&p, &g);
                        let nbg = d.neg(&bg);
                        self.row_op(t, i, &s, &x, &nbg, &pg);
                    }
                }
                for j in t + 1..n {
                    if d.is_zero(&self.a[t][j]) {
                        continue;
                    }
                    let (p, b) = (self.a[t][t].clone(), self.a[t][j].clone());
                    let (q, r) = d.div_rem(&b, &p);
                    if d.is_zero(&r) {
                        let nq = d.neg(&q);
                        self.col_op(t, j, &one, &zero, &nq, &one);
                    } else {
                        let (g, s, x) = d.ext_gcd(&p, &b);
                        let (bg, _) = d.div_rem(&b, &g);
                        let (pg, _) = d.div_rem(&p, &g);
                        let nbg = d.neg(&bg);
                        self.col_op(t, j, &s, &x, &nbg, &pg);
                    }
                }
                if (t + 1..m).any(|i| !d.is_zero(&self.a[i][t])) {
                    continue;
                }
                // pivot must divide the remaining block
                let p = self.a[t][t].clone();
                let bad = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !d.is_zero(&d.div_rem(&self.a[i][j], &p).1))
                });
                match bad {
                    Some(i) => self.row_op(t, i, &one, &one, &zero, &one),
                    None => break,
                }
            }
            let unit = d.normalizing_unit(&self.a[t][t]);
            if unit != one {
                // scale row t by the unit
                let inv = d.unit_inverse(&unit);
                for v in self.a[t].iter_mut() {
                    *v = d.mul(&unit, v);
                }
                if let Some(u) = &mut self.u {
                    for v in u[t].iter_mut() {
                        *v = d.mul(&unit, v);
                    }
                }
                if let Some(ui) = &mut self.u_inv {
                    for row in ui.iter_mut() {
                        row[t] = d.mul(&inv, &row[t]);
                    }
                }
            }
            self.diag.push(self.a[t][t].clone());
        }
    }
}

/// Product `x·M` for a sparse row vector and a matrix given by sparse rows.
pub fn row_times<D: Domain>(d: &D, x: &SparseVec<D::Elem>, m_rows: &[SparseVec<D::Elem>]) -> SparseVec<D::Elem> {
    let mut acc = Vec::new();
    for (i, q) in x {
        axpy(d, &mut acc, q, &m_rows[*i]);
    }
    acc
}

/// Product `M·x` for a matrix given by sparse rows.
pub fn rows_times<D: Domain>(d: &D, m_rows: &[SparseVec<D::Elem>], x: &SparseVec<D::Elem>) -> Vec<D::Elem> {
    m_rows.iter().map(|r| dot(d, r, x)).collect()
}
