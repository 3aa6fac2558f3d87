//! PL metric spaces given by edge lengths: Hausdorff measure, the fundamental
//! Lipschitz cycle and filling-radius bounds.

use nalgebra::DMatrix;
use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use nborient_core::orientation::{coherent_orientation, Coherence};
use nborient_core::space::EdgeLengths;
use nborient_core::{DeltaComplex, Error as CoreError};

use crate::error::{MassError, Result};
use crate::geometry::{realize, simplex_volume};
use crate::mass::{chain_mass, mass_lip_factor};
use crate::plmap::{PLChain, PLMap};

fn top_dimension(x: &DeltaComplex) -> Result<usize> {
    let n = x.dimension().ok_or_else(|| CoreError::Precondition("empty complex".into()))?;
    if !x.is_simplicial() {
        return Err(MassError::Metric("edge lengths need a simplicial complex".into()));
    }
    x.require_pure()?;
    Ok(n)
}

fn distances(x: &DeltaComplex, lengths: &EdgeLengths, cell: usize, n: usize) -> Result<DMatrix<f64>> {
    let vs: Vec<usize> = x.cells(n)[cell].vertices.iter().map(|v| v.0).collect();
    let mut d = DMatrix::zeros(vs.len(), vs.len());
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let l = lengths
                .get(vs[i], vs[j])
                .ok_or_else(|| MassError::Metric(format!("no length for edge {}-{}", vs[i], vs[j])))?;
            d[(i, j)] = l;
            d[(j, i)] = l;
        }
    }
    Ok(d)
}

/// `H^n(X) = Σ` volumes of the top cells.
pub fn hausdorff_measure(x: &DeltaComplex, lengths: &EdgeLengths) -> Result<f64> {
    let n = top_dimension(x)?;
    let mut total = 0.0;
    for s in 0..x.cells(n).len() {
        total += simplex_volume(&distances(x, lengths, s, n)?)
            .map_err(|e| MassError::Metric(format!("top cell {s}: {e}")))?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalCycle {
    pub chain: PLChain,
    /// `false` when the space is not orientable and the cycle is read mod 2.
    pub integral: bool,
}

/// Each top cell realized in `R^n` and mapped to itself, signed by a coherent orientation.
pub fn fundamental_cycle(x: &DeltaComplex, lengths: &EdgeLengths) -> Result<FundamentalCycle> {
    let n = top_dimension(x)?;
    let (signs, integral) = match coherent_orientation(x)? {
        Coherence::Coherent(a) => (a.signs, true),
        Coherence::Reversing(_) => (vec![1; x.cells(n).len()], false),
    };
    let mut chain = PLChain::zero(n);
    for (s, sign) in signs.iter().enumerate() {
        let pts: Vec<Vec<f64>> = realize(&distances(x, lengths, s, n)?)
            .map_err(|e| MassError::Metric(format!("top cell {s}: {e}")))?
            .iter()
            .map(|p| p.iter().copied().collect())
            .collect();
        chain.push(i64::from(*sign), PLMap::simplex(pts.clone(), pts)?.with_chart(s))?;
    }
    Ok(FundamentalCycle { chain, integral })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassProbe {
    pub name: String,
    pub pieces: usize,
    pub mass: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalMassReport {
    pub dimension: usize,
    pub integral: bool,
    pub hausdorff: f64,
    pub cycle_mass: f64,
    pub relative_error: f64,
    /// The fundamental cycle attains `H^n` to `1e-9` relative.
    pub attains: bool,
    /// Homologous cycles, none of which may fall below `H^n`.
    pub probes: Vec<MassProbe>,
    pub ok: bool,
}

/// Largest piece count for a subdivision probe.
pub const PROBE_PIECE_BUDGET: usize = 200_000;

/// Property probe: the fundamental cycle has mass `H^n(X)` and refined or
/// stellar-modified representatives never do better.
pub fn fundamental_mass_check(x: &DeltaComplex, lengths: &EdgeLengths) -> Result<FundamentalMassReport> {
    let n = top_dimension(x)?;
    let hausdorff = hausdorff_measure(x, lengths)?;
    let cycle = fundamental_cycle(x, lengths)?;
    let cycle_mass = chain_mass(&cycle.chain);
    let relative_error = (cycle_mass - hausdorff).abs() / hausdorff;
    let tol = 1e-9 * hausdorff;
    let mut probes = Vec::new();
    let mut refined = cycle.chain.clone();
    let factorial: usize = (1..=n + 1).product();
    for r in 1..=2 {
        if refined.piece_count() * factorial > PROBE_PIECE_BUDGET {
            break;
        }
        refined = refined.subdivided();
        let mass = chain_mass(&refined);
        probes.push(MassProbe {
            name: format!("barycentric subdivision {r}"),
            pieces: refined.piece_count(),
            mass,
            ok: mass >= hausdorff - tol,
        });
    }
    let stellar = stellar_modification(&cycle.chain)?;
    let mass = chain_mass(&stellar);
    probes.push(MassProbe {
        name: "stellar boundary modification".into(),
        pieces: stellar.piece_count(),
        mass,
        ok: mass >= hausdorff - tol,
    });
    let attains = relative_error <= 1e-9;
    Ok(FundamentalMassReport {
        dimension: n,
        integral: cycle.integral,
        hausdorff,
        cycle_mass,
        relative_error,
        attains,
        ok: attains && probes.iter().all(|p| p.ok),
        probes,
    })
}

/// `c − Σ a_σ ∂[b_σ, σ]` with `b_σ` the barycenter of `σ`: each simplex is
/// replaced by the cone from its barycenter over its boundary.
pub fn stellar_modification(c: &PLChain) -> Result<PLChain> {
    let mut out = c.clone();
    for (a, f) in &c.simplices().terms {
        let bary = |rows: &[Vec<f64>]| -> Vec<f64> {
            let mut acc = vec![0.0; rows[0].len()];
            for r in rows {
                acc.iter_mut().zip(r).for_each(|(s, v)| *s += v / rows.len() as f64);
            }
            acc
        };
        let mut domain = vec![bary(&f.points)];
        domain.extend(f.points.iter().cloned());
        let mut images = vec![bary(&f.images)];
        images.extend(f.images.iter().cloned());
        let mut cone = PLMap::simplex(domain, images)?;
        cone.chart = f.chart;
        let cone = PLChain::from_terms(vec![(*a, cone)])?;
        out.extend(cone.boundary()?, -1)?;
    }
    Ok(out.normalize())
}

/// Diameter of the edge graph with the given lengths.
pub fn graph_diameter(x: &DeltaComplex, lengths: &EdgeLengths) -> Result<f64> {
    let mut g: UnGraph<(), f64> = UnGraph::new_undirected();
    let nodes: Vec<NodeIndex> = (0..x.n_vertices()).map(|_| g.add_node(())).collect();
    for e in x.cells(1) {
        let (u, v) = (e.vertices[0].0, e.vertices[1].0);
        let l = lengths
            .get(u, v)
            .ok_or_else(|| MassError::Metric(format!("no length for edge {u}-{v}")))?;
        g.add_edge(nodes[u], nodes[v], l);
    }
    let mut diam = 0.0f64;
    for &s in &nodes {
        let dist = dijkstra(&g, s, None, |e| *e.weight());
        if dist.len() < nodes.len() {
            return Err(MassError::Metric("the edge graph is disconnected".into()));
        }
        diam = dist.values().fold(diam, |m, d| m.max(*d));
    }
    Ok(diam)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FillingRadiusBounds {
    /// Edge-graph diameter, an approximation of the metric diameter.
    pub graph_diameter: f64,
    /// `2 · diam`.
    pub trivial_bound: f64,
    pub hausdorff: f64,
    /// `√n^n · H^n`, bounding the mass of the fundamental current.
    pub current_mass_bound: f64,
    pub constant: f64,
    /// `C(n) · (√n^n · H^n)^{1/n}`.
    pub mass_bound: f64,
}

pub fn filling_radius_bounds(
    x: &DeltaComplex,
    lengths: &EdgeLengths,
    constant: Option<f64>,
) -> Result<FillingRadiusBounds> {
    let constant = constant.ok_or(MassError::MissingConstant)?;
    let n = top_dimension(x)?;
    let graph_diameter = graph_diameter(x, lengths)?;
    let hausdorff = hausdorff_measure(x, lengths)?;
    let current_mass_bound = mass_lip_factor(n) * hausdorff;
    Ok(FillingRadiusBounds {
        graph_diameter,
        trivial_bound: 2.0 * graph_diameter,
        hausdorff,
        current_mass_bound,
        constant,
        mass_bound: constant * current_mass_bound.powf(1.0 / n as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nborient_core::corpus::{rp2_6, sphere, t2_7};

    #[test]
    fn tetrahedron_boundary() {
        let x = sphere(2);
        let l = EdgeLengths::unit(&x);
        assert!((hausdorff_measure(&x, &l).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        let r = fundamental_mass_check(&x, &l).unwrap();
        assert!(r.ok && r.integral, "{r:?}");
        assert_eq!(r.probes.len(), 3);
        let b = filling_radius_bounds(&x, &l, Some(1.0)).unwrap();
        assert_eq!(b.trivial_bound, 2.0);
        assert_eq!(filling_radius_bounds(&x, &l, None), Err(MassError::MissingConstant));
    }

    #[test]
    fn flat_torus() {
        let x = t2_7();
        let l = EdgeLengths::unit(&x);
        let h = hausdorff_measure(&x, &l).unwrap();
        assert!((h - 14.0 * 3f64.sqrt() / 4.0).abs() < 1e-13);
        let r = fundamental_mass_check(&x, &l).unwrap();
        assert!(r.ok);
        let scaled = fundamental_mass_check(&x, &l.scaled(3.0)).unwrap();
        assert!((scaled.hausdorff / h - 9.0).abs() < 1e-12);
    }

    #[test]
    fn stellar_keeps_the_boundary() {
        let x = sphere(1);
        let c = fundamental_cycle(&x, &EdgeLengths::unit(&x)).unwrap().chain;
        let s = stellar_modification(&c).unwrap();
        assert_eq!(s.terms.len(), 6);
        assert_eq!(c.boundary().unwrap().terms.len(), 6);
        assert_eq!(s.boundary().unwrap(), c.boundary().unwrap());
    }

    #[test]
    fn mod_two_cycle() {
        let x = rp2_6();
        let c = fundamental_cycle(&x, &EdgeLengths::unit(&x)).unwrap();
        assert!(!c.integral);
    }

    #[test]
    fn degenerate_metric() {
        let x = sphere(2);
        let mut l = EdgeLengths::unit(&x);
        l.0.insert((0, 1), 2.0);
        assert!(matches!(hausdorff_measure(&x, &l), Err(MassError::Metric(_))));
    }
}
