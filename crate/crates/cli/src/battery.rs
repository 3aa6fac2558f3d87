//! The theorem battery run by `verify-all`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use nborient_core::constructions::double;
use nborient_core::homology::{homology, MapClass};
use nborient_core::nb::{is_nb, is_nb_interior, local_homology_profile, NbStatus, NbVerdict};
use nborient_core::orientation::{
    check_nonorientable_profile, coherent_orientation, duality_table, fundamental_class, lefschetz_table,
    orientability_report, vanishing_check, DEFAULT_RINGS,
};
use nborient_core::space::{resolve, Space};
use nborient_core::{DeltaComplex, Ring};

use crate::error::{CliError, Result};
use crate::options::Budget;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceBattery {
    pub spec: Value,
    pub name: String,
    pub dimension: Option<usize>,
    pub status: Option<NbStatus>,
    /// Orientability over each ring, by condition (e).
    pub orientable: BTreeMap<String, bool>,
    pub checks: Vec<Check>,
    /// Why the space was not examined.
    pub skipped: Option<String>,
}

impl SpaceBattery {
    pub fn falsifications(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.ok)
            .map(|c| format!("{}: {}: {}", self.name, c.name, c.detail))
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            ok,
            detail: detail.into(),
        });
    }
}

pub fn nb_verdict(space: &Space) -> nborient_core::Result<NbVerdict> {
    match &space.deleted {
        Some(d) => is_nb_interior(&space.complex, d),
        None => is_nb(&space.complex),
    }
}

/// Runs every applicable check on one space.
pub fn battery(spec: &Value, budget: Budget) -> Result<SpaceBattery> {
    let space = resolve(spec)?;
    let mut b = SpaceBattery {
        spec: spec.clone(),
        name: space.name.clone(),
        dimension: space.complex.dimension(),
        status: None,
        orientable: BTreeMap::new(),
        checks: Vec::new(),
        skipped: None,
    };
    if let Err(e) = budget.admit(&space.complex) {
        b.skipped = Some(e.to_string());
        return Ok(b);
    }
    let verdict = nb_verdict(&space)?;
    b.status = Some(verdict.status);
    if !space.is_compact() || verdict.status == NbStatus::NotNb || verdict.status == NbStatus::Unknown {
        return Ok(b);
    }
    let x = &space.complex;
    let n = x.dim();
    let report = orientability_report(x, &DEFAULT_RINGS)?;
    for r in &report.rings {
        b.orientable.insert(r.ring.to_string(), r.orientable);
    }
    b.push(
        "equivalence",
        report.falsifications.is_empty(),
        if report.falsifications.is_empty() {
            "conditions agree over Z, Q, Z2, Z3".to_string()
        } else {
            report.falsifications.join("; ")
        },
    );
    match (&space.boundary, verdict.status) {
        (None, NbStatus::NbWithoutBoundary) if x.is_connected() => closed_checks(&mut b, &space, n)?,
        (Some(boundary), NbStatus::NbWithBoundary) => {
            let boundary = boundary.clone();
            boundary_checks(&mut b, &space, &boundary, n)?
        }
        _ => {}
    }
    Ok(b)
}

fn orientable(x: &DeltaComplex) -> nborient_core::Result<bool> {
    Ok(coherent_orientation(x)?.assignment().is_some())
}

fn closed_checks(b: &mut SpaceBattery, space: &Space, n: usize) -> Result<()> {
    let x = &space.complex;
    let v = vanishing_check(x, &DEFAULT_RINGS)?;
    let bad: Vec<String> = v
        .entries
        .iter()
        .filter(|e| !e.group.is_zero())
        .map(|e| format!("H_{n}(X∖st {}; {}) = {}", e.label, e.ring, e.group))
        .collect();
    b.push(
        "vanishing",
        v.ok,
        if v.ok { format!("{} deleted stars checked", v.entries.len()) } else { bad.join("; ") },
    );
    let hz = homology(x, Ring::Z);
    let orientable_z = b.orientable.get("Z").copied().unwrap_or(false);
    if orientable_z {
        let mut bad = Vec::new();
        for r in DEFAULT_RINGS {
            let h = homology(x, r);
            if !h[n].is_ring() {
                bad.push(format!("H_{n}(X;{r}) = {}", h[n]));
            }
            if let Err(e) = fundamental_class(x, r) {
                bad.push(format!("fundamental class over {r}: {e}"));
            }
        }
        b.push(
            "compact",
            bad.is_empty(),
            if bad.is_empty() { format!("H_{n}(X;G) = G and local isomorphisms at every vertex") } else { bad.join("; ") },
        );
        let t = &hz[n - 1].torsion;
        b.push("torsion_free", t.is_empty(), format!("H_{}(X;Z) = {}", n - 1, hz[n - 1]));
    } else {
        let p = check_nonorientable_profile(x)?;
        let bad: Vec<String> = p
            .checks
            .iter()
            .filter(|c| !c.ok)
            .map(|c| format!("{} = {} (expected {})", c.name, c.actual, c.expected))
            .collect();
        b.push("nonorientable_profile", p.ok, if p.ok { "H_n(Z)=0, tors H_{n-1}=Z2, H^n(Z)=Z2".into() } else { bad.join("; ") });
    }
    if space.alexandrov {
        if orientable_z {
            let d = duality_table(x, Ring::Q)?;
            let (top, below) = (d.at(n), d.at(n - 1));
            let ok = top == Some(MapClass::Iso) && below == Some(MapClass::Iso);
            b.push("duality", ok, format!("D over Q: k={n} {top:?}, k={} {below:?}", n - 1));
        }
        let profile = local_homology_profile(x)?;
        let bad: Vec<String> = profile.dichotomy_violations().iter().map(|p| p.label.clone()).collect();
        b.push(
            "dichotomy",
            bad.is_empty(),
            if bad.is_empty() { "every vertex is (Z,0) or (0,Z2)".to_string() } else { format!("vertices {bad:?}") },
        );
    }
    if space.positively_curved {
        let hq = homology(x, Ring::Q);
        let mut ok = hq[n - 1].is_zero();
        let mut detail = format!("H_{}(X;Q) = {}", n - 1, hq[n - 1]);
        if orientable_z {
            ok &= hz[n - 1].is_zero();
            detail.push_str(&format!(", H_{}(X;Z) = {}", n - 1, hz[n - 1]));
        }
        b.push("positive_curvature", ok, detail);
    }
    Ok(())
}

fn boundary_checks(b: &mut SpaceBattery, space: &Space, boundary: &nborient_core::Subcomplex, n: usize) -> Result<()> {
    let x = &space.complex;
    let mut bad = Vec::new();
    for r in DEFAULT_RINGS {
        let h = homology(x, r);
        if !h[n].is_zero() {
            bad.push(format!("H_{n}(X;{r}) = {}", h[n]));
        }
    }
    b.push(
        "top_homology_vanishes",
        bad.is_empty(),
        if bad.is_empty() { format!("H_{n}(X;G) = 0 for Z, Q, Z2, Z3") } else { bad.join("; ") },
    );
    let interior = orientable(x)?;
    let (bx, _) = x.extract(boundary);
    let bd = orientable(&bx)?;
    b.push(
        "boundary_orientable",
        !interior || bd,
        format!("interior orientable {interior}, boundary orientable {bd}"),
    );
    let dx = double(x, boundary)?;
    let dbl = orientable(&dx)?;
    b.push("double", interior == dbl, format!("interior orientable {interior}, double orientable {dbl}"));
    if space.alexandrov && interior {
        let t = lefschetz_table(x, boundary, Ring::Q)?;
        let (top, below) = (t.at(n), t.at(n - 1));
        let ok = top == Some(MapClass::Iso) && below == Some(MapClass::Iso);
        b.push("lefschetz", ok, format!("over Q: k={n} {top:?}, k={} {below:?}", n - 1));
    }
    Ok(())
}

/// Batteries for a list of specs, in order, on a worker pool.
pub fn run_all(specs: &[Value], budget: Budget) -> Vec<std::result::Result<SpaceBattery, String>> {
    use rayon::prelude::*;
    specs
        .par_iter()
        .map(|s| battery(s, budget).map_err(|e: CliError| format!("{s}: {e}")))
        .collect()
}
