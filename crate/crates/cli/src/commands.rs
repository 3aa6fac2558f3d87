use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use nborient_core::constructions::{quotient_by_action, SimplicialAction};
use nborient_core::cover::ramified_double_cover;
use nborient_core::homology::{homology, relative_homology, HomologyGroup, MapClass};
use nborient_core::nb::{boundary_locus, local_homology_profile, manifold_part_certificate, NbStatus};
use nborient_core::orientation::{
    check_nonorientable_profile, duality_table, ConditionStatus, lefschetz_table, orientability_report, orientation_preserving,
    DEFAULT_RINGS,
};
use nborient_core::space::{default_corpus, resolve, EdgeLengths, Space, GROUP_BOUND};
use nborient_core::{Error as CoreError, Ring};
use nborient_mass::metric::{fundamental_mass_check, graph_diameter, hausdorff_measure};
use nborient_mass::filling_radius_bounds;

use crate::battery::{nb_verdict, run_all};
use crate::cache::Cache;
use crate::error::{CliError, Result};
use crate::options::RunOptions;
use crate::report::{Report, SpaceSummary};
use crate::selftest;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Homology,
    LocalProfile,
    NbCheck,
    OrientReport,
    DoubleCover,
    Duality,
    Quotient,
    Mass,
    VerifyAll,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Homology,
        Command::LocalProfile,
        Command::NbCheck,
        Command::OrientReport,
        Command::DoubleCover,
        Command::Duality,
        Command::Quotient,
        Command::Mass,
        Command::VerifyAll,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Homology => "homology",
            Command::LocalProfile => "local-profile",
            Command::NbCheck => "nb-check",
            Command::OrientReport => "orient-report",
            Command::DoubleCover => "double-cover",
            Command::Duality => "duality",
            Command::Quotient => "quotient",
            Command::Mass => "mass",
            Command::VerifyAll => "verify-all",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

/// A spec given inline or as a path to a JSON file; bare names need no quotes.
pub fn read_spec(arg: &str) -> Result<Value> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg)?
    } else {
        arg.to_string()
    };
    Ok(serde_json::from_str(&text).unwrap_or_else(|_| Value::String(text.trim().to_string())))
}

fn corpus_specs(opts: &RunOptions) -> Result<Vec<Value>> {
    match opts.corpus.as_deref() {
        None | Some("default") => default_corpus()
            .into_iter()
            .map(|s| serde_json::from_str(s).map_err(CliError::from))
            .collect(),
        Some(other) => match read_spec(other)? {
            Value::Array(specs) => Ok(specs),
            _ => Err(CliError::Parse("a corpus file must hold a JSON array of specs".into())),
        },
    }
}

/// Runs one command, consulting the cache when one is configured.
pub fn run(cmd: Command, spec: Option<Value>, opts: &RunOptions, cache: Option<&Cache>) -> Result<Report> {
    selftest::ensure()?;
    let spec = match (cmd, spec) {
        (Command::VerifyAll, s) => s.unwrap_or(Value::Null),
        (_, Some(s)) => s,
        (_, None) => return Err(CliError::Parse(format!("{cmd} needs a space spec"))),
    };
    let material = serde_json::to_string(&json!({
        "command": cmd.name(),
        "spec": spec,
        "options": opts.to_map(),
    }))?;
    let key = Cache::key(&material);
    if let Some(c) = cache {
        if let Some(r) = c.get(&key) {
            log::info!("cache hit {key} for {cmd}");
            return Ok(r);
        }
        log::debug!("cache miss {key} for {cmd}");
    }
    let report = execute(cmd, spec, opts)?;
    if let Some(c) = cache {
        c.put(&key, &report)?;
    }
    Ok(report)
}

/// Runs one command without the cache.
pub fn execute(cmd: Command, spec: Value, opts: &RunOptions) -> Result<Report> {
    let mut report = Report::new(cmd.name(), spec.clone(), opts.to_map());
    if cmd == Command::VerifyAll {
        verify_all(&mut report, opts)?;
        return Ok(report);
    }
    let space = resolve(&spec)?;
    opts.budget.admit(&space.complex)?;
    report.space = Some(SpaceSummary::of(&space));
    match cmd {
        Command::Homology => homology_cmd(&mut report, &space, opts)?,
        Command::LocalProfile => local_profile(&mut report, &space, opts)?,
        Command::NbCheck => nb_check(&mut report, &space)?,
        Command::OrientReport => orient_report(&mut report, &space, opts)?,
        Command::DoubleCover => double_cover(&mut report, &space)?,
        Command::Duality => duality(&mut report, &space, opts)?,
        Command::Quotient => quotient(&mut report, &spec, &space, opts)?,
        Command::Mass => mass(&mut report, &space, opts)?,
        Command::VerifyAll => unreachable!(),
    }
    Ok(report)
}

fn rings(opts: &RunOptions) -> Vec<Ring> {
    opts.ring.map_or_else(|| DEFAULT_RINGS.to_vec(), |r| vec![r])
}

fn strings(groups: &[HomologyGroup]) -> Vec<String> {
    groups.iter().map(|g| g.to_string()).collect()
}

fn require_compact(space: &Space, what: &str) -> Result<()> {
    if space.is_compact() {
        Ok(())
    } else {
        Err(CoreError::Precondition(format!("{what} needs a compact space; {} is an open cone", space.name)).into())
    }
}

fn homology_cmd(report: &mut Report, space: &Space, opts: &RunOptions) -> Result<()> {
    let mut absolute = BTreeMap::new();
    let mut relative = BTreeMap::new();
    for r in rings(opts) {
        let h = strings(&homology(&space.complex, r));
        report.line(format!("H_*(X;{r}) = ({})", h.join(", ")));
        absolute.insert(r.to_string(), h);
        let pair = space.boundary.as_ref().or(space.deleted.as_ref());
        if let Some(a) = pair {
            let h = strings(&relative_homology(&space.complex, a, r)?);
            report.line(format!("H_*(X,A;{r}) = ({})", h.join(", ")));
            relative.insert(r.to_string(), h);
        }
    }
    report.provenance("homology", "sparse Smith normal form of the cellular boundary matrices");
    report.result = json!({
        "homology": absolute,
        "relative_homology": if relative.is_empty() { Value::Null } else { json!(relative) },
        "euler_characteristic": space.complex.euler_characteristic(),
    });
    Ok(())
}

fn local_profile(report: &mut Report, space: &Space, opts: &RunOptions) -> Result<()> {
    let profile = local_homology_profile(&space.complex)?;
    let deleted = |v: nborient_core::VertexId| space.deleted.as_ref().is_some_and(|d| d.contains((0, v.0)));
    let vertices: Vec<_> = profile.vertices.iter().filter(|p| !deleted(p.vertex)).collect();
    let violations: Vec<String> = profile
        .dichotomy_violations()
        .iter()
        .filter(|p| !deleted(p.vertex) && !p.boundary)
        .map(|p| p.label.clone())
        .collect();
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    for p in &vertices {
        *classes.entry(format!("{:?}", p.class).to_lowercase()).or_default() += 1;
    }
    report.line(format!("vertex classes {classes:?}"));
    let manifold = match manifold_part_certificate(&space.complex, opts.sphere_budget()) {
        Ok(c) => {
            report.line(format!(
                "pseudomanifold {}, singular dimension {:?}, codimension ok {}",
                c.pseudomanifold, c.singular_dimension, c.codimension_ok
            ));
            json!(c)
        }
        Err(CoreError::Precondition(m)) => {
            report.line(format!("no manifold-part certificate: {m}"));
            Value::Null
        }
        Err(e) => return Err(e.into()),
    };
    if space.alexandrov && space.boundary.is_none() && !violations.is_empty() {
        report
            .falsifications
            .push(format!("local homology dichotomy fails at vertices {violations:?}"));
    }
    report.provenance("profile", "H_*(X|v) as shifted reduced homology of the vertex link");
    report.provenance("manifold_part", "link classes certified by bistellar sphere recognition");
    report.result = json!({
        "dimension": profile.dimension,
        "vertices": vertices,
        "dichotomy_violations": violations,
        "manifold_part": manifold,
    });
    Ok(())
}

fn nb_check(report: &mut Report, space: &Space) -> Result<()> {
    let verdict = nb_verdict(space)?;
    report.line(format!("status {:?}: {}", verdict.status, verdict.reason));
    let boundary = if space.is_compact() && verdict.status != NbStatus::NotNb {
        let b = boundary_locus(&space.complex)?;
        report.line(format!("boundary vertices {}", b.vertices.len()));
        json!(b)
    } else {
        Value::Null
    };
    report.provenance("status", "recursive link recognition; links cached by structure hash");
    report.result = json!({ "verdict": verdict, "boundary": boundary });
    Ok(())
}

fn orient_report(report: &mut Report, space: &Space, opts: &RunOptions) -> Result<()> {
    require_compact(space, "orient-report")?;
    let r = orientability_report(&space.complex, &rings(opts))?;
    for ring in &r.rings {
        let passed: String = ring
            .conditions
            .iter()
            .map(|(c, res)| {
                let mark = match res.status {
                    ConditionStatus::Pass => "+",
                    ConditionStatus::Fail => "-",
                    ConditionStatus::NotApplicable => "n/a",
                };
                format!("{c}:{mark}")
            })
            .collect::<Vec<_>>()
            .join(" ");
        report.line(format!("{}: orientable {} [{passed}]", ring.ring, ring.orientable));
    }
    report.falsifications.extend(r.falsifications.iter().cloned());
    let profile = if space.boundary.is_none() && r.ring(Ring::Z).is_some_and(|z| !z.orientable) && space.complex.is_connected() {
        let p = check_nonorientable_profile(&space.complex)?;
        report.line(format!("non-orientable profile {}", if p.ok { "holds" } else { "fails" }));
        json!(p)
    } else {
        Value::Null
    };
    report.provenance("conditions", "each condition computed independently from chain-level data");
    report.result = json!({ "report": r, "nonorientable_profile": profile });
    Ok(())
}

fn double_cover(report: &mut Report, space: &Space) -> Result<()> {
    require_compact(space, "double-cover")?;
    let cover = ramified_double_cover(&space.complex)?;
    let s = cover.summary();
    let h = strings(&homology(&cover.complex, Ring::Z));
    report.line(format!("cover f-vector {:?}, H_*(Z) = ({})", s.f_vector, h.join(", ")));
    report.line(format!("ramification {:?}", s.ramification));
    let expected = 2 * s.base_euler_characteristic - s.ramification_euler_characteristic;
    if s.euler_characteristic != expected {
        report.falsifications.push(format!(
            "χ(cover) = {} but 2χ(X) − χ(ramified) = {expected}",
            s.euler_characteristic
        ));
    }
    report.provenance("cover", "classes of local orientations glued across ridges");
    report.result = json!({ "summary": s, "homology": h });
    Ok(())
}

fn duality(report: &mut Report, space: &Space, opts: &RunOptions) -> Result<()> {
    require_compact(space, "duality")?;
    let field = opts.field.unwrap_or(Ring::Q);
    if !field.is_field() {
        return Err(CliError::Parse(format!("--field must be a field, got {field}")));
    }
    let n = space.complex.dim();
    let table = match &space.boundary {
        Some(b) => lefschetz_table(&space.complex, b, field),
        None => duality_table(&space.complex, field),
    };
    let table = match table {
        Ok(t) => t,
        Err(CoreError::NotOrientable(r)) => {
            report.line(format!("not orientable over {r}; no fundamental class"));
            report.result = json!({ "applicable": false, "reason": format!("not orientable over {r}") });
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    for row in &table.rows {
        report.line(format!("k={}: {} -> {}: {}", row.k, row.source, row.target, row.classification));
    }
    if space.alexandrov && n > 0 {
        for k in [n, n - 1] {
            if table.at(k) != Some(MapClass::Iso) {
                report.falsifications.push(format!("duality map not an isomorphism at k={k} over {field}"));
            }
        }
    }
    report.provenance("duality", "cap product with a coherent fundamental cycle on explicit cohomology bases");
    report.result = json!({ "applicable": true, "table": table });
    Ok(())
}

fn quotient(report: &mut Report, spec: &Value, space: &Space, opts: &RunOptions) -> Result<()> {
    let inner = spec
        .get("quotient")
        .ok_or_else(|| CliError::Parse("quotient expects a {\"quotient\": {...}} spec".into()))?;
    let source = resolve(&inner["space"])?;
    let generators: Vec<Vec<usize>> = serde_json::from_value(inner["generators"].clone())?;
    let action = SimplicialAction::new(&source.complex, generators, GROUP_BOUND)?;
    let q = quotient_by_action(&source.complex, &action)?;
    let preserving = match orientation_preserving(&source.complex, &action.elements[0]) {
        Ok(_) => Some(
            action
                .elements
                .iter()
                .map(|g| orientation_preserving(&source.complex, g))
                .collect::<nborient_core::Result<Vec<bool>>>()?,
        ),
        Err(CoreError::NotOrientable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let all_preserving = preserving.as_ref().is_some_and(|p| p.iter().all(|&b| b));
    report.line(format!(
        "group order {}, orientation preserving {}",
        action.order(),
        preserving.as_ref().map_or("n/a (source not orientable)".into(), |_| all_preserving.to_string())
    ));
    let r = orientability_report(&space.complex, &rings(opts))?;
    let orientable_z = r.ring(Ring::Z).map(|z| z.orientable);
    report.line(format!("quotient f-vector {:?}, orientable over Z {orientable_z:?}", space.complex.f_vector()));
    report.falsifications.extend(r.falsifications.iter().cloned());
    if all_preserving && orientable_z == Some(false) {
        report
            .falsifications
            .push("orientation-preserving action on an orientable space has a non-orientable quotient".into());
    }
    report.provenance("quotient", "orbits of cells, or of flags of the barycentric subdivision");
    report.provenance("preserving", "image of the coherent fundamental cycle under each group element");
    report.result = json!({
        "group_order": action.order(),
        "subdivided": q.subdivided,
        "orientation_preserving": preserving,
        "all_preserving": all_preserving,
        "report": r,
    });
    Ok(())
}

fn mass(report: &mut Report, space: &Space, opts: &RunOptions) -> Result<()> {
    require_compact(space, "mass")?;
    let (lengths, source) = match &space.metric {
        Some(l) => (l.clone(), "given"),
        None => (EdgeLengths::unit(&space.complex), "unit edges (no metric block)"),
    };
    let h = hausdorff_measure(&space.complex, &lengths)?;
    let check = fundamental_mass_check(&space.complex, &lengths)?;
    let diameter = graph_diameter(&space.complex, &lengths)?;
    report.line(format!("metric {source}; H^n = {h}"));
    report.line(format!(
        "fundamental cycle mass {} (relative error {:e}); probes {}",
        check.cycle_mass,
        check.relative_error,
        check.probes.iter().map(|p| format!("{}={}", p.name, p.mass)).collect::<Vec<_>>().join(", ")
    ));
    report.line(format!("trivial filling bound 2·diam = {}", 2.0 * diameter));
    let bounds = match filling_radius_bounds(&space.complex, &lengths, opts.constant) {
        Ok(b) => {
            report.line(format!("mass filling bound C(n)·(√n^n H^n)^(1/n) = {}", b.mass_bound));
            json!(b)
        }
        Err(nborient_mass::MassError::MissingConstant) => {
            report.line("mass filling bound needs --c-n");
            Value::Null
        }
        Err(e) => return Err(e.into()),
    };
    if !check.ok {
        report.falsifications.push(format!("fundamental mass probe failed: {check:?}"));
    }
    report.provenance("hausdorff", "sum of Cayley–Menger volumes of the top cells");
    report.provenance("cycle_mass", "seminorm Jacobians of the identity on realized cells");
    report.provenance("diameter", "edge-graph shortest paths, an approximation of the metric diameter");
    report.result = json!({
        "metric": source,
        "hausdorff_measure": h,
        "fundamental_mass": check,
        "graph_diameter": diameter,
        "trivial_filling_bound": 2.0 * diameter,
        "filling_bounds": bounds,
    });
    Ok(())
}

fn verify_all(report: &mut Report, opts: &RunOptions) -> Result<()> {
    let specs = corpus_specs(opts)?;
    let results = run_all(&specs, opts.budget);
    let mut entries = Vec::new();
    let mut over_budget = Vec::new();
    for r in results {
        match r {
            Ok(b) => {
                let fails = b.falsifications();
                let checks = b.checks.len();
                match &b.skipped {
                    Some(why) => {
                        report.line(format!("{}: skipped ({why})", b.name));
                        over_budget.push(b.name.clone());
                    }
                    None => report.line(format!(
                        "{}: {:?}, {checks} checks, {} falsified",
                        b.name,
                        b.status.unwrap_or(NbStatus::Unknown),
                        fails.len()
                    )),
                }
                report.falsifications.extend(fails);
                entries.push(json!(b));
            }
            Err(e) => return Err(CliError::Parse(e)),
        }
    }
    report.provenance("battery", "NB recognition, condition equivalence, vanishing, compactness, torsion, duality, curvature and boundary checks per space");
    report.result = json!({ "spaces": entries, "over_budget": over_budget });
    if !over_budget.is_empty() && report.falsifications.is_empty() {
        return Err(CliError::Budget(format!("spaces over budget: {over_budget:?}")));
    }
    Ok(())
}
