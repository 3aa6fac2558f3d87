//! Named spaces, the JSON construction language and the complex file format.
//!
//! A spec is a corpus name, a complex object
//! `{"name": .., "maximal_simplices": [[..]], "edge_lengths": {"[u,v]": ..}}`,
//! or one of
//! `{"suspension": S}`, `{"cone": S}`, `{"closed_cone": S}`, `{"double": S}`,
//! `{"join": [S, T]}`, `{"product": [S, T]}`, `{"disjoint_union": [S, T]}`,
//! `{"quotient": {"space": S, "generators": [[..], ..]}}`.
//! Any spec object may carry `"metric"`: `"unit"`, `{"scale": λ}` or an edge-length map.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{DeltaComplex, Subcomplex};
use crate::constructions::{
    closed_cone, disjoint_union, double, join, product, quotient_by_action, suspension, SimplicialAction,
};
use crate::corpus;
use crate::error::{Error, Result};
use crate::nb::boundary_locus;

/// Edge lengths keyed by dense vertex ids `(u, v)` with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengths(pub BTreeMap<(usize, usize), f64>);

impl EdgeLengths {
    pub fn unit(x: &DeltaComplex) -> EdgeLengths {
        EdgeLengths(
            x.cells(1)
                .iter()
                .map(|e| ((e.vertices[0].0, e.vertices[1].0), 1.0))
                .collect(),
        )
    }

    pub fn scaled(&self, lambda: f64) -> EdgeLengths {
        EdgeLengths(self.0.iter().map(|(k, v)| (*k, v * lambda)).collect())
    }

    pub fn get(&self, u: usize, v: usize) -> Option<f64> {
        self.0.get(&(u.min(v), u.max(v))).copied()
    }
}

#[derive(Clone, Debug)]
pub struct Space {
    pub name: String,
    pub complex: DeltaComplex,
    /// Boundary carried by a closed cone.
    pub boundary: Option<Subcomplex>,
    /// Subcomplex removed from the space: an open cone is its closed cone minus the base.
    pub deleted: Option<Subcomplex>,
    /// Admits a metric of an Alexandrov space with the combinatorial structure.
    pub alexandrov: bool,
    /// Admits such a metric with curvature at least one.
    pub positively_curved: bool,
    pub metric: Option<EdgeLengths>,
}

impl Space {
    fn new(name: String, complex: DeltaComplex, alexandrov: bool, positively_curved: bool) -> Space {
        Space {
            name,
            complex,
            boundary: None,
            deleted: None,
            alexandrov,
            positively_curved,
            metric: None,
        }
    }

    pub fn is_compact(&self) -> bool {
        self.deleted.is_none()
    }
}

/// Group elements allowed when closing quotient generators.
pub const GROUP_BOUND: usize = 10_000;
const MAX_DEPTH: usize = 32;

/// Parses a spec given as JSON text.
pub fn parse_spec(text: &str) -> Result<Space> {
    let v: Value = serde_json::from_str(text).or_else(|_| {
        // bare corpus names are accepted without quotes
        Ok::<Value, Error>(Value::String(text.trim().to_string()))
    })?;
    resolve(&v)
}

pub fn resolve(v: &Value) -> Result<Space> {
    resolve_at(v, 0)
}

fn named(name: &str) -> Result<Space> {
    let x = corpus::by_name(name).ok_or_else(|| Error::Parse(format!("unknown space {name:?}")))?;
    let flat = matches!(name, "T2_7" | "klein_8" | "disk");
    let positive = !flat && name != "wedge_of_circles";
    Ok(Space::new(name.to_string(), x, positive || flat, positive))
}

fn pair(v: &Value, depth: usize) -> Result<(Space, Space)> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([a, b]) => Ok((resolve_at(a, depth + 1)?, resolve_at(b, depth + 1)?)),
        _ => Err(Error::Parse("expected a pair of specs".into())),
    }
}

fn resolve_at(v: &Value, depth: usize) -> Result<Space> {
    if depth > MAX_DEPTH {
        return Err(Error::Parse("spec nested too deeply".into()));
    }
    let obj = match v {
        Value::String(s) => return named(s),
        Value::Object(o) => o,
        _ => return Err(Error::Parse(format!("unexpected spec {v}"))),
    };
    let mut space = if obj.contains_key("maximal_simplices") {
        let f: ComplexFile = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let (x, lengths) = f.to_complex()?;
        let mut s = Space::new(f.name.unwrap_or_else(|| "complex".into()), x, false, false);
        s.metric = lengths;
        s
    } else {
        let ops: Vec<&String> = obj.keys().filter(|k| k.as_str() != "metric").collect();
        let [op] = ops.as_slice() else {
            return Err(Error::Parse(format!("expected exactly one construction, found {ops:?}")));
        };
        let arg = &obj[op.as_str()];
        match op.as_str() {
            "suspension" => {
                let x = resolve_at(arg, depth + 1)?;
                compact(&x, "suspension")?;
                let p = x.positively_curved;
                Space::new(format!("S0*{}", x.name), suspension(&x.complex), p, p)
            }
            "cone" => {
                let x = resolve_at(arg, depth + 1)?;
                compact(&x, "cone")?;
                let (c, base) = closed_cone(&x.complex);
                let mut s = Space::new(format!("c({})", x.name), c, x.positively_curved, false);
                s.deleted = Some(base);
                s
            }
            "closed_cone" => {
                let x = resolve_at(arg, depth + 1)?;
                compact(&x, "closed_cone")?;
                let (c, base) = closed_cone(&x.complex);
                let mut s = Space::new(format!("cc({})", x.name), c, x.positively_curved, false);
                s.boundary = Some(base);
                s
            }
            "double" => {
                let x = resolve_at(arg, depth + 1)?;
                compact(&x, "double")?;
                let b = match &x.boundary {
                    Some(b) => b.clone(),
                    None => boundary_locus(&x.complex)?
                        .subcomplex
                        .ok_or_else(|| Error::Precondition("no boundary".into()))?,
                };
                Space::new(format!("D({})", x.name), double(&x.complex, &b)?, x.alexandrov, false)
            }
            "join" => {
                let (a, b) = pair(arg, depth)?;
                compact(&a, "join")?;
                compact(&b, "join")?;
                let p = a.positively_curved && b.positively_curved;
                Space::new(format!("{}*{}", a.name, b.name), join(&a.complex, &b.complex), p, p)
            }
            "product" => {
                let (a, b) = pair(arg, depth)?;
                compact(&a, "product")?;
                compact(&b, "product")?;
                let x = product(&a.complex, &b.complex)?;
                Space::new(format!("{}x{}", a.name, b.name), x, a.alexandrov && b.alexandrov, false)
            }
            "disjoint_union" => {
                let (a, b) = pair(arg, depth)?;
                compact(&a, "disjoint_union")?;
                compact(&b, "disjoint_union")?;
                let x = disjoint_union(&a.complex, &b.complex);
                Space::new(format!("{}+{}", a.name, b.name), x, false, false)
            }
            "quotient" => {
                let inner = resolve_at(arg.get("space").ok_or_else(|| Error::Parse("quotient needs \"space\"".into()))?, depth + 1)?;
                compact(&inner, "quotient")?;
                let gens: Vec<Vec<usize>> = serde_json::from_value(
                    arg.get("generators")
                        .cloned()
                        .ok_or_else(|| Error::Parse("quotient needs \"generators\"".into()))?,
                )
                .map_err(|e| Error::Parse(e.to_string()))?;
                let act = SimplicialAction::new(&inner.complex, gens, GROUP_BOUND)?;
                let q = quotient_by_action(&inner.complex, &act)?;
                Space::new(
                    format!("{}/G{}", inner.name, act.order()),
                    q.complex,
                    inner.alexandrov,
                    inner.positively_curved,
                )
            }
            other => return Err(Error::Parse(format!("unknown construction {other:?}"))),
        }
    };
    if let Some(m) = obj.get("metric") {
        space.metric = Some(parse_metric(m, &space)?);
    }
    Ok(space)
}

fn compact(x: &Space, op: &str) -> Result<()> {
    if x.is_compact() {
        Ok(())
    } else {
        Err(Error::Parse(format!("{op} needs a compact space, got the open cone {}", x.name)))
    }
}

fn parse_metric(m: &Value, space: &Space) -> Result<EdgeLengths> {
    let unit = EdgeLengths::unit(&space.complex);
    match m {
        Value::String(s) if s == "unit" => Ok(unit),
        Value::Object(o) if o.contains_key("scale") => {
            let l = o["scale"].as_f64().ok_or_else(|| Error::Parse("scale must be a number".into()))?;
            Ok(space.metric.clone().unwrap_or(unit).scaled(l))
        }
        Value::Object(o) => {
            let raw: BTreeMap<String, f64> =
                serde_json::from_value(Value::Object(o.clone())).map_err(|e| Error::Parse(e.to_string()))?;
            let labels: BTreeMap<String, usize> =
                space.complex.vertices().map(|v| (space.complex.label(v), v.0)).collect();
            edge_map(&raw, |id| labels.get(&id.to_string()).copied())
        }
        _ => Err(Error::Parse(format!("unsupported metric {m}"))),
    }
}

fn edge_map(raw: &BTreeMap<String, f64>, dense: impl Fn(usize) -> Option<usize>) -> Result<EdgeLengths> {
    let mut out = BTreeMap::new();
    for (k, &len) in raw {
        let ends: Vec<usize> = serde_json::from_str(k).map_err(|_| Error::Parse(format!("bad edge key {k:?}")))?;
        let [u, v] = ends.as_slice() else {
            return Err(Error::Parse(format!("bad edge key {k:?}")));
        };
        let (a, b) = (
            dense(*u).ok_or_else(|| Error::Parse(format!("unknown vertex {u}")))?,
            dense(*v).ok_or_else(|| Error::Parse(format!("unknown vertex {v}")))?,
        );
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::Parse(format!("edge {k} has length {len}")));
        }
        out.insert((a.min(b), a.max(b)), len);
    }
    Ok(EdgeLengths(out))
}

/// The complex file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub maximal_simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_lengths: Option<BTreeMap<String, f64>>,
}

impl ComplexFile {
    pub fn to_complex(&self) -> Result<(DeltaComplex, Option<EdgeLengths>)> {
        let x = DeltaComplex::from_facets(&self.maximal_simplices)?;
        let lengths = match &self.edge_lengths {
            None => None,
            Some(raw) => {
                let ids: BTreeMap<String, usize> = x.vertices().map(|v| (x.label(v), v.0)).collect();
                let e = edge_map(raw, |u| ids.get(&u.to_string()).copied())?;
                if let Some(missing) = x.cells(1).iter().find(|c| e.get(c.vertices[0].0, c.vertices[1].0).is_none()) {
                    return Err(Error::Parse(format!("no length for edge {:?}", missing.vertices)));
                }
                Some(e)
            }
        };
        Ok((x, lengths))
    }

    /// Writes a simplicial complex with dense vertex ids, subdividing first when needed.
    pub fn from_complex(name: &str, x: &DeltaComplex, lengths: Option<&EdgeLengths>) -> ComplexFile {
        let x = x.ensure_simplicial();
        let edge_lengths = lengths.map(|l| l.0.iter().map(|((u, v), len)| (format!("[{u},{v}]"), *len)).collect());
        ComplexFile {
            name: Some(name.to_string()),
            maximal_simplices: x.facet_vertex_lists(),
            edge_lengths,
        }
    }
}

/// Specs of the default verification corpus.
pub fn default_corpus() -> Vec<&'static str> {
    vec![
        r#""sphere(2)""#,
        r#""sphere(4)""#,
        r#""cross_polytope_sphere(3)""#,
        r#""RP2_6""#,
        r#""T2_7""#,
        r#""klein_8""#,
        r#""CP2_kuehnel_9""#,
        r#""RP3""#,
        r#""poincare_16""#,
        r#"{"suspension":"T2_7"}"#,
        r#"{"suspension":"RP3"}"#,
        r#"{"suspension":"CP2_kuehnel_9"}"#,
        r#"{"suspension":"RP2_6"}"#,
        r#"{"suspension":"poincare_16"}"#,
        r#"{"product":["circle(3)","circle(3)"]}"#,
        r#"{"product":["T2_7","circle(3)"]}"#,
        r#"{"product":["RP2_6","circle(3)"]}"#,
        r#"{"join":["circle(3)","circle(3)"]}"#,
        r#"{"join":["RP2_6","circle(3)"]}"#,
        r#"{"join":["RP2_6","RP2_6"]}"#,
        r#"{"quotient":{"space":"cross_polytope_sphere(3)","generators":[[1,0,3,2,5,4,7,6]]}}"#,
        r#"{"double":{"closed_cone":"T2_7"}}"#,
        r#"{"double":{"closed_cone":"RP2_6"}}"#,
        r#"{"closed_cone":"T2_7"}"#,
        r#"{"closed_cone":"RP2_6"}"#,
        r#"{"cone":"T2_7"}"#,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology, HomologyGroup};
    use crate::ring::Ring;

    #[test]
    fn names_and_constructions() {
        let s = parse_spec("\"RP2_6\"").unwrap();
        assert!(s.positively_curved);
        let s = parse_spec("T2_7").unwrap();
        assert!(s.alexandrov && !s.positively_curved);
        let x = parse_spec(r#"{"suspension":"T2_7"}"#).unwrap();
        assert!(!x.alexandrov);
        assert_eq!(x.complex.dim(), 3);
        let c = parse_spec(r#"{"cone":"T2_7"}"#).unwrap();
        assert!(!c.is_compact());
        assert!(parse_spec(r#"{"suspension":{"cone":"T2_7"}}"#).is_err());
        let d = parse_spec(r#"{"double":{"closed_cone":"T2_7"}}"#).unwrap();
        let h = homology(&d.complex, Ring::Z);
        assert_eq!(h[2], HomologyGroup::z(2, &[]));
        assert!(matches!(parse_spec(r#"{"frobnicate":"T2_7"}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_spec("nonsense"), Err(Error::Parse(_))));
    }

    #[test]
    fn default_corpus_resolves() {
        for s in default_corpus() {
            parse_spec(s).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
    }

    #[test]
    fn file_round_trip_with_lengths() {
        let text = r#"{"name":"tri","maximal_simplices":[[10,11,12]],"edge_lengths":{"[10,11]":3,"[11,12]":4,"[10,12]":5}}"#;
        let s = parse_spec(text).unwrap();
        let m = s.metric.as_ref().unwrap();
        assert_eq!(m.get(0, 2), Some(5.0));
        let f = ComplexFile::from_complex("tri", &s.complex, Some(m));
        let back = ComplexFile::to_complex(&f).unwrap();
        assert_eq!(back.0.f_vector(), vec![3, 3, 1]);
        assert_eq!(back.1.unwrap().get(1, 2), Some(4.0));
        let missing = r#"{"maximal_simplices":[[0,1,2]],"edge_lengths":{"[0,1]":1}}"#;
        assert!(parse_spec(missing).is_err());
    }

    #[test]
    fn metric_blocks() {
        let s = parse_spec(r#"{"suspension":"sphere(1)","metric":"unit"}"#).unwrap();
        assert!(s.metric.unwrap().0.values().all(|&l| l == 1.0));
        let s = parse_spec(r#"{"suspension":"sphere(1)","metric":{"scale":2.5}}"#).unwrap();
        assert!(s.metric.unwrap().0.values().all(|&l| l == 2.5));
    }
}
