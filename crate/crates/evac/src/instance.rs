//! JSON instance files.
//!
//! ```json
//! {
//!   "nodes": 3,
//!   "names": ["v1", "v2", "t"],
//!   "edges": [[0, 2, 3], [1, 2, 1], [0, 1, 1]],
//!   "capacity": 1,
//!   "sources": [0, 1],
//!   "sink": 2,
//!   "supply": {"0": 2, "1": 3, "2": -5}
//! }
//! ```
//!
//! Rationals are JSON numbers (integers or finite decimals) or strings
//! `"p/q"`. An edge may carry a fourth entry, its own capacity, which must
//! match `capacity`. `sink` may be a list so that multi-sink files are
//! reported rather than rejected by the parser. Supply keys are node ids or
//! names; missing nodes get zero.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use evac_core::network::{validate_network, DraftEdge};
use evac_core::rational::{parse_rational, Rational};
use evac_core::{Network, NetworkDraft, NodeId, SupplyFunction, ValidationReport};
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, Deserialize)]
struct RawInstance {
    nodes: usize,
    #[serde(default)]
    names: Option<Vec<String>>,
    edges: Vec<Vec<Value>>,
    capacity: Value,
    sources: Vec<u32>,
    sink: Value,
    #[serde(default)]
    supply: BTreeMap<String, Value>,
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        _ => None,
    }
    .ok_or_else(|| anyhow!("not a rational: {v}"))
}

/// Reduced `"p/q"`, or a plain integer string.
pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// Parsed instance before model validation.
#[derive(Debug, Clone)]
pub struct Instance {
    pub draft: NetworkDraft,
    pub supply: SupplyFunction,
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text).context("malformed instance")?;
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (i, e) in raw.edges.iter().enumerate() {
            if e.len() != 3 && e.len() != 4 {
                bail!("edge {i} must be [tail, head, transit] or [tail, head, transit, capacity]");
            }
            let id =
                |v: &Value| v.as_u64().map(|x| NodeId(x as u32)).ok_or_else(|| anyhow!("edge {i}: bad node id {v}"));
            edges.push(DraftEdge {
                tail: id(&e[0])?,
                head: id(&e[1])?,
                transit: rational_from_json(&e[2]).with_context(|| format!("edge {i}"))?,
                capacity: e.get(3).map(rational_from_json).transpose()?,
            });
        }
        let sinks: Vec<NodeId> = match &raw.sink {
            Value::Array(list) => list
                .iter()
                .map(|v| v.as_u64().map(|x| NodeId(x as u32)))
                .collect::<Option<_>>()
                .ok_or_else(|| anyhow!("bad sink list"))?,
            v => vec![NodeId(v.as_u64().ok_or_else(|| anyhow!("bad sink {v}"))? as u32)],
        };
        let mut values = vec![Rational::zero(); raw.nodes];
        for (key, v) in &raw.supply {
            let node = match key.parse::<usize>() {
                Ok(i) => i,
                Err(_) => raw
                    .names
                    .as_ref()
                    .and_then(|names| names.iter().position(|n| n == key))
                    .ok_or_else(|| anyhow!("unknown node {key} in supply"))?,
            };
            if node >= raw.nodes {
                bail!("supply for node {node} out of range");
            }
            values[node] = rational_from_json(v).with_context(|| format!("supply of {key}"))?;
        }
        Ok(Instance {
            draft: NetworkDraft {
                node_count: raw.nodes,
                edges,
                capacity: rational_from_json(&raw.capacity).context("capacity")?,
                sources: raw.sources.into_iter().map(NodeId).collect(),
                sinks,
                names: raw.names,
            },
            supply: SupplyFunction::new(values),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Instance::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self) -> ValidationReport {
        validate_network(&self.draft, &self.supply)
    }

    /// Validated network and supplies.
    pub fn into_network(self) -> Result<(Network, SupplyFunction)> {
        let report = self.validate();
        if !report.is_ok() {
            bail!("invalid network: {report}");
        }
        Ok((Network::from_draft(self.draft)?, self.supply))
    }
}

pub fn to_json(net: &Network, w: &SupplyFunction) -> String {
    // node order is kept in the supply map
    let mut supply = serde_json::Map::new();
    for (i, v) in w.values().iter().enumerate() {
        if !v.is_zero() {
            supply.insert(i.to_string(), rational_to_json(v));
        }
    }
    let mut doc = serde_json::Map::new();
    doc.insert("nodes".into(), json!(net.node_count()));
    if let Some(names) = net.names() {
        doc.insert("names".into(), json!(names));
    }
    let edges: Vec<Value> =
        net.edges().iter().map(|e| json!([e.tail.0, e.head.0, rational_to_json(&e.transit)])).collect();
    doc.insert("edges".into(), Value::Array(edges));
    doc.insert("capacity".into(), rational_to_json(net.capacity()));
    doc.insert("sources".into(), json!(net.sources().iter().map(|v| v.0).collect::<Vec<_>>()));
    doc.insert("sink".into(), json!(net.sink().0));
    doc.insert("supply".into(), Value::Object(supply));
    serde_json::to_string_pretty(&Value::Object(doc)).expect("instance serialises") + "\n"
}

/// Resolves a node given by id or name.
pub fn resolve_node(net: &Network, key: &str) -> Result<NodeId> {
    if let Some(names) = net.names() {
        if let Some(i) = names.iter().position(|n| n == key) {
            return Ok(NodeId(i as u32));
        }
    }
    let i: usize = key.parse().map_err(|_| anyhow!("unknown node {key}"))?;
    if i >= net.node_count() {
        bail!("node {i} out of range");
    }
    Ok(NodeId(i as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const TWO_SOURCES: &str = r#"{
        "nodes": 3, "names": ["v1", "v2", "t"],
        "edges": [[0, 2, 3], [1, 2, 1], [0, 1, 1]],
        "capacity": 1, "sources": [0, 1], "sink": 2,
        "supply": {"v1": 2, "1": "3", "2": -5}
    }"#;

    #[test]
    fn parses_two_sources() {
        let inst = Instance::parse(TWO_SOURCES).unwrap();
        assert!(inst.validate().is_ok());
        let (net, w) = inst.into_network().unwrap();
        assert_eq!(net.sink_in_degree(), 2);
        assert_eq!(w.get(NodeId(0)), &Rational::from_integer(2.into()));
        let again = Instance::parse(&to_json(&net, &w)).unwrap().into_network().unwrap();
        assert_eq!(again.1, w);
        assert_eq!(again.0.edges(), net.edges());
    }

    #[test]
    fn reports_model_violations() {
        let text = TWO_SOURCES.replace(r#""sink": 2"#, r#""sink": [2, 1]"#).replace(r#"[1, 2, 1]"#, r#"[1, 2, 1, 2]"#);
        let report = Instance::parse(&text).unwrap().validate();
        let msg = report.to_string();
        assert!(msg.contains("multiple sinks"), "{msg}");
        assert!(msg.contains("non-uniform capacity"), "{msg}");
    }

    #[test]
    fn decimal_and_fraction_values() {
        let text = TWO_SOURCES.replace(r#"[0, 2, 3]"#, r#"[0, 2, "5/2"]"#).replace(r#"[0, 1, 1]"#, r#"[0, 1, 0.5]"#);
        let (net, _) = Instance::parse(&text).unwrap().into_network().unwrap();
        assert_eq!(net.edges()[0].transit, Rational::new(5.into(), 2.into()));
        assert_eq!(net.edges()[2].transit, Rational::new(1.into(), 2.into()));
    }
}
