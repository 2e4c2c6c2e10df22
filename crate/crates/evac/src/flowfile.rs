//! JSON records for discrete dynamic flows, sorted by `(time, edge)`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use evac_core::{EdgeId, Network, TimeExpandedFlow};
use serde::{Deserialize, Serialize};

use crate::instance::{rational_from_json, rational_to_json};

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    edge: u32,
    tail: u32,
    head: u32,
    /// Start of the departure interval.
    time: serde_json::Value,
    amount: serde_json::Value,
}

#[derive(Debug, Serialize, Deserialize)]
struct FlowDocument {
    step: serde_json::Value,
    horizon: serde_json::Value,
    records: Vec<Record>,
}

pub fn to_json(net: &Network, flow: &TimeExpandedFlow) -> String {
    let records = flow
        .amounts
        .iter()
        .map(|(&(j, e), a)| {
            let edge = net.edge(e);
            Record {
                edge: e.0,
                tail: edge.tail.0,
                head: edge.head.0,
                time: rational_to_json(&flow.time_of(j)),
                amount: rational_to_json(a),
            }
        })
        .collect();
    let doc = FlowDocument { step: rational_to_json(&flow.step), horizon: rational_to_json(&flow.horizon), records };
    serde_json::to_string_pretty(&doc).expect("flow serialises") + "\n"
}

pub fn parse(net: &Network, text: &str) -> Result<TimeExpandedFlow> {
    let doc: FlowDocument = serde_json::from_str(text).context("malformed flow file")?;
    let step = rational_from_json(&doc.step).context("step")?;
    let horizon = rational_from_json(&doc.horizon).context("horizon")?;
    let mut amounts = BTreeMap::new();
    for (i, r) in doc.records.iter().enumerate() {
        if r.edge as usize >= net.edge_count() {
            bail!("record {i}: edge {} out of range", r.edge);
        }
        let e = EdgeId(r.edge);
        if net.edge(e).tail.0 != r.tail || net.edge(e).head.0 != r.head {
            bail!("record {i}: endpoints do not match edge {}", r.edge);
        }
        let time = rational_from_json(&r.time)?;
        let slots = &time / &step;
        if !slots.is_integer() || slots < Default::default() {
            bail!("record {i}: time {time} is not on the grid");
        }
        let j: usize = slots.to_integer().try_into().map_err(|_| anyhow!("record {i}: time too large"))?;
        let slot = amounts.entry((j, e)).or_insert_with(Default::default);
        *slot += rational_from_json(&r.amount)?;
    }
    Ok(TimeExpandedFlow { step, horizon, amounts })
}

pub fn load(net: &Network, path: &Path) -> Result<TimeExpandedFlow> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(net, &text)
}
