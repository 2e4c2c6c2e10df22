//! Deterministic plain-text reports.

use std::fmt::Write;

use evac_core::horizon::Horizon;
use evac_core::polytope::GroundVector;
use evac_core::{Network, NodeId, Solution, SsspResult};

pub fn set_label(net: &Network, set: &[NodeId]) -> String {
    let names: Vec<String> = set.iter().map(|v| net.label(*v)).collect();
    format!("{{{}}}", names.join(","))
}

pub fn tuple_label(net: &Network, tuple: &[NodeId]) -> String {
    let names: Vec<String> = tuple.iter().map(|v| net.label(*v)).collect();
    format!("({})", names.join(","))
}

fn point_label(net: &Network, x: &GroundVector) -> String {
    let parts: Vec<String> = x.values.iter().map(|(v, val)| format!("{}={}", net.label(*v), val)).collect();
    parts.join(" ")
}

pub fn horizon_text(net: &Network, h: &Horizon, with_family: bool) -> String {
    let mut out = String::new();
    writeln!(out, "T* = {}, A* = {}", h.t_star, set_label(net, &h.a_star)).unwrap();
    writeln!(out, "|A-hat| = {} (tuples examined: {})", h.family.len(), h.family.tuples_examined()).unwrap();
    if with_family {
        for e in h.family.entries() {
            writeln!(
                out,
                "  {} theta = {} via {}",
                set_label(net, &e.subset),
                e.theta,
                tuple_label(net, &e.tuple.nodes)
            )
            .unwrap();
        }
    }
    out
}

pub fn sssp_text(net: &Network, r: &SsspResult) -> String {
    let mut out = String::new();
    writeln!(out, "A = {}, p = {}", set_label(net, &r.subset), r.p()).unwrap();
    for (i, p) in r.paths.iter().enumerate() {
        let nodes: Vec<String> = p.nodes(net).iter().map(|v| net.label(*v)).collect();
        writeln!(out, "  P{} cost {}: {}", i + 1, p.cost, nodes.join(" -> ")).unwrap();
    }
    out
}

pub fn solve_text(net: &Network, sol: &Solution, with_trace: bool) -> String {
    let mut out = horizon_text(net, &sol.horizon, false);
    let dec = &sol.decomposition;
    writeln!(out, "decomposition: {} term(s)", dec.terms.len()).unwrap();
    for t in &dec.terms {
        writeln!(out, "  order {} lambda {} vertex {}", t.order.label(net), t.lambda, point_label(net, &t.vertex))
            .unwrap();
    }
    let chain: Vec<String> = dec.chain.iter().map(|c| set_label(net, c)).collect();
    writeln!(out, "chain: {}", chain.join(" < ")).unwrap();
    if with_trace {
        for (i, s) in dec.trace.iter().enumerate() {
            let hit = s.hit.as_ref().map(|h| set_label(net, h)).unwrap_or_else(|| "-".into());
            let ray = s.s.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            writeln!(
                out,
                "  step {}: x' = ({}) alpha {} s {} beta {} gamma {} hit {}",
                i + 1,
                point_label(net, &s.point),
                s.alpha,
                ray,
                s.beta,
                s.gamma,
                hit
            )
            .unwrap();
        }
    }
    writeln!(
        out,
        "flow: step {}, horizon {}, {} record(s)",
        sol.quickest.step,
        sol.quickest.horizon,
        sol.quickest.amounts.len()
    )
    .unwrap();
    writeln!(out, "verify: {}", sol.report.summary()).unwrap();
    out
}
