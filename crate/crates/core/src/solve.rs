//! End-to-end pipeline: horizon, decomposition, lex-max flows and their
//! mixture.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::horizon::{check_instance, enumerate_a_hat, horizon_from_family, AHatFamily, Horizon};
use crate::network::{Network, SupplyFunction};
use crate::oracle::{default_step, verify_dynamic_flow, FlowReport, TimeExpandedFlow};
use crate::polytope::{assemble_quickest_flow, decompose_supply, lexmax_flow_on, ConvexDecomposition};
use crate::rational::Rational;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub horizon: Horizon,
    pub decomposition: ConvexDecomposition,
    /// Lex-max flow per decomposition term.
    pub flows: Vec<TimeExpandedFlow>,
    pub quickest: TimeExpandedFlow,
    pub report: FlowReport,
}

/// Solves with the full admitting family.
pub fn solve(net: &Network, w: &SupplyFunction) -> Result<Solution> {
    check_instance(net, w)?;
    solve_with_family(net, w, enumerate_a_hat(net, w)?)
}

/// Solves from a precomputed family (parallel or grid-filtered).
pub fn solve_with_family(net: &Network, w: &SupplyFunction, family: AHatFamily) -> Result<Solution> {
    solve_with_family_on(net, w, family, None)
}

/// Like [`solve_with_family`], with an optional time step for the flows
/// instead of the default grid.
pub fn solve_with_family_on(
    net: &Network,
    w: &SupplyFunction,
    family: AHatFamily,
    step: Option<&Rational>,
) -> Result<Solution> {
    check_instance(net, w)?;
    let horizon = horizon_from_family(family)?;
    let decomposition = decompose_supply(net, w, &horizon.t_star, &horizon.a_star, &horizon.family)?;
    let step = match step {
        Some(s) => s.clone(),
        None => default_step(net, &horizon.t_star),
    };
    let mut flows = Vec::with_capacity(decomposition.terms.len());
    for term in &decomposition.terms {
        let f = lexmax_flow_on(net, &term.order, &horizon.t_star, &step)?;
        for (v, b) in &term.vertex.values {
            if *v != net.sink() && f.net_outflow(net, *v) != *b {
                return Err(Error::OracleDisagreement(format!(
                    "lex-max flow for {} sends {} from node {v}, vertex says {b}",
                    term.order.label(net),
                    f.net_outflow(net, *v)
                )));
            }
        }
        flows.push(f);
    }
    let quickest = assemble_quickest_flow(&decomposition, &flows)?;
    let report = verify_dynamic_flow(net, &quickest, w, &horizon.t_star);
    Ok(Solution { horizon, decomposition, flows, quickest, report })
}
