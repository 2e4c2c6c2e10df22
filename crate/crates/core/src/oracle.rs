//! Time-expanded brute force: an independent ground truth for the outflow
//! function, feasibility, the minimum horizon, and a checker for dynamic
//! flows.
//!
//! Time is cut into `L = T / step` intervals. Flow entering edge `e` during
//! interval `j` leaves it during interval `j + tau(e) / step`, at most
//! `u * step` per interval. Flow that reaches the sink during interval `j`
//! counts as evacuated when `j < L`, i.e. it has fully arrived by `T`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::maxflow::{MaxFlow, INF};
use crate::network::{EdgeId, Network, NodeId, SupplyFunction};
use crate::rational::{divides, gcd, sum, to_i128, Rational};
use crate::sssp::{min_required_time, successive_shortest_paths};
use crate::Result;

/// Layered copy of a network for a horizon and a time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeExpandedNet {
    pub step: Rational,
    pub horizon: Rational,
    /// Number of intervals `L`; node copies exist at layers `0..=L`.
    pub intervals: usize,
    /// `tau(e) / step` per edge.
    pub shifts: Vec<usize>,
    pub node_count: usize,
    /// Per-interval capacity `u * step` of every movement arc.
    pub arc_capacity: Rational,
}

impl TimeExpandedNet {
    pub fn layer_count(&self) -> usize {
        self.intervals + 1
    }

    pub fn copy(&self, v: NodeId, layer: usize) -> usize {
        layer * self.node_count + v.index()
    }

    /// `(edge, departure interval)` of every movement arc.
    pub fn movement_arcs(&self) -> impl Iterator<Item = (EdgeId, usize)> + '_ {
        (0..=self.intervals).flat_map(move |j| {
            self.shifts
                .iter()
                .enumerate()
                .filter(move |(_, s)| j + **s <= self.intervals)
                .map(move |(e, _)| (EdgeId(e as u32), j))
        })
    }

    pub fn movement_arc_count(&self) -> usize {
        self.movement_arcs().count()
    }
}

/// Smallest grid representing `horizon` and every transit time:
/// the rational gcd of `1/den(horizon)` and all `tau(e)`.
pub fn default_step(net: &Network, horizon: &Rational) -> Rational {
    let base = Rational::new(BigInt::one(), horizon.denom().clone());
    net.edges().iter().fold(base, |g, e| gcd(&g, &e.transit))
}

pub fn build_time_expanded(net: &Network, horizon: &Rational, step: &Rational) -> Result<TimeExpandedNet> {
    if horizon.is_negative() {
        return Err(Error::NegativeHorizon(horizon.clone()));
    }
    if !step.is_positive() {
        return Err(Error::NonDivisibleStep { step: step.clone(), what: "anything".into() });
    }
    if !divides(step, horizon) {
        return Err(Error::NonDivisibleStep { step: step.clone(), what: format!("the horizon {horizon}") });
    }
    let mut shifts = Vec::with_capacity(net.edge_count());
    for (i, e) in net.edges().iter().enumerate() {
        if !divides(step, &e.transit) {
            return Err(Error::NonDivisibleStep { step: step.clone(), what: format!("the transit time of edge e{i}") });
        }
        shifts.push((&e.transit / step).to_integer().to_usize().ok_or(Error::Overflow)?);
    }
    let intervals = (horizon / step).to_integer().to_usize().ok_or(Error::Overflow)?;
    Ok(TimeExpandedNet {
        step: step.clone(),
        horizon: horizon.clone(),
        intervals,
        shifts,
        node_count: net.node_count(),
        arc_capacity: net.capacity() * step,
    })
}

/// The time-expanded graph loaded into a max-flow kernel with integer
/// capacities (all quantities multiplied by `scale`).
pub(crate) struct Expanded<'a> {
    pub net: &'a Network,
    pub te: TimeExpandedNet,
    pub graph: MaxFlow,
    pub scale: BigInt,
    /// Kernel arc id per movement arc.
    pub moves: Vec<((EdgeId, usize), usize)>,
    pub super_sink: usize,
}

fn to_kernel(value: &Rational, scale: &BigInt) -> Result<i128> {
    let scaled = value * Rational::from_integer(scale.clone());
    let v = to_i128(&scaled).ok_or(Error::Overflow)?;
    if v >= INF / 1024 {
        return Err(Error::Overflow);
    }
    Ok(v)
}

impl<'a> Expanded<'a> {
    /// `extra` are additional rationals (such as supplies) that must become
    /// integral after scaling.
    pub fn new(net: &'a Network, te: TimeExpandedNet, extra: &[Rational]) -> Result<Self> {
        let scale = extra.iter().fold(te.arc_capacity.denom().clone(), |acc, v| acc.lcm(v.denom()));
        let n = te.node_count;
        let layers = te.layer_count();
        let mut graph = MaxFlow::new(n * layers + 1);
        let super_sink = n * layers;
        let cap = to_kernel(&te.arc_capacity, &scale)?;
        let mut moves = Vec::new();
        for (e, j) in te.movement_arcs() {
            let edge = net.edge(e);
            let from = te.copy(edge.tail, j);
            let to = te.copy(edge.head, j + te.shifts[e.index()]);
            moves.push(((e, j), graph.add_edge(from, to, cap)));
        }
        for j in 0..te.intervals {
            for v in 0..n {
                let v = NodeId(v as u32);
                graph.add_edge(te.copy(v, j), te.copy(v, j + 1), INF);
            }
        }
        Ok(Expanded { net, te, graph, scale, moves, super_sink })
    }

    /// Connects the sink copy that receives during interval `j`.
    pub fn open_sink_interval(&mut self, j: usize) {
        let t = self.te.copy(self.net.sink(), j);
        self.graph.add_edge(t, self.super_sink, INF);
    }

    pub fn open_all_sink_intervals(&mut self) {
        for j in 0..self.te.intervals {
            self.open_sink_interval(j);
        }
    }

    pub fn unscale(&self, v: i128) -> Rational {
        Rational::new(BigInt::from(v), self.scale.clone())
    }

    pub fn scaled(&self, v: &Rational) -> Result<i128> {
        to_kernel(v, &self.scale)
    }

    pub fn extract(&self) -> TimeExpandedFlow {
        let mut amounts = BTreeMap::new();
        for &((e, j), arc) in &self.moves {
            let f = self.graph.flow(arc);
            if f > 0 {
                amounts.insert((j, e), self.unscale(f));
            }
        }
        TimeExpandedFlow { step: self.te.step.clone(), horizon: self.te.horizon.clone(), amounts }
    }
}

/// Discrete dynamic flow: amount entering each edge per interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeExpandedFlow {
    pub step: Rational,
    pub horizon: Rational,
    /// `(departure interval, edge) -> amount`; zero entries omitted.
    pub amounts: BTreeMap<(usize, EdgeId), Rational>,
}

impl TimeExpandedFlow {
    pub fn zero(step: Rational, horizon: Rational) -> Self {
        TimeExpandedFlow { step, horizon, amounts: BTreeMap::new() }
    }

    /// Departures minus arrivals at `v` over the whole horizon.
    pub fn net_outflow(&self, net: &Network, v: NodeId) -> Rational {
        let mut total = Rational::zero();
        for ((_, e), a) in &self.amounts {
            let edge = net.edge(*e);
            if edge.tail == v {
                total += a;
            }
            if edge.head == v {
                total -= a;
            }
        }
        total
    }

    /// Start time of a departure interval.
    pub fn time_of(&self, interval: usize) -> Rational {
        &self.step * Rational::from_integer(BigInt::from(interval))
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let amounts = self.amounts.iter().filter(|_| !factor.is_zero()).map(|(k, a)| (*k, a * factor)).collect();
        TimeExpandedFlow { step: self.step.clone(), horizon: self.horizon.clone(), amounts }
    }

    pub fn add(&mut self, other: &TimeExpandedFlow) -> Result<()> {
        if self.step != other.step || self.horizon != other.horizon {
            return Err(Error::GridMismatch);
        }
        for (k, a) in &other.amounts {
            let slot = self.amounts.entry(*k).or_insert_with(Rational::zero);
            *slot += a;
            if slot.is_zero() {
                self.amounts.remove(k);
            }
        }
        Ok(())
    }
}

/// Max flow from `set` (no supply caps) into the sink within `horizon`.
pub fn oracle_max_outflow(net: &Network, set: &[NodeId], horizon: &Rational, step: &Rational) -> Result<Rational> {
    let te = build_time_expanded(net, horizon, step)?;
    let mut x = Expanded::new(net, te, &[])?;
    let src = x.graph.add_node();
    for v in net.source_subset(set)? {
        x.graph.add_edge(src, x.te.copy(v, 0), INF);
    }
    x.open_all_sink_intervals();
    let f = x.graph.run(src, x.super_sink);
    Ok(x.unscale(f))
}

/// `o^T(A)` for `T = 0, step, 2 step, ..., max_horizon`, sharing one
/// incremental max-flow computation.
pub fn oracle_outflow_profile(
    net: &Network,
    set: &[NodeId],
    max_horizon: &Rational,
    step: &Rational,
) -> Result<Vec<Rational>> {
    let te = build_time_expanded(net, max_horizon, step)?;
    let intervals = te.intervals;
    let mut x = Expanded::new(net, te, &[])?;
    let src = x.graph.add_node();
    for v in net.source_subset(set)? {
        x.graph.add_edge(src, x.te.copy(v, 0), INF);
    }
    let mut out = vec![Rational::zero()];
    let mut total = 0i128;
    for j in 0..intervals {
        x.open_sink_interval(j);
        total += x.graph.run(src, x.super_sink);
        out.push(x.unscale(total));
    }
    Ok(out)
}

/// True iff all supplies can reach the sink by `horizon` on the grid.
pub fn oracle_feasible(net: &Network, w: &SupplyFunction, horizon: &Rational, step: &Rational) -> Result<bool> {
    let te = build_time_expanded(net, horizon, step)?;
    let supplies: Vec<Rational> = net.sources().iter().map(|v| w.get(*v).clone()).collect();
    let mut x = Expanded::new(net, te, &supplies)?;
    let src = x.graph.add_node();
    let mut need = 0i128;
    for (v, s) in net.sources().iter().zip(&supplies) {
        if s.is_positive() {
            let c = x.scaled(s)?;
            need += c;
            x.graph.add_edge(src, x.te.copy(*v, 0), c);
        }
    }
    if need == 0 {
        return Ok(true);
    }
    x.open_all_sink_intervals();
    Ok(x.graph.run(src, x.super_sink) == need)
}

/// `max { theta(A) : A subset of S+ }` by enumerating every subset, then
/// certified on the default grid: feasible at `T*`, infeasible one step
/// earlier.
pub fn oracle_t_star(net: &Network, w: &SupplyFunction) -> Result<Rational> {
    let k = net.source_count();
    if k > 20 {
        return Err(Error::TooManySources(k));
    }
    crate::horizon::check_instance(net, w)?;
    let sources = net.sources();
    let mut best = Rational::zero();
    for mask in 1u32..(1u32 << k) {
        let set: Vec<NodeId> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| sources[i]).collect();
        let r = successive_shortest_paths(net, &set)?;
        let theta = min_required_time(&r, &w.of_set(&set))?;
        if theta > best {
            best = theta;
        }
    }
    let step = default_step(net, &best);
    if !oracle_feasible(net, w, &best, &step)? {
        return Err(Error::OracleDisagreement(format!("infeasible at T = {best}")));
    }
    let earlier = &best - &step;
    if !earlier.is_negative() && oracle_feasible(net, w, &earlier, &step)? {
        return Err(Error::OracleDisagreement(format!("already feasible at T = {earlier}")));
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowViolation {
    /// The flow's step does not divide the horizon or a transit time.
    Grid,
    /// Constraint (1): negative amount or more than `u * step` per interval.
    Capacity { edge: EdgeId, interval: usize },
    /// Flow still travelling at the horizon.
    LateArrival { edge: EdgeId, interval: usize },
    /// Constraint (2): a node sends more than it has received plus its supply.
    Conservation { node: NodeId, interval: usize },
    /// Constraint (3): net outflow differs from the supply.
    Supply { node: NodeId, expected: Rational, found: Rational },
}

impl fmt::Display for FlowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowViolation::Grid => write!(f, "time grid does not fit the horizon or transit times"),
            FlowViolation::Capacity { edge, interval } => {
                write!(f, "capacity constraint violated on {edge} in interval {interval}")
            }
            FlowViolation::LateArrival { edge, interval } => {
                write!(f, "flow entering {edge} in interval {interval} arrives after the horizon")
            }
            FlowViolation::Conservation { node, interval } => {
                write!(f, "conservation constraint violated at node {node} in interval {interval}")
            }
            FlowViolation::Supply { node, expected, found } => {
                write!(f, "supply constraint violated at node {node}: expected {expected}, found {found}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowReport {
    pub violation: Option<FlowViolation>,
}

impl FlowReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    pub fn summary(&self) -> String {
        match &self.violation {
            None => "pass".into(),
            Some(v) => format!("fail: {v}"),
        }
    }
}

/// Checks capacity, conservation (storage never negative) and supply
/// constraints of a discrete dynamic flow with horizon `horizon`.
pub fn verify_dynamic_flow(
    net: &Network,
    flow: &TimeExpandedFlow,
    w: &SupplyFunction,
    horizon: &Rational,
) -> FlowReport {
    let fail = |v| FlowReport { violation: Some(v) };
    let te = match build_time_expanded(net, horizon, &flow.step) {
        Ok(te) => te,
        Err(_) => return fail(FlowViolation::Grid),
    };
    let l = te.intervals;
    let n = net.node_count();
    // net departures per node per interval
    let mut delta = vec![vec![Rational::zero(); l.max(1)]; n];
    for (&(j, e), a) in &flow.amounts {
        if e.index() >= net.edge_count() {
            return fail(FlowViolation::Grid);
        }
        if a.is_negative() || *a > te.arc_capacity {
            return fail(FlowViolation::Capacity { edge: e, interval: j });
        }
        let arrival = j + te.shifts[e.index()];
        if arrival >= l {
            return fail(FlowViolation::LateArrival { edge: e, interval: j });
        }
        let edge = net.edge(e);
        delta[edge.tail.index()][j] += a;
        delta[edge.head.index()][arrival] -= a;
    }
    for (i, row) in delta.iter().enumerate() {
        let node = NodeId(i as u32);
        let stock = w.values().get(i).cloned().unwrap_or_default();
        let stock = if stock.is_positive() { stock } else { Rational::zero() };
        let mut cumulative = Rational::zero();
        for (j, d) in row.iter().enumerate() {
            cumulative += d;
            if cumulative > stock {
                return fail(FlowViolation::Conservation { node, interval: j });
            }
        }
    }
    for (i, row) in delta.iter().enumerate() {
        let node = NodeId(i as u32);
        let found = sum(row.iter());
        let expected = w.values().get(i).cloned().unwrap_or_default();
        if found != expected {
            return fail(FlowViolation::Supply { node, expected, found });
        }
    }
    FlowReport { violation: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::tests::two_sources;
    use crate::rational::{int, ratio};

    #[test]
    fn layer_counts() {
        let (net, _) = two_sources();
        let te = build_time_expanded(&net, &ratio(9, 2), &ratio(1, 2)).unwrap();
        assert_eq!(te.layer_count(), 10);
        let te = build_time_expanded(&net, &int(1), &int(1)).unwrap();
        let arcs: Vec<_> = te.movement_arcs().collect();
        assert_eq!(arcs, vec![(EdgeId(1), 0), (EdgeId(2), 0)]);
        assert!(build_time_expanded(&net, &int(1), &ratio(1, 3)).is_ok());
        assert!(matches!(build_time_expanded(&net, &int(2), &ratio(2, 5)), Err(Error::NonDivisibleStep { .. })));
    }

    #[test]
    fn outflow_matches_closed_form() {
        let (net, _) = two_sources();
        let both = [NodeId(0), NodeId(1)];
        assert_eq!(oracle_max_outflow(&net, &both, &ratio(9, 2), &ratio(1, 2)).unwrap(), int(5));
        assert_eq!(oracle_max_outflow(&net, &[NodeId(1)], &int(1), &int(1)).unwrap(), int(0));
        assert_eq!(oracle_max_outflow(&net, &both, &int(0), &int(1)).unwrap(), int(0));
        let profile = oracle_outflow_profile(&net, &[NodeId(0)], &int(5), &ratio(1, 2)).unwrap();
        assert_eq!(profile.len(), 11);
        assert_eq!(profile[9], int(4));
    }

    #[test]
    fn feasibility_on_two_sources() {
        let (net, w) = two_sources();
        let h = ratio(1, 2);
        assert!(oracle_feasible(&net, &w, &ratio(9, 2), &h).unwrap());
        assert!(!oracle_feasible(&net, &w, &int(4), &h).unwrap());
        assert!(oracle_feasible(&net, &w, &int(100), &int(1)).unwrap());
        assert_eq!(oracle_t_star(&net, &w).unwrap(), ratio(9, 2));
    }

    #[test]
    fn default_step_reduces_by_transit() {
        let (net, _) = two_sources();
        assert_eq!(default_step(&net, &ratio(9, 2)), ratio(1, 2));
        assert_eq!(default_step(&net, &int(4)), int(1));
    }

    #[test]
    fn verifier_catches_violations() {
        let (net, w) = two_sources();
        let mut over = TimeExpandedFlow::zero(int(1), int(5));
        over.amounts.insert((0, EdgeId(1)), int(2));
        assert!(matches!(
            verify_dynamic_flow(&net, &over, &w, &int(5)).violation,
            Some(FlowViolation::Capacity { .. })
        ));

        // v2 sends its 3 units, v1 sends 1 of 2
        let mut short = TimeExpandedFlow::zero(int(1), int(5));
        for j in 0..3 {
            short.amounts.insert((j, EdgeId(1)), int(1));
        }
        short.amounts.insert((0, EdgeId(0)), int(1));
        assert!(matches!(
            verify_dynamic_flow(&net, &short, &w, &int(5)).violation,
            Some(FlowViolation::Supply { node: NodeId(0), .. })
        ));
    }
}
