//! Dynamic flow network model, static flows, residual networks and the
//! deterministic residual shortest-path routine.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::{common_denominator, sum, Rational};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub transit: Rational,
}

/// Unvalidated network description, as produced by file formats.
///
/// Unlike [`Network`] it can express per-edge capacities and any number of
/// sinks so that [`validate_network`] can report those model violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkDraft {
    pub node_count: usize,
    pub edges: Vec<DraftEdge>,
    pub capacity: Rational,
    pub sources: Vec<NodeId>,
    pub sinks: Vec<NodeId>,
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DraftEdge {
    pub tail: NodeId,
    pub head: NodeId,
    pub transit: Rational,
    /// Per-edge override; must equal the network capacity when present.
    pub capacity: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EdgeEndpointOutOfRange(EdgeId),
    SelfLoopAtSink(EdgeId),
    NegativeTransit(EdgeId),
    NonPositiveCapacity,
    NonUniformCapacity(EdgeId),
    NoSink,
    MultipleSinks(usize),
    NodeOutOfRange(NodeId),
    SinkIsSource,
    DuplicateSource(NodeId),
    NameCountMismatch { expected: usize, found: usize },
    SupplyLength { expected: usize, found: usize },
    NonPositiveSourceSupply(NodeId),
    NonNegativeSinkSupply,
    NonZeroInnerSupply(NodeId),
    Imbalanced(Rational),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeEndpointOutOfRange(e) => write!(f, "edge {e} has an endpoint out of range"),
            Violation::SelfLoopAtSink(e) => write!(f, "edge {e} is a self-loop at the sink"),
            Violation::NegativeTransit(e) => write!(f, "edge {e} has a negative transit time"),
            Violation::NonPositiveCapacity => write!(f, "capacity must be positive"),
            Violation::NonUniformCapacity(e) => write!(f, "non-uniform capacity on edge {e}"),
            Violation::NoSink => write!(f, "no sink"),
            Violation::MultipleSinks(n) => write!(f, "multiple sinks ({n})"),
            Violation::NodeOutOfRange(v) => write!(f, "node {v} out of range"),
            Violation::SinkIsSource => write!(f, "sink is also a source"),
            Violation::DuplicateSource(v) => write!(f, "source {v} listed twice"),
            Violation::NameCountMismatch { expected, found } => {
                write!(f, "expected {expected} node names, found {found}")
            }
            Violation::SupplyLength { expected, found } => {
                write!(f, "expected {expected} supply values, found {found}")
            }
            Violation::NonPositiveSourceSupply(v) => {
                write!(f, "source with non-positive supply at node {v}")
            }
            Violation::NonNegativeSinkSupply => write!(f, "sink with non-negative supply"),
            Violation::NonZeroInnerSupply(v) => write!(f, "non-terminal node {v} has nonzero supply"),
            Violation::Imbalanced(total) => write!(f, "supplies do not sum to zero (sum = {total})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Supply/demand per node, indexed densely by node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupplyFunction {
    values: Vec<Rational>,
}

impl SupplyFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        SupplyFunction { values }
    }

    pub fn get(&self, v: NodeId) -> &Rational {
        &self.values[v.index()]
    }

    pub fn set(&mut self, v: NodeId, value: Rational) {
        self.values[v.index()] = value;
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `w(A)`.
    pub fn of_set(&self, set: &[NodeId]) -> Rational {
        sum(set.iter().map(|v| &self.values[v.index()]))
    }
}

/// One direction of an edge in a residual network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidualArc {
    pub edge: EdgeId,
    /// `false` for the reverse arc that cancels flow.
    pub forward: bool,
}

/// Validated dynamic flow network with uniform capacity and a single sink.
#[derive(Debug, Clone)]
pub struct Network {
    node_count: usize,
    edges: Vec<Edge>,
    capacity: Rational,
    sources: Vec<NodeId>,
    sink: NodeId,
    names: Option<Vec<String>>,
    is_source: Vec<bool>,
    sink_in_degree: usize,
    cost_scale: Rational,
    scaled_cost: Vec<i64>,
    // candidate residual arcs leaving / entering each node, in tie-break order
    arcs_out: Vec<Vec<ResidualArc>>,
    arcs_in: Vec<Vec<ResidualArc>>,
}

fn structural_violations(draft: &NetworkDraft) -> Vec<Violation> {
    let n = draft.node_count;
    let mut out = Vec::new();
    if !draft.capacity.is_positive() {
        out.push(Violation::NonPositiveCapacity);
    }
    match draft.sinks.len() {
        0 => out.push(Violation::NoSink),
        1 => {}
        more => out.push(Violation::MultipleSinks(more)),
    }
    for &s in &draft.sinks {
        if s.index() >= n {
            out.push(Violation::NodeOutOfRange(s));
        }
    }
    let mut seen = vec![false; n];
    for &s in &draft.sources {
        if s.index() >= n {
            out.push(Violation::NodeOutOfRange(s));
            continue;
        }
        if seen[s.index()] {
            out.push(Violation::DuplicateSource(s));
        }
        seen[s.index()] = true;
        if draft.sinks.contains(&s) {
            out.push(Violation::SinkIsSource);
        }
    }
    for (i, e) in draft.edges.iter().enumerate() {
        let id = EdgeId(i as u32);
        if e.tail.index() >= n || e.head.index() >= n {
            out.push(Violation::EdgeEndpointOutOfRange(id));
        }
        if e.tail == e.head && draft.sinks.contains(&e.tail) {
            out.push(Violation::SelfLoopAtSink(id));
        }
        if e.transit.is_negative() {
            out.push(Violation::NegativeTransit(id));
        }
        if let Some(c) = &e.capacity {
            if *c != draft.capacity {
                out.push(Violation::NonUniformCapacity(id));
            }
        }
    }
    if let Some(names) = &draft.names {
        if names.len() != n {
            out.push(Violation::NameCountMismatch { expected: n, found: names.len() });
        }
    }
    out
}

fn supply_violations(node_count: usize, sources: &[NodeId], sinks: &[NodeId], w: &SupplyFunction) -> Vec<Violation> {
    let mut out = Vec::new();
    if w.values.len() != node_count {
        out.push(Violation::SupplyLength { expected: node_count, found: w.values.len() });
        return out;
    }
    for (i, value) in w.values.iter().enumerate() {
        let v = NodeId(i as u32);
        if sources.contains(&v) {
            if !value.is_positive() {
                out.push(Violation::NonPositiveSourceSupply(v));
            }
        } else if sinks.contains(&v) {
            if !value.is_negative() {
                out.push(Violation::NonNegativeSinkSupply);
            }
        } else if !value.is_zero() {
            out.push(Violation::NonZeroInnerSupply(v));
        }
    }
    let total = sum(w.values.iter());
    if !total.is_zero() {
        out.push(Violation::Imbalanced(total));
    }
    out
}

/// Checks every model assumption on a draft network together with its
/// supplies and lists all violations found.
pub fn validate_network(draft: &NetworkDraft, w: &SupplyFunction) -> ValidationReport {
    let mut violations = structural_violations(draft);
    violations.extend(supply_violations(draft.node_count, &draft.sources, &draft.sinks, w));
    ValidationReport { violations }
}

impl Network {
    pub fn from_draft(draft: NetworkDraft) -> Result<Self> {
        let violations = structural_violations(&draft);
        if !violations.is_empty() {
            return Err(Error::InvalidNetwork(ValidationReport { violations }));
        }
        let n = draft.node_count;
        let sink = draft.sinks[0];
        let mut sources = draft.sources;
        sources.sort();
        let edges: Vec<Edge> =
            draft.edges.into_iter().map(|e| Edge { tail: e.tail, head: e.head, transit: e.transit }).collect();

        let scale = Rational::from_integer(common_denominator(edges.iter().map(|e| &e.transit)));
        let mut scaled_cost = Vec::with_capacity(edges.len());
        let limit = i64::MAX / 4 / (n.max(1) as i64);
        for e in &edges {
            let c = (&e.transit * &scale).to_integer().to_i64().filter(|c| *c <= limit);
            scaled_cost.push(c.ok_or(Error::Overflow)?);
        }

        let mut arcs_out = vec![Vec::new(); n];
        let mut arcs_in = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            let id = EdgeId(i as u32);
            arcs_out[e.tail.index()].push(ResidualArc { edge: id, forward: true });
            arcs_in[e.head.index()].push(ResidualArc { edge: id, forward: true });
            arcs_out[e.head.index()].push(ResidualArc { edge: id, forward: false });
            arcs_in[e.tail.index()].push(ResidualArc { edge: id, forward: false });
        }
        // edge id ascending, forward before backward
        let key = |a: &ResidualArc| (a.edge, !a.forward);
        for list in arcs_out.iter_mut().chain(arcs_in.iter_mut()) {
            list.sort_by_key(key);
        }

        let mut is_source = vec![false; n];
        for s in &sources {
            is_source[s.index()] = true;
        }
        let sink_in_degree = edges.iter().filter(|e| e.head == sink).count();
        Ok(Network {
            node_count: n,
            edges,
            capacity: draft.capacity,
            sources,
            sink,
            names: draft.names,
            is_source,
            sink_in_degree,
            cost_scale: scale,
            scaled_cost,
            arcs_out,
            arcs_in,
        })
    }

    /// Builds a network from `(tail, head, transit)` triples.
    pub fn new(
        node_count: usize,
        edges: Vec<(u32, u32, Rational)>,
        capacity: Rational,
        sources: Vec<u32>,
        sink: u32,
    ) -> Result<Self> {
        Network::from_draft(NetworkDraft {
            node_count,
            edges: edges
                .into_iter()
                .map(|(t, h, tau)| DraftEdge { tail: NodeId(t), head: NodeId(h), transit: tau, capacity: None })
                .collect(),
            capacity,
            sources: sources.into_iter().map(NodeId).collect(),
            sinks: vec![NodeId(sink)],
            names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.node_count {
            return Err(Error::InvalidNetwork(ValidationReport {
                violations: vec![Violation::NameCountMismatch { expected: self.node_count, found: names.len() }],
            }));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    /// Sources in ascending id order.
    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn is_source(&self, v: NodeId) -> bool {
        self.is_source.get(v.index()).copied().unwrap_or(false)
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    /// `d`, the number of edges entering the sink.
    pub fn sink_in_degree(&self) -> usize {
        self.sink_in_degree
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn label(&self, v: NodeId) -> String {
        match &self.names {
            Some(names) => names[v.index()].clone(),
            None => format!("{}", v.0),
        }
    }

    /// Positive integer `L` with `L * transit` integral for every edge.
    pub fn cost_scale(&self) -> &Rational {
        &self.cost_scale
    }

    pub(crate) fn scaled_cost(&self, e: EdgeId) -> i64 {
        self.scaled_cost[e.index()]
    }

    pub(crate) fn arc_scaled_cost(&self, arc: ResidualArc) -> i64 {
        let c = self.scaled_cost[arc.edge.index()];
        if arc.forward {
            c
        } else {
            -c
        }
    }

    pub(crate) fn unscale(&self, scaled: i64) -> Rational {
        Rational::from_integer(BigInt::from(scaled)) / &self.cost_scale
    }

    pub fn arc_tail(&self, arc: ResidualArc) -> NodeId {
        let e = &self.edges[arc.edge.index()];
        if arc.forward {
            e.tail
        } else {
            e.head
        }
    }

    pub fn arc_head(&self, arc: ResidualArc) -> NodeId {
        let e = &self.edges[arc.edge.index()];
        if arc.forward {
            e.head
        } else {
            e.tail
        }
    }

    pub fn arc_cost(&self, arc: ResidualArc) -> Rational {
        let t = self.edges[arc.edge.index()].transit.clone();
        if arc.forward {
            t
        } else {
            -t
        }
    }

    /// Rejects supplies that break the sign or balance rules.
    pub fn check_supply(&self, w: &SupplyFunction) -> Result<()> {
        let violations = supply_violations(self.node_count, &self.sources, &[self.sink], w);
        ValidationReport { violations }.into_result()
    }

    /// Normalises a subset: sorted, deduplicated, sources only.
    pub fn source_subset(&self, nodes: &[NodeId]) -> Result<Vec<NodeId>> {
        let mut set: Vec<NodeId> = nodes.to_vec();
        set.sort();
        set.dedup();
        if let Some(&bad) = set.iter().find(|v| !self.is_source(**v)) {
            return Err(Error::NotASource(bad));
        }
        Ok(set)
    }
}

/// Static flow amount per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticFlow {
    amounts: Vec<Rational>,
}

impl StaticFlow {
    pub fn zero(net: &Network) -> Self {
        StaticFlow { amounts: vec![Rational::zero(); net.edge_count()] }
    }

    pub fn from_amounts(amounts: Vec<Rational>) -> Self {
        StaticFlow { amounts }
    }

    pub fn amount(&self, e: EdgeId) -> &Rational {
        &self.amounts[e.index()]
    }

    pub fn amounts(&self) -> &[Rational] {
        &self.amounts
    }

    /// Net flow into `v` minus flow out of `v`.
    pub fn excess(&self, net: &Network, v: NodeId) -> Rational {
        let mut total = Rational::zero();
        for (e, a) in net.edges.iter().zip(&self.amounts) {
            if e.head == v {
                total += a;
            }
            if e.tail == v {
                total -= a;
            }
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StaticFlowViolation {
    Capacity(EdgeId),
    Conservation(NodeId),
    Amount,
}

/// Checks capacity bounds, conservation away from `origins` and the sink, and
/// that the sink receives exactly what the origins emit.
pub fn validate_static_flow(
    net: &Network,
    flow: &StaticFlow,
    origins: &[NodeId],
) -> core::result::Result<(), StaticFlowViolation> {
    for (i, a) in flow.amounts.iter().enumerate() {
        if a.is_negative() || *a > net.capacity {
            return Err(StaticFlowViolation::Capacity(EdgeId(i as u32)));
        }
    }
    let mut emitted = Rational::zero();
    for i in 0..net.node_count {
        let v = NodeId(i as u32);
        let excess = flow.excess(net, v);
        if origins.contains(&v) {
            emitted -= excess;
        } else if v != net.sink && !excess.is_zero() {
            return Err(StaticFlowViolation::Conservation(v));
        }
    }
    if flow.excess(net, net.sink) != emitted {
        return Err(StaticFlowViolation::Amount);
    }
    Ok(())
}

/// Residual network of a static flow: a forward arc of cost `tau(e)` for each
/// unsaturated edge and a backward arc of cost `-tau(e)` for each edge
/// carrying flow.
#[derive(Debug, Clone)]
pub struct ResidualView<'a> {
    net: &'a Network,
    forward: Vec<bool>,
    backward: Vec<bool>,
}

impl<'a> ResidualView<'a> {
    pub fn new(net: &'a Network, flow: &StaticFlow) -> Self {
        let forward = flow.amounts.iter().map(|a| *a < net.capacity).collect();
        let backward = flow.amounts.iter().map(|a| a.is_positive()).collect();
        ResidualView { net, forward, backward }
    }

    /// Residual network of a flow whose edges are either empty or saturated.
    pub(crate) fn from_saturation(net: &'a Network, saturated: &[bool]) -> Self {
        ResidualView { net, forward: saturated.iter().map(|s| !s).collect(), backward: saturated.to_vec() }
    }

    pub fn network(&self) -> &'a Network {
        self.net
    }

    pub fn contains(&self, arc: ResidualArc) -> bool {
        if arc.forward {
            self.forward[arc.edge.index()]
        } else {
            self.backward[arc.edge.index()]
        }
    }

    /// Residual arcs leaving `v`, ordered by edge id with forward arcs first.
    pub fn arcs_from(&self, v: NodeId) -> impl Iterator<Item = ResidualArc> + '_ {
        self.net.arcs_out[v.index()].iter().copied().filter(move |a| self.contains(*a))
    }

    pub fn arcs_into(&self, v: NodeId) -> impl Iterator<Item = ResidualArc> + '_ {
        self.net.arcs_in[v.index()].iter().copied().filter(move |a| self.contains(*a))
    }
}

/// Minimum scaled cost from every node to a target, plus the fewest arcs
/// needed among minimum-cost routes.
#[derive(Debug, Clone)]
pub struct Distances {
    target: NodeId,
    cost: Vec<Option<i64>>,
    hops: Vec<u32>,
}

impl Distances {
    pub fn target(&self) -> NodeId {
        self.target
    }

    /// Scaled distance (`transit * cost_scale` units); `None` if unreachable.
    pub fn scaled(&self, v: NodeId) -> Option<i64> {
        self.cost[v.index()]
    }

    pub fn reaches(&self, v: NodeId) -> bool {
        self.cost[v.index()].is_some()
    }

    /// Orders candidate origins: smaller distance first, then smaller id.
    /// Unreachable nodes compare as infinitely far.
    pub fn key(&self, v: NodeId) -> (bool, i64, NodeId) {
        match self.cost[v.index()] {
            Some(c) => (false, c, v),
            None => (true, 0, v),
        }
    }
}

/// Label-correcting (Bellman-Ford-Moore) distances to `target` over the
/// residual arcs. Fails on a negative-cost cycle.
pub fn distances_to(res: &ResidualView<'_>, target: NodeId) -> Result<Distances> {
    let net = res.net;
    let n = net.node_count;
    let mut cost: Vec<Option<i64>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    cost[target.index()] = Some(0);
    queue.push_back(target);
    queued[target.index()] = true;
    while let Some(y) = queue.pop_front() {
        queued[y.index()] = false;
        let dy = match cost[y.index()] {
            Some(d) => d,
            None => continue,
        };
        for arc in res.arcs_into(y) {
            let x = net.arc_tail(arc);
            let cand = dy + net.arc_scaled_cost(arc);
            if cost[x.index()].is_none_or(|dx| cand < dx) {
                cost[x.index()] = Some(cand);
                depth[x.index()] = depth[y.index()] + 1;
                if depth[x.index()] >= n {
                    return Err(Error::NegativeCycle);
                }
                if !queued[x.index()] {
                    queued[x.index()] = true;
                    queue.push_back(x);
                }
            }
        }
    }
    if cost[target.index()] != Some(0) {
        return Err(Error::NegativeCycle);
    }

    // fewest arcs over the tight subgraph
    let mut hops = vec![u32::MAX; n];
    hops[target.index()] = 0;
    let mut bfs = VecDeque::new();
    bfs.push_back(target);
    while let Some(y) = bfs.pop_front() {
        let dy = cost[y.index()].unwrap_or_default();
        for arc in res.arcs_into(y) {
            let x = net.arc_tail(arc);
            if hops[x.index()] == u32::MAX && cost[x.index()] == Some(dy + net.arc_scaled_cost(arc)) {
                hops[x.index()] = hops[y.index()] + 1;
                bfs.push_back(x);
            }
        }
    }
    Ok(Distances { target, cost, hops })
}

/// A path in a residual network from `origin` to the sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub origin: NodeId,
    pub arcs: Vec<ResidualArc>,
    pub cost: Rational,
    pub(crate) scaled_cost: i64,
}

impl Path {
    /// Nodes visited, origin first.
    pub fn nodes(&self, net: &Network) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        out.push(self.origin);
        out.extend(self.arcs.iter().map(|a| net.arc_head(*a)));
        out
    }
}

/// Extracts the tie-broken minimum-cost path from `origin` using
/// precomputed distances: among minimum-cost paths take those with fewest
/// arcs, and among those the lexicographically smallest arc sequence.
pub(crate) fn trace_path(res: &ResidualView<'_>, dist: &Distances, origin: NodeId) -> Option<Path> {
    let net = res.net;
    let total = dist.cost[origin.index()]?;
    let mut arcs = Vec::new();
    let mut x = origin;
    while x != dist.target {
        let dx = dist.cost[x.index()]?;
        let hx = dist.hops[x.index()];
        let next = res.arcs_from(x).find(|arc| {
            let y = net.arc_head(*arc);
            dist.cost[y.index()].is_some_and(|dy| dy + net.arc_scaled_cost(*arc) == dx)
                && dist.hops[y.index()].wrapping_add(1) == hx
        })?;
        arcs.push(next);
        x = net.arc_head(next);
    }
    Some(Path { origin, arcs, cost: net.unscale(total), scaled_cost: total })
}

/// Origin of the tie-broken shortest path from `set`, if any member reaches
/// the target.
pub(crate) fn best_origin(dist: &Distances, set: &[NodeId]) -> Option<NodeId> {
    set.iter().copied().filter(|v| dist.reaches(*v)).min_by_key(|v| dist.key(*v))
}

/// Minimum-cost path from any node of `set` to `target` in the residual
/// network. Ties: smaller origin id, then fewer arcs, then the
/// lexicographically smallest `(edge id, forward-first)` arc sequence.
pub fn shortest_path(res: &ResidualView<'_>, set: &[NodeId], target: NodeId) -> Result<Option<Path>> {
    let dist = distances_to(res, target)?;
    Ok(best_origin(&dist, set).and_then(|o| trace_path(res, &dist, o)))
}

/// Pushes `amount` along `path`: forward arcs gain, backward arcs lose.
pub fn augment(net: &Network, flow: &StaticFlow, path: &Path, amount: &Rational) -> Result<StaticFlow> {
    let mut amounts = flow.amounts.clone();
    let mut at = path.origin;
    for (i, arc) in path.arcs.iter().enumerate() {
        if net.arc_tail(*arc) != at {
            return Err(Error::BrokenPath(i));
        }
        at = net.arc_head(*arc);
        let slot = &mut amounts[arc.edge.index()];
        if arc.forward {
            let next = &*slot + amount;
            if next > net.capacity {
                return Err(Error::CapacityExceeded(arc.edge));
            }
            *slot = next;
        } else {
            let next = &*slot - amount;
            if next.is_negative() {
                return Err(Error::NegativeFlow(arc.edge));
            }
            *slot = next;
        }
    }
    Ok(StaticFlow { amounts })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::string::ToString;

    /// Three nodes v1=0, v2=1, t=2 with (v1,t) tau 3, (v2,t) tau 1, (v1,v2) tau 1.
    pub fn two_sources() -> (Network, SupplyFunction) {
        let net = Network::new(3, vec![(0, 2, int(3)), (1, 2, int(1)), (0, 1, int(1))], int(1), vec![0, 1], 2)
            .unwrap()
            .with_names(vec!["v1".to_string(), "v2".to_string(), "t".to_string()])
            .unwrap();
        let w = SupplyFunction::new(vec![int(2), int(3), int(-5)]);
        (net, w)
    }

    fn two_sources_draft() -> NetworkDraft {
        NetworkDraft {
            node_count: 3,
            edges: [(0, 2, 3), (1, 2, 1), (0, 1, 1)]
                .iter()
                .map(|&(t, h, tau)| DraftEdge { tail: NodeId(t), head: NodeId(h), transit: int(tau), capacity: None })
                .collect(),
            capacity: int(1),
            sources: vec![NodeId(0), NodeId(1)],
            sinks: vec![NodeId(2)],
            names: None,
        }
    }

    #[test]
    fn two_sources_validates() {
        let (_, w) = two_sources();
        assert!(validate_network(&two_sources_draft(), &w).is_ok());
    }

    #[test]
    fn negative_source_supply_is_reported() {
        let w = SupplyFunction::new(vec![int(-1), int(3), int(-2)]);
        let report = validate_network(&two_sources_draft(), &w);
        assert!(report.violations.contains(&Violation::NonPositiveSourceSupply(NodeId(0))));
        assert!(report.to_string().contains("source with non-positive supply"));
    }

    #[test]
    fn imbalance_is_reported() {
        let w = SupplyFunction::new(vec![int(2), int(3), int(-4)]);
        let report = validate_network(&two_sources_draft(), &w);
        assert_eq!(report.violations, vec![Violation::Imbalanced(int(1))]);
        assert!(report.to_string().contains("supplies do not sum to zero"));
    }

    #[test]
    fn structural_violations_are_reported() {
        let (_, w) = two_sources();
        let mut draft = two_sources_draft();
        draft.edges[1].capacity = Some(int(2));
        draft.sinks.push(NodeId(1));
        draft.edges.push(DraftEdge { tail: NodeId(2), head: NodeId(2), transit: int(1), capacity: None });
        let report = validate_network(&draft, &w);
        assert!(report.violations.contains(&Violation::NonUniformCapacity(EdgeId(1))));
        assert!(report.violations.contains(&Violation::MultipleSinks(2)));
        assert!(report.violations.contains(&Violation::SelfLoopAtSink(EdgeId(3))));
        assert!(Network::from_draft(draft).is_err());
    }

    #[test]
    fn shortest_path_from_both_sources() {
        let (net, _) = two_sources();
        let flow = StaticFlow::zero(&net);
        let res = ResidualView::new(&net, &flow);
        let p = shortest_path(&res, &[NodeId(0), NodeId(1)], net.sink()).unwrap().unwrap();
        assert_eq!(p.origin, NodeId(1));
        assert_eq!(p.cost, int(1));
        assert_eq!(p.arcs, vec![ResidualArc { edge: EdgeId(1), forward: true }]);
    }

    #[test]
    fn shortest_path_from_v1_goes_through_v2() {
        let (net, _) = two_sources();
        let flow = StaticFlow::zero(&net);
        let res = ResidualView::new(&net, &flow);
        let p = shortest_path(&res, &[NodeId(0)], net.sink()).unwrap().unwrap();
        assert_eq!(p.origin, NodeId(0));
        assert_eq!(p.cost, int(2));
        assert_eq!(p.nodes(&net), vec![NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn saturated_v2_edge_blocks_v2() {
        let (net, _) = two_sources();
        let flow = StaticFlow::from_amounts(vec![int(0), int(1), int(0)]);
        let res = ResidualView::new(&net, &flow);
        assert!(shortest_path(&res, &[NodeId(1)], net.sink()).unwrap().is_none());
    }

    #[test]
    fn augment_forward_and_cancel() {
        let (net, _) = two_sources();
        let zero = StaticFlow::zero(&net);
        let single = Path {
            origin: NodeId(1),
            arcs: vec![ResidualArc { edge: EdgeId(1), forward: true }],
            cost: int(1),
            scaled_cost: 1,
        };
        let f = augment(&net, &zero, &single, &int(1)).unwrap();
        assert_eq!(f.amount(EdgeId(1)), &int(1));

        let with_v1v2 = StaticFlow::from_amounts(vec![int(0), int(0), int(1)]);
        // v2 -> v1 (cancel) -> t
        let back = Path {
            origin: NodeId(1),
            arcs: vec![ResidualArc { edge: EdgeId(2), forward: false }, ResidualArc { edge: EdgeId(0), forward: true }],
            cost: int(2),
            scaled_cost: 2,
        };
        let g = augment(&net, &with_v1v2, &back, &int(1)).unwrap();
        assert_eq!(g.amount(EdgeId(2)), &int(0));
        assert_eq!(g.amount(EdgeId(0)), &int(1));

        assert_eq!(augment(&net, &f, &single, &int(1)), Err(Error::CapacityExceeded(EdgeId(1))));
        let broken = Path { origin: NodeId(0), ..single };
        assert_eq!(augment(&net, &zero, &broken, &int(1)), Err(Error::BrokenPath(0)));
    }

    #[test]
    fn negative_cycle_is_detected() {
        // saturating the expensive parallel edge 0->1 (tau 5) leaves a backward
        // arc of cost -5 next to a forward arc of cost 1
        let net =
            Network::new(3, vec![(0, 1, int(1)), (1, 0, int(1)), (1, 2, int(1)), (0, 1, int(5))], int(1), vec![0], 2)
                .unwrap();
        let bad = StaticFlow::from_amounts(vec![int(0), int(0), int(0), int(1)]);
        let res = ResidualView::new(&net, &bad);
        assert_eq!(shortest_path(&res, &[NodeId(0)], NodeId(2)), Err(Error::NegativeCycle));
    }

    #[test]
    fn rational_transit_is_scaled_exactly() {
        let net = Network::new(
            3,
            vec![(0, 1, crate::rational::ratio(1, 3)), (1, 2, crate::rational::ratio(1, 2))],
            int(1),
            vec![0],
            2,
        )
        .unwrap();
        assert_eq!(net.cost_scale(), &int(6));
        let res = ResidualView::new(&net, &StaticFlow::zero(&net));
        let p = shortest_path(&res, &[NodeId(0)], NodeId(2)).unwrap().unwrap();
        assert_eq!(p.cost, crate::rational::ratio(5, 6));
    }
}
