//! Bidirected `N x N` grids, the area classification of their nodes, and
//! the candidate-tuple filter that keeps the admitting family small.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::Error;
use crate::horizon::{admitted_tuples_filtered, AHatFamily, AdmitTuple, TupleFilter};
use crate::maxflow::MaxFlow;
use crate::network::{Distances, DraftEdge, Network, NetworkDraft, NodeId, SupplyFunction};
use crate::rational::Rational;
use crate::sssp::{successive_shortest_paths, Saturation};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub side: usize,
    pub transit: Rational,
    pub capacity: Rational,
    pub sink: (usize, usize),
    /// Supply of every non-sink node.
    pub supply: Rational,
}

impl GridSpec {
    pub fn node(&self, row: usize, col: usize) -> NodeId {
        NodeId((row * self.side + col) as u32)
    }
}

/// Builds the grid: node `r * N + c`, both directions of every adjacency,
/// all non-sink nodes are sources.
pub fn gen_grid(spec: &GridSpec) -> Result<(Network, SupplyFunction)> {
    let n = spec.side;
    if n < 2 {
        return Err(Error::InvalidGrid(format!("side {n} is smaller than 2")));
    }
    if spec.sink.0 >= n || spec.sink.1 >= n {
        return Err(Error::InvalidGrid(format!("sink {:?} outside a {n}x{n} grid", spec.sink)));
    }
    if !spec.supply.is_positive() {
        return Err(Error::InvalidGrid("supply must be positive".into()));
    }
    let mut edges = Vec::new();
    let mut link = |a: NodeId, b: NodeId| {
        for (t, h) in [(a, b), (b, a)] {
            edges.push(DraftEdge { tail: t, head: h, transit: spec.transit.clone(), capacity: None });
        }
    };
    for r in 0..n {
        for c in 0..n {
            if c + 1 < n {
                link(spec.node(r, c), spec.node(r, c + 1));
            }
            if r + 1 < n {
                link(spec.node(r, c), spec.node(r + 1, c));
            }
        }
    }
    let sink = spec.node(spec.sink.0, spec.sink.1);
    let sources: Vec<NodeId> = (0..n * n).map(|i| NodeId(i as u32)).filter(|v| *v != sink).collect();
    let names: Vec<String> = (0..n * n).map(|i| format!("r{}c{}", i / n, i % n)).collect();
    let mut supplies = vec![spec.supply.clone(); n * n];
    supplies[sink.index()] = -(&spec.supply * Rational::from_integer(BigInt::from(sources.len())));
    let net = Network::from_draft(NetworkDraft {
        node_count: n * n,
        edges,
        capacity: spec.capacity.clone(),
        sources,
        sinks: vec![sink],
        names: Some(names),
    })?;
    Ok((net, SupplyFunction::new(supplies)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AreaLabel {
    C1,
    C2,
    C3,
    X1,
    X2,
}

impl fmt::Display for AreaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AreaLabel::C1 => "C1",
            AreaLabel::C2 => "C2",
            AreaLabel::C3 => "C3",
            AreaLabel::X1 => "X1",
            AreaLabel::X2 => "X2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaInfo {
    pub label: AreaLabel,
    /// Edge-disjoint shortest paths to the sink.
    pub shortest_paths: usize,
    /// Edge-disjoint paths to the sink.
    pub disjoint_paths: usize,
}

/// Labels per node (the sink has none) plus the data the filter needs.
#[derive(Debug, Clone)]
pub struct Areas {
    pub info: Vec<Option<AreaInfo>>,
    /// Uniform transit time, scaled like the distances.
    tau: i64,
    dist: Distances,
    /// Scaled costs of the successive shortest paths of `{v}` alone.
    own_paths: Vec<Vec<i64>>,
}

impl Areas {
    pub fn label(&self, v: NodeId) -> Option<AreaLabel> {
        self.info[v.index()].as_ref().map(|i| i.label)
    }

    fn d(&self, v: NodeId) -> i64 {
        self.dist.scaled(v).unwrap_or(i64::MAX / 4)
    }
}

fn unit_disjoint_paths(net: &Network, from: NodeId, keep: impl Fn(usize) -> bool) -> usize {
    let mut g = MaxFlow::new(net.node_count());
    for (i, e) in net.edges().iter().enumerate() {
        if keep(i) {
            g.add_edge(e.tail.index(), e.head.index(), 1);
        }
    }
    g.run(from.index(), net.sink().index()) as usize
}

/// Classifies every source by its number of edge-disjoint shortest paths
/// `s` and edge-disjoint paths `t` to the sink.
pub fn classify_areas(net: &Network) -> Result<Areas> {
    let tau = net.edges().first().map(|e| e.transit.clone()).unwrap_or_default();
    if !tau.is_positive() || net.edges().iter().any(|e| e.transit != tau) {
        return Err(Error::InvalidGrid("transit times must be uniform and positive".into()));
    }
    let dist = Saturation::empty(net).distances()?;
    let scaled_tau = net.scaled_cost(crate::network::EdgeId(0));
    let tight = |i: usize| {
        let e = &net.edges()[i];
        match (dist.scaled(e.tail), dist.scaled(e.head)) {
            (Some(a), Some(b)) => a == b + scaled_tau,
            _ => false,
        }
    };
    let mut info = vec![None; net.node_count()];
    let mut own_paths = vec![Vec::new(); net.node_count()];
    for &v in net.sources() {
        own_paths[v.index()] = successive_shortest_paths(net, &[v])?.paths.iter().map(|p| p.scaled_cost).collect();
        let s = unit_disjoint_paths(net, v, tight);
        let t = unit_disjoint_paths(net, v, |_| true);
        let label = match (s >= 2, t) {
            (true, 4) => AreaLabel::C1,
            (true, 3) => AreaLabel::C2,
            (true, _) => AreaLabel::C3,
            (false, 4) => AreaLabel::X1,
            (false, _) => AreaLabel::X2,
        };
        info[v.index()] = Some(AreaInfo { label, shortest_paths: s, disjoint_paths: t });
    }
    Ok(Areas { info, tau: scaled_tau, dist, own_paths })
}

/// Necessary conditions on admitted tuples of a grid, keyed on the area of
/// `v_1` and distances `|v s-|`:
///
/// * `p >= 2`, `p` at least the number `t` of disjoint paths from `v_1`,
///   and `|v_1 s-| <= |v_i s-|` for all `i`;
/// * the area rules below, only at positions `i <= t`, with the slack
///   widened to the cost of the `i`-th successive shortest path of `{v_1}`
///   where that is larger:
/// * C1: `v_2 = v_1`, `v_3` and `v_4` within `|v_1 s-| + 4 tau`;
/// * C2: `v_2 = v_1`, `v_3` within `|v_1 s-| + 4 tau`;
/// * C3: `v_2 = v_1`;
/// * X1: `v_2`, `v_3` within `|v_1 s-| + 2 tau`, `v_4` within `+ 8 tau`;
/// * X2: `v_2`, `v_3` within `|v_1 s-| + 2 tau`.
pub struct CandidateFilter<'a> {
    net: &'a Network,
    areas: &'a Areas,
}

impl<'a> CandidateFilter<'a> {
    pub fn new(net: &'a Network, areas: &'a Areas) -> Self {
        CandidateFilter { net, areas }
    }

    /// Whether `v` may sit at (1-based) position `i` behind `v1`.
    pub fn allowed_at(&self, v1: NodeId, i: usize, v: NodeId) -> bool {
        let a = self.areas;
        let Some(info) = &a.info[v1.index()] else { return false };
        if !self.net.is_source(v) {
            return false;
        }
        let d1 = a.d(v1);
        let dv = a.d(v);
        if i == 1 {
            return v == v1;
        }
        if dv < d1 {
            return false;
        }
        // the bounds compare with a residual path from v_1, which exists
        // only while v_1 has unused disjoint paths
        if i > info.disjoint_paths {
            return true;
        }
        // where v_1's own i-th path is longer than the printed slack (the
        // last path around a boundary sink), that path is the bound
        let own = a.own_paths[v1.index()].get(i - 1).copied().unwrap_or(d1);
        let within = |k: i64| dv <= (d1 + k * a.tau).max(own);
        use AreaLabel::*;
        match (info.label, i) {
            (C1 | C2 | C3, 2) => v == v1,
            (C1 | C2, 3) => within(4),
            (C1, 4) => within(4),
            (X1 | X2, 2 | 3) => within(2),
            (X1, 4) => within(8),
            _ => true,
        }
    }

    pub fn min_len(&self, v1: NodeId) -> usize {
        let t = self.areas.info[v1.index()].as_ref().map_or(usize::MAX, |i| i.disjoint_paths);
        t.max(2)
    }

    pub fn contains(&self, tuple: &[NodeId]) -> bool {
        let Some(&v1) = tuple.first() else { return false };
        tuple.len() >= self.min_len(v1)
            && tuple.len() <= self.net.sink_in_degree()
            && tuple.iter().enumerate().all(|(i, v)| self.allowed_at(v1, i + 1, *v))
    }

    fn allowed_counts(&self, v1: NodeId) -> Vec<u128> {
        let d = self.net.sink_in_degree();
        (1..=d).map(|i| self.net.sources().iter().filter(|v| self.allowed_at(v1, i, **v)).count() as u128).collect()
    }

    /// `|I|` without listing the tuples.
    pub fn count(&self) -> u128 {
        let d = self.net.sink_in_degree();
        let mut total = 0u128;
        for &v1 in self.net.sources() {
            let counts = self.allowed_counts(v1);
            let mut prod = 1u128;
            for p in 1..=d {
                prod = prod.saturating_mul(counts[p - 1]);
                if p >= self.min_len(v1) {
                    total = total.saturating_add(prod);
                }
            }
        }
        total
    }

    /// Lists `I` in canonical order (`p` ascending, then lexicographic).
    pub fn tuples(&self) -> Vec<AdmitTuple> {
        let d = self.net.sink_in_degree();
        let mut out = Vec::new();
        for &v1 in self.net.sources() {
            let mut stack = vec![vec![v1]];
            while let Some(prefix) = stack.pop() {
                if prefix.len() >= self.min_len(v1) {
                    out.push(AdmitTuple::new(prefix.clone()));
                }
                if prefix.len() < d {
                    for &v in self.net.sources().iter().rev() {
                        if self.allowed_at(v1, prefix.len() + 1, v) {
                            let mut next = prefix.clone();
                            next.push(v);
                            stack.push(next);
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }
}

impl TupleFilter for CandidateFilter<'_> {
    fn extend(&self, prefix: &[NodeId], next: NodeId) -> bool {
        let v1 = prefix.first().copied().unwrap_or(next);
        self.allowed_at(v1, prefix.len() + 1, next)
    }

    fn accept(&self, tuple: &[NodeId]) -> bool {
        self.contains(tuple)
    }
}

/// Admitted tuples among the candidates whose first element is `first`.
pub fn grid_tuples_from(
    net: &Network,
    filter: &CandidateFilter<'_>,
    first: NodeId,
) -> Result<Vec<(AdmitTuple, Vec<NodeId>)>> {
    admitted_tuples_filtered(net, first, filter)
}

/// Admitting family built only from candidate tuples.
pub fn grid_family(net: &Network, w: &SupplyFunction) -> Result<AHatFamily> {
    let areas = classify_areas(net)?;
    let filter = CandidateFilter::new(net, &areas);
    let mut admitted = Vec::new();
    for &s in net.sources() {
        admitted.extend(grid_tuples_from(net, &filter, s)?);
    }
    AHatFamily::assemble(net, w, admitted, filter.count())
}
