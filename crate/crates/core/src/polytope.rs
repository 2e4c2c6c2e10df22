//! Base-polytope geometry of the outflow function at `T*`: greedy vertices,
//! the facet walk that writes `w` as a convex combination of vertices, and
//! the lexicographically maximal flows realising those vertices.
//!
//! The ground set is `U = S+ ∪ {s-}` with `g(A) = o(A)` for source subsets
//! and `g(A) = 0` whenever `A` contains the sink. The walk works with the
//! description `x(U) = 0`, `x(A) <= o(A)` for `A` in the admitting family
//! and `x(v) >= 0` for sources, which cuts out the same polytope.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::horizon::AHatFamily;
use crate::maxflow::INF;
use crate::network::{Network, NodeId, SupplyFunction};
use crate::oracle::{build_time_expanded, default_step, Expanded, TimeExpandedFlow};
use crate::rational::Rational;
use crate::sssp::{max_outflow, successive_shortest_paths};
use crate::Result;

/// A point of `R^U`, stored per node id (non-terminals stay zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundVector {
    pub values: BTreeMap<NodeId, Rational>,
}

impl GroundVector {
    pub fn zero(net: &Network) -> Self {
        let mut values = BTreeMap::new();
        for &v in net.sources() {
            values.insert(v, Rational::zero());
        }
        values.insert(net.sink(), Rational::zero());
        GroundVector { values }
    }

    /// Restriction of a supply function to `U`.
    pub fn from_supply(net: &Network, w: &SupplyFunction) -> Self {
        let mut x = GroundVector::zero(net);
        for (v, val) in x.values.iter_mut() {
            *val = w.get(*v).clone();
        }
        x
    }

    pub fn get(&self, v: NodeId) -> Rational {
        self.values.get(&v).cloned().unwrap_or_default()
    }

    /// `x(A)`.
    pub fn of_set(&self, set: &[NodeId]) -> Rational {
        set.iter().fold(Rational::zero(), |acc, v| acc + self.get(*v))
    }

    fn combine(&self, a: &Rational, other: &GroundVector, b: &Rational) -> GroundVector {
        let values = self.values.iter().map(|(v, x)| (*v, a * x + b * other.get(*v))).collect();
        GroundVector { values }
    }
}

/// A permutation of `U`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TotalOrder {
    pub sequence: Vec<NodeId>,
}

impl TotalOrder {
    pub fn label(&self, net: &Network) -> String {
        let parts: Vec<String> = self.sequence.iter().map(|v| net.label(*v)).collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeVertex {
    pub order: TotalOrder,
    pub point: GroundVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub order: TotalOrder,
    /// Tight chain the order was built from; every member is a prefix of
    /// `order`.
    pub chain: Vec<Vec<NodeId>>,
    pub vertex: GroundVector,
    pub lambda: Rational,
}

/// One iteration of the facet walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    /// Current point `x'_i`.
    pub point: GroundVector,
    pub alpha: Rational,
    /// Ray parameter of the first hyperplane hit; `None` when the vertex
    /// already equals the point.
    pub s: Option<Rational>,
    pub beta: Rational,
    pub gamma: Rational,
    /// Set whose hyperplane was hit.
    pub hit: Option<Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexDecomposition {
    pub terms: Vec<DecompositionTerm>,
    /// Final chain of tight sets, strictly nested, excluding `U` itself.
    pub chain: Vec<Vec<NodeId>>,
    pub trace: Vec<WalkStep>,
}

impl ConvexDecomposition {
    pub fn lambda_sum(&self) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, t| acc + &t.lambda)
    }

    /// `sum_i lambda_i b_i`.
    pub fn combination(&self, net: &Network) -> GroundVector {
        let mut x = GroundVector::zero(net);
        for t in &self.terms {
            x = x.combine(&Rational::one(), &t.vertex, &t.lambda);
        }
        x
    }
}

/// Memoised `g` on subsets of `U` at a fixed horizon.
pub struct Outflow<'a> {
    net: &'a Network,
    horizon: Rational,
    cache: BTreeMap<Vec<NodeId>, Rational>,
}

impl<'a> Outflow<'a> {
    pub fn new(net: &'a Network, horizon: Rational) -> Self {
        Outflow { net, horizon, cache: BTreeMap::new() }
    }

    /// `g(A)` for a sorted subset of `U`.
    pub fn g(&mut self, set: &[NodeId]) -> Result<Rational> {
        if set.is_empty() || set.contains(&self.net.sink()) {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.cache.get(set) {
            return Ok(v.clone());
        }
        let r = successive_shortest_paths(self.net, set)?;
        let v = max_outflow(&r, &self.horizon);
        self.cache.insert(set.to_vec(), v.clone());
        Ok(v)
    }
}

fn sorted(mut set: Vec<NodeId>) -> Vec<NodeId> {
    set.sort();
    set.dedup();
    set
}

fn ground_set(net: &Network) -> Vec<NodeId> {
    let mut u: Vec<NodeId> = net.sources().to_vec();
    u.push(net.sink());
    sorted(u)
}

fn check_order(net: &Network, order: &TotalOrder) -> Result<()> {
    if sorted(order.sequence.clone()) != ground_set(net) || order.sequence.len() != net.source_count() + 1 {
        return Err(Error::Internal(format!("{:?} is not a permutation of the terminals", order.sequence)));
    }
    Ok(())
}

fn vertex_with(g: &mut Outflow<'_>, order: &TotalOrder) -> Result<GroundVector> {
    let net = g.net;
    check_order(net, order)?;
    let mut point = GroundVector::zero(net);
    let mut prefix: Vec<NodeId> = Vec::new();
    let mut prev = Rational::zero();
    for &v in &order.sequence {
        prefix.push(v);
        prefix.sort();
        let cur = g.g(&prefix)?;
        point.values.insert(v, &cur - &prev);
        prev = cur;
    }
    Ok(point)
}

/// Greedy vertex: `b(u_l) = g(prefix_l) - g(prefix_{l-1})`.
pub fn vertex_from_order(net: &Network, horizon: &Rational, order: &TotalOrder) -> Result<PolytopeVertex> {
    let mut g = Outflow::new(net, horizon.clone());
    Ok(PolytopeVertex { order: order.clone(), point: vertex_with(&mut g, order)? })
}

/// Order listing each chain gap in turn: ascending node id inside a gap,
/// the sink last within its gap.
fn order_from_chain(net: &Network, chain: &[Vec<NodeId>]) -> TotalOrder {
    let sink = net.sink();
    let mut seen: Vec<NodeId> = Vec::new();
    let mut sequence = Vec::new();
    let u = ground_set(net);
    for level in chain.iter().chain(core::iter::once(&u)) {
        let mut gap: Vec<NodeId> = level.iter().copied().filter(|v| !seen.contains(v)).collect();
        gap.sort_by_key(|v| (*v == sink, *v));
        seen.extend(gap.iter().copied());
        sequence.extend(gap);
    }
    TotalOrder { sequence }
}

fn is_subset(a: &[NodeId], b: &[NodeId]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

fn union(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    sorted(a.iter().chain(b.iter()).copied().collect())
}

fn intersection(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

/// Where `set` slots into the chain, if it is comparable with every member
/// and not already present.
fn nesting_position(chain: &[Vec<NodeId>], set: &[NodeId]) -> Option<usize> {
    let mut pos = 0;
    for (i, c) in chain.iter().enumerate() {
        if c.as_slice() == set {
            return None;
        }
        if is_subset(c, set) {
            pos = i + 1;
        } else if !is_subset(set, c) {
            return None;
        }
    }
    Some(pos)
}

/// Rank of the tight system at `x` (chain sets, `U`, and every other tight
/// constraint); `x` is a vertex iff the rank is `k + 1`.
pub fn is_vertex(net: &Network, family: &AHatFamily, horizon: &Rational, x: &GroundVector) -> Result<bool> {
    let mut g = Outflow::new(net, horizon.clone());
    let u = ground_set(net);
    let mut rows: Vec<Vec<NodeId>> = vec![u.clone()];
    for c in constraint_sets(net, family) {
        if x.of_set(&c) == g.g(&c)? {
            rows.push(c);
        }
    }
    Ok(rank(&u, &rows) == u.len())
}

fn rank(ground: &[NodeId], rows: &[Vec<NodeId>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            ground.iter().map(|v| if r.binary_search(v).is_ok() { Rational::one() } else { Rational::zero() }).collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..ground.len() {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[rank][col];
                let pivot_row = m[rank].clone();
                for (cell, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *cell -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Inequalities of the description used by the walk: `x(A) <= o(A)` for
/// nonempty family sets and `x(U - v) <= 0` for each source `v`.
pub fn constraint_sets(net: &Network, family: &AHatFamily) -> Vec<Vec<NodeId>> {
    let u = ground_set(net);
    let mut out: Vec<Vec<NodeId>> = family.entries().iter().map(|e| e.subset.clone()).collect();
    for &v in net.sources() {
        out.push(u.iter().copied().filter(|x| *x != v).collect());
    }
    out
}

/// Writes the supply vector as a convex combination of greedy vertices by
/// repeatedly shooting a ray from the current vertex through the current
/// point and moving to the first hyperplane it hits.
pub fn decompose_supply(
    net: &Network,
    w: &SupplyFunction,
    t_star: &Rational,
    a_star: &[NodeId],
    family: &AHatFamily,
) -> Result<ConvexDecomposition> {
    let mut g = Outflow::new(net, t_star.clone());
    let a_star = sorted(a_star.to_vec());
    let mut x = GroundVector::from_supply(net, w);
    if x.of_set(&a_star) != g.g(&a_star)? {
        return Err(Error::Internal("the maximising subset is not tight at the supply".into()));
    }
    let constraints = constraint_sets(net, family);
    let mut chain: Vec<Vec<NodeId>> = vec![a_star];
    let mut alpha = Rational::one();
    let mut terms = Vec::new();
    let mut trace = Vec::new();
    // each pass adds a set outside the span of the chain, so this bounds it
    for _ in 0..=net.source_count() + 1 {
        let order = order_from_chain(net, &chain);
        let b = vertex_with(&mut g, &order)?;
        if b == x {
            trace.push(WalkStep {
                point: x.clone(),
                alpha: alpha.clone(),
                s: None,
                beta: Rational::zero(),
                gamma: Rational::zero(),
                hit: None,
            });
            terms.push(DecompositionTerm { order, chain: chain.clone(), vertex: b, lambda: alpha });
            return Ok(ConvexDecomposition { terms, chain, trace });
        }
        // first hyperplane along b + s (x - b), s >= 1
        let mut best: Option<(Rational, bool, usize, &Vec<NodeId>)> = None;
        for c in &constraints {
            let dc = x.of_set(c) - b.of_set(c);
            if !dc.is_positive() {
                continue;
            }
            let s = (g.g(c)? - b.of_set(c)) / dc;
            let key = (s, nesting_position(&chain, c).is_none(), c.len(), c);
            let better = match &best {
                None => true,
                Some(cur) => (&key.0, key.1, key.2, key.3) < (&cur.0, cur.1, cur.2, cur.3),
            };
            if better {
                best = Some(key);
            }
        }
        let (s, _, _, hit) = best.ok_or(Error::NoForwardIntersection)?;
        if s < Rational::one() {
            return Err(Error::Internal(format!("ray parameter {s} below one")));
        }
        let hit = hit.clone();
        let (beta, gamma) = if s == Rational::one() {
            (Rational::zero(), Rational::one())
        } else {
            let gamma = Rational::one() / &s;
            (Rational::one() - &gamma, gamma)
        };
        trace.push(WalkStep {
            point: x.clone(),
            alpha: alpha.clone(),
            s: Some(s.clone()),
            beta: beta.clone(),
            gamma: gamma.clone(),
            hit: Some(hit.clone()),
        });
        if beta.is_positive() {
            let next = b.combine(&(Rational::one() - &s), &x, &s);
            terms.push(DecompositionTerm { order, chain: chain.clone(), vertex: b, lambda: &alpha * &beta });
            alpha = &alpha * &gamma;
            x = next;
        }
        chain = insert_into_chain(&mut g, &chain, &hit, &x)?;
    }
    Err(Error::Internal("facet walk did not terminate".into()))
}

/// Adds a tight set to the chain, refining through unions and
/// intersections with chain members when it does not nest.
fn insert_into_chain(
    g: &mut Outflow<'_>,
    chain: &[Vec<NodeId>],
    set: &[NodeId],
    x: &GroundVector,
) -> Result<Vec<Vec<NodeId>>> {
    if let Some(pos) = nesting_position(chain, set) {
        let mut out = chain.to_vec();
        out.insert(pos, set.to_vec());
        return Ok(out);
    }
    let u = ground_set(g.net);
    let mut levels: Vec<Vec<NodeId>> = vec![Vec::new()];
    levels.extend(chain.iter().cloned());
    levels.push(u.clone());
    let mut out: Vec<Vec<NodeId>> = Vec::new();
    for j in 0..levels.len() - 1 {
        let mid = union(&levels[j], &intersection(set, &levels[j + 1]));
        for c in [&levels[j], &mid] {
            if !c.is_empty() && *c != u && out.last() != Some(c) {
                out.push(c.clone());
            }
        }
    }
    for c in &out {
        if x.of_set(c) != g.g(c)? {
            return Err(Error::ChainViolation);
        }
    }
    for pair in out.windows(2) {
        if !(is_subset(&pair[0], &pair[1]) && pair[0].len() < pair[1].len()) {
            return Err(Error::ChainViolation);
        }
    }
    Ok(out)
}

/// Lexicographically maximal flow for `order` on the time-expanded network
/// with the default step: each source before the sink, in order, maximises
/// its own outflow while earlier sources keep theirs.
pub fn lexmax_flow(net: &Network, order: &TotalOrder, horizon: &Rational) -> Result<TimeExpandedFlow> {
    lexmax_flow_on(net, order, horizon, &default_step(net, horizon))
}

pub fn lexmax_flow_on(
    net: &Network,
    order: &TotalOrder,
    horizon: &Rational,
    step: &Rational,
) -> Result<TimeExpandedFlow> {
    check_order(net, order)?;
    let te = build_time_expanded(net, horizon, step)?;
    let mut x = Expanded::new(net, te, &[])?;
    x.open_all_sink_intervals();
    for &v in &order.sequence {
        if v == net.sink() {
            break;
        }
        let src = x.graph.add_node();
        x.graph.add_edge(src, x.te.copy(v, 0), INF);
        x.graph.run(src, x.super_sink);
    }
    Ok(x.extract())
}

/// `sum_i lambda_i f_i` over a common grid.
pub fn assemble_quickest_flow(
    decomposition: &ConvexDecomposition,
    flows: &[TimeExpandedFlow],
) -> Result<TimeExpandedFlow> {
    if flows.len() != decomposition.terms.len() || flows.is_empty() {
        return Err(Error::GridMismatch);
    }
    let mut total = TimeExpandedFlow::zero(flows[0].step.clone(), flows[0].horizon.clone());
    for (t, f) in decomposition.terms.iter().zip(flows) {
        total.add(&f.scaled(&t.lambda))?;
    }
    Ok(total)
}

impl fmt::Display for GroundVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.values().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horizon::min_time_horizon;
    use crate::network::tests::two_sources;
    use crate::oracle::verify_dynamic_flow;
    use crate::rational::{int, ratio};

    fn order(ids: &[u32]) -> TotalOrder {
        TotalOrder { sequence: ids.iter().map(|&v| NodeId(v)).collect() }
    }

    fn point(values: &[Rational]) -> Vec<Rational> {
        values.to_vec()
    }

    #[test]
    fn two_sources_vertices() {
        let (net, _) = two_sources();
        let t = ratio(9, 2);
        let a = vertex_from_order(&net, &t, &order(&[0, 1, 2])).unwrap();
        assert_eq!(a.point.values.values().cloned().collect::<Vec<_>>(), point(&[int(4), int(1), int(-5)]));
        let b = vertex_from_order(&net, &t, &order(&[1, 0, 2])).unwrap();
        assert_eq!(b.point.values.values().cloned().collect::<Vec<_>>(), point(&[ratio(3, 2), ratio(7, 2), int(-5)]));
    }

    #[test]
    fn two_sources_decomposition() {
        let (net, w) = two_sources();
        let h = min_time_horizon(&net, &w).unwrap();
        let dec = decompose_supply(&net, &w, &h.t_star, &h.a_star, &h.family).unwrap();
        assert_eq!(dec.terms.len(), 2);
        assert_eq!(dec.terms[0].order, order(&[0, 1, 2]));
        assert_eq!(dec.terms[0].lambda, ratio(1, 5));
        assert_eq!(dec.terms[1].order, order(&[1, 0, 2]));
        assert_eq!(dec.terms[1].lambda, ratio(4, 5));
        assert_eq!(dec.chain, vec![vec![NodeId(1)], vec![NodeId(0), NodeId(1)]]);
        assert_eq!(dec.combination(&net), GroundVector::from_supply(&net, &w));
    }

    #[test]
    fn vertex_supply_gives_one_term() {
        let (net, _) = two_sources();
        let w = SupplyFunction::new(vec![int(4), int(1), int(-5)]);
        let h = min_time_horizon(&net, &w).unwrap();
        assert_eq!(h.t_star, ratio(9, 2));
        let dec = decompose_supply(&net, &w, &h.t_star, &h.a_star, &h.family).unwrap();
        assert_eq!(dec.terms.len(), 1);
        assert_eq!(dec.terms[0].lambda, int(1));
        assert!(is_vertex(&net, &h.family, &h.t_star, &GroundVector::from_supply(&net, &w)).unwrap());
    }

    #[test]
    fn two_sources_lexmax_totals_and_assembly() {
        let (net, w) = two_sources();
        let t = ratio(9, 2);
        let f1 = lexmax_flow(&net, &order(&[0, 1, 2]), &t).unwrap();
        assert_eq!(f1.step, ratio(1, 2));
        assert_eq!(f1.net_outflow(&net, NodeId(0)), int(4));
        assert_eq!(f1.net_outflow(&net, NodeId(1)), int(1));
        let f2 = lexmax_flow(&net, &order(&[1, 0, 2]), &t).unwrap();
        assert_eq!(f2.net_outflow(&net, NodeId(1)), ratio(7, 2));
        assert_eq!(f2.net_outflow(&net, NodeId(0)), ratio(3, 2));

        let h = min_time_horizon(&net, &w).unwrap();
        let dec = decompose_supply(&net, &w, &h.t_star, &h.a_star, &h.family).unwrap();
        let all = assemble_quickest_flow(&dec, &[f1, f2]).unwrap();
        assert!(verify_dynamic_flow(&net, &all, &w, &t).passed());
    }

    #[test]
    fn zero_horizon_gives_zero_flow() {
        let (net, _) = two_sources();
        let f = lexmax_flow(&net, &order(&[0, 1, 2]), &int(0)).unwrap();
        assert!(f.amounts.is_empty());
    }

    #[test]
    fn grid_mismatch() {
        let (net, w) = two_sources();
        let h = min_time_horizon(&net, &w).unwrap();
        let dec = decompose_supply(&net, &w, &h.t_star, &h.a_star, &h.family).unwrap();
        let a = TimeExpandedFlow::zero(ratio(1, 2), ratio(9, 2));
        let b = TimeExpandedFlow::zero(ratio(1, 4), ratio(9, 2));
        assert_eq!(assemble_quickest_flow(&dec, &[a, b]), Err(Error::GridMismatch));
    }
}
