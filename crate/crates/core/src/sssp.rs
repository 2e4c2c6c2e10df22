//! Successive shortest paths toward the sink and the closed forms for the
//! maximum outflow `o^T(A)` and the required time `theta(A)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::network::{
    best_origin, distances_to, trace_path, Distances, Network, NodeId, Path, ResidualView, StaticFlow,
};
use crate::rational::Rational;
use crate::Result;

/// Flow state of a run of successive shortest paths. Every augmentation
/// pushes exactly `u`, so each edge is either empty or saturated.
#[derive(Debug, Clone)]
pub(crate) struct Saturation<'a> {
    net: &'a Network,
    saturated: Vec<bool>,
    into_sink: usize,
}

impl<'a> Saturation<'a> {
    pub fn empty(net: &'a Network) -> Self {
        Saturation { net, saturated: vec![false; net.edge_count()], into_sink: 0 }
    }

    pub fn residual(&self) -> ResidualView<'a> {
        ResidualView::from_saturation(self.net, &self.saturated)
    }

    pub fn distances(&self) -> Result<Distances> {
        distances_to(&self.residual(), self.net.sink())
    }

    pub fn path_from(&self, dist: &Distances, origin: NodeId) -> Result<Path> {
        trace_path(&self.residual(), dist, origin)
            .ok_or_else(|| Error::Internal(format!("no tight path from node {origin}")))
    }

    pub fn push(&mut self, path: &Path) -> Result<()> {
        let mut at = path.origin;
        for (i, arc) in path.arcs.iter().enumerate() {
            if self.net.arc_tail(*arc) != at {
                return Err(Error::BrokenPath(i));
            }
            at = self.net.arc_head(*arc);
            let slot = &mut self.saturated[arc.edge.index()];
            if arc.forward == *slot {
                return Err(if arc.forward {
                    Error::CapacityExceeded(arc.edge)
                } else {
                    Error::NegativeFlow(arc.edge)
                });
            }
            *slot = arc.forward;
        }
        self.into_sink += 1;
        if self.into_sink > self.net.sink_in_degree() {
            return Err(Error::TooManyPaths { found: self.into_sink, degree: self.net.sink_in_degree() });
        }
        Ok(())
    }

    pub fn flow(&self) -> StaticFlow {
        let u = self.net.capacity();
        StaticFlow::from_amounts(self.saturated.iter().map(|s| if *s { u.clone() } else { Rational::zero() }).collect())
    }
}

/// Output of successive shortest paths on a source subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsspResult {
    /// Sorted source subset `A`.
    pub subset: Vec<NodeId>,
    /// `P_1, ..., P_p` in augmentation order; costs are non-decreasing.
    pub paths: Vec<Path>,
    pub final_flow: StaticFlow,
    /// `sum_{i <= h} |P_i|` for `h = 1..p`.
    pub prefix_costs: Vec<Rational>,
    pub capacity: Rational,
}

impl SsspResult {
    /// Number of augmenting paths `p`.
    pub fn p(&self) -> usize {
        self.paths.len()
    }

    pub fn origins(&self) -> Vec<NodeId> {
        self.paths.iter().map(|p| p.origin).collect()
    }

    pub fn costs(&self) -> Vec<Rational> {
        self.paths.iter().map(|p| p.cost.clone()).collect()
    }
}

/// Augments `u` units along tie-broken shortest paths from `set` to the sink
/// until the sink is unreachable from every node of `set`.
pub fn successive_shortest_paths(net: &Network, set: &[NodeId]) -> Result<SsspResult> {
    let subset = net.source_subset(set)?;
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut state = Saturation::empty(net);
    let mut paths: Vec<Path> = Vec::new();
    loop {
        let dist = state.distances()?;
        let origin = match best_origin(&dist, &subset) {
            Some(o) => o,
            None => break,
        };
        let path = state.path_from(&dist, origin)?;
        state.push(&path)?;
        paths.push(path);
    }
    let mut prefix_costs = Vec::with_capacity(paths.len());
    let mut acc = Rational::zero();
    for p in &paths {
        acc += &p.cost;
        prefix_costs.push(acc.clone());
    }
    Ok(SsspResult { subset, final_flow: state.flow(), paths, prefix_costs, capacity: net.capacity().clone() })
}

/// `o^T(A) = max(0, max_h sum_{i <= h} (T - |P_i|) u)`.
pub fn max_outflow(result: &SsspResult, horizon: &Rational) -> Rational {
    let mut best = Rational::zero();
    for (h, prefix) in result.prefix_costs.iter().enumerate() {
        let h = Rational::from_integer(BigInt::from(h + 1));
        let value = (h * horizon - prefix) * &result.capacity;
        if value > best {
            best = value;
        }
    }
    best
}

/// `theta(A) = min_h (sum_{i <= h} |P_i|) / h + w(A) / (h u)`, the earliest
/// time at which `o^T(A)` reaches `supply`. Zero supply needs zero time.
pub fn min_required_time(result: &SsspResult, supply: &Rational) -> Result<Rational> {
    if supply.is_negative() {
        return Err(Error::Internal(format!("negative subset supply {supply}")));
    }
    if supply.is_zero() {
        return Ok(Rational::zero());
    }
    if result.paths.is_empty() {
        let v = result.subset.first().copied().unwrap_or(NodeId(0));
        return Err(Error::UnreachableSupply(v));
    }
    let mut theta: Option<Rational> = None;
    for (h, prefix) in result.prefix_costs.iter().enumerate() {
        let h = Rational::from_integer(BigInt::from(h + 1));
        let t = (prefix + supply / &result.capacity) / h;
        if theta.as_ref().is_none_or(|best| t < *best) {
            theta = Some(t);
        }
    }
    let theta = theta.unwrap_or_default();
    if max_outflow(result, &theta) != *supply {
        return Err(Error::Internal(format!("o at theta = {theta} misses the supply {supply}")));
    }
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::tests::two_sources;
    use crate::rational::{int, ratio};

    #[test]
    fn two_sources_single_sources() {
        let (net, _) = two_sources();
        let r2 = successive_shortest_paths(&net, &[NodeId(1)]).unwrap();
        assert_eq!(r2.origins(), vec![NodeId(1)]);
        assert_eq!(r2.costs(), vec![int(1)]);

        let r1 = successive_shortest_paths(&net, &[NodeId(0)]).unwrap();
        assert_eq!(r1.p(), 2);
        assert_eq!(r1.costs(), vec![int(2), int(3)]);
        assert_eq!(r1.paths[0].nodes(&net), vec![NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn two_sources_both_sources() {
        let (net, _) = two_sources();
        let r = successive_shortest_paths(&net, &[NodeId(1), NodeId(0)]).unwrap();
        assert_eq!(r.origins(), vec![NodeId(1), NodeId(0)]);
        assert_eq!(r.costs(), vec![int(1), int(3)]);
        assert_eq!(r.prefix_costs, vec![int(1), int(4)]);
    }

    #[test]
    fn outflow_values() {
        let (net, _) = two_sources();
        let r2 = successive_shortest_paths(&net, &[NodeId(1)]).unwrap();
        let r1 = successive_shortest_paths(&net, &[NodeId(0)]).unwrap();
        assert_eq!(max_outflow(&r2, &ratio(9, 2)), ratio(7, 2));
        assert_eq!(max_outflow(&r1, &ratio(9, 2)), int(4));
        assert_eq!(max_outflow(&r1, &int(0)), int(0));
        // below the second breakpoint only the first path contributes
        assert_eq!(max_outflow(&r1, &ratio(5, 2)), ratio(1, 2));
    }

    #[test]
    fn theta_values() {
        let (net, _) = two_sources();
        let r2 = successive_shortest_paths(&net, &[NodeId(1)]).unwrap();
        let r1 = successive_shortest_paths(&net, &[NodeId(0)]).unwrap();
        let r = successive_shortest_paths(&net, &[NodeId(0), NodeId(1)]).unwrap();
        assert_eq!(min_required_time(&r2, &int(3)).unwrap(), int(4));
        assert_eq!(min_required_time(&r1, &int(2)).unwrap(), ratio(7, 2));
        assert_eq!(min_required_time(&r, &int(5)).unwrap(), ratio(9, 2));
        assert_eq!(min_required_time(&r, &int(0)).unwrap(), int(0));
    }

    #[test]
    fn empty_subset_rejected() {
        let (net, _) = two_sources();
        assert_eq!(successive_shortest_paths(&net, &[]), Err(Error::EmptySubset));
        assert_eq!(successive_shortest_paths(&net, &[NodeId(2)]), Err(Error::NotASource(NodeId(2))));
    }
}
