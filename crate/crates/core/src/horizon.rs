//! The family of maximal admitting subsets and the minimum feasible horizon.
//!
//! A subset `A` admits `(v_1, ..., v_p)` when successive shortest paths on
//! `A` produce exactly `p` paths whose origins are `v_1, ..., v_p`. For every
//! admitted tuple there is a unique largest admitting subset; `T*` is the
//! largest required time over these subsets.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::network::{best_origin, Distances, Network, NodeId, SupplyFunction};
use crate::rational::Rational;
use crate::sssp::{min_required_time, successive_shortest_paths, Saturation, SsspResult};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmitTuple {
    pub nodes: Vec<NodeId>,
}

impl AdmitTuple {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        AdmitTuple { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn validate(&self, net: &Network) -> Result<()> {
        if self.nodes.is_empty() || self.nodes.len() > net.sink_in_degree() {
            return Err(Error::InvalidTuple);
        }
        if let Some(&v) = self.nodes.iter().find(|v| !net.is_source(**v)) {
            return Err(Error::NotASource(v));
        }
        Ok(())
    }

    fn member_set(&self) -> Vec<NodeId> {
        let mut set = self.nodes.clone();
        set.sort();
        set.dedup();
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AHatEntry {
    pub tuple: AdmitTuple,
    /// Sorted; empty when nothing admits the tuple.
    pub subset: Vec<NodeId>,
    pub sssp: Option<SsspResult>,
    /// `theta(subset)`; zero for the empty subset.
    pub theta: Rational,
}

/// Deduplicated maximal admitting subsets, first occurrence kept in the
/// order `p` ascending, then tuples lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AHatFamily {
    entries: Vec<AHatEntry>,
    by_tuple: BTreeMap<AdmitTuple, usize>,
    empty: AHatEntry,
    tuples_examined: u128,
}

impl AHatFamily {
    /// Builds the family from admitted tuples and their maximal subsets.
    /// Input order is irrelevant; the result is canonical.
    pub fn assemble(
        net: &Network,
        w: &SupplyFunction,
        mut admitted: Vec<(AdmitTuple, Vec<NodeId>)>,
        tuples_examined: u128,
    ) -> Result<Self> {
        admitted.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        let mut entries: Vec<AHatEntry> = Vec::new();
        let mut by_subset: BTreeMap<Vec<NodeId>, usize> = BTreeMap::new();
        let mut by_tuple = BTreeMap::new();
        for (tuple, subset) in admitted {
            if subset.is_empty() {
                continue;
            }
            let index = match by_subset.get(&subset) {
                Some(&i) => i,
                None => {
                    let sssp = successive_shortest_paths(net, &subset)?;
                    let theta = min_required_time(&sssp, &w.of_set(&subset))?;
                    entries.push(AHatEntry { tuple: tuple.clone(), subset: subset.clone(), sssp: Some(sssp), theta });
                    by_subset.insert(subset, entries.len() - 1);
                    entries.len() - 1
                }
            };
            by_tuple.insert(tuple, index);
        }
        Ok(AHatFamily {
            entries,
            by_tuple,
            empty: AHatEntry {
                tuple: AdmitTuple::new(Vec::new()),
                subset: Vec::new(),
                sssp: None,
                theta: Rational::zero(),
            },
            tuples_examined,
        })
    }

    /// Distinct nonempty subsets with their first tuple.
    pub fn entries(&self) -> &[AHatEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for any tuple; tuples nothing admits map to an empty entry.
    pub fn lookup(&self, tuple: &AdmitTuple) -> &AHatEntry {
        match self.by_tuple.get(tuple) {
            Some(&i) => &self.entries[i],
            None => &self.empty,
        }
    }

    /// Admitted tuples in canonical order with the subset they map to.
    pub fn admitted_tuples(&self) -> impl Iterator<Item = (&AdmitTuple, &[NodeId])> {
        let mut list: Vec<_> = self.by_tuple.iter().collect();
        list.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        list.into_iter().map(|(t, &i)| (t, self.entries[i].subset.as_slice()))
    }

    /// Number of tuples decided: `sum_{p=1..d} k^p` for a full enumeration.
    pub fn tuples_examined(&self) -> u128 {
        self.tuples_examined
    }

    pub fn contains(&self, subset: &[NodeId]) -> bool {
        self.entries.iter().any(|e| e.subset == subset)
    }
}

/// `sum_{p=1..d} k^p`, saturating.
pub fn tuple_space_size(k: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..d {
        power = power.saturating_mul(k as u128);
        total = total.saturating_add(power);
    }
    total
}

/// True when successive shortest paths on `{v_1, ..., v_p}` yields exactly
/// the origins `v_1, ..., v_p` in order.
pub fn check_admits(net: &Network, tuple: &AdmitTuple) -> Result<bool> {
    tuple.validate(net)?;
    let r = successive_shortest_paths(net, &tuple.member_set())?;
    Ok(r.origins() == tuple.nodes)
}

fn removed_at(dist: &Distances, v: NodeId, pivot: NodeId) -> bool {
    // only strictly preferred origins are removed; unreachable never is
    dist.reaches(v) && dist.key(v) < dist.key(pivot)
}

/// Largest subset admitting `tuple`: start from all sources, drop at step
/// `i` every source that would be chosen before `v_i`, augment along the
/// tuple's `i`-th path, and finally drop every source still reaching the
/// sink.
pub fn compute_a_hat(net: &Network, w: &SupplyFunction, tuple: &AdmitTuple) -> Result<AHatEntry> {
    let subset = a_hat_subset(net, tuple)?;
    if subset.is_empty() {
        return Ok(AHatEntry { tuple: tuple.clone(), subset, sssp: None, theta: Rational::zero() });
    }
    let sssp = successive_shortest_paths(net, &subset)?;
    let theta = min_required_time(&sssp, &w.of_set(&subset))?;
    Ok(AHatEntry { tuple: tuple.clone(), subset, sssp: Some(sssp), theta })
}

/// Subset part of [`compute_a_hat`].
pub fn a_hat_subset(net: &Network, tuple: &AdmitTuple) -> Result<Vec<NodeId>> {
    if !check_admits(net, tuple)? {
        return Ok(Vec::new());
    }
    let mut keep: Vec<NodeId> = net.sources().to_vec();
    let mut state = Saturation::empty(net);
    for &vi in &tuple.nodes {
        let dist = state.distances()?;
        keep.retain(|v| !removed_at(&dist, *v, vi));
        let path = state.path_from(&dist, vi)?;
        state.push(&path)?;
    }
    let dist = state.distances()?;
    keep.retain(|v| !dist.reaches(*v));
    if tuple.nodes.iter().any(|v| !keep.contains(v)) {
        // contradicts the admitting set itself; cannot happen after check_admits
        return Err(Error::Internal(alloc::format!("origin removed from the subset of {:?}", tuple.nodes)));
    }
    Ok(keep)
}

/// Runs [`compute_a_hat`] on every tuple of `(S+)^p` for `p = 1..d`.
/// Exponential in `d`; meant for cross-checking.
pub fn enumerate_a_hat_exhaustive(net: &Network, w: &SupplyFunction) -> Result<AHatFamily> {
    let k = net.source_count();
    let d = net.sink_in_degree();
    let mut admitted = Vec::new();
    let sources = net.sources();
    for p in 1..=d {
        let mut idx = vec![0usize; p];
        if k == 0 {
            break;
        }
        loop {
            let tuple = AdmitTuple::new(idx.iter().map(|&i| sources[i]).collect());
            let subset = a_hat_subset(net, &tuple)?;
            if !subset.is_empty() {
                admitted.push((tuple, subset));
            }
            let mut pos = p;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < k {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    AHatFamily::assemble(net, w, admitted, tuple_space_size(k, d))
}

/// Restricts which tuples the pruned search considers.
pub trait TupleFilter: Sync {
    /// May `prefix` be extended by `next`? Must be prefix-closed: a
    /// rejected extension is never part of an accepted tuple.
    fn extend(&self, prefix: &[NodeId], next: NodeId) -> bool;
    /// May the complete tuple be reported?
    fn accept(&self, tuple: &[NodeId]) -> bool;
}

/// Accepts every tuple.
pub struct AllTuples;

impl TupleFilter for AllTuples {
    fn extend(&self, _: &[NodeId], _: NodeId) -> bool {
        true
    }

    fn accept(&self, _: &[NodeId]) -> bool {
        true
    }
}

/// Tuples in the depth-first search whose first element is `first`.
///
/// A tuple can only be admitted if every prefix passes the same origin
/// tests, so the search extends a prefix only by sources that would be
/// picked next by successive shortest paths on the prefix members plus
/// themselves, and that earlier steps did not prefer over their origin.
/// Each pruned branch contains no admitted tuple, so the result equals
/// running [`compute_a_hat`] on every tuple.
pub fn admitted_tuples_from(net: &Network, first: NodeId) -> Result<Vec<(AdmitTuple, Vec<NodeId>)>> {
    admitted_tuples_filtered(net, first, &AllTuples)
}

/// [`admitted_tuples_from`] restricted to tuples passing `filter`.
pub fn admitted_tuples_filtered(
    net: &Network,
    first: NodeId,
    filter: &dyn TupleFilter,
) -> Result<Vec<(AdmitTuple, Vec<NodeId>)>> {
    let mut out = Vec::new();
    if !net.is_source(first) {
        return Err(Error::NotASource(first));
    }
    if !filter.extend(&[], first) {
        return Ok(out);
    }
    let state = Saturation::empty(net);
    let dist = state.distances()?;
    let mut search = Search { net, filter, out: &mut out, levels: Vec::new(), prefix: Vec::new() };
    search.extend(state, dist, first)?;
    Ok(out)
}

struct Search<'n, 'o> {
    net: &'n Network,
    filter: &'o dyn TupleFilter,
    out: &'o mut Vec<(AdmitTuple, Vec<NodeId>)>,
    // distances before each augmentation of the current prefix
    levels: Vec<Distances>,
    prefix: Vec<NodeId>,
}

impl<'n> Search<'n, '_> {
    fn extend(&mut self, mut state: Saturation<'n>, dist: Distances, v: NodeId) -> Result<()> {
        let path = state.path_from(&dist, v)?;
        state.push(&path)?;
        self.levels.push(dist);
        self.prefix.push(v);
        let result = self.visit(state);
        self.levels.pop();
        self.prefix.pop();
        result
    }

    fn visit(&mut self, state: Saturation<'n>) -> Result<()> {
        let net = self.net;
        let dist = state.distances()?;
        if self.prefix.iter().all(|v| !dist.reaches(*v)) && self.filter.accept(&self.prefix) {
            let subset: Vec<NodeId> =
                net.sources().iter().copied().filter(|v| !dist.reaches(*v) && self.never_preferred(*v)).collect();
            self.out.push((AdmitTuple::new(self.prefix.clone()), subset));
        }
        if self.prefix.len() == net.sink_in_degree() {
            return Ok(());
        }
        // the next origin must beat every prefix member that still reaches
        let bar = best_origin(&dist, &self.prefix).map(|b| dist.key(b));
        for &v in net.sources() {
            if !dist.reaches(v) {
                continue;
            }
            if let Some(bar) = bar {
                if dist.key(v) > bar {
                    continue;
                }
            }
            if !self.never_preferred(v) || !self.filter.extend(&self.prefix, v) {
                continue;
            }
            self.extend(state.clone(), dist.clone(), v)?;
        }
        Ok(())
    }

    fn never_preferred(&self, v: NodeId) -> bool {
        self.levels.iter().zip(&self.prefix).all(|(dist, &vi)| !removed_at(dist, v, vi))
    }
}

/// All admitted tuples with their maximal subsets, via the pruned search.
pub fn enumerate_a_hat(net: &Network, w: &SupplyFunction) -> Result<AHatFamily> {
    let mut admitted = Vec::new();
    for &s in net.sources() {
        admitted.extend(admitted_tuples_from(net, s)?);
    }
    AHatFamily::assemble(net, w, admitted, tuple_space_size(net.source_count(), net.sink_in_degree()))
}

/// Family restricted to candidate tuples, each decided by [`compute_a_hat`].
pub fn family_from_tuples(net: &Network, w: &SupplyFunction, tuples: &[AdmitTuple]) -> Result<AHatFamily> {
    let mut admitted = Vec::new();
    for t in tuples {
        let subset = a_hat_subset(net, t)?;
        if !subset.is_empty() {
            admitted.push((t.clone(), subset));
        }
    }
    AHatFamily::assemble(net, w, admitted, tuples.len() as u128)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Horizon {
    pub t_star: Rational,
    /// Lexicographically smallest subset attaining `t_star`.
    pub a_star: Vec<NodeId>,
    pub family: AHatFamily,
}

/// Checks supplies and that every source can reach the sink.
pub fn check_instance(net: &Network, w: &SupplyFunction) -> Result<()> {
    net.check_supply(w)?;
    let dist = Saturation::empty(net).distances()?;
    if let Some(&v) = net.sources().iter().find(|v| !dist.reaches(**v)) {
        return Err(Error::UnreachableSupply(v));
    }
    Ok(())
}

/// Picks `T*` and `A*` from a family.
pub fn horizon_from_family(family: AHatFamily) -> Result<Horizon> {
    let mut best: Option<&AHatEntry> = None;
    for e in family.entries() {
        best = match best {
            None => Some(e),
            Some(b) if e.theta > b.theta || (e.theta == b.theta && e.subset < b.subset) => Some(e),
            keep => keep,
        };
    }
    let best = best.ok_or_else(|| Error::Internal("family has no nonempty subset".into()))?;
    let (t_star, a_star) = (best.theta.clone(), best.subset.clone());
    Ok(Horizon { t_star, a_star, family })
}

/// `T* = max { theta(A) : A in A-hat }` and an argmax.
pub fn min_time_horizon(net: &Network, w: &SupplyFunction) -> Result<Horizon> {
    check_instance(net, w)?;
    horizon_from_family(enumerate_a_hat(net, w)?)
}
