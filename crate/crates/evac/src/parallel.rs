//! Thread-parallel drivers. Work is split by the first tuple element; the
//! family is canonicalised afterwards, so results do not depend on `jobs`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::Result;
use evac_core::grid::{classify_areas, grid_tuples_from, CandidateFilter};
use evac_core::horizon::{
    admitted_tuples_from, check_instance, horizon_from_family, tuple_space_size, AHatFamily, AdmitTuple, Horizon,
};
use evac_core::{solve_with_family, Network, NodeId, Solution, SupplyFunction};

pub const JOBS_ENV: &str = "EVAC_JOBS";

/// Explicit value, else `EVAC_JOBS`, else 1.
pub fn job_count(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(JOBS_ENV).ok()?.parse().ok()).unwrap_or(1).max(1)
}

type Admitted = Vec<(AdmitTuple, Vec<NodeId>)>;

fn per_source<F>(net: &Network, jobs: usize, work: F) -> evac_core::Result<Admitted>
where
    F: Fn(NodeId) -> evac_core::Result<Admitted> + Sync,
{
    let sources = net.sources();
    if jobs <= 1 {
        let mut all = Vec::new();
        for &s in sources {
            all.extend(work(s)?);
        }
        return Ok(all);
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<evac_core::Result<Admitted>>>> = sources.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(sources.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= sources.len() {
                    break;
                }
                let r = work(sources[i]);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    let mut all = Vec::new();
    for slot in slots {
        all.extend(slot.into_inner().unwrap().expect("every source processed")?);
    }
    Ok(all)
}

pub fn enumerate(net: &Network, w: &SupplyFunction, jobs: usize) -> Result<AHatFamily> {
    let admitted = per_source(net, jobs, |s| admitted_tuples_from(net, s))?;
    let examined = tuple_space_size(net.source_count(), net.sink_in_degree());
    Ok(AHatFamily::assemble(net, w, admitted, examined)?)
}

/// Family restricted to grid candidate tuples.
pub fn grid_enumerate(net: &Network, w: &SupplyFunction, jobs: usize) -> Result<AHatFamily> {
    let areas = classify_areas(net)?;
    let filter = CandidateFilter::new(net, &areas);
    let admitted = per_source(net, jobs, |s| grid_tuples_from(net, &filter, s))?;
    Ok(AHatFamily::assemble(net, w, admitted, filter.count())?)
}

pub fn family(net: &Network, w: &SupplyFunction, jobs: usize, grid: bool) -> Result<AHatFamily> {
    check_instance(net, w)?;
    if grid {
        grid_enumerate(net, w, jobs)
    } else {
        enumerate(net, w, jobs)
    }
}

pub fn horizon(net: &Network, w: &SupplyFunction, jobs: usize, grid: bool) -> Result<Horizon> {
    Ok(horizon_from_family(family(net, w, jobs, grid)?)?)
}

pub fn solve(net: &Network, w: &SupplyFunction, jobs: usize, grid: bool) -> Result<Solution> {
    Ok(solve_with_family(net, w, family(net, w, jobs, grid)?)?)
}
