#![allow(dead_code)]

use evac_core::rational::int;
use evac_core::{Network, SupplyFunction};
use proptest::prelude::*;

/// Raw instance data; `parents[v]` links node `v` toward the sink at `n - 1`.
#[derive(Debug, Clone)]
pub struct Raw {
    pub n: usize,
    pub parents: Vec<(usize, i64)>,
    pub extra: Vec<(usize, usize, i64)>,
    pub sources: Vec<usize>,
    pub supply: Vec<i64>,
    pub capacity: i64,
}

impl Raw {
    pub fn build(&self) -> Option<(Network, SupplyFunction)> {
        let sink = self.n - 1;
        let mut edges: Vec<(u32, u32, _)> = Vec::new();
        for (v, &(p, tau)) in self.parents.iter().enumerate() {
            edges.push((v as u32, p as u32, int(tau)));
        }
        let mut into_sink = edges.iter().filter(|e| e.1 as usize == sink).count();
        for &(a, b, tau) in &self.extra {
            if a == b || a == sink {
                continue;
            }
            if b == sink {
                if into_sink >= 3 {
                    continue;
                }
                into_sink += 1;
            }
            edges.push((a as u32, b as u32, int(tau)));
        }
        if into_sink > 3 {
            return None;
        }
        let mut sources: Vec<u32> = self.sources.iter().map(|s| *s as u32).collect();
        sources.sort();
        sources.dedup();
        let mut w = vec![int(0); self.n];
        let mut total = 0;
        for (s, amount) in sources.iter().zip(&self.supply) {
            w[*s as usize] = int(*amount);
            total += amount;
        }
        w[sink] = int(-total);
        let net = Network::new(self.n, edges, int(self.capacity), sources, sink as u32).ok()?;
        Some((net, SupplyFunction::new(w)))
    }
}

/// Small connected instances: at most `max_n` nodes, sink in-degree at most 3.
pub fn instance(max_n: usize, max_k: usize) -> impl Strategy<Value = Raw> {
    (3..=max_n).prop_flat_map(move |n| {
        let parents = (0..n - 1).map(|v| (v + 1..n, 1..=4i64)).collect::<Vec<_>>();
        (
            Just(n),
            parents,
            prop::collection::vec((0..n, 0..n, 1..=4i64), 0..=n),
            prop::collection::vec(0..n - 1, 1..=max_k.min(n - 1)),
            prop::collection::vec(1..=5i64, max_k),
            1..=2i64,
        )
            .prop_map(|(n, parents, extra, sources, supply, capacity)| Raw {
                n,
                parents,
                extra,
                sources,
                supply,
                capacity,
            })
    })
}
