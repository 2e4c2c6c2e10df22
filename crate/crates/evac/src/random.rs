//! Seeded random instances: connected toward the sink, bounded sink
//! in-degree, integer data.

use evac_core::rational::Rational;
use evac_core::{Network, SupplyFunction};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RandomConfig {
    pub max_nodes: usize,
    pub max_sources: usize,
    pub max_sink_degree: usize,
    pub max_transit: i64,
    pub capacities: Vec<i64>,
    pub max_supply: i64,
    /// Extra edges beyond the spanning in-tree, as a multiple of `n`.
    pub density: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_nodes: 10,
            max_sources: 6,
            max_sink_degree: 3,
            max_transit: 5,
            capacities: vec![1, 2],
            max_supply: 5,
            density: 1.0,
        }
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Instance `seed` of the family described by `cfg`. Every node reaches the
/// sink through a random in-tree; further random edges avoid pushing the
/// sink in-degree past the limit.
pub fn random_instance(cfg: &RandomConfig, seed: u64) -> (Network, SupplyFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=cfg.max_nodes.max(3));
    let sink = rng.gen_range(0..n) as u32;
    let mut others: Vec<u32> = (0..n as u32).filter(|v| *v != sink).collect();
    others.shuffle(&mut rng);

    let mut edges: Vec<(u32, u32, Rational)> = Vec::new();
    let mut sink_degree = 0;
    let transit = |rng: &mut ChaCha8Rng| int(rng.gen_range(1..=cfg.max_transit));
    // in-tree: each node links to the sink or to a node placed before it
    let mut placed: Vec<u32> = vec![sink];
    for &v in &others {
        let open: Vec<u32> =
            placed.iter().copied().filter(|x| *x != sink || sink_degree < cfg.max_sink_degree).collect();
        let target = *open.choose(&mut rng).unwrap();
        if target == sink {
            sink_degree += 1;
        }
        let tau = transit(&mut rng);
        edges.push((v, target, tau));
        placed.push(v);
    }
    let extra = (cfg.density * n as f64).round() as usize;
    for _ in 0..extra {
        let a = rng.gen_range(0..n) as u32;
        let b = rng.gen_range(0..n) as u32;
        if a == b {
            continue;
        }
        if b == sink {
            if sink_degree >= cfg.max_sink_degree {
                continue;
            }
            sink_degree += 1;
        }
        let tau = transit(&mut rng);
        edges.push((a, b, tau));
    }

    let k = rng.gen_range(1..=cfg.max_sources.min(n - 1));
    let mut sources: Vec<u32> = others.choose_multiple(&mut rng, k).copied().collect();
    sources.sort();
    let capacity = int(*cfg.capacities.choose(&mut rng).unwrap());
    let mut supply = vec![int(0); n];
    let mut total = 0;
    for &s in &sources {
        let w = rng.gen_range(1..=cfg.max_supply);
        total += w;
        supply[s as usize] = int(w);
    }
    supply[sink as usize] = int(-total);
    let net = Network::new(n, edges, capacity, sources, sink).expect("generated network is valid");
    (net, SupplyFunction::new(supply))
}
