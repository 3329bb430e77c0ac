use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InstanceError;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    /// Probability of each edge outside the random spanning tree.
    pub edge_probability: f64,
    pub k: usize,
    /// Inclusive integer weight range.
    pub weight_range: (u32, u32),
    pub seed: u64,
}

impl GeneratorConfig {
    fn validate(&self) -> Result<(), InstanceError> {
        let bad = |msg: &str| Err(InstanceError::BadConfig(msg.to_string()));
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return bad("n must be even and at least 2");
        }
        if !(self.edge_probability > 0.0 && self.edge_probability <= 1.0) {
            return bad("edge probability must lie in (0, 1]");
        }
        if self.k == 0 {
            return bad("weight dimension must be at least 1");
        }
        let (lo, hi) = self.weight_range;
        if lo == 0 || lo > hi {
            return bad("weight range needs 1 <= lo <= hi");
        }
        Ok(())
    }
}

/// A connected random graph: a uniformly attached random spanning tree plus
/// every other vertex pair independently with `edge_probability`.
pub fn random_instance(cfg: &GeneratorConfig) -> Result<Graph, InstanceError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut pairs = BTreeSet::new();
    for idx in 1..n {
        let parent = order[rng.gen_range(0..idx)];
        let v = order[idx];
        pairs.insert((parent.min(v), parent.max(v)));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if !pairs.contains(&(i, j)) && rng.gen::<f64>() < cfg.edge_probability {
                pairs.insert((i, j));
            }
        }
    }
    let (lo, hi) = cfg.weight_range;
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(i, j)| {
            let w = (0..cfg.k).map(|_| rng.gen_range(lo..=hi) as f64).collect();
            (i, j, w)
        })
        .collect();
    Graph::with_dimension(n, cfg.k, edges).map_err(|e| InstanceError::BadConfig(e.to_string()))
}
