#![allow(dead_code)]

use std::path::PathBuf;

use cmmbp::{parse_instance, random_instance, GeneratorConfig, Graph};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> Graph {
    parse_instance(&fixture_text(name)).unwrap()
}

/// The 200-instance sweep: n in {4,6,8,10}, k in {1,2,3}, three densities.
pub fn sweep() -> Vec<Graph> {
    (0..200u64)
        .map(|i| {
            let i = i as usize;
            random_instance(&GeneratorConfig {
                n: [4, 6, 8, 10][i % 4],
                k: 1 + (i / 4) % 3,
                edge_probability: [0.25, 0.5, 0.8][(i / 12) % 3],
                weight_range: (1, 9),
                seed: 1000 + i as u64,
            })
            .unwrap()
        })
        .collect()
}

fn weights(edge: usize, k: usize) -> Vec<f64> {
    (0..k)
        .map(|c| (1 + (edge * 7 + c * 3) % 9) as f64)
        .collect()
}

fn with_weights(n: usize, k: usize, pairs: &[(usize, usize)]) -> Graph {
    Graph::with_dimension(
        n,
        k,
        pairs
            .iter()
            .enumerate()
            .map(|(e, &(i, j))| (i, j, weights(e, k))),
    )
    .unwrap()
}

/// Star on `n` vertices centred at 1.
pub fn star(n: usize, k: usize) -> Graph {
    let pairs: Vec<_> = (2..=n).map(|v| (1, v)).collect();
    with_weights(n, k, &pairs)
}

/// Star centred at 1 plus a matching on consecutive leaves.
pub fn star_with_matching(n: usize, k: usize) -> Graph {
    let mut pairs: Vec<_> = (2..=n).map(|v| (1, v)).collect();
    pairs.extend((2..n).step_by(2).map(|v| (v, v + 1)));
    with_weights(n, k, &pairs)
}

/// Twenty connected instances with no feasible bisection.
pub fn infeasible_instances() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in [4, 6, 8, 10] {
        for k in 1..=3 {
            out.push(star(n, k));
        }
    }
    for n in [6, 8, 10, 12] {
        for k in 1..=2 {
            out.push(star_with_matching(n, k));
        }
    }
    out
}
